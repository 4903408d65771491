from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from weylot.errors import (NotLatticePoint, OrbitCapExceeded, UnsupportedType)
from weylot import linalg as la
from weylot.rootsystems import (build_from_label, build_root_system,
                                dual_system, parse_type_label, product,
                                weight_to_coords)

CLASSICAL = {
    ("A", 1): (2, 2), ("A", 2): (6, 6), ("A", 3): (12, 24),
    ("A", 4): (20, 120),
    ("B", 2): (8, 8), ("B", 3): (18, 48), ("B", 4): (32, 384),
    ("C", 3): (18, 48), ("C", 4): (32, 384),
    ("D", 4): (24, 192), ("D", 5): (40, 1920),
    ("G", 2): (12, 12), ("F", 4): (48, 1152),
}


class TestConstruction:
    @pytest.mark.parametrize("family,rank", sorted(CLASSICAL))
    def test_counts_by_generation(self, family, rank):
        nroots, order = CLASSICAL[(family, rank)]
        r = build_root_system(family, rank)
        assert len(r.roots) == nroots
        assert len(r.weyl_group()) == order

    def test_e6_root_count(self):
        assert len(build_root_system("E", 6).roots) == 72

    def test_e6_group_order_by_generation(self):
        # the largest supported group; takes about half a minute
        assert len(build_root_system("E", 6).weyl_group()) == 51840

    def test_cartan_a2(self):
        assert build_root_system("A", 2).cartan_matrix == ((2, -1), (-1, 2))

    def test_cartan_matches_bracket_formula(self):
        for label in ("A3", "B3", "C3", "G2", "F4"):
            r = build_from_label(label)
            s = r.simple_roots
            sv = r.simple_coroots
            for i in range(r.rank):
                for j in range(r.rank):
                    assert r.cartan_matrix[i][j] == la.vdot(s[j], sv[i])

    def test_roots_one_sided_in_simple_basis(self):
        for label in ("A2", "B3", "G2", "D4"):
            r = build_from_label(label)
            for alpha in r.roots:
                assert all(x >= 0 for x in alpha) or all(x <= 0 for x in alpha)

    def test_unsupported(self):
        with pytest.raises(UnsupportedType):
            build_root_system("C", 2)
        with pytest.raises(UnsupportedType):
            build_root_system("E", 7)
        with pytest.raises(UnsupportedType):
            build_root_system("H", 3)


class TestReflections:
    @given(st.tuples(st.integers(-9, 9), st.integers(-9, 9)))
    def test_involution_b2(self, x):
        r = build_root_system("B", 2)
        for i in range(len(r.roots)):
            assert r.reflect(i, r.reflect(i, x)) == x

    @given(st.tuples(st.integers(-9, 9), st.integers(-9, 9)),
           st.tuples(st.integers(-9, 9), st.integers(-9, 9)))
    @settings(max_examples=40)
    def test_bracket_duality(self, m, n):
        r = build_root_system("G", 2)
        for i in range(len(r.roots)):
            left = la.vdot(r.reflect(i, m, "M"), n)
            right = la.vdot(m, r.reflect(i, n, "N"))
            assert left == right

    def test_root_to_minus_root(self):
        a1 = build_root_system("A", 1)
        assert a1.reflect(a1.simple_indices[0], a1.roots[a1.simple_indices[0]]) \
            == tuple(-x for x in a1.roots[a1.simple_indices[0]])

    def test_fixed_hyperplane(self):
        b2 = build_root_system("B", 2)
        i = b2.simple_indices[0]
        x = (1, 2)  # <x, alpha_1^vee> = 2*1 - 2 = 0
        assert la.vdot(x, b2.coroots[i]) == 0
        assert b2.reflect(i, x) == x

    def test_b2_e_coordinate_example(self):
        # e-coords (2,1) = alpha-coords (2,3); reflecting at e1-e2 gives (1,2)
        b2 = build_root_system("B", 2)
        assert b2.reflect(b2.simple_indices[0], (2, 3)) == (1, 3)
        # alpha-coords (1,3) = 1*(e1-e2) + 3*e2 = (1,2) in e-coords


class TestOrbits:
    def test_b2_octagon(self):
        b2 = build_root_system("B", 2)
        orb = b2.orbit((2, 3))
        assert len(orb) == 8
        # translate to e-coordinates via e1 = a1 + a2, e2 = a2
        evecs = {(a, b - a) for a, b in orb}
        assert evecs == {(2, 1), (1, 2), (-1, 2), (-2, 1),
                         (-2, -1), (-1, -2), (1, -2), (2, -1)}

    def test_weight_lattice_orbit(self):
        a2w = build_root_system("A", 2, "weight")
        orb = a2w.orbit((1, 0))
        assert orb == ((-1, 1), (0, -1), (1, 0))

    def test_zero_orbit(self):
        assert build_root_system("A", 2).orbit((0, 0)) == ((0, 0),)

    def test_orbit_divides_group_order(self):
        b3 = build_root_system("B", 3)
        for m in [(1, 0, 0), (1, 1, 0), (1, 2, 1)]:
            orbit = b3.orbit(m)
            assert 48 % len(orbit) == 0

    def test_orbit_invariant_under_simple_reflections(self):
        g2 = build_root_system("G", 2)
        orb = set(g2.orbit((2, 1)))
        for i in g2.simple_indices:
            assert {g2.reflect(i, v) for v in orb} == orb

    def test_orbit_cap(self, monkeypatch):
        monkeypatch.setenv("WEYLOT_ORBIT_CAP", "3")
        b3 = build_root_system("B", 3)
        with pytest.raises(OrbitCapExceeded):
            b3.orbit((1, 2, 3))


class TestDominance:
    def test_b2_sign_flip(self):
        b2 = build_root_system("B", 2)
        # e-coords (-1,-1) = alpha-coords (-1,-2); dominant form is (1,2)=(1,1)e
        dom, w = b2.dominant_representative((-1, -2))
        assert dom == (1, 2)
        assert w.apply((-1, -2)) == (1, 2)

    def test_dominant_fixed(self):
        a3 = build_root_system("A", 3)
        x = (3, 4, 3)
        dom, w = a3.dominant_representative(x)
        assert dom == x and w.word == ()

    def test_a2_simple_root_to_highest(self):
        a2 = build_root_system("A", 2)
        dom, w = a2.dominant_representative((1, 0))
        assert dom == (1, 1)
        assert w.word == (1,)

    def test_dual_side(self):
        b2 = build_root_system("B", 2)
        n = (-1, 0)
        dom, w = b2.dominant_representative(n, side="N")
        assert b2.is_dominant(dom, "N")
        assert w.apply_dual(n) == dom

    def test_group_element_bracket_compatibility(self):
        g2 = build_root_system("G", 2)
        _, w = g2.dominant_representative((-3, -1))
        m = (2, 5)
        n = (7, -3)
        assert la.vdot(w.apply(m), w.apply_dual(n)) == la.vdot(m, n)


class TestWeylGroup:
    def test_a1(self):
        a1 = build_root_system("A", 1)
        W = a1.weyl_group()
        assert len(W) == 2

    def test_b2_order_8(self):
        assert len(build_root_system("B", 2).weyl_group()) == 8

    def test_a3_order_24(self):
        assert len(build_root_system("A", 3).weyl_group()) == 24

    def test_elements_preserve_roots(self):
        b2 = build_root_system("B", 2)
        roots = set(b2.roots)
        for e in b2.weyl_group():
            assert {la.mat_vec(e.matrix, r) for r in roots} == roots

    def test_dual_matrices_preserve_bracket(self):
        a2 = build_root_system("A", 2)
        for e in a2.weyl_group():
            for m in [(1, 0), (2, -3)]:
                for n in [(0, 1), (-1, 4)]:
                    assert la.vdot(la.mat_vec(e.matrix, m),
                                   la.mat_vec(e.dual_matrix, n)) == \
                        la.vdot(m, n)


class TestProductsAndDuality:
    def test_a1_a1(self):
        p = product(build_root_system("A", 1), build_root_system("A", 1))
        assert len(p.roots) == 4
        assert len(p.weyl_group()) == 4

    def test_a1_a2(self):
        p = build_from_label("A1xA2")
        assert len(p.weyl_group()) == 12

    def test_a1_b2(self):
        p = build_from_label("A1xB2")
        assert len(p.weyl_group()) == 16

    def test_dual_of_b2_is_c2_shape(self):
        b2 = build_root_system("B", 2)
        d = dual_system(b2)
        assert d.label() == "C2"
        lengths = sorted(la.vdot(r, r) for r in d.roots)
        lengths_b = sorted(la.vdot(r, r) for r in b2.coroots)
        assert lengths == lengths_b

    def test_dual_involution(self):
        for label in ("A2", "B2", "G2"):
            r = build_from_label(label)
            dd = dual_system(dual_system(r))
            assert dd.roots == r.roots and dd.coroots == r.coroots

    def test_a_self_dual(self):
        a3 = build_root_system("A", 3)
        d = dual_system(a3)
        assert d.cartan_matrix == a3.cartan_matrix

    def test_parse_labels(self):
        assert parse_type_label("B3") == (("B", 3),)
        assert parse_type_label("A1xA2") == (("A", 1), ("A", 2))
        with pytest.raises(UnsupportedType):
            parse_type_label("X")


class TestParabolic:
    def test_strictly_dominant_gives_positive_chamber(self):
        b2 = build_root_system("B", 2)
        cl = b2.parabolic_chamber_union((2, 3))
        assert cl.L == ()
        assert cl.contains((1, 1))
        assert not cl.contains((-1, 2))

    def test_b2_wall_weight(self):
        b2 = build_root_system("B", 2)
        m = weight_to_coords(b2, (0, 2))
        cl = b2.parabolic_chamber_union(m)
        assert cl.L == (0,)
        # C_L is the union of the two chambers adjacent across wall alpha_1
        assert cl.contains((1, 1))
        i1 = b2.simple_indices[0]
        flipped = b2.reflect(i1, (1, 1), side="N")
        assert cl.contains(flipped)
        i2 = b2.simple_indices[1]
        assert not cl.contains(b2.reflect(i2, (1, 1), side="N"))

    def test_zero_weight_gives_everything(self):
        a2 = build_root_system("A", 2)
        cl = a2.parabolic_chamber_union((0, 0))
        for n in [(5, -3), (-2, -2), (0, 7)]:
            assert cl.contains(n)


class TestWeightCoordinates:
    def test_a2_p2_weight(self):
        a2 = build_root_system("A", 2)
        assert weight_to_coords(a2, (3, 0)) == (2, 1)

    def test_g2_short_weight(self):
        g2 = build_root_system("G", 2)
        assert weight_to_coords(g2, (1, 0)) == (2, 1)

    def test_non_lattice_weight(self):
        a2 = build_root_system("A", 2)
        with pytest.raises(NotLatticePoint):
            weight_to_coords(a2, (1, 0))

    def test_weight_lattice_choice(self):
        a2w = build_root_system("A", 2, "weight")
        assert weight_to_coords(a2w, (1, 0)) == (1, 0)
        for alpha in a2w.roots:
            assert la.is_integer_vector(alpha)
