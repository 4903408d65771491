import random
from fractions import Fraction
from itertools import combinations

import pytest

from weylot.errors import (CombinatorialBudgetExceeded, NotReflexive,
                           UnbalancedMasses)
from weylot import linalg as la
from weylot.measures import WeightedPointCloud, discretize
from weylot.polytope import convex_hull
from weylot.rootsystems import build_root_system, weight_to_coords
from weylot.transport import (TransportPlan, certify, check_chamber_support,
                              check_cyclical_monotonicity,
                              check_reflection_sign, check_stability_support,
                              solve_invariant_ot, solve_ot, symmetrize_plan)
from weylot.weyl import weyl_polytope


def cloud(points, masses, polytope=None, side="M"):
    n = len(points)
    return WeightedPointCloud(tuple(points), tuple(masses), (None,) * n,
                              (None,) * n, polytope, side)


# -- spanning-tree enumeration oracle -----------------------------------------

def spanning_trees(n, m):
    """All spanning trees of the complete bipartite graph K_{n,m}."""
    edges = [(i, j) for i in range(n) for j in range(m)]
    nodes = n + m
    trees = []

    def connected_possible(chosen, rest_start):
        # union-find over chosen plus all remaining edges
        parent = list(range(nodes))

        def find(x):
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        def union(a, b):
            ra, rb = find(a), find(b)
            parent[ra] = rb

        for (i, j) in chosen:
            union(i, n + j)
        for (i, j) in edges[rest_start:]:
            union(i, n + j)
        return len({find(x) for x in range(nodes)}) == 1

    def grow(idx, chosen, parent):
        if len(chosen) == nodes - 1:
            trees.append(tuple(chosen))
            return
        if idx == len(edges):
            return
        if len(chosen) + (len(edges) - idx) < nodes - 1:
            return
        i, j = edges[idx]

        def find(x, par):
            while par[x] != x:
                x = par[x]
            return x

        ra, rb = find(i, parent), find(n + j, parent)
        if ra != rb:
            par2 = list(parent)
            par2[ra] = rb
            grow(idx + 1, chosen + [(i, j)], par2)
        if connected_possible(chosen, idx + 1):
            grow(idx + 1, chosen, parent)

    grow(0, [], list(range(nodes)))
    return trees


def tree_flow(tree, a, b):
    """Exact flows on a spanning tree; None if any flow is negative."""
    n, m = len(a), len(b)
    balance = list(a) + [-x for x in b]
    adj = {}
    for (i, j) in tree:
        adj.setdefault(i, []).append((n + j, (i, j)))
        adj.setdefault(n + j, []).append((i, (i, j)))
    flows = {}
    degree = {node: len(nb) for node, nb in adj.items()}
    leaves = [node for node, dg in degree.items() if dg == 1]
    remaining = set(tree)
    bal = dict(enumerate(balance))
    while remaining:
        leaf = leaves.pop()
        arc = next(e for (nb, e) in adj[leaf] if e in remaining)
        i, j = arc
        other = n + j if leaf == i else i
        flow = bal[leaf] if leaf < n else -bal[leaf]
        flows[arc] = flow
        if flow < 0:
            return None
        bal[other] += bal[leaf]
        bal[leaf] = 0
        remaining.discard(arc)
        degree[other] -= 1
        if degree[other] == 1 and remaining:
            leaves.append(other)
    return flows


def oracle_min_cost(a, b, cost):
    """Minimum cost over all transport-polytope vertices, by enumeration."""
    n, m = len(a), len(b)
    best = None
    count = 0
    for tree in spanning_trees(n, m):
        flows = tree_flow(tree, a, b)
        if flows is None:
            continue
        count += 1
        value = sum(flows[(i, j)] * cost[i][j] for (i, j) in tree)
        if best is None or value < best:
            best = value
    assert count > 0
    return best


class TestSolver:
    def test_segment_matching(self, segment):
        mu = discretize(segment, 0)
        nu = discretize(segment.dual(), 0)
        plan, pots = solve_ot(mu, nu)
        assert plan.triples == ((0, 0, Fraction(1, 2)), (1, 1, Fraction(1, 2)))
        assert plan.cost_value == -1

    def test_square_to_diamond_cost(self, square):
        mu = discretize(square, 0)
        nu = discretize(square.dual(), 0)
        plan, _ = solve_ot(mu, nu)
        assert plan.cost_value == Fraction(-3, 4)
        # every diamond edge centroid receives its two same-quadrant midpoints
        for i, j, mass in plan.triples:
            x, y = mu.points[i], nu.points[j]
            assert all(a * b >= 0 for a, b in zip(x, y))

    def test_unbalanced(self, segment):
        mu = discretize(segment, 0)
        nu = cloud([(1,), (-1,)], [Fraction(1, 3), Fraction(1, 3)])
        with pytest.raises(UnbalancedMasses):
            solve_ot(mu, nu)

    def test_marginals_exact(self, hexagon):
        mu = discretize(hexagon, 1)
        nu = discretize(hexagon.dual(), 0)
        plan, _ = solve_ot(mu, nu)
        row = {}
        col = {}
        for i, j, mass in plan.triples:
            row[i] = row.get(i, Fraction(0)) + mass
            col[j] = col.get(j, Fraction(0)) + mass
        for i, mass in enumerate(mu.masses):
            assert row.get(i, Fraction(0)) == mass
        for j, mass in enumerate(nu.masses):
            assert col.get(j, Fraction(0)) == mass

    def test_zero_duality_gap_and_slackness(self, square):
        mu = discretize(square, 1)
        nu = discretize(square.dual(), 1)
        plan, pots = solve_ot(mu, nu)
        dual_value = sum(Fraction(m) * p for m, p in zip(mu.masses, pots.phi))
        dual_value += sum(Fraction(m) * p for m, p in zip(nu.masses, pots.psi))
        assert dual_value == plan.cost_value
        for i, j, _ in plan.triples:
            c = -Fraction(la.vdot(mu.points[i], nu.points[j]))
            assert pots.phi[i] + pots.psi[j] == c

    def test_potentials_feasible_and_anchored(self, square):
        mu = discretize(square, 0)
        nu = discretize(square.dual(), 0)
        plan, pots = solve_ot(mu, nu)
        for i, x in enumerate(mu.points):
            for j, y in enumerate(nu.points):
                assert pots.phi[i] + pots.psi[j] <= -Fraction(la.vdot(x, y))
        anchor = min(range(len(mu.points)), key=lambda i: mu.points[i])
        assert pots.phi[anchor] == 0

    def test_c_transform_consistency(self, square):
        mu = discretize(square, 0)
        nu = discretize(square.dual(), 0)
        plan, pots = solve_ot(mu, nu)
        for j, y in enumerate(nu.points):
            best = min(-Fraction(la.vdot(x, y)) - pots.phi[i]
                       for i, x in enumerate(mu.points))
            assert pots.psi[j] == best

    def test_against_tree_oracle_small(self):
        rng = random.Random(7)
        for _ in range(12):
            n = rng.randint(2, 4)
            m = rng.randint(2, 4)
            a = [Fraction(rng.randint(1, 9)) for _ in range(n)]
            b = [Fraction(rng.randint(1, 9)) for _ in range(m)]
            scale = sum(a) / sum(b)
            b = [x * scale for x in b]
            pts_a = [(rng.randint(-4, 4), rng.randint(-4, 4)) for _ in range(n)]
            pts_b = [(rng.randint(-4, 4), rng.randint(-4, 4)) for _ in range(m)]
            total = sum(a)
            mu = cloud(pts_a, [x / total for x in a])
            nu = cloud(pts_b, [x / total for x in b])
            plan, _ = solve_ot(mu, nu)
            cost = [[-Fraction(la.vdot(x, y)) for y in pts_b] for x in pts_a]
            expected = oracle_min_cost([x / total for x in a],
                                       [x / total for x in b], cost)
            assert plan.cost_value == expected


class TestSymmetrize:
    def b2_setup(self, k=0):
        b2 = build_root_system("B", 2)
        rec = weyl_polytope(b2, weight_to_coords(b2, (0, 2)))
        W = b2.weyl_group()
        mu = discretize(rec.polytope, k, group=W, side="M", system=b2)
        nu = discretize(rec.polytope.dual(), k, group=W, side="N", system=b2)
        return b2, rec, W, mu, nu

    def test_cost_preserved_and_invariant(self):
        b2, rec, W, mu, nu = self.b2_setup()
        plan, _ = solve_ot(mu, nu)
        sym = symmetrize_plan(plan, W, mu, nu)
        assert sym.cost_value == plan.cost_value
        weighted = {(mu.points[i], nu.points[j]): m
                    for i, j, m in sym.triples}
        for e in W:
            moved = {(tuple(la.mat_vec(e.matrix, x)),
                      tuple(la.mat_vec(e.dual_matrix, y))): m
                     for (x, y), m in weighted.items()}
            assert moved == weighted

    def test_fixed_point(self):
        b2, rec, W, mu, nu = self.b2_setup()
        plan, _ = solve_ot(mu, nu)
        sym = symmetrize_plan(plan, W, mu, nu)
        assert symmetrize_plan(sym, W, mu, nu).triples == sym.triples

    def test_marginals_preserved(self):
        b2, rec, W, mu, nu = self.b2_setup()
        plan, _ = solve_ot(mu, nu)
        sym = symmetrize_plan(plan, W, mu, nu)
        row = {}
        for i, j, m in sym.triples:
            row[i] = row.get(i, Fraction(0)) + m
        for i, mass in enumerate(mu.masses):
            assert row.get(i, Fraction(0)) == mass


class TestQuotientReduction:
    @pytest.mark.parametrize("family,rank,omega,k", [
        ("B", 2, (0, 2), 0), ("B", 2, (0, 2), 1), ("B", 2, (1, 0), 0),
        ("A", 2, (1, 1), 1), ("A", 3, (4, 0, 0), 0), ("B", 3, (0, 0, 2), 0),
    ])
    def test_matches_direct_solver(self, family, rank, omega, k):
        system = build_root_system(family, rank)
        rec = weyl_polytope(system, weight_to_coords(system, omega))
        W = system.weyl_group()
        mu = discretize(rec.polytope, k, group=W, side="M", system=system)
        nu = discretize(rec.polytope.dual(), k, group=W, side="N",
                        system=system)
        direct, _ = solve_ot(mu, nu)
        invariant, pots = solve_invariant_ot(mu, nu, W)
        assert invariant.cost_value == direct.cost_value
        dual_value = sum(Fraction(m) * p for m, p in zip(mu.masses, pots.phi))
        dual_value += sum(Fraction(m) * p for m, p in zip(nu.masses, pots.psi))
        assert dual_value == invariant.cost_value


class TestCyclicalMonotonicity:
    def test_matched_signs_pass(self, segment):
        mu = discretize(segment, 0)
        nu = discretize(segment.dual(), 0)
        plan, _ = solve_ot(mu, nu)
        assert check_cyclical_monotonicity(plan, mu, nu, 2).passed

    def test_swapped_matching_fails(self, segment):
        mu = discretize(segment, 0)
        nu = discretize(segment.dual(), 0)
        bad = TransportPlan(((0, 1, Fraction(1, 2)), (1, 0, Fraction(1, 2))),
                            Fraction(1))
        verdict = check_cyclical_monotonicity(bad, mu, nu, 2)
        assert not verdict.passed
        assert verdict.violations

    def test_square_diamond_k3(self, square):
        mu = discretize(square, 0)
        nu = discretize(square.dual(), 0)
        plan, _ = solve_ot(mu, nu)
        verdict = check_cyclical_monotonicity(plan, mu, nu, 3)
        assert verdict.passed and verdict.max_cycle_length == 3

    def test_budget(self, square):
        mu = discretize(square, 0)
        nu = discretize(square.dual(), 0)
        plan, _ = solve_ot(mu, nu)
        with pytest.raises(CombinatorialBudgetExceeded):
            check_cyclical_monotonicity(plan, mu, nu, 3, budget=10)

    def test_longer_cycles(self, square):
        mu = discretize(square, 0)
        nu = discretize(square.dual(), 0)
        plan, _ = solve_ot(mu, nu)
        assert check_cyclical_monotonicity(plan, mu, nu, 4, budget=None).passed


class FakeSystem:
    """Minimal stand-in with roots and coroots in plain e-coordinates."""

    def __init__(self, pairs):
        self.roots = tuple(p[0] for p in pairs)
        self.coroots = tuple(p[1] for p in pairs)


class TestReflectionSign:
    B2E = FakeSystem([
        ((1, -1), (1, -1)), ((-1, 1), (-1, 1)),
        ((1, 1), (1, 1)), ((-1, -1), (-1, -1)),
        ((1, 0), (2, 0)), ((-1, 0), (-2, 0)),
        ((0, 1), (0, 2)), ((0, -1), (0, -2)),
    ])

    def test_wall_point_passes(self):
        mu = cloud([(1, 1)], [Fraction(1)])
        nu = cloud([(Fraction(1, 2), Fraction(1, 2))], [Fraction(1)])
        plan = TransportPlan(((0, 0, Fraction(1)),), Fraction(-1, 2))
        assert check_reflection_sign(plan, self.B2E, mu, nu).passed

    def test_opposing_signs_fail(self):
        mu = cloud([(1, 1)], [Fraction(1)])
        nu = cloud([(0, -1)], [Fraction(1)])
        plan = TransportPlan(((0, 0, Fraction(1)),), Fraction(1))
        verdict = check_reflection_sign(plan, self.B2E, mu, nu)
        assert not verdict.passed
        assert verdict.offending_mass == 1
        assert verdict.witnesses

    def test_a1_matched(self):
        a1 = build_root_system("A", 1)
        mu = cloud([(-1,), (1,)], [Fraction(1, 2)] * 2)
        nu = cloud([(-1,), (1,)], [Fraction(1, 2)] * 2)
        plan = TransportPlan(((0, 0, Fraction(1, 2)), (1, 1, Fraction(1, 2))),
                             Fraction(-1))
        assert check_reflection_sign(plan, a1, mu, nu).passed


class TestStabilitySupport:
    def test_good_plan_passes(self, square):
        mu = discretize(square, 0)
        nu = discretize(square.dual(), 0)
        plan, _ = solve_ot(mu, nu)
        verdict = check_stability_support(plan, square, mu, nu)
        assert verdict.passed and verdict.offending_mass == 0

    def test_opposite_quadrant_fails(self, square):
        h = Fraction(1, 2)
        mu = cloud([(1, h)], [Fraction(1)])
        nu = cloud([(-h, -h)], [Fraction(1)])
        plan = TransportPlan(((0, 0, Fraction(1)),), Fraction(3, 4))
        verdict = check_stability_support(plan, square, mu, nu)
        assert not verdict.passed
        assert verdict.offending_mass == 1
        assert verdict.witnesses == (((1, h), (-h, -h)),)

    def test_requires_reflexive(self, b2_octagon):
        mu = cloud([(1, 2)], [Fraction(1)])
        nu = cloud([(0, 0)], [Fraction(1)])
        plan = TransportPlan(((0, 0, Fraction(1)),), Fraction(0))
        with pytest.raises(NotReflexive):
            check_stability_support(plan, b2_octagon, mu, nu)


class TestChamberSupport:
    def test_adversarial_fails(self):
        b2 = build_root_system("B", 2)
        rec = weyl_polytope(b2, weight_to_coords(b2, (0, 2)))
        W = b2.weyl_group()
        verts = rec.polytope.vertices
        dual = rec.polytope.dual()
        v = verts[0]
        opposite = tuple(-x for x in v)
        y = next(n for n in dual.vertices if la.vdot(opposite, n) == 1)
        mu = cloud([v], [Fraction(1)])
        nu = cloud([y], [Fraction(1)])
        plan = TransportPlan(((0, 0, Fraction(1)),), Fraction(0))
        verdict = check_chamber_support(plan, rec, W, mu, nu)
        assert not verdict.passed


class TestCertify:
    @pytest.mark.parametrize("family,rank,omega", [
        ("B", 2, (0, 2)),       # square
        ("B", 2, (1, 0)),       # diamond
        ("A", 2, (1, 1)),       # hexagon
        ("A", 2, (3, 0)),       # projective plane simplex
    ])
    def test_small_fixtures_all_pass(self, family, rank, omega):
        system = build_root_system(family, rank)
        rec = weyl_polytope(system, weight_to_coords(system, omega))
        report = certify(rec, 0, 3)
        assert report.passed
        assert report.duality_gap == 0
        assert report.stability.offending_mass == 0
        assert report.chamber_support.offending_mass == 0

    def test_requires_reflexive(self):
        b2 = build_root_system("B", 2)
        rec = weyl_polytope(b2, (2, 3))
        with pytest.raises(NotReflexive):
            certify(rec, 0, 3)
