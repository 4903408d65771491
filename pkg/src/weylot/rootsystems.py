"""Crystallographic root systems, Weyl groups, chambers, and orbits.

Coordinates: a root system of rank r lives in an r-dimensional lattice M.
Internally everything is generated in the simple-root basis, where the
root lattice is exactly ``Z^r``.  Choosing ``lattice="weight"`` re-expresses
all data in the fundamental-weight basis, and a custom intermediate lattice
may be given by an integer basis matrix (columns are lattice generators in
simple-root coordinates).  Dual-side data (coroots, chamber normals) is
stored in the basis dual to the chosen one, so the duality bracket is the
plain dot product throughout.

Conventions follow Bourbaki: simple root numbering, Cartan matrices
(stored here as ``C[i][j] = <alpha_j, alpha_i^vee>``, so row ``i`` is the
coroot ``alpha_i^vee`` in dual coordinates), and the classical families
A (n>=1), B (n>=2), C (n>=3), D (n>=4), E6, F4, G2 plus direct products.
"""

from __future__ import annotations

import os
from dataclasses import dataclass
from fractions import Fraction

from .errors import (NotDominant, NotLatticePoint, OrbitCapExceeded,
                     UnsupportedType)
from . import linalg as la

DEFAULT_ORBIT_CAP = 100_000


def orbit_cap():
    """Active orbit/group size cap; WEYLOT_ORBIT_CAP overrides the default."""
    value = os.environ.get("WEYLOT_ORBIT_CAP")
    if value is None:
        return DEFAULT_ORBIT_CAP
    return int(value)


def _cartan_matrix(family, rank):
    """C[i][j] = <alpha_j, alpha_i^vee> for the Bourbaki simple roots."""
    n = rank
    C = [[2 if i == j else 0 for j in range(n)] for i in range(n)]

    def chain(i, j):
        C[i][j] = -1
        C[j][i] = -1

    if family == "A":
        for i in range(n - 1):
            chain(i, i + 1)
    elif family == "B":
        # alpha_n is the short root e_n; <alpha_{n-1}, alpha_n^vee> = -2
        for i in range(n - 2):
            chain(i, i + 1)
        C[n - 1][n - 2] = -2
        C[n - 2][n - 1] = -1
    elif family == "C":
        # alpha_n is the long root 2 e_n; <alpha_n, alpha_{n-1}^vee> = -2
        for i in range(n - 2):
            chain(i, i + 1)
        C[n - 1][n - 2] = -1
        C[n - 2][n - 1] = -2
    elif family == "D":
        for i in range(n - 2):
            chain(i, i + 1)
        chain(n - 3, n - 1)
    elif family == "E":
        # nodes 1-3-4-5-6 in a chain, node 2 attached to node 4
        for a, b in ((1, 3), (3, 4), (4, 5), (5, 6), (2, 4)):
            chain(a - 1, b - 1)
    elif family == "F":
        chain(0, 1)
        chain(2, 3)
        C[2][1] = -2
        C[1][2] = -1
    elif family == "G":
        # alpha_1 short, alpha_2 long: <alpha_2, alpha_1^vee> = -3
        C[0][1] = -3
        C[1][0] = -1
    return tuple(tuple(row) for row in C)


_ADMISSIBLE = {"A": 1, "B": 2, "C": 3, "D": 4}
_EXCEPTIONAL = {("E", 6), ("F", 4), ("G", 2)}


@dataclass(frozen=True)
class GroupElement:
    """A Weyl group element: matrix on M, inverse-transpose on N, and a word.

    ``<matrix @ m, dual_matrix @ n> == <m, n>`` for all m, n; for a simple
    reflection the dual matrix is the plain transpose.
    """

    matrix: tuple
    dual_matrix: tuple
    word: tuple

    def apply(self, m):
        return la.mat_vec(self.matrix, m)

    def apply_dual(self, n):
        return la.mat_vec(self.dual_matrix, n)


class RootSystem:
    """A root system with a lattice choice between root and weight lattices."""

    def __init__(self, type_label, roots, coroots, simple_indices,
                 cartan, lattice_choice):
        self.type_label = tuple(type_label)   # ((family, rank), ...)
        self.roots = tuple(roots)             # M-coordinates
        self.coroots = tuple(coroots)         # N-coordinates, index-aligned
        self.simple_indices = tuple(simple_indices)
        self.cartan_matrix = cartan
        self.lattice_choice = lattice_choice
        self.rank = len(roots[0])

    @property
    def simple_roots(self):
        return tuple(self.roots[i] for i in self.simple_indices)

    @property
    def simple_coroots(self):
        return tuple(self.coroots[i] for i in self.simple_indices)

    def label(self):
        return "x".join(f"{fam}{rk}" for fam, rk in self.type_label)

    def __repr__(self):
        return (f"RootSystem({self.label()}, {len(self.roots)} roots, "
                f"lattice={self.lattice_choice!r})")

    # -- reflections and orbits --------------------------------------------

    def reflect(self, root_index, x, side="M"):
        """sigma(m) = m - <m, a^vee> a, or its dual form on the N side."""
        alpha = self.roots[root_index]
        covec = self.coroots[root_index]
        if side == "M":
            t = la.vdot(x, covec)
            return tuple(la.norm_scalar(xi - t * ai) for xi, ai in zip(x, alpha))
        if side == "N":
            t = la.vdot(alpha, x)
            return tuple(la.norm_scalar(xi - t * ci) for xi, ci in zip(x, covec))
        raise ValueError("side must be 'M' or 'N'")

    def simple_pairings(self, x, side="M"):
        if side == "M":
            return tuple(la.vdot(x, self.coroots[i]) for i in self.simple_indices)
        return tuple(la.vdot(self.roots[i], x) for i in self.simple_indices)

    def is_dominant(self, x, side="M"):
        return all(t >= 0 for t in self.simple_pairings(x, side))

    def orbit(self, m, cap=None):
        """Weyl orbit of ``m``: breadth-first closure under simple reflections.

        Output is lexicographically sorted.  Raises OrbitCapExceeded if the
        orbit grows past the cap (default from ``orbit_cap()``).
        """
        cap = orbit_cap() if cap is None else cap
        start = tuple(la.norm_scalar(x) for x in m)
        seen = {start}
        queue = [start]
        while queue:
            v = queue.pop()
            for i in self.simple_indices:
                w = self.reflect(i, v)
                if w not in seen:
                    if len(seen) >= cap:
                        raise OrbitCapExceeded(
                            f"orbit size exceeds cap {cap}")
                    seen.add(w)
                    queue.append(w)
        return tuple(sorted(seen))

    def dominant_representative(self, x, side="M"):
        """The chamber representative of ``x`` and a group element mapping x to it.

        Repeatedly reflects at a violated simple (co)root; terminates because
        each step strictly shortens the inversion set.
        """
        n = self.rank
        cur = tuple(la.norm_scalar(v) for v in x)
        mat = la.identity(n)
        dual = la.identity(n)
        word = []
        while True:
            pairings = self.simple_pairings(cur, side)
            j = next((k for k, t in enumerate(pairings) if t < 0), None)
            if j is None:
                break
            idx = self.simple_indices[j]
            cur = self.reflect(idx, cur, side)
            word.append(j)
            smat, sdual = self._simple_matrices(j)
            mat = la.mat_mul(smat, mat)
            dual = la.mat_mul(sdual, dual)
        return cur, GroupElement(mat, dual, tuple(word))

    def _simple_matrices(self, j):
        """Matrix pair of the j-th simple reflection (M side, N side)."""
        n = self.rank
        idx = self.simple_indices[j]
        alpha = self.roots[idx]
        covec = self.coroots[idx]
        smat = tuple(tuple(la.norm_scalar((1 if r == c else 0) - alpha[r] * covec[c])
                           for c in range(n)) for r in range(n))
        sdual = tuple(tuple(la.norm_scalar((1 if r == c else 0) - covec[r] * alpha[c])
                            for c in range(n)) for r in range(n))
        return smat, sdual

    def weyl_group(self, cap=None):
        """Materialize the whole Weyl group (matrices, dual matrices, words)."""
        cap = orbit_cap() if cap is None else cap
        n = self.rank
        gens = [self._simple_matrices(j) for j in range(len(self.simple_indices))]
        ident = GroupElement(la.identity(n), la.identity(n), ())
        seen = {ident.matrix: ident}
        queue = [ident]
        while queue:
            g = queue.pop()
            for j, (smat, sdual) in enumerate(gens):
                mat = la.mat_mul(smat, g.matrix)
                if mat in seen:
                    continue
                if len(seen) >= cap:
                    raise OrbitCapExceeded(f"group size exceeds cap {cap}")
                elem = GroupElement(mat, la.mat_mul(sdual, g.dual_matrix),
                                    g.word + (j,))
                seen[mat] = elem
                queue.append(elem)
        return WeylGroup(tuple(sorted(seen.values(), key=lambda e: e.matrix)),
                         tuple(gens))

    def parabolic_chamber_union(self, m):
        """Membership test for C_L, the W_L-orbit of the positive dual chamber.

        ``L`` collects the simple indices whose coroot pairs to zero with the
        dominant weight ``m``; a point of N lies in C_L iff its L-dominant
        representative (reflecting only at simple roots in L) is dominant for
        the whole system.
        """
        if not self.is_dominant(m):
            raise NotDominant(f"{m} is not dominant")
        L = tuple(j for j, t in enumerate(self.simple_pairings(m)) if t == 0)
        return ParabolicChamberUnion(self, L)


class ParabolicChamberUnion:
    """The cone C_L in N, represented by an exact membership predicate."""

    def __init__(self, system, L):
        self.system = system
        self.L = L

    def contains(self, n_point):
        cur = tuple(la.norm_scalar(x) for x in n_point)
        moved = True
        while moved:
            moved = False
            for j in self.L:
                idx = self.system.simple_indices[j]
                if la.vdot(self.system.roots[idx], cur) < 0:
                    cur = self.system.reflect(idx, cur, side="N")
                    moved = True
        return self.system.is_dominant(cur, side="N")

    __contains__ = contains


class WeylGroup:
    """A materialized Weyl group."""

    def __init__(self, elements, generators):
        self.elements = elements
        self.generators = generators

    def __len__(self):
        return len(self.elements)

    def __iter__(self):
        return iter(self.elements)


def build_root_system(family, rank, lattice="root"):
    """Construct a root system of the given family, rank, and lattice choice.

    ``lattice`` is ``"root"``, ``"weight"``, or an integer matrix whose
    columns generate an intermediate lattice in simple-root coordinates.
    """
    family = family.upper()
    if (family, rank) not in _EXCEPTIONAL:
        if family not in _ADMISSIBLE or rank < _ADMISSIBLE[family]:
            raise UnsupportedType(f"unsupported root system {family}{rank}")
    C = _cartan_matrix(family, rank)
    n = rank

    # generate (root, coroot) pairs from the simple ones by reflection closure
    simple_pairs = []
    for i in range(n):
        alpha = tuple(1 if k == i else 0 for k in range(n))
        simple_pairs.append((alpha, C[i]))
    seen = dict(simple_pairs)
    queue = list(simple_pairs)
    while queue:
        alpha, covec = queue.pop()
        for i in range(n):
            t = la.vdot(alpha, C[i])  # <alpha, alpha_i^vee>
            beta = tuple(alpha[k] - t * (1 if k == i else 0) for k in range(n))
            if beta in seen:
                continue
            u = covec[i]
            new_covec = tuple(covec[k] - u * C[i][k] for k in range(n))
            seen[beta] = new_covec
            queue.append((beta, new_covec))
    roots = sorted(seen)
    coroots = [seen[r] for r in roots]
    simple_indices = [roots.index(tuple(1 if k == i else 0 for k in range(n)))
                      for i in range(n)]

    system = RootSystem([(family, rank)], roots, coroots, simple_indices,
                        C, "root")
    if lattice == "root":
        return system
    if lattice == "weight":
        basis = la.inverse(C)  # columns = fundamental weights in alpha-coords
        basis = tuple(tuple(basis[i][j] for j in range(n)) for i in range(n))
        return _change_lattice(system, basis, "weight")
    basis = tuple(tuple(row) for row in lattice)
    return _change_lattice(system, basis, "custom")


def _change_lattice(system, basis, name):
    """Re-express a root-lattice system in the basis given by ``basis`` columns.

    Verifies the sandwich condition: the new lattice must contain all roots
    (integer coordinates) and sit inside the weight lattice (integer pairings
    with all coroots).
    """
    n = system.rank
    inv = la.inverse(basis)
    if inv is None:
        raise ValueError("lattice basis is singular")
    new_roots = []
    for alpha in system.roots:
        x = la.mat_vec(inv, alpha)
        if not la.is_integer_vector(x):
            raise ValueError("lattice does not contain the root lattice")
        new_roots.append(tuple(la.norm_scalar(v) for v in x))
    bt = la.transpose(basis)
    new_coroots = []
    for covec in system.coroots:
        y = la.mat_vec(bt, covec)
        new_coroots.append(tuple(la.norm_scalar(v) for v in y))
    for j in range(n):
        col = tuple(basis[i][j] for i in range(n))
        pairings = [la.vdot(col, system.coroots[i]) for i in system.simple_indices]
        if not la.is_integer_vector(pairings):
            raise ValueError("lattice is not inside the weight lattice")
    order = sorted(range(len(new_roots)), key=lambda i: new_roots[i])
    inv_order = {old: new for new, old in enumerate(order)}
    return RootSystem(system.type_label,
                      [new_roots[i] for i in order],
                      [new_coroots[i] for i in order],
                      [inv_order[i] for i in system.simple_indices],
                      system.cartan_matrix, name)


def product(r1: RootSystem, r2: RootSystem) -> RootSystem:
    """Direct product: block sums of roots, coroots, and Cartan data."""
    if r1.lattice_choice != r2.lattice_choice:
        raise ValueError("lattice choices differ")
    n1, n2 = r1.rank, r2.rank
    roots = []
    coroots = []
    for a, av in zip(r1.roots, r1.coroots):
        roots.append(a + (0,) * n2)
        coroots.append(av + (0,) * n2)
    for b, bv in zip(r2.roots, r2.coroots):
        roots.append((0,) * n1 + b)
        coroots.append((0,) * n1 + bv)
    order = sorted(range(len(roots)), key=lambda i: roots[i])
    pos = {old: new for new, old in enumerate(order)}
    simple = [pos[i] for i in r1.simple_indices]
    simple += [pos[len(r1.roots) + i] for i in r2.simple_indices]
    C = [[0] * (n1 + n2) for _ in range(n1 + n2)]
    for i in range(n1):
        for j in range(n1):
            C[i][j] = r1.cartan_matrix[i][j]
    for i in range(n2):
        for j in range(n2):
            C[n1 + i][n1 + j] = r2.cartan_matrix[i][j]
    return RootSystem(r1.type_label + r2.type_label,
                      [roots[i] for i in order],
                      [coroots[i] for i in order],
                      simple,
                      tuple(tuple(row) for row in C),
                      r1.lattice_choice)


_DUAL_FAMILY = {"A": "A", "B": "C", "C": "B", "D": "D", "E": "E",
                "F": "F", "G": "G"}


def dual_system(r: RootSystem) -> RootSystem:
    """Swap the roles of roots and coroots; an exact involution."""
    order = sorted(range(len(r.coroots)), key=lambda i: r.coroots[i])
    pos = {old: new for new, old in enumerate(order)}
    label = tuple((_DUAL_FAMILY[f], k) for f, k in r.type_label)
    n = r.rank
    simple = [pos[i] for i in r.simple_indices]
    cartan = tuple(tuple(r.cartan_matrix[j][i] for j in range(n))
                   for i in range(n))
    return RootSystem(label,
                      [r.coroots[i] for i in order],
                      [r.roots[i] for i in order],
                      simple, cartan, r.lattice_choice)


def parse_type_label(text):
    """Parse labels like ``"B3"`` or ``"A1xA2"`` into (family, rank) pairs."""
    parts = text.replace(" ", "").split("x")
    out = []
    for part in parts:
        if len(part) < 2 or not part[0].isalpha():
            raise UnsupportedType(f"cannot parse type {text!r}")
        fam = part[0].upper()
        try:
            rk = int(part[1:])
        except ValueError as exc:
            raise UnsupportedType(f"cannot parse type {text!r}") from exc
        out.append((fam, rk))
    return tuple(out)


def build_from_label(text, lattice="root"):
    """Build a (product) root system from a label like ``"A1xB2"``."""
    parts = parse_type_label(text)
    system = build_root_system(parts[0][0], parts[0][1], lattice)
    for fam, rk in parts[1:]:
        system = product(system, build_root_system(fam, rk, lattice))
    return system


def weight_to_coords(system: RootSystem, omega_coeffs):
    """Point of M with the given fundamental-weight coefficients.

    Raises NotLatticePoint if the combination lands outside the chosen
    lattice M.
    """
    n = system.rank
    if len(omega_coeffs) != n:
        raise ValueError(f"expected {n} weight coefficients")
    if system.lattice_choice == "root":
        inv = la.inverse(system.cartan_matrix)
        coords = la.mat_vec(inv, omega_coeffs)
    elif system.lattice_choice == "weight":
        coords = tuple(omega_coeffs)
    else:
        raise ValueError("weight coordinates need a root or weight lattice")
    coords = tuple(la.norm_scalar(x) for x in coords)
    if not la.is_integer_vector(coords):
        raise NotLatticePoint(
            f"weight {tuple(omega_coeffs)} is not in the chosen lattice")
    return coords
