"""Exact lattice polytope geometry.

A :class:`Polytope` is a full-dimensional convex polytope with the origin in
its interior, carried in both representations at once: an irredundant list
of vertices and an irredundant list of facet inequalities ``<x, n> <= c``
with primitive integer normals ``n`` and positive rational offsets ``c``.

All arithmetic is exact (ints and ``fractions.Fraction``); there is no
floating point anywhere in this module.  Facet enumeration runs an
incremental double-description pass over the homogenized polar cone, which
keeps the working set proportional to the facet count rather than the
vertex count.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property

from .errors import NotFullDimensional, OriginNotInterior, VertexNotFound
from . import linalg as la


@dataclass(frozen=True)
class Face:
    """A proper face, recorded by vertex indices into the owning polytope.

    ``facet_indices`` lists every facet whose hyperplane contains the face;
    the face equals the intersection of those facets.
    """

    vertex_indices: tuple
    dimension: int
    facet_indices: tuple


def _dd_cone(rows):
    """Extreme rays of the pointed cone {z : a . z <= 0 for a in rows}.

    ``rows`` are integer tuples.  The first ``dim`` linearly independent
    rows act as a simplicial seed; the rest are inserted one at a time.
    Raises ValueError if the rows do not span (non-pointed cone).
    """
    dim = len(rows[0])
    seed_idx = []
    seed_rows = []
    for i, a in enumerate(rows):
        if la.rank(seed_rows + [list(a)]) > len(seed_rows):
            seed_idx.append(i)
            seed_rows.append(list(a))
            if len(seed_rows) == dim:
                break
    if len(seed_rows) < dim:
        raise ValueError("constraint rows do not span; cone is not pointed")

    d = la.det(seed_rows)
    adj = la.adjugate_int(tuple(map(tuple, seed_rows)))
    sign = 1 if d > 0 else -1
    rays = []
    for j in range(dim):
        col = tuple(-sign * adj[i][j] for i in range(dim))
        prim, _ = la.primitivize(col)
        rays.append(prim)

    processed = list(seed_idx)
    seed_set = set(seed_idx)

    def fresh_zeroset(r):
        z = 0
        for bit, ci in enumerate(processed):
            if la.vdot(rows[ci], r) == 0:
                z |= 1 << bit
        return z

    zsets = [fresh_zeroset(r) for r in rays]

    for ci, a in enumerate(rows):
        if ci in seed_set:
            continue
        vals = [la.vdot(a, r) for r in rays]
        bit = 1 << len(processed)
        processed.append(ci)
        if all(v <= 0 for v in vals):
            zsets = [z | bit if v == 0 else z for z, v in zip(zsets, vals)]
            continue
        keep_i = [i for i, v in enumerate(vals) if v <= 0]
        neg_i = [i for i, v in enumerate(vals) if v < 0]
        pos_i = [i for i, v in enumerate(vals) if v > 0]
        min_tight = dim - 2
        new_rays = []
        for p in neg_i:
            zp = zsets[p]
            for q in pos_i:
                z = zp & zsets[q]
                if z.bit_count() < min_tight:
                    continue
                adjacent = True
                for r in range(len(rays)):
                    if r != p and r != q and (z & zsets[r]) == z:
                        adjacent = False
                        break
                if not adjacent:
                    continue
                combo = tuple(-vals[p] * rays[q][k] + vals[q] * rays[p][k]
                              for k in range(dim))
                prim, _ = la.primitivize(combo)
                new_rays.append(prim)
        rays = [rays[i] for i in keep_i] + new_rays
        zsets = [zsets[i] | (bit if vals[i] == 0 else 0) for i in keep_i]
        zsets += [fresh_zeroset(r) for r in new_rays]
    return rays


def _check_full_dimensional(points, dim):
    base = points[0]
    diffs = [la.vsub(p, base) for p in points[1:]]
    if la.rank(diffs) < dim:
        raise NotFullDimensional(
            f"affine span of the points has dimension < {dim}")


def convex_hull(points, dim=None):
    """Exact convex hull of lattice points with 0 in the interior.

    Returns a :class:`Polytope`.  Raises :class:`NotFullDimensional` if the
    affine span is proper and :class:`OriginNotInterior` if 0 is not
    strictly inside the hull.
    """
    pts = []
    seen = set()
    for p in points:
        t = tuple(la.norm_scalar(x) for x in p)
        if any(not isinstance(x, int) for x in t):
            raise ValueError(f"non-integer point {t}")
        if t not in seen:
            seen.add(t)
            pts.append(t)
    if not pts:
        raise NotFullDimensional("no points given")
    d = dim if dim is not None else len(pts[0])
    if any(len(p) != d for p in pts):
        raise ValueError("points of mixed dimension")
    if len(pts) < d + 1:
        raise NotFullDimensional(f"{len(pts)} points cannot span dimension {d}")
    _check_full_dimensional(pts, d)

    pts.sort()
    rows = [(0,) * d + (-1,)] + [p + (-1,) for p in pts]
    rays = _dd_cone(rows)
    facets = []
    for ray in rays:
        y, t = ray[:-1], ray[-1]
        if t == 0:
            raise OriginNotInterior(
                "origin is on the boundary of or outside the hull")
        n, g = la.primitivize(y)
        facets.append((n, la.norm_scalar(Fraction(t, g))))
    facets.sort()

    vertices = []
    for p in pts:
        tight = [f for f, (n, c) in enumerate(facets) if la.vdot(p, n) == c]
        if tight and la.rank([facets[f][0] for f in tight]) == d:
            vertices.append(p)
    return Polytope(tuple(vertices), tuple(facets), d)


def h_polytope_vertices(inequalities, equalities, dim):
    """Vertices of {x : <x,n> <= c, <x,m> = b}, given exact constraint data.

    ``inequalities`` and ``equalities`` are iterables of (vector, scalar)
    with integer vectors and rational scalars.  The region must be bounded
    and the constraint normals must span.  Returns a sorted list of
    rational points (possibly empty).
    """
    rows = []

    def add(n, c):
        scaled, mult = la.clear_denominators(tuple(n) + (c,))
        rows.append(tuple(scaled[:-1]) + (-scaled[-1],))

    for n, c in inequalities:
        add(n, c)
    for n, c in equalities:
        add(n, c)
        add(tuple(-x for x in n), -c)
    rows.append((0,) * dim + (-1,))
    rays = _dd_cone(rows)
    verts = set()
    for ray in rays:
        y, t = ray[:-1], ray[-1]
        if t == 0:
            if any(x != 0 for x in y):
                raise ValueError("region is unbounded")
            continue
        verts.add(tuple(la.norm_scalar(Fraction(x, t)) for x in y))
    return sorted(verts)


class Polytope:
    """Full-dimensional polytope with 0 interior, exact dual representations."""

    def __init__(self, vertices, facets, dim):
        self.vertices = tuple(tuple(la.norm_scalar(x) for x in v) for v in vertices)
        self.facets = tuple((tuple(n), la.norm_scalar(c)) for n, c in facets)
        self.dim = dim
        self._vertex_index = {v: i for i, v in enumerate(self.vertices)}

    # -- basic structure ---------------------------------------------------

    @cached_property
    def is_lattice(self):
        return all(isinstance(x, int) for v in self.vertices for x in v)

    @cached_property
    def incidence(self):
        """Per facet, the frozenset of indices of vertices lying on it."""
        out = []
        for n, c in self.facets:
            out.append(frozenset(
                i for i, v in enumerate(self.vertices) if la.vdot(v, n) == c))
        return tuple(out)

    @cached_property
    def vertex_facets(self):
        """Per vertex, the sorted tuple of indices of facets containing it."""
        out = [[] for _ in self.vertices]
        for f, members in enumerate(self.incidence):
            for i in members:
                out[i].append(f)
        return tuple(tuple(fs) for fs in out)

    def vertex_index(self, v):
        t = tuple(la.norm_scalar(x) for x in v)
        if t not in self._vertex_index:
            raise VertexNotFound(f"{t} is not a vertex")
        return self._vertex_index[t]

    def contains(self, x):
        return all(la.vdot(x, n) <= c for n, c in self.facets)

    def tight_facets(self, x):
        return tuple(f for f, (n, c) in enumerate(self.facets)
                     if la.vdot(x, n) == c)

    def __eq__(self, other):
        if not isinstance(other, Polytope):
            return NotImplemented
        return self.vertices == other.vertices

    def __hash__(self):
        return hash(self.vertices)

    def __repr__(self):
        kind = "lattice " if self.is_lattice else "rational "
        return (f"Polytope({len(self.vertices)} vertices, "
                f"{len(self.facets)} facets, {kind}dim {self.dim})")

    # -- duality -----------------------------------------------------------

    def dual(self):
        """Polar dual {n : <m,n> <= 1 for all vertices m}.

        Vertices of the dual are facet normals divided by offsets; facets of
        the dual come from the vertices with offset 1 (scaled primitive).
        The construction is combinatorial, so dual(dual(p)) == p exactly.
        """
        dverts = sorted(
            tuple(la.norm_scalar(Fraction(x, 1) / c) for x in n)
            for n, c in self.facets)
        dfacets = []
        for v in self.vertices:
            ints, mult = la.clear_denominators(v)
            n, g = la.primitivize(ints)
            dfacets.append((n, la.norm_scalar(Fraction(mult, g))))
        dfacets.sort()
        return Polytope(tuple(dverts), tuple(dfacets), self.dim)

    @cached_property
    def is_reflexive(self):
        """True iff every facet has lattice distance 1 (dual is a lattice polytope)."""
        return self.is_lattice and all(c == 1 for _, c in self.facets)

    # -- face lattice --------------------------------------------------------

    @cached_property
    def faces(self):
        """All proper faces, in increasing dimension, each deterministic.

        Built by closing the facet list under pairwise intersection; the
        order is (dimension, sorted vertex index tuple).
        """
        found = {}
        queue = [frozenset(members) for members in self.incidence]
        for s in queue:
            found[s] = None
        while queue:
            cur = queue.pop()
            for members in self.incidence:
                inter = cur & members
                if inter and inter not in found:
                    found[inter] = None
                    queue.append(inter)
        for i in range(len(self.vertices)):
            found.setdefault(frozenset([i]), None)

        faces = []
        for vset in found:
            vs = tuple(sorted(vset))
            if len(vs) == 1:
                fdim = 0
            else:
                base = self.vertices[vs[0]]
                fdim = la.rank([la.vsub(self.vertices[i], base) for i in vs[1:]])
            fset = tuple(f for f, members in enumerate(self.incidence)
                         if vset <= members)
            faces.append(Face(vs, fdim, fset))
        faces.sort(key=lambda f: (f.dimension, f.vertex_indices))
        return tuple(faces)

    @cached_property
    def _faces_by_vertices(self):
        return {frozenset(f.vertex_indices): f for f in self.faces}

    def face_children(self, face):
        """Faces of one dimension lower contained in the given face."""
        vset = frozenset(face.vertex_indices)
        return tuple(f for f in self.faces
                     if f.dimension == face.dimension - 1
                     and frozenset(f.vertex_indices) <= vset)

    def facet_faces(self):
        """The faces corresponding to facets, indexed like ``self.facets``."""
        lookup = self._faces_by_vertices
        return tuple(lookup[frozenset(members)] for members in self.incidence)

    def closed_star(self, m):
        """All faces containing the vertex ``m`` (the closed star of m)."""
        i = self.vertex_index(m)
        return tuple(f for f in self.faces if i in f.vertex_indices)

    def dual_facet(self, m):
        """The facet of the dual polytope on which the bracket with ``m`` is 1."""
        self.vertex_index(m)
        dual = self.dual()
        members = frozenset(
            j for j, n in enumerate(dual.vertices) if la.vdot(m, n) == 1)
        face = dual._faces_by_vertices.get(members)
        if face is None:
            raise VertexNotFound(f"no dual facet found for {m}")
        return dual, face

    # -- triangulation and volume -------------------------------------------

    def _triangulate_face(self, face):
        """Vertex-index simplices of a pulling triangulation of ``face``.

        Anchored at the lexicographically smallest vertex of every face,
        recursively; uses only vertices, so the cells partition the face.
        """
        if face.dimension == 0:
            return ((face.vertex_indices[0],),)
        anchor = face.vertex_indices[0]
        cells = []
        for child in self.face_children(face):
            if anchor in child.vertex_indices:
                continue
            for cell in self._triangulate_face(child):
                cells.append((anchor,) + cell)
        return tuple(cells)

    def boundary_triangulation(self):
        """Per facet, vertex-index simplices triangulating it."""
        return tuple(self._triangulate_face(f) for f in self.facet_faces())

    @cached_property
    def volume(self):
        """Lebesgue volume (normalized so the lattice fundamental cell is 1)."""
        total = Fraction(0)
        dfact = 1
        for k in range(1, self.dim + 1):
            dfact *= k
        for cells in self.boundary_triangulation():
            for cell in cells:
                mat = [self.vertices[i] for i in cell]
                total += abs(Fraction(la.det(mat)))
        return la.norm_scalar(total / dfact)

    @cached_property
    def barycenter(self):
        """Exact centroid of the solid polytope, via the cone triangulation from 0."""
        total = Fraction(0)
        acc = [Fraction(0)] * self.dim
        for cells in self.boundary_triangulation():
            for cell in cells:
                mat = [self.vertices[i] for i in cell]
                w = abs(Fraction(la.det(mat)))
                if w == 0:
                    continue
                total += w
                for k in range(self.dim):
                    s = sum(Fraction(self.vertices[i][k]) for i in cell)
                    acc[k] += w * (s / (self.dim + 1))
        return tuple(la.norm_scalar(a / total) for a in acc)

    def face_lattice_volume(self, face):
        """Volume of a face, normalized to the lattice induced on its span.

        A point counts 1; a segment of lattice length L counts L; a
        unimodular k-simplex counts 1/k!.
        """
        if face.dimension == 0:
            return 1
        vs = [self.vertices[i] for i in face.vertex_indices]
        base = vs[0]
        diffs = [la.vsub(v, base) for v in vs[1:]]
        ints = []
        for dvec in diffs:
            cleared, _ = la.clear_denominators(dvec)
            ints.append(cleared)
        basis = la.saturation_basis(ints)
        k = face.dimension
        if len(basis) != k:
            raise ValueError("face dimension mismatch in volume computation")
        coords = {face.vertex_indices[0]: (0,) * k}
        for idx in face.vertex_indices[1:]:
            coords[idx] = face_coordinates(basis, la.vsub(self.vertices[idx], base))
        kfact = 1
        for j in range(1, k + 1):
            kfact *= j
        total = Fraction(0)
        for cell in self._triangulate_face(face):
            mat = [la.vsub(coords[i], coords[cell[0]]) for i in cell[1:]]
            total += abs(Fraction(la.det(mat)))
        return la.norm_scalar(total / kfact)

    # -- local smoothness ----------------------------------------------------

    def vertex_edge_directions(self, i):
        """Primitive directions of the edges leaving vertex ``i``."""
        dirs = []
        v = self.vertices[i]
        if self.dim == 1:
            # the only edge is the polytope itself
            other = self.vertices[1 - i]
            cleared, _ = la.clear_denominators(la.vsub(other, v))
            prim, _ = la.primitivize(cleared)
            return (prim,)
        for f in self.faces:
            if f.dimension == 1 and i in f.vertex_indices:
                other = next(j for j in f.vertex_indices if j != i)
                dvec = la.vsub(self.vertices[other], v)
                cleared, _ = la.clear_denominators(dvec)
                prim, _ = la.primitivize(cleared)
                dirs.append(prim)
        return tuple(sorted(dirs))

    @cached_property
    def is_delzant(self):
        """True iff every vertex cone is unimodular (smooth toric fan)."""
        for i in range(len(self.vertices)):
            dirs = self.vertex_edge_directions(i)
            if len(dirs) != self.dim:
                return False
            if abs(la.det(dirs)) != 1:
                return False
        return True


def face_coordinates(basis, dvec):
    """Coordinates of ``dvec`` in an integer lattice basis of its span."""
    if not basis:
        if any(x != 0 for x in dvec):
            raise ValueError("vector not in the span of the basis")
        return ()
    cols = list(zip(*basis))
    k = len(basis)
    rows = []
    idx = []
    for r in range(len(cols)):
        if la.rank(rows + [list(cols[r])]) > len(rows):
            rows.append(list(cols[r]))
            idx.append(r)
            if len(rows) == k:
                break
    sol = la.solve(rows, [dvec[r] for r in idx])
    if sol is None:
        raise ValueError("degenerate face basis")
    check = [la.vdot(sol, col) for col in cols]
    if list(check) != [la.norm_scalar(x) for x in dvec]:
        raise ValueError("vector not in the span of the basis")
    return tuple(la.norm_scalar(x) for x in sol)


# -- module-level operation names ------------------------------------------


def dual_polytope(p: Polytope) -> Polytope:
    return p.dual()


def is_reflexive(p: Polytope) -> bool:
    return p.is_reflexive


def enumerate_faces(p: Polytope):
    return p.faces


def closed_star(p: Polytope, m):
    return p.closed_star(m)


def dual_facet(p: Polytope, m):
    return p.dual_facet(m)


def lattice_volume(obj, face=None):
    """Normalized volume of a polytope, or of one of its faces."""
    if face is None:
        return obj.volume
    return obj.face_lattice_volume(face)


def barycenter(p: Polytope):
    return p.barycenter


def is_delzant(p: Polytope) -> bool:
    return p.is_delzant
