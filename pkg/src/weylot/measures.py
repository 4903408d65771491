"""Integral surface measures on polytope boundaries and their discretizations.

The integral surface measure gives each facet its lattice-normalized volume
(a unimodular d-simplex weighs 1/d!).  ``discretize`` turns the measure into
a weighted rational point cloud: facets are cut into lattice simplices by a
deterministic triangulation through all their lattice points, optionally
refined by barycentric subdivision, and every cell contributes its centroid
weighted by the cell's exact volume.  Masses are normalized to total 1, so
two boundary measures can enter a transport problem directly.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import permutations, product as iproduct

from . import linalg as la
from .polytope import Polytope, face_coordinates

_BOX_CAP = 200_000


@dataclass(frozen=True)
class SurfaceMeasure:
    facet_masses: tuple     # (facet index, mass) pairs
    total: Fraction


def surface_measure(p: Polytope) -> SurfaceMeasure:
    """Per-facet lattice-normalized volumes and their sum."""
    if not p.is_lattice:
        raise ValueError("surface measure needs a lattice polytope")
    masses = []
    total = Fraction(0)
    for f, face in enumerate(p.facet_faces()):
        v = p.face_lattice_volume(face)
        masses.append((f, la.norm_scalar(v)))
        total += v
    return SurfaceMeasure(tuple(masses), la.norm_scalar(total))


@dataclass(frozen=True)
class WeightedPointCloud:
    """Rational points on a polytope boundary with positive rational masses."""

    points: tuple
    masses: tuple
    facet_tags: tuple
    chamber_tags: tuple
    polytope: Polytope
    side: str

    def __len__(self):
        return len(self.points)

    def total_mass(self):
        return la.norm_scalar(sum(self.masses, Fraction(0)))


def _facet_lattice_points(p, face):
    """All lattice points of a facet, by box enumeration plus exact filters."""
    verts = [p.vertices[i] for i in face.vertex_indices]
    d = p.dim
    lo = [min(v[c] for v in verts) for c in range(d)]
    hi = [max(v[c] for v in verts) for c in range(d)]
    size = 1
    for a, b in zip(lo, hi):
        size *= (b - a + 1)
        if size > _BOX_CAP:
            raise ValueError("facet bounding box too large to enumerate")
    normals = [p.facets[f] for f in face.facet_indices]
    pts = []
    for q in iproduct(*[range(a, b + 1) for a, b in zip(lo, hi)]):
        if any(la.vdot(q, n) != c for n, c in normals):
            continue
        if p.contains(q):
            pts.append(q)
    return sorted(pts)


def _stellar_triangulation(cells, extra_points):
    """Insert points into a simplicial complex, lex order, by stellar splits."""
    cells = [tuple(c) for c in cells]
    for q in sorted(extra_points):
        new_cells = []
        for cell in cells:
            mat = [tuple(v) + (1,) for v in cell]
            lam = la.solve(la.transpose(mat), tuple(q) + (1,))
            if lam is None or any(x < 0 for x in lam):
                new_cells.append(cell)
                continue
            split = [i for i, x in enumerate(lam) if x > 0]
            if len(split) <= 1:
                new_cells.append(cell)
                continue
            for i in split:
                new_cells.append(tuple(v for j, v in enumerate(cell) if j != i)
                                 + (tuple(q),))
        cells = new_cells
    return cells


def _barycentric_subdivide(cell):
    s = len(cell) - 1
    if s == 0:
        return [cell]
    out = []
    for perm in permutations(range(s + 1)):
        pts = []
        acc = tuple(Fraction(0) for _ in cell[0])
        for step, idx in enumerate(perm, start=1):
            acc = tuple(a + Fraction(x) for a, x in zip(acc, cell[idx]))
            pts.append(tuple(la.norm_scalar(a / step) for a in acc))
        out.append(tuple(pts))
    return out


def _facet_cells(p, face):
    """Lattice-simplex cells of one facet, in local lattice coordinates.

    Returns (origin vertex, basis, cells); cells are tuples of integer local
    coordinate tuples.
    """
    verts = [p.vertices[i] for i in face.vertex_indices]
    v0 = verts[0]
    diffs = [la.vsub(v, v0) for v in verts[1:]]
    basis = la.saturation_basis(diffs)
    if len(basis) != face.dimension:
        raise ValueError("facet basis extraction failed")

    def to_local(x):
        return face_coordinates(basis, la.vsub(x, v0))

    local = {p.vertices[i]: to_local(p.vertices[i]) for i in face.vertex_indices}
    base_cells = []
    for cell in p._triangulate_face(face):
        base_cells.append(tuple(local[p.vertices[i]] for i in cell))
    lattice_pts = _facet_lattice_points(p, face)
    extra = [to_local(q) for q in lattice_pts if q not in local]
    cells = _stellar_triangulation(base_cells, extra)
    return v0, basis, cells


def _cell_volume(cell):
    s = len(cell) - 1
    if s == 0:
        return Fraction(1)
    mat = [la.vsub(v, cell[0]) for v in cell[1:]]
    fact = 1
    for j in range(1, s + 1):
        fact *= j
    return abs(Fraction(la.det(mat))) / fact


def _flag_cells(p, face):
    """Barycentric-subdivision simplices of a face: one cell per face flag.

    Cell vertices are vertex-average barycenters of a chain of faces, which
    every lattice automorphism of the polytope maps to cells of the image
    face; the resulting set of cells is canonical.
    """
    def bcenter(f):
        vs = f.vertex_indices
        return tuple(
            la.norm_scalar(sum(Fraction(p.vertices[i][c]) for i in vs)
                           / len(vs))
            for c in range(p.dim))

    cells = []

    def walk(f, chain):
        chain = chain + [bcenter(f)]
        if f.dimension == 0:
            cells.append(tuple(reversed(chain)))
            return
        for child in p.face_children(f):
            walk(child, chain)

    walk(face, [])
    return cells


def discretize(p: Polytope, refinement: int = 0, group=None, side: str = "M",
               system=None) -> WeightedPointCloud:
    """Weighted point cloud approximating the boundary surface measure.

    ``refinement`` counts barycentric subdivision rounds applied to every
    cell.  Without a group, facets are cut into lattice simplices through
    all their lattice points (deterministic stellar triangulation).  With a
    group, cells are the facet flag simplices (barycentric subdivision),
    which are canonical under every automorphism, so the cloud is exactly
    invariant; ``side`` selects the action ("M" for the polytope, "N" for
    its dual).
    """
    if not p.is_lattice:
        raise ValueError("discretization needs a lattice polytope")
    if refinement < 0:
        raise ValueError("refinement must be >= 0")
    faces = p.facet_faces()

    def local_frame(face):
        verts = [p.vertices[i] for i in face.vertex_indices]
        v0 = verts[0]
        diffs = [la.vsub(v, v0) for v in verts[1:]]
        basis = la.saturation_basis(diffs)
        if not basis:
            return v0, basis, lambda dvec: ()
        # pick an invertible square subsystem once; reuse for every cell vertex
        cols = list(zip(*basis))
        rows, idx = [], []
        for r in range(len(cols)):
            if la.rank(rows + [list(cols[r])]) > len(rows):
                rows.append(list(cols[r]))
                idx.append(r)
                if len(rows) == len(basis):
                    break
        inv = la.inverse(rows)

        def to_local(dvec):
            return la.mat_vec(inv, [dvec[r] for r in idx])

        return v0, basis, to_local

    def measure_cells(face, ambient_cells):
        v0, basis, to_local = local_frame(face)
        out = []
        for cell in ambient_cells:
            local = tuple(to_local(la.vsub(v, v0)) for v in cell)
            vol = _cell_volume(local)
            centroid = tuple(
                la.norm_scalar(sum(Fraction(v[c]) for v in cell) / len(cell))
                for c in range(p.dim))
            out.append((centroid, vol))
        return out

    accum = {}
    for face in faces:
        if group is None:
            v0, basis, cells = _facet_cells(p, face)
            ambient = []
            for cell in cells:
                ambient.append(tuple(
                    tuple(la.norm_scalar(Fraction(v0[c]) + sum(
                        Fraction(v[j]) * basis[j][c] for j in range(len(basis))))
                        for c in range(p.dim))
                    for v in cell))
        else:
            ambient = _flag_cells(p, face)
        for _ in range(refinement):
            ambient = [sub for cell in ambient
                       for sub in _barycentric_subdivide(cell)]
        for centroid, vol in measure_cells(face, ambient):
            accum[centroid] = accum.get(centroid, Fraction(0)) + vol

    total = sum(accum.values(), Fraction(0))
    points = sorted(accum)
    masses = []
    facet_tags = []
    for pt in points:
        masses.append(la.norm_scalar(accum[pt] / total))
        tf = p.tight_facets(pt)
        if len(tf) != 1:
            raise ValueError("cell centroid not in a unique facet interior")
        facet_tags.append(tf[0])

    chamber_tags = (None,) * len(points)
    if system is not None and group is not None:
        chamber_tags = tuple(
            _chamber_label(system, group, pt, side) for pt in points)
    return WeightedPointCloud(tuple(points), tuple(masses), tuple(facet_tags),
                              chamber_tags, p, side)


def _incident_chambers(system, group, x, side):
    """Indices of group elements w with x in w(C+); several on walls."""
    out = []
    for i, e in enumerate(group.elements):
        if side == "M":
            inv = la.transpose(e.dual_matrix)
            y = la.mat_vec(inv, x)
            if system.is_dominant(y, "M"):
                out.append(i)
        else:
            inv = la.transpose(e.matrix)
            y = la.mat_vec(inv, x)
            if system.is_dominant(y, "N"):
                out.append(i)
    return out


def _chamber_label(system, group, x, side):
    return _incident_chambers(system, group, x, side)[0]


def chamber_mass(cloud: WeightedPointCloud, system, group, side=None):
    """Mass per Weyl chamber; wall points split equally among their chambers.

    For a cloud invariant under the group, every chamber carries exactly
    1/|W| of the total.
    """
    side = cloud.side if side is None else side
    out = {i: Fraction(0) for i in range(len(group.elements))}
    for pt, mass in zip(cloud.points, cloud.masses):
        inc = _incident_chambers(system, group, pt, side)
        share = Fraction(mass) / len(inc)
        for i in inc:
            out[i] += share
    return {i: la.norm_scalar(v) for i, v in out.items()}
