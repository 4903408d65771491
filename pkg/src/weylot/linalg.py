"""Exact linear algebra over the rationals and the integers.

Everything here works on tuples of ``int`` / ``fractions.Fraction`` and is
deliberately dependency-free: the geometry modules need exact answers, and
the matrices involved are tiny (dimension at most 8 or so).
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd

Vector = tuple
Matrix = tuple


def norm_scalar(q):
    """Collapse Fractions with denominator 1 to plain ints."""
    if isinstance(q, Fraction) and q.denominator == 1:
        return int(q)
    return q


def norm_vector(v) -> Vector:
    return tuple(norm_scalar(x) for x in v)


def vdot(a, b):
    return norm_scalar(sum(x * y for x, y in zip(a, b)))


def vadd(a, b) -> Vector:
    return tuple(norm_scalar(x + y) for x, y in zip(a, b))


def vsub(a, b) -> Vector:
    return tuple(norm_scalar(x - y) for x, y in zip(a, b))


def vscale(c, v) -> Vector:
    return tuple(norm_scalar(c * x) for x in v)


def mat_vec(m, v) -> Vector:
    return tuple(vdot(row, v) for row in m)


def mat_mul(a, b) -> Matrix:
    bt = tuple(zip(*b))
    return tuple(tuple(vdot(row, col) for col in bt) for row in a)


def transpose(m) -> Matrix:
    return tuple(zip(*m))


def identity(n) -> Matrix:
    return tuple(tuple(1 if i == j else 0 for j in range(n)) for i in range(n))


def is_integer_vector(v) -> bool:
    return all(isinstance(norm_scalar(x), int) for x in v)


def primitivize(v):
    """Scale an integer vector by 1/gcd.  Returns (primitive vector, gcd)."""
    g = 0
    for x in v:
        g = gcd(g, abs(x))
    if g == 0:
        return tuple(v), 0
    return tuple(x // g for x in v), g


def clear_denominators(v):
    """Integer vector parallel to a rational one.  Returns (ints, lcm of denominators)."""
    mult = 1
    for x in v:
        d = Fraction(x).denominator
        mult = mult * d // gcd(mult, d)
    return tuple(int(x * mult) for x in v), mult


def rank(rows) -> int:
    """Rank of a matrix given as an iterable of rows."""
    m = [list(map(Fraction, r)) for r in rows]
    if not m:
        return 0
    ncols = len(m[0])
    r = 0
    for c in range(ncols):
        piv = next((i for i in range(r, len(m)) if m[i][c] != 0), None)
        if piv is None:
            continue
        m[r], m[piv] = m[piv], m[r]
        inv = 1 / m[r][c]
        m[r] = [x * inv for x in m[r]]
        for i in range(len(m)):
            if i != r and m[i][c] != 0:
                f = m[i][c]
                m[i] = [a - f * b for a, b in zip(m[i], m[r])]
        r += 1
        if r == len(m):
            break
    return r


def det(m):
    """Exact determinant (fraction-free Bareiss for integer input)."""
    n = len(m)
    a = [list(row) for row in m]
    if all(isinstance(x, int) for row in a for x in row):
        sign = 1
        prev = 1
        for k in range(n - 1):
            if a[k][k] == 0:
                piv = next((i for i in range(k + 1, n) if a[i][k] != 0), None)
                if piv is None:
                    return 0
                a[k], a[piv] = a[piv], a[k]
                sign = -sign
            for i in range(k + 1, n):
                for j in range(k + 1, n):
                    a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) // prev
            prev = a[k][k]
        return sign * a[-1][-1]
    a = [[Fraction(x) for x in row] for row in a]
    sign = 1
    out = Fraction(1)
    for c in range(n):
        piv = next((i for i in range(c, n) if a[i][c] != 0), None)
        if piv is None:
            return 0
        if piv != c:
            a[c], a[piv] = a[piv], a[c]
            sign = -sign
        out *= a[c][c]
        inv = 1 / a[c][c]
        a[c] = [x * inv for x in a[c]]
        for i in range(c + 1, n):
            if a[i][c] != 0:
                f = a[i][c]
                a[i] = [x - f * y for x, y in zip(a[i], a[c])]
    return norm_scalar(sign * out)


def solve(m, b):
    """Solve the square system m x = b exactly; None if singular."""
    n = len(m)
    a = [[Fraction(x) for x in row] + [Fraction(y)] for row, y in zip(m, b)]
    for c in range(n):
        piv = next((i for i in range(c, n) if a[i][c] != 0), None)
        if piv is None:
            return None
        a[c], a[piv] = a[piv], a[c]
        inv = 1 / a[c][c]
        a[c] = [x * inv for x in a[c]]
        for i in range(n):
            if i != c and a[i][c] != 0:
                f = a[i][c]
                a[i] = [x - f * y for x, y in zip(a[i], a[c])]
    return tuple(norm_scalar(a[i][n]) for i in range(n))


def inverse(m):
    """Exact inverse of a square matrix; None if singular."""
    n = len(m)
    a = [[Fraction(x) for x in row] + [Fraction(int(i == j)) for j in range(n)]
         for i, row in enumerate(m)]
    for c in range(n):
        piv = next((i for i in range(c, n) if a[i][c] != 0), None)
        if piv is None:
            return None
        a[c], a[piv] = a[piv], a[c]
        inv = 1 / a[c][c]
        a[c] = [x * inv for x in a[c]]
        for i in range(n):
            if i != c and a[i][c] != 0:
                f = a[i][c]
                a[i] = [x - f * y for x, y in zip(a[i], a[c])]
    return tuple(tuple(norm_scalar(a[i][n + j]) for j in range(n)) for i in range(n))


def adjugate_int(m):
    """Adjugate of an integer matrix, computed from cofactors."""
    n = len(m)
    if n == 1:
        return ((1,),)
    cof = [[0] * n for _ in range(n)]
    for i in range(n):
        for j in range(n):
            minor = [row[:j] + row[j + 1:] for k, row in enumerate(m) if k != i]
            cof[i][j] = (-1) ** (i + j) * det(minor)
    return tuple(tuple(cof[j][i] for j in range(n)) for i in range(n))


def nullspace(rows):
    """Primitive integer basis of the rational null space of the rows."""
    if not rows:
        return ()
    ncols = len(rows[0])
    a = [[Fraction(x) for x in r] for r in rows]
    pivots = []
    r = 0
    for c in range(ncols):
        piv = next((i for i in range(r, len(a)) if a[i][c] != 0), None)
        if piv is None:
            continue
        a[r], a[piv] = a[piv], a[r]
        inv = 1 / a[r][c]
        a[r] = [x * inv for x in a[r]]
        for i in range(len(a)):
            if i != r and a[i][c] != 0:
                f = a[i][c]
                a[i] = [x - f * y for x, y in zip(a[i], a[r])]
        pivots.append(c)
        r += 1
        if r == len(a):
            break
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for fc in free:
        v = [Fraction(0)] * ncols
        v[fc] = Fraction(1)
        for i, pc in enumerate(pivots):
            v[pc] = -a[i][fc]
        ints, _ = clear_denominators(v)
        prim, _ = primitivize(ints)
        basis.append(prim)
    return tuple(basis)


def integer_kernel(rows):
    """Basis of {x integer : rows . x = 0} via unimodular column reduction."""
    if not rows:
        return ()
    m = [list(r) for r in rows]
    nrows, ncols = len(m), len(m[0])
    u = [[int(i == j) for j in range(ncols)] for i in range(ncols)]

    def col_op(j, k, f):
        # column_j -= f * column_k
        for i in range(nrows):
            m[i][j] -= f * m[i][k]
        for i in range(ncols):
            u[i][j] -= f * u[i][k]

    def col_swap(j, k):
        for i in range(nrows):
            m[i][j], m[i][k] = m[i][k], m[i][j]
        for i in range(ncols):
            u[i][j], u[i][k] = u[i][k], u[i][j]

    pivot_col = 0
    for i in range(nrows):
        if pivot_col == ncols:
            break
        while True:
            nz = [k for k in range(pivot_col, ncols) if m[i][k] != 0]
            if len(nz) <= 1:
                if nz and nz[0] != pivot_col:
                    col_swap(nz[0], pivot_col)
                break
            k = min(nz, key=lambda c: abs(m[i][c]))
            for c in nz:
                if c != k:
                    col_op(c, k, m[i][c] // m[i][k])
        if m[i][pivot_col] != 0:
            pivot_col += 1
    kernel = []
    for j in range(pivot_col, ncols):
        if all(m[i][j] == 0 for i in range(nrows)):
            kernel.append(tuple(u[i][j] for i in range(ncols)))
    return tuple(kernel)


def saturation_basis(vectors):
    """Basis of (rational span of ``vectors``) intersected with the integer lattice.

    The input vectors must be integral.  The result is a basis of the
    saturated sublattice, so coordinates of any lattice point of the span
    in this basis are integers.
    """
    vecs = [v for v in vectors if any(x != 0 for x in v)]
    if not vecs:
        return ()
    orth = nullspace(vecs)
    if not orth:
        n = len(vecs[0])
        return identity(n)
    return integer_kernel(orth)
