from fractions import Fraction

import pytest

from weylot.polytope import convex_hull


@pytest.fixture
def square():
    return convex_hull([(1, 1), (1, -1), (-1, 1), (-1, -1)])


@pytest.fixture
def diamond():
    return convex_hull([(1, 0), (-1, 0), (0, 1), (0, -1)])


@pytest.fixture
def hexagon():
    return convex_hull([(1, 0), (0, 1), (1, 1), (-1, 0), (0, -1), (-1, -1)])


@pytest.fixture
def p2_triangle():
    return convex_hull([(2, 1), (-1, 1), (-1, -2)])


@pytest.fixture
def p2_dual_triangle():
    return convex_hull([(1, 0), (0, 1), (-1, -1)])


@pytest.fixture
def segment():
    return convex_hull([(-1,), (1,)])


@pytest.fixture
def cube():
    return convex_hull([(x, y, z) for x in (1, -1) for y in (1, -1)
                        for z in (1, -1)])


@pytest.fixture
def octahedron(cube):
    return cube.dual()


@pytest.fixture
def b2_octagon():
    return convex_hull([(1, 2), (2, 1), (-1, 2), (2, -1),
                        (1, -2), (-2, 1), (-1, -2), (-2, -1)])


def frac(a, b=1):
    return Fraction(a, b)
