import os

import pytest

from weylot import fileio
from weylot.polytope import convex_hull
from weylot.rootsystems import build_root_system
from weylot.weyl import mr_family, weyl_polytope

HERE = os.path.join(os.path.dirname(__file__), "fixtures")


def load(name):
    with open(os.path.join(HERE, name + ".poly"), encoding="utf-8") as fh:
        return fileio.parse_polytope(fh.read())


def test_files_parse_and_roundtrip():
    for name in sorted(os.listdir(HERE)):
        assert name.endswith(".poly")
        p = load(name[:-5])
        text = fileio.serialize_polytope(p)
        assert fileio.parse_polytope(text) == p


def test_files_match_their_constructions():
    assert load("square") == convex_hull([(1, 1), (1, -1), (-1, 1), (-1, -1)])
    assert load("octahedron") == load("cube").dual()
    assert load("p2-simplex") == mr_family("An-projective", 2).polytope
    assert load("p3-dual") == mr_family("An-projective", 3).polytope.dual()
    assert load("v3") == mr_family("Aodd-v", 3).polytope
    b2 = build_root_system("B", 2)
    assert load("b2-octagon") == weyl_polytope(b2, (2, 3)).polytope


def test_reflexivity_flags():
    reflexive = {"square", "diamond", "hexagon", "cube", "octahedron",
                 "p2-simplex", "p2-dual", "p3-simplex", "p3-dual", "v3"}
    for name in sorted(os.listdir(HERE)):
        p = load(name[:-5])
        assert p.is_reflexive == (name[:-5] in reflexive)
