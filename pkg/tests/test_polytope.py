import random
from fractions import Fraction

import pytest

from plaidkite.linalg import det
from plaidkite.polytope import (IntegerPolytope, vertex_enumerate,
                                read_table, write_table, DegeneratePolytope)


def simplex_volume_oracle(verts):
    """|det of edge matrix| / d! — the textbook simplex volume."""
    d = len(verts) - 1
    m = [[Fraction(verts[i + 1][c] - verts[0][c]) for c in range(d)]
         for i in range(d)]
    fact = 1
    for k in range(2, d + 1):
        fact *= k
    return abs(det(m)) / fact


def test_simplex_volume_matches_determinant():
    rng = random.Random(7)
    for dim in (2, 3, 4):
        trials = 0
        while trials < 12:
            verts = [tuple(rng.randint(-5, 5) for _ in range(dim))
                     for _ in range(dim + 1)]
            oracle = simplex_volume_oracle(verts)
            if oracle == 0:
                continue
            poly = IntegerPolytope(tuple(sorted(verts)), 1, dim=dim)
            assert poly.volume() == oracle
            trials += 1


def test_cube_volume_and_scaling():
    cube = IntegerPolytope(tuple(sorted(
        (x, y, z) for x in (0, 2) for y in (0, 2) for z in (0, 2))), 1)
    assert cube.volume() == 8
    halved = cube.rescaled(2)
    assert halved.scale == 2
    assert halved.volume() == 8  # volume is scale-independent


def test_containment_and_disjointness():
    cube = IntegerPolytope(tuple(sorted(
        (x, y) for x in (0, 4) for y in (0, 4))), 1)
    inner = IntegerPolytope(tuple(sorted(
        (x, y) for x in (1, 3) for y in (1, 3))), 1)
    far = inner.translate((10, 0))
    touching = cube.translate((4, 0))
    assert cube.contains_polytope(inner)
    assert not inner.contains_polytope(cube)
    assert cube.disjoint_interiors(far)
    # sharing a facet still counts as interior-disjoint
    assert cube.disjoint_interiors(touching)
    assert not cube.disjoint_interiors(inner)
    assert cube.contains_point((2, 2))
    assert not cube.contains_point((5, 2))


def test_intersection_volume():
    a = IntegerPolytope(tuple(sorted(
        (x, y) for x in (0, 3) for y in (0, 3))), 1)
    b = a.translate((2, 2))
    inter = a.intersect(b)
    assert inter is not None
    assert inter.volume() == 1
    assert a.intersect(a.translate((5, 0))) is None


def test_vertex_enumeration_of_cube():
    halfspaces = []
    for axis in range(3):
        lo = [0, 0, 0]
        hi = [0, 0, 0]
        lo[axis] = -1
        hi[axis] = 1
        halfspaces.append((tuple(lo), 0))   # -x_axis <= 0
        halfspaces.append((tuple(hi), 2))   # x_axis <= 2
    verts = vertex_enumerate(halfspaces, 3)
    assert sorted(verts) == sorted(
        (x, y, z) for x in (0, 2) for y in (0, 2) for z in (0, 2))


def test_table_round_trip(tmp_path):
    polys = [IntegerPolytope(tuple(sorted(
        (x, y) for x in (0, k) for y in (0, k))), 1, id=k)
        for k in (1, 2, 3)]
    path = tmp_path / "cells.tsv"
    write_table(path, polys, labels=["a", "b", "c"])
    back = read_table(path)
    assert [lab for _, lab in back] == ["a", "b", "c"]
    assert [p.vertices for p, _ in back] == [p.vertices for p in polys]


def test_degenerate_rejected():
    flat = IntegerPolytope(((0, 0), (1, 1), (2, 2)), 1, dim=2)
    with pytest.raises(DegeneratePolytope):
        flat.halfspaces()
