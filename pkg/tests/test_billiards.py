from fractions import Fraction

import pytest

from plaidkite.billiards import (kite, outer_step, psi, first_return,
                                 dyn_graph, oracle_diff, SingularPoint)
from plaidkite.graph import edge_assignment


def test_kite_vertices(p12):
    assert set(kite(p12)) == {(-1, 0), (0, 1), (0, -1), (Fraction(1, 2), 0)}


def test_outer_step_is_a_point_reflection(p12):
    """The outer billiards map reflects through a kite vertex: the
    midpoint of (point, image) is a vertex."""
    verts = set(kite(p12))
    z = (Fraction(7, 2), Fraction(1))
    for _ in range(12):
        w = outer_step(p12, z)
        mid = ((z[0] + w[0]) / 2, (z[1] + w[1]) / 2)
        assert mid in verts
        z = w


def test_psi_preserves_odd_horizontals(p12):
    z = (Fraction(9, 4), Fraction(1))
    for _ in range(8):
        z = psi(p12, z)
        assert z[1].denominator == 1 and z[1] % 2 == 1


def test_first_return_parity(p12):
    for m0, n0 in ((1, 0), (0, 1), (1, 1), (2, 1), (3, 2)):
        m1, n1, eps, steps = first_return(p12, m0, n0)
        assert eps == (-1) ** (m0 + m1 + n0 + n1)
        assert (m1 - m0) ** 2 + (n1 - n0) ** 2 <= 2
        assert steps >= 1


def test_return_edges_match_assignment(p12):
    """Each dynamical return edge appears among the PET edge labels."""
    for m0, n0 in ((1, 0), (1, 1), (2, 1)):
        m1, n1, _, _ = first_return(p12, m0, n0)
        asg = edge_assignment(p12, (m0, n0))
        assert (m1 - m0, n1 - n0) in (asg.plus, asg.minus)


def test_small_oracle_diff(p12):
    missing, extra, isolated = oracle_diff(p12, 5)
    assert missing == []
    assert extra == []


def test_dyn_graph_components_closed(p12):
    edges, isolated = dyn_graph(p12, 5)
    degree = {}
    for a, b in edges:
        degree[a] = degree.get(a, 0) + 1
        degree[b] = degree.get(b, 0) + 1
    # interior vertices (not clipped by the window) have degree 2
    for v, d in degree.items():
        if abs(v[0]) < 5 and abs(v[1]) < 5:
            assert d == 2
