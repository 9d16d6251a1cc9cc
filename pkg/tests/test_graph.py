import random
from fractions import Fraction
from math import gcd, floor

from hypothesis import given, settings, strategies as st

from plaidkite.params import make_param
from plaidkite.graph import (canonical_T, dT, dT_image, anchor_point,
                             graph_grid, grid_geometry_suite, phi_prime,
                             graph_classify, reconstruction, edge_assignment,
                             graph_partitions, build_graph,
                             double_crossing_audit, double_crossing_scan,
                             orientation_rho)


def random_params(count, seed, qmax=60):
    rng = random.Random(seed)
    out = []
    while len(out) < count:
        q = rng.randint(3, qmax)
        p = rng.randint(1, q - 1)
        if gcd(p, q) == 1 and (p * q) % 2 == 0:
            out.append(make_param(p, q))
    return out


def test_partitions_counts():
    plus, minus = graph_partitions()
    assert len(plus) == len(minus) == 14
    assert sum(c.geometry.volume() for c in plus) == Fraction(7, 3)
    assert sum(c.geometry.volume() for c in minus) == Fraction(7, 3)
    assert all(c.label != (1, -1) for c in plus)
    # minus labels are the negated plus labels
    assert sorted(c.label for c in minus) == \
        sorted((-a, -b) for a, b in (c.label for c in plus))


def test_grid_geometry_at_twenty_random_params():
    for param in random_params(20, seed=11):
        results = grid_geometry_suite(param)
        bad = [name for name, ok in results.items() if not ok]
        assert not bad, (param, bad)


def test_translation_fixed_values(p29):
    T, T_inv = canonical_T(p29)
    q, p = p29.q, p29.p
    t0 = T((0, 0))
    assert t0[0] == Fraction(1, 2 * q)
    assert t0[1] - floor(t0[1]) == Fraction(q - p, 2 * q * (q + p))
    # the anchor pulls back to an integer point
    assert all(v.denominator == 1 for v in T_inv(anchor_point(p29)))


def test_grid_periods(p29):
    """(0, omega) is a grid period: dT(q, -p) = (0, omega)."""
    assert dT_image(p29, p29.q, -p29.p) == (0, p29.omega)


@given(st.integers(-40, 40), st.integers(-40, 40))
@settings(max_examples=60, deadline=None)
def test_reconstruction_identity(m, n):
    param = make_param(3, 8)
    T, _ = canonical_T(param)
    pt = T((m, n))
    rec = reconstruction(param, graph_classify(param, pt))
    assert rec == (pt[0] - floor(pt[0]), pt[1] - floor(pt[1]))


@given(st.integers(-20, 20), st.integers(-20, 20))
@settings(max_examples=40, deadline=None)
def test_edge_reciprocity(m, n):
    param = make_param(2, 9)
    asg = edge_assignment(param, (m, n))
    for i, j in asg:
        if (i, j) == (0, 0):
            continue
        back = edge_assignment(param, (m + i, n + j))
        assert (-i, -j) in (back.plus, back.minus)


def test_edge_lengths_bounded(p38):
    fam = build_graph(p38, (-6, -6, 6, 6))
    for e in fam.edges:
        (m0, n0), (m1, n1) = tuple(e)
        assert (m1 - m0) ** 2 + (n1 - n0) ** 2 <= 2


def test_orientation_parity(p29):
    """rho flags which partition supplies the outward edge; it is an
    integer-valued floor and shifts by 1+A-steps."""
    for m in range(-5, 6):
        assert orientation_rho(p29, m, 0) == floor(
            (1 + p29.A) * m + p29.iota)


def test_double_crossing_audit_and_scan(p29):
    double_crossing_audit()
    assert double_crossing_scan(p29, (0, 0, p29.omega, p29.omega)) == []


def test_phi_prime_matches_classify(p45):
    T, _ = canonical_T(p45)
    for m in range(-3, 4):
        for n in range(-3, 4):
            assert phi_prime(p45, m, n) == graph_classify(p45, T((m, n)))


def test_grid_points_one_per_square(p45):
    pts = graph_grid(p45, (-8, -8, 8, 8))
    squares = [sq for _, _, sq in pts]
    assert len(squares) == len(set(squares))
    for _, pt, sq in pts:
        assert sq[0] < pt[0] < sq[0] + 1
        assert sq[1] < pt[1] < sq[1] + 1
