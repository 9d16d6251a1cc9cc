import random
from fractions import Fraction
from math import gcd

from plaidkite.params import make_param
from plaidkite.linalg import det
from plaidkite.plaid import plaid_classify, reduce_lambda1, OPPOSITE
from plaidkite.graph import (graph_grid, graph_classify, reconstruction,
                             canonical_T)
from plaidkite.intertwine import (psi_raw, intertwining_check,
                                  hitset_membership, hi_polygon, lo_polygon,
                                  dipole, dipole_representative, omega_map,
                                  plaid_reconstruction, build_correspondence,
                                  enumerate_crossing_problems, prove_all,
                                  barrier_sets, bounds_corners,
                                  out_of_bounds_test)


def _area(polygon):
    s = Fraction(0)
    n = len(polygon)
    for i in range(n):
        (x0, y0), (x1, y1) = polygon[i], polygon[(i + 1) % n]
        s += Fraction(x0) * Fraction(y1) - Fraction(x1) * Fraction(y0)
    return abs(s) / 2


def random_params(count, seed, qmax=40):
    rng = random.Random(seed)
    out = []
    while len(out) < count:
        q = rng.randint(3, qmax)
        p = rng.randint(1, q - 1)
        if gcd(p, q) == 1 and (p * q) % 2 == 0:
            out.append(make_param(p, q))
    return out


def test_psi_measure_factor():
    """On each branch at fixed A, psi is affine with Jacobian determinant
    of absolute value ((1+A)/2)^3."""
    param = make_param(2, 9)
    A, P = param.A, param.P
    u = (Fraction(1, 7), Fraction(-1, 5), Fraction(1, 3), P)
    h = Fraction(1, 997)
    for branch in ("+", "-"):
        base = psi_raw(u, branch)
        cols = []
        for k in range(3):
            du = list(u)
            du[k] += h
            img = psi_raw(tuple(du), branch)
            cols.append([(img[r] - base[r]) / h for r in range(3)])
        m = [[cols[c][r] for c in range(3)] for r in range(3)]
        assert abs(det(m)) == ((1 + A) / 2) ** 3


def test_hitset_area_identity():
    """area(hi) + area(lo) = 4 - 2P: the hitset fills exactly the
    grid-full proportion of each lattice cell (covolume 4)."""
    for param in random_params(10, seed=3):
        P = param.P
        total = _area(hi_polygon(param)) + _area(lo_polygon(param))
        assert total == 4 - 2 * P


def test_dipole_geometry():
    for param in random_params(6, seed=5):
        P = param.P
        dip = dipole(param)
        assert _area(dip) == 4 - 2 * P
        # bounded by the slope-1 lines y=x and y=x-(2-P)
        diffs = sorted({x - y for x, y in dip})
        assert diffs == [0, 2 - P]
        # omega maps its vertices onto the unit square corners
        corners = sorted(omega_map(param, v) for v in dip)
        assert corners == [(0, 0), (0, 1), (1, 0), (1, 1)]


def test_intertwining_and_hitset(p29, p38, p45):
    for param in (p29, p38, p45):
        w = param.omega
        assert intertwining_check(param, (0, 0, w, w)) == []


def test_reconstruction_identities(p29):
    """Graph and plaid reconstruction agree at every grid point of a
    block, and take the closed-form value at T(0,0)."""
    param = p29
    w = param.omega
    T, _ = canonical_T(param)
    for mn, pt, square in graph_grid(param, (0, 0, w, w)):
        g = reconstruction(param, graph_classify(param, pt))
        assert g == (pt[0] - pt[0].__floor__(), pt[1] - pt[1].__floor__())
        center = (square[0] + Fraction(1, 2), square[1] + Fraction(1, 2))
        red, _ = reduce_lambda1(plaid_classify(param, center))
        assert plaid_reconstruction(param, red) == g
    t0 = T((0, 0))
    q, p = param.q, param.p
    assert (t0[0], t0[1] - t0[1].__floor__()) == \
        (Fraction(1, 2 * q), Fraction(q - p, 2 * q * (q + p)))


def test_dipole_representative_unique(p38):
    P = p38.P
    w = p38.omega
    for mn, pt, square in graph_grid(p38, (0, 0, w, w)):
        center = (square[0] + Fraction(1, 2), square[1] + Fraction(1, 2))
        red, _ = reduce_lambda1(plaid_classify(p38, center))
        rep = dipole_representative(p38, red)
        a, b = omega_map(p38, rep)
        assert 0 <= a < 1 and 0 <= b < 1
        # the representative is a lattice translate of the input
        dx = rep[0] - red[0]
        assert dx % 2 == 0
        assert (rep[1] - red[1] - P * (dx / 2)) % 2 == 0


def test_hitset_contains_grid_images(p45):
    w = p45.omega
    for mn, pt, square in graph_grid(p45, (0, 0, w, w)):
        center = (square[0] + Fraction(1, 2), square[1] + Fraction(1, 2))
        red, _ = reduce_lambda1(plaid_classify(p45, center))
        assert hitset_membership(p45, red) == "inside"


def test_correspondence_census():
    entries = build_correspondence()
    assert len(entries) == 218
    nulls = sum(1 for e in entries if e.is_null)
    doubles = sum(1 for e in entries if e.double_sign is not None)
    singles = len(entries) - nulls - doubles
    assert nulls == 6
    assert singles == 174
    assert doubles == 38
    assert sum(1 for e in entries if e.double_sign == "+") == 19
    assert sum(1 for e in entries if e.double_sign == "-") == 19


def test_problem_enumeration():
    problems = enumerate_crossing_problems()
    assert len(problems) == 462
    # every problem names an RTP cell, a sign, a short edge and a side
    for pr in problems:
        assert 0 <= pr.k < 218
        assert pr.sign in "+-"
        assert pr.side in "NSEW"
        assert max(abs(pr.edge[0]), abs(pr.edge[1])) == 1


def test_prover_tallies():
    report = prove_all()
    assert len(report.problems) == 462
    assert len(report.solved) == 416
    assert len(report.recalcitrant) == 46
    methods = {}
    for pr in report.solved:
        methods[pr.method] = methods.get(pr.method, 0) + 1
    assert methods == {"graph": 206, "plaid": 176, "bounds": 34}


def test_recalcitrant_negation_symmetry():
    from plaidkite.intertwine import _negation_partner_table
    report = prove_all()
    neg = _negation_partner_table()
    keys = {pr.key() for pr in report.recalcitrant}
    for pr in report.recalcitrant:
        partner = (neg[pr.k], "-" if pr.sign == "+" else "+",
                   (-pr.edge[0], -pr.edge[1]), OPPOSITE[pr.side])
        assert partner in keys


def test_bounds_corners_and_zsets():
    corners = bounds_corners()
    assert corners
    zsets = barrier_sets()
    assert zsets
    # the out-of-bounds test is meaningful: some cells pass, most fail
    hits = sum(1 for k in range(218) if out_of_bounds_test(k))
    assert 0 < hits < 218
