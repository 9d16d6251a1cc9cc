from fractions import Fraction

import pytest

from plaidkite.params import make_param
from plaidkite.plaid import plaid_polygons
from plaidkite.quasi import (classify_square, scan_region, find_catch,
                             linked_chains, build_homeomorphism,
                             niceness_test, straighten, vertical_compare,
                             SwitchFound, NotNice)


def block(param):
    w = param.omega
    return (0, 0, w, w)


def test_scan_has_no_anomalies(p29, p38, p45):
    for param in (p29, p38, p45):
        cls, anomalies = scan_region(param, block(param))
        assert all(not v for v in anomalies.values()), anomalies


def test_bad_squares_at_3_8(p38):
    """The first block at 3/8 contains exactly four bad squares, each
    with a catch; the adjacent blocks are perfectly pixellated."""
    cls, anomalies = scan_region(p38, (0, 0, 11, 11))
    bad = sorted(sq for sq, c in cls.items() if c.status == "bad")
    assert bad == [(3, 4), (3, 6), (4, 3), (4, 7)]
    assert not anomalies["uncaught"]
    for sq in bad:
        c = cls[sq]
        for offending in c.offending:
            catch = find_catch(p38, c, offending, cls=cls)
            assert catch.kind in (1, 2)
            assert catch.squares[0] == sq
    for k in (1, 2):
        cls2, _ = scan_region(p38, (11 * k, 0, 11 * (k + 1), 11))
        assert not any(c.status == "bad" for c in cls2.values())


def test_statuses_partition_block(p29):
    cls, _ = scan_region(p29, block(p29))
    assert set(c.status for c in cls.values()) <= \
        {"pixellated", "bad", "grid-empty", "trivial"}
    # grid-full squares are pixellated or bad; 2/9 has no bad ones
    assert not any(c.status == "bad" for c in cls.values())
    assert any(c.status == "pixellated" for c in cls.values())


def test_linked_chains_bound(p29, p38, p45):
    for param in (p29, p38, p45):
        chains = linked_chains(param, block(param))
        assert chains
        for chain in chains:
            assert chain.bound, (param, chain)
            assert 2 <= len(chain.squares)


def test_homeomorphism_displacement(p29, p38, p45, p12):
    for param in (p29, p38, p45, p12):
        matching = build_homeomorphism(param, block(param))
        assert matching.within_two, \
            (param, matching.max_displacement_sq)
        assert matching.pairs


def test_plaid_family_is_nice(p29):
    fam = plaid_polygons(p29, block(p29))
    w = p29.omega
    assert niceness_test(fam, (0, -1, w, w + 1)) == []


def test_vertical_compare_identity(p29):
    fam = plaid_polygons(p29, block(p29))
    w = p29.omega
    m = vertical_compare(fam, fam, (0, -1, w, w + 1))
    assert m.max_displacement_sq == 0


def test_vertical_compare_straightened(p29):
    fam = plaid_polygons(p29, block(p29))
    w = p29.omega
    rect = (0, -1, w, w + 1)
    st = straighten(fam, rect)
    m = vertical_compare(fam, st, rect)
    assert m.max_displacement_sq <= 2  # the sqrt(2) bound, squared


def test_vertical_compare_rejects_switch():
    """Mirror-image loops whose crossers swap order between consecutive
    lines form a switch and must be rejected."""
    loop_a = [(Fraction(1, 2), Fraction(1, 4)),
              (Fraction(5, 2), Fraction(7, 4)),
              (Fraction(5, 2), Fraction(15, 4)),
              (Fraction(1, 2), Fraction(13, 4))]
    loop_b = [(3 - x, y) for x, y in loop_a]
    with pytest.raises(SwitchFound):
        vertical_compare([loop_a], [loop_b], (0, 0, 3, 4))


def test_vertical_compare_demands_clearance(p29):
    """Families meeting the horizontal boundary of the rectangle are
    outside the comparator's preconditions."""
    fam = plaid_polygons(p29, block(p29))
    w = p29.omega
    with pytest.raises(NotNice):
        vertical_compare(fam, fam, (0, 0, w, w))
