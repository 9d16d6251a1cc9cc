from fractions import Fraction

from plaidkite.plaid import (full_partition, x2_partition, triple_partition,
                             fundamental_box, plaid_classify, reduce_lambda1,
                             tile_at, follow, plaid_polygons, capacity, mass,
                             OPPOSITE, DIRECTION)


def test_full_partition_counts_and_volume():
    cells = full_partition()
    assert len(cells) == 26
    assert sum(c.geometry.volume() for c in cells) == 8
    # exactly two unlabeled (trivial-tile) cells arise from the seeds
    labels = [c.label for c in cells]
    assert all(lab is None or (lab[0] in "NSEW" and lab[1] in "NSEW")
               for lab in labels)


def test_full_partition_disjoint_and_clean():
    cells = full_partition()
    for c in cells:
        assert c.geometry.rescaled(60).clean_check(3)
    for i in range(len(cells)):
        for j in range(i + 1, len(cells)):
            assert cells[i].geometry.disjoint_interiors(cells[j].geometry)


def test_x2_partition_volume():
    cells = x2_partition()
    assert sum(c.geometry.volume() for c in cells) == 16


def test_fundamental_box():
    assert fundamental_box().volume() == 8


def test_classify_kills_lambda1(p29):
    center = (Fraction(5, 2), Fraction(7, 2))
    red, word = reduce_lambda1(plaid_classify(p29, center))
    assert all(-1 <= v <= 1 for v in red[:3])


def test_tiles_chain_consistently(p29):
    w = p29.omega
    for i in range(w):
        for j in range(w):
            c = (Fraction(2 * i + 1, 2), Fraction(2 * j + 1, 2))
            lab = tile_at(p29, c)
            if lab is None:
                continue
            nxt = follow(p29, c)
            nlab = tile_at(p29, nxt)
            # the outgoing connector enters the next tile on the
            # opposite side
            assert nlab is not None
            assert nlab[0] == OPPOSITE[lab[1]]
            d = DIRECTION[lab[1]]
            assert nxt == (c[0] + d[0], c[1] + d[1])


def test_polygons_close_up(p29, p38):
    for param in (p29, p38):
        w = param.omega
        comps = plaid_polygons(param, (0, 0, w, w))
        assert comps
        for comp in comps:
            # consecutive connector midpoints are half-steps apart
            n = len(comp)
            for k in range(n):
                a, b = comp[k], comp[(k + 1) % n]
                assert abs(a[0] - b[0]) + abs(a[1] - b[1]) == 1


def test_capacity_mass_periodicity(p29):
    w = p29.omega
    for n in range(3 * w):
        assert capacity(p29, n) == capacity(p29, n + w)
        assert mass(p29, n) == mass(p29, n + w)


def test_vertex_counts_match_edges(p38):
    """Every tile has exactly one inbound and one outbound connector, so
    each block's tile count equals its connector-midpoint count."""
    w = p38.omega
    comps = plaid_polygons(p38, (0, 0, w, w))
    total_midpoints = sum(len(c) for c in comps)
    tiles = sum(
        1 for i in range(w) for j in range(w)
        if tile_at(p38, (Fraction(2 * i + 1, 2), Fraction(2 * j + 1, 2)))
        is not None)
    assert total_midpoints == tiles
