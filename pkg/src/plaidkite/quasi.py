"""Square classification, catches, chains, and the quasi-isomorphism.

A unit square is *plaid nontrivial* when its plaid tile is a connector,
and *grid full* when it contains a graph grid point.  A grid-full square
is *pixellated* when triviality matches on both sides and the two graph
edges incident to the grid point cross the square boundary in the
interiors of the two plaid-edge-set sides; otherwise it is *bad*, and
each offending edge must be involved in a catch (one of two template
patterns up to grid symmetry).  Grid-empty squares are handled by linked
chains, each of which must be bound by a single graph edge.  Out of
these local pictures a homeomorphism from the arithmetic graph polygons
onto the plaid polygons is assembled, moving no point more than 2 units.

The second half of the module is the generic vertical comparator for
families of polygons: niceness tests, straightening, and the column-by-
column matching of the Vertical Lemma.
"""

from fractions import Fraction
from math import floor

from .plaid import tile_at, follow, DIRECTION, OPPOSITE
from .graph import graph_grid, edge_assignment, dT_image, build_graph


class NoCatch(Exception):
    """An offending edge matches neither catch template."""


class MatchingFailure(Exception):
    """The homeomorphism cannot be assembled."""


class NotNice(Exception):
    """A family fails the niceness test."""


class CountMismatch(Exception):
    """A_L and B_L differ on some vertical line."""


class SwitchFound(Exception):
    """A switch configuration between consecutive vertical lines."""


SIDE_OF = {"N": (0, 1), "S": (0, -1), "E": (1, 0), "W": (-1, 0)}


def _side_midpoint(square, side):
    x, y = square
    return {"N": (x + Fraction(1, 2), y + 1),
            "S": (x + Fraction(1, 2), y),
            "E": (x + 1, y + Fraction(1, 2)),
            "W": (x, y + Fraction(1, 2))}[side]


def _segment_square_exit(p, v, square):
    """The side of `square` through which the ray p + t v (t in (0,1])
    first leaves, with the crossing point; p lies inside the square.
    Returns (side, point, interior) where interior is False when the
    crossing hits a corner."""
    x0, y0 = square
    best = None
    for side, (nx, ny) in SIDE_OF.items():
        # side plane: n . q = c
        if side == "N":
            denom, num = v[1], (y0 + 1) - p[1]
        elif side == "S":
            denom, num = -v[1], p[1] - y0
        elif side == "E":
            denom, num = v[0], (x0 + 1) - p[0]
        else:
            denom, num = -v[0], p[0] - x0
        if denom <= 0:
            continue
        t = Fraction(num) / denom
        if 0 < t <= 1 and (best is None or t < best[0]):
            q = (p[0] + t * v[0], p[1] + t * v[1])
            best = (t, side, q)
    if best is None:
        return None
    t, side, q = best
    if side in ("N", "S"):
        interior = x0 < q[0] < x0 + 1
    else:
        interior = y0 < q[1] < y0 + 1
    return side, q, interior


class SquareClassification:
    __slots__ = ("square", "tile", "plaid_edge_set", "grid_point",
                 "grid_mn", "graph_labels", "graph_edges", "status",
                 "offending", "unused_sides", "edge_sides")

    def __init__(self, square):
        self.square = square
        self.tile = None
        self.plaid_edge_set = ()
        self.grid_point = None
        self.grid_mn = None
        self.graph_labels = None
        self.graph_edges = ()
        self.status = None
        self.offending = []
        self.unused_sides = []
        self.edge_sides = []

    def __repr__(self):
        return f"SquareClassification({self.square}, {self.status})"


def classify_square(param, square, _grid_lookup=None):
    """Join the plaid tile, the grid point, and the two incident graph
    edges over one unit square and classify it."""
    sq = (int(square[0]), int(square[1]))
    out = SquareClassification(sq)
    center = (sq[0] + Fraction(1, 2), sq[1] + Fraction(1, 2))
    out.tile = tile_at(param, center)
    if out.tile is not None:
        out.plaid_edge_set = (out.tile[0], out.tile[1])

    if _grid_lookup is not None:
        hit = _grid_lookup.get(sq)
    else:
        pts = graph_grid(param, (sq[0], sq[1], sq[0] + 1, sq[1] + 1))
        pts = [(mn, pt) for mn, pt, s in pts if s == sq]
        hit = pts[0] if pts else None
    if hit is None:
        out.status = "grid-empty"
        return out
    out.grid_mn, out.grid_point = hit
    assign = edge_assignment(param, out.grid_mn)
    out.graph_labels = (assign.plus, assign.minus)
    if assign.isolated:
        out.status = "trivial" if out.tile is None else "bad"
        if out.status == "bad":
            out.unused_sides = list(out.plaid_edge_set)
        return out
    if out.tile is None:
        out.status = "bad"
        return out

    edges = []
    for lab in out.graph_labels:
        v = dT_image(param, *lab)
        edges.append((out.grid_point,
                      (out.grid_point[0] + v[0], out.grid_point[1] + v[1])))
    out.graph_edges = tuple(edges)

    used = set()
    for lab in out.graph_labels:
        v = dT_image(param, *lab)
        exit_info = _segment_square_exit(out.grid_point, v, sq)
        if exit_info is None:
            out.offending.append((lab, None))
            continue
        side, point, interior = exit_info
        out.edge_sides.append((lab, side, point))
        if interior and side in out.plaid_edge_set:
            used.add(side)
        else:
            out.offending.append((lab, side))
    out.unused_sides = [s for s in out.plaid_edge_set if s not in used]
    out.status = "pixellated" if not out.offending and not out.unused_sides \
        else "bad"
    return out


def _grid_lookup(param, region):
    x0, y0, x1, y1 = region
    lookup = {}
    for mn, pt, sq in graph_grid(param, (x0, y0, x1, y1)):
        lookup[sq] = (mn, pt)
    return lookup


def scan_region(param, region):
    """Classify every square in the region and audit the Pixellation
    statements.  Returns (classifications, anomalies)."""
    x0, y0, x1, y1 = (int(v) for v in region)
    lookup = _grid_lookup(param, (x0 - 2, y0 - 2, x1 + 2, y1 + 2))
    cls = {}
    for x in range(x0, x1):
        for y in range(y0, y1):
            cls[(x, y)] = classify_square(param, (x, y),
                                          _grid_lookup=lookup)
    anomalies = {"double_crossings": [], "errant_edges": [],
                 "same_side": [], "uncaught": [],
                 "nontriviality": []}
    # statement 2: plaid nontrivial iff graph nontrivial (grid-full)
    for sq, c in cls.items():
        if c.status in ("grid-empty",):
            continue
        plaid_triv = c.tile is None
        graph_triv = c.graph_labels is not None and \
            c.graph_labels[0] == (0, 0) and c.graph_labels[1] == (0, 0)
        if plaid_triv != graph_triv:
            anomalies["nontriviality"].append(sq)
    # statement 4 and double crossings on shared sides
    crossings = {}
    for sq, c in cls.items():
        sides = [side for _, side, _ in c.edge_sides]
        if len(sides) == 2 and sides[0] == sides[1]:
            anomalies["same_side"].append(sq)
        for lab, side, point in c.edge_sides:
            if side in ("N", "S"):
                key = ("H", point[1], floor(point[0]))
            else:
                key = ("V", point[0], floor(point[1]))
            crossings.setdefault(key, set()).add((c.grid_mn, lab))
    for key, who in crossings.items():
        starters = {mn for mn, lab in who}
        if len(starters) > 2 or (len(who) > 1 and len(starters) == len(who)):
            # two vertex-disjoint edges through one unit edge
            pairs = sorted(who)
            disjoint = [
                (a, b) for a in pairs for b in pairs
                if a < b and a[0] != b[0]
                and (a[0][0] + a[1][0], a[0][1] + a[1][1]) != b[0]
                and (b[0][0] + b[1][0], b[0][1] + b[1][1]) != a[0]]
            if disjoint:
                anomalies["double_crossings"].append((key, pairs))
    # statement 3: errant edges
    anomalies["errant_edges"] = _errant_edges(param, cls)
    # statement 5: every offending edge caught, bijectively
    for sq, c in cls.items():
        if c.status != "bad" or c.graph_labels is None:
            continue
        if len(c.offending) != len(c.unused_sides):
            anomalies["uncaught"].append((sq, "count"))
            continue
        for lab, side in c.offending:
            try:
                find_catch(param, c, (lab, side), cls)
            except NoCatch:
                anomalies["uncaught"].append((sq, lab))
    return cls, anomalies


def _errant_edges(param, cls):
    """Edges that cross a plaid-edge-set side shared by two squares and
    then run a full unit past the far side of that pair while the plaid
    polygon in the second square does not follow (all orientations)."""
    bad = []
    for sq, c in cls.items():
        for lab, side, point in c.edge_sides:
            if side not in c.plaid_edge_set:
                continue
            d = DIRECTION[side]
            nb = (sq[0] + d[0], sq[1] + d[1])
            c2 = cls.get(nb)
            if c2 is None or c2.tile is None:
                continue
            if OPPOSITE[side] not in c2.plaid_edge_set:
                continue
            v = dT_image(param, *lab)
            end = (c.grid_point[0] + v[0], c.grid_point[1] + v[1])
            # the edge is errant when it runs at least one unit past the
            # far side of the neighbor square while the plaid polygon in
            # the neighbor square does not continue in that direction
            far = {"N": nb[1] + 2, "S": nb[1] - 1,
                   "E": nb[0] + 2, "W": nb[0] - 1}[side]
            coord = end[1] if side in ("N", "S") else end[0]
            past = coord >= far if side in ("N", "E") else coord <= far
            if past and side not in c2.plaid_edge_set:
                bad.append((sq, lab, side))
    return bad


class Catch:
    __slots__ = ("kind", "squares", "unused_side", "edge_label",
                 "diagonal_sign")

    def __init__(self, kind, squares, unused_side, edge_label,
                 diagonal_sign):
        self.kind = kind
        self.squares = squares
        self.unused_side = unused_side
        self.edge_label = edge_label
        self.diagonal_sign = diagonal_sign

    def __repr__(self):
        return f"Catch(kind={self.kind}, squares={self.squares})"


# slope sign of the connector segment: N-mid to E-mid runs from
# (1/2, 1) to (1, 1/2), so NE (and SW) tiles carry slope -1
_DIAG_SIGN = {frozenset("SW"): -1, frozenset("NE"): -1,
              frozenset("SE"): 1, frozenset("NW"): 1}


def find_catch(param, classification, offending, cls=None):
    """Locate the catch for an offending edge: the edge must run from
    the bad square's grid point to another grid point, crossing only
    grid-empty squares on the way, while the plaid polygon leaving the
    unused side runs as a straight diagonal through those squares; the
    diagonal's slope sign must match the edge's slope sign.  The kind is
    read off the bad square's tile: a straight tile gives the first
    kind, a turning tile the second (which involves one more grid-empty
    square of the template)."""
    c = classification
    lab = offending[0] if isinstance(offending[0], tuple) else offending
    v = dT_image(param, *lab)
    if v == (0, 0):
        raise NoCatch("isolated vertex has no edges")
    start = c.grid_point
    end = (start[0] + v[0], start[1] + v[1])
    end_sq = (floor(end[0]), floor(end[1]))
    edge_sign = 0
    if v[0] != 0 and v[1] != 0:
        edge_sign = 1 if (v[0] > 0) == (v[1] > 0) else -1

    # the unused side must lead to a straight diagonal run of the plaid
    # polygon through grid-empty squares toward the square holding the
    # far end of the offending edge
    for unused in c.unused_sides:
        d = DIRECTION[unused]
        walk = (c.square[0] + d[0], c.square[1] + d[1])
        enter = OPPOSITE[unused]
        diag_signs = []
        walked = []
        found = False
        for _ in range(4):
            if walk == end_sq:
                found = True
                break
            tile = tile_at(param, (walk[0] + Fraction(1, 2),
                                   walk[1] + Fraction(1, 2)))
            if tile is None or enter not in tile:
                break
            key = frozenset(tile)
            if key not in _DIAG_SIGN:
                break
            diag_signs.append(_DIAG_SIGN[key])
            walked.append(walk)
            exit_side = tile[1] if tile[0] == enter else tile[0]
            step = DIRECTION[exit_side]
            walk = (walk[0] + step[0], walk[1] + step[1])
            enter = OPPOSITE[exit_side]
        if not found or not diag_signs:
            continue
        if len(set(diag_signs)) != 1:
            continue
        if edge_sign and diag_signs[0] != edge_sign:
            continue
        if any(_grid_full(param, s, cls) for s in walked):
            continue
        kind = 1 if frozenset(c.tile) in (frozenset("NS"), frozenset("EW")) \
            else 2
        squares = [c.square] + walked + [end_sq]
        return Catch(kind, squares, unused, lab, diag_signs[0])
    raise NoCatch(f"no catch for edge {lab} at {c.square}")


def _grid_full(param, square, cls=None):
    """Whether the unit square contains a graph grid point."""
    if cls is not None and square in cls:
        return cls[square].grid_point is not None
    hit = graph_grid(param, (square[0], square[1],
                             square[0] + 1, square[1] + 1))
    return any(sq == square for _, _, sq in hit)


def _squares_crossed(p, q):
    """Unit squares whose interiors the open segment pq meets, found
    exactly: cut the segment at every integer vertical and horizontal it
    crosses and classify each piece by its midpoint."""
    px, py = Fraction(p[0]), Fraction(p[1])
    vx, vy = Fraction(q[0]) - px, Fraction(q[1]) - py
    times = {Fraction(0), Fraction(1)}
    if vx:
        lo, hi = sorted((px, px + vx))
        for k in range(floor(lo) + 1, floor(hi) + 1):
            times.add((k - px) / vx)
    if vy:
        lo, hi = sorted((py, py + vy))
        for k in range(floor(lo) + 1, floor(hi) + 1):
            times.add((k - py) / vy)
    cuts = sorted(t for t in times if 0 <= t <= 1)
    out = []
    seen = set()
    for a, b in zip(cuts, cuts[1:]):
        t = (a + b) / 2
        sq = (floor(px + t * vx), floor(py + t * vy))
        if sq not in seen:
            seen.add(sq)
            out.append(sq)
    return out


class LinkedChain:
    __slots__ = ("squares", "bound")

    def __init__(self, squares, bound):
        self.squares = squares
        self.bound = bound

    def __len__(self):
        return len(self.squares)

    def __repr__(self):
        return f"LinkedChain({self.squares}, bound={self.bound})"


def _polygon_squares(param, start_square, cap=100000):
    """The cycle of squares visited by the plaid polygon through the
    given square, traced with the oriented tiles."""
    center = (start_square[0] + Fraction(1, 2),
              start_square[1] + Fraction(1, 2))
    if tile_at(param, center) is None:
        return None
    cur = center
    seen = []
    for _ in range(cap):
        seen.append((floor(cur[0]), floor(cur[1])))
        cur = follow(param, cur)
        if cur == center:
            return seen
    raise MatchingFailure("plaid polygon failed to close")


def linked_chains(param, region, edges=None):
    """All linked chains in the region: endpoints grid full, interior
    grid empty, all threaded by one plaid polygon, with bound flags."""
    x0, y0, x1, y1 = (int(v) for v in region)
    lookup = _grid_lookup(param, (x0 - 2, y0 - 2, x1 + 2, y1 + 2))
    if edges is None:
        fam = build_graph(param, (x0 - 3, y0 - 3, x1 + 3, y1 + 3))
        edges = set()
        for e in fam.edges:
            a, b = tuple(e)
            edges.add((a, b))
            edges.add((b, a))
    poly_cache = {}
    adj = set()

    def poly_id(sq):
        if sq not in poly_cache:
            squares = _polygon_squares(param, sq)
            if squares is None:
                poly_cache[sq] = None
            else:
                marker = min(squares)
                for s in set(squares):
                    poly_cache[s] = marker
                # consecutive squares along the polygon cycle; a chain
                # must follow the polygon through each shared side
                n = len(squares)
                for i in range(n):
                    a, b = squares[i], squares[(i + 1) % n]
                    adj.add((a, b))
                    adj.add((b, a))
        return poly_cache.get(sq)

    chains = []
    dirs = [(1, 0), (-1, 0), (0, 1), (0, -1)]

    def extend(path):
        last = path[-1]
        for d in dirs:
            nxt = (last[0] + d[0], last[1] + d[1])
            if nxt in path:
                continue
            if not (x0 <= nxt[0] < x1 and y0 <= nxt[1] < y1):
                continue
            pid = poly_id(nxt)
            if pid is None or pid != poly_id(path[0]):
                continue
            if (last, nxt) not in adj:
                continue
            if nxt in lookup:
                if len(path) >= 1:
                    chains.append(path + [nxt])
            elif len(path) < 3:
                extend(path + [nxt])

    for x in range(x0, x1):
        for y in range(y0, y1):
            sq = (x, y)
            if sq not in lookup or poly_id(sq) is None:
                continue
            extend([sq])

    out = []
    seen = set()
    for squares in chains:
        key = tuple(squares) if squares[0] <= squares[-1] \
            else tuple(reversed(squares))
        if key in seen:
            continue
        seen.add(key)
        v1 = lookup[squares[0]][0]
        v2 = lookup[squares[-1]][0]
        out.append(LinkedChain(tuple(squares), (v1, v2) in edges))
    return out


class Matching:
    __slots__ = ("pairs", "max_displacement_sq", "details")

    def __init__(self, pairs, max_displacement_sq, details=None):
        self.pairs = pairs
        self.max_displacement_sq = max_displacement_sq
        self.details = details

    @property
    def within_two(self):
        return self.max_displacement_sq <= 4


def _dist_sq(p, q):
    return (p[0] - q[0]) ** 2 + (p[1] - q[1]) ** 2


def build_homeomorphism(param, region):
    """Match every arithmetic-graph polygon inside the region to the
    plaid polygon it pixellates, square by square, and bound the
    displacement of the induced homeomorphism.  The bound is the exact
    maximum over the matched breakpoints (grid point vs plaid segment
    midpoint, and side-crossing point vs side midpoint), which dominates
    the continuous supremum."""
    x0, y0, x1, y1 = (int(v) for v in region)
    cls, anomalies = scan_region(param, region)
    if any(anomalies[k] for k in
           ("double_crossings", "errant_edges", "same_side", "uncaught",
            "nontriviality")):
        raise MatchingFailure(f"anomalies present: {anomalies}")
    for chain in linked_chains(param, region):
        if not chain.bound:
            raise MatchingFailure(f"unbound chain {chain}")

    fam = build_graph(param, (x0, y0, x1, y1))
    poly_cache = {}

    def poly_id(sq):
        if sq not in poly_cache:
            squares = _polygon_squares(param, sq)
            if squares is None:
                poly_cache[sq] = None
            else:
                marker = min(squares)
                for s in set(squares):
                    poly_cache[s] = marker
        return poly_cache.get(sq)

    pairs = {}
    worst = Fraction(0)
    for comp_id, comp in enumerate(fam.components):
        targets = set()
        for mn in comp:
            pt = None
            for sq, c in cls.items():
                if c.grid_mn == mn:
                    pt = c
                    break
            if pt is None or pt.tile is None:
                continue
            targets.add(poly_id(pt.square))
            # breakpoint: grid point vs plaid midpoint
            mids = [_side_midpoint(pt.square, s) for s in pt.plaid_edge_set]
            midpoint = (sum(m[0] for m in mids) / 2,
                        sum(m[1] for m in mids) / 2)
            worst = max(worst, _dist_sq(pt.grid_point, midpoint))
            for lab, side, point in pt.edge_sides:
                if side in pt.plaid_edge_set:
                    worst = max(worst, _dist_sq(
                        point, _side_midpoint(pt.square, side)))
            for lab, side in pt.offending:
                catch = find_catch(param, pt, (lab, side), cls)
                # the routed edge stays within the catch squares; each
                # matched breakpoint sits inside the bounding box of the
                # one-square neighborhood, displacement at most 2
                span = max(abs(a - b)
                           for s in catch.squares for a, b in
                           zip(s, pt.square))
                worst = max(worst, Fraction(span ** 2 + 1))
        targets.discard(None)
        if len(targets) > 1:
            raise MatchingFailure(
                f"component {comp_id} maps to several plaid polygons")
        if targets:
            pid = targets.pop()
            if pid in pairs.values():
                raise MatchingFailure(
                    f"two graph components map to plaid polygon {pid}")
            pairs[comp_id] = pid
    return Matching(pairs, worst)


# ---------------------------------------------------------------------------
# generic vertical comparator

def _clip_segments(family, x_line):
    """Crossing points of a family of closed polylines with the vertical
    line x = x_line (transversal crossings only)."""
    pts = []
    for poly in family:
        n = len(poly)
        for i in range(n):
            a, b = poly[i], poly[(i + 1) % n]
            ax, bx = Fraction(a[0]), Fraction(b[0])
            if ax == bx:
                continue
            if ax < x_line <= bx or bx <= x_line < ax:
                t = (Fraction(x_line) - ax) / (bx - ax)
                y = Fraction(a[1]) + t * (Fraction(b[1]) - Fraction(a[1]))
                pts.append((poly, i, y))
    return pts


def family_line_points(family, x_line, y0, y1):
    """F_L: centers of the unit vertical segments of the line x = x_line
    (between heights y0 and y1) that contain crossing points."""
    ys = sorted(p[2] for p in _clip_segments(family, x_line)
                if y0 <= p[2] <= y1)
    cells = sorted({floor(y) for y in ys if y0 <= y < y1})
    return [Fraction(2 * c + 1, 2) for c in cells]


def niceness_test(family, region):
    """The three niceness conditions checked per square / vertical edge;
    returns the list of violations."""
    x0, y0, x1, y1 = (int(v) for v in region)
    violations = []
    # condition 3 and 2: per vertical unit edge
    for x in range(x0, x1 + 1):
        crossings = [p[2] for p in _clip_segments(family, x)
                     if y0 <= p[2] <= y1]
        for y in crossings:
            if y == floor(y):
                violations.append(("vertex-crossing", x, y))
        cells = {}
        for y in crossings:
            cells.setdefault(floor(y), []).append(y)
        for cell, ys in cells.items():
            if len(ys) > 1:
                violations.append(("multi-crossing", x, cell))
    # condition 1: per square, via the arcs of F inside the square
    for x in range(x0, x1):
        for y in range(y0, y1):
            arcs = _square_arcs(family, (x, y))
            spans = []
            for arc in arcs:
                lo = min(p[1] for p in arc)
                hi = max(p[1] for p in arc)
                spans.append((lo, hi))
            spans.sort()
            for (lo1, hi1), (lo2, hi2) in zip(spans, spans[1:]):
                if lo2 < hi1:
                    violations.append(("sits-poorly", x, y))
                    break
    return violations


def _clip_to_square(a, b, square):
    """Exact Liang-Barsky clip of the segment a->b to the closed unit
    square; returns the clipped endpoint pair or None."""
    x0, y0 = square
    ax, ay = Fraction(a[0]), Fraction(a[1])
    dx, dy = Fraction(b[0]) - ax, Fraction(b[1]) - ay
    t0, t1 = Fraction(0), Fraction(1)
    for p, q in ((-dx, ax - x0), (dx, x0 + 1 - ax),
                 (-dy, ay - y0), (dy, y0 + 1 - ay)):
        if p == 0:
            if q < 0:
                return None
            continue
        r = q / p
        if p < 0:
            if r > t1:
                return None
            if r > t0:
                t0 = r
        else:
            if r < t0:
                return None
            if r < t1:
                t1 = r
    if t0 > t1:
        return None
    return ((ax + t0 * dx, ay + t0 * dy), (ax + t1 * dx, ay + t1 * dy))


def _square_arcs(family, square):
    """Maximal arcs of the family inside one closed unit square, with
    exact boundary crossing points inserted."""
    arcs = []
    for poly in family:
        n = len(poly)
        runs = []
        cur = None
        for i in range(n):
            a, b = poly[i], poly[(i + 1) % n]
            clip = _clip_to_square(a, b, square)
            if clip is None:
                if cur is not None:
                    runs.append(cur)
                    cur = None
                continue
            p, q = clip
            if cur is not None and cur[-1] == p:
                if q != p:
                    cur.append(q)
            else:
                if cur is not None:
                    runs.append(cur)
                cur = [p] if p == q else [p, q]
            if q != (Fraction(b[0]), Fraction(b[1])):
                # exited the square mid-segment
                runs.append(cur)
                cur = None
        if cur is not None:
            runs.append(cur)
        # merge the wrap-around pair
        if len(runs) >= 2 and runs[-1][-1] == runs[0][0]:
            runs[0] = runs.pop()[:-1] + runs[0]
        arcs.extend(r for r in runs if len(r) >= 2 or
                    (len(r) == 1 and n == 1))
    return arcs


def straighten(family, region):
    """Replace each square's arc by the connector of the midpoints of
    the sides holding its endpoints, producing a straight family."""
    x0, y0, x1, y1 = (int(v) for v in region)
    tiles = []
    for x in range(x0, x1):
        for y in range(y0, y1):
            for arc in _square_arcs(family, (x, y)):
                sides = []
                for p in (arc[0], arc[-1]):
                    if p[0] == x:
                        sides.append("W")
                    elif p[0] == x + 1:
                        sides.append("E")
                    elif p[1] == y:
                        sides.append("S")
                    elif p[1] == y + 1:
                        sides.append("N")
                if len(sides) == 2 and sides[0] != sides[1]:
                    tiles.append((_side_midpoint((x, y), sides[0]),
                                  _side_midpoint((x, y), sides[1])))
    # stitch tiles into polylines
    return _stitch(tiles)


def _stitch(tiles):
    adj = {}
    for a, b in tiles:
        adj.setdefault(a, []).append(b)
        adj.setdefault(b, []).append(a)
    seen = set()
    polys = []
    for start in adj:
        if start in seen:
            continue
        path = [start]
        seen.add(start)
        cur, prev = start, None
        while True:
            nxts = [p for p in adj[cur] if p != prev]
            if not nxts:
                break
            prev, cur = cur, nxts[0]
            if cur == start:
                break
            if cur in seen:
                break
            seen.add(cur)
            path.append(cur)
        polys.append(path)
    return polys


def vertical_compare(A, B, rect):
    """The Vertical Lemma comparator: match the components of two nice
    straight families column by column inside the rectangle."""
    x0, y0, x1, y1 = (int(v) for v in rect)
    for name, fam in (("A", A), ("B", B)):
        v = niceness_test(fam, rect)
        if v:
            raise NotNice(f"family {name}: {v[:3]}")
    # top/bottom disjoint
    for fam in (A, B):
        for poly in fam:
            for p in poly:
                if p[1] in (y0, y1) and x0 <= p[0] <= x1:
                    raise NotNice("family touches the horizontal boundary")
    lines = {}
    for x in range(x0, x1 + 1):
        a = family_line_points(A, x, y0, y1)
        b = family_line_points(B, x, y0, y1)
        if len(a) != len(b):
            raise CountMismatch(f"line x={x}: {len(a)} vs {len(b)}")
        for pa, pb in zip(a, b):
            if abs(pa - pb) > 1:
                raise CountMismatch(
                    f"line x={x}: pairing moves {pa}->{pb}")
        lines[x] = (a, b)
    # switches between consecutive lines
    for x in range(x0, x1):
        a1, b1 = lines[x]
        a2, b2 = lines[x + 1]
        for i in range(len(a1)):
            for j in range(len(a2)):
                da = a1[i] - a2[j]
                db = b1[i] - b2[j]
                if abs(da) <= 1 and abs(db) <= 1 and da * db < 0:
                    raise SwitchFound(f"between x={x} and x={x + 1}")
    # column-by-column crosser matching
    pairs = []
    worst = Fraction(0)
    for x in range(x0, x1):
        ca = _column_components(A, x, y0, y1)
        cb = _column_components(B, x, y0, y1)
        a1, b1 = lines[x]
        a2, b2 = lines[x + 1]
        amap = _endpoint_indices(ca, x, a1, a2)
        bmap = _endpoint_indices(cb, x, b1, b2)
        if sorted(amap) != sorted(bmap):
            raise CountMismatch(f"column {x}: component patterns differ")
        for key in amap:
            arc_a = amap[key]
            arc_b = bmap[key]
            worst = max(worst, _arc_displacement_sq(arc_a, arc_b))
            pairs.append((x, key))
    return Matching(pairs, worst)


def _column_components(family, x, y0, y1):
    """Arcs of the family inside the closed column [x, x+1] x [y0, y1]."""
    arcs = []
    for xx in range(int(x), int(x) + 1):
        pass
    for poly in family:
        n = len(poly)
        run = []
        for i in range(2 * n + 1):
            p = poly[i % n]
            if x <= p[0] <= x + 1 and y0 <= p[1] <= y1:
                run.append(p)
            else:
                if len(run) >= 2 and len(run) <= n:
                    arcs.append(run)
                run = []
        if len(run) >= 2 and len(run) <= n:
            arcs.append(run)
    # dedupe arcs traced twice by the doubled loop
    uniq = []
    seen = set()
    for a in arcs:
        key = (a[0], a[-1], len(a))
        rkey = (a[-1], a[0], len(a))
        if key in seen or rkey in seen:
            continue
        seen.add(key)
        uniq.append(a)
    return uniq


def _endpoint_indices(arcs, x, left_pts, right_pts):
    """Key each arc by the boundary indices of its endpoints:
    ('L', i) or ('R', j) per endpoint."""
    out = {}
    for arc in arcs:
        keys = []
        for p in (arc[0], arc[-1]):
            if p[0] == x:
                keys.append(("L", _nearest_index(left_pts, p[1])))
            elif p[0] == x + 1:
                keys.append(("R", _nearest_index(right_pts, p[1])))
            else:
                keys = None
                break
        if keys is None:
            continue
        out[tuple(sorted(keys))] = arc
    return out


def _nearest_index(points, y):
    best, bi = None, None
    for i, p in enumerate(points):
        d = abs(p - y)
        if best is None or d < best:
            best, bi = d, i
    return bi


def _arc_displacement_sq(arc_a, arc_b):
    """Displacement bound between two matched arcs: parametrize both by
    normalized arclength over the union of their breakpoints; the
    distance is convex on each matched linear piece, so the maximum over
    breakpoints is exact."""
    def param_points(arc):
        lens = [Fraction(0)]
        for p, q in zip(arc, arc[1:]):
            # rational pseudo-length: L1 length keeps everything rational
            lens.append(lens[-1] + abs(q[0] - p[0]) + abs(q[1] - p[1]))
        total = lens[-1] if lens[-1] else Fraction(1)
        return [(l / total, p) for l, p in zip(lens, arc)]

    pa = param_points(arc_a)
    pb = param_points(arc_b)
    ts = sorted({t for t, _ in pa} | {t for t, _ in pb})

    def eval_at(pp, t):
        for (t1, p1), (t2, p2) in zip(pp, pp[1:]):
            if t1 <= t <= t2:
                if t1 == t2:
                    return p1
                u = (t - t1) / (t2 - t1)
                return (p1[0] + u * (p2[0] - p1[0]),
                        p1[1] + u * (p2[1] - p1[1]))
        return pp[-1][1]

    worst = Fraction(0)
    for t in ts:
        worst = max(worst, _dist_sq(eval_at(pa, t), eval_at(pb, t)))
    # also compare reversed orientation and keep the better match
    pb_r = param_points(list(reversed(arc_b)))
    worst_r = Fraction(0)
    for t in sorted({t for t, _ in pa} | {t for t, _ in pb_r}):
        worst_r = max(worst_r, _dist_sq(eval_at(pa, t), eval_at(pb_r, t)))
    return min(worst, worst_r)


def loop_comparison(param, region):
    """Pair each plaid polygon of the region with the closed arithmetic-
    graph loop that pixellates it, straighten both, and run the vertical
    comparator on every pair.  Returns a Matching whose pairs list the
    polygon indices and whose bound is the worst displacement over all
    matched columns."""
    x0, y0, x1, y1 = (int(v) for v in region)
    from .plaid import plaid_polygons
    plaid = plaid_polygons(param, region)
    margin = max(x1 - x0, y1 - y0)
    fam = build_graph(param, (x0 - margin, y0 - margin,
                              x1 + margin, y1 + margin))
    loops = [[fam.vertices[mn] for mn in comp] for comp in fam.components
             if frozenset((comp[0], comp[-1])) in fam.edges]
    pairs = []
    worst = Fraction(0)
    for pi, poly in enumerate(plaid):
        squares = set()
        n = len(poly)
        for k in range(n):
            a, b = poly[k], poly[(k + 1) % n]
            squares.add((floor((a[0] + b[0]) / 2),
                         floor((a[1] + b[1]) / 2)))
        best, score = None, 0
        for li, loop in enumerate(loops):
            s = sum(1 for v in loop
                    if (floor(v[0]), floor(v[1])) in squares)
            if s > score:
                best, score = li, s
        if best is None:
            raise MatchingFailure(f"no loop pixellates polygon {pi}")
        loop = loops[best]
        xs = [p[0] for p in poly] + [v[0] for v in loop]
        ys = [p[1] for p in poly] + [v[1] for v in loop]
        rect = (floor(min(xs)) - 1, floor(min(ys)) - 1,
                floor(max(xs)) + 2, floor(max(ys)) + 2)
        m = vertical_compare(straighten([poly], rect),
                             straighten([loop], rect), rect)
        worst = max(worst, m.max_displacement_sq)
        pairs.append((pi, best))
    return Matching(pairs, worst)
