"""The plaid model: classifying space, labeled partition, PET dynamics.

The ambient space is R^3 x [0,1] with coordinates (x, y, z, P) where
P = 2p/(p+q).  Square centers (x, y) classify through

    Phi(x, y) = (2Px + 2y, 2Px, 2Px + 2Py, P)

into a partition of the quotient by the lattice Lambda_1 generated by

    T_X(x,y,z,P) = (x+2, y+P, z+P, P)
    T_Y = +(0,2,0,0),   T_Z = +(0,0,2,0).

The partition has 26 cells mod Lambda_1, generated from 10 seed polytopes
by the negation and flipping symmetries.  The cell label (an ordered pair
of side letters, or None) is the oriented connector tile of the square:
(a, b) enters through side a and exits through side b.  Orientation is
only well defined mod Lambda_2 = <T_X^2, T_Y, T_Z>; applying T_X once
reverses the pair.

The curve-following map F translates each labeled cell toward the next
square of its arc; the common refinement of F^-1(partition), partition,
F(partition), clipped to the fundamental box, is the 218-cell reduced
triple partition (RTP) whose cells are x60 integral.
"""

from __future__ import annotations

import os
from fractions import Fraction
from functools import lru_cache
from itertools import product

from .linalg import AffineMap, vdot
from .polytope import IntegerPolytope

# ---------------------------------------------------------------------------
# seed data: (label, vertices (x,y,z,P)); label None = empty tile

SEED_DATA = [
    (("W", "E"), [(-1, -1, -1, 0), (-1, 1, -1, 0), (1, 1, -1, 0),
                  (1, 1, 1, 0), (0, 0, 0, 1)]),
    (("E", "S"), [(1, 1, -1, 0), (1, 1, 0, 1), (1, 1, -1, 1),
                  (0, 1, -1, 1), (0, 0, -1, 1)]),
    (("E", "N"), [(1, -1, -1, 0), (1, 0, 0, 1), (1, 0, -1, 1),
                  (0, 0, -1, 1), (0, -1, -1, 1)]),
    (("W", "S"), [(-1, 1, -1, 0), (1, 1, -1, 0), (1, 1, 1, 0),
                  (0, 0, 0, 1), (0, 1, 0, 1), (1, 1, 0, 1), (1, 1, 1, 1)]),
    (("S", "W"), [(-1, -1, -1, 0), (1, -1, -1, 0), (1, 1, -1, 0),
                  (0, 0, -1, 1), (0, 0, 0, 1), (1, 0, 0, 1), (1, 1, 0, 1)]),
    (None, [(-1, 1, 1, 0), (-1, 0, 0, 1), (-1, 0, 1, 1), (-1, 1, 0, 1),
            (-1, 1, 1, 1), (0, 1, 1, 1), (-2, 0, 0, 1)]),
    (("S", "N"), [(-1, -1, -1, 0), (1, -1, -1, 0), (-1, -1, -1, 1),
                  (0, 0, 0, 1), (0, 0, -1, 1), (0, -1, 0, 1),
                  (0, -1, -1, 1), (1, 0, 0, 1)]),
    (("E", "W"), [(1, 1, -1, 0), (1, -1, -1, 0), (1, 1, 0, 1), (1, 0, 0, 1),
                  (1, 1, -1, 1), (1, 0, -1, 1), (0, 0, -1, 1), (2, 1, 0, 1)]),
    (None, [(-1, -1, 1, 0), (-1, -1, 0, 1), (0, -1, 0, 1), (0, 0, 0, 1),
            (0, -1, 1, 1), (0, 0, 1, 1), (1, 0, 1, 1), (1, -1, 1, 0)]),
    (None, [(-1, -1, -1, 0), (-1, 1, 1, 0), (-1, -1, 1, 0), (-1, 1, -1, 0),
            (1, 1, 1, 0), (-1, -1, -1, 1), (-1, 0, -1, 1), (-1, -1, 0, 1),
            (-1, 0, 0, 1), (0, 0, 0, 1), (-3, -1, -1, 0), (-2, -1, -1, 1)]),
]

OPPOSITE = {"N": "S", "S": "N", "E": "W", "W": "E"}
DIRECTION = {"N": (0, 1), "S": (0, -1), "E": (1, 0), "W": (-1, 0)}


class PartitionAuditFailure(AssertionError):
    pass


class BoundaryHit(ValueError):
    pass


class UnlabeledInput(ValueError):
    pass


class InconsistentTiles(ValueError):
    pass


class LabeledPolytope:
    """A partition cell with its ordered tile label (or None)."""

    __slots__ = ("geometry", "label")

    def __init__(self, geometry, label):
        self.geometry = geometry
        self.label = label

    def __repr__(self):
        return f"LabeledPolytope({self.label}, {self.geometry})"


# ---------------------------------------------------------------------------
# lattice and symmetry actions

def _map(matrix, translation):
    return AffineMap([[Fraction(c) for c in row] for row in matrix],
                     [Fraction(c) for c in translation])


def t_x():
    return _map([[1, 0, 0, 0], [0, 1, 0, 1], [0, 0, 1, 1], [0, 0, 0, 1]],
                (2, 0, 0, 0))


def t_y():
    return _map([[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 1, 0], [0, 0, 0, 1]],
                (0, 2, 0, 0))


def t_z():
    return _map([[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 1, 0], [0, 0, 0, 1]],
                (0, 0, 2, 0))


def lambda1_generators():
    return [t_x(), t_y(), t_z()]


def lambda2_generators():
    return [t_x().power(2), t_y(), t_z()]


def negation_map():
    return _map([[-1, 0, 0, 0], [0, -1, 0, 0], [0, 0, -1, 0], [0, 0, 0, 1]],
                (0, 0, 0, 0))


def flipping_map():
    return _map([[1, 0, 0, 0], [0, 0, 1, 0], [0, 1, 0, 0], [0, 0, 0, 1]],
                (0, 0, 0, 0))


def negate_label(label):
    if label is None:
        return None
    return tuple(OPPOSITE[c] for c in label)


_NS_SWAP = {"N": "S", "S": "N", "E": "E", "W": "W"}


def flip_label(label):
    if label is None:
        return None
    return tuple(_NS_SWAP[c] for c in reversed(label))


def _word_map(a, b, c):
    """T_X^a T_Y^b T_Z^c as a single affine map."""
    return _map([[1, 0, 0, 0], [0, 1, 0, a], [0, 0, 1, a], [0, 0, 0, 1]],
                (2 * a, 2 * b, 2 * c, 0))


def _centroid(poly):
    rv = poly.rational_vertices()
    n = len(rv)
    return tuple(sum(p[i] for p in rv) / n for i in range(4))


def _reduce_word(centroid, step_x):
    """T_X exponent a (a multiple of step_x/2) and T_Y/T_Z exponents b, c
    moving the centroid into x in [-step_x/2, step_x/2), y, z in [-1, 1).
    The lattice acts on centroids by honest translations, so this is a
    canonical reduction."""
    a = -((centroid[0] + Fraction(step_x, 2)) // step_x) * (step_x // 2)
    pbar = centroid[3]
    b = -((centroid[1] + a * pbar + 1) // 2)
    c = -((centroid[2] + a * pbar + 1) // 2)
    return int(a), int(b), int(c)


def _canonicalize(poly, label, mod2=False):
    """Canonical (polytope, label) representative mod Lambda_1 (or Lambda_2
    when mod2); T_X reverses orientation, so an odd x-word flips the label."""
    step = 4 if mod2 else 2
    a, b, c = _reduce_word(_centroid(poly), step)
    out = poly.apply(_word_map(a, b, c))
    if a % 2:
        label = None if label is None else tuple(reversed(label))
    return out, label


# ---------------------------------------------------------------------------
# the 26-cell (X1) and 52-cell (X2) partitions

def seed_polytopes():
    return [LabeledPolytope(IntegerPolytope(v, id=i), lab)
            for i, (lab, v) in enumerate(SEED_DATA)]


@lru_cache(maxsize=None)
def full_partition():
    """The 26 fundamental cells mod Lambda_1, canonical representatives,
    generated from the seeds by negation and flipping."""
    neg, flip = negation_map(), flipping_map()
    found = {}
    for seed in seed_polytopes():
        images = [(seed.geometry, seed.label)]
        images.append((seed.geometry.apply(neg), negate_label(seed.label)))
        images.append((seed.geometry.apply(flip), flip_label(seed.label)))
        images.append((seed.geometry.apply(neg).apply(flip),
                       flip_label(negate_label(seed.label))))
        for geom, lab in images:
            cgeom, clab = _canonicalize(geom, lab)
            key = cgeom.vertices
            if key in found:
                if found[key].label != clab:
                    raise PartitionAuditFailure(
                        f"label clash at {key}: {found[key].label} vs {clab}")
            else:
                found[key] = LabeledPolytope(cgeom, clab)
    cells = sorted(found.values(),
                   key=lambda c: (c.label is None, c.label or (), c.geometry.vertices))
    for i, cell in enumerate(cells):
        cell.geometry.id = i
    if len(cells) != 26:
        raise PartitionAuditFailure(f"expected 26 cells, got {len(cells)}")
    return tuple(cells)


@lru_cache(maxsize=None)
def x2_partition():
    """Ordered-label partition mod Lambda_2: the 26 cells and their T_X
    images with reversed labels."""
    tx = t_x()
    cells = []
    for cell in full_partition():
        cells.append(cell)
        geom, lab = _canonicalize(
            cell.geometry.apply(tx),
            None if cell.label is None else tuple(reversed(cell.label)),
            mod2=True)
        cells.append(LabeledPolytope(geom, lab))
    return tuple(cells)


def fundamental_box():
    return IntegerPolytope(
        [(x, y, z, w) for x in (-1, 1) for y in (-1, 1) for z in (-1, 1)
         for w in (0, 1)])


# ---------------------------------------------------------------------------
# classifying map and tile lookup

def plaid_classify(param, center):
    x, y = Fraction(center[0]), Fraction(center[1])
    P = param.P
    return (2 * P * x + 2 * y, 2 * P * x, 2 * P * x + 2 * P * y, P)


def reduce_lambda1(point):
    """Lattice word moving `point` into the fundamental box; returns the
    reduced point and the T_X exponent used (orientation parity)."""
    x, y, z, P = (Fraction(c) for c in point)
    a = -((x + 1) // 2)
    x, y, z = x + 2 * a, y + a * P, z + a * P
    b = -((y + 1) // 2)
    c = -((z + 1) // 2)
    return (x, y + 2 * b, z + 2 * c, P), int(a)


@lru_cache(maxsize=None)
def _cover_translates():
    """Translates of the 26 cells that can meet the open fundamental box:
    the point-location catalog.  Parity of the x-word is kept so oriented
    labels can be recovered."""
    out = []
    for cell in full_partition():
        for a, b, c in product(range(-3, 4), repeat=3):
            tr = cell.geometry.apply(_word_map(a, b, c))
            bb = tr.bounding_box()
            if all(bb[0][i] < 1 and bb[1][i] > -1 for i in range(3)):
                lab = cell.label
                if a % 2 and lab is not None:
                    lab = tuple(reversed(lab))
                out.append((tr, lab))
    return tuple(out)


def locate(point):
    """Oriented (X2) label of the partition cell whose interior contains
    the classify image.  Raises BoundaryHit if it avoids every open cell."""
    reduced, a = reduce_lambda1(point)
    for tr, lab in _cover_translates():
        if tr.contains_point_strict(reduced):
            if a % 2 and lab is not None:
                lab = tuple(reversed(lab))
            return lab
    raise BoundaryHit(f"classify image on a cell boundary: {point}")


def tile_at(param, center):
    """Oriented plaid tile at a square center (None = empty tile)."""
    return locate(plaid_classify(param, center))


def follow(param, center):
    """The square the oriented tile at `center` points into."""
    lab = tile_at(param, center)
    if lab is None:
        return center
    d = DIRECTION[lab[1]]
    return (center[0] + d[0], center[1] + d[1])


# ---------------------------------------------------------------------------
# curve-following dynamics

def _branch(letter):
    if letter in ("N", "S"):
        s = 1 if letter == "N" else -1
        return _map([[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 1, 2 * s],
                     [0, 0, 0, 1]], (2 * s, 0, 0, 0))
    s = 1 if letter == "E" else -1
    return _map([[1, 0, 0, 2 * s], [0, 1, 0, 2 * s], [0, 0, 1, 2 * s],
                 [0, 0, 0, 1]], (0, 0, 0, 0))


def pet_step(obj, label, direction="forward"):
    """Apply the curve-following map F (or its inverse) to a point or
    polytope carrying the given tile label."""
    if label is None:
        return obj
    if direction not in ("forward", "backward"):
        raise ValueError(direction)
    m = _branch(label[1])
    if direction == "backward":
        m = m.inverse()
    if isinstance(obj, IntegerPolytope):
        return obj.apply(m)
    return m(obj)


# ---------------------------------------------------------------------------
# the reduced triple partition

class TriplePolytope:
    """An RTP cell: geometry (x60 integral), 6-letter code mod reversal."""

    __slots__ = ("geometry", "code", "index", "orientation_type")

    def __init__(self, geometry, code, index=None):
        self.geometry = geometry
        self.code = code
        self.index = index
        self.orientation_type = None

    def __repr__(self):
        return f"TriplePolytope({self.index}, {self.code})"


def _x2_pool():
    """Lambda_2 translates of the 52 oriented cells near the fundamental
    box, with labels; pool for the triple refinement."""
    pool = []
    for cell in x2_partition():
        for a, b, c in product(range(-2, 3), repeat=3):
            tr = cell.geometry.apply(_word_map(2 * a, b, c))
            bb = tr.bounding_box()
            if all(bb[0][i] < 4 and bb[1][i] > -4 for i in range(3)):
                pool.append((tr, cell.label, tr.bounding_box()))
    return pool


def _bbox_overlap(b1, b2, dim=4):
    return all(b1[0][i] <= b2[1][i] and b2[0][i] <= b1[1][i]
               for i in range(dim))


@lru_cache(maxsize=None)
def _rtp_cache_path():
    base = os.environ.get("XDG_CACHE_HOME",
                          os.path.join(os.path.expanduser("~"), ".cache"))
    return os.path.join(base, "plaidkite", "rtp.tsv")


def triple_partition():
    """The 218 cells of the reduced triple partition, deterministically
    indexed by (code, lexicographically smallest scaled vertex).  The
    build is expensive, so the result is cached on disk; the cache is
    sanity-checked (count, total volume) on load."""
    cache = _rtp_cache_path()
    if os.path.exists(cache):
        from .polytope import read_table
        cells = tuple(TriplePolytope(geom, code, index=i)
                      for i, (geom, code) in enumerate(read_table(cache)))
        if len(cells) == 218 and \
                sum(t.geometry.volume() for t in cells) == 8:
            return cells
    cells = _build_triple_partition()
    from .polytope import write_table
    os.makedirs(os.path.dirname(cache), exist_ok=True)
    write_table(cache, [t.geometry for t in cells],
                [t.code for t in cells])
    return cells


def _build_triple_partition():
    box = fundamental_box()
    pool = _x2_pool()
    nonnull = [(p, lab, bb) for p, lab, bb in pool if lab is not None]
    fwd = [(pet_step(p, lab, "forward"), lab) for p, lab, bb in nonnull]
    fwd = [(p, lab, p.bounding_box()) for p, lab in fwd]
    # The branch of F carrying the middle cell into its successor is the one
    # selected by the middle cell's exit letter, so the backward images of
    # the successor candidates must be taken under that same branch.
    bwd = {}
    for letter in "NSEW":
        inv = _branch(letter).inverse()
        imgs = [(p.apply(inv), lab) for p, lab, bb in nonnull]
        bwd[letter] = [(p, lab, p.bounding_box()) for p, lab in imgs]

    pieces = {}

    def record(geom, code):
        key = (geom.scale, geom.vertices)
        canon = min(code, code[::-1])
        if key in pieces:
            if pieces[key].code != canon:
                raise PartitionAuditFailure(
                    f"code clash {pieces[key].code} vs {canon}")
        else:
            pieces[key] = TriplePolytope(geom, canon)

    boxbb = box.bounding_box()
    for mid, lab0, bb0 in pool:
        if not _bbox_overlap(bb0, boxbb):
            continue
        mid_d = mid.intersect(box)
        if mid_d is None:
            continue
        if lab0 is None:
            record(mid_d, "LLLLLL")
            continue
        bbm = mid_d.bounding_box()
        for prev_img, lab_m, bbp in fwd:
            if not _bbox_overlap(bbp, bbm):
                continue
            part = mid_d.intersect(prev_img)
            if part is None:
                continue
            bb1 = part.bounding_box()
            for next_pre, lab_p, bbn in bwd[lab0[1]]:
                if not _bbox_overlap(bbn, bb1):
                    continue
                piece = part.intersect(next_pre)
                if piece is None:
                    continue
                record(piece, "".join(lab_m) + "".join(lab0) + "".join(lab_p))

    cells = []
    for tp in pieces.values():
        if 60 % tp.geometry.scale != 0:
            raise PartitionAuditFailure(
                f"cell scale {tp.geometry.scale} does not divide 60")
        tp.geometry = tp.geometry.rescaled(60)
        cells.append(tp)
    cells.sort(key=lambda t: (t.code, min(t.geometry.vertices)))
    for i, tp in enumerate(cells):
        tp.index = i
        tp.geometry.id = i
    if len(cells) != 218:
        raise PartitionAuditFailure(f"expected 218 RTP cells, got {len(cells)}")
    return tuple(cells)


def rtp_locate(point):
    """Index of the RTP cell whose interior contains the reduced point."""
    reduced, _ = reduce_lambda1(point)
    for tp in triple_partition():
        if tp.geometry.contains_point_strict(reduced):
            return tp.index
    raise BoundaryHit(f"point on an RTP boundary: {point}")


# ---------------------------------------------------------------------------
# polygons

def plaid_polygons(param, region):
    """Connected plaid components in the half-open block
    region = (x0, y0, x1, y1); returns lists of connector midpoints."""
    x0, y0, x1, y1 = region
    centers = [(Fraction(2 * i + 1, 2), Fraction(2 * j + 1, 2))
               for i in range(x0, x1) for j in range(y0, y1)]
    tiles = {c: tile_at(param, c) for c in centers}
    for c, lab in tiles.items():
        if lab is None:
            continue
        nxt = follow(param, c)
        if nxt in tiles:
            nlab = tiles[nxt]
            if nlab is None or nlab[0] != OPPOSITE[lab[1]]:
                raise InconsistentTiles(f"{c} -> {nxt}: {lab} vs {nlab}")
    seen = set()
    components = []
    for c, lab in tiles.items():
        if lab is None or c in seen:
            continue
        comp = []
        cur = c
        while cur not in seen:
            seen.add(cur)
            clab = tiles.get(cur)
            if clab is None:
                raise InconsistentTiles(f"open curve hits empty tile at {cur}")
            d = DIRECTION[clab[1]]
            comp.append((cur[0] + Fraction(d[0], 2), cur[1] + Fraction(d[1], 2)))
            cur = (cur[0] + d[0], cur[1] + d[1])
            if cur not in tiles:
                raise InconsistentTiles(f"curve leaves region at {cur}")
        components.append(comp)
    return components


# ---------------------------------------------------------------------------
# planar labelings (cross-check layer)

def capacity(param, n):
    """Capacity of the axis point n steps along either axis."""
    w = param.omega
    k = (2 * param.p * n) % w
    c = (2 * k - 2) % (2 * w)
    return c if c < w else c - 2 * w


def mass(param, n):
    """Mass of the axis point: the odd representative of capacity/2
    mod omega in (-omega, omega); +-omega (returned as omega) at capacity 0."""
    w = param.omega
    mu = capacity(param, n)
    if mu == 0:
        return w
    r = (mu // 2) % w
    return r if r % 2 else r - w


def axis_labels(param):
    """(capacities, masses) along [0, omega^2]."""
    rng = range(param.omega ** 2 + 1)
    return ([capacity(param, n) for n in rng],
            [mass(param, n) for n in rng])
