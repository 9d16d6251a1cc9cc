"""The bridge between the plaid and graph PETs.

The projective intertwiner Psi maps the plaid fundamental domain
X_Pi = [-1,1]^3 x [0,1] into the graph PET space:

    Psi(x,y,z,P) = (1/(2-P)) (x-y, -y-1, z+P+1, P) +- (1,0,0,0)  mod Lambda

with + on the half x <= y and - on the half y <= x.  The fourth
coordinate becomes A = P/(2-P), so Psi carries the P-slice to the
matching A-slice.  The intertwining identity says that for every graph
grid point zeta, the graph classify image of zeta equals Psi applied to
the plaid classify image of the center of zeta's square.

Applying Psi to the 218 cells of the reduced triple partition and
locating the images in the two graph partitions yields the
correspondence of polytopes, the 462 edge crossing problems, and the
machinery (graph avoidance, plaid barriers, out-of-bounds) that solves
416 of them; the remaining 46 recalcitrant problems are accounted for
by the catch analysis.
"""

import os

from fractions import Fraction
from functools import lru_cache
from itertools import product
from math import floor

from .polytope import IntegerPolytope
from .plaid import (OPPOSITE, BoundaryHit, PartitionAuditFailure,
                    pet_step, reduce_lambda1, lambda1_generators,
                    triple_partition, negation_map)
from .graph import (graph_partitions, graph_lattice_word,
                    reduce_graph_lattice)
from . import plaid as _plaid


class AmbiguousBranch(Exception):
    """A point sits exactly on the seam x = y of the intertwiner."""


class UncontainedImage(Exception):
    """Psi of an RTP cell fits in no graph cell or two-cell union."""


class CountMismatch(Exception):
    """Problem or correspondence counts disagree with the expected
    structure."""


class CatchFailure(Exception):
    """A recalcitrant problem is not accounted for by any catch."""


# ---------------------------------------------------------------------------
# the intertwiner

def psi(point, branch=None):
    """The projective intertwiner on a single point (x,y,z,P); returns
    the image reduced into the graph fundamental domain.  The branch is
    + when x <= y and - when y <= x; on the dipole domain the - branch
    is forced by passing branch='-'."""
    x, y, z, P = (Fraction(v) for v in point)
    if branch is None:
        if x == y:
            raise AmbiguousBranch(f"point on the seam x = y: {point}")
        branch = "+" if x < y else "-"
    s = 1 if branch == "+" else -1
    d = 2 - P
    image = ((x - y) / d + s, (-y - 1) / d, (z + P + 1) / d, P / d)
    return reduce_graph_lattice(_ParamShim(P / d), image)


class _ParamShim:
    """Just enough of a parameter object for the lattice reduction: the
    slope A."""

    __slots__ = ("A",)

    def __init__(self, A):
        self.A = A


def psi_raw(point, branch):
    """Psi without the lattice reduction."""
    x, y, z, P = (Fraction(v) for v in point)
    s = 1 if branch == "+" else -1
    d = 2 - P
    return ((x - y) / d + s, (-y - 1) / d, (z + P + 1) / d, P / d)


def psi_polytope(poly):
    """Psi applied to a whole polytope in (x,y,z,P) coordinates.  The
    map is projective with positive denominator on P in [0,1], so the
    image is the convex hull of the vertex images; the cell must sit in
    a single branch region."""
    verts = poly.rational_vertices()
    if all(v[0] <= v[1] for v in verts):
        branch = "+"
    elif all(v[1] <= v[0] for v in verts):
        branch = "-"
    else:
        raise AmbiguousBranch("polytope straddles the seam x = y")
    images = [psi_raw(v, branch) for v in verts]
    return IntegerPolytope.from_rational(images), branch


def _reduction_word(A, point):
    """The lattice word carrying `point` (a 3-vector at slope A) into
    [0,1) x [0,1+A)^2, as exponents (a,b,c) of the inverse generators."""
    x, y, z = point[0], point[1], point[2]
    a = floor(x)
    y, z = y + a, z + a
    b = floor(y / (1 + A))
    z = z - b * (1 - A)
    c = floor(z / (1 + A))
    return (-a, -b, -c)


def reduce_polytope(poly):
    """Translate a polytope in graph coordinates by the lattice word
    that reduces its centroid."""
    verts = poly.rational_vertices()
    n = len(verts)
    cx = sum(v[0] for v in verts) / n
    cy = sum(v[1] for v in verts) / n
    cz = sum(v[2] for v in verts) / n
    cA = sum(v[3] for v in verts) / n
    a, b, c = _reduction_word(cA, (cx, cy, cz))
    return poly.apply(graph_lattice_word(a, b, c))


def intertwining_check(param, region):
    """Verify the intertwining identity on every graph grid point in the
    given region, and the hitset membership of the corresponding plaid
    classify images.  Returns the list of violations (expected empty)."""
    from .graph import graph_grid, graph_classify
    from .plaid import plaid_classify
    violations = []
    for mn, pt, square in graph_grid(param, region):
        center = (square[0] + Fraction(1, 2), square[1] + Fraction(1, 2))
        phi_pi = plaid_classify(param, center)
        reduced, _ = reduce_lambda1(phi_pi)
        left = reduce_graph_lattice(param, graph_classify(param, pt))
        right = psi(reduced)
        if left != right:
            violations.append(("intertwine", mn, left, right))
        if hitset_membership(param, reduced) == "outside":
            violations.append(("hitset", mn, reduced))
    return violations


# ---------------------------------------------------------------------------
# hitset, hi/lo, dipole

def hitset_octagon(param):
    """The eight vertices of the zigzag octagon H, in cyclic order."""
    P = param.P
    return ((-1, 1), (-1 + P, -1 + P), (1 - P, -1), (1, -1 + P),
            (1, 1), (1 - P, 1 - P), (-1 + P, 1), (-1, 1 - P))


def _point_vs_polygon(point, polygon):
    """Exact inside/boundary/outside test for a simple polygon via the
    crossing number, with an explicit edge test for the boundary."""
    x, y = Fraction(point[0]), Fraction(point[1])
    n = len(polygon)
    crossings = 0
    for i in range(n):
        ax, ay = (Fraction(v) for v in polygon[i])
        bx, by = (Fraction(v) for v in polygon[(i + 1) % n])
        cross = (bx - ax) * (y - ay) - (by - ay) * (x - ax)
        if cross == 0 and min(ax, bx) <= x <= max(ax, bx) \
                and min(ay, by) <= y <= max(ay, by):
            return "boundary"
        if (ay > y) != (by > y):
            t = (y - ay) / (by - ay)
            if ax + t * (bx - ax) > x:
                crossings += 1
    return "inside" if crossings % 2 else "outside"


def hitset_membership(param, point):
    """Locate the (x,y) projection of a plaid point relative to the
    hitset, modulo the plaid lattice.  The hitset octagon is a zigzag
    whose listed vertex cycle self-intersects, so the region itself is
    taken as the union of the lattice orbits of the hi and lo
    parallelograms, which tile it."""
    if _in_lattice_orbit(param, point, hi_polygon(param)):
        return "inside"
    if _in_lattice_orbit(param, point, lo_polygon(param)):
        return "inside"
    return "outside"


def hi_polygon(param):
    P = param.P
    return ((-1 + P, -1 + P), (1 - P, -1), (3 - 3 * P, 1 - 2 * P),
            (1 - P, 1 - P))


def lo_polygon(param):
    P = param.P
    return ((1 - 3 * P, 1 - 3 * P), (1 - P, 1 - P), (-1 + P, 1),
            (-1 - P, 1 - 2 * P))


def _in_lattice_orbit(param, point, polygon):
    """Whether (x,y) lies in the orbit of the polygon under the plaid
    lattice acting on the plane, generated by (2,P) and (0,2)."""
    P = param.P
    x, y = Fraction(point[0]), Fraction(point[1])
    for a in range(-3, 4):
        for b in range(-3, 4):
            probe = (x - 2 * a, y - P * a - 2 * b)
            if _point_vs_polygon(probe, polygon) != "outside":
                return True
    return False


def hi_lo_classify(param, point, side="grid"):
    """The hi/lo classification: for a graph grid point, hi iff the
    fractional part of x exceeds P; for a plaid point, membership of its
    (x,y) projection in the lattice orbit of H^hi versus H^lo."""
    if side == "grid":
        x = Fraction(point[0])
        return "hi" if x - floor(x) > param.P else "lo"
    in_hi = _in_lattice_orbit(param, point, hi_polygon(param))
    in_lo = _in_lattice_orbit(param, point, lo_polygon(param))
    if in_hi == in_lo:
        raise BoundaryHit(f"ambiguous hi/lo membership at {point}")
    return "hi" if in_hi else "lo"


def dipole(param):
    """The fundamental dipole Upsilon: the parallelogram bounded by the
    slope-1 lines y = x and y = x - (2-P), sitting to the right of the
    diagonal of [-1,1]^2 and protruding to its right (the overhang is the
    (2,P)-translate of the part left of the square).  It is exactly the
    preimage of the unit square under the omega map, with area 4-2P."""
    P = param.P
    return ((P - 1, P - 1), (1 + P, 1 + P), (3 - P, 1), (1 - P, -1))


def dipole_representative(param, point):
    """The unique Lambda_Pi translate of the xy-point whose omega image
    lies in [0,1)^2, i.e. the representative inside the fundamental
    dipole.  Expects input already reduced to the fundamental domain."""
    P = param.P
    x, y = Fraction(point[0]), Fraction(point[1])
    for a in range(-4, 5):
        for b in range(-4, 5):
            cand = (x + 2 * a, y + P * a + 2 * b)
            oa, ob = omega_map(param, cand)
            if 0 <= oa < 1 and 0 <= ob < 1:
                return cand
    raise UncontainedImage(f"no dipole representative for {point}")


def omega_map(param, point):
    """The affine diffeomorphism Upsilon -> [0,1]^2 underlying the plaid
    reconstruction formula (no fractional parts taken)."""
    P = param.P
    x, y = Fraction(point[0]), Fraction(point[1])
    a = (x - y) / (2 - P)
    b = (-2 - P + P * P + P * x + 2 * y - 2 * P * y) / (2 * P - 4)
    return (a, b)


def plaid_reconstruction(param, point):
    """Fractional-part pair recovering the graph grid point from a plaid
    classify image: the omega coordinates of the point's representative
    in the fundamental dipole."""
    rep = dipole_representative(param, point)
    a, b = omega_map(param, rep)
    return (a - floor(a), b - floor(b))


# ---------------------------------------------------------------------------
# correspondence of polytopes

class CorrespondenceEntry:
    """For RTP cell k: the Psi image, the graph cells containing it in
    each partition (as lattice translates, with labels), and the guessed
    orientation type."""

    __slots__ = ("k", "code", "image", "branch", "plus_targets",
                 "minus_targets", "orientation_type")

    def __init__(self, k, code, image, branch, plus_targets, minus_targets):
        self.k = k
        self.code = code
        self.image = image
        self.branch = branch
        self.plus_targets = plus_targets
        self.minus_targets = minus_targets
        self.orientation_type = None

    @property
    def is_null(self):
        return self.code == "LLLLLL"

    @property
    def double_sign(self):
        if len(self.plus_targets) == 2:
            return "+"
        if len(self.minus_targets) == 2:
            return "-"
        return None


def _locate_image(image, sign):
    """Find the catalog cell (or interior-disjoint pair of cells) of the
    given partition containing the polytope."""
    from .graph import _graph_cover
    bb = image.bounding_box()
    candidates = []
    for geom, label in _graph_cover()[sign]:
        gb = geom.bounding_box()
        if all(gb[0][i] <= bb[1][i] and bb[0][i] <= gb[1][i]
               for i in range(4)):
            candidates.append((geom, label))
    for geom, label in candidates:
        if geom.contains_polytope(image):
            return [(geom, label)]
    vol = image.volume()
    for i in range(len(candidates)):
        pi = image.intersect(candidates[i][0])
        if pi is None:
            continue
        vi = pi.volume()
        for j in range(i + 1, len(candidates)):
            pj = image.intersect(candidates[j][0])
            if pj is None:
                continue
            if vi + pj.volume() == vol:
                return [candidates[i], candidates[j]]
    raise UncontainedImage(f"image (bbox {bb}) fits no cell or pair")


# which unordered pair of square sides the direction dT(i,j) can exit
# through; the quadrant of dT(i,j) is the same for every A in (0,1)
CANDIDATE_SIDES = {
    (1, 0): ("N", "E"), (1, 1): ("N", "E"),
    (0, 1): ("S", "E"), (-1, 1): ("S", "E"),
    (-1, 0): ("S", "W"), (-1, -1): ("S", "W"),
    (0, -1): ("N", "W"), (1, -1): ("N", "W"),
}


def _assign_type(entry):
    """Pick the orientation type: the guess under which, for each sign,
    the goal side (the side the oriented plaid arc actually uses at the
    corresponding end) is one of the two sides its graph edge can exit
    through.  Type 1 ties (+) to the head end, type 0 to the tail."""
    code = entry.code
    tail_side, head_side = code[2], code[3]
    valid = []
    for t in (1, 0):
        goal_plus = head_side if t == 1 else tail_side
        goal_minus = tail_side if t == 1 else head_side
        ok = all(goal_plus in CANDIDATE_SIDES[label]
                 for _, label in entry.plus_targets) \
            and all(goal_minus in CANDIDATE_SIDES[label]
                    for _, label in entry.minus_targets)
        if ok:
            valid.append(t)
    if not valid:
        raise CountMismatch(f"no valid orientation type for cell {entry.k}")
    return valid[0]


@lru_cache(maxsize=None)
def build_correspondence():
    """Psi images of all 218 RTP cells located in both graph partitions,
    with structure audit: 6 null/null entries, 174 single/single, 19
    doubles on (+), 19 doubles on (-), all non-null targets nontrivially
    labeled, and each double union clean with additive volume."""
    graph_partitions()  # runs the partition audit
    entries = []
    for cell in triple_partition():
        image, branch = psi_polytope(cell.geometry)
        image = reduce_polytope(image)
        plus = _locate_image(image, "+")
        minus = _locate_image(image, "-")
        entry = CorrespondenceEntry(cell.index, cell.code, image, branch,
                                    plus, minus)
        entries.append(entry)

    nulls = [e for e in entries if e.is_null]
    singles = [e for e in entries if not e.is_null and e.double_sign is None]
    dplus = [e for e in entries if e.double_sign == "+"]
    dminus = [e for e in entries if e.double_sign == "-"]
    if (len(nulls), len(singles), len(dplus), len(dminus)) != (6, 174, 19, 19):
        raise CountMismatch(
            f"correspondence structure {len(nulls)}/{len(singles)}"
            f"/{len(dplus)}/{len(dminus)}, expected 6/174/19/19")
    for e in nulls:
        if any(lab != (0, 0) for _, lab in e.plus_targets + e.minus_targets):
            raise PartitionAuditFailure(f"null cell {e.k} has labeled target")
    for e in singles + dplus + dminus:
        if any(lab == (0, 0) for _, lab in e.plus_targets + e.minus_targets):
            raise PartitionAuditFailure(
                f"nontrivial cell {e.k} has a null target")
        if len(e.plus_targets) == 2 and len(e.minus_targets) == 2:
            raise PartitionAuditFailure(f"cell {e.k} is double on both sides")
    for e in dplus + dminus:
        g0, g1 = [t[0] for t in (e.plus_targets if e.double_sign == "+"
                                 else e.minus_targets)]
        hull = IntegerPolytope.from_rational(
            list(g0.rational_vertices()) + list(g1.rational_vertices()))
        if hull.volume() != g0.volume() + g1.volume():
            raise PartitionAuditFailure(f"double {e.k} union not convex")
        if not (hull.contains_polytope(g0) and hull.contains_polytope(g1)):
            raise PartitionAuditFailure(f"double {e.k} union containment")
        if not hull.rescaled(60 * hull.scale).clean_check():
            raise PartitionAuditFailure(f"double {e.k} union not clean")
    for e in entries:
        if not e.is_null:
            e.orientation_type = _assign_type(e)
    return tuple(entries)


# ---------------------------------------------------------------------------
# edge crossing problems

class CrossingProblem:
    __slots__ = ("k", "sign", "edge", "side", "status", "method")

    def __init__(self, k, sign, edge, side):
        self.k = k
        self.sign = sign
        self.edge = edge
        self.side = side
        self.status = "open"
        self.method = None

    def key(self):
        return (self.k, self.sign, self.edge, self.side)

    def __repr__(self):
        return (f"({self.k},{self.sign},{self.edge[0]},{self.edge[1]},"
                f"{self.side}):{self.status}")


def _goal_side(entry, sign):
    tail_side, head_side = entry.code[2], entry.code[3]
    if (sign == "+") == (entry.orientation_type == 1):
        return head_side
    return tail_side


@lru_cache(maxsize=None)
def enumerate_crossing_problems():
    """One problem per (cell, sign, target edge label): the candidate
    exit side that is not the goal.  174 singles give 2 each, 19+19
    doubles give 3 each: 462 in all."""
    problems = []
    for entry in build_correspondence():
        if entry.is_null:
            continue
        for sign, targets in (("+", entry.plus_targets),
                              ("-", entry.minus_targets)):
            goal = _goal_side(entry, sign)
            for _, label in targets:
                sides = CANDIDATE_SIDES[label]
                bad = sides[0] if sides[1] == goal else sides[1]
                problems.append(CrossingProblem(entry.k, sign, label, bad))
    if len(problems) != 462:
        raise CountMismatch(f"expected 462 problems, got {len(problems)}")
    return tuple(problems)


# ---------------------------------------------------------------------------
# the graph method

# criteria of the Graph Avoidance Lemma: (i,j,side) -> (coordinate,
# lower bound, upper bound), bounds as (constant, multiple of A); an
# edge dT(i,j) incident to a vertex with classify image in the open slab
# cannot cross the named side
GRAPH_CRITERIA = {
    (-1, 0, "W"): (0, (0, 1), (1, 0)),
    (-1, 1, "E"): (0, (0, 0), (0, 1)),
    (0, -1, "N"): (1, (0, 1), (1, 0)),
    (0, 1, "S"): (1, (0, 2), (1, 1)),
    (1, -1, "W"): (0, (1, -1), (1, 0)),
    (1, 0, "E"): (0, (0, 0), (1, -1)),
}


def _slab_contains(poly, coord, lo, hi):
    for v in poly.rational_vertices():
        A = v[3]
        if not (lo[0] + lo[1] * A <= v[coord] <= hi[0] + hi[1] * A):
            return False
    return True


def solve_graph_method(problem):
    """Apply the Graph Avoidance criterion for the problem's (i,j,side),
    first to Psi of the RTP cell and failing that to the target graph
    cell itself."""
    key = (problem.edge[0], problem.edge[1], problem.side)
    if key not in GRAPH_CRITERIA:
        return False
    coord, lo, hi = GRAPH_CRITERIA[key]
    entry = build_correspondence()[problem.k]
    if _slab_contains(entry.image, coord, lo, hi):
        return True
    targets = (entry.plus_targets if problem.sign == "+"
               else entry.minus_targets)
    for geom, label in targets:
        if label == problem.edge and _slab_contains(geom, coord, lo, hi):
            return True
    return False


# ---------------------------------------------------------------------------
# the plaid method

def _sweep(polygon_fn, negate=False):
    """The 4D polytope swept out over P in [0,1] by a P-dependent planar
    polygon times [-1,1] in z.  The polygon vertices are affine in P, so
    the sweep is the hull of the slices at P = 0 and P = 1."""
    verts = []
    for P in (Fraction(0), Fraction(1)):
        for vx, vy in polygon_fn(P):
            s = -1 if negate else 1
            for z in (-1, 1):
                verts.append((s * vx, s * vy, s * z, P))
    return IntegerPolytope.from_rational(verts)


def _z_prime(i, j, side):
    """The planar barrier polygon for (i,j,side), as a function of P."""
    if (i, j, side) == (1, 1, "N"):
        return lambda P: ((1 - P, 1 - P), (P - 1, P - 1),
                          (P - 1, -1), (1 - P, -1))
    if (i, j, side) in ((1, 1, "E"), (1, 0, "E")):
        return lambda P: ((1 - P, 1 - P), (-1, -1), (1 - P, -1))
    if (i, j, side) in ((0, 1, "S"), (0, -1, "W")):
        return lambda P: ((-1, -1), (P - 1, P - 1),
                          (1, P - 1), (1 - P, -1))
    return None


@lru_cache(maxsize=None)
def barrier_sets():
    """The ten Z(i,j,side) polytopes keyed by (i,j,side), each tagged
    excluder or confiner; the second five are the negatives of the first
    five under Z(-i,-j,opposite side) = -Z(i,j,side)."""
    base = [((1, 1, "N"), "excluder"), ((1, 1, "E"), "confiner"),
            ((0, 1, "S"), "confiner"), ((1, 0, "E"), "confiner"),
            ((0, -1, "W"), "confiner")]
    out = {}
    for (i, j, side), kind in base:
        fn = _z_prime(i, j, side)
        out[(i, j, side)] = (_sweep(fn), kind)
        out[(-i, -j, OPPOSITE[side])] = (_sweep(fn, negate=True), kind)
    return out


def solve_plaid_method(problem):
    """Excluder test (cell disjoint from the barrier) or confiner test
    (cell inside the barrier), per the barrier's kind."""
    key = (problem.edge[0], problem.edge[1], problem.side)
    entry_geom = triple_partition()[problem.k].geometry
    rec = barrier_sets().get(key)
    if rec is None:
        return False
    zset, kind = rec
    if kind == "excluder":
        return entry_geom.disjoint_interiors(zset)
    return zset.contains_polytope(entry_geom)


# ---------------------------------------------------------------------------
# out of bounds

@lru_cache(maxsize=None)
def bounds_corners():
    """The four corner prisms B_i whose union is the complement of the
    hitset in [-1,1]^3 x [0,1]."""
    b1 = _sweep(lambda P: ((-1, -1), (P - 1, -1), (P - 1, P - 1)))
    b2 = _sweep(lambda P: ((1 - P, -1), (1, -1), (1, P - 1)))
    b3 = _sweep(lambda P: ((-1, -1), (P - 1, -1), (P - 1, P - 1)),
                negate=True)
    b4 = _sweep(lambda P: ((1 - P, -1), (1, -1), (1, P - 1)), negate=True)
    return (b1, b2, b3, b4)


def out_of_bounds_test(k):
    """Whether RTP cell k sits inside one of the corner prisms; its
    squares are then grid empty and its crossing problems never arise."""
    geom = triple_partition()[k].geometry
    return any(b.contains_polytope(geom) for b in bounds_corners())


# ---------------------------------------------------------------------------
# the prover

class ProofReport:
    __slots__ = ("problems", "solved", "recalcitrant")

    def __init__(self, problems):
        self.problems = problems
        self.solved = [p for p in problems if p.status == "solved"]
        self.recalcitrant = [p for p in problems if p.status == "recalcitrant"]

    def lines(self):
        out = []
        for p in self.problems:
            method = p.method if p.method is not None else "-"
            out.append(f"{p.k} {p.sign} {p.edge[0]} {p.edge[1]} "
                       f"{p.side} {p.status} {method}")
        out.append(f"# solved {len(self.solved)} "
                   f"recalcitrant {len(self.recalcitrant)}")
        return out


def _proof_cache_path():
    base = os.environ.get("XDG_CACHE_HOME",
                          os.path.join(os.path.expanduser("~"), ".cache"))
    return os.path.join(base, "plaidkite", "proof.tsv")


@lru_cache(maxsize=None)
def prove_all(use_cache=True):
    """Try every crossing problem with the graph method, the plaid
    method, and the out-of-bounds test, in that order.  Results are
    parameter independent and cached on disk."""
    problems = enumerate_crossing_problems()
    path = _proof_cache_path()
    if use_cache and os.path.exists(path):
        with open(path) as fh:
            rows = [line.split() for line in fh if line.strip()]
        table = {}
        for k, sign, i, j, side, status, method in rows:
            table[(int(k), sign, (int(i), int(j)), side)] = (status, method)
        if len(table) == len(problems):
            for p in problems:
                got = table.get(p.key())
                if got is None:
                    break
                p.status = got[0]
                p.method = None if got[1] == "-" else got[1]
            else:
                return ProofReport(problems)
    for p in problems:
        if solve_graph_method(p):
            p.status, p.method = "solved", "graph"
        elif solve_plaid_method(p):
            p.status, p.method = "solved", "plaid"
        elif out_of_bounds_test(p.k):
            p.status, p.method = "solved", "bounds"
        else:
            p.status = "recalcitrant"
    report = ProofReport(problems)
    if use_cache:
        os.makedirs(os.path.dirname(path), exist_ok=True)
        with open(path, "w") as fh:
            for p in problems:
                fh.write(f"{p.k} {p.sign} {p.edge[0]} {p.edge[1]} "
                         f"{p.side} {p.status} {p.method or '-'}\n")
    return report


# ---------------------------------------------------------------------------
# recalcitrant analysis

# forbidden labels for the free end of a triple whose known half matches
# the pattern (three wildcard letters omitted); the rotated patterns
# carry the negated labels
ERRANT_FORBIDDEN = {
    "EWS": {(1, 0), (1, -1)},
    "EWN": {(-1, 0), (-1, 1)},
    "EWE": {(1, 0), (1, -1), (-1, 0), (-1, 1)},
    "SNE": {(-1, -1), (0, -1)},
    "SNW": {(1, 1), (0, 1)},
    "SNS": {(-1, -1), (1, 1), (0, 1), (0, -1)},
}
_ROT = {"N": "S", "S": "N", "E": "W", "W": "E"}
for _pat, _labs in list(ERRANT_FORBIDDEN.items()):
    ERRANT_FORBIDDEN["".join(_ROT[c] for c in _pat)] = {
        (-i, -j) for i, j in _labs}


def errant_scan():
    """Check that no correspondence entry assigns a forbidden label to
    the free end of a half-known triple.  Returns the violations
    (expected empty)."""
    bad = []
    for entry in build_correspondence():
        if entry.is_null:
            continue
        head_labels = [lab for _, lab in (
            entry.plus_targets if entry.orientation_type == 1
            else entry.minus_targets)]
        tail_labels = [lab for _, lab in (
            entry.minus_targets if entry.orientation_type == 1
            else entry.plus_targets)]
        pat = entry.code[3:6]
        if pat in ERRANT_FORBIDDEN:
            for lab in head_labels:
                if lab in ERRANT_FORBIDDEN[pat]:
                    bad.append((entry.k, "head", pat, lab))
        pat = entry.code[2::-1]
        if pat in ERRANT_FORBIDDEN:
            for lab in tail_labels:
                if lab in ERRANT_FORBIDDEN[pat]:
                    bad.append((entry.k, "tail", pat, lab))
    return bad


def _plaid_reduce_polytope(poly):
    """Translate a plaid-side polytope by the canonical Lambda_1 word
    reducing its centroid into the fundamental box."""
    from .plaid import _centroid, _reduce_word, _word_map
    a, b, c = _reduce_word(_centroid(poly), 2)
    return poly.apply(_word_map(a, b, c))


def follow_partner(k, direction):
    """Apply the curve following map to RTP cell k (forward from the
    head end, backward from the tail end) and identify the RTP cell
    whose lattice translate contains the image."""
    from .plaid import _centroid, _word_map
    cell = triple_partition()[k]
    letter = cell.code[3] if direction == "forward" else cell.code[1]
    moved = pet_step(cell.geometry, ("?", letter),
                     "forward" if direction == "forward" else "backward")
    moved = _plaid_reduce_polytope(moved)
    probe = _centroid(moved)
    words = [_word_map(a, b, c).inverse()
             for a, b, c in product(range(-1, 2), repeat=3)]
    for inv in words:
        back = inv(probe)
        for other in triple_partition():
            if other.geometry.contains_point(back) and \
                    other.geometry.contains_polytope(moved.apply(inv)):
                return other.index
    raise CatchFailure(f"follow image of cell {k} fits no RTP cell")


def _catch_case(problem, entry):
    """Classify a recalcitrant problem into the four catch cases (up to
    180-degree rotation) and verify the case's polytope condition."""
    i, j = problem.edge
    image = entry.image
    if (i, j) in ((-1, 0), (1, 0)):
        # cases 1 and 2: the offending edge is horizontal-ish; the
        # endpoint is pinned by x <= A (or its rotated mirror x >= 1-A)
        if (i, j) == (-1, 0):
            ok = all(v[0] <= v[3] for v in image.rational_vertices())
        else:
            ok = all(v[0] >= 1 - v[3] for v in image.rational_vertices())
        case = 1 if problem.side == "S" else 2
        return case, ok
    if (i, j) in ((0, -1), (0, 1)):
        # case 4 needs the slab condition; case 3 is forced by the
        # direction vector alone
        if (i, j) == (0, -1):
            slab = all(v[0] >= 0 and 1 - v[3] <= v[1] <= 1 + v[3]
                       for v in image.rational_vertices())
        else:
            slab = all(v[0] <= 1 and 1 - v[3] <= v[1] <= 1 + v[3]
                       for v in image.rational_vertices())
        return (4, True) if slab else (3, True)
    return None, False


class CatchReport:
    __slots__ = ("case_counts", "pairs", "partners", "errant")

    def __init__(self, case_counts, pairs, partners, errant):
        self.case_counts = case_counts
        self.pairs = pairs
        self.partners = partners
        self.errant = errant


def _negation_partner_table():
    """Map each RTP index to the index of its image under the negation
    symmetry (point reflection of the plaid picture)."""
    cells = triple_partition()
    by_key = {}
    for c in cells:
        by_key[(c.geometry.scale, c.geometry.vertices)] = c.index
    table = {}
    for c in cells:
        neg = _plaid_reduce_polytope(c.geometry.apply(negation_map()))
        neg = neg.rescaled(60)
        table[c.index] = by_key[(neg.scale, neg.vertices)]
    return table


@lru_cache(maxsize=None)
def recalcitrant_analysis():
    """The catch analysis for the 46 recalcitrant problems: pair them
    under the negation symmetry, verify the curve-following partner of
    each is grid empty, classify the representatives into the four catch
    cases with their polytope conditions, and run the errant scan."""
    report = prove_all()
    entries = build_correspondence()
    recal = report.recalcitrant
    if len(recal) != 46:
        raise CatchFailure(f"expected 46 recalcitrant, got {len(recal)}")

    neg = _negation_partner_table()
    keys = {p.key() for p in recal}
    pairs = []
    seen = set()
    for p in recal:
        if p.key() in seen:
            continue
        partner_key = (neg[p.k], "-" if p.sign == "+" else "+",
                       (-p.edge[0], -p.edge[1]), OPPOSITE[p.side])
        if partner_key not in keys:
            raise CatchFailure(
                f"recalcitrant set not symmetric: {p.key()} alone")
        seen.add(p.key())
        seen.add(partner_key)
        pairs.append((p.key(), partner_key))
    if len(pairs) != 23:
        raise CatchFailure(f"expected 23 symmetry pairs, got {len(pairs)}")

    # one representative per pair: the one listed first in problem order
    reps = {p.key(): p for p in recal}
    case_counts = {1: 0, 2: 0, 3: 0, 4: 0}
    partners = {}
    for key, _ in pairs:
        p = reps[key]
        entry = entries[p.k]
        # curve following: the offending edge sits at the head or tail
        # end; follow forward from the head, backward from the tail.
        # When the image straddles cells at the preferred end, the
        # single-cell follow at the other end supplies the partner.
        at_head = (p.sign == "+") == (entry.orientation_type == 1)
        first = "forward" if at_head else "backward"
        second = "backward" if at_head else "forward"
        try:
            partner = follow_partner(p.k, first)
        except CatchFailure:
            partner = follow_partner(p.k, second)
        if not out_of_bounds_test(partner):
            raise CatchFailure(
                f"follow partner {partner} of cell {p.k} not grid empty")
        partners[key] = partner
        case, ok = _catch_case(p, entry)
        if case is None or not ok:
            raise CatchFailure(f"problem {p.key()} matches no catch case")
        case_counts[case] += 1

    errant = errant_scan()
    if errant:
        raise CatchFailure(f"errant assignments found: {errant}")
    return CatchReport(case_counts, pairs, partners, errant)


# ---------------------------------------------------------------------------
# alignment with the published indices

@lru_cache(maxsize=None)
def paper_alignment():
    """Translation table from the published cell indices to the internal
    canonical (code-sorted) indices, pinned by structural fingerprints."""
    entries = build_correspondence()
    table = {}
    nulls = [e.k for e in entries if e.is_null]
    for paper, internal in zip(range(6), nulls):
        table[paper] = internal

    def psi_vertex_set(entry):
        g = entry.image.rescaled(60)
        return set(g.vertices)

    pinned7 = {(60, 60, 0, 30), (60, 40, 20, 20), (40, 40, 0, 20),
               (60, 40, 0, 20), (60, 60, 0, 20), (45, 45, 0, 15),
               (60, 45, 15, 15), (60, 45, 0, 15)}
    newews = [e.k for e in entries if e.code == "NEWEWS"]
    sevens = [k for k in newews if psi_vertex_set(entries[k]) == pinned7]
    if len(sevens) != 1:
        raise CountMismatch("the pinned NEWEWS image is not unique")
    table[7] = sevens[0]
    rest = [k for k in newews if k != sevens[0]]
    table[138], table[165] = sorted(rest)
    swewen = sorted(e.k for e in entries if e.code == "SWEWEN")
    if len(swewen) != 3:
        raise CountMismatch("expected 3 SWEWEN cells")
    table[103], table[130], table[159] = swewen

    dplus = sorted(e.k for e in entries if e.double_sign == "+")
    dminus = sorted(e.k for e in entries if e.double_sign == "-")
    for paper, internal in zip(range(180, 199), dplus):
        table[paper] = internal
    for paper, internal in zip(range(199, 218), dminus):
        table[paper] = internal

    # cell 50: the confiner example
    zset, _ = barrier_sets()[(-1, -1, "W")]
    fifty = [p.k for p in enumerate_crossing_problems()
             if p.sign == "+" and p.edge == (-1, -1) and p.side == "W"
             and zset.contains_polytope(triple_partition()[p.k].geometry)]
    if fifty:
        table[50] = sorted(set(fifty))[0]

    # cells 157/58: the recalcitrant follow pair with code EWEWES
    report = prove_all()
    for p in report.recalcitrant:
        if p.sign == "-" and p.edge == (-1, 0) and p.side == "S" \
                and entries[p.k].code == "EWEWES":
            entry = entries[p.k]
            at_head = (p.sign == "+") == (entry.orientation_type == 1)
            try:
                partner = follow_partner(
                    p.k, "forward" if at_head else "backward")
            except CatchFailure:
                partner = follow_partner(
                    p.k, "backward" if at_head else "forward")
            table[157] = p.k
            table[58] = partner
            break

    # cells 34/173: each in exactly one recalcitrant problem
    from collections import Counter
    counts = Counter(p.k for p in report.recalcitrant)
    once = sorted(k for k, c in counts.items() if c == 1)
    if len(once) == 2:
        table[34], table[173] = once
    return table
