"""The normalized arithmetic graph and its master picture.

The graph PET lives on R^3 x [0,1] with coordinates (x, y, z, A).  Its
lattice is generated by

    T_X(x,y,z,A) = (x+1, y-1, z-1, A)
    T_Y(x,y,z,A) = (x, y+1+A, z+1-A, A)
    T_Z(x,y,z,A) = (x, y, z+1+A, A)

and a fundamental domain is R = union over A of [0,1] x [0,1+A]^2 x {A}.
Two Lambda-invariant partitions of the space into 14 integer polytopes
each -- the (+) and (-) graph partitions -- carry labels (i,j) with
i, j in {-1,0,1}.  The point Phi'(m,n) = (t,t,t,A), t = Am + n + 1/(2q),
lies in the interior of one cell of each partition, and the two labels
give the two edges of the arithmetic graph at (m,n): the edges from
(m,n) to (m,n)+(i,j).

The graph is normalized by the canonical affine map T, whose derivative
dT carries the eight shortest integer vectors to the distinguished edge
directions.  Pre-composing the classifier with T^{-1} gives the clean
formula Phi(x,y) = (x,x,x,A) on the graph grid T(Z^2).
"""

from fractions import Fraction
from functools import lru_cache
from itertools import product
from math import floor

from .linalg import AffineMap
from .params import EvenRationalParam
from .polytope import IntegerPolytope
from .plaid import (BoundaryHit, LabeledPolytope, PartitionAuditFailure)


class NonMatchingDegrees(Exception):
    """Edge reciprocity failed while assembling the arithmetic graph."""


# ---------------------------------------------------------------------------
# the canonical affine map

def canonical_T(param):
    """The canonical affine map T and its inverse, as a pair of 2D affine
    maps.  T carries Z^2 to the graph grid; T(x,y) has first coordinate
    A x + y + 1/(2q)."""
    A = param.A
    q, tau, omega = param.q, param.tau, param.omega
    d = (A + 1) ** 2
    m_inv = [[Fraction(2 * A, 1) / d, (A + 1) / d],
             [(-A * A + 2 * A + 1) / d, (-A * A - A) / d]]
    t_inv = (Fraction(-1 - 2 * q * tau, 2 * omega),
             Fraction(-1 + 2 * param.p * tau, 2 * omega))
    T_inv = AffineMap(m_inv, t_inv)
    return T_inv.inverse(), T_inv


def dT(param):
    """The derivative matrix of the canonical map."""
    A = param.A
    return [[A, Fraction(1)],
            [(1 + 2 * A - A * A) / (1 + A), Fraction(-2 * A, 1) / (1 + A)]]


def dT_image(param, i, j):
    """dT applied to the integer vector (i, j)."""
    m = dT(param)
    return (m[0][0] * i + m[0][1] * j, m[1][0] * i + m[1][1] * j)


def anchor_point(param):
    """The anchor zeta = ((1+A)/2, (1-A)/2); T^{-1}(zeta) is an integer
    point."""
    A = param.A
    return ((1 + A) / 2, (1 - A) / 2)


# the eight shortest nonzero integer vectors; their dT-images are the
# distinguished edge directions
SHORT_VECTORS = ((1, 0), (-1, 0), (0, 1), (0, -1),
                 (1, 1), (-1, -1), (1, -1), (-1, 1))


def graph_grid(param, region):
    """Grid points of T(Z^2) inside region = (x0, y0, x1, y1), each with
    the unit square that owns it.  Returns a list of
    ((m, n), point, square) triples."""
    x0, y0, x1, y1 = (Fraction(v) for v in region)
    T, T_inv = canonical_T(param)
    corners = [T_inv((x, y)) for x in (x0, x1) for y in (y0, y1)]
    m_lo = floor(min(c[0] for c in corners)) - 1
    m_hi = floor(max(c[0] for c in corners)) + 2
    n_lo = floor(min(c[1] for c in corners)) - 1
    n_hi = floor(max(c[1] for c in corners)) + 2
    out = []
    for m in range(m_lo, m_hi):
        for n in range(n_lo, n_hi):
            pt = T((m, n))
            if x0 <= pt[0] < x1 and y0 <= pt[1] < y1:
                square = (floor(pt[0]), floor(pt[1]))
                out.append(((m, n), pt, square))
    return out


def grid_geometry_suite(param, window=6):
    """Exact verification of the grid geometry facts: closed forms for the
    line spacings, slope avoidance, the operator-norm bound, anchor
    integrality, and finite-window statements about the grid itself.
    Returns a dict of named boolean results."""
    A = param.A
    T, T_inv = canonical_T(param)
    results = {}

    # T and T^{-1} really are inverse, and dT matches the matrix of T
    comp = T.compose(T_inv)
    results["inverse_pair"] = (
        all(comp.matrix[r][c] == (1 if r == c else 0)
            for r in range(2) for c in range(2))
        and tuple(comp.translation) == (0, 0))
    results["dT_matches"] = all(
        T.matrix[r][c] == dT(param)[r][c] for r in range(2) for c in range(2))

    # statement 1: first coordinate of T(x,y) is A x + y + 1/(2q)
    results["first_coordinate"] = all(
        T((x, y))[0] == A * x + y + param.iota
        for x in range(-3, 4) for y in range(-3, 4))

    # anchor integrality
    zeta = anchor_point(param)
    pre = T_inv(zeta)
    results["anchor_integral"] = all(v.denominator == 1 for v in pre)

    # statement 4: the distinguished directions
    results["dT_images"] = (
        dT_image(param, 0, 1) == (1, -param.P)
        and dT_image(param, 1, 1) == (1 + A, 1 - A)
        and dT_image(param, 1, 0) == (A, (1 + 2 * A - A * A) / (1 + A))
        and dT_image(param, 1, -1) == (A - 1, (1 + 4 * A - A * A) / (1 + A)))

    # statements 5-6: spacing of the line families.  The family F(i,j)
    # consists of the lines through the grid in direction dT(i,j); the
    # vertical (resp. horizontal) spacing of consecutive lines is the
    # lattice covolume 1+A divided by |w_x| (resp. |w_y|), w = dT(i,j).
    def spacing(i, j):
        w = dT_image(param, i, j)
        return tuple(None if c == 0 else (1 + A) / abs(c) for c in w)

    d10 = spacing(1, 0)
    d01 = spacing(0, 1)
    d11 = spacing(1, 1)
    dm11 = spacing(-1, 1)
    results["d_values"] = (
        d10 == (1 + 1 / A, (1 + A) ** 2 / (1 + 2 * A - A * A))
        and d01 == (1 + A, (1 + A) ** 2 / (2 * A))
        and d11 == (1, (1 + A) / (1 - A))
        and dm11 == ((1 + A) / (1 - A), (1 + A) ** 2 / (1 + 4 * A - A * A)))
    others = [d10[0], d10[1], d01[0], d01[1], d11[0], d11[1], dm11[0]]
    results["spacing_at_least_one"] = all(v >= 1 for v in others)

    # statement 7: slopes of the distinguished directions avoid
    # {-1, 0, 1, infinity}
    slopes_ok = True
    for i, j in ((1, 0), (0, 1), (1, 1), (1, -1)):
        w = dT_image(param, i, j)
        if w[0] == 0 or w[1] == 0 or w[1] == w[0] or w[1] == -w[0]:
            slopes_ok = False
    results["slopes_avoided"] = slopes_ok

    # operator norm bound via the Frobenius norm of dT^{-1}
    frob = sum(T_inv.matrix[r][c] ** 2 for r in range(2) for c in range(2))
    closed = 2 * (1 + 3 * A + 4 * A ** 2 - A ** 3 + A ** 4) / (1 + A) ** 4
    results["inverse_norm"] = frob == closed and frob <= 2
    results["determinant"] = (
        T.matrix[0][0] * T.matrix[1][1]
        - T.matrix[0][1] * T.matrix[1][0] == -(1 + A))

    # finite-window statements 1-3 about the grid itself
    pts = graph_grid(param, (-window, -window, window, window))
    results["no_integer_coordinates"] = all(
        pt[0].denominator != 1 and pt[1].denominator != 1
        for _, pt, _ in pts)
    squares = [sq for _, _, sq in pts]
    results["one_per_square"] = len(squares) == len(set(squares))
    occupied = set(squares)
    results["three_consecutive"] = all(
        any((i + k, j) in occupied for k in range(3))
        for i in range(-window, window - 2)
        for j in range(-window + 1, window - 1))

    return results


# ---------------------------------------------------------------------------
# classifying maps

def phi_prime(param, m, n):
    """The classifying map on Z^2: (t,t,t,A), t = Am + n + 1/(2q)."""
    t = param.A * m + n + param.iota
    return (t, t, t, param.A)


def graph_classify(param, point):
    """The classifying map on the graph grid: (x,x,x,A) where x is the
    point's first coordinate."""
    x = Fraction(point[0])
    return (x, x, x, param.A)


def reconstruction(param, point):
    """Recover the grid point mod Z^2 from a classifying-map image:
    Theta_1 = x, Theta_2 = (y - Ax)/(1+A), both taken mod 1.  Theta kills
    the graph lattice, so any lattice translate gives the same answer."""
    x, y = Fraction(point[0]), Fraction(point[1])
    A = param.A
    th1 = x - floor(x)
    th2 = (y - A * x) / (1 + A)
    return (th1, th2 - floor(th2))


def orientation_rho(param, m, n):
    """floor((1+A)m + 1/(2q)); when even, the (+) partition supplies the
    outward-pointing edge at (m, n)."""
    return floor((1 + param.A) * m + param.iota)


# ---------------------------------------------------------------------------
# the two graph partitions

# the 14 fundamental cells of the (+) partition, as integer vertex lists
# in (x, y, z, A), with their edge labels
PLUS_DATA = (
    (((0, -1, 0, 0), (0, 0, 0, 1), (0, -1, 1, 1), (0, 0, 1, 1),
      (1, 0, 1, 1)), (0, 1)),
    (((0, -1, 0, 1), (1, -1, 0, 0), (1, -1, 0, 1), (1, 0, 0, 1),
      (1, -1, 1, 1)), (0, 1)),
    (((0, 0, 1, 0), (0, 1, 1, 1), (0, 0, 2, 1), (0, 1, 2, 1),
      (1, 1, 2, 1)), (-1, 0)),
    (((0, 0, 0, 0), (0, 0, 1, 1), (1, 0, 1, 1), (1, 1, 1, 1),
      (1, 0, 2, 1)), (-1, 0)),
    (((0, -1, 1, 1), (1, -1, 1, 0), (1, -1, 1, 1), (1, 0, 1, 1),
      (1, -1, 2, 1)), (1, 0)),
    (((0, 0, 0, 0), (1, 0, 0, 0), (1, 0, 1, 0), (1, 0, 1, 1),
      (1, 1, 1, 1), (1, 0, 2, 1)), (-1, -1)),
    (((0, -1, 0, 0), (0, 0, 0, 0), (1, 0, 0, 0), (1, 1, 0, 1),
      (1, 0, 1, 1), (1, 1, 1, 1)), (-1, 0)),
    (((0, -1, 1, 0), (0, 0, 1, 0), (0, 0, 1, 1), (1, 0, 1, 0),
      (0, -1, 2, 1), (0, 0, 2, 1), (1, 0, 2, 1)), (1, 0)),
    (((0, -1, 0, 0), (0, 0, 0, 0), (0, 0, 0, 1), (0, 1, 0, 1),
      (1, 1, 0, 1), (0, 0, 1, 1), (1, 0, 1, 1), (1, 1, 1, 1)), (-1, 1)),
    (((0, 0, 0, 0), (0, 1, 0, 1), (0, -1, 1, 0), (0, 0, 1, 0),
      (0, 0, 1, 1), (1, 0, 1, 0), (0, 1, 1, 1), (1, 1, 1, 1)), (0, 1)),
    (((0, -1, 0, 0), (1, -1, 0, 0), (0, 0, 0, 1), (1, 0, 0, 0),
      (1, 0, 0, 1), (1, 1, 0, 1), (1, -1, 1, 0), (1, 0, 1, 1)), (0, 1)),
    (((0, 0, 1, 0), (0, 0, 1, 1), (1, 0, 1, 0), (0, 1, 1, 1),
      (1, 1, 1, 1), (0, 0, 2, 1), (1, 0, 2, 1), (1, 1, 2, 1)), (0, 0)),
    (((0, -1, 0, 0), (0, -1, 0, 1), (1, -1, 0, 0), (0, 0, 0, 1),
      (1, 0, 0, 1), (0, -1, 1, 1), (1, -1, 1, 0), (1, -1, 1, 1),
      (1, 0, 1, 1)), (1, 1)),
    (((0, -1, 0, 0), (0, 0, 0, 0), (1, 0, 0, 0), (0, -1, 1, 0),
      (0, -1, 1, 1), (1, -1, 1, 0), (0, 0, 1, 1), (1, 0, 1, 0),
      (1, 0, 1, 1), (0, -1, 2, 1), (1, -1, 2, 1), (1, 0, 2, 1)), (0, 0)),
)

# I(x,y,z,A) = (1-x, A-y, 2+A-z, A): the involution carrying the (+)
# partition to the (-) partition
INVOLUTION = AffineMap([[-1, 0, 0, 0], [0, -1, 0, 1],
                        [0, 0, -1, 1], [0, 0, 0, 1]], (1, 0, 2, 0))

# the graph lattice generators as integer affine maps in (x, y, z, A)
GRAPH_TX = AffineMap([[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 1, 0],
                      [0, 0, 0, 1]], (1, -1, -1, 0))
GRAPH_TY = AffineMap([[1, 0, 0, 0], [0, 1, 0, 1], [0, 0, 1, -1],
                      [0, 0, 0, 1]], (0, 1, 1, 0))
GRAPH_TZ = AffineMap([[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 1, 1],
                      [0, 0, 0, 1]], (0, 0, 1, 0))


def graph_lattice_word(a, b, c):
    """T_X^a T_Y^b T_Z^c as a single integer affine map."""
    return AffineMap([[1, 0, 0, 0], [0, 1, 0, b], [0, 0, 1, c - b],
                      [0, 0, 0, 1]], (a, b - a, b + c - a, 0))


def fundamental_solid():
    """R = union over A of [0,1] x [0,1+A]^2 x {A}, as an integer
    polytope; its volume is 7/3."""
    verts = [(x, y, z, 0) for x, y, z in product((0, 1), repeat=3)]
    verts += [(x, y, z, 1) for x in (0, 1) for y in (0, 2) for z in (0, 2)]
    return IntegerPolytope(tuple(sorted(verts)), 1, dim=4)


@lru_cache(maxsize=None)
def graph_partitions():
    """The 14 (+) cells and the 14 (-) cells, audited: integral, clean,
    pairwise interior-disjoint, total volume 7/3 per family, minus cells
    the involution images of the plus cells with negated labels, and no
    (+) cell labeled (1,-1)."""
    plus, minus = [], []
    for verts, label in PLUS_DATA:
        geom = IntegerPolytope(tuple(sorted(verts)), 1, dim=4)
        plus.append(LabeledPolytope(geom, label))
        mgeom = geom.apply(INVOLUTION)
        minus.append(LabeledPolytope(mgeom, (-label[0], -label[1])))
    for family in (plus, minus):
        if len(family) != 14:
            raise PartitionAuditFailure("expected 14 cells per family")
        if sum(c.geometry.volume() for c in family) != Fraction(7, 3):
            raise PartitionAuditFailure("graph family volume is not 7/3")
        for i in range(14):
            scaled = family[i].geometry.rescaled(60)
            if not scaled.clean_check():
                raise PartitionAuditFailure(f"graph cell {i} not clean")
            for j in range(i + 1, 14):
                if not family[i].geometry.disjoint_interiors(
                        family[j].geometry):
                    raise PartitionAuditFailure(
                        f"graph cells {i}, {j} overlap")
    if fundamental_solid().volume() != Fraction(7, 3):
        raise PartitionAuditFailure("fundamental solid volume is not 7/3")
    if any(c.label == (1, -1) for c in plus):
        raise PartitionAuditFailure("a (+) cell carries the label (1,-1)")
    return tuple(plus), tuple(minus)


@lru_cache(maxsize=None)
def _graph_cover():
    """Lattice translates of both partitions covering the reduction box
    [0,1] x [0,2] x [0,2] x [0,1]."""
    plus, minus = graph_partitions()
    cover = {"+": [], "-": []}
    bounds = ((0, 1), (0, 2), (0, 2), (0, 1))
    for sign, family in (("+", plus), ("-", minus)):
        for cell in family:
            for a, b, c in product(range(-2, 3), repeat=3):
                tr = cell.geometry.apply(graph_lattice_word(a, b, c))
                bb = tr.bounding_box()
                if all(bb[0][i] < bounds[i][1] and bb[1][i] > bounds[i][0]
                       for i in range(4)):
                    cover[sign].append((tr, cell.label))
    return cover


def reduce_graph_lattice(param, point):
    """Reduce a point of R^3 x {A} into the fundamental domain
    [0,1) x [0,1+A)^2 under the graph lattice."""
    x, y, z = Fraction(point[0]), Fraction(point[1]), Fraction(point[2])
    A = param.A
    a = floor(x)
    x, y, z = x - a, y + a, z + a
    b = floor(y / (1 + A))
    y, z = y - b * (1 + A), z - b * (1 - A)
    c = floor(z / (1 + A))
    z = z - c * (1 + A)
    return (x, y, z, A)


def _locate_graph(param, point, sign):
    reduced = reduce_graph_lattice(param, point)
    for geom, label in _graph_cover()[sign]:
        if geom.contains_point_strict(reduced):
            return label
    raise BoundaryHit(f"graph point on a cell boundary: {point}")


class EdgeAssignment:
    """The pair of edge labels at a grid point: the (+) partition and
    (-) partition labels of the cells containing its classify image."""

    __slots__ = ("plus", "minus")

    def __init__(self, plus, minus):
        self.plus = plus
        self.minus = minus

    def __iter__(self):
        return iter((self.plus, self.minus))

    def __eq__(self, other):
        return (self.plus, self.minus) == (other.plus, other.minus)

    def __repr__(self):
        return f"EdgeAssignment({self.plus}, {self.minus})"

    @property
    def isolated(self):
        return self.plus == (0, 0) and self.minus == (0, 0)


def edge_assignment(param, point):
    """Edge labels at a graph grid point (accepts the integer pair (m,n)
    as well)."""
    if all(Fraction(v).denominator == 1 for v in point):
        image = phi_prime(param, int(point[0]), int(point[1]))
    else:
        image = graph_classify(param, point)
    plus = _locate_graph(param, image, "+")
    minus = _locate_graph(param, image, "-")
    if (plus == (0, 0)) != (minus == (0, 0)):
        raise NonMatchingDegrees(f"half-isolated vertex at {point}")
    return EdgeAssignment(plus, minus)


# ---------------------------------------------------------------------------
# building the graph

class PolygonFamily:
    """A disjoint family of polygonal paths: vertices, undirected edges,
    and connected components (each a vertex list in path order)."""

    def __init__(self, vertices, edges, components):
        self.vertices = vertices
        self.edges = edges
        self.components = components


def build_graph(param, region):
    """The normalized arithmetic graph restricted to the grid points in
    region = (m0, n0, m1, n1) of Z^2 (half-open).  Vertices are grid
    points T(m,n); each non-isolated vertex carries the two edges named
    by its assignment.  Reciprocity of assignments is enforced."""
    m0, n0, m1, n1 = region
    T, _ = canonical_T(param)
    assignments = {}
    for m in range(m0, m1):
        for n in range(n0, n1):
            assignments[(m, n)] = edge_assignment(param, (m, n))
    edges = set()
    for (m, n), asg in assignments.items():
        for i, j in asg:
            if (i, j) == (0, 0):
                continue
            other = (m + i, n + j)
            if other in assignments:
                back = assignments[other]
                if (-i, -j) not in (back.plus, back.minus):
                    raise NonMatchingDegrees(
                        f"edge {(m, n)} -> {other} not reciprocated")
            edges.add(frozenset(((m, n), other)))
    vertices = {mn: T(mn) for mn in assignments}
    for e in edges:
        for mn in e:
            if mn not in vertices:
                vertices[mn] = T(mn)
    adj = {}
    for e in edges:
        a, b = tuple(e)
        adj.setdefault(a, []).append(b)
        adj.setdefault(b, []).append(a)
    seen = set()
    components = []
    for start in sorted(adj):
        if start in seen:
            continue
        path = [start]
        seen.add(start)
        while True:
            nxt = [v for v in adj[path[-1]] if v not in seen]
            if not nxt:
                break
            path.append(nxt[0])
            seen.add(nxt[0])
        # extend from the other end for open (window-truncated) paths
        while True:
            prv = [v for v in adj[path[0]] if v not in seen]
            if not prv:
                break
            path.insert(0, prv[0])
            seen.add(prv[0])
        components.append(path)
    return PolygonFamily(vertices, edges, components)


# ---------------------------------------------------------------------------
# double crossings

def _unit_edges_crossed(a, b):
    """The unit lattice edges (shared sides of adjacent unit squares)
    that the open segment from a to b crosses."""
    out = []
    dx, dy = b[0] - a[0], b[1] - a[1]
    if dx != 0:
        lo, hi = sorted((a[0], b[0]))
        for k in range(floor(lo) + 1, floor(hi) + 1):
            if hi == k:
                continue
            y = a[1] + dy * (k - a[0]) / dx
            if y.denominator != 1:
                out.append(("V", k, floor(y)))
    if dy != 0:
        lo, hi = sorted((a[1], b[1]))
        for k in range(floor(lo) + 1, floor(hi) + 1):
            if hi == k:
                continue
            x = a[0] + dx * (k - a[1]) / dy
            if x.denominator != 1:
                out.append(("H", k, floor(x)))
    return out


def double_crossing_audit():
    """The polytope-level elimination of double crossings: no (+) cell
    carries the label (1,-1), and every (-) cell labeled (1,-1) lies in
    the halfspace x >= 1 - A."""
    plus, minus = graph_partitions()
    if any(c.label == (1, -1) for c in plus):
        return False
    for cell in minus:
        if cell.label != (1, -1):
            continue
        for v in cell.geometry.rational_vertices():
            if v[0] + v[3] < 1:
                return False
    return True


def double_crossing_scan(param, region):
    """Scan the built graph for pairs of vertex-disjoint distinguished
    edges crossing the same unit lattice edge.  Returns the offending
    pairs (expected empty); also re-runs the polytope audit."""
    if not double_crossing_audit():
        raise PartitionAuditFailure("double-crossing polytope audit failed")
    fam = build_graph(param, region)
    T, _ = canonical_T(param)
    hits = {}
    for e in fam.edges:
        a, b = tuple(e)
        pa, pb = T(a), T(b)
        for unit in _unit_edges_crossed(pa, pb):
            hits.setdefault(unit, []).append(e)
    bad = []
    for unit, crossers in hits.items():
        for i in range(len(crossers)):
            for j in range(i + 1, len(crossers)):
                if not (crossers[i] & crossers[j]):
                    bad.append((unit, crossers[i], crossers[j]))
    return bad
