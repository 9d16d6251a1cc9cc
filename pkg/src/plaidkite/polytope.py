"""Exact convex polytope algebra in dimensions 3 and 4.

A polytope is stored as integer vertices at a positive integer `scale`
(coordinates are scale * true coordinates).  The tests, the facet/vertex
round trips and the volume routine are all exact; there is no floating
point anywhere.

The verification primitives mirror the classical computer-assisted style:
cleanness via small-coefficient integer functionals, disjointness via
separating functionals, containment vertex-by-vertex, volume by recursive
coning over the facet structure (implemented as an exact combinatorial
triangulation), and intersection via the halfspace pipeline
(facets -> concatenated halfspaces -> exact vertex enumeration).
"""

from __future__ import annotations

from fractions import Fraction
from itertools import combinations, product
from math import gcd, factorial

from .linalg import cross, det, solve, vdot, vsub

# paper-compatible volume unit: scale 60, x48, /480  ==  6^4 * 10^3
OMEGA_UNIT = 6 ** 4 * 10 ** 3


class DegeneratePolytope(ValueError):
    pass


class DimensionMismatch(ValueError):
    pass


def _lcm(a, b):
    return a * b // gcd(a, b)


def _functionals(dim, N):
    """Nonzero integer functionals with |c_i| <= N, cheap ones first."""
    funcs = [c for c in product(range(-N, N + 1), repeat=dim) if any(c)]
    funcs.sort(key=lambda c: (sum(abs(x) for x in c), c))
    return funcs


_FUNC_CACHE: dict = {}


def functionals(dim, N):
    key = (dim, N)
    if key not in _FUNC_CACHE:
        _FUNC_CACHE[key] = _functionals(dim, N)
    return _FUNC_CACHE[key]


def affine_rank(points):
    """Dimension of the affine hull, computed by exact row reduction."""
    if len(points) < 2:
        return 0
    base = points[0]
    rows = [list(vsub(p, base)) for p in points[1:]]
    rank = 0
    ncols = len(base)
    for col in range(ncols):
        pivot = next((i for i in range(rank, len(rows)) if rows[i][col] != 0),
                     None)
        if pivot is None:
            continue
        rows[rank], rows[pivot] = rows[pivot], rows[rank]
        prow = rows[rank]
        for i in range(len(rows)):
            if i != rank and rows[i][col] != 0:
                f = Fraction(rows[i][col], prow[col])
                rows[i] = [a - f * b for a, b in zip(rows[i], prow)]
        rank += 1
        if rank == len(rows):
            break
    return rank


def _canon_halfspace(a, b):
    """Canonical form of the halfspace a.x <= b, unique up to positive
    rescaling: integer entries cleared of denominators with gcd 1."""
    row = [Fraction(c) for c in a] + [Fraction(b)]
    den = 1
    for c in row:
        den = _lcm(den, c.denominator)
    row = [int(c * den) for c in row]
    g = 0
    for c in row:
        g = gcd(g, c)
    if g == 0:
        return None
    return tuple(c // g for c in row[:-1]), Fraction(row[-1], g)


class IntegerPolytope:
    """Clean convex polytope with exact integer-scaled vertices."""

    def __init__(self, vertices, scale=1, dim=None, id=None, halfspaces=None):
        vertices = sorted(set(tuple(int(c) for c in v) for v in vertices))
        if not vertices:
            raise DegeneratePolytope("no vertices")
        self.vertices = tuple(vertices)
        self.scale = int(scale)
        self.dim = dim if dim is not None else len(vertices[0])
        self.id = id
        self._halfspaces = halfspaces      # in true (rational) coordinates
        self._volume = None
        if any(len(v) != self.dim for v in self.vertices):
            raise DimensionMismatch("mixed vertex dimensions")

    # -- construction helpers ------------------------------------------

    @classmethod
    def from_rational(cls, points, id=None, halfspaces=None):
        points = [tuple(Fraction(c) for c in p) for p in points]
        den = 1
        for p in points:
            for c in p:
                den = _lcm(den, c.denominator)
        verts = [tuple(int(c * den) for c in p) for p in points]
        return cls(verts, scale=den, id=id, halfspaces=halfspaces)

    def rational_vertices(self):
        s = self.scale
        return [tuple(Fraction(c, s) for c in v) for v in self.vertices]

    def rescaled(self, new_scale):
        """Same polytope, re-expressed at a multiple of the current scale."""
        if new_scale % self.scale:
            raise ValueError("new scale must be a multiple of the old one")
        f = new_scale // self.scale
        return IntegerPolytope([tuple(c * f for c in v) for v in self.vertices],
                               scale=new_scale, id=self.id,
                               halfspaces=self._halfspaces)

    def translate(self, vector):
        """Translate by an exact rational vector."""
        return IntegerPolytope.from_rational(
            [tuple(c + t for c, t in zip(v, vector))
             for v in self.rational_vertices()], id=self.id)

    def apply(self, affine_map):
        return IntegerPolytope.from_rational(
            [affine_map(v) for v in self.rational_vertices()], id=self.id)

    def bounding_box(self):
        rv = self.rational_vertices()
        return (tuple(min(p[i] for p in rv) for i in range(self.dim)),
                tuple(max(p[i] for p in rv) for i in range(self.dim)))

    # -- cleanness / separation ----------------------------------------

    def clean_check(self, N=3):
        """True iff every vertex is the unique maximizer of some integer
        functional with coefficients bounded by N."""
        todo = set(range(len(self.vertices)))
        for c in functionals(self.dim, N):
            vals = [vdot(c, v) for v in self.vertices]
            m = max(vals)
            if vals.count(m) == 1:
                todo.discard(vals.index(m))
                if not todo:
                    return True
        return False

    def disjoint_interiors(self, other, N=5):
        """True iff a functional with |c_i| <= N separates the two polytopes
        (weakly: the interiors are then disjoint)."""
        if self.dim != other.dim:
            raise DimensionMismatch("dimension mismatch")
        s1, s2 = self.scale, other.scale
        for c in functionals(self.dim, N):
            v1 = [vdot(c, v) for v in self.vertices]
            v2 = [vdot(c, v) for v in other.vertices]
            # compare at a common scale without building Fractions
            if max(v1) * s2 <= min(v2) * s1 or max(v2) * s1 <= min(v1) * s2:
                return True
        return False

    # -- facets and containment ----------------------------------------

    def halfspaces(self):
        """Facet halfspaces (a, b), integer a, rational b, meaning a.x <= b
        in true coordinates."""
        if self._halfspaces is None:
            self._halfspaces = [h for h, _ in self.facets()]
        return self._halfspaces

    def facets(self):
        """List of ((a, b), vertex index tuple): each functional is maximized
        exactly on the returned support, which spans codimension 1."""
        d = self.dim
        verts = self.vertices
        if affine_rank(verts) < d:
            raise DegeneratePolytope("vertices do not affinely span")
        seen = {}
        for idx in combinations(range(len(verts)), d):
            base = verts[idx[0]]
            diffs = [vsub(verts[i], base) for i in idx[1:]]
            a = cross(diffs)
            if not any(a):
                continue
            b = vdot(a, base)
            vals = [vdot(a, v) for v in verts]
            mx, mn = max(vals), min(vals)
            if b == mx and mn < mx:
                key = _canon_halfspace(a, Fraction(b, self.scale))
            elif b == mn and mn < mx:
                key = _canon_halfspace(tuple(-c for c in a),
                                       Fraction(-b, self.scale))
                vals = [-v for v in vals]
                b = -b
            else:
                continue
            if key in seen:
                continue
            support = tuple(i for i, v in enumerate(vals) if v == b)
            if affine_rank([verts[i] for i in support]) == d - 1:
                seen[key] = support
        facets = sorted(seen.items())
        self._halfspaces = [h for h, _ in facets]
        return facets

    def contains_point(self, point):
        """Closed containment of an exact rational point."""
        if len(point) != self.dim:
            raise DimensionMismatch("point dimension mismatch")
        return all(vdot(a, point) <= b for a, b in self.halfspaces())

    def contains_point_strict(self, point):
        if len(point) != self.dim:
            raise DimensionMismatch("point dimension mismatch")
        return all(vdot(a, point) < b for a, b in self.halfspaces())

    def contains_point_vrep(self, point):
        """The determinant-functional membership test: the point is outside
        iff it is the unique extreme point of some functional determined by
        an ordered 4-tuple of vertices.  Slower; used as a cross-check."""
        pts = self.rational_vertices()
        d = self.dim
        for idx in combinations(range(len(pts)), d):
            base = pts[idx[0]]
            a = cross([vsub(pts[i], base) for i in idx[1:]])
            if not any(a):
                continue
            for a2 in (a, tuple(-c for c in a)):
                vp = vdot(a2, point)
                if all(vdot(a2, v) < vp for v in pts):
                    return False
        return True

    def contains_polytope(self, inner):
        return all(self.contains_point(p) for p in inner.rational_vertices())

    # -- intersection ---------------------------------------------------

    def intersect(self, other):
        """Closed intersection as a new polytope, or None when the
        intersection is not full-dimensional (interior-disjoint)."""
        if self.dim != other.dim:
            raise DimensionMismatch("dimension mismatch")
        bb1, bb2 = self.bounding_box(), other.bounding_box()
        lo = tuple(max(a, b) for a, b in zip(bb1[0], bb2[0]))
        hi = tuple(min(a, b) for a, b in zip(bb1[1], bb2[1]))
        if any(l > h for l, h in zip(lo, hi)):
            return None
        hs = {}
        for a, b in self.halfspaces() + other.halfspaces():
            key = tuple(a)
            if key not in hs or b < hs[key]:
                hs[key] = b
        # integerize each halfspace and prune against the bbox overlap:
        # a halfspace violated everywhere on it kills the intersection,
        # one satisfied everywhere on it is redundant (the intersection
        # lies inside the overlap box).
        active = []
        for a, b in sorted(hs.items()):
            den = b.denominator if isinstance(b, Fraction) else 1
            ia = tuple(c * den for c in a)
            ib = int(b * den)
            mn = sum(c * (l if c > 0 else h)
                     for c, l, h in zip(ia, lo, hi))
            if mn > ib:
                return None
            mx = sum(c * (h if c > 0 else l)
                     for c, l, h in zip(ia, lo, hi))
            if mx > ib:
                active.append((ia, ib))
        # the bbox overlap walls backstop any halfspace dropped as
        # redundant, so the enumeration stays bounded
        for i in range(self.dim):
            for sgn, bound in ((1, hi[i]), (-1, -lo[i])):
                den = Fraction(bound).denominator
                a = tuple((sgn * den if j == i else 0)
                          for j in range(self.dim))
                active.append((a, int(bound * den)))
        verts = vertex_enumerate(active, self.dim)
        if len(verts) <= self.dim or affine_rank(verts) < self.dim:
            return None
        tight = []
        for a, b in active:
            cnt = sum(1 for v in verts if vdot(a, v) == b)
            if cnt >= self.dim:
                tight.append(_canon_halfspace(a, b))
        return IntegerPolytope.from_rational(verts, halfspaces=tight)

    # -- volume -----------------------------------------------------------

    def volume(self):
        """Exact true volume (a Fraction)."""
        if self._volume is None:
            pts = self.rational_vertices()
            if affine_rank(pts) < self.dim:
                self._volume = Fraction(0)
            else:
                total = Fraction(0)
                for simplex in triangulate(pts):
                    base = pts[simplex[0]]
                    m = [list(vsub(pts[i], base)) for i in simplex[1:]]
                    total += abs(det(m))
                self._volume = total / factorial(self.dim)
        return self._volume

    def scaled_volume(self):
        """dim! * scale^dim * volume -- always a nonnegative integer."""
        v = self.volume() * factorial(self.dim) * self.scale ** self.dim
        assert v.denominator == 1
        return int(v)

    def paper_volume(self):
        """Volume in the classical Omega = 6^4*10^3 unit (dim 4, scale 60):
        scale up by 60, take 48 x vol, accumulate divided by 480."""
        v = self.volume() * OMEGA_UNIT
        assert v.denominator == 1
        return int(v)

    def __repr__(self):
        tag = f" id={self.id}" if self.id is not None else ""
        return (f"IntegerPolytope(dim={self.dim}, scale={self.scale}, "
                f"nverts={len(self.vertices)}{tag})")


def _idet3(m):
    return (m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1])
            - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
            + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0]))


def _idet4(m):
    # expansion by 2x2 minors of the first two rows
    a, b = m[0], m[1]
    c, d = m[2], m[3]
    m01 = a[0] * b[1] - a[1] * b[0]
    m02 = a[0] * b[2] - a[2] * b[0]
    m03 = a[0] * b[3] - a[3] * b[0]
    m12 = a[1] * b[2] - a[2] * b[1]
    m13 = a[1] * b[3] - a[3] * b[1]
    m23 = a[2] * b[3] - a[3] * b[2]
    n01 = c[0] * d[1] - c[1] * d[0]
    n02 = c[0] * d[2] - c[2] * d[0]
    n03 = c[0] * d[3] - c[3] * d[0]
    n12 = c[1] * d[2] - c[2] * d[1]
    n13 = c[1] * d[3] - c[3] * d[1]
    n23 = c[2] * d[3] - c[3] * d[2]
    return m01 * n23 - m02 * n13 + m03 * n12 + m12 * n03 - m13 * n02 + m23 * n01


def vertex_enumerate(halfspaces, dim):
    """Exact vertex enumeration of the polyhedron {a.x <= b} given by
    integer halfspaces.

    Candidate points come from independent dim-subsets of facet hyperplanes;
    a feasible candidate cut out by an independent subset is always a true
    vertex, and every vertex arises this way.  Cramer solves and feasibility
    run in pure integer arithmetic."""
    hs = []
    for a, b in halfspaces:
        den = 1
        for c in list(a) + [b]:
            den = _lcm(den, Fraction(c).denominator)
        hs.append((tuple(int(c * den) for c in a), int(b * den)))
    idet = _idet4 if dim == 4 else _idet3 if dim == 3 else None
    n = len(hs)
    verts = set()
    seen = set()
    for idx in combinations(range(n), dim):
        rows = [hs[i][0] for i in idx]
        if idet is not None:
            d = idet(rows)
        else:
            d = det(rows)
        if d == 0:
            continue
        rhs = [hs[i][1] for i in idx]
        nums = []
        for j in range(dim):
            mj = [row[:j] + (rhs[k],) + row[j + 1:]
                  for k, row in enumerate(rows)]
            nums.append(idet(mj) if idet is not None else det(mj))
        if d < 0:
            d = -d
            nums = [-v for v in nums]
        key = (d, tuple(nums))
        if key in seen:
            continue
        seen.add(key)
        if all(sum(ac * nc for ac, nc in zip(a, nums)) <= b * d
               for a, b in hs):
            verts.add(tuple(Fraction(v, d) for v in nums))
    return sorted(verts)


def triangulate(points):
    """Combinatorial triangulation (index simplices) of the convex hull of
    full-dimensional `points` in R^k, by coning the first point over the
    recursively triangulated facets not containing it."""
    k = len(points[0])
    n = len(points)
    if k == 1:
        lo = min(range(n), key=lambda i: points[i][0])
        hi = max(range(n), key=lambda i: points[i][0])
        return [(lo, hi)]
    simplices = []
    for support in _facet_supports(points):
        if 0 in support:
            continue
        sub = [points[i] for i in support]
        flat = _to_intrinsic(sub, k - 1)
        for s in triangulate(flat):
            simplices.append((0,) + tuple(support[i] for i in s))
    return simplices


def _facet_supports(points):
    """Vertex index sets of the facets of the hull of full-dim points."""
    k = len(points[0])
    n = len(points)
    seen = {}
    for idx in combinations(range(n), k):
        base = points[idx[0]]
        a = cross([vsub(points[i], base) for i in idx[1:]])
        if not any(a):
            continue
        b = vdot(a, base)
        vals = [vdot(a, p) for p in points]
        mx, mn = max(vals), min(vals)
        if b == mx and mn < mx:
            pass
        elif b == mn and mn < mx:
            a = tuple(-c for c in a)
            b = -b
            vals = [-v for v in vals]
        else:
            continue
        key = _canon_halfspace(a, b)
        if key in seen:
            continue
        support = tuple(i for i, v in enumerate(vals) if v == b)
        if affine_rank([points[i] for i in support]) == k - 1:
            seen[key] = support
    return list(seen.values())


def _to_intrinsic(points, target_dim):
    """Exact intrinsic coordinates (R^target_dim) for points lying in an
    affine subspace, via a Gram-matrix solve over a greedy affine basis.
    The map is affine, so hull combinatorics are preserved."""
    base = points[0]
    basis = []
    for p in points[1:]:
        cand = basis + [vsub(p, base)]
        if affine_rank([tuple(0 for _ in base)] + cand) == len(cand):
            basis.append(vsub(p, base))
            if len(basis) == target_dim:
                break
    if len(basis) < target_dim:
        raise DegeneratePolytope("facet does not span expected dimension")
    gram = [[vdot(u, v) for v in basis] for u in basis]
    out = []
    for p in points:
        rhs = [vdot(u, vsub(p, base)) for u in basis]
        out.append(solve(gram, rhs))
    return out


# -- polytope table files -------------------------------------------------

def write_table(path, polytopes, labels=None):
    """One record per line:
    id scale dim nverts v11 v12 ... label-token ('#' starts a comment)."""
    with open(path, "w") as fh:
        fh.write("# id scale dim nverts coords... label\n")
        for i, poly in enumerate(polytopes):
            label = "-" if labels is None else str(labels[i])
            coords = " ".join(str(c) for v in poly.vertices for c in v)
            pid = poly.id if poly.id is not None else i
            fh.write(f"{pid} {poly.scale} {poly.dim} "
                     f"{len(poly.vertices)} {coords} {label}\n")


def read_table(path):
    """Returns a list of (IntegerPolytope, label-token)."""
    out = []
    with open(path) as fh:
        for line in fh:
            line = line.split("#")[0].strip()
            if not line:
                continue
            parts = line.split()
            pid, scale, dim, nv = parts[0], int(parts[1]), int(parts[2]), int(parts[3])
            coords = [int(c) for c in parts[4:4 + nv * dim]]
            label = parts[4 + nv * dim]
            verts = [tuple(coords[i * dim:(i + 1) * dim]) for i in range(nv)]
            out.append((IntegerPolytope(verts, scale=scale, id=pid), label))
    return out
