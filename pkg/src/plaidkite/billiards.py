"""Exact outer billiards on kites: the dynamical oracle.

The kite K_A has vertices (-1,0), (0,1), (0,-1), (A,0).  The outer
billiards map reflects an outside point through the tangent vertex
picked by a fixed rotational convention; psi_A is its second iterate,
a piecewise translation preserving the horizontal lines with odd
integer intercepts.  Psi_A, the first return of psi_A to the ray pair
Xi = R_+ x {-1,1}, induces the arithmetic graph on Z^2:

    Psi_A(2 m0 A + 2 n0 + 1/q, y0) = (2 m1 A + 2 n1 + 1/q, y1)

joins (m0,n0) to (m1,n1), with y = (-1)^(m+n) at each end.  This graph
is computed here by direct iteration of the exact dynamics and serves
as an independent check on the classifying-map construction.
"""

from fractions import Fraction

from .graph import build_graph


class SingularPoint(Exception):
    """The tangent vertex is ambiguous (the point sits on an extended
    edge line of the kite)."""


class NonReturn(Exception):
    """The orbit failed to return within the iteration cap."""


RETURN_CAP = 10 ** 6


def kite(param):
    """Vertices of K_A in counterclockwise order."""
    return ((-1, 0), (0, -1), (Fraction(param.A), 0), (0, 1))


def _cross(o, a, b):
    return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])


def _tangent_vertex(verts, point, orientation):
    """The tangent vertex of the convex polygon as seen from an outside
    point: the one with every other vertex strictly on the given side
    (+1 = left of the ray point->vertex, -1 = right)."""
    for v in verts:
        signs = [_cross(point, v, w) for w in verts if w != v]
        if all(s * orientation > 0 for s in signs):
            return v
        if all(s * orientation >= 0 for s in signs) and 0 in signs:
            raise SingularPoint(f"point {point} on a tangent line")
    raise SingularPoint(f"no tangent vertex from {point}")


def outer_step(param, point, orientation=1):
    """One application of the outer billiards map: reflection through
    the tangent vertex chosen by the orientation convention.  The
    default orientation is calibrated against the arithmetic-graph
    prediction at p/q = 1/2."""
    v = _tangent_vertex(kite(param), point, orientation)
    return (2 * v[0] - point[0], 2 * v[1] - point[1])


def psi(param, point, orientation=1):
    """The second iterate: the piecewise translation on the special
    lines."""
    return outer_step(param, outer_step(param, point, orientation),
                      orientation)


def _start_point(param, m, n):
    x = 2 * m * param.A + 2 * n + Fraction(1, param.q)
    y = 1 if (m + n) % 2 == 0 else -1
    return (x, y)


def _decode(param, point, m0, n0):
    """Recover (m1, n1) with x = 2 m1 A + 2 n1 + 1/q, y = (-1)^(m1+n1),
    choosing the representative within unit box distance of (m0, n0)."""
    p, q = param.p, param.q
    x, y = point
    r2 = (x - Fraction(1, q)) * q           # = 2 m1 p + 2 n1 q
    if r2.denominator != 1 or int(r2) % 2:
        raise NonReturn(f"return point {point} off the lattice")
    r = int(r2) // 2                          # m1 p + n1 q = r
    # one solution via the inverse of p mod q
    m_base = (r * pow(p, -1, q)) % q
    n_base = (r - m_base * p) // q
    for k in range(-abs(m0) - q - 2, abs(m0) + q + 3):
        m1 = m_base + k * q
        n1 = n_base - k * p
        if abs(m1 - m0) <= 1 and abs(n1 - n0) <= 1:
            if ((-1) ** (m1 + n1)) == y:
                return m1, n1
    raise NonReturn(f"no admissible (m1,n1) for {point} near ({m0},{n0})")


def first_return(param, m0, n0, direction=1, orientation=1):
    """Iterate psi_A (or its inverse for direction=-1) from the start
    point of (m0, n0) until the orbit returns to Xi; decode the result
    as a lattice neighbor."""
    start = _start_point(param, m0, n0)
    if start[0] <= 0:
        raise ValueError("start point not in Xi")
    cur = start
    o = orientation * direction
    for step in range(1, RETURN_CAP + 1):
        cur = psi(param, cur, o)
        if cur[1] in (-1, 1) and cur[0] > 0:
            m1, n1 = _decode(param, cur, m0, n0)
            eps = (-1) ** (m0 + m1 + n0 + n1)
            if cur[1] != start[1] * eps and direction == 1:
                raise NonReturn("parity identity violated")
            return m1, n1, eps, step
    raise NonReturn(f"orbit of ({m0},{n0}) did not return in {RETURN_CAP}")


def dyn_graph(param, window, orientation=1):
    """Undirected arithmetic-graph edges over the window (m, n in
    [-window, window]), restricted to the half plane 2mA + 2n > 0 where
    the dynamics is defined."""
    edges = set()
    isolated = set()
    A = param.A
    for m in range(-window, window + 1):
        for n in range(-window, window + 1):
            if 2 * m * A + 2 * n <= 0:
                continue
            ends = []
            for direction in (1, -1):
                m1, n1, eps, _ = first_return(param, m, n, direction,
                                              orientation)
                ends.append((m1, n1))
            if all(e == (m, n) for e in ends):
                isolated.add((m, n))
                continue
            for e in ends:
                if e != (m, n):
                    edges.add(tuple(sorted([(m, n), e])))
    return edges, isolated


def oracle_diff(param, window, orientation=1):
    """Compare the dynamical graph with the classifying-map graph on the
    window; returns (missing, extra, isolated mismatches)."""
    dyn_edges, dyn_isolated = dyn_graph(param, window, orientation)
    fam = build_graph(param, (-window - 1, -window - 1,
                              window + 1, window + 1))
    A = param.A

    def in_scope(vertex):
        m, n = vertex
        return abs(m) <= window and abs(n) <= window and \
            2 * m * A + 2 * n > 0

    pet_edges = set()
    for a, b in fam.edges:
        if in_scope(a) and in_scope(b):
            pet_edges.add(tuple(sorted([a, b])))
    dyn_scoped = {e for e in dyn_edges if in_scope(e[0]) and in_scope(e[1])}
    missing = sorted(pet_edges - dyn_scoped)
    extra = sorted(dyn_scoped - pet_edges)
    return missing, extra, dyn_isolated
