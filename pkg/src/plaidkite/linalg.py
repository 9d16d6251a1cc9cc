"""Small exact linear-algebra helpers (dims 1..4) and affine lattice maps.

Coordinates are Fractions or ints; all computations are exact.
"""

from __future__ import annotations

from fractions import Fraction
from itertools import combinations
from math import gcd


def det(m):
    """Determinant of a small square matrix (list of rows), exact."""
    n = len(m)
    if n == 1:
        return m[0][0]
    if n == 2:
        return m[0][0] * m[1][1] - m[0][1] * m[1][0]
    if n == 3:
        return (m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1])
                - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
                + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0]))
    # cofactor expansion along the first row
    total = 0
    for j in range(n):
        if m[0][j] == 0:
            continue
        minor = [row[:j] + row[j + 1:] for row in m[1:]]
        total += (-1) ** j * m[0][j] * det(minor)
    return total


def solve(m, b):
    """Solve m x = b exactly by Cramer's rule; returns None when singular."""
    d = det(m)
    if d == 0:
        return None
    n = len(m)
    out = []
    for j in range(n):
        mj = [row[:j] + [bi] + row[j + 1:] for row, bi in zip(m, b)]
        out.append(Fraction(det(mj), d))
    return tuple(out)


def cross(vectors):
    """Generalized cross product: vector orthogonal to d-1 vectors in R^d."""
    d = len(vectors) + 1
    assert all(len(v) == d for v in vectors)
    out = []
    for j in range(d):
        minor = [[v[k] for k in range(d) if k != j] for v in vectors]
        out.append((-1) ** j * det(minor))
    return tuple(out)


def normalize_functional(coeffs, offset):
    """Scale an integer (coeffs, offset) pair by the gcd, fixing orientation
    of coeffs to the first nonzero entry being positive is NOT done here --
    callers keep the inequality direction, so only the gcd is divided out."""
    g = 0
    for c in coeffs:
        g = gcd(g, c)
    g = gcd(g, offset)
    if g > 1:
        coeffs = tuple(c // g for c in coeffs)
        offset = offset // g
    return tuple(coeffs), offset


def clear_denominators(point):
    """Return (integer vector, positive integer denominator) for a rational
    point, with the denominator the lcm of the coordinate denominators."""
    den = 1
    fr = [Fraction(c) for c in point]
    for c in fr:
        den = den * c.denominator // gcd(den, c.denominator)
    return tuple(int(c * den) for c in fr), den


def vsub(a, b):
    return tuple(x - y for x, y in zip(a, b))


def vadd(a, b):
    return tuple(x + y for x, y in zip(a, b))


def vdot(a, b):
    return sum(x * y for x, y in zip(a, b))


def vscale(s, a):
    return tuple(s * x for x in a)


class AffineMap:
    """Exact affine map x -> M x + t on R^d (d = 3 or 4 here).

    Used for the lattice actions:  all of them are unimodular integer
    affine maps on (x,y,z,P) resp. (x,y,z,A) that fix the last coordinate.
    """

    __slots__ = ("matrix", "translation")

    def __init__(self, matrix, translation):
        self.matrix = tuple(tuple(Fraction(e) for e in row) for row in matrix)
        self.translation = tuple(Fraction(e) for e in translation)

    @classmethod
    def identity(cls, d):
        return cls([[1 if i == j else 0 for j in range(d)] for i in range(d)],
                   [0] * d)

    def __call__(self, point):
        return tuple(vdot(row, point) + t
                     for row, t in zip(self.matrix, self.translation))

    def compose(self, other):
        """self after other: (self.compose(other))(x) = self(other(x))."""
        d = len(self.translation)
        m = [[sum(self.matrix[i][k] * other.matrix[k][j] for k in range(d))
              for j in range(d)] for i in range(d)]
        t = self(other.translation)
        return AffineMap(m, t)

    def inverse(self):
        d = len(self.translation)
        cols = []
        for j in range(d):
            e = [0] * d
            e[j] = 1
            col = solve([list(r) for r in self.matrix], e)
            if col is None:
                raise ValueError("singular affine map")
            cols.append(col)
        minv = [[cols[j][i] for j in range(d)] for i in range(d)]
        tinv = [-vdot(minv[i], self.translation) for i in range(d)]
        return AffineMap(minv, tinv)

    def power(self, n):
        d = len(self.translation)
        if n == 0:
            return AffineMap.identity(d)
        base = self if n > 0 else self.inverse()
        out = base
        for _ in range(abs(n) - 1):
            out = out.compose(base)
        return out


def lattice_words(generators, radius):
    """All words g1^i g2^j g3^k ... with |exponents| <= radius (generators
    commute, so the order is immaterial)."""
    words = [AffineMap.identity(len(generators[0].translation))]
    for g in generators:
        powers = [g.power(k) for k in range(-radius, radius + 1)]
        words = [w.compose(p) for w in words for p in powers]
    return words
