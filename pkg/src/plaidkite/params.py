"""Exact rational parameters and the derived constants.

Everything downstream works at an even rational parameter A = p/q with
pq even, 0 < p < q and gcd(p,q) = 1.  All derived quantities are exact
(`fractions.Fraction` or plain ints); there is no floating point anywhere
in the pipeline.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd


class NotInvertible(ValueError):
    pass


class OddProduct(ValueError):
    pass


class NotCoprime(ValueError):
    pass


class OutOfRange(ValueError):
    pass


def mod_inverse(a: int, m: int) -> int:
    """Inverse of a mod m, returned in (0, m)."""
    a %= m
    if gcd(a, m) != 1:
        raise NotInvertible(f"{a} is not invertible mod {m}")
    return pow(a, -1, m)


@dataclass(frozen=True)
class EvenRationalParam:
    """The parameter p/q together with every derived constant.

    omega = p + q
    A     = p/q
    P     = 2A/(1+A) = 2p/omega
    Q     = 2/(1+A)  = 2q/omega
    tau   = the solution in (0, omega) of 2 p tau = 1 mod omega
    xi    = the solution in (0, omega) of 4 p^2 xi = 1 mod omega
    iota  = 1/(2q), the canonical offset of the graph classifying map
    """

    p: int
    q: int

    def __post_init__(self):
        if not (0 < self.p < self.q):
            raise OutOfRange(f"need 0 < p < q, got {self.p}/{self.q}")
        if gcd(self.p, self.q) != 1:
            raise NotCoprime(f"gcd({self.p},{self.q}) != 1")
        if (self.p * self.q) % 2 != 0:
            raise OddProduct(f"pq must be even, got {self.p}/{self.q}")

    @property
    def omega(self) -> int:
        return self.p + self.q

    @property
    def A(self) -> Fraction:
        return Fraction(self.p, self.q)

    @property
    def P(self) -> Fraction:
        return Fraction(2 * self.p, self.omega)

    @property
    def Q(self) -> Fraction:
        return Fraction(2 * self.q, self.omega)

    @property
    def tau(self) -> int:
        return mod_inverse(2 * self.p, self.omega)

    @property
    def xi(self) -> int:
        return mod_inverse(4 * self.p * self.p, self.omega)

    @property
    def iota(self) -> Fraction:
        return Fraction(1, 2 * self.q)

    def __str__(self):
        return f"{self.p}/{self.q}"


def make_param(p: int, q: int) -> EvenRationalParam:
    return EvenRationalParam(p, q)


def even_rationals(qmax: int):
    """All parameters p/q with pq even and q < qmax, ordered by (q, p)."""
    out = []
    for q in range(2, qmax):
        for p in range(1, q):
            if gcd(p, q) == 1 and (p * q) % 2 == 0:
                out.append(EvenRationalParam(p, q))
    return out
