from fractions import Fraction
from math import gcd

import pytest
from hypothesis import given, strategies as st

from plaidkite.params import (EvenRationalParam, make_param, even_rationals,
                              OddProduct, NotCoprime, OutOfRange)


def even_rational_pairs():
    return st.tuples(st.integers(1, 60), st.integers(2, 61)).filter(
        lambda pq: pq[0] < pq[1] and gcd(*pq) == 1 and (pq[0] * pq[1]) % 2 == 0)


@given(even_rational_pairs())
def test_derived_quantities(pq):
    p, q = pq
    param = make_param(p, q)
    A = Fraction(p, q)
    assert param.A == A
    assert param.omega == p + q
    assert param.P == 2 * A / (1 + A)
    assert 0 < param.P < 1
    assert param.iota == Fraction(1, 2 * q)
    # tau is the inverse of 2p mod omega
    assert 0 < param.tau < param.omega
    assert (2 * p * param.tau) % param.omega == 1


def test_rejections():
    with pytest.raises(NotCoprime):
        make_param(3, 9)
    with pytest.raises(OddProduct):
        make_param(1, 3)
    with pytest.raises(OutOfRange):
        make_param(4, 3)
    with pytest.raises(OutOfRange):
        make_param(0, 2)


def test_even_rationals_enumeration():
    params = even_rationals(10)
    assert all(isinstance(pr, EvenRationalParam) for pr in params)
    assert all((pr.p * pr.q) % 2 == 0 and gcd(pr.p, pr.q) == 1
               for pr in params)
    assert all(pr.q < 10 for pr in params)
    # independent count of admissible pairs below the bound
    expected = sum(1 for q in range(2, 10) for p in range(1, q)
                   if gcd(p, q) == 1 and (p * q) % 2 == 0)
    assert len(params) == expected
