import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from gcmlab.kernel import (DEGREVLEX, LOCAL, MonomialOrder, PolyParseError, PolyRing,
                           RingSpec, binomial, elimination_order, format_poly, is_prime,
                           monomials_up_to, random_form, random_in_power)
from strategies import polys, ring

R3 = ring(3)


def test_addition_and_product_examples():
    R = PolyRing.make("xy", 7)
    x, y = R.gens()
    assert (x + y) + (-x) == y
    assert (x + y) * (x - y) == x ** 2 - y ** 2
    assert ((x + y) * R.zero()).is_zero()


def test_parse_grammar():
    R = PolyRing.make("xyz")
    f = R.parse(" x*z - 2*y^3 ")
    x, y, z = R.gens()
    assert f == x * z - 2 * y ** 3
    assert R.parse("(x+y)^2") == x * x + 2 * x * y + y * y
    assert R.parse("-3") == R.const(-3)


@pytest.mark.parametrize("text", ["x +", "x*q", "2^x", "x ^ -1", "(x", ""])
def test_parse_errors_carry_column(text):
    R = PolyRing.make("xyz")
    with pytest.raises(PolyParseError) as info:
        R.parse(text)
    assert "column" in str(info.value)


def test_unknown_variable_named():
    with pytest.raises(PolyParseError, match="'q'"):
        PolyRing.make("xy").parse("x + q")


def test_is_prime():
    assert [n for n in range(30) if is_prime(n)] == [2, 3, 5, 7, 11, 13, 17, 19, 23, 29]
    assert is_prime(32003) and not is_prime(32001) and not is_prime(4)


def test_non_prime_characteristic_rejected():
    with pytest.raises(ValueError):
        PolyRing.make("xy", 4)


def test_binomial_convention():
    assert binomial(-1, -1) == 1
    assert binomial(3, -1) == 0 and binomial(2, 3) == 0
    assert binomial(4, 2) == 6
    assert binomial(-1, 0) == 1


def test_random_form_examples():
    R = PolyRing.make("xy")
    f = random_form(R, 1, random.Random(3), density=1.0)
    assert set(f.terms_dict) == {(1, 0), (0, 1)}
    c = random_form(R, 0, random.Random(3))
    assert c.degree() == 0 and not c.is_zero()
    assert random_form(R, 4, random.Random(9), 0.5) == random_form(R, 4, random.Random(9), 0.5)


def test_random_in_power_examples():
    f = random_in_power(R3, 3, random.Random(1), spread=0)
    assert f.is_homogeneous() and f.degree() == 3
    for s in range(100):
        g = random_in_power(R3, 2, random.Random(s), spread=1, density=0.5)
        assert {sum(m) for m in g.terms_dict} <= {2, 3}
        assert g.order_at_origin() >= 2


@given(st.integers(1, 5), st.integers(0, 2), st.integers(0, 10 ** 6))
def test_random_in_power_lies_in_power(N, spread, seed):
    g = random_in_power(R3, N, random.Random(seed), spread, 0.5)
    assert min(sum(m) for m in g.terms_dict) >= N


@given(polys(R3), polys(R3), polys(R3))
@settings(max_examples=60)
def test_ring_axioms(a, b, c):
    assert (a * b) * c == a * (b * c)
    assert a * (b + c) == a * b + a * c
    assert a + b == b + a and a * b == b * a
    assert (a - a).is_zero()


@given(polys(R3))
def test_format_parse_round_trip(f):
    assert R3.parse(format_poly(f)) == f


def _orders():
    return [DEGREVLEX, LOCAL, elimination_order(1), MonomialOrder()]


@pytest.mark.parametrize("order", _orders())
def test_order_axioms(order):
    monos = list(monomials_up_to(3, 3))
    keys = {m: order.mono_key(m) for m in monos}
    assert len(set(keys.values())) == len(monos)  # total
    w_list = [(1, 0, 0), (0, 2, 1), (0, 0, 1)]
    for u in monos:
        for v in monos:
            if keys[u] < keys[v]:
                for w in w_list:
                    uw = tuple(a + b for a, b in zip(u, w))
                    vw = tuple(a + b for a, b in zip(v, w))
                    assert order.mono_key(uw) < order.mono_key(vw)


def test_global_and_local_extremes():
    one, x = (0, 0, 0), (1, 0, 0)
    assert DEGREVLEX.mono_key(one) < DEGREVLEX.mono_key(x)
    assert LOCAL.mono_key(one) > LOCAL.mono_key(x)


def test_ringspec():
    R = RingSpec.make("xyzw", ["x*z", "x*w"])
    assert R.nvars == 4 and len(R.quotient_generators) == 2
    assert R.parse("y").degree() == 1


def test_truncate_below_keeps_low_part():
    R = PolyRing.make("xy")
    f = R.parse("1 + x + x*y + y^3")
    assert f.truncate_below(2) == R.parse("1 + x")
    assert f.homogeneous_part(2) == R.parse("x*y")
