import math
from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from masterfield.exppoly import ExpPoly, format_exact_value, parse_exppoly

VARS = ("s", "t", "u")
rates = st.sampled_from([Fraction(0), Fraction(-1, 2), Fraction(-1), Fraction(-3, 2), Fraction(1)])
coefs = st.fractions(min_value=-3, max_value=3, max_denominator=4)


@st.composite
def exppolys(draw):
    out = ExpPoly()
    for _ in range(draw(st.integers(0, 3))):
        term = ExpPoly.const(draw(coefs))
        for v in VARS:
            term = term * ExpPoly.var(v) ** draw(st.integers(0, 2)) * ExpPoly.exp({v: draw(rates)})
        out = out + term
    return out


@given(exppolys(), exppolys(), exppolys())
def test_ring_axioms(a, b, c):
    assert a + b == b + a
    assert a * b == b * a
    assert (a * b) * c == a * (b * c)
    assert a * (b + c) == a * b + a * c
    assert (a - a).is_zero()


@given(exppolys(), exppolys(), st.sampled_from(VARS))
def test_leibniz_rule(a, b, v):
    assert (a * b).diff(v) == a.diff(v) * b + a * b.diff(v)


@given(exppolys(), st.sampled_from(VARS))
def test_antiderivative_inverts_diff(a, v):
    prim = a.antiderivative(v)
    assert prim.diff(v) == a
    assert prim.substitute({v: {}}).is_zero()


@given(exppolys())
def test_format_parse_round_trip(a):
    assert parse_exppoly(str(a)) == a


@given(exppolys(), st.fractions(min_value=0, max_value=2, max_denominator=3),
       st.fractions(min_value=0, max_value=2, max_denominator=3))
def test_exact_value_agrees_with_float(a, x, y):
    point = {"s": x, "t": y, "u": Fraction(1, 2)}
    exact = sum(float(c) * math.exp(float(e)) for e, c in a.exact_value(point).items())
    assert math.isclose(exact, a.evaluate(point), rel_tol=1e-12, abs_tol=1e-12)


@given(exppolys())
def test_substitute_linear_form(a):
    # s -> t + u agrees with direct evaluation
    b = a.substitute({"s": {"t": 1, "u": 1}})
    p = {"s": Fraction(3, 2), "t": Fraction(1, 2), "u": Fraction(1)}
    assert math.isclose(b.evaluate(p), a.evaluate(p), rel_tol=1e-12, abs_tol=1e-12)


def test_antiderivative_closed_form():
    t = ExpPoly.var("t")
    assert str((t * ExpPoly.exp({"t": -1})).antiderivative("t")) == "1 + exp(-t)*(-1 - t)"


def test_canonical_text():
    e = parse_exppoly("e^{-s/2-t-3u/2}(1-3u+3/2u^2-t(1-u))")
    assert str(e) == "exp(-1/2*s - t - 3/2*u)*(1 - t - 3*u + t*u + 3/2*u^2)"
    assert str(parse_exppoly("e^{-s/2-t}(1-t)")) == "exp(-1/2*s - t)*(1 - t)"


@pytest.mark.parametrize("text", ["e^{-(s1+s2)/2}", "e^{-s/2-t1}(1-t1 e^{-t2})", "-3/2u^2v", "(u1+u2)^2"])
def test_parser_accepts_table_notation(text):
    assert parse_exppoly(text) == parse_exppoly(str(parse_exppoly(text)))


def test_parser_multiplies_juxtaposition():
    assert parse_exppoly("tuv") == parse_exppoly("t*u*v")
    assert parse_exppoly("3/2u^2v") == parse_exppoly("3/2*u^2*v")


@pytest.mark.parametrize("text", ["e^{s*t}", "1 +", "exp(s", "(1-t"])
def test_parser_rejects(text):
    with pytest.raises(ValueError):
        parse_exppoly(text)


def test_exact_value_text():
    e = parse_exppoly("e^{-s/2}")
    assert format_exact_value(e.exact_value({"s": 2})) == "exp(-1)"
    assert format_exact_value(ExpPoly().exact_value({})) == "0"


def test_at_zero_and_missing_values():
    e = parse_exppoly("e^{-s/2-t}(1-t)")
    assert e.at_zero() == 1
    with pytest.raises(KeyError):
        e.evaluate({"s": 1})
