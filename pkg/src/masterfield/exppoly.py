"""Exact exponential polynomials: finite sums of c * prod x^a * exp(r x).

Coefficients and rates are Fractions and powers are nonnegative ints.
A term key lists ``(variable, power, rate)`` for the variables that carry
a nonzero power or rate, sorted by name, so two expressions are equal
exactly when their term dictionaries are.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from fractions import Fraction
from math import factorial
from typing import Iterable, Mapping

Key = tuple[tuple[str, int, Fraction], ...]
Number = int | Fraction


def _key(factors: Mapping[str, tuple[int, Fraction]]) -> Key:
    return tuple(sorted((v, p, Fraction(r)) for v, (p, r) in factors.items() if p or r))


def _merge(a: Key, b: Key) -> Key:
    factors: dict[str, tuple[int, Fraction]] = {v: (p, r) for v, p, r in a}
    for v, p, r in b:
        p0, r0 = factors.get(v, (0, Fraction(0)))
        factors[v] = (p0 + p, r0 + r)
    return _key(factors)


@dataclass(frozen=True)
class ExpPoly:
    """Immutable canonical exponential polynomial."""

    items: tuple[tuple[Key, Fraction], ...] = ()

    @classmethod
    def from_terms(cls, terms: Mapping[Key, Number] | Iterable[tuple[Key, Number]]) -> ExpPoly:
        acc: dict[Key, Fraction] = {}
        pairs = terms.items() if isinstance(terms, Mapping) else terms
        for k, c in pairs:
            acc[k] = acc.get(k, Fraction(0)) + Fraction(c)
        return cls(tuple(sorted((k, c) for k, c in acc.items() if c != 0)))

    @classmethod
    def const(cls, c: Number) -> ExpPoly:
        return cls.from_terms({(): c})

    @classmethod
    def var(cls, name: str) -> ExpPoly:
        return cls.from_terms({((name, 1, Fraction(0)),): 1})

    @classmethod
    def exp(cls, rates: Mapping[str, Number]) -> ExpPoly:
        """exp(sum rates[x] * x)."""
        return cls.from_terms({_key({v: (0, Fraction(r)) for v, r in rates.items()}): 1})

    @property
    def terms(self) -> dict[Key, Fraction]:
        return dict(self.items)

    @property
    def variables(self) -> tuple[str, ...]:
        return tuple(sorted({v for k, _ in self.items for v, _, _ in k}))

    def is_zero(self) -> bool:
        return not self.items

    # arithmetic ---------------------------------------------------------

    def __add__(self, other: ExpPoly | Number) -> ExpPoly:
        other = _lift(other)
        return ExpPoly.from_terms(list(self.items) + list(other.items))

    __radd__ = __add__

    def __neg__(self) -> ExpPoly:
        return ExpPoly(tuple((k, -c) for k, c in self.items))

    def __sub__(self, other: ExpPoly | Number) -> ExpPoly:
        return self + (-_lift(other))

    def __rsub__(self, other: Number) -> ExpPoly:
        return _lift(other) - self

    def __mul__(self, other: ExpPoly | Number) -> ExpPoly:
        if not isinstance(other, ExpPoly):
            c = Fraction(other)
            return ExpPoly.from_terms([(k, v * c) for k, v in self.items])
        return ExpPoly.from_terms([(_merge(k1, k2), c1 * c2)
                                   for k1, c1 in self.items for k2, c2 in other.items])

    __rmul__ = __mul__

    def __truediv__(self, other: Number) -> ExpPoly:
        return self * (1 / Fraction(other))

    def __pow__(self, n: int) -> ExpPoly:
        if n < 0:
            raise ValueError("negative powers are not exponential polynomials")
        out = ExpPoly.const(1)
        for _ in range(n):
            out = out * self
        return out

    # calculus -----------------------------------------------------------

    def diff(self, name: str) -> ExpPoly:
        out = []
        for k, c in self.items:
            factors = {v: (p, r) for v, p, r in k}
            p, r = factors.get(name, (0, Fraction(0)))
            if r:
                out.append((k, c * r))
            if p:
                factors[name] = (p - 1, r)
                out.append((_key(factors), c * p))
        return ExpPoly.from_terms(out)

    def antiderivative(self, name: str) -> ExpPoly:
        """The integral from 0 to ``name`` along ``name``, other variables fixed."""
        out = []
        for k, c in self.items:
            factors = {v: (p, r) for v, p, r in k}
            a, r = factors.pop(name, (0, Fraction(0)))
            if r == 0:
                factors[name] = (a + 1, Fraction(0))
                out.append((_key(factors), c / (a + 1)))
                continue
            # int_0^x y^a e^{ry} dy = e^{rx} sum_k (-1)^k a!/(a-k)! x^{a-k} / r^{k+1} - (-1)^a a!/r^{a+1}
            for j in range(a + 1):
                coef = c * (-1) ** j * Fraction(factorial(a), factorial(a - j)) / r ** (j + 1)
                f = dict(factors)
                f[name] = (a - j, r)
                out.append((_key(f), coef))
            out.append((_key(factors), -c * (-1) ** a * Fraction(factorial(a)) / r ** (a + 1)))
        return ExpPoly.from_terms(out)

    def substitute(self, rules: Mapping[str, Mapping[str, Number]]) -> ExpPoly:
        """Replace each variable ``x`` in ``rules`` by the linear form ``sum rules[x][y] * y``."""
        out = ExpPoly()
        for k, c in self.items:
            term = ExpPoly.const(c)
            for v, p, r in k:
                if v not in rules:
                    term = term * ExpPoly.from_terms({((v, p, r),): 1})
                    continue
                form = rules[v]
                linear = ExpPoly.from_terms([(((y, 1, Fraction(0)),), a) for y, a in form.items()])
                term = term * linear ** p * ExpPoly.exp({y: r * Fraction(a) for y, a in form.items()})
            out = out + term
        return out

    def rename(self, names: Mapping[str, str]) -> ExpPoly:
        return self.substitute({old: {new: 1} for old, new in names.items()})

    # evaluation ---------------------------------------------------------

    def at_zero(self) -> Fraction:
        return sum((c for k, c in self.items if all(p == 0 for _, p, _ in k)), Fraction(0))

    def evaluate(self, point: Mapping[str, Number | float]) -> float:
        missing = set(self.variables) - set(point)
        if missing:
            raise KeyError(f"no value for {', '.join(sorted(missing))}")
        total = 0.0
        for k, c in self.items:
            poly = Fraction(c) if all(isinstance(point[v], (int, Fraction)) for v, _, _ in k) else float(c)
            rate = 0.0
            for v, p, r in k:
                poly *= point[v] ** p
                rate += float(r) * float(point[v])
            total += float(poly) * math.exp(rate)
        return total

    def exact_value(self, point: Mapping[str, Number]) -> dict[Fraction, Fraction]:
        """Value at a rational point as ``{exponent: coefficient}``, meaning sum c * e^exponent."""
        missing = set(self.variables) - set(point)
        if missing:
            raise KeyError(f"no value for {', '.join(sorted(missing))}")
        out: dict[Fraction, Fraction] = {}
        for k, c in self.items:
            coef, expo = Fraction(c), Fraction(0)
            for v, p, r in k:
                x = Fraction(point[v])
                coef *= x**p
                expo += r * x
            out[expo] = out.get(expo, Fraction(0)) + coef
        return {e: c for e, c in sorted(out.items(), reverse=True) if c}

    def rates(self) -> set[tuple[tuple[str, Fraction], ...]]:
        return {tuple((v, r) for v, _, r in k if r) for k, _ in self.items}

    # output ---------------------------------------------------------------

    def term_list(self) -> list[dict]:
        """Machine-readable terms: coefficient, powers and rates as strings."""
        return [{"coef": str(c),
                 "powers": {v: p for v, p, _ in k if p},
                 "rates": {v: str(r) for v, _, r in k if r}} for k, c in self.items]

    def __str__(self) -> str:
        return format_exppoly(self)


def _lift(x: ExpPoly | Number) -> ExpPoly:
    return x if isinstance(x, ExpPoly) else ExpPoly.const(x)


# ---------------------------------------------------------------- formatting


def _fmt_coef_times(c: Fraction, body: str) -> str:
    """Signed ``c*body``; ``body`` may be empty."""
    sign = "-" if c < 0 else ""
    a = abs(c)
    if not body:
        return f"{sign}{a}"
    if a == 1:
        return f"{sign}{body}"
    return f"{sign}{a}*{body}"


def format_exact_value(value: Mapping[Fraction, Fraction]) -> str:
    """Text for the output of ``ExpPoly.exact_value``, e.g. ``exp(-1) - 1/2*exp(-3/2)``."""
    if not value:
        return "0"
    return _join([_fmt_coef_times(c, f"exp({e})" if e else "") for e, c in value.items()])


def _join(parts: list[str]) -> str:
    out = parts[0]
    for p in parts[1:]:
        out += f" - {p[1:]}" if p.startswith("-") else f" + {p}"
    return out


def _monomial(powers: tuple[tuple[str, int], ...]) -> str:
    return "*".join(v if p == 1 else f"{v}^{p}" for v, p in powers)


def format_exppoly(e: ExpPoly) -> str:
    """Canonical text: one ``exp(...)*(polynomial)`` group per rate vector."""
    if e.is_zero():
        return "0"
    groups: dict[tuple[tuple[str, Fraction], ...], list[tuple[tuple[tuple[str, int], ...], Fraction]]] = {}
    for k, c in e.items:
        rate = tuple((v, r) for v, _, r in k if r)
        powers = tuple((v, p) for v, p, _ in k if p)
        groups.setdefault(rate, []).append((powers, c))

    def mono_order(item: tuple[tuple[tuple[str, int], ...], Fraction]) -> tuple:
        powers = item[0]
        return (sum(p for _, p in powers), [v for v, _ in powers], [-p for _, p in powers])

    def rate_order(rate: tuple[tuple[str, Fraction], ...]) -> tuple:
        return (-sum(r for _, r in rate), [v for v, _ in rate], [r for _, r in rate])

    parts = []
    for rate in sorted(groups, key=rate_order):
        monos = sorted(groups[rate], key=mono_order)
        poly = _join([_fmt_coef_times(c, _monomial(p)) for p, c in monos])
        if not rate:
            parts.append(poly)
            continue
        expo = "exp(" + _join([_fmt_coef_times(r, v) for v, r in rate]) + ")"
        if len(monos) == 1:
            powers, c = monos[0]
            parts.append(_fmt_coef_times(c, "*".join(x for x in (expo, _monomial(powers)) if x)))
        else:
            parts.append(f"{expo}*({poly})")
    return _join(parts)


# ---------------------------------------------------------------- parsing


_TOKEN = re.compile(r"\s*(?:(?P<num>\d+)|(?P<exp>e\^\{|exp\()|(?P<var>[a-df-z][0-9]*)|(?P<op>[-+*/^(){}]))")


class _Parser:
    """Recursive descent for golden-table strings.

    Juxtaposition multiplies, ``/`` divides by an integer, ``e^{...}`` and
    ``exp(...)`` take a linear exponent.  Examples: ``e^{-s/2-t}(1-t)``,
    ``3/2u^2``, ``-3/2(u1+u2)``.
    """

    def __init__(self, text: str):
        self.tokens: list[tuple[str, str]] = []
        pos = 0
        text = text.strip()
        while pos < len(text):
            m = _TOKEN.match(text, pos)
            if m is None or m.end() == pos:
                raise ValueError(f"cannot parse {text[pos:]!r}")
            kind = m.lastgroup
            self.tokens.append((kind, m.group(kind)))
            pos = m.end()
        self.i = 0

    def peek(self) -> tuple[str, str] | None:
        return self.tokens[self.i] if self.i < len(self.tokens) else None

    def take(self) -> tuple[str, str]:
        if self.i >= len(self.tokens):
            raise ValueError("unexpected end of formula")
        tok = self.tokens[self.i]
        self.i += 1
        return tok

    def expect(self, value: str) -> None:
        tok = self.peek()
        if tok is None or tok[1] != value:
            raise ValueError(f"expected {value!r}, got {tok}")
        self.i += 1

    def parse(self) -> ExpPoly:
        out = self.expr()
        if self.peek() is not None:
            raise ValueError(f"trailing input at {self.peek()}")
        return out

    def expr(self) -> ExpPoly:
        out = ExpPoly()
        sign = 1
        tok = self.peek()
        if tok is not None and tok[1] in "+-" and tok[0] == "op":
            sign = -1 if self.take()[1] == "-" else 1
        out = out + self.term() * sign
        while (tok := self.peek()) is not None and tok[0] == "op" and tok[1] in "+-":
            sign = -1 if self.take()[1] == "-" else 1
            out = out + self.term() * sign
        return out

    def term(self) -> ExpPoly:
        out = self.factor()
        while (tok := self.peek()) is not None:
            if tok == ("op", "/"):
                self.take()
                kind, value = self.take()
                if kind != "num":
                    raise ValueError("only division by integers is supported")
                out = out / int(value)
            elif tok == ("op", "*"):
                self.take()
                out = out * self.factor()
            elif tok[0] in ("num", "var", "exp") or tok == ("op", "("):
                out = out * self.factor()
            else:
                break
        return out

    def factor(self) -> ExpPoly:
        base = self.atom()
        if self.peek() == ("op", "^"):
            self.take()
            kind, value = self.take()
            if kind != "num":
                raise ValueError("exponents must be integers")
            base = base ** int(value)
        return base

    def atom(self) -> ExpPoly:
        kind, value = self.take()
        if kind == "num":
            return ExpPoly.const(int(value))
        if kind == "var":
            return ExpPoly.var(value)
        if kind == "exp":
            inner = self.expr()
            self.expect("}" if value.startswith("e^") else ")")
            return _exp_of_linear(inner)
        if value == "(":
            inner = self.expr()
            self.expect(")")
            return inner
        raise ValueError(f"unexpected token {value!r}")


def _exp_of_linear(e: ExpPoly) -> ExpPoly:
    rates = {}
    for k, c in e.items:
        if len(k) != 1 or k[0][1] != 1 or k[0][2] != 0:
            raise ValueError(f"exponent must be a linear form without constant: {e}")
        rates[k[0][0]] = c
    return ExpPoly.exp(rates)


def parse_exppoly(text: str) -> ExpPoly:
    return _Parser(text).parse()
