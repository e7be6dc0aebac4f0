"""Differential systems for moments of Brownian motions on compact groups.

Two families live here.  The one-matrix generators act on functions over
the symmetric group (U, SU, the large-N limit) or over Brauer pairings
(SO, Sp) and are assembled from right multiplication by transpositions
and contractions.  The word systems act on the same spaces for an
arbitrary word in several independent Brownian motions and are assembled
from the T and P operators.  Both are exponentiated with scipy.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

import numpy as np
from scipy.linalg import expm

from .brauer import (
    BrauerDiagram,
    BrauerError,
    compose,
    pairings,
    permutations,
    tp_move,
)

MAX_PERM_ORDER = 6
MAX_PAIRING_ORDER = 4


# ---------------------------------------------------------------- closed forms


def mu_closed(n: int, t: float) -> float:
    """Moment mu_n(t) of the free unitary Brownian motion."""
    if n < 0:
        raise ValueError(f"n must be nonnegative, got {n}")
    if n == 0:
        return 1.0
    return math.exp(-n * t / 2) * sum(float(c) * t**k for k, c in enumerate(ln_polynomial(n)))


def ln_polynomial(n: int) -> tuple[Fraction, ...]:
    """Coefficients (ascending powers of t) of L_n(t) = e^{nt/2} mu_n(t)."""
    if n < 0:
        raise ValueError(f"n must be nonnegative, got {n}")
    if n == 0:
        return (Fraction(1),)
    return tuple(
        (-1) ** k * Fraction(n) ** (k - 1) * math.comb(n, k + 1) / math.factorial(k)
        for k in range(n)
    )


def poly_mul(p: Sequence[Fraction], q: Sequence[Fraction]) -> tuple[Fraction, ...]:
    out = [Fraction(0)] * (len(p) + len(q) - 1)
    for i, a in enumerate(p):
        for j, b in enumerate(q):
            out[i + j] += a * b
    return tuple(out)


def poly_derivative(p: Sequence[Fraction]) -> tuple[Fraction, ...]:
    return tuple(k * c for k, c in enumerate(p))[1:] or (Fraction(0),)


def _cycle_count(perm: tuple[int, ...]) -> int:
    seen = [False] * len(perm)
    count = 0
    for i in range(len(perm)):
        if not seen[i]:
            count += 1
            j = i
            while not seen[j]:
                seen[j] = True
                j = perm[j]
    return count


def count_minimal_factorizations(n: int, k: int) -> int:
    """Number of k-tuples of transpositions with (1...n) t_1 ... t_k having k+1 cycles.

    Each multiplication by a transposition changes the cycle count by one, so
    the admissible tuples are exactly the paths that gain a cycle at every
    step.  We enumerate them breadth first, keeping multiplicities.
    """
    if n < 1:
        raise ValueError(f"n must be positive, got {n}")
    if n > 6:
        raise ValueError(f"brute force is capped at n=6, got {n}")
    if k < 0:
        raise ValueError(f"k must be nonnegative, got {k}")
    transpositions = [(i, j) for i in range(n) for j in range(i + 1, n)]
    start = tuple((i + 1) % n for i in range(n))
    layer = {start: 1}
    for step in range(k):
        nxt: dict[tuple[int, ...], int] = {}
        for perm, mult in layer.items():
            for i, j in transpositions:
                p = list(perm)
                p[i], p[j] = p[j], p[i]  # perm composed with (i j) on the right
                p = tuple(p)
                if _cycle_count(p) == step + 2:
                    nxt[p] = nxt.get(p, 0) + mult
        layer = nxt
    return sum(layer.values())


# ---------------------------------------------------------------- one-matrix generators


@dataclass(frozen=True)
class Generator:
    kind: str
    n: int
    N: int | None
    basis: tuple[BrauerDiagram, ...]
    exact: tuple[tuple[Fraction, ...], ...]

    @property
    def matrix(self) -> np.ndarray:
        return np.array([[float(x) for x in row] for row in self.exact])

    def index(self, pi: BrauerDiagram) -> int:
        return self.basis.index(pi)


def full_cycle(n: int) -> BrauerDiagram:
    """The permutation (1 2 ... n)."""
    return BrauerDiagram.from_permutation(tuple(i % n + 1 for i in range(1, n + 1)))


def build_generator(kind: str, n: int, N: int | None = None) -> Generator:
    """Generator L with f_N(t, .) = exp(t L) 1, rows indexed by the basis.

    Kinds U, SU and limit use permutations; SO and Sp use pairings, with the
    loop factor N (resp. -2N) folded into the extended cycle count.
    """
    if kind not in ("limit", "U", "SO", "Sp", "SU"):
        raise BrauerError(f"unknown generator kind {kind!r}")
    if kind != "limit" and (N is None or N < 1):
        raise BrauerError(f"kind {kind} needs a positive dimension N")
    on_pairings = kind in ("SO", "Sp")
    cap = MAX_PAIRING_ORDER if on_pairings else MAX_PERM_ORDER
    if n > cap:
        raise BrauerError(f"resource guard: order {n} exceeds {cap} for kind {kind}")
    basis = tuple(pairings(n) if on_pairings else permutations(n))
    index = {d: i for i, d in enumerate(basis)}
    size = len(basis)
    base = {"U": N, "SU": N, "SO": N, "Sp": -2 * N if N else None, "limit": None}[kind]
    diag = {
        "limit": Fraction(-n, 2),
        "U": Fraction(-n, 2),
        "SU": Fraction(-n, 2) + Fraction(n * n, 2 * N * N) if N else None,
        "SO": Fraction(-n * (N - 1), 2 * N) if N else None,
        "Sp": Fraction(-n * (2 * N + 1), 4 * N) if N else None,
    }[kind]
    rows = [[Fraction(0)] * size for _ in range(size)]
    for a, pi in enumerate(basis):
        rows[a][a] += diag
        here = pi.loops()
        for i in range(1, n + 1):
            for j in range(i + 1, n + 1):
                moves = [(-1, BrauerDiagram.transposition(n, i, j))]
                if on_pairings:
                    moves.append((1, BrauerDiagram.contraction(n, i, j)))
                for sign, g in moves:
                    loops, d = compose(pi, g)
                    e = loops + d.loops() - here - 1
                    if base is None:
                        if e != 0:
                            continue
                        coef = Fraction(sign)
                    else:
                        coef = sign * Fraction(base) ** e
                    rows[a][index[d]] += coef
    return Generator(kind, n, N, basis, tuple(tuple(r) for r in rows))


def finite_moments(kind: str, n: int, N: int | None, t: float) -> float:
    """E[tr(V_t^n)] (Re tr for Sp) from exp(t L) 1 at the full cycle."""
    if n == 0:
        return 1.0
    gen = build_generator(kind, n, N)
    values = expm(t * gen.matrix) @ np.ones(len(gen.basis))
    return float(values[gen.index(full_cycle(n))])


# ---------------------------------------------------------------- words


@dataclass(frozen=True)
class Word:
    """A word in x_1, x_2, ... and their inverses; letters are (index, sign)."""

    letters: tuple[tuple[int, int], ...]

    def __post_init__(self) -> None:
        for k, s in self.letters:
            if k < 1 or s not in (1, -1):
                raise ValueError(f"bad letter ({k}, {s})")

    @classmethod
    def parse(cls, text: str) -> Word:
        body = text.strip()
        if body in ("", "1"):
            return cls(())
        letters = []
        for token in body.split():
            m = re.fullmatch(r"x(\d+)(\^(-?1))?", token)
            if m is None:
                raise ValueError(f"bad word token {token!r}")
            letters.append((int(m.group(1)), -1 if m.group(3) == "-1" else 1))
        return cls(tuple(letters))

    def __str__(self) -> str:
        if not self.letters:
            return "1"
        return " ".join(f"x{k}" + ("^-1" if s == -1 else "") for k, s in self.letters)

    def __len__(self) -> int:
        return len(self.letters)

    @property
    def num_letters(self) -> int:
        return max((k for k, _ in self.letters), default=0)

    def positions(self, k: int) -> tuple[int, ...]:
        """X_k(w): 1-based positions carrying x_k or its inverse."""
        return tuple(i + 1 for i, (j, _) in enumerate(self.letters) if j == k)

    def count(self, k: int) -> int:
        return len(self.positions(k))

    def signs(self) -> tuple[int, ...]:
        return tuple(s for _, s in self.letters)

    def reverse(self) -> Word:
        return Word(tuple(reversed(self.letters)))

    def inverse(self) -> Word:
        return Word(tuple((k, -s) for k, s in reversed(self.letters)))

    def __mul__(self, other: Word) -> Word:
        return Word(self.letters + other.letters)


def amperean_area_word(w: Word, t: Sequence[float]) -> float:
    """sum_k t_k n_k(w)^2."""
    if len(t) < w.num_letters:
        raise ValueError(f"need {w.num_letters} times, got {len(t)}")
    return sum(t[k - 1] * w.count(k) ** 2 for k in range(1, w.num_letters + 1))


@dataclass(frozen=True)
class WordSystem:
    """Per-letter matrices M_k = A_k + B_k / L + C_k / L^2 (+ SU diagonal).

    L is N for kinds C, SU, R and -2N for H.  With N None only A_k is used.
    """

    kind: str
    N: int | None
    word: Word
    basis: tuple[BrauerDiagram, ...]
    A: tuple[np.ndarray, ...]
    B: tuple[np.ndarray, ...]
    C: tuple[np.ndarray, ...]
    D: tuple[np.ndarray, ...]

    @property
    def num_letters(self) -> int:
        return len(self.A)

    @property
    def scale(self) -> int | None:
        if self.N is None:
            return None
        return -2 * self.N if self.kind == "H" else self.N

    def generator(self, k: int) -> np.ndarray:
        """M_k for letter k (1-based)."""
        a = self.A[k - 1]
        if self.N is None:
            return a
        lam = float(self.scale)
        return a + self.B[k - 1] / lam + self.C[k - 1] / lam**2 + self.D[k - 1] / float(self.N) ** 2

    def index(self, pi: BrauerDiagram) -> int:
        return self.basis.index(pi)

    def solve(self, t: Sequence[float]) -> np.ndarray:
        """prod_k exp(t_k M_k) 1 as a vector over the basis."""
        if len(t) < self.num_letters:
            raise ValueError(f"need {self.num_letters} times, got {len(t)}")
        v = np.ones(len(self.basis))
        for k in range(1, self.num_letters + 1):
            v = expm(t[k - 1] * self.generator(k)) @ v
        return v


def build_word_system(kind: str, w: Word, N: int | None = None) -> WordSystem:
    if kind not in ("C", "R", "H", "SU"):
        raise BrauerError(f"unknown word system kind {kind!r}")
    r = len(w)
    on_pairings = kind in ("R", "H")
    cap = MAX_PAIRING_ORDER if on_pairings else MAX_PERM_ORDER
    if r > cap:
        raise BrauerError(f"resource guard: word length {r} exceeds {cap} for kind {kind}")
    if N is not None and N < 1:
        raise BrauerError(f"dimension must be positive, got {N}")
    basis = tuple(pairings(r) if on_pairings else permutations(r))
    index = {d: i for i, d in enumerate(basis)}
    size = len(basis)
    signs = w.signs()
    ops = [("T", -1), ("P", 1)] if on_pairings else [("T", -1)]
    mats: dict[str, list[np.ndarray]] = {"A": [], "B": [], "C": [], "D": []}
    for k in range(1, w.num_letters + 1):
        xs = w.positions(k)
        nk = len(xs)
        A = np.zeros((size, size))
        B = np.zeros((size, size))
        C = np.zeros((size, size))
        A += np.eye(size) * (-nk / 2)
        if on_pairings:
            B += np.eye(size) * (nk / 2)
        D = np.zeros((size, size))
        if kind == "SU":
            D += np.eye(size) * (sum(signs[l - 1] for l in xs) ** 2 / 2)
        for a, pi in enumerate(basis):
            here = pi.loops()
            for x, l in enumerate(xs):
                for m in xs[x + 1:]:
                    el, em = signs[l - 1], signs[m - 1]
                    for op, sign in ops:
                        loops, d = tp_move(op, l, m, el, em, pi)
                        e = loops + d.loops() - here - 1
                        target = {0: A, -1: B, -2: C}.get(e)
                        if target is None or (target is B and not on_pairings):
                            raise AssertionError(f"unexpected exponent {e} for {op} at {pi}")
                        target[a, index[d]] += sign * el * em
        mats["A"].append(A)
        mats["B"].append(B)
        mats["C"].append(C)
        mats["D"].append(D)
    return WordSystem(
        kind, N, w, basis,
        tuple(mats["A"]), tuple(mats["B"]), tuple(mats["C"]), tuple(mats["D"]),
    )


def word_expectation(sys: WordSystem, t: Sequence[float], at: BrauerDiagram | Sequence[int] | None = None) -> float:
    """Component of prod_k exp(t_k M_k) 1; defaults to the full cycle.

    At the full cycle this is E[tr(w^op)], which equals E[tr(w)] since the
    law of each Brownian motion is invariant under transposition.
    """
    r = len(sys.word)
    if r == 0:
        return 1.0
    if at is None:
        at = full_cycle(r)
    elif not isinstance(at, BrauerDiagram):
        at = BrauerDiagram.from_permutation(at)
    return float(sys.solve(t)[sys.index(at)])


def word_bound(kind: str, w: Word, t: Sequence[float], N: int) -> float:
    """Uniform bound on |p^N - p| over the basis."""
    area = amperean_area_word(w, t)
    if kind == "C":
        return area * math.exp(area / 2) / (2 * N * N)
    if kind == "SU":
        return area * math.exp(area / 2) / (2 * N * N) + math.expm1(area / (2 * N * N))
    if kind in ("R", "H"):
        return area * math.exp(area) / N
    raise BrauerError(f"unknown word system kind {kind!r}")


def row_sum_norm(m: np.ndarray) -> float:
    return float(np.abs(m).sum(axis=1).max()) if m.size else 0.0
