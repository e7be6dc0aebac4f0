"""Brauer diagrams, the algebra B_{n,lambda}, and Weingarten matrices.

A diagram of order n is a perfect matching of the points 1..2n.  Points
1..n sit on the bottom row and n+1..2n on the top row.  In a product
``a * b`` the diagram ``a`` is stacked on top of ``b``: the top row of
``b`` is glued to the bottom row of ``a`` and every closed loop formed in
the middle contributes a factor lambda.  With this rule the permutation
sigma is the diagram {{i, sigma(i)+n}} and products of permutations are
compositions, (sigma1 sigma2)(i) = sigma1(sigma2(i)).
"""

from __future__ import annotations

import itertools
import re
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Iterator, Mapping

MAX_ORDER = 6


class BrauerError(ValueError):
    """Raised on malformed diagrams or incompatible operands."""


def _check_order(n: int) -> None:
    if not isinstance(n, int) or n < 0:
        raise BrauerError(f"order must be a nonnegative integer, got {n!r}")
    if n > MAX_ORDER:
        raise BrauerError(f"order {n} exceeds the cap {MAX_ORDER}")


@dataclass(frozen=True)
class BrauerDiagram:
    """A perfect matching of {1..2n}, stored as a sorted tuple of pairs."""

    n: int
    pairs: tuple[tuple[int, int], ...]
    _mate: tuple[int, ...] = field(init=False, repr=False, compare=False, hash=False)

    def __post_init__(self) -> None:
        _check_order(self.n)
        pairs = tuple(sorted(tuple(sorted(p)) for p in self.pairs))
        mate = [0] * (2 * self.n + 1)
        for a, b in pairs:
            if a == b or not (1 <= a <= 2 * self.n and 1 <= b <= 2 * self.n):
                raise BrauerError(f"bad pair {{{a},{b}}} for order {self.n}")
            if mate[a] or mate[b]:
                raise BrauerError(f"point repeated in pair {{{a},{b}}}")
            mate[a], mate[b] = b, a
        if len(pairs) != self.n:
            raise BrauerError(f"expected {self.n} pairs, got {len(pairs)}")
        object.__setattr__(self, "pairs", pairs)
        object.__setattr__(self, "_mate", tuple(mate))

    @classmethod
    def from_mate(cls, n: int, mate: Iterable[int]) -> BrauerDiagram:
        """Build from a list where ``mate[p]`` is the partner of p (index 0 ignored)."""
        mate = list(mate)
        return cls(n, tuple((p, mate[p]) for p in range(1, 2 * n + 1) if p < mate[p]))

    @classmethod
    def identity(cls, n: int) -> BrauerDiagram:
        return cls(n, tuple((i, i + n) for i in range(1, n + 1)))

    @classmethod
    def from_permutation(cls, perm: Iterable[int]) -> BrauerDiagram:
        """Diagram of sigma given as the tuple (sigma(1), ..., sigma(n))."""
        perm = tuple(perm)
        n = len(perm)
        if sorted(perm) != list(range(1, n + 1)):
            raise BrauerError(f"not a permutation: {perm}")
        return cls(n, tuple((i, perm[i - 1] + n) for i in range(1, n + 1)))

    @classmethod
    def transposition(cls, n: int, i: int, j: int) -> BrauerDiagram:
        """The transposition (i j)."""
        perm = list(range(1, n + 1))
        perm[i - 1], perm[j - 1] = j, i
        return cls.from_permutation(perm)

    @classmethod
    def contraction(cls, n: int, i: int, j: int) -> BrauerDiagram:
        """The contraction <i j> = {{i,j},{n+i,n+j}} with all other strands vertical."""
        if i == j:
            raise BrauerError("contraction needs two distinct indices")
        pairs = [(i, j), (n + i, n + j)]
        pairs += [(k, k + n) for k in range(1, n + 1) if k not in (i, j)]
        return cls(n, tuple(pairs))

    @classmethod
    def parse(cls, text: str) -> BrauerDiagram:
        """Parse the text form ``{1-8, 2-9, 3-7}``."""
        body = text.strip()
        if not (body.startswith("{") and body.endswith("}")):
            raise BrauerError(f"diagram text must be braced: {text!r}")
        body = re.sub(r"\s+", "", body[1:-1])
        if not body:
            return cls(0, ())
        pairs = []
        for item in body.split(","):
            m = re.fullmatch(r"(\d+)-(\d+)", item)
            if m is None:
                raise BrauerError(f"bad pair {item!r}")
            pairs.append((int(m.group(1)), int(m.group(2))))
        return cls(len(pairs), tuple(pairs))

    def __str__(self) -> str:
        return "{" + ", ".join(f"{a}-{b}" for a, b in self.pairs) + "}"

    def mate(self, p: int) -> int:
        return self._mate[p]

    def is_permutation(self) -> bool:
        return all((a <= self.n) != (b <= self.n) for a, b in self.pairs)

    def permutation(self) -> tuple[int, ...]:
        """The tuple (sigma(1), ..., sigma(n)) of a permutation diagram."""
        if not self.is_permutation():
            raise BrauerError(f"{self} has a horizontal edge")
        return tuple(self._mate[i] - self.n for i in range(1, self.n + 1))

    def loops(self) -> int:
        """l(pi): number of cycles once each i is joined to n+i."""
        return _count_cycles(self.n, self._mate, _closing_mate(self.n))

    def __mul__(self, other: BrauerDiagram) -> tuple[int, BrauerDiagram]:
        return compose(self, other)


def _closing_mate(n: int) -> list[int]:
    mate = [0] * (2 * n + 1)
    for i in range(1, n + 1):
        mate[i], mate[i + n] = i + n, i
    return mate


def _count_cycles(n: int, m1: Iterable[int], m2: Iterable[int]) -> int:
    """Number of cycles of the union of two perfect matchings of {1..2n}."""
    m1, m2 = list(m1), list(m2)
    seen = [False] * (2 * n + 1)
    cycles = 0
    for start in range(1, 2 * n + 1):
        if seen[start]:
            continue
        cycles += 1
        p = start
        while not seen[p]:
            seen[p] = True
            q = m1[p]
            seen[q] = True
            p = m2[q]
    return cycles


def compose(a: BrauerDiagram, b: BrauerDiagram) -> tuple[int, BrauerDiagram]:
    """Stack ``a`` on top of ``b``; return (number of closed loops, product)."""
    if a.n != b.n:
        raise BrauerError(f"order mismatch: {a.n} vs {b.n}")
    n = a.n
    mate = [0] * (2 * n + 1)
    used_middle = [False] * (n + 1)

    def walk(layer: str, p: int) -> int:
        # layer 'b' uses b's labels, layer 'a' uses a's labels
        while True:
            if layer == "b":
                q = b.mate(p)
                if q <= n:
                    return q
                used_middle[q - n] = True
                layer, p = "a", q - n
            else:
                q = a.mate(p)
                if q > n:
                    return q
                used_middle[q] = True
                layer, p = "b", q + n

    for p in range(1, n + 1):
        if not mate[p]:
            q = walk("b", p)
            mate[p], mate[q] = q, p
    for p in range(n + 1, 2 * n + 1):
        if not mate[p]:
            q = walk("a", p)
            mate[p], mate[q] = q, p
    closed = 0
    for k in range(1, n + 1):
        if used_middle[k]:
            continue
        closed += 1
        j = k
        while not used_middle[j]:
            used_middle[j] = True
            j = a.mate(j)  # a bottom point, hence a middle point
            used_middle[j] = True
            j = b.mate(j + n) - n
    return closed, BrauerDiagram.from_mate(n, mate)


def multiply(a: BrauerDiagram, b: BrauerDiagram, lam) -> tuple[object, BrauerDiagram]:
    """Product in B_{n,lam}: (lam**loops, diagram)."""
    k, d = compose(a, b)
    return lam**k, d


def transpose(pi: BrauerDiagram) -> BrauerDiagram:
    """Flip the diagram upside down: i <-> n+i."""
    n = pi.n

    def flip(p: int) -> int:
        return p + n if p <= n else p - n

    return BrauerDiagram(n, tuple((flip(a), flip(b)) for a, b in pi.pairs))


def pairings(n: int) -> Iterator[BrauerDiagram]:
    """All (2n-1)!! diagrams of order n, in a fixed deterministic order."""
    _check_order(n)

    def rec(points: tuple[int, ...]) -> Iterator[tuple[tuple[int, int], ...]]:
        if not points:
            yield ()
            return
        first, rest = points[0], points[1:]
        for idx, other in enumerate(rest):
            for tail in rec(rest[:idx] + rest[idx + 1:]):
                yield ((first, other),) + tail

    for pairs in rec(tuple(range(1, 2 * n + 1))):
        yield BrauerDiagram(n, pairs)


def permutations(n: int) -> Iterator[BrauerDiagram]:
    """The n! permutation diagrams, in lexicographic order of sigma."""
    _check_order(n)
    for perm in itertools.permutations(range(1, n + 1)):
        yield BrauerDiagram.from_permutation(perm)


# ---------------------------------------------------------------- vectors


@dataclass(frozen=True)
class BrauerVector:
    """A rational linear combination of diagrams of one order, in B_{n,lam}."""

    n: int
    lam: Fraction
    terms: Mapping[BrauerDiagram, Fraction]

    def __post_init__(self) -> None:
        clean = {}
        for d, c in self.terms.items():
            if d.n != self.n:
                raise BrauerError("all diagrams of a vector must share the order")
            c = Fraction(c)
            if c:
                clean[d] = c
        object.__setattr__(self, "lam", Fraction(self.lam))
        object.__setattr__(self, "terms", dict(sorted(clean.items(), key=lambda kv: kv[0].pairs)))

    @classmethod
    def basis(cls, d: BrauerDiagram, lam, coef=1) -> BrauerVector:
        return cls(d.n, lam, {d: Fraction(coef)})

    def _compatible(self, other: BrauerVector) -> None:
        if self.n != other.n or self.lam != other.lam:
            raise BrauerError("vectors live in different algebras")

    def __add__(self, other: BrauerVector) -> BrauerVector:
        self._compatible(other)
        terms = dict(self.terms)
        for d, c in other.terms.items():
            terms[d] = terms.get(d, 0) + c
        return BrauerVector(self.n, self.lam, terms)

    def __sub__(self, other: BrauerVector) -> BrauerVector:
        return self + other.scale(-1)

    def scale(self, c) -> BrauerVector:
        return BrauerVector(self.n, self.lam, {d: v * c for d, v in self.terms.items()})

    def __mul__(self, other: BrauerVector) -> BrauerVector:
        self._compatible(other)
        terms: dict[BrauerDiagram, Fraction] = {}
        for d1, c1 in self.terms.items():
            for d2, c2 in other.terms.items():
                k, d = compose(d1, d2)
                terms[d] = terms.get(d, 0) + c1 * c2 * self.lam**k
        return BrauerVector(self.n, self.lam, terms)

    def records(self) -> list[tuple[str, str]]:
        """Serialized form: a list of (coefficient, diagram) text records."""
        return [(str(c), str(d)) for d, c in self.terms.items()]

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, BrauerVector):
            return NotImplemented
        return (self.n, self.lam, self.terms) == (other.n, other.lam, other.terms)

    def __hash__(self) -> int:
        return hash((self.n, self.lam, tuple(self.terms.items())))


# ---------------------------------------------------------------- cycle data


@dataclass(frozen=True)
class CycleData:
    sigma: tuple[int, ...]
    eps: tuple[int, ...]
    loops: int

    def cycles(self) -> list[tuple[int, ...]]:
        return permutation_cycles(self.sigma)


def permutation_cycles(perm: tuple[int, ...]) -> list[tuple[int, ...]]:
    """Cycles of (perm(1),...,perm(n)), each starting at its smallest element."""
    seen = set()
    out = []
    for start in range(1, len(perm) + 1):
        if start in seen:
            continue
        cyc = []
        i = start
        while i not in seen:
            seen.add(i)
            cyc.append(i)
            i = perm[i - 1]
        out.append(tuple(cyc))
    return out


def oriented_cycle_permutation(pi: BrauerDiagram) -> tuple[int, ...]:
    """The permutation Sigma_pi of {1..2n} given as a tuple of images.

    Primary edges are the pairs of pi, secondary edges join i and n+i.  Each
    cycle leaves its smallest point along the primary edge.
    """
    n = pi.n
    closing = _closing_mate(n)
    image = [0] * (2 * n + 1)
    for start in range(1, 2 * n + 1):
        if image[start]:
            continue
        p, primary = start, True
        while True:
            q = pi.mate(p) if primary else closing[p]
            image[p] = q
            p, primary = q, not primary
            if p == start:
                break
    return tuple(image[1:])


def cycle_data(pi: BrauerDiagram) -> CycleData:
    n = pi.n
    big = oriented_cycle_permutation(pi)
    eps = tuple(1 if big[i - 1] == pi.mate(i) else -1 for i in range(1, n + 1))
    sigma = [0] * n
    for i in range(1, n + 1):
        j = big[i - 1]
        while j > n:
            j = big[j - 1]
        sigma[i - 1] = j
    return CycleData(tuple(sigma), eps, pi.loops())


def horizontal_orientation_counts(pi: BrauerDiagram) -> tuple[int, int]:
    """(h_plus, h_minus): horizontal edges traversed rightwards / leftwards by Sigma_pi."""
    big = oriented_cycle_permutation(pi)
    n = pi.n
    plus = minus = 0
    for a, b in pi.pairs:
        if (a <= n) != (b <= n):
            continue
        # position along its row: bottom i -> i, top n+i -> i
        src = a if big[a - 1] == b else b
        dst = pi.mate(src)
        x_src = src if src <= n else src - n
        x_dst = dst if dst <= n else dst - n
        if x_dst > x_src:
            plus += 1
        else:
            minus += 1
    return plus, minus


# ---------------------------------------------------------------- T and P


def swap(pi: BrauerDiagram, a: int, b: int) -> BrauerDiagram:
    """S_{a,b}: exchange the partners of a and b."""
    mate = list(pi._mate)
    ma, mb = mate[a], mate[b]
    if ma == b:
        return pi
    mate[a], mate[b] = mb, ma
    mate[mb], mate[ma] = a, b
    return BrauerDiagram.from_mate(pi.n, mate)


def force(pi: BrauerDiagram, a: int, b: int) -> tuple[int, BrauerDiagram]:
    """F_{a,b}: force the pair {a,b}; returns (loop count 0 or 1, diagram)."""
    mate = list(pi._mate)
    ma, mb = mate[a], mate[b]
    if ma == b:
        return 1, pi
    mate[a], mate[b] = b, a
    mate[ma], mate[mb] = mb, ma
    return 0, BrauerDiagram.from_mate(pi.n, mate)


def tp_move(kind: str, l: int, m: int, sl: int, sm: int, pi: BrauerDiagram) -> tuple[int, BrauerDiagram]:
    """T or P operator with signs (sl, sm) as (loop count, diagram)."""
    n = pi.n
    if l == m:
        raise BrauerError("T/P operators need l != m")
    if not (1 <= l <= n and 1 <= m <= n):
        raise BrauerError(f"indices {l},{m} out of range for order {n}")
    if kind not in ("T", "P"):
        raise BrauerError(f"unknown operator kind {kind!r}")
    if sl == -1 and sm == 1:
        return tp_move(kind, m, l, 1, -1, pi)
    if kind == "T":
        if sl == 1 and sm == 1:
            return 0, swap(pi, l, m)
        if sl == -1 and sm == -1:
            return 0, swap(pi, n + l, n + m)
        return force(pi, l, n + m)
    if sl == 1 and sm == 1:
        return force(pi, l, m)
    if sl == -1 and sm == -1:
        return force(pi, n + l, n + m)
    return 0, swap(pi, l, n + m)


def tp_action(kind: str, l: int, m: int, sl: int, sm: int, pi: BrauerDiagram, lam) -> BrauerVector:
    k, d = tp_move(kind, l, m, sl, sm, pi)
    return BrauerVector.basis(d, lam, Fraction(lam) ** k)


# ---------------------------------------------------------------- metric


def loops_of_product(a: BrauerDiagram, b: BrauerDiagram) -> int:
    """l(a b) counting the closed loops formed in the product."""
    k, d = compose(a, b)
    return k + d.loops()


def distance(p1: BrauerDiagram, p2: BrauerDiagram) -> int:
    if p1.n != p2.n:
        raise BrauerError(f"order mismatch: {p1.n} vs {p2.n}")
    return p1.n - loops_of_product(transpose(p1), p2)


# ---------------------------------------------------------------- Weingarten


def solve_exact(matrix: list[list[Fraction]], rhs: list[list[Fraction]]) -> list[list[Fraction]]:
    """Gauss-Jordan elimination over the rationals; raises on singular input."""
    size = len(matrix)
    aug = [list(map(Fraction, row)) + list(map(Fraction, r)) for row, r in zip(matrix, rhs)]
    for col in range(size):
        pivot = next((r for r in range(col, size) if aug[r][col] != 0), None)
        if pivot is None:
            raise ZeroDivisionError("singular matrix")
        aug[col], aug[pivot] = aug[pivot], aug[col]
        inv = 1 / aug[col][col]
        aug[col] = [x * inv for x in aug[col]]
        for r in range(size):
            if r != col and aug[r][col] != 0:
                f = aug[r][col]
                aug[r] = [x - f * y for x, y in zip(aug[r], aug[col])]
    return [row[size:] for row in aug]


@dataclass(frozen=True)
class WeingartenMatrix:
    kind: str
    n: int
    N: int
    basis: tuple[BrauerDiagram, ...]
    gram: tuple[tuple[Fraction, ...], ...]
    entries: tuple[tuple[Fraction, ...], ...]

    def __call__(self, p1: BrauerDiagram, p2: BrauerDiagram) -> Fraction:
        index = {d: i for i, d in enumerate(self.basis)}
        return self.entries[index[p1]][index[p2]]


def gram_matrix(kind: str, n: int, N: int) -> tuple[tuple[BrauerDiagram, ...], list[list[Fraction]]]:
    if kind == "unitary":
        basis = tuple(permutations(n))
        lam = Fraction(N)
    elif kind in ("orthogonal", "symplectic"):
        basis = tuple(pairings(n))
        lam = Fraction(N) if kind == "orthogonal" else Fraction(-2 * N)
    else:
        raise BrauerError(f"unknown Weingarten kind {kind!r}")
    gram = [[lam ** loops_of_product(transpose(p), q) for q in basis] for p in basis]
    return basis, gram


def weingarten(kind: str, n: int, N: int) -> WeingartenMatrix:
    """Inverse of the Gram matrix lam^{l(t(pi) pi')} by exact elimination."""
    _check_order(n)
    basis, gram = gram_matrix(kind, n, N)
    identity = [[Fraction(int(i == j)) for j in range(len(basis))] for i in range(len(basis))]
    try:
        inv = solve_exact(gram, identity)
    except ZeroDivisionError:
        raise BrauerError(f"N too small: Gram matrix of kind {kind}, n={n}, N={N} is singular") from None
    return WeingartenMatrix(
        kind, n, N, basis,
        tuple(tuple(r) for r in gram),
        tuple(tuple(r) for r in inv),
    )
