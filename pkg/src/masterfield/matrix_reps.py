"""Explicit tensor representations of Brauer diagrams.

Tensors in M_d^{(x)n} are stored as square numpy arrays of size d^n in the
Kronecker ordering, slot 1 most significant.  All entries produced here are
small dyadic rationals, so float equality is exact and tests compare with
``np.array_equal``.

The quaternionic side uses the block embedding
iota(a + j b) = [[a, -conj(b)], [b, conj(a)]] of H into M_2(C), and of
M_N(H) into M_{2N}(C) with index s*N + a.
"""

from __future__ import annotations

import itertools
import string
from dataclasses import dataclass
from fractions import Fraction
from functools import reduce
from typing import Mapping, Sequence

import numpy as np

from .brauer import (
    BrauerDiagram,
    BrauerError,
    compose,
    cycle_data,
    horizontal_orientation_counts,
    permutation_cycles,
)

MAX_ORDER = 4
MAX_DIM = 1296


class ResourceLimitError(ValueError):
    """Requested tensor exceeds the dense size guard."""


def _guard(n: int, d: int) -> None:
    if n > MAX_ORDER or d**n > MAX_DIM:
        raise ResourceLimitError(
            f"resource guard: n={n}, dimension {d} gives {d}^{n} > {MAX_DIM} or n > {MAX_ORDER}"
        )


def kron_all(mats: Sequence[np.ndarray]) -> np.ndarray:
    return reduce(np.kron, mats, np.ones((1, 1)))


def pairing_tensor(pi: BrauerDiagram, weight: np.ndarray) -> np.ndarray:
    """sum_i prod_{{k<l} in pi} W[i_k, i_l] E_{i_{n+1} i_1} (x) ... (x) E_{i_{2n} i_n}."""
    n = pi.n
    d = weight.shape[0]
    if n == 0:
        return np.ones((1, 1), dtype=weight.dtype)
    letters = string.ascii_letters[: 2 * n]
    operands = []
    subs = []
    for k, l in pi.pairs:
        subs.append(letters[k - 1] + letters[l - 1])
        operands.append(weight)
    out = letters[n:] + letters[:n]
    full = np.einsum(",".join(subs) + "->" + out, *operands)
    return full.reshape(d**n, d**n)


def rho(kind: str, pi: BrauerDiagram, N: int) -> np.ndarray:
    """rho_K(pi) on (K^N)^{(x)n}; H_complex acts on (C^{2N})^{(x)n}."""
    n = pi.n
    if kind == "R":
        _guard(n, N)
        return pairing_tensor(pi, np.eye(N))
    if kind == "C":
        _guard(n, N)
        if not pi.is_permutation():
            return np.zeros((N**n, N**n), dtype=complex)
        return pairing_tensor(pi, np.eye(N)).astype(complex)
    if kind == "H_complex":
        _guard(n, 2 * N)
        return eta_sign(pi) * eta(pi, N)
    raise BrauerError(f"unknown representation kind {kind!r}")


def rho_linear(kind: str, vector, N: int) -> np.ndarray:
    """Linear extension of rho to a BrauerVector."""
    d = 2 * N if kind == "H_complex" else N
    out = np.zeros((d**vector.n, d**vector.n), dtype=complex if kind != "R" else float)
    for diagram, coef in vector.terms.items():
        out = out + float(coef) * rho(kind, diagram, N)
    return out


def symplectic_form(N: int) -> np.ndarray:
    """J = [[0, -I], [I, 0]] on C^{2N}."""
    z = np.zeros((N, N))
    i = np.eye(N)
    return np.block([[z, -i], [i, z]]).astype(complex)


def eta(pi: BrauerDiagram, N: int) -> np.ndarray:
    """Unsigned tensor eta(pi): J on every pair, composed with J^{(x)n}."""
    _guard(pi.n, 2 * N)
    J = symplectic_form(N)
    return pairing_tensor(pi, J) @ kron_all([J] * pi.n)


def eta_sign(pi: BrauerDiagram) -> int:
    """(-1)^{n - l(pi) + (h_plus - h_minus)/2}."""
    h_plus, h_minus = horizontal_orientation_counts(pi)
    e = pi.n - pi.loops() + (h_plus - h_minus) // 2
    return -1 if e % 2 else 1


# ---------------------------------------------------------------- quaternions


@dataclass(frozen=True)
class Quaternion:
    w: Fraction = Fraction(0)
    x: Fraction = Fraction(0)
    y: Fraction = Fraction(0)
    z: Fraction = Fraction(0)

    def __post_init__(self) -> None:
        for name in ("w", "x", "y", "z"):
            object.__setattr__(self, name, Fraction(getattr(self, name)))

    @classmethod
    def unit(cls, index: int) -> Quaternion:
        coords = [0, 0, 0, 0]
        coords[index] = 1
        return cls(*coords)

    def __add__(self, o: Quaternion) -> Quaternion:
        return Quaternion(self.w + o.w, self.x + o.x, self.y + o.y, self.z + o.z)

    def __sub__(self, o: Quaternion) -> Quaternion:
        return Quaternion(self.w - o.w, self.x - o.x, self.y - o.y, self.z - o.z)

    def __neg__(self) -> Quaternion:
        return Quaternion(-self.w, -self.x, -self.y, -self.z)

    def __mul__(self, o):
        if not isinstance(o, Quaternion):
            o = Fraction(o)
            return Quaternion(self.w * o, self.x * o, self.y * o, self.z * o)
        a1, b1, c1, d1 = self.w, self.x, self.y, self.z
        a2, b2, c2, d2 = o.w, o.x, o.y, o.z
        return Quaternion(
            a1 * a2 - b1 * b2 - c1 * c2 - d1 * d2,
            a1 * b2 + b1 * a2 + c1 * d2 - d1 * c2,
            a1 * c2 - b1 * d2 + c1 * a2 + d1 * b2,
            a1 * d2 + b1 * c2 - c1 * b2 + d1 * a2,
        )

    __rmul__ = __mul__

    def conj(self) -> Quaternion:
        return Quaternion(self.w, -self.x, -self.y, -self.z)

    def norm2(self) -> Fraction:
        return self.w**2 + self.x**2 + self.y**2 + self.z**2

    def inverse(self) -> Quaternion:
        n = self.norm2()
        if n == 0:
            raise ZeroDivisionError("quaternion 0 has no inverse")
        return self.conj() * (1 / n)

    @property
    def re(self) -> Fraction:
        return self.w

    def coords(self) -> tuple[Fraction, Fraction, Fraction, Fraction]:
        return (self.w, self.x, self.y, self.z)


def _unit_table() -> tuple[tuple[tuple[int, int], ...], ...]:
    table = []
    for a in range(4):
        row = []
        for b in range(4):
            q = Quaternion.unit(a) * Quaternion.unit(b)
            idx = next(i for i, c in enumerate(q.coords()) if c != 0)
            row.append((int(q.coords()[idx]), idx))
        table.append(tuple(row))
    return tuple(table)


# UNIT_PRODUCT[a][b] = (sign, c) with e_a e_b = sign * e_c, e = (1, i, j, k)
UNIT_PRODUCT = _unit_table()


def iota(q: Quaternion) -> np.ndarray:
    """2x2 complex matrix of q = a + j b, where a = w + x i and b = y - z i."""
    a = complex(q.w, q.x)
    b = complex(q.y, -q.z)
    return np.array([[a, -b.conjugate()], [b, a.conjugate()]])


def iota_matrix(components: np.ndarray) -> np.ndarray:
    """iota of a quaternionic N x N matrix given as a real array of shape (4, N, N)."""
    w, x, y, z = components
    a = w + 1j * x
    b = y - 1j * z
    return np.block([[a, -b.conj()], [b, a.conj()]])


@dataclass(frozen=True)
class HTensor:
    """An element of H^{(x)n}: map from unit index tuples to rational coefficients."""

    n: int
    terms: Mapping[tuple[int, ...], Fraction]

    def __post_init__(self) -> None:
        clean = {k: Fraction(v) for k, v in sorted(self.terms.items()) if v != 0}
        object.__setattr__(self, "terms", clean)

    def __add__(self, other: HTensor) -> HTensor:
        out = dict(self.terms)
        for k, v in other.terms.items():
            out[k] = out.get(k, 0) + v
        return HTensor(self.n, out)

    def scale(self, c) -> HTensor:
        return HTensor(self.n, {k: v * Fraction(c) for k, v in self.terms.items()})

    def __mul__(self, other: HTensor) -> HTensor:
        out: dict[tuple[int, ...], Fraction] = {}
        for k1, v1 in self.terms.items():
            for k2, v2 in other.terms.items():
                sign = 1
                units = []
                for a, b in zip(k1, k2):
                    s, c = UNIT_PRODUCT[a][b]
                    sign *= s
                    units.append(c)
                key = tuple(units)
                out[key] = out.get(key, 0) + sign * v1 * v2
        return HTensor(self.n, out)

    def __eq__(self, other: object) -> bool:
        return isinstance(other, HTensor) and (self.n, self.terms) == (other.n, other.terms)

    def __hash__(self) -> int:
        return hash((self.n, tuple(self.terms.items())))

    def to_array(self) -> np.ndarray:
        """Dense rational array of shape (4,)*n, exposed as floats."""
        arr = np.zeros((4,) * self.n)
        for k, v in self.terms.items():
            arr[k] = float(v)
        return arr

    def iota(self) -> np.ndarray:
        """iota^{(x)n}, a 2^n x 2^n complex matrix."""
        out = np.zeros((2**self.n, 2**self.n), dtype=complex)
        units = [iota(Quaternion.unit(a)) for a in range(4)]
        for k, v in self.terms.items():
            out += float(v) * kron_all([units[a] for a in k])
        return out


def re_tensor() -> HTensor:
    """Re^H = sum_gamma gamma (x) gamma^{-1}."""
    return HTensor(2, {(a, a): (1 if a == 0 else -1) for a in range(4)})


def co_tensor() -> HTensor:
    """Co^H = sum_gamma gamma (x) gamma."""
    return HTensor(2, {(a, a): 1 for a in range(4)})


def gamma(pi: BrauerDiagram, N: int | None = None) -> HTensor:
    """gamma(pi) in H^{(x)n}; the scalar factors I_N are left implicit."""
    if pi.n > MAX_ORDER:
        raise ResourceLimitError(f"resource guard: n={pi.n} > {MAX_ORDER}")
    n = pi.n
    data = cycle_data(pi)
    cycles = permutation_cycles(data.sigma)
    out: dict[tuple[int, ...], Fraction] = {}
    for units in itertools.product(range(4), repeat=n):
        coef = Fraction(1)
        for cyc in cycles:
            # gamma_{i_s} ... gamma_{i_1}
            sign, acc = 1, 0
            for i in cyc:
                s, acc = UNIT_PRODUCT[units[i - 1]][acc]
                sign *= s
            if acc != 0:
                coef = Fraction(0)
                break
            coef *= -2 * sign
        if coef == 0:
            continue
        for k in range(n):
            # gamma^{-eps}: for eps = +1 the inverse, i.e. the conjugate
            if data.eps[k] == 1 and units[k] != 0:
                coef = -coef
        key = tuple(units)
        out[key] = out.get(key, 0) + coef
    return HTensor(n, out).scale(Fraction(1, (-2) ** n) if n else 1)


def gamma_linear(vector) -> HTensor:
    out = HTensor(vector.n, {})
    for diagram, coef in vector.terms.items():
        out = out + gamma(diagram).scale(coef)
    return out


def rho_h_iota(pi: BrauerDiagram, N: int) -> np.ndarray:
    """iota^{(x)n}(rho(pi) (x) gamma(pi)), assembled from rho_R and gamma directly."""
    n = pi.n
    _guard(n, 2 * N)
    real = pairing_tensor(pi, np.eye(N)).reshape((N,) * (2 * n))
    quat = gamma(pi).iota().reshape((2,) * (2 * n))
    outer = np.multiply.outer(quat, real)
    rows = [ax for k in range(n) for ax in (k, 2 * n + k)]
    cols = [ax for k in range(n) for ax in (n + k, 3 * n + k)]
    return outer.transpose(rows + cols).reshape((2 * N) ** n, (2 * N) ** n)


# ---------------------------------------------------------------- Casimir


def casimir_constant(kind: str, N: int) -> Fraction:
    """c = -1 + (2 - beta)/(beta N); SU adds 1/N^2 to the unitary value."""
    if kind == "SU":
        return Fraction(-1) + Fraction(1, N * N)
    beta = {"R": 1, "C": 2, "H": 4}[kind]
    return Fraction(-1) + Fraction(2 - beta, beta * N)


def casimir(kind: str, N: int) -> tuple[np.ndarray, Fraction]:
    """Casimir tensor realised on (K^N)^{(x)2} and its constant c.

    For H the tensor is (iota (x) iota)(C) on (C^{2N})^{(x)2}.
    """
    if kind not in ("R", "C", "H", "SU"):
        raise BrauerError(f"unknown Casimir kind {kind!r}")
    if N < 1:
        raise BrauerError(f"dimension must be positive, got {N}")
    flip = rho("R", BrauerDiagram.transposition(2, 1, 2), N)
    proj = rho("R", BrauerDiagram.contraction(2, 1, 2), N)
    c = casimir_constant(kind, N)
    if kind == "R":
        return -(flip - proj) / N, c
    if kind == "C":
        return (-flip / N).astype(complex), c
    if kind == "SU":
        return (-flip / N + np.eye(N * N) / N**2).astype(complex), c
    re_part = re_tensor().iota().reshape((2,) * 4)
    co_part = co_tensor().iota().reshape((2,) * 4)

    def interleave(q: np.ndarray, r: np.ndarray) -> np.ndarray:
        outer = np.multiply.outer(q, r.reshape((N,) * 4))
        return outer.transpose(0, 4, 1, 5, 2, 6, 3, 7).reshape(4 * N * N, 4 * N * N)

    tensor = (-interleave(re_part, flip) + interleave(co_part, proj)) / (4 * N)
    return tensor, c


def contract_pair(tensor: np.ndarray, d: int) -> np.ndarray:
    """The map X (x) Y -> XY on M_d (x) M_d."""
    t = tensor.reshape(d, d, d, d)  # [a, b, c, e] for E_ac (x) E_be
    return np.einsum("abbe->ae", t)


# ---------------------------------------------------------------- power sums


def _check_square(kind: str, matrices: Sequence[np.ndarray], n: int) -> int:
    if len(matrices) != n:
        raise ValueError(f"dimension mismatch: expected {n} matrices, got {len(matrices)}")
    shapes = {np.shape(m) for m in matrices}
    if len(shapes) != 1:
        raise ValueError(f"dimension mismatch: shapes {sorted(shapes)}")
    shape = shapes.pop()
    if kind == "H":
        if len(shape) != 3 or shape[0] != 4 or shape[1] != shape[2]:
            raise ValueError(f"dimension mismatch: quaternionic matrices need shape (4, N, N), got {shape}")
        return shape[1]
    if len(shape) != 2 or shape[0] != shape[1]:
        raise ValueError(f"dimension mismatch: expected square matrices, got {shape}")
    return shape[0]


def power_sum(kind: str, pi: BrauerDiagram, matrices: Sequence[np.ndarray]):
    """prod over cycles (i_1...i_s) of sigma_pi of Tr(M_{i_s}^{eps} ... M_{i_1}^{eps}).

    M^{-1} is read as the transpose (R) or the adjoint (C, H).  For H the
    matrices are quaternionic arrays of shape (4, N, N) and each factor is
    -2 Re Tr.
    """
    _check_square(kind, matrices, pi.n)
    if kind == "C" and not pi.is_permutation():
        return 0.0
    data = cycle_data(pi)
    if kind == "H":
        mats = [iota_matrix(np.asarray(m, dtype=float)) for m in matrices]
    else:
        mats = [np.asarray(m) for m in matrices]
    result = 1.0
    for cyc in permutation_cycles(data.sigma):
        prod = np.eye(mats[0].shape[0], dtype=mats[0].dtype)
        for i in cyc:
            m = mats[i - 1]
            if data.eps[i - 1] == -1:
                m = m.conj().T
            prod = m @ prod
        tr = np.trace(prod)
        # -2 Re Tr_H(M) = -Tr_C(iota M)
        result *= -tr.real if kind == "H" else tr
    return result


def trace_form(kind: str, pi: BrauerDiagram, matrices: Sequence[np.ndarray]):
    """Tr^{(x)n}(rho_K(pi) o M_1 (x) ... (x) M_n), with (-2 Re Tr)^{(x)n} for H."""
    N = _check_square(kind, matrices, pi.n)
    if kind == "H":
        rep = rho_h_iota(pi, N)
        big = kron_all([iota_matrix(np.asarray(m, dtype=float)) for m in matrices])
        return (-1) ** pi.n * np.trace(rep @ big).real
    rep = rho(kind, pi, N)
    return np.trace(rep @ kron_all([np.asarray(m) for m in matrices]))


def rho_product(kind: str, p1: BrauerDiagram, p2: BrauerDiagram, N: int) -> np.ndarray:
    """rho of the algebra product p1 p2, loop factor included."""
    k, d = compose(p1, p2)
    lam = -2 * N if kind == "H_complex" else N
    return float(lam) ** k * rho(kind, d, N)


# ---------------------------------------------------------------- dense oracle


def _slot_operator(mat: np.ndarray, axis: int, num_axes: int, d: int):
    from scipy import sparse

    ops = [sparse.identity(d, format="csr")] * num_axes
    ops[axis] = sparse.csr_matrix(mat)
    out = ops[0]
    for op in ops[1:]:
        out = sparse.kron(out, op, format="csr")
    return out


def dense_word_generators(kind: str, word, N: int):
    """Superoperators on M_d^{(x)r} driving E[V_{i_1}^{e_1} (x) ... (x) V_{i_r}^{e_r}].

    Slot l carries a row axis 2l and a column axis 2l+1.  The Casimir C of
    the group acts on slots l < m of the same letter, on the left for a
    positive sign and on the right for a negative one, with sign e_l e_m.
    """
    from scipy import sparse

    kind_map = {"R": "R", "C": "C", "H": "H", "SU": "SU"}
    cas, c = casimir(kind_map[kind], N)
    d = 2 * N if kind == "H" else N
    r = len(word)
    num_axes = 2 * r
    dim = d**num_axes
    if dim > 10**6:
        raise ResourceLimitError(f"resource guard: dense oracle dimension {dim}")
    cc = cas.reshape(d, d, d, d)  # cc[p, r, q, s] is the coefficient of E_pq (x) E_rs
    signs = [s for _, s in word.letters]
    units = {}
    for p in range(d):
        for q in range(d):
            e = np.zeros((d, d))
            e[p, q] = 1
            units[p, q] = e

    def slot_op(l: int, p: int, q: int):
        if signs[l] == 1:
            return _slot_operator(units[p, q], 2 * l, num_axes, d)
        return _slot_operator(units[q, p], 2 * l + 1, num_axes, d)

    gens = []
    for k in range(1, word.num_letters + 1):
        xs = [i - 1 for i in word.positions(k)]
        g = sparse.identity(dim, format="csr", dtype=complex) * (len(xs) * float(c) / 2)
        for a, l in enumerate(xs):
            for m in xs[a + 1:]:
                for p, rr, q, s in zip(*np.nonzero(cc)):
                    coef = cc[p, rr, q, s] * signs[l] * signs[m]
                    g = g + coef * (slot_op(l, p, q) @ slot_op(m, rr, s))
        gens.append(g.tocsr())
    return gens, d


def dense_word_expectation(kind: str, word, N: int, t: Sequence[float]) -> complex:
    """E[tr(w)] from the Ito system on M_d^{(x)r}; normalised complex trace for H."""
    from scipy.sparse.linalg import expm_multiply

    r = len(word)
    if r == 0:
        return 1.0
    gens, d = dense_word_generators(kind, word, N)
    state = kron_all([np.eye(d).reshape(1, -1)] * r).reshape(-1).astype(complex)
    for k, g in enumerate(gens):
        if t[k]:
            state = expm_multiply(g * t[k], state)
    x = state.reshape((d,) * (2 * r))
    # tr(V_1 V_2 ... V_r): column index of slot l equals row index of slot l+1
    letters = string.ascii_letters[:r]
    subs = "".join(letters[l] + letters[(l + 1) % r] for l in range(r))
    return complex(np.einsum(subs + "->", x)) / d
