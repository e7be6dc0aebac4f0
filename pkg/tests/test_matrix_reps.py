import itertools
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from masterfield.brauer import BrauerDiagram, BrauerError, compose, pairings, permutations
from masterfield.matrix_reps import (
    Quaternion,
    casimir,
    casimir_constant,
    contract_pair,
    dense_word_expectation,
    eta,
    eta_sign,
    gamma,
    iota,
    power_sum,
    rho,
    rho_h_iota,
    rho_product,
    trace_form,
)
from masterfield.moment_systems import Word, build_word_system, word_expectation

B2 = list(pairings(2))
B3 = list(pairings(3))


@given(st.sampled_from(B3), st.sampled_from(B3), st.integers(1, 3))
def test_rho_r_is_a_homomorphism(a, b, N):
    assert np.array_equal(rho("R", a, N) @ rho("R", b, N), rho_product("R", a, b, N))


@pytest.mark.parametrize("N", [1, 2])
def test_rho_h_complex_is_a_homomorphism(N):
    for a, b in itertools.product(B2, repeat=2):
        lhs = rho("H_complex", a, N) @ rho("H_complex", b, N)
        assert np.array_equal(lhs, rho_product("H_complex", a, b, N))


def test_rho_c_of_permutation_is_permutation_matrix():
    for p in permutations(3):
        m = rho("C", p, 2)
        assert np.array_equal(m @ m.conj().T, np.eye(8))
        assert np.array_equal(np.abs(m), m.real)


def test_rho_c_kills_contractions():
    assert not rho("C", BrauerDiagram.contraction(2, 1, 2), 2).any()


def test_rho_identity_and_loop_trace():
    assert np.array_equal(rho("R", BrauerDiagram.identity(2), 3), np.eye(9))
    c = BrauerDiagram.contraction(2, 1, 2)
    assert np.trace(rho("R", c, 3)) == 3


def test_gamma_homomorphism_on_b2():
    for a, b in itertools.product(B2, repeat=2):
        k, d = compose(a, b)
        assert gamma(a) * gamma(b) == gamma(d).scale(Fraction(-2) ** k)


@given(st.sampled_from(B3), st.sampled_from(B3))
def test_gamma_homomorphism_on_b3(a, b):
    k, d = compose(a, b)
    assert gamma(a) * gamma(b) == gamma(d).scale(Fraction(-2) ** k)


@pytest.mark.parametrize("N", [1, 2])
def test_iota_rho_h_is_signed_eta(N):
    for p in B2:
        assert np.array_equal(rho_h_iota(p, N), eta_sign(p) * eta(p, N))


def test_eta_sign_of_permutations():
    for p in permutations(3):
        assert eta_sign(p) == (-1) ** (3 - p.loops())


@given(st.integers(0, 3), st.integers(0, 3))
def test_iota_is_multiplicative(i, j):
    a, b = Quaternion.unit(i), Quaternion.unit(j)
    assert np.array_equal(iota(a) @ iota(b), iota(a * b))


def test_quaternion_inverse():
    q = Quaternion(1, 2, -1, 3)
    assert q * q.inverse() == Quaternion(1)
    assert q.norm2() == 15


@pytest.mark.parametrize("kind", ["R", "C", "H", "SU"])
@pytest.mark.parametrize("N", [2, 3])
def test_casimir_contracts_to_constant(kind, N):
    tensor, c = casimir(kind, N)
    d = 2 * N if kind == "H" else N
    assert np.allclose(contract_pair(tensor, d), float(c) * np.eye(d))


def test_casimir_constants():
    assert casimir_constant("C", 4) == -1
    assert casimir_constant("R", 4) == Fraction(-3, 4)
    assert casimir_constant("H", 4) == Fraction(-9, 8)
    assert casimir_constant("SU", 4) == Fraction(-15, 16)


def _random_matrices(kind, n, N, rng):
    if kind == "H":
        return [rng.normal(size=(4, N, N)) for _ in range(n)]
    if kind == "C":
        return [rng.normal(size=(N, N)) + 1j * rng.normal(size=(N, N)) for _ in range(n)]
    return [rng.normal(size=(N, N)) for _ in range(n)]


@pytest.mark.parametrize("kind", ["R", "C", "H"])
def test_trace_form_equals_power_sum(kind):
    rng = np.random.default_rng(7)
    for p in B3:
        if kind == "C" and not p.is_permutation():
            continue
        mats = _random_matrices(kind, 3, 2, rng)
        assert np.isclose(trace_form(kind, p, mats), power_sum(kind, p, mats), rtol=1e-12, atol=1e-12)


def test_power_sum_dimension_mismatch():
    with pytest.raises(ValueError, match="dimension mismatch"):
        power_sum("R", BrauerDiagram.identity(2), [np.eye(2), np.eye(3)])


@pytest.mark.parametrize("kind,N", [("C", 2), ("R", 2), ("SU", 2), ("H", 1)])
@pytest.mark.parametrize("text", ["x1 x2 x1^-1 x2^-1", "x1 x1 x2", "x1^-1 x2 x1"])
def test_word_system_matches_dense_ito_oracle(kind, N, text):
    w = Word.parse(text)
    t = [0.4, 0.7]
    dense = dense_word_expectation(kind, w, N, t)
    assert abs(dense.imag) < 1e-12
    assert np.isclose(dense.real, word_expectation(build_word_system(kind, w, N), t), atol=1e-10)


def test_rho_rejects_unknown_kind():
    with pytest.raises(BrauerError):
        rho("Q", BrauerDiagram.identity(1), 2)
