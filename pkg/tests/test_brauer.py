import itertools
import math
from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from masterfield.brauer import (
    BrauerDiagram,
    BrauerError,
    BrauerVector,
    compose,
    distance,
    force,
    loops_of_product,
    pairings,
    permutations,
    swap,
    transpose,
    weingarten,
)
from masterfield.suites import swap_bfs_distances

B4 = list(pairings(4))
S4 = list(permutations(4))


def diagrams(n):
    return st.sampled_from(list(pairings(n)))


def cycles_of(perm):
    seen, count = set(), 0
    for i in range(1, len(perm) + 1):
        if i not in seen:
            count += 1
            while i not in seen:
                seen.add(i)
                i = perm[i - 1]
    return count


@pytest.mark.parametrize("n", range(0, 6))
def test_number_of_pairings(n):
    assert len(list(pairings(n))) == math.prod(range(1, 2 * n, 2))


def test_parse_round_trip():
    for d in B4:
        assert BrauerDiagram.parse(str(d)) == d


@pytest.mark.parametrize("text", ["1-2", "{1-2, 3}", "{1-1, 2-3}", "{1-2, 2-3}", "{1-5, 2-3}"])
def test_parse_rejects(text):
    with pytest.raises(BrauerError):
        BrauerDiagram.parse(text)


@given(diagrams(4))
def test_identity_is_unit(d):
    e = BrauerDiagram.identity(4)
    assert compose(e, d) == (0, d)
    assert compose(d, e) == (0, d)


@given(st.sampled_from(S4), st.sampled_from(S4))
def test_permutations_multiply_as_functions(a, b):
    k, d = compose(a, b)
    pa, pb = a.permutation(), b.permutation()
    assert k == 0
    assert d.permutation() == tuple(pa[pb[i] - 1] for i in range(4))


@given(diagrams(4), diagrams(4), diagrams(4))
def test_associative_with_loop_counts(a, b, c):
    k1, ab = compose(a, b)
    k2, left = compose(ab, c)
    k3, bc = compose(b, c)
    k4, right = compose(a, bc)
    assert left == right
    assert k1 + k2 == k3 + k4


@given(diagrams(4), diagrams(4))
def test_transpose_is_anti_homomorphism(a, b):
    k, d = compose(a, b)
    assert compose(transpose(b), transpose(a)) == (k, transpose(d))
    assert transpose(transpose(a)) == a


def test_contraction_squares_to_loop():
    c = BrauerDiagram.contraction(3, 1, 2)
    assert compose(c, c) == (1, c)


def test_vector_product_with_loop_weight():
    c = BrauerDiagram.contraction(2, 1, 2)
    v = BrauerVector.basis(c, 5)
    assert v * v == BrauerVector.basis(c, 5, 5)


@given(diagrams(4), diagrams(4), diagrams(4))
def test_distance_is_a_metric(a, b, c):
    assert distance(a, a) == 0
    assert distance(a, b) == distance(b, a)
    assert (distance(a, b) == 0) == (a == b)
    assert distance(a, c) <= distance(a, b) + distance(b, c)


@given(st.sampled_from(S4), st.sampled_from(S4))
def test_distance_on_permutations_is_cayley(a, b):
    pa, pb = a.permutation(), b.permutation()
    inv = [0] * 4
    for i, x in enumerate(pa):
        inv[x - 1] = i + 1
    q = tuple(inv[pb[i] - 1] for i in range(4))
    assert distance(a, b) == 4 - cycles_of(q)


@pytest.mark.parametrize("start", B4[::13])
def test_distance_matches_swap_bfs_in_b4(start):
    bfs = swap_bfs_distances(start)
    assert len(bfs) == len(B4)
    assert all(bfs[q] == distance(start, q) for q in B4)


@given(diagrams(3), diagrams(3))
def test_loops_of_product_bounds(a, b):
    assert 0 < loops_of_product(transpose(a), b) <= 3
    assert loops_of_product(transpose(a), a) == 3


@given(diagrams(4), st.integers(1, 8), st.integers(1, 8))
def test_swap_and_force_moves(d, a, b):
    if a == b:
        return
    s = swap(d, a, b)
    assert swap(s, a, b) == d
    if d.mate(a) != b:
        assert s.mate(a) == d.mate(b)
    k, f = force(d, a, b)
    assert f.mate(a) == b
    assert k == (d.mate(a) == b)


def test_weingarten_unitary_closed_forms():
    for N in (2, 3, 5):
        w1 = weingarten("unitary", 1, N)
        assert w1.entries == ((Fraction(1, N),),)
        w2 = weingarten("unitary", 2, N)
        e, t = BrauerDiagram.identity(2), BrauerDiagram.transposition(2, 1, 2)
        assert w2(e, e) == Fraction(1, N * N - 1)
        assert w2(e, t) == Fraction(-1, N * (N * N - 1))


def test_weingarten_symplectic_loop_factor():
    assert weingarten("symplectic", 1, 3).entries == ((Fraction(-1, 6),),)
    assert weingarten("orthogonal", 1, 3).entries == ((Fraction(1, 3),),)


@pytest.mark.parametrize("kind", ["unitary", "orthogonal", "symplectic"])
def test_weingarten_inverts_gram(kind):
    wg = weingarten(kind, 2, 3)
    size = len(wg.basis)
    for i, j in itertools.product(range(size), repeat=2):
        assert sum(wg.entries[i][k] * wg.gram[k][j] for k in range(size)) == (i == j)


def test_weingarten_singular_gram():
    with pytest.raises(BrauerError, match="N too small"):
        weingarten("unitary", 2, 1)
