import random
from fractions import Fraction

from hypothesis import given, settings, strategies as st

from incistrata.exact import SparsePoly, mvar
from incistrata.linalg import (
    SpanCertificate,
    determinant,
    express_in_span,
    parametric_express_in_span,
    random_primes,
    rank,
    rank_mod,
    rational_reconstruct,
    solve_exact_square,
    word_primes,
)

small_rats = st.fractions(min_value=-6, max_value=6, max_denominator=4)


def matrices():
    return st.integers(1, 5).flatmap(
        lambda c: st.lists(st.lists(small_rats, min_size=c, max_size=c), min_size=1, max_size=5)
    )


def test_rank_and_determinant_small():
    assert rank([[1, 2], [2, 4]]) == 1
    assert rank([[1, -6, 9], [2, -12, 18]]) == 1
    assert determinant([[2, 1], [1, 1]]) == 1
    assert determinant([[Fraction(1, 2), 0], [0, 4]]) == 2


def test_primes_are_large_and_distinct():
    ps = word_primes(3)
    assert len(set(ps)) == 3 and all(p < 2 ** 31 for p in ps)
    assert random_primes(3, seed=1) == random_primes(3, seed=1)


def test_rational_reconstruct():
    m = 2 ** 61 - 1
    a = (3 * pow(7, -1, m)) % m
    assert rational_reconstruct(a, m) == Fraction(3, 7)


def test_solve_exact_square():
    A = [[2, 1], [1, 3]]
    B = [[3], [5]]
    X = solve_exact_square(A, B)
    assert [row[0] for row in X] == [Fraction(4, 5), Fraction(7, 5)]


def test_member_and_witness():
    c = express_in_span([1, 1, 2], [[1, 0, 1], [0, 1, 1]])
    assert c.member and c.coefficients == [1, 1]
    w = express_in_span([1, 0, 0], [[1, 1, 0], [0, 0, 1]])
    assert not w.member
    assert w.verify([1, 0, 0], [[1, 1, 0], [0, 0, 1]])
    assert w.pairing([1, 0, 0]) != 0


def test_large_system_uses_modular_route_and_verifies():
    rng = random.Random(5)
    spanners = [[rng.randint(-9, 9) for _ in range(60)] for _ in range(25)]
    coeffs = [Fraction(rng.randint(-3, 3), rng.randint(1, 3)) for _ in range(25)]
    target = [sum(c * v[i] for c, v in zip(coeffs, spanners)) for i in range(60)]
    cert = express_in_span(target, spanners)
    assert cert.member and cert.verify(target, spanners)
    bumped = list(target)
    bumped[0] += 1
    neg = express_in_span(bumped, spanners)
    assert not neg.member and neg.verify(bumped, spanners)


def test_tampered_certificate_fails():
    c = SpanCertificate(True, coefficients=[1, 2])
    assert not c.verify([1, 1, 2], [[1, 0, 1], [0, 1, 1]])


@settings(max_examples=60, deadline=None)
@given(matrices(), st.integers(0, 10 ** 6))
def test_rank_invariant_under_row_ops_and_transpose(M, seed):
    rng = random.Random(seed)
    r = rank(M)
    T = [list(col) for col in zip(*M)]
    assert rank(T) == r
    N = [list(row) for row in M]
    if len(N) > 1:
        i, j = rng.sample(range(len(N)), 2)
        f = Fraction(rng.randint(-3, 3))
        N[i] = [a + f * b for a, b in zip(N[i], N[j])]
    assert rank(N) == r


@settings(max_examples=60, deadline=None)
@given(matrices(), st.integers(0, 10 ** 6))
def test_rank_agrees_with_rank_mod_random_primes(M, seed):
    integral = [[int(v * 12) for v in row] for row in M]
    r = rank(integral)
    for p in random_primes(3, seed=seed):
        assert rank_mod(integral, p) == r


@settings(max_examples=50, deadline=None)
@given(matrices(), st.lists(small_rats, min_size=5, max_size=5))
def test_express_in_span_certificates_verify(M, coeffs):
    target = [sum(c * row[i] for c, row in zip(coeffs, M)) for i in range(len(M[0]))]
    cert = express_in_span(target, M)
    assert cert.member and cert.verify(target, M)


def test_parametric_two_point_relation_denominator():
    # one point: m1 * v = m1^2, so v = 1/m1 should come back with denominator m1
    m1 = SparsePoly.var(mvar(1))
    target = [m1]
    spanners = [[m1 * m1]]
    res = parametric_express_in_span(target, spanners, [mvar(1)], [m1])
    assert res.status == "member"
    assert res.numerators == [SparsePoly.const(1)]
    assert res.denominator == m1 and dict(res.denominator_factors) == {m1: 1}
