"""Acceptance criteria 1-10, each at its stated time limit.

Every criterion prints one ``criterion N: PASS|FAIL`` line (also repeated in
the terminal summary).  Run with ``pytest tests/test_acceptance.py -v -s``.
"""

import random
import time
from fractions import Fraction

from hypothesis import assume, given, settings, strategies as st

from conftest import ACCEPTANCE_LINES
from incistrata.cli import DEFAULT_SEED
from incistrata.profiles import ColoredProfile, is_admissible
from incistrata.recursion import assemble_annihilator, base_certificate, cross_check, lift_certificate, power_sum_recursion
from incistrata.singularity import (
    branch_is_immersion,
    classify_point,
    enumerate_branches,
    farb_wolfson_report,
    oracle_agrees,
    random_oracle_suite,
)
from incistrata.stabilization import (
    compute_nk,
    graded_membership,
    n2_identity_residual,
    propagate_relation,
    symbolic_nk_relation,
    verify_known_identities,
)
from incistrata.strata import Configuration, configs_equal, discriminant_member, embed_configuration, embed_configuration_an


def criterion(number, limit, title, body):
    start = time.perf_counter()
    detail, ok = "", False
    try:
        detail = body() or ""
        ok = True
    finally:
        elapsed = time.perf_counter() - start
        ok = ok and elapsed < limit
        line = f"criterion {number}: {'PASS' if ok else 'FAIL'} {title} ({elapsed:.2f}s, limit {limit}s) {detail}".rstrip()
        ACCEPTANCE_LINES.append(line)
        print(line)
    assert elapsed < limit, f"criterion {number} took {elapsed:.1f}s"


def nk_check(weights, N):
    res = compute_nk(weights)
    assert res.N == N, res.N
    assert res.verify()
    assert res.membership.target == N + 1 and res.membership_check.verify()
    degrees = [w.n for w in res.non_membership_witnesses]
    assert degrees == list(range(1, N + 1))
    assert all(not w.member and w.verify() for w in res.non_membership_witnesses)
    last = res.non_membership_witnesses[-1]
    return res, last


def test_criterion_1_two_weights():
    def body():
        res, _ = nk_check([1, 2], 3)
        assert res.membership_check.n == 4
        return "N=3, witnesses at 2,3, certificate at 4"

    criterion(1, 1, "N_2((1,2)) = 3", body)


def test_criterion_2_three_weights():
    def body():
        res, last = nk_check([1, 2, 4], 7)
        assert last.n == 7 and res.membership_check.n == 8
        return "N=7, witness at 7, certificate at 8"

    criterion(2, 30, "N_3((1,2,4)) = 7", body)


def test_criterion_3_four_weights():
    def body():
        res, last = nk_check([1, 2, 4, 8], 15)
        cert = res.membership_check
        sizes = (len(last.partitions) + 1, len(last.monomials), len(cert.partitions) + 1, len(cert.monomials))
        assert sizes == (176, 816, 231, 969), sizes
        return "N=15, degree 15: 176x816, degree 16: 231x969"

    criterion(3, 600, "N_4((1,2,4,8)) = 15", body)


def test_criterion_4_identities():
    def body():
        report = verify_known_identities()
        failed = [k for k, v in report.items() if not v]
        assert not failed, failed
        expected = {"degree4_two_point_relation", "two_point_square_difference", "two_point_cube_difference",
                    "cusp_parametrisation", "equal_weight_binomial_relation_a2", "equal_weight_binomial_relation_a3",
                    "hankel_vandermonde_t2", "hankel_vandermonde_t3", "newton_recurrence_k1",
                    "newton_recurrence_k2", "newton_recurrence_k3"}
        assert expected <= set(report)
        assert n2_identity_residual().is_zero()
        assert not n2_identity_residual(literal=True).is_zero()
        return f"{len(report)} identities zero; degree-4 relation holds with the m1*m2 factor"

    criterion(4, 60, "symbolic identity suite", body)


def test_criterion_5_recursion_k2():
    def body():
        cert = lift_certificate(base_certificate())
        assert cert.k == 2 and cert.w == 2 and cert.verify()
        h = assemble_annihilator(cert)
        assert h.degree == 8 and h.verification == "symbolic"
        rel = power_sum_recursion(h)
        assert rel.target == 9 and rel.symbolic and rel.verify()
        check = cross_check(rel, [1, 2])
        assert all(check.values()), check
        return "w2=2, degree-8 annihilator, p9 relation verified, (1,2) cross-check agrees"

    criterion(5, 300, "recursion pipeline k=2", body)


def test_criterion_6_branch_examples():
    def body():
        U = ColoredProfile.uncolored
        b1 = enumerate_branches(U([1, 2]), U([3]))
        b2 = enumerate_branches(U([1, 1]), U([2]))
        P = ColoredProfile([[1, 1], [1, 1], [2, 0], [0, 2], [100, 101]])
        Q = ColoredProfile([[102, 103], [2, 2]])
        b3 = enumerate_branches(P, Q)
        assert (len(b1), len(b2), len(b3)) == (1, 1, 2)
        assert not branch_is_immersion(b1[0])[0]
        assert branch_is_immersion(b2[0])[0]
        a, b, c, d, e = P
        ones = tuple(tuple(sorted(g)) for g in ((a, b, e), (c, d)))
        units = tuple(tuple(sorted(g)) for g in ((c, d, e), (a, b)))
        flags = {br: branch_is_immersion(br)[0] for br in b3}
        assert flags == {ones: True, units: False}
        return "counts (1,1,2); flags no, yes, yes/no"

    criterion(6, 1, "branch examples", body)


def test_criterion_7_oracle():
    def body():
        suite = random_oracle_suite(60, seed=DEFAULT_SEED)
        assert len(suite) >= 50
        for inst in suite:
            assert inst.profile.k <= 4 and inst.profile.r <= 2 and len(inst.branch) <= 2
            assert all(1 <= v <= 5 for vec in inst.profile for v in vec)
        results = [oracle_agrees(inst) for inst in suite]
        bad = [i for i, r in enumerate(results) if not r[0]]
        assert not bad, bad
        imm = sum(1 for r in results if r[1])
        return f"{len(suite)} instances agree ({imm} immersions)"

    criterion(7, 120, "Jacobian oracle equivalence", body)


def test_criterion_8_farb_wolfson():
    def body():
        for d, n in [(2, 2), (3, 2), (2, 3)]:
            rep = farb_wolfson_report(d, n)
            assert (rep["codim_poly"], rep["codim_rat"], rep["verdict"]) == (1, n, "distinct"), rep
        return "(2,2),(3,2),(2,3): codims (1,n), distinct"

    criterion(8, 60, "Farb-Wolfson comparison", body)


def test_criterion_9_discriminant():
    def body():
        rng = random.Random(DEFAULT_SEED)
        rand = lambda: Fraction(rng.randint(-10 ** 6, 10 ** 6), rng.randint(1, 10 ** 3))
        for _ in range(100):
            a, b = rand(), rand()
            assert discriminant_member(Configuration.make([a, b], [2, 1]))
        count = 0
        while count < 100:
            roots = {rand() for _ in range(3)}
            if len(roots) == 3:
                assert not discriminant_member(Configuration.make(sorted(roots), [1, 1, 1]))
                count += 1
        return "100 double-root on locus, 100 distinct-root off"

    criterion(9, 5, "discriminant membership", body)


coords = st.integers(-3, 3)


@st.composite
def line_configs(draw):
    k = draw(st.integers(1, 3))
    return Configuration.make([draw(coords) for _ in range(k)], [[draw(st.integers(1, 3)), draw(st.integers(1, 3))] for _ in range(k)])


def split(c, rnd):
    entries = list(c.entries)
    p, w = entries.pop(0)
    entries += [(p, tuple(Fraction(v, 3) for v in w)), (p, tuple(Fraction(2 * v, 3) for v in w))]
    rnd.shuffle(entries)
    return Configuration(c.n, c.r, tuple(entries))


@settings(max_examples=60, deadline=None)
@given(line_configs(), line_configs(), line_configs(), st.randoms(use_true_random=False))
def equivalence_relation(a, b, c, rnd):
    a2 = split(a, rnd)
    assert configs_equal(a, a) and configs_equal(a, a2) and configs_equal(a2, a)
    assert configs_equal(a, b) == configs_equal(b, a)
    if configs_equal(a, b) and configs_equal(b, c):
        assert configs_equal(a, c)


@settings(max_examples=60, deadline=None)
@given(line_configs(), st.randoms(use_true_random=False))
def embedding_well_defined(a, rnd):
    a2 = split(a, rnd)
    assert embed_configuration(a, 5) == embed_configuration(a2, 5)
    assert embed_configuration_an(a, 5) == embed_configuration_an(a2, 5)


vec2 = st.lists(st.integers(-2, 3), min_size=2, max_size=2).filter(any)


@settings(max_examples=60, deadline=None)
@given(st.lists(vec2, min_size=1, max_size=5), st.data(), st.lists(st.integers(-3, 3), min_size=4, max_size=4))
def gl_invariance(vecs, data, g):
    a, b, c, d = g
    assume(a * d - b * c != 0)
    P = ColoredProfile(vecs)
    assume(is_admissible(P))
    ell = data.draw(st.integers(1, P.k))
    labels = data.draw(st.lists(st.integers(0, ell - 1), min_size=P.k, max_size=P.k))
    assume(len(set(labels)) == ell)
    sums = [[sum(v[i] for v, l in zip(vecs, labels) if l == j) for i in range(2)] for j in range(ell)]
    assume(all(any(q) for q in sums))
    Q = ColoredProfile(sums)
    act = lambda prof: ColoredProfile([[a * v[0] + b * v[1], c * v[0] + d * v[1]] for v in prof])
    x, y = classify_point(P, Q), classify_point(act(P), act(Q))
    assert x.branch_count == y.branch_count and sorted(x.immersion) == sorted(y.immersion)


@settings(max_examples=15, deadline=None)
@given(st.lists(st.integers(1, 6), min_size=1, max_size=3), st.randoms(use_true_random=False),
       st.fractions(min_value=Fraction(1, 5), max_value=5, max_denominator=5))
def nk_invariance(ws, rnd, c):
    base = compute_nk(ws).N
    perm = list(ws)
    rnd.shuffle(perm)
    assert compute_nk(perm).N == base
    assert compute_nk([c * w for w in ws]).N == base


def test_criterion_10_properties():
    def body():
        equivalence_relation()
        embedding_well_defined()
        gl_invariance()
        nk_invariance()
        rel = symbolic_nk_relation(2, 4).certificate
        for t, target in ((2, 5), (3, 6)):
            out = propagate_relation(rel, t)
            assert out.target == target and out.symbolic and out.verify()
        assert graded_membership([1, 2], 6).member
        return "equality, embedding, GL_2, N-index invariance; p5 and p6 propagated symbolically"

    criterion(10, 120, "property suites and propagation", body)
