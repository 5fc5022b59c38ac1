import random
from fractions import Fraction

import pytest
from hypothesis import assume, given, settings, strategies as st

from incistrata.strata import (
    Configuration,
    ZeroWeightWarning,
    canonicalize,
    configs_equal,
    cubic_discriminant,
    default_truncation,
    discriminant_member,
    embed_configuration,
    embed_configuration_an,
    monomial_exponents,
)

coords = st.integers(-3, 3)
wts = st.integers(1, 3)


@st.composite
def line_configs(draw, r=1, size=3):
    k = draw(st.integers(1, size))
    pts = [draw(coords) for _ in range(k)]
    ws = [[draw(wts) for _ in range(r)] for _ in range(k)]
    return Configuration.make(pts, ws)


@st.composite
def plane_configs(draw, r=2):
    k = draw(st.integers(1, 3))
    pts = [[draw(coords), draw(coords)] for _ in range(k)]
    ws = [[draw(wts) for _ in range(r)] for _ in range(k)]
    return Configuration.make(pts, ws)


def shuffled_split(c: Configuration, rnd):
    """Same configuration with one point split in two and entries reordered."""
    entries = list(c.entries)
    p, w = entries.pop(0)
    half = tuple(Fraction(v, 2) for v in w)
    entries += [(p, half), (p, half)]
    rnd.shuffle(entries)
    return Configuration(c.n, c.r, tuple(entries))


def test_canonicalize_merges_and_sorts():
    c = Configuration.make([2, 1, 2], [1, 3, 4])
    out = canonicalize(c)
    assert out.points == [(1,), (2,)]
    assert out.weights == [(3,), (5,)]


def test_zero_weight_points_are_dropped_with_warning():
    c = Configuration.make([0, 0, 1], [1, -1, 2])
    with pytest.warns(ZeroWeightWarning):
        out = canonicalize(c)
    assert out.points == [(1,)]


def test_configs_equal_checks_dimensions():
    with pytest.raises(ValueError):
        configs_equal(Configuration.make([1], [1]), Configuration.make([[1, 2]], [1]))


def test_embedding_of_double_root():
    emb = embed_configuration(Configuration.make([1, 2], [2, 1]), 3)
    # (z-1)^2 (z-2) = z^3 - 4 z^2 + 5 z - 2
    assert emb.colors == [[-4, 5, -2]]
    assert discriminant_member(emb)


def test_json_round_trip():
    c = Configuration.make([[1, Fraction(1, 2)]], [[2, 3]])
    assert Configuration.from_json(c.to_json()) == c


def test_monomials_and_truncation():
    assert monomial_exponents(2, 2) == [(1, 0), (0, 1), (2, 0), (1, 1), (0, 2)]
    assert default_truncation(3) == 7


def test_discriminant_random_double_roots_and_distinct_roots():
    rng = random.Random(7)
    for _ in range(100):
        a, b = (Fraction(rng.randint(-50, 50), rng.randint(1, 9)) for _ in range(2))
        assert discriminant_member(Configuration.make([a, b], [2, 1]))
    count = 0
    while count < 100:
        roots = {Fraction(rng.randint(-50, 50), rng.randint(1, 9)) for _ in range(3)}
        if len(roots) < 3:
            continue
        assert not discriminant_member(Configuration.make(sorted(roots), [1, 1, 1]))
        count += 1


def test_cubic_discriminant_formula():
    # z^3 - z = z (z-1) (z+1): discriminant 4
    assert cubic_discriminant(0, -1, 0) == 4


@settings(max_examples=60, deadline=None)
@given(line_configs(r=2))
def test_canonicalize_idempotent(c):
    once = canonicalize(c)
    assert canonicalize(once) == once


@settings(max_examples=60, deadline=None)
@given(line_configs(), line_configs(), line_configs(), st.randoms(use_true_random=False))
def test_equality_is_an_equivalence_relation(a, b, c, rnd):
    assert configs_equal(a, a)
    assert configs_equal(a, b) == configs_equal(b, a)
    a2 = shuffled_split(a, rnd)
    assert configs_equal(a, a2) and configs_equal(a2, a)
    if configs_equal(a, b) and configs_equal(b, c):
        assert configs_equal(a, c)
    a3 = shuffled_split(a2, rnd)
    assert configs_equal(a2, a3) and configs_equal(a, a3)


@settings(max_examples=50, deadline=None)
@given(line_configs(r=2), st.randoms(use_true_random=False))
def test_embedding_well_defined_on_line(c, rnd):
    other = shuffled_split(c, rnd)
    assert embed_configuration(c, 4) == embed_configuration(other, 4)
    assert embed_configuration_an(c, 4) == embed_configuration_an(other, 4)


@settings(max_examples=50, deadline=None)
@given(plane_configs(), st.randoms(use_true_random=False))
def test_embedding_well_defined_in_plane(c, rnd):
    other = shuffled_split(c, rnd)
    assert embed_configuration_an(c, 3) == embed_configuration_an(other, 3)


@settings(max_examples=80, deadline=None)
@given(line_configs(size=3), st.lists(coords, min_size=3, max_size=3))
def test_embedding_separates_at_truncation_7(a, pts):
    # same weight multiset (same stratum), at most three points: truncation 2^3 - 1 separates
    b = Configuration.make(pts[: len(a.entries)], [list(w) for w in a.weights])
    same = configs_equal(a, b)
    assert (embed_configuration_an(a, 7) == embed_configuration_an(b, 7)) == same
    assert (embed_configuration(a, 7) == embed_configuration(b, 7)) == same


@settings(max_examples=40, deadline=None)
@given(plane_configs(r=2), st.lists(st.integers(-3, 3), min_size=4, max_size=4))
def test_embedding_is_linear_in_weights(c, g):
    a, b, cc, d = g
    assume(a * d - b * cc != 0)
    mixed = Configuration(c.n, c.r, tuple((p, (a * w[0] + b * w[1], cc * w[0] + d * w[1])) for p, w in c.entries))
    base = embed_configuration_an(c, 3).colors
    moved = embed_configuration_an(mixed, 3).colors
    assert moved[0] == [a * u + b * v for u, v in zip(*base)]
    assert moved[1] == [cc * u + d * v for u, v in zip(*base)]
