from fractions import Fraction

import pytest

from incistrata.exact import FractionPoly, SparsePoly, mvar, xvar
from incistrata.recursion import (
    assemble_annihilator,
    base_certificate,
    charpoly,
    cross_check,
    lift_certificate,
    power_sum_recursion,
    w_sequence,
)

m1, m2 = SparsePoly.var(mvar(1)), SparsePoly.var(mvar(2))
x1, x2 = SparsePoly.var(xvar(1)), SparsePoly.var(xvar(2))


@pytest.fixture(scope="module")
def lifted():
    return lift_certificate(base_certificate())


@pytest.fixture(scope="module")
def annihilator(lifted):
    return assemble_annihilator(lifted)


def test_base_certificate():
    c = base_certificate()
    assert c.k == 1 and c.w == 1 and c.verify()


def test_lift_to_two_points(lifted):
    assert lifted.k == 2 and lifted.w == 2 and lifted.verify()
    # x1^2 = h1 p1 + h2 p2, coefficients found independently by solving the 2x2 system
    s = m1 + m2
    assert lifted.coefficient(1) == FractionPoly(m1 * x1 - m2 * x2, {m1: 1, s: 1}).reduced()
    assert lifted.coefficient(2) == FractionPoly(m2, {m1: 1, s: 1}).reduced()


def test_permuted_certificate(lifted):
    other = lifted.permuted(2)
    assert other.target == 2 and other.verify()


def test_charpoly_of_companion():
    one = FractionPoly(SparsePoly.const(1))
    zero = FractionPoly(SparsePoly())
    # companion matrix of X^2 - 3X + 2
    M = [[zero, FractionPoly(SparsePoly.const(-2))], [one, FractionPoly(SparsePoly.const(3))]]
    cp = charpoly(M)
    assert [c.num.constant_value() if c.num else 0 for c in cp] == [2, -3, 1]


def test_annihilator_degree_and_vanishing(annihilator):
    assert annihilator.degree == 8
    assert annihilator.verification == "symbolic"
    assert annihilator.evaluate_at_point(1).is_zero()
    assert annihilator.evaluate_at_point(2).is_zero()


def test_power_sum_recursion_p9(annihilator):
    rel = power_sum_recursion(annihilator)
    assert rel.target == 9 and rel.symbolic and rel.verify()
    check = cross_check(rel, [1, 2])
    assert check == {"specialised_relation_verifies": True, "independent_membership": True}
    check = cross_check(rel, [Fraction(1, 3), 5])
    assert all(check.values())


def test_w_sequence():
    assert w_sequence(4) == [1, 2, 12, 144]


def test_large_lift_needs_opt_in(lifted):
    with pytest.raises(ValueError):
        lift_certificate(lifted)


@pytest.mark.slow
def test_lift_to_three_points(lifted):
    c3 = lift_certificate(lifted, allow_large=True)
    assert c3.k == 3 and c3.w == 12 and c3.verify()
