from __future__ import annotations

from fractions import Fraction

import pytest

from kaplansky.ordered_group import (
    INFINITY,
    ContextMismatch,
    GroupContext,
    PrecisionCeilingError,
    Weight,
    compare,
    floor_ratio,
    pi_bounds,
)


def test_addition_in_z_plus_z_pi(Zpi):
    # q*l + pi for l=2, q=3
    assert Zpi.element(6, 0) + Zpi.element(0, 1) == Zpi.element(6, 1)
    assert str(Zpi.element(6, 1)) == "6+pi"


def test_pi_minus_three_is_positive(Zpi):
    assert compare(Zpi.element(-3, 1), Zpi.zero) == 1
    assert Zpi.element(4, -1).sign() == 1
    assert Zpi.element(22, -7).sign() == 1  # 22/7 > pi
    assert Zpi.element(-22, 7).sign() == -1


def test_close_call_needs_refinement(Zpi):
    # 355/113 agrees with pi to about 2.7e-7.
    e = Zpi.element(-355, 113)
    assert e.sign() == -1
    a = Zpi.element(-103993, 33102)
    assert a.sign() == 1


def test_pi_bounds_bracket():
    lo, hi = pi_bounds(128)
    assert lo < Fraction(314159265358979323846, 10**20) + Fraction(1, 10**19)
    assert lo < hi and hi - lo < Fraction(1, 2**120)


def test_infinity_absorbs(Z):
    assert Z.element(5) + INFINITY is INFINITY
    assert Z.element(10**9) < INFINITY
    assert not Z.element(3) >= INFINITY


def test_rational_context_ordering():
    ctx = GroupContext.rational(Fraction(1, 8))
    assert ctx.element(13) < ctx.element(27)
    assert str(ctx.element(26)) == "13/4"
    assert ctx.from_rational(Fraction(53, 8)) == ctx.element(53)


def test_floor_ratio(Zpi):
    assert floor_ratio(Zpi.element(0, 1), Zpi.element(1, 0)) == 3
    assert floor_ratio(Zpi.element(10, 3), Zpi.element(2, 0)) == 9


def test_context_mismatch(Z, Zpi):
    with pytest.raises(ContextMismatch):
        Z.element(1) + Zpi.element(1, 0)


def test_dependent_weights_rejected_unless_declared():
    with pytest.raises(ValueError):
        GroupContext((Weight(Fraction(1)), Weight(Fraction(2))))
    ctx = GroupContext((Weight(Fraction(1)), Weight(Fraction(2))), independent=False)
    assert ctx.element(2, 0) != ctx.element(0, 1)
    with pytest.raises(PrecisionCeilingError):
        compare(ctx.element(2, 0), ctx.element(0, 1))


def test_nonpositive_weight_rejected():
    with pytest.raises(ValueError):
        GroupContext((Weight(Fraction(3), Fraction(-1)),))


def test_json_round_trip(Zpi):
    desc = {"rank": 2, "weights": [{"rat": "1"}, {"const": "pi"}]}
    ctx = GroupContext.from_json(desc)
    assert ctx == Zpi
    assert GroupContext.from_json(ctx.to_json()) == ctx
