from __future__ import annotations

from fractions import Fraction

import pytest

from kaplansky.tower import approximation_tower, branch_equation, parse_puiseux

TERMS = [(1, "3/2"), (1, "7/4"), (1, "15/8")]


def test_branch_equation_level_one():
    f = branch_equation(parse_puiseux(TERMS[:1]), 2)
    assert f.format(["x", "y"]) == "y^2 - x^3"


def test_branch_equation_level_two():
    f = branch_equation(parse_puiseux(TERMS[:2]), 4)
    assert f.format(["x", "y"]) == "y^4 - 2*x^3*y^2 + x^6 - 4*x^5*y - x^7"


def test_three_levels():
    rep = approximation_tower(TERMS, 3)
    assert [lv.D for lv in rep.levels] == [2, 4, 8]
    assert [str(g) for g in rep.gammas] == ["13/4", "53/8", "inf"]
    assert rep.gammas_increasing
    assert rep.levels[1].to_json(rep.unit)["semigroup_normalized"] == [4, 6, 13]
    assert rep.levels[2].to_json(rep.unit)["semigroup_normalized"] == [8, 12, 26, 53]
    assert rep.stabilizes


def test_pc_values_are_recorded():
    rep = approximation_tower(TERMS, 3)
    assert [(p["v_difference"], p["gamma"]) for p in rep.pc] == [("13/4", "13/4"), ("27/8", "53/8")]
    assert [p["ok"] for p in rep.pc] == [True, False]
    assert rep.pseudo.ok
    assert [str(g) for g in rep.pseudo.gauges] == ["13/4", "27/8"]


def test_single_term():
    rep = approximation_tower([(1, 2)])
    assert len(rep.levels) == 1
    assert rep.levels[0].equation.format(["x", "y"]) == "y - x^2"
    assert rep.ok and rep.stabilizes


def test_target():
    rep = approximation_tower(TERMS, 2, target=5)
    assert rep.passes_target
    rep = approximation_tower(TERMS, 2, target=7)
    assert rep.passes_target is False


def test_extra_levels_noted():
    rep = approximation_tower([(1, "3/2")], levels=3)
    assert rep.skipped


@pytest.mark.parametrize("bad", [[(1, 2), (1, 1)], [(0, 2)], [(1, -1)], []])
def test_bad_input(bad):
    with pytest.raises(ValueError):
        approximation_tower(bad)


def test_parse_forms():
    assert parse_puiseux([{"coeff": "2", "exp": "3/2"}, ("1", 2)]) == [
        (Fraction(2), Fraction(3, 2)), (Fraction(1), Fraction(2))]
