from __future__ import annotations

import pytest

from kaplansky import Semigroup
from kaplansky.examples import pi_chart
from kaplansky.intlinalg import reduce_basis
from kaplansky.semigroup import relation_lattice
from kaplansky.toric import (
    Cone,
    Fan,
    FanDefect,
    ResourceCapExceeded,
    SubdivisionBudgetExceeded,
    WeightVector,
    audit_fan,
    find_sigma_w,
    jacobi_perron_refine,
    monomial_map_from_cone,
    projection_compatibility,
    regular_subdivision,
    weight_cone,
)


def test_stern_brocot_fan():
    fan = regular_subdivision(2, [Cone(((2, 3),))])
    assert sorted(fan.rays()) == [(0, 1), (1, 0), (1, 1), (1, 2), (2, 3)]
    assert audit_fan(fan, [Cone(((2, 3),))]).ok


def test_dimension_cap():
    with pytest.raises(ResourceCapExceeded):
        regular_subdivision(5)


def test_stellar_budget():
    with pytest.raises(SubdivisionBudgetExceeded):
        regular_subdivision(2, [Cone(((13, 21),))], max_stellar_steps=2)


def test_weight_cone_of_4_6_13():
    L = relation_lattice(Semigroup.numerical([4, 6, 13]))
    assert weight_cone(L).rays == ((4, 6, 13),)


def test_semigroup_fan_audit():
    S = Semigroup.numerical([4, 6, 13])
    L = relation_lattice(S)
    cons = [tuple(r) for r in reduce_basis(L.basis)] + [weight_cone(L)]
    fan = regular_subdivision(3, cons)
    assert audit_fan(fan, cons).ok
    assert find_sigma_w(fan, WeightVector(S.generators), 1).rays == ((4, 6, 13),)


def test_audit_flags_bad_fan():
    fan = Fan([Cone(((1, 0), (1, 2))), Cone(((1, 2), (0, 1)))], 2)
    rep = audit_fan(fan)
    assert not rep.ok and not rep.checks["regular"]


def test_pi_chart(Zpi):
    cone = pi_chart(2, 3, 1, 2, 3)
    w = WeightVector([Zpi.element(2, 0), Zpi.element(3, 0), Zpi.element(6, 1)])
    sigma = find_sigma_w(Fan([cone], 3), w, 2)
    assert sigma.rays == ((2, 3, 9), (2, 3, 10))
    M = monomial_map_from_cone(cone, w)
    assert M.format() == ["u1 = y1^2*y2*y3^2", "u2 = y1^3*y2^2*y3^3", "u3 = y1^9*y2^3*y3^10"]
    assert [str(v) for v in M.values] == ["4-pi", "0", "-3+pi"]


def test_sigma_w_missing(Zpi):
    w = WeightVector([Zpi.element(1, 0), Zpi.element(0, 1)])
    with pytest.raises(FanDefect):
        find_sigma_w(Fan([Cone(((1, 0), (1, 1)))], 2), w)


def test_jacobi_perron_cones(Zpi):
    w = WeightVector([Zpi.element(1, 0), Zpi.element(0, 1)])
    cones = jacobi_perron_refine(Cone(((1, 3), (1, 4))), w, 4)
    assert [c.rays for c in cones] == [
        ((1, 3), (1, 4)),
        ((1, 3), (7, 22)),
        ((106, 333), (7, 22)),
        ((106, 333), (113, 355)),
        ((33102, 103993), (113, 355)),
    ]
    assert all(c.is_regular for c in cones)


def test_projection_compatibility():
    rep = projection_compatibility(Cone(((2, 3),)), Cone(((4, 6, 13),)))
    assert rep["ok"] and rep["e"] == [[2]] and rep["degree"] == 2
