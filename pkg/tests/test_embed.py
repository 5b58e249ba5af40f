from __future__ import annotations

from fractions import Fraction

import pytest

from kaplansky import QQ, Poly
from kaplansky.embed import (
    PresentationDefect,
    Relation,
    TorificPresentation,
    automorphism_intertwine_check,
    center_coordinates,
    kaplansky_embed_fg,
    presentation_from_parametrization,
    rho,
    strict_transform,
    verify_embedding,
)
from kaplansky.examples import pi_chart, pi_presentation
from kaplansky.ordered_group import INFINITY
from kaplansky.toric import Cone, Fan, FanDefect, WeightVector, monomial_map_from_cone

CUT = (10, 3)


@pytest.fixture
def pi_setup(Zpi):
    P = pi_presentation(2, 3, Zpi)
    cone = pi_chart(2, 3, 1, 2, 3)
    M = monomial_map_from_cone(cone, WeightVector(P.gamma))
    return P, cone, M


def test_strict_transforms(pi_setup):
    P, _, M = pi_setup
    y = Poly.variables(QQ, 3)
    binom = Poly(QQ, 3, {(3, 0, 0): 1, (0, 2, 0): -1})
    factor, G = strict_transform(binom, M)
    assert factor == (6, 3, 6)
    # y1^6 y2^3 y3^6 (1 - y2): the same ideal as y2 - 1
    assert G == -(y[1] - 1)
    factor, G = strict_transform(P.polys()[0], M)
    assert factor == (6, 3, 6)
    assert G == -(y[1] - 1) - y[0] ** 3 * y[2] ** 4


def test_center_and_rho(pi_setup):
    P, _, M = pi_setup
    c = center_coordinates(P, M)
    assert c == {1: 1}
    assert rho(M, c, QQ) == [1, 1, 1]


def test_pi_embedding_raw_series(pi_setup, ring_pi):
    P, cone, _ = pi_setup
    E = kaplansky_embed_fg(P, Fan([cone], 3), CUT)
    w = ring_pi.one(CUT) - ring_pi.monomial((0, 1), CUT)
    assert E.xi[0].agrees_with(w * ring_pi.monomial((2, 0), CUT))
    assert E.xi[1].agrees_with(w ** 2 * ring_pi.monomial((3, 0), CUT))
    assert E.residuals == [INFINITY]
    assert verify_embedding(P, E)["ok"]


def test_verify_detects_tampering(pi_setup, ring_pi):
    P, cone, _ = pi_setup
    E = kaplansky_embed_fg(P, Fan([cone], 3), CUT)
    bad = list(E.xi)
    bad[0] = bad[0] + ring_pi.monomial((2, 2), CUT)
    rep = verify_embedding(P, E, xi=bad)
    assert not rep["ok"] and not rep["checks"]["residuals"]


def test_second_chart_and_intertwiner(pi_setup, ring_pi):
    P, cone, _ = pi_setup
    E1 = kaplansky_embed_fg(P, Fan([cone], 3), CUT)
    E2 = kaplansky_embed_fg(P, Fan([pi_chart(2, 3, 3, 5, 9)], 3), CUT)
    u = [ring_pi.one(CUT) - ring_pi.monomial((0, 1), CUT), ring_pi.one(CUT)]
    assert automorphism_intertwine_check(E1.xi, E2.xi, u)["ok"]
    assert not automorphism_intertwine_check(E1.xi, E2.xi, [ring_pi.one(CUT)] * 2)["ok"]


def test_fan_missing_weight(pi_setup):
    P, _, _ = pi_setup
    with pytest.raises(FanDefect):
        kaplansky_embed_fg(P, Fan([Cone(((1, 0, 0), (0, 1, 0), (0, 0, 1)))], 3), CUT)


def test_cusp_auto_subdivision(Z, ring_z):
    P = TorificPresentation(Z, QQ, [Z.element(2), Z.element(3)],
                            [Relation((3, 0), (0, 2), QQ.one, Poly(QQ, 2))])
    E = kaplansky_embed_fg(P, None, 20)
    assert E.xi[0] == ring_z.monomial(2, 20)
    assert E.xi[1] == ring_z.monomial(3, 20)


def test_inhomogeneous_relation_rejected(Z):
    with pytest.raises(PresentationDefect):
        TorificPresentation(Z, QQ, [Z.element(2), Z.element(3)],
                            [Relation((2, 0), (0, 1), QQ.one, Poly(QQ, 2))])


def test_tail_must_be_heavier(Z):
    tail = Poly(QQ, 2, {(1, 0): 1})
    with pytest.raises(PresentationDefect):
        TorificPresentation(Z, QQ, [Z.element(2), Z.element(3)],
                            [Relation((3, 0), (0, 2), QQ.one, tail)])


def test_presentation_json_round_trip(Zpi):
    P = pi_presentation(2, 3, Zpi)
    Q = TorificPresentation.from_json(P.to_json())
    assert Q.to_json() == P.to_json()


def test_branch_presentation_and_embedding(Z, ring_z):
    cut = 31
    x = ring_z.monomial(4, cut)
    y = ring_z.series({6: 1, 7: 1}, cut)
    P = presentation_from_parametrization([x, y, y * y - x ** 3])
    assert [r.m for r in P.relations] == [(0, 2, 0), (0, 0, 2)]
    assert [r.n for r in P.relations] == [(3, 0, 0), (2, 3, 0)]
    assert [r.lam for r in P.relations] == [1, 4]
    E = kaplansky_embed_fg(P, None, cut)
    assert E.sigma_w.rays == ((4, 6, 13),)
    assert verify_embedding(P, E)["ok"]
    assert [s.valuation() for s in E.xi] == [Z.element(4), Z.element(6), Z.element(13)]
    assert E.rho == [Fraction(16), Fraction(64), Fraction(16384)]
