"""Builtin worked examples shared by the command line and the test-suite.

Every runner returns a JSON-ready report whose ``"ok"`` entry summarises
its checks.  Reports never contain timings, so reruns are byte-identical.
"""

from __future__ import annotations

from fractions import Fraction

from .embed import (
    Relation,
    TorificPresentation,
    automorphism_intertwine_check,
    kaplansky_embed_fg,
    presentation_from_parametrization,
    strict_transform,
    verify_embedding,
)
from .fields import GF, QQ, CoeffField
from .hahn import HahnRing, HahnSeries, apply_group_automorphism, substitute
from .intlinalg import det, reduce_basis
from .literals import parse_element
from .ordered_group import DEFAULT_CEILING, GroupContext, Weight
from .polynomial import Poly
from .pseudo import (
    breadth_threshold,
    check_pseudo_convergent,
    is_limit,
    limit_difference_check,
)
from .semigroup import (
    Semigroup,
    branch_semigroup_from_char_exponents,
    branch_values_oracle,
    minimal_generators,
    relation_lattice,
)
from .toric import (
    Cone,
    Fan,
    WeightVector,
    audit_fan,
    find_sigma_w,
    jacobi_perron_refine,
    regular_subdivision,
    weight_cone,
)
from .tower import approximation_tower

__all__ = [
    "EXAMPLES",
    "artin_schreier_report",
    "pi_chart",
    "pi_context",
    "pi_presentation",
    "sign_twist",
]


# -- the pi example ----------------------------------------------------------


def pi_context(precision_ceiling: int = DEFAULT_CEILING) -> GroupContext:
    """``Z + Z*pi`` with coordinates ``(r, s) -> r + s*pi``."""
    return GroupContext((Weight(Fraction(1)), Weight(Fraction(0), Fraction(1))),
                        precision_ceiling=precision_ceiling)


def pi_presentation(l: int = 2, q: int = 3, ctx: GroupContext | None = None,
                    field_: CoeffField = QQ) -> TorificPresentation:
    """``u1^q - u2^l - u3`` with values ``(l, q, q*l + pi)``."""
    ctx = ctx or pi_context()
    gamma = [ctx.element(l, 0), ctx.element(q, 0), ctx.element(q * l, 1)]
    m = (q, 0, 0)
    n = (0, l, 0)
    tail = Poly(field_, 3, {(0, 0, 1): field_(-1)})
    return TorificPresentation(ctx, field_, gamma, [Relation(m, n, field_.one, tail)])


def pi_chart(l: int, q: int, a: int, b: int, t: int) -> Cone:
    """Rays ``(l, q, ql+3), (a, b, t), (l, q, ql+4)``; regular iff ``b*l - a*q = 1``."""
    return Cone(((l, q, q * l + 3), (a, b, t), (l, q, q * l + 4)))


def sign_twist(ring: HahnRing, cutoff) -> list[HahnSeries]:
    """Character ``1 -> 1, pi -> -1``: flips the sign of every ``t^(r + s*pi)`` with ``s`` odd."""
    return [ring.one(cutoff), ring.constant(-1, cutoff)]


def _pi_closed_forms(ring: HahnRing, cutoff, l, q, a, b):
    one = ring.one(cutoff)
    w = one + ring.monomial((0, 1), cutoff)
    xi1 = w ** a * ring.monomial((l, 0), cutoff)
    xi2 = w ** b * ring.monomial((q, 0), cutoff)
    xi3 = -(w ** (a * q)) * ring.monomial((q * l, 1), cutoff)
    return [xi1, xi2, xi3]


def pi_report(opts: dict) -> dict:
    l, q, a, b, t = 2, 3, 1, 2, 3
    ctx = pi_context(opts.get("precision_ceiling", DEFAULT_CEILING))
    P = pi_presentation(l, q, ctx)
    cutoff = parse_element(opts.get("cutoff") or "10+3pi", ctx)
    cone = pi_chart(l, q, a, b, t)
    E = kaplansky_embed_fg(P, Fan([cone], 3), cutoff)
    ring = E.ring
    twist = sign_twist(ring, cutoff)
    normalized = [apply_group_automorphism(twist, s) for s in E.xi]
    expected = _pi_closed_forms(ring, cutoff, l, q, a, b)
    binom = Poly.monomial(QQ, 3, (q, 0, 0)) - Poly.monomial(QQ, 3, (0, l, 0))
    factor, G = strict_transform(binom, E.chart)
    diff = substitute(binom, normalized, cutoff)
    ver = verify_embedding(P, E)
    checks = {
        "chart_determinant_one": det([list(r) for r in cone.rays]) == 1,
        "chart_values": [list(v.coords) for v in E.chart.values] == [[4, -1], [0, 0], [-3, 1]],
        "sigma_w": E.sigma_w.to_json() == [[2, 3, 9], [2, 3, 10]],
        "normalized_series_match": all(x.agrees_with(y) for x, y in zip(normalized, expected)),
        "binomial_image": diff.agrees_with(expected[2]),
        "verification": ver["ok"],
    }
    report = {
        "example": "pi",
        "parameters": {"l": l, "q": q, "a": a, "b": b, "t": t},
        "group": ctx.to_json(),
        "embedding": E.to_json(),
        "binomial_strict_transform": {
            "factor": list(factor),
            "transform": G.format(["y1", "y2", "y3"]),
        },
        "sign_character": {"1": "1", "pi": "-1"},
        "xi_normalized": [s.format() for s in normalized],
        "binomial_image": diff.format(),
        "verification": ver,
        "checks": checks,
    }
    report["ok"] = all(checks.values())
    return report


def _unit_equations(ring: HahnRing, cutoff, l, q, a, b, a2, b2, n) -> list[dict]:
    """The three unit identities for ``u(1) = (1+t^pi)^n``, ``u(pi) = 1``."""
    w = ring.one(cutoff) + ring.monomial((0, 1), cutoff)
    u_one = w ** n
    out = []
    cases = [
        ("l", w ** a * u_one ** l * ring.monomial((l, 0), cutoff), w ** a2 * ring.monomial((l, 0), cutoff)),
        ("q", w ** b * u_one ** q * ring.monomial((q, 0), cutoff), w ** b2 * ring.monomial((q, 0), cutoff)),
        ("ql+pi", w ** (a * q) * u_one ** (q * l) * ring.monomial((q * l, 1), cutoff),
         w ** (a2 * q) * ring.monomial((q * l, 1), cutoff)),
    ]
    for name, lhs, rhs in cases:
        out.append({"exponent": name, "lhs": lhs.format(), "rhs": rhs.format(), "ok": lhs.agrees_with(rhs)})
    return out


def pi_automorphism_report(opts: dict) -> dict:
    l, q = 2, 3
    (a, b, t), (a2, b2, t2) = (1, 2, 3), (3, 5, 9)
    n = (b2 - b) // q
    ctx = pi_context(opts.get("precision_ceiling", DEFAULT_CEILING))
    P = pi_presentation(l, q, ctx)
    cutoff = parse_element(opts.get("cutoff") or "10+3pi", ctx)
    E1 = kaplansky_embed_fg(P, Fan([pi_chart(l, q, a, b, t)], 3), cutoff)
    E2 = kaplansky_embed_fg(P, Fan([pi_chart(l, q, a2, b2, t2)], 3), cutoff)
    ring = E1.ring
    twist = sign_twist(ring, cutoff)
    n1 = [apply_group_automorphism(twist, s) for s in E1.xi]
    n2 = [apply_group_automorphism(twist, s) for s in E2.xi]
    w = ring.one(cutoff) + ring.monomial((0, 1), cutoff)
    u = [w ** n, ring.one(cutoff)]
    # The same automorphism read in the untwisted coordinates.
    u_raw = [apply_group_automorphism(twist, x) for x in u]
    normalized = automorphism_intertwine_check(n1, n2, u)
    raw = automorphism_intertwine_check(E1.xi, E2.xi, u_raw)
    control = automorphism_intertwine_check(n1, n2, [ring.one(cutoff), ring.one(cutoff)])
    units = _unit_equations(ring, cutoff, l, q, a, b, a2, b2, n)
    checks = {
        "intertwines_normalized": normalized["ok"],
        "intertwines_raw": raw["ok"],
        "identity_does_not_intertwine": not control["ok"],
        "unit_equations": all(e["ok"] for e in units),
        "second_embedding_verifies": verify_embedding(P, E2)["ok"],
    }
    report = {
        "example": "pi-automorphism",
        "cutoff": str(cutoff),
        "first": {"chart": E1.chart.format(), "xi_normalized": [s.format() for s in n1]},
        "second": {"chart": E2.chart.format(), "xi_normalized": [s.format() for s in n2]},
        "n": n,
        "u": {"1": u[0].format(), "pi": u[1].format()},
        "intertwine": normalized,
        "intertwine_raw": raw,
        "unit_equations": units,
        "checks": checks,
    }
    report["ok"] = all(checks.values())
    return report


# -- Artin-Schreier ----------------------------------------------------------


def artin_schreier_report(opts: dict) -> dict:
    p = int(opts.get("p") or 2)
    K = int(opts.get("levels") or 6)
    F = GF(p)
    ctx = GroupContext((Weight(Fraction(1)),), precision_ceiling=opts.get("precision_ceiling", DEFAULT_CEILING))
    ring = HahnRing(ctx, F)
    cutoff = parse_element(opts.get("cutoff") or 64, ctx)
    one = ring.one(cutoff)
    geom = (one - ring.monomial(p - 1, cutoff)).inv_unit()
    x = ring.monomial(p, cutoff) * geom
    y = ring.monomial(p - 1, cutoff) * geom
    # y^p - x^(p-1) (1 + y) in variables (x, y)
    f = Poly(F, 2, {(0, p): F.one, (p - 1, 0): F(-1), (p - 1, 1): F(-1)})
    residual = substitute(f, [x, y], cutoff)

    # Truncations of zeta = sum_i x^(1 - 1/p^i) with exponents in (1/p^K) Z.
    N = p ** K
    zctx = GroupContext((Weight(Fraction(1, N)),), precision_ceiling=opts.get("precision_ceiling", DEFAULT_CEILING))
    zring = HahnRing(zctx, F)
    zcut = zctx.element(3 * N)
    seq = [zring.zero(zcut)]
    for i in range(1, K + 1):
        seq.append(seq[-1] + zring.monomial(N - N // p ** i, zcut))
    ps = check_pseudo_convergent(seq)
    expected_gauges = [zctx.element(N - N // p ** i) for i in range(1, K + 1)]
    zeta = seq[-1]
    xz = zring.monomial(N, zcut)
    g = Poly(F, 2, {(0, p): F.one, (p - 1, 0): F(-1), (p - 1, 1): F(-1)})
    zres = substitute(g, [xz, zeta], zcut)
    checks = {
        "residual_zero_below_cutoff": residual.is_zero(),
        "pseudo_convergent": ps.ok,
        "gauges": ps.gauges == expected_gauges,
        "breadth_threshold": breadth_threshold(ps) == zctx.element(N - 1),
        "truncation_sum_is_limit": is_limit(zeta, ps),
        "first_term_is_not_limit": not is_limit(seq[1], ps),
        "limits_differ_by_breadth": limit_difference_check(zeta + xz, zeta, ps),
        "half_power_not_in_breadth": not limit_difference_check(
            zeta + zring.monomial(N // p, zcut), zeta, ps),
    }
    report = {
        "example": "artin-schreier",
        "field": str(F),
        "cutoff": str(cutoff),
        "x": x.truncate(cutoff).format(),
        "y": y.format(),
        "equation": f.format(["x", "y"]),
        "residual": residual.format(),
        "zeta": {
            "unit": f"1/{N}",
            "truncations": [s.format("x") for s in seq],
            "pseudo": ps.to_json(),
            "gauges_in_x": [str(Fraction(gv.coords[0], N)) for gv in ps.gauges],
            "breadth_threshold": str(Fraction(breadth_threshold(ps).coords[0], N)),
            "equation_residual_valuation": str(Fraction(zres.valuation().coords[0], N))
            if not zres.is_zero() else "inf",
        },
        "checks": checks,
    }
    report["ok"] = all(checks.values())
    return report


# -- plane branches ----------------------------------------------------------


def _embed_summary(P: TorificPresentation, cutoff, opts: dict, name: str) -> dict:
    E = kaplansky_embed_fg(P, None, cutoff, max_stellar_steps=opts.get("max_stellar_steps", 10_000))
    ver = verify_embedding(P, E)
    return {
        "example": name,
        "presentation": P.to_json(),
        "embedding": E.to_json(),
        "verification": ver,
        "ok": ver["ok"],
    }


def cusp_embed_report(opts: dict) -> dict:
    ctx = GroupContext((Weight(Fraction(1)),), precision_ceiling=opts.get("precision_ceiling", DEFAULT_CEILING))
    cutoff = parse_element(opts.get("cutoff") or 20, ctx)
    P = TorificPresentation(ctx, QQ, [ctx.element(2), ctx.element(3)],
                            [Relation((3, 0), (0, 2), QQ.one, Poly(QQ, 2))])
    return _embed_summary(P, cutoff, opts, "cusp")


def _branch_images(cutoff):
    ctx = cutoff.context
    ring = HahnRing(ctx, QQ)
    x = ring.monomial(4, cutoff)
    y = ring.series({6: 1, 7: 1}, cutoff)
    return x, y


def branch_embed_report(opts: dict) -> dict:
    ctx = GroupContext((Weight(Fraction(1)),), precision_ceiling=opts.get("precision_ceiling", DEFAULT_CEILING))
    cutoff = parse_element(opts.get("cutoff") or 31, ctx)
    x, y = _branch_images(cutoff)
    P = presentation_from_parametrization([x, y, y * y - x ** 3])
    return _embed_summary(P, cutoff, opts, "branch")


def semigroup_report(S: Semigroup, expected_lattice=None) -> dict:
    L = relation_lattice(S)
    out = {
        "semigroup": S.to_json(),
        "relation_lattice": L.to_json(),
        "reduced_basis": reduce_basis(L.basis),
    }
    if S.is_numerical and S.gcd == 1:
        out["frobenius_number"] = S.frobenius_number()
    checks = {"saturated": L.saturated}
    if expected_lattice is not None:
        checks["lattice_matches"] = L.same_lattice(expected_lattice)
    out["checks"] = checks
    out["ok"] = all(checks.values())
    return out


def branch_semigroup_report(opts: dict) -> dict:
    ctx = GroupContext.rational(1)
    cutoff = ctx.element(64)
    x, y = _branch_images(cutoff)
    degree, bound = 8, 30
    values = branch_values_oracle(x, y, degree, bound)
    oracle = minimal_generators(values)
    formula = branch_semigroup_from_char_exponents([4, 6, 7])
    rep = semigroup_report(formula, [[3, -2, 0], [5, 1, -2]])
    rep["example"] = "branch"
    rep["parametrization"] = {"x": x.format(), "y": y.format()}
    rep["characteristic_exponents"] = [4, 6, 7]
    rep["oracle"] = {"degree_bound": degree, "value_bound": bound,
                     "generators": oracle.values()}
    rep["checks"]["oracle_matches_formula"] = oracle.values() == formula.values()
    rep["checks"]["generators"] = formula.values() == ["4", "6", "13"]
    rep["ok"] = all(rep["checks"].values())
    return rep


def cusp_semigroup_report(opts: dict) -> dict:
    rep = semigroup_report(Semigroup.numerical([2, 3]), [[3, -2]])
    rep["example"] = "cusp"
    return rep


# -- fans --------------------------------------------------------------------


def fan_report(fan: Fan, constraints, w: WeightVector | None = None, r: int | None = None) -> dict:
    audit = audit_fan(fan, constraints)
    out = {
        "b": fan.b,
        "cones": fan.to_json(),
        "rays": [list(v) for v in fan.rays()],
        "stellar_steps": len(fan.trace),
        "audit": audit.to_json(),
    }
    checks = {"audit": audit.ok}
    if w is not None:
        sigma = find_sigma_w(fan, w, r)
        out["sigma_w"] = sigma.to_json()
    out["checks"] = checks
    out["ok"] = all(checks.values())
    return out


def stern_brocot_report(opts: dict) -> dict:
    ray = Cone(((2, 3),))
    fan = regular_subdivision(2, [ray], opts.get("max_stellar_steps", 10_000))
    rep = fan_report(fan, [ray])
    rep["example"] = "stern-brocot"
    rep["checks"]["ray_present"] = (2, 3) in fan.rays()
    rep["ok"] = all(rep["checks"].values())
    return rep


def semigroup_fan_report(opts: dict) -> dict:
    S = Semigroup.numerical([4, 6, 13])
    L = relation_lattice(S)
    cons = [tuple(r) for r in reduce_basis(L.basis)] + [weight_cone(L)]
    fan = regular_subdivision(3, cons, opts.get("max_stellar_steps", 10_000))
    w = WeightVector(S.generators)
    rep = fan_report(fan, cons, w, 1)
    rep["example"] = "semigroup-4-6-13"
    rep["constraints"] = [c.to_json() if isinstance(c, Cone) else list(c) for c in cons]
    rep["checks"]["sigma_w_is_ray"] = rep["sigma_w"] == [[4, 6, 13]]
    rep["ok"] = all(rep["checks"].values())
    return rep


JP_TARGETS = [(1, 0), (0, 1), (-3, 1), (4, -1), (22, -7)]


def jacobi_perron_report(opts: dict, w=None, sigma0: Cone | None = None, steps: int | None = None,
                         targets=None) -> dict:
    ctx = pi_context(opts.get("precision_ceiling", DEFAULT_CEILING))
    w = WeightVector(w or [ctx.element(1, 0), ctx.element(0, 1)])
    sigma0 = sigma0 or Cone(((1, 3), (1, 4)))
    steps = 4 if steps is None else steps
    targets = JP_TARGETS if targets is None else targets
    cones = jacobi_perron_refine(sigma0, w, steps)
    nested = all(all(prev.contains(r) for r in nxt.rays) for prev, nxt in zip(cones, cones[1:]))
    table = []
    for c in cones:
        mu, d = w.barycentric(c.rays)
        table.append({
            "cone": c.to_json(),
            "regular": c.is_regular,
            "contains_w": all(m.sign() * d > 0 for m in mu),
            "targets_in_dual": [list(m) for m in targets if c.dual_contains(m)],
        })
    first_all = next((i for i, c in enumerate(cones) if all(c.dual_contains(m) for m in targets)), None)
    checks = {
        "regular": all(row["regular"] for row in table),
        "nested": nested,
        "contain_w": all(row["contains_w"] for row in table),
        "targets_eventually_in_dual": first_all is not None
        and all(all(c.dual_contains(m) for m in targets) for c in cones[first_all:]),
    }
    rep = {
        "example": "jacobi-perron",
        "w": [str(e) for e in w.entries],
        "steps": steps,
        "targets": [list(m) for m in targets],
        "cones": table,
        "first_cone_with_all_targets": first_all,
        "checks": checks,
    }
    rep["ok"] = all(checks.values())
    return rep


# -- towers ------------------------------------------------------------------


def _tower(terms, opts, levels=None):
    return approximation_tower(terms, levels=levels, cutoff=opts.get("cutoff") or 10,
                               target=opts.get("target"))


def tower_three_term_report(opts: dict) -> dict:
    terms = [(1, "3/2"), (1, "7/4"), (1, "15/8")]
    rep = _tower(terms, opts, 3)
    out = rep.to_json()
    # Negative control: the same truncations in reverse order.  (Swapping
    # only the last two entries of a length-three sequence keeps it
    # pseudo-convergent, so that would not be a control.)
    control = check_pseudo_convergent([lv.xi for lv in reversed(rep.levels)])
    out["negative_control"] = control.to_json()
    out["example"] = "three-term"
    out["ok"] = rep.ok and not control.ok
    return out


def tower_one_term_report(opts: dict) -> dict:
    rep = _tower([(1, 2)], opts)
    out = rep.to_json()
    out["example"] = "one-term"
    return out


# name -> runner, per subcommand
EXAMPLES = {
    "embed": {
        "pi": pi_report,
        "artin-schreier": artin_schreier_report,
        "cusp": cusp_embed_report,
        "branch": branch_embed_report,
    },
    "semigroup": {
        "branch": branch_semigroup_report,
        "cusp": cusp_semigroup_report,
    },
    "fan": {
        "stern-brocot": stern_brocot_report,
        "semigroup-4-6-13": semigroup_fan_report,
        "jacobi-perron": jacobi_perron_report,
    },
    "tower": {
        "three-term": tower_three_term_report,
        "one-term": tower_one_term_report,
    },
    "verify": {
        "pi": pi_automorphism_report,
    },
}
