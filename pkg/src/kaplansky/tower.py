"""Rank-one approximation towers for a plane branch given by a Puiseux-type series.

Level ``a`` keeps the terms of ``y(x)`` whose exponent denominators divide
``D_a``; its branch equation is the product over the ``D_a`` conjugates,
expanded through power sums and Newton's identities so that only rational
arithmetic is needed.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import lcm
from typing import Sequence

from .fields import QQ
from .hahn import HahnRing, HahnSeries, substitute
from .ordered_group import INFINITY, GroupContext
from .polynomial import Poly
from .pseudo import PseudoSequence, check_pseudo_convergent
from .semigroup import Semigroup, minimal_generators

__all__ = ["TowerLevel", "TowerReport", "approximation_tower", "branch_equation", "parse_puiseux"]


def parse_puiseux(terms) -> list[tuple[Fraction, Fraction]]:
    """``[(coeff, exponent), ...]`` from strings, numbers or pairs."""
    out = []
    for t in terms:
        if isinstance(t, dict):
            c, e = t.get("coeff", 1), t["exp"]
        else:
            c, e = t
        out.append((Fraction(c), Fraction(e)))
    return out


def _poly_mul(a: dict, b: dict) -> dict:
    out: dict = {}
    for e1, c1 in a.items():
        for e2, c2 in b.items():
            out[e1 + e2] = out.get(e1 + e2, 0) + c1 * c2
    return {e: c for e, c in out.items() if c}


def branch_equation(terms: Sequence[tuple[Fraction, Fraction]], D: int) -> Poly:
    """``prod over D-th roots of unity (y - Y(zeta s))`` with ``x = s^D``, as a polynomial in ``(x, y)``."""
    Y = {}
    for c, e in terms:
        k = e * D
        if k.denominator != 1:
            raise ValueError(f"exponent {e} is not in (1/{D})Z")
        Y[int(k)] = Y.get(int(k), 0) + c
    Y = {k: c for k, c in Y.items() if c}
    # Power sums over the conjugates keep the s-exponents divisible by D.
    p = [None]
    power = {0: Fraction(1)}
    for _ in range(D):
        power = _poly_mul(power, Y)
        p.append({k // D: D * c for k, c in power.items() if k % D == 0})
    # Newton's identities: k e_k = sum_{i=1..k} (-1)^(i-1) e_{k-i} p_i
    e = [{0: Fraction(1)}]
    for k in range(1, D + 1):
        acc: dict = {}
        for i in range(1, k + 1):
            term = _poly_mul(e[k - i], p[i])
            sgn = 1 if i % 2 else -1
            for x, c in term.items():
                acc[x] = acc.get(x, 0) + sgn * c
        e.append({x: c / k for x, c in acc.items() if c})
    out = {}
    for k in range(D + 1):
        sgn = -1 if k % 2 else 1
        for x, c in e[k].items():
            out[(x, D - k)] = sgn * c
    return Poly(QQ, 2, out)


@dataclass
class TowerLevel:
    index: int
    D: int
    terms: list[tuple[Fraction, Fraction]]
    equation: Poly
    gamma: object  # value of f_a on the full series, INFINITY if it vanishes there
    semigroup: Semigroup
    xi: HahnSeries

    def to_json(self, unit: int) -> dict:
        scale = unit // self.D
        return {
            "level": self.index,
            "D": self.D,
            "y": " + ".join(f"{c}*x^({e})" if c != 1 else f"x^({e})" for c, e in self.terms),
            "equation": self.equation.format(["x", "y"]),
            "gamma": "inf" if self.gamma is INFINITY else str(self.gamma),
            "semigroup_values": self.semigroup.values(),
            "semigroup_normalized": [g.coords[0] // scale for g in self.semigroup.generators],
            "xi": self.xi.format(),
        }


@dataclass
class TowerReport:
    levels: list[TowerLevel]
    unit: int
    cutoff: object
    pc: list[dict] = field(default_factory=list)
    pseudo: PseudoSequence | None = None
    skipped: list[str] = field(default_factory=list)
    stabilizes: bool = False
    target: object = None
    passes_target: bool | None = None

    @property
    def gammas(self) -> list:
        return [lv.gamma for lv in self.levels]

    @property
    def gammas_increasing(self) -> bool:
        g = self.gammas
        return all(a < b for a, b in zip(g, g[1:]) if a is not INFINITY)

    @property
    def pc_ok(self) -> bool:
        return all(item["ok"] for item in self.pc)

    @property
    def ok(self) -> bool:
        pseudo_ok = self.pseudo is None or self.pseudo.ok
        return self.gammas_increasing and self.pc_ok and pseudo_ok and self.passes_target is not False

    def to_json(self) -> dict:
        return {
            "ok": self.ok,
            "unit": f"1/{self.unit}",
            "cutoff": str(self.cutoff),
            "levels": [lv.to_json(self.unit) for lv in self.levels],
            "gammas_increasing": self.gammas_increasing,
            "pc_inclusions": self.pc,
            "pseudo_convergence": None if self.pseudo is None else self.pseudo.to_json(),
            "skipped_levels": self.skipped,
            "finitely_generated_tower_stabilizes": self.stabilizes,
            "passes_target": self.passes_target,
        }


def approximation_tower(
    terms: Sequence,
    levels: int | None = None,
    cutoff=10,
    test_element: Poly | None = None,
    target=None,
) -> TowerReport:
    """Build the tower and run the value, (PC) and pseudo-convergence checks.

    ``cutoff`` and ``target`` are measured in units of ``v(x) = 1``.
    """
    terms = parse_puiseux(terms)
    if not terms:
        raise ValueError("empty Puiseux data")
    for (_, a), (_, b) in zip(terms, terms[1:]):
        if not a < b:
            raise ValueError("exponents must be strictly increasing")
    if terms[0][1] <= 0 or any(c == 0 for c, _ in terms):
        raise ValueError("exponents must be positive and coefficients nonzero")

    # Levels: each new denominator that enlarges the lcm opens a level.
    Ds: list[int] = []
    skipped: list[str] = []
    D = 1
    for _, e in terms:
        nd = lcm(D, e.denominator)
        if nd != D:
            D = nd
            Ds.append(D)
    if not Ds:
        Ds = [1]
    if levels is not None:
        if levels > len(Ds):
            skipped.append(f"requested {levels} levels, data supports {len(Ds)}")
        Ds = Ds[:levels]
    unit = lcm(*(e.denominator for _, e in terms))
    ctx = GroupContext.rational(Fraction(1, unit))
    ring = HahnRing(ctx, QQ)
    cut_coords = Fraction(cutoff) * unit
    cut = ctx.element(int(-(-cut_coords // 1)))

    def series(ts) -> HahnSeries:
        return ring.series({int(e * unit): c for c, e in ts}, cut)

    x = ring.monomial(unit, cut)
    y_full = series(terms)
    vx, vy = x.valuation(), y_full.valuation()

    out_levels: list[TowerLevel] = []
    gammas: list = []
    for a, Da in enumerate(Ds, start=1):
        kept = [(c, e) for c, e in terms if Da % e.denominator == 0]
        f_a = branch_equation(kept, Da)
        if not substitute(f_a, [x, series(kept)], cut).is_zero():
            raise AssertionError(f"level {a} equation does not vanish on its own truncation")
        g = substitute(f_a, [x, y_full], cut).valuation()
        values = [vx, vy] + [v for v in gammas if v is not INFINITY]
        S = minimal_generators(values)
        gammas.append(g)
        if test_element is None:
            test_element = f_a
        out_levels.append(TowerLevel(a, Da, kept, f_a, g, S, None))  # xi filled below
    for lv in out_levels:
        lv.xi = substitute(test_element, [x, series(lv.terms)], cut)

    # The last level reproduces the whole (finite) series: the tower stabilizes.
    report = TowerReport(out_levels, unit, Fraction(cut.coords[0], unit), skipped=skipped,
                         stabilizes=gammas[-1] is INFINITY)
    for a in range(len(out_levels) - 1):
        diff = (out_levels[a + 1].xi - out_levels[a].xi).valuation()
        g = out_levels[a].gamma
        ok = g is INFINITY and diff is INFINITY or (g is not INFINITY and diff >= g)
        report.pc.append({
            "level": a + 1,
            "v_difference": "inf" if diff is INFINITY else str(diff),
            "gamma": "inf" if g is INFINITY else str(g),
            "ok": bool(ok),
        })
    if len(out_levels) >= 3:
        report.pseudo = check_pseudo_convergent([lv.xi for lv in out_levels])
    if target is not None:
        t = Fraction(target)
        report.target = t
        last = gammas[-1]
        report.passes_target = last is INFINITY or Fraction(last.coords[0], unit) > t
    return report
