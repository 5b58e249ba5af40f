"""Embedded Kaplansky embeddings for presentations with a finitely generated semigroup.

Pipeline: locate ``sigma_w`` in a regular fan, read off the monomial chart,
take strict transforms of the relations, solve the torus system for the
center, then lift the unit coordinates ``y_j = c_j + z_j`` by Newton
iteration in the Hahn ring.  The images ``xi_i(t)`` are finally checked by
plugging them back into every relation.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from typing import Sequence

from .fields import CoeffField
from .hahn import CutoffError, HahnRing, HahnSeries, apply_group_automorphism, substitute
from .intlinalg import primitive, rank, reduce_basis, snf
from .ordered_group import INFINITY, GroupContext, GroupElement
from .polynomial import Poly
from .semigroup import Semigroup, relation_lattice
from .toric import (
    Cone,
    Fan,
    FanDefect,
    MonomialMap,
    WeightVector,
    find_sigma_w,
    monomial_map_from_cone,
    regular_subdivision,
    weight_cone,
)

__all__ = [
    "EmbeddingResult",
    "PresentationDefect",
    "Relation",
    "TorificPresentation",
    "automorphism_intertwine_check",
    "center_coordinates",
    "kaplansky_embed_fg",
    "presentation_from_parametrization",
    "rho",
    "strict_transform",
    "torific_constraints",
    "verify_embedding",
]


class PresentationDefect(ValueError):
    pass


@dataclass
class Relation:
    """``F = u^m - lam * u^n + tail`` with every tail monomial of larger weight."""

    m: tuple[int, ...]
    n: tuple[int, ...]
    lam: object
    tail: Poly

    def poly(self) -> Poly:
        f, b = self.tail.field, self.tail.nvars
        return (
            Poly.monomial(f, b, self.m)
            - Poly.monomial(f, b, self.n, self.lam)
            + self.tail
        )

    def to_json(self) -> dict:
        return {
            "m": list(self.m),
            "n": list(self.n),
            "lambda": str(self.lam),
            "tail": self.tail.to_json(),
        }


@dataclass
class TorificPresentation:
    group: GroupContext
    field: CoeffField
    gamma: list[GroupElement]
    relations: list[Relation]

    def __post_init__(self):
        b = self.b
        for g in self.gamma:
            if g.context != self.group or g.sign() <= 0:
                raise PresentationDefect(f"bad generator value {g}")
        for rel in self.relations:
            if len(rel.m) != b or len(rel.n) != b or rel.tail.nvars != b:
                raise PresentationDefect("relation has the wrong number of variables")
            if not rel.lam:
                raise PresentationDefect("binomial coefficient lambda must be nonzero")
            wm, wn = self.weight(rel.m), self.weight(rel.n)
            if wm != wn:
                raise PresentationDefect(f"binomial is not homogeneous: {wm} vs {wn}")
            for k in rel.tail.terms:
                if not self.weight(k) > wm:
                    raise PresentationDefect(f"tail monomial {k} does not have larger weight")

    @property
    def b(self) -> int:
        return len(self.gamma)

    @property
    def r(self) -> int:
        return rank([list(g.coords) for g in self.gamma])

    def weight(self, k: Sequence[int]) -> GroupElement:
        out = self.group.zero
        for e, g in zip(k, self.gamma):
            if e:
                out = out + g * int(e)
        return out

    def polys(self) -> list[Poly]:
        return [rel.poly() for rel in self.relations]

    def semigroup(self) -> Semigroup:
        return Semigroup(self.gamma, self.group)

    def to_json(self) -> dict:
        return {
            "group": self.group.to_json(),
            "field": self.field.to_json(),
            "gamma": [list(g.coords) for g in self.gamma],
            "relations": [r.to_json() for r in self.relations],
        }

    @classmethod
    def from_json(cls, data: dict, precision_ceiling: int | None = None) -> "TorificPresentation":
        group = (
            GroupContext.from_json(data["group"], precision_ceiling)
            if precision_ceiling
            else GroupContext.from_json(data["group"])
        )
        field_ = CoeffField.parse(data.get("field"))
        gamma = [group.element(*g) for g in data["gamma"]]
        b = len(gamma)
        rels = []
        for r in data["relations"]:
            tail = Poly.from_json(field_, b, r.get("tail", []))
            rels.append(Relation(tuple(r["m"]), tuple(r["n"]), field_(r.get("lambda", "1")), tail))
        return cls(group, field_, gamma, rels)


# -- chart-level operations --------------------------------------------------


def strict_transform(F: Poly, M: MonomialMap) -> tuple[tuple[int, ...], Poly]:
    """``F(u(y)) = y^factor * G(y)`` with ``G`` free of monomial factors."""
    if F.is_zero():
        raise ValueError("strict transform of zero")
    total = F.map_exponents(M.matrix, M.b)
    factor = total.monomial_gcd()
    return factor, total.divide_monomial(factor)


def _binomial_exponent(rel: Relation, M: MonomialMap) -> list[int]:
    """Exponent of the unit coordinates in ``u^m / u^n`` after the chart."""
    diff = [a - b for a, b in zip(rel.m, rel.n)]
    return [sum(M.matrix[j][i] * diff[i] for i in range(M.b)) for j in range(M.b)]


def center_coordinates(P: TorificPresentation, M: MonomialMap) -> dict[int, object]:
    """Solve ``c^(A_Z (m - n)) = lam`` for the unit coordinates via Smith form."""
    if M.values is None:
        raise ValueError("monomial map carries no y-values")
    f = P.field
    Z = M.units()
    pos = M.positive()
    for rel in P.relations:
        d = _binomial_exponent(rel, M)
        if any(d[j] for j in pos):
            raise FanDefect("binomial is not monomial-free along sigma_w")
    if not Z:
        return {}
    D = [[_binomial_exponent(rel, M)[j] for j in Z] for rel in P.relations]
    lams = [rel.lam for rel in P.relations]
    if not D:
        raise PresentationDefect("no relations to fix the center")
    S, U, V = snf(D)
    k = len(Z)
    mus = []
    for i in range(len(D)):
        mu = f.one
        for l, e in enumerate(U[i]):
            if e:
                mu = f.mul(mu, f.pow(lams[l], e) if e > 0 else f.inv(f.pow(lams[l], -e)))
        mus.append(mu)
    diag = [S[i][i] if i < len(S) and i < k else 0 for i in range(len(D))]
    for i in range(len(D)):
        if diag[i] == 0 and mus[i] != f.one:
            raise PresentationDefect("torus system is inconsistent")
    if sum(1 for x in diag if x) < k:
        raise PresentationDefect("center is not isolated: relations do not span the lattice")
    d = [f.root(mus[i], diag[i]) for i in range(k)]
    center = {}
    for idx, j in enumerate(Z):
        c = f.one
        for l in range(k):
            e = V[idx][l]
            if e:
                c = f.mul(c, f.pow(d[l], e) if e > 0 else f.inv(f.pow(d[l], -e)))
        center[j] = c
    for rel in P.relations:
        dexp = _binomial_exponent(rel, M)
        lhs = f.one
        for j in Z:
            e = dexp[j]
            if e:
                lhs = f.mul(lhs, f.pow(center[j], e) if e > 0 else f.inv(f.pow(center[j], -e)))
        if lhs != rel.lam:
            raise AssertionError("center does not solve the torus system")
    return center


def rho(M: MonomialMap, center: dict[int, object], field_: CoeffField) -> list:
    out = []
    for i in range(M.b):
        v = field_.one
        for j, c in center.items():
            if M.matrix[j][i]:
                v = field_.mul(v, field_.pow(c, M.matrix[j][i]))
        out.append(v)
    return out


def _field_inverse(f: CoeffField, A: list[list]) -> list[list]:
    n = len(A)
    aug = [list(row) + [f.one if i == j else f.zero for j in range(n)] for i, row in enumerate(A)]
    for c in range(n):
        p = next((i for i in range(c, n) if aug[i][c]), None)
        if p is None:
            raise ZeroDivisionError("singular matrix over the coefficient field")
        aug[c], aug[p] = aug[p], aug[c]
        inv = f.inv(aug[c][c])
        aug[c] = [f.mul(inv, x) for x in aug[c]]
        for i in range(n):
            if i != c and aug[i][c]:
                k = aug[i][c]
                aug[i] = [f.sub(x, f.mul(k, y)) for x, y in zip(aug[i], aug[c])]
    return [row[n:] for row in aug]


def _field_rank(f: CoeffField, rows: list[list]) -> int:
    A = [list(r) for r in rows]
    rk = 0
    ncols = len(A[0]) if A else 0
    for c in range(ncols):
        p = next((i for i in range(rk, len(A)) if A[i][c]), None)
        if p is None:
            continue
        A[rk], A[p] = A[p], A[rk]
        inv = f.inv(A[rk][c])
        for i in range(len(A)):
            if i != rk and A[i][c]:
                k = f.mul(A[i][c], inv)
                A[i] = [f.sub(x, f.mul(k, y)) for x, y in zip(A[i], A[rk])]
        rk += 1
    return rk


# -- the embedding -----------------------------------------------------------


@dataclass
class EmbeddingResult:
    presentation: TorificPresentation
    ring: HahnRing
    cutoff: GroupElement
    sigma_w: Cone
    cone: Cone
    chart: MonomialMap
    center: dict
    rho: list
    y: list[HahnSeries]
    xi: list[HahnSeries]
    residuals: list
    newton_steps: int = 0
    strict_transforms: list = field(default_factory=list)

    def to_json(self) -> dict:
        f = self.presentation.field
        return {
            "cutoff": str(self.cutoff),
            "cutoff_coords": list(self.cutoff.coords),
            "sigma_w": self.sigma_w.to_json(),
            "cone": self.cone.to_json(),
            "chart": self.chart.to_json(),
            "strict_transforms": [
                {"factor": list(fac), "transform": g.format([f"y{j + 1}" for j in range(g.nvars)])}
                for fac, g in self.strict_transforms
            ],
            "center": {f"c{j + 1}": f.to_str(c) for j, c in sorted(self.center.items())},
            "rho": [f.to_str(x) for x in self.rho],
            "y": [s.format() for s in self.y],
            "xi": [s.format() for s in self.xi],
            "xi_terms": [s.to_json() for s in self.xi],
            "residual_valuations": [
                "inf" if v is INFINITY else str(v) for v in self.residuals
            ],
            "newton_steps": self.newton_steps,
        }


def torific_constraints(P: TorificPresentation) -> list:
    """Hyperplanes and cones a torific uniformizer must respect."""
    L = relation_lattice(P.semigroup())
    cons: list = [tuple(r) for r in reduce_basis(L.basis)]
    for rel in P.relations:
        for k in rel.tail.terms:
            n = primitive(tuple(a - b for a, b in zip(k, rel.m)))
            if any(n):
                cons.append(n)
    cons.append(weight_cone(L))
    return cons


def _choose_cone(fan: Fan, sigma_w: Cone) -> Cone:
    for c in fan.cones:
        if sigma_w.is_face_of(c):
            return c
    raise FanDefect("no maximal cone contains sigma_w")


def kaplansky_embed_fg(
    P: TorificPresentation,
    fan: Fan | None,
    cutoff,
    max_stellar_steps: int = 10_000,
    max_newton_steps: int = 10_000,
) -> EmbeddingResult:
    ring = HahnRing(P.group, P.field)
    cutoff = ring._exp(cutoff)
    if fan is None:
        fan = regular_subdivision(P.b, torific_constraints(P), max_stellar_steps)
    w = WeightVector(P.gamma)
    sigma_w = find_sigma_w(fan, w, P.r)
    cone = _choose_cone(fan, sigma_w)
    M = monomial_map_from_cone(cone, w)
    for i, g in enumerate(P.gamma):
        s = P.group.zero
        for j, v in enumerate(M.values):
            s = s + v * M.matrix[j][i]
        if s != g:
            raise AssertionError("chart values do not reproduce the generator values")
    f = P.field
    pos, Z = M.positive(), M.units()
    transforms = [strict_transform(F, M) for F in P.polys()]
    center = center_coordinates(P, M)
    for _, G in transforms:
        at_center = G.partial_evaluate({j: 0 for j in pos})
        if at_center.partial_evaluate(center).evaluate([0] * P.b) != f.zero:
            raise FanDefect("strict transform does not vanish at the center; fan is not compatible")
    rhos = rho(M, center, f)

    # Pick |Z| equations whose Jacobian at the center is invertible.
    point = [center.get(j, f.zero) for j in range(P.b)]
    chosen: list[int] = []
    rows: list[list] = []
    for idx, (_, G) in enumerate(transforms):
        row = [G.derivative(j).evaluate(point) for j in Z]
        if _field_rank(f, rows + [row]) > len(rows):
            rows.append(row)
            chosen.append(idx)
        if len(rows) == len(Z):
            break
    if len(rows) < len(Z):
        raise PresentationDefect("strict transforms are singular at the center")
    Jinv = _field_inverse(f, rows) if rows else []

    mono = {j: ring.monomial(M.values[j], cutoff) for j in pos}
    z = {j: ring.zero(cutoff) for j in Z}

    def images():
        return [mono[j] if j in mono else z[j] + center[j] for j in range(P.b)]

    steps = 0
    last = None
    while Z:
        Ys = images()
        R = [substitute(transforms[idx][1], Ys, cutoff) for idx in chosen]
        if all(r.is_zero() for r in R):
            break
        delta = []
        for a in range(len(Z)):
            acc = ring.zero(cutoff)
            for l in range(len(Z)):
                if Jinv[a][l]:
                    acc = acc + R[l].scale(Jinv[a][l])
            delta.append(acc)
        v = min((d.valuation() for d in delta), default=INFINITY)
        if last is not None and not v > last:
            raise PresentationDefect(f"Newton update stalled at valuation {v}")
        last = v
        for a, j in enumerate(Z):
            z[j] = z[j] - delta[a]
        steps += 1
        if steps > max_newton_steps:
            raise PresentationDefect("Newton iteration did not converge")
    Ys = images()
    xi = []
    for i in range(P.b):
        s = ring.one(cutoff)
        for j in range(P.b):
            if M.matrix[j][i]:
                s = s * Ys[j] ** M.matrix[j][i]
        xi.append(s)
    residuals = [substitute(F, xi, cutoff).valuation() for F in P.polys()]
    return EmbeddingResult(
        P, ring, cutoff, sigma_w, cone, M, center, rhos, Ys, xi, residuals, steps, transforms
    )


# -- verification ------------------------------------------------------------


def verify_embedding(
    P: TorificPresentation,
    E: EmbeddingResult,
    samples: int = 50,
    seed: int = 0,
    xi: Sequence[HahnSeries] | None = None,
) -> dict:
    """Residuals, initial forms and multiplicativity of the graded map."""
    xi = list(E.xi if xi is None else xi)
    f = P.field
    checks: dict[str, bool] = {}
    issues: list[str] = []
    res_ok = True
    for l, F in enumerate(P.polys()):
        v = substitute(F, xi, E.cutoff).valuation()
        if v is not INFINITY:
            res_ok = False
            issues.append(f"relation {l} has residual of valuation {v} below the cutoff")
    checks["residuals"] = res_ok
    init_ok = True
    for i, s in enumerate(xi):
        if s.is_zero():
            init_ok = False
            issues.append(f"xi_{i + 1} vanishes below the cutoff")
            continue
        c, e = s.initial_form()
        if c != E.rho[i] or e != P.gamma[i]:
            init_ok = False
            issues.append(f"initial form of xi_{i + 1} is ({c}, {e}), expected ({E.rho[i]}, {P.gamma[i]})")
    checks["initial_forms"] = init_ok
    bin_ok = True
    for rel in P.relations:
        lhs = f.one
        rhs = rel.lam
        for i in range(P.b):
            lhs = f.mul(lhs, f.pow(E.rho[i], rel.m[i]))
            rhs = f.mul(rhs, f.pow(E.rho[i], rel.n[i]))
        if lhs != rhs:
            bin_ok = False
            issues.append(f"rho^m != lambda rho^n for m={rel.m}")
    checks["rho_binomials"] = bin_ok
    rng = random.Random(seed)
    mult_ok = True
    for _ in range(samples):
        k = [rng.randint(0, 2) for _ in range(P.b)]
        if not any(k):
            continue
        weight = P.weight(k)
        if not weight < E.cutoff:
            continue
        prod = E.ring.one(E.cutoff)
        coeff = f.one
        for i, e in enumerate(k):
            if e:
                prod = prod * xi[i] ** e
                coeff = f.mul(coeff, f.pow(E.rho[i], e))
        if prod.is_zero() or prod.initial_form() != (coeff, weight):
            mult_ok = False
            issues.append(f"initial form of xi^{k} is not rho^k t^(w(k))")
            break
    checks["graded_multiplicativity"] = mult_ok
    return {"ok": all(checks.values()), "checks": checks, "issues": issues}


def _exponent_reachable(e: GroupElement, sources: list[GroupElement], steps: Semigroup | None) -> bool:
    for s in sources:
        d = e - s
        if d.is_zero():
            return True
        if steps is not None and d.sign() > 0 and d in steps:
            return True
    return False


def automorphism_intertwine_check(
    xi1: Sequence[HahnSeries], xi2: Sequence[HahnSeries], units: Sequence[HahnSeries]
) -> dict:
    """``u`` maps every ``xi1[i]`` to ``xi2[i]`` below the common cutoff."""
    issues: list[str] = []
    ok = True
    unit_support = sorted(
        {e for u in units for e in u.exponents() if not e.is_zero()}
    )
    steps = Semigroup(unit_support) if unit_support else None
    for i, (a, b) in enumerate(zip(xi1, xi2)):
        img = apply_group_automorphism(units, a)
        if not img.agrees_with(b):
            ok = False
            diff = (img - b).truncate(min(img.cutoff, b.cutoff))
            issues.append(f"u(xi1_{i + 1}) differs from xi2_{i + 1} at t^({diff.valuation()})")
        src = a.exponents()
        for e in img.exponents():
            if not _exponent_reachable(e, src, steps):
                ok = False
                issues.append(f"exponent {e} of u(xi1_{i + 1}) escapes the unit semigroup")
                break
    if len(xi1) != len(xi2):
        ok = False
        issues.append("embeddings have different lengths")
    return {"ok": ok, "issues": issues}


# -- presentations from parametrizations -------------------------------------


def _lattice_binomials(S: Semigroup, L, max_multiple: int = 64) -> list[tuple[tuple, tuple]]:
    """Pairs ``(m, n)`` spanning the relation lattice.

    Prefers ``k_i e_i`` against a witness of ``k_i g_i`` in the semigroup of
    the earlier generators (smallest ``k_i``); falls back to a reduced basis
    when those rows do not span the whole lattice.
    """
    gens = S.generators
    b = len(gens)
    pairs = []
    for i in range(1, b):
        prev = gens[:i]
        if rank([list(g.coords) for g in prev + [gens[i]]]) > rank([list(g.coords) for g in prev]):
            continue
        sub = Semigroup(prev, S.context)
        for k in range(1, max_multiple + 1):
            ok, wit = sub.membership(gens[i] * k)
            if ok:
                m = tuple(k if j == i else 0 for j in range(b))
                n = tuple(wit) + (0,) * (b - i)
                pairs.append((m, n))
                break
    rows = [[a - c for a, c in zip(m, n)] for m, n in pairs]
    if len(rows) == L.rank and L.same_lattice(rows or []):
        return pairs
    return [
        (tuple(max(x, 0) for x in row), tuple(max(-x, 0) for x in row))
        for row in reduce_basis(L.basis)
    ]


def presentation_from_parametrization(
    images: Sequence[HahnSeries],
    field_: CoeffField | None = None,
    max_tail_terms: int = 1000,
) -> TorificPresentation:
    """Relations with tails satisfied by given images, exact below their cutoff.

    One relation per reduced relation-lattice row ``m - n``.  The binomial
    coefficient is ``rho^m / rho^n``; tails are grown by cancelling the
    leading residual term with a monomial of the same value.
    """
    images = list(images)
    ring = images[0].ring
    f = field_ or ring.field
    gamma = [s.valuation() for s in images]
    rhos = [s.initial_form()[0] for s in images]
    S = Semigroup(gamma, ring.group)
    L = relation_lattice(S)
    cutoff = images[0].cutoff
    for s in images[1:]:
        cutoff = min(cutoff, s.cutoff)
    b = len(images)
    rels = []
    for m, n in _lattice_binomials(S, L):
        num, den = f.one, f.one
        for i in range(b):
            num = f.mul(num, f.pow(rhos[i], m[i]))
            den = f.mul(den, f.pow(rhos[i], n[i]))
        lam = f.div(num, den)
        tail = Poly(f, b)
        for _ in range(max_tail_terms):
            F = Poly.monomial(f, b, m) - Poly.monomial(f, b, n, lam) + tail
            res = substitute(F, images, cutoff)
            if res.is_zero():
                break
            c, delta = res.initial_form()
            ok, k = S.membership(delta)
            if not ok:
                raise PresentationDefect(f"residual value {delta} is not in the semigroup")
            coeff = f.one
            for i in range(b):
                coeff = f.mul(coeff, f.pow(rhos[i], k[i]))
            tail = tail - Poly.monomial(f, b, k, f.div(c, coeff))
        else:
            raise CutoffError("tail did not terminate below the cutoff", cutoff)
        rels.append(Relation(m, n, lam, tail))
    return TorificPresentation(ring.group, f, gamma, rels)
