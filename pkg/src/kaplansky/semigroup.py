"""Finitely generated value semigroups and their binomial relation lattices."""

from __future__ import annotations

from dataclasses import dataclass, field
from math import gcd
from typing import Iterable, Sequence

from .hahn import CutoffError, HahnSeries
from .intlinalg import elementary_divisors, hnf, left_kernel, matmul, rank
from .ordered_group import GroupContext, GroupElement, floor_ratio

__all__ = [
    "RelationLattice",
    "Semigroup",
    "branch_semigroup_from_char_exponents",
    "branch_values_oracle",
    "lattice_restriction_check",
    "minimal_generators",
    "relation_lattice",
]


class Semigroup:
    """``<g_1, ..., g_b>`` inside the nonnegative part of an ordered group."""

    def __init__(self, generators: Sequence[GroupElement], context: GroupContext | None = None):
        gens = list(generators)
        if context is None:
            if not gens:
                raise ValueError("empty semigroup needs an explicit context")
            context = gens[0].context
        for g in gens:
            if g.context != context:
                raise ValueError("generator in a different group")
            if g.sign() <= 0:
                raise ValueError(f"generator {g} is not positive")
        self.context = context
        self.generators = gens
        self._memo: dict = {}

    @classmethod
    def numerical(cls, gens: Iterable[int]) -> "Semigroup":
        ctx = GroupContext.rational(1)
        return cls([ctx.element(g) for g in gens], ctx)

    @property
    def is_numerical(self) -> bool:
        return self.context.rank == 1 and not self.context.weights[0].pi_coeff

    @property
    def gcd(self) -> int | None:
        """Gcd of the generator coordinates (numerical case only)."""
        if not self.is_numerical:
            return None
        g = 0
        for x in self.generators:
            g = gcd(g, x.coords[0])
        return g

    def __len__(self):
        return len(self.generators)

    def __repr__(self):
        return "<" + ", ".join(str(g) for g in self.generators) + ">"

    def values(self) -> list[str]:
        return [str(g) for g in self.generators]

    def membership(self, gamma: GroupElement) -> tuple[bool, tuple[int, ...] | None]:
        """Decide ``gamma in S``; on success also return a witness ``k`` with ``sum k_i g_i = gamma``."""
        if gamma.sign() < 0:
            return False, None
        w = self._search(gamma.coords, len(self.generators))
        return (w is not None), w

    def __contains__(self, gamma: GroupElement) -> bool:
        return self.membership(gamma)[0]

    def _search(self, coords: tuple, n: int):
        key = (coords, n)
        if key in self._memo:
            return self._memo[key]
        ctx = self.context
        target = GroupElement(coords, ctx)
        result = None
        if target.is_zero():
            result = (0,) * n
        elif n > 0 and target.sign() > 0:
            g = self.generators[n - 1]
            # Archimedean bound: at most floor(target / g) copies of g.
            for k in range(floor_ratio(target, g), -1, -1):
                rest = target - g * k
                sub = self._search(rest.coords, n - 1)
                if sub is not None:
                    result = sub + (k,)
                    break
        self._memo[key] = result
        return result

    def enumerate(self, bound: GroupElement) -> list[GroupElement]:
        """All elements ``<= bound``, sorted."""
        seen = {self.context.zero.coords}
        frontier = [self.context.zero]
        while frontier:
            nxt = []
            for e in frontier:
                for g in self.generators:
                    s = e + g
                    if s.coords not in seen and s <= bound:
                        seen.add(s.coords)
                        nxt.append(s)
            frontier = nxt
        return sorted(GroupElement(c, self.context) for c in seen)

    def frobenius_number(self) -> int:
        """Largest non-member in coordinate units; ``-1`` if every integer is a member."""
        if not self.is_numerical or self.gcd != 1:
            raise ValueError("Frobenius number needs a numerical semigroup with gcd 1")
        smallest = min(g.coords[0] for g in self.generators)
        ctx = self.context
        run = 0
        last_gap = -1
        n = 0
        while run < smallest:
            if ctx.element(n) in self:
                run += 1
            else:
                run = 0
                last_gap = n
            n += 1
        return last_gap

    def to_json(self) -> dict:
        return {
            "group": self.context.to_json(),
            "generators": [list(g.coords) for g in self.generators],
            "values": self.values(),
        }


def minimal_generators(values: Iterable[GroupElement]) -> Semigroup:
    vals = sorted({v for v in values if not v.is_zero()})
    if not vals:
        raise ValueError("need at least one positive value")
    kept: list[GroupElement] = []
    for v in vals:
        if not kept or not Semigroup(kept).membership(v)[0]:
            kept.append(v)
    return Semigroup(kept)


@dataclass
class RelationLattice:
    """Kernel of ``Z^b -> group``, ``e_i -> g_i``; rows are ``m - n``."""

    basis: list[list[int]]
    b: int
    r: int
    generators: list[GroupElement] | None = field(default=None, repr=False)

    @property
    def rank(self) -> int:
        return len(self.basis)

    @property
    def elementary_divisors(self) -> list[int]:
        return elementary_divisors(self.basis) if self.basis else []

    @property
    def saturated(self) -> bool:
        return all(d == 1 for d in self.elementary_divisors)

    def hnf(self) -> list[list[int]]:
        if not self.basis:
            return []
        H, _ = hnf(self.basis)
        return [row for row in H if any(row)]

    def same_lattice(self, other: "RelationLattice | Sequence[Sequence[int]]") -> bool:
        rows = other.basis if isinstance(other, RelationLattice) else [list(r) for r in other]
        if not rows:
            return not self.basis
        H, _ = hnf(rows)
        return self.hnf() == [r for r in H if any(r)]

    def contains(self, v: Sequence[int]) -> bool:
        if not any(v):
            return True
        if not self.basis:
            return False
        H, _ = hnf(self.basis + [list(v)])
        return [r for r in H if any(r)] == self.hnf()

    def to_json(self) -> dict:
        return {"basis": self.hnf(), "b": self.b, "rank": self.rank,
                "elementary_divisors": self.elementary_divisors, "saturated": self.saturated}


def relation_lattice(S: Semigroup) -> RelationLattice:
    G = [list(g.coords) for g in S.generators]
    b = len(G)
    basis = left_kernel(G)
    for row in basis:
        if any(matmul([row], G)[0]):
            raise AssertionError("kernel row does not annihilate the generators")
    r = rank(G)
    if len(basis) != b - r:
        raise AssertionError("relation lattice has the wrong rank")
    L = RelationLattice(basis, b, r, list(S.generators))
    if not L.saturated:
        raise AssertionError("relation lattice is not saturated")
    return L


def lattice_restriction_check(L_small: RelationLattice, L_big: RelationLattice) -> bool:
    """``L_big`` meets ``Z^{b_small} x 0`` exactly in ``L_small``."""
    ba, bb = L_small.b, L_big.b
    if ba > bb:
        raise ValueError("small lattice has more coordinates than the big one")
    if L_small.generators is not None and L_big.generators is not None:
        if L_big.generators[:ba] != L_small.generators:
            raise ValueError("big semigroup does not extend the small one coordinatewise")
    if not L_big.basis:
        inter: list[list[int]] = []
    else:
        tail = [row[ba:] for row in L_big.basis]
        if bb == ba:
            combos = [[int(i == j) for j in range(len(tail))] for i in range(len(tail))]
        else:
            combos = left_kernel(tail)
        inter = [row[:ba] for row in matmul(combos, L_big.basis)] if combos else []
    inter = [r for r in inter if any(r)]
    probe = RelationLattice(L_small.basis, ba, L_small.r)
    return probe.same_lattice(inter) if inter else not L_small.basis


def branch_semigroup_from_char_exponents(beta: Sequence[int]) -> Semigroup:
    """Generators of the semigroup of a plane branch from its characteristic exponents.

    ``bbar_0 = beta_0``, ``bbar_1 = beta_1`` and
    ``bbar_{i+1} = n_i bbar_i + beta_{i+1} - beta_i`` with ``n_i = e_{i-1}/e_i``.
    """
    beta = [int(x) for x in beta]
    if not beta or beta[0] <= 0 or any(a >= b for a, b in zip(beta, beta[1:])):
        raise ValueError("characteristic exponents must be positive and increasing")
    e = [beta[0]]
    for x in beta[1:]:
        e.append(gcd(e[-1], x))
    if e[-1] != 1:
        raise ValueError("characteristic exponents are not coprime")
    if any(a <= b for a, b in zip(e, e[1:])):
        raise ValueError("gcd sequence must strictly decrease")
    bbar = beta[:2]
    for i in range(1, len(beta) - 1):
        n_i = e[i - 1] // e[i]
        bbar.append(n_i * bbar[i] + beta[i + 1] - beta[i])
    return Semigroup.numerical(bbar)


def branch_values_oracle(
    x_t: HahnSeries, y_t: HahnSeries, degree_bound: int, value_bound
) -> set[GroupElement]:
    """Values ``v_t(P(x_t, y_t))`` for ``deg P <= degree_bound`` that are ``<= value_bound``.

    Row-echelon form of the monomials ``x^i y^j`` by leading exponent: the
    leading exponents of an echelon basis are exactly the values of the span.
    """
    ring = x_t.ring
    x_t._check(y_t)
    if x_t.is_zero() or x_t.valuation().sign() <= 0 or (
        not y_t.is_zero() and y_t.valuation().sign() <= 0
    ):
        raise ValueError("parametrization must have positive valuations")
    bound = ring._exp(value_bound)
    f = ring.field
    xp = [ring.one(x_t.cutoff)]
    yp = [ring.one(y_t.cutoff)]
    for _ in range(degree_bound):
        xp.append(xp[-1] * x_t)
        yp.append(yp[-1] * y_t)
    echelon: dict[tuple, dict] = {}

    def lead(vec: dict):
        return min((GroupElement(e, ring.group) for e in vec), default=None)

    for d in range(degree_bound + 1):
        for j in range(d + 1):
            m = xp[d - j] * yp[j]
            if not bound < m.cutoff:
                raise CutoffError(
                    f"x^{d-j} y^{j} is exact only below t^({m.cutoff})", m.cutoff
                )
            vec = {e: c for e, c in m.terms.items() if GroupElement(e, ring.group) <= bound}
            while vec:
                le = lead(vec)
                piv = echelon.get(le.coords)
                if piv is None:
                    echelon[le.coords] = vec
                    break
                k = f.div(vec[le.coords], piv[le.coords])
                for e, c in piv.items():
                    v = f.sub(vec.get(e, f.zero), f.mul(k, c))
                    if v:
                        vec[e] = v
                    else:
                        vec.pop(e, None)
    return {GroupElement(e, ring.group) for e in echelon}
