"""Rational cones, regular fans and the monomial maps they induce.

Cones are generated by primitive integer rays (stored as rows).  Fans are
lists of maximal simplicial cones.  Subdivisions are built by stellar moves
only, so every intermediate object stays simplicial and auditable.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass, field
from functools import cached_property
from fractions import Fraction
from typing import Iterable, Sequence

from .intlinalg import (
    adjugate,
    det,
    elementary_divisors,
    inverse,
    primitive,
    rank,
    rational_nullspace,
    rref,
)
from .ordered_group import GroupElement, floor_ratio
from .semigroup import RelationLattice

__all__ = [
    "AuditReport",
    "Cone",
    "Fan",
    "FanDefect",
    "MonomialMap",
    "ResourceCapExceeded",
    "SubdivisionBudgetExceeded",
    "WeightVector",
    "audit_fan",
    "find_sigma_w",
    "jacobi_perron_refine",
    "monomial_map_from_cone",
    "projection_compatibility",
    "regular_subdivision",
    "weight_cone",
]

MAX_DIM = 4


class ResourceCapExceeded(RuntimeError):
    """A request is beyond the dimension or step budget of this implementation."""


class SubdivisionBudgetExceeded(ResourceCapExceeded):
    pass


class FanDefect(ValueError):
    """The fan is not compatible with the weight vector as required."""


def _dot(a: Sequence, b: Sequence):
    return sum(x * y for x, y in zip(a, b))


@dataclass(frozen=True)
class Cone:
    rays: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        rays = tuple(primitive(tuple(int(x) for x in r)) for r in self.rays)
        if not rays:
            raise ValueError("cone needs at least one ray")
        if any(not any(r) for r in rays):
            raise ValueError("zero ray")
        object.__setattr__(self, "rays", rays)

    @property
    def b(self) -> int:
        return len(self.rays[0])

    @cached_property
    def dim(self) -> int:
        return rank(self.rays)

    @property
    def is_simplicial(self) -> bool:
        return self.dim == len(self.rays)

    @cached_property
    def is_regular(self) -> bool:
        if len(self.rays) == self.b:
            return abs(det(self.rays)) == 1
        return self.is_simplicial and all(d == 1 for d in elementary_divisors(self.rays))

    @property
    def multiplicity(self) -> int:
        """Index of the ray lattice in its saturation (1 iff regular)."""
        out = 1
        for d in elementary_divisors(self.rays):
            out *= d
        return out

    def coefficients(self, v: Sequence) -> list[Fraction] | None:
        """``lam`` with ``v == sum lam_j rays[j]`` when ``v`` is in the span, else ``None``."""
        n = len(self.rays)
        # Solve lam @ A = v via the normal system on the transposed rows.
        aug = [[Fraction(self.rays[j][i]) for j in range(n)] + [Fraction(v[i])] for i in range(self.b)]
        R, piv = rref(aug)
        if n in piv:
            return None
        if len(piv) < n:
            raise ValueError("coefficients are not unique for a non-simplicial cone")
        lam = [Fraction(0)] * n
        for row, c in enumerate(piv):
            lam[c] = R[row][n]
        return lam

    def contains(self, v: Sequence) -> bool:
        lam = self.coefficients(v)
        return lam is not None and all(x >= 0 for x in lam)

    def contains_in_interior(self, v: Sequence) -> bool:
        lam = self.coefficients(v)
        return lam is not None and all(x > 0 for x in lam)

    def dual_contains(self, m: Sequence[int]) -> bool:
        return all(_dot(m, r) >= 0 for r in self.rays)

    def face(self, indices: Iterable[int]) -> "Cone":
        return Cone(tuple(self.rays[i] for i in indices))

    def is_face_of(self, other: "Cone") -> bool:
        return set(self.rays) <= set(other.rays)

    def to_json(self) -> list[list[int]]:
        return [list(r) for r in self.rays]

    def __repr__(self):
        return "Cone<" + ", ".join(str(r) for r in self.rays) + ">"


@dataclass
class Fan:
    cones: list[Cone]
    b: int
    trace: list[str] = field(default_factory=list, compare=False)

    def rays(self) -> list[tuple[int, ...]]:
        seen: dict = {}
        for c in self.cones:
            for r in c.rays:
                seen.setdefault(r, None)
        return list(seen)

    @property
    def is_regular(self) -> bool:
        return all(c.is_regular for c in self.cones)

    def to_json(self) -> list[list[list[int]]]:
        return [c.to_json() for c in self.cones]

    @classmethod
    def from_json(cls, data) -> "Fan":
        cones = [Cone(tuple(tuple(r) for r in c)) for c in data]
        return cls(cones, cones[0].b)

    def stellar(self, p: tuple[int, ...], face: Sequence[tuple[int, ...]]) -> None:
        """Star subdivision at ``p``, which lies in the relative interior of ``face``."""
        T = set(face)
        out = []
        for c in self.cones:
            if T <= set(c.rays):
                for t in c.rays:
                    if t in T:
                        out.append(Cone(tuple(p if r == t else r for r in c.rays)))
            else:
                out.append(c)
        self.cones = out
        self.trace.append(f"stellar {list(p)} in face {[list(f) for f in face]}")


class WeightVector:
    """``(g_1, ..., g_b)`` with certified signs of integer dot products."""

    def __init__(self, entries: Sequence[GroupElement]):
        self.entries = list(entries)
        if not self.entries:
            raise ValueError("empty weight vector")
        for e in self.entries:
            if e.sign() <= 0:
                raise ValueError("weight entries must be positive")
        self.context = self.entries[0].context

    def __len__(self):
        return len(self.entries)

    def dot(self, v: Sequence[int]) -> GroupElement:
        out = self.context.zero
        for k, e in zip(v, self.entries):
            if k:
                out = out + e * int(k)
        return out

    def sign(self, v: Sequence[int]) -> int:
        # Exact zero iff the coordinates cancel, i.e. v lies in the relation lattice.
        return self.dot(v).sign()

    def barycentric(self, A: Sequence[Sequence[int]]) -> tuple[list[GroupElement], int]:
        """``(mu, d)`` with ``w == sum (mu_j / d) A[j]`` for a square ray matrix ``A``."""
        d = int(det(A))
        if d == 0:
            raise ValueError("singular ray matrix")
        adj = adjugate([list(r) for r in A])
        # w = lam A  =>  lam = w adj(A) / det(A)
        n = len(A)
        mu = [self.dot([adj[i][j] for i in range(n)]) for j in range(n)]
        return mu, d

    def __repr__(self):
        return "(" + ", ".join(str(e) for e in self.entries) + ")"


def weight_cone(L: RelationLattice) -> Cone:
    """Nonnegative vectors orthogonal to ``L``."""
    b = L.b
    if L.rank != b - L.r:
        raise ValueError("relation lattice has the wrong rank")
    rays = _extreme_rays(L.basis, b)
    if not rays:
        raise ValueError("weight cone meets the quadrant only at the origin")
    if rank(rays) != L.r:
        raise ValueError("weight cone has the wrong dimension")
    return Cone(tuple(rays))


def _extreme_rays(equations: Sequence[Sequence[int]], b: int) -> list[tuple[int, ...]]:
    """Extreme rays of ``{x >= 0, E x = 0}`` by brute force over zero patterns."""
    out: list[tuple[int, ...]] = []
    for k in range(b - 1, -1, -1):
        for zeros in itertools.combinations(range(b), k):
            rows = [list(e) for e in equations] + [
                [int(i == z) for i in range(b)] for z in zeros
            ]
            ns = rational_nullspace(rows, b) if rows else rational_nullspace([], b)
            if len(ns) != 1:
                continue
            v = ns[0]
            if all(x <= 0 for x in v):
                v = tuple(-x for x in v)
            if all(x >= 0 for x in v) and v not in out:
                out.append(v)
    return sorted(out, reverse=True)


# -- constraints ---------------------------------------------------------


def _constraint_hyperplanes(constraints: Sequence, b: int) -> tuple[list[tuple], list[tuple]]:
    """Split constraints into hyperplane normals and rays that must appear.

    Plain hyperplanes come first; a cone contributes its facet hyperplanes
    and only as many span equations as the earlier hyperplanes leave open.
    """
    normals: list[tuple] = []
    rays: list[tuple] = []

    def add(n):
        n = primitive(tuple(int(x) for x in n))
        if any(n) and n not in normals and tuple(-x for x in n) not in normals:
            normals.append(n)

    cones = [c for c in constraints if isinstance(c, Cone)]
    for c in constraints:
        if not isinstance(c, Cone):
            if len(c) != b:
                raise ValueError("hyperplane normal has the wrong length")
            add(c)
    for c in cones:
        if c.b != b:
            raise ValueError("constraint cone has the wrong dimension")
        need = b - c.dim
        vanishing = [n for n in normals if all(_dot(n, r) == 0 for r in c.rays)]
        for n in rational_nullspace(c.rays, b):
            if rank(vanishing) >= need:
                break
            if rank(vanishing + [n]) > rank(vanishing):
                vanishing.append(n)
                add(n)
        for n in _facet_hyperplanes(c):
            add(n)
        if c.dim == 1:
            rays.append(c.rays[0])
    return normals, rays


def _facet_hyperplanes(c: Cone) -> list[tuple]:
    """Hyperplanes through the facets of ``c``, taken inside its span."""
    out: list[tuple] = []
    d = c.dim
    for sub in itertools.combinations(range(len(c.rays)), d - 1):
        F = [c.rays[i] for i in sub]
        if F and rank(F) != d - 1:
            continue
        for n in rational_nullspace(F, c.b) if F else []:
            vals = [_dot(n, r) for r in c.rays]
            if any(vals) and (all(v >= 0 for v in vals) or all(v <= 0 for v in vals)):
                out.append(n)
                break
    return out


def _split_edge(fan: Fan, n: tuple) -> tuple | None:
    for c in fan.cones:
        for u, v in itertools.combinations(c.rays, 2):
            nu, nv = _dot(n, u), _dot(n, v)
            if nu > 0 > nv or nu < 0 < nv:
                p = primitive(tuple(nu * y - nv * x for x, y in zip(u, v)))
                if _dot(n, p) != 0:
                    raise AssertionError("edge crossing not on the hyperplane")
                if any(x < 0 for x in p):
                    p = tuple(-x for x in p)
                return p, (u, v)
    return None


def _minimal_face(c: Cone, p: Sequence[int]) -> list[tuple]:
    lam = c.coefficients(p)
    return [r for r, x in zip(c.rays, lam) if x > 0]


def _interior_point(c: Cone) -> tuple[tuple[int, ...], list[tuple]] | None:
    """Nonzero lattice point of the half-open parallelepiped with least multiplier sum."""
    A = [list(r) for r in c.rays]
    Ainv = inverse(A)
    n = len(A)
    gens = [tuple(x - (x.numerator // x.denominator) for x in row) for row in Ainv]
    zero = tuple(Fraction(0) for _ in range(n))
    seen = {zero}
    frontier = [zero]
    while frontier:
        nxt = []
        for lam in frontier:
            for g in gens:
                s = tuple((a + b) - ((a + b).numerator // (a + b).denominator) for a, b in zip(lam, g))
                if s not in seen:
                    seen.add(s)
                    nxt.append(s)
        frontier = nxt
    seen.discard(zero)
    if not seen:
        return None
    lam = min(seen, key=lambda l: (sum(l), l))
    point = tuple(int(sum(l * A[j][i] for j, l in enumerate(lam))) for i in range(len(A[0])))
    face = [c.rays[j] for j, l in enumerate(lam) if l > 0]
    return point, face


def regular_subdivision(
    b: int,
    constraints: Sequence = (),
    max_stellar_steps: int = 10_000,
) -> Fan:
    """Regular fan with support the nonnegative quadrant, compatible with ``constraints``.

    ``constraints`` mixes ``Cone`` objects and hyperplane normals (integer
    vectors).  Steps: refine the hyperplane arrangement by stellar moves at
    edge crossings, insert constraint rays, then unimodularize each cone at
    its least parallelepiped point.
    """
    if b < 1:
        raise ValueError(f"dimension must be positive, got {b}")
    if b > MAX_DIM:
        raise ResourceCapExceeded(f"dimension {b} exceeds the cap of {MAX_DIM}")
    fan = Fan([Cone(tuple(tuple(int(i == j) for j in range(b)) for i in range(b)))], b)
    normals, rays = _constraint_hyperplanes(constraints, b)
    steps = 0

    def tick():
        nonlocal steps
        steps += 1
        if steps > max_stellar_steps:
            raise SubdivisionBudgetExceeded(f"more than {max_stellar_steps} stellar steps")

    for n in normals:
        while True:
            hit = _split_edge(fan, n)
            if hit is None:
                break
            tick()
            fan.stellar(hit[0], hit[1])
    for r in rays:
        if r in fan.rays():
            continue
        home = next((c for c in fan.cones if c.contains(r)), None)
        if home is None:
            raise ValueError(f"constraint ray {r} is outside the quadrant")
        tick()
        fan.stellar(r, _minimal_face(home, r))
    while True:
        bad = next((c for c in fan.cones if not c.is_regular), None)
        if bad is None:
            break
        p, face = _interior_point(bad)
        tick()
        fan.stellar(p, face)
    return fan


# -- audit -----------------------------------------------------------------


@dataclass
class AuditReport:
    checks: dict[str, bool] = field(default_factory=dict)
    issues: list[str] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return all(self.checks.values()) and not self.issues

    def to_json(self) -> dict:
        return {"ok": self.ok, "checks": dict(self.checks), "issues": list(self.issues)}


def _facet_normal(facet: Sequence[tuple], opposite: tuple) -> tuple:
    b = len(opposite)
    ns = rational_nullspace(list(facet), b) if facet else []
    if len(ns) != 1:
        raise ValueError("facet does not span a hyperplane")
    n = ns[0]
    if _dot(n, opposite) < 0:
        n = tuple(-x for x in n)
    return n


def audit_fan(fan: Fan, constraints: Sequence = (), samples: int = 200, seed: int = 0) -> AuditReport:
    """Regularity, facet pairing, quadrant coverage and constraint compatibility."""
    rep = AuditReport()
    b = fan.b
    rep.checks["regular"] = fan.is_regular
    if not rep.checks["regular"]:
        rep.issues += [f"non-regular cone {c}" for c in fan.cones if not c.is_regular]
    rep.checks["full_dimensional"] = all(c.dim == b and len(c.rays) == b for c in fan.cones)
    rep.checks["in_quadrant"] = all(x >= 0 for c in fan.cones for r in c.rays for x in r)

    # Each interior facet is shared by exactly two cones lying on opposite sides.
    pairing = True
    facets: dict[frozenset, list[tuple]] = {}
    for c in fan.cones:
        for i, v in enumerate(c.rays):
            F = frozenset(c.rays[:i] + c.rays[i + 1:])
            facets.setdefault(F, []).append(v)
    for F, opp in facets.items():
        on_boundary = any(all(r[k] == 0 for r in F) for k in range(b))
        if on_boundary:
            if len(opp) != 1:
                pairing = False
                rep.issues.append(f"boundary facet {sorted(F)} used {len(opp)} times")
            continue
        if len(opp) != 2:
            pairing = False
            rep.issues.append(f"interior facet {sorted(F)} used {len(opp)} times")
            continue
        n = _facet_normal(sorted(F), opp[0])
        if not _dot(n, opp[1]) < 0:
            pairing = False
            rep.issues.append(f"cones on the same side of facet {sorted(F)}")
    rep.checks["facet_pairing"] = pairing

    rng = random.Random(seed)
    covered = True
    for _ in range(samples):
        pt = [Fraction(rng.randint(0, 60), rng.randint(1, 7)) for _ in range(b)]
        if not any(pt):
            continue
        if not any(c.contains(pt) for c in fan.cones):
            covered = False
            rep.issues.append(f"sample point {[str(x) for x in pt]} not covered")
            break
    rep.checks["covers_quadrant"] = covered

    normals, rays = _constraint_hyperplanes(constraints, b)
    compat = True
    for n in normals:
        for c in fan.cones:
            vals = [_dot(n, r) for r in c.rays]
            if any(v > 0 for v in vals) and any(v < 0 for v in vals):
                compat = False
                rep.issues.append(f"cone {c} straddles hyperplane {list(n)}")
    fan_rays = set(fan.rays())
    for r in rays:
        if r not in fan_rays:
            compat = False
            rep.issues.append(f"constraint ray {list(r)} is not a ray of the fan")
    rep.checks["constraints_compatible"] = compat
    return rep


# -- weight vector location ------------------------------------------------


def find_sigma_w(fan: Fan, w: WeightVector, r: int | None = None) -> Cone:
    """The unique cone of ``fan`` containing ``w`` in its relative interior."""
    found: list[Cone] = []
    for c in fan.cones:
        if len(c.rays) != len(w):
            continue
        mu, d = w.barycentric(c.rays)
        s = 1 if d > 0 else -1
        signs = [m.sign() * s for m in mu]
        if any(x < 0 for x in signs):
            continue
        face = Cone(tuple(ray for ray, x in zip(c.rays, signs) if x > 0))
        if face not in found:
            found.append(face)
    if not found:
        raise FanDefect("weight vector lies in no cone of the fan")
    if len(found) > 1:
        raise FanDefect(f"weight vector lies in several relative interiors: {found}")
    sigma = found[0]
    if r is not None and sigma.dim != r:
        raise FanDefect(f"sigma_w has dimension {sigma.dim}, expected {r}")
    return sigma


@dataclass
class MonomialMap:
    """``u_i = prod_j y_j ** matrix[j][i]``; rows of ``matrix`` are the rays ``a^j``."""

    matrix: list[list[int]]
    inverse: list[list[int]]
    values: list[GroupElement] | None = None

    @property
    def b(self) -> int:
        return len(self.matrix)

    def positive(self) -> list[int]:
        """Indices ``j`` with ``v(y_j) > 0``."""
        if self.values is None:
            return []
        return [j for j, v in enumerate(self.values) if v.sign() > 0]

    def units(self) -> list[int]:
        if self.values is None:
            return []
        return [j for j, v in enumerate(self.values) if v.is_zero()]

    def format(self) -> list[str]:
        out = []
        for i in range(self.b):
            mono = "*".join(
                f"y{j + 1}" if self.matrix[j][i] == 1 else f"y{j + 1}^{self.matrix[j][i]}"
                for j in range(self.b)
                if self.matrix[j][i]
            )
            out.append(f"u{i + 1} = {mono or '1'}")
        return out

    def to_json(self) -> dict:
        out = {"matrix": self.matrix, "inverse": self.inverse, "equations": self.format()}
        if self.values is not None:
            out["values"] = [str(v) for v in self.values]
            out["value_coords"] = [list(v.coords) for v in self.values]
        return out


def monomial_map_from_cone(sigma: Cone, w: WeightVector | None = None) -> MonomialMap:
    if len(sigma.rays) != sigma.b or not sigma.is_regular:
        raise ValueError("monomial map needs a maximal regular cone")
    A = [list(r) for r in sigma.rays]
    inv = [[int(x) for x in row] for row in inverse(A)]
    values = None
    if w is not None:
        mu, d = w.barycentric(A)
        values = [m * d for m in mu]  # d = +-1, so this divides exactly
        for v in values:
            if v.sign() < 0:
                raise FanDefect("cone does not contain the weight vector")
    return MonomialMap(A, inv, values)


# -- Jacobi-Perron ---------------------------------------------------------


def jacobi_perron_refine(sigma0: Cone, w: WeightVector, steps: int) -> list[Cone]:
    """Nested regular cones around ``w`` by repeated Brun-type pivots.

    With ``w = sum lam_j v_j``, take the two largest multipliers
    ``lam_p >= lam_q`` and replace ``v_q`` by ``v_q + k v_p`` with
    ``k = floor(lam_p / lam_q)``.
    """
    if not sigma0.is_regular or len(sigma0.rays) != sigma0.b:
        raise ValueError("starting cone must be full-dimensional and regular")
    if len(w) != sigma0.b:
        raise ValueError("weight vector has the wrong length")
    cones = [sigma0]
    rays = [list(r) for r in sigma0.rays]
    for _ in range(steps):
        mu, d = w.barycentric(rays)
        lam = [m * d for m in mu]
        if any(x.sign() <= 0 for x in lam):
            raise FanDefect("weight vector is not interior to the current cone")
        if len(rays) == 1:
            cones.append(Cone(tuple(tuple(r) for r in rays)))
            continue
        order = sorted(range(len(rays)), key=lambda j: lam[j], reverse=True)
        p, q = order[0], order[1]
        k = floor_ratio(lam[p], lam[q])
        if (lam[p] - lam[q] * k).is_zero():
            raise FanDefect("weight vector hits a face; entries are not independent")
        rays[q] = [a + k * c for a, c in zip(rays[q], rays[p])]
        cones.append(Cone(tuple(tuple(r) for r in rays)))
    return cones


# -- projections between levels --------------------------------------------


def projection_compatibility(small: Cone, big: Cone) -> dict:
    """Check ``pi(big) <= small`` for the projection dropping trailing coordinates."""
    ba = small.b
    if big.b < ba:
        raise ValueError("projection target has more coordinates than the source")
    proj = [tuple(r[:ba]) for r in big.rays]
    report: dict = {"ok": True, "issues": []}
    e = []
    for r in proj:
        lam = small.coefficients(r) if any(r) else [Fraction(0)] * len(small.rays)
        if lam is None or any(x < 0 for x in lam):
            report["ok"] = False
            report["issues"].append(f"projected ray {list(r)} not in {small}")
            e.append(None)
            continue
        if any(x.denominator != 1 for x in lam):
            report["ok"] = False
            report["issues"].append(f"projected ray {list(r)} is not an integral combination")
        e.append([int(x) if x.denominator == 1 else str(x) for x in lam])
    image_dim = rank([list(r) for r in proj if any(r)]) if any(any(r) for r in proj) else 0
    report["image_dim"] = image_dim
    if image_dim != small.dim:
        report["ok"] = False
        report["issues"].append(f"image has dimension {image_dim}, expected {small.dim}")
    report["e"] = e
    if report["ok"] and len(e) == len(small.rays):
        report["degree"] = abs(int(det(e)))
    return report
