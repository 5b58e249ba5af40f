"""Truncated Hahn series ``k[[t^G]]`` for an ordered group ``G`` of finite rank.

A series is a finite map from nonnegative exponents to nonzero coefficients
together with an exclusive ``cutoff``: every coefficient of an exponent below
the cutoff is exact, nothing is claimed above it.  Arithmetic always returns
the tightest cutoff for which that guarantee still holds.
"""

from __future__ import annotations

from functools import cmp_to_key
from typing import Iterable, Mapping, Sequence

from .fields import CoeffField
from .ordered_group import (
    INFINITY,
    ContextMismatch,
    GroupContext,
    GroupElement,
    compare,
)
from .polynomial import Poly

__all__ = [
    "CutoffError",
    "HahnRing",
    "HahnSeries",
    "NotAUnit",
    "apply_group_automorphism",
    "substitute",
]


class CutoffError(ArithmeticError):
    """Requested precision exceeds what the inputs determine."""

    def __init__(self, message: str, attainable=None):
        super().__init__(message)
        self.attainable = attainable


class NotAUnit(ArithmeticError):
    pass


def _min(a, b):
    if a is INFINITY:
        return b
    if b is INFINITY:
        return a
    return a if a <= b else b


class HahnRing:
    """Coefficient field plus exponent group; a factory for series."""

    def __init__(self, group: GroupContext, field: CoeffField):
        self.group = group
        self.field = field

    def __eq__(self, other):
        return (
            isinstance(other, HahnRing)
            and self.group == other.group
            and self.field == other.field
        )

    def __hash__(self):
        return hash((self.group, self.field))

    def __repr__(self):
        return f"HahnRing({self.group.to_json()}, {self.field})"

    def _exp(self, e) -> GroupElement:
        if isinstance(e, GroupElement):
            return e
        if isinstance(e, int):
            e = (e,)
        return self.group.element(*e)

    def series(self, terms: Mapping | Iterable, cutoff) -> "HahnSeries":
        items = terms.items() if isinstance(terms, Mapping) else terms
        acc: dict[tuple, object] = {}
        f = self.field
        for e, c in items:
            e = self._exp(e).coords
            c = f(c)
            acc[e] = f.add(acc[e], c) if e in acc else c
        return HahnSeries(self, acc, self._exp(cutoff))

    def monomial(self, exponent, cutoff, coeff=1) -> "HahnSeries":
        return self.series({self._exp(exponent): coeff}, cutoff)

    def constant(self, c, cutoff) -> "HahnSeries":
        return self.series({self.group.zero: c}, cutoff)

    def one(self, cutoff) -> "HahnSeries":
        return self.constant(1, cutoff)

    def zero(self, cutoff) -> "HahnSeries":
        return HahnSeries(self, {}, self._exp(cutoff))

    def from_json(self, data: dict) -> "HahnSeries":
        return self.series(
            [(tuple(e), self.field(c)) for c, e in data["terms"]], tuple(data["cutoff"])
        )


class HahnSeries:
    __slots__ = ("ring", "terms", "cutoff", "_order")

    def __init__(self, ring: HahnRing, terms: dict, cutoff: GroupElement):
        if cutoff.context != ring.group:
            raise ContextMismatch("cutoff lives in another group")
        self.ring = ring
        self.cutoff = cutoff
        g = ring.group
        kept = {}
        for e, c in terms.items():
            if not c:
                continue
            ge = GroupElement(e, g)
            if ge.sign() < 0:
                raise ValueError(f"negative exponent {ge} in Hahn series")
            if ge < cutoff:
                kept[e] = c
        self.terms = kept
        self._order = None

    # -- structure -------------------------------------------------------
    def _sorted(self) -> list[tuple]:
        if self._order is None:
            g = self.ring.group
            key = cmp_to_key(lambda a, b: compare(GroupElement(a, g), GroupElement(b, g)))
            self._order = sorted(self.terms, key=key)
        return self._order

    def items(self) -> list[tuple[GroupElement, object]]:
        g = self.ring.group
        return [(GroupElement(e, g), self.terms[e]) for e in self._sorted()]

    def exponents(self) -> list[GroupElement]:
        g = self.ring.group
        return [GroupElement(e, g) for e in self._sorted()]

    def coefficient(self, exponent) -> object:
        e = self.ring._exp(exponent)
        if not e < self.cutoff:
            raise CutoffError(f"coefficient of t^{e} lies beyond the cutoff", self.cutoff)
        return self.terms.get(e.coords, self.ring.field.zero)

    def is_zero(self) -> bool:
        return not self.terms

    def valuation(self):
        """Smallest exponent, or ``INFINITY`` when nothing survives below the cutoff."""
        if not self.terms:
            return INFINITY
        return GroupElement(self._sorted()[0], self.ring.group)

    def initial_form(self) -> tuple[object, GroupElement]:
        if not self.terms:
            raise ValueError("zero series has no initial form")
        e = self._sorted()[0]
        return self.terms[e], GroupElement(e, self.ring.group)

    def truncate(self, cutoff) -> "HahnSeries":
        cutoff = _min(self.ring._exp(cutoff), self.cutoff)
        return HahnSeries(self.ring, self.terms, cutoff)

    def agrees_with(self, other: "HahnSeries", cutoff=None) -> bool:
        """Equality of all coefficients below the common (or given) cutoff."""
        self._check(other)
        c = _min(self.cutoff, other.cutoff)
        if cutoff is not None:
            cutoff = self.ring._exp(cutoff)
            if c < cutoff:
                raise CutoffError("comparison cutoff exceeds known precision", c)
            c = cutoff
        return (self - other).truncate(c).is_zero()

    def _check(self, other: "HahnSeries") -> None:
        if self.ring != other.ring:
            raise ContextMismatch("series over different rings")

    # -- arithmetic ------------------------------------------------------
    def _coerce(self, other) -> "HahnSeries":
        if isinstance(other, HahnSeries):
            self._check(other)
            return other
        return self.ring.constant(other, self.cutoff)

    def __add__(self, other):
        other = self._coerce(other)
        f = self.ring.field
        out = dict(self.terms)
        for e, c in other.terms.items():
            out[e] = f.add(out[e], c) if e in out else c
        return HahnSeries(self.ring, out, _min(self.cutoff, other.cutoff))

    __radd__ = __add__

    def __neg__(self):
        f = self.ring.field
        return HahnSeries(self.ring, {e: f.neg(c) for e, c in self.terms.items()}, self.cutoff)

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def scale(self, c) -> "HahnSeries":
        f = self.ring.field
        c = f(c)
        return HahnSeries(self.ring, {e: f.mul(c, v) for e, v in self.terms.items()}, self.cutoff)

    def __mul__(self, other):
        if not isinstance(other, HahnSeries):
            return self.scale(other)
        self._check(other)
        cut = _min(self.cutoff, other.cutoff)
        va, vb = self.valuation(), other.valuation()
        if va is not INFINITY:
            cut = _min(cut, va + other.cutoff)
        if vb is not INFINITY:
            cut = _min(cut, vb + self.cutoff)
        f = self.ring.field
        g = self.ring.group
        out: dict = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                c = f.mul(c1, c2)
                if e in out:
                    out[e] = f.add(out[e], c)
                elif GroupElement(e, g) < cut:
                    out[e] = c
        return HahnSeries(self.ring, out, cut)

    def __rmul__(self, other):
        return self.scale(other)

    def __pow__(self, k: int):
        if k < 0:
            return self.inv_unit() ** (-k)
        result = self.ring.one(self.cutoff)
        base = self
        while k:
            if k & 1:
                result = result * base
            k >>= 1
            if k:
                base = base * base
        return result

    def is_unit(self) -> bool:
        return bool(self.terms) and self.valuation().is_zero()

    def inv_unit(self) -> "HahnSeries":
        """Inverse of a unit by the geometric series ``c^-1 * sum (-h)^k``."""
        if not self.is_unit():
            raise NotAUnit("series has no invertible constant term")
        f = self.ring.field
        zero = self.ring.group.zero.coords
        c0_inv = f.inv(self.terms[zero])
        h = self.scale(c0_inv) - 1
        neg_h = -h
        result = self.ring.one(self.cutoff)
        power = self.ring.one(self.cutoff)
        while True:
            power = power * neg_h
            if power.is_zero():
                break
            result = result + power
        return result.scale(c0_inv)

    def __eq__(self, other):
        if not isinstance(other, HahnSeries):
            return NotImplemented
        return self.ring == other.ring and self.cutoff == other.cutoff and self.terms == other.terms

    def __hash__(self):
        return hash((frozenset(self.terms.items()), self.cutoff))

    # -- presentation ----------------------------------------------------
    def to_json(self) -> dict:
        return {
            "terms": [[str(c), list(e.coords)] for e, c in self.items()],
            "cutoff": list(self.cutoff.coords),
        }

    def format(self, var: str = "t") -> str:
        pieces = []
        f = self.ring.field
        for e, c in self.items():
            neg = (not f.p) and c < 0
            mag = -c if neg else c
            if e.is_zero():
                body = str(mag)
            else:
                es = str(e)
                mono = f"{var}^{es}" if es != "1" else var
                if any(ch in es for ch in "+-*/") and es != "1":
                    mono = f"{var}^({es})"
                body = mono if mag == 1 else f"{mag}*{mono}"
            pieces.append(("-" if neg else "+", body))
        tail = f"O({var}^({self.cutoff}))"
        if not pieces:
            return tail
        s = ("-" if pieces[0][0] == "-" else "") + pieces[0][1]
        for sign, body in pieces[1:]:
            s += f" {sign} {body}"
        return f"{s} + {tail}"

    def __repr__(self):
        return f"HahnSeries({self.format()})"


def substitute(f: Poly, images: Sequence[HahnSeries], cutoff=None) -> HahnSeries:
    """Evaluate the polynomial ``f`` at ``u_i = images[i]``.

    If ``cutoff`` is given the result must be exact below it; otherwise a
    ``CutoffError`` reports the attainable cutoff.
    """
    if len(images) != f.nvars:
        raise ValueError("number of images does not match number of variables")
    if not images:
        raise ValueError("need at least one image to fix the ring")
    ring = images[0].ring
    for s in images[1:]:
        s._check(images[0])
    base_cut = images[0].cutoff
    for s in images[1:]:
        base_cut = _min(base_cut, s.cutoff)
    cache: dict[tuple[int, int], HahnSeries] = {}

    def power(i: int, k: int) -> HahnSeries:
        if (i, k) not in cache:
            if k == 1:
                cache[(i, k)] = images[i]
            elif k % 2 == 0:
                h = power(i, k // 2)
                cache[(i, k)] = h * h
            else:
                cache[(i, k)] = power(i, k - 1) * images[i]
        return cache[(i, k)]

    total = ring.zero(base_cut)
    for exp, c in f.terms.items():
        term = ring.constant(c, base_cut)
        for i, k in enumerate(exp):
            if k:
                term = term * power(i, k)
        total = total + term
    if cutoff is not None:
        cutoff = ring._exp(cutoff)
        if total.cutoff < cutoff:
            raise CutoffError(
                f"substitution is exact only below t^({total.cutoff})", total.cutoff
            )
        total = total.truncate(cutoff)
    return total


def apply_group_automorphism(units: Sequence[HahnSeries], s: HahnSeries) -> HahnSeries:
    """Map ``sum c_phi t^phi`` to ``sum c_phi u(phi) t^phi``.

    ``units[j]`` is the image of the j-th basis vector of the exponent group;
    ``u`` is extended multiplicatively, so negative coordinates use inverses.
    """
    g = s.ring.group
    if len(units) != g.rank:
        raise ValueError("need one unit per group generator")
    for u in units:
        s._check(u)
        if not u.is_unit():
            raise NotAUnit("automorphism images must be units")
    inverses: dict[int, HahnSeries] = {}

    def unit_power(j: int, k: int) -> HahnSeries:
        if k >= 0:
            return units[j] ** k
        if j not in inverses:
            inverses[j] = units[j].inv_unit()
        return inverses[j] ** (-k)

    cut = s.cutoff
    for u in units:
        cut = _min(cut, u.cutoff)
    total = s.ring.zero(cut)
    for e, c in s.items():
        term = s.ring.monomial(e, cut, c)
        for j, k in enumerate(e.coords):
            if k:
                term = term * unit_power(j, k)
        total = total + term
    return total
