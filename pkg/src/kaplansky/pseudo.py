"""Pseudo-convergent sequences of truncated Hahn series, checked on finite prefixes."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

from .hahn import CutoffError, HahnSeries
from .ordered_group import INFINITY, GroupElement

__all__ = [
    "PseudoSequence",
    "breadth_threshold",
    "check_pseudo_convergent",
    "in_breadth",
    "is_limit",
    "limit_difference_check",
]


@dataclass
class PseudoSequence:
    entries: list[HahnSeries]
    gauges: list  # w_tau = v(y_{tau+1} - y_tau); INFINITY marks an undefined gauge
    violations: list[str] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations

    def __bool__(self) -> bool:
        return self.ok

    def to_json(self) -> dict:
        return {
            "ok": self.ok,
            "gauges": [str(g) if g is not INFINITY else "inf" for g in self.gauges],
            "violations": list(self.violations),
        }


def _certified_valuation(s: HahnSeries, threshold) -> object:
    """Valuation of ``s``, insisting the cutoff is large enough to compare with ``threshold``."""
    v = s.valuation()
    if v is INFINITY and not threshold < s.cutoff:
        raise CutoffError(
            f"cutoff t^({s.cutoff}) too small to compare with {threshold}", s.cutoff
        )
    return v


def check_pseudo_convergent(seq: Sequence[HahnSeries]) -> PseudoSequence:
    """Gauges must strictly increase and ``v(y_t' - y_t)`` must not depend on ``t' > t``."""
    seq = list(seq)
    if len(seq) < 3:
        raise ValueError("need at least three entries")
    for s in seq[1:]:
        s._check(seq[0])
    gauges: list = []
    out = PseudoSequence(seq, gauges)
    for i in range(len(seq) - 1):
        g = (seq[i + 1] - seq[i]).valuation()
        gauges.append(g)
        if g is INFINITY:
            out.violations.append(f"gauge w_{i} undefined: y_{i+1} = y_{i} below cutoff")
    for i in range(len(gauges) - 1):
        a, b = gauges[i], gauges[i + 1]
        if a is INFINITY or b is INFINITY:
            continue
        if not a < b:
            out.violations.append(f"gauges not increasing at {i}: {a} >= {b}")
    for i, w in enumerate(gauges):
        if w is INFINITY:
            continue
        for j in range(i + 2, len(seq)):
            v = (seq[j] - seq[i]).valuation()
            if v != gauges[i]:
                out.violations.append(f"v(y_{j} - y_{i}) = {v} differs from w_{i} = {gauges[i]}")
    return out


def is_limit(z: HahnSeries, seq: PseudoSequence) -> bool:
    """``v(z - y_t) >= w_t`` for every gauge of the prefix."""
    for y, w in zip(seq.entries, seq.gauges):
        if w is INFINITY:
            return False
        v = _certified_valuation(z - y, w)
        if v is not INFINITY and v < w:
            return False
    return True


def limit_difference_check(z1: HahnSeries, z2: HahnSeries, seq: PseudoSequence) -> bool:
    """Both limits differ by an element of the breadth: ``v(z1 - z2) > w_t`` for all ``t``."""
    return in_breadth(z1 - z2, seq)


def in_breadth(s: HahnSeries, seq: PseudoSequence) -> bool:
    t = breadth_threshold(seq)
    if t is INFINITY:
        return s.is_zero()
    v = _certified_valuation(s, t)
    return v is INFINITY or v > t


def breadth_threshold(seq: PseudoSequence) -> GroupElement:
    """Largest gauge of the prefix; the breadth is ``{s : v(s) > threshold}``."""
    finite = [g for g in seq.gauges if g is not INFINITY]
    if len(finite) != len(seq.gauges):
        return INFINITY
    return max(finite)
