"""Parsing of the text and JSON literals accepted by the command line."""

from __future__ import annotations

import re
from fractions import Fraction

from .hahn import HahnRing, HahnSeries
from .intlinalg import rref
from .ordered_group import GroupContext, GroupElement

__all__ = ["InputError", "parse_element", "parse_int_list", "parse_series", "parse_value"]


class InputError(ValueError):
    """Malformed user input; carries an optional location."""

    def __init__(self, message: str, where: str | None = None):
        super().__init__(f"{where}: {message}" if where else message)


_TERM = re.compile(r"\s*([+-])?\s*(\d+(?:/\d+)?)?\s*(\*?\s*pi)?\s*")


def parse_value(text: str) -> tuple[Fraction, Fraction]:
    """``"10+3pi"`` -> ``(10, 3)`` meaning ``10 + 3*pi``."""
    s = text.replace(" ", "").replace("π", "pi")
    if not s:
        raise InputError("empty value")
    a = Fraction(0)
    b = Fraction(0)
    pos = 0
    while pos < len(s):
        m = _TERM.match(s, pos)
        if not m or m.end() == pos or not (m.group(2) or m.group(3)):
            raise InputError(f"cannot parse value {text!r}", f"column {pos + 1}")
        sign = -1 if m.group(1) == "-" else 1
        if pos and not m.group(1):
            raise InputError(f"missing operator in {text!r}", f"column {pos + 1}")
        coeff = Fraction(m.group(2)) if m.group(2) else Fraction(1)
        if m.group(3):
            b += sign * coeff
        else:
            a += sign * coeff
        pos = m.end()
    return a, b


def parse_element(raw, ctx: GroupContext) -> GroupElement:
    """A coordinate list, or a real value such as ``64``, ``"6pi"``, ``"10+3pi"``."""
    if isinstance(raw, GroupElement):
        return raw
    if isinstance(raw, (list, tuple)):
        if len(raw) != ctx.rank:
            raise InputError(f"expected {ctx.rank} coordinates, got {len(raw)}")
        return ctx.element(*[int(c) for c in raw])
    if isinstance(raw, str) and raw.strip().startswith("["):
        import json

        return parse_element(json.loads(raw), ctx)
    a, b = parse_value(str(raw))
    rows = [
        [w.rational for w in ctx.weights] + [a],
        [w.pi_coeff for w in ctx.weights] + [b],
    ]
    R, piv = rref(rows)
    r = ctx.rank
    if r in piv:
        raise InputError(f"value {raw!r} does not lie in the group")
    if len(piv) < r:
        raise InputError(f"value {raw!r} has no unique coordinates")
    coords = [Fraction(0)] * r
    for row, c in enumerate(piv):
        coords[c] = R[row][r]
    if any(c.denominator != 1 for c in coords):
        raise InputError(f"value {raw!r} is not an integral combination of the weights")
    return ctx.element(*[int(c) for c in coords])


def parse_int_list(text: str) -> list[int]:
    try:
        return [int(x) for x in re.split(r"[,\s]+", text.strip()) if x]
    except ValueError as exc:
        raise InputError(f"expected a list of integers, got {text!r}") from exc


def parse_series(data: dict, ring: HahnRing) -> HahnSeries:
    """Series literal ``{"terms": [[coeff, [coords]], ...], "cutoff": ...}``."""
    try:
        cutoff = parse_element(data["cutoff"], ring.group)
        terms = [(ring.group.element(*e), ring.field(c)) for c, e in data["terms"]]
    except (KeyError, TypeError) as exc:
        raise InputError(f"bad series literal: {exc}") from exc
    return ring.series(terms, cutoff)
