"""Totally ordered abelian groups of finite rational rank embedded in the reals.

An element of a rank ``r`` group is an integer vector ``c``; its real value is
``sum(c[i] * weights[i])``.  Every weight has the form ``q + s*pi`` with
rational ``q`` and ``s``, so a value is always ``A + B*pi`` with ``A, B``
rational.  Because ``1`` and ``pi`` are linearly independent over the
rationals, signs are decided exactly: ``B == 0`` is settled by rational
arithmetic, otherwise certified enclosures of ``pi`` are refined until the
sign is known.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache, total_ordering
from typing import Iterable, Sequence

from mpmath.libmp import mpf_pi, round_ceiling, round_floor

__all__ = [
    "INFINITY",
    "ContextMismatch",
    "GroupContext",
    "GroupElement",
    "PrecisionCeilingError",
    "Weight",
    "compare",
    "floor_ratio",
    "is_nonnegative",
    "pi_bounds",
]

INITIAL_BITS = 64
DEFAULT_CEILING = 4096


class ContextMismatch(ValueError):
    pass


class PrecisionCeilingError(ArithmeticError):
    pass


@lru_cache(maxsize=None)
def pi_bounds(bits: int) -> tuple[Fraction, Fraction]:
    """Rational ``(lo, hi)`` with ``lo < pi < hi``, each accurate to ``bits`` bits."""
    lo = mpf_pi(bits, round_floor)
    hi = mpf_pi(bits, round_ceiling)
    return _mpf_to_fraction(lo), _mpf_to_fraction(hi)


def _mpf_to_fraction(v) -> Fraction:
    sign, man, exp, _ = v
    q = Fraction(man) * (Fraction(2) ** exp)
    return -q if sign else q


def _sign_of(a: Fraction, b: Fraction, ceiling: int) -> int:
    """Sign of ``a + b*pi``."""
    if b == 0:
        return (a > 0) - (a < 0)
    # Fast path: double rounding error is far below the 1e-9 relative margin.
    approx = float(a) + float(b) * math.pi
    scale = abs(float(a)) + 4.0 * abs(float(b))
    if abs(approx) > 1e-9 * scale and math.isfinite(approx):
        return 1 if approx > 0 else -1
    bits = INITIAL_BITS
    while bits <= ceiling:
        lo, hi = pi_bounds(bits)
        if b > 0:
            lower, upper = a + b * lo, a + b * hi
        else:
            lower, upper = a + b * hi, a + b * lo
        if lower > 0:
            return 1
        if upper < 0:
            return -1
        bits *= 2
    raise PrecisionCeilingError(
        f"sign of {a} + {b}*pi undecided at {ceiling} bits"
    )


@dataclass(frozen=True)
class Weight:
    """A positive real ``rational + pi_coeff * pi``."""

    rational: Fraction = Fraction(0)
    pi_coeff: Fraction = Fraction(0)

    @classmethod
    def parse(cls, desc) -> "Weight":
        if isinstance(desc, Weight):
            return desc
        if isinstance(desc, (int, Fraction)):
            return cls(Fraction(desc))
        if isinstance(desc, str):
            return cls(Fraction(desc))
        if "const" in desc:
            if desc["const"] != "pi":
                raise ValueError(f"unsupported constant {desc['const']!r}")
            return cls(Fraction(desc.get("rat", 0)), Fraction(desc.get("scale", 1)))
        if "rat" in desc:
            return cls(Fraction(desc["rat"]), Fraction(desc.get("pi", 0)))
        raise ValueError(f"bad weight descriptor {desc!r}")

    def to_json(self) -> dict:
        if self.pi_coeff == 0:
            return {"rat": str(self.rational)}
        out = {"const": "pi"}
        if self.pi_coeff != 1:
            out["scale"] = str(self.pi_coeff)
        if self.rational:
            out["rat"] = str(self.rational)
        return out

    def __float__(self) -> float:
        return float(self.rational) + float(self.pi_coeff) * math.pi


@dataclass(frozen=True)
class GroupContext:
    """Ordered group ``Z^r`` with the order pulled back from ``R`` by ``weights``."""

    weights: tuple[Weight, ...]
    independent: bool = True
    precision_ceiling: int = field(default=DEFAULT_CEILING, compare=False)

    def __post_init__(self):
        ws = tuple(Weight.parse(w) for w in self.weights)
        object.__setattr__(self, "weights", ws)
        if not ws:
            raise ValueError("rank must be at least 1")
        for w in ws:
            if _sign_of(w.rational, w.pi_coeff, self.precision_ceiling) <= 0:
                raise ValueError(f"weight {w} is not positive")
        if self.independent and (len(ws) > 2 or _rank2(ws) != len(ws)):
            raise ValueError("weights are not linearly independent over Q")

    @classmethod
    def rational(cls, weight=1) -> "GroupContext":
        return cls((Weight(Fraction(weight)),))

    @classmethod
    def from_json(cls, desc: dict, precision_ceiling: int = DEFAULT_CEILING) -> "GroupContext":
        ws = tuple(Weight.parse(w) for w in desc["weights"])
        if "rank" in desc and desc["rank"] != len(ws):
            raise ValueError("rank does not match number of weights")
        return cls(ws, bool(desc.get("independent", True)), precision_ceiling)

    def to_json(self) -> dict:
        out = {"rank": self.rank, "weights": [w.to_json() for w in self.weights]}
        if not self.independent:
            out["independent"] = False
        return out

    @property
    def rank(self) -> int:
        return len(self.weights)

    @property
    def zero(self) -> "GroupElement":
        return GroupElement((0,) * self.rank, self)

    def element(self, *coords: int) -> "GroupElement":
        if len(coords) == 1 and isinstance(coords[0], (tuple, list)):
            coords = tuple(coords[0])
        return GroupElement(tuple(int(c) for c in coords), self)

    def basis(self) -> list["GroupElement"]:
        return [
            self.element(*(1 if j == i else 0 for j in range(self.rank)))
            for i in range(self.rank)
        ]

    def from_rational(self, q) -> "GroupElement":
        """Element with real value ``q`` in a rank-one rational context."""
        if self.rank != 1 or self.weights[0].pi_coeff:
            raise ValueError("from_rational needs a rank-one rational context")
        c = Fraction(q) / self.weights[0].rational
        if c.denominator != 1:
            raise ValueError(f"{q} is not a multiple of {self.weights[0].rational}")
        return self.element(c.numerator)


def _rank2(ws: Sequence[Weight]) -> int:
    rows = [(w.rational, w.pi_coeff) for w in ws]
    if len(rows) == 1:
        return int(any(rows[0]))
    (a, b), (c, d) = rows
    return 2 if a * d - b * c != 0 else 1


@total_ordering
class _Infinity:
    """Value of the zero series: larger than every group element."""

    _inst = None

    def __new__(cls):
        if cls._inst is None:
            cls._inst = super().__new__(cls)
        return cls._inst

    def __eq__(self, other):
        return other is self

    def __hash__(self):
        return hash("INFINITY")

    def __lt__(self, other):
        return False

    def __add__(self, other):
        return self

    __radd__ = __add__

    def __repr__(self):
        return "INFINITY"

    def __str__(self):
        return "inf"


INFINITY = _Infinity()


class GroupElement:
    __slots__ = ("coords", "context")

    def __init__(self, coords: Iterable[int], context: GroupContext):
        self.coords = tuple(coords)
        self.context = context
        if len(self.coords) != context.rank:
            raise ValueError("coordinate vector has wrong length")

    def _check(self, other: "GroupElement") -> None:
        if self.context != other.context:
            raise ContextMismatch("elements live in different groups")

    def __add__(self, other):
        if other is INFINITY:
            return INFINITY
        self._check(other)
        return GroupElement(
            tuple(a + b for a, b in zip(self.coords, other.coords)), self.context
        )

    def __sub__(self, other):
        self._check(other)
        return GroupElement(
            tuple(a - b for a, b in zip(self.coords, other.coords)), self.context
        )

    def __neg__(self):
        return GroupElement(tuple(-a for a in self.coords), self.context)

    def __mul__(self, k: int):
        if not isinstance(k, int):
            return NotImplemented
        return GroupElement(tuple(k * a for a in self.coords), self.context)

    __rmul__ = __mul__

    def __eq__(self, other):
        if not isinstance(other, GroupElement):
            return NotImplemented
        return self.coords == other.coords and self.context == other.context

    def __hash__(self):
        return hash(self.coords)

    def __lt__(self, other):
        if other is INFINITY:
            return True
        return compare(self, other) < 0

    def __le__(self, other):
        if other is INFINITY:
            return True
        return compare(self, other) <= 0

    def __gt__(self, other):
        if other is INFINITY:
            return False
        return compare(self, other) > 0

    def __ge__(self, other):
        if other is INFINITY:
            return False
        return compare(self, other) >= 0

    def is_zero(self) -> bool:
        return not any(self.coords)

    def value(self) -> tuple[Fraction, Fraction]:
        """Exact value as ``(A, B)`` meaning ``A + B*pi``."""
        a = Fraction(0)
        b = Fraction(0)
        for c, w in zip(self.coords, self.context.weights):
            if c:
                a += c * w.rational
                b += c * w.pi_coeff
        return a, b

    def sign(self) -> int:
        if self.is_zero():
            return 0
        a, b = self.value()
        return _sign_of(a, b, self.context.precision_ceiling)

    def __float__(self) -> float:
        a, b = self.value()
        return float(a) + float(b) * math.pi

    def __repr__(self):
        return f"GroupElement({list(self.coords)})"

    def __str__(self):
        a, b = self.value()
        if b == 0:
            return str(a)
        parts = []
        if a:
            parts.append(str(a))
        parts.append("pi" if b == 1 else "-pi" if b == -1 else f"{b}*pi")
        out = parts[0]
        for p in parts[1:]:
            out += p if p.startswith("-") else "+" + p
        return out


def compare(a: GroupElement, b: GroupElement) -> int:
    """Return -1, 0 or 1.  Zero only for identical coordinates."""
    a._check(b)
    if a.coords == b.coords:
        return 0
    s = (a - b).sign()
    if s == 0:
        # Only reachable for contexts declared dependent.
        raise PrecisionCeilingError("distinct coordinates with equal value")
    return s


def is_nonnegative(a: GroupElement) -> bool:
    return a.sign() >= 0


def floor_ratio(a: GroupElement, b: GroupElement) -> int:
    """Largest integer ``k`` with ``k*b <= a``, for positive ``b``."""
    if b.sign() <= 0:
        raise ValueError("divisor must be positive")
    # Float guess (may be far off after cancellation), then exact galloping
    # and bisection keeping lo*b <= a < hi*b.
    try:
        k = math.floor(float(a) / float(b))
    except (ZeroDivisionError, OverflowError, ValueError):
        k = 0
    step = 1
    if k * b <= a:
        lo = k
        while (lo + step) * b <= a:
            lo += step
            step *= 2
        hi = lo + step
    else:
        hi = k
        while (hi - step) * b > a:
            hi -= step
            step *= 2
        lo = hi - step
    while hi - lo > 1:
        mid = (lo + hi) // 2
        if mid * b <= a:
            lo = mid
        else:
            hi = mid
    return lo
