"""Exact coefficient fields: the rationals and prime fields."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

__all__ = ["CoeffField", "ExtensionRequired", "QQ", "GF"]


class ExtensionRequired(ArithmeticError):
    """A root needed by the computation does not lie in the coefficient field."""


def _is_prime(n: int) -> bool:
    if n < 2:
        return False
    i = 2
    while i * i <= n:
        if n % i == 0:
            return False
        i += 1
    return True


@dataclass(frozen=True)
class CoeffField:
    """``p == 0`` means the rationals (elements are ``Fraction``); otherwise
    ``F_p`` with elements stored as ints in ``range(p)``."""

    p: int = 0

    def __post_init__(self):
        if self.p and not _is_prime(self.p):
            raise ValueError(f"{self.p} is not prime")

    @property
    def characteristic(self) -> int:
        return self.p

    def __call__(self, x):
        if self.p:
            if isinstance(x, str):
                x = Fraction(x)
            if isinstance(x, Fraction):
                return (x.numerator * pow(x.denominator, -1, self.p)) % self.p
            return int(x) % self.p
        return Fraction(x)

    @property
    def zero(self):
        return self(0)

    @property
    def one(self):
        return self(1)

    def add(self, a, b):
        return (a + b) % self.p if self.p else a + b

    def sub(self, a, b):
        return (a - b) % self.p if self.p else a - b

    def mul(self, a, b):
        return (a * b) % self.p if self.p else a * b

    def neg(self, a):
        return (-a) % self.p if self.p else -a

    def inv(self, a):
        if not a:
            raise ZeroDivisionError("inverse of zero")
        return pow(a, -1, self.p) if self.p else 1 / Fraction(a)

    def div(self, a, b):
        return self.mul(a, self.inv(b))

    def pow(self, a, k: int):
        if self.p:
            return pow(a, k, self.p)
        return Fraction(a) ** k

    def root(self, a, d: int):
        """Some ``x`` in the field with ``x**d == a``; deterministic choice."""
        if d == 1:
            return a
        if not a:
            return a
        if self.p:
            g = _gcd(d, self.p - 1)
            if g == 1:
                return pow(a, pow(d, -1, self.p - 1), self.p)
            if self.p > 100_000:
                raise ExtensionRequired(f"root search over F_{self.p} too large")
            for x in range(1, self.p):
                if pow(x, d, self.p) == a:
                    return x
            raise ExtensionRequired(f"{a} has no {d}-th root in F_{self.p}")
        a = Fraction(a)
        neg = a < 0
        if neg and d % 2 == 0:
            raise ExtensionRequired(f"{a} has no real {d}-th root")
        num = _int_root(abs(a.numerator), d)
        den = _int_root(a.denominator, d)
        if num is None or den is None:
            raise ExtensionRequired(f"{a} is not a {d}-th power in Q")
        x = Fraction(num, den)
        return -x if neg else x

    def to_str(self, a) -> str:
        return str(a)

    def __str__(self):
        return f"F_{self.p}" if self.p else "Q"

    def to_json(self):
        return {"kind": "Fp", "p": self.p} if self.p else {"kind": "Q"}

    @classmethod
    def parse(cls, desc) -> "CoeffField":
        if desc is None or desc in ("Q", "QQ", "q"):
            return cls(0)
        if isinstance(desc, int):
            return cls(desc)
        if isinstance(desc, str):
            if desc.upper().startswith("F"):
                return cls(int(desc.lstrip("FfPp_")))
            raise ValueError(f"bad field {desc!r}")
        if desc.get("kind", "Q") in ("Q", "QQ"):
            return cls(0)
        return cls(int(desc["p"]))


def _gcd(a, b):
    while b:
        a, b = b, a % b
    return a


def _int_root(n: int, d: int):
    if n in (0, 1):
        return n
    x = round(n ** (1.0 / d))
    for c in (x - 1, x, x + 1):
        if c >= 0 and c**d == n:
            return c
    # Large inputs: integer Newton iteration.
    lo, hi = 0, 1 << (n.bit_length() // d + 1)
    while lo < hi:
        mid = (lo + hi) // 2
        if mid**d < n:
            lo = mid + 1
        else:
            hi = mid
    return lo if lo**d == n else None


QQ = CoeffField(0)


def GF(p: int) -> CoeffField:
    return CoeffField(p)
