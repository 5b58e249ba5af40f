"""Sparse multivariate polynomials with exact coefficients.

Used for relations ``F(u_1..u_b)``, their strict transforms in chart
coordinates ``y_1..y_b`` and plane-branch equations ``f(x, y)``.
"""

from __future__ import annotations

from typing import Iterable, Mapping, Sequence

from .fields import CoeffField

__all__ = ["Poly"]


class Poly:
    __slots__ = ("field", "nvars", "terms")

    def __init__(self, field: CoeffField, nvars: int, terms: Mapping | Iterable = ()):
        self.field = field
        self.nvars = nvars
        items = terms.items() if isinstance(terms, Mapping) else terms
        acc: dict[tuple[int, ...], object] = {}
        for exp, c in items:
            exp = tuple(int(e) for e in exp)
            if len(exp) != nvars:
                raise ValueError("exponent length does not match number of variables")
            if any(e < 0 for e in exp):
                raise ValueError("negative exponent in polynomial")
            c = field(c)
            acc[exp] = field.add(acc[exp], c) if exp in acc else c
        self.terms = {e: c for e, c in acc.items() if c}

    @classmethod
    def variable(cls, field: CoeffField, nvars: int, i: int) -> "Poly":
        return cls.monomial(field, nvars, tuple(int(j == i) for j in range(nvars)))

    @classmethod
    def variables(cls, field: CoeffField, nvars: int) -> list["Poly"]:
        return [cls.variable(field, nvars, i) for i in range(nvars)]

    @classmethod
    def monomial(cls, field: CoeffField, nvars: int, exp: Sequence[int], coeff=1) -> "Poly":
        return cls(field, nvars, {tuple(exp): coeff})

    @classmethod
    def constant(cls, field: CoeffField, nvars: int, c) -> "Poly":
        return cls(field, nvars, {(0,) * nvars: c})

    def _lift(self, other) -> "Poly":
        if isinstance(other, Poly):
            if other.nvars != self.nvars or other.field != self.field:
                raise ValueError("polynomials over different rings")
            return other
        return Poly.constant(self.field, self.nvars, other)

    def __add__(self, other):
        other = self._lift(other)
        out = dict(self.terms)
        f = self.field
        for e, c in other.terms.items():
            out[e] = f.add(out[e], c) if e in out else c
        return Poly(f, self.nvars, out)

    __radd__ = __add__

    def __neg__(self):
        f = self.field
        return Poly(f, self.nvars, {e: f.neg(c) for e, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-self._lift(other))

    def __rsub__(self, other):
        return self._lift(other) - self

    def __mul__(self, other):
        other = self._lift(other)
        f = self.field
        out: dict = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                c = f.mul(c1, c2)
                out[e] = f.add(out[e], c) if e in out else c
        return Poly(f, self.nvars, out)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        result = Poly.constant(self.field, self.nvars, 1)
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def __eq__(self, other):
        if not isinstance(other, Poly):
            return NotImplemented
        return (self.nvars, self.field, self.terms) == (other.nvars, other.field, other.terms)

    def __hash__(self):
        return hash((self.nvars, frozenset(self.terms.items())))

    def is_zero(self) -> bool:
        return not self.terms

    def scale(self, c) -> "Poly":
        f = self.field
        c = f(c)
        return Poly(f, self.nvars, {e: f.mul(c, v) for e, v in self.terms.items()})

    def monomial_gcd(self) -> tuple[int, ...]:
        """Componentwise minimum exponent over all terms."""
        if not self.terms:
            return (0,) * self.nvars
        exps = list(self.terms)
        return tuple(min(e[i] for e in exps) for i in range(self.nvars))

    def divide_monomial(self, exp: Sequence[int]) -> "Poly":
        out = {}
        for e, c in self.terms.items():
            q = tuple(a - b for a, b in zip(e, exp))
            if any(x < 0 for x in q):
                raise ValueError("monomial does not divide polynomial")
            out[q] = c
        return Poly(self.field, self.nvars, out)

    def derivative(self, i: int) -> "Poly":
        f = self.field
        out = {}
        for e, c in self.terms.items():
            if e[i]:
                d = list(e)
                d[i] -= 1
                out[tuple(d)] = f.mul(f(e[i]), c)
        return Poly(f, self.nvars, out)

    def evaluate(self, point: Sequence):
        """Evaluate at field values (all variables)."""
        f = self.field
        total = f.zero
        for e, c in self.terms.items():
            v = c
            for x, k in zip(point, e):
                if k:
                    v = f.mul(v, f.pow(x, k))
            total = f.add(total, v)
        return total

    def partial_evaluate(self, values: Mapping[int, object]) -> "Poly":
        """Substitute field constants for some variables (kept as dummies)."""
        f = self.field
        out: dict = {}
        for e, c in self.terms.items():
            v = c
            ne = list(e)
            for i, x in values.items():
                if e[i]:
                    v = f.mul(v, f.pow(f(x), e[i]))
                ne[i] = 0
            ne = tuple(ne)
            out[ne] = f.add(out[ne], v) if ne in out else v
        return Poly(f, self.nvars, out)

    def map_exponents(self, matrix: Sequence[Sequence[int]], nvars: int) -> "Poly":
        """Monomial substitution ``u_i -> prod_j y_j**matrix[j][i]``."""
        out: dict = {}
        f = self.field
        for e, c in self.terms.items():
            ne = tuple(sum(row[i] * e[i] for i in range(self.nvars)) for row in matrix)
            out[ne] = f.add(out[ne], c) if ne in out else c
        return Poly(f, nvars, out)

    def format(self, names: Sequence[str] | None = None) -> str:
        if names is None:
            names = [f"u{i + 1}" for i in range(self.nvars)]
        if not self.terms:
            return "0"
        pieces = []
        for e in sorted(self.terms, key=lambda e: (sum(e), tuple(-x for x in e))):
            c = self.terms[e]
            mono = "*".join(
                n if k == 1 else f"{n}^{k}" for n, k in zip(names, e) if k
            )
            neg = (not self.field.p) and c < 0
            mag = -c if neg else c
            if not mono:
                body = str(mag)
            elif mag == 1:
                body = mono
            else:
                body = f"{mag}*{mono}"
            pieces.append(("-" if neg else "+", body))
        s = ("-" if pieces[0][0] == "-" else "") + pieces[0][1]
        for sign, body in pieces[1:]:
            s += f" {sign} {body}"
        return s

    def to_json(self) -> list:
        return [[str(c), list(e)] for e, c in sorted(self.terms.items())]

    @classmethod
    def from_json(cls, field: CoeffField, nvars: int, data) -> "Poly":
        return cls(field, nvars, [(tuple(e), field(c)) for c, e in data])

    def __repr__(self):
        return f"Poly({self.format()})"
