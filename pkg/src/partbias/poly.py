"""Sparse multivariate polynomials over Q and truncated series in z^(1/2)."""
from __future__ import annotations

from fractions import Fraction
from typing import Callable, Iterable, Mapping

Exponent = tuple[int, ...]


class MultiPoly:
    """Polynomial in u_1..u_n with exact rational coefficients.

    Stored as ``{exponent tuple: Fraction}`` with no zero entries.
    """

    __slots__ = ("nvars", "terms")

    def __init__(self, nvars: int, terms: Mapping[Exponent, Fraction] | None = None):
        self.nvars = nvars
        self.terms: dict[Exponent, Fraction] = {}
        if terms:
            for e, c in terms.items():
                if len(e) != nvars:
                    raise ValueError(f"exponent {e} has wrong length for {nvars} variables")
                if any(k < 0 for k in e):
                    raise ValueError(f"negative exponent {e}")
                if c:
                    self.terms[tuple(e)] = Fraction(c)

    @classmethod
    def constant(cls, nvars: int, c=1) -> "MultiPoly":
        return cls(nvars, {(0,) * nvars: Fraction(c)})

    @classmethod
    def variable(cls, nvars: int, i: int) -> "MultiPoly":
        e = [0] * nvars
        e[i] = 1
        return cls(nvars, {tuple(e): Fraction(1)})

    @classmethod
    def univariate(cls, coeffs: Iterable) -> "MultiPoly":
        """From ascending coefficients c_0, c_1, ... in a single variable."""
        return cls(1, {(k,): Fraction(c) for k, c in enumerate(coeffs)})

    def _coerce(self, other) -> "MultiPoly":
        if isinstance(other, MultiPoly):
            if other.nvars != self.nvars:
                raise ValueError("polynomials live in different numbers of variables")
            return other
        return MultiPoly.constant(self.nvars, other)

    def __add__(self, other):
        other = self._coerce(other)
        out = dict(self.terms)
        for e, c in other.terms.items():
            v = out.get(e, 0) + c
            if v:
                out[e] = v
            else:
                out.pop(e, None)
        return MultiPoly._raw(self.nvars, out)

    __radd__ = __add__

    def __neg__(self):
        return MultiPoly._raw(self.nvars, {e: -c for e, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __mul__(self, other):
        if not isinstance(other, MultiPoly):
            c = Fraction(other)
            if not c:
                return MultiPoly(self.nvars)
            return MultiPoly._raw(self.nvars, {e: v * c for e, v in self.terms.items()})
        other = self._coerce(other)
        out: dict[Exponent, Fraction] = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                out[e] = out.get(e, 0) + c1 * c2
        return MultiPoly._raw(self.nvars, {e: c for e, c in out.items() if c})

    __rmul__ = __mul__

    def __truediv__(self, c):
        return self * (1 / Fraction(c))

    def __pow__(self, k: int):
        if k < 0:
            raise ValueError("negative powers are not polynomials")
        result = MultiPoly.constant(self.nvars, 1)
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def __eq__(self, other):
        if isinstance(other, MultiPoly):
            return self.nvars == other.nvars and self.terms == other.terms
        if isinstance(other, (int, Fraction)):
            return self == MultiPoly.constant(self.nvars, other)
        return NotImplemented

    def __hash__(self):
        return hash((self.nvars, frozenset(self.terms.items())))

    def __bool__(self):
        return bool(self.terms)

    def __repr__(self):
        if not self.terms:
            return "0"
        parts = []
        for e in sorted(self.terms, key=lambda e: (sum(e), e)):
            mono = "*".join(
                f"u{i + 1}" if k == 1 else f"u{i + 1}^{k}" for i, k in enumerate(e) if k
            )
            c = self.terms[e]
            parts.append(f"({c})*{mono}" if mono else f"({c})")
        return " + ".join(parts)

    @classmethod
    def _raw(cls, nvars, terms):
        p = cls.__new__(cls)
        p.nvars = nvars
        p.terms = terms
        return p

    def degree(self) -> int:
        return max((sum(e) for e in self.terms), default=-1)

    def coefficient(self, exponent: Exponent) -> Fraction:
        return self.terms.get(tuple(exponent), Fraction(0))

    def diff(self, i: int) -> "MultiPoly":
        out = {}
        for e, c in self.terms.items():
            if e[i]:
                f = list(e)
                f[i] -= 1
                out[tuple(f)] = c * e[i]
        return MultiPoly._raw(self.nvars, out)

    def merge_variable(self, src: int, dst: int) -> "MultiPoly":
        """Substitute u_src := u_dst."""
        out: dict[Exponent, Fraction] = {}
        for e, c in self.terms.items():
            f = list(e)
            f[dst] += f[src]
            f[src] = 0
            key = tuple(f)
            out[key] = out.get(key, 0) + c
        return MultiPoly._raw(self.nvars, {e: c for e, c in out.items() if c})

    def __call__(self, *point):
        if len(point) != self.nvars:
            raise ValueError(f"expected {self.nvars} arguments")
        total = 0
        for e, c in self.terms.items():
            term = c
            for x, k in zip(point, e):
                if k:
                    term = term * x**k
            total = total + term
        return total

    def map_coefficients(self, f: Callable[[Fraction], Fraction]) -> "MultiPoly":
        return MultiPoly(self.nvars, {e: f(c) for e, c in self.terms.items()})


def _one_like(c):
    if isinstance(c, MultiPoly):
        return MultiPoly.constant(c.nvars, 1)
    return c * 0 + 1


class HalfPowerSeries:
    """Truncated series sum_{r < order} c_r z^(r/2).

    Coefficients may be :class:`MultiPoly` or any numeric type supporting
    ring operations and multiplication by :class:`~fractions.Fraction`.
    """

    def __init__(self, coeffs: list, order: int | None = None):
        if order is None:
            order = len(coeffs)
        if order < 1:
            raise ValueError("truncation order must be >= 1")
        zero = coeffs[0] * 0 if coeffs else 0
        coeffs = list(coeffs[:order])
        coeffs += [zero] * (order - len(coeffs))
        self.coeffs = coeffs
        self.order = order

    def __getitem__(self, r: int):
        return self.coeffs[r]

    def __len__(self):
        return self.order

    def __add__(self, other: "HalfPowerSeries") -> "HalfPowerSeries":
        R = min(self.order, other.order)
        return HalfPowerSeries([a + b for a, b in zip(self.coeffs[:R], other.coeffs[:R])], R)

    def __mul__(self, other):
        if not isinstance(other, HalfPowerSeries):
            return HalfPowerSeries([c * other for c in self.coeffs], self.order)
        R = min(self.order, other.order)
        out = []
        for r in range(R):
            acc = self.coeffs[0] * other.coeffs[r]
            for k in range(1, r + 1):
                acc = acc + self.coeffs[k] * other.coeffs[r - k]
            out.append(acc)
        return HalfPowerSeries(out, R)

    def exp(self) -> "HalfPowerSeries":
        """exp of a series without constant term, via r F_r = sum_k k f_k F_{r-k}."""
        f = self.coeffs
        if f[0] != 0:
            raise ValueError("exp requires a series with zero constant term")
        F = [_one_like(f[0])]
        for r in range(1, self.order):
            acc = f[1] * F[r - 1]
            for k in range(2, r + 1):
                if f[k] != 0:
                    acc = acc + f[k] * F[r - k] * k
            F.append(acc * Fraction(1, r))
        return HalfPowerSeries(F, self.order)
