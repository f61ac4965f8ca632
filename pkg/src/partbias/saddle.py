"""Saddle-point expansion coefficients for the restricted Nahm sums.

Pipeline: phi(u, z) -> C_r(u) -> Gaussian moments -> V_{j,r} -> E_{l,r},
plus the Euler-Maclaurin boundary weights W_r and the circle-method
coefficients c_{A,B,r}.  Everything up to the final evaluation is exact:
polynomials have rational coefficients and every integral lands in
Q[sqrt 2] * pi^(k/2), see :class:`SqrtPiNumber`.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from math import comb, factorial

import mpmath
from mpmath import mp

from .core import ResidueConfig, quad_data, smallest_positive_residue
from .numfmt import decimal_str
from .poly import HalfPowerSeries, MultiPoly

DEFAULT_PRECISION = 128


# ---------------------------------------------------------------------------
# Bernoulli polynomials and Li_{-k}(1/2)

@lru_cache(maxsize=None)
def bernoulli_number(r: int) -> Fraction:
    """B_r with the B_1 = -1/2 convention."""
    p, q = mpmath.bernfrac(r)
    return Fraction(int(p), int(q))


def bernoulli_poly(r: int) -> MultiPoly:
    """B_r(x) = sum_k binom(r, k) B_{r-k} x^k as a univariate MultiPoly."""
    if r < 0:
        raise ValueError("Bernoulli polynomial order must be >= 0")
    return MultiPoly.univariate([comb(r, k) * bernoulli_number(r - k) for k in range(r + 1)])


def _poly_eval(coeffs: list[Fraction], x: Fraction) -> Fraction:
    acc = Fraction(0)
    for c in reversed(coeffs):
        acc = acc * x + c
    return acc


@lru_cache(maxsize=None)
def polylog_neg_half(k: int) -> Fraction:
    """Li_{-k}(1/2), exact.

    Writes Li_{-k}(x) = P_k(x) / (1-x)^(k+1), starting from P_0 = x and
    applying x d/dx, which gives P_{k+1} = x(1-x) P_k' + (k+1) x P_k.
    """
    if k < 0:
        raise ValueError("k must be >= 0")
    P = [Fraction(0), Fraction(1)]
    for m in range(k):
        dP = [i * c for i, c in enumerate(P)][1:]
        # x(1-x) P'  ->  shift by one, minus shift by two
        nxt = [Fraction(0)] * (len(P) + 2)
        for i, c in enumerate(dP):
            nxt[i + 1] += c
            nxt[i + 2] -= c
        for i, c in enumerate(P):
            nxt[i + 1] += (m + 1) * c
        while len(nxt) > 1 and nxt[-1] == 0:
            nxt.pop()
        P = nxt
    half = Fraction(1, 2)
    return _poly_eval(P, half) * 2 ** (k + 1)


# ---------------------------------------------------------------------------
# phi(u, z) and the C_r polynomials

def phi_series(cfg: ResidueConfig, R: int) -> HalfPowerSeries:
    """phi(u, z) as a series in z^(1/2) truncated before z^(R/2).

    A xi term nu^k z^(r-1) with nu = u/sqrt z sits at half-order
    2(r-1) - k >= r - 2, so r runs up to R + 1.
    """
    if R < 1:
        raise ValueError("R must be >= 1")
    N = cfg.N
    qd = quad_data(cfg)
    coeffs = [MultiPoly(N) for _ in range(R)]
    if R > 1:
        for j in range(N):
            coeffs[1] = coeffs[1] - MultiPoly.variable(N, j) * qd.b[j]
    if R > 2:
        coeffs[2] = coeffs[2] - Fraction(N, 24)
    for r in range(2, R + 2):
        li = polylog_neg_half(r - 2)
        for k in range(r + 1):
            if r == 2 and k == 2:
                continue  # removed by the delta_{r,2} nu^2 correction
            h = 2 * (r - 1) - k
            if h >= R:
                continue
            # coefficient of nu^k in B_r(-nu)
            c = comb(r, k) * bernoulli_number(r - k) * (-1) ** k
            c = -c * li / factorial(r)
            if not c:
                continue
            for j in range(N):
                e = [0] * N
                e[j] = k
                coeffs[h] = coeffs[h] + MultiPoly(N, {tuple(e): c})
    return HalfPowerSeries(coeffs, R)


@lru_cache(maxsize=None)
def _c_polynomials_cached(cfg: ResidueConfig, R: int) -> tuple[MultiPoly, ...]:
    C = phi_series(cfg, R).exp().coeffs
    for r, p in enumerate(C):
        assert p.degree() <= 3 * r, f"deg C_{r} = {p.degree()} exceeds {3 * r}"
    return tuple(C)


def c_polynomials(cfg: ResidueConfig, R: int) -> list[MultiPoly]:
    """[C_0, ..., C_{R-1}] from exp(phi)."""
    if R < 1:
        raise ValueError("R must be >= 1")
    return list(_c_polynomials_cached(cfg, R))


# ---------------------------------------------------------------------------
# Euler-Maclaurin boundary weights

def residue_gap(cfg: ResidueConfig, ell) -> int:
    """[l_alpha - l_beta]_N, the only way l enters the ladder."""
    check_ell(cfg.N, ell)
    return smallest_positive_residue(ell[cfg.alpha - 1] - ell[cfg.beta - 1], cfg.N)


def check_ell(N: int, ell) -> None:
    if len(ell) != N:
        raise ValueError(f"lattice class must have length {N}, got {len(ell)}")
    if any(not 0 <= x < N for x in ell):
        raise ValueError(f"lattice class entries must lie in 0..{N - 1}: {tuple(ell)}")


@lru_cache(maxsize=None)
def w_for_residue(N: int, m: int, R: int) -> tuple[Fraction, ...]:
    """W_0..W_{R-1} for the residue gap m = [l_alpha - l_beta]_N."""
    if not 1 <= m <= N:
        raise ValueError(f"residue gap must lie in 1..{N}")
    out = [Fraction(1, 2) - Fraction(m, N)]
    for r in range(1, R):
        w = (Fraction(1, 2) - Fraction(m, 2 * N)) * Fraction(m**r, factorial(r))
        for t in range(1, (r + 1) // 2 + 1):
            w += Fraction(
                bernoulli_number(2 * t) * (m ** (2 * t) - N ** (2 * t)) * m ** (r - 2 * t + 1),
                factorial(2 * t) * factorial(r - 2 * t + 1) * N,
            )
        if r % 2:
            w -= Fraction(bernoulli_number(r + 1) * m ** (r + 1), factorial(r + 1) * N)
        out.append(w)
    return tuple(out[:R])


def w_coefficients(cfg: ResidueConfig, ell, R: int) -> list[Fraction]:
    """Exact W_0..W_{R-1} for the class ell."""
    if R < 1:
        raise ValueError("R must be >= 1")
    return list(w_for_residue(cfg.N, residue_gap(cfg, ell), R))


# ---------------------------------------------------------------------------
# Exact numbers in Q[sqrt 2] * sqrt(pi)^k

class SqrtPiNumber:
    """Finite sum of q * sqrt(2)^s * sqrt(pi)^p with s in {0, 1}, q rational."""

    __slots__ = ("terms",)

    def __init__(self, terms=None):
        self.terms: dict[tuple[int, int], Fraction] = {}
        if terms:
            for k, v in terms.items():
                if v:
                    self.terms[k] = Fraction(v)

    @classmethod
    def rational(cls, q) -> "SqrtPiNumber":
        return cls({(0, 0): Fraction(q)})

    def __add__(self, other):
        if not isinstance(other, SqrtPiNumber):
            other = SqrtPiNumber.rational(other)
        out = dict(self.terms)
        for k, v in other.terms.items():
            s = out.get(k, 0) + v
            if s:
                out[k] = s
            else:
                out.pop(k, None)
        return SqrtPiNumber(out)

    __radd__ = __add__

    def __neg__(self):
        return SqrtPiNumber({k: -v for k, v in self.terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        if not isinstance(other, SqrtPiNumber):
            c = Fraction(other)
            return SqrtPiNumber({k: v * c for k, v in self.terms.items()})
        out: dict[tuple[int, int], Fraction] = {}
        for (s1, p1), v1 in self.terms.items():
            for (s2, p2), v2 in other.terms.items():
                s, v = s1 + s2, v1 * v2
                if s == 2:
                    s, v = 0, 2 * v
                key = (s, p1 + p2)
                out[key] = out.get(key, 0) + v
        return SqrtPiNumber(out)

    __rmul__ = __mul__

    def __eq__(self, other):
        if not isinstance(other, SqrtPiNumber):
            other = SqrtPiNumber.rational(other)
        return self.terms == other.terms

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def __bool__(self):
        return bool(self.terms)

    def __repr__(self):
        if not self.terms:
            return "0"
        parts = []
        for (s, p), v in sorted(self.terms.items()):
            f = [f"({v})"]
            if s:
                f.append("sqrt(2)")
            if p:
                f.append(f"pi^({Fraction(p, 2)})")
            parts.append("*".join(f))
        return " + ".join(parts)

    def evaluate(self, precision: int = DEFAULT_PRECISION):
        with mp.workprec(precision + 16):
            total = mp.mpf(0)
            r2, rpi = mp.sqrt(2), mp.sqrt(mp.pi)
            for (s, p), v in sorted(self.terms.items()):
                total += mp.mpf(v.numerator) / v.denominator * r2**s * rpi**p
        with mp.workprec(precision):
            return +total


SQRT2 = SqrtPiNumber({(1, 0): 1})
SQRT_PI = SqrtPiNumber({(0, 1): 1})


def double_factorial(n: int) -> int:
    """n!! with (-1)!! = 0!! = 1."""
    out = 1
    while n > 1:
        out *= n
        n -= 2
    return out


@lru_cache(maxsize=None)
def gamma_half_integer(x: Fraction) -> SqrtPiNumber | None:
    """Gamma(x) for x in Z/2, exactly; None at the poles x = 0, -1, -2, ...

    Built from Gamma(1) = 1 and Gamma(1/2) = sqrt(pi) by x Gamma(x) = Gamma(x+1).
    """
    x = Fraction(x)
    if x.denominator not in (1, 2):
        raise ValueError(f"{x} is not a half-integer")
    if x.denominator == 1 and x <= 0:
        return None
    val = SqrtPiNumber.rational(1) if x.denominator == 1 else SQRT_PI
    base = Fraction(1) if x.denominator == 1 else Fraction(1, 2)
    while base < x:
        val = val * base
        base += 1
    while base > x:
        base -= 1
        val = val * (1 / base)
    return val


@lru_cache(maxsize=None)
def _moment_full(k: int) -> SqrtPiNumber:
    """Integral over R of u^k e^{-u^2}."""
    if k % 2:
        return SqrtPiNumber()
    return gamma_half_integer(Fraction(k + 1, 2))


@lru_cache(maxsize=None)
def _moment_half(k: int) -> SqrtPiNumber:
    """Integral over [0, inf) of s^k e^{-s^2} = Gamma((k+1)/2) / 2."""
    return gamma_half_integer(Fraction(k + 1, 2)) * Fraction(1, 2)


@lru_cache(maxsize=None)
def _moment_doubled(k: int) -> SqrtPiNumber:
    """Integral over R of u^k e^{-2u^2} = sqrt(pi/2) (k-1)!! / 4^(k/2) for even k."""
    if k % 2:
        return SqrtPiNumber()
    m = k // 2
    return SQRT2 * SQRT_PI * Fraction(double_factorial(2 * m - 1), 2 * 4**m)


@lru_cache(maxsize=None)
def _pair_halfplane(a: int, b: int) -> SqrtPiNumber:
    """Integral of x^a y^b e^{-x^2-y^2} over x >= y.

    Rotate to t = (x+y)/sqrt2, s = (x-y)/sqrt2 with s >= 0.
    """
    total = SqrtPiNumber()
    for i in range(a + 1):
        for j in range(b + 1):
            if (i + j) % 2:
                continue
            c = comb(a, i) * comb(b, j) * (-1) ** (b - j)
            total = total + _moment_full(i + j) * _moment_half(a - i + b - j) * c
    # 2^{-(a+b)/2}
    d = a + b
    scale = SqrtPiNumber.rational(Fraction(1, 2 ** (d // 2)))
    if d % 2:
        scale = scale * SQRT2 * Fraction(1, 2)
    return total * scale


def halfspace_integral_exact(P: MultiPoly, alpha: int, beta: int) -> SqrtPiNumber:
    """Integral of P(u) e^{-u.u} over {u_alpha >= u_beta}; alpha, beta are 1-based."""
    a, b = alpha - 1, beta - 1
    total = SqrtPiNumber()
    for e, c in P.terms.items():
        if any(k % 2 for i, k in enumerate(e) if i not in (a, b)):
            continue
        term = _pair_halfplane(e[a], e[b])
        for i, k in enumerate(e):
            if i not in (a, b):
                term = term * _moment_full(k)
        total = total + term * c
    return total


def gaussian_halfspace_integral(P: MultiPoly, alpha: int, beta: int,
                                precision: int = DEFAULT_PRECISION):
    """Numeric value of :func:`halfspace_integral_exact` at ``precision`` bits."""
    if precision < 64:
        raise ValueError("precision must be at least 64 bits")
    return halfspace_integral_exact(P, alpha, beta).evaluate(precision)


def merged_integral_exact(P: MultiPoly, alpha: int, beta: int) -> SqrtPiNumber:
    """Integral over R^{N-1} of P(u) e^{-u.u} after setting u_alpha := u_beta."""
    a, b = alpha - 1, beta - 1
    Q = P.merge_variable(a, b)
    total = SqrtPiNumber()
    for e, c in Q.terms.items():
        if any(k % 2 for k in e):
            continue
        term = _moment_doubled(e[b])
        for i, k in enumerate(e):
            if i not in (a, b):
                term = term * _moment_full(k)
        total = total + term * c
    return total


@lru_cache(maxsize=None)
def _boundary_integrals(cfg: ResidueConfig, R: int) -> dict[tuple[int, int], SqrtPiNumber]:
    """I_{j,k} = integral of P_k for C_j, for j + k <= R - 2.

    P_0 = C_j and P_{k+1} = d/du_alpha P_k - 2 u_alpha P_k, so that the k-th
    u_alpha derivative of C_j e^{-u.u} is P_k e^{-u.u}.
    """
    C = _c_polynomials_cached(cfg, R)
    a = cfg.alpha - 1
    ua = MultiPoly.variable(cfg.N, a)
    out = {}
    for j in range(R - 1):
        P = C[j]
        for k in range(R - 1 - j):
            out[j, k] = merged_integral_exact(P, cfg.alpha, cfg.beta)
            P = P.diff(a) - ua * P * 2
    return out


@lru_cache(maxsize=None)
def _bulk_integrals(cfg: ResidueConfig, R: int) -> tuple[SqrtPiNumber, ...]:
    C = _c_polynomials_cached(cfg, R)
    return tuple(halfspace_integral_exact(C[j], cfg.alpha, cfg.beta) for j in range(R))


@lru_cache(maxsize=None)
def v_exact(cfg: ResidueConfig, m: int, R: int) -> dict[tuple[int, int], SqrtPiNumber]:
    """Exact V_{j,r} for j + r + N <= R - 1, residue gap m."""
    N = cfg.N
    W = w_for_residue(N, m, R)
    bulk = _bulk_integrals(cfg, R)
    bound = _boundary_integrals(cfg, R)
    out = {}
    for j in range(R):
        out[j, -N] = bulk[j] * Fraction(1, N**N)
        for r in range(1 - N, R - j - N):
            k = r + N - 1
            out[j, r] = bound[j, k] * (W[k] / N ** (N - 1))
    return out


@lru_cache(maxsize=None)
def e_exact(cfg: ResidueConfig, m: int, R: int) -> tuple[SqrtPiNumber, ...]:
    """E_0..E_{R-1} with E_t = sum_{j <= t} V_{j, t-j-N}."""
    V = v_exact(cfg, m, R)
    N = cfg.N
    out = []
    for t in range(R):
        acc = SqrtPiNumber()
        for j in range(t + 1):
            acc = acc + V[j, t - j - N]
        out.append(acc)
    return tuple(out)


def v_coefficients(cfg: ResidueConfig, ell, j: int, r_range, precision: int = DEFAULT_PRECISION):
    """{r: V_{j,r}} at ``precision`` bits for r in ``r_range`` (each r >= -N)."""
    rs = list(r_range)
    if any(r < -cfg.N for r in rs):
        raise ValueError(f"V_{{j,r}} is defined for r >= {-cfg.N}")
    m = residue_gap(cfg, ell)
    R = max([j + r + cfg.N + 1 for r in rs] + [j + 1])
    V = v_exact(cfg, m, R)
    return {r: V[j, r].evaluate(precision) for r in rs}


# ---------------------------------------------------------------------------
# The ladder

@dataclass(frozen=True)
class ExpansionLadder:
    cfg: ResidueConfig
    res: int
    R: int
    precision: int
    W: list
    V: dict
    E: list
    E_exact: tuple = field(repr=False)
    E_error: list = field(repr=False)

    def to_json(self) -> str:
        return json.dumps({
            "N": self.cfg.N,
            "K": self.cfg.K,
            "alpha": self.cfg.alpha,
            "beta": self.cfg.beta,
            "res": self.res,
            "precision": self.precision,
            "E": [decimal_str(x, self.precision) for x in self.E],
        })


def e_coefficients(cfg: ResidueConfig, ell, R: int,
                   precision: int = DEFAULT_PRECISION) -> ExpansionLadder:
    """Compute the ladder W, V, E for class ``ell`` up to order R.

    ``E_error`` holds the relative change of each E_r when the working
    precision is doubled.
    """
    if R < 1:
        raise ValueError("R must be >= 1")
    if precision < 32:
        raise ValueError("precision must be at least 32 bits")
    m = residue_gap(cfg, ell)
    Ex = e_exact(cfg, m, R)
    Vx = v_exact(cfg, m, R)
    E = [x.evaluate(precision) for x in Ex]
    E2 = [x.evaluate(2 * precision) for x in Ex]
    with mp.workprec(2 * precision):
        err = [abs(a - b) / abs(b) if b else abs(a - b) for a, b in zip(E, E2)]
    with mp.workprec(precision):
        W = [mp.mpf(w.numerator) / w.denominator for w in w_for_residue(cfg.N, m, R)]
    V = {k: v.evaluate(precision) for k, v in Vx.items()}
    return ExpansionLadder(cfg, m, R, precision, W, V, E, Ex, err)


# ---------------------------------------------------------------------------
# Circle-method coefficients

def _rising(x: Fraction, k: int) -> Fraction:
    out = Fraction(1)
    for i in range(k):
        out *= x + i
    return out


def c_abr(A, B, r: int, precision: int = DEFAULT_PRECISION):
    """c_{A,B,r} = (-1/(4B))^r B^(A+1/2) Gamma(A+r+3/2) / (2 sqrt(pi) r! Gamma(A-r+3/2)).

    A is a half-integer.  The Gamma quotient equals the rising factorial
    (A-r+3/2)_{2r}, which is 0 exactly when 1/Gamma(A-r+3/2) is.
    """
    A = Fraction(A)
    if A.denominator not in (1, 2) or A < 0:
        raise ValueError("A must be a nonnegative half-integer")
    if r < 0:
        raise ValueError("r must be >= 0")
    ratio = _rising(A - r + Fraction(3, 2), 2 * r)
    with mp.workprec(precision + 16):
        B = mp.mpf(B)
        if B <= 0:
            raise ValueError("B must be positive")
        val = (
            (-1 / (4 * B)) ** r
            * mp.power(B, mp.mpf(A.numerator) / A.denominator + mp.mpf(1) / 2)
            * (mp.mpf(ratio.numerator) / ratio.denominator)
            / (2 * mp.sqrt(mp.pi) * factorial(r))
        )
    with mp.workprec(precision):
        return +val


def saddle_B(N: int, precision: int = DEFAULT_PRECISION):
    """B = (pi/2) sqrt(N/3)."""
    with mp.workprec(precision):
        return mp.pi / 2 * mp.sqrt(mp.mpf(N) / 3)
