"""Direct numerics for the restricted Nahm sums and the analytic side-lemmas.

All direct summations return a value together with a certified bound on
the discarded tail; nothing is assumed converged.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from mpmath import mp

from .core import ResidueConfig, quad_data
from .saddle import DEFAULT_PRECISION, check_ell, e_coefficients


class TailBoundError(RuntimeError):
    """The truncated sum could not certify its tail below the target."""


@dataclass(frozen=True)
class EvaluationPoint:
    epsilon: float
    y: float = 0.0
    precision: int = DEFAULT_PRECISION
    max_terms: int = 20000

    def __post_init__(self):
        if not self.epsilon > 0:
            raise ValueError("epsilon must be positive")

    @property
    def z(self):
        with mp.workprec(self.precision):
            return mp.mpf(self.epsilon) * mp.mpc(1, self.y)


@dataclass(frozen=True)
class Certified:
    value: object
    tail_bound: object

    def __iter__(self):
        return iter((self.value, self.tail_bound))


def _guard_bits(N: int, eps: float, y: float) -> int:
    """Bits lost to cancellation: terms reach e^{pi^2 N/(12 eps)}, the sum is e^{Re(pi^2 N/(12 z))}."""
    loss = (mp.pi**2 * N / (12 * eps)) * (1 - 1 / (1 + y * y)) / mp.log(2)
    return int(loss) + 20


def _class_terms(h, z, eps, residue: int, N: int, tol, max_terms: int):
    """Terms a(m) = e^{-h(m) z} / (e^{-z}; e^{-z})_m for m = residue mod N.

    Also returns the majorants A(m) (same formula with z -> eps, q -> |q|)
    and a bound on the class tail beyond the last kept m.  The step ratio
    rho(m) = A(m+1)/A(m) = e^{-(m+1/2+b) eps} / (1 - e^{-(m+1) eps}) decreases
    in m, so A(m + kN) <= A(m) rho(m)^k and the tail is geometric.
    """
    q, qa = mp.exp(-z), mp.exp(-eps)
    poch, poch_a = mp.mpc(1), mp.mpf(1)
    vals, majs = [], []
    peak = mp.mpf(0)
    for m in range(max_terms + 1):
        if m:
            poch *= 1 - q**m
            poch_a *= 1 - qa**m
        if m % N != residue:
            continue
        hm = h(m)
        A = mp.exp(-hm * eps) / poch_a
        vals.append(mp.exp(-hm * z) / poch)
        majs.append(A)
        peak = max(peak, A)
        rho = mp.exp(-(m + mp.mpf(1) / 2 + h.bf) * eps) / (1 - qa ** (m + 1))
        if rho < 1:
            tail = A * rho / (1 - rho)
            if tail < tol * peak:
                return vals, majs, tail
    raise TailBoundError(f"no certified tail within {max_terms} terms")


class _H:
    """h_j(m) = m^2/2 + b_j m as a callable carrying b_j."""

    def __init__(self, b: Fraction):
        self.b = b
        self.bf = mp.mpf(b.numerator) / b.denominator

    def __call__(self, m: int):
        v = Fraction(m * m, 2) + self.b * m
        return mp.mpf(v.numerator) / v.denominator


def g_function_numeric(cfg: ResidueConfig, ell, point: EvaluationPoint) -> Certified:
    """g_l(z) = sum over n_alpha > n_beta, n = l mod N of e^{-H(n) z} / prod (e^{-z};e^{-z})_{n_j}.

    The summand factorises over coordinates, so the sum is a product of
    one-dimensional sums times the (alpha, beta) pair sum, which is done
    with prefix sums.
    """
    N = cfg.N
    check_ell(N, ell)
    if point.epsilon > 0.2 or abs(point.y) > 1:
        raise ValueError("validation regime is eps <= 0.2, |y| <= 1")
    qd = quad_data(cfg)
    a, b = cfg.alpha - 1, cfg.beta - 1
    prec = point.precision
    wp = prec + _guard_bits(N, point.epsilon, point.y)
    with mp.workprec(wp):
        z = mp.mpf(point.epsilon) * mp.mpc(1, point.y)
        eps = mp.mpf(point.epsilon)
        tol = mp.mpf(2) ** (-prec)
        data = [_class_terms(_H(qd.b[j]), z, eps, ell[j], N, tol, point.max_terms)
                for j in range(N)]

        value = mp.mpc(1)
        maj_trunc = mp.mpf(1)
        maj_full = mp.mpf(1)
        for j in range(N):
            if j in (a, b):
                continue
            vals, majs, tail = data[j]
            value *= mp.fsum(vals)
            s = mp.fsum(majs)
            maj_trunc *= s
            maj_full *= s + tail

        # pair sum over m_alpha > m_beta; classes fix the residues, so
        # compare actual indices
        va, ma, ta = data[a]
        vb, mb, tb = data[b]
        pair = mp.mpc(0)
        pre = mp.mpc(0)
        ib = 0
        for ia, x in enumerate(va):
            na = ell[a] + N * ia
            while ib < len(vb) and ell[b] + N * ib < na:
                pre += vb[ib]
                ib += 1
            pair += x * pre
        value *= pair
        sa, sb = mp.fsum(ma), mp.fsum(mb)
        maj_trunc *= sa * sb
        maj_full *= (sa + ta) * (sb + tb)
        tail = maj_full - maj_trunc
        if tail > mp.mpf(2) ** (-prec / 2) * abs(value):
            raise TailBoundError(
                f"tail bound {mp.nstr(tail, 5)} not below 2^(-{prec}/2) |g| = {mp.nstr(abs(value), 5)}"
            )
    with mp.workprec(prec):
        return Certified(+value, +tail)


def expansion_numeric(cfg: ResidueConfig, ell, point: EvaluationPoint, R: int):
    """e^{pi^2 N/(12 z)} / (2^{K+1/2} pi^{N/2}) * sum_{r<R} E_{l,r} z^{r/2}, principal sqrt."""
    N, K = cfg.N, cfg.K
    prec = point.precision
    ladder = e_coefficients(cfg, ell, R, prec + 20)
    with mp.workprec(prec + 20):
        z = mp.mpf(point.epsilon) * mp.mpc(1, point.y)
        sz = mp.sqrt(z)
        s = mp.fsum(E * sz**r for r, E in enumerate(ladder.E))
        val = mp.exp(mp.pi**2 * N / (12 * z)) / (mp.mpf(2) ** (K + mp.mpf(1) / 2) * mp.pi ** (mp.mpf(N) / 2)) * s
        if point.y == 0:
            val = mp.mpc(val.real, 0)
    with mp.workprec(prec):
        return +val


def dilog_series(w, precision: int = DEFAULT_PRECISION) -> Certified:
    """Li_2(w) = sum w^k / k^2 for |w| <= 1/2, with geometric tail bound."""
    with mp.workprec(precision + 10):
        w = mp.mpc(w)
        r = abs(w)
        if r > 0.5 + 1e-12:
            raise ValueError("series used only for |w| <= 1/2")
        tol = mp.mpf(2) ** (-precision - 4)
        total, p, k = mp.mpc(0), mp.mpc(1), 0
        while True:
            k += 1
            p *= w
            total += p / k**2
            tail = r ** (k + 1) / ((k + 1) ** 2 * (1 - r))
            if tail < tol or r == 0:
                break
    with mp.workprec(precision):
        return Certified(+total, +tail)


def lambda_y(y, N: int, precision: int = DEFAULT_PRECISION):
    """Lambda(y) = N (pi^2/6 - log(2)^2 (1+iy)^2 / 2 - Li_2(2^{-(1+iy)}))."""
    with mp.workprec(precision + 10):
        s = mp.mpc(1, y)
        w = mp.exp(-s * mp.log(2))
        li2 = dilog_series(w, precision + 10).value
        val = N * (mp.pi**2 / 6 - mp.log(2) ** 2 * s**2 / 2 - li2)
    with mp.workprec(precision):
        return +val


def s_y(y, N: int, precision: int = DEFAULT_PRECISION):
    """s(y) = Re(Lambda(y)/(1+iy) - pi^2 N / 12)."""
    with mp.workprec(precision + 10):
        v = (lambda_y(y, N, precision + 10) / mp.mpc(1, y)).real - mp.pi**2 * N / 12
    with mp.workprec(precision):
        return +v


def log_pochhammer_asym(z, precision: int = DEFAULT_PRECISION):
    """pi^2/(6z) + Log(z/(2 pi))/2 - z/24, the expansion of -Log (q;q)_inf, q = e^{-z}."""
    with mp.workprec(precision):
        z = mp.mpc(z)
        if z.real <= 0:
            raise ValueError("need Re(z) > 0")
        return mp.pi**2 / (6 * z) + mp.log(z / (2 * mp.pi)) / 2 - z / 24


def log_pochhammer_direct(z, precision: int = DEFAULT_PRECISION) -> Certified:
    """-sum_k Log(1 - q^k) with tail bound.

    The sum of principal logarithms is the analytic branch that the
    asymptotic formula describes; it can differ from the principal Log of
    the product by multiples of 2 pi i once |Im| exceeds pi.
    """
    with mp.workprec(precision + 10):
        z = mp.mpc(z)
        if z.real <= 0:
            raise ValueError("need Re(z) > 0")
        q = mp.exp(-z)
        r = abs(q)
        tol = mp.mpf(2) ** (-precision - 4)
        total, p, k = mp.mpc(0), mp.mpc(1), 0
        while True:
            k += 1
            p *= q
            total -= mp.log(1 - p)
            rk = r ** (k + 1)
            tail = rk / ((1 - r) * (1 - rk))
            if tail < tol:
                break
    with mp.workprec(precision):
        return Certified(+total, +tail)
