"""Asymptotic formulas for d_{alpha,beta;N}^{[K]}(n)."""
from __future__ import annotations

import itertools
import json
from dataclasses import dataclass, field
from fractions import Fraction

from mpmath import mp

from .core import ResidueConfig, _class_weight, quad_data, smallest_positive_residue
from .numfmt import decimal_str
from .saddle import DEFAULT_PRECISION, c_abr, e_coefficients, saddle_B

MAX_ENUM_N = 6


class DomainError(ValueError):
    """A formula was requested outside the range where it holds."""


@dataclass(frozen=True)
class AsymptoticEstimate:
    n: int
    order: int
    value: object
    terms: list = field(default_factory=list)  # [(r, value)]
    source: str = ""
    precision: int = DEFAULT_PRECISION

    def to_json(self) -> str:
        s = lambda x: decimal_str(x, self.precision)
        return json.dumps({
            "n": self.n,
            "R": self.order,
            "value": s(self.value),
            "terms": [{"r": r, "value": s(v)} for r, v in self.terms],
        })


def _check_guard(N: int, allow_large_N: bool) -> None:
    if N > MAX_ENUM_N and not allow_large_N:
        raise DomainError(
            f"N={N} exceeds the class-enumeration guard N <= {MAX_ENUM_N}; "
            "pass allow_large_N=True, or use main_simplified (valid for N=2 and N>=5)"
        )


def _check_n(n: int) -> None:
    if n < 1:
        raise ValueError("n must be >= 1")


def class_residue(cfg: ResidueConfig, ell) -> int:
    """N*H(l) mod N, computed exactly."""
    qd = quad_data(cfg)
    return sum(_class_weight(qd, j, x) for j, x in enumerate(ell)) % cfg.N


def _other_residue_counts(cfg: ResidueConfig) -> list[int]:
    """How many choices of the coordinates j != alpha, beta give each N*H residue."""
    N, qd = cfg.N, quad_data(cfg)
    counts = [1] + [0] * (N - 1)
    for j in range(N):
        if j in (cfg.alpha - 1, cfg.beta - 1):
            continue
        step = [0] * N
        for x in range(N):
            step[_class_weight(qd, j, x) % N] += 1
        counts = [sum(counts[a] * step[(r - a) % N] for a in range(N)) for r in range(N)]
    return counts


def class_weights(cfg: ResidueConfig, n: int) -> dict[int, int]:
    """{m: #{l : N H(l) = n mod N and [l_alpha - l_beta]_N = m}}."""
    N, qd = cfg.N, quad_data(cfg)
    a, b = cfg.alpha - 1, cfg.beta - 1
    rest = _other_residue_counts(cfg)
    out: dict[int, int] = {}
    for la, lb in itertools.product(range(N), repeat=2):
        r = (_class_weight(qd, a, la) + _class_weight(qd, b, lb)) % N
        c = rest[(n - r) % N]
        if c:
            m = smallest_positive_residue(la - lb, N)
            out[m] = out.get(m, 0) + c
    return dict(sorted(out.items()))


def admissible_classes(cfg: ResidueConfig, n: int):
    """Lexicographic list of l in (Z/NZ)^N with N H(l) = n mod N."""
    return [ell for ell in itertools.product(range(cfg.N), repeat=cfg.N)
            if class_residue(cfg, ell) == n % cfg.N]


def lattice_class_count(N: int, r: int, ell_alpha: int, ell_beta: int,
                        alpha: int = 1, beta: int = 2, K: int = 0) -> int:
    """#{l_[2] in (Z/NZ)^{N-2} : N H(l_[2], l_alpha, l_beta) = r mod N}.

    N H mod N does not depend on K, but it does depend on which
    coordinates are alpha and beta.
    """
    if N < 3:
        raise ValueError("need N >= 3 for a nonempty complement")
    cfg = ResidueConfig(N, K, alpha, beta)
    qd = quad_data(cfg)
    base = _class_weight(qd, alpha - 1, ell_alpha % N) + _class_weight(qd, beta - 1, ell_beta % N)
    return _other_residue_counts(cfg)[(r - base) % N]


def _growth(n: int):
    return mp.exp(mp.pi * mp.sqrt(mp.mpf(n) / 3))


def main_two_term(cfg: ResidueConfig, n: int, precision: int = DEFAULT_PRECISION,
                  allow_large_N: bool = False) -> AsymptoticEstimate:
    """Leading term plus the n^{-1/4} correction, summed over admissible classes."""
    _check_guard(cfg.N, allow_large_N)
    _check_n(n)
    N, K, al, be = cfg.N, cfg.K, cfg.alpha, cfg.beta
    e = quad_data(cfg).e
    with mp.workprec(precision + 20):
        s3 = mp.mpf(3) ** (mp.mpf(1) / 4)
        pref = _growth(n) / (2 ** (K + 3) * s3 * mp.mpf(N) ** (N - 1) * mp.mpf(n) ** (mp.mpf(3) / 4))
        corr = 1 / (2 * s3 * mp.sqrt(N) * mp.mpf(n) ** (mp.mpf(1) / 4))
        t0 = t1 = mp.mpf(0)
        for m, cnt in class_weights(cfg, n).items():
            num = N * N - 2 * N * m + be - al + N * (e[be - 1] - e[al - 1])
            t0 += cnt * pref
            t1 += cnt * pref * num * corr
    with mp.workprec(precision):
        terms = [(0, +t0), (1, +t1)]
        return AsymptoticEstimate(n, 2, +(t0 + t1), terms, "main_two_term", precision)


def main_simplified(cfg: ResidueConfig, n: int,
                    precision: int = DEFAULT_PRECISION) -> AsymptoticEstimate:
    """Residue-independent two-term formula, valid for N = 2 and N >= 5."""
    if cfg.N in (3, 4):
        raise DomainError("the simplified formula needs N=2 or N>=5; use main_two_term for N=3,4")
    _check_n(n)
    N, K, al, be = cfg.N, cfg.K, cfg.alpha, cfg.beta
    e = quad_data(cfg).e
    with mp.workprec(precision + 20):
        s3 = mp.mpf(3) ** (mp.mpf(1) / 4)
        t0 = _growth(n) / (2 ** (K + 3) * s3 * mp.mpf(n) ** (mp.mpf(3) / 4))
        num = -N + be - al + N * (e[be - 1] - e[al - 1])
        t1 = t0 * num / (2 * s3 * mp.sqrt(N) * mp.mpf(n) ** (mp.mpf(1) / 4))
    with mp.workprec(precision):
        return AsymptoticEstimate(n, 2, +(t0 + t1), [(0, +t0), (1, +t1)],
                                  "main_simplified", precision)


def parity_bias_estimate(K: int, n: int, precision: int = DEFAULT_PRECISION):
    """(-1)^K e^{pi sqrt(n/3)} / (2^{K+3} sqrt(6) n) for N = 2."""
    _check_n(n)
    with mp.workprec(precision):
        return (-1) ** K * _growth(n) / (2 ** (K + 3) * mp.sqrt(6) * n)


MOD3_CONSTANTS = (Fraction(1, 24), Fraction(1, 6), Fraction(-1, 12))


def mod3_bias_estimate(n: int, precision: int = DEFAULT_PRECISION):
    """Leading N=3, K=0 difference, branch chosen by n mod 3."""
    _check_n(n)
    c = MOD3_CONSTANTS[n % 3]
    with mp.workprec(precision):
        return c.numerator * _growth(n) / (c.denominator * n)


def scaled_difference(diff: int, n: int, precision: int = DEFAULT_PRECISION):
    """diff * n * e^{-pi sqrt(n/3)}."""
    with mp.workprec(precision):
        return mp.mpf(diff) * n / _growth(n)


def full_series_estimate(cfg: ResidueConfig, n: int, R: int,
                         precision: int = DEFAULT_PRECISION,
                         allow_large_N: bool = False) -> AsymptoticEstimate:
    """Truncated circle-method series with orders r < R."""
    _check_guard(cfg.N, allow_large_N)
    _check_n(n)
    if R < 1:
        raise ValueError("R must be >= 1")
    N, K = cfg.N, cfg.K
    weights = class_weights(cfg, n)
    wp = precision + 20
    with mp.workprec(wp):
        B = saddle_B(N, wp)
        ladders = {}
        for m in weights:
            ell = [0] * N
            ell[cfg.alpha - 1] = m % N
            ladders[m] = e_coefficients(cfg, ell, R, wp).E
        pref = _growth(n) / (mp.mpf(2) ** (K + mp.mpf(1) / 2) * mp.pi ** (mp.mpf(N) / 2))
        ratio = mp.mpf(N) / n
        terms = []
        for r in range(R):
            acc = mp.mpf(0)
            for j in range(r // 2 + 1):
                c = c_abr(Fraction(r, 2) - j, B, j, wp)
                if not c:
                    continue
                acc += c * sum(cnt * ladders[m][r - 2 * j] for m, cnt in weights.items())
            terms.append((r, pref * acc * ratio ** (mp.mpf(r + 3) / 4)))
        total = mp.fsum(t for _, t in terms)
    with mp.workprec(precision):
        return AsymptoticEstimate(n, R, +total, [(r, +t) for r, t in terms],
                                  "full_series", precision)


def difference_estimate(cfg: ResidueConfig, n: int, R: int = 2,
                        precision: int = DEFAULT_PRECISION):
    """Series estimate of d_{alpha,beta}(n) - d_{beta,alpha}(n)."""
    a = full_series_estimate(cfg, n, R, precision)
    b = full_series_estimate(cfg.swapped(), n, R, precision)
    with mp.workprec(precision):
        return a.value - b.value
