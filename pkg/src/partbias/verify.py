"""Verification suites: each check returns a JSON-ready record with a pass flag."""
from __future__ import annotations

import itertools
from fractions import Fraction

from mpmath import mp

from .asymptotics import MOD3_CONSTANTS, lattice_class_count, scaled_difference
from .core import ResidueConfig, count_bias_table, quad_data
from .numfmt import complex_str, decimal_str
from .poly import MultiPoly
from .qseries import EvaluationPoint, expansion_numeric, g_function_numeric, lambda_y, s_y
from .saddle import (
    DEFAULT_PRECISION,
    bernoulli_number,
    c_abr,
    c_polynomials,
    e_coefficients,
    saddle_B,
    w_for_residue,
)

SUITES = ("conjectures", "expansion", "lemmas")


def _rec(check, ok, **kw):
    return {"check": check, "pass": bool(ok), **kw}


# ---------------------------------------------------------------------------
# sign claims and limiting constants

def first_stable_index(values, predicate, start: int = 0):
    """Smallest n0 >= start with predicate(values[n]) for all n0 <= n < len(values)."""
    n0 = len(values)
    for n in range(len(values) - 1, start - 1, -1):
        if not predicate(values[n], n):
            break
        n0 = n
    return n0


def conjectures_suite(nmax: int = 2000, precision: int = DEFAULT_PRECISION):
    out = []
    t0 = count_bias_table(ResidueConfig(2, 0), nmax)
    bad = [n for n in range(20, nmax + 1) if t0.diff[n] <= 0]
    out.append(_rec("parity_bias_K0_positive", not bad, n_from=20, n_to=nmax,
                    violations=bad[:10]))

    t1 = count_bias_table(ResidueConfig(2, 1), nmax)
    thr = first_stable_index(t1.diff, lambda d, n: d < 0, start=1)
    out.append(_rec("parity_bias_K1_negative", thr <= nmax, threshold=thr, n_to=nmax))

    t3 = count_bias_table(ResidueConfig(3, 0), nmax)
    signs = (1, 1, -1)
    n0 = first_stable_index(t3.diff, lambda d, n: d * signs[n % 3] > 0, start=1)
    out.append(_rec("mod3_sign_pattern", n0 <= nmax, stable_from=n0, n_to=nmax))

    if nmax >= 1000:
        with mp.workprec(precision):
            c0 = 1 / (8 * mp.sqrt(6))
            v = scaled_difference(t0.diff[nmax], nmax, precision)
            out.append(_rec("parity_constant_K0", abs(v / c0 - 1) <= 0.25, n=nmax,
                            scaled=decimal_str(v, 53), target=decimal_str(c0, 53), rel_tol=0.25))
            for n in range(nmax - 2, nmax + 1):
                c = MOD3_CONSTANTS[n % 3]
                target = mp.mpf(c.numerator) / c.denominator
                v = scaled_difference(t3.diff[n], n, precision)
                out.append(_rec("mod3_constant", abs(v / target - 1) <= 0.30 and v * target > 0,
                                n=n, residue=n % 3, scaled=decimal_str(v, 53),
                                target=str(c), rel_tol=0.30))
    return out


# ---------------------------------------------------------------------------
# ladder closed forms and the g-versus-expansion grid

def expansion_closed_forms(precision: int = DEFAULT_PRECISION, tol: float = 1e-10):
    out = []
    for N, K in itertools.product((2, 3, 4), (0, 1, 2)):
        cfg = ResidueConfig(N, K)
        e = quad_data(cfg).e
        C = c_polynomials(cfg, 2)
        c1 = MultiPoly(N)
        for j in range(N):
            u = MultiPoly.variable(N, j)
            c1 = c1 - u * (Fraction(j + 1, N) + e[j]) + u**3 / 3
        out.append(_rec("C0_C1_exact", C[0] == 1 and C[1] == c1, N=N, K=K))
        for m in range(1, N + 1):
            ell = [0] * N
            ell[cfg.alpha - 1] = m % N
            lad = e_coefficients(cfg, ell, 2, precision)
            with mp.workprec(precision):
                e0 = mp.pi ** (mp.mpf(N) / 2) / (2 * mp.mpf(N) ** N)
                e1 = mp.pi ** (mp.mpf(N - 1) / 2) / (2 * mp.sqrt(2) * mp.mpf(N) ** (N - 1)) * (
                    1 - mp.mpf(2 * m) / N
                    + mp.mpf(cfg.beta - cfg.alpha + N * (e[cfg.beta - 1] - e[cfg.alpha - 1])) / N**2)
                r0 = abs(lad.E[0] / e0 - 1)
                r1 = abs(lad.E[1] / e1 - 1)
            out.append(_rec("E0_closed_form", r0 < tol, N=N, K=K, res=m, rel_err=float(r0)))
            out.append(_rec("E1_closed_form", r1 < tol, N=N, K=K, res=m, rel_err=float(r1)))
    for N in (2, 3, 4, 5, 6):
        with mp.workprec(precision):
            B = saddle_B(N, precision)
            a = c_abr(0, B, 0, precision)
            ta = mp.mpf(N) ** (mp.mpf(1) / 4) / (2 * mp.sqrt(2) * mp.mpf(3) ** (mp.mpf(1) / 4))
            b = c_abr(Fraction(1, 2), B, 0, precision)
            tb = mp.sqrt(mp.pi * N / 3) / 4
            out.append(_rec("c_0_B_0", abs(a / ta - 1) < 1e-12, N=N, rel_err=float(abs(a / ta - 1))))
            out.append(_rec("c_half_B_0", abs(b / tb - 1) < 1e-12, N=N, rel_err=float(abs(b / tb - 1))))
    return out


def expansion_grid(cfg: ResidueConfig = ResidueConfig(2, 0), eps_grid=(0.08, 0.04, 0.02),
                   R: int = 2, precision: int = DEFAULT_PRECISION):
    """|g - expansion(R)| / |expansion| per class on real z; must shrink with eps."""
    out = []
    for ell in itertools.product(range(cfg.N), repeat=cfg.N):
        errs = []
        for eps in eps_grid:
            pt = EvaluationPoint(eps, 0.0, precision)
            g = g_function_numeric(cfg, ell, pt)
            ex = expansion_numeric(cfg, ell, pt, R)
            with mp.workprec(precision):
                rel = abs(g.value - ex) / abs(ex)
            errs.append(rel)
            out.append({"check": "g_vs_expansion", "ell": list(ell), "epsilon": eps, "y": 0.0,
                        "R": R, "g": complex_str(g.value, precision),
                        "expansion": complex_str(ex, precision),
                        "rel_err": float(rel), "tail_bound": float(g.tail_bound),
                        "pass": bool(g.tail_bound < abs(g.value) * mp.mpf(2) ** (-precision / 2))})
        mono = all(b < a for a, b in zip(errs, errs[1:]))
        out.append(_rec("g_vs_expansion_monotone", mono, ell=list(ell), R=R,
                        rel_errs=[float(x) for x in errs]))
    return out


def expansion_suite(precision: int = DEFAULT_PRECISION):
    return expansion_closed_forms(precision) + expansion_grid(precision=precision)


# ---------------------------------------------------------------------------
# lemmas

def euler_maclaurin_gaussian(N: int, m: int, h, a, R: int, precision: int = DEFAULT_PRECISION):
    """Error of sum_{t in m + N Z>=0} f(a + t h) against the W-expansion, f = e^{-x^2}.

    The expansion is (1/(N h)) int_a^inf f + sum_{r<R} W_r f^{(r)}(a) h^r.
    """
    W = w_for_residue(N, m, R)
    with mp.workprec(precision):
        h, a = mp.mpf(h), mp.mpf(a)
        f = lambda x: mp.exp(-x * x)
        lhs = mp.nsum(lambda k: f(a + (m + N * k) * h), [0, mp.inf])
        rhs = mp.sqrt(mp.pi) / 2 * mp.erfc(a) / (N * h)
        for r, w in enumerate(W):
            deriv = (-1) ** r * mp.hermite(r, a) * f(a)
            rhs += mp.mpf(w.numerator) / w.denominator * deriv * h**r
        return abs(lhs - rhs)


def lemmas_suite(precision: int = DEFAULT_PRECISION):
    out = []
    for N in (5, 6):
        counts = {lattice_class_count(N, r, la, lb, alpha, beta)
                  for r, la, lb in itertools.product(range(N), repeat=3)
                  for alpha, beta in ((1, 2), (N, 1))}
        out.append(_rec("lattice_class_count", counts == {N ** (N - 3)}, N=N,
                        counts=sorted(counts), expected=N ** (N - 3)))
    for N in (3, 4):
        tot = {sum(lattice_class_count(N, r, la, lb) for r in range(N))
               for la, lb in itertools.product(range(N), repeat=2)}
        out.append(_rec("lattice_class_mass", tot == {N ** (N - 2)}, N=N))

    for N in (2, 3, 4, 5):
        with mp.workprec(precision):
            s0 = s_y(0, N, precision)
            out.append(_rec("s_at_zero", abs(s0) < mp.mpf(2) ** (-precision + 8), N=N,
                            value=decimal_str(s0, 53)))
            worst = max(s_y(mp.mpf(k) / 100, N, precision) for k in range(-300, 301) if k)
            out.append(_rec("s_negative_grid", worst < 0, N=N, max_value=decimal_str(worst, 53)))
            y = mp.mpf("1e-3")
            lim = N * (mp.log(2) ** 2 - mp.pi**2 / 12)
            d = abs(s_y(y, N, precision) / y**2 - lim)
            out.append(_rec("s_quadratic_limit", d < 1e-4, N=N, abs_err=float(d)))
            lam = lambda_y(0, N, precision)
            target = mp.pi**2 * N / 12
            rel = abs(lam - target) / target
            out.append(_rec("rogers_dilog_lambda0", rel < mp.mpf(10) ** -30, N=N,
                            rel_err=decimal_str(rel, 53)))
            sym = abs(lambda_y(0.7, N, precision) - mp.conj(lambda_y(-0.7, N, precision)))
            out.append(_rec("lambda_conjugate_symmetry", sym < mp.mpf(2) ** (-precision + 8), N=N))

    for N, m in ((2, 1), (2, 2), (3, 1), (3, 2), (4, 3)):
        errs = [euler_maclaurin_gaussian(N, m, 0.05, 0.3, R, precision) for R in (2, 4, 6, 8)]
        ok = all(b < a for a, b in zip(errs, errs[1:])) and errs[-1] < 1e-9
        out.append(_rec("euler_maclaurin_W", ok, N=N, res=m,
                        abs_errs=[float(e) for e in errs]))

    # the plain formula on a Gaussian: sum_{n>=0} f(n h + a)
    with mp.workprec(precision):
        h, a = mp.mpf("0.05"), mp.mpf("0.3")
        f = lambda x: mp.exp(-x * x)
        lhs = mp.nsum(lambda k: f(a + k * h), [0, mp.inf])
        rhs = mp.sqrt(mp.pi) / 2 * mp.erfc(a) / h + f(a) / 2
        for r in range(1, 7):
            B = bernoulli_number(2 * r)
            d = (-1) ** (2 * r - 1) * mp.hermite(2 * r - 1, a) * f(a)
            rhs -= mp.mpf(B.numerator) / B.denominator * h ** (2 * r - 1) / mp.factorial(2 * r) * d
        err = abs(lhs - rhs)
        out.append(_rec("euler_maclaurin_plain", err < 1e-12, abs_err=float(err)))
    return out


def run_suite(name: str, nmax: int = 2000, precision: int = DEFAULT_PRECISION):
    if name == "conjectures":
        return conjectures_suite(nmax, precision)
    if name == "expansion":
        return expansion_suite(precision)
    if name == "lemmas":
        return lemmas_suite(precision)
    raise ValueError(f"unknown suite {name!r}; choose from {', '.join(SUITES)}")
