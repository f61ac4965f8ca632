import itertools
from fractions import Fraction

import pytest
import sympy
from mpmath import mp

from partbias.core import ResidueConfig, quad_data
from partbias.poly import MultiPoly
from partbias.saddle import (
    SQRT2,
    SQRT_PI,
    SqrtPiNumber,
    bernoulli_number,
    bernoulli_poly,
    c_abr,
    c_polynomials,
    double_factorial,
    e_coefficients,
    e_exact,
    gamma_half_integer,
    gaussian_halfspace_integral,
    halfspace_integral_exact,
    merged_integral_exact,
    phi_series,
    polylog_neg_half,
    saddle_B,
    v_coefficients,
    w_coefficients,
    w_for_residue,
)


def mpf(q: Fraction):
    return mp.mpf(q.numerator) / q.denominator


# -- Bernoulli data and Li_{-k}(1/2) --------------------------------------

@pytest.mark.parametrize("r", range(0, 13))
def test_bernoulli_poly_matches_sympy(r):
    x = sympy.Symbol("x")
    want = sympy.Poly(sympy.bernoulli(r, x), x)
    got = bernoulli_poly(r)
    for k in range(r + 1):
        c = want.coeff_monomial(x**k)
        assert got.coefficient((k,)) == Fraction(int(c.p), int(c.q))


def test_bernoulli_convention():
    assert bernoulli_number(1) == Fraction(-1, 2)
    assert bernoulli_number(2) == Fraction(1, 6)
    assert bernoulli_number(3) == 0


def test_polylog_neg_half_known():
    assert [polylog_neg_half(k) for k in range(6)] == [1, 2, 6, 26, 150, 1082]


@pytest.mark.parametrize("k", range(1, 12))
def test_polylog_is_twice_fubini(k):
    # Li_{-k}(1/2) = 2 * (number of ordered set partitions of a k-set)
    fubini = sum(sympy.functions.combinatorial.numbers.stirling(k, j) * sympy.factorial(j)
                 for j in range(k + 1))
    assert polylog_neg_half(k) == 2 * int(fubini)
    with mp.workprec(80):
        assert abs(mp.polylog(-k, 0.5) - mpf(polylog_neg_half(k))) < 1e-15 * mpf(polylog_neg_half(k))


# -- C_r ------------------------------------------------------------------

def test_c0_c1_closed_form():
    cfg = ResidueConfig(2, 0)
    C = c_polynomials(cfg, 3)
    u1, u2 = MultiPoly.variable(2, 0), MultiPoly.variable(2, 1)
    assert C[0] == 1
    assert C[1] == -Fraction(1, 2) * u1 - u2 + (u1**3 + u2**3) / 3


def test_phi_has_no_constant_and_first_coefficient_is_c1():
    cfg = ResidueConfig(3, 2)
    phi = phi_series(cfg, 4)
    assert phi[0] == 0
    assert phi[1] == c_polynomials(cfg, 2)[1]


@pytest.mark.parametrize("N,K", [(2, 0), (3, 1), (4, 2)])
def test_c_degree_bound(N, K):
    for r, c in enumerate(c_polynomials(ResidueConfig(N, K), 6)):
        assert c.degree() <= 3 * r


def _log_qq(z):
    # Dedekind eta transformation, exact including the dual product
    qq = mp.exp(-4 * mp.pi**2 / z)
    return mp.log(mp.sqrt(2 * mp.pi / z)) - mp.pi**2 / (6 * z) + z / 24 + mp.log(mp.qp(qq, qq))


def _log_aq(a, q):
    # Log (a; q)_inf = -sum_m a^m / (m (1 - q^m)) for |a| < 1
    s, m = mp.mpf(0), 1
    while True:
        t = a**m / (m * (1 - q**m))
        s -= t
        m += 1
        if abs(t) < mp.mpf(2) ** (-mp.prec - 10):
            return s


@pytest.mark.parametrize("N,K", [(2, 1), (3, 0)])
def test_c_polynomials_against_summand(N, K):
    """Sum C_r z^{r/2} reproduces the exact summand near the saddle.

    The truncation error after R terms must scale like z^{R/2}; this checks
    C_0..C_4 without sharing any code with the formal-series engine.
    """
    cfg = ResidueConfig(N, K)
    qd = quad_data(cfg)
    C = c_polynomials(cfg, 5)
    u = [Fraction(3, 10), Fraction(-1, 5), Fraction(1, 7)][:N]
    errs = {}
    with mp.workprec(200):
        for zs in ("1e-3", "1e-4"):
            z = mp.mpf(zs)
            q = mp.exp(-z)
            n = [mp.log(2) / z + mpf(x) / mp.sqrt(z) for x in u]
            H = sum(nj**2 / 2 + mpf(b) * nj for nj, b in zip(n, qd.b))
            lg = -H * z + sum(_log_aq(q ** (nj + 1), q) - _log_qq(z) for nj in n)
            lp = (N * mp.log(z / mp.pi) / 2 + mp.pi**2 * N / (12 * z)
                  - sum(mpf(x) ** 2 for x in u) - (K + mp.mpf(1) / 2) * mp.log(2))
            ratio = mp.exp(lg - lp)
            errs[zs] = [abs(ratio - sum(mpf(C[r](*u)) * z ** (mp.mpf(r) / 2) for r in range(R)))
                        for R in range(1, 6)]
        for R in range(1, 6):
            slope = mp.log10(errs["1e-3"][R - 1] / errs["1e-4"][R - 1])
            assert abs(slope - R / 2) < 0.3, (R, slope)


# -- W_r ------------------------------------------------------------------

@pytest.mark.parametrize("N", range(2, 8))
def test_w_is_bernoulli_polynomial(N):
    # the boundary coefficients collapse to -B_{r+1}(m/N) N^r / (r+1)!
    for m in range(1, N + 1):
        W = w_for_residue(N, m, 8)
        for r, w in enumerate(W):
            B = bernoulli_poly(r + 1)(Fraction(m, N))
            assert w == -B * Fraction(N**r, sympy.factorial(r + 1))


def test_w0():
    assert w_coefficients(ResidueConfig(3), (2, 0, 0), 1) == [Fraction(1, 2) - Fraction(2, 3)]


def test_w_rejects_bad_gap():
    with pytest.raises(ValueError):
        w_for_residue(3, 0, 2)


# -- exact arithmetic and Gaussian integrals ------------------------------

def test_sqrt_pi_number_arithmetic():
    assert SQRT2 * SQRT2 == SqrtPiNumber.rational(2)
    x = SQRT_PI * SQRT_PI + SQRT2
    with mp.workprec(100):
        assert abs(x.evaluate(100) - (mp.pi + mp.sqrt(2))) < mp.mpf(2) ** -95


@pytest.mark.parametrize("x", [Fraction(k, 2) for k in range(-9, 14)])
def test_gamma_half_integer(x):
    g = gamma_half_integer(x)
    if x.denominator == 1 and x <= 0:
        assert g is None
        return
    with mp.workprec(120):
        assert abs(g.evaluate(120) / mp.gamma(mpf(x)) - 1) < mp.mpf(2) ** -110


def test_double_factorial():
    assert [double_factorial(n) for n in range(-1, 8)] == [1, 1, 1, 2, 3, 8, 15, 48, 105]


@pytest.mark.parametrize("a,b", [(0, 0), (1, 0), (0, 1), (2, 1), (3, 3), (1, 4)])
def test_halfspace_integral_quadrature(a, b):
    # integral over u1 >= u2 of u1^a u2^b e^{-u1^2 - u2^2}
    P = MultiPoly(2, {(a, b): 1})
    got = gaussian_halfspace_integral(P, 1, 2, 64)
    with mp.workprec(64):
        f = lambda u2: mp.quad(lambda u1: u1**a * u2**b * mp.exp(-u1 * u1 - u2 * u2), [u2, mp.inf])
        want = mp.quad(f, [-mp.inf, 0, mp.inf])
        assert abs(got - want) < 1e-15


def test_halfspace_integral_extra_variable():
    # the third coordinate is integrated over the whole line
    P = MultiPoly(3, {(1, 0, 2): 1})
    v = halfspace_integral_exact(P, 1, 2).evaluate(80)
    with mp.workprec(80):
        want = mp.sqrt(mp.pi) / 2 * mp.sqrt(mp.pi) / (2 * mp.sqrt(2))
        assert abs(v - want) < 1e-20


def test_halfspace_precision_floor():
    with pytest.raises(ValueError):
        gaussian_halfspace_integral(MultiPoly.constant(2), 1, 2, 53)


def test_merged_integral():
    # u_alpha := u_beta then integrate u^2 e^{-2u^2} over R
    P = MultiPoly(2, {(1, 1): 1})
    with mp.workprec(80):
        want = mp.quad(lambda u: u * u * mp.exp(-2 * u * u), [-mp.inf, mp.inf])
        assert abs(merged_integral_exact(P, 1, 2).evaluate(80) - want) < 1e-20


# -- ladder ----------------------------------------------------------------

def test_e_values_n2():
    lad = e_coefficients(ResidueConfig(2), (0, 0), 4, 128)
    with mp.workprec(128):
        want = [mp.pi / 8, -3 * mp.sqrt(2) * mp.sqrt(mp.pi) / 32, mp.pi / 384,
                -19 * mp.sqrt(2) * mp.sqrt(mp.pi) / 1024]
        for a, b in zip(lad.E, want):
            assert abs(a - b) < mp.mpf(10) ** -35
    assert all(e < 1e-30 for e in lad.E_error)


@pytest.mark.parametrize("N,K", list(itertools.product((2, 3, 4), (0, 1, 2))))
def test_e0_e1_closed_forms(N, K):
    cfg = ResidueConfig(N, K)
    e = quad_data(cfg).e
    for m in range(1, N + 1):
        E = [x.evaluate(128) for x in e_exact(cfg, m, 2)]
        with mp.workprec(128):
            e0 = mp.pi ** (mp.mpf(N) / 2) / (2 * mp.mpf(N) ** N)
            e1 = mp.pi ** (mp.mpf(N - 1) / 2) / (2 * mp.sqrt(2) * mp.mpf(N) ** (N - 1)) * (
                1 - mp.mpf(2 * m) / N + mp.mpf(cfg.beta - cfg.alpha + N * (e[1] - e[0])) / N**2)
            assert abs(E[0] / e0 - 1) < 1e-30
            assert abs(E[1] / e1 - 1) < 1e-30


def test_e_depends_on_gap_only():
    cfg = ResidueConfig(3, 1)
    a = e_coefficients(cfg, (1, 0, 2), 3).E
    b = e_coefficients(cfg, (2, 1, 0), 3).E
    assert a == b


def test_v_coefficients_assemble_e():
    cfg = ResidueConfig(2, 1)
    R = 4
    lad = e_coefficients(cfg, (1, 0), R)
    N = cfg.N
    with mp.workprec(128):
        for t in range(R):
            total = mp.fsum(v_coefficients(cfg, (1, 0), j, [t - j - N], 128)[t - j - N] for j in range(t + 1))
            assert abs(total - lad.E[t]) < mp.mpf(10) ** -30


def test_ladder_json():
    text = e_coefficients(ResidueConfig(2), (1, 0), 2).to_json()
    assert text.startswith('{"N": 2, "K": 0, "alpha": 1, "beta": 2, "res": 1, "precision": 128, "E": ["')


def test_ladder_rejects_bad_ell():
    with pytest.raises(ValueError):
        e_coefficients(ResidueConfig(2), (0, 2), 2)


# -- c_{A,B,r} -------------------------------------------------------------

def test_c_closed_forms():
    for N in range(2, 7):
        with mp.workprec(128):
            B = saddle_B(N)
            a = mp.mpf(N) ** 0.25 / (2 * mp.sqrt(2) * mp.mpf(3) ** 0.25)
            b = mp.sqrt(mp.pi * N / 3) / 4
            assert abs(c_abr(0, B, 0) / a - 1) < 1e-30
            assert abs(c_abr(Fraction(1, 2), B, 0) / b - 1) < 1e-30


def test_c_zero_at_gamma_pole():
    # 1/Gamma(A - r + 3/2) vanishes once A - r + 3/2 is a nonpositive integer
    assert c_abr(Fraction(1, 2), 1, 2) == 0
    assert c_abr(Fraction(1, 2), 1, 3) == 0
    assert c_abr(Fraction(1, 2), 1, 1) != 0
    assert c_abr(1, 1, 5) != 0


@pytest.mark.parametrize("A", [0, Fraction(1, 2), 1, Fraction(3, 2), 3])
def test_c_ratios_give_bessel_asymptotics(A):
    """c_{A,B,r}/c_{A,B,0} (2B)^r are the Hankel coefficients of I_{A+1}.

    So sum_r c_r / c_0 (2B)^r / x^r must track e^{-x} sqrt(2 pi x) I_{A+1}(x)
    with error of the size of the first omitted term.
    """
    with mp.workprec(128):
        B = mp.mpf("1.3")
        x = mp.mpf(60)
        c0 = c_abr(A, B, 0)
        want = mp.exp(-x) * mp.sqrt(2 * mp.pi * x) * mp.besseli(mpf(Fraction(A)) + 1, x)
        approx = mp.mpf(0)
        for r in range(8):
            term = c_abr(A, B, r) / c0 * (2 * B) ** r / x**r
            approx += term
        nxt = abs(c_abr(A, B, 8) / c0 * (2 * B) ** 8 / x**8)
        assert abs(approx - want) <= 2 * nxt + mp.mpf(10) ** -30


def test_c_rejects_bad_a():
    with pytest.raises(ValueError):
        c_abr(Fraction(1, 3), 1, 0)
    with pytest.raises(ValueError):
        c_abr(0, -1, 0)
