import itertools

import pytest
from mpmath import mp

from partbias.asymptotics import (
    DomainError,
    admissible_classes,
    class_residue,
    class_weights,
    difference_estimate,
    full_series_estimate,
    lattice_class_count,
    main_simplified,
    main_two_term,
    mod3_bias_estimate,
    parity_bias_estimate,
    scaled_difference,
)
from partbias.core import ResidueConfig, count_bias_table, quad_data, quad_form_H
from partbias.saddle import residue_gap


def brute_nh(cfg, ell):
    return int(cfg.N * quad_form_H(ell, quad_data(cfg))) % cfg.N


def test_class_residue_matches_quad_form():
    for cfg in (ResidueConfig(3, 2), ResidueConfig(4, 1, 3, 1)):
        for ell in itertools.product(range(cfg.N), repeat=cfg.N):
            assert class_residue(cfg, ell) == brute_nh(cfg, ell)


@pytest.mark.parametrize("cfg", [ResidueConfig(2), ResidueConfig(3, 1), ResidueConfig(4, 2, 2, 4),
                                 ResidueConfig(5, 0, 5, 1)])
def test_class_weights_match_enumeration(cfg):
    for n in range(cfg.N):
        want = {}
        for ell in admissible_classes(cfg, n):
            m = residue_gap(cfg, ell)
            want[m] = want.get(m, 0) + 1
        assert class_weights(cfg, n) == dict(sorted(want.items()))


@pytest.mark.parametrize("N", [3, 4, 5, 6])
def test_lattice_class_count_by_enumeration(N):
    for alpha, beta in ((1, 2), (N, 1), (2, N)):
        cfg = ResidueConfig(N, 0, alpha, beta)
        others = [j for j in range(N) if j not in (alpha - 1, beta - 1)]
        for la, lb in itertools.product(range(N), repeat=2):
            counts = [0] * N
            for rest in itertools.product(range(N), repeat=N - 2):
                ell = [0] * N
                ell[alpha - 1], ell[beta - 1] = la, lb
                for j, x in zip(others, rest):
                    ell[j] = x
                counts[brute_nh(cfg, ell)] += 1
            for r in range(N):
                assert lattice_class_count(N, r, la, lb, alpha, beta) == counts[r]


def test_lattice_class_count_uniform_for_large_n():
    for N in (5, 6):
        assert {lattice_class_count(N, r, a, b) for r, a, b in itertools.product(range(N), repeat=3)} \
            == {N ** (N - 3)}


def test_lattice_class_count_needs_three():
    with pytest.raises(ValueError):
        lattice_class_count(2, 0, 0, 0)


@pytest.mark.parametrize("N", [2, 5, 6])
@pytest.mark.parametrize("K", [0, 1, 2])
def test_two_term_equals_simplified(N, K):
    cfg = ResidueConfig(N, K)
    for n in (10, 100, 1000, 10**4):
        a = main_two_term(cfg, n).value
        b = main_simplified(cfg, n).value
        with mp.workprec(128):
            assert abs(a / b - 1) < 1e-12


@pytest.mark.parametrize("cfg", [ResidueConfig(2, 1), ResidueConfig(3, 0), ResidueConfig(4, 2),
                                 ResidueConfig(5, 1, 3, 5)])
def test_series_r2_equals_two_term(cfg):
    for n in (10, 1000):
        a = full_series_estimate(cfg, n, 2).value
        b = main_two_term(cfg, n).value
        with mp.workprec(128):
            assert abs(a / b - 1) < 1e-10


def test_series_converges_to_exact():
    cfg = ResidueConfig(2, 0)
    n = 1000
    exact = count_bias_table(cfg, n).d_ab[n]
    errs = []
    for R in (2, 3, 5):
        v = full_series_estimate(cfg, n, R).value
        with mp.workprec(128):
            errs.append(abs(v / exact - 1))
    assert errs[0] > errs[1] > errs[2]
    assert errs[2] < 2e-5


def test_difference_estimate_mod3():
    cfg = ResidueConfig(3, 0)
    t = count_bias_table(cfg, 1000)
    for n in (998, 999, 1000):
        est = difference_estimate(cfg, n, R=5)
        with mp.workprec(128):
            assert abs(est / t.diff[n] - 1) < 1e-2


def test_leading_constants_bracket_exact():
    t2 = count_bias_table(ResidueConfig(2, 0), 2000)
    t3 = count_bias_table(ResidueConfig(3, 0), 2000)
    with mp.workprec(128):
        assert abs(t2.diff[2000] / parity_bias_estimate(0, 2000) - 1) < 0.25
        for n in (1998, 1999, 2000):
            r = t3.diff[n] / mod3_bias_estimate(n)
            assert 0.7 < r < 1.3


def test_parity_sign_alternates_with_k():
    assert parity_bias_estimate(1, 100) < 0 < parity_bias_estimate(0, 100)


def test_scaled_difference():
    with mp.workprec(128):
        assert abs(scaled_difference(1, 3) - 3 / mp.exp(mp.pi)) < mp.mpf(2) ** -120


def test_simplified_refuses_n3_n4():
    for N in (3, 4):
        with pytest.raises(DomainError, match="N=2 or N>=5"):
            main_simplified(ResidueConfig(N), 100)


def test_enumeration_guard():
    with pytest.raises(DomainError):
        main_two_term(ResidueConfig(7), 100)
    v = main_two_term(ResidueConfig(7), 100, allow_large_N=True).value
    w = main_simplified(ResidueConfig(7), 100).value
    with mp.workprec(128):
        assert abs(v / w - 1) < 1e-12


def test_estimate_json():
    est = full_series_estimate(ResidueConfig(2), 50, 3)
    text = est.to_json()
    assert text.startswith('{"n": 50, "R": 3, "value": "')
    assert len(est.terms) == 3


def test_bad_arguments():
    with pytest.raises(ValueError):
        full_series_estimate(ResidueConfig(2), 0, 2)
    with pytest.raises(ValueError):
        full_series_estimate(ResidueConfig(2), 10, 0)
