import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from mpmath import mp

from partbias.numfmt import complex_str, decimal_str, parse_complex, parse_decimal

PRECISIONS = (53, 64, 128, 256)


def random_mpf(prec, mant, exp):
    with mp.workprec(prec):
        return mp.ldexp(mp.mpf(mant % (1 << prec)) + 1, exp - prec)


@given(st.integers(0, 2**300), st.integers(-400, 400), st.sampled_from(PRECISIONS), st.booleans())
@settings(max_examples=300, deadline=None)
def test_decimal_round_trip(mant, exp, prec, neg):
    x = random_mpf(prec, mant, exp)
    if neg:
        x = -x
    s = decimal_str(x, prec)
    assert parse_decimal(s, prec) == x


@given(st.integers(0, 2**200), st.integers(0, 2**200), st.integers(-50, 50))
@settings(max_examples=100, deadline=None)
def test_complex_round_trip(a, b, e):
    prec = 128
    with mp.workprec(prec):
        z = mp.mpc(random_mpf(prec, a, e), -random_mpf(prec, b, -e))
    assert parse_complex(complex_str(z, prec), prec) == z


def test_zero_and_shape():
    assert decimal_str(0, 53) == "0.0"
    s = decimal_str(1e-30, 53)
    assert "e-30" in s or "e-31" in s
    assert complex_str(mp.mpc(1, -2), 53).endswith("i")


@pytest.mark.parametrize("bad", ["1+2", "abc"])
def test_parse_complex_rejects(bad):
    with pytest.raises(ValueError):
        parse_complex(bad, 53)
