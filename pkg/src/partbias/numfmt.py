"""Decimal strings that round-trip through mpmath at a given precision."""
from __future__ import annotations

import mpmath
from mpmath import mp
from mpmath.libmp import repr_dps


def decimal_str(x, precision: int) -> str:
    """Scientific-notation string s with mpf(s) == x at ``precision`` bits."""
    with mp.workprec(precision):
        x = mp.mpf(x)
        return mpmath.nstr(x, repr_dps(precision), strip_zeros=False, min_fixed=1, max_fixed=0)


def complex_str(z, precision: int) -> str:
    """'a+bi' form; both parts round-trip like :func:`decimal_str`."""
    with mp.workprec(precision):
        z = mp.mpc(z)
        re, im = decimal_str(z.real, precision), decimal_str(abs(z.imag), precision)
        sign = "-" if z.imag < 0 else "+"
        return f"{re}{sign}{im}i"


def parse_decimal(s: str, precision: int):
    with mp.workprec(precision):
        return mp.mpf(s)


def parse_complex(s: str, precision: int):
    s = s.strip()
    if not s.endswith("i"):
        raise ValueError(f"not a complex literal: {s!r}")
    body = s[:-1]
    # split at the sign that is not part of an exponent
    for k in range(len(body) - 1, 0, -1):
        if body[k] in "+-" and body[k - 1] not in "eE":
            with mp.workprec(precision):
                return mp.mpc(mp.mpf(body[:k]), mp.mpf(body[k:]))
    raise ValueError(f"not a complex literal: {s!r}")
