"""Exact counting of residue biases for partitions into distinct parts.

For a modulus N, a floor K and two residue labels alpha != beta in 1..N,
``d_ab(n)`` counts partitions of n into distinct parts, all larger than K,
having strictly more parts congruent to alpha than parts congruent to beta
(mod N).  ``d_ba`` is the same count with the roles swapped, and ``d_eq``
counts the partitions where both classes appear equally often.

Three independent routes are provided:

* :func:`count_bias_table` -- the production kernel.  The Euler product
  prod_{k>K} (1 + t^{sigma(k)} q^k) factorises over residue classes, so the
  class-alpha and class-beta factors are expanded by number of parts and
  recombined with big-integer (Kronecker packed) series products.
* :func:`signed_part_distribution` -- the plain (weight, signed count) DP
  over the same product, kept small and literal.
* :func:`enumerate_oracle` and :func:`nahm_lattice_oracle` -- brute force
  and the quadratic-form lattice sum respectively.
"""
from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import dataclass
from fractions import Fraction
from itertools import product
from typing import Iterator, Sequence

import gmpy2

ENUMERATION_LIMIT = 60


class DimensionError(ValueError):
    """A vector argument does not have length N."""


def smallest_positive_residue(l: int, N: int) -> int:
    """Return the representative of ``l`` mod ``N`` lying in ``1..N``."""
    r = l % N
    return r if r else N


@dataclass(frozen=True)
class ResidueConfig:
    N: int
    K: int = 0
    alpha: int = 1
    beta: int = 2

    def __post_init__(self):
        if self.N < 2:
            raise ValueError(f"N must be >= 2, got {self.N}")
        if self.K < 0:
            raise ValueError(f"K must be >= 0, got {self.K}")
        for name in ("alpha", "beta"):
            v = getattr(self, name)
            if not 1 <= v <= self.N:
                raise ValueError(f"{name} must lie in 1..N={self.N}, got {v}")
        if self.alpha == self.beta:
            raise ValueError("alpha and beta must differ")

    def swapped(self) -> "ResidueConfig":
        return ResidueConfig(self.N, self.K, self.beta, self.alpha)

    def residue_sign(self, k: int) -> int:
        """+1 for parts in class alpha, -1 for class beta, 0 otherwise."""
        r = smallest_positive_residue(k, self.N)
        if r == self.alpha:
            return 1
        if r == self.beta:
            return -1
        return 0


@dataclass(frozen=True)
class QuadraticData:
    e: tuple[int, ...]
    b: tuple[Fraction, ...]

    @property
    def N(self) -> int:
        return len(self.e)


def quad_data(cfg: ResidueConfig) -> QuadraticData:
    N, K = cfg.N, cfg.K
    e = tuple(K // N + (1 if j < K % N else 0) for j in range(N))
    b = tuple(Fraction(j + 1, N) - Fraction(1, 2) + e[j] for j in range(N))
    assert sum(e) == K and sum(b) == K + Fraction(1, 2)
    return QuadraticData(e, b)


def quad_form_H(n: Sequence[int], qd: QuadraticData) -> Fraction:
    """H(n) = n.n/2 + b.n as an exact rational."""
    if len(n) != qd.N:
        raise DimensionError(f"expected a vector of length {qd.N}, got {len(n)}")
    return sum((Fraction(x * x, 2) + bj * x for x, bj in zip(n, qd.b)), Fraction(0))


def _class_weight(qd: QuadraticData, j: int, m: int) -> int:
    """N*h_j(m): the weight of the m smallest admissible parts of class j+1."""
    w = qd.N * (Fraction(m * m, 2) + qd.b[j] * m)
    assert w.denominator == 1
    return int(w)


def max_parts(n_max: int) -> int:
    """Upper bound on the number of distinct parts in a partition of n <= n_max."""
    return math.ceil((math.isqrt(8 * n_max + 1) - 1) / 2) if n_max > 0 else 0


# --------------------------------------------------------------------------
# bias table


@dataclass(frozen=True)
class BiasTable:
    cfg: ResidueConfig
    n_max: int
    d_ab: tuple[int, ...]
    d_ba: tuple[int, ...]
    d_eq: tuple[int, ...] | None = None

    def __post_init__(self):
        if len(self.d_ab) != self.n_max + 1 or len(self.d_ba) != self.n_max + 1:
            raise ValueError("table length does not match n_max")

    @property
    def diff(self) -> tuple[int, ...]:
        return tuple(a - b for a, b in zip(self.d_ab, self.d_ba))

    def rows(self) -> Iterator[tuple[int, int, int, int]]:
        for n, (a, b) in enumerate(zip(self.d_ab, self.d_ba)):
            yield n, a, b, a - b

    def row(self, n: int) -> tuple[int, int, int]:
        return self.d_ab[n], self.d_ba[n], self.d_ab[n] - self.d_ba[n]

    def to_csv(self, start: int = 0) -> str:
        return rows_to_csv(r for r in self.rows() if r[0] >= start)

    def to_json(self, start: int = 0) -> str:
        return json.dumps(
            [
                {"n": n, "d_ab": str(a), "d_ba": str(b), "diff": str(d)}
                for n, a, b, d in self.rows()
                if n >= start
            ]
        )


def rows_to_csv(rows, header=("n", "d_ab", "d_ba", "diff")) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for r in rows:
        w.writerow([str(x) for x in r])
    return buf.getvalue()


def bias_table_from_json(text: str, cfg: ResidueConfig) -> BiasTable:
    rows = json.loads(text)
    rows.sort(key=lambda r: r["n"])
    if [r["n"] for r in rows] != list(range(len(rows))):
        raise ValueError("rows must cover 0..n_max")
    return BiasTable(
        cfg,
        len(rows) - 1,
        tuple(int(r["d_ab"]) for r in rows),
        tuple(int(r["d_ba"]) for r in rows),
    )


# --------------------------------------------------------------------------
# packed series arithmetic
#
# A truncated series with nonnegative integer coefficients c_0..c_L is stored
# as the integer sum c_i 2^(w i) for a slot width w large enough that no
# product coefficient can spill into the next slot.


class _Packer:
    def __init__(self, n_max: int, coeff_bound_bits: int):
        bits = 2 * coeff_bound_bits + (n_max + 1).bit_length() + 1
        self.nbytes = (bits + 7) // 8
        self.width = 8 * self.nbytes
        self.length = n_max + 1
        self.mask = (gmpy2.mpz(1) << (self.width * self.length)) - 1

    def pack(self, coeffs: Sequence[int]) -> gmpy2.mpz:
        nb = self.nbytes
        raw = b"".join(int(c).to_bytes(nb, "little") for c in coeffs[: self.length])
        return gmpy2.mpz(int.from_bytes(raw, "little"))

    def unpack(self, x: gmpy2.mpz) -> list[int]:
        nb = self.nbytes
        raw = int(x & self.mask).to_bytes(nb * self.length, "little")
        return [int.from_bytes(raw[i * nb:(i + 1) * nb], "little") for i in range(self.length)]

    def mul(self, x: gmpy2.mpz, y: gmpy2.mpz) -> gmpy2.mpz:
        return (x * y) & self.mask


def _partition_bound_bits(n_max: int) -> int:
    # p(n) < exp(pi sqrt(2n/3)) bounds every coefficient that occurs below
    return int(math.pi * math.sqrt(2 * n_max / 3) / math.log(2)) + 2


def _class_series_by_parts(qd: QuadraticData, j: int, n_max: int) -> list[list[int]]:
    """Series S_m(q) = q^{N h_j(m)} / (q^N; q^N)_m for m = 0, 1, ... while nonzero.

    S_m counts partitions of n into exactly m distinct parts taken from residue
    class j+1 (mod N), all larger than K.
    """
    N = qd.N
    L = n_max // N
    pochhammer_inv = [1] + [0] * L  # 1/(x;x)_m in x = q^N, updated in place
    out = []
    m = 0
    while True:
        shift = _class_weight(qd, j, m)
        if shift > n_max:
            break
        if m > 0:
            for i in range(m, L + 1):
                pochhammer_inv[i] += pochhammer_inv[i - m]
        s = [0] * (n_max + 1)
        for i in range((n_max - shift) // N + 1):
            s[shift + N * i] = pochhammer_inv[i]
        out.append(s)
        m += 1
    return out


def count_bias_table(cfg: ResidueConfig, n_max: int) -> BiasTable:
    """Exact d_ab, d_ba, d_eq for 0 <= n <= n_max."""
    if n_max < 0:
        raise ValueError("n_max must be >= 0")
    qd = quad_data(cfg)
    a, b = cfg.alpha - 1, cfg.beta - 1
    T = max_parts(n_max)
    A = _class_series_by_parts(qd, a, n_max)
    B = _class_series_by_parts(qd, b, n_max)
    assert len(A) - 1 <= T and len(B) - 1 <= T, "part-count bound violated"

    pk = _Packer(n_max, _partition_bound_bits(n_max))

    other = pk.pack([1])
    for c in range(cfg.N):
        if c in (a, b):
            continue
        total = [sum(col) for col in zip(*_class_series_by_parts(qd, c, n_max))]
        other = pk.mul(other, pk.pack(total))

    def tails(series):
        acc = [0] * (n_max + 1)
        out = [None] * (len(series) + 1)
        out[len(series)] = pk.pack(acc)
        for m in range(len(series) - 1, -1, -1):
            acc = [x + y for x, y in zip(acc, series[m])]
            out[m] = pk.pack(acc)
        return out

    A_packed = [pk.pack(s) for s in A]
    B_packed = [pk.pack(s) for s in B]
    A_tail, B_tail = tails(A), tails(B)
    more_a = sum(
        (B_packed[m] * A_tail[m + 1] for m in range(min(len(B), len(A)))), gmpy2.mpz(0)
    )
    more_b = sum(
        (A_packed[m] * B_tail[m + 1] for m in range(min(len(A), len(B)))), gmpy2.mpz(0)
    )
    equal = sum((A_packed[m] * B_packed[m] for m in range(min(len(A), len(B)))), gmpy2.mpz(0))

    d_ab = pk.unpack(pk.mul(more_a & pk.mask, other))
    d_ba = pk.unpack(pk.mul(more_b & pk.mask, other))
    d_eq = pk.unpack(pk.mul(equal & pk.mask, other))
    return BiasTable(cfg, n_max, tuple(d_ab), tuple(d_ba), tuple(d_eq))


def signed_part_distribution(cfg: ResidueConfig, n_max: int) -> dict[int, list[int]]:
    """Coefficients of prod_{k>K} (1 + t^{sigma(k)} q^k) up to q^n_max.

    Returns ``{t: [coeff of t^t q^n for n = 0..n_max]}``.  This is the direct
    (weight, signed count) dynamic programme; it is quadratic in n_max and
    intended for moderate sizes.
    """
    T = max_parts(n_max)
    rows = {t: [0] * (n_max + 1) for t in range(-T, T + 1)}
    rows[0][0] = 1
    for k in range(cfg.K + 1, n_max + 1):
        s = cfg.residue_sign(k)
        old = {t: r[:] for t, r in rows.items()}
        if s:
            # states pushed past |t| = T would need more than T distinct parts
            assert not any(old[s * T][: n_max - k + 1]), "signed count exceeded bound"
        for t, r in rows.items():
            src = old.get(t - s)
            if src is None:
                continue
            for n in range(k, n_max + 1):
                if src[n - k]:
                    r[n] += src[n - k]
    return {t: r for t, r in rows.items() if any(r)}


def distinct_partition_counts(n_max: int, K: int = 0) -> list[int]:
    """Number of partitions of n into distinct parts all > K, n = 0..n_max."""
    c = [1] + [0] * n_max
    for k in range(K + 1, n_max + 1):
        for n in range(n_max, k - 1, -1):
            c[n] += c[n - k]
    return c


# --------------------------------------------------------------------------
# oracles


def _distinct_partitions(n: int, min_part: int) -> Iterator[list[int]]:
    if n == 0:
        yield []
        return
    for first in range(min_part, n + 1):
        rest = n - first
        if rest == 0:
            yield [first]
        elif rest > first:
            for tail in _distinct_partitions(rest, first + 1):
                yield [first] + tail


def enumerate_oracle(cfg: ResidueConfig, n: int) -> tuple[int, int]:
    """Brute force (d_ab(n), d_ba(n)) by listing every admissible partition."""
    if n > ENUMERATION_LIMIT:
        raise ValueError(f"enumeration refused for n={n} > {ENUMERATION_LIMIT}")
    if n < 0:
        raise ValueError("n must be >= 0")
    ab = ba = 0
    for parts in _distinct_partitions(n, cfg.K + 1):
        t = sum(cfg.residue_sign(p) for p in parts)
        if t > 0:
            ab += 1
        elif t < 0:
            ba += 1
    return ab, ba


def _lattice_terms(qd: QuadraticData, n_max: int):
    """Per-coordinate series q^{N h_j(m)} P_m(q^N) truncated at q^n_max.

    Every h_j(m) is >= 0 on m >= 0, so pruning coordinate-wise on the remaining
    weight budget enumerates exactly the vectors with N*H(n) <= n_max.
    """
    N = qd.N
    L = n_max // N
    terms = []
    for j in range(N):
        poch = [1] + [0] * L
        col = []
        m = 0
        while True:
            w = _class_weight(qd, j, m)
            if w > n_max:
                break
            if m > 0:
                for i in range(m, L + 1):
                    poch[i] += poch[i - m]
            s = [0] * (n_max + 1)
            for i in range((n_max - w) // N + 1):
                s[w + N * i] = poch[i]
            col.append((w, s))
            m += 1
        terms.append(col)
    return terms


def _truncated_mul(x: list[int], y: list[int]) -> list[int]:
    n = len(x)
    out = [0] * n
    for i, xi in enumerate(x):
        if xi:
            for j in range(n - i):
                if y[j]:
                    out[i + j] += xi * y[j]
    return out


def _lattice_walk(qd, n_max, keep):
    """Sum prod_j S_{j, n_j} over lattice vectors with N*H(n) <= n_max and keep(n)."""
    terms = _lattice_terms(qd, n_max)
    N = qd.N
    total = [0] * (n_max + 1)
    one = [1] + [0] * n_max

    def rec(j, budget, vec, acc):
        if j == N:
            if keep(vec):
                for i, v in enumerate(acc):
                    total[i] += v
            return
        for m, (w, s) in enumerate(terms[j]):
            if w > budget:
                break
            rec(j + 1, budget - w, vec + (m,), _truncated_mul(acc, s))

    rec(0, n_max, (), one)
    return total


def nahm_lattice_oracle(cfg: ResidueConfig, n_max: int) -> BiasTable:
    """Bias table from the truncated lattice sum over n in N_0^N."""
    qd = quad_data(cfg)
    a, b = cfg.alpha - 1, cfg.beta - 1
    d_ab = _lattice_walk(qd, n_max, lambda v: v[a] > v[b])
    d_ba = _lattice_walk(qd, n_max, lambda v: v[a] < v[b])
    d_eq = _lattice_walk(qd, n_max, lambda v: v[a] == v[b])
    return BiasTable(cfg, n_max, tuple(d_ab), tuple(d_ba), tuple(d_eq))


def check_lattice_class(ell: Sequence[int], N: int) -> tuple[int, ...]:
    ell = tuple(ell)
    if len(ell) != N:
        raise DimensionError(f"lattice class must have length {N}")
    if any(not 0 <= x < N for x in ell):
        raise ValueError(f"lattice class entries must lie in 0..{N - 1}")
    return ell


def class_restricted_series(cfg: ResidueConfig, ell: Sequence[int], n_max: int) -> list[int]:
    """Coefficients of the partial sum over n in S_{alpha,beta} with n = ell (mod N)."""
    ell = check_lattice_class(ell, cfg.N)
    qd = quad_data(cfg)
    a, b = cfg.alpha - 1, cfg.beta - 1
    N = cfg.N
    return _lattice_walk(
        qd,
        n_max,
        lambda v: v[a] > v[b] and all(x % N == l for x, l in zip(v, ell)),
    )


def lattice_classes(N: int) -> Iterator[tuple[int, ...]]:
    """All ell in (Z/NZ)^N in lexicographic order."""
    return product(range(N), repeat=N)
