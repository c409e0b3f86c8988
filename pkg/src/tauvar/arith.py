"""Exact multiplicative-function arithmetic.

Provides:
- integer factorization (trial division, 64-bit inputs)
- the k-fold divisor function tau_k, pointwise and as a segmented sieve
- Euler phi, Moebius mu, and phi_star (the count of primitive characters)
- generic Dirichlet convolution over the divisors of n

tau_k(n) is the number of ordered k-tuples with product n.  On prime powers
tau_k(p^j) = C(k+j-1, k-1), and tau_k is multiplicative, so every pointwise
value is a product of binomials over the prime factorization.  The segmented
sieve computes the same values in bulk by extracting prime exponents for all
n in a window with vectorized division.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import comb, isqrt
from typing import Callable, Iterator, List, Tuple

import numpy as np

__all__ = [
    "MAX_K",
    "MAX_N",
    "DEFAULT_SEGMENT_SIZE",
    "Factorization",
    "TauSegment",
    "factorize",
    "divisors",
    "tau_k_of",
    "tau_k_segment",
    "tau_k_segments",
    "euler_phi",
    "moebius",
    "phi_star",
    "dirichlet_convolve",
    "primes_upto",
]

# tau_k values for k > 16 overflow 64-bit sieve cells routinely; keep the
# same bound on the pointwise path so both routes accept the same inputs.
MAX_K = 16
MAX_N = 2**63 - 1

# Default sieve window: 2^22 entries keeps the working set cache-friendly.
DEFAULT_SEGMENT_SIZE = 1 << 22

# Shadow threshold for the uint64 sieve: a float64 product tracks the true
# value to ~1e-13 relative, so anything certified < 2^62 cannot have wrapped.
_UINT64_SAFE = float(2**62)


@dataclass(frozen=True)
class Factorization:
    """Prime-power decomposition n = prod p^e with p strictly increasing."""

    n: int
    factors: Tuple[Tuple[int, int], ...]

    def primes(self) -> Tuple[int, ...]:
        return tuple(p for p, _ in self.factors)


@dataclass(frozen=True)
class TauSegment:
    """tau_k(n) for n in [lo, hi), exact unsigned 64-bit values."""

    k: int
    lo: int
    hi: int
    values: np.ndarray  # uint64, length hi - lo


def _check_k(k: int) -> None:
    if not isinstance(k, (int, np.integer)) or k < 1:
        raise ValueError(f"k must be a positive integer, got {k!r}")
    if k > MAX_K:
        raise ValueError(f"k = {k} exceeds the supported bound {MAX_K}")


def factorize(n: int) -> Factorization:
    """Canonical factorization of n, 1 <= n <= 2^63 - 1.

    factorize(1) has an empty factor list.  Trial division by 2, 3 and the
    6m+-1 wheel; adequate for the moduli and bounds this package targets,
    not for cryptographic-size inputs.
    """
    if not isinstance(n, (int, np.integer)):
        raise ValueError(f"n must be an integer, got {type(n).__name__}")
    n = int(n)
    if n < 1:
        raise ValueError(f"n must be positive, got {n}")
    if n > MAX_N:
        raise ValueError(f"n = {n} exceeds the supported bound 2^63 - 1")
    factors: List[Tuple[int, int]] = []
    m = n
    for p in (2, 3):
        if m % p == 0:
            e = 0
            while m % p == 0:
                m //= p
                e += 1
            factors.append((p, e))
    p = 5
    while p * p <= m:
        for q in (p, p + 2):
            if m % q == 0:
                e = 0
                while m % q == 0:
                    m //= q
                    e += 1
                factors.append((q, e))
        p += 6
    if m > 1:
        factors.append((m, 1))
    factors.sort()
    return Factorization(n=n, factors=tuple(factors))


def divisors(n: int) -> List[int]:
    """All divisors of n in increasing order."""
    ds = [1]
    for p, e in factorize(n).factors:
        ds = [d * p**i for d in ds for i in range(e + 1)]
    return sorted(ds)


def tau_k_of(k: int, n: int) -> int:
    """Exact tau_k(n) as a product of binomials over prime powers.

    Python integers are unbounded, so the result is always exact.
    """
    _check_k(k)
    fac = factorize(n)
    out = 1
    for _, e in fac.factors:
        out *= comb(k + e - 1, k - 1)
    return out


def primes_upto(n: int) -> np.ndarray:
    """Primes <= n as an int64 array (Eratosthenes)."""
    if n < 2:
        return np.empty(0, dtype=np.int64)
    mask = np.ones(n + 1, dtype=bool)
    mask[:2] = False
    for p in range(2, isqrt(n) + 1):
        if mask[p]:
            mask[p * p :: p] = False
    return np.nonzero(mask)[0].astype(np.int64)


def tau_k_segment(
    k: int,
    lo: int,
    hi: int,
    *,
    segment_cap: int = DEFAULT_SEGMENT_SIZE,
    _primes: np.ndarray | None = None,
) -> TauSegment:
    """Sieve tau_k(n) for all n in [lo, hi).

    The result is independent of how a larger range is cut into segments.
    A float64 shadow product guards the uint64 cells: any window whose true
    values could reach 2^62 is rejected rather than silently wrapped.
    """
    _check_k(k)
    if not (1 <= lo < hi):
        raise ValueError(f"need 1 <= lo < hi, got [{lo}, {hi})")
    if hi - 1 > MAX_N:
        raise ValueError(f"hi = {hi} exceeds the supported bound 2^63 - 1")
    if hi - lo > segment_cap:
        raise ValueError(
            f"segment of {hi - lo} entries exceeds the cap {segment_cap}; "
            f"use tau_k_segments() to stream larger ranges"
        )
    n = hi - lo
    # tau_k(p^j) for j = 0..63 covers every exponent a 64-bit n can carry.
    binom_row = np.array([comb(k + j - 1, k - 1) for j in range(64)], dtype=np.uint64)
    binom_row_f = binom_row.astype(np.float64)
    tau = np.ones(n, dtype=np.uint64)
    shadow = np.ones(n, dtype=np.float64)
    remaining = np.arange(lo, hi, dtype=np.int64)
    ps = primes_upto(isqrt(hi - 1)) if _primes is None else _primes
    for p in ps:
        p = int(p)
        if p * p >= hi:
            break
        start = -(-lo // p) * p
        idx = np.arange(start - lo, n, p)
        if idx.size == 0:
            continue
        r = remaining[idx] // p
        e = np.ones(idx.size, dtype=np.int64)
        sub = np.nonzero(r % p == 0)[0]
        while sub.size:
            r[sub] //= p
            e[sub] += 1
            sub = sub[r[sub] % p == 0]
        remaining[idx] = r
        tau[idx] *= binom_row[e]
        shadow[idx] *= binom_row_f[e]
    # leftover cofactor is 1 or a single prime > sqrt(hi)
    big = remaining > 1
    tau[big] *= np.uint64(k)
    shadow[big] *= float(k)
    if float(shadow.max()) >= _UINT64_SAFE:
        raise OverflowError(
            f"tau_{k} exceeds the 64-bit sieve range on [{lo}, {hi}); "
            f"use tau_k_of for exact big-integer values"
        )
    return TauSegment(k=k, lo=lo, hi=hi, values=tau)


def tau_k_segments(
    k: int, lo: int, hi: int, segment_size: int = DEFAULT_SEGMENT_SIZE
) -> Iterator[TauSegment]:
    """Stream tau_k over [lo, hi) in ascending windows of segment_size."""
    if segment_size < 1:
        raise ValueError("segment_size must be positive")
    ps = primes_upto(isqrt(hi - 1))
    for s_lo in range(lo, hi, segment_size):
        s_hi = min(s_lo + segment_size, hi)
        yield tau_k_segment(k, s_lo, s_hi, segment_cap=segment_size, _primes=ps)


def euler_phi(n: int) -> int:
    """Euler's totient."""
    out = 1
    for p, e in factorize(n).factors:
        out *= p ** (e - 1) * (p - 1)
    return out


def moebius(n: int) -> int:
    """Moebius mu: 0 on non-squarefree n, else (-1)^(number of prime factors)."""
    fac = factorize(n)
    for _, e in fac.factors:
        if e > 1:
            return 0
    return -1 if len(fac.factors) % 2 else 1


def dirichlet_convolve(f: Callable[[int], int], g: Callable[[int], int], n: int):
    """(f * g)(n) = sum over n = a*b of f(a) g(b); exact when f, g are exact."""
    total = 0
    for a in divisors(n):
        total += f(a) * g(n // a)
    return total


def phi_star(q: int) -> int:
    """Number of primitive characters mod q, via phi_star = mu * phi."""
    return dirichlet_convolve(moebius, euler_phi, q)
