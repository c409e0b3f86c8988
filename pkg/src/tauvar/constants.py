"""Constants of the conjectural variance main term a_k(d) gamma_k(c) X (log d)^(k^2-1).

Pieces:
- local Euler factors L_p(k) = sum_j tau_k(p^j)^2 p^(-j), in closed form
  (1 - 1/p)^-(2k-1) * sum_{j<k} C(k-1,j)^2 p^(-j) and as a direct series;
- a_k as a truncated Euler product with a conservative tail estimate, and
  a_k(d) = a_k / prod_{p | d} L_p(k);
- gamma_k(c): the closed form (k-c)^(k^2-1)/(k^2-1)! on [k-1, k), the exact
  three-branch degree-8 piecewise polynomial for k = 3, and a stratified
  Monte-Carlo evaluator of the Vandermonde-squared integral on the simplex
  slice {w in [0,1]^k : sum w = c};
- the moment constants g_k = (k^2)! prod_{j<k} j!/(j+k)! and the exact
  rational check k^2! int_0^k gamma_k = g_k for k <= 3.

All rational arithmetic is exact (fractions.Fraction); Monte Carlo uses a
counter-based Philox generator keyed by (seed, chunk) so results are
bit-reproducible for any worker partition.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from math import comb, factorial
from typing import Dict, Sequence, Tuple

import numpy as np

from .arith import factorize, euler_phi, phi_star, divisors
from .specfun import barnes_g

__all__ = [
    "ConstantValue",
    "PiecewisePolynomial",
    "GAMMA2_PIECEWISE",
    "GAMMA3_PIECEWISE",
    "local_factor",
    "local_factor_series",
    "a_k_value",
    "a_k_d",
    "gamma_k_simple",
    "gamma_3_piecewise",
    "gamma_3_piecewise_exact",
    "gamma_k_mc",
    "g_k",
    "gamma_integral_check",
    "convolution_compare",
]

_MC_MIN_SAMPLES = 10**4
_MC_MAX_K = 5
_FACT8 = factorial(8)


@dataclass(frozen=True)
class ConstantValue:
    """A computed constant with method tag, error estimate and provenance."""

    value: float
    method: str  # euler-product | closed-form | monte-carlo | piecewise | quadrature
    error_estimate: float
    params: Dict[str, object] = field(default_factory=dict)

    def __post_init__(self) -> None:
        if not (self.error_estimate >= 0.0 and math.isfinite(self.error_estimate)):
            raise ValueError(f"error estimate must be finite and >= 0, got {self.error_estimate}")


def _require_prime(p: int) -> None:
    if factorize(p).factors != ((p, 1),):
        raise ValueError(f"p = {p} is not prime")


def _check_k_bound(k: int, bound: int = 16) -> None:
    if not (1 <= k <= bound):
        raise ValueError(f"k = {k} outside the supported range 1..{bound}")


def local_factor(k: int, p: int, s: float = 1.0, exact: bool = False):
    """L_p(k) at s: (1 - p^-s)^-(2k-1) * sum_{j=0}^{k-1} C(k-1,j)^2 p^(-js).

    s = 1 is the value entering a_k(d); integer s with exact=True returns a
    Fraction.  local_factor_series is the independent direct-series route.
    """
    _check_k_bound(k)
    _require_prime(p)
    if exact:
        if s != int(s):
            raise ValueError("exact evaluation needs integer s")
        ps = Fraction(p) ** int(s)
        poly = sum(Fraction(comb(k - 1, j) ** 2, 1) / ps**j for j in range(k))
        return (1 - 1 / ps) ** (-(2 * k - 1)) * poly
    ps = float(p) ** s
    poly = sum(comb(k - 1, j) ** 2 / ps**j for j in range(k))
    return (1.0 - 1.0 / ps) ** (-(2 * k - 1)) * poly


def local_factor_series(k: int, p: int, s: float = 1.0, rel_tail: float = 1e-15) -> float:
    """Direct series sum_j tau_k(p^j)^2 p^(-js), truncated at relative tail rel_tail.

    tau_k(p^j) = C(k+j-1, k-1) grows polynomially in j, so the tail beyond j
    is below a geometric bound; truncation stops once that bound is a rel_tail
    fraction of the partial sum.
    """
    _check_k_bound(k)
    _require_prime(p)
    ps = float(p) ** s
    total = 0.0
    j = 0
    while True:
        term = comb(k + j - 1, k - 1) ** 2 / ps**j
        total += term
        # ratio of consecutive terms tends to 1/p^s; bound the tail once the
        # binomial growth factor is safely below sqrt(p^s)
        growth = ((k + j) / (j + 1)) ** 2
        if growth < ps * 0.999 and j > 2 * k:
            tail_bound = term * (growth / ps) / (1.0 - growth / ps)
            if tail_bound < rel_tail * total:
                return total
        j += 1


def _ak_log_sum(k: int, prime_bound: int) -> float:
    from .arith import primes_upto

    ps = primes_upto(prime_bound).astype(np.float64)
    logs = (k - 1) ** 2 * np.log1p(-1.0 / ps)
    poly = np.zeros_like(ps)
    for j in range(k):
        poly += comb(k - 1, j) ** 2 / ps**j
    logs = logs + np.log(poly)
    return float(logs.sum())


def a_k_value(k: int, prime_bound: int = 10**6) -> ConstantValue:
    """a_k = prod_p (1-1/p)^((k-1)^2) sum_{j<k} C(k-1,j)^2 p^(-j), truncated.

    Each omitted factor is 1 + O(k^4 / p^2); the reported error bounds the
    log of the omitted product by k^4 * sum_{p > bound} p^-2 <= k^4 / bound.
    """
    _check_k_bound(k)
    if prime_bound < 10**3:
        raise ValueError(f"prime_bound must be >= 1000, got {prime_bound}")
    if k == 1:
        return ConstantValue(1.0, "euler-product", 0.0, {"prime_bound": prime_bound})
    value = math.exp(_ak_log_sum(k, prime_bound))
    tail_log = float(k) ** 4 / prime_bound
    err = value * math.expm1(tail_log)
    return ConstantValue(value, "euler-product", err, {"prime_bound": prime_bound})


def a_k_d(k: int, d: int, prime_bound: int = 10**6) -> ConstantValue:
    """a_k(d) = a_k / prod_{p | d} L_p(k): drop the Euler factors at p | d."""
    ak = a_k_value(k, prime_bound)
    scale = 1.0
    for p, _ in factorize(d).factors:
        scale /= local_factor(k, p)
    return ConstantValue(
        ak.value * scale,
        "euler-product",
        ak.error_estimate * scale,
        {"prime_bound": prime_bound, "d": d},
    )


def gamma_k_simple(k: int, c: float) -> float:
    """gamma_k(c) = (k - c)^(k^2 - 1) / (k^2 - 1)! on its validity range [k-1, k)."""
    _check_k_bound(k)
    if not (k - 1 <= c < k):
        raise ValueError(f"c = {c} outside [k-1, k) = [{k - 1}, {k}) where the closed form holds")
    return (k - c) ** (k * k - 1) / factorial(k * k - 1)


@dataclass(frozen=True)
class PiecewisePolynomial:
    """Branches (lo, hi, coeffs ascending) with exact rational coefficients."""

    branches: Tuple[Tuple[Fraction, Fraction, Tuple[Fraction, ...]], ...]

    def branch_for(self, c: Fraction) -> Tuple[Fraction, ...]:
        last = len(self.branches) - 1
        for i, (lo, hi, coeffs) in enumerate(self.branches):
            if lo <= c < hi or (i == last and c == hi):
                return coeffs
        raise ValueError(f"c = {c} outside the support [{self.branches[0][0]}, {self.branches[-1][1]}]")

    def eval_exact(self, c: Fraction) -> Fraction:
        coeffs = self.branch_for(Fraction(c))
        acc = Fraction(0)
        for a in reversed(coeffs):
            acc = acc * c + a
        return acc

    def eval_float(self, c: float) -> float:
        # exact rational Horner with one final rounding; the expanded branch
        # polynomials cancel catastrophically near their roots in plain float
        return float(self.eval_exact(Fraction(c)))

    def integral(self) -> Fraction:
        """Exact integral over the full support."""
        total = Fraction(0)
        for lo, hi, coeffs in self.branches:
            for i, a in enumerate(coeffs):
                total += a * (hi ** (i + 1) - lo ** (i + 1)) / (i + 1)
        return total


def _frac_coeffs(int_coeffs: Sequence[int], denom: int) -> Tuple[Fraction, ...]:
    return tuple(Fraction(a, denom) for a in int_coeffs)


# gamma_2: c^3/6 on [0,1), (2-c)^3/6 on [1,2]
GAMMA2_PIECEWISE = PiecewisePolynomial(
    branches=(
        (Fraction(0), Fraction(1), _frac_coeffs([0, 0, 0, 1], 6)),
        (Fraction(1), Fraction(2), _frac_coeffs([8, -12, 6, -1], 6)),
    )
)

# gamma_3: the explicit three-branch degree-8 polynomial over 8!
GAMMA3_PIECEWISE = PiecewisePolynomial(
    branches=(
        (Fraction(0), Fraction(1), _frac_coeffs([0, 0, 0, 0, 0, 0, 0, 0, 1], _FACT8)),
        (
            Fraction(1),
            Fraction(2),
            _frac_coeffs([-927, 4392, -8484, 8568, -4830, 1512, -252, 24, -2], _FACT8),
        ),
        # (3 - c)^8 expanded
        (
            Fraction(2),
            Fraction(3),
            _frac_coeffs(
                [6561, -17496, 20412, -13608, 5670, -1512, 252, -24, 1], _FACT8
            ),
        ),
    )
)

_GAMMA_PIECEWISE: Dict[int, PiecewisePolynomial] = {
    2: GAMMA2_PIECEWISE,
    3: GAMMA3_PIECEWISE,
}


def gamma_3_piecewise(c: float) -> float:
    """The explicit piecewise polynomial gamma_3 on [0, 3]."""
    if not (0.0 <= c <= 3.0):
        raise ValueError(f"c = {c} outside [0, 3]")
    return GAMMA3_PIECEWISE.eval_float(float(c))


def gamma_3_piecewise_exact(c: Fraction) -> Fraction:
    """gamma_3 at a rational point, exactly."""
    c = Fraction(c)
    if not (0 <= c <= 3):
        raise ValueError(f"c = {c} outside [0, 3]")
    return GAMMA3_PIECEWISE.eval_exact(c)


def _vandermonde_sq(w: np.ndarray) -> np.ndarray:
    """prod_{i<j} (w_i - w_j)^2 along the last axis."""
    k = w.shape[-1]
    d = np.ones(w.shape[:-1], dtype=np.float64)
    for i in range(k):
        for j in range(i + 1, k):
            d *= w[..., i] - w[..., j]
    return d * d


def gamma_k_mc(k: int, c: float, samples: int, seed: int) -> ConstantValue:
    """Stratified Monte Carlo for gamma_k(c) from the Vandermonde integral.

    The Dirac constraint is integrated out against the last coordinate:
    gamma_k(c) = (1/(k! G(k+1)^2)) * int_{[0,1]^(k-1)}
                 Delta(u, c - sum u)^2 [c - sum u in [0,1]] du.
    Sampling is uniform per cell of an m^(k-1) grid (m chosen so cells hold
    ~256 points), which keeps the estimator unbiased while suppressing the
    indicator-boundary variance; the reported standard error is the exact
    stratified-sampling formula.  Chunks of cells are generated by a Philox
    stream keyed (seed, chunk), so any worker partition reproduces bitwise.
    """
    if not (1 <= k <= _MC_MAX_K):
        raise ValueError(f"k = {k} outside the Monte-Carlo range 1..{_MC_MAX_K}")
    if not (0.0 < c < float(k)):
        raise ValueError(f"c = {c} outside (0, {k})")
    if k == 1:
        # empty Vandermonde: gamma_1 = 1 on (0,1), no sampling needed
        return ConstantValue(1.0, "monte-carlo", 0.0, {"samples": 0, "seed": seed})
    if samples < _MC_MIN_SAMPLES:
        raise ValueError(f"samples = {samples} below the floor {_MC_MIN_SAMPLES}")
    if seed < 0:
        raise ValueError("seed must be a non-negative integer")
    dim = k - 1
    norm = 1.0 / (factorial(k) * barnes_g(k + 1) ** 2)
    m = max(1, int(round((samples / 256.0) ** (1.0 / dim))))
    ncells = m**dim
    n_c = max(2, -(-samples // ncells))
    cells_chunk = max(1, (1 << 21) // (n_c * k))
    mean_acc = 0.0
    var_acc = 0.0
    n_chunks = 0
    for start in range(0, ncells, cells_chunk):
        stop = min(start + cells_chunk, ncells)
        nc = stop - start
        rng = np.random.Generator(
            np.random.Philox(key=(np.uint64(seed), np.uint64(n_chunks)))
        )
        u = rng.random((nc, n_c, dim))
        corner = np.empty((nc, dim), dtype=np.float64)
        rem = np.arange(start, stop, dtype=np.int64)
        for axis in range(dim - 1, -1, -1):
            corner[:, axis] = rem % m
            rem = rem // m
        pts = (corner[:, None, :] + u) / m
        w_last = c - pts.sum(axis=2)
        ok = (w_last >= 0.0) & (w_last <= 1.0)
        w = np.concatenate([pts, w_last[..., None]], axis=2)
        y = np.where(ok, _vandermonde_sq(w), 0.0)
        mean_acc += float(y.mean(axis=1).sum())
        var_acc += float((y.var(axis=1, ddof=1) / n_c).sum())
        n_chunks += 1
    value = norm * mean_acc / ncells
    stderr = norm * math.sqrt(var_acc) / ncells
    return ConstantValue(
        value,
        "monte-carlo",
        stderr,
        {
            "samples": ncells * n_c,
            "requested": samples,
            "seed": seed,
            "strata_per_dim": m,
            "chunks": n_chunks,
        },
    )


def g_k(k: int) -> Fraction:
    """g_k = (k^2)! prod_{j=0}^{k-1} j! / (j+k)!, exactly (g_3 = 42)."""
    if not (1 <= k <= 10):
        raise ValueError(f"k = {k} outside the supported range 1..10")
    out = Fraction(factorial(k * k))
    for j in range(k):
        out *= Fraction(factorial(j), factorial(j + k))
    return out


def gamma_integral_check(k: int) -> Fraction:
    """|k^2! * int_0^k gamma_k(c) dc - g_k|, exact for k in {1, 2, 3}."""
    if k == 1:
        integral = Fraction(1)  # gamma_1 = 1 on (0, 1)
    elif k in _GAMMA_PIECEWISE:
        integral = _GAMMA_PIECEWISE[k].integral()
    else:
        raise ValueError(f"exact integral table only covers k <= 3, got {k}")
    return abs(factorial(k * k) * integral - g_k(k))


def convolution_compare(
    k: int, d: int, prime_bound: int = 10**6
) -> Tuple[float, float, float]:
    """Both sides of the average (1/phi(d)) sum_{d=qr} phi_star(q) a_k(r) vs a_k(d).

    The two sides agree only asymptotically (the gap at prime d is of order
    1/d), so they are returned as (lhs, rhs, relative gap) with no equality
    assertion.
    """
    if len(divisors(d)) > 10**4:
        raise ValueError(f"d = {d} has too many divisors for the comparison")
    lhs = 0.0
    for q in divisors(d):
        r = d // q
        lhs += phi_star(q) * a_k_d(k, r, prime_bound).value
    lhs /= euler_phi(d)
    rhs = a_k_d(k, d, prime_bound).value
    gap = abs(lhs - rhs) / abs(rhs)
    return lhs, rhs, gap
