"""Variance of tau_k over reduced residue classes, three equivalent ways.

The engine streams sieve segments once, accumulating for each unit class a
mod d the weighted sum  S_a = sum_{n = a (d)} tau_k(n) omega(n)  with
omega(n) = [n <= X] (sharp) or w(n/X) (smooth, w the bump on [1,2]).  The
variance sum_a* |S_a - mean|^2 is then formed three ways:

- directly from the class deviations;
- as (1/phi(d)) sum over nonprincipal characters of |sum_a chi(a) S_a|^2;
- as (1/phi(d)) sum over factorizations d = q r with q > 1 and primitive
  characters mod q of the same square (character induction identity).

All three are exact algebra over the same class sums, so agreement to
near machine precision is a strong check of the character machinery.

Class sums are merged across segments in ascending order with Kahan
compensation, which makes every result independent of the worker count.
"""

from __future__ import annotations

import math
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from typing import Dict, Optional, Tuple

import numpy as np

from ._version import __version__
from .arith import DEFAULT_SEGMENT_SIZE, divisors, tau_k_segment
from .characters import CharacterGroup, enumerate_characters, enumerate_primitive
from .constants import ConstantValue, a_k_d, gamma_3_piecewise, gamma_k_mc, gamma_k_simple
from .weights import SmoothWeight, make_bump_weight

__all__ = [
    "SIEVE_BUDGET",
    "ClassSums",
    "VarianceReport",
    "compute_class_sums",
    "variance_direct",
    "variance_characters",
    "variance_primitive",
    "gamma_eval",
    "main_term",
    "experiment",
]

# Largest number of sieve entries a single variance call may stream.
SIEVE_BUDGET = 2**31

_SIEVE_RATE = 5e6  # entries/second, for cost estimates in error messages


@dataclass(frozen=True)
class ClassSums:
    """Per-unit-class weighted tau_k sums for one (k, d, X, cutoff) choice."""

    k: int
    d: int
    x: float
    cutoff: str
    units: np.ndarray  # sorted unit residues mod d
    sums: np.ndarray  # float64, aligned with units
    weight_id: Optional[str]
    segment_size: int

    @property
    def total(self) -> float:
        return math.fsum(self.sums.tolist())


def _sum_range(x: float, cutoff: str) -> Tuple[int, int]:
    """Half-open integer range [lo, hi) contributing to the cutoff omega."""
    if cutoff == "sharp":
        return 1, int(math.floor(x)) + 1
    if cutoff == "smooth":
        return int(math.floor(x)) + 1, int(math.floor(2.0 * x)) + 1
    raise ValueError(f"cutoff must be 'sharp' or 'smooth', got {cutoff!r}")


def _units_of(d: int) -> np.ndarray:
    """Sorted unit residues mod d (for d = 1: [0], the class of every n)."""
    a = np.arange(d, dtype=np.int64)
    return a[np.gcd(a, d) == 1] if d > 1 else a


def _unit_index_table(d: int) -> Tuple[np.ndarray, int]:
    units = _units_of(d)
    table = np.full(d, -1, dtype=np.int64)
    table[units] = np.arange(units.size)
    return table, units.size


def _segment_task(args) -> Tuple[int, np.ndarray]:
    """Class sums of one sieve segment; top-level so worker pools can pickle it."""
    (index, k, lo, hi, d, x, cutoff, amplitude, segment_size) = args
    seg = tau_k_segment(k, lo, hi, segment_cap=segment_size)
    vals = seg.values.astype(np.float64)
    n = np.arange(lo, hi, dtype=np.int64)
    if cutoff == "smooth":
        w = SmoothWeight(amplitude=amplitude)
        vals = vals * w.values(n / x)
    unit_index, phi = _unit_index_table(d)
    idx = unit_index[n % d]
    good = idx >= 0
    part = np.bincount(idx[good], weights=vals[good], minlength=phi)
    return index, part


def compute_class_sums(
    k: int,
    d: int,
    x: float,
    cutoff: str,
    weight: Optional[SmoothWeight] = None,
    *,
    segment_size: int = DEFAULT_SEGMENT_SIZE,
    workers: int = 1,
) -> ClassSums:
    """Stream tau_k segments once and accumulate the per-class sums.

    Segments may be sieved concurrently (workers > 1); partial class vectors
    are merged in ascending segment order with Kahan compensation, so the
    result is bit-identical for any worker count.
    """
    if d < 1:
        raise ValueError(f"modulus must be >= 1, got {d}")
    if x < 1.0:
        raise ValueError(f"X must be >= 1, got {x}")
    lo, hi = _sum_range(x, cutoff)
    if hi - lo > SIEVE_BUDGET:
        est = (hi - lo) / _SIEVE_RATE
        raise ValueError(
            f"range of {hi - lo} entries exceeds the sieve budget {SIEVE_BUDGET} "
            f"(estimated {est:.0f} s of sieving); reduce X or raise SIEVE_BUDGET"
        )
    amplitude = None
    weight_id = None
    if cutoff == "smooth":
        if weight is None:
            weight = make_bump_weight()
        amplitude = weight.amplitude
        weight_id = weight.weight_id
    units = _units_of(d)
    phi = units.size
    acc = np.zeros(phi, dtype=np.float64)
    comp = np.zeros(phi, dtype=np.float64)

    tasks = []
    for i, s_lo in enumerate(range(lo, hi, segment_size)):
        s_hi = min(s_lo + segment_size, hi)
        tasks.append((i, k, s_lo, s_hi, d, x, cutoff, amplitude, segment_size))

    def _merge(part: np.ndarray) -> None:
        # Kahan step, elementwise per class
        y = part - comp
        t = acc + y
        comp[:] = (t - acc) - y
        acc[:] = t

    if workers > 1 and len(tasks) > 1:
        results: Dict[int, np.ndarray] = {}
        with ProcessPoolExecutor(max_workers=workers) as pool:
            for index, part in pool.map(_segment_task, tasks):
                results[index] = part
        for index in sorted(results):
            _merge(results[index])
    else:
        for task in tasks:
            _merge(_segment_task(task)[1])

    return ClassSums(
        k=k,
        d=d,
        x=x,
        cutoff=cutoff,
        units=units,
        sums=acc,
        weight_id=weight_id,
        segment_size=segment_size,
    )


def variance_direct(
    k: int,
    d: int,
    x: float,
    cutoff: str,
    weight: Optional[SmoothWeight] = None,
    *,
    class_sums: Optional[ClassSums] = None,
    segment_size: int = DEFAULT_SEGMENT_SIZE,
    workers: int = 1,
) -> float:
    """sum over units a of |S_a - (1/phi) sum S_a|^2, from the class sums."""
    cs = class_sums or compute_class_sums(
        k, d, x, cutoff, weight, segment_size=segment_size, workers=workers
    )
    mean = cs.total / cs.sums.size
    dev = cs.sums - mean
    return float(np.dot(dev, dev))


def variance_characters(
    k: int,
    d: int,
    x: float,
    cutoff: str,
    weight: Optional[SmoothWeight] = None,
    *,
    class_sums: Optional[ClassSums] = None,
    segment_size: int = DEFAULT_SEGMENT_SIZE,
    workers: int = 1,
) -> float:
    """(1/phi(d)) sum over nonprincipal chi of |sum_n tau_k(n) chi(n) omega(n)|^2.

    chi is constant on residue classes, so the inner sum is the character
    transform sum_a chi(a) S_a of the class sums.
    """
    cs = class_sums or compute_class_sums(
        k, d, x, cutoff, weight, segment_size=segment_size, workers=workers
    )
    group = CharacterGroup(d)
    logs = group.log_vectors(cs.units)
    total = 0.0
    for chi in enumerate_characters(group):
        if chi.is_principal:
            continue
        t = complex(np.dot(chi.values_on(cs.units, logs), cs.sums))
        total += t.real * t.real + t.imag * t.imag
    return total / group.phi


def variance_primitive(
    k: int,
    d: int,
    x: float,
    cutoff: str,
    weight: Optional[SmoothWeight] = None,
    *,
    class_sums: Optional[ClassSums] = None,
    segment_size: int = DEFAULT_SEGMENT_SIZE,
    workers: int = 1,
) -> float:
    """(1/phi(d)) sum over d = q r, q > 1, and primitive chi1 mod q of
    |sum_{(n,r)=1} tau_k(n) chi1(n) omega(n)|^2.

    Terms with gcd(n, q) > 1 vanish through chi1, so the inner sum again
    reduces to unit classes mod d, evaluated through the primitive character
    of the smaller modulus.
    """
    cs = class_sums or compute_class_sums(
        k, d, x, cutoff, weight, segment_size=segment_size, workers=workers
    )
    phi = cs.sums.size
    total = 0.0
    for q in divisors(d):
        if q == 1:
            continue
        group_q = CharacterGroup(q)
        residues_q = cs.units % q
        logs_q = group_q.log_vectors(residues_q)
        for chi1 in enumerate_primitive(group_q):
            t = complex(np.dot(chi1.values_on(residues_q, logs_q), cs.sums))
            total += t.real * t.real + t.imag * t.imag
    return total / phi


def gamma_eval(
    k: int,
    c: float,
    method: str = "simple",
    *,
    mc_samples: int = 10**6,
    mc_seed: int = 1,
) -> ConstantValue:
    """gamma_k(c) by the requested method, with provenance."""
    if method == "simple":
        if not (k - 1 < c < k):
            raise ValueError(
                f"gamma method 'simple' needs c in (k-1, k) = ({k - 1}, {k}), got c = {c}"
            )
        return ConstantValue(gamma_k_simple(k, c), "closed-form", 0.0, {})
    if method == "piecewise":
        if k != 3:
            raise ValueError("the explicit piecewise table is only available for k = 3")
        return ConstantValue(gamma_3_piecewise(c), "piecewise", 0.0, {})
    if method == "mc":
        return gamma_k_mc(k, c, mc_samples, mc_seed)
    raise ValueError(f"unknown gamma method {method!r}; use simple, piecewise or mc")


def main_term(
    k: int,
    d: int,
    c: float,
    *,
    gamma_method: str = "simple",
    prime_bound: int = 10**6,
    mc_samples: int = 10**6,
    mc_seed: int = 1,
) -> float:
    """The conjectural leading term a_k(d) gamma_k(c) d^c (log d)^(k^2 - 1)."""
    gamma = gamma_eval(k, c, gamma_method, mc_samples=mc_samples, mc_seed=mc_seed)
    akd = a_k_d(k, d, prime_bound)
    return akd.value * gamma.value * float(d) ** c * math.log(d) ** (k * k - 1)


@dataclass(frozen=True)
class VarianceReport:
    """One experiment: measured variance, conjectural main term, provenance."""

    k: int
    d: int
    c: float
    x: float
    cutoff: str
    weight_id: Optional[str]
    variance: float
    main_term: float
    ratio: Optional[float]
    a_k_d_value: float
    a_k_d_error: float
    prime_bound: int
    gamma_method: str
    gamma_value: float
    gamma_error: float
    gamma_params: Dict[str, object]
    wall_time_s: float
    segment_size: int
    code_version: str = __version__

    def to_dict(self) -> Dict[str, object]:
        return {
            "k": self.k,
            "d": self.d,
            "c": self.c,
            "x": self.x,
            "cutoff": self.cutoff,
            "weight_id": self.weight_id,
            "variance": self.variance,
            "main_term": self.main_term,
            "ratio": self.ratio,
            "a_k_d_value": self.a_k_d_value,
            "a_k_d_error": self.a_k_d_error,
            "prime_bound": self.prime_bound,
            "gamma_method": self.gamma_method,
            "gamma_value": self.gamma_value,
            "gamma_error": self.gamma_error,
            "gamma_params": dict(self.gamma_params),
            "wall_time_s": self.wall_time_s,
            "segment_size": self.segment_size,
            "code_version": self.code_version,
        }


def experiment(
    k: int,
    d: int,
    c: float,
    cutoff: str = "smooth",
    gamma_method: str = "simple",
    *,
    prime_bound: int = 10**6,
    mc_samples: int = 10**6,
    mc_seed: int = 1,
    segment_size: int = DEFAULT_SEGMENT_SIZE,
    workers: int = 1,
) -> VarianceReport:
    """Measure the variance at X = d^c and compare with the conjectural term.

    Deterministic given the configuration: re-running reproduces every field
    except wall_time_s, for any worker count.
    """
    start = time.perf_counter()
    x = float(d) ** c
    cs = compute_class_sums(
        k, d, x, cutoff, segment_size=segment_size, workers=workers
    )
    var = variance_direct(k, d, x, cutoff, class_sums=cs)
    gamma = gamma_eval(k, c, gamma_method, mc_samples=mc_samples, mc_seed=mc_seed)
    akd = a_k_d(k, d, prime_bound)
    mt = akd.value * gamma.value * x * math.log(d) ** (k * k - 1) if d > 1 else 0.0
    ratio = var / mt if mt > 0 else None
    return VarianceReport(
        k=k,
        d=d,
        c=c,
        x=x,
        cutoff=cutoff,
        weight_id=cs.weight_id,
        variance=var,
        main_term=mt,
        ratio=ratio,
        a_k_d_value=akd.value,
        a_k_d_error=akd.error_estimate,
        prime_bound=prime_bound,
        gamma_method=gamma_method,
        gamma_value=gamma.value,
        gamma_error=gamma.error_estimate,
        gamma_params=dict(gamma.params),
        wall_time_s=time.perf_counter() - start,
        segment_size=segment_size,
    )
