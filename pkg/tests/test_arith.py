"""Exact arithmetic core: factorization, tau_k, sieve, phi/mu/phi_star."""

import math

import numpy as np
import pytest

from tauvar.arith import (
    DEFAULT_SEGMENT_SIZE,
    MAX_N,
    Factorization,
    dirichlet_convolve,
    divisors,
    euler_phi,
    factorize,
    moebius,
    phi_star,
    tau_k_of,
    tau_k_segment,
    tau_k_segments,
)


def test_factorize_examples():
    assert factorize(1).factors == ()
    assert factorize(12).factors == ((2, 2), (3, 1))
    assert factorize(15000).factors == ((2, 3), (3, 1), (5, 4))


def test_factorize_multiplies_back():
    rng = np.random.default_rng(7)
    for n in rng.integers(1, 10**9, size=50):
        n = int(n)
        fac = factorize(n)
        prod = 1
        for p, e in fac.factors:
            assert e >= 1
            prod *= p**e
        assert prod == n
        assert list(fac.primes()) == sorted(fac.primes())


def test_factorize_rejects_bad_input():
    with pytest.raises(ValueError):
        factorize(0)
    with pytest.raises(ValueError):
        factorize(-5)
    with pytest.raises(ValueError):
        factorize(MAX_N + 1)


def test_factorize_large():
    # 2^63 - 1 = 7^2 * 73 * 127 * 337 * 92737 * 649657
    fac = factorize(MAX_N)
    assert fac.factors == ((7, 2), (73, 1), (127, 1), (337, 1), (92737, 1), (649657, 1))


def test_tau_k_of_examples():
    assert tau_k_of(3, 1) == 1
    assert tau_k_of(3, 4) == 6  # C(4, 2)
    assert tau_k_of(2, 12) == 6  # divisors of 12
    assert tau_k_of(3, 12) == 18  # 18 ordered triples with product 12


def test_tau_k_of_matches_enumeration():
    # oracle: count ordered pairs/triples with the given product
    for n in range(1, 40):
        pairs = sum(1 for a in range(1, n + 1) if n % a == 0)
        assert tau_k_of(2, n) == pairs
        triples = sum(
            1 for a in range(1, n + 1) for b in range(1, n + 1) if n % (a * b) == 0
        )
        assert tau_k_of(3, n) == triples


def test_tau_k_bounds():
    with pytest.raises(ValueError):
        tau_k_of(0, 5)
    with pytest.raises(ValueError):
        tau_k_of(17, 5)


def test_tau_segment_examples():
    assert tau_k_segment(2, 1, 11).values.tolist() == [1, 2, 2, 3, 2, 4, 2, 4, 3, 4]
    assert tau_k_segment(3, 1, 5).values.tolist() == [1, 3, 3, 6]
    assert tau_k_segment(2, 100, 101).values.tolist() == [9]  # 100 = 2^2 5^2


def test_tau_segment_matches_formula():
    rng = np.random.default_rng(11)
    for k in (2, 3, 4):
        seg = tau_k_segment(k, 1, 20_001, segment_cap=20_000)
        for n in rng.integers(1, 20_001, size=200):
            assert int(seg.values[int(n) - 1]) == tau_k_of(k, int(n))
        assert int(seg.values.min()) >= 1


def test_tau_segment_far_window():
    lo = 10**12
    seg = tau_k_segment(3, lo, lo + 64, segment_cap=64)
    for i in range(64):
        assert int(seg.values[i]) == tau_k_of(3, lo + i)


def test_segmentation_independence():
    whole = tau_k_segment(3, 1, 10_001, segment_cap=10_000).values
    for size in (73, 512, 9_999):
        parts = [s.values for s in tau_k_segments(3, 1, 10_001, size)]
        assert np.array_equal(np.concatenate(parts), whole)


def test_tau_segment_rejects_oversize_before_allocating():
    with pytest.raises(ValueError, match="exceeds the cap"):
        tau_k_segment(2, 1, 2 + DEFAULT_SEGMENT_SIZE)
    with pytest.raises(ValueError):
        tau_k_segment(2, 10, 10)


def test_tau_segment_overflow_guard():
    # tau_16 at 2^4 * 3^2 * (5 * 7 * ... * 43) exceeds 2^62; must raise, not wrap
    n = 2**4 * 3**2 * 5 * 7 * 11 * 13 * 17 * 19 * 23 * 29 * 31 * 37 * 41 * 43
    assert n <= MAX_N
    assert tau_k_of(16, n) > 2**62  # exact big-int path keeps working
    with pytest.raises(OverflowError):
        tau_k_segment(16, n, n + 1, segment_cap=16)


def test_multiplicativity_property():
    rng = np.random.default_rng(13)
    checked = 0
    while checked < 120:
        m = int(rng.integers(2, 1000))
        n = int(rng.integers(2, 1000))
        if math.gcd(m, n) != 1:
            continue
        for k in (2, 3, 4):
            assert tau_k_of(k, m * n) == tau_k_of(k, m) * tau_k_of(k, n)
        checked += 1


def test_euler_phi_and_moebius():
    assert [euler_phi(n) for n in (1, 2, 9, 12, 97)] == [1, 1, 6, 4, 96]
    assert [moebius(n) for n in (1, 2, 4, 6, 30, 49)] == [1, -1, 0, 1, -1, 0]
    # phi = sum over divisors of mu(d) * n/d
    for n in (12, 36, 97, 360):
        assert euler_phi(n) == dirichlet_convolve(moebius, lambda b: b, n)


def test_phi_star_examples():
    assert phi_star(1) == 1
    assert phi_star(2) == 0
    assert phi_star(4) == 1  # phi(4) - phi(2) = 2 - 1 ... = mu*phi at 4
    assert phi_star(12) == 1
    for d in (12, 60, 97, 200):
        assert sum(phi_star(q) for q in divisors(d)) == euler_phi(d)


def test_dirichlet_convolve_examples():
    assert dirichlet_convolve(moebius, euler_phi, 12) == phi_star(12)
    assert dirichlet_convolve(lambda a: 1, lambda b: 1, 36) == 9  # tau_2(36)
    assert dirichlet_convolve(lambda a: tau_k_of(2, a), lambda b: 1, 12) == 18


def test_convolution_recursion_property():
    for k in (2, 3, 4, 5):
        for n in list(range(1, 60)) + [360, 1024, 9973]:
            conv = dirichlet_convolve(lambda a, kk=k: tau_k_of(kk - 1, a), lambda b: 1, n)
            assert conv == tau_k_of(k, n)


def test_factorization_is_frozen_value_object():
    fac = factorize(90)
    assert fac == Factorization(n=90, factors=((2, 1), (3, 2), (5, 1)))
