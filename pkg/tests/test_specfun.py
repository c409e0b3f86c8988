"""log Gamma, the functional-equation gamma factor, Barnes G."""

import math
from math import factorial

import numpy as np
import pytest

from tauvar.specfun import GammaFactorSpec, barnes_g, gamma_factor_modulus, log_gamma
from tauvar.verify import _stirling_log_gamma

# frozen mpmath.loggamma references (40 digits)
LG_LARGE = complex(12376679.82274329919842, 13947481.91894257170304)  # s = 1e6 + 1e6 i
LG_MED = complex(0.7853469580738223887584, 2.583012925115262248591)  # s = 3.7 + 2.1 i
INV_TWO_SQRT_PI = 0.28209479177387814347


def test_log_gamma_classical_values():
    assert log_gamma(1.0) == 0.0
    assert log_gamma(2.0) == 0.0
    assert abs(log_gamma(0.5) - math.log(math.sqrt(math.pi))) < 1e-14


def test_log_gamma_reference_points():
    assert abs(log_gamma(complex(3.7, 2.1)) - LG_MED) < 1e-12 * abs(LG_MED)
    assert abs(log_gamma(complex(1e6, 1e6)) - LG_LARGE) < 1e-12 * abs(LG_LARGE)


def test_log_gamma_recurrence():
    s = complex(3.7, 2.1)
    assert abs(log_gamma(s + 1) - log_gamma(s) - np.log(s)) < 1e-12


def test_log_gamma_rejects_poles():
    for s in (0.0, -1.0, -7.0):
        with pytest.raises(ValueError):
            log_gamma(s)
    log_gamma(-0.5)  # not a pole


def test_stirling_oracle_agreement():
    rng = np.random.default_rng(23)
    for _ in range(100):
        s = complex(1.0 + 2.0 * rng.random(), float(rng.uniform(-100, 100)))
        ref = _stirling_log_gamma(s)
        assert abs(log_gamma(s) - ref) / max(abs(ref), 1.0) < 1e-11


def test_gamma_factor_critical_line_unimodular():
    for q, a in ((3, 1), (4, 1), (5, 0)):
        for t in (0.0, 1.0, 5.0, 20.0):
            spec = GammaFactorSpec(q=q, parity=a, k=1)
            assert abs(gamma_factor_modulus(complex(0.5, t), spec) - 1.0) < 1e-11
            spec3 = GammaFactorSpec(q=q, parity=a, k=3)
            assert abs(gamma_factor_modulus(complex(0.5, t), spec3) - 1.0) < 1e-11


def test_gamma_factor_exact_point():
    # s = 2, a = 0: |Gamma(1) / Gamma(-1/2)| = 1/(2 sqrt(pi)); q = pi kills the power
    spec = GammaFactorSpec(q=math.pi, parity=0, k=1)
    assert abs(gamma_factor_modulus(2.0, spec) - INV_TWO_SQRT_PI) < 1e-13


def test_gamma_factor_q_power_law():
    for k in (1, 2):
        spec1 = GammaFactorSpec(q=7, parity=0, k=k)
        spec2 = GammaFactorSpec(q=14, parity=0, k=k)
        ratio = gamma_factor_modulus(2.0, spec2) / gamma_factor_modulus(2.0, spec1)
        assert abs(ratio - 2.0 ** (k * 1.5)) < 1e-12 * 2.0 ** (k * 1.5)


def test_gamma_factor_pole_proximity_rejected():
    spec = GammaFactorSpec(q=5, parity=0, k=1)
    # (1 - s + a)/2 = -1 when s = 3: reject s within 1e-8 of it
    with pytest.raises(ValueError, match="pole"):
        gamma_factor_modulus(3.0 + 1e-9, spec)
    gamma_factor_modulus(3.0 + 1e-6, spec)  # outside the guard radius


def test_gamma_factor_spec_validation():
    with pytest.raises(ValueError):
        GammaFactorSpec(q=5, parity=2)
    with pytest.raises(ValueError):
        GammaFactorSpec(q=-1, parity=0)
    with pytest.raises(ValueError):
        GammaFactorSpec(q=5, parity=0, k=0)


def test_barnes_g_values():
    assert barnes_g(1) == 1 and barnes_g(2) == 1
    assert barnes_g(3) == 1  # 1!
    assert barnes_g(4) == 2  # 2! 1!
    assert barnes_g(5) == 12  # 3! 2! 1!
    assert barnes_g(6) == 288
    with pytest.raises(ValueError):
        barnes_g(0)
    with pytest.raises(ValueError):
        barnes_g(31)


def test_barnes_g_divides_gamma_denominators():
    for k in range(1, 9):
        assert factorial(k * k - 1) % barnes_g(k + 1) ** 2 == 0
