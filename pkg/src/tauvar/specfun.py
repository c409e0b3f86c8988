"""Complex log-gamma, the functional-equation gamma factor, and Barnes G.

The gamma factor of a Dirichlet L-function's functional equation is, up to a
unimodular constant, (q/pi)^(s-1/2) * Gamma((s+a)/2) / Gamma((1-s+a)/2) with
a in {0, 1} the parity of the character.  Only its modulus is exposed here:
the unimodular constant needs deeper character data and nothing downstream
consumes it.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from scipy.special import loggamma as _loggamma

__all__ = ["GammaFactorSpec", "log_gamma", "gamma_factor_modulus", "barnes_g"]

_POLE_TOL = 1e-8


@dataclass(frozen=True)
class GammaFactorSpec:
    """Parameters of |gamma(s, chi)|^k: modulus q, parity a, power k."""

    q: float
    parity: int
    k: int = 1

    def __post_init__(self) -> None:
        if self.parity not in (0, 1):
            raise ValueError(f"parity must be 0 or 1, got {self.parity}")
        if self.q <= 0:
            raise ValueError(f"modulus must be positive, got {self.q}")
        if self.k < 1:
            raise ValueError(f"power must be >= 1, got {self.k}")


def _near_pole(z: complex, tol: float) -> bool:
    return abs(z.imag) < tol and z.real < 0.5 and abs(z.real - round(z.real)) < tol


def log_gamma(s: complex) -> complex:
    """Principal branch of log Gamma(s); poles (s = 0, -1, -2, ...) rejected."""
    s = complex(s)
    if _near_pole(s, 1e-300) and round(s.real) <= 0:
        raise ValueError(f"log_gamma pole at s = {s}")
    return complex(_loggamma(s))


def gamma_factor_modulus(s: complex, spec: GammaFactorSpec) -> float:
    """|gamma(s, chi)|^k for a character of modulus q and parity a.

    Equals [(q/pi)^(sigma - 1/2) * |Gamma((s+a)/2) / Gamma((1-s+a)/2)|]^k.
    Arguments within 1e-8 of a Gamma pole are rejected.
    """
    s = complex(s)
    a = spec.parity
    z_num = (s + a) / 2.0
    z_den = (1.0 - s + a) / 2.0
    for z in (z_num, z_den):
        if _near_pole(z, _POLE_TOL) and round(z.real) <= 0:
            raise ValueError(f"gamma factor argument {z} is within {_POLE_TOL} of a pole")
    log_mod = (
        (s.real - 0.5) * math.log(spec.q / math.pi)
        + log_gamma(z_num).real
        - log_gamma(z_den).real
    )
    return math.exp(spec.k * log_mod)


def barnes_g(m: int) -> int:
    """Barnes G at a positive integer: G(m) = prod_{j=1}^{m-2} j!, G(1)=G(2)=1."""
    if not isinstance(m, int) or m < 1:
        raise ValueError(f"m must be a positive integer, got {m!r}")
    if m > 30:
        raise ValueError(f"m = {m} exceeds the supported bound 30")
    out = 1
    fact = 1
    for j in range(1, m - 1):
        fact *= j
        out *= fact
    return out
