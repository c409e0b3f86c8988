"""Dirichlet character groups via generator exponents and discrete logs.

A character mod d is stored as an exponent vector against a fixed generator
basis of (Z/d)*: one generator per odd prime power (the smallest primitive
root), the residue 3 for modulus 4, and the pair (-1, 5) for 2^e with e >= 3.
Values are roots of unity taken from a single precomputed table of the
group-exponent order, so repeated-angle arithmetic never drifts.

Discrete-log tables are built per prime-power component at construction
time, which bounds usable moduli (10^7 by default) but makes evaluation a
table lookup plus integer arithmetic.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from math import gcd, lcm
from typing import Iterator, List, Tuple

import numpy as np

from .arith import Factorization, euler_phi, factorize, moebius, phi_star

__all__ = [
    "CharacterGroup",
    "DirichletCharacter",
    "character_group",
    "enumerate_characters",
    "enumerate_primitive",
    "char_eval",
    "conductor",
    "induce",
    "gauss_sum",
    "primitive_orthogonality_sum",
]

MAX_MODULUS = 10**7
_GAUSS_MAX = 10**6


@dataclass(frozen=True)
class _Component:
    """One cyclic factor of (Z/d)*: <generator> of the given order mod p^e."""

    p: int
    e: int
    modulus: int  # p^e
    generator: int  # residue mod p^e
    order: int
    dlog: np.ndarray  # int64, length p^e; exponent of generator, -1 off units


def _smallest_primitive_root(p: int, e: int) -> int:
    """Least primitive root modulo the odd prime power p^e."""
    pe = p**e
    phi = pe // p * (p - 1)
    test_exps = [phi // q for (q, _) in factorize(phi).factors]
    g = 2
    while True:
        if gcd(g, p) == 1 and all(pow(g, t, pe) != 1 for t in test_exps):
            return g
        g += 1


def _cyclic_component(p: int, e: int, generator: int, order: int) -> _Component:
    pe = p**e
    dlog = np.full(pe, -1, dtype=np.int64)
    a = 1
    for i in range(order):
        dlog[a] = i
        a = (a * generator) % pe
    return _Component(p=p, e=e, modulus=pe, generator=generator, order=order, dlog=dlog)


def _two_power_components(e: int) -> List[_Component]:
    """(Z/2^e)* for e >= 3 as <-1> x <5>, with a joint log table."""
    pe = 1 << e
    order5 = 1 << (e - 2)
    dlog_m1 = np.full(pe, -1, dtype=np.int64)
    dlog_5 = np.full(pe, -1, dtype=np.int64)
    a = 1
    for t in range(order5):
        for s, r in ((0, a), (1, pe - a)):
            dlog_m1[r] = s
            dlog_5[r] = t
        a = (a * 5) % pe
    return [
        _Component(p=2, e=e, modulus=pe, generator=pe - 1, order=2, dlog=dlog_m1),
        _Component(p=2, e=e, modulus=pe, generator=5 % pe, order=order5, dlog=dlog_5),
    ]


class CharacterGroup:
    """The character group mod d with fixed, reproducible generator choices."""

    def __init__(self, d: int):
        if d < 1:
            raise ValueError(f"modulus must be >= 1, got {d}")
        if d > MAX_MODULUS:
            raise ValueError(
                f"modulus {d} exceeds the discrete-log table bound {MAX_MODULUS}; "
                f"split the work or raise characters.MAX_MODULUS explicitly"
            )
        self.d = d
        self.factorization: Factorization = factorize(d)
        comps: List[_Component] = []
        for p, e in self.factorization.factors:
            if p == 2:
                if e == 1:
                    continue  # trivial unit group
                if e == 2:
                    comps.append(_cyclic_component(2, 2, 3, 2))
                else:
                    comps.extend(_two_power_components(e))
            else:
                g = _smallest_primitive_root(p, e)
                comps.append(_cyclic_component(p, e, g, p ** (e - 1) * (p - 1)))
        self.components: Tuple[_Component, ...] = tuple(comps)
        self.orders: Tuple[int, ...] = tuple(c.order for c in comps)
        self.phi = 1
        for o in self.orders:
            self.phi *= o
        self.exponent = lcm(*self.orders) if self.orders else 1
        self.roots = self._root_table(self.exponent)

    @staticmethod
    def _root_table(n: int) -> np.ndarray:
        roots = np.exp(2j * np.pi * np.arange(n) / n)
        roots[0] = 1.0
        if n % 2 == 0:
            roots[n // 2] = -1.0
        if n % 4 == 0:
            roots[n // 4] = 1j
            roots[3 * n // 4] = -1j
        return roots

    def units(self) -> np.ndarray:
        """Sorted unit residues mod d (for d = 1 this is [0], the class of 1)."""
        if self.d == 1:
            return np.zeros(1, dtype=np.int64)
        a = np.arange(self.d, dtype=np.int64)
        return a[np.gcd(a, self.d) == 1]

    def unit_index(self) -> np.ndarray:
        """Length-d table: position of each residue in units(), -1 off units."""
        table = np.full(self.d, -1, dtype=np.int64)
        us = self.units()
        table[us] = np.arange(us.size)
        return table

    def log_vectors(self, residues: np.ndarray) -> List[np.ndarray]:
        """Per-component discrete logs of an array of unit residues mod d."""
        out = []
        for c in self.components:
            out.append(c.dlog[np.asarray(residues, dtype=np.int64) % c.modulus])
        return out

    def __repr__(self) -> str:  # pragma: no cover
        return f"CharacterGroup(d={self.d}, orders={self.orders})"


@dataclass(frozen=True)
class DirichletCharacter:
    """Character determined by chi(g_i) = zeta^(exponents[i] / order_i)."""

    group: CharacterGroup
    exponents: Tuple[int, ...]

    def __post_init__(self) -> None:
        if len(self.exponents) != len(self.group.orders):
            raise ValueError("exponent vector does not match the group basis")
        for m, n in zip(self.exponents, self.group.orders):
            if not (0 <= m < n):
                raise ValueError(f"exponent {m} outside range of order {n}")

    @property
    def modulus(self) -> int:
        return self.group.d

    @property
    def is_principal(self) -> bool:
        return all(m == 0 for m in self.exponents)

    def value_index(self, n: int) -> int | None:
        """Index j with chi(n) = zeta_lambda^j, or None when gcd(n, d) > 1."""
        g = self.group
        a = n % g.d
        if g.d > 1 and gcd(a, g.d) != 1:
            return None
        lam = g.exponent
        idx = 0
        for m, c in zip(self.exponents, g.components):
            idx += m * (lam // c.order) * int(c.dlog[a % c.modulus])
        return idx % lam

    def __call__(self, n: int) -> complex:
        idx = self.value_index(n)
        if idx is None:
            return 0.0 + 0.0j
        return complex(self.group.roots[idx])

    def values_on(self, residues: np.ndarray, logs: List[np.ndarray] | None = None) -> np.ndarray:
        """Vectorized values on an array of unit residues mod d."""
        g = self.group
        if logs is None:
            logs = g.log_vectors(residues)
        lam = g.exponent
        idx = np.zeros(len(np.asarray(residues)), dtype=np.int64)
        for m, c, lv in zip(self.exponents, g.components, logs):
            idx += m * (lam // c.order) * lv
        return g.roots[idx % lam]

    @property
    def parity(self) -> int:
        """1 when chi(-1) = -1, else 0."""
        if self.group.d <= 2:
            return 0
        v = self.value_index(self.group.d - 1)
        return 0 if v == 0 else 1

    @property
    def conductor_value(self) -> int:
        return conductor(self)

    @property
    def is_primitive(self) -> bool:
        return conductor(self) == self.group.d

    def order(self) -> int:
        out = 1
        for m, n in zip(self.exponents, self.group.orders):
            out = lcm(out, n // gcd(n, m))
        return out

    def conjugate(self) -> "DirichletCharacter":
        exps = tuple((-m) % n for m, n in zip(self.exponents, self.group.orders))
        return DirichletCharacter(self.group, exps)


def character_group(d: int) -> CharacterGroup:
    return CharacterGroup(d)


def enumerate_characters(d: int | CharacterGroup) -> Iterator[DirichletCharacter]:
    """All phi(d) characters mod d, principal first, in a stable order."""
    group = d if isinstance(d, CharacterGroup) else CharacterGroup(d)
    for exps in itertools.product(*(range(n) for n in group.orders)):
        yield DirichletCharacter(group, exps)


def enumerate_primitive(q: int | CharacterGroup) -> Iterator[DirichletCharacter]:
    """The phi_star(q) primitive characters mod q, in enumeration order."""
    for chi in enumerate_characters(q):
        if chi.is_primitive:
            yield chi


def char_eval(chi: DirichletCharacter, n: int) -> complex:
    return chi(n)


def conductor(chi: DirichletCharacter) -> int:
    """Least f | d such that chi is trivial on units congruent to 1 mod f.

    Computed componentwise from the order of chi on each cyclic factor; the
    tests check this against the brute-force minimal-f definition.
    """
    g = chi.group
    f = 1
    i = 0
    comps = g.components
    while i < len(comps):
        c = comps[i]
        if c.p == 2 and c.e >= 3:
            m_minus, m_five = chi.exponents[i], chi.exponents[i + 1]
            order5 = comps[i + 1].order
            o5 = order5 // gcd(order5, m_five)
            if o5 == 1:
                f *= 1 if m_minus == 0 else 4
            else:
                v = o5.bit_length() - 1  # o5 = 2^v, v >= 1
                f *= 1 << (v + 2)
            i += 2
            continue
        m = chi.exponents[i]
        if m != 0:
            o = c.order // gcd(c.order, m)
            vp = 0
            while o % c.p == 0:
                o //= c.p
                vp += 1
            f *= c.p ** (vp + 1)
        i += 1
    return f


def induce(chi1: DirichletCharacter, d: int) -> DirichletCharacter:
    """The character mod d with values chi1(n) [gcd(n, d) = 1], q = chi1 modulus | d.

    Each basis generator g of (Z/d)* lives in one prime-power component; its
    CRT lift (g at that component, 1 elsewhere) is a unit mod d, and the
    induced exponents are read off from chi1 at those lifts.
    """
    q = chi1.modulus
    if d % q != 0:
        raise ValueError(f"cannot induce: modulus {q} does not divide {d}")
    group = CharacterGroup(d)
    lam_q = chi1.group.exponent
    exps = []
    for c in group.components:
        m2 = d // c.modulus
        if m2 == 1:
            lift = c.generator % d
        else:
            lift = (
                c.generator * m2 * pow(m2, -1, c.modulus) + c.modulus * pow(c.modulus, -1, m2)
            ) % d
        t = chi1.value_index(lift % q)
        if t is None:  # unreachable: the lift is a unit mod d, hence mod q
            raise ValueError("generator lift is not a unit modulo the inducing modulus")
        # chi1(lift) is an order_i-th root of unity because lift^order_i = 1 mod d
        num = t * c.order
        assert num % lam_q == 0
        exps.append((num // lam_q) % c.order)
    return DirichletCharacter(group, tuple(exps))


def gauss_sum(chi: DirichletCharacter) -> complex:
    """tau(chi) = sum over b mod d of chi(b) e(b/d), by direct summation."""
    d = chi.group.d
    if d > _GAUSS_MAX:
        raise ValueError(f"direct Gauss sum limited to moduli <= {_GAUSS_MAX}")
    if d == 1:
        return 1.0 + 0.0j
    units = chi.group.units()
    vals = chi.values_on(units)
    e = np.exp(2j * np.pi * units / d)
    return complex(np.sum(vals * e))


def primitive_orthogonality_sum(q: int, m: int, n: int) -> int:
    """sum over primitive chi mod q of chi(m) conj(chi(n)), via the divisor formula.

    Requires gcd(mn, q) = 1.  Equals sum over q = q2 r2 with r2 | m - n of
    mu(q2) phi(r2); the m = n diagonal gives phi_star(q).  The tests verify
    agreement with brute-force summation over enumerated primitive characters.
    """
    if gcd(m * n, q) != 1:
        raise ValueError(f"gcd(mn, q) must be 1, got m={m}, n={n}, q={q}")
    diff = m - n
    total = 0
    for r2 in _divisors_of(q):
        if diff % r2 == 0:
            total += moebius(q // r2) * euler_phi(r2)
    assert m != n or total == phi_star(q)
    return total


def _divisors_of(n: int) -> List[int]:
    ds = [1]
    for p, e in factorize(n).factors:
        ds = [d * p**i for d in ds for i in range(e + 1)]
    return ds
