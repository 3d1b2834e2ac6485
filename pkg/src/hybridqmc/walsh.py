"""Walsh characters, their decay weights, and sub-lattice character sums.

Character sums over a sub-lattice are held as exponent-count
accumulators so the central zero-or-full dichotomy is decided in exact
integer arithmetic; complex values only materialize for display.  The
weight attached to a frequency k with leading base-p digit K at level g
is 1 / (p^(g+1) * sin(pi*K/p)^2), which is exactly 2^-(g+1) for p = 2
and makes the closed-form total weight identity exact for every prime.
"""

from __future__ import annotations

import cmath
import functools
import itertools
import math
from dataclasses import dataclass
from fractions import Fraction

from .gfpoly import NEG_INF, BasePRational, Poly, poly_from_int, valuation
from .plattice import (
    LatticeConfig,
    SubLatticeSpec,
    sublattice_enumerate,
    sublattice_matrices,
)


def walsh_exponent(k: int, x: BasePRational) -> int:
    """e(walsh_exponent/p) is the k-th Walsh character at x: the exponent is
    the digit dot product sum_j k_j * x_{j+1} mod p."""
    if k < 0:
        raise ValueError("frequency must be >= 0")
    p = x.p
    total = 0
    j = 1
    while k:
        k, kj = divmod(k, p)
        if kj:
            total += kj * x.digit(j)
        j += 1
    return total % p


def walsh_exponent_vec(kvec, point) -> int:
    """Exponent of the product character over a coordinate tuple."""
    p = point[0].p
    return sum(walsh_exponent(k, x) for k, x in zip(kvec, point)) % p


def walsh_weight(k: int, p: int):
    """Decay weight of frequency k; exact dyadic for p = 2, float otherwise."""
    if k < 0:
        raise ValueError("frequency must be >= 0")
    if k == 0:
        return Fraction(1) if p == 2 else 1.0
    g = 0
    lead = k
    while lead >= p:
        lead //= p
        g += 1
    if p == 2:
        return Fraction(1, 2 ** (g + 1))
    return 1.0 / (p ** (g + 1) * math.sin(math.pi * lead / p) ** 2)


def walsh_weight_vec(kvec, p: int):
    """Product weight over the components of a frequency tuple."""
    w = Fraction(1) if p == 2 else 1.0
    for k in kvec:
        w *= walsh_weight(k, p)
    return w


def walsh_weight_total(p: int, m: int, t: int, mode: str = "closed"):
    """Total weight over all frequency tuples below p^m per component.

    closed: (1 + m*(p^2-1)/(3p))^t, exact rational.
    direct: literal summation of the product weights; exact for p = 2.
    """
    if m < 1 or t < 0:
        raise ValueError("need m >= 1 and t >= 0")
    if mode == "closed":
        return (1 + Fraction(m * (p * p - 1), 3 * p)) ** t
    if mode != "direct":
        raise ValueError(f"unknown mode {mode!r}")
    if t == 0:
        return Fraction(1) if p == 2 else 1.0
    per_k = [walsh_weight(k, p) for k in range(p**m)]
    if p == 2:
        total = Fraction(0)
        for kvec in itertools.product(range(2**m), repeat=t):
            total += walsh_weight_vec(kvec, 2)
        return total
    return math.fsum(
        math.prod(per_k[k] for k in kvec)
        for kvec in itertools.product(range(p**m), repeat=t)
    )


@dataclass(frozen=True)
class CharacterAccumulator:
    """counts[a] summands with character exponent a; the complex sum is
    sum_a counts[a] * e(a/p)."""

    p: int
    counts: tuple

    def __post_init__(self):
        if len(self.counts) != self.p:
            raise ValueError("need one count per residue")

    @classmethod
    def from_exponents(cls, p: int, exponents) -> "CharacterAccumulator":
        counts = [0] * p
        for a in exponents:
            counts[a % p] += 1
        return cls(p, tuple(counts))

    @property
    def total(self) -> int:
        return sum(self.counts)

    @property
    def is_real_full(self) -> bool:
        """All summands at exponent zero: the sum is the real number total."""
        return self.counts[0] == self.total

    @property
    def is_aligned(self) -> bool:
        """All mass in a single exponent class: |sum| equals total (the
        residue shift only contributes a unimodular factor)."""
        return self.total in self.counts

    @property
    def is_uniform(self) -> bool:
        """Counts equal across residues: the sum vanishes."""
        return len(set(self.counts)) == 1

    def magnitude(self) -> int:
        """|sum| as an exact integer; raises if the dichotomy fails."""
        if self.is_aligned:
            return self.total
        if self.is_uniform:
            return 0
        raise ArithmeticError("character sum is neither full nor zero")

    def complex_value(self) -> complex:
        return sum(
            c * cmath.exp(2j * cmath.pi * a / self.p)
            for a, c in enumerate(self.counts)
        )


def character_sum(spec: SubLatticeSpec, cfg: LatticeConfig, kvec) -> CharacterAccumulator:
    """Exact exponent accumulator of the k-th character over the sub-lattice."""
    kvec = tuple(kvec)
    if len(kvec) != cfg.t:
        raise ValueError("frequency tuple length must equal the lattice dimension")
    points = sublattice_enumerate(spec, cfg)
    return CharacterAccumulator.from_exponents(
        cfg.p, (walsh_exponent_vec(kvec, pt) for pt in points)
    )


def _k_digit_vectors(kvec, p: int, m: int):
    out = []
    for k in kvec:
        digits = []
        for _ in range(m):
            k, r = divmod(k, p)
            digits.append(r)
        out.append(digits)
    return out


def dual_test_matrix(spec: SubLatticeSpec, cfg: LatticeConfig, kvec) -> bool:
    """True when the transposed affine digit maps annihilate the frequency:
    sum_i C_i^T k_i = 0 in GF(p)^d (vacuous for d = 0)."""
    kvec = tuple(kvec)
    p, m, d = cfg.p, cfg.m, spec.d
    if d == 0:
        return True
    matrices, _ = sublattice_matrices(spec, cfg)
    kdigits = _k_digit_vectors(kvec, p, m)
    for c in range(d):
        acc = 0
        for mat, kd in zip(matrices, kdigits):
            acc += sum(mat[j][c] * kd[j] for j in range(m))
        if acc % p:
            return False
    return True


def _combined_numerator(cfg: LatticeConfig, kvec) -> Poly:
    p = cfg.p
    acc = Poly.zero(p)
    for k, q in zip(kvec, cfg.generators):
        acc = acc + poly_from_int(k, p) * q
    return acc % cfg.modulus


@functools.lru_cache(maxsize=512)
def _combined_residues(cfg: LatticeConfig) -> tuple:
    """(kvec, (sum_i k_i*q_i) mod pX, weight) for every nonzero frequency
    tuple; shared across the per-shape bound computations of one
    configuration."""
    out = []
    for kvec in itertools.product(range(cfg.p**cfg.m), repeat=cfg.t):
        if any(kvec):
            out.append(
                (kvec, _combined_numerator(cfg, kvec), walsh_weight_vec(kvec, cfg.p))
            )
    return tuple(out)


def dual_test_valuation(spec: SubLatticeSpec, cfg: LatticeConfig, kvec) -> bool:
    """True when the fractional part of (sum_i k_i*q_i)*B / pX sinks below
    X^-d, i.e. its valuation is < -d."""
    kvec = tuple(kvec)
    f = (_combined_numerator(cfg, kvec) * spec.cls.modulus) % cfg.modulus
    return valuation(f, cfg.modulus) < -spec.d


def count_low_valuation(pX: Poly, u: int) -> int:
    """Exhaustive count of nonzero a of degree < m with valuation(a/pX) < -u."""
    from .gfpoly import poly_is_irreducible

    m = pX.degree
    if m is NEG_INF or m < 1 or not pX.is_monic or not poly_is_irreducible(pX):
        raise ValueError("modulus must be monic irreducible")
    if not 0 <= u <= m:
        raise ValueError(f"level {u} outside [0, {m}]")
    count = 0
    for a in range(1, pX.p**m):
        if valuation(poly_from_int(a, pX.p), pX) < -u:
            count += 1
    return count


def _dual_weight_sum(cfg: LatticeConfig, modulus: Poly, d: int):
    """Sum of product weights over nonzero frequency tuples in the dual."""
    p = cfg.p
    exact = p == 2
    total = Fraction(0) if exact else 0.0
    terms = 0
    trivial_b = modulus.degree == 0
    for _kvec, combined, weight in _combined_residues(cfg):
        f = combined if trivial_b else (combined * modulus) % cfg.modulus
        if valuation(f, cfg.modulus) < -d:
            total += weight
            terms += 1
    if not exact and terms:
        # one-sided guard: round the float accumulation upward
        total *= 1.0 + terms * 2.0**-50
    return total


@functools.lru_cache(maxsize=65536)
def _modulus_bound(cfg: LatticeConfig, modulus: Poly, d: int):
    p, m, t = cfg.p, cfg.m, cfg.t
    cap = p**d
    dual = _dual_weight_sum(cfg, modulus, d)
    if p == 2:
        bound = t * Fraction(1, p ** (m - d)) + cap * dual
    else:
        bound = t * float(p) ** (d - m) + cap * dual
    return min(bound, cap)


def walsh_discrepancy_bound(spec: SubLatticeSpec, cfg: LatticeConfig):
    """Rigorous upper bound on L * D*_L of the sub-lattice point set
    (L = p^d): t*p^(d-m) plus p^d times the dual weight sum, capped at the
    trivial bound p^d.  Independent of the residue and block position."""
    from .plattice import _check_sublattice

    _check_sublattice(spec, cfg)
    return _modulus_bound(cfg, spec.cls.modulus, spec.d)
