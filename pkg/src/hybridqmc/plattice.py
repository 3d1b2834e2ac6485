"""Polynomial lattice point sets and their aligned-block sub-lattices.

A lattice configuration fixes a monic irreducible modulus pX of degree m
and t nonzero generators of degree < m.  The n-th point has component i
equal to the first m Laurent coefficients of {n(X)*q_i(X)/pX}, read as
base-p digits.  The same points arise from Hankel generating matrices
acting on the digit vector of n; both routes are provided and kept
independent of each other.

A SubLatticeSpec selects the lattice points whose indices lie in an
aligned block of p^u consecutive integers and in a residue class
(B(X), R(X)) coprime to the modulus; those p^(u - deg B) points also
carry an affine digit-map description (matrix columns plus a shift).
"""

from __future__ import annotations

import functools
from dataclasses import dataclass

from .gfpoly import (
    NEG_INF,
    BasePRational,
    Poly,
    ResidueClass,
    laurent_coeffs,
    poly_from_int,
    poly_gcd,
)


@dataclass(frozen=True)
class LatticeConfig:
    """Modulus pX (monic, irreducible, degree m) and t nonzero generators."""

    p: int
    modulus: Poly
    generators: tuple

    def __post_init__(self):
        from .gfpoly import as_prime, poly_is_irreducible

        object.__setattr__(self, "p", as_prime(self.p))
        object.__setattr__(self, "generators", tuple(self.generators))
        pX = self.modulus
        if pX.p != self.p:
            raise ValueError("modulus prime mismatch")
        if pX.degree is NEG_INF or pX.degree < 1 or not pX.is_monic:
            raise ValueError("modulus must be monic and nonconstant")
        if not poly_is_irreducible(pX):
            raise ValueError("modulus must be irreducible")
        if not self.generators:
            raise ValueError("at least one generator required")
        for q in self.generators:
            if q.p != self.p:
                raise ValueError("generator prime mismatch")
            if q.is_zero:
                raise ValueError("zero generator")
            if not q.degree < pX.degree:
                raise ValueError("generator degree must be below modulus degree")

    @property
    def m(self) -> int:
        return self.modulus.degree

    @property
    def t(self) -> int:
        return len(self.generators)

    @property
    def n_points(self) -> int:
        return self.p**self.m

    @functools.cached_property
    def laurent_prefixes(self) -> tuple:
        """(a_1, ..., a_{2m-1}) of {q_i/pX} per generator, computed once."""
        return tuple(
            laurent_coeffs(q, self.modulus, 2 * self.m - 1) for q in self.generators
        )


def plattice_point_laurent(n: int, cfg: LatticeConfig) -> tuple:
    """The n-th lattice point via truncated Laurent expansion of {n*q_i/pX}."""
    p, m = cfg.p, cfg.m
    if not 0 <= n < p**m:
        raise ValueError(f"index {n} outside [0, {p}^{m})")
    npoly = poly_from_int(n, p)
    coords = []
    for q in cfg.generators:
        digits = laurent_coeffs(npoly * q, cfg.modulus, m)
        num = 0
        for d in digits:
            num = num * p + d
        coords.append(BasePRational(p, num, m))
    return tuple(coords)


@dataclass(frozen=True)
class GeneratingMatrix:
    """m x m Hankel matrix of Laurent coefficients mapping digit vectors."""

    p: int
    rows: tuple

    def __post_init__(self):
        m = len(self.rows)
        for r in range(1, m):
            for c in range(m - 1):
                if self.rows[r][c] != self.rows[r - 1][c + 1]:
                    raise ValueError("rows do not have Hankel structure")

    @property
    def m(self) -> int:
        return len(self.rows)


def build_generating_matrix(q_i: Poly, pX: Poly) -> GeneratingMatrix:
    """Hankel matrix from the (2m-1)-prefix of {q_i/pX}."""
    m = pX.degree
    if not q_i.degree < m:
        raise ValueError("generator degree must be below modulus degree")
    a = laurent_coeffs(q_i, pX, 2 * m - 1)
    rows = tuple(tuple(a[r + c] for c in range(m)) for r in range(m))
    return GeneratingMatrix(q_i.p, rows)


def plattice_point_matrix(n: int, matrices) -> tuple:
    """Lattice point by multiplying the digit vector of n with each matrix."""
    matrices = tuple(matrices)
    if not matrices:
        raise ValueError("no generating matrices")
    p = matrices[0].p
    m = matrices[0].m
    if not 0 <= n < p**m:
        raise ValueError(f"index {n} outside [0, {p}^{m})")
    ndigits = []
    k = n
    for _ in range(m):
        k, r = divmod(k, p)
        ndigits.append(r)
    coords = []
    for mat in matrices:
        num = 0
        for row in mat.rows:
            u = sum(rc * nc for rc, nc in zip(row, ndigits)) % p
            num = num * p + u
        coords.append(BasePRational(p, num, m))
    return tuple(coords)


def korobov_qvec(g: Poly, t: int, pX: Poly) -> tuple:
    """(g, g^2 mod pX, ..., g^t mod pX); every component nonzero."""
    if g.is_zero:
        raise ValueError("zero generator")
    if t < 1:
        raise ValueError("t must be >= 1")
    if not g.degree < pX.degree:
        raise ValueError("generator degree must be below modulus degree")
    out = []
    acc = Poly.one(g.p)
    for _ in range(t):
        acc = (acc * g) % pX
        out.append(acc)
    return tuple(out)


@dataclass(frozen=True)
class SubLatticeSpec:
    """An aligned index block [block_start, block_start + p^u) intersected
    with a residue class whose modulus has degree <= u."""

    u: int
    block_start: int
    cls: ResidueClass

    def __post_init__(self):
        if self.u < 0:
            raise ValueError("block level must be >= 0")
        if self.block_start < 0:
            raise ValueError("block start must be >= 0")
        p = self.cls.p
        if self.block_start % p**self.u:
            raise ValueError("block start must be a multiple of p^u")
        if self.deg_modulus > self.u:
            raise ValueError("modulus degree exceeds block level")

    @property
    def p(self) -> int:
        return self.cls.p

    @property
    def deg_modulus(self) -> int:
        d = self.cls.modulus.degree
        return 0 if d is NEG_INF else d

    @property
    def d(self) -> int:
        """Digit freedom: the block holds exactly p^d matching indices."""
        return self.u - self.deg_modulus

    @functools.cached_property
    def shift_poly(self) -> Poly:
        """The fixed high part C(X): matching indices have digit polynomial
        (l(X) + X^d C(X)) * B(X) + R(X) with l running over degrees < d."""
        B, R = self.cls.modulus, self.cls.residue
        p = self.p
        a = poly_from_int(self.block_start, p)
        h0 = (R - a) % B
        k_base, rem = divmod(a + h0 - R, B)
        if not rem.is_zero:
            raise AssertionError("congruence solution must be divisible by modulus")
        if self.d == 0:
            return k_base
        return k_base // Poly.x(p).shift(self.d - 1)

    def anchor_index(self) -> int:
        """The block member with zero low digit part (l = 0)."""
        from .gfpoly import poly_to_int

        B, R = self.cls.modulus, self.cls.residue
        n0 = self.shift_poly.shift(self.d) * B + R
        return poly_to_int(n0)


def _check_sublattice(spec: SubLatticeSpec, cfg: LatticeConfig):
    if spec.p != cfg.p:
        raise ValueError("prime mismatch between spec and lattice")
    if spec.u > cfg.m:
        raise ValueError("block level exceeds modulus degree")
    if spec.block_start + cfg.p**spec.u > cfg.n_points:
        raise ValueError("block extends past the point set")
    if not spec.cls.modulus.is_zero:
        g = poly_gcd(spec.cls.modulus, cfg.modulus)
        if g.degree is not NEG_INF and g.degree > 0:
            raise ValueError("modulus shares factor with pX")


def sublattice_indices(spec: SubLatticeSpec, cfg: LatticeConfig) -> list:
    """Ascending indices n in the block with n(X) in the residue class."""
    _check_sublattice(spec, cfg)
    p = cfg.p
    block = range(spec.block_start, spec.block_start + p**spec.u)
    out = [n for n in block if spec.cls.contains(n)]
    if len(out) != p**spec.d:
        raise AssertionError("block/residue intersection has unexpected size")
    return out


def sublattice_enumerate(spec: SubLatticeSpec, cfg: LatticeConfig) -> list:
    """The p^d sub-lattice points, by direct enumeration in ascending n."""
    return [plattice_point_laurent(n, cfg) for n in sublattice_indices(spec, cfg)]


def sublattice_matrices(spec: SubLatticeSpec, cfg: LatticeConfig):
    """Affine digit map of the sub-lattice: (matrices, shifts).

    matrices[i] is m x d with entry [j][c] = a_{j+c+1} from the expansion of
    {B*q_i/pX}; shifts[i] is the m-digit vector of the anchor point.
    """
    _check_sublattice(spec, cfg)
    m, d = cfg.m, spec.d
    B, R = spec.cls.modulus, spec.cls.residue
    n0 = spec.shift_poly.shift(d) * B + R
    matrices = []
    shifts = []
    for q in cfg.generators:
        if d > 0:
            a = laurent_coeffs(B * q, cfg.modulus, m + d - 1)
            matrices.append(tuple(tuple(a[j + c] for c in range(d)) for j in range(m)))
        else:
            matrices.append(tuple(() for _ in range(m)))
        shifts.append(laurent_coeffs(n0 * q, cfg.modulus, m))
    return tuple(matrices), tuple(shifts)


def sublattice_affine(spec: SubLatticeSpec, cfg: LatticeConfig):
    """(matrices, shifts, points): the affine images over l = 0..p^d-1."""
    matrices, shifts = sublattice_matrices(spec, cfg)
    p, m, d = cfg.p, cfg.m, spec.d
    points = []
    for l in range(p**d):
        ldigits = []
        k = l
        for _ in range(d):
            k, r = divmod(k, p)
            ldigits.append(r)
        coords = []
        for mat, shift in zip(matrices, shifts):
            num = 0
            for j in range(m):
                y = (shift[j] + sum(mc * lc for mc, lc in zip(mat[j], ldigits))) % p
                num = num * p + y
            coords.append(BasePRational(p, num, m))
        points.append(tuple(coords))
    return matrices, shifts, points
