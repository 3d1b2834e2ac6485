"""Named exhaustive verification suites at their documented desk scales.

Each suite re-checks one structural fact behind the toolkit (box/class
correspondence, Walsh-sum bound soundness, weight-sum identity, counting
caps, ...) over an exhaustive or seeded-random grid, and reports the
first counterexample on failure.  The CLI `verify` command runs them by
name; the acceptance tests call them directly.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass
from fractions import Fraction

from .discrepancy import (
    PointSetD,
    discrepancy_certificate,
    prefix_reduction_bound,
    star_discrepancy_exact,
)
from .gfpoly import (
    Poly,
    ResidueClass,
    irreducible_poly,
    poly_from_int,
    poly_gcd,
)
from .plattice import (
    LatticeConfig,
    SubLatticeSpec,
    sublattice_affine,
    sublattice_enumerate,
)
from .search import average_bound_check, dual_solution_counts, nonzero_polys
from .seqgen import (
    HaltonConfig,
    SigmaBijection,
    box_to_residue_classes,
    halton_point,
    hybrid_point_set,
    residue_classes_measure,
)
from .walsh import (
    character_sum,
    count_low_valuation,
    dual_test_matrix,
    dual_test_valuation,
    walsh_discrepancy_bound,
    walsh_weight_total,
)


@dataclass
class SuiteResult:
    name: str
    passed: bool
    checks: int
    detail: str
    counterexample: str | None = None

    def summary(self) -> str:
        if self.passed:
            return f"pass ({self.detail}; {self.checks} checks)"
        return f"FAIL ({self.detail}): {self.counterexample}"


def _box_class_grid(cfg: HaltonConfig, max_level: int, n_limit: int):
    """Yield (levels, numerators, classes) over the full admissible grid."""
    p = cfg.p
    degrees = cfg.degrees
    level_space = itertools.product(range(max_level + 1), repeat=cfg.s)
    for levels in level_space:
        caps = [p ** (e * l) for e, l in zip(degrees, levels)]
        for numerators in itertools.product(*(range(1, c + 1) for c in caps)):
            yield levels, numerators, box_to_residue_classes(cfg, levels, numerators)


def suite_boxdecomp() -> SuiteResult:
    """Box membership == residue-class membership, disjointness, and the
    exact measure identity; p=2 bases (X, X+1), levels <= 2, n < 256,
    plus a non-default sigma variant."""
    checks = 0
    variants = []
    p2 = 2
    variants.append(
        ("default sigma", HaltonConfig.make(p2, (Poly.x(p2), Poly(p2, (1, 1)))), 256)
    )
    # degree-1 binary bases admit only the identity bijection, so the
    # non-default variants use a quadratic base and p=3
    swapped_e2 = SigmaBijection(2, 2, (0, 2, 3, 1))
    variants.append(
        (
            "sigma on quadratic base",
            HaltonConfig.make(
                2,
                (Poly.x(2), Poly(2, (1, 1, 1))),
                (SigmaBijection(2, 1, (0, 1)), swapped_e2),
            ),
            256,
        )
    )
    swapped_p3 = SigmaBijection(3, 1, (0, 2, 1))
    variants.append(
        (
            "sigma at p=3",
            HaltonConfig.make(
                3,
                (Poly.x(3), Poly(3, (1, 1))),
                (swapped_p3, swapped_p3),
            ),
            81,
        )
    )
    for label, cfg, n_limit in variants:
        degrees = cfg.degrees
        for levels, numerators, classes in _box_class_grid(cfg, 2, n_limit):
            volume = Fraction(1)
            for e, l, v in zip(degrees, levels, numerators):
                volume *= Fraction(v, cfg.p ** (e * l))
            if residue_classes_measure(classes) != volume:
                return SuiteResult(
                    "boxdecomp", False, checks, label,
                    f"measure mismatch at levels={levels} v={numerators}",
                )
            bounds = [
                Fraction(v, cfg.p ** (e * l))
                for e, l, v in zip(degrees, levels, numerators)
            ]
            for n in range(n_limit):
                point = halton_point(n, cfg)
                in_box = all(x.as_fraction() < b for x, b in zip(point, bounds))
                hits = sum(1 for c in classes if c.contains(n))
                if hits > 1:
                    return SuiteResult(
                        "boxdecomp", False, checks, label,
                        f"overlapping classes at n={n} levels={levels} v={numerators}",
                    )
                if in_box != (hits == 1):
                    return SuiteResult(
                        "boxdecomp", False, checks, label,
                        f"membership mismatch at n={n} levels={levels} v={numerators}",
                    )
                checks += 1
    return SuiteResult(
        "boxdecomp", True, checks,
        "p=2 bases (X, X+1) levels<=2 n<256, plus non-default sigma variants",
    )


def suite_walshbound() -> SuiteResult:
    """Exact L*D*_L <= Walsh-sum bound, exhaustively over binary lattices
    m <= 4, t <= 2, moduli in {1, X, X+1, (X+1)^2}, all residues."""
    checks = 0
    p = 2
    moduli = [
        Poly.one(p),
        Poly.x(p),
        Poly(p, (1, 1)),
        Poly(p, (1, 1)) * Poly(p, (1, 1)),
    ]
    tight_seen = False
    for m in range(2, 5):
        pX = irreducible_poly(p, m)
        for t in (1, 2):
            for qvec in itertools.product(nonzero_polys(p, m), repeat=t):
                cfg = LatticeConfig(p, pX, qvec)
                for modulus in moduli:
                    deg_b = modulus.degree if modulus.coeffs else 0
                    if deg_b > m or poly_gcd(modulus, pX).degree != 0:
                        continue
                    u = m
                    for r_enc in range(p**deg_b):
                        residue = poly_from_int(r_enc, p)
                        spec = SubLatticeSpec(u, 0, ResidueClass(modulus, residue))
                        bound = walsh_discrepancy_bound(spec, cfg)
                        pts = PointSetD(sublattice_enumerate(spec, cfg))
                        exact = pts.n * star_discrepancy_exact(pts)
                        if exact > bound:
                            return SuiteResult(
                                "walshbound", False, checks, f"m={m} t={t}",
                                f"exact {exact} > bound {bound} at q={[str(q) for q in qvec]} "
                                f"B={modulus} R={residue}",
                            )
                        if (
                            m == 2
                            and t == 1
                            and str(qvec[0]) == "X"
                            and modulus == Poly.one(p)
                            and bound == 1
                            and exact == 1
                        ):
                            tight_seen = True
                        checks += 1
    if not tight_seen:
        return SuiteResult(
            "walshbound", False, checks, "tight case",
            "expected bound = exact = 1 for p=2 m=2 q=(X) B=1",
        )
    return SuiteResult(
        "walshbound", True, checks,
        "p=2, m<=4, t<=2, B in {1, X, X+1, (X+1)^2}, all residues, tight case included",
    )


def suite_weightsum() -> SuiteResult:
    """Closed-form total Walsh weight equals direct summation
    (exact at p=2, 1e-9 otherwise); p in {2,3,5}, m <= 3, t <= 3."""
    checks = 0
    for p in (2, 3, 5):
        for m in range(1, 4):
            for t in range(1, 4):
                closed = walsh_weight_total(p, m, t, "closed")
                direct = walsh_weight_total(p, m, t, "direct")
                if p == 2:
                    ok = closed == direct
                else:
                    ok = abs(float(closed) - direct) <= 1e-9
                if not ok:
                    return SuiteResult(
                        "weightsum", False, checks, f"p={p} m={m} t={t}",
                        f"closed {float(closed)} != direct {float(direct)}",
                    )
                checks += 1
    return SuiteResult("weightsum", True, checks, "p in {2,3,5}, m<=3, t<=3")


def suite_valcount() -> SuiteResult:
    """Exhaustive low-valuation count equals p^(m-u) - 1 for u <= m <= 6."""
    checks = 0
    for p in (2, 3):
        for m in range(1, 7):
            pX = irreducible_poly(p, m)
            for u in range(m + 1):
                got = count_low_valuation(pX, u)
                want = p ** (m - u) - 1
                if got != want:
                    return SuiteResult(
                        "valcount", False, checks, f"p={p} m={m} u={u}",
                        f"count {got} != {want}",
                    )
                checks += 1
    return SuiteResult("valcount", True, checks, "p in {2,3}, 0 <= u <= m <= 6")


def _random_sublattice(rng: random.Random, p: int, m: int, t: int):
    pX = irreducible_poly(p, m)
    qvec = tuple(
        poly_from_int(rng.randrange(1, p**m), p) for _ in range(t)
    )
    cfg = LatticeConfig(p, pX, qvec)
    while True:
        deg_b = rng.randrange(0, m + 1)
        enc = rng.randrange(p**deg_b, 2 * p**deg_b) if deg_b else 1
        modulus = poly_from_int(enc, p)
        if deg_b == 0:
            modulus = Poly.one(p)
        if poly_gcd(modulus, pX).degree == 0:
            break
    residue = poly_from_int(rng.randrange(p**deg_b), p) if deg_b else Poly.zero(p)
    u = rng.randrange(deg_b, m + 1)
    blocks = p**m // p**u
    start = rng.randrange(blocks) * p**u
    spec = SubLatticeSpec(u, start, ResidueClass(modulus, residue))
    return spec, cfg


def suite_dichotomy(trials: int = 200, seed: int = 20240801) -> SuiteResult:
    """|character sum| is 0 or p^d exactly, and fullness agrees with both
    the matrix-kernel and the valuation dual tests."""
    rng = random.Random(seed)
    checks = 0
    for _ in range(trials):
        p = rng.choice((2, 3))
        m = rng.randrange(1, 6)
        t = rng.randrange(1, 3)
        spec, cfg = _random_sublattice(rng, p, m, t)
        kvec = tuple(rng.randrange(p**m) for _ in range(t))
        acc = character_sum(spec, cfg, kvec)
        try:
            mag = acc.magnitude()
        except ArithmeticError:
            return SuiteResult(
                "dichotomy", False, checks, "integer accumulator",
                f"counts {acc.counts} at p={p} m={m} spec={spec} k={kvec}",
            )
        full = mag == p**spec.d
        if mag not in (0, p**spec.d):
            return SuiteResult(
                "dichotomy", False, checks, "magnitude",
                f"|sum|={mag} at p={p} m={m} k={kvec}",
            )
        if full != dual_test_matrix(spec, cfg, kvec) or full != dual_test_valuation(
            spec, cfg, kvec
        ):
            return SuiteResult(
                "dichotomy", False, checks, "three-way agreement",
                f"p={p} m={m} q={[str(q) for q in cfg.generators]} "
                f"B={spec.cls.modulus} R={spec.cls.residue} u={spec.u} k={kvec}",
            )
        checks += 1
    return SuiteResult(
        "dichotomy", True, checks, f"{trials} random (cfg, spec, k), p in {{2,3}}, m<=5, t<=2"
    )


def suite_sublattice(trials: int = 500, seed: int = 19937) -> SuiteResult:
    """Block/residue intersections have size p^d and the affine digit map
    reproduces the enumerated points as multisets."""
    rng = random.Random(seed)
    checks = 0
    for _ in range(trials):
        p = rng.choice((2, 3))
        m = rng.randrange(1, 6)
        t = rng.randrange(1, 3)
        spec, cfg = _random_sublattice(rng, p, m, t)
        enumerated = sublattice_enumerate(spec, cfg)
        if len(enumerated) != p**spec.d:
            return SuiteResult(
                "sublattice", False, checks, "cardinality",
                f"|points|={len(enumerated)} != p^{spec.d} at {spec}",
            )
        _, _, affine = sublattice_affine(spec, cfg)
        if sorted(enumerated) != sorted(affine):
            return SuiteResult(
                "sublattice", False, checks, "affine agreement",
                f"mismatch at p={p} m={m} spec={spec}",
            )
        checks += 1
    return SuiteResult(
        "sublattice", True, checks, f"{trials} random specs, p in {{2,3}}, m<=5"
    )


def suite_averaging() -> SuiteResult:
    """Mean Walsh-sum bound over all generator tuples stays below the
    closed-form cap; p=2, m <= 4, t <= 2, moduli {1, X+1, (X+1)^2}, u=m."""
    checks = 0
    p = 2
    moduli = [Poly.one(p), Poly(p, (1, 1)), Poly(p, (1, 1)) * Poly(p, (1, 1))]
    for m in range(2, 5):
        pX = irreducible_poly(p, m)
        for t in (1, 2):
            for modulus in moduli:
                deg_b = modulus.degree if modulus.coeffs else 0
                if deg_b > m or poly_gcd(modulus, pX).degree != 0:
                    continue
                empirical, cap = average_bound_check(modulus, m, pX, t)
                if empirical > cap:
                    return SuiteResult(
                        "averaging", False, checks, f"m={m} t={t} B={modulus}",
                        f"empirical {float(empirical)} > cap {float(cap)}",
                    )
                checks += 1
    return SuiteResult(
        "averaging", True, checks, "p=2, m<=4, t<=2, B in {1, X+1, (X+1)^2}, u=m"
    )


def suite_counting() -> SuiteResult:
    """Kernel/dual counting caps for every nonzero frequency tuple;
    p=2, m <= 3, general t <= 2 and Korobov t <= 3, B in {1, X+1}."""
    checks = 0
    p = 2
    for m in range(1, 4):
        pX = irreducible_poly(p, m)
        moduli = [Poly.one(p), Poly(p, (1, 1))]
        for modulus in moduli:
            deg_b = modulus.degree if modulus.coeffs else 0
            if deg_b > m or poly_gcd(modulus, pX).degree != 0:
                continue
            for u in range(deg_b, m + 1):
                for mode, tmax in (("general", 2), ("korobov", 3)):
                    for t in range(1, tmax + 1):
                        for kvec in itertools.product(range(p**m), repeat=t):
                            if not any(kvec):
                                continue
                            try:
                                dual_solution_counts(kvec, modulus, pX, t, u, mode)
                            except ArithmeticError as exc:
                                return SuiteResult(
                                    "counting", False, checks,
                                    f"{mode} m={m} t={t} B={modulus} u={u}",
                                    f"k={kvec}: {exc}",
                                )
                            checks += 1
    return SuiteResult(
        "counting", True, checks,
        "p=2, m<=3, B in {1, X+1}, general t<=2 / korobov t<=3, all k",
    )


def suite_certificate() -> SuiteResult:
    """Certificate totals dominate the exact scaled discrepancy of every
    hybrid prefix; p=2, m <= 4, s in {0, 1}, t=1, all generators."""
    checks = 0
    p = 2
    for m in range(2, 5):
        pX = irreducible_poly(p, m)
        for bases in ((), (Poly.x(p),)):
            halton_cfg = HaltonConfig.make(p, bases)
            for q_enc in range(1, p**m):
                lattice_cfg = LatticeConfig(p, pX, (poly_from_int(q_enc, p),))
                cert = discrepancy_certificate(m, halton_cfg, lattice_cfg)
                points = PointSetD(hybrid_point_set(m, halton_cfg, lattice_cfg))
                for nn in range(1, points.n + 1):
                    exact = nn * star_discrepancy_exact(points.prefix(nn))
                    if exact > cert.total:
                        return SuiteResult(
                            "certificate", False, checks, f"m={m} s={len(bases)}",
                            f"{nn}*D* = {float(exact)} > total {float(cert.total)} "
                            f"at q encoding {q_enc}",
                        )
                    checks += 1
                reduced = prefix_reduction_bound(points)
                if points.n * star_discrepancy_exact(points) > reduced:
                    return SuiteResult(
                        "certificate", False, checks, f"m={m} s={len(bases)}",
                        f"prefix reduction bound violated at q encoding {q_enc}",
                    )
                checks += 1
    return SuiteResult(
        "certificate", True, checks, "p=2, m<=4, s in {0,1}, t=1, all q, all prefixes"
    )


SUITES = {
    "boxdecomp": suite_boxdecomp,
    "walshbound": suite_walshbound,
    "weightsum": suite_weightsum,
    "valcount": suite_valcount,
    "sublattice": suite_sublattice,
    "dichotomy": suite_dichotomy,
    "averaging": suite_averaging,
    "counting": suite_counting,
    "certificate": suite_certificate,
}


def run_suite(name: str) -> SuiteResult:
    if name not in SUITES:
        raise KeyError(f"unknown suite {name!r}; choose from {', '.join(sorted(SUITES))}")
    return SUITES[name]()
