"""Constructive generator search with certificate merits and counting checks.

The searches certify every candidate generator tuple (or Korobov power
tuple) with the full discrepancy certificate and rank by (merit, integer
encoding); since the best merit never exceeds the candidate average, the
searches realize the averaging existence argument constructively.  The
counting helpers classify, for a fixed frequency tuple, how many
candidates annihilate it outright versus merely sink it below X^-d.
"""

from __future__ import annotations

import itertools
import json
import os
from dataclasses import dataclass
from fractions import Fraction

from .discrepancy import (
    BudgetExceededError,
    Certificate,
    PointSetD,
    discrepancy_certificate,
    star_discrepancy_exact,
)
from .gfpoly import (
    NEG_INF,
    BasePRational,
    Poly,
    poly_from_int,
    poly_gcd,
    poly_to_int,
    valuation,
)
from .plattice import LatticeConfig, korobov_qvec
from .seqgen import HaltonConfig
from .walsh import _modulus_bound, walsh_weight_total

DEFAULT_SEARCH_BUDGET = 10**6


def search_budget() -> int:
    return int(os.environ.get("HYBRIDQMC_SEARCH_BUDGET", DEFAULT_SEARCH_BUDGET))


def nonzero_polys(p: int, m: int) -> list:
    """All nonzero polynomials of degree < m, ascending integer encoding."""
    return [poly_from_int(k, p) for k in range(1, p**m)]


@dataclass(frozen=True)
class MeritReport:
    candidate: tuple
    merit: object
    certificate: Certificate
    rank: int

    @property
    def encoding(self) -> tuple:
        return tuple(poly_to_int(q) for q in self.candidate)

    def as_dict(self) -> dict:
        return {
            "candidate": [str(q) for q in self.candidate],
            "encoding": list(self.encoding),
            "merit": float(self.merit),
            "rank": self.rank,
        }


@dataclass(frozen=True)
class SearchResult:
    mode: str
    p: int
    m: int
    t: int
    halton_cfg: HaltonConfig
    modulus: Poly
    reports: tuple
    average: object

    @property
    def best(self) -> MeritReport:
        return self.reports[0]

    @property
    def existence_ok(self) -> bool:
        """Sanity gate: the minimum merit is at most the candidate average."""
        if isinstance(self.average, Fraction):
            return self.best.merit <= self.average
        # float averages carry accumulation error; allow one part in 10^12
        return float(self.best.merit) <= self.average * (1 + 1e-12)

    def as_dict(self, top: int = 10) -> dict:
        return {
            "mode": self.mode,
            "p": self.p,
            "m": self.m,
            "t": self.t,
            "s": self.halton_cfg.s,
            "bases": [str(b) for b in self.halton_cfg.bases],
            "pX": str(self.modulus),
            "candidateCount": len(self.reports),
            "best": self.best.as_dict(),
            "average": float(self.average),
            "existenceOk": self.existence_ok,
            "table": [r.as_dict() for r in self.reports[:top]],
            "perLevel": self.best.certificate.as_dict()["perLevel"],
        }

    def to_json(self, top: int = 10) -> str:
        return json.dumps(self.as_dict(top), indent=2, sort_keys=True)


def _certify_candidates(mode, m, halton_cfg, pX, candidates) -> SearchResult:
    p = halton_cfg.p
    scored = []
    total = Fraction(0) if p == 2 else 0.0
    for qvec in candidates:
        cfg = LatticeConfig(p, pX, qvec)
        cert = discrepancy_certificate(m, halton_cfg, cfg)
        scored.append((cert.total, tuple(poly_to_int(q) for q in qvec), qvec, cert))
        total += cert.total
    scored.sort(key=lambda item: (item[0], item[1]))
    reports = tuple(
        MeritReport(qvec, merit, cert, rank)
        for rank, (merit, _, qvec, cert) in enumerate(scored, start=1)
    )
    average = total / len(scored)
    result = SearchResult(mode, p, m, len(reports[0].candidate), halton_cfg, pX, reports, average)
    if not result.existence_ok:
        raise ArithmeticError("search minimum exceeds the candidate average")
    return result


def search_exhaustive(
    m: int, t: int, halton_cfg: HaltonConfig, pX: Poly, budget: int | None = None
) -> SearchResult:
    """Certify every generator tuple in (nonzero degree < m)^t, sorted by merit."""
    p = halton_cfg.p
    if budget is None:
        budget = search_budget()
    space = (p**m - 1) ** t
    if space > budget:
        raise BudgetExceededError(
            f"{space} candidate tuples exceed budget {budget}; "
            "consider the Korobov search"
        )
    candidates = itertools.product(nonzero_polys(p, m), repeat=t)
    return _certify_candidates("exhaustive", m, halton_cfg, pX, candidates)


def search_korobov(m: int, t: int, halton_cfg: HaltonConfig, pX: Poly) -> SearchResult:
    """Certify the power tuples (g, g^2, ..., g^t) for every nonzero g."""
    p = halton_cfg.p
    candidates = (korobov_qvec(g, t, pX) for g in nonzero_polys(p, m))
    return _certify_candidates("korobov", m, halton_cfg, pX, candidates)


@dataclass(frozen=True)
class DualCounts:
    """Candidate classification for one frequency tuple: kernel candidates
    annihilate it mod pX; low_valuation candidates only sink it below X^-d."""

    kernel: int
    low_valuation: int

    @property
    def total_dual(self) -> int:
        return self.kernel + self.low_valuation


def dual_solution_counts(
    kvec, modulus_b: Poly, pX: Poly, t: int, u: int, mode: str = "general"
) -> DualCounts:
    """Exhaustive kernel/dual counts over the candidate space.

    general: candidates are all nonzero generator t-tuples; checks
    kernel <= (p^m-1)^(t-1) and kernel+low <= (p^m-1)^(t-1) * p^(m-d).
    korobov: candidates are power tuples of single generators; checks
    kernel <= t and low <= t * (p^(m-d) - 1).
    """
    kvec = tuple(kvec)
    if not any(kvec):
        raise ValueError("frequency tuple must be nonzero")
    if len(kvec) != t:
        raise ValueError("frequency tuple length must equal t")
    p = pX.p
    m = pX.degree
    deg_b = 0 if modulus_b.degree is NEG_INF else modulus_b.degree
    if modulus_b.is_zero or poly_gcd(modulus_b, pX).degree != 0:
        raise ValueError("modulus shares factor with pX")
    if not deg_b <= u <= m:
        raise ValueError("need deg(B) <= u <= m")
    d = u - deg_b
    kpolys = [poly_from_int(k, p) for k in kvec]
    if mode == "general":
        candidates = itertools.product(nonzero_polys(p, m), repeat=t)
    elif mode == "korobov":
        candidates = (korobov_qvec(g, t, pX) for g in nonzero_polys(p, m))
    else:
        raise ValueError(f"unknown mode {mode!r}")
    kernel = low = 0
    for qvec in candidates:
        acc = Poly.zero(p)
        for kp, q in zip(kpolys, qvec):
            acc = acc + kp * q
        acc = acc % pX
        if acc.is_zero:
            kernel += 1
            continue
        if valuation((acc * modulus_b) % pX, pX) < -d:
            low += 1
    counts = DualCounts(kernel, low)
    pm = p**m
    if mode == "general":
        if kernel > (pm - 1) ** (t - 1):
            raise ArithmeticError("kernel count exceeds (p^m-1)^(t-1)")
        if counts.total_dual > (pm - 1) ** (t - 1) * p ** (m - d):
            raise ArithmeticError("dual count exceeds (p^m-1)^(t-1) * p^(m-d)")
    else:
        if kernel > t:
            raise ArithmeticError("kernel count exceeds t")
        if low > t * (p ** (m - d) - 1):
            raise ArithmeticError("low-valuation count exceeds t*(p^(m-d)-1)")
    return counts


def average_bound_check(modulus_b: Poly, u: int, pX: Poly, t: int, budget: int | None = None):
    """(empirical average, theoretical cap) of the sub-lattice Walsh bound
    over every generator tuple; raises if the average exceeds the cap."""
    p = pX.p
    m = pX.degree
    if budget is None:
        budget = search_budget()
    space = (p**m - 1) ** t
    if space > budget:
        raise BudgetExceededError(f"{space} candidate tuples exceed budget {budget}")
    deg_b = 0 if modulus_b.degree is NEG_INF else modulus_b.degree
    if not deg_b <= u <= m:
        raise ValueError("need deg(B) <= u <= m")
    d = u - deg_b
    total = Fraction(0) if p == 2 else 0.0
    count = 0
    for qvec in itertools.product(nonzero_polys(p, m), repeat=t):
        cfg = LatticeConfig(p, pX, qvec)
        total += _modulus_bound(cfg, modulus_b, d)
        count += 1
    empirical = total / count
    theoretical = t + Fraction(p**m, p**m - 1) * walsh_weight_total(p, m, t)
    if empirical > theoretical:
        raise ArithmeticError("empirical average exceeds the theoretical cap")
    return empirical, theoretical


def anchor_pair_set(m: int, pX: Poly) -> PointSetD:
    """The 2-D set (n/p^m, unit-generator lattice coordinate of n)."""
    p = pX.p
    cfg = LatticeConfig(p, pX, (Poly.one(p),))
    from .plattice import plattice_point_laurent

    pts = []
    for n in range(p**m):
        pts.append((BasePRational(p, n, m),) + plattice_point_laurent(n, cfg))
    return PointSetD(pts)


def negative_control_report(m: int, pX: Poly, t: int = 2) -> dict:
    """Why the unit component must not meet the anchor coordinate.

    Compares Korobov power tuples (g, ..., g^t) against the shifted family
    (1, g, ..., g^(t-1)) and measures the exact worst prefix discrepancy of
    the 2-D set pairing the anchor with the unit-generator coordinate.
    """
    p = pX.p
    halton0 = HaltonConfig.make(p, ())
    korobov = search_korobov(m, t, halton0, pX)
    shifted = []
    for g in nonzero_polys(p, m):
        qvec = (Poly.one(p),) + korobov_qvec(g, t - 1, pX) if t > 1 else (Poly.one(p),)
        cfg = LatticeConfig(p, pX, qvec)
        cert = discrepancy_certificate(m, halton0, cfg)
        shifted.append(
            {
                "g": str(g),
                "candidate": [str(q) for q in qvec],
                "merit": float(cert.total),
            }
        )
    pair = anchor_pair_set(m, pX)
    worst = Fraction(0)
    worst_nn = 0
    for nn in range(1, pair.n + 1):
        val = nn * star_discrepancy_exact(pair.prefix(nn))
        if val > worst:
            worst, worst_nn = val, nn
    best_g = korobov.best.candidate[0]
    best_cfg = LatticeConfig(p, pX, (best_g,))
    from .plattice import plattice_point_laurent

    best_pair = PointSetD(
        [
            (BasePRational(p, n, m),) + plattice_point_laurent(n, best_cfg)
            for n in range(p**m)
        ]
    )
    best_worst = Fraction(0)
    for nn in range(1, best_pair.n + 1):
        best_worst = max(best_worst, nn * star_discrepancy_exact(best_pair.prefix(nn)))
    n_points = p**m
    return {
        "p": p,
        "m": m,
        "t": t,
        "pX": str(pX),
        "bestKorobov": korobov.best.as_dict(),
        "shiftedFamily": shifted,
        "anchorUnitPair": {
            "maxPrefixBound": float(worst),
            "argmax": worst_nn,
            "exactScaledDiscrepancy": float(worst),
            "floorNQuarter": n_points / 4,
            "floorHolds": worst >= Fraction(n_points, 4),
        },
        "bestKorobovAnchorPair": {"maxPrefixBound": float(best_worst)},
        "ratio": float(worst / best_worst) if best_worst else None,
    }
