import random
from fractions import Fraction

import pytest

import hybridqmc.discrepancy as disc
from hybridqmc.discrepancy import (
    BudgetExceededError,
    PointSetD,
    counting_function,
    discrepancy_certificate,
    format_point_line,
    load_point_set,
    prefix_reduction_bound,
    save_point_set,
    star_discrepancy_1d,
    star_discrepancy_exact,
    superposition_bound,
)
from hybridqmc.gfpoly import BasePRational, Poly, poly_parse
from hybridqmc.plattice import LatticeConfig
from hybridqmc.seqgen import HaltonConfig, hybrid_point_set


def P(text, p=2):
    return poly_parse(text, p)


def F(*args):
    return Fraction(*args)


def ps1(*values):
    return PointSetD([(F(v),) for v in values])


def test_counting_examples():
    pts = ps1(0, F(1, 2))
    assert counting_function(pts, [1]) == 2
    assert counting_function(pts, [F(1, 2)]) == 1
    square = PointSetD([(F(0), F(0))])
    assert counting_function(square, [F(1, 2), F(1, 2)]) == 1
    with pytest.raises(ValueError):
        counting_function(pts, [F(1, 2), F(1, 2)])
    with pytest.raises(ValueError):
        counting_function(pts, [0])


def test_counting_monotone():
    rng = random.Random(23)
    pts = PointSetD(
        [(F(rng.randrange(16), 16), F(rng.randrange(16), 16)) for _ in range(12)]
    )
    grid = [F(k, 8) for k in range(1, 9)]
    for a in grid:
        for b in grid[:-1]:
            assert counting_function(pts, [a, b]) <= counting_function(
                pts, [a, b + F(1, 8)]
            )


def test_exact_1d_examples():
    assert star_discrepancy_exact(ps1(0)) == 1
    assert star_discrepancy_exact(ps1(F(1, 4), F(3, 4))) == F(1, 4)
    assert star_discrepancy_exact(ps1(0, F(1, 4), F(1, 2), F(3, 4))) == F(1, 4)


def test_sorted_formula_examples():
    assert star_discrepancy_1d(ps1(0, F(1, 2))) == F(1, 2)
    assert star_discrepancy_1d(ps1(F(1, 2))) == F(1, 2)
    assert star_discrepancy_1d(ps1(0)) == 1
    with pytest.raises(ValueError):
        star_discrepancy_1d(PointSetD([(F(0), F(0))]))


def test_formula_equals_grid_random():
    rng = random.Random(41)
    for _ in range(200):
        n = rng.randrange(1, 65)
        pts = ps1(*(F(rng.randrange(128), 128) for _ in range(n)))
        assert star_discrepancy_1d(pts) == star_discrepancy_exact(pts)


def test_grid_paths_agree():
    rng = random.Random(4711)
    for dim in (1, 2, 3):
        for _ in range(20):
            n = rng.randrange(1, 24)
            pts = PointSetD(
                [
                    tuple(F(rng.randrange(27), 27) for _ in range(dim))
                    for _ in range(n)
                ]
            )
            dn, nu, ca = disc._rescaled_columns(pts)
            assert disc._grid_extremes_python(pts.n, dn, nu, ca) == disc._grid_extremes_numpy(
                pts.n, dn, nu, ca
            )


def test_monotone_refinement():
    # a denser candidate grid never changes the exact result
    rng = random.Random(8)
    for _ in range(30):
        n = rng.randrange(1, 16)
        pts = PointSetD(
            [(F(rng.randrange(16), 16), F(rng.randrange(16), 16)) for _ in range(n)]
        )
        base = star_discrepancy_exact(pts)
        extra = [
            [F(rng.randrange(1, 32), 32) for _ in range(4)],
            [F(rng.randrange(1, 32), 32) for _ in range(4)],
        ]
        assert star_discrepancy_exact(pts, extra_candidates=extra) == base


def test_exact_dim_and_budget_limits():
    with pytest.raises(ValueError):
        star_discrepancy_exact(PointSetD([(F(0),) * 5]))
    pts = PointSetD([(F(k, 64), F((3 * k) % 64, 64)) for k in range(64)])
    with pytest.raises(BudgetExceededError):
        star_discrepancy_exact(pts, budget=10)


def test_duplicate_points_are_counted_with_multiplicity():
    pts = ps1(F(1, 2), F(1, 2))
    # both points sit at 1/2: D* = max(1 - 1/2, 1/2) = 1/2
    assert star_discrepancy_exact(pts) == F(1, 2)


def test_superposition_examples():
    assert superposition_bound([(2, F(1, 2))]) == 1
    assert superposition_bound([(2, F(1, 2)), (2, F(1, 4))]) == F(3, 2)
    assert superposition_bound([]) == 0
    with pytest.raises(ValueError):
        superposition_bound([(0, F(1, 2))])


def test_superposition_dominates_union():
    rng = random.Random(3)
    for _ in range(25):
        a = [(F(rng.randrange(32), 32),) for _ in range(rng.randrange(1, 10))]
        b = [(F(rng.randrange(32), 32),) for _ in range(rng.randrange(1, 10))]
        da = star_discrepancy_exact(PointSetD(a))
        db = star_discrepancy_exact(PointSetD(b))
        union = PointSetD(a + b)
        lhs = union.n * star_discrepancy_exact(union)
        assert lhs <= superposition_bound([(len(a), da), (len(b), db)])


def test_prefix_reduction_examples():
    single = PointSetD([(F(0), F(1, 3))])
    assert prefix_reduction_bound(single) == F(2, 3) + 1
    with pytest.raises(ValueError):
        prefix_reduction_bound(PointSetD([(F(1, 2), F(0))]))


def test_prefix_reduction_dominates_exact():
    rng = random.Random(77)
    for _ in range(50):
        n = rng.randrange(1, 13)
        pts = PointSetD(
            [(F(i, n), F(rng.randrange(32), 32)) for i in range(n)]
        )
        bound = prefix_reduction_bound(pts)
        assert n * star_discrepancy_exact(pts) <= bound


def test_certificate_example_s0():
    lat = LatticeConfig(2, P("X^2+X+1"), (Poly.x(2),))
    cfg = HaltonConfig.make(2, ())
    cert = discrepancy_certificate(2, cfg, lat)
    assert cert.total == cert.recomputed_total()
    values = {lv.u: lv.value for lv in cert.per_level}
    assert values[0] == 1
    assert cert.total == 1 + values[2] + (values[0] + values[1])
    pts = PointSetD(hybrid_point_set(2, cfg, lat))
    assert pts.n * star_discrepancy_exact(pts) <= cert.total


def test_certificate_example_s1_chain():
    lat = LatticeConfig(2, P("X^2+X+1"), (Poly.x(2),))
    cfg = HaltonConfig.make(2, (Poly.x(2),))
    cert = discrepancy_certificate(2, cfg, lat)
    pts = PointSetD(hybrid_point_set(2, cfg, lat))
    reduced = prefix_reduction_bound(pts)
    exact = pts.n * star_discrepancy_exact(pts)
    assert exact <= reduced <= cert.total


def test_certificate_class_bounds_capped():
    lat = LatticeConfig(2, P("X^4+X+1"), (P("X^3+1"),))
    cfg = HaltonConfig.make(2, (Poly.x(2),))
    cert = discrepancy_certificate(4, cfg, lat)
    for lv in cert.per_level:
        for sh in lv.shapes:
            if sh.d >= 0:
                assert sh.class_bound <= 2**sh.d
            else:
                assert sh.class_bound == 1


def test_certificate_rejects_shared_base():
    lat = LatticeConfig(2, P("X^2+X+1"), (Poly.x(2),))
    cfg = HaltonConfig.make(2, (P("X^2+X+1"),))
    with pytest.raises(ValueError, match="shares a factor"):
        discrepancy_certificate(2, cfg, lat)


def test_point_file_roundtrip(tmp_path):
    lat = LatticeConfig(2, P("X^2+X+1"), (Poly.x(2),))
    cfg = HaltonConfig.make(2, (Poly.x(2),))
    pts = hybrid_point_set(2, cfg, lat)
    path = tmp_path / "points.txt"
    save_point_set(path, pts, {"p": 2, "m": 2, "dim": 3, "count": len(pts)})
    loaded, meta = load_point_set(path)
    assert meta == {"p": 2, "m": 2, "dim": 3, "count": 4}
    assert loaded.fractions == PointSetD(pts).fractions
    # decimal mode parses back to the printed precision
    path2 = tmp_path / "points_dec.txt"
    save_point_set(path2, pts, {"p": 2, "dim": 3, "count": 4}, fmt="decimal")
    loaded2, _ = load_point_set(path2)
    for row, orig in zip(loaded2.fractions, PointSetD(pts).fractions):
        for a, b in zip(row, orig):
            assert abs(a - b) <= Fraction(1, 10**12)


def test_format_point_line_tokens():
    pt = (BasePRational(2, 1, 2), BasePRational(2, 1, 1), BasePRational(2, 3, 2))
    assert format_point_line(pt) == "1/4 1/2 3/4"
    assert format_point_line((F(1, 3),), "decimal", 6) == "0.333333"
    assert format_point_line((F(2, 3),), "decimal", 6) == "0.666667"
