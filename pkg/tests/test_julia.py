import math

import numpy as np
import pytest

from juliacheb.errors import EmptyGrid, GeneratorFailure
from juliacheb.io import read_point_csv, write_point_csv
from juliacheb.julia import (
    GridSpec,
    PointCloud,
    Provenance,
    capacity,
    classify,
    distance_profile,
    escape_depths,
    escape_radius,
    periodic_sequence,
    quadratic_constant,
    quadratic_perturbed,
    quadratic_random,
    sample_julia,
    validate_regularity,
)
from juliacheb.poly import Polynomial, monomial


def doubling_map():
    return periodic_sequence([Polynomial([-2, 0, 1])])  # z^2 - 2


def test_validate_regularity_quadratic_family_passes():
    seq = quadratic_random(0.25, seed=4, a2=0.25)
    report = validate_regularity(seq, 12)
    assert report.ok
    assert report.min_leading == 1.0
    assert report.max_ratio <= 0.25


def test_validate_regularity_fails_ratio_condition():
    seq = quadratic_constant(3.0, a2=0.25)
    report = validate_regularity(seq, 5)
    assert not report.ratio_ok
    assert report.max_ratio == 3.0
    assert report.lower_bound_ok and report.growth_ok


def test_validate_regularity_growth_equality_passes():
    seq = periodic_sequence([Polynomial([0, 0, 2])],
                            a1=2.0, a2=0.0, a3=math.log(2) / 2)
    report = validate_regularity(seq, 6)
    assert report.ok
    assert report.max_growth == math.log(2) / 2


def test_escape_radius_examples():
    r = escape_radius(1.0, 0.0, 1.05)
    assert abs(r.critical - 2.0) < 1e-12
    assert abs(r.value - 2.1) < 1e-12

    r = escape_radius(1.0, 0.25, 1.0)
    expected = (3.25 + math.sqrt(3.25**2 - 8)) / 2
    assert abs(r.value - expected) < 1e-6 * expected

    # degenerate quadratic: the double root sits at 1, the guard promotes
    r = escape_radius(2.0, 0.0, 1.0)
    assert 1.0 < r.value < 1.0 + 1e-6
    assert 2.0 * r.value * (1.0 - 0.0 / (r.value - 1.0)) > 2.0


def test_escape_radius_strict_inequality_always_holds():
    for a1, a2, margin in [(1, 0, 1.05), (1, 0.25, 1.0), (2, 0, 1.0),
                           (0.5, 2.0, 1.01), (3.0, 0.1, 1.0)]:
        r = escape_radius(a1, a2, margin)
        assert r.value > 1.0 and r.value > 1.0 + a2
        assert a1 * r.value * (1.0 - a2 / (r.value - 1.0)) > 2.0


def test_classify_examples():
    seq = quadratic_constant(0.0)
    r = escape_radius(1.0, 0.0, 1.05)
    out = classify(seq, 3.0, r, 50)
    assert out.escaped and out.depth == 0

    out = classify(seq, 0.5, r, 50)
    assert not out.escaped and out.depth == 50

    seq2 = doubling_map()
    r2 = escape_radius(seq2.a1, seq2.a2)
    out = classify(seq2, 1.99, r2, 100)
    assert not out.escaped and out.depth == 100


def test_escape_correctness_invariant():
    # once outside the radius, the orbit stays outside
    seq = quadratic_random(0.2, seed=9)
    r = escape_radius(1.0, 0.2)
    rng = np.random.default_rng(2)
    pts = rng.uniform(-2.5, 2.5, 40) + 1j * rng.uniform(-2.5, 2.5, 40)
    depths = escape_depths(seq, pts, r, 30)
    with np.errstate(over="ignore", invalid="ignore"):
        for z, k in zip(pts, depths):
            if k < 0:
                continue
            w = complex(z)
            for j in range(1, 31):
                w = seq.poly(j)(w)
                if j >= max(k, 1):
                    # overflow to inf/nan counts as outside
                    assert not abs(w) <= r.value
                if not math.isfinite(abs(w)):
                    break


def test_escape_depth_masks_are_nested():
    seq = quadratic_constant(0.25)
    r = escape_radius(1.0, 0.25)
    pts = GridSpec(n=41).points(r.value)
    depths = escape_depths(seq, pts, r, 25)
    sizes = [np.count_nonzero((depths < 0) | (depths > k)) for k in range(1, 25)]
    assert all(b <= a for a, b in zip(sizes, sizes[1:]))


def test_sample_julia_unit_circle():
    seq = quadratic_constant(0.0)
    r = escape_radius(1.0, 0.0, 1.05)
    cloud = sample_julia(seq, 20, 3000, r, seed=7)
    assert len(cloud) == 3000
    assert np.max(np.abs(np.abs(cloud.points) - 1.0)) < 1e-6


def test_sample_julia_interval():
    seq = doubling_map()
    r = escape_radius(seq.a1, seq.a2)
    cloud = sample_julia(seq, 20, 2000, r, seed=7)
    dist = np.maximum(np.abs(cloud.points.real) - 2.0, 0.0) + np.abs(cloud.points.imag)
    assert dist.max() < 1e-3


def test_sample_julia_budget_and_level_contract():
    seq = quadratic_perturbed()
    r = escape_radius(seq.a1, seq.a2)
    for strategy in ("auto", "stochastic"):
        cloud = sample_julia(seq, 9, 777, r, seed=3, strategy=strategy)
        assert len(cloud) == 777
        mods = np.abs(seq.tower_values(9, cloud.points))
        assert np.max(np.abs(mods - r.value)) <= 1e-6 * r.value
        assert cloud.provenance.strategy.endswith(strategy)


def test_sample_julia_deterministic_per_seed():
    seq = quadratic_random(0.15, seed=5)
    r = escape_radius(1.0, 0.15)
    a = sample_julia(seq, 10, 500, r, seed=42)
    b = sample_julia(seq, 10, 500, r, seed=42)
    c = sample_julia(seq, 10, 500, r, seed=43)
    assert np.array_equal(a.points, b.points)
    assert not np.array_equal(a.points, c.points)


def test_sample_julia_cubic_tower():
    seq = periodic_sequence([monomial(3)])
    r = escape_radius(seq.a1, seq.a2)
    cloud = sample_julia(seq, 12, 400, r, seed=1)
    assert np.max(np.abs(np.abs(cloud.points) - 1.0)) < 1e-4


def test_capacity_examples():
    assert capacity(quadratic_constant(0.25)) == 1.0
    assert capacity(quadratic_random(0.2, seed=3)) == 1.0
    assert abs(capacity(periodic_sequence([Polynomial([0, 0, 2])])) - 0.5) <= 1e-9
    assert capacity(periodic_sequence([monomial(3)])) == 1.0


def test_capacity_series_matches_composed_leading():
    seq = periodic_sequence([Polynomial([0.1, 0.2, 2.0]),
                             Polynomial([0.0, -0.3, 0.0, 1.5])])
    partial = 0.0
    dprod = 1
    for k in range(1, 9):
        f = seq.poly(k)
        dprod *= f.degree
        partial += math.log(abs(f.leading)) / dprod
    rho = seq.composition(8).leading  # expanded coefficients, not the recursion
    direct = math.log(abs(rho)) / seq.degree_product(8)
    assert abs(partial - direct) <= 1e-9


def test_distance_profile_matches_closed_form():
    seq = quadratic_constant(0.0)
    r = escape_radius(1.0, 0.0, 1.05)
    kloud = sample_julia(seq, 20, 3000, r, seed=3)
    grid = GridSpec(n=201)
    prof = distance_profile(seq, r, 10, grid, kloud)
    cell = grid.cell_diagonal(r.value)
    for k, a in enumerate(prof, start=1):
        assert abs(a - (r.value ** (1.0 / 2**k) - 1.0)) <= cell
    assert all(b <= a + 1e-12 for a, b in zip(prof, prof[1:]))


def test_distance_profile_interval_decreases_to_floor():
    seq = doubling_map()
    r = escape_radius(seq.a1, seq.a2)
    kloud = sample_julia(seq, 20, 3000, r, seed=3)
    grid = GridSpec(n=161)
    prof = distance_profile(seq, r, 8, grid, kloud)
    assert all(b <= a + 1e-12 for a, b in zip(prof, prof[1:]))
    assert prof[-1] <= 2 * grid.cell_diagonal(r.value)


def test_distance_profile_empty_grid():
    seq = quadratic_constant(0.0)
    r = escape_radius(1.0, 0.0, 1.05)
    kloud = sample_julia(seq, 10, 100, r, seed=1)
    far = GridSpec(n=21, xmin=5.0, xmax=6.0, ymin=5.0, ymax=6.0)
    with pytest.raises(EmptyGrid):
        distance_profile(seq, r, 4, far, kloud)


def test_generator_failures():
    seq = quadratic_constant(0.0, max_depth=4)
    with pytest.raises(GeneratorFailure):
        seq.poly(5)
    with pytest.raises(GeneratorFailure):
        periodic_sequence([Polynomial([1.0, 2.0])])
    with pytest.raises(GeneratorFailure):
        periodic_sequence([])


def test_point_cloud_rejects_bad_data():
    prov = Provenance(depth=1, seed=0, strategy="t", sequence="s", generated=1)
    with pytest.raises(ValueError):
        PointCloud(np.array([]), prov)
    with pytest.raises(ValueError):
        PointCloud(np.array([np.nan + 0j]), prov)


def test_point_csv_roundtrip(tmp_path):
    pts = np.array([0.1 + 0.2j, -3.5e-8 + 1e12j, 2.0 + 0j])
    path = write_point_csv(tmp_path / "c.csv", pts)
    back = read_point_csv(path)
    assert np.array_equal(pts, back)
