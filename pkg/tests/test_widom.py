import numpy as np
import pytest

from juliacheb.cheb import SolverParams
from juliacheb.errors import RankDeficient
from juliacheb.julia import (
    PointCloud,
    Provenance,
    periodic_sequence,
    quadratic_constant,
)
from juliacheb.poly import Polynomial
from juliacheb.widom import WidomReport, WidomRow, conjecture_run, widom_factor, widom_general


def circle_cloud(n=256):
    pts = np.exp(2j * np.pi * np.arange(n) / n)
    return PointCloud(pts, Provenance(depth=0, seed=0, strategy="synthetic",
                                      sequence="unit circle", generated=n))


def segment_cloud(n=1001):
    pts = np.linspace(-2, 2, n).astype(complex)
    return PointCloud(pts, Provenance(depth=0, seed=0, strategy="synthetic",
                                      sequence="[-2,2]", generated=n))


def test_widom_factor_pure_square_near_one():
    # the factor carries the finite-depth level-set bias, so only a
    # percent-level agreement with 1 is meaningful here
    row = widom_factor(quadratic_constant(0.0), 2, SolverParams(seed=1, budget=4000))
    assert abs(row.widom - 1.0) < 0.01
    assert row.capacity == 1.0
    assert row.widom == row.norm


def test_widom_factor_interval():
    seq = periodic_sequence([Polynomial([-2, 0, 1])])
    row = widom_factor(seq, 1, SolverParams(seed=1, budget=4000, depth=14))
    assert abs(row.widom - 2.0) < 0.02
    assert row.capacity == 1.0 and row.degree == 2


def test_widom_general_examples():
    assert abs(widom_general(circle_cloud(), 1.0, 5) - 1.0) < 1e-9
    assert abs(widom_general(segment_cloud(), 1.0, 3) - 2.0) < 1e-4
    repeated = PointCloud(np.zeros(8, dtype=complex),
                          Provenance(depth=0, seed=0, strategy="synthetic",
                                     sequence="point", generated=8))
    with pytest.raises(RankDeficient):
        widom_general(repeated, 1.0, 1)
    with pytest.raises(ValueError):
        widom_general(circle_cloud(8), 1.0, 5)  # below the 4n floor


def test_conjecture_contract_and_floor():
    report = conjecture_run("autonomous", 2, SolverParams(seed=4))
    assert [r.degree for r in report.rows] == [2, 4]
    assert all(r.widom >= 1.0 - 1e-9 for r in report.rows)
    assert report.error is None
    assert "ratios" in report.summary


def test_conjecture_deterministic():
    a = conjecture_run("autonomous", 3, SolverParams(seed=12))
    b = conjecture_run("autonomous", 3, SolverParams(seed=12))
    assert a.to_csv_text() == b.to_csv_text()
    assert a.fingerprint == b.fingerprint


def test_conjecture_perturbed_capacity_one():
    report = conjecture_run("perturbed", 6, SolverParams(seed=4))
    assert len(report.rows) == 6
    assert all(r.capacity == 1.0 for r in report.rows)


def test_conjecture_unknown_preset():
    with pytest.raises(ValueError):
        conjecture_run("parabolic", 3, SolverParams(seed=1))
    with pytest.raises(ValueError):
        conjecture_run("autonomous", 1, SolverParams(seed=1))


def test_widom_report_validates_rows():
    good = WidomRow(m=1, degree=2, tau=0j, norm=1.5, capacity=1.0, widom=1.5)
    bad_floor = WidomRow(m=2, degree=4, tau=0j, norm=0.5, capacity=1.0, widom=0.5)
    with pytest.raises(ValueError):
        WidomReport(rows=(good, bad_floor), fingerprint="x", config={}, summary={})
    out_of_order = WidomRow(m=3, degree=2, tau=0j, norm=1.5, capacity=1.0, widom=1.5)
    with pytest.raises(ValueError):
        WidomReport(rows=(good, out_of_order), fingerprint="x", config={}, summary={})


def test_widom_report_csv_format():
    row = WidomRow(m=1, degree=2, tau=0.5j, norm=2.0, capacity=1.0, widom=2.0)
    report = WidomReport(rows=(row,), fingerprint="abc", config={}, summary={})
    text = report.to_csv_text()
    lines = text.strip().splitlines()
    assert lines[0] == "m,degree,tau_re,tau_im,norm,capacity,widom"
    assert lines[1] == "1,2,0,0.5,2,1,2"
