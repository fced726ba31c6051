"""Widom factors and the growth experiment for the parabolic quadratic family.

A Widom factor divides a monic minimizer's sup norm by the capacity
raised to the degree; monic polynomials can never beat the capacity
power, so every factor is at least one.  The experiment driver tabulates
factors along a composition tower for the ``z^2 + 1/4`` presets and
reports growth diagnostics without asserting any asymptotic claim.
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass, replace

import numpy as np

from .cheb import SolverParams, lawson_minimax, structured_chebyshev
from .errors import NumericError
from .julia import (
    EscapeRadius,
    PointCloud,
    PolynomialSequence,
    capacity,
    escape_radius,
    quadratic_constant,
    quadratic_perturbed,
)

#: Factors may not fall below one beyond this rounding allowance.
FACTOR_FLOOR_TOL = 1e-9


@dataclass(frozen=True)
class WidomRow:
    """One tower level: degree, shift, norm, capacity and factor."""

    m: int
    degree: int
    tau: complex
    norm: float
    capacity: float
    widom: float

    def to_dict(self) -> dict:
        return {
            "m": self.m,
            "degree": self.degree,
            "tau": [self.tau.real, self.tau.imag],
            "norm": self.norm,
            "capacity": self.capacity,
            "widom": self.widom,
        }


@dataclass(frozen=True)
class WidomReport:
    """Rows of a factor run plus the configuration fingerprint."""

    rows: tuple[WidomRow, ...]
    fingerprint: str
    config: dict
    summary: dict
    error: str | None = None

    CSV_HEADER = "m,degree,tau_re,tau_im,norm,capacity,widom"

    def __post_init__(self):
        degrees = [row.degree for row in self.rows]
        if any(b <= a for a, b in zip(degrees, degrees[1:])):
            raise ValueError("row degrees must be strictly increasing")
        if any(row.widom < 1.0 - FACTOR_FLOOR_TOL for row in self.rows):
            raise ValueError("a factor fell below the monic lower bound")

    def to_csv_text(self) -> str:
        lines = [self.CSV_HEADER]
        for r in self.rows:
            lines.append(
                f"{r.m},{r.degree},{r.tau.real:.17g},{r.tau.imag:.17g},"
                f"{r.norm:.17g},{r.capacity:.17g},{r.widom:.17g}"
            )
        return "\n".join(lines) + "\n"

    def to_dict(self) -> dict:
        out = {
            "fingerprint": self.fingerprint,
            "config": self.config,
            "rows": [r.to_dict() for r in self.rows],
            "summary": self.summary,
        }
        if self.error is not None:
            out["error"] = self.error
        return out


def widom_factor(seq: PolynomialSequence, m: int,
                 params: SolverParams = SolverParams(),
                 radius: EscapeRadius | None = None,
                 cap: float | None = None) -> WidomRow:
    """Factor of the depth-``m`` structural minimizer.

    Divides the structural sup norm by ``capacity ** degree``; for
    capacity-one sequences the power is exactly ``1.0`` and the factor
    equals the norm.
    """
    if radius is None:
        radius = escape_radius(seq.a1, seq.a2)
    if cap is None:
        cap = capacity(seq)
    sol = structured_chebyshev(seq, m, params, radius=radius)
    denom = 1.0 if cap == 1.0 else cap ** sol.degree
    return WidomRow(
        m=m, degree=sol.degree,
        tau=sol.tau if sol.tau is not None else 0j,
        norm=sol.sup_norm, capacity=cap, widom=sol.sup_norm / denom,
    )


def widom_general(sample: PointCloud, cap: float, n: int,
                  params: SolverParams = SolverParams()) -> float:
    """Factor at an arbitrary degree via the discrete minimax route.

    Degrees away from the tower degrees have no structural shortcut, so
    the norm comes from the Lawson solver on the given sample.
    """
    if cap <= 0:
        raise ValueError("capacity must be positive")
    if len(sample) < 4 * n:
        raise ValueError(f"sample carries {len(sample)} points; need {4 * n}")
    sol = lawson_minimax(sample.points, n, tol=params.lawson_tol,
                         max_iter=params.lawson_max_iter)
    denom = 1.0 if cap == 1.0 else cap ** n
    return sol.sup_norm / denom


def _conjecture_sequence(preset: str) -> PolynomialSequence:
    if preset == "autonomous":
        return quadratic_constant(0.25)
    if preset == "perturbed":
        return quadratic_perturbed(0.25, amplitude=0.25, decay=0.25)
    raise ValueError(f"unknown preset {preset!r}")


def _fingerprint(payload: dict) -> str:
    text = json.dumps(payload, sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(text.encode()).hexdigest()


def conjecture_run(preset: str, m_max: int,
                   params: SolverParams = SolverParams(),
                   budget_scale: float = 1.0) -> WidomReport:
    """Tabulate factors for the parabolic presets up to tower depth ``m_max``.

    ``preset`` selects ``z^2 + 1/4`` (``"autonomous"``) or its summably
    perturbed variant (``"perturbed"``).  Row ``m`` samples at depth
    ``m + 8`` with budget ``max(20000, 16 * degree) * budget_scale``;
    every row is reproducible bit-for-bit under a fixed seed.  The
    summary reports consecutive ratios and the log-log slope of factor
    against degree, and makes no boundedness claim either way.  Rows
    computed before a numeric failure are still returned, with the
    failure recorded on the report.
    """
    if m_max < 2:
        raise ValueError("m_max must be >= 2")
    seq = _conjecture_sequence(preset)
    radius = escape_radius(seq.a1, seq.a2)
    cap = capacity(seq)
    rows: list[WidomRow] = []
    error = None
    for m in range(1, m_max + 1):
        degree = seq.degree_product(m)
        row_params = replace(
            params,
            depth=m + 8,
            budget=max(1, int(max(20000, 16 * degree) * budget_scale)),
        )
        try:
            rows.append(widom_factor(seq, m, row_params, radius=radius, cap=cap))
        except NumericError as exc:
            error = f"row m={m}: {exc}"
            break
    config = {
        "preset": preset,
        "mMax": m_max,
        "seed": params.seed,
        "budgetScale": budget_scale,
        "depthSchedule": "m+8",
        "budgetSchedule": "max(20000,16*degree)",
        "radius": radius.value,
    }
    return WidomReport(
        rows=tuple(rows),
        fingerprint=_fingerprint(config),
        config=config,
        summary=_growth_summary(rows),
        error=error,
    )


def _growth_summary(rows: list[WidomRow]) -> dict:
    factors = np.array([r.widom for r in rows])
    degrees = np.array([r.degree for r in rows])
    summary: dict = {
        "ratios": [
            float(b / a) for a, b in zip(factors[:-1], factors[1:])
        ],
    }
    if len(rows) >= 2 and np.all(factors > 0):
        slope = np.polyfit(np.log(degrees), np.log(factors), 1)[0]
        summary["loglogSlope"] = float(slope)
    return summary
