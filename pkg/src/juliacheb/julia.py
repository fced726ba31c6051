"""Composition-tower Julia machinery.

Covers regularity validation of polynomial sequences, the escape radius
from the coefficient bounds, escape-time classification, inverse-iteration
boundary sampling, logarithmic capacity via the leading-coefficient
series, and the shrinking-distance diagnostic for the bounded set.
"""

from __future__ import annotations

import math
import zlib
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np
from scipy.spatial import cKDTree

from .errors import EmptyGrid, GeneratorFailure, NoAdmissibleRadius, NonConvergence
from .poly import Polynomial, compose, evaluate, preimages

#: Default cap on full-branch preimage tree nodes.
TREE_CAP = 1 << 16

#: Relative modulus tolerance for sampled boundary points.
SAMPLE_TOL = 1e-6

_RNG_SALT = 0x6A43


def _rng(*keys) -> np.random.Generator:
    """Deterministic generator from mixed int/str keys."""
    words = [_RNG_SALT]
    for k in keys:
        if isinstance(k, str):
            words.append(zlib.crc32(k.encode()))
        else:
            words.append(int(k) & 0xFFFFFFFFFFFFFFFF)
    return np.random.default_rng(words)


# ---------------------------------------------------------------------------
# sequences


@dataclass(frozen=True)
class PolynomialSequence:
    """A rule producing the map at every level of a composition tower.

    ``factory(n)`` must return the level-``n`` map (1-based) as a
    ``Polynomial`` of degree >= 2.  The declared constants bound the
    coefficients of every realizable level:

    1. ``|lead_n| >= a1 > 0``,
    2. ``|coeff_{n,j}| <= a2 * |lead_n|`` for ``j < deg``,
    3. ``log |lead_n| <= a3 * deg_n``.

    ``even_monomial`` marks generators whose maps only carry even-power
    terms, which forces the symmetry shortcuts downstream.
    """

    factory: Callable[[int], Polynomial]
    a1: float
    a2: float
    a3: float
    max_depth: int = 128
    label: str = "custom"
    even_monomial: bool = False
    _cache: dict = field(default_factory=dict, init=False, repr=False, compare=False)

    def poly(self, n: int) -> Polynomial:
        """The level-``n`` map; raises ``GeneratorFailure`` when unavailable."""
        if not 1 <= n <= self.max_depth:
            raise GeneratorFailure(
                f"level {n} outside realizable range 1..{self.max_depth}"
            )
        key = ("f", n)
        if key not in self._cache:
            try:
                f = self.factory(n)
            except Exception as exc:  # noqa: BLE001 - re-raised with context
                raise GeneratorFailure(f"rule failed at level {n}: {exc}") from exc
            if f.degree < 2:
                raise GeneratorFailure(f"level {n} map has degree {f.degree} < 2")
            self._cache[key] = f
        return self._cache[key]

    def composition(self, m: int) -> Polynomial:
        """Expanded coefficients of the depth-``m`` composition."""
        key = ("F", m)
        if key not in self._cache:
            acc = self.poly(1)
            for n in range(2, m + 1):
                acc = compose(self.poly(n), acc)
            self._cache[key] = acc
        return self._cache[key]

    def degree_product(self, m: int) -> int:
        """Exact degree of the depth-``m`` composition."""
        out = 1
        for n in range(1, m + 1):
            out *= self.poly(n).degree
        return out

    def leading_product(self, m: int) -> complex:
        """Leading coefficient of the depth-``m`` composition via recursion."""
        rho = complex(self.poly(1).leading)
        for n in range(2, m + 1):
            f = self.poly(n)
            rho = f.leading * rho ** f.degree
        return rho

    def tower_values(self, m: int, z: np.ndarray) -> np.ndarray:
        """Evaluate the depth-``m`` composition by iterating the maps."""
        w = np.asarray(z, dtype=complex).copy()
        for n in range(1, m + 1):
            w = evaluate(self.poly(n), w)
        return w


def _is_even_monomial(p: Polynomial) -> bool:
    return all(c == 0 for c in p.coeffs[1::2])


def periodic_sequence(polys: Sequence[Polynomial], a1: float | None = None,
                      a2: float | None = None, a3: float | None = None,
                      max_depth: int = 128, label: str | None = None) -> PolynomialSequence:
    """Cycle through an explicit list of maps.

    Declared constants default to the tightest values realized by the
    list itself.
    """
    cycle = tuple(polys)
    if not cycle:
        raise GeneratorFailure("empty polynomial list")
    for p in cycle:
        if p.degree < 2:
            raise GeneratorFailure("periodic rule requires degree >= 2 maps")
    leads = [abs(p.leading) for p in cycle]
    ratios = [
        float(np.max(np.abs(p.coeffs[:-1]))) / abs(p.leading) if p.degree > 0 else 0.0
        for p in cycle
    ]
    growths = [math.log(abs(p.leading)) / p.degree for p in cycle]
    if a1 is None:
        a1 = min(leads)
    if a2 is None:
        a2 = max(ratios)
    if a3 is None:
        a3 = max(0.0, max(growths))
    if label is None:
        label = "periodic[" + ";".join(str(p.coeffs.tolist()) for p in cycle) + "]"
    return PolynomialSequence(
        factory=lambda n: cycle[(n - 1) % len(cycle)],
        a1=float(a1), a2=float(a2), a3=float(a3),
        max_depth=max_depth, label=label,
        even_monomial=all(_is_even_monomial(p) for p in cycle),
    )


def _quadratic(c: complex) -> Polynomial:
    return Polynomial([c, 0.0, 1.0])


def quadratic_constant(c: complex, a2: float | None = None,
                       max_depth: int = 128) -> PolynomialSequence:
    """The autonomous family ``z^2 + c``."""
    c = complex(c)
    bound = abs(c) if a2 is None else float(a2)
    return PolynomialSequence(
        factory=lambda n: _quadratic(c),
        a1=1.0, a2=bound, a3=0.0, max_depth=max_depth,
        label=f"quadratic-constant(c={c!r})",
        even_monomial=True,
    )


def quadratic_perturbed(c: complex = 0.25, amplitude: float = 0.25,
                        decay: float = 0.25, a2: float | None = None,
                        max_depth: int = 128) -> PolynomialSequence:
    """The family ``z^2 + c - eps_n`` with ``eps_n = amplitude * decay**n``.

    The default schedule keeps ``0 < eps_n < 1/4`` and makes
    ``sum sqrt(eps_n)`` finite.
    """
    c = complex(c)
    if not 0 < decay < 1 or amplitude <= 0:
        raise ValueError("perturbation needs amplitude > 0 and 0 < decay < 1")
    bound = abs(c) + amplitude * decay if a2 is None else float(a2)
    return PolynomialSequence(
        factory=lambda n: _quadratic(c - amplitude * decay**n),
        a1=1.0, a2=bound, a3=0.0, max_depth=max_depth,
        label=f"quadratic-perturbed(c={c!r},amp={amplitude},decay={decay})",
        even_monomial=True,
    )


def quadratic_random(bound: float, seed: int, a2: float | None = None,
                     max_depth: int = 128) -> PolynomialSequence:
    """Seeded i.i.d. quadratic family with ``|c_n| <= bound``.

    Each level draws its coefficient from a stream keyed by
    ``(seed, n)``, so realizations are independent of access order.
    """
    bound = float(bound)

    def make(n: int) -> Polynomial:
        g = _rng("quadratic-random", seed, n)
        r = bound * math.sqrt(g.uniform())
        theta = g.uniform(0.0, 2.0 * math.pi)
        return _quadratic(r * math.cos(theta) + 1j * r * math.sin(theta))

    return PolynomialSequence(
        factory=make,
        a1=1.0, a2=bound if a2 is None else float(a2), a3=0.0,
        max_depth=max_depth,
        label=f"quadratic-random(bound={bound},seed={seed})",
        even_monomial=True,
    )


# ---------------------------------------------------------------------------
# regularity validation


@dataclass(frozen=True)
class ValidationReport:
    """Realized coefficient extremes against the declared constants."""

    up_to_depth: int
    min_leading: float
    max_ratio: float
    max_growth: float
    lower_bound_ok: bool
    ratio_ok: bool
    growth_ok: bool

    @property
    def ok(self) -> bool:
        return self.lower_bound_ok and self.ratio_ok and self.growth_ok

    def to_dict(self) -> dict:
        return {
            "upToDepth": self.up_to_depth,
            "minLeading": self.min_leading,
            "maxRatio": self.max_ratio,
            "maxGrowth": self.max_growth,
            "condition1LowerBound": self.lower_bound_ok,
            "condition2Ratio": self.ratio_ok,
            "condition3Growth": self.growth_ok,
            "ok": self.ok,
        }


def validate_regularity(seq: PolynomialSequence, up_to_depth: int) -> ValidationReport:
    """Check the three coefficient bounds for every level up to a depth.

    Condition 1 bounds the leading coefficient below by ``a1``,
    condition 2 bounds every lower coefficient by ``a2`` times the
    leading one, condition 3 bounds ``log |lead|`` by ``a3`` times the
    degree.
    """
    if up_to_depth < 1:
        raise ValueError("up_to_depth must be >= 1")
    min_lead = math.inf
    max_ratio = 0.0
    max_growth = -math.inf
    for n in range(1, up_to_depth + 1):
        f = seq.poly(n)
        lead = abs(f.leading)
        min_lead = min(min_lead, lead)
        max_ratio = max(max_ratio, float(np.max(np.abs(f.coeffs[:-1]))) / lead)
        max_growth = max(max_growth, math.log(lead) / f.degree)
    return ValidationReport(
        up_to_depth=up_to_depth,
        min_leading=min_lead,
        max_ratio=max_ratio,
        max_growth=max_growth,
        lower_bound_ok=(seq.a1 > 0 and min_lead >= seq.a1),
        ratio_ok=(max_ratio <= seq.a2),
        growth_ok=(max_growth <= seq.a3),
    )


# ---------------------------------------------------------------------------
# escape radius and classification


@dataclass(frozen=True)
class EscapeRadius:
    """A radius whose exterior every level maps into itself.

    Satisfies ``R > 1``, ``R > 1 + a2`` and the strict inequality
    ``a1 * R * (1 - a2 / (R - 1)) > 2``.
    """

    value: float
    margin: float
    critical: float
    a1: float
    a2: float

    def to_dict(self) -> dict:
        return {
            "value": self.value,
            "margin": self.margin,
            "critical": self.critical,
            "a1": self.a1,
            "a2": self.a2,
        }


def _strict_escape_inequality(a1: float, a2: float, r: float) -> bool:
    return r > 1.0 and a1 * r * (1.0 - a2 / (r - 1.0)) > 2.0


def escape_radius(a1: float, a2: float, margin: float = 1.05) -> EscapeRadius:
    """Smallest admissible escape radius, scaled by a safety margin.

    The critical radius is the largest root of
    ``a1*R^2 - (a1*(1 + a2) + 2)*R + 2 = 0``, the boundary case of the
    strict inequality.  When the quadratic degenerates (the root falls
    at or below ``max(1, 1 + a2)``) the base is promoted just above that
    floor; the returned value always satisfies the inequality strictly.
    """
    if a1 <= 0 or a2 < 0 or margin < 1:
        raise ValueError("need a1 > 0, a2 >= 0, margin >= 1")
    b = a1 * (1.0 + a2) + 2.0
    disc = b * b - 8.0 * a1
    root = (b + math.sqrt(disc)) / (2.0 * a1) if disc >= 0 else 0.0
    base = max(root, 1.0 + a2, 1.0 + 1e-9)
    r = margin * base
    for _ in range(200):
        if _strict_escape_inequality(a1, a2, r):
            return EscapeRadius(value=r, margin=margin, critical=root, a1=a1, a2=a2)
        r *= 1.0 + 1e-9
    raise NoAdmissibleRadius(
        f"no radius above {base} satisfies the strict inequality (a1={a1}, a2={a2})"
    )


@dataclass(frozen=True)
class Classification:
    """Outcome of escape-time iteration for a single point."""

    escaped: bool
    depth: int


def escape_depths(seq: PolynomialSequence, points: np.ndarray,
                  radius: EscapeRadius, max_depth: int) -> np.ndarray:
    """First level at which each orbit leaves the escape disk.

    Returns an int array aligned with ``points``: ``0`` when the point
    already lies outside the radius, ``k`` when level ``k`` pushes it
    out (overflow counts as escape), and ``-1`` when the orbit stays
    bounded through ``max_depth`` levels.
    """
    if max_depth < 1:
        raise ValueError("max_depth must be >= 1")
    z = np.asarray(points, dtype=complex).ravel()
    depth = np.full(z.size, -1, dtype=int)
    alive = np.abs(z) <= radius.value
    depth[~alive] = 0
    idx = np.nonzero(alive)[0]
    w = z[idx]
    for k in range(1, max_depth + 1):
        if idx.size == 0:
            break
        with np.errstate(over="ignore", invalid="ignore"):
            w = evaluate(seq.poly(k), w)
            mag = np.abs(w)
        out = ~np.isfinite(mag) | (mag > radius.value)
        depth[idx[out]] = k
        idx = idx[~out]
        w = w[~out]
    return depth.reshape(np.asarray(points).shape)


def classify(seq: PolynomialSequence, z: complex, radius: EscapeRadius,
             max_depth: int) -> Classification:
    """Escape-time classification of one point (depth 0 = already outside)."""
    d = int(escape_depths(seq, np.array([z]), radius, max_depth)[0])
    if d < 0:
        return Classification(escaped=False, depth=max_depth)
    return Classification(escaped=True, depth=d)


# ---------------------------------------------------------------------------
# boundary sampling


@dataclass(frozen=True)
class Provenance:
    """How a point cloud was produced."""

    depth: int
    seed: int
    strategy: str
    sequence: str
    generated: int
    resampled: int = 0

    def to_dict(self) -> dict:
        return {
            "depth": self.depth,
            "seed": self.seed,
            "strategy": self.strategy,
            "sequence": self.sequence,
            "generated": self.generated,
            "resampled": self.resampled,
        }


@dataclass(frozen=True)
class PointCloud:
    """A finite sample of complex points with its provenance."""

    points: np.ndarray
    provenance: Provenance

    def __post_init__(self):
        pts = np.asarray(self.points, dtype=complex).ravel()
        if pts.size == 0 or not np.all(np.isfinite(pts)):
            raise ValueError("point cloud must be nonempty and finite")
        pts = pts.copy()
        pts.flags.writeable = False
        object.__setattr__(self, "points", pts)

    def __len__(self) -> int:
        return self.points.size


def _pull_level(f: Polynomial, w: np.ndarray, full: bool,
                rng: np.random.Generator) -> np.ndarray:
    """One inverse-iteration level: full branch set or one random branch."""
    c = f.coeffs
    d = f.degree
    if d == 2:
        pvt = -c[1] / (2 * c[2])
        h = np.sqrt(pvt * pvt - (c[0] - w) / c[2])
        if full:
            return np.concatenate([pvt + h, pvt - h])
        signs = rng.integers(0, 2, size=w.size) * 2 - 1
        return pvt + signs * h
    if np.all(c[1:-1] == 0):
        base = ((w - c[0]) / c[-1]).astype(complex)
        root = np.exp(np.log(np.where(base == 0, 1.0, base)) / d)
        root = np.where(base == 0, 0.0, root)
        if full:
            units = np.exp(2j * np.pi * np.arange(d) / d)
            return np.concatenate([root * u for u in units])
        ks = rng.integers(0, d, size=w.size)
        return root * np.exp(2j * np.pi * ks / d)
    out = []
    if full:
        for wi in w:
            out.extend(preimages(f, complex(wi)))
    else:
        ks = rng.integers(0, d, size=w.size)
        for wi, k in zip(w, ks):
            out.append(preimages(f, complex(wi))[k])
    return np.asarray(out, dtype=complex)


def pull_circle(seq: PolynomialSequence, top: int, bottom: int,
                radius_value: float, budget: int, seed: int,
                strategy: str = "auto", tree_cap: int = TREE_CAP) -> np.ndarray:
    """Pull the circle ``|w| = radius_value`` back through levels top..bottom.

    The pull applies the level-``top`` inverse first and the
    level-``bottom`` inverse last.  ``strategy`` selects branch handling:

    - ``"stochastic"``: one uniformly random branch per level per point;
    - ``"tree"`` / ``"auto"``: the innermost levels whose combined branch
      count fits the budget (and ``tree_cap``) keep every branch, outer
      levels stay stochastic.

    Returns at least ``budget`` points (more when the final full-branch
    fan overshoots).
    """
    if budget < 1 or bottom < 1 or top < bottom:
        raise ValueError("invalid pullback range or budget")
    levels = list(range(top, bottom - 1, -1))
    degrees = [seq.poly(n).degree for n in levels]

    fan = 1
    full_count = 0
    if strategy in ("auto", "tree"):
        limit = min(max(budget, 1), tree_cap)
        for d in degrees[::-1]:
            if fan * d > limit:
                break
            fan *= d
            full_count += 1
    elif strategy != "stochastic":
        raise ValueError(f"unknown strategy {strategy!r}")

    n_seeds = max(1, -(-budget // fan))
    theta0 = _rng(seed, "rotation", top, bottom).uniform(0.0, 2.0 * np.pi)
    angles = theta0 + 2.0 * np.pi * np.arange(n_seeds) / n_seeds
    w = radius_value * np.exp(1j * angles)
    for pos, (n, _) in enumerate(zip(levels, degrees)):
        full = pos >= len(levels) - full_count
        w = _pull_level(seq.poly(n), w, full, _rng(seed, "branch", n, top))
    return w


def sample_julia(seq: PolynomialSequence, depth: int, budget: int,
                 radius: EscapeRadius, seed: int, strategy: str = "auto",
                 tree_cap: int = TREE_CAP) -> PointCloud:
    """Sample the depth-``depth`` preimage of the escape circle.

    Seeds points on ``|w| = R`` with a seeded rotation and pulls them
    back level by level (deepest inverse first).  Every returned point
    ``z`` satisfies ``|F_depth(z)| = R`` within ``1e-6 * R``; failures
    are resampled and counted in the provenance.  Exactly ``budget``
    points are returned, chosen by an even stride when the branch fan
    generated more.
    """
    if depth < 1 or budget < 1:
        raise ValueError("depth and budget must be >= 1")
    pts = pull_circle(seq, depth, 1, radius.value, budget, seed,
                      strategy=strategy, tree_cap=tree_cap)
    generated = pts.size
    resampled = 0
    for attempt in range(8):
        with np.errstate(over="ignore", invalid="ignore"):
            mag = np.abs(seq.tower_values(depth, pts))
        bad = ~np.isfinite(mag) | (np.abs(mag - radius.value) > SAMPLE_TOL * radius.value)
        if not bad.any():
            break
        resampled += int(bad.sum())
        refill = pull_circle(seq, depth, 1, radius.value, int(bad.sum()),
                             seed + 7919 * (attempt + 1), strategy="stochastic")
        pts = np.concatenate([pts[~bad], refill])
    else:
        raise NonConvergence("could not land sampled points on the level circle")
    if pts.size < budget:
        raise NonConvergence("sampling lost points below the requested budget")
    take = np.round(np.linspace(0, pts.size - 1, budget)).astype(int)
    return PointCloud(
        points=pts[take],
        provenance=Provenance(
            depth=depth, seed=seed,
            strategy=f"inverse-iteration-{strategy}",
            sequence=seq.label, generated=generated, resampled=resampled,
        ),
    )


# ---------------------------------------------------------------------------
# capacity


def capacity(seq: PolynomialSequence, tol: float = 1e-12) -> float:
    """Logarithmic capacity of the bounded set via the leading-coefficient series.

    Evaluates ``exp(-sum_k log|lead_k| / D_k)`` with ``D_k`` the degree
    of the depth-``k`` composition, truncating once the tail bound
    ``(2*a3 + |log a1|) / D_k`` (valid because every ``|log lead|`` is at
    most ``max(a3 * d, |log a1|)`` and degrees are at least 2) drops
    below ``tol``.
    """
    if tol <= 0:
        raise ValueError("tol must be positive")
    total = 0.0
    dprod = 1.0
    tail_scale = 2.0 * seq.a3 + abs(math.log(seq.a1))
    for k in range(1, seq.max_depth + 1):
        f = seq.poly(k)
        dprod *= f.degree
        total += math.log(abs(f.leading)) / dprod
        if tail_scale / dprod < tol or dprod > 1e300:
            break
    return math.exp(-total)


# ---------------------------------------------------------------------------
# distance diagnostic


@dataclass(frozen=True)
class GridSpec:
    """Uniform rectangular grid; bounds default to the escape square."""

    n: int = 241
    xmin: float | None = None
    xmax: float | None = None
    ymin: float | None = None
    ymax: float | None = None

    def bounds(self, radius_value: float) -> tuple[float, float, float, float]:
        return (
            -radius_value if self.xmin is None else self.xmin,
            radius_value if self.xmax is None else self.xmax,
            -radius_value if self.ymin is None else self.ymin,
            radius_value if self.ymax is None else self.ymax,
        )

    def cell_diagonal(self, radius_value: float) -> float:
        x0, x1, y0, y1 = self.bounds(radius_value)
        return math.hypot((x1 - x0) / (self.n - 1), (y1 - y0) / (self.n - 1))

    def points(self, radius_value: float) -> np.ndarray:
        x0, x1, y0, y1 = self.bounds(radius_value)
        xs = np.linspace(x0, x1, self.n)
        ys = np.linspace(y0, y1, self.n)
        re, im = np.meshgrid(xs, ys)
        return (re + 1j * im).ravel()


def distance_profile(seq: PolynomialSequence, radius: EscapeRadius, k_max: int,
                     grid: GridSpec, kloud: PointCloud,
                     bounded_depth: int = 60) -> np.ndarray:
    """Largest distance from the not-yet-escaped region to the bounded-set sample.

    For each ``k <= k_max`` the masked region holds the grid points that
    survive ``k`` levels inside the escape radius; the profile value is
    the maximum distance from that region to the union of ``kloud`` and
    the grid points that stay bounded through ``bounded_depth`` levels.
    The masks are nested, so the returned sequence is nonincreasing.
    """
    if k_max < 2:
        raise ValueError("k_max must be >= 2")
    pts = grid.points(radius.value)
    depths = escape_depths(seq, pts, radius, max(bounded_depth, k_max))
    bounded = (depths < 0) | (depths > bounded_depth)
    ksample = np.concatenate([pts[bounded], kloud.points])
    if ksample.size == 0:
        raise EmptyGrid("no bounded grid point and empty cloud")
    tree = cKDTree(np.column_stack([ksample.real, ksample.imag]))
    base_mask = (depths < 0) | (depths > 1)
    if not base_mask.any():
        raise EmptyGrid("every grid point escapes after one level")
    base_idx = np.nonzero(base_mask)[0]
    dists, _ = tree.query(np.column_stack([pts[base_idx].real, pts[base_idx].imag]))
    base_depths = depths[base_idx]
    profile = []
    for k in range(1, k_max + 1):
        keep = (base_depths < 0) | (base_depths > k)
        if not keep.any():
            raise EmptyGrid(f"no grid point survives {k} levels")
        profile.append(float(dists[keep].max()))
    return np.asarray(profile)
