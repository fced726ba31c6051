"""Dense complex polynomial arithmetic and preimage root finding.

Coefficients are stored in ascending powers, so ``coeffs[j]`` multiplies
``z**j``.  All values are immutable after construction; every function here
is pure and safe to call from concurrent workers.
"""

from __future__ import annotations

import cmath
from typing import Iterable, Sequence

import numpy as np

from .errors import CompositionTooLarge, NonConvergence

#: Default cap on the coefficient count a composition may produce.
COMPOSITION_CAP = 1 << 20

#: Default relative residual tolerance for preimage roots.
ROOT_TOL = 1e-12

#: Default sweep cap for the simultaneous root iteration.
ROOT_SWEEPS = 200

#: Roots closer than this (relative to the root scale) are treated as one
#: cluster and reported with multiplicity.
CLUSTER_TOL = 1e-8


class Polynomial:
    """A complex polynomial with exact degree bookkeeping.

    Trailing coefficients that are exactly zero are trimmed at
    construction, so the leading coefficient of a nonzero polynomial is
    always nonzero.  The zero polynomial is represented explicitly as the
    single coefficient ``0j``.
    """

    __slots__ = ("_coeffs",)

    def __init__(self, coeffs: Iterable[complex]):
        arr = np.asarray(list(coeffs), dtype=complex)
        if arr.ndim != 1 or arr.size == 0:
            raise ValueError("coefficients must be a nonempty 1-d sequence")
        last = arr.size - 1
        while last > 0 and arr[last] == 0:
            last -= 1
        arr = arr[: last + 1].copy()
        arr.flags.writeable = False
        self._coeffs = arr

    @property
    def coeffs(self) -> np.ndarray:
        """Read-only ascending coefficient array."""
        return self._coeffs

    @property
    def degree(self) -> int:
        return self._coeffs.size - 1

    @property
    def is_zero(self) -> bool:
        return self._coeffs.size == 1 and self._coeffs[0] == 0

    @property
    def leading(self) -> complex:
        return complex(self._coeffs[-1])

    def __call__(self, z):
        return evaluate(self, z)

    def __eq__(self, other) -> bool:
        if not isinstance(other, Polynomial):
            return NotImplemented
        return self._coeffs.shape == other._coeffs.shape and bool(
            np.all(self._coeffs == other._coeffs)
        )

    def __hash__(self) -> int:
        return hash(tuple(self._coeffs.tolist()))

    def __repr__(self) -> str:
        return f"Polynomial({self._coeffs.tolist()!r})"


def monomial(degree: int, scale: complex = 1.0) -> Polynomial:
    """Return ``scale * z**degree``."""
    coeffs = [0j] * degree + [complex(scale)]
    return Polynomial(coeffs)


def evaluate(p: Polynomial, z):
    """Evaluate ``p`` at ``z`` by Horner's scheme.

    ``z`` may be a complex scalar or an ndarray; the result matches the
    input shape.  Deterministic for identical inputs.
    """
    coeffs = p.coeffs
    if isinstance(z, np.ndarray):
        acc = np.full(z.shape, coeffs[-1], dtype=complex)
        for c in coeffs[-2::-1]:
            acc *= z
            acc += c
        return acc
    acc = complex(coeffs[-1])
    zz = complex(z)
    for c in coeffs[-2::-1]:
        acc = acc * zz + c
    return acc


def compose(outer: Polynomial, inner: Polynomial,
            max_coeffs: int = COMPOSITION_CAP) -> Polynomial:
    """Return ``outer(inner(z))`` with exact degree ``deg outer * deg inner``.

    Raises ``CompositionTooLarge`` when the result would carry more than
    ``max_coeffs`` coefficients, and ``ValueError`` if either factor is
    constant.
    """
    if outer.degree < 1 or inner.degree < 1:
        raise ValueError("composition requires nonconstant polynomials")
    out_size = outer.degree * inner.degree + 1
    if out_size > max_coeffs:
        raise CompositionTooLarge(
            f"composition needs {out_size} coefficients (cap {max_coeffs})"
        )
    oc = outer.coeffs
    acc = np.array([oc[-1]], dtype=complex)
    for c in oc[-2::-1]:
        acc = np.convolve(acc, inner.coeffs)
        acc[0] += c
    return Polynomial(acc)


def derivative(p: Polynomial) -> Polynomial:
    """Formal derivative; constants map to the zero polynomial."""
    if p.degree == 0:
        return Polynomial([0j])
    powers = np.arange(1, p.degree + 1)
    return Polynomial(p.coeffs[1:] * powers)


def preimages(p: Polynomial, w: complex, *, tol: float = ROOT_TOL,
              max_sweeps: int = ROOT_SWEEPS, seed: int | None = None) -> list[complex]:
    """Return all solutions of ``p(z) == w`` counted with multiplicity.

    The result has exactly ``deg p`` entries, sorted by (real, imag) for
    reproducibility.  Every root ``r`` satisfies
    ``|p(r) - w| <= tol * scale`` with
    ``scale = max(1, |w|, max |coeff|)``.

    Quadratics use the closed form; higher degrees run the
    Aberth-Ehrlich simultaneous iteration from a perturbed-circle start
    followed by Newton polishing.  Near-coincident roots are merged into
    a cluster mean and reported with multiplicity so inverse iteration
    through a critical value keeps its branch count.

    Raises ``NonConvergence`` after ``max_sweeps`` sweeps (three
    deterministic restarts are attempted first); pass a different
    ``seed`` to retry from another start.
    """
    d = p.degree
    if d < 1:
        raise ValueError("preimages requires a nonconstant polynomial")
    coeffs = p.coeffs.copy()
    coeffs[0] -= w
    scale = max(1.0, abs(w), float(np.max(np.abs(p.coeffs))))

    if d == 1:
        roots = [-coeffs[0] / coeffs[1]]
    elif d == 2:
        roots = list(quadratic_roots(coeffs[2], coeffs[1], coeffs[0]))
    else:
        roots = _aberth(coeffs, tol * scale, max_sweeps, seed)
        roots = _newton_polish(coeffs, roots)
        roots = _merge_clusters(roots)

    roots = [complex(r) for r in roots]
    worst = max(abs(evaluate(p, r) - w) for r in roots)
    if worst > tol * scale:
        raise NonConvergence(
            f"preimage residual {worst:.3e} exceeds {tol * scale:.3e}"
        )
    return sorted(roots, key=lambda r: (r.real, r.imag))


def quadratic_roots(a: complex, b: complex, c: complex) -> tuple[complex, complex]:
    """Roots of ``a z^2 + b z + c`` as the symmetric pair ``p +/- h``.

    The pair is computed about the vertex ``p = -b / (2a)`` so the two
    roots are exact mirrors of each other in floating point, which
    downstream center estimates rely on.
    """
    if a == 0:
        raise ValueError("leading coefficient is zero")
    pvt = -b / (2 * a)
    h = cmath.sqrt(pvt * pvt - c / a)
    return pvt + h, pvt - h


def _aberth(coeffs: np.ndarray, res_tol: float, max_sweeps: int,
            seed: int | None) -> list[complex]:
    """Aberth-Ehrlich sweep on the monic normalization of ``coeffs``."""
    d = coeffs.size - 1
    monic = coeffs / coeffs[-1]
    dmonic = monic[1:] * np.arange(1, d + 1)
    center = -monic[-2] / d
    radius = 1.0 + float(np.max(np.abs(monic[:-1])))

    base_phase = 0.0
    if seed is not None:
        base_phase = 2.0 * np.pi * ((seed * 0.6180339887498949) % 1.0)

    for attempt in range(3):
        phases = (
            2.0 * np.pi * (np.arange(d) + 0.25) / d
            + base_phase
            + 0.5711 * (attempt + 1)
        )
        z = center + radius * (1.0 + 0.05 * attempt) * np.exp(1j * phases)
        done = np.zeros(d, dtype=bool)
        for _ in range(max_sweeps):
            pv = _horner(monic, z)
            done |= np.abs(pv) <= 0.25 * res_tol
            if done.all():
                return list(z)
            dv = _horner(dmonic, z)
            dv = np.where(dv == 0, 1e-300, dv)
            newton = pv / dv
            diff = z[:, None] - z[None, :]
            np.fill_diagonal(diff, 1.0)
            with np.errstate(divide="ignore", invalid="ignore"):
                inv = 1.0 / diff
            np.fill_diagonal(inv, 0.0)
            ssum = inv.sum(axis=1)
            denom = 1.0 - newton * ssum
            denom = np.where(denom == 0, 1e-300, denom)
            step = np.where(done, 0.0, newton / denom)
            z = z - step
            if np.max(np.abs(step)) <= 1e-16 * (1.0 + np.max(np.abs(z))):
                return list(z)
    raise NonConvergence(
        f"root iteration did not settle in {max_sweeps} sweeps (degree {d})"
    )


def _horner(coeffs: np.ndarray, z: np.ndarray) -> np.ndarray:
    acc = np.full(z.shape, coeffs[-1], dtype=complex)
    for c in coeffs[-2::-1]:
        acc *= z
        acc += c
    return acc


def _newton_polish(coeffs: np.ndarray, roots: Sequence[complex],
                   steps: int = 2) -> list[complex]:
    d = coeffs.size - 1
    dcoeffs = coeffs[1:] * np.arange(1, d + 1)
    z = np.asarray(roots, dtype=complex)
    for _ in range(steps):
        pv = _horner(coeffs, z)
        dv = _horner(dcoeffs, z)
        safe = np.abs(dv) > 1e-300
        z = np.where(safe, z - pv / np.where(safe, dv, 1.0), z)
    return list(z)


def _merge_clusters(roots: list[complex]) -> list[complex]:
    """Average root clusters tighter than ``CLUSTER_TOL`` times the scale."""
    scale = max(1.0, max(abs(r) for r in roots))
    tol = CLUSTER_TOL * scale
    order = sorted(range(len(roots)), key=lambda i: (roots[i].real, roots[i].imag))
    groups: list[list[int]] = []
    for i in order:
        for group in groups:
            if abs(roots[group[0]] - roots[i]) <= tol:
                group.append(i)
                break
        else:
            groups.append([i])
    merged = list(roots)
    for group in groups:
        if len(group) > 1:
            mean = sum(roots[i] for i in group) / len(group)
            for i in group:
                merged[i] = mean
    return merged
