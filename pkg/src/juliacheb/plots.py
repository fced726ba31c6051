"""Figure rendering for the report path.

Every function writes one PNG next to the delimited output and returns
the path.  Rendering is headless (Agg) and intentionally plain.
"""

from __future__ import annotations

from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402
import numpy as np  # noqa: E402


def _save(fig, path: Path) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
    return path


def plot_cloud(points: np.ndarray, path: Path, title: str) -> Path:
    fig, ax = plt.subplots(figsize=(6, 6))
    ax.scatter(points.real, points.imag, s=1.5, linewidths=0, color="#1f4e79")
    ax.set_aspect("equal")
    ax.set_xlabel("Re z")
    ax.set_ylabel("Im z")
    ax.set_title(title)
    return _save(fig, path)


def plot_profile(profile: np.ndarray, path: Path,
                 expected: np.ndarray | None = None) -> Path:
    ks = np.arange(1, len(profile) + 1)
    fig, ax = plt.subplots(figsize=(6, 4.2))
    ax.semilogy(ks, np.maximum(profile, 1e-17), "o-", label="measured")
    if expected is not None:
        ax.semilogy(ks, np.maximum(expected, 1e-17), "s--", label="reference")
        ax.legend()
    ax.set_xlabel("levels k")
    ax.set_ylabel("max distance to bounded-set sample")
    ax.set_title("Shrinking-distance profile")
    return _save(fig, path)


def plot_trace(levels, shifts, norms, path: Path) -> Path:
    fig, (ax1, ax2) = plt.subplots(1, 2, figsize=(9, 4))
    ax1.plot(levels, np.abs(shifts), "o-")
    ax1.set_xlabel("level l")
    ax1.set_ylabel("|shift|")
    ax1.set_title("Center-shift candidates")
    ax2.plot(levels, norms, "o-", color="#8c2d04")
    ax2.set_xlabel("level l")
    ax2.set_ylabel("enclosing radius")
    ax2.set_title("Norm trace")
    return _save(fig, path)


def plot_residuals(points: np.ndarray, residuals: np.ndarray, sup: float,
                   path: Path) -> Path:
    fig, ax = plt.subplots(figsize=(6.5, 5))
    sc = ax.scatter(points.real, points.imag, c=residuals, s=4, linewidths=0,
                    cmap="viridis", vmin=0.0, vmax=sup)
    fig.colorbar(sc, ax=ax, label="|residual|")
    ax.set_aspect("equal")
    ax.set_xlabel("Re z")
    ax.set_ylabel("Im z")
    ax.set_title(f"Minimax residual (sup {sup:.6g})")
    return _save(fig, path)


def plot_widom(degrees, factors, path: Path, title: str) -> Path:
    fig, ax = plt.subplots(figsize=(6, 4.2))
    ax.loglog(degrees, factors, "o-")
    ax.axhline(1.0, color="0.6", lw=0.8)
    ax.set_xlabel("degree")
    ax.set_ylabel("Widom factor")
    ax.set_title(title)
    return _save(fig, path)


def plot_verify(points: np.ndarray, struct_res: np.ndarray,
                report, path: Path) -> Path:
    fig, ax = plt.subplots(figsize=(6.5, 5))
    sc = ax.scatter(points.real, points.imag, c=struct_res, s=4, linewidths=0,
                    cmap="magma")
    fig.colorbar(sc, ax=ax, label="|structural residual|")
    ax.set_aspect("equal")
    ax.set_xlabel("Re z")
    ax.set_ylabel("Im z")
    ax.set_title(
        f"degree {report.degree}: coeff dev {report.coeff_deviation:.2e}, "
        f"norm gap {report.norm_gap:+.2e}"
    )
    return _save(fig, path)
