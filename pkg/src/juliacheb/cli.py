"""Command-line front end.

Subcommands cover the full pipeline: ``validate``, ``radius``,
``sample``, ``cheb``, ``tau``, ``verify``, ``widom``, ``conjecture`` and
``distances``.  Every run writes its delimited/JSON outputs plus a run
manifest into the output directory; report-style subcommands also
render a figure unless ``--no-figures`` is given.

Exit codes: 0 success, 2 configuration error, 3 numeric nonconvergence,
4 I/O failure.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from dataclasses import replace
from pathlib import Path

import numpy as np

from . import __version__
from .cheb import lawson_minimax, tau_sequence, verify_theorem
from .config import (
    RunConfig,
    build_sequence,
    fingerprint,
    parse_config,
    solver_params,
)
from .errors import ConfigError, GeneratorFailure, JuliachebError, NoConvergence, NumericError
from .io import read_point_csv, write_json, write_point_csv, write_rows_csv
from .julia import (
    GridSpec,
    PointCloud,
    Provenance,
    capacity,
    distance_profile,
    escape_radius,
    sample_julia,
    validate_regularity,
)
from .widom import conjecture_run, widom_factor

SUBCOMMANDS = ("validate", "radius", "sample", "cheb", "tau", "verify",
               "widom", "conjecture", "distances")

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_NUMERIC = 3
EXIT_IO = 4


def _radius(config: RunConfig, seq):
    return escape_radius(seq.a1, seq.a2, config.margin)


def _make_sample(config: RunConfig, seq, radius, depth: int):
    return sample_julia(seq, depth, config.budget, radius, config.seed)


def _load_cloud(config: RunConfig):
    points = read_point_csv(Path(config.cloud))
    return PointCloud(points, Provenance(
        depth=0, seed=config.seed, strategy="external-csv",
        sequence=config.cloud, generated=points.size,
    ))


def _run_validate(config, out, fig):
    seq = build_sequence(config)
    depth = config.depth or min(32, config.max_depth)
    report = validate_regularity(seq, depth)
    payload = report.to_dict()
    payload["declared"] = {"a1": seq.a1, "a2": seq.a2, "a3": seq.a3}
    payload["sequence"] = seq.label
    return [write_json(out / "validation.json", payload)]


def _run_radius(config, out, fig):
    seq = build_sequence(config)
    radius = _radius(config, seq)
    return [write_json(out / "radius.json", radius.to_dict())]


def _run_sample(config, out, fig):
    seq = build_sequence(config)
    radius = _radius(config, seq)
    cloud = _make_sample(config, seq, radius, config.depth or 12)
    files = [
        write_point_csv(out / "cloud.csv", cloud.points),
        write_json(out / "cloud.meta.json", cloud.provenance.to_dict()),
    ]
    if fig:
        from .plots import plot_cloud
        files.append(plot_cloud(cloud.points, out / "sample.png", seq.label))
    return files


def _run_cheb(config, out, fig):
    if config.cloud:
        cloud = _load_cloud(config)
    else:
        seq = build_sequence(config)
        radius = _radius(config, seq)
        cloud = _make_sample(config, seq, radius, config.depth or 12)
    solution = lawson_minimax(cloud.points, config.degree,
                              tol=config.lawson_tol,
                              max_iter=config.lawson_max_iter)
    residuals = np.abs(solution.poly(cloud.points))
    files = [
        write_json(out / "cheb.json", solution.to_dict()),
        write_rows_csv(out / "cheb_residuals.csv", "re,im,abs_residual",
                       [[float(z.real), float(z.imag), float(r)]
                        for z, r in zip(cloud.points, residuals)]),
    ]
    if fig:
        from .plots import plot_residuals
        files.append(plot_residuals(cloud.points, residuals,
                                    solution.sup_norm, out / "cheb.png"))
    return files


def _tau_files(out, fig, m, trace, tau, converged):
    rows = [[s.level, float(s.tau.real), float(s.tau.imag), float(s.norm)]
            for s in trace]
    files = [
        write_rows_csv(out / "tau_trace.csv", "l,tau_re,tau_im,norm", rows),
        write_json(out / "tau.json", {
            "m": m,
            "converged": converged,
            "tau": None if tau is None else [tau.real, tau.imag],
            "levels": len(trace),
        }),
    ]
    if fig and trace:
        from .plots import plot_trace
        files.append(plot_trace([s.level for s in trace],
                                [s.tau for s in trace],
                                [s.norm for s in trace], out / "tau.png"))
    return files


def _run_tau(config, out, fig):
    seq = build_sequence(config)
    radius = _radius(config, seq)
    l_max = config.tau_lmax or config.m + 16
    try:
        tau, trace = tau_sequence(seq, config.m, l_max, radius,
                                  budget=config.tau_budget,
                                  tol=config.tau_tol, seed=config.seed)
    except NoConvergence as exc:
        _tau_files(out, fig, config.m, exc.trace, None, False)
        raise
    return _tau_files(out, fig, config.m, trace, tau, True)


def _run_verify(config, out, fig):
    seq = build_sequence(config)
    radius = _radius(config, seq)
    depth = config.depth or config.m + 10
    depth = max(depth, config.m + 4)
    sample = _make_sample(config, seq, radius, depth)
    params = solver_params(config)
    report = verify_theorem(seq, config.m, sample, params, radius=radius)
    files = [write_json(out / "verify.json", report.to_dict())]
    if fig:
        from .plots import plot_verify
        rho = seq.leading_product(config.m)
        res = np.abs(seq.tower_values(config.m, sample.points) / rho - report.tau)
        files.append(plot_verify(sample.points, res, report, out / "verify.png"))
    return files


def _widom_report_files(out, fig, report, title):
    from .io import write_text
    files = [
        write_text(out / "widom.csv", report.to_csv_text()),
        write_json(out / "widom.json", report.to_dict()),
    ]
    if fig and report.rows:
        from .plots import plot_widom
        files.append(plot_widom([r.degree for r in report.rows],
                                [r.widom for r in report.rows],
                                out / "widom.png", title))
    return files


def _run_widom(config, out, fig):
    from .widom import WidomReport
    seq = build_sequence(config)
    radius = _radius(config, seq)
    cap = capacity(seq, config.capacity_tol)
    params = solver_params(config, depth=config.depth or None)
    row = widom_factor(seq, config.m, params, radius=radius, cap=cap)
    report = WidomReport(
        rows=(row,), fingerprint=fingerprint(config),
        config={"sequence": seq.label, "m": config.m, "seed": config.seed},
        summary={},
    )
    return _widom_report_files(out, fig, report, seq.label)


def _run_conjecture(config, out, fig):
    params = solver_params(config)
    report = conjecture_run(config.conjecture_preset, config.mmax, params)
    if config.check_stability:
        doubled = conjecture_run(config.conjecture_preset, config.mmax,
                                 params, budget_scale=2.0)
        changes = [
            abs(b.widom - a.widom) / a.widom
            for a, b in zip(report.rows, doubled.rows)
        ]
        stability = {
            "relativeChanges": changes,
            "maxRelativeChange": max(changes) if changes else 0.0,
            "underResolved": bool(changes) and max(changes) >= 0.01,
        }
        report = replace(report,
                         summary={**report.summary, "stability": stability})
    title = f"preset {config.conjecture_preset}"
    return _widom_report_files(out, fig, report, title)


def _run_distances(config, out, fig):
    seq = build_sequence(config)
    radius = _radius(config, seq)
    kloud = _make_sample(config, seq, radius, config.depth or 20)
    grid = GridSpec(n=config.grid_n)
    profile = distance_profile(seq, radius, config.kmax, grid, kloud,
                               bounded_depth=config.bounded_depth)
    rows = [[k + 1, float(a)] for k, a in enumerate(profile)]
    files = [
        write_rows_csv(out / "distances.csv", "k,distance", rows),
        write_json(out / "distances.json", {
            "gridN": config.grid_n,
            "cellDiagonal": grid.cell_diagonal(radius.value),
            "radius": radius.value,
            "kMax": config.kmax,
            "boundedDepth": config.bounded_depth,
        }),
    ]
    if fig:
        from .plots import plot_profile
        files.append(plot_profile(profile, out / "distances.png"))
    return files


_RUNNERS = {
    "validate": _run_validate,
    "radius": _run_radius,
    "sample": _run_sample,
    "cheb": _run_cheb,
    "tau": _run_tau,
    "verify": _run_verify,
    "widom": _run_widom,
    "conjecture": _run_conjecture,
    "distances": _run_distances,
}


def dispatch(subcommand: str, config: RunConfig, out_dir=None,
             figures: bool | None = None) -> list[Path]:
    """Run one subcommand and return every file it wrote.

    The run manifest (``run_manifest.json``) is always written last and
    references every other output, including figures.
    """
    if subcommand not in _RUNNERS:
        raise ConfigError([f"unknown subcommand '{subcommand}'"])
    out = Path(out_dir if out_dir is not None else config.out_dir)
    out.mkdir(parents=True, exist_ok=True)
    fig = config.figures if figures is None else figures
    start = time.monotonic()
    status = "ok"
    files: list[Path] = []
    try:
        files = _RUNNERS[subcommand](config, out, fig)
    except JuliachebError as exc:
        # partial outputs are already on disk; record them before re-raising
        files = sorted(p for p in out.iterdir() if p.is_file()
                       and p.name not in ("run_manifest.json", "error.json"))
        status = type(exc).__name__
        raise
    finally:
        manifest = {
            "subcommand": subcommand,
            "status": status,
            "fingerprint": fingerprint(config),
            "seed": config.seed,
            "threads": config.threads,
            "wallTimeSeconds": time.monotonic() - start,
            "versions": {
                "juliacheb": __version__,
                "numpy": np.__version__,
                "python": sys.version.split()[0],
            },
            "files": sorted(p.name for p in files),
        }
        try:
            files.append(write_json(out / "run_manifest.json", manifest))
        except OSError:
            if status == "ok":
                raise
    return files


def _error_record(exc: Exception, code: int) -> dict:
    return {
        "error": type(exc).__name__,
        "message": str(exc),
        "exitCode": code,
    }


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="juliacheb",
        description="Boundary sampling, minimax polynomials and Widom "
                    "factors for polynomial composition towers.",
    )
    parser.add_argument("subcommand", choices=SUBCOMMANDS)
    parser.add_argument("--config", required=True, help="path to a run config")
    parser.add_argument("--out", default=None, help="output directory")
    parser.add_argument("--seed", type=int, default=None,
                        help="override the config seed")
    parser.add_argument("--threads", type=int, default=None,
                        help="cap worker parallelism (0 = machine)")
    parser.add_argument("--figures", action=argparse.BooleanOptionalAction,
                        default=None, help="render figures (default: config)")
    args = parser.parse_args(argv)

    out_dir = Path(args.out) if args.out is not None else None
    try:
        text = Path(args.config).read_text(encoding="utf-8")
    except OSError as exc:
        print(json.dumps(_error_record(exc, EXIT_IO)), file=sys.stderr)
        return EXIT_IO
    try:
        config = parse_config(text)
        if args.seed is not None:
            config = replace(config, seed=args.seed)
        if args.threads is not None:
            config = replace(config, threads=args.threads)
        if out_dir is None:
            out_dir = Path(config.out_dir)
        dispatch(args.subcommand, config, out_dir, figures=args.figures)
        return EXIT_OK
    except ConfigError as exc:
        record = _error_record(exc, EXIT_CONFIG)
        record["errors"] = exc.errors
        _emit_error(record, out_dir)
        return EXIT_CONFIG
    except (NumericError, GeneratorFailure) as exc:
        _emit_error(_error_record(exc, EXIT_NUMERIC), out_dir)
        return EXIT_NUMERIC
    except OSError as exc:
        _emit_error(_error_record(exc, EXIT_IO), out_dir)
        return EXIT_IO
    except JuliachebError as exc:
        _emit_error(_error_record(exc, EXIT_NUMERIC), out_dir)
        return EXIT_NUMERIC


def _emit_error(record: dict, out_dir) -> None:
    print(json.dumps(record), file=sys.stderr)
    if out_dir is not None:
        try:
            write_json(Path(out_dir) / "error.json", record)
        except OSError:
            pass


if __name__ == "__main__":
    sys.exit(main())
