"""Run configuration: flat dotted-key text files.

The format is one ``section.key = value`` assignment per line, with
``#`` comments; values are JSON literals (numbers, booleans, arrays) or
bare strings.  Complex numbers are two-element arrays ``[re, im]``.
Flat keys diff cleanly across experiment logs, which is the point.
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass, fields, replace

from .cheb import SolverParams
from .errors import ConfigError
from .julia import (
    PolynomialSequence,
    periodic_sequence,
    quadratic_constant,
    quadratic_perturbed,
    quadratic_random,
)
from .poly import Polynomial

_PRESETS = ("constant", "perturbed", "random", "explicit")
_CONJECTURE_PRESETS = ("autonomous", "perturbed")


@dataclass(frozen=True)
class RunConfig:
    """Validated run parameters; every field has a documented bound."""

    seed: int
    preset: str = "constant"
    c: complex = 0.25 + 0j
    bound: float = 0.2
    amplitude: float = 0.25
    decay: float = 0.25
    polys: tuple | None = None
    a1: float | None = None
    a2: float | None = None
    a3: float | None = None
    max_depth: int = 128
    margin: float = 1.05
    budget: int = 4000
    depth: int = 0                 # 0: subcommand-specific default
    m: int = 2
    degree: int = 8
    mmax: int = 6
    kmax: int = 10
    grid_n: int = 241
    bounded_depth: int = 60
    tau_budget: int = 8192
    tau_tol: float = 1e-6
    tau_lmax: int = 0              # 0: m + 16
    lawson_tol: float = 1e-9
    lawson_max_iter: int = 1000
    capacity_tol: float = 1e-12
    conjecture_preset: str = "autonomous"
    check_stability: bool = False
    threads: int = 0               # 0: machine parallelism
    out_dir: str = "out"
    figures: bool = True
    cloud: str | None = None


# key -> (attribute, decoder); decoders raise ValueError with a reason
def _as_int(v):
    if isinstance(v, bool) or not isinstance(v, int):
        raise ValueError("expected an integer")
    return v


def _as_float(v):
    if isinstance(v, bool) or not isinstance(v, (int, float)):
        raise ValueError("expected a number")
    return float(v)


def _as_bool(v):
    if not isinstance(v, bool):
        raise ValueError("expected true or false")
    return v


def _as_str(v):
    if not isinstance(v, str):
        raise ValueError("expected a string")
    return v


def _as_complex(v):
    if (isinstance(v, list) and len(v) == 2
            and all(isinstance(x, (int, float)) and not isinstance(x, bool)
                    for x in v)):
        return complex(float(v[0]), float(v[1]))
    raise ValueError("expected a complex number as [re, im]")


def _as_polys(v):
    if not isinstance(v, list) or not v:
        raise ValueError("expected a list of coefficient lists")
    out = []
    for coeffs in v:
        if not isinstance(coeffs, list) or len(coeffs) < 3:
            raise ValueError("each map needs ascending coefficients up to degree >= 2")
        out.append(tuple(_as_complex(c) for c in coeffs))
    return tuple(out)


_KEYS: dict[str, tuple[str, object]] = {
    "sequence.preset": ("preset", _as_str),
    "sequence.c": ("c", _as_complex),
    "sequence.bound": ("bound", _as_float),
    "sequence.amplitude": ("amplitude", _as_float),
    "sequence.decay": ("decay", _as_float),
    "sequence.polys": ("polys", _as_polys),
    "sequence.a1": ("a1", _as_float),
    "sequence.a2": ("a2", _as_float),
    "sequence.a3": ("a3", _as_float),
    "sequence.max_depth": ("max_depth", _as_int),
    "radius.margin": ("margin", _as_float),
    "solver.seed": ("seed", _as_int),
    "solver.budget": ("budget", _as_int),
    "solver.depth": ("depth", _as_int),
    "solver.m": ("m", _as_int),
    "solver.degree": ("degree", _as_int),
    "solver.mmax": ("mmax", _as_int),
    "solver.kmax": ("kmax", _as_int),
    "solver.grid_n": ("grid_n", _as_int),
    "solver.bounded_depth": ("bounded_depth", _as_int),
    "solver.tau_budget": ("tau_budget", _as_int),
    "solver.tau_tol": ("tau_tol", _as_float),
    "solver.tau_lmax": ("tau_lmax", _as_int),
    "solver.lawson_tol": ("lawson_tol", _as_float),
    "solver.lawson_max_iter": ("lawson_max_iter", _as_int),
    "solver.capacity_tol": ("capacity_tol", _as_float),
    "conjecture.preset": ("conjecture_preset", _as_str),
    "conjecture.check_stability": ("check_stability", _as_bool),
    "threads": ("threads", _as_int),
    "output.dir": ("out_dir", _as_str),
    "output.figures": ("figures", _as_bool),
    "input.cloud": ("cloud", _as_str),
}

_BOUNDS = {
    "margin": (lambda c: c.margin >= 1.0, "radius.margin must be >= 1"),
    "budget": (lambda c: c.budget >= 1, "solver.budget must be >= 1"),
    "depth": (lambda c: c.depth >= 0, "solver.depth must be >= 0"),
    "m": (lambda c: c.m >= 1, "solver.m must be >= 1"),
    "degree": (lambda c: c.degree >= 1, "solver.degree must be >= 1"),
    "mmax": (lambda c: c.mmax >= 2, "solver.mmax must be >= 2"),
    "kmax": (lambda c: c.kmax >= 2, "solver.kmax must be >= 2"),
    "grid_n": (lambda c: c.grid_n >= 16, "solver.grid_n must be >= 16"),
    "bounded_depth": (lambda c: c.bounded_depth >= 1,
                      "solver.bounded_depth must be >= 1"),
    "tau_budget": (lambda c: c.tau_budget >= 2, "solver.tau_budget must be >= 2"),
    "tau_tol": (lambda c: c.tau_tol > 0, "solver.tau_tol must be positive"),
    "tau_lmax": (lambda c: c.tau_lmax == 0 or c.tau_lmax > c.m,
                 "solver.tau_lmax must exceed solver.m (or be 0 for the default)"),
    "lawson_tol": (lambda c: c.lawson_tol > 0, "solver.lawson_tol must be positive"),
    "lawson_max_iter": (lambda c: c.lawson_max_iter >= 1,
                        "solver.lawson_max_iter must be >= 1"),
    "capacity_tol": (lambda c: c.capacity_tol > 0,
                     "solver.capacity_tol must be positive"),
    "max_depth": (lambda c: c.max_depth >= 2, "sequence.max_depth must be >= 2"),
    "bound": (lambda c: c.bound >= 0, "sequence.bound must be >= 0"),
    "amplitude": (lambda c: c.amplitude > 0, "sequence.amplitude must be positive"),
    "decay": (lambda c: 0 < c.decay < 1, "sequence.decay must lie in (0, 1)"),
    "threads": (lambda c: c.threads >= 0, "threads must be >= 0"),
    "seed": (lambda c: c.seed >= 0, "solver.seed must be a nonnegative integer"),
}


def parse_config(text: str) -> RunConfig:
    """Parse and validate a flat-key config; raises ``ConfigError``.

    Every syntax problem, unknown key, type mismatch and out-of-range
    value is collected with its line reference before the error is
    raised, so one run surfaces all problems.
    """
    errors: list[str] = []
    values: dict[str, object] = {}
    seen: dict[str, int] = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            errors.append(f"line {lineno}: expected 'key = value'")
            continue
        key, _, val = (part.strip() for part in line.partition("="))
        if key not in _KEYS:
            errors.append(f"line {lineno}: unknown key '{key}'")
            continue
        if key in seen:
            errors.append(
                f"line {lineno}: duplicate key '{key}' (first set on line {seen[key]})"
            )
            continue
        seen[key] = lineno
        try:
            parsed = json.loads(val)
        except json.JSONDecodeError:
            parsed = val
        attr, decode = _KEYS[key]
        try:
            values[attr] = decode(parsed)
        except ValueError as exc:
            errors.append(f"line {lineno}: {key}: {exc}")
    if "seed" not in values and not any("solver.seed" in e for e in errors):
        errors.append("solver.seed: mandatory key is missing")
    if errors:
        raise ConfigError(errors)

    config = RunConfig(**values)
    errors.extend(_semantic_errors(config))
    if errors:
        raise ConfigError(errors)
    return config


def _semantic_errors(config: RunConfig) -> list[str]:
    errors = []
    for attr, (check, message) in _BOUNDS.items():
        if not check(config):
            errors.append(message)
    if config.preset not in _PRESETS:
        errors.append(
            f"sequence.preset: unknown preset '{config.preset}' "
            f"(choose from {', '.join(_PRESETS)})"
        )
    if config.conjecture_preset not in _CONJECTURE_PRESETS:
        errors.append(
            f"conjecture.preset: unknown preset '{config.conjecture_preset}' "
            f"(choose from {', '.join(_CONJECTURE_PRESETS)})"
        )
    if config.preset == "explicit":
        if config.polys is None:
            errors.append("sequence.polys: required for the explicit preset")
        else:
            for i, coeffs in enumerate(config.polys):
                if coeffs[-1] == 0:
                    errors.append(
                        f"sequence.polys: map {i} has a zero leading coefficient"
                    )
    if config.a1 is not None and config.a1 <= 0:
        errors.append("sequence.a1: must be positive (regularity condition 1)")
    if config.a2 is not None and config.a2 < 0:
        errors.append("sequence.a2: must be nonnegative (regularity condition 2)")
    if config.a3 is not None and config.a3 < 0:
        errors.append("sequence.a3: must be nonnegative (regularity condition 3)")
    ratio = _implied_coefficient_ratio(config)
    if config.a2 is not None and ratio is not None and ratio > config.a2:
        errors.append(
            f"sequence.a2: preset admits coefficient ratio up to {ratio:g}, "
            f"above the declared bound {config.a2:g} (regularity condition 2)"
        )
    return errors


def _implied_coefficient_ratio(config: RunConfig) -> float | None:
    """Largest lower-to-leading coefficient ratio the preset can realize."""
    if config.preset == "constant":
        return abs(config.c)
    if config.preset == "random":
        return config.bound
    if config.preset == "perturbed":
        return abs(config.c) + config.amplitude * config.decay
    if config.preset == "explicit" and config.polys:
        return max(
            max(abs(c) for c in coeffs[:-1]) / abs(coeffs[-1])
            for coeffs in config.polys
            if coeffs[-1] != 0
        )
    return None


def emit_config(config: RunConfig) -> str:
    """Canonical text for a config; ``parse_config`` round-trips it."""
    lines = []
    by_attr = {attr: key for key, (attr, _) in _KEYS.items()}
    for f in fields(RunConfig):
        value = getattr(config, f.name)
        if value is None:
            continue
        key = by_attr[f.name]
        if isinstance(value, complex):
            encoded = json.dumps([value.real, value.imag])
        elif isinstance(value, tuple):
            encoded = json.dumps(
                [[[c.real, c.imag] for c in coeffs] for coeffs in value]
            )
        elif isinstance(value, bool):
            encoded = "true" if value else "false"
        elif isinstance(value, str):
            encoded = value
        else:
            encoded = json.dumps(value)
        lines.append(f"{key} = {encoded}")
    return "\n".join(lines) + "\n"


def fingerprint(config: RunConfig) -> str:
    """Hex digest identifying the exact run parameters."""
    return hashlib.sha256(emit_config(config).encode()).hexdigest()


def build_sequence(config: RunConfig) -> PolynomialSequence:
    """Instantiate the sequence described by the config."""
    if config.preset == "constant":
        seq = quadratic_constant(config.c, a2=config.a2,
                                 max_depth=config.max_depth)
    elif config.preset == "perturbed":
        seq = quadratic_perturbed(config.c, config.amplitude, config.decay,
                                  a2=config.a2, max_depth=config.max_depth)
    elif config.preset == "random":
        seq = quadratic_random(config.bound, config.seed, a2=config.a2,
                               max_depth=config.max_depth)
    else:
        seq = periodic_sequence(
            [Polynomial(coeffs) for coeffs in config.polys],
            a1=config.a1, a2=config.a2, a3=config.a3,
            max_depth=config.max_depth,
        )
    if config.preset != "explicit" and (config.a1 is not None
                                        or config.a3 is not None):
        seq = replace(seq,
                      a1=config.a1 if config.a1 is not None else seq.a1,
                      a3=config.a3 if config.a3 is not None else seq.a3)
    return seq


def solver_params(config: RunConfig, depth: int | None = None) -> SolverParams:
    """Map config fields onto the shared solver parameter record."""
    return SolverParams(
        seed=config.seed,
        budget=config.budget,
        depth=depth,
        tau_budget=config.tau_budget,
        tau_tol=config.tau_tol,
        tau_lmax_extra=(config.tau_lmax - config.m) if config.tau_lmax else 16,
        lawson_tol=config.lawson_tol,
        lawson_max_iter=config.lawson_max_iter,
    )
