import pytest

from juliacheb.config import (
    build_sequence,
    emit_config,
    fingerprint,
    parse_config,
    solver_params,
)
from juliacheb.errors import ConfigError

MINIMAL = "sequence.preset = constant\nsolver.seed = 7\n"


def test_minimal_config_fills_defaults():
    cfg = parse_config(MINIMAL)
    assert cfg.seed == 7
    assert cfg.preset == "constant"
    assert cfg.c == 0.25 + 0j
    assert cfg.budget == 4000 and cfg.margin == 1.05
    assert cfg.figures is True


def test_unknown_key_is_named():
    with pytest.raises(ConfigError) as info:
        parse_config("eps_schedule = 3\nsolver.seed = 1\n")
    assert any("eps_schedule" in e for e in info.value.errors)


def test_ratio_bound_vs_declared_a2():
    text = ("sequence.preset = random\nsequence.bound = 3\n"
            "sequence.a2 = 0.25\nsolver.seed = 1\n")
    with pytest.raises(ConfigError) as info:
        parse_config(text)
    assert any("condition 2" in e for e in info.value.errors)


def test_seed_is_mandatory():
    with pytest.raises(ConfigError) as info:
        parse_config("sequence.preset = constant\n")
    assert any("solver.seed" in e for e in info.value.errors)


def test_errors_carry_line_numbers_and_accumulate():
    text = "solver.budget = blue\nnope = 1\nsolver.seed = 3\n"
    with pytest.raises(ConfigError) as info:
        parse_config(text)
    joined = "\n".join(info.value.errors)
    assert "line 1" in joined and "line 2" in joined

    with pytest.raises(ConfigError) as info:
        parse_config("solver.seed = -3\n")
    assert any("nonnegative" in e for e in info.value.errors)


def test_duplicate_key_rejected():
    with pytest.raises(ConfigError) as info:
        parse_config("solver.seed = 1\nsolver.seed = 2\n")
    assert any("duplicate" in e for e in info.value.errors)


def test_complex_and_poly_values():
    text = (
        "sequence.preset = explicit\n"
        "sequence.polys = [[[-2, 0], [0, 0], [1, 0]]]\n"
        "solver.seed = 5\n"
    )
    cfg = parse_config(text)
    assert cfg.polys == (((-2 + 0j), 0j, (1 + 0j)),)
    seq = build_sequence(cfg)
    assert seq.poly(1).degree == 2
    assert seq.poly(3) == seq.poly(1)  # periodic repetition


def test_bad_complex_value():
    with pytest.raises(ConfigError) as info:
        parse_config("sequence.c = 5\nsolver.seed = 1\n")
    assert any("[re, im]" in e for e in info.value.errors)


def test_round_trip_identity():
    text = (
        "sequence.preset = random\nsequence.bound = 0.2\nsolver.seed = 11\n"
        "solver.m = 3\nsolver.budget = 1234\noutput.figures = false\n"
        "sequence.a2 = 0.3\ninput.cloud = some/path.csv\n"
    )
    cfg = parse_config(text)
    assert parse_config(emit_config(cfg)) == cfg
    assert fingerprint(cfg) == fingerprint(parse_config(emit_config(cfg)))


def test_round_trip_explicit_polys():
    cfg = parse_config(
        "sequence.preset = explicit\n"
        "sequence.polys = [[[0, 0], [-2, 0], [1, 0]], [[0.5, -0.25], [0, 0], [2, 0]]]\n"
        "solver.seed = 2\n"
    )
    assert parse_config(emit_config(cfg)) == cfg


def test_build_sequence_presets():
    for preset, extra in [("constant", "sequence.c = [0.0, 0.0]\n"),
                          ("perturbed", ""),
                          ("random", "sequence.bound = 0.1\n")]:
        cfg = parse_config(f"sequence.preset = {preset}\n{extra}solver.seed = 3\n")
        seq = build_sequence(cfg)
        assert seq.poly(1).degree == 2
        assert seq.even_monomial


def test_declared_constants_override():
    cfg = parse_config(
        "sequence.preset = constant\nsequence.c = [0.25, 0]\n"
        "sequence.a1 = 0.5\nsequence.a3 = 0.1\nsolver.seed = 1\n"
    )
    seq = build_sequence(cfg)
    assert seq.a1 == 0.5 and seq.a3 == 0.1 and seq.a2 == 0.25


def test_solver_params_mapping():
    cfg = parse_config(
        "solver.seed = 9\nsolver.m = 2\nsolver.tau_lmax = 12\n"
        "solver.lawson_tol = 1e-8\n"
    )
    params = solver_params(cfg, depth=13)
    assert params.seed == 9 and params.depth == 13
    assert params.tau_lmax_extra == 10
    assert params.lawson_tol == 1e-8


def test_out_of_range_values_named():
    text = ("solver.seed = 1\nradius.margin = 0.5\nsolver.mmax = 1\n"
            "sequence.decay = 2\n")
    with pytest.raises(ConfigError) as info:
        parse_config(text)
    joined = "\n".join(info.value.errors)
    assert "radius.margin" in joined
    assert "solver.mmax" in joined
    assert "sequence.decay" in joined
