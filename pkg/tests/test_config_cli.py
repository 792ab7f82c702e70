"""Configuration parsing, report emission, and command-line behaviour.

The contract under test: a single schema-validated JSON document configures
a run (complex numbers as [re, im] pairs); malformed documents produce
line/field diagnostics and exit code 2; quadrature failures produce exit
code 1 with partial reports flagged; identical resolved configuration plus
seed reproduces every output byte; and the published CSV headers are fixed.
"""

from __future__ import annotations

import json
import math
import pathlib

import pytest

from leafcurrent.cli import run_command
from leafcurrent.config import (
    ConfigError,
    default_document,
    load_config,
    parse_config,
    parse_complex_token,
    schema_document,
)
from leafcurrent.reports import (
    ReportBundle,
    Table,
    bundle_to_json,
    config_hash,
    dumps_canonical,
    emit_reports,
    format_number,
    table_to_csv,
)

# ---------------------------------------------------------------------------
# Configuration documents
# ---------------------------------------------------------------------------


def test_default_document_resolves() -> None:
    cfg = parse_config(None)
    assert len(cfg.singularity_pairs) == 3
    assert cfg.singularity_pairs[0] == (1.0 + 0.0j, 1.0j)
    assert len(cfg.r_grid) == 12 and cfg.r_grid[0] == 0.5
    assert cfg.s_grid == tuple(float(2**k) for k in range(8))
    assert cfg.seed is not None  # Monte Carlo is on by default
    assert cfg.out_format == "csv"
    assert cfg.recurrence.targets[0] == 0
    gammas = sorted(s.gamma for s in cfg.singularities())
    assert gammas == pytest.approx([4.0 / 3.0, 2.0, 4.0])


def test_partial_document_merges_into_defaults() -> None:
    cfg = parse_config({"grids": {"rGrid": [0.5, 0.25]}, "seed": 7})
    assert cfg.r_grid == (0.5, 0.25)
    assert cfg.seed == 7
    # untouched sections keep their defaults
    assert cfg.s_grid == parse_config(None).s_grid


def test_unknown_field_is_diagnosed_by_name() -> None:
    with pytest.raises(ConfigError, match="currrent"):
        parse_config({"currrent": "zero"})


def test_grid_range_violation_names_the_field() -> None:
    with pytest.raises(ConfigError, match=r"grids\.rGrid"):
        parse_config({"grids": {"rGrid": [1.5]}})
    with pytest.raises(ConfigError, match="decreasing"):
        parse_config({"grids": {"rGrid": [0.25, 0.5]}})


def test_monte_carlo_without_seed_is_rejected() -> None:
    with pytest.raises(ConfigError, match="seed"):
        parse_config({"seed": None, "recurrence": {"monteCarlo": True}})
    # switching Monte Carlo off makes the null seed legal
    cfg = parse_config({"seed": None, "recurrence": {"monteCarlo": False}})
    assert cfg.seed is None


def test_profile_parameter_family_mismatch() -> None:
    with pytest.raises(ConfigError, match=r"current\.scale"):
        parse_config({"current": {"family": "triangle", "scale": 2.0}})


def test_real_eigenvalue_ratio_is_rejected() -> None:
    with pytest.raises(ConfigError, match=r"singularity\.0"):
        parse_config({"singularity": [[[1.0, 0.0], [2.0, 0.0]]]})


def test_json_syntax_error_reports_line_and_column(tmp_path: pathlib.Path) -> None:
    path = tmp_path / "broken.json"
    path.write_text('{\n  "grids": \n}')
    with pytest.raises(ConfigError, match=r"line 3 column 1"):
        load_config(str(path))


def test_complex_token_parsing() -> None:
    assert parse_complex_token("i") == 1j
    assert parse_complex_token("1+i") == 1 + 1j
    assert parse_complex_token("-1+i") == -1 + 1j
    assert parse_complex_token("2-3i") == 2 - 3j
    with pytest.raises(ConfigError):
        parse_complex_token("one")


def test_custom_current_object() -> None:
    cfg = parse_config(
        {"current": {"family": "cauchy", "scale": 2.0, "weight": 3.0, "atom": [0.1, 0.0]}}
    )
    sing = cfg.singularities()[0]
    (label, spec), = cfg.currents(sing).items()
    assert label == "cauchy"
    assert spec.weights == (3.0,)
    assert spec.atoms == (0.1 + 0.0j,)


def test_builtin_current_name_selects_single_current() -> None:
    cfg = parse_config({"current": "zero"})
    sing = cfg.singularities()[0]
    assert list(cfg.currents(sing)) == ["zero"]
    # null current -> the three nonzero built-ins, in fixed order
    cfg = parse_config(None)
    assert list(cfg.currents(sing)) == ["triangle", "cauchy", "algebraic"]


def test_lambda_override_replaces_the_sweep() -> None:
    cfg = parse_config(None, {"kernel": {"lambdaOverride": [0.0, 1.0]}})
    assert cfg.singularity_pairs == ((1.0 + 0.0j, 1.0j),)


def test_schema_shipped_in_docs_matches_package_data() -> None:
    repo = pathlib.Path(__file__).resolve().parents[1]
    package = (repo / "src" / "leafcurrent" / "schema.json").read_bytes()
    docs = (repo / "docs" / "config.schema.json").read_bytes()
    assert package == docs
    assert schema_document()["title"]


# ---------------------------------------------------------------------------
# Report serialization
# ---------------------------------------------------------------------------


def test_format_number_round_trips_doubles() -> None:
    assert format_number(0.75) == "0.75"
    assert format_number(7) == "7"
    for x in (1.0 / 3.0, 2.0**-40, 1e-300, 6.02e23, -math.pi):
        assert float(format_number(x)) == x


def test_table_row_width_is_enforced() -> None:
    with pytest.raises(ValueError, match="row width"):
        Table("bad", ("a", "b"), ((1.0,),))


def test_csv_bytes_are_exact() -> None:
    table = Table("demo", ("r", "F"), ((0.5, 0.75), (0.25, 1.0 / 3.0)))
    assert table_to_csv(table) == "r,F\n0.5,0.75\n0.25,0.33333333333333331\n"


def test_csv_rejects_cells_needing_quoting() -> None:
    table = Table("demo", ("name",), (("a,b",),))
    with pytest.raises(ValueError, match="quoting"):
        table_to_csv(table)


def test_canonical_json_sorts_keys_and_formats_floats() -> None:
    text = dumps_canonical({"b": 0.75, "a": [1, None, True]})
    assert text == '{"a":[1,null,true],"b":0.75}'


def test_bundle_json_mirrors_tables() -> None:
    table = Table("demo", ("x",), ((2.0**-12,),))
    bundle = ReportBundle({"seed": 1}, (table,), ("note",))
    doc = json.loads(bundle_to_json(bundle))
    assert doc["tables"][0]["name"] == "demo"
    assert doc["tables"][0]["rows"] == [[2.0**-12]]
    assert doc["warnings"] == ["note"]


def test_emit_reports_file_layout(tmp_path: pathlib.Path) -> None:
    table = Table("demo", ("x",), ((1.0,),))
    bundle = ReportBundle({"seed": 1}, (table,), ())
    csv_paths = emit_reports(bundle, tmp_path / "csv", "csv")
    assert [p.name for p in csv_paths] == ["demo.csv", "metadata.json"]
    json_paths = emit_reports(bundle, tmp_path / "json", "json")
    assert [p.name for p in json_paths] == ["report.json"]
    with pytest.raises(ValueError):
        emit_reports(bundle, tmp_path, "xml")


def test_config_hash_masks_output_directory_only() -> None:
    base = parse_config(None).resolved
    moved = parse_config({"outputs": {"directory": "/elsewhere"}}).resolved
    reseeded = parse_config({"seed": 99}).resolved
    refined = parse_config({"kernel": {"refine": True}}).resolved
    assert config_hash(base) == config_hash(moved)
    assert config_hash(base) != config_hash(reseeded)
    assert config_hash(base) != config_hash(refined)


# ---------------------------------------------------------------------------
# Command line
# ---------------------------------------------------------------------------


def _write(path: pathlib.Path, doc: dict) -> str:
    path.write_text(json.dumps(doc))
    return str(path)


def test_oracle_prints_documented_example(tmp_path, capsys) -> None:
    rc = run_command(["oracle", "--s0", "1", "--out", str(tmp_path)])
    out = capsys.readouterr().out
    assert rc == 0
    assert "computed 0.75, expected 0.75" in out
    lines = (tmp_path / "oracle.csv").read_text().splitlines()
    assert lines[0] == "s0,computed,expected,abs_error"
    row = lines[1].split(",")
    assert float(row[0]) == 1.0
    assert abs(float(row[1]) - 0.75) < 1e-8


def test_profile_zero_current_writes_all_zero_csv(tmp_path) -> None:
    config = _write(
        tmp_path / "c.json",
        {"current": "zero", "grids": {"rGrid": [0.5, 0.25, 0.125]}},
    )
    rc = run_command(["profile", "--config", config, "--out", str(tmp_path / "out")])
    assert rc == 0
    lines = (tmp_path / "out" / "profile_zero.csv").read_text().splitlines()
    assert lines[0] == "r,F,G,F_err,G_err,monotone_violation"
    assert len(lines) == 4
    for line in lines[1:]:
        r, *rest = line.split(",")
        assert all(float(cell) == 0.0 for cell in rest)


def test_kernel_bound_refine_adds_drift_column(tmp_path) -> None:
    config = _write(
        tmp_path / "c.json", {"grids": {"sGrid": [8.0, 16.0], "yGrid": [0.0]}}
    )
    rc = run_command(
        [
            "kernel-bound", "--config", config,
            "--gamma-from-lambda", "i", "--refine",
            "--out", str(tmp_path / "out"),
        ]
    )
    assert rc == 0
    lines = (tmp_path / "out" / "kernel_l0_1.csv").read_text().splitlines()
    assert lines[0] == "s,y,K,K_err,bound_ratio,refinementDrift"
    # bound ratios are finite and positive; drift is a constant column
    drifts = {line.split(",")[5] for line in lines[1:]}
    assert len(drifts) == 1
    for line in lines[1:]:
        assert 0.0 < float(line.split(",")[4]) < 10.0


def test_identical_config_and_seed_reproduce_bytes(tmp_path) -> None:
    config = _write(
        tmp_path / "c.json",
        {
            "grids": {"rGrid": [2.0**-7, 2.0**-8], "RGrid": [5.0]},
            "recurrence": {"nT": 16, "nTheta": 256, "horizon": 8.0},
        },
    )
    rc1 = run_command(["recurrence", "--config", config, "--out", str(tmp_path / "a")])
    rc2 = run_command(["recurrence", "--config", config, "--out", str(tmp_path / "b")])
    rc3 = run_command(
        ["recurrence", "--config", config, "--seed", "7", "--out", str(tmp_path / "c")]
    )
    assert rc1 == rc2 == rc3 == 0
    a = {p.name: p.read_bytes() for p in (tmp_path / "a").iterdir()}
    b = {p.name: p.read_bytes() for p in (tmp_path / "b").iterdir()}
    c = {p.name: p.read_bytes() for p in (tmp_path / "c").iterdir()}
    assert a == b
    name = "recurrence_visibility_origin.csv"
    assert a[name] != c[name]  # the seed steers the Monte Carlo angles
    meta_a = json.loads(a["metadata.json"])
    meta_c = json.loads(c["metadata.json"])
    assert meta_a["metadata"]["configHash"] != meta_c["metadata"]["configHash"]


def test_metadata_hash_matches_resolved_config(tmp_path, capsys) -> None:
    rc = run_command(["oracle", "--s0", "2", "--out", str(tmp_path)])
    assert rc == 0
    meta = json.loads((tmp_path / "metadata.json").read_text())["metadata"]
    cfg = parse_config(None, {"oracle": {"s0": [2.0]}})
    assert meta["configHash"] == config_hash(cfg.resolved)
    assert meta["seed"] == cfg.seed
    assert meta["command"] == "oracle"
    assert meta["toolVersion"]


def test_config_errors_exit_2(tmp_path, capsys) -> None:
    bad_schema = tmp_path / "bad.json"
    bad_schema.write_text('{"grids": {"rGrid": [2.0]}}')
    assert run_command(["profile", "--config", str(bad_schema)]) == 2
    assert "grids.rGrid" in capsys.readouterr().err

    bad_json = tmp_path / "broken.json"
    bad_json.write_text('{"grids": ')
    assert run_command(["profile", "--config", str(bad_json)]) == 2
    assert "line 1" in capsys.readouterr().err

    missing = tmp_path / "nope.json"
    assert run_command(["profile", "--config", str(missing)]) == 2
    capsys.readouterr()

    assert run_command(["oracle", "--s0", "1", "--out", "/proc/nope/sub"]) == 2
    assert "cannot write" in capsys.readouterr().err


def test_usage_errors_exit_2(capsys) -> None:
    assert run_command(["bogus-command"]) == 2
    assert run_command(["oracle", "--format", "xml"]) == 2
    capsys.readouterr()


def test_quadrature_failure_exits_1_with_flagged_partial_reports(tmp_path, capsys) -> None:
    config = _write(
        tmp_path / "c.json",
        {
            "tolerances": {"relTol": 1e-13, "absTol": 1e-15, "maxEvals": 150},
            "grids": {"sGrid": [8.0], "yGrid": [0.0]},
        },
    )
    rc = run_command(
        ["kernel-bound", "--config", config, "--gamma-from-lambda", "i",
         "--out", str(tmp_path / "out")]
    )
    assert rc == 1
    capsys.readouterr()
    meta = json.loads((tmp_path / "out" / "metadata.json").read_text())
    assert meta["warnings"]  # the failure is flagged, exactly once per message
    assert len(meta["warnings"]) == len(set(meta["warnings"]))


def test_env_var_sets_default_output_dir(tmp_path, monkeypatch, capsys) -> None:
    monkeypatch.setenv("LEAFCURRENT_OUT", str(tmp_path / "from-env"))
    assert run_command(["oracle", "--s0", "1"]) == 0
    assert (tmp_path / "from-env" / "oracle.csv").exists()
    # an explicit flag wins over the environment
    assert run_command(["oracle", "--s0", "1", "--out", str(tmp_path / "flag")]) == 0
    assert (tmp_path / "flag" / "oracle.csv").exists()
    capsys.readouterr()


def test_json_format_writes_single_mirror(tmp_path, capsys) -> None:
    config = _write(tmp_path / "c.json", {"regimes": {"sampleCount": 200}})
    rc = run_command(
        ["regimes", "--config", config, "--format", "json", "--out", str(tmp_path / "out")]
    )
    assert rc == 0
    capsys.readouterr()
    doc = json.loads((tmp_path / "out" / "report.json").read_text())
    names = [t["name"] for t in doc["tables"]]
    assert names == ["regimes", "rho_residuals"]
    regimes_rows = doc["tables"][0]["rows"]
    assert len(regimes_rows) == 6
    # level-crossing residuals sit at the extended-precision floor
    for row in doc["tables"][1]["rows"]:
        assert row[3] < 1e-10
