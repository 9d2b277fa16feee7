"""CLI behaviour: exit codes, outputs, and error reporting."""

import json

import pytest

from dnadecide.cli import main
from dnadecide.formats import (
    ProblemFormatError,
    dump_problem,
    load_problem,
    parse_problem,
)


# -- problem files ------------------------------------------------------------


def test_bundled_problem_round_trips(ball_game):
    text = dump_problem(ball_game)
    again = parse_problem(text)
    assert again == ball_game


def test_load_problem_reads_a_file(tmp_path, ball_game):
    path = tmp_path / "problem.json"
    path.write_text(dump_problem(ball_game))
    assert load_problem(path) == ball_game


def test_zero_denominator_names_the_field():
    bad = json.dumps(
        {
            "outcomes": [
                {"label": "red", "probability": "4/0"},
                {"label": "black", "probability": "5/9"},
            ],
            "options": [{"label": "option-1", "favorable": ["red"]}],
        }
    )
    with pytest.raises(ProblemFormatError, match=r"outcomes\[0\].probability"):
        parse_problem(bad)


def test_float_probability_rejected():
    bad = json.dumps(
        {
            "outcomes": [{"label": "red", "probability": 0.5}],
            "options": [{"label": "o", "favorable": ["red"]}],
        }
    )
    with pytest.raises(ProblemFormatError, match="rational written as a string"):
        parse_problem(bad)


def test_missing_options_key_rejected():
    with pytest.raises(ProblemFormatError, match="'options'"):
        parse_problem('{"outcomes": [{"label": "a", "probability": "1"}]}')


def test_unknown_top_level_key_rejected():
    doc = {
        "outcomes": [{"label": "a", "probability": "1"}],
        "options": [{"label": "o", "favorable": ["a"]}],
        "extra": 1,
    }
    with pytest.raises(ProblemFormatError, match="'extra'"):
        parse_problem(json.dumps(doc))


def test_utilities_keys_must_be_exact():
    doc = {
        "outcomes": [{"label": "a", "probability": "1"}],
        "options": [{"label": "o", "favorable": ["a"]}],
        "utilities": {"favorable": "1"},
    }
    with pytest.raises(ProblemFormatError, match="utilities"):
        parse_problem(json.dumps(doc))


def test_probability_sum_failure_surfaces():
    from dnadecide.decision import ProbabilitySumError

    doc = {
        "outcomes": [
            {"label": "a", "probability": "1/2"},
            {"label": "b", "probability": "1/3"},
        ],
        "options": [{"label": "o", "favorable": ["a"]}],
    }
    with pytest.raises(ProbabilitySumError):
        parse_problem(json.dumps(doc))


# -- subcommands -------------------------------------------------------------


def test_run_defaults_to_bundled_problem(capsys):
    assert main(["run"]) == 0
    out = capsys.readouterr().out
    assert "chosen: option-1" in out
    assert "matches the exact oracle" in out


def test_run_emits_band_table(capsys):
    assert main(["run", "--format", "tsv"]) == 0
    out = capsys.readouterr().out
    assert out.startswith("lane\tlength_bp\trelative_intensity\tmigration_fraction")
    assert "tube-1\t147\t128/9\t" in out


def test_run_writes_svg_to_file(tmp_path, capsys):
    target = tmp_path / "gel.svg"
    assert main(["run", "--format", "svg", "--out", str(target)]) == 0
    assert target.read_text().startswith("<svg ")
    assert f"wrote {target}" in capsys.readouterr().out


def test_run_honors_cycle_count(capsys):
    assert main(["run", "--format", "tsv", "--cycles", "0"]) == 0
    out = capsys.readouterr().out
    assert "tube-1\t147\t4/9\t" in out


def test_unamplified_run_reaches_same_decision(capsys):
    assert main(["run", "--cycles", "0"]) == 0
    assert "chosen: option-1" in capsys.readouterr().out


def test_compile_writes_artifacts(tmp_path, capsys):
    out_dir = tmp_path / "plan"
    assert main(["compile", "--out", str(out_dir)]) == 0
    names = {p.name for p in out_dir.iterdir()}
    assert names == {"encoding.fasta", "plan.txt", "protocol.txt", "problem.json"}
    assert "construct 147 bp" in (out_dir / "plan.txt").read_text()
    fasta = (out_dir / "encoding.fasta").read_text()
    assert fasta.startswith(">")


def test_compile_rejects_oversized_problem_with_core_library(tmp_path, capsys):
    doc = {
        "outcomes": [
            {"label": "a", "probability": "1/2"},
            {"label": "b", "probability": "1/4"},
            {"label": "c", "probability": "1/4"},
        ],
        "options": [
            {"label": f"option-{i}", "favorable": ["a"]} for i in range(1, 5)
        ],
    }
    path = tmp_path / "wide.json"
    path.write_text(json.dumps(doc))
    assert main(["compile", "--input", str(path)]) == 1
    err = capsys.readouterr().err
    assert "error:" in err and "enzyme" in err


def test_extended_library_rescues_oversized_problem(tmp_path, capsys):
    doc = {
        "outcomes": [
            {"label": "a", "probability": "1/2"},
            {"label": "b", "probability": "1/4"},
            {"label": "c", "probability": "1/4"},
        ],
        "options": [
            {"label": f"option-{i}", "favorable": ["a"]} for i in range(1, 5)
        ],
    }
    path = tmp_path / "wide.json"
    path.write_text(json.dumps(doc))
    assert main(["compile", "--input", str(path), "--enzymes", "extended"]) == 0


def test_malformed_input_exits_one_and_names_field(tmp_path, capsys):
    path = tmp_path / "bad.json"
    path.write_text(
        json.dumps(
            {
                "outcomes": [{"label": "red", "probability": "4/0"}],
                "options": [{"label": "o", "favorable": ["red"]}],
            }
        )
    )
    assert main(["run", "--input", str(path)]) == 1
    err = capsys.readouterr().err
    assert "outcomes[0].probability" in err


def test_missing_input_file_exits_one(capsys):
    assert main(["run", "--input", "/no/such/file.json"]) == 1
    assert "error:" in capsys.readouterr().err


def test_usage_errors_exit_one(capsys):
    # code 2 is reserved for oracle disagreement, so flag misuse is an
    # input error like any other
    assert main([]) == 1
    capsys.readouterr()
    assert main(["run", "--format", "png"]) == 1
    capsys.readouterr()
    assert main(["frobnicate"]) == 1
    capsys.readouterr()
    assert main(["--help"]) == 0


def test_fixture_mode_reports_screening(capsys):
    assert main(["compile", "--fixture"]) == 0
    out = capsys.readouterr().out
    assert "kept reference" in out
    assert "rejected reference" in out


def test_fixture_fasta_carries_kept_reference_sequence(tmp_path, capsys):
    out_dir = tmp_path / "pinned"
    assert main(["compile", "--fixture", "--out", str(out_dir)]) == 0
    fasta = (out_dir / "encoding.fasta").read_text()
    assert "TCTGACTCAGCTGAGATCCA" in fasta
    header = next(
        line for line, nxt in zip(fasta.splitlines(), fasta.splitlines()[1:])
        if nxt == "TCTGACTCAGCTGAGATCCA"
    )
    assert "option-1" in header


def test_compile_reports_zero_warnings_on_clean_plan(capsys):
    assert main(["compile"]) == 0
    out = capsys.readouterr().out
    assert "encoding validation: 0 warning(s)" in out


def test_run_writes_full_artifact_set(tmp_path, capsys):
    outdir = tmp_path / "artifacts"
    assert main(["run", "--outdir", str(outdir)]) == 0
    names = {p.name for p in outdir.iterdir()}
    assert names == {"report.txt", "bands.tsv", "gel.svg", "gel.txt"}
    assert "chosen: option-1" in (outdir / "report.txt").read_text()


def test_uniform_tie_reported_and_exits_zero(tmp_path, capsys):
    doc = {
        "outcomes": [
            {"label": f"out-{i}", "probability": "1/3"} for i in range(1, 4)
        ],
        "options": [
            {"label": "option-1", "favorable": ["out-1", "out-2"]},
            {"label": "option-2", "favorable": ["out-2", "out-3"]},
        ],
    }
    path = tmp_path / "uniform.json"
    path.write_text(json.dumps(doc))
    assert main(["run", "--input", str(path)]) == 0
    out = capsys.readouterr().out
    assert "chosen: option-1, option-2" in out


def test_disagreement_exits_two(monkeypatch, capsys):
    import dnadecide.cli as cli_mod

    real = cli_mod.readout

    def skewed(gel, plan, matrix=None):
        report = real(gel, plan, matrix)
        object.__setattr__(report, "oracle", (1,))
        return report

    monkeypatch.setattr(cli_mod, "readout", skewed)
    assert main(["run"]) == 2
    assert "disagrees" in capsys.readouterr().err


def test_verify_small_sweep_passes(capsys):
    assert main(["verify", "--count", "8", "--seed", "3", "--cycles", "2"]) == 0
    out = capsys.readouterr().out
    assert "8/8 agree" in out


def test_verify_zero_trials_passes_vacuously(capsys):
    assert main(["verify", "--count", "0"]) == 0
    assert "0/0 agree" in capsys.readouterr().out
