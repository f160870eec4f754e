import io

import pytest

from liftedilc.cli import main

from conftest import MINIMAL_THIRD_ORDER


def run_cli(argv):
    out = io.StringIO()
    code = main(argv, stdout=out)
    return code, out.getvalue()


def test_run_prints_artifacts_and_summary(write_cfg, tmp_path, monkeypatch):
    monkeypatch.chdir(tmp_path)
    path = write_cfg(
        {
            "run.model_count": "5",
            "run.world_count": "2",
            "switch.candidates": "5",
            "output.plot": "run.svg",
        }
    )
    code, text = run_cli(["run", str(path)])
    assert code == 0
    assert "wrote results.csv" in text
    assert "wrote run.svg" in text
    assert "mode hybrid, law p_transpose, 5 model + 2 world iterations" in text
    assert "final world RMS" in text
    assert "candidate 5:" in text
    assert (tmp_path / "results.csv").exists()
    assert (tmp_path / "run.svg").exists()


def test_run_reports_missing_file_as_config_error(capsys):
    code, _ = run_cli(["run", "no_such_file.cfg"])
    assert code == 1
    assert "config error:" in capsys.readouterr().err


def test_run_reports_unknown_key_as_config_error(write_cfg, capsys):
    path = write_cfg({"law.gian": "1.0"})
    code, _ = run_cli(["run", str(path)])
    assert code == 1
    assert "law.gian" in capsys.readouterr().err


def test_run_reports_divergence_as_numerical_error(write_cfg, tmp_path, capsys):
    path = write_cfg(
        {"law.gain": "2.5", "output.csv": str(tmp_path / "x.csv")}
    )
    code, _ = run_cli(["run", str(path)])
    assert code == 2
    assert "error:" in capsys.readouterr().err


def test_figure_writes_into_the_output_directory(tmp_path):
    code, text = run_cli(
        ["figure", "fig5", "--law", "norm_optimal", "--switch", "10",
         "--output-dir", str(tmp_path)]
    )
    assert code == 0
    stem = "fig5_norm_optimal_switch10"
    for suffix in ("_model.csv", "_world.csv", "_hybrid.csv", ".svg"):
        assert (tmp_path / f"{stem}{suffix}").exists()
    assert "final hybrid RMS" in text


def test_figure_rejects_unknown_id():
    with pytest.raises(SystemExit) as info:
        run_cli(["figure", "fig9"])
    assert info.value.code == 2  # argparse rejects values outside choices


def test_advise_switch_uses_flag_over_config(write_cfg):
    path = write_cfg({"switch.candidates": "40"})
    code, text = run_cli(["advise-switch", str(path), "--candidates", "5,10"])
    assert code == 0
    assert "candidate 5:" in text
    assert "candidate 10:" in text
    assert "candidate 40:" not in text
    code, text = run_cli(["advise-switch", str(path)])
    assert code == 0
    assert "candidate 40:" in text


def test_advise_switch_requires_candidates_somewhere(write_cfg, capsys):
    path = write_cfg()
    code, _ = run_cli(["advise-switch", str(path)])
    assert code == 1
    assert "no candidates" in capsys.readouterr().err


def test_zeros_reports_both_plants(write_cfg):
    path = write_cfg(base=MINIMAL_THIRD_ORDER)
    code, text = run_cli(["zeros", str(path)])
    assert code == 0
    assert "model plant sampled zeros (1 outside unit circle):" in text
    assert "world plant sampled zeros (1 outside unit circle):" in text
    assert "configured deleted rows: 1" in text
    assert "-3.31042889" in text
