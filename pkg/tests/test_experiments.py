import csv
import dataclasses
import math
from pathlib import Path

import numpy as np
import pytest

from liftedilc import (
    CSV_HEADER,
    ConfigError,
    LearningLaw,
    build_desired_trajectory,
    build_initial_input,
    build_lifted_pair,
    lifted_output,
    load_config,
    reproduce_figure,
    run_experiment,
    run_hybrid,
    run_iterations,
    unhandled_zero_warning,
    write_history_csv,
)

from conftest import MINIMAL_THIRD_ORDER


def read_rows(path):
    with open(path, newline="") as fh:
        return list(csv.DictReader(fh))


def test_desired_trajectory_hits_known_points(write_cfg):
    config = load_config(write_cfg())
    desired = build_desired_trajectory(config)
    assert desired.start_step == 1
    assert len(desired) == 100
    # 20 pi t passes pi at t = 0.05 and 2 pi at t = 0.1
    assert desired.values[4] == pytest.approx(4.0 * math.pi, rel=1e-12)
    assert desired.values[9] == pytest.approx(0.0, abs=1e-12)


def test_third_order_desired_skips_the_deleted_step(write_cfg):
    config = load_config(write_cfg(base=MINIMAL_THIRD_ORDER))
    desired = build_desired_trajectory(config)
    assert config.deleted_rows == 1
    assert desired.start_step == 2
    assert len(desired) == 99
    want = math.pi * (1.0 - math.cos(10.0 * math.pi * 0.02)) ** 2
    assert desired.values[0] == pytest.approx(want, rel=1e-12)


def test_initial_input_variants(write_cfg, tmp_path):
    zero_cfg = load_config(write_cfg({"run.initial_input": "zero"}))
    u0 = build_initial_input(zero_cfg)
    assert u0.start_step == 0
    assert np.all(u0.values == 0.0)

    warm_cfg = load_config(write_cfg({"run.initial_input": "desired_output"}))
    u0 = build_initial_input(warm_cfg)
    first = math.pi * (1.0 - math.cos(20.0 * math.pi * 0.01)) ** 2
    assert len(u0) == 100
    assert u0.values[0] == pytest.approx(first, rel=1e-12)

    source = tmp_path / "u0.txt"
    source.write_text("\n".join(str(0.1 * k) for k in range(100)))
    file_cfg = load_config(write_cfg({"run.initial_input": str(source)}))
    u0 = build_initial_input(file_cfg)
    assert u0.values[3] == pytest.approx(0.3)

    short = tmp_path / "short.txt"
    short.write_text("1.0\n2.0\n")
    short_cfg = load_config(write_cfg({"run.initial_input": str(short)}))
    with pytest.raises(ConfigError, match="samples"):
        build_initial_input(short_cfg)


def test_csv_layout_counts_hardware_rows(write_cfg, tmp_path):
    config = load_config(write_cfg())
    world, model = build_lifted_pair(config)
    desired = build_desired_trajectory(config)
    u0 = build_initial_input(config)
    history = run_hybrid(
        world, model, LearningLaw("p_transpose", 1.0), u0, None, 3, 2, desired
    )
    path = tmp_path / "out.csv"
    write_history_csv(history, path)

    lines = path.read_text().splitlines()
    assert lines[0] == CSV_HEADER
    assert len(lines) == 7
    rows = read_rows(path)
    assert [r["phase"] for r in rows] == ["model"] * 3 + ["world"] * 3
    assert [r["hardware_iterations_consumed"] for r in rows] == list("000123")
    # repr-written floats parse back to the exact record values
    for row, record in zip(rows, history.records):
        assert float(row["rms"]) == record.rms
        assert float(row["rms_db"]) == record.rms_db


def test_csv_leaves_db_blank_when_error_is_zero(second_order_pair, tmp_path):
    _, model, u0, _ = second_order_pair
    desired = lifted_output(model, u0)
    history = run_iterations(
        model, model, LearningLaw("p_transpose", 1.0), u0, None, 0, "model", desired
    )
    path = tmp_path / "zero.csv"
    write_history_csv(history, path)
    rows = read_rows(path)
    assert rows[0]["rms"] == "0.0"
    assert rows[0]["rms_db"] == ""


def _tmp_config(write_cfg, tmp_path, name, base=None, **overrides):
    merged = {"output.csv": str(tmp_path / name)}
    merged.update(overrides)
    if base is None:
        return load_config(write_cfg(merged))
    return load_config(write_cfg(merged, base=base))


def test_hybrid_jump_shows_at_the_switch_row(write_cfg, tmp_path):
    config = _tmp_config(write_cfg, tmp_path, "hybrid.csv")
    artifacts = run_experiment(config)
    rows = read_rows(artifacts.csv_path)
    assert len(rows) == 101
    assert rows[49]["phase"] == "model"
    assert rows[50]["phase"] == "world"
    assert rows[50]["hardware_iterations_consumed"] == "1"
    # switching to the real plant reveals error the model cannot see
    assert float(rows[50]["rms"]) > float(rows[49]["rms"])
    assert artifacts.summary["switch_index"] == 50


def test_zero_count_hybrid_writes_a_single_row(write_cfg, tmp_path):
    config = _tmp_config(
        write_cfg, tmp_path, "tiny.csv",
        **{"run.model_count": "0", "run.world_count": "0"},
    )
    artifacts = run_experiment(config)
    rows = read_rows(artifacts.csv_path)
    assert len(rows) == 1
    assert rows[0]["phase"] == "world"
    assert rows[0]["hardware_iterations_consumed"] == "1"


def test_model_mode_error_decreases_every_iteration(write_cfg, tmp_path):
    config = _tmp_config(
        write_cfg, tmp_path, "model.csv",
        **{"run.mode": "model", "run.model_count": "20"},
    )
    artifacts = run_experiment(config)
    rms = [float(r["rms"]) for r in read_rows(artifacts.csv_path)]
    assert len(rms) == 21
    assert all(b < a for a, b in zip(rms, rms[1:]))
    assert artifacts.summary["final_rms"]["model"] == pytest.approx(rms[-1])


def test_run_experiment_output_is_byte_stable(write_cfg, tmp_path):
    paths = []
    for name in ("first.csv", "second.csv"):
        config = _tmp_config(write_cfg, tmp_path, name)
        paths.append(Path(run_experiment(config).csv_path))
    assert paths[0].read_bytes() == paths[1].read_bytes()


def test_switch_reports_follow_the_candidate_list(write_cfg, tmp_path):
    config = _tmp_config(
        write_cfg, tmp_path, "cand.csv", **{"switch.candidates": "10,50"}
    )
    artifacts = run_experiment(config)
    reports = artifacts.summary["switch_reports"]
    assert [r.candidate_n for r in reports] == [10, 50]
    assert all(r.jump > 0 for r in reports)


def test_unhandled_zero_warning_for_uncovered_zero(write_cfg, tmp_path):
    config = _tmp_config(
        write_cfg, tmp_path, "nodelete.csv",
        base=MINIMAL_THIRD_ORDER,
        **{
            "lifted.deleted_rows": "0",
            "run.mode": "world",
            "run.world_count": "2",
        },
    )
    warning = unhandled_zero_warning(config)
    assert warning is not None and "unit circle" in warning
    artifacts = run_experiment(config)
    assert artifacts.summary["warnings"] == [warning]

    clean = load_config(write_cfg())
    assert unhandled_zero_warning(clean) is None


def test_build_lifted_pair_shares_the_deletion(write_cfg):
    config = load_config(write_cfg(base=MINIMAL_THIRD_ORDER))
    world, model = build_lifted_pair(config)
    assert (model.deleted_rows, world.deleted_rows) == (1, 1)
    assert model.row_count == world.row_count == 99
    assert not np.allclose(model.p_matrix, world.p_matrix)


def test_reproduce_figure_aligns_three_curves(tmp_path):
    artifacts = reproduce_figure("fig3", "p_transpose", 50, str(tmp_path))
    curves = {k: read_rows(v) for k, v in artifacts.curve_csv_paths.items()}
    assert set(curves) == {"model", "world", "hybrid"}
    assert all(len(rows) == 101 for rows in curves.values())

    def rms_at_budget(rows, consumed):
        return min(
            float(r["rms"])
            for r in rows
            if int(r["hardware_iterations_consumed"]) == consumed
        )

    # the hybrid run beats learning on the plant alone at equal hardware cost
    for consumed in (1, 11, 51):
        assert rms_at_budget(curves["hybrid"], consumed) < rms_at_budget(
            curves["world"], consumed
        )
    assert Path(artifacts.plot_paths[0]).exists()


def test_marker_variants_annotate_the_switch(tmp_path):
    with_markers = reproduce_figure("fig2", "p_transpose", 50, str(tmp_path / "a"))
    text = Path(with_markers.plot_paths[0]).read_text()
    for label in ("A1", "A2", "B1", "B2"):
        assert label in text
    assert with_markers.summary["switch_report"] is not None

    plain = reproduce_figure("fig3", "p_transpose", 50, str(tmp_path / "b"))
    assert "A1" not in Path(plain.plot_paths[0]).read_text()
    assert plain.summary["switch_report"] is None


def test_reproduce_figure_rejects_unknown_id(tmp_path):
    with pytest.raises(ConfigError, match="fig"):
        reproduce_figure("fig9", "p_transpose", 50, str(tmp_path))
