import math
from importlib import resources

import pytest
from hypothesis import given, strategies as st

from liftedilc import (
    ConfigError,
    ExperimentConfig,
    PlantParams,
    TrajectoryShape,
    load_config,
    write_config,
)

from conftest import MINIMAL_THIRD_ORDER


def load_preset(name):
    ref = resources.files("liftedilc").joinpath(f"presets/{name}")
    with resources.as_file(ref) as path:
        return load_config(path)


def test_second_order_preset_loads():
    cfg = load_preset("second_order_fig3.cfg")
    assert cfg.system_kind == "second_order"
    assert cfg.model_params == PlantParams(0.5, 37.0)
    assert cfg.world_params == PlantParams(0.3, 37.0)
    assert cfg.deleted_rows == 0  # 'auto': no sampled zero leaves the unit disc
    assert cfg.trajectory.angular_frequency_coefficient == pytest.approx(
        20.0 * math.pi
    )
    assert cfg.mode == "hybrid"
    assert cfg.switch_candidates == (25, 50, 100)


def test_third_order_preset_loads():
    cfg = load_preset("third_order_fig5.cfg")
    assert cfg.system_kind == "third_order"
    assert cfg.model_params.real_pole == 8.8
    assert cfg.world_params.natural_frequency == 44.4
    assert cfg.deleted_rows == 1  # 'auto': one sampled zero outside the unit disc
    assert cfg.trajectory.angular_frequency_coefficient == pytest.approx(
        10.0 * math.pi
    )
    assert cfg.model_count == 100


def test_defaults_fill_every_optional_key(write_cfg):
    cfg = load_config(write_cfg())
    assert cfg.gain == 1.0
    assert cfg.initial_input == "desired_output"
    assert cfg.mode == "hybrid"
    assert cfg.model_count == 50
    assert cfg.world_count == 50
    assert cfg.switch_candidates == ()
    assert cfg.slope_factor == 1.0
    assert cfg.csv_path == "results.csv"
    assert cfg.plot_path is None
    assert cfg.deleted_rows == 0


def test_pi_spelling_in_float_values(write_cfg):
    cfg = load_config(
        write_cfg({"trajectory.amplitude_coefficient": "2.5*pi"})
    )
    assert cfg.trajectory.amplitude_coefficient == pytest.approx(2.5 * math.pi)
    assert cfg.trajectory.angular_frequency_coefficient == pytest.approx(
        20.0 * math.pi
    )
    base = load_config(write_cfg())
    assert base.trajectory.amplitude_coefficient == math.pi


@pytest.mark.parametrize(
    "overrides, fragment",
    [
        ({"a.typo": "1"}, "unknown configuration key"),
        ({"law.kind": None}, "missing required key"),
        ({"model.damping_ratio": "-0.5"}, "must be positive"),
        ({"discretization.sample_period": "0"}, "must be positive"),
        ({"law.kind": "q_transpose"}, "law.kind"),
        ({"law.gain": "0"}, "must be positive"),
        ({"run.model_count": "-3"}, "must be >= 0"),
        ({"switch.candidates": "10,0"}, "must be >= 1"),
        ({"lifted.deleted_rows": "100"}, "0 <= d < horizon"),
        ({"lifted.horizon": "0"}, "at least 1"),
        ({"trajectory.exponent": "two"}, "cannot parse"),
        ({"run.mode": "simulate"}, "run.mode"),
        ({"model.real_pole": "8.8"}, "not applicable"),
        ({"run.initial_input": "missing_file.csv"}, "existing file"),
    ],
)
def test_invalid_values_are_rejected(write_cfg, overrides, fragment):
    path = write_cfg(overrides)
    with pytest.raises(ConfigError, match=fragment):
        load_config(path)


def test_third_order_requires_real_poles(write_cfg):
    path = write_cfg({"model.real_pole": None}, base=MINIMAL_THIRD_ORDER)
    with pytest.raises(ConfigError, match="real_pole"):
        load_config(path)


def test_initial_input_may_name_an_existing_file(write_cfg, tmp_path):
    source = tmp_path / "warm_start.txt"
    source.write_text("0.0\n" * 100)
    cfg = load_config(write_cfg({"run.initial_input": str(source)}))
    assert cfg.initial_input == str(source)


def test_malformed_lines_report_positions(tmp_path):
    bad = tmp_path / "bad.cfg"
    bad.write_text("# fine\nsystem.kind second_order\n")
    with pytest.raises(ConfigError, match=r"bad\.cfg:2"):
        load_config(bad)
    dup = tmp_path / "dup.cfg"
    dup.write_text("law.kind = p_transpose\nlaw.kind = p_transpose\n")
    with pytest.raises(ConfigError, match="duplicate"):
        load_config(dup)
    with pytest.raises(ConfigError, match="cannot read"):
        load_config(tmp_path / "absent.cfg")


SAFE_NAME = st.text(
    alphabet="abcdefghijklmnopqrstuvwxyz0123456789_-.", min_size=1, max_size=12
)
POSITIVE = st.floats(1e-6, 1e6, allow_nan=False, allow_infinity=False)


@st.composite
def experiment_configs(draw):
    kind = draw(st.sampled_from(("second_order", "third_order")))
    pole = (lambda: draw(POSITIVE)) if kind == "third_order" else (lambda: None)
    horizon = draw(st.integers(1, 300))
    return ExperimentConfig(
        system_kind=kind,
        model_params=PlantParams(draw(POSITIVE), draw(POSITIVE), pole()),
        world_params=PlantParams(draw(POSITIVE), draw(POSITIVE), pole()),
        sample_period=draw(POSITIVE),
        horizon=horizon,
        deleted_rows=draw(st.integers(0, horizon - 1)),
        trajectory=TrajectoryShape(
            draw(POSITIVE), draw(POSITIVE), draw(st.floats(-8, 8))
        ),
        law_kind=draw(st.sampled_from(("p_transpose", "partial_isometry",
                                       "norm_optimal"))),
        gain=draw(POSITIVE),
        initial_input=draw(st.sampled_from(("zero", "desired_output"))),
        mode=draw(st.sampled_from(("model", "world", "hybrid"))),
        model_count=draw(st.integers(0, 500)),
        world_count=draw(st.integers(0, 500)),
        switch_candidates=tuple(
            draw(st.lists(st.integers(1, 999), max_size=4))
        ),
        slope_factor=draw(POSITIVE),
        csv_path=draw(SAFE_NAME),
        plot_path=draw(st.none() | SAFE_NAME),
    )


@given(experiment_configs())
def test_write_config_round_trips_exactly(tmp_path_factory, config):
    path = tmp_path_factory.mktemp("cfg") / "round_trip.cfg"
    write_config(config, path)
    assert load_config(path) == config
