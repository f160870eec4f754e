"""Configuration-driven experiments and the bundled figure layouts.

Everything here orchestrates the numerical modules: build the plant pair
from a configuration, run the requested learning mode, and write the results
as CSV (one row per iteration) plus an optional SVG chart. The CSV column
`hardware_iterations_consumed` counts cumulative world applications, which
is the quantity the fast-forward scheme is designed to save.
"""

import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Dict, List, Optional

import numpy as np

from .config import ExperimentConfig, PlantParams, TrajectoryShape, continuous_plant
from .engine import run_hybrid, run_iterations
from .errors import ConfigError
from .laws import LearningLaw
from .lifted import LiftedSystem, Trajectory, build_lifted, delete_rows
from .lti import discretize_zoh, sampled_zeros
from .switching import evaluate_switch, to_db
from .svg import Marker, Series, render_line_chart

__all__ = [
    "RunArtifacts",
    "CSV_HEADER",
    "build_lifted_pair",
    "build_desired_trajectory",
    "build_initial_input",
    "run_experiment",
    "reproduce_figure",
    "FIGURE_IDS",
]

CSV_HEADER = "iteration,phase,rms,rms_db,hardware_iterations_consumed"

CURVE_COLORS = {"model": "#000000", "world": "#1f5fbf", "hybrid": "#c62828"}

# Figure layouts: the two bundled plant pairs, each in a plain comparison
# variant and a variant annotated with the four switch-decision markers.
FIGURE_IDS = ("fig2", "fig3", "fig4", "fig5")
_FIGURE_FAMILY = {
    "fig2": ("second_order", True),
    "fig3": ("second_order", False),
    "fig4": ("third_order", True),
    "fig5": ("third_order", False),
}
_WORLD_SEGMENT = 50


@dataclass
class RunArtifacts:
    """What an experiment run left on disk, plus its summary values."""

    csv_path: str
    summary: dict
    plot_paths: List[str] = field(default_factory=list)
    curve_csv_paths: Optional[Dict[str, str]] = None


def build_lifted_pair(config):
    """Discretize and lift the (world, model) plant pair of a configuration.

    Both systems get the same leading-row deletion so their error
    trajectories stay aligned.

    Returns
    -------
    (LiftedSystem, LiftedSystem)
        (world, model), rows deleted per the configuration.
    """
    model_dss = discretize_zoh(
        continuous_plant(config.system_kind, config.model_params),
        config.sample_period,
    )
    world_dss = discretize_zoh(
        continuous_plant(config.system_kind, config.world_params),
        config.sample_period,
    )
    model = build_lifted(model_dss, config.horizon)
    world = build_lifted(world_dss, config.horizon)
    if config.deleted_rows > 0:
        model = delete_rows(model, config.deleted_rows)
        world = delete_rows(world, config.deleted_rows)
    return world, model


def unhandled_zero_warning(config):
    """Warning text when deleted_rows leaves unstable zeros uncovered, else None."""
    dss = discretize_zoh(
        continuous_plant(config.system_kind, config.model_params),
        config.sample_period,
    )
    outside = [z for z in sampled_zeros(dss) if abs(z) > 1.0]
    if len(outside) > config.deleted_rows:
        return (
            f"model has {len(outside)} sampled zero(s) outside the unit circle "
            f"but only {config.deleted_rows} deleted row(s); the inverse "
            "problem is effectively unstable"
        )
    return None


def _sample_desired(config, start_step):
    shape = config.trajectory
    steps = np.arange(start_step, config.horizon + 1)
    t = steps * config.sample_period
    values = shape.amplitude_coefficient * (
        1.0 - np.cos(shape.angular_frequency_coefficient * t)
    ) ** shape.exponent
    return Trajectory(values, int(start_step), config.sample_period)


def build_desired_trajectory(config):
    """Desired output sampled over the retained steps 1 + d .. N."""
    return _sample_desired(config, 1 + config.deleted_rows)


def build_initial_input(config):
    """Initial input u0: zeros, the desired output, or a file of N samples."""
    if config.initial_input == "zero":
        return Trajectory(
            np.zeros(config.horizon), 0, config.sample_period
        )
    if config.initial_input == "desired_output":
        full = _sample_desired(config, 1)
        return Trajectory(full.values, 0, config.sample_period)
    try:
        values = np.loadtxt(config.initial_input, dtype=float).ravel()
    except (OSError, ValueError) as exc:
        raise ConfigError(
            f"key 'run.initial_input': cannot read {config.initial_input!r}: {exc}"
        ) from None
    if values.size != config.horizon:
        raise ConfigError(
            f"key 'run.initial_input': file has {values.size} samples, "
            f"horizon is {config.horizon}"
        )
    return Trajectory(values, 0, config.sample_period)


def write_history_csv(history, path):
    """One CSV row per record; floats via repr so output is byte-stable."""
    consumed = 0
    lines = [CSV_HEADER]
    for record in history.records:
        if record.phase == "world":
            consumed += 1
        db = "" if record.rms_db is None else repr(record.rms_db)
        lines.append(
            f"{record.iteration},{record.phase},{record.rms!r},{db},{consumed}"
        )
    Path(path).write_text("\n".join(lines) + "\n")


def _history_series(history, name, color):
    xs, ys = [], []
    for record in history.records:
        if record.rms_db is not None:
            xs.append(float(record.iteration))
            ys.append(record.rms_db)
    return Series(name, xs, ys, color)


def _final_rms_by_phase(history):
    final = {}
    for record in history.records:
        final[record.phase] = record.rms
    return final


def run_experiment(config):
    """Run the configured learning mode and write its artifacts.

    Returns
    -------
    RunArtifacts
        CSV path, summary dictionary (final RMS per phase, switch reports,
        any warnings), and the plot path when one was requested.
    """
    world, model = build_lifted_pair(config)
    desired = build_desired_trajectory(config)
    u0 = build_initial_input(config)
    law = LearningLaw(config.law_kind, config.gain)

    if config.mode == "model":
        history = run_iterations(
            world, model, law, u0, None, config.model_count, "model", desired
        )
    elif config.mode == "world":
        history = run_iterations(
            world, model, law, u0, None, config.world_count, "world", desired
        )
    else:
        history = run_hybrid(
            world, model, law, u0, None, config.model_count,
            config.world_count, desired,
        )

    write_history_csv(history, config.csv_path)

    reports = [
        evaluate_switch(
            world, model, law, u0, None, candidate, config.slope_factor, desired
        )
        for candidate in config.switch_candidates
    ]
    warning = unhandled_zero_warning(config)
    summary = {
        "mode": config.mode,
        "law": config.law_kind,
        "final_rms": _final_rms_by_phase(history),
        "switch_index": history.switch_index,
        "switch_reports": reports,
        "warnings": [warning] if warning else [],
    }

    plot_paths = []
    if config.plot_path:
        series = []
        for phase, color in (("model", "#000000"), ("world", "#c62828")):
            sub = [r for r in history.records if r.phase == phase]
            if sub:
                series.append(
                    Series(
                        phase,
                        [float(r.iteration) for r in sub if r.rms_db is not None],
                        [r.rms_db for r in sub if r.rms_db is not None],
                        color,
                    )
                )
        render_line_chart(
            config.plot_path,
            series,
            f"{config.system_kind} {config.mode} run, {config.law_kind}",
            "iteration",
            "RMS error (dB)",
        )
        plot_paths.append(config.plot_path)
    return RunArtifacts(config.csv_path, summary, plot_paths)


def _figure_config(figure_id, law_kind, switch_n):
    family, _ = _FIGURE_FAMILY[figure_id]
    if family == "second_order":
        model = PlantParams(0.5, 37.0)
        world = PlantParams(0.3, 37.0)
        shape = TrajectoryShape(math.pi, 20.0 * math.pi, 2.0)
        deleted = 0
    else:
        model = PlantParams(0.5, 37.0, 8.8)
        world = PlantParams(0.5, 44.4, 8.8)
        shape = TrajectoryShape(math.pi, 10.0 * math.pi, 2.0)
        deleted = 1
    return ExperimentConfig(
        system_kind=family,
        model_params=model,
        world_params=world,
        sample_period=0.01,
        horizon=100,
        deleted_rows=deleted,
        trajectory=shape,
        law_kind=law_kind,
        gain=1.0,
        initial_input="desired_output",
        mode="hybrid",
        model_count=switch_n,
        world_count=_WORLD_SEGMENT,
        switch_candidates=(switch_n,),
        slope_factor=1.0,
        csv_path="",
        plot_path=None,
    )


def reproduce_figure(figure_id, law_kind, switch_n, output_dir="."):
    """Generate one bundled figure: three aligned curves plus optional markers.

    The three curves share the iteration axis: learning against the model
    only (black), against the world from the start (blue), and the hybrid
    run that fast-forwards the model phase and switches at `switch_n` (red).
    The marker variants (fig2, fig4) annotate the four switch-decision RMS
    values at the switch point.

    Parameters
    ----------
    figure_id : str
        One of fig2..fig5.
    law_kind : str
    switch_n : int
        Model iterations before the switch; the bundled layouts use 50 or 100.
    output_dir : str

    Returns
    -------
    RunArtifacts
        csv_path points at the hybrid curve; curve_csv_paths maps all three.
    """
    if figure_id not in _FIGURE_FAMILY:
        raise ConfigError(
            f"unknown figure id {figure_id!r}; expected one of {FIGURE_IDS}"
        )
    config = _figure_config(figure_id, law_kind, switch_n)
    world, model = build_lifted_pair(config)
    desired = build_desired_trajectory(config)
    u0 = build_initial_input(config)
    law = LearningLaw(law_kind, config.gain)
    total = switch_n + _WORLD_SEGMENT

    histories = {
        "model": run_iterations(world, model, law, u0, None, total, "model", desired),
        "world": run_iterations(world, model, law, u0, None, total, "world", desired),
        "hybrid": run_hybrid(world, model, law, u0, None, switch_n,
                             _WORLD_SEGMENT, desired),
    }

    out = Path(output_dir)
    out.mkdir(parents=True, exist_ok=True)
    stem = f"{figure_id}_{law_kind}_switch{switch_n}"
    curve_paths = {}
    for name, history in histories.items():
        path = out / f"{stem}_{name}.csv"
        write_history_csv(history, path)
        curve_paths[name] = str(path)

    _, with_markers = _FIGURE_FAMILY[figure_id]
    report = None
    markers = []
    if with_markers:
        report = evaluate_switch(
            world, model, law, u0, None, switch_n, config.slope_factor, desired
        )
        markers = [
            Marker("A1", switch_n, to_db(report.r_model_n), "#000000"),
            Marker("A2", switch_n + 1, to_db(report.r_model_n1), "#000000"),
            Marker("B1", switch_n, to_db(report.r_world_n), "#c62828"),
            Marker("B2", switch_n + 1, to_db(report.r_world_n1), "#c62828"),
        ]

    plot_path = out / f"{stem}.svg"
    render_line_chart(
        plot_path,
        [
            _history_series(histories["model"], "model only", CURVE_COLORS["model"]),
            _history_series(histories["world"], "world only", CURVE_COLORS["world"]),
            _history_series(histories["hybrid"], "hybrid", CURVE_COLORS["hybrid"]),
        ],
        f"{figure_id}: {law_kind}, switch at {switch_n}",
        "iteration",
        "RMS error (dB)",
        markers=markers,
    )

    summary = {
        "figure": figure_id,
        "law": law_kind,
        "switch_n": switch_n,
        "final_rms": {name: h.records[-1].rms for name, h in histories.items()},
        "switch_report": report,
    }
    return RunArtifacts(
        csv_path=curve_paths["hybrid"],
        summary=summary,
        plot_paths=[str(plot_path)],
        curve_csv_paths=curve_paths,
    )
