"""When to stop iterating on the model and move to the hardware.

Around a candidate iteration n the advisor computes four RMS values: the
model error at n and n+1 (one more model update) and the world error for the
same input at n and n+1 (one learning update against the world). Comparing
the two one-iteration improvements tells whether the hardware is still
learning faster than the model predicts. Only two world applications are
consumed, which is the entire cost of asking.
"""

import math
from dataclasses import dataclass

import numpy as np

from .engine import fast_forward
from .errors import EmptyInputError, InvalidParameterError, UndefinedDbError
from .laws import build_gain, update_input
from .lifted import Trajectory, lifted_output

__all__ = ["SwitchReport", "rms", "to_db", "evaluate_switch"]


@dataclass(frozen=True)
class SwitchReport:
    """The four RMS values around a candidate switch point, with slopes.

    model_slope and world_slope are the one-iteration RMS improvements in
    raw units; jump is the world-minus-model gap at the candidate. The
    recommendation is world_slope >= slope_factor * model_slope.
    """

    candidate_n: int
    r_model_n: float
    r_model_n1: float
    r_world_n: float
    r_world_n1: float
    model_slope: float
    world_slope: float
    jump: float
    recommend_switch: bool
    slope_factor: float


def rms(error):
    """Root mean square of a trajectory, sqrt(e'e / len)."""
    if len(error) == 0:
        raise EmptyInputError("cannot take the RMS of an empty trajectory")
    v = error.values
    return math.sqrt(float(np.dot(v, v)) / v.size)


def to_db(rms_value):
    """20 log10 of an RMS value; only defined for positive values."""
    if not rms_value > 0:
        raise UndefinedDbError(
            f"dB conversion undefined for non-positive value {rms_value}"
        )
    return 20.0 * math.log10(rms_value)


def evaluate_switch(world, model, law, u0, x0, candidate_n, slope_factor, desired):
    """Assess switching from model to world iterations at candidate_n.

    Fast-forwards the model phase to the candidate (no iterating), takes one
    explicit model iteration for the model slope, applies the candidate
    input to the world once for the jump, and runs one world learning
    iteration for the world slope.

    Parameters
    ----------
    world, model : LiftedSystem
    law : LearningLaw
    u0 : Trajectory
    x0 : array_like or None
    candidate_n : int
        Candidate number of model iterations before switching, >= 1.
    slope_factor : float
        Threshold ratio; switching is recommended when the world improves
        at least slope_factor times as fast as the model.
    desired : Trajectory

    Returns
    -------
    SwitchReport
    """
    if candidate_n < 1:
        raise InvalidParameterError(
            f"candidate_n must be at least 1, got {candidate_n}"
        )
    gain = build_gain(law, model)
    y0 = lifted_output(model, u0, x0)
    e0 = Trajectory(desired.values - y0.values, y0.start_step, y0.sample_period)

    u_n, e_model_n = fast_forward(model, law, u0, e0, candidate_n)
    r_model_n = rms(e_model_n)

    u_next = update_input(u_n, gain, e_model_n)
    y = lifted_output(model, u_next, x0)
    r_model_n1 = rms(Trajectory(desired.values - y.values, y.start_step, y.sample_period))

    y = lifted_output(world, u_n, x0)
    e_world_n = Trajectory(desired.values - y.values, y.start_step, y.sample_period)
    r_world_n = rms(e_world_n)

    u_world_next = update_input(u_n, gain, e_world_n)
    y = lifted_output(world, u_world_next, x0)
    r_world_n1 = rms(Trajectory(desired.values - y.values, y.start_step, y.sample_period))

    model_slope = r_model_n - r_model_n1
    world_slope = r_world_n - r_world_n1
    return SwitchReport(
        candidate_n=int(candidate_n),
        r_model_n=r_model_n,
        r_model_n1=r_model_n1,
        r_world_n=r_world_n,
        r_world_n1=r_world_n1,
        model_slope=model_slope,
        world_slope=world_slope,
        jump=r_world_n - r_model_n,
        recommend_switch=world_slope >= slope_factor * model_slope,
        slope_factor=float(slope_factor),
    )
