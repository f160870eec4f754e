import math

import numpy as np
import pytest
from hypothesis import settings

from liftedilc import (
    PlantParams,
    Trajectory,
    build_lifted,
    continuous_plant,
    delete_rows,
    discretize_zoh,
)

# timing variance from BLAS warmup makes per-example deadlines meaningless
settings.register_profile("suite", deadline=None, max_examples=40)
settings.load_profile("suite")

SAMPLE_PERIOD = 0.01
HORIZON = 100


def target_values(steps, angular_frequency):
    t = np.asarray(steps, dtype=float) * SAMPLE_PERIOD
    return math.pi * (1.0 - np.cos(angular_frequency * t)) ** 2


def _build_pair(kind):
    if kind == "second_order":
        model_params = PlantParams(0.5, 37.0)
        world_params = PlantParams(0.3, 37.0)
        frequency, deleted = 20.0 * math.pi, 0
    else:
        model_params = PlantParams(0.5, 37.0, 8.8)
        world_params = PlantParams(0.5, 44.4, 8.8)
        frequency, deleted = 10.0 * math.pi, 1
    model = build_lifted(
        discretize_zoh(continuous_plant(kind, model_params), SAMPLE_PERIOD), HORIZON
    )
    world = build_lifted(
        discretize_zoh(continuous_plant(kind, world_params), SAMPLE_PERIOD), HORIZON
    )
    if deleted:
        model = delete_rows(model, deleted)
        world = delete_rows(world, deleted)
    desired = Trajectory(
        target_values(np.arange(1 + deleted, HORIZON + 1), frequency),
        1 + deleted,
        SAMPLE_PERIOD,
    )
    u0 = Trajectory(
        target_values(np.arange(1, HORIZON + 1), frequency), 0, SAMPLE_PERIOD
    )
    return world, model, u0, desired


@pytest.fixture(scope="session")
def second_order_pair():
    """(world, model, u0, desired) for the second-order example."""
    return _build_pair("second_order")


@pytest.fixture(scope="session")
def third_order_pair():
    """(world, model, u0, desired) for the third-order example, one row deleted."""
    return _build_pair("third_order")


def explicit_iterates(model, l_matrix, u0_values, desired_values, count):
    """Independent reference loop: list of (u_j, e_j) arrays for j = 0..count."""
    u = np.array(u0_values, dtype=float)
    e = desired_values - model.p_matrix @ u
    history = [(u.copy(), e.copy())]
    for _ in range(count):
        u = u + l_matrix @ e
        e = desired_values - model.p_matrix @ u
        history.append((u.copy(), e.copy()))
    return history


def random_stable_lifted(rng, max_order=4, max_steps=30):
    """A lifted system around a random stable discrete plant."""
    from liftedilc import DiscreteStateSpace

    order = int(rng.integers(1, max_order + 1))
    steps = int(rng.integers(3, max_steps + 1))
    a = rng.standard_normal((order, order))
    radius = float(np.max(np.abs(np.linalg.eigvals(a))))
    a *= rng.uniform(0.2, 0.9) / max(radius, 1e-3)
    dss = DiscreteStateSpace(
        a, rng.standard_normal((order, 1)), rng.standard_normal((1, order)),
        SAMPLE_PERIOD,
    )
    return build_lifted(dss, steps), dss


MINIMAL_SECOND_ORDER = """\
system.kind = second_order
model.damping_ratio = 0.5
model.natural_frequency = 37.0
world.damping_ratio = 0.3
world.natural_frequency = 37.0
discretization.sample_period = 0.01
lifted.horizon = 100
trajectory.amplitude_coefficient = pi
trajectory.angular_frequency_coefficient = 20*pi
trajectory.exponent = 2.0
law.kind = p_transpose
"""

MINIMAL_THIRD_ORDER = """\
system.kind = third_order
model.damping_ratio = 0.5
model.natural_frequency = 37.0
model.real_pole = 8.8
world.damping_ratio = 0.5
world.natural_frequency = 44.4
world.real_pole = 8.8
discretization.sample_period = 0.01
lifted.horizon = 100
trajectory.amplitude_coefficient = pi
trajectory.angular_frequency_coefficient = 10*pi
trajectory.exponent = 2.0
law.kind = p_transpose
"""


@pytest.fixture
def write_cfg(tmp_path):
    """Write a config file from base text plus key overrides; returns the path."""

    def make(overrides=None, base=MINIMAL_SECOND_ORDER, name="test.cfg"):
        lines = [line for line in base.splitlines() if line.strip()]
        keyed = {line.split("=")[0].strip(): line for line in lines}
        for key, value in (overrides or {}).items():
            if value is None:
                keyed.pop(key, None)
            else:
                keyed[key] = f"{key} = {value}"
        path = tmp_path / name
        path.write_text("\n".join(keyed.values()) + "\n")
        return path

    return make
