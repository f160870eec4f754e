"""Iteration engine: explicit learning runs and the closed-form fast-forward.

For any of the three laws the model iteration matrix W = I - P_M L_M is
symmetric, so W = M diag(lambda) M^T with orthogonal M. In that eigenbasis n
learning updates collapse to a geometric sum: the input and error after n
model iterations are

    u_n = u_0 + L M S_n M^T e_0,   S_n = diag(sum of lambda^m, m = 0..n-1)
    e_n = M diag(lambda^n) M^T e_0

which costs three matrix-vector products instead of n full iterations. The
decomposition and the products derived from it are cached per (model, law)
pair; cached operators are immutable, so concurrent runs may share them.

`run_iterations` is the explicit counterpart (it applies every update to the
plant and records the full history) and doubles as the benchmark reference
for the fast path.
"""

import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Optional

import numpy as np

from .errors import DimensionError, DivergenceError, InvalidParameterError, NotSymmetricError
from .laws import GainMatrix, LearningLaw, build_gain, iteration_matrix, update_input
from .lifted import LiftedSystem, Trajectory, _wrap_trajectory, lifted_output

__all__ = [
    "IterationRecord",
    "IterationHistory",
    "SpectralDecomposition",
    "run_iterations",
    "run_hybrid",
    "spectral_decompose",
    "geometric_sum",
    "fast_forward",
]

PHASES = ("model", "world")

# eigenvalues this close to 1 make the closed-form geometric sum cancel
# catastrophically; fall back to direct summation
NEAR_ONE = 1e-9
# and this close they are treated as exactly 1
UNIT_TOL = 1e-12


@dataclass(frozen=True)
class IterationRecord:
    """State of the learning process at one iteration."""

    iteration: int
    phase: str
    input: Trajectory
    error: Trajectory
    rms: float
    rms_db: Optional[float]


@dataclass(eq=False)
class IterationHistory:
    """Ordered per-iteration records of one run, plus the law that drove it.

    switch_index is the record index of the first world-phase record in a
    hybrid run, None otherwise.
    """

    records: list
    law: LearningLaw
    switch_index: Optional[int] = None


@dataclass(eq=False)
class SpectralDecomposition:
    """Symmetric eigendecomposition W = M diag(eigenvalues) M^T."""

    eigenvector_matrix: np.ndarray
    eigenvalues: np.ndarray
    source: np.ndarray


def _rms(values):
    return math.sqrt(float(np.dot(values, values)) / values.size)


def _rms_db(rms):
    return 20.0 * math.log10(rms) if rms > 0 else None


def spectral_decompose(iter_matrix):
    """Eigendecomposition of a symmetric iteration matrix.

    Parameters
    ----------
    iter_matrix : (m, m) ndarray
        Must be symmetric within 1e-8; model-built iteration matrices are,
        world ones generally are not.

    Returns
    -------
    SpectralDecomposition

    Raises
    ------
    NotSymmetricError
        If the asymmetry exceeds tolerance.
    """
    w = np.asarray(iter_matrix, dtype=float)
    if w.ndim != 2 or w.shape[0] != w.shape[1]:
        raise DimensionError(f"iteration matrix must be square, got {w.shape}")
    asym = float(np.max(np.abs(w - w.T))) if w.size else 0.0
    if asym > 1e-8:
        raise NotSymmetricError(
            f"matrix asymmetry {asym:.3e} exceeds 1e-8; the symmetric "
            "decomposition only applies to model-built iteration matrices"
        )
    lam, m = np.linalg.eigh((w + w.T) / 2.0)
    return SpectralDecomposition(m, lam, w)


def geometric_sum(eigenvalues, power_count):
    """Per-eigenvalue partial sums S_i = sum of lambda_i^m for m = 0..power_count.

    Uses the closed form (1 - lambda^(power_count+1)) / (1 - lambda) except
    near lambda = 1, where direct summation avoids cancellation; within
    UNIT_TOL of 1 the limit value power_count + 1 is returned.

    Raises
    ------
    DivergenceError
        If any |lambda_i| >= 1 + 1e-12.
    """
    lam = np.atleast_1d(np.asarray(eigenvalues, dtype=float))
    if power_count < 0 or int(power_count) != power_count:
        raise InvalidParameterError(
            f"power_count must be a nonnegative integer, got {power_count}"
        )
    count = int(power_count)
    worst = float(np.max(np.abs(lam))) if lam.size else 0.0
    if worst >= 1.0 + 1e-12:
        raise DivergenceError(
            f"eigenvalue magnitude {worst:.12g} is at or beyond 1; the "
            "geometric sum diverges"
        )
    with np.errstate(divide="ignore", invalid="ignore"):
        out = (1.0 - lam ** (count + 1)) / (1.0 - lam)
    near = np.abs(1.0 - lam) < NEAR_ONE
    for i in np.nonzero(near)[0]:
        if abs(1.0 - lam[i]) < UNIT_TOL:
            out[i] = float(count + 1)
        else:
            out[i] = _direct_sum(lam[i], count + 1)
    return out


def _direct_sum(lam, terms):
    total = 0.0
    power = 1.0
    for _ in range(terms):
        total += power
        power *= lam
    return total


@dataclass(eq=False)
class _FastOperator:
    """Precomputed products for the fast-forward kernel, one per (model, law).

    Expanding the geometric sum, with G = 1/(1 - lambda) elementwise,

        u_n = u_0 + (L M diag(G)) (1 - lambda^n) (M^T e_0)
        e_n = M lambda^n (M^T e_0)

    so one call needs three matrix-vector products and a handful of
    elementwise operations. The log_abs/sign split forms lambda^n by exp,
    which is faster than a general power for the negative eigenvalues the
    p-transpose law produces. Eigenvalues within NEAR_ONE of 1 have G zeroed
    in lm_scaled; their rank-one contribution to u_n is restored by direct
    summation over lm_columns.
    """

    decomposition: SpectralDecomposition
    gain: GainMatrix
    lam: np.ndarray
    mt_c: np.ndarray        # M^T
    lm_scaled: np.ndarray   # L M diag(G)
    m_c: np.ndarray         # M
    lm_columns: np.ndarray  # L M, used only for near-one eigenvalues
    log_abs_lam: np.ndarray
    sign_lam: np.ndarray
    near_one_idx: tuple
    max_abs_lam: float


@lru_cache(maxsize=16)
def _fast_operator(model, law):
    gain = build_gain(law, model)
    dec = spectral_decompose(iteration_matrix(model, gain))
    lam = dec.eigenvalues
    m = dec.eigenvector_matrix
    abs_lam = np.abs(lam)
    with np.errstate(divide="ignore"):
        log_abs = np.where(abs_lam > 0.0, np.log(np.where(abs_lam > 0.0, abs_lam, 1.0)), -np.inf)
    near = np.abs(1.0 - lam) < NEAR_ONE
    inv_one_minus = np.where(near, 0.0, 1.0 / np.where(near, 1.0, 1.0 - lam))
    lm = gain.l_matrix @ m
    return _FastOperator(
        decomposition=dec,
        gain=gain,
        lam=lam,
        mt_c=np.ascontiguousarray(m.T),
        lm_scaled=np.ascontiguousarray(lm * inv_one_minus),
        m_c=np.ascontiguousarray(m),
        lm_columns=lm,
        log_abs_lam=log_abs,
        sign_lam=np.sign(lam),
        near_one_idx=tuple(np.nonzero(near)[0]),
        max_abs_lam=float(np.max(abs_lam)) if lam.size else 0.0,
    )


def fast_forward(model, law, u0, e0, n):
    """Input and error after n model iterations, without iterating.

    The result is defined to equal exactly what n explicit learning updates
    against the model produce, to floating-point accuracy.

    Parameters
    ----------
    model : LiftedSystem
    law : LearningLaw
    u0 : Trajectory
        Initial input, length N.
    e0 : Trajectory
        Model error of the initial run, length N - d.
    n : int
        Number of iterations to skip ahead, >= 0.

    Returns
    -------
    (Trajectory, Trajectory)
        (u_n, e_n).

    Raises
    ------
    DivergenceError
        If any eigenvalue of the model iteration matrix lies outside (-1, 1).
    """
    if n < 0 or int(n) != n:
        raise InvalidParameterError(f"n must be a nonnegative integer, got {n}")
    op = _fast_operator(model, law)
    if op.max_abs_lam >= 1.0:
        raise DivergenceError(
            f"model iteration matrix has eigenvalue magnitude "
            f"{op.max_abs_lam:.12g}, outside (-1, 1); iterations diverge"
        )
    u0v = u0.values
    e0v = e0.values
    if u0v.size != model.horizon:
        raise DimensionError(
            f"u0 length {u0v.size} does not match horizon {model.horizon}"
        )
    if e0v.size != model.row_count:
        raise DimensionError(
            f"e0 length {e0v.size} does not match row count {model.row_count}"
        )
    if n == 0:
        return (
            _wrap_trajectory(u0v.copy(), u0.start_step, u0.sample_period),
            _wrap_trajectory(e0v.copy(), e0.start_step, e0.sample_period),
        )
    ep0 = np.dot(op.mt_c, e0v)
    lam_n = np.multiply(op.log_abs_lam, float(n))
    np.exp(lam_n, out=lam_n)
    if n % 2:
        np.multiply(lam_n, op.sign_lam, out=lam_n)
    np.multiply(lam_n, ep0, out=lam_n)      # lambda^n (M^T e_0)
    shrunk = np.subtract(ep0, lam_n)        # (1 - lambda^n) (M^T e_0)
    u_vals = np.dot(op.lm_scaled, shrunk)
    np.add(u_vals, u0v, out=u_vals)
    for i in op.near_one_idx:
        # same series as geometric_sum but with exclusive upper bound n-1
        s = float(n) if abs(1.0 - op.lam[i]) < UNIT_TOL else _direct_sum(op.lam[i], n)
        u_vals += (s * ep0[i]) * op.lm_columns[:, i]
    e_vals = np.dot(op.m_c, lam_n)
    return (
        _wrap_trajectory(u_vals, u0.start_step, u0.sample_period),
        _wrap_trajectory(e_vals, e0.start_step, e0.sample_period),
    )


def _check_run_dimensions(applied, model, u0, desired):
    if applied.horizon != model.horizon or applied.deleted_rows != model.deleted_rows:
        raise DimensionError(
            "applied plant and model must share horizon and deleted rows: "
            f"({applied.horizon}, {applied.deleted_rows}) vs "
            f"({model.horizon}, {model.deleted_rows})"
        )
    if len(u0) != model.horizon:
        raise DimensionError(
            f"u0 length {len(u0)} does not match horizon {model.horizon}"
        )
    if len(desired) != model.row_count:
        raise DimensionError(
            f"desired length {len(desired)} does not match row count "
            f"{model.row_count}"
        )


def _measure(applied, u, x0, desired):
    y = lifted_output(applied, u, x0)
    return Trajectory(desired.values - y.values, y.start_step, y.sample_period)


def run_iterations(world, model, law, u0, x0, count, phase, desired):
    """Explicit learning run: apply, measure, update, `count` times.

    The gain matrix always comes from the model. In the model phase every
    input is applied to the model itself; in the world phase each update is
    applied to the world plant and the true error is measured. Record 0 is
    the initial run with u0, so the history holds count + 1 records.

    Parameters
    ----------
    world, model : LiftedSystem
    law : LearningLaw
    u0 : Trajectory
    x0 : array_like or None
        Initial plant state, None meaning the origin.
    count : int
    phase : str
        "model" or "world".
    desired : Trajectory
        Target output, aligned with the (deleted) output rows.

    Returns
    -------
    IterationHistory
    """
    if phase not in PHASES:
        raise InvalidParameterError(f"phase must be one of {PHASES}, got {phase!r}")
    if count < 0:
        raise InvalidParameterError(f"count must be nonnegative, got {count}")
    applied = model if phase == "model" else world
    _check_run_dimensions(applied, model, u0, desired)
    gain = build_gain(law, model)
    records = []
    u = u0
    for j in range(count + 1):
        e = _measure(applied, u, x0, desired)
        r = _rms(e.values)
        records.append(IterationRecord(j, phase, u, e, r, _rms_db(r)))
        if j < count:
            u = update_input(u, gain, e)
    return IterationHistory(records, law)


def run_hybrid(world, model, law, u0, x0, model_count, world_count, desired):
    """Model iterations fast-forwarded, then a switch to world iterations.

    Produces model_count model-phase records (indices 0..model_count-1,
    computed through the fast-forward formulas), then applies the final
    model-phase input u_{M,model_count} to the world as the first world
    record, then runs world_count learning iterations against the world.
    switch_index marks that first world record.
    """
    if model_count < 0 or world_count < 0:
        raise InvalidParameterError(
            f"iteration counts must be nonnegative, got {model_count}, {world_count}"
        )
    _check_run_dimensions(world, model, u0, desired)
    gain = build_gain(law, model)
    e0 = _measure(model, u0, x0, desired)
    records = []
    for j in range(model_count):
        u_j, e_j = fast_forward(model, law, u0, e0, j)
        r = _rms(e_j.values)
        records.append(IterationRecord(j, "model", u_j, e_j, r, _rms_db(r)))
    u, _ = fast_forward(model, law, u0, e0, model_count)
    for i in range(world_count + 1):
        e = _measure(world, u, x0, desired)
        r = _rms(e.values)
        records.append(
            IterationRecord(model_count + i, "world", u, e, r, _rms_db(r))
        )
        if i < world_count:
            u = update_input(u, gain, e)
    return IterationHistory(records, law, switch_index=model_count)
