"""Finite-horizon lifted form of a sampled plant.

Stacking N steps of the discrete recursion gives one matrix equation
y = P u + Abar x0 where P is lower-triangular Toeplitz in the Markov
parameters and Abar maps the initial state into the free response. Deleting
leading rows of that equation turns the unbounded exact inverse of a plant
with sampled zeros outside the unit circle into a well-conditioned
pseudoinverse problem.
"""

from dataclasses import dataclass
from typing import Optional

import numpy as np
from scipy.linalg import toeplitz

from .errors import (
    DegenerateDeletionError,
    DimensionError,
    EmptyHorizonError,
    InvalidParameterError,
    RankDeficiencyError,
)
from .lti import DiscreteStateSpace, _markov_parameters

__all__ = ["Trajectory", "LiftedSystem", "build_lifted", "delete_rows",
           "lifted_output", "pseudo_inverse_input"]

# relative cutoff on singular values when forming the pseudoinverse
PINV_RTOL = 1e-10


@dataclass(frozen=True)
class Trajectory:
    """A sampled signal together with the time step of its first entry.

    Inputs occupy steps 0..N-1 and outputs steps 1..N (1 + d..N after row
    deletion), so carrying start_step around keeps the bookkeeping of the
    deleted problem explicit.
    """

    values: np.ndarray
    start_step: int
    sample_period: float

    def __post_init__(self):
        v = np.asarray(self.values, dtype=float)
        if v.ndim != 1:
            raise DimensionError(f"trajectory values must be 1-D, got {v.ndim}-D")
        if self.start_step < 0:
            raise InvalidParameterError(
                f"start_step must be nonnegative, got {self.start_step}"
            )
        object.__setattr__(self, "values", v)

    def __len__(self):
        return self.values.size

    def times(self):
        """Sample times in seconds."""
        n = self.values.size
        return (self.start_step + np.arange(n)) * self.sample_period


def _wrap_trajectory(values, start_step, sample_period):
    # Bypasses __init__ for vectors that are float and 1-D by construction.
    # The fast-forward kernel wraps two results per call and the validating
    # constructor would cost as much as one of its matrix-vector products.
    t = object.__new__(Trajectory)
    object.__setattr__(t, "values", values)
    object.__setattr__(t, "start_step", start_step)
    object.__setattr__(t, "sample_period", sample_period)
    return t


@dataclass(eq=False)
class LiftedSystem:
    """Lifted input-output model over a fixed horizon.

    Attributes
    ----------
    p_matrix : (N - d, N) ndarray
        Row r holds the convolution weights producing y(r + 1 + d).
    abar_matrix : (N - d, n) ndarray
        Row r equals C Ad^(r + 1 + d), the free response map.
    horizon : int
        Number of input steps N.
    deleted_rows : int
        Leading output rows removed (d).
    sample_period : float
    source : DiscreteStateSpace
    """

    p_matrix: np.ndarray
    abar_matrix: np.ndarray
    horizon: int
    deleted_rows: int
    sample_period: float
    source: DiscreteStateSpace

    @property
    def row_count(self):
        return self.horizon - self.deleted_rows


def build_lifted(dss, horizon):
    """Assemble the full (undeleted) lifted system over `horizon` steps.

    Parameters
    ----------
    dss : DiscreteStateSpace
    horizon : int
        Number of time steps N, at least 1.

    Returns
    -------
    LiftedSystem
    """
    if horizon < 1:
        raise EmptyHorizonError(f"horizon must be at least 1, got {horizon}")
    n = int(horizon)
    mk = _markov_parameters(dss, n)
    first_row = np.zeros(n)
    first_row[0] = mk[0]
    p = toeplitz(mk, first_row)
    abar = np.empty((n, dss.order))
    row = dss.c_vector[0] @ dss.ad_matrix
    for k in range(n):
        abar[k] = row
        row = row @ dss.ad_matrix
    return LiftedSystem(p, abar, n, 0, dss.sample_period, dss)


def delete_rows(ls, d):
    """Drop the d leading rows of the lifted equation.

    The input dimension is unchanged; only outputs from step 1 + d onward
    are retained. The original system is not modified.
    """
    if ls.deleted_rows != 0:
        raise InvalidParameterError(
            "rows have already been deleted from this system"
        )
    if d < 0:
        raise InvalidParameterError(f"deleted row count must be >= 0, got {d}")
    if d >= ls.horizon:
        raise DegenerateDeletionError(
            f"cannot delete {d} rows from a {ls.horizon}-step system"
        )
    d = int(d)
    return LiftedSystem(
        ls.p_matrix[d:].copy(),
        ls.abar_matrix[d:].copy(),
        ls.horizon,
        d,
        ls.sample_period,
        ls.source,
    )


def lifted_output(ls, input_trajectory, initial_state=None):
    """Apply an input over the full horizon and return the (deleted) output.

    Parameters
    ----------
    ls : LiftedSystem
    input_trajectory : Trajectory
        Length must equal the horizon N regardless of deleted rows.
    initial_state : array_like, optional
        Defaults to the origin.

    Returns
    -------
    Trajectory
        Output samples for steps 1 + d .. N.
    """
    u = input_trajectory.values
    if u.size != ls.horizon:
        raise DimensionError(
            f"input length {u.size} does not match horizon {ls.horizon}"
        )
    y = ls.p_matrix @ u
    if initial_state is not None:
        x0 = np.asarray(initial_state, dtype=float).ravel()
        if x0.size != ls.abar_matrix.shape[1]:
            raise DimensionError(
                f"initial_state has {x0.size} entries, system order is "
                f"{ls.abar_matrix.shape[1]}"
            )
        if np.any(x0):
            y = y + ls.abar_matrix @ x0
    return Trajectory(y, 1 + ls.deleted_rows, ls.sample_period)


def pseudo_inverse_input(ls_deleted, desired, initial_state=None):
    """Minimum-norm input reproducing the desired (deleted) output.

    Solves u = P_D^+ (y*_D - Abar_D x0) through the singular value
    decomposition. P_D must have full row rank at the relative tolerance
    PINV_RTOL; with enough rows deleted to cover every zero outside the unit
    circle this is the bounded stable-inverse input.

    Returns
    -------
    Trajectory
        Input over steps 0..N-1.

    Raises
    ------
    RankDeficiencyError
        If the numerical row rank of P_D falls short.
    """
    if len(desired) != ls_deleted.row_count:
        raise DimensionError(
            f"desired output has {len(desired)} entries, deleted system "
            f"has {ls_deleted.row_count} rows"
        )
    rhs = desired.values
    if initial_state is not None:
        x0 = np.asarray(initial_state, dtype=float).ravel()
        if x0.size != ls_deleted.abar_matrix.shape[1]:
            raise DimensionError(
                f"initial_state has {x0.size} entries, system order is "
                f"{ls_deleted.abar_matrix.shape[1]}"
            )
        rhs = rhs - ls_deleted.abar_matrix @ x0
    u_mat, sigma, vt_mat = np.linalg.svd(ls_deleted.p_matrix, full_matrices=False)
    rank = int(np.count_nonzero(sigma > PINV_RTOL * sigma[0]))
    if rank < ls_deleted.row_count:
        raise RankDeficiencyError(
            f"lifted matrix has numerical row rank {rank} of "
            f"{ls_deleted.row_count}; delete more rows or shorten the horizon",
            numerical_rank=rank,
        )
    u = vt_mat.T @ ((u_mat.T @ rhs) / sigma)
    return Trajectory(u, 0, ls_deleted.sample_period)
