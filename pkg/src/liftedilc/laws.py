"""The three learning laws and convergence metrics of the iteration matrix.

Each law turns the model's lifted matrix into a gain L applied as
u_{j+1} = u_j + L e_j. All three make I - P L symmetric when P is the model
itself, which is what allows the iteration engine to fast-forward the model
phase through a symmetric eigendecomposition.
"""

from dataclasses import dataclass

import numpy as np
import scipy.linalg

from .errors import DimensionError, InvalidParameterError
from .lifted import LiftedSystem, Trajectory

__all__ = [
    "LAW_KINDS",
    "LearningLaw",
    "GainMatrix",
    "StabilityMetrics",
    "build_gain",
    "update_input",
    "iteration_matrix",
    "stability_metrics",
]

LAW_KINDS = ("p_transpose", "partial_isometry", "norm_optimal")


@dataclass(frozen=True)
class LearningLaw:
    """A law kind plus its scalar learning gain phi."""

    kind: str
    gain: float = 1.0

    def __post_init__(self):
        if self.kind not in LAW_KINDS:
            raise InvalidParameterError(
                f"unknown law kind {self.kind!r}; expected one of {LAW_KINDS}"
            )
        if not self.gain > 0:
            raise InvalidParameterError(f"gain must be positive, got {self.gain}")


@dataclass(eq=False)
class GainMatrix:
    """Realized learning gain L, shaped N x (N - d).

    With deleted rows the gain is rectangular: it maps the shortened error
    history back onto the full-length input.
    """

    l_matrix: np.ndarray
    law: LearningLaw
    built_from: LiftedSystem


def build_gain(law, model):
    """Construct the gain matrix of a law from the (possibly deleted) model.

    p_transpose:      L = phi P^T
    partial_isometry: L = phi V U^T with P = U S V^T
    norm_optimal:     L = (phi I + P^T P)^{-1} P^T

    The norm-optimal inverse always exists for phi > 0 since P^T P is
    positive semidefinite.
    """
    p = model.p_matrix
    phi = law.gain
    if law.kind == "p_transpose":
        l_matrix = phi * p.T
    elif law.kind == "partial_isometry":
        u_mat, _, vt_mat = np.linalg.svd(p, full_matrices=False)
        l_matrix = phi * (vt_mat.T @ u_mat.T)
    else:
        gram = p.T @ p
        gram[np.diag_indices_from(gram)] += phi
        l_matrix = scipy.linalg.solve(gram, p.T, assume_a="pos")
    return GainMatrix(l_matrix, law, model)


def update_input(u_j, gain, e_j):
    """One learning update u_{j+1} = u_j + L e_j."""
    l_matrix = gain.l_matrix
    if len(u_j) != l_matrix.shape[0]:
        raise DimensionError(
            f"input length {len(u_j)} does not match gain rows {l_matrix.shape[0]}"
        )
    if len(e_j) != l_matrix.shape[1]:
        raise DimensionError(
            f"error length {len(e_j)} does not match gain columns "
            f"{l_matrix.shape[1]}"
        )
    return Trajectory(
        u_j.values + l_matrix @ e_j.values, u_j.start_step, u_j.sample_period
    )


def iteration_matrix(plant, gain):
    """Error propagation matrix I - P L.

    `plant` may be the model the gain was built from (symmetric result) or a
    different plant standing in for the world (generally asymmetric).
    """
    p = plant.p_matrix
    l_matrix = gain.l_matrix
    if p.shape[1] != l_matrix.shape[0] or p.shape[0] != l_matrix.shape[1]:
        raise DimensionError(
            f"plant {p.shape} and gain {l_matrix.shape} are not conformable"
        )
    w = -(p @ l_matrix)
    w[np.diag_indices_from(w)] += 1.0
    return w


@dataclass(frozen=True)
class StabilityMetrics:
    """Convergence indicators of an iteration matrix.

    Spectral radius below one gives asymptotic convergence of the learning
    iteration; maximum singular value below one additionally makes the
    Euclidean error norm decrease every iteration.
    """

    eigenvalues: np.ndarray
    spectral_radius: float
    max_singular_value: float
    asymptotically_convergent: bool
    monotonically_convergent: bool


def stability_metrics(iter_matrix):
    w = np.asarray(iter_matrix, dtype=float)
    if w.ndim != 2 or w.shape[0] != w.shape[1]:
        raise DimensionError(f"iteration matrix must be square, got {w.shape}")
    eigenvalues = np.linalg.eigvals(w)
    spectral_radius = float(np.max(np.abs(eigenvalues))) if w.size else 0.0
    max_singular = float(np.linalg.svd(w, compute_uv=False)[0]) if w.size else 0.0
    return StabilityMetrics(
        eigenvalues=eigenvalues,
        spectral_radius=spectral_radius,
        max_singular_value=max_singular,
        asymptotically_convergent=spectral_radius < 1.0,
        monotonically_convergent=max_singular < 1.0,
    )
