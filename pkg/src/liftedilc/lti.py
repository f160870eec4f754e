"""Continuous-time SISO plants, zero-order-hold discretization, and sampled zeros.

The two plant factories build the example systems used throughout the package
in controllable canonical form, so the output matrix is read directly off the
transfer-function numerator. Discretization uses the augmented-matrix
exponential, which produces Ad and Bd in a single expm evaluation. The
first-order feedback loop has a closed-form solution by quadrature and serves
as an independent oracle for the discretization path.
"""

from dataclasses import dataclass

import numpy as np
import scipy.linalg
from scipy.integrate import quad

from .errors import (
    DimensionError,
    InvalidParameterError,
    SingularSystemError,
)

__all__ = [
    "ContinuousStateSpace",
    "DiscreteStateSpace",
    "FirstOrderFeedbackSpec",
    "make_second_order",
    "make_third_order",
    "first_order_closed_loop",
    "discretize_zoh",
    "simulate",
    "analytic_first_order_response",
    "sampled_zeros",
]


@dataclass(frozen=True, eq=False)
class ContinuousStateSpace:
    """Strictly proper SISO plant dx/dt = A x + B u, y = C x.

    Attributes
    ----------
    a_matrix : (n, n) ndarray
    b_vector : (n, 1) ndarray
    c_vector : (1, n) ndarray
    """

    a_matrix: np.ndarray
    b_vector: np.ndarray
    c_vector: np.ndarray

    def __post_init__(self):
        a = np.atleast_2d(np.asarray(self.a_matrix, dtype=float))
        b = np.asarray(self.b_vector, dtype=float).reshape(-1, 1)
        c = np.asarray(self.c_vector, dtype=float).reshape(1, -1)
        n = a.shape[0]
        if a.shape != (n, n):
            raise DimensionError(f"state matrix must be square, got {a.shape}")
        if b.shape[0] != n or c.shape[1] != n:
            raise DimensionError(
                f"input/output maps do not match state dimension {n}: "
                f"B {b.shape}, C {c.shape}"
            )
        object.__setattr__(self, "a_matrix", a)
        object.__setattr__(self, "b_vector", b)
        object.__setattr__(self, "c_vector", c)

    @property
    def order(self):
        return self.a_matrix.shape[0]


@dataclass(frozen=True, eq=False)
class DiscreteStateSpace:
    """Sampled SISO plant x(k+1) = Ad x(k) + Bd u(k), y(k) = C x(k)."""

    ad_matrix: np.ndarray
    bd_vector: np.ndarray
    c_vector: np.ndarray
    sample_period: float

    def __post_init__(self):
        ad = np.atleast_2d(np.asarray(self.ad_matrix, dtype=float))
        bd = np.asarray(self.bd_vector, dtype=float).reshape(-1, 1)
        c = np.asarray(self.c_vector, dtype=float).reshape(1, -1)
        n = ad.shape[0]
        if ad.shape != (n, n) or bd.shape[0] != n or c.shape[1] != n:
            raise DimensionError(
                f"inconsistent shapes: Ad {ad.shape}, Bd {bd.shape}, C {c.shape}"
            )
        if not self.sample_period > 0:
            raise InvalidParameterError(
                f"sample_period must be positive, got {self.sample_period}"
            )
        object.__setattr__(self, "ad_matrix", ad)
        object.__setattr__(self, "bd_vector", bd)
        object.__setattr__(self, "c_vector", c)
        object.__setattr__(self, "sample_period", float(self.sample_period))

    @property
    def order(self):
        return self.ad_matrix.shape[0]


@dataclass(frozen=True)
class FirstOrderFeedbackSpec:
    """First-order plant dy/dt + a y = u under proportional feedback u = k (y* - y).

    The closed loop is dy/dt = -(a + k) y + k y*, a one-state system whose
    response is available in closed form and is used as a quadrature oracle.
    """

    plant_pole: float
    proportional_gain: float
    initial_output: float = 0.0

    def __post_init__(self):
        if not self.plant_pole + self.proportional_gain > 0:
            raise InvalidParameterError(
                "closed loop must be stable: plant_pole + proportional_gain "
                f"= {self.plant_pole + self.proportional_gain} is not positive"
            )


def make_second_order(damping_ratio, natural_frequency):
    """Plant wn^2 / (s^2 + 2 zeta wn s + wn^2) in controllable canonical form.

    Parameters
    ----------
    damping_ratio : float
        Dimensionless damping ratio, must be positive.
    natural_frequency : float
        Undamped natural frequency in rad/s, must be positive.

    Returns
    -------
    ContinuousStateSpace
        Order-2 unit-DC-gain plant.
    """
    if not damping_ratio > 0 or not natural_frequency > 0:
        raise InvalidParameterError(
            "damping_ratio and natural_frequency must be positive, got "
            f"{damping_ratio}, {natural_frequency}"
        )
    wn = float(natural_frequency)
    zeta = float(damping_ratio)
    a = np.array([[0.0, 1.0], [-wn * wn, -2.0 * zeta * wn]])
    b = np.array([[0.0], [1.0]])
    c = np.array([[wn * wn, 0.0]])
    return ContinuousStateSpace(a, b, c)


def make_third_order(real_pole, damping_ratio, natural_frequency):
    """Plant (a/(s+a)) * wn^2/(s^2 + 2 zeta wn s + wn^2), canonical form.

    A first-order lag in series with the underdamped pair. Relative degree 3,
    unit DC gain.
    """
    if not (real_pole > 0 and damping_ratio > 0 and natural_frequency > 0):
        raise InvalidParameterError(
            "all third-order plant parameters must be positive, got "
            f"{real_pole}, {damping_ratio}, {natural_frequency}"
        )
    p = float(real_pole)
    wn = float(natural_frequency)
    zeta = float(damping_ratio)
    # (s + p)(s^2 + 2 zeta wn s + wn^2) expanded
    c2 = p + 2.0 * zeta * wn
    c1 = wn * wn + 2.0 * zeta * wn * p
    c0 = p * wn * wn
    a = np.array(
        [
            [0.0, 1.0, 0.0],
            [0.0, 0.0, 1.0],
            [-c0, -c1, -c2],
        ]
    )
    b = np.array([[0.0], [0.0], [1.0]])
    c = np.array([[p * wn * wn, 0.0, 0.0]])
    return ContinuousStateSpace(a, b, c)


def first_order_closed_loop(spec):
    """State-space form of the closed loop dy/dt = -(a+k) y + k y*."""
    return ContinuousStateSpace(
        np.array([[-(spec.plant_pole + spec.proportional_gain)]]),
        np.array([[spec.proportional_gain]]),
        np.array([[1.0]]),
    )


def discretize_zoh(css, sample_period):
    """Zero-order-hold discretization of a continuous plant.

    Ad = expm(A T) and Bd = (integral of expm(A tau) over one period) B are
    both read off the exponential of the augmented matrix [[A, B], [0, 0]].

    Parameters
    ----------
    css : ContinuousStateSpace
    sample_period : float
        Hold period T in seconds.

    Returns
    -------
    DiscreteStateSpace
    """
    if not sample_period > 0:
        raise InvalidParameterError(
            f"sample_period must be positive, got {sample_period}"
        )
    n = css.order
    aug = np.zeros((n + 1, n + 1))
    aug[:n, :n] = css.a_matrix
    aug[:n, n:] = css.b_vector
    phi = scipy.linalg.expm(aug * sample_period)
    return DiscreteStateSpace(phi[:n, :n], phi[:n, n:], css.c_vector, sample_period)


def simulate(dss, input_history, initial_state=None):
    """Propagate the discrete recursion and return the outputs y(1..N).

    The input u(k) acts over step k, for k = 0..N-1; the returned array holds
    the output at steps 1..N, matching the lifted-matrix convention.

    Parameters
    ----------
    dss : DiscreteStateSpace
    input_history : array_like, shape (N,)
    initial_state : array_like, shape (n,), optional
        Defaults to the origin.

    Returns
    -------
    ndarray, shape (N,)
    """
    u = np.asarray(input_history, dtype=float).ravel()
    if u.size < 1:
        raise DimensionError("input_history must contain at least one sample")
    n = dss.order
    if initial_state is None:
        x = np.zeros(n)
    else:
        x = np.asarray(initial_state, dtype=float).ravel()
        if x.size != n:
            raise DimensionError(
                f"initial_state has {x.size} entries, system order is {n}"
            )
    ad = dss.ad_matrix
    bd = dss.bd_vector[:, 0]
    c = dss.c_vector[0]
    y = np.empty(u.size)
    for k in range(u.size):
        x = ad @ x + bd * u[k]
        y[k] = c @ x
    return y


def analytic_first_order_response(spec, command_fn, t, breakpoints=None):
    """Closed-form output of the first-order feedback loop at time t.

    Evaluates y(t) = exp(-(a+k) t) y(0) + integral over [0, t] of
    exp(-(a+k) tau) k y*(t - tau) d tau by adaptive quadrature. The decaying
    exponential weights recent commands most heavily, which is what makes
    this loop a useful reference for what feedback alone can track.

    Parameters
    ----------
    spec : FirstOrderFeedbackSpec
    command_fn : callable
        y*(time), integrable on [0, t].
    t : float
        Evaluation time, must be nonnegative.
    breakpoints : sequence of float, optional
        Times in (0, t) where the command jumps; passed to the quadrature
        routine so piecewise-constant commands integrate to full accuracy.

    Returns
    -------
    float
    """
    if t < 0:
        raise InvalidParameterError(f"t must be nonnegative, got {t}")
    rate = spec.plant_pole + spec.proportional_gain
    k = spec.proportional_gain
    homogeneous = np.exp(-rate * t) * spec.initial_output
    if t == 0:
        return homogeneous
    points = None
    if breakpoints is not None:
        # change of variable tau = t - time maps command jumps into the
        # integration variable
        points = sorted(t - b for b in breakpoints if 0.0 < b < t)
        if not points:
            points = None
    particular, _ = quad(
        lambda tau: np.exp(-rate * tau) * k * command_fn(t - tau),
        0.0,
        t,
        points=points,
        limit=200,
        epsabs=1e-12,
        epsrel=1e-12,
    )
    return homogeneous + particular


def sampled_zeros(dss):
    """Finite transmission zeros of the sampled plant.

    Computed as the finite generalized eigenvalues of the pencil
    ([Ad, Bd; C, 0], blkdiag(I, 0)). For a plant of order n with one step of
    input-output delay this yields n - 1 zeros; any zero with modulus above
    one makes the exact lifted inverse unbounded.

    Returns
    -------
    list of complex
        Sorted by real part, then imaginary part.
    """
    mk = _markov_parameters(dss, dss.order + 1)
    if np.max(np.abs(mk)) == 0.0:
        raise SingularSystemError(
            "all Markov parameters are zero; the plant has no "
            "input-output coupling and no zero structure"
        )
    n = dss.order
    pencil_a = np.zeros((n + 1, n + 1))
    pencil_a[:n, :n] = dss.ad_matrix
    pencil_a[:n, n] = dss.bd_vector[:, 0]
    pencil_a[n, :n] = dss.c_vector[0]
    pencil_b = np.zeros((n + 1, n + 1))
    pencil_b[:n, :n] = np.eye(n)
    alpha, beta = scipy.linalg.eig(
        pencil_a, pencil_b, right=False, homogeneous_eigvals=True
    )
    finite = np.abs(beta) > 1e-9 * np.max(np.abs(beta))
    zeros = alpha[finite] / beta[finite]
    return sorted(zeros, key=lambda z: (z.real, z.imag))


def _markov_parameters(dss, count):
    """First `count` impulse-response samples C Ad^k Bd, k = 0..count-1."""
    out = np.empty(count)
    v = dss.bd_vector[:, 0].copy()
    c = dss.c_vector[0]
    ad = dss.ad_matrix
    for i in range(count):
        out[i] = c @ v
        v = ad @ v
    return out
