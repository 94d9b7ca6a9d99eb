"""Measured outputs of the SIQR models and their exact derivative jets.

The measurements are y1 = alpha*I (daily flow into quarantine) and
y2 = Q (quarantine population). Parameter recovery needs the time
derivatives of these outputs up to order three; they are produced
analytically by propagating truncated Taylor coefficients of the state
through the model right-hand side, never by numerical differencing.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DomainError
from .integrator import Trajectory
from .models import EpidemicState, ModelKind, ModelParams

__all__ = [
    "OutputSeries",
    "OutputJet",
    "NoiseSpec",
    "observe",
    "output_jets",
    "add_noise",
    "moving_average",
]


@dataclass(frozen=True)
class OutputSeries:
    """Sampled measurements aligned with a trajectory grid."""

    times: np.ndarray
    y1: np.ndarray
    y2: np.ndarray


@dataclass(frozen=True)
class OutputJet:
    """Output values and derivatives at one instant.

    y1 carries derivatives up to order three, y2 up to order two; that is
    exactly what the recovery formulas consume.
    """

    t: float
    y1: float
    dy1: float
    d2y1: float
    d3y1: float
    y2: float
    dy2: float
    d2y2: float


@dataclass(frozen=True)
class NoiseSpec:
    """Multiplicative Gaussian measurement noise.

    relative_sigma is the standard deviation as a fraction of the
    instantaneous signal value.
    """

    relative_sigma: float = 0.05
    seed: int = 0

    def __post_init__(self):
        if self.relative_sigma < 0:
            raise ValueError("relative_sigma must be non-negative")


def observe(traj: Trajectory, alpha: float) -> OutputSeries:
    """Project an SIQR trajectory onto the measured outputs."""
    if alpha <= 0:
        raise ValueError("alpha must be positive")
    return OutputSeries(
        times=traj.times,
        y1=alpha * traj.states[:, 1],
        y2=traj.states[:, 2].copy(),
    )


def _taylor_coefficients(state, params, kind, order):
    """Taylor coefficients of (S, I, Q) around the given state.

    Row k holds the k-th coefficient, i.e. the k-th time derivative
    divided by k!. Obtained by the standard recurrence x_{k+1} =
    [rhs(x)]_k / (k+1) over truncated series arithmetic; the only
    non-polynomial operation is the division by N - Q in the full model.
    """
    beta, rho, alpha, N = params.beta, params.rho, params.alpha, params.N
    S = np.zeros(order + 1)
    I = np.zeros(order + 1)
    Q = np.zeros(order + 1)
    S[0], I[0], Q[0] = state.S, state.I, state.Q
    full = kind is ModelKind.FULL
    if full:
        pool0 = N - Q[0]
        if pool0 <= 0:
            raise DomainError(
                f"full model needs Q < N, got Q={state.Q!r} with N={params.N!r}"
            )
        G = np.zeros(order + 1)  # coefficients of S*I/(N - Q)
    for k in range(order):
        si_k = float(np.dot(S[: k + 1], I[k::-1]))
        if full:
            # (N - Q) * G = S*I, solved coefficient by coefficient.
            correction = float(np.dot(Q[1 : k + 1], G[k - 1 :: -1])) if k else 0.0
            G[k] = (si_k + correction) / pool0
            infection_k = beta * G[k]
        else:
            infection_k = beta * si_k / N
        S[k + 1] = -infection_k / (k + 1)
        I[k + 1] = (infection_k - alpha * I[k] - rho * I[k]) / (k + 1)
        Q[k + 1] = (alpha * I[k] - rho * Q[k]) / (k + 1)
    return S, I, Q


def output_jets(
    state: EpidemicState, params: ModelParams, kind: ModelKind, t: float = 0.0
) -> OutputJet:
    """Exact output derivatives at a state, by repeated total differentiation."""
    _, I, Q = _taylor_coefficients(state, params, kind, order=3)
    a = params.alpha
    return OutputJet(
        t=t,
        y1=a * I[0],
        dy1=a * I[1],
        d2y1=2.0 * a * I[2],
        d3y1=6.0 * a * I[3],
        y2=Q[0],
        dy2=Q[1],
        d2y2=2.0 * Q[2],
    )


def add_noise(series: OutputSeries, spec: NoiseSpec) -> OutputSeries:
    """Multiply each sample by (1 + eta), eta ~ N(0, relative_sigma^2).

    Draws are i.i.d., y1 first then y2, from a generator seeded with
    spec.seed, so the result is a pure function of (series, spec).
    Negative results are clamped to zero: the signals are physically
    non-negative.
    """
    rng = np.random.default_rng(spec.seed)
    n = series.times.size
    y1 = series.y1 * (1.0 + rng.normal(0.0, spec.relative_sigma, n))
    y2 = series.y2 * (1.0 + rng.normal(0.0, spec.relative_sigma, n))
    return OutputSeries(
        times=series.times.copy(),
        y1=np.maximum(y1, 0.0),
        y2=np.maximum(y2, 0.0),
    )


def moving_average(values, window: int) -> np.ndarray:
    """Centered moving average on a uniform grid.

    The window must be odd; near the ends it is clamped to the available
    samples ([0,1,2,3,4] with window 3 gives [0.5, 1, 2, 3, 3.5]). NaN
    samples are ignored; a window with no finite sample yields NaN.
    """
    if window < 1 or window % 2 == 0:
        raise ValueError(f"window must be odd and >= 1, got {window}")
    x = np.asarray(values, dtype=float)
    n = x.size
    if n < window:
        raise ValueError(f"series of length {n} is shorter than window {window}")
    finite = np.isfinite(x)
    filled = np.where(finite, x, 0.0)
    cum = np.concatenate([[0.0], np.cumsum(filled)])
    cnt = np.concatenate([[0.0], np.cumsum(finite)])
    radius = window // 2
    idx = np.arange(n)
    lo = np.maximum(idx - radius, 0)
    hi = np.minimum(idx + radius + 1, n)
    totals = cum[hi] - cum[lo]
    counts = cnt[hi] - cnt[lo]
    with np.errstate(invalid="ignore"):
        out = np.where(counts > 0, totals / np.maximum(counts, 1.0), np.nan)
    return out
