"""Seven-state observer that estimates (rho, beta, alpha) online.

The observer splits into two blocks driven by the measurements
(y1, y2):

* a 4-state block in (z1, z2, delta, rho) coordinates, z_i = log y_i,
  delta = beta - alpha, whose error dynamics are linear time-invariant
  with spectrum {-lambda_i} placed through elementary symmetric
  polynomials of the pole vector lambda;
* a 3-state block in (y1, v, k) coordinates, v = beta*S/N - rho - alpha,
  k = beta^2/alpha, whose error decays in the rescaled time
  integral(y1 dt) with spectrum {-mu_j}.

The two blocks are integrated together as one 7-state system; their
outputs combine into estimates of (rho, beta, alpha) with beta the
smaller root of beta^2 - k*beta + k*delta = 0, and the infected count is
estimated as y1/alpha.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DivergenceError, MeasurementError
from .integrator import IntegratorConfig, Trajectory, integrate_driven
from .observation import OutputSeries

__all__ = [
    "sigma",
    "GainSet",
    "gains",
    "ObserverState",
    "EstimateSeries",
    "ObserverRun",
    "observer_rhs",
    "guard_measurements",
    "run_observer",
    "estimate",
    "assemble_m1",
    "assemble_m2",
    "char_poly",
    "verify_pole_placement",
]

ALPHA_FLOOR = 1e-6  # below this the infected-count estimate is meaningless


def sigma(values, k: int) -> float:
    """Elementary symmetric polynomial of order k of the given values."""
    vals = [float(v) for v in values]
    n = len(vals)
    if not 1 <= k <= n:
        raise ValueError(f"order k must be in 1..{n}, got {k}")
    partial = np.zeros(k + 1)
    partial[0] = 1.0
    for v in vals:
        top = min(k, len(partial) - 1)
        for j in range(top, 0, -1):
            partial[j] += v * partial[j - 1]
    return float(partial[k])


@dataclass(frozen=True)
class GainSet:
    """Observer gains derived from the pole vectors.

    K1..K4 place the 4-state block's spectrum at {-lambda_i}; K5..K7
    place the 3-state block's (rescaled-time) spectrum at {-mu_j}.
    decay_bound is the slowest pole overall.
    """

    lam: tuple
    mu: tuple
    K: tuple
    decay_bound: float


def gains(lam, mu) -> GainSet:
    """Gain vector from 4 + 3 positive pole values."""
    lam = tuple(float(v) for v in lam)
    mu = tuple(float(v) for v in mu)
    if len(lam) != 4:
        raise ValueError(f"lambda must have 4 entries, got {len(lam)}")
    if len(mu) != 3:
        raise ValueError(f"mu must have 3 entries, got {len(mu)}")
    if min(lam) <= 0 or min(mu) <= 0:
        raise ValueError("all poles must be strictly positive")
    s1, s2, s3, s4 = (sigma(lam, k) for k in (1, 2, 3, 4))
    m1, m2, m3 = (sigma(mu, k) for k in (1, 2, 3))
    K = (s1, s1 + s3, -s4, -(s2 + s4 + 1.0), m1, m2, -m3)
    return GainSet(lam=lam, mu=mu, K=K, decay_bound=min(min(lam), min(mu)))


@dataclass
class ObserverState:
    """The seven observer variables.

    z1_hat, z2_hat estimate log y1, log y2; delta_hat estimates
    beta - alpha; rho_hat the recovery rate; y1_hat the flow into
    quarantine; v_hat the per-capita growth beta*S/N - rho - alpha;
    k_hat the combination beta^2/alpha.
    """

    z1_hat: float
    z2_hat: float
    delta_hat: float
    rho_hat: float
    y1_hat: float
    v_hat: float
    k_hat: float

    def as_array(self) -> np.ndarray:
        return np.array(
            [
                self.z1_hat,
                self.z2_hat,
                self.delta_hat,
                self.rho_hat,
                self.y1_hat,
                self.v_hat,
                self.k_hat,
            ]
        )

    @classmethod
    def from_array(cls, x) -> "ObserverState":
        return cls(*(float(v) for v in x))


def _field(x, y1, y2, K, N):
    innov_z1 = x[0] - np.log(y1)
    innov_z2 = x[1] - np.log(y2)
    innov_y1 = x[4] - y1
    return np.array(
        [
            x[2] - x[3] - K[0] * innov_z1,
            y1 / y2 - x[3] - K[1] * innov_z1,
            -K[2] * innov_z1,
            -K[3] * innov_z1 - innov_z2,
            x[5] * y1 - K[4] * y1 * innov_y1,
            -x[6] * y1 / N - K[5] * y1 * innov_y1,
            -K[6] * N * y1 * innov_y1,
        ]
    )


def observer_rhs(x: ObserverState, y1: float, y2: float, K: GainSet, N: float) -> np.ndarray:
    """Observer vector field at one instant, driven by measurements."""
    if y1 <= 0 or y2 <= 0:
        raise MeasurementError(
            f"observer needs positive measurements, got y1={y1!r}, y2={y2!r}"
        )
    return _field(x.as_array(), y1, y2, K.K, N)


def guard_measurements(series: OutputSeries):
    """Replace non-positive samples so logs and quotients stay defined.

    Each offending sample takes the value of the last strictly positive
    one; a non-positive start takes the smallest positive value of the
    series. Returns the guarded series and per-channel substitution
    counts.
    """
    guarded = []
    counts = []
    for y in (series.y1, series.y2):
        y = np.asarray(y, dtype=float).copy()
        bad = ~(y > 0)
        n_bad = int(bad.sum())
        if n_bad:
            positive = y[~bad]
            if positive.size == 0:
                raise MeasurementError("measurement series has no positive sample")
            fallback = float(positive.min())
            last = fallback
            for i in range(y.size):
                if y[i] > 0:
                    last = y[i]
                else:
                    y[i] = last
        guarded.append(y)
        counts.append(n_bad)
    return (
        OutputSeries(times=series.times.copy(), y1=guarded[0], y2=guarded[1]),
        counts[0],
        counts[1],
    )


def estimate(x: ObserverState):
    """Map one observer state to (rho_hat, beta_hat, alpha_hat).

    beta_hat is the smaller root of beta^2 - k*beta + k*delta = 0; the
    discriminant is clamped at zero so the map is total.
    """
    disc = x.k_hat * x.k_hat - 4.0 * x.delta_hat * x.k_hat
    beta_hat = 0.5 * (x.k_hat - np.sqrt(max(disc, 0.0)))
    return float(x.rho_hat), float(beta_hat), float(beta_hat - x.delta_hat)


@dataclass
class EstimateSeries:
    """Estimates along an observer run.

    I_hat is NaN where alpha_hat fell below the floor; clamp_active
    marks samples where the estimator discriminant was clamped at zero.
    """

    times: np.ndarray
    rho_hat: np.ndarray
    beta_hat: np.ndarray
    alpha_hat: np.ndarray
    I_hat: np.ndarray
    clamp_active: np.ndarray


@dataclass
class ObserverRun:
    """Observer trajectory, derived estimates, and guard bookkeeping."""

    trajectory: Trajectory
    estimates: EstimateSeries
    substitutions_y1: int
    substitutions_y2: int


def run_observer(
    measurements: OutputSeries,
    K: GainSet,
    N: float,
    init: ObserverState,
    cfg: IntegratorConfig,
) -> ObserverRun:
    """Integrate the observer over a measurement record.

    Measurements are guarded against non-positive samples first; the
    infected-count estimate uses the guarded y1. Raises DivergenceError
    (with the first bad time) if the state stops being finite.
    """
    guarded, subs1, subs2 = guard_measurements(measurements)

    def rhs(x, u, t):
        return _field(x, u[0], u[1], K.K, N)

    # Divergence shows up as inf/NaN states and is reported below;
    # the intermediate overflow warnings carry no extra information.
    with np.errstate(over="ignore", invalid="ignore"):
        traj = integrate_driven(
            rhs,
            init.as_array(),
            guarded.times,
            np.column_stack([guarded.y1, guarded.y2]),
            cfg,
        )
    finite = np.isfinite(traj.states).all(axis=1)
    if not finite.all():
        t_bad = float(traj.times[int(np.argmin(finite))])
        raise DivergenceError(
            f"observer state became non-finite at t={t_bad:.6g}", time=t_bad
        )

    delta_hat = traj.states[:, 2]
    rho_hat = traj.states[:, 3]
    k_hat = traj.states[:, 6]
    disc = k_hat * k_hat - 4.0 * delta_hat * k_hat
    clamp = disc < 0
    beta_hat = 0.5 * (k_hat - np.sqrt(np.maximum(disc, 0.0)))
    alpha_hat = beta_hat - delta_hat
    y1_on_grid = np.interp(traj.times, guarded.times, guarded.y1)
    with np.errstate(divide="ignore", invalid="ignore"):
        i_hat = np.where(alpha_hat > ALPHA_FLOOR, y1_on_grid / alpha_hat, np.nan)
    estimates = EstimateSeries(
        times=traj.times,
        rho_hat=rho_hat.copy(),
        beta_hat=beta_hat,
        alpha_hat=alpha_hat,
        I_hat=i_hat,
        clamp_active=clamp,
    )
    return ObserverRun(
        trajectory=traj,
        estimates=estimates,
        substitutions_y1=subs1,
        substitutions_y2=subs2,
    )


def assemble_m1(K: GainSet) -> np.ndarray:
    """Error matrix of the 4-state block (time-invariant)."""
    k1, k2, k3, k4 = K.K[0], K.K[1], K.K[2], K.K[3]
    return np.array(
        [
            [-k1, 0.0, 1.0, -1.0],
            [-k2, 0.0, 0.0, -1.0],
            [-k3, 0.0, 0.0, 0.0],
            [-k4, -1.0, 0.0, 0.0],
        ]
    )


def assemble_m2(K: GainSet, N: float) -> np.ndarray:
    """Error matrix of the 3-state block (in rescaled time)."""
    k5, k6, k7 = K.K[4], K.K[5], K.K[6]
    return np.array(
        [
            [-k5, 1.0, 0.0],
            [-k6, 0.0, -1.0 / N],
            [-k7 * N, 0.0, 0.0],
        ]
    )


def _poly_det(entries):
    """Determinant of a matrix of polynomials (high-to-low coefficients)."""
    n = len(entries)
    if n == 1:
        return entries[0][0]
    acc = np.zeros(1)
    for j in range(n):
        minor = [row[:j] + row[j + 1 :] for row in entries[1:]]
        term = np.polymul(entries[0][j], _poly_det(minor))
        acc = np.polyadd(acc, term if j % 2 == 0 else -term)
    return acc


def char_poly(M) -> np.ndarray:
    """Monic characteristic polynomial coefficients of a matrix up to 4x4.

    Computed by cofactor expansion of det(sI - M) over polynomial
    entries: exact closed-form arithmetic at these sizes, no
    eigensolver.
    """
    M = np.asarray(M, dtype=float)
    if M.ndim != 2 or M.shape[0] != M.shape[1]:
        raise ValueError(f"matrix must be square, got shape {M.shape}")
    n = M.shape[0]
    if n > 4:
        raise ValueError(f"dimension {n} unsupported (max 4)")
    entries = [
        [
            np.array([1.0, -M[i, j]]) if i == j else np.array([-M[i, j]])
            for j in range(n)
        ]
        for i in range(n)
    ]
    coeffs = _poly_det(entries)
    out = np.zeros(n + 1)
    out[n + 1 - coeffs.size :] = coeffs
    return out


def _poly_from_poles(poles) -> np.ndarray:
    prod = np.array([1.0])
    for p in poles:
        prod = np.polymul(prod, np.array([1.0, float(p)]))
    return prod


def verify_pole_placement(lam, mu, N: float) -> dict:
    """Check that the gain formulas place the error spectra as designed.

    Compares char_poly(M1) against prod(s + lambda_i) and char_poly(M2)
    against prod(s + mu_j), coefficient by coefficient.
    """
    gs = gains(lam, mu)
    target1 = _poly_from_poles(gs.lam)
    target2 = _poly_from_poles(gs.mu)
    p1 = char_poly(assemble_m1(gs))
    p2 = char_poly(assemble_m2(gs, N))
    err1 = float(np.max(np.abs(p1 - target1) / np.abs(target1)))
    err2 = float(np.max(np.abs(p2 - target2) / np.abs(target2)))
    tol = 1e-9
    return {
        "m1_ok": err1 < tol,
        "m2_ok": err2 < tol,
        "max_coeff_error": max(err1, err2),
    }
