"""Scenario configuration: a flat key-value document with full defaults.

The default scenario is the reference numerical experiment: a population
of 1e5 with rates (alpha, beta, rho) = (0.07, 0.4, 0.1), ten initially
infected, five initially quarantined, a 10-day horizon at dt = 0.01,
pole vectors lambda = [1, 1.5, 2, 2.5] and mu = [1/13000, 1/15000,
1/19000], and 5% relative measurement noise.
"""
from __future__ import annotations

from dataclasses import dataclass, replace

import numpy as np

from .errors import ConfigError
from .integrator import IntegratorConfig
from .models import EpidemicState, ModelKind, ModelParams
from .observation import NoiseSpec
from .observer import GainSet, ObserverState, gains

__all__ = ["Scenario", "parse_scenario", "DEFAULT_LAMBDA", "DEFAULT_MU"]

DEFAULT_LAMBDA = (1.0, 1.5, 2.0, 2.5)
DEFAULT_MU = (1.0 / 13000.0, 1.0 / 15000.0, 1.0 / 19000.0)


@dataclass(frozen=True)
class Scenario:
    kind: ModelKind = ModelKind.FULL
    beta: float = 0.4
    rho: float = 0.1
    alpha: float = 0.07
    N: float = 1e5
    I0: float = 10.0
    Q0: float = 5.0
    R0: float = 0.0
    dt: float = 0.01
    horizon: float = 10.0
    lam: tuple = DEFAULT_LAMBDA
    mu: tuple = DEFAULT_MU
    relative_sigma: float = 0.05
    seed: int = 0
    smooth_window: int = 101
    delta0: float = 0.2
    rho0: float = 0.05
    v0: float = 0.1
    k0: float = 1.0
    out_dir: str = "out"

    def params(self) -> ModelParams:
        return ModelParams(beta=self.beta, rho=self.rho, alpha=self.alpha, N=self.N)

    def initial_state(self) -> EpidemicState:
        s0 = self.N - self.I0 - self.Q0 - self.R0
        return EpidemicState(S=s0, I=self.I0, Q=self.Q0, R=self.R0)

    def integrator_config(self) -> IntegratorConfig:
        return IntegratorConfig(dt=self.dt, horizon=self.horizon)

    def noise_spec(self) -> NoiseSpec:
        return NoiseSpec(relative_sigma=self.relative_sigma, seed=self.seed)

    def gain_set(self) -> GainSet:
        return gains(self.lam, self.mu)

    def observer_init(self, y1_0: float, y2_0: float) -> ObserverState:
        return ObserverState(
            z1_hat=float(np.log(y1_0)),
            z2_hat=float(np.log(y2_0)),
            delta_hat=self.delta0,
            rho_hat=self.rho0,
            y1_hat=float(y1_0),
            v_hat=self.v0,
            k_hat=self.k0,
        )


def _parse_kind(text):
    try:
        return ModelKind(text.strip().lower())
    except ValueError:
        raise ConfigError(f"model.kind must be 'full' or 'simplified', got {text!r}")


def _parse_floats(text, arity, key):
    parts = [p.strip() for p in text.split(",") if p.strip()]
    if len(parts) != arity:
        raise ConfigError(f"{key} must have {arity} comma-separated values, got {len(parts)}")
    try:
        return tuple(float(p) for p in parts)
    except ValueError as exc:
        raise ConfigError(f"{key}: {exc}") from exc


def _float(key):
    def parse(text):
        try:
            return float(text)
        except ValueError as exc:
            raise ConfigError(f"{key} must be a number, got {text!r}") from exc

    return parse


def _int(key):
    def parse(text):
        try:
            return int(text)
        except ValueError as exc:
            raise ConfigError(f"{key} must be an integer, got {text!r}") from exc

    return parse


_KEYS = {
    "model.kind": ("kind", _parse_kind),
    "params.beta": ("beta", _float("params.beta")),
    "params.rho": ("rho", _float("params.rho")),
    "params.alpha": ("alpha", _float("params.alpha")),
    "params.N": ("N", _float("params.N")),
    "init.I0": ("I0", _float("init.I0")),
    "init.Q0": ("Q0", _float("init.Q0")),
    "init.R0": ("R0", _float("init.R0")),
    "sim.dt": ("dt", _float("sim.dt")),
    "sim.horizon": ("horizon", _float("sim.horizon")),
    "poles.lambda": ("lam", lambda t: _parse_floats(t, 4, "poles.lambda")),
    "poles.mu": ("mu", lambda t: _parse_floats(t, 3, "poles.mu")),
    "noise.relative_sigma": ("relative_sigma", _float("noise.relative_sigma")),
    "noise.seed": ("seed", _int("noise.seed")),
    "smooth.window": ("smooth_window", _int("smooth.window")),
    "observer.delta0": ("delta0", _float("observer.delta0")),
    "observer.rho0": ("rho0", _float("observer.rho0")),
    "observer.v0": ("v0", _float("observer.v0")),
    "observer.k0": ("k0", _float("observer.k0")),
    "out.dir": ("out_dir", lambda t: t),
}


def _validate(sc: Scenario) -> Scenario:
    for key, value in (
        ("params.beta", sc.beta),
        ("params.rho", sc.rho),
        ("params.alpha", sc.alpha),
        ("params.N", sc.N),
        ("sim.dt", sc.dt),
    ):
        if not value > 0:
            raise ConfigError(f"{key} must be strictly positive, got {value!r}")
    if not sc.I0 > 0:
        raise ConfigError(f"init.I0 must be strictly positive, got {sc.I0!r}")
    for key, value in (("init.Q0", sc.Q0), ("init.R0", sc.R0)):
        if value < 0:
            raise ConfigError(f"{key} must be non-negative, got {value!r}")
    if sc.horizon < sc.dt:
        raise ConfigError(
            f"sim.horizon must be at least sim.dt, got {sc.horizon!r} < {sc.dt!r}"
        )
    if sc.N - sc.I0 - sc.Q0 - sc.R0 <= 0:
        raise ConfigError("initial compartments exceed the population size params.N")
    if min(sc.lam) <= 0:
        raise ConfigError("poles.lambda entries must be strictly positive")
    if min(sc.mu) <= 0:
        raise ConfigError("poles.mu entries must be strictly positive")
    if sc.relative_sigma < 0:
        raise ConfigError(
            f"noise.relative_sigma must be non-negative, got {sc.relative_sigma!r}"
        )
    if sc.smooth_window < 1 or sc.smooth_window % 2 == 0:
        raise ConfigError(
            f"smooth.window must be odd and >= 1, got {sc.smooth_window!r}"
        )
    return sc


def parse_scenario(text: str) -> Scenario:
    """Parse a flat key-value document; missing keys keep their defaults.

    One `key = value` pair per line; blank lines and lines starting with
    '#' are ignored; unknown keys are rejected.
    """
    overrides = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if "=" not in line:
            raise ConfigError(f"line {lineno}: expected 'key = value', got {raw!r}")
        key, _, value = line.partition("=")
        key = key.strip()
        value = value.strip()
        if key not in _KEYS:
            raise ConfigError(f"line {lineno}: unknown key {key!r}")
        field_name, parser = _KEYS[key]
        if field_name in overrides:
            raise ConfigError(f"line {lineno}: duplicate key {key!r}")
        overrides[field_name] = parser(value)
    return _validate(replace(Scenario(), **overrides))
