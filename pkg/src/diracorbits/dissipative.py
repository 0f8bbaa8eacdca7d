"""Nonautonomous planar system with a decaying coupling factor.

u' = cosh(t)^{-1/(m-1)} (u^2+v^2)^{1/(m-1)} v - kappa*u,
v' = kappa*v - cosh(t)^{-1/(m-1)} (u^2+v^2)^{1/(m-1)} u,  kappa = (m-2)/2.

The energy H is nonincreasing along forward orbits. Shooting from the
diagonal (mu, mu) at t = 0 classifies initial data into: class A (the
energy eventually becomes nonpositive, after which the orbit is trapped
in a quadrant and grows), I-candidates (energy stays positive and the
orbit decays like e^{-(m-2)t}), or undetermined at the horizon.
Backward time is never integrated; the symmetry u(-t) = v(t) supplies it.
"""

from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, replace

import numpy as np

from .numerics import (
    IntegrationError,
    Tolerances,
    Trajectory,
    integrate,
)

__all__ = [
    "DissipativeParams",
    "Thresholds",
    "ShootingOutcome",
    "BracketInvalid",
    "TailTooShort",
    "hamiltonian_t",
    "vector_field_t",
    "shoot",
    "sign_changes",
    "boundary_bisect",
    "rescaled_limit",
    "rescale_compare",
    "envelope_check",
    "classify_sweep",
]


class BracketInvalid(ValueError):
    pass


class TailTooShort(ValueError):
    pass


@dataclass(frozen=True)
class DissipativeParams:
    """System dimension parameter m >= 3; kappa = (m-2)/2 > 0."""

    m: int

    def __post_init__(self):
        if not isinstance(self.m, int) or self.m < 3:
            raise ValueError("m must be an integer >= 3")

    @property
    def kappa(self) -> float:
        return (self.m - 2) / 2


@dataclass(frozen=True)
class Thresholds:
    decay_threshold: float = 1e-6
    fit_tol: float = 0.2
    deadband: float = 1e-9


@dataclass(frozen=True)
class ShootingOutcome:
    mu: float
    k: int
    cls: str  # "A" | "I-candidate" | "undetermined"
    t_end: float
    H_tail: float
    envelope: float | None
    first_nonpositive_H: float | None
    trajectory: Trajectory | None = None

    def to_json_dict(self) -> dict:
        return {
            "mu": self.mu,
            "k": self.k,
            "class": self.cls,
            "t_end": self.t_end,
            "H_tail": self.H_tail,
            "envelope": self.envelope,
            "first_nonpositive_H": self.first_nonpositive_H,
        }


def hamiltonian_t(params: DissipativeParams, t: float, u: float, v: float) -> float:
    m = params.m
    z = u * u + v * v
    return (
        -params.kappa * u * v
        + (m - 1) / (2 * m) * math.cosh(t) ** (-1 / (m - 1)) * z ** (m / (m - 1))
    )


def vector_field_t(params: DissipativeParams, t: float, state) -> tuple[float, float]:
    u, v = state
    m = params.m
    z = u * u + v * v
    nl = math.cosh(t) ** (-1 / (m - 1)) * z ** (1 / (m - 1))
    return nl * v - params.kappa * u, params.kappa * v - nl * u


def time_field(params: DissipativeParams):
    def field(t: float, u: float, v: float) -> tuple[float, float]:
        return vector_field_t(params, t, (u, v))

    return field


def energy_fn(params: DissipativeParams):
    def en(t: float, u: float, v: float) -> float:
        return hamiltonian_t(params, t, u, v)

    return en


def sign_changes(traj: Trajectory, component: str = "v", deadband: float = 1e-9) -> int:
    """Count strict sign alternations of one component with hysteresis.

    A crossing counts only between samples whose magnitude exceeds the
    deadband; excursions that never leave the deadband are ignored.
    """
    if len(traj) == 0:
        raise ValueError("trajectory is empty")
    vals = traj.u if component == "u" else traj.v
    count = 0
    last_sign = 0
    for x in vals:
        if abs(x) <= deadband:
            continue
        s = 1 if x > 0 else -1
        if last_sign != 0 and s != last_sign:
            count += 1
        last_sign = s
    return count


def _tail_decay_exponent(traj: Trajectory, window: float = 5.0) -> float | None:
    """Least-squares slope of ln(u^2+v^2) over the final `window` time units."""
    z = traj.u**2 + traj.v**2
    mask = (traj.t >= traj.t[-1] - window) & (z > 0)
    if mask.sum() < 10:
        return None
    slope = np.polyfit(traj.t[mask], np.log(z[mask]), 1)[0]
    return float(slope)


def shoot(
    params: DissipativeParams,
    mu: float,
    t_max: float = 60.0,
    thresholds: Thresholds = Thresholds(),
    tol: Tolerances = Tolerances(),
    n_samples: int = 4001,
) -> ShootingOutcome:
    """Integrate from (mu, mu) at t = 0 and classify the forward orbit.

    Class A: H reaches a nonpositive value (the orbit is then unbounded).
    I-candidate: H stays positive, u^2+v^2 falls below decay_threshold,
    and the tail decay rate of ln(u^2+v^2) is within fit_tol of -(m-2).
    Otherwise undetermined at the horizon. A NonFiniteState blow-up after
    H <= 0 still classifies as A from the partial trajectory.
    """
    if not mu > 0:
        raise ValueError("mu must be positive")
    if not t_max > 0:
        raise ValueError("t_max must be positive")

    field = time_field(params)
    en = energy_fn(params)
    try:
        traj = integrate(field, (mu, mu), (0.0, t_max), tol=tol,
                         n_samples=n_samples, energy=en)
    except IntegrationError as exc:
        traj = exc.trajectory
        if traj is None or len(traj) < 2:
            raise

    k = sign_changes(traj, "v", thresholds.deadband)
    t_end = float(traj.t[-1])
    H_tail = float(traj.energy[-1])

    nonpos = np.nonzero(traj.energy <= 0.0)[0]
    first_nonpositive = float(traj.t[nonpos[0]]) if len(nonpos) else None

    z_final = float(traj.u[-1] ** 2 + traj.v[-1] ** 2)
    slope = _tail_decay_exponent(traj)

    if first_nonpositive is not None:
        cls = "A"
        envelope = slope
    elif (
        z_final < thresholds.decay_threshold
        and slope is not None
        and abs(slope + (params.m - 2)) <= thresholds.fit_tol * (params.m - 2)
    ):
        cls = "I-candidate"
        envelope = slope
    else:
        cls = "undetermined"
        envelope = slope

    return ShootingOutcome(
        mu=mu,
        k=k,
        cls=cls,
        t_end=t_end,
        H_tail=H_tail,
        envelope=envelope,
        first_nonpositive_H=first_nonpositive,
        trajectory=traj,
    )


def boundary_bisect(
    params: DissipativeParams,
    k: int,
    mu_lo: float,
    mu_hi: float,
    tol: float = 1e-8,
    t_max: float = 60.0,
    thresholds: Thresholds = Thresholds(),
) -> tuple[float, float, list[dict]]:
    """Bisect on mu for the transition from <= k to >= k+1 sign changes.

    Requires shoot(mu_lo).k <= k and shoot(mu_hi).k >= k+1. Outcomes that
    are not class A near the boundary are expected (the decaying layer
    lives there); they are recorded in the returned diagnostics and the
    midpoint is assigned a side by its sign-change count alone.
    """
    lo = shoot(params, mu_lo, t_max, thresholds)
    hi = shoot(params, mu_hi, t_max, thresholds)
    if lo.k > k or hi.k < k + 1:
        raise BracketInvalid(
            f"need k(mu_lo) <= {k} and k(mu_hi) >= {k + 1}; got {lo.k} and {hi.k}"
        )
    diagnostics: list[dict] = []
    a, b = mu_lo, mu_hi
    while b - a > tol:
        mid = 0.5 * (a + b)
        out = shoot(params, mid, t_max, thresholds)
        if out.cls != "A":
            diagnostics.append(out.to_json_dict())
        if out.k <= k:
            a = mid
        else:
            b = mid
    return a, b, diagnostics


def rescaled_limit(params: DissipativeParams, t: float) -> tuple[float, float]:
    """Closed-form limit of the blown-up flow near t = 0 for large mu."""
    w = 2 ** (1 / (params.m - 1)) * t + math.pi / 4
    return math.sqrt(2) * math.sin(w), math.sqrt(2) * math.cos(w)


def vector_field_rescaled(params: DissipativeParams, eps: float, t: float, state):
    """Blown-up field: U(t) = eps * u(eps^{2/(m-1)} t) with eps = 1/mu."""
    U, V = state
    m = params.m
    s = eps ** (2 / (m - 1)) * t
    z = U * U + V * V
    nl = math.cosh(s) ** (-1 / (m - 1)) * z ** (1 / (m - 1))
    kap = eps ** (2 / (m - 1)) * params.kappa
    return nl * V - kap * U, kap * V - nl * U


def rescale_compare(
    params: DissipativeParams,
    mu: float,
    T: float = 5.0,
    tol: Tolerances = Tolerances(),
    n_samples: int = 2001,
) -> float:
    """Sup-distance on the rescaled window [0, T] to the closed-form limit.

    The trajectory is integrated in original time over [0, eps^{2/(m-1)} T]
    with eps = 1/mu, then mapped by the exact rescaling identity.
    """
    if not mu >= 1:
        raise ValueError("mu must be >= 1")
    eps = 1.0 / mu
    scale = eps ** (2 / (params.m - 1))
    traj = integrate(
        time_field(params), (mu, mu), (0.0, scale * T), tol=tol, n_samples=n_samples
    )
    t_resc = traj.t / scale
    err = 0.0
    for ti, (u, v) in zip(t_resc, traj.states):
        U0, V0 = rescaled_limit(params, ti)
        err = max(err, math.hypot(eps * u - U0, eps * v - V0))
    return err


def envelope_check(
    params: DissipativeParams,
    traj: Trajectory,
    cls: str,
    tail_start: float | None = None,
) -> dict:
    """Tail-envelope fit for a classified trajectory.

    Class A: smallest C with u^2+v^2 <= C cosh(t) on the tail.
    I-candidate: least-squares decay exponent of ln(u^2+v^2), expected
    close to -(m-2).
    """
    if len(traj) < 2:
        raise TailTooShort("trajectory has fewer than 2 samples")
    t_end = float(traj.t[-1])
    start = tail_start if tail_start is not None else max(5.0, t_end - 0.5 * t_end)
    mask = traj.t >= start
    if mask.sum() < 10 or t_end - start < 5.0:
        raise TailTooShort(f"tail [{start}, {t_end}] too short for a fit")
    z = traj.u[mask] ** 2 + traj.v[mask] ** 2
    if cls == "A":
        c = float(np.max(z / np.cosh(traj.t[mask])))
        return {"class": "A", "cosh_envelope_C": c, "tail_start": start}
    if np.any(z <= 0):
        raise TailTooShort("tail contains zero magnitude; exponent undefined")
    slope = float(np.polyfit(traj.t[mask], np.log(z), 1)[0])
    return {
        "class": cls,
        "decay_exponent": slope,
        "expected_exponent": -(params.m - 2),
        "tail_start": start,
    }


def _sweep_one(args) -> ShootingOutcome:
    params, mu, t_max, thresholds = args
    out = shoot(params, mu, t_max, thresholds)
    return replace(out, trajectory=None)


def classify_sweep(
    params: DissipativeParams,
    mu_grid,
    t_max: float = 60.0,
    thresholds: Thresholds = Thresholds(),
    jobs: int = 1,
) -> list[ShootingOutcome]:
    """Independent shoot() per grid value; result sorted by mu."""
    mus = [float(mu) for mu in mu_grid]
    if any(mu <= 0 for mu in mus):
        raise ValueError("mu grid must be positive")
    if sorted(mus) != mus:
        raise ValueError("mu grid must be increasing")
    work = [(params, mu, t_max, thresholds) for mu in mus]
    if jobs > 1 and len(work) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            results = list(pool.map(_sweep_one, work))
    else:
        results = [_sweep_one(w) for w in work]
    return sorted(results, key=lambda o: o.mu)
