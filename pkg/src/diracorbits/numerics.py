"""Shared numeric kernels.

Adaptive embedded Runge-Kutta integration for planar fields, bracketed
root finding, and Gauss-Chebyshev quadrature for integrands carrying an
inverse-square-root singularity at both endpoints of [0, 1].
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np
from scipy.optimize import brentq

__all__ = [
    "Tolerances",
    "Trajectory",
    "IntegrationError",
    "StepLimitExceeded",
    "NonFiniteState",
    "NoSignChange",
    "NonConvergence",
    "integrate",
    "find_root",
    "quad_chebyshev_endpoint",
]

PlanarField = Callable[[float, float, float], tuple[float, float]]
EnergyFn = Callable[[float, float, float], float]


class IntegrationError(RuntimeError):
    """Base class for integrator failures; carries the partial trajectory."""

    def __init__(self, message: str, trajectory: "Trajectory | None" = None):
        super().__init__(message)
        self.trajectory = trajectory


class StepLimitExceeded(IntegrationError):
    pass


class NonFiniteState(IntegrationError):
    pass


class NoSignChange(ValueError):
    pass


class NonConvergence(RuntimeError):
    pass


@dataclass(frozen=True)
class Tolerances:
    abs_tol: float = 1e-10
    rel_tol: float = 1e-10
    max_steps: int = 1_000_000

    def __post_init__(self):
        if self.abs_tol < 0 or self.rel_tol < 0 or self.abs_tol + self.rel_tol <= 0:
            raise ValueError("need abs_tol, rel_tol >= 0 with abs_tol + rel_tol > 0")
        if not (self.max_steps > 0 and math.isfinite(self.max_steps)):
            raise ValueError("max_steps must be a positive finite count")


@dataclass
class Trajectory:
    """Uniformly resampled solution of a planar ODE.

    ``states`` has shape (n, 2); ``energy`` holds the governing Hamiltonian
    recomputed at each sample (NaN when no energy callback was supplied).
    """

    t: np.ndarray
    states: np.ndarray
    energy: np.ndarray
    steps_accepted: int = 0
    steps_rejected: int = 0
    terminal_reason: str = "completed"
    meta: dict = field(default_factory=dict)

    @property
    def u(self) -> np.ndarray:
        return self.states[:, 0]

    @property
    def v(self) -> np.ndarray:
        return self.states[:, 1]

    def __len__(self) -> int:
        return len(self.t)


# Dormand-Prince 5(4) coefficients.
_DP_C = (0.0, 1 / 5, 3 / 10, 4 / 5, 8 / 9, 1.0)
_DP_A = (
    (),
    (1 / 5,),
    (3 / 40, 9 / 40),
    (44 / 45, -56 / 15, 32 / 9),
    (19372 / 6561, -25360 / 2187, 64448 / 6561, -212 / 729),
    (9017 / 3168, -355 / 33, 46732 / 5247, 49 / 176, -5103 / 18656),
)
_DP_B5 = (35 / 384, 0.0, 500 / 1113, 125 / 192, -2187 / 6784, 11 / 84)
_DP_B4 = (5179 / 57600, 0.0, 7571 / 16695, 393 / 640, -92097 / 339200, 187 / 2100, 1 / 40)


def _eval_field(field_fn: PlanarField, t: float, u: float, v: float) -> tuple[float, float]:
    try:
        fu, fv = field_fn(t, u, v)
    except OverflowError:
        return math.inf, math.inf
    return fu, fv


def _hermite(t: float, t0: float, t1: float, y0, y1, f0, f1) -> tuple[float, float]:
    h = t1 - t0
    s = (t - t0) / h
    h00 = (1 + 2 * s) * (1 - s) ** 2
    h10 = s * (1 - s) ** 2
    h01 = s * s * (3 - 2 * s)
    h11 = s * s * (s - 1)
    return (
        h00 * y0[0] + h * h10 * f0[0] + h01 * y1[0] + h * h11 * f1[0],
        h00 * y0[1] + h * h10 * f0[1] + h01 * y1[1] + h * h11 * f1[1],
    )


def _resample(
    nodes_t: list[float],
    nodes_y: list[tuple[float, float]],
    nodes_f: list[tuple[float, float]],
    t_grid: np.ndarray,
) -> np.ndarray:
    out = np.empty((len(t_grid), 2))
    j = 0
    last = len(nodes_t) - 1
    for i, t in enumerate(t_grid):
        while j < last - 1 and t > nodes_t[j + 1]:
            j += 1
        out[i] = _hermite(
            t, nodes_t[j], nodes_t[j + 1], nodes_y[j], nodes_y[j + 1], nodes_f[j], nodes_f[j + 1]
        )
    return out


def integrate(
    field: PlanarField,
    y0: Sequence[float],
    t_span: tuple[float, float],
    tol: Tolerances = Tolerances(),
    n_samples: int = 1001,
    energy: EnergyFn | None = None,
) -> Trajectory:
    """Integrate a planar field with an embedded Dormand-Prince 5(4) pair.

    Accepted steps are resampled onto a uniform grid of ``n_samples`` points
    by cubic Hermite interpolation. ``energy``, when given, is evaluated at
    every resampled state and stored on the trajectory.

    Raises StepLimitExceeded or NonFiniteState; both carry the trajectory
    built from the steps accepted so far.
    """
    t0, t1 = float(t_span[0]), float(t_span[1])
    if not t1 > t0:
        raise ValueError("t_span must be a nonempty forward interval")
    if n_samples < 2:
        raise ValueError("n_samples must be >= 2")

    u, v = float(y0[0]), float(y0[1])
    fu, fv = _eval_field(field, t0, u, v)
    if not (math.isfinite(fu) and math.isfinite(fv)):
        raise NonFiniteState("field non-finite at initial state")

    nodes_t = [t0]
    nodes_y = [(u, v)]
    nodes_f = [(fu, fv)]

    span = t1 - t0
    scale0 = tol.abs_tol + tol.rel_tol * max(abs(u), abs(v), 1.0)
    fmag = max(abs(fu), abs(fv), 1e-12)
    h = min(span, max(1e-12, 0.01 * (scale0 / fmag) ** 0.2, 1e-6 * span))

    t = t0
    accepted = 0
    rejected = 0
    reason = "completed"

    def partial() -> Trajectory:
        tg = np.asarray(nodes_t)
        ys = np.asarray(nodes_y)
        en = _energies(energy, tg, ys)
        return Trajectory(tg, ys, en, accepted, rejected, reason)

    while t < t1:
        if accepted + rejected >= tol.max_steps:
            reason = "step_limit"
            raise StepLimitExceeded("max_steps exceeded", partial())
        h = min(h, t1 - t)

        ks = [(fu, fv)]
        bad = False
        for i in range(1, 6):
            ui = u + h * sum(a * ks[m][0] for m, a in enumerate(_DP_A[i]))
            vi = v + h * sum(a * ks[m][1] for m, a in enumerate(_DP_A[i]))
            kfu, kfv = _eval_field(field, t + _DP_C[i] * h, ui, vi)
            if not (math.isfinite(kfu) and math.isfinite(kfv)):
                bad = True
                break
            ks.append((kfu, kfv))

        if not bad:
            u5 = u + h * sum(b * ks[m][0] for m, b in enumerate(_DP_B5))
            v5 = v + h * sum(b * ks[m][1] for m, b in enumerate(_DP_B5))
            k7u, k7v = _eval_field(field, t + h, u5, v5)  # FSAL stage
            bad = not (math.isfinite(u5) and math.isfinite(v5)
                       and math.isfinite(k7u) and math.isfinite(k7v))

        if bad:
            rejected += 1
            h *= 0.25
            if h < 1e-14 * max(abs(t), 1.0) + 1e-300:
                reason = "non_finite"
                raise NonFiniteState("state or field became non-finite", partial())
            continue

        k_all = ks + [(k7u, k7v)]
        e_u = h * sum((b5 - b4) * k_all[m][0]
                      for m, (b5, b4) in enumerate(zip(_DP_B5 + (0.0,), _DP_B4)))
        e_v = h * sum((b5 - b4) * k_all[m][1]
                      for m, (b5, b4) in enumerate(zip(_DP_B5 + (0.0,), _DP_B4)))
        sc_u = tol.abs_tol + tol.rel_tol * max(abs(u), abs(u5))
        sc_v = tol.abs_tol + tol.rel_tol * max(abs(v), abs(v5))
        # error-per-unit-step control keeps the accumulated drift near the
        # requested tolerance regardless of the step count
        err = math.sqrt(0.5 * ((e_u / sc_u) ** 2 + (e_v / sc_v) ** 2)) / max(h, 1e-12)

        if err <= 1.0:
            accepted += 1
            t += h
            u, v = u5, v5
            fu, fv = k7u, k7v
            nodes_t.append(t)
            nodes_y.append((u, v))
            nodes_f.append((fu, fv))
        else:
            rejected += 1
        factor = 0.9 * err ** -0.2 if err > 0 else 5.0
        h *= min(5.0, max(0.2, factor))

    t_grid = np.linspace(t0, t1, n_samples)
    if len(nodes_t) == 1:  # degenerate zero-length span already excluded
        states = np.tile(nodes_y[0], (n_samples, 1))
    else:
        states = _resample(nodes_t, nodes_y, nodes_f, t_grid)
        states[0] = nodes_y[0]
        states[-1] = nodes_y[-1]
    en = _energies(energy, t_grid, states)
    return Trajectory(t_grid, states, en, accepted, rejected, reason)


def _energies(energy: EnergyFn | None, t: np.ndarray, states: np.ndarray) -> np.ndarray:
    if energy is None:
        return np.full(len(t), np.nan)
    return np.array([energy(ti, s[0], s[1]) for ti, s in zip(t, states)])


def find_root(
    f: Callable[[float], float],
    a: float,
    b: float,
    tol: float = 1e-13,
    max_iter: int = 200,
) -> float:
    """Locate a zero of ``f`` in the sign-changing bracket [a, b].

    Brent's method via scipy; converges to bracket width <= tol. The result
    always lies within [a, b].
    """
    fa, fb = f(a), f(b)
    if fa == 0.0:
        return a
    if fb == 0.0:
        return b
    if fa * fb > 0:
        raise NoSignChange(f"f({a}) = {fa} and f({b}) = {fb} have the same sign")
    try:
        x, res = brentq(f, a, b, xtol=tol, rtol=4 * np.finfo(float).eps,
                        maxiter=max_iter, full_output=True)
    except RuntimeError as exc:
        raise NonConvergence(str(exc)) from exc
    if not res.converged:
        raise NonConvergence(f"root solve did not converge in {max_iter} iterations")
    return float(x)


def quad_chebyshev_endpoint(
    g: Callable[[np.ndarray], np.ndarray],
    tol: float = 1e-12,
    max_nodes: int = 1 << 21,
    min_nodes: int = 16,
) -> float:
    """Compute the weighted integral of g(tau)/sqrt(tau*(1-tau)) over [0, 1].

    Gauss-Chebyshev (first kind) after mapping to [-1, 1]; the node count is
    doubled until two successive estimates agree to ``tol``. With n nodes the
    rule is exact for polynomial g up to degree 2n-1.
    """
    n = min_nodes
    prev = None
    while n <= max_nodes:
        k = np.arange(1, n + 1)
        x = np.cos((2 * k - 1) * np.pi / (2 * n))
        tau = 0.5 * (1.0 + x)
        vals = np.asarray(g(tau), dtype=float)
        est = float(np.pi / n * np.sum(vals))
        if prev is not None and abs(est - prev) <= tol:
            return est
        prev = est
        n *= 2
    raise NonConvergence(f"quadrature did not settle to {tol} within {max_nodes} nodes")
