"""Radial two-function spinor fields and their link to the planar systems.

A field psi(x) = f1(|x|) gamma0 + (f2(|x|)/|x|) x . gamma0 (with
x . gamma0 = sum_k x_k alpha_k gamma0) is closed under the flat Dirac
operator; its image has the same shape with coefficients built from
f1', f2'. The logarithmic substitution r = e^{-t}, f1 = -u e^{l t},
f2 = v e^{l t} turns the critical nonlinear Dirac equation on such
fields into the planar systems of the autonomous (l = (m-1)/2) and
dissipative (l = (m-2)/2, ambient dimension m-1) modules. This module
provides the field evaluation, the closed-form Dirac action, the
profile transforms, finite-difference PDE residuals, and decay fits.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.interpolate import CubicSpline

from .clifford import CliffordRep
from .numerics import Trajectory
from .serialize import write_csv

__all__ = [
    "SpinorProfile",
    "OriginEvaluation",
    "EmptyTrajectory",
    "PointOutOfRange",
    "InsufficientTail",
    "ansatz_eval",
    "dirac_on_ansatz_closed",
    "profile_from_phase",
    "phase_from_profile",
    "pde_residual",
    "decay_fit",
    "four_component_field",
    "profile_to_csv",
]


class OriginEvaluation(ValueError):
    pass


class EmptyTrajectory(ValueError):
    pass


class PointOutOfRange(ValueError):
    pass


class InsufficientTail(ValueError):
    pass


def ambient_dim(kind: str, m: int) -> int:
    """Spatial dimension the field lives in: m, or m-1 for the dissipative kind."""
    if kind == "autonomous":
        return m
    if kind == "dissipative":
        return m - 1
    raise ValueError(f"unknown kind {kind!r}")


def lambda_exp(kind: str, m: int) -> float:
    """Exponent l in f1 = -u e^{l t}: (m-1)/2 autonomous, (m-2)/2 dissipative."""
    return (m - 1) / 2 if kind == "autonomous" else (m - 2) / 2


@dataclass(frozen=True)
class SpinorProfile:
    """Radial profile pair (f1, f2) sampled on increasing radii."""

    kind: str  # "autonomous" | "dissipative"
    m: int
    r: np.ndarray
    f1: np.ndarray
    f2: np.ndarray
    gamma0: np.ndarray

    def __post_init__(self):
        if self.kind not in ("autonomous", "dissipative"):
            raise ValueError(f"unknown kind {self.kind!r}")
        if len(self.r) == 0:
            raise EmptyTrajectory("profile has no samples")
        if not np.all(np.diff(self.r) > 0):
            raise ValueError("radii must be strictly increasing")
        if abs(np.linalg.norm(self.gamma0) - 1.0) > 1e-12:
            raise ValueError("gamma0 must be a unit spinor")

    @property
    def lambda_exp(self) -> float:
        return lambda_exp(self.kind, self.m)

    @property
    def ambient_dim(self) -> int:
        return ambient_dim(self.kind, self.m)

    @property
    def psi_abs(self) -> np.ndarray:
        return np.hypot(self.f1, self.f2)


def default_gamma0(dim: int) -> np.ndarray:
    g = np.zeros(dim, dtype=np.complex128)
    g[0] = 1.0
    return g


def _x_dot(rep: CliffordRep, x: np.ndarray, gamma0: np.ndarray) -> np.ndarray:
    out = np.zeros(rep.dim, dtype=np.complex128)
    for k in range(rep.m):
        if x[k] != 0.0:
            out += x[k] * (rep.alphas[k].to_complex() @ gamma0)
    return out


def ansatz_eval(
    rep: CliffordRep, f1: float, f2: float, gamma0: np.ndarray, x
) -> np.ndarray:
    """f1 gamma0 + (f2/|x|) sum_k x_k alpha_k gamma0."""
    x = np.asarray(x, dtype=float)
    if x.shape != (rep.m,):
        raise ValueError(f"x must have shape ({rep.m},)")
    r = float(np.linalg.norm(x))
    if r == 0.0:
        raise OriginEvaluation("field is undefined at the origin")
    gamma0 = np.asarray(gamma0, dtype=np.complex128)
    return f1 * gamma0 + (f2 / r) * _x_dot(rep, x, gamma0)


def dirac_on_ansatz_closed(
    rep: CliffordRep, f1, f2, f1_prime, f2_prime, x, gamma0
) -> np.ndarray:
    """Closed-form Dirac action on the radial two-function field.

    D psi = -(f2'(r) + (m-1) f2(r)/r) gamma0 + (f1'(r)/r) x . gamma0,
    with m the ambient dimension and r = |x|.
    """
    x = np.asarray(x, dtype=float)
    m = rep.m
    r = float(np.linalg.norm(x))
    if r == 0.0:
        raise OriginEvaluation("field is undefined at the origin")
    gamma0 = np.asarray(gamma0, dtype=np.complex128)
    radial = -(f2_prime(r) + (m - 1) * f2(r) / r)
    return radial * gamma0 + (f1_prime(r) / r) * _x_dot(rep, x, gamma0)


def profile_from_phase(
    kind: str, m: int, traj: Trajectory, gamma0: np.ndarray | None = None
) -> SpinorProfile:
    """Map a phase-plane trajectory to the radial profile via r = e^{-t}."""
    if len(traj) == 0:
        raise EmptyTrajectory("trajectory has no samples")
    l = lambda_exp(kind, m)
    t = traj.t
    growth = np.exp(l * t)
    f1 = -traj.u * growth
    f2 = traj.v * growth
    r = np.exp(-t)
    order = np.argsort(r)
    if gamma0 is None:
        gamma0 = default_gamma0(2 ** (ambient_dim(kind, m) // 2))
    return SpinorProfile(
        kind=kind, m=m, r=r[order], f1=f1[order], f2=f2[order], gamma0=np.asarray(gamma0)
    )


def phase_from_profile(profile: SpinorProfile) -> Trajectory:
    """Inverse of profile_from_phase: u = -f1 r^l, v = f2 r^l, t = -ln r."""
    l = profile.lambda_exp
    t = -np.log(profile.r)
    order = np.argsort(t)
    scale = profile.r ** l
    u = -profile.f1 * scale
    v = profile.f2 * scale
    states = np.column_stack([u[order], v[order]])
    return Trajectory(
        t=t[order],
        states=states,
        energy=np.full(len(t), np.nan),
        terminal_reason="transformed",
    )


def _splines(profile: SpinorProfile):
    s = np.log(profile.r)
    return (
        CubicSpline(s, profile.f1, bc_type="natural"),
        CubicSpline(s, profile.f2, bc_type="natural"),
    )


def pde_residual(
    kind: str,
    m: int,
    profile: SpinorProfile,
    rep: CliffordRep,
    points,
    h: float = 1e-4,
) -> float:
    """Max residual |D_fd psi - h_nl(x) |psi|^{2/(m-1)} psi| over the points.

    h_nl is 1 for the autonomous kind and (2/(1+|x|^2))^{1/(m-1)} for the
    dissipative kind (m is the system parameter in both exponents).
    The profile is interpolated by natural cubic splines in ln r.
    """
    dim = ambient_dim(kind, m)
    if rep.m != dim:
        raise ValueError(f"rep dimension {rep.m} != ambient dimension {dim}")
    sp1, sp2 = _splines(profile)
    r_lo, r_hi = float(profile.r[0]), float(profile.r[-1])
    gamma0 = profile.gamma0

    def field(x: np.ndarray) -> np.ndarray:
        r = float(np.linalg.norm(x))
        if not (r_lo <= r <= r_hi):
            raise PointOutOfRange(f"|x| = {r} outside profile range [{r_lo}, {r_hi}]")
        s = math.log(r)
        return ansatz_eval(rep, float(sp1(s)), float(sp2(s)), gamma0, x)

    # stencil width 2h in each coordinate must stay inside the sampled radii
    worst = 0.0
    for x in points:
        x = np.asarray(x, dtype=float)
        r = float(np.linalg.norm(x))
        if r - dim * h < r_lo or r + dim * h > r_hi:
            raise PointOutOfRange(
                f"stencil around |x| = {r} leaves profile range [{r_lo}, {r_hi}]"
            )
        dpsi = np.zeros(rep.dim, dtype=np.complex128)
        for kk in range(dim):
            e = np.zeros(dim)
            e[kk] = h
            dstep = (field(x + e) - field(x - e)) / (2 * h)
            dpsi += rep.alphas[kk].to_complex() @ dstep
        psi = field(x)
        hnl = 1.0 if kind == "autonomous" else (2 / (1 + r * r)) ** (1 / (m - 1))
        rhs = hnl * float(np.linalg.norm(psi)) ** (2 / (m - 1)) * psi
        worst = max(worst, float(np.linalg.norm(dpsi - rhs)))
    return worst


def decay_fit(
    profile: SpinorProfile,
    end: str = "zero",
    min_samples: int = 10,
    window: float | None = None,
) -> float:
    """Least-squares slope of ln|psi| vs ln r over the outermost tail window.

    ``window`` is the fitted length in ln r; the default is one decade.
    For profiles that oscillate periodically in ln r, pass a window equal
    to a whole number of periods so the oscillation does not bias the fit.
    """
    if end not in ("zero", "infinity"):
        raise ValueError("end must be 'zero' or 'infinity'")
    if window is None:
        window = math.log(10.0)
    r = profile.r
    psi = profile.psi_abs
    if end == "zero":
        mask = r <= r[0] * math.exp(window)
    else:
        mask = r >= r[-1] * math.exp(-window)
    if mask.sum() < min_samples or np.any(psi[mask] <= 0):
        raise InsufficientTail(
            f"need >= {min_samples} positive samples in the outermost window"
        )
    slope = np.polyfit(np.log(r[mask]), np.log(psi[mask]), 1)[0]
    return float(slope)


def four_component_field(m: int, t: float, state) -> tuple[float, float, float, float]:
    """Doubled dissipative system sharing one magnitude coupling.

    u_i' = c(t) Z^{1/(m-1)} v_i - kappa u_i, v_i' = kappa v_i - c(t) Z^{1/(m-1)} u_i
    with Z = u1^2+v1^2+u2^2+v2^2 and kappa = (m-2)/2. A planar solution
    (u, v) scaled by 1/sqrt(2) and duplicated solves this identically.
    """
    u1, v1, u2, v2 = state
    kappa = (m - 2) / 2
    z = u1 * u1 + v1 * v1 + u2 * u2 + v2 * v2
    nl = math.cosh(t) ** (-1 / (m - 1)) * z ** (1 / (m - 1))
    return (
        nl * v1 - kappa * u1,
        kappa * v1 - nl * u1,
        nl * v2 - kappa * u2,
        kappa * v2 - nl * u2,
    )


def profile_to_csv(profile: SpinorProfile, path) -> None:
    """CSV with header r,f1,f2,psi_abs, radii ascending, 17-digit floats."""
    rows = zip(profile.r, profile.f1, profile.f2, profile.psi_abs)
    write_csv(path, ["r", "f1", "f2", "psi_abs"], rows)
