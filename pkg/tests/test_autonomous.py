import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from diracorbits.autonomous import (
    AutonomousParams,
    KOutOfRange,
    energy_fn,
    equilibria,
    f_k,
    fk_zeros,
    half_period,
    hamiltonian,
    homoclinic,
    homoclinic_derivative,
    k0,
    orbit_reconstruct,
    periodic_orbit_trajectory,
    solutions_count,
    time_field,
    vector_field,
)
from diracorbits.numerics import Tolerances, integrate
from oracles import bisect, fit_slope, tanh_sinh_quad

M3 = AutonomousParams(3)


def eta_oracle(params, K, tol=1e-11):
    """Raw singular period integral via tanh-sinh, independent of the library."""
    s0, s1 = fk_zeros(params, K)

    def f_pair(d0, d1):
        z = s0 + d0 if d0 <= d1 else s1 - d1
        val = f_k(params, K, z)
        if val <= 0:  # roundoff at a turning point; weight there is negligible
            return math.inf
        return 1.0 / (2 * params.lam * math.sqrt(val))

    return tanh_sinh_quad(None, s0, s1, tol=tol, f_pair=f_pair)


def test_hamiltonian_values():
    c = math.sqrt(2) / 2
    assert abs(hamiltonian(M3, c, c) - (-1 / 6)) < 1e-15
    assert hamiltonian(M3, 0.0, 0.0) == 0.0
    u0, v0 = homoclinic(M3, 0.0)
    assert abs(hamiltonian(M3, u0, v0)) < 1e-12


def test_hamiltonian_equals_level_at_center():
    # H at the center equals -K0*lam/2
    assert abs(hamiltonian(M3, *equilibria(M3)[1]) + k0(M3) * M3.lam / 2) < 1e-15


def test_vector_field_values():
    c = math.sqrt(2) / 2
    assert np.allclose(vector_field(M3, (c, c)), (0.0, 0.0), atol=1e-15)
    assert vector_field(M3, (0.0, 0.0)) == (0.0, 0.0)
    assert np.allclose(vector_field(M3, (1.0, 0.0)), (-1.0, -1.0), atol=1e-15)


@pytest.mark.parametrize(
    "m,c", [(2, 0.5), (3, math.sqrt(2) / 2), (4, 3 ** 1.5 / 4)]
)
def test_equilibria(m, c):
    pts = equilibria(AutonomousParams(m))
    assert pts[0] == (0.0, 0.0)
    assert abs(pts[1][0] - c) < 1e-14 and abs(pts[1][1] - c) < 1e-14
    assert pts[2] == (-pts[1][0], -pts[1][1])


def test_homoclinic_values_and_decay():
    u0, v0 = homoclinic(M3, 0.0)
    assert abs(u0 - 3 / 2 ** 1.5) < 1e-14
    assert u0 == v0
    u10, v10 = homoclinic(M3, 10.0)
    assert u10 <= 2e-4 and v10 <= 2e-4
    assert abs(hamiltonian(M3, u10, v10)) < 1e-12


@given(st.integers(2, 6), st.floats(-8, 8))
@settings(max_examples=60, deadline=None)
def test_homoclinic_symmetry(m, t):
    params = AutonomousParams(m)
    u, v = homoclinic(params, t)
    vr, ur = homoclinic(params, -t)
    assert math.isclose(u, ur, rel_tol=1e-13, abs_tol=1e-300)
    assert math.isclose(v, vr, rel_tol=1e-13, abs_tol=1e-300)


@pytest.mark.parametrize("m", [2, 3, 4, 5])
def test_homoclinic_is_exact_solution(m):
    # analytic derivative matches the vector field to 1e-12 on [-10, 10]
    params = AutonomousParams(m)
    worst = 0.0
    for t in np.linspace(-10, 10, 801):
        u, v = homoclinic(params, float(t))
        du, dv = homoclinic_derivative(params, float(t))
        fu, fv = vector_field(params, (u, v))
        worst = max(worst, abs(du - fu), abs(dv - fv))
    assert worst <= 1e-12


@pytest.mark.parametrize("m,val", [(2, 0.25), (3, 1 / 3), (4, 27 / 32)])
def test_k0_values(m, val):
    assert k0(AutonomousParams(m)) == pytest.approx(val, abs=1e-15)


def test_f_k_values():
    assert abs(f_k(M3, 0.0, 1.0) - 5 / 9) < 1e-15
    assert f_k(M3, 0.3, 0.0) == -(0.3 ** 2)
    # double root at K = K0: F and its derivative vanish at s = lam^{m-1}
    s_star = M3.lam ** (M3.m - 1)
    assert abs(f_k(M3, k0(M3), s_star)) < 1e-14


def test_fk_zeros_against_bisection_oracle():
    s0, s1 = fk_zeros(M3, 0.1)

    def phi(s):
        return s - (2 / 3) * s ** 1.5 - 0.1

    assert abs(s0 - bisect(phi, 1e-12, 1.0)) < 1e-10
    assert abs(s1 - bisect(phi, 1.0, 4.0)) < 1e-10
    assert 0 < s0 < 2 * 0.1  # s0 < 2K
    assert s1 > M3.lam ** (M3.m - 1)


def test_fk_zeros_m2_closed_form():
    # m=2: s = s^2 + K, roots (1 -+ sqrt(1-4K))/2
    s0, s1 = fk_zeros(AutonomousParams(2), 0.1)
    assert abs(s0 - (1 - math.sqrt(0.6)) / 2) < 1e-13
    assert abs(s1 - (1 + math.sqrt(0.6)) / 2) < 1e-13


def test_fk_zeros_merge_near_k0():
    s0, s1 = fk_zeros(M3, k0(M3) * (1 - 1e-8))
    assert s1 - s0 < 1e-3
    assert abs(s0 - 1) < 1e-3 and abs(s1 - 1) < 1e-3


def test_k_out_of_range():
    for K in (0.0, -0.1, k0(M3), k0(M3) * (1 - 1e-12), 1.0):
        with pytest.raises(KOutOfRange):
            fk_zeros(M3, K)
    with pytest.raises(KOutOfRange):
        half_period(M3, 0.5)
    with pytest.raises(KOutOfRange):
        orbit_reconstruct(M3, 0.0)


def test_root_monotonicity_in_k():
    ks = np.linspace(0.01, k0(M3) * 0.99, 25)
    roots = [fk_zeros(M3, float(K)) for K in ks]
    s0s = [r[0] for r in roots]
    s1s = [r[1] for r in roots]
    assert all(a < b for a, b in zip(s0s, s0s[1:]))  # s0 increasing
    assert all(a > b for a, b in zip(s1s, s1s[1:]))  # s1 decreasing


@given(
    st.integers(2, 5),
    st.floats(0.01, 0.99),
    st.floats(0.01, 0.99),
    st.floats(0.01, 5.0),
)
@settings(max_examples=60, deadline=None)
def test_f_k_monotone_in_k(m, kf1, kf2, s):
    params = AutonomousParams(m)
    K1 = kf1 * k0(params)
    K2 = kf2 * k0(params)
    if K1 == K2:
        return
    lo, hi = sorted((K1, K2))
    assert f_k(params, hi, s) <= f_k(params, lo, s)


@pytest.mark.parametrize(
    "m,K_frac", [(2, 0.3), (2, 0.9), (3, 0.1), (3, 0.5), (3, 0.95), (4, 0.3), (4, 0.8)]
)
def test_half_period_matches_singular_integral(m, K_frac):
    params = AutonomousParams(m)
    K = K_frac * k0(params)
    got = half_period(params, K)
    ref = eta_oracle(params, K)
    assert abs(got - ref) < 5e-7 * max(1.0, abs(ref))


@pytest.mark.parametrize("m", [2, 3, 4])
def test_half_period_limit_near_k0(m):
    # linearization at the center: angular frequency sqrt(m-1), so the
    # small-oscillation half period is pi/sqrt(m-1)
    params = AutonomousParams(m)
    got = half_period(params, 0.9999 * k0(params))
    assert abs(got - math.pi / math.sqrt(m - 1)) < 0.01 * got


@pytest.mark.parametrize("m", [2, 3, 4])
def test_half_period_log_slope_small_k(m):
    params = AutonomousParams(m)
    ks = [1e-6, 1e-5, 1e-4]
    etas = [half_period(params, K) for K in ks]
    slope = fit_slope([math.log(1 / K) for K in ks], etas)
    assert abs(slope - 1 / (m - 1)) < 0.05 / (m - 1)


def test_half_period_integrand_regular():
    # after removing the endpoint weight the integrand factor is finite
    # and positive on [0, 1]
    from diracorbits.autonomous import _pk_eval

    for K_frac in (0.05, 0.5, 0.95):
        K = K_frac * k0(M3)
        s0, s1 = fk_zeros(M3, K)
        t0, t1 = s0 ** 0.5, s1 ** 0.5
        tgrid = np.linspace(t0, t1, 1001)
        pk = _pk_eval(M3, K, t0, t1, tgrid)
        assert np.all(pk > 0)


def test_orbit_reconstruct_energy_and_range():
    spec, traj = orbit_reconstruct(M3, 0.1)
    assert np.max(np.abs(traj.energy - (-0.05))) < 1e-9
    assert abs(spec.z_samples[0] - spec.s0) < 1e-12
    assert abs(spec.z_samples[-1] - spec.s1) < 1e-12
    assert np.all(np.diff(spec.z_samples) >= 0)
    assert abs(f_k(M3, 0.1, spec.s0)) < 1e-12
    assert abs(f_k(M3, 0.1, spec.s1)) < 1e-12


def test_orbit_cross_validates_against_rk():
    spec, traj = orbit_reconstruct(M3, 0.1, n_samples=2001)
    rk = integrate(
        time_field(M3),
        traj.states[0],
        (0.0, float(traj.t[-1])),
        tol=Tolerances(abs_tol=1e-12, rel_tol=1e-12),
        n_samples=2001,
    )
    assert np.max(np.abs(rk.states - traj.states)) <= 1e-5


def test_periodic_extension_consistency():
    spec, traj = orbit_reconstruct(M3, 0.2, n_samples=501)
    period = 2 * spec.half_period
    ext = periodic_orbit_trajectory(M3, 0.2, (period, 2 * period), 501)
    assert np.max(np.abs(ext.states - traj.states)) < 1e-10


def test_energy_conservation_along_flow():
    traj = integrate(
        time_field(M3), (0.3, 0.3), (0.0, 50.0), energy=energy_fn(M3), n_samples=5001
    )
    assert np.max(np.abs(traj.energy - traj.energy[0])) <= 1e-8


def test_time_reversal_symmetry():
    # the system is invariant under (u, v, t) -> (v, u, -t): starting from
    # (mu, mu), u(-t) = v(t)
    mu = 0.5
    fwd = integrate(time_field(M3), (mu, mu), (0.0, 5.0), n_samples=501)

    def back_field(t, u, v):
        fu, fv = vector_field(M3, (u, v))
        return -fu, -fv

    bwd = integrate(back_field, (mu, mu), (0.0, 5.0), n_samples=501)
    assert np.max(np.abs(bwd.u - fwd.v)) < 1e-8
    assert np.max(np.abs(bwd.v - fwd.u)) < 1e-8


def test_solutions_count_small_period():
    count, roots, _ = solutions_count(M3, 2.0)
    assert count == 1 and roots == []
    count2, roots2, _ = solutions_count(AutonomousParams(2), 1.0)
    assert count2 == 1 and roots2 == []


def test_solutions_count_t5():
    count, roots, diag = solutions_count(M3, 5.0)
    assert count == 3
    ks = sorted(k for k, _ in roots)
    assert ks == [1, 2]
    for k, K in roots:
        assert abs(half_period(M3, K) - 5.0 / k) < 1e-8
    assert diag["multi_root_k"] == []
