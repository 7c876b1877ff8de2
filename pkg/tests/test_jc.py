import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import oracles
from openqsl import jc, linalg
from openqsl.errors import ContractViolation, DomainError, GammaSingularityError


@pytest.mark.parametrize("gamma0", [0.05, 0.3, 0.5, 0.9, 10.0, 200.0])
def test_amplitude_matches_kernel_ode(gamma0):
    t = np.linspace(0, 6, 61)
    g_ref, gdot_ref = oracles.jc_amplitude_ode(gamma0, 1.0, t)
    g, gdot = jc.amplitude_and_rate(t, jc.JCParams(gamma0))
    np.testing.assert_allclose(g, g_ref, atol=1e-8)
    np.testing.assert_allclose(gdot, gdot_ref, atol=1e-7 * max(1, gamma0))


def test_regimes():
    assert jc.JCParams(0.4).regime == "weak"
    assert jc.JCParams(0.5).regime == "critical"
    assert jc.JCParams(10).regime == "strong"
    assert jc.big_d(jc.JCParams(10)) == pytest.approx(np.sqrt(19))
    assert jc.big_d(jc.JCParams(0.4)).real == 0


def test_critical_is_continuous():
    t = np.linspace(0, 5, 11)
    crit = jc.g_amplitude(t, jc.JCParams(0.5))
    near = jc.g_amplitude(t, jc.JCParams(0.5 + 1e-7))
    np.testing.assert_allclose(crit, near, atol=1e-6)


def test_weak_amplitude_no_overflow():
    g = jc.g_amplitude(np.array([1e4]), jc.JCParams(0.05))
    assert np.isfinite(g).all() and 0 < g[0] < 1


def test_invalid_params():
    with pytest.raises(ContractViolation):
        jc.JCParams(0.0)
    with pytest.raises(ContractViolation):
        jc.JCParams(1.0, lam=-1)
    with pytest.raises(DomainError):
        jc.g_amplitude(-1.0, jc.JCParams(1.0))


def test_first_zero_matches_root_finder():
    params = jc.JCParams(10.0)
    assert jc.g_zeros(params, 1.0)[0] == pytest.approx(oracles.jc_first_zero(10.0), abs=1e-12)
    assert jc.g_zeros(jc.JCParams(0.4), 100.0).size == 0


def test_gamma_pole_raises():
    params = jc.JCParams(10.0)
    with pytest.raises(GammaSingularityError):
        jc.gamma_rate(float(jc.g_zeros(params, 1.0)[0]), params)


def test_gamma_is_minus_two_gdot_over_g():
    params = jc.JCParams(3.0)
    t = np.array([0.1, 0.4, 2.0])
    g, gdot = jc.amplitude_and_rate(t, params)
    np.testing.assert_allclose(jc.gamma_rate(t, params), -2 * gdot / g, rtol=1e-12)
    weak = jc.JCParams(0.2)
    g, gdot = jc.amplitude_and_rate(t, weak)
    np.testing.assert_allclose(jc.gamma_rate(t, weak), -2 * gdot / g, rtol=1e-12)


def test_oscillator_approx_domain():
    with pytest.raises(DomainError):
        jc.oscillator_approx(0.0, 0.0, 1.0)
    with pytest.raises(DomainError):
        jc.oscillator_approx(0.0, 1.0, -1.0)
    assert jc.oscillator_approx(np.pi / 2, 1.0, 2.0) == pytest.approx(2.0)


def test_trajectory_endpoints():
    traj = jc.jc_trajectory(jc.excited_state(), jc.JCParams(10.0), 2.0, 400)
    assert len(traj) == 401
    assert traj.states[0, 0, 0].real == 1.0
    assert traj.dissipator_opnorms[0] == 0.0
    # the excited population commutes with H0, so the Hamiltonian never contributes
    assert np.all(traj.hamiltonian_spreads == 0)


def test_ground_state_is_stationary():
    traj = jc.jc_trajectory(jc.ground_state(), jc.JCParams(2.0), 3.0, 50)
    np.testing.assert_allclose(traj.states, np.broadcast_to(jc.ground_state(), traj.states.shape))
    assert np.all(traj.dissipator_opnorms == 0)


@settings(max_examples=25, deadline=None)
@given(st.floats(0.05, 50), st.floats(0, 2 * np.pi), st.floats(0, 1))
def test_generator_matches_finite_difference(gamma0, phi, p):
    """d rho/dt from the stored generator agrees with a central difference of the states."""
    psi = np.array([np.sqrt(p), np.sqrt(1 - p) * np.exp(1j * phi)])
    rho0 = np.outer(psi, psi.conj())
    params = jc.JCParams(gamma0, omega0=1.3)
    traj = jc.jc_trajectory(rho0, params, 1.0, 4000)
    dt = traj.times[1] - traj.times[0]
    fd = (traj.states[2:] - traj.states[:-2]) / (2 * dt)
    scale = max(1.0, gamma0)
    np.testing.assert_allclose(traj.generators[1:-1], fd, atol=2e-4 * scale**2)
    # D = L + i [H0, rho]
    h0 = jc.system_hamiltonian(params)
    np.testing.assert_allclose(traj.dissipators, traj.generators + 1j * linalg.commutator(h0, traj.states),
                               atol=1e-12)


def test_dissipator_opnorm_closed_form():
    params = jc.JCParams(200.0)
    traj = jc.jc_trajectory(jc.excited_state(), params, 1.0, 1000)
    np.testing.assert_allclose(traj.dissipator_opnorms, jc.dissipator_opnorm_excited(traj.times, params),
                               atol=1e-12)
