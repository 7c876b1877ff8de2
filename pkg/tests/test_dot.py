import dataclasses

import numpy as np
import pytest
from scipy.linalg import expm

import oracles
from openqsl import dot, linalg, qsl
from openqsl.errors import ConfigurationError, ContractViolation

SMALL = dot.DotParams(n1=12, n2=10, delta_eps=0.5, delta_e=3.0, coupling=0.3, seed=4)


def _full_setup(params, kind):
    nd = params.n1 + params.n2
    c = dot.coupling_matrix(params)
    h = oracles.dot_full_hamiltonian(params.n1, params.n2, params.delta_eps, params.delta_e, params.coupling, c,
                                     params.spin_coefficient)
    psi0 = np.zeros(2 * nd, dtype=complex)
    lvl = params.level - 1
    if kind == "excited":
        psi0[lvl] = 1
    else:
        psi0[lvl] = psi0[nd + lvl] = 1 / np.sqrt(2)
    return h, psi0, nd


@pytest.mark.parametrize("kind", ["excited", "coherent"])
@pytest.mark.parametrize("spin_term", ["half", "full"])
def test_reduced_states_match_full_space_oracle(kind, spin_term):
    params = dataclasses.replace(SMALL, spin_term=spin_term)
    traj = dot.dot_trajectory(params, kind, t_final=4.0, n_steps=40)
    h, psi0, nd = _full_setup(params, kind)
    ref = oracles.dot_reduced_states(h, psi0, traj.times, nd)
    # RK4 at dt |H| <= 0.05 leaves a global error of a few 1e-7 over this window
    np.testing.assert_allclose(traj.states, ref, atol=1e-6)


def test_dissipator_matches_full_space_derivative():
    params = SMALL
    traj = dot.dot_trajectory(params, "coherent", t_final=2.0, n_steps=20)
    h, psi0, nd = _full_setup(params, "coherent")
    h_sys = dot.system_hamiltonian(params)
    for k in (3, 11, 20):
        psi = expm(-1j * h * traj.times[k]) @ psi0
        rho_dot = oracles.partial_trace_dot(-1j * (h @ np.outer(psi, psi.conj()) - np.outer(psi, psi.conj()) @ h), nd)
        rho = oracles.partial_trace_dot(np.outer(psi, psi.conj()), nd)
        np.testing.assert_allclose(traj.generators[k], rho_dot, atol=1e-6)
        np.testing.assert_allclose(traj.dissipators[k], rho_dot + 1j * (h_sys @ rho - rho @ h_sys), atol=1e-6)


def test_rk4_step_matrix_against_eigendecomposition():
    rng = np.random.default_rng(0)
    h = linalg.random_hermitian(rng, 6)
    dt = 0.01
    w, v = oracles.jacobi_eigh(h)
    exact = (v * np.exp(-1j * w * dt)) @ v.conj().T
    step = dot.rk4_step_matrix(h, dt)
    # local error of RK4 is O((|H| dt)^5)
    assert np.max(np.abs(step - exact)) < (linalg.operator_norm(h) * dt) ** 5


def test_propagate_rejects_unstable_step():
    h = np.diag([100.0, -100.0]).astype(complex)
    with pytest.raises(ConfigurationError):
        dot.propagate(np.array([1, 0], dtype=complex), h, 1.0, 0.01)


def test_propagate_rejects_unnormalised_state():
    with pytest.raises(ContractViolation):
        dot.propagate(np.array([1, 1], dtype=complex), np.eye(2), 1.0, 0.01)


def test_zero_coupling_is_frozen():
    params = dataclasses.replace(SMALL, coupling=0.0)
    traj = dot.dot_trajectory(params, "excited", t_final=2.0, n_steps=20)
    np.testing.assert_allclose(qsl.theta_r_of_t(traj), 0.0, atol=1e-7)
    assert np.all(traj.dissipator_opnorms < 1e-12)


def test_energy_and_norm_conserved():
    traj = dot.dot_trajectory(SMALL, "coherent", t_final=4.0, n_steps=80)
    assert traj.meta["energy_drift"] < 1e-8
    assert traj.meta["norm_drift"] < 1e-6


def test_coupling_matrix_is_seeded():
    a = dot.coupling_matrix(SMALL)
    np.testing.assert_array_equal(a, dot.coupling_matrix(SMALL))
    assert not np.allclose(a, dot.coupling_matrix(dataclasses.replace(SMALL, seed=5)))


def test_spread_conventions():
    assert dot.spread_value(SMALL, "half") == SMALL.delta_e
    assert dot.spread_value(SMALL, "full") == 2 * SMALL.delta_e
    assert dot.spread_value(SMALL) == pytest.approx(SMALL.delta_e)
    with pytest.raises(ContractViolation):
        dot.spread_value(SMALL, "quarter")


def test_spread_vanishes_when_state_commutes():
    traj = dot.dot_trajectory(SMALL, "excited", t_final=1.0, n_steps=10)
    assert np.all(traj.hamiltonian_spreads == 0)
    traj = dot.dot_trajectory(SMALL, "coherent", t_final=1.0, n_steps=10)
    assert np.all(traj.hamiltonian_spreads[:5] == SMALL.delta_e)


def test_invalid_params():
    with pytest.raises(ContractViolation):
        dot.DotParams(n1=0)
    with pytest.raises(ContractViolation):
        dot.DotParams(initial_level=600)
    with pytest.raises(ContractViolation):
        dot.DotParams(spin_term="double")
    with pytest.raises(ContractViolation):
        dot.initial_state(SMALL, "mixed")
