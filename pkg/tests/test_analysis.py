import numpy as np
import pytest

from conftest import D_OP, GROUND, case_problem
from ncasolver import (
    StateError,
    evolve_state,
    occupation,
    positivity_monitor,
    propagator_spectrum,
    solve_dyson,
    steady_state_scan,
)
from ncasolver.analysis import UNIT_EIGENVALUE_TOL, is_stationary
from ncasolver.config import run_config_from_dict


def test_evolve_state_initial_point_exact():
    prob = case_problem(t_max=1.0)
    hist = solve_dyson(prob)
    states = evolve_state(hist, GROUND)
    assert np.array_equal(states[0], GROUND)


def test_evolve_state_validates_input():
    prob = case_problem(t_max=1.0)
    hist = solve_dyson(prob)
    with pytest.raises(StateError):
        evolve_state(hist, np.diag([2.0, 0.0]))
    with pytest.raises(StateError):
        evolve_state(hist, np.array([[0.5, 0.3], [0.1, 0.5]]))


def test_markovian_relaxation_to_fully_mixed():
    prob = case_problem(eta=0.0, gamma_l=0.5, gamma_p=0.5, t_max=10.0)
    hist = solve_dyson(prob)
    states = evolve_state(hist, GROUND)
    assert np.abs(states[-1] - np.diag([0.5, 0.5])).max() < 1e-3
    traces = np.trace(states, axis1=1, axis2=2)
    assert np.abs(traces - 1.0).max() < 1e-9


def test_occupation_values():
    assert occupation(np.diag([1.0, 0.0]), D_OP) == 0.0
    assert occupation(np.diag([0.0, 1.0]), D_OP) == 1.0
    assert occupation(np.diag([0.5, 0.5]), D_OP) == 0.5


def test_spectrum_identity_start():
    prob = case_problem(t_max=1.0)
    hist = solve_dyson(prob)
    spec = propagator_spectrum(hist)
    assert np.abs(spec.eigenvalues[0] - 1.0).max() < 1e-14
    assert spec.unit_eigenvalue_error[0] == 0.0


def test_markovian_spectrum_matches_analytic_decay():
    gl = gp = gd = 0.5
    prob = case_problem(eps0=1.0, eta=0.0, dt=1e-3, t_max=2.0)
    hist = solve_dyson(prob)
    spec = propagator_spectrum(hist)
    t = spec.times
    mags = np.sort(spec.magnitudes, axis=1)
    pair = np.exp(-(0.5 * (gl + gp) + 0.5 * gd) * t)
    analytic = np.sort(
        np.stack([np.ones_like(t), np.exp(-(gl + gp) * t), pair, pair], axis=1), axis=1
    )
    assert (np.abs(mags - analytic) / analytic).max() < 0.02
    # the slow pair is a complex-conjugate doublet: identical magnitude columns
    assert np.abs(mags[:, 1] - mags[:, 2]).max() < 1e-9


def test_case_study_spectral_structure(fig3_history):
    _, hist = fig3_history
    spec = propagator_spectrum(hist)
    assert spec.unit_eigenvalue_error.max() < 1e-6
    assert spec.nonunit_trace.max() < 1e-6 * 2
    assert spec.trace_row_defect.max() < 1e-9
    # exactly one unit eigenvalue per time once the degenerate t = 0 point is past
    for j in range(1, hist.L + 1):
        close = np.abs(spec.eigenvalues[j] - 1.0) <= UNIT_EIGENVALUE_TOL
        assert close.sum() == 1
    # all non-unit magnitudes decay to zero at long times
    assert np.abs(spec.eigenvalues[-1][1:]).max() < 0.05


def test_positivity_monitor_values():
    vals = positivity_monitor([np.diag([0.5, 0.5]), GROUND])
    assert vals[0] == 0.5
    assert vals[1] == 0.0


def test_positivity_monitor_on_case_study(fig3_history):
    _, hist = fig3_history
    states = evolve_state(hist, GROUND)
    vals = positivity_monitor(states)
    assert np.all(np.isfinite(vals))
    # diagnostic only: the resummation does not guarantee positivity, but the
    # case study should not be grossly unphysical
    assert vals.min() > -0.1


def _scan_config(gamma_l, gamma_p, eta, t_max=15.0):
    return run_config_from_dict(
        {
            "model": {"eps0": 1.0, "gamma_l": gamma_l, "gamma_p": gamma_p, "gamma_d": 0.5},
            "bath": {"kind": "flat_band", "eta": eta, "w": 10.0},
            "grid": {"dt": 0.02, "t_max": t_max},
            "initial_state": {"basis_label": 0},
        }
    )


def test_scan_markovian_is_flat_at_rate_ratio():
    cfg = _scan_config(gamma_l=0.5, gamma_p=0.25, eta=0.0)
    rows = steady_state_scan(cfg, [-2.0, 0.0, 2.0])
    expected = 0.25 / 0.75
    for _, n_final, stationary in rows:
        assert stationary
        assert abs(n_final - expected) < 1e-3


def test_scan_balanced_rates_give_half():
    cfg = _scan_config(gamma_l=0.5, gamma_p=0.5, eta=0.0)
    rows = steady_state_scan(cfg, [-1.0, 1.0])
    for _, n_final, _ in rows:
        assert abs(n_final - 0.5) < 1e-3


def test_scan_with_bath_depends_on_level_position():
    cfg = _scan_config(gamma_l=0.5, gamma_p=0.5, eta=1.0, t_max=10.0)
    rows = steady_state_scan(cfg, [-2.0, 0.0, 2.0])
    finals = [row[1] for row in rows]
    assert finals[0] > finals[1] > finals[2]
    assert finals[0] - finals[2] > 0.05


def test_is_stationary_window():
    t = np.linspace(0, 10, 501)
    assert is_stationary(0.5 - 0.5 * np.exp(-t))
    assert not is_stationary(0.1 * t)
