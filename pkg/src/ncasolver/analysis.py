"""Observables, spectra, and diagnostics of solved propagator histories."""

from __future__ import annotations

import warnings
from dataclasses import dataclass, replace

import numpy as np

from .errors import NumericsError, StateError
from .liouville import trace_functional, unvectorize, vectorize
from .nca import solve_dyson

UNIT_EIGENVALUE_TOL = 1e-6
STATIONARITY_TOL = 1e-3


def evolve_state(hist, rho0):
    """Propagate an initial density matrix: rho(t_j) = unvec(V[j] vec(rho0)).

    Returns an (L+1, N, N) array.  rho0 must be Hermitian with unit trace.
    """
    rho0 = np.asarray(rho0, dtype=complex)
    scale = np.abs(rho0).max()
    if scale > 0 and np.abs(rho0 - rho0.conj().T).max() > 1e-9 * scale:
        raise StateError("initial state is not Hermitian")
    if abs(np.trace(rho0) - 1.0) > 1e-9:
        raise StateError(f"initial state has trace {np.trace(rho0)}, expected 1")
    n = rho0.shape[0]
    vecs = hist.V @ vectorize(rho0)
    return vecs.reshape(hist.L + 1, n, n)


def occupation(rho, d):
    """Re tr(d^dag d rho); warns if the imaginary part exceeds 1e-10."""
    val = np.trace(d.conj().T @ d @ np.asarray(rho, dtype=complex))
    if abs(val.imag) > 1e-10:
        warnings.warn(f"occupation has imaginary part {val.imag:.3e}", stacklevel=2)
    return float(val.real)


def occupation_series(hist, rho0, d):
    """times, n(t_j) for a propagated initial state.

    Values outside [0, 1] are possible (the resummation does not guarantee
    positivity) and are logged as warnings, not raised.
    """
    states = evolve_state(hist, rho0)
    num = d.conj().T @ d
    values = np.einsum("ab,jba->j", num, states).real
    if values.min() < -1e-6 or values.max() > 1 + 1e-6:
        warnings.warn(
            f"occupation leaves [0, 1]: min {values.min():.3e}, max {values.max():.3e}",
            stacklevel=2,
        )
    return hist.times(), values


@dataclass
class SpectrumSeries:
    """Propagator eigenvalues over time, index 0 reserved for the one closest to 1.

    ``unit_eigenvalue_error`` is |lambda_0 - 1| per time; ``nonunit_trace``
    the largest |tr v| among right eigenvectors whose eigenvalue is further
    than UNIT_EIGENVALUE_TOL from 1 (0 where there are none); and
    ``trace_row_defect`` the per-time defect of <<1| V = <<1|.
    """

    times: np.ndarray
    eigenvalues: np.ndarray
    unit_eigenvalue_error: np.ndarray
    nonunit_trace: np.ndarray
    trace_row_defect: np.ndarray

    @property
    def magnitudes(self):
        return np.abs(self.eigenvalues)


def propagator_spectrum(hist):
    """Eigen-systems of V[j] for every grid point, sorted for plotting.

    Per time point the eigenvalue closest to 1 goes first, the rest follow by
    descending magnitude; the trace of every non-unit right eigenvector and
    the left trace-functional defect are recorded as diagnostics.
    """
    times = hist.times()
    n2 = hist.V.shape[1]
    n = int(round(np.sqrt(n2)))
    one = trace_functional(n)
    eigenvalues = np.empty((hist.L + 1, n2), dtype=complex)
    unit_err = np.empty(hist.L + 1)
    nonunit_trace = np.empty(hist.L + 1)
    row_defect = np.empty(hist.L + 1)
    for j, v in enumerate(hist.V):
        try:
            vals, vecs = np.linalg.eig(v)
        except np.linalg.LinAlgError as exc:
            raise NumericsError(f"eigendecomposition failed at step {j}") from exc
        k0 = int(np.argmin(np.abs(vals - 1.0)))
        rest = [k for k in range(n2) if k != k0]
        rest.sort(key=lambda k: -abs(vals[k]))
        order = [k0] + rest
        eigenvalues[j] = vals[order]
        unit_err[j] = abs(vals[k0] - 1.0)
        traces = [
            abs(np.trace(unvectorize(vecs[:, k])))
            for k in range(n2)
            if abs(vals[k] - 1.0) > UNIT_EIGENVALUE_TOL
        ]
        nonunit_trace[j] = max(traces) if traces else 0.0
        row_defect[j] = float(np.abs(one @ v - one).max())
    return SpectrumSeries(
        times=times,
        eigenvalues=eigenvalues,
        unit_eigenvalue_error=unit_err,
        nonunit_trace=nonunit_trace,
        trace_row_defect=row_defect,
    )


def positivity_monitor(states):
    """Minimum eigenvalue of each (Hermitian) state; negative values are
    reported, not raised -- the resummation does not guarantee positivity."""
    return np.array([np.linalg.eigvalsh(rho).min() for rho in np.asarray(states)])


def is_stationary(values, rel_window=0.1, tol=STATIONARITY_TOL):
    """True when the series moved less than tol over the trailing window."""
    values = np.asarray(values)
    k = int(round((1.0 - rel_window) * (len(values) - 1)))
    return bool(abs(values[-1] - values[k]) < tol)


def steady_state_scan(base, eps_values):
    """Final occupation versus level position: one dressed solve per entry.

    ``base`` is a RunConfig; returns a list of (eps0, n_final, stationary)
    tuples, where stationary flags whether n moved by less than 1e-3 over the
    last 10% of the run.
    """
    from .config import initial_state_matrix, problem_from_config

    rows = []
    for eps in eps_values:
        cfg = replace(base, model=replace(base.model, eps0=float(eps)))
        prob, d = problem_from_config(cfg)
        hist = solve_dyson(prob)
        _, nvals = occupation_series(hist, initial_state_matrix(cfg), d)
        rows.append((float(eps), float(nvals[-1]), is_stationary(nvals)))
    return rows
