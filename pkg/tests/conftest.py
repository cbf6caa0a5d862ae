import numpy as np
import pytest

from ncasolver import (
    FlatBandParams,
    NcaProblem,
    build_liouvillian,
    sample_flat_band,
    solve_dyson,
)
from ncasolver.config import ANNIHILATION_2, ModelConfig, lindblad_model

D_OP = ANNIHILATION_2
GROUND = np.diag([1.0, 0.0]).astype(complex)


def case_liouvillian(eps0=5.0, gamma_l=0.5, gamma_p=0.5, gamma_d=0.5):
    return build_liouvillian(lindblad_model(ModelConfig(eps0, gamma_l, gamma_p, gamma_d)))


def case_problem(eps0=5.0, gamma_l=0.5, gamma_p=0.5, gamma_d=0.5,
                 eta=1.0, w=10.0, dt=0.02, t_max=10.0):
    steps = int(round(t_max / dt))
    table = sample_flat_band(FlatBandParams(eta, w), dt, steps)
    return NcaProblem(
        liouvillian=case_liouvillian(eps0, gamma_l, gamma_p, gamma_d),
        d_ops=(D_OP,),
        hyb=table,
        dt=dt,
        L=steps,
    )


def random_hermitian(rng, n=2, unit_trace=False):
    a = rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))
    h = 0.5 * (a + a.conj().T)
    if unit_trace:
        h = h + (1.0 - np.trace(h).real) / n * np.eye(n)
    return h


@pytest.fixture(scope="session")
def fig3_history():
    """The full case-study run (eps0=5, gammas 0.5, w=10, eta=1, dt=0.02, t_max=10)."""
    prob = case_problem()
    return prob, solve_dyson(prob)
