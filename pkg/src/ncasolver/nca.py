"""Self-consistent resummation of the dressed evolution superoperator.

The dressed propagator obeys a causal Volterra integro-differential equation:
its time derivative is the Markovian generator acting on it plus a memory
convolution with the one-hybridization-line kernel, where the kernel itself
is built from the dressed propagator (only non-crossing insertions survive
the resummation).  Stepping is first-order explicit Euler with the trapezoid
rule for the memory integral; the kernel at lag tau always uses the already
computed propagator at tau, so no inner self-consistency iteration is
needed.  With the causal-limit convention for the equal-time bath components
the vectorized identity is an exact left fixed point of the discrete update,
so trace preservation holds to rounding at every step.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DivergenceError, GridError, ModelError, StateError
from .hybridization import HybridizationTable, lag_index
from .liouville import MINUS, PLUS, contour_superop, matrix_exp

DIVERGENCE_LIMIT = 1e12

_BRANCHES = (PLUS, MINUS)


@dataclass(frozen=True)
class NcaProblem:
    """Inputs of a dressed-propagator solve.

    ``liouvillian`` is the N^2 x N^2 Markovian generator, ``d_ops`` the
    per-flavor annihilation matrices, ``hyb`` the (flavor-diagonal) bath
    table.  ``dt`` must equal ``hyb.dt`` exactly and ``L`` may not exceed
    ``hyb.L``; xi = -1 is the supported fermionic case.
    """

    liouvillian: np.ndarray
    d_ops: tuple
    hyb: HybridizationTable
    dt: float
    L: int
    xi: int = -1

    def __post_init__(self):
        liou = np.asarray(self.liouvillian, dtype=complex)
        object.__setattr__(self, "liouvillian", liou)
        d_ops = tuple(np.asarray(d, dtype=complex) for d in self.d_ops)
        if not d_ops:
            raise ModelError("need at least one flavor operator")
        object.__setattr__(self, "d_ops", d_ops)
        n = d_ops[0].shape[0]
        if any(d.shape != (n, n) for d in d_ops):
            raise ModelError("flavor operators must share one square shape")
        if liou.shape != (n * n, n * n):
            raise ModelError(
                f"liouvillian shape {liou.shape} does not match flavor dimension {n}"
            )
        if self.xi not in (-1, 1):
            raise ModelError(f"statistics sign must be +-1, got {self.xi}")
        if self.xi != self.hyb.xi:
            raise ModelError("problem and hybridization table disagree on statistics sign")
        if self.dt != self.hyb.dt:
            raise ModelError(
                f"dt = {self.dt} must match the hybridization grid dt = {self.hyb.dt} exactly"
            )
        if not 1 <= self.L <= self.hyb.L:
            raise ModelError(f"need 1 <= L <= hyb.L = {self.hyb.L}, got L = {self.L}")
        ann = {g: tuple(contour_superop("annihilate", g, d) for d in d_ops) for g in _BRANCHES}
        cre = {g: tuple(contour_superop("create", g, d) for d in d_ops) for g in _BRANCHES}
        object.__setattr__(self, "_ann", ann)
        object.__setattr__(self, "_cre", cre)

    @property
    def dim(self):
        return self.d_ops[0].shape[0]


def nca_self_energy(Vt, t1, t2, prob):
    """Memory kernel Sigma(t1, t2) built from the dressed propagator Vt = V(t1 - t2).

    Per flavor pair and contour branches alpha, beta in {+,-}:

        Sigma = sum  -alpha^((1+xi)/2) * beta * i *
                [ Delta^{beta alpha}(t1, t2) Ddag_beta Vt D_alpha
                  + xi Delta^{alpha beta}(t2, t1) D_beta Vt Ddag_alpha ]

    Branch components are resolved on the causal domain t1 >= t2, each term
    with the limit from its own side: the first term sees (++ -> greater,
    -- -> lesser) at lag +tau, the reversed-argument term (++ -> lesser,
    -- -> greater) at lag -tau.  This per-term limit is what cancels the
    beta sum against the trace functional exactly, including at tau = 0.
    """
    tau = t1 - t2
    if tau < 0:
        raise GridError(f"self-energy needs t1 >= t2, got t1 - t2 = {tau}")
    j = lag_index(tau, prob.dt)
    # Both tables collapse to a function of alpha alone on the causal domain.
    first = {PLUS: prob.hyb.greater_at(j), MINUS: prob.hyb.lesser_at(j)}
    second = {PLUS: prob.hyb.lesser_at(-j), MINUS: prob.hyb.greater_at(-j)}
    stat_exp = (1 + prob.xi) // 2
    n2 = prob.liouvillian.shape[0]
    sigma = np.zeros((n2, n2), dtype=complex)
    ann, cre = prob._ann, prob._cre
    for a in range(len(prob.d_ops)):
        b = a  # tabulated hybridization is flavor-diagonal
        for alpha in _BRANCHES:
            for beta in _BRANCHES:
                pref = -(alpha**stat_exp) * beta * 1j
                sigma += pref * first[alpha] * (cre[beta][b] @ Vt @ ann[alpha][a])
                sigma += pref * prob.xi * second[alpha] * (ann[beta][b] @ Vt @ cre[alpha][a])
    return sigma


@dataclass
class PropagatorHistory:
    """Causal grid histories V[j] ~ V(j dt) and Sigma[j] ~ Sigma(j dt), j = 0..L."""

    dt: float
    L: int
    V: np.ndarray
    Sigma: np.ndarray

    def times(self):
        return np.arange(self.L + 1) * self.dt


def _convolve(left, right, dt):
    """Trapezoid-weighted sum dt * sum_j' left[j] @ right[j] over aligned stacks."""
    m = len(left) - 1
    prod = left @ right
    return dt * (prod[1:m].sum(axis=0) + 0.5 * (prod[0] + prod[m]))


def trapezoid_convolution(hist, m):
    """Trapezoid discretization of int_0^{t_m} dt1 Sigma(t_m - t1) V(t1).

    Returns dt/2 * sum_{l=0}^{m-1} [Sigma((m-l-1) dt) V((l+1) dt)
    + Sigma((m-l) dt) V(l dt)], and the zero superoperator for m = 0.
    Raises StateError if the needed history entries are not populated.
    """
    if not 0 <= m <= hist.L:
        raise StateError(f"history index {m} outside 0..{hist.L}")
    n2 = hist.V.shape[1]
    if m == 0:
        return np.zeros((n2, n2), dtype=complex)
    sigmas = hist.Sigma[: m + 1]
    props = hist.V[m::-1]
    if not (np.isfinite(sigmas).all() and np.isfinite(props).all()):
        raise StateError(f"history not populated up to index {m}")
    return _convolve(sigmas, props, hist.dt)


def solve_dyson(prob):
    """March the integro-differential equation dV/dt = L V + int_0^t Sigma(t-s) V(s) ds.

    V[0] is the identity; at step m the kernel Sigma(t_m) is built from the
    already computed V(t_m), then

        V[m+1] = V[m] + dt * (L V[m] + trapezoid_convolution(hist, m)).

    The returned history also carries Sigma on the full grid.  Any entry that
    leaves the finite range aborts with DivergenceError (reporting the step).
    """
    n2 = prob.liouvillian.shape[0]
    V = np.full((prob.L + 1, n2, n2), np.nan, dtype=complex)
    Sigma = np.full_like(V, np.nan)
    V[0] = np.eye(n2, dtype=complex)
    hist = PropagatorHistory(dt=prob.dt, L=prob.L, V=V, Sigma=Sigma)
    liou = prob.liouvillian
    dt = prob.dt
    for m in range(prob.L):
        Sigma[m] = nca_self_energy(V[m], m * dt, 0.0, prob)
        if m == 0:
            memory = np.zeros((n2, n2), dtype=complex)
        else:
            memory = _convolve(Sigma[: m + 1], V[m::-1], dt)
        V[m + 1] = V[m] + dt * (liou @ V[m] + memory)
        if not np.isfinite(V[m + 1]).all() or np.abs(V[m + 1]).max() > DIVERGENCE_LIMIT:
            raise DivergenceError(step=m + 1)
    Sigma[prob.L] = nca_self_energy(V[prob.L], prob.L * dt, 0.0, prob)
    return hist


def dyson_residual(hist, prob):
    """Max-norm defect of the integral-form Dyson equation over the grid.

    Rebuilds the bare legs V0(t_j) = exp(L t_j) by exact exponentials and
    evaluates V - V0 - V0*Sigma*V with the same trapezoid rule the solver
    uses, returning the worst entry magnitude over all grid points.  The
    value shrinks linearly with dt (first-order scheme).
    """
    dt = hist.dt
    v0 = np.stack([matrix_exp(prob.liouvillian, j * dt) for j in range(hist.L + 1)])
    inner = np.stack([trapezoid_convolution(hist, l) for l in range(hist.L + 1)])
    worst = 0.0
    for m in range(hist.L + 1):
        if m == 0:
            defect = hist.V[0] - v0[0]
        else:
            integral = _convolve(v0[m::-1], inner[: m + 1], dt)
            defect = hist.V[m] - v0[m] - integral
        worst = max(worst, float(np.abs(defect).max()))
    return worst
