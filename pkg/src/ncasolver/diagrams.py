"""Brute-force first-order (single hybridization line) propagator correction.

Direct two-dimensional quadrature of the contour double integral over the
square [0, t]^2, split at t1 = t2 so the time ordering is resolved on each
side of the diagonal separately (statistics signs from the contour
reordering included term by term).  Bare legs are exact matrix exponentials
of the Liouvillian, so the only error here is quadrature: agreement with the
kernel-based first iterate V0 * Sigma0 * V0 validates every sign and
ordering convention of the self-energy, independently of the time stepper.

The 2-D rule is the product trapezoid with the diagonal counted at half
weight in each triangle, which tiles the full-square trapezoid rule and is
symmetric under exchange of the two integration variables.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np

from .errors import GridError
from .hybridization import HybridizationTable
from .liouville import MINUS, PLUS, contour_superop, matrix_exp
from .nca import NcaProblem, nca_self_energy

# Contour reordering coefficients of the four branch-sign combinations,
# per side of the diagonal, as (constant, power of xi).
_LOWER_COEFF = {  # t2 < t1, operator order Ddag(t1) ... D(t2)
    (PLUS, PLUS): (1, 0),
    (PLUS, MINUS): (-1, 1),
    (MINUS, PLUS): (-1, 0),
    (MINUS, MINUS): (1, 1),
}
_UPPER_COEFF = {  # t2 > t1, operator order D(t2) ... Ddag(t1)
    (PLUS, PLUS): (1, 1),
    (PLUS, MINUS): (-1, 1),
    (MINUS, PLUS): (-1, 0),
    (MINUS, MINUS): (1, 0),
}


@dataclass(frozen=True)
class BareTermConfig:
    """Quadrature setup for the first-order term.

    ``lesser``/``greater`` evaluate the bath components at arbitrary signed
    times (vectorized over ndarrays); the quadrature step may be finer than
    the solver grid of ``prob``, whose table only contributes its statistics
    sign here.
    """

    prob: NcaProblem
    quad_dt: float
    lesser: Callable
    greater: Callable

    def __post_init__(self):
        if self.quad_dt <= 0:
            raise GridError(f"quad_dt must be positive, got {self.quad_dt}")


def _quad_steps(t, h):
    m = round(t / h)
    if m < 1 or abs(t - m * h) > 1e-9 * h:
        raise GridError(f"t = {t} is not a positive multiple of quad_dt = {h}")
    return int(m)


def _bare_legs(cfg, m):
    liou = cfg.prob.liouvillian
    return np.stack([matrix_exp(liou, k * cfg.quad_dt) for k in range(m + 1)])


def _half_square_sum(v0, mid_by_lag, delta_by_lag, h):
    """h^2 * sum over {0 <= j, j+l <= M} of w(j,l) delta[l] v0[M-j-l] @ mid[l] @ v0[j].

    w(j, l) is the product trapezoid weight with the diagonal (l = 0) at half
    weight; summed over both triangle orientations this tiles the square rule.
    """
    m = len(v0) - 1
    wout = np.ones(m + 1)
    wout[0] = wout[-1] = 0.5
    n2 = v0.shape[1]
    acc = np.zeros((n2, n2), dtype=complex)
    for lag in range(m + 1):
        k = m - lag + 1  # number of points at this lag
        w = wout[:k] * wout[lag:]
        if lag == 0:
            w = 0.5 * w
        prod = (v0[:k][::-1] @ mid_by_lag[lag]) @ v0[:k]
        acc += delta_by_lag[lag] * np.einsum("j,jab->ab", w, prod)
    return h * h * acc


def bare_first_order(t, cfg):
    """First-order correction V^(1)(t, 0) by direct contour quadrature.

    Sums the four branch-sign combinations, each split at the diagonal with
    its own reordered operator string and statistics factor; the assembled
    double integral is i V^(1), so the overall 1/i is applied at the end.
    """
    prob = cfg.prob
    h = cfg.quad_dt
    m = _quad_steps(t, h)
    v0 = _bare_legs(cfg, m)
    lags = np.arange(m + 1) * h
    les = {+1: np.asarray(cfg.lesser(lags), dtype=complex),
           -1: np.asarray(cfg.lesser(-lags), dtype=complex)}
    gtr = {+1: np.asarray(cfg.greater(lags), dtype=complex),
           -1: np.asarray(cfg.greater(-lags), dtype=complex)}

    total = np.zeros_like(v0[0])
    for d in prob.d_ops:
        ann = {g: contour_superop("annihilate", g, d) for g in (PLUS, MINUS)}
        cre = {g: contour_superop("create", g, d) for g in (PLUS, MINUS)}
        for g1 in (PLUS, MINUS):
            for g2 in (PLUS, MINUS):
                # lower triangle: Delta^{g1 g2}(t1, t2) at lag +tau, component set by g2
                const, xi_pow = _LOWER_COEFF[(g1, g2)]
                coeff = const * prob.xi**xi_pow
                delta = gtr[+1] if g2 == PLUS else les[+1]
                mid = (cre[g1] @ v0) @ ann[g2]
                total += coeff * _half_square_sum(v0, mid, delta, h)
                # upper triangle: same Delta labels at lag -tau, component set by g1
                const, xi_pow = _UPPER_COEFF[(g1, g2)]
                coeff = const * prob.xi**xi_pow
                delta = les[-1] if g1 == PLUS else gtr[-1]
                mid = (ann[g2] @ v0) @ cre[g1]
                total += coeff * _half_square_sum(v0, mid, delta, h)
    return -1j * total


def first_order_propagator(t, cfg):
    """V0(t) + V^(1)(t, 0): the propagator truncated after one hybridization line."""
    return matrix_exp(cfg.prob.liouvillian, t) + bare_first_order(t, cfg)


def fine_grid_problem(cfg, m):
    """The problem of ``cfg`` re-sampled on the quadrature grid (L = m steps)."""
    prob = cfg.prob
    h = cfg.quad_dt
    lags = np.arange(-m, m + 1) * h
    table = HybridizationTable(
        dt=h,
        L=m,
        lesser_two_sided=np.asarray(cfg.lesser(lags), dtype=complex),
        greater_two_sided=np.asarray(cfg.greater(lags), dtype=complex),
        xi=prob.xi,
    )
    return NcaProblem(
        liouvillian=prob.liouvillian,
        d_ops=prob.d_ops,
        hyb=table,
        dt=h,
        L=m,
        xi=prob.xi,
    )


def first_dyson_iterate(t, cfg, prob=None):
    """V0 * Sigma0 * V0 with the kernel built from the bare propagator.

    Evaluated with the same symmetric triangle rule as bare_first_order;
    equality of the two (to quadrature rounding) is the content of the
    contour-reordering identity behind the kernel.  ``prob`` overrides the
    problem used for the kernel, which the negative-control test exploits.
    """
    h = cfg.quad_dt
    m = _quad_steps(t, h)
    v0 = _bare_legs(cfg, m)
    kernel_prob = prob if prob is not None else fine_grid_problem(cfg, m)
    sigma0 = np.stack(
        [nca_self_energy(v0[l], l * h, 0.0, kernel_prob) for l in range(m + 1)]
    )
    return _half_square_sum(v0, sigma0, np.ones(m + 1), h)


def compare_first_order(t, cfg, kernel_prob=None):
    """Max deviation between the direct quadrature and the kernel-based iterate.

    Returns (bare, iterate, deviation) where deviation is the worst entry
    difference relative to the largest entry of the iterate (0 when both
    vanish, as for eta = 0).
    """
    bare = bare_first_order(t, cfg)
    iterate = first_dyson_iterate(t, cfg, prob=kernel_prob)
    scale = float(np.abs(iterate).max())
    diff = float(np.abs(bare - iterate).max())
    if scale == 0.0:
        deviation = 0.0 if diff == 0.0 else float("inf")
    else:
        deviation = diff / scale
    return bare, iterate, deviation


def _pointwise_first_order(t, cfg, swap_variables=False):
    """Plain-loop reference evaluation of bare_first_order.

    Iterates the quadrature points one by one (optionally with the two time
    variables exchanged); used to validate the batched lag evaluation and
    the exchange symmetry of the 2-D rule.
    """
    prob = cfg.prob
    h = cfg.quad_dt
    m = _quad_steps(t, h)
    v0 = _bare_legs(cfg, m)
    wout = np.ones(m + 1)
    wout[0] = wout[-1] = 0.5

    def weight(i, j):
        w = wout[i] * wout[j]
        return 0.5 * w if i == j else w

    total = np.zeros_like(v0[0])
    for d in prob.d_ops:
        ann = {g: contour_superop("annihilate", g, d) for g in (PLUS, MINUS)}
        cre = {g: contour_superop("create", g, d) for g in (PLUS, MINUS)}
        for g1 in (PLUS, MINUS):
            for g2 in (PLUS, MINUS):
                const, xi_pow = _LOWER_COEFF[(g1, g2)]
                c_low = const * prob.xi**xi_pow
                const, xi_pow = _UPPER_COEFF[(g1, g2)]
                c_up = const * prob.xi**xi_pow
                for i1 in range(m + 1):          # t1 index
                    for i2 in range(m + 1):      # t2 index
                        w = weight(i1, i2)
                        if swap_variables:
                            i1_, i2_ = i2, i1
                        else:
                            i1_, i2_ = i1, i2
                        tau = (i1_ - i2_) * h
                        if i2_ <= i1_:
                            delta = cfg.greater(tau) if g2 == PLUS else cfg.lesser(tau)
                            term = v0[m - i1_] @ cre[g1] @ v0[i1_ - i2_] @ ann[g2] @ v0[i2_]
                            total += c_low * w * delta * term
                        if i2_ >= i1_:
                            dval = cfg.lesser(tau) if g1 == PLUS else cfg.greater(tau)
                            term = v0[m - i2_] @ ann[g2] @ v0[i2_ - i1_] @ cre[g1] @ v0[i1_]
                            total += c_up * w * dval * term
    return -1j * h * h * total
