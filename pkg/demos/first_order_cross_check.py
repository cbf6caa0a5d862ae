"""Cross-validation of the memory kernel against direct quadrature.

The one-hybridization-line correction can be computed two independent ways:
by brute-force 2-D quadrature of the contour double integral (time orderings
and statistics signs resolved term by term), or as V0 * Sigma0 * V0 with the
kernel formula evaluated on the bare propagator.  Exact agreement pins every
sign convention; flipping the statistics sign on one side must break it.
"""

import dataclasses

import numpy as np

from ncasolver import (
    BareTermConfig,
    FlatBandParams,
    NcaProblem,
    build_liouvillian,
    compare_first_order,
    flat_band_greater,
    flat_band_lesser,
    sample_flat_band,
)
from ncasolver.config import ANNIHILATION_2 as d, ModelConfig, lindblad_model
from ncasolver.diagrams import fine_grid_problem


def main():
    params = FlatBandParams(1.0, 10.0)
    liou = build_liouvillian(lindblad_model(ModelConfig(5.0, 0.5, 0.5, 0.5)))
    table = sample_flat_band(params, 0.02, 100)
    prob = NcaProblem(liouvillian=liou, d_ops=(d,), hyb=table, dt=0.02, L=100)
    cfg = BareTermConfig(
        prob=prob,
        quad_dt=0.005,
        lesser=lambda t: flat_band_lesser(t, params),
        greater=lambda t: flat_band_greater(t, params),
    )

    bare, iterate, deviation = compare_first_order(1.0, cfg)
    print(f"first-order term at t = 1, quadrature step 0.005")
    print(f"  |V1| scale:                 {np.abs(bare).max():.6f}")
    print(f"  relative deviation:         {deviation:.3e}  -> {'PASS' if deviation < 1e-3 else 'FAIL'}")

    good = fine_grid_problem(cfg, 200)
    flipped = dataclasses.replace(good, hyb=dataclasses.replace(good.hyb, xi=+1), xi=+1)
    _, _, control = compare_first_order(1.0, cfg, kernel_prob=flipped)
    print(f"  sign-flipped control:       {control:.3e}  -> {'FAIL (as it must)' if control > 1e-3 else 'unexpected PASS'}")

    print()
    print("quadrature self-convergence (halving the step, second order):")
    prev = None
    for h in (0.02, 0.01, 0.005):
        c = dataclasses.replace(cfg, quad_dt=h)
        val, _, _ = compare_first_order(1.0, c)
        if prev is not None:
            print(f"  step {h:>6}: change vs previous {np.abs(val - prev).max():.3e}")
        prev = val


if __name__ == "__main__":
    main()
