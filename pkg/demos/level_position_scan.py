"""Stationary occupation versus level position.

With pump = loss and no structured bath the stationary state is fully mixed
(n = 1/2) no matter where the level sits.  The zero-temperature band breaks
that: levels below its chemical potential fill, levels above it drain.
"""

from ncasolver.analysis import steady_state_scan
from ncasolver.config import run_config_from_dict

BASE = {
    "model": {"eps0": 0.0, "gamma_l": 0.5, "gamma_p": 0.5, "gamma_d": 0.5},
    "bath": {"kind": "flat_band", "eta": 1.0, "w": 10.0},
    "grid": {"dt": 0.02, "t_max": 10.0},
    "initial_state": {"basis_label": 0},
}


def main():
    eps_values = [-8.0, -4.0, -2.0, 0.0, 2.0, 4.0, 8.0]
    dressed = steady_state_scan(run_config_from_dict(BASE), eps_values)
    markovian_base = dict(BASE, bath={"kind": "flat_band", "eta": 0.0, "w": 10.0})
    markovian = steady_state_scan(run_config_from_dict(markovian_base), eps_values)

    print(f"{'eps0':>6} {'n (eta=0)':>11} {'n (eta=1)':>11} {'stationary':>11}")
    for (eps, n0, _), (_, n1, flag) in zip(markovian, dressed):
        print(f"{eps:6.1f} {n0:11.5f} {n1:11.5f} {'yes' if flag else 'NO':>11}")
    print()
    print("the eta=1 column decreases through the band and is antisymmetric about")
    print("eps0 = 0 (particle-hole symmetry of the flat band)")


if __name__ == "__main__":
    main()
