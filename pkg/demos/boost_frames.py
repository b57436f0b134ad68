"""Galilean boost equivalence for a quasilinear background.

When the time-direction coefficient 1 - A1 + A2 loses its safety margin
on the background, a Galilean change of frame x = x_bar - c t restores it.
The boosted frame is not a numerical trick: both frames discretize the
same equation, so evolving in either and mapping back must agree.

This script searches for the smallest adequate boost, runs the same
experiment directly and boosted, and prints the sup-norm disagreement
after mapping the boosted solution back to the direct grid.
"""

from wavestab.config import parse_config
from wavestab.experiments import run_experiment


def main():
    cfg = parse_config({
        "experiment": {"kind": "boost-equivalence", "label": "boost-demo"},
        "system": {"name": "quasilinear-scalar", "alpha": 1.0, "beta": -0.9,
                   "gamma": 1.0, "kappa": 1.0},
        "profile": {"name": "sech", "amplitude": 0.45},
        "grid": {"x_min": -40.0, "x_max": 40.0, "nx": 1024, "t_end": 20.0},
        "data": {"kind": "bump", "amplitude": 0.05, "width": 3.0},
        "energy": {"delta": 0.5, "row_stride": 4},
        "boost": {"margin": 0.2},
    })
    summary = run_experiment(cfg)
    e = summary.extras

    print(f"untransformed min eig of 1 - A1 + A2: "
          f"{e['untransformed_min_eig']:.4f} (requested margin "
          f"{e['margin']})")
    print(f"boost found:       c = {e['boost_c']}")
    print(f"direct frame:      {e['direct_termination']}")
    print(f"boosted frame:     {e['boosted_termination']}")
    print(f"mapped-back diff:  {e['diff_sup']:.3e} at t = "
          f"{e['compare_time']} (tolerance {e['diff_tolerance']})")
    print("ok" if summary.ok else "FRAMES DISAGREE")


if __name__ == "__main__":
    main()
