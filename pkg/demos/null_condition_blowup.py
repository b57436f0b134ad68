"""Why the product structure of F matters: rho*theta versus theta^2.

Both forcings are quadratic, but F = rho * theta pairs the two null
directions while F = theta^2 feeds a single family back into itself.
Along an outgoing characteristic v = u_eta then obeys v' = v^2, a Riccati
equation that blows up at t* = 1 / max v(0) no matter how smooth the data.

This script runs identical one-directional pulse data on both systems.
The compliant run coasts to t_end; the violating one is stopped by the
amplitude monitor, and the detected time sits just above the Riccati
prediction.
"""

import math

import numpy as np

from wavestab.energy import EnergyConfig
from wavestab.profiles import builtin_profile
from wavestab.solver import GridSpec, Termination, run
from wavestab.systems import builtin_system


def main():
    amp, width = 0.4, 2.0

    def g(y):
        return np.exp(-((y / width) ** 2))

    def u0(x):
        return amp * g(-x / 2.0)

    def u1(x):
        return 0.5 * amp * (-2.0 * (-x / 2.0) / width**2) * g(-x / 2.0)

    grid = GridSpec(x_min=-40.0, x_max=40.0, nx=1025, t_end=20.0)
    profile = builtin_profile("zero")
    tracking = EnergyConfig(track=False)

    compliant = run(builtin_system("semilinear-bilinear"), profile, grid,
                    (u0, u1), tracking)
    violating = run(builtin_system("violating-F"), profile, grid,
                    (u0, u1), tracking, allow_violation=True)

    v0_max = amp * math.sqrt(2.0) / width * math.exp(-0.5)
    t_star = 1.0 / v0_max

    print(f"F = rho*theta: {compliant.termination.value} at "
          f"t = {compliant.final_state.t:.2f}")
    print(f"F = theta^2:   {violating.termination.value} at "
          f"t = {violating.blowup_time:.3f}")
    print(f"Riccati prediction t* = 1/max u_eta(0) = {t_star:.3f}")
    if violating.termination == Termination.BLOWUP:
        print(f"detected/predicted = {violating.blowup_time / t_star:.3f}")


if __name__ == "__main__":
    main()
