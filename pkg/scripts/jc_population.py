"""Excited-state population of the damped Jaynes-Cummings qubit, weak and strong coupling.

    python scripts/jc_population.py [out_dir]
"""

import sys
from pathlib import Path

from openqsl import io, jc, qsl

LAM = 1.0
COUPLINGS = {"weak (gamma0=0.4)": 0.4, "strong (gamma0=10)": 10.0}


def main(out):
    out = io.ensure_dir(out)
    t_final = 10.0
    series, times = {}, None
    for label, g0 in COUPLINGS.items():
        params = jc.JCParams(g0, LAM)
        traj = jc.jc_trajectory(jc.excited_state(), params, t_final, n_steps=2000)
        times = traj.times
        series[label] = traj.states[:, 0, 0].real
        zeros = jc.g_zeros(params, t_final)
        marker = qsl.tau_hat_m(traj) if zeros.size else None
        print(f"{label}: first zero of rho11 sampled={marker} closed form={zeros[0] if zeros.size else None}")
    io.svg_plot(out / "jc_population.svg", times, series, "lambda t", "rho11(t)")
    io.write_csv(out / "jc_population.csv", ["t", *series], zip(times, *series.values()))


if __name__ == "__main__":
    main(Path(sys.argv[1] if len(sys.argv) > 1 else "out/jc_population"))
