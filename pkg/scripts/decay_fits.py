"""Tail exponents over time for exponential and Gaussian data."""

import argparse

from ch3lab.diagnostics import decay_fit
from ch3lab.dynamics import StepControl, run
from ch3lab.grid import make_grid
from ch3lab.state import potentials
from ch3lab.waves import gaussian_triple, potential_sech_data, sech_data


def table(title, traj, use_potentials=False):
    print(title)
    for s in traj.samples:
        fields = potentials(s.state).fields if use_potentials else s.state.fields
        cells = []
        for f in fields:
            for side in ("left", "right"):
                fit = decay_fit(f, side)
                cells.append(f"{fit.alpha_hat:7.4f}{'' if fit.reliable else '*'}")
        print(f"  t={s.t:4.1f}  " + " ".join(cells))


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--n", type=int, default=4096)
    ap.add_argument("--L", type=float, default=60.0)
    ap.add_argument("--t-end", type=float, default=5.0)
    args = ap.parse_args()

    g = make_grid(args.n, args.L)
    ctl = StepControl(dt=0.01, dt_min=1e-5)
    cases = [
        ("sech data, rate 0.5 (u,v,w left/right; * = unreliable)", sech_data(g), False),
        ("potential-built data, potential rate 1.5 (m,n,l)", potential_sech_data(g), True),
        ("same run, velocities (rate about 1)", potential_sech_data(g), False),
        ("gaussian data (not exponential)", gaussian_triple(g, centers=(0.0, 0.0, 0.0)), False),
    ]
    for title, init, pot in cases:
        traj, _ = run(init, ctl, args.t_end, 1.0)
        table(title, traj, pot)


if __name__ == "__main__":
    main()
