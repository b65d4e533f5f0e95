"""How far the steepening front gets before the grid runs out of resolution.

For each n the steep-front run stops when the spectral tail passes 1e-6.  The
reached slope grows only slowly with n, so the default breaking threshold
50 sqrt(E0) needs grids far beyond desk scale.
"""

import argparse
import math
import time

from ch3lab.diagnostics import RESOLVED_TAIL, riccati_monitor
from ch3lab.dynamics import StepControl, run
from ch3lab.grid import make_grid
from ch3lab.waves import steep_front_data


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--ns", type=int, nargs="+", default=[4096, 8192, 16384, 32768, 65536])
    ap.add_argument("--L", type=float, default=8.0)
    ap.add_argument("--delta", type=float, default=0.04)
    ap.add_argument("--amplitude", type=float, default=1.0)
    args = ap.parse_args()

    print(f"{'n':>7} {'margin':>7} {'bound':>8} {'t_stop':>8} {'reason':>16} {'min slope':>10} "
          f"{'threshold':>10} {'riccati':>8} {'sec':>6}")
    for n in args.ns:
        g = make_grid(n, args.L)
        state, info = steep_front_data(g, args.amplitude, args.delta, 1.0)
        ctl = StepControl(dt=1e-3, cfl_target=0.9, dt_min=1e-9, max_tail=RESOLVED_TAIL)
        t0 = time.perf_counter()
        traj, rep = run(state, ctl, 1.0, 1e-3, keep_states=False)
        secs = time.perf_counter() - t0
        h = traj.history
        ric = riccati_monitor(h["t"], h["Q"], traj.E0, h["quartic"])
        thr = 50 * math.sqrt(info.E0)
        print(f"{n:7d} {info.margin:7.3f} {info.lifespan:8.4f} {rep.t_final:8.4f} {rep.reason:>16} "
              f"{h['min_slope'].min():10.1f} {-thr:10.1f} {len(ric.violations):8d} {secs:6.1f}")


if __name__ == "__main__":
    main()
