#!/usr/bin/env python3
"""Dwell time inside a finite barrier as a function of the axis energy.

Integrates the quantum law of motion along x through a trapezoidal barrier
with the Transmit turning-point policy and prints the time each run spends
in the classically forbidden region.
"""

import argparse
import math

from qshje import (
    EnergySplit,
    MotionConfig,
    Potential1D,
    ReducedAction1D,
    TurningPointPolicy,
    assemble_separable,
    integrate,
    solve_pair,
)


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--energies", type=float, nargs="+",
                    default=[0.3, 0.4, 0.5, 0.6, 0.7])
    ap.add_argument("--barrier-height", type=float, default=1.0)
    ap.add_argument("--t-max", type=float, default=14.0)
    args = ap.parse_args()

    barrier = Potential1D.piecewise_linear(
        [(-10.0, 0.0), (1.0, 0.0), (2.0, args.barrier_height),
         (3.0, args.barrier_height), (4.0, 0.0), (10.0, 0.0)]
    )
    free = Potential1D.zero()
    print(f"{'E_x':>6} {'dwell':>10} {'crossings':>10} {'x(t_max)':>10}")
    for ex in args.energies:
        if ex >= args.barrier_height:
            print(f"{ex:6.2f}  (no forbidden region: E above the barrier)")
            continue
        bpair = solve_pair(barrier, ex, (-10.0, 10.0), 0.0, step=2e-3)
        fpair = solve_pair(free, 0.5, (-80.0, 80.0), 0.0)
        action = assemble_separable(
            ReducedAction1D(pair=bpair, gamma_num=0.0, gamma_den=0.0, axis="x"),
            ReducedAction1D(pair=fpair, gamma_num=0.0, gamma_den=0.0, axis="y"),
            ReducedAction1D(pair=fpair, gamma_num=0.0, gamma_den=0.0, axis="z"),
        )
        cfg = MotionConfig(
            t_max=args.t_max, step=2e-3, tp_epsilon=1e-4,
            tp_policy=(TurningPointPolicy.TRANSMIT,) * 3,
        )
        traj = integrate(action, EnergySplit(ex, 0.5, 0.5),
                         (barrier, free, free), (0.0, 0.0, 0.0), cfg)
        dwell = traj.dwell_time("x")
        crossings = sum(e[2] == "TurningPointCrossing" for e in traj.events)
        print(f"{ex:6.2f} {dwell:10.4f} {crossings:10d} "
              f"{traj.states[-1].pos[0]:10.4f}")
        assert math.isfinite(dwell)


if __name__ == "__main__":
    main()
