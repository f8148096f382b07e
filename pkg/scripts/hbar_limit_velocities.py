#!/usr/bin/env python3
"""Compare the two candidate velocity laws on a harmonic axis as hbar shrinks.

Both dx/dt = 2(E - V)/P and the alternative (P g + (P^2/2) dg/dP)/m approach
the classical velocity, but they disagree at finite hbar; this prints the
median deviation from sqrt(2(E - V)) over a window for a few hbar values.
"""

import argparse
import math

import numpy as np

from qshje import (
    PhysicalConstants,
    Potential1D,
    ReducedAction1D,
    pair_from_callables,
    solve_pair,
    velocity,
    velocity_alt,
)


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--energy", type=float, default=0.9)
    ap.add_argument("--hbars", type=float, nargs="+",
                    default=[0.8, 0.4, 0.2, 0.1])
    args = ap.parse_args()

    pot = Potential1D.harmonic(1.0)
    window = np.linspace(0.35, 0.65, 21)
    print(f"{'hbar':>6} {'median |v - v_cl|':>20} {'median |v_alt - v_cl|':>22}")
    for hbar in args.hbars:
        c = PhysicalConstants(hbar=hbar, mass=1.0)
        base = solve_pair(pot, args.energy, (-1.25, 1.25), 0.0, c, step=2e-4)
        # rescale the basis so the denominator tracks 1/k and the momentum
        # tends to the classical one in the small-hbar limit
        s = math.sqrt(math.sqrt(2.0 * args.energy) / hbar)
        pair = pair_from_callables(
            x1=lambda x, b=base: b.x1(x) / s,
            x2=lambda x, b=base: b.x2(x) * s,
            dx1=lambda x, b=base: b.dx1(x) / s,
            dx2=lambda x, b=base: b.dx2(x) * s,
            potential=pot, energy=args.energy, domain=(-1.25, 1.25),
            anchor=0.0, constants=c,
        )
        a = ReducedAction1D(pair=pair, gamma_num=0.0, gamma_den=0.0,
                            constants=c)
        ev = np.median([
            abs(velocity(a, args.energy, pot, x)
                - math.sqrt(2.0 * (args.energy - pot(x)))) for x in window
        ])
        ea = np.median([
            abs(velocity_alt(a, args.energy, pot, x)
                - math.sqrt(2.0 * (args.energy - pot(x)))) for x in window
        ])
        print(f"{hbar:6.2f} {ev:20.3e} {ea:22.3e}")


if __name__ == "__main__":
    main()
