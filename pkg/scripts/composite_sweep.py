"""Payoffs along the composite strategy axis with both players on the same coordinate.

The axis runs theta from pi to 0 at phi = 0, then phi from 0 to pi/2 at
theta = 0. Writes long-format CSV and reports where the payoffs cross.
"""
import argparse

import numpy as np

from ewlgame import analysis as an
from ewlgame.protocol import GameConfig
from ewlgame.report import exact, to_csv


def crossings(x, gap):
    out = []
    for k in range(len(x) - 1):
        g0, g1 = gap[k], gap[k + 1]
        if abs(g0) < 1e-12:
            out.append(x[k])
        elif g0 * g1 < 0:
            out.append(x[k] - g0 * (x[k + 1] - x[k]) / (g1 - g0))
    if abs(gap[-1]) < 1e-12:
        out.append(x[-1])
    return out


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--points", type=int, default=101)
    ap.add_argument("--lambda", dest="lam", type=float, default=np.pi / 2)
    ap.add_argument("--output", help="CSV path (default: summary only)")
    args = ap.parse_args()
    cfg = GameConfig(lam=args.lam)

    ax = an.Axis.from_points("composite_diag", 0.0, an.COMPOSITE_LENGTH, args.points)
    grid = an.sweep_payoffs([ax], cfg)
    x = ax.values()
    if args.output:
        rows = [{"coord": c[0], **dict(zip(an.SWEEP_PARAMS, prm)), "payoff_a": pay.a, "payoff_b": pay.b}
                for c, prm, pay in grid.rows()]
        with open(args.output, "w", encoding="utf-8") as fh:
            fh.write(to_csv(rows))

    print(f"start (T,T): ({exact(grid.payoff_a[0])}, {exact(grid.payoff_b[0])})")
    opera = an.profile_payoffs(an.StrategyProfile.of(0, 0, 0, 0), cfg)
    print(f"at (O,O):    ({exact(opera.a)}, {exact(opera.b)})")
    print(f"end (Q,Q):   ({exact(grid.payoff_a[-1])}, {exact(grid.payoff_b[-1])})")
    for c in crossings(x, grid.payoff_a - grid.payoff_b):
        s = an.composite_to_strategy(c)
        print(f"equal payoffs at coordinate {exact(c)}: theta={exact(s.theta)} phi={exact(s.phi)}"
              f" (phi/pi = {exact(s.phi / np.pi)})")


if __name__ == "__main__":
    main()
