"""Print the classical table, the 5x5 quantum bimatrix and the seven-profile column."""
import argparse

from ewlgame import analysis as an
from ewlgame.protocol import GameConfig
from ewlgame.report import display, display_pair


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--alpha", type=float, default=5.0)
    ap.add_argument("--beta", type=float, default=3.0)
    ap.add_argument("--gamma", type=float, default=1.0)
    args = ap.parse_args()
    cfg = GameConfig(args.alpha, args.beta, args.gamma)

    bm = an.classical_bimatrix(cfg.alpha, cfg.beta, cfg.gamma)
    print("classical game (Alice rows, Bob columns)")
    for r in an.CLASSICAL_MOVES:
        print(f"  {r}  " + "  ".join(display_pair(*bm[(r, c)]) for c in an.CLASSICAL_MOVES))
    print(f"  pure Nash pairs: {sorted(an.classical_nash_pairs(cfg))}\n")

    labels = [lab for lab, _ in an.TABLE_STRATEGIES]
    print("quantum bimatrix at maximal entanglement")
    print(" " * 12 + "".join(f"{lab:>13}" for lab in labels))
    for lab, row in zip(labels, an.bimatrix_table(cfg)):
        print(f"{lab:>12}" + "".join(f"{display_pair(c.a, c.b):>13}" for c in row))
    print()

    print("named profiles")
    for lab, _, pay in an.theory_column(cfg):
        print(f"  {lab:<20} {display(pay.a):>5} {display(pay.b):>5}")


if __name__ == "__main__":
    main()
