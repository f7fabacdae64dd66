"""Run the ideal two-spin emulator on the seven named profiles.

Reports deviation populations against the circuit probabilities and the
frame-corrected fidelity, plus a deliberately mis-set delay for contrast.
"""
import argparse

import numpy as np

from ewlgame import analysis as an
from ewlgame import nmr
from ewlgame.protocol import probability_arrays


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--j-coupling", type=float, default=nmr.J_CHLOROFORM_HZ)
    ap.add_argument("--layout", choices=nmr.LAYOUTS, default="prescribed")
    args = ap.parse_args()
    p = nmr.SpinSystemParams(j_coupling=args.j_coupling)
    lam = np.pi / 2

    print(f"epsilon = {p.epsilon:.4e}, J = {p.j_coupling} Hz, "
          f"entangler delay = {nmr.judge_delay(lam, p) * 1e3:.4f} ms")
    print(f"calibrated frame angles: {nmr.calibrate_frame(p)}")
    print(f"{'profile':<20} {'populations (OO OT TO TT)':<36} {'max |gap|':>10} {'fidelity':>12}")
    for label, prof in an.THEORY_PROFILES:
        run = nmr.run_game(prof.alice, prof.bob, lam, p, args.layout)
        ref = np.array(probability_arrays(*prof.as_tuple(), lam))
        pops = " ".join(f"{v + 0.0:7.4f}" for v in np.where(np.abs(run.populations) < 1e-9, 0.0, run.populations))
        print(f"{label:<20} {pops:<36} {np.max(np.abs(run.populations - ref)):10.2e} {run.fidelity:12.9f}")

    s = an.THEORY_PROFILES[3][1]
    bad = nmr.run_game(s.alice, s.bob, np.pi / 4, p, target_lam=lam)
    print(f"\npulses compiled for lambda = pi/4, scored at pi/2, profile {an.THEORY_PROFILES[3][0]}: "
          f"fidelity {bad.fidelity:.9f}")


if __name__ == "__main__":
    main()
