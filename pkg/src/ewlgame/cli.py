"""Command-line front end.

Exit codes: 0 success, 2 usage or domain error, 1 internal inconsistency.
"""
from __future__ import annotations

import argparse
import ast
import operator
import sys
from dataclasses import asdict, dataclass, replace

import numpy as np

from . import analysis as an
from . import nmr
from .linalg import DomainError
from .protocol import (
    GameConfig,
    StrategyParams,
    outcome_probabilities_circuit,
    outcome_probabilities_closed_form,
    payoffs,
)
from .report import display, display_pair, exact, to_csv, to_json

ORACLE_TOL = 1e-10
PULSE_TOL = 1e-6


class InconsistencyError(RuntimeError):
    """Two independent computations disagree beyond tolerance."""


# --- angle and config parsing ----------------------------------------------

_OPS = {
    ast.Add: operator.add,
    ast.Sub: operator.sub,
    ast.Mult: operator.mul,
    ast.Div: operator.truediv,
    ast.USub: operator.neg,
    ast.UAdd: operator.pos,
}


def parse_angle(text: str) -> float:
    """Radians from a literal such as ``0.3927``, ``pi/8``, ``3pi/8`` or ``3*pi/8``."""
    src = str(text).strip().replace("π", "pi")
    src = _implicit_pi(src)
    try:
        tree = ast.parse(src, mode="eval")
        return float(_eval(tree.body))
    except (SyntaxError, ValueError, ZeroDivisionError, KeyError, TypeError):
        raise argparse.ArgumentTypeError(f"cannot parse angle {text!r}") from None


def _implicit_pi(src: str) -> str:
    out = []
    for i, ch in enumerate(src):
        if src.startswith("pi", i) and i > 0 and (src[i - 1].isdigit() or src[i - 1] == "."):
            out.append("*")
        out.append(ch)
    return "".join(out)


def _eval(node):
    if isinstance(node, ast.Constant) and isinstance(node.value, (int, float)):
        return node.value
    if isinstance(node, ast.Name) and node.id == "pi":
        return np.pi
    if isinstance(node, ast.BinOp) and type(node.op) in _OPS:
        return _OPS[type(node.op)](_eval(node.left), _eval(node.right))
    if isinstance(node, ast.UnaryOp) and type(node.op) in _OPS:
        return _OPS[type(node.op)](_eval(node.operand))
    raise ValueError("unsupported expression")


def read_config_file(path: str) -> dict:
    """Flat ``key = value`` file; ``#`` starts a comment."""
    out = {}
    with open(path, encoding="utf-8") as fh:
        for n, raw in enumerate(fh, 1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise DomainError(f"{path}:{n}: expected key = value")
            key, value = (s.strip() for s in line.split("=", 1))
            out[key.replace("-", "_")] = value
    return out


@dataclass(frozen=True)
class RunConfig:
    alpha: float = 5.0
    beta: float = 3.0
    gamma: float = 1.0
    lam: float = np.pi / 2
    fmt: str | None = None
    output: str | None = None
    grid_n: int = 101
    h: float = 1e-5
    seed: int = 12345

    def __post_init__(self):
        if self.fmt not in (None, "csv", "json", "text"):
            raise DomainError(f"unknown output format {self.fmt!r}")
        if self.grid_n < 2:
            raise DomainError("grid resolution must be >= 2")
        if not self.h > 0:
            raise DomainError("finite-difference step h must be positive")
        self.game()  # validates alpha > beta > gamma and lambda

    def game(self) -> GameConfig:
        return GameConfig(self.alpha, self.beta, self.gamma, self.lam)

    def as_dict(self) -> dict:
        d = asdict(self)
        d["lambda"] = d.pop("lam")
        d["format"] = d.pop("fmt")
        return d


_CONFIG_KEYS = {
    "alpha": ("alpha", float),
    "beta": ("beta", float),
    "gamma": ("gamma", float),
    "lambda": ("lam", parse_angle),
    "lam": ("lam", parse_angle),
    "format": ("fmt", str),
    "output": ("output", str),
    "grid_n": ("grid_n", int),
    "h": ("h", float),
    "seed": ("seed", int),
}


def build_run_config(args: argparse.Namespace) -> RunConfig:
    values = {}
    if getattr(args, "config", None):
        for key, raw in read_config_file(args.config).items():
            if key not in _CONFIG_KEYS:
                raise DomainError(f"unknown config key {key!r}")
            field, conv = _CONFIG_KEYS[key]
            values[field] = conv(raw)
    for key in ("alpha", "beta", "gamma", "lam", "fmt", "output", "grid_n", "h", "seed"):
        v = getattr(args, key, None)
        if v is not None:
            values[key] = v
    return RunConfig(**values)


# --- emission ----------------------------------------------------------------


def emit(run: RunConfig, default_fmt: str, rows: list[dict], text: str | None = None,
         **extra) -> None:
    fmt = run.fmt or default_fmt
    if fmt == "json":
        body = to_json(run.as_dict(), rows, **extra)
    elif fmt == "text" and text is not None:
        body = text
    else:
        body = to_csv(rows)
    if run.output:
        with open(run.output, "w", encoding="utf-8", newline="") as fh:
            fh.write(body)
    else:
        sys.stdout.write(body)


def _profile_from_args(args) -> an.StrategyProfile:
    names = {"theta_a": "theta-a", "phi_a": "phi-a", "theta_b": "theta-b", "phi_b": "phi-b"}
    vals = {}
    for key, flag in names.items():
        vals[key] = getattr(args, key)
        try:
            if key.startswith("theta"):
                StrategyParams(vals[key], 0.0)
            else:
                StrategyParams(0.0, vals[key])
        except DomainError:
            hi = "pi" if key.startswith("theta") else "pi/2"
            raise DomainError(f"--{flag}={vals[key]!r} outside [0, {hi}]") from None
    return an.StrategyProfile.of(vals["theta_a"], vals["phi_a"], vals["theta_b"], vals["phi_b"])


def _angle_columns(p: an.StrategyProfile) -> dict:
    return dict(zip(an.SWEEP_PARAMS, (float(x) for x in p.as_tuple())))


# --- commands -----------------------------------------------------------------


def cmd_payoff(args, run: RunConfig) -> None:
    cfg = run.game()
    prof = _profile_from_args(args)
    circ = outcome_probabilities_circuit(prof.alice, prof.bob, cfg)
    closed = outcome_probabilities_closed_form(prof.alice, prof.bob, cfg)
    gap = float(np.max(np.abs(circ.as_array() - closed.as_array())))
    if gap > ORACLE_TOL:
        raise InconsistencyError(f"circuit and closed-form probabilities differ by {gap:.3g}")
    pay = payoffs(circ, cfg)
    row = {**_angle_columns(prof), "lambda": cfg.lam,
           "p_oo": circ.p_oo, "p_ot": circ.p_ot, "p_to": circ.p_to, "p_tt": circ.p_tt,
           "payoff_a": pay.a, "payoff_b": pay.b}
    text = (
        f"P_OO={exact(circ.p_oo)} P_OT={exact(circ.p_ot)} "
        f"P_TO={exact(circ.p_to)} P_TT={exact(circ.p_tt)}\n"
        f"a={exact(pay.a)} b={exact(pay.b)}\n"
    )
    emit(run, "text", [row], text)


def cmd_table(args, run: RunConfig) -> None:
    cfg = run.game()
    rows = []
    if args.which == "classical":
        bm = an.classical_bimatrix(cfg.alpha, cfg.beta, cfg.gamma)
        for ra in an.CLASSICAL_MOVES:
            row = {"alice": ra}
            for cb in an.CLASSICAL_MOVES:
                a, b = bm[(ra, cb)]
                row.update({f"{cb}_a": float(a), f"{cb}_b": float(b),
                            f"{cb}_display": display_pair(a, b)})
            rows.append(row)
    elif args.which == "bimatrix":
        table = an.bimatrix_table(cfg)
        for (la, _), cells in zip(an.TABLE_STRATEGIES, table):
            row = {"alice": la}
            for (lb, _), cell in zip(an.TABLE_STRATEGIES, cells):
                row.update({f"{lb}_a": cell.a, f"{lb}_b": cell.b,
                            f"{lb}_display": display_pair(cell.a, cell.b)})
            rows.append(row)
    else:
        for label, prof, pay in an.theory_column(cfg):
            rows.append({"profile": label, **_angle_columns(prof), "payoff_a": pay.a,
                         "payoff_b": pay.b, "payoff_a_display": display(pay.a),
                         "payoff_b_display": display(pay.b)})
    emit(run, "csv", rows)


def _parse_axis(spec: str) -> an.Axis:
    parts = spec.split(":")
    if len(parts) != 4:
        raise DomainError(f"axis {spec!r}: expected NAME:START:STOP:STEP (or nPOINTS)")
    name, start, stop, step = parts
    start, stop = parse_angle(start), parse_angle(stop)
    if step.startswith("n"):
        return an.Axis.from_points(name, start, stop, int(step[1:]))
    return an.Axis(name, start, stop, parse_angle(step))


def _parse_fixed(items) -> dict:
    out = {}
    for item in items or ():
        if "=" not in item:
            raise DomainError(f"--fixed {item!r}: expected NAME=ANGLE")
        k, v = item.split("=", 1)
        out[k.strip()] = parse_angle(v)
    return out


def cmd_sweep(args, run: RunConfig) -> None:
    cfg = run.game()
    fixed = _parse_fixed(args.fixed)
    if args.tangent_contour:
        th = np.linspace(0.0, np.pi, args.points)
        rows = [{"level": lv, "phi_sum": s, "theta_a": ta, "theta_b": tb,
                 "tan_product": float(np.tan(ta / 2) * np.tan(tb / 2))}
                for lv, s, ta, tb in an.tangent_contours(TANGENT_LEVELS, th)]
        emit(run, "csv", rows)
        return
    if args.composite_diag:
        axes = [an.Axis.from_points("composite_diag", 0.0, an.COMPOSITE_LENGTH, args.composite_diag)]
    elif args.composite:
        axes = [an.Axis.from_points("composite_a", 0.0, an.COMPOSITE_LENGTH, args.composite),
                an.Axis.from_points("composite_b", 0.0, an.COMPOSITE_LENGTH, args.composite)]
    elif args.surface:
        fixed = {"theta_b": args.theta_b, "phi_b": args.phi_b}
        axes = [an.Axis.from_points("theta_a", 0.0, np.pi, args.points),
                an.Axis.from_points("phi_a", 0.0, np.pi / 2, args.points)]
    elif args.axis:
        axes = [_parse_axis(s) for s in args.axis]
    else:
        raise DomainError("sweep needs --axis, --composite, --composite-diag, --surface or --tangent-contour")
    grid = an.sweep_payoffs(axes, cfg, fixed)
    rows = []
    for coords, params, pay in grid.rows():
        row = {f"coord_{ax.name}": c for ax, c in zip(grid.axes, coords)
               if ax.name in an.COMPOSITE_AXES}
        row.update(zip(an.SWEEP_PARAMS, params))
        row.update({"lambda": cfg.lam, "payoff_a": pay.a, "payoff_b": pay.b})
        rows.append(row)
    emit(run, "csv", rows)


TANGENT_LEVELS = (0.1, 0.2, 0.3, 0.4, 0.5, 0.6, float(np.sqrt(0.5)), 1.0)


def cmd_analyze(args, run: RunConfig) -> None:
    cfg = run.game()
    rows, lines = [], []
    if args.what == "families":
        for fam in an.enumerate_solution_families(cfg):
            rep = fam.representative_profile
            rows.append({"family": fam.id, "constraint": fam.constraint_description,
                         **_angle_columns(rep), "payoff_a": fam.payoff.a, "payoff_b": fam.payoff.b,
                         "residual": an.equal_payoff_residual(rep)})
            lines.append(f"{fam.id}: {fam.constraint_description}  rep={_fmt_profile(rep)}  "
                         f"payoffs=({exact(fam.payoff.a)}, {exact(fam.payoff.b)})")
    elif args.what == "nash":
        profiles = [(f"{la} vs {lb}", an.StrategyProfile(sa, sb))
                    for la, sa in an.TABLE_STRATEGIES for lb, sb in an.TABLE_STRATEGIES]
        for pa in np.linspace(0.0, np.pi / 2, 5):
            profiles.append((f"theta=pi/2, phi_a={exact(pa)}, phi_b=pi/2-phi_a",
                             an.StrategyProfile.of(np.pi / 2, pa, np.pi / 2, np.pi / 2 - pa)))
        for label, prof in profiles:
            rep = an.nash_check_quantum(prof, cfg, run.grid_n)
            rows.append({"profile": label, **_angle_columns(prof), "payoff_a": rep.payoff.a,
                         "payoff_b": rep.payoff.b, "alice_gain": rep.alice_gain,
                         "bob_gain": rep.bob_gain, "grid_nash": rep.is_grid_nash})
            lines.append(f"{label:<45} gains=({exact(rep.alice_gain)}, {exact(rep.bob_gain)})  "
                         f"{'NASH' if rep.is_grid_nash else 'not Nash'}")
    elif args.what == "pareto":
        for prof, xi in an.PARETO_ANCHORS:
            g = an.payoff_gradient(prof, cfg, run.h)
            rows.append({**_angle_columns(prof), "d_a_d_theta_a": g.d_a_d_theta_a,
                         "d_a_d_phi_a": g.d_a_d_phi_a, "d_b_d_theta_b": g.d_b_d_theta_b,
                         "d_b_d_phi_b": g.d_b_d_phi_b, "pareto_theta": g.pareto_satisfied["theta"],
                         "pareto_phi": g.pareto_satisfied["phi"]})
            da = g.d_a_d_theta_a if xi == "theta" else g.d_a_d_phi_a
            db = g.d_b_d_theta_b if xi == "theta" else g.d_b_d_phi_b
            lines.append(f"{_fmt_profile(prof)}  dA/d{xi}_a={exact(round(da, 9))}  "
                         f"dB/d{xi}_b={exact(round(db, 9))}  pareto[{xi}]={g.pareto_satisfied[xi]}")
    else:
        step = args.step if args.step is not None else np.pi / 64
        grid = np.arange(0.0, np.pi / 2 + step / 2, step)
        grid = grid[grid <= np.pi / 2 + 1e-12]
        res = an.entanglement_threshold_scan(cfg, grid)
        rows = [{"lambda": lam, "feasible": ok} for lam, ok in res.feasible]
        if res.lam is None:
            lines.append("no lambda on the grid admits an equal (alpha+beta)/2 split")
        else:
            lines.append(f"threshold lambda={exact(res.lam)} ({exact(res.lam / np.pi)} pi)  "
                         f"witness={_fmt_profile(res.witness)}")
    emit(run, "text", rows, "\n".join(lines) + "\n")


def _fmt_profile(p: an.StrategyProfile) -> str:
    return "(" + ", ".join(exact(x) for x in p.as_tuple()) + ")"


def _pulse_supported(p: an.StrategyProfile, layout: str) -> bool:
    # the prescribed theta-then-composite-z order is exact only when one
    # of the two angles vanishes for each player
    return layout == "symmetric" or all(s.theta == 0 or s.phi == 0 for s in (p.alice, p.bob))


def cmd_pulse(args, run: RunConfig) -> None:
    cfg = run.game()
    prof = _profile_from_args(args)
    params = nmr.SpinSystemParams(j_coupling=args.j_coupling)
    result = nmr.run_game(prof.alice, prof.bob, cfg.lam, params, args.layout)
    ref = outcome_probabilities_closed_form(prof.alice, prof.bob, cfg).as_array()
    gap = float(np.max(np.abs(result.populations - ref)))
    seq_text = nmr.serialize_sequence(result.sequence)
    labels = ("OO", "OT", "TO", "TT")
    rows = [{"outcome": k, "population": float(pop), "reference": float(r)}
            for k, pop, r in zip(labels, result.populations, ref)]
    text = (
        seq_text
        + "populations " + " ".join(f"{k}={exact(round(v, 12))}" for k, v in zip(labels, result.populations))
        + "\nreference   " + " ".join(f"{k}={exact(v)}" for k, v in zip(labels, ref))
        + f"\nfidelity {exact(round(result.fidelity, 12))}\n"
    )
    emit(run, "text", rows, text, sequence=seq_text.splitlines(), fidelity=result.fidelity)
    if args.sequence_out:
        with open(args.sequence_out, "w", encoding="utf-8") as fh:
            fh.write(seq_text)
    if not _pulse_supported(prof, args.layout):
        print("warning: the prescribed strategy block matches the strategy operator only "
              "when theta or phi is zero for each player; use --layout symmetric", file=sys.stderr)
    elif gap > PULSE_TOL or result.fidelity < 1 - PULSE_TOL:
        raise InconsistencyError(
            f"pulse emulation disagrees with the circuit (population gap {gap:.3g}, "
            f"fidelity {result.fidelity:.9f})")


# --- parser -------------------------------------------------------------------


def _common() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(add_help=False)
    g = p.add_argument_group("run configuration")
    g.add_argument("--config", help="flat key = value file; flags override it")
    g.add_argument("--alpha", type=float)
    g.add_argument("--beta", type=float)
    g.add_argument("--gamma", type=float)
    g.add_argument("--lambda", dest="lam", type=parse_angle, help="entanglement level")
    g.add_argument("--format", dest="fmt", choices=("csv", "json", "text"))
    g.add_argument("--output", "-o", help="write here instead of stdout")
    g.add_argument("--grid-n", dest="grid_n", type=int)
    g.add_argument("--h", type=float, help="finite-difference step (rad)")
    g.add_argument("--seed", type=int)
    return p


def _profile_flags(p: argparse.ArgumentParser) -> None:
    for name in ("theta-a", "phi-a", "theta-b", "phi-b"):
        p.add_argument(f"--{name}", dest=name.replace("-", "_"), type=parse_angle, default=0.0)


def build_parser() -> argparse.ArgumentParser:
    common = _common()
    parser = argparse.ArgumentParser(prog="ewlgame", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("payoff", parents=[common], help="probabilities and payoffs of one profile")
    _profile_flags(p)
    p.set_defaults(func=cmd_payoff)

    p = sub.add_parser("table", parents=[common], help="reproduce a payoff table")
    p.add_argument("which", choices=("classical", "bimatrix", "theory-column"))
    p.set_defaults(func=cmd_table)

    p = sub.add_parser("sweep", parents=[common], help="payoff grids in long format")
    p.add_argument("--axis", action="append", help="NAME:START:STOP:STEP or NAME:START:STOP:nPOINTS")
    p.add_argument("--fixed", action="append", help="NAME=ANGLE for parameters not swept")
    p.add_argument("--composite", type=int, metavar="N", help="N x N grid over both composite axes")
    p.add_argument("--composite-diag", type=int, metavar="N",
                   help="N points with both players on the same composite coordinate")
    p.add_argument("--surface", "--fig6", dest="surface", action="store_true",
                   help="surface over Alice's angles at fixed Bob")
    p.add_argument("--theta-b", type=parse_angle, default=0.0)
    p.add_argument("--phi-b", type=parse_angle, default=0.0)
    p.add_argument("--points", type=int, default=101, help="points per axis for --surface and contours")
    p.add_argument("--tangent-contour", action="store_true",
                   help="level sets of tan(theta_a/2) tan(theta_b/2)")
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("analyze", parents=[common], help="families, Nash, Pareto, threshold")
    p.add_argument("what", choices=("families", "nash", "pareto", "threshold"))
    p.add_argument("--step", type=parse_angle, help="lambda grid step for threshold")
    p.set_defaults(func=cmd_analyze)

    p = sub.add_parser("pulse", parents=[common], help="compile and emulate the NMR experiment")
    _profile_flags(p)
    p.add_argument("--j-coupling", type=float, default=nmr.J_CHLOROFORM_HZ)
    p.add_argument("--layout", choices=nmr.LAYOUTS, default="symmetric",
                   help="strategy block ordering (identical when theta or phi is zero)")
    p.add_argument("--sequence-out", help="also write the serialized pulse sequence here")
    p.set_defaults(func=cmd_pulse)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        run = build_run_config(args)
        args.func(args, run)
    except (DomainError, argparse.ArgumentTypeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except InconsistencyError as exc:
        print(f"inconsistency: {exc}", file=sys.stderr)
        return 1
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
