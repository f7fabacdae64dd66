"""Nash and Pareto analysis, the equal-payoff manifold, and payoff sweeps."""
from __future__ import annotations

import enum
import itertools
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np
from scipy.optimize import minimize_scalar

from .linalg import DomainError
from .protocol import (
    GameConfig,
    OPERA,
    PayoffPair,
    QUANTUM_Q,
    StrategyParams,
    TELEVISION,
    outcome_probabilities_circuit,
    payoff_arrays,
    payoffs,
)

THETA_MAX = np.pi
PHI_MAX = np.pi / 2


@dataclass(frozen=True)
class StrategyProfile:
    alice: StrategyParams
    bob: StrategyParams

    @classmethod
    def of(cls, theta_a, phi_a, theta_b, phi_b) -> StrategyProfile:
        return cls(StrategyParams(theta_a, phi_a), StrategyParams(theta_b, phi_b))

    def as_tuple(self) -> tuple[float, float, float, float]:
        return (self.alice.theta, self.alice.phi, self.bob.theta, self.bob.phi)

    @property
    def phi_sum(self) -> float:
        return self.alice.phi + self.bob.phi


def profile_payoffs(p: StrategyProfile, cfg: GameConfig) -> PayoffPair:
    """Payoffs through the circuit: strategy operators, judge, measurement."""
    return payoffs(outcome_probabilities_circuit(p.alice, p.bob, cfg), cfg)


# --- classical game -------------------------------------------------------

CLASSICAL_MOVES = ("T", "O")


def classical_bimatrix(alpha: float, beta: float, gamma: float) -> dict:
    """The 2x2 pure game keyed by ``(alice_move, bob_move)``."""
    return {
        ("T", "T"): (beta, alpha),
        ("T", "O"): (gamma, gamma),
        ("O", "T"): (gamma, gamma),
        ("O", "O"): (alpha, beta),
    }


def pure_nash_pairs(bimatrix: dict) -> set:
    rows = sorted({k[0] for k in bimatrix})
    cols = sorted({k[1] for k in bimatrix})
    found = set()
    for r, c in itertools.product(rows, cols):
        a, b = bimatrix[(r, c)]
        alice_ok = all(bimatrix[(r2, c)][0] <= a for r2 in rows)
        bob_ok = all(bimatrix[(r, c2)][1] <= b for c2 in cols)
        if alice_ok and bob_ok:
            found.add((r, c))
    return found


def classical_nash_pairs(cfg: GameConfig) -> set:
    return pure_nash_pairs(classical_bimatrix(cfg.alpha, cfg.beta, cfg.gamma))


# --- gradients and the Pareto condition -----------------------------------

_PARAM_NAMES = ("theta_a", "phi_a", "theta_b", "phi_b")
_PARAM_MAX = (THETA_MAX, PHI_MAX, THETA_MAX, PHI_MAX)


@dataclass(frozen=True)
class GradientReport:
    point: StrategyProfile
    d_a_d_theta_a: float
    d_a_d_phi_a: float
    d_b_d_theta_b: float
    d_b_d_phi_b: float
    pareto_satisfied: dict
    one_sided: dict
    tolerance: float


def _partial(f: Callable, x: np.ndarray, i: int, h: float) -> tuple[np.ndarray, bool]:
    """Second-order finite difference of ``f`` along coordinate ``i``.

    Falls back to the three-point one-sided stencil when a central step
    would leave the parameter domain.
    """
    e = np.zeros(4)
    e[i] = h
    lo, hi = 0.0, _PARAM_MAX[i]
    if x[i] - h >= lo and x[i] + h <= hi:
        return (f(x + e) - f(x - e)) / (2 * h), False
    if x[i] - h < lo:
        return (-3 * f(x) + 4 * f(x + e) - f(x + 2 * e)) / (2 * h), True
    return (3 * f(x) - 4 * f(x - e) + f(x - 2 * e)) / (2 * h), True


def payoff_gradient(p: StrategyProfile, cfg: GameConfig, h: float = 1e-5) -> GradientReport:
    """Finite-difference payoff partials and the per-parameter Pareto check.

    ``pareto_satisfied[xi]`` holds when Alice's rate along her own ``xi``
    is the negative of Bob's rate along his ``xi`` and the rates are not
    both zero (a flat point has no opposite-sign trade-off).
    """
    if not h > 0:
        raise DomainError(f"finite-difference step must be positive, got {h!r}")

    def f(x):
        return np.array(payoff_arrays(*x, cfg))

    x0 = np.array(p.as_tuple(), dtype=float)
    grads, sided = {}, {}
    for i, name in enumerate(_PARAM_NAMES):
        grads[name], sided[name] = _partial(f, x0, i, h)

    da_dth, da_dph = grads["theta_a"][0], grads["phi_a"][0]
    db_dth, db_dph = grads["theta_b"][1], grads["phi_b"][1]
    scale = max(1.0, abs(cfg.alpha), abs(cfg.beta), abs(cfg.gamma))
    # truncation error of the stencil plus a rounding floor
    tol = 10 * h**2 * scale + 1e3 * np.finfo(float).eps * scale / h
    flat = max(100 * tol, 1e-6)
    pareto = {}
    for xi, (da, db) in {"theta": (da_dth, db_dth), "phi": (da_dph, db_dph)}.items():
        pareto[xi] = bool(abs(da + db) <= tol and max(abs(da), abs(db)) > flat)
    return GradientReport(
        point=p,
        d_a_d_theta_a=float(da_dth),
        d_a_d_phi_a=float(da_dph),
        d_b_d_theta_b=float(db_dth),
        d_b_d_phi_b=float(db_dph),
        pareto_satisfied=pareto,
        one_sided=sided,
        tolerance=tol,
    )


# --- the equal-payoff manifold at maximal entanglement --------------------


def equal_payoff_residual(p: StrategyProfile) -> float:
    """Zero exactly when both players receive the same payoff at ``lambda = pi/2``.

    Scaled by ``alpha - beta`` it equals ``payoff_a - payoff_b``.
    """
    ca, sa = np.cos(p.alice.theta / 2), np.sin(p.alice.theta / 2)
    cb, sb = np.cos(p.bob.theta / 2), np.sin(p.bob.theta / 2)
    total = p.phi_sum
    return float((np.cos(total) * ca * cb) ** 2 - (sa * sb + np.sin(total) * ca * cb) ** 2)


def _check_phi_sum(phi_sum: float) -> None:
    if not -1e-12 <= phi_sum <= np.pi + 1e-12:
        raise DomainError(f"phi_a + phi_b = {phi_sum!r} outside [0, pi]")


def quadratic_roots_tan_product(phi_sum: float) -> tuple[float, float]:
    """Both roots of ``t^2 + 2 sin(S) t - cos(2S) = 0`` for ``t = tan(θA/2) tan(θB/2)``."""
    _check_phi_sum(phi_sum)
    s, c = np.sin(phi_sum), np.cos(phi_sum)
    return float(-s + c), float(-s - c)


def correlated_phi(phi_sum: float) -> float:
    """``-cos(2S)``, the product of the two roots."""
    return float(-np.cos(2 * phi_sum))


class PhiClass(enum.Enum):
    ROOT = "root_of_Phi"
    MAXIMUM = "maximum_of_Phi"
    MINIMUM = "minimum_of_Phi"
    INTERIOR = "interior"


def phi_classifier(phi_sum: float, tol: float = 1e-12) -> PhiClass:
    _check_phi_sum(phi_sum)
    def near(targets):
        return any(abs(phi_sum - t) <= tol for t in targets)

    if near((np.pi / 4, 3 * np.pi / 4)):
        return PhiClass.ROOT
    if near((np.pi / 2,)):
        return PhiClass.MAXIMUM
    if near((0.0, np.pi)):
        return PhiClass.MINIMUM
    return PhiClass.INTERIOR


@dataclass(frozen=True)
class TanProductConstraint:
    value: float
    branch: str  # "correlated" (square-root form) or "linear" (a quadratic root)


def tan_product_constraint(phi_sum: float) -> TanProductConstraint:
    """Required ``tan(θA/2) tan(θB/2)`` as a function of the phase sum.

    On ``[pi/4, 3pi/4]`` this is ``sqrt(-cos 2S)``. Outside it is the
    non-negative quadratic root: ``cos S - sin S`` below ``pi/4`` and
    ``-sin S - cos S`` above ``3pi/4``; both meet the square-root form
    continuously at zero.
    """
    _check_phi_sum(phi_sum)
    q = np.pi / 4
    if q <= phi_sum <= 3 * q:
        return TanProductConstraint(float(np.sqrt(max(correlated_phi(phi_sum), 0.0))), "correlated")
    plus, minus = quadratic_roots_tan_product(phi_sum)
    return TanProductConstraint(plus if phi_sum < q else minus, "linear")


def theta_b_for_tan_product(theta_a: float, tan_product: float) -> float:
    """Solve ``tan(θA/2) tan(θB/2) = t`` for ``θB``; needs ``0 < θA < pi``."""
    return float(2 * np.arctan2(tan_product * np.cos(theta_a / 2), np.sin(theta_a / 2)))


@dataclass(frozen=True)
class SolutionFamily:
    id: int
    constraint_description: str
    representative_profile: StrategyProfile
    payoff: PayoffPair
    predicted_payoff: PayoffPair
    constraint_residuals: Callable[[StrategyProfile], tuple] = field(repr=False, compare=False)


def _theta_complement(p: StrategyProfile) -> float:
    # tan(θA/2) = cot(θB/2), written without tangent singularities
    return p.alice.theta + p.bob.theta - np.pi


def enumerate_solution_families(cfg: GameConfig) -> list[SolutionFamily]:
    """The five equal-happiness parameter families at maximal entanglement."""
    if abs(cfg.lam - np.pi / 2) > 1e-12:
        raise DomainError("solution families are defined at lambda = pi/2")
    a, b, g = cfg.alpha, cfg.beta, cfg.gamma
    q = np.pi / 4
    half = PayoffPair((a + b) / 2, (a + b) / 2)
    quarter = PayoffPair((a + 2 * g + b) / 4, (a + 2 * g + b) / 4)
    specs = [
        (1, "theta_a = theta_b = 0, phi_a + phi_b = pi/4",
         StrategyProfile.of(0.0, q / 2, 0.0, q / 2), half,
         lambda p: (p.alice.theta, p.bob.theta, p.phi_sum - q)),
        (2, "theta_a = theta_b = 0, phi_a + phi_b = 3pi/4",
         StrategyProfile.of(0.0, 3 * q / 2, 0.0, 3 * q / 2), half,
         lambda p: (p.alice.theta, p.bob.theta, p.phi_sum - 3 * q)),
        (3, "tan(theta_a/2) = cot(theta_b/2), phi_a + phi_b = pi/2",
         StrategyProfile.of(np.pi / 2, q, np.pi / 2, q), PayoffPair(b, a),
         lambda p: (_theta_complement(p), p.phi_sum - 2 * q)),
        (4, "tan(theta_a/2) tan(theta_b/2) = 1, phi_a + phi_b = 0",
         StrategyProfile.of(np.pi / 2, 0.0, np.pi / 2, 0.0), quarter,
         lambda p: (_theta_complement(p), p.phi_sum)),
        (5, "tan(theta_a/2) tan(theta_b/2) = 1, phi_a + phi_b = pi",
         StrategyProfile.of(np.pi / 2, 2 * q, np.pi / 2, 2 * q), quarter,
         lambda p: (_theta_complement(p), p.phi_sum - np.pi)),
    ]
    return [
        SolutionFamily(
            id=i,
            constraint_description=desc,
            representative_profile=rep,
            payoff=profile_payoffs(rep, cfg),
            predicted_payoff=pred,
            constraint_residuals=res,
        )
        for i, desc, rep, pred, res in specs
    ]


def family3_payoff(theta_a: float, theta_b: float, cfg: GameConfig) -> PayoffPair:
    """Closed-form payoffs on the ``phi_a + phi_b = pi/2`` plane."""
    ca, sa = np.cos(theta_a / 2), np.sin(theta_a / 2)
    cb, sb = np.cos(theta_b / 2), np.sin(theta_b / 2)
    mixed = cfg.gamma * ((ca * sb) ** 2 + (sa * cb) ** 2 - np.sin(theta_a) * np.sin(theta_b) / 2)
    agree = (sa * sb + ca * cb) ** 2
    return PayoffPair(float(mixed + cfg.beta * agree), float(mixed + cfg.alpha * agree))


# --- grid Nash verification -----------------------------------------------


@dataclass(frozen=True)
class NashReport:
    point: StrategyProfile
    payoff: PayoffPair
    alice_gain: float
    alice_best: StrategyParams
    bob_gain: float
    bob_best: StrategyParams
    grid_n: int
    tol: float

    @property
    def is_grid_nash(self) -> bool:
        return self.alice_gain <= self.tol and self.bob_gain <= self.tol


def _deviation_lattice(grid_n: int):
    th = np.linspace(0.0, THETA_MAX, grid_n)
    ph = np.linspace(0.0, PHI_MAX, grid_n)
    return np.meshgrid(th, ph, indexing="ij")


def nash_check_quantum(
    p: StrategyProfile, cfg: GameConfig, grid_n: int = 101, tol: float = 1e-9
) -> NashReport:
    """Best unilateral improvement for each player over a deviation lattice.

    Ties in the argmax go to the lowest flat index (theta-major order).
    """
    if grid_n < 9:
        raise DomainError(f"grid_n must be >= 9, got {grid_n}")
    th, ph = _deviation_lattice(grid_n)
    a0, b0 = payoff_arrays(*p.as_tuple(), cfg)
    dev_a, _ = payoff_arrays(th, ph, p.bob.theta, p.bob.phi, cfg)
    _, dev_b = payoff_arrays(p.alice.theta, p.alice.phi, th, ph, cfg)
    ia = int(np.argmax(dev_a))
    ib = int(np.argmax(dev_b))
    return NashReport(
        point=p,
        payoff=PayoffPair(float(a0), float(b0)),
        alice_gain=float(dev_a.flat[ia] - a0),
        alice_best=StrategyParams(float(th.flat[ia]), float(ph.flat[ia])),
        bob_gain=float(dev_b.flat[ib] - b0),
        bob_best=StrategyParams(float(th.flat[ib]), float(ph.flat[ib])),
        grid_n=grid_n,
        tol=tol,
    )


# --- entanglement threshold ----------------------------------------------


@dataclass(frozen=True)
class ThresholdResult:
    lam: float | None
    witness: StrategyProfile | None
    feasible: tuple  # (lambda, bool) per scanned value


def _equal_half_payoff_witness(cfg: GameConfig, tol: float, n_grid: int = 2049):
    """Search theta = 0 profiles for equal payoffs worth ``(alpha + beta)/2``.

    With both thetas zero the payoffs depend on the phases only through
    their sum, so the search runs over ``S = phi_a + phi_b`` in ``[0, pi]``
    and splits it evenly between the players.
    """
    target = (cfg.alpha + cfg.beta) / 2

    def miss(total):
        a, b = payoff_arrays(0.0, total / 2, 0.0, total / 2, cfg)
        return np.maximum(np.abs(a - b), np.maximum(np.abs(a - target), np.abs(b - target)))

    grid = np.linspace(0.0, np.pi, n_grid)
    vals = miss(grid)
    candidates = [int(np.argmin(vals))]
    # local minima, so a second basin is not missed
    inner = np.flatnonzero((vals[1:-1] <= vals[:-2]) & (vals[1:-1] <= vals[2:])) + 1
    candidates.extend(int(k) for k in inner)
    best_s, best_v = None, np.inf
    for k in candidates:
        if vals[k] < best_v:
            best_s, best_v = grid[k], vals[k]
        lo, hi = grid[max(k - 1, 0)], grid[min(k + 1, n_grid - 1)]
        res = minimize_scalar(lambda s: float(miss(s)), bounds=(lo, hi), method="bounded",
                              options={"xatol": 1e-13})
        if res.fun < best_v:
            best_s, best_v = float(res.x), float(res.fun)
    if best_v <= tol:
        return StrategyProfile.of(0.0, best_s / 2, 0.0, best_s / 2)
    return None


def entanglement_threshold_scan(
    cfg: GameConfig, lambda_grid: Sequence[float], tol: float = 1e-6
) -> ThresholdResult:
    """Least ``lambda`` on the grid admitting an equal ``(alpha+beta)/2`` split at theta = 0."""
    lambda_grid = sorted(float(x) for x in lambda_grid)
    if not lambda_grid:
        raise DomainError("lambda grid is empty")
    feasible = []
    first = None
    for lam in lambda_grid:
        witness = _equal_half_payoff_witness(cfg.with_lambda(min(lam, np.pi / 2)), tol)
        feasible.append((lam, witness is not None))
        if witness is not None and first is None:
            first = (lam, witness)
    if first is None:
        return ThresholdResult(None, None, tuple(feasible))
    return ThresholdResult(first[0], first[1], tuple(feasible))


# --- sweeps ---------------------------------------------------------------

SWEEP_PARAMS = ("theta_a", "phi_a", "theta_b", "phi_b")
COMPOSITE_AXES = ("composite_a", "composite_b", "composite_diag")
COMPOSITE_LENGTH = 1.5 * np.pi


def composite_to_strategy(x: float) -> StrategyParams:
    """Map the composite coordinate ``x`` in ``[0, 3pi/2]`` to a strategy.

    ``x = 0`` is Television, ``x = pi`` Opera (theta falls from pi to 0 at
    phi = 0), and ``x = 3pi/2`` is Q (phi rises from 0 to pi/2 at theta = 0).
    """
    if not -1e-12 <= x <= COMPOSITE_LENGTH + 1e-12:
        raise DomainError(f"composite coordinate {x!r} outside [0, 3pi/2]")
    if x <= np.pi:
        return StrategyParams(max(np.pi - x, 0.0), 0.0)
    return StrategyParams(0.0, min(x - np.pi, np.pi / 2))


@dataclass(frozen=True)
class Axis:
    name: str
    start: float
    stop: float
    step: float

    def __post_init__(self):
        if self.name not in SWEEP_PARAMS + COMPOSITE_AXES:
            raise DomainError(f"unknown sweep axis {self.name!r}")
        if not self.step > 0:
            raise DomainError(f"axis {self.name}: step must be positive")
        if self.stop < self.start:
            raise DomainError(f"axis {self.name}: stop < start")
        hi = {"theta_a": THETA_MAX, "theta_b": THETA_MAX, "phi_a": PHI_MAX,
              "phi_b": PHI_MAX}.get(self.name, COMPOSITE_LENGTH)
        if self.start < -1e-12 or self.stop > hi + 1e-12:
            raise DomainError(f"axis {self.name}: [{self.start}, {self.stop}] outside [0, {hi:.6g}]")

    @classmethod
    def from_points(cls, name: str, start: float, stop: float, n: int) -> Axis:
        if n < 1:
            raise DomainError("axis needs at least one point")
        step = (stop - start) / (n - 1) if n > 1 else 1.0
        return cls(name, start, stop, step if step > 0 else 1.0)

    def values(self) -> np.ndarray:
        span = (self.stop - self.start) / self.step
        n = int(np.floor(span + 1e-9)) + 1
        vals = self.start + self.step * np.arange(n)
        if abs(vals[-1] - self.stop) <= 1e-9 * max(1.0, self.step):
            vals[-1] = self.stop
        return vals


@dataclass(frozen=True)
class SweepGrid:
    axes: tuple
    fixed: dict
    params: np.ndarray  # shape grid_shape + (4,): theta_a, phi_a, theta_b, phi_b
    payoff_a: np.ndarray
    payoff_b: np.ndarray

    @property
    def shape(self) -> tuple:
        return self.payoff_a.shape

    def rows(self):
        """Yield ``(axis_coordinates, params, payoff_pair)`` in C order."""
        coords = [ax.values() for ax in self.axes]
        for idx in np.ndindex(*self.shape):
            yield (
                tuple(float(coords[k][i]) for k, i in enumerate(idx)),
                tuple(float(v) for v in self.params[idx]),
                PayoffPair(float(self.payoff_a[idx]), float(self.payoff_b[idx])),
            )


def sweep_payoffs(axes: Sequence[Axis], cfg: GameConfig, fixed: dict | None = None) -> SweepGrid:
    """Payoffs over the Cartesian product of ``axes``.

    Parameters not on any axis take their value from ``fixed`` (default 0).
    """
    fixed = dict(fixed or {})
    for key in fixed:
        if key not in SWEEP_PARAMS:
            raise DomainError(f"unknown fixed parameter {key!r}")
    base = {k: float(fixed.get(k, 0.0)) for k in SWEEP_PARAMS}
    StrategyProfile.of(*(base[k] for k in SWEEP_PARAMS))  # domain check
    axes = tuple(axes)
    names = [ax.name for ax in axes]
    if len(set(names)) != len(names):
        raise DomainError("duplicate sweep axis")
    coords = [ax.values() for ax in axes]
    shape = tuple(len(c) for c in coords)
    params = np.empty(shape + (4,))
    for idx in np.ndindex(*shape):
        cur = dict(base)
        for ax, vals, i in zip(axes, coords, idx):
            x = float(vals[i])
            if ax.name in SWEEP_PARAMS:
                cur[ax.name] = x
                continue
            s = composite_to_strategy(x)
            if ax.name in ("composite_a", "composite_diag"):
                cur["theta_a"], cur["phi_a"] = s.theta, s.phi
            if ax.name in ("composite_b", "composite_diag"):
                cur["theta_b"], cur["phi_b"] = s.theta, s.phi
        params[idx] = [cur[k] for k in SWEEP_PARAMS]
    a, b = payoff_arrays(params[..., 0], params[..., 1], params[..., 2], params[..., 3], cfg)
    return SweepGrid(axes, base, params, np.asarray(a), np.asarray(b))


def tangent_contours(levels: Sequence[float], theta_a: np.ndarray) -> list[tuple]:
    """Points on the level sets ``tan(θA/2) tan(θB/2) = L``.

    Returns ``(level, phi_sum, theta_a, theta_b)`` rows, where ``phi_sum``
    is the phase sum in ``[pi/4, pi/2]`` whose square-root constraint
    equals the level (NaN when ``L > 1``).
    """
    out = []
    for level in levels:
        total = 0.5 * np.arccos(-level**2) if level <= 1 else np.nan
        for th in theta_a:
            if th <= 0 or th >= np.pi:
                continue
            out.append((float(level), float(total), float(th), theta_b_for_tan_product(th, level)))
    return out


# --- tables ---------------------------------------------------------------

TABLE_STRATEGIES = (
    ("T", TELEVISION),
    ("O", OPERA),
    ("U(0,pi/8)", StrategyParams(0.0, np.pi / 8)),
    ("U(0,3pi/8)", StrategyParams(0.0, 3 * np.pi / 8)),
    ("Q", QUANTUM_Q),
)

THEORY_PROFILES = (
    ("(pi,0,pi,0)", StrategyProfile.of(np.pi, 0.0, np.pi, 0.0)),
    ("(pi/2,0,pi/2,0)", StrategyProfile.of(np.pi / 2, 0.0, np.pi / 2, 0.0)),
    ("(0,0,0,0)", StrategyProfile.of(0.0, 0.0, 0.0, 0.0)),
    ("(0,pi/8,0,pi/8)", StrategyProfile.of(0.0, np.pi / 8, 0.0, np.pi / 8)),
    ("(0,pi/4,0,pi/4)", StrategyProfile.of(0.0, np.pi / 4, 0.0, np.pi / 4)),
    ("(0,3pi/8,0,3pi/8)", StrategyProfile.of(0.0, 3 * np.pi / 8, 0.0, 3 * np.pi / 8)),
    ("(0,pi/2,0,pi/2)", StrategyProfile.of(0.0, np.pi / 2, 0.0, np.pi / 2)),
)

PARETO_ANCHORS = (
    (StrategyProfile.of(0.0, np.pi / 8, 0.0, np.pi / 8), "phi"),
    (StrategyProfile.of(0.0, 3 * np.pi / 8, 0.0, 3 * np.pi / 8), "phi"),
    (StrategyProfile.of(np.pi / 2, 0.0, np.pi / 2, 0.0), "theta"),
)


def bimatrix_table(cfg: GameConfig) -> list[list[PayoffPair]]:
    """Payoffs for every pair of the five named strategies, Alice by row."""
    return [
        [profile_payoffs(StrategyProfile(sa, sb), cfg) for _, sb in TABLE_STRATEGIES]
        for _, sa in TABLE_STRATEGIES
    ]


def theory_column(cfg: GameConfig) -> list[tuple[str, StrategyProfile, PayoffPair]]:
    return [(label, p, profile_payoffs(p, cfg)) for label, p in THEORY_PROFILES]


def pareto_candidates(profiles: Sequence[StrategyProfile], cfg: GameConfig,
                      h: float = 1e-5, tol: float = 1e-9) -> list[tuple[StrategyProfile, tuple]]:
    """Equal-payoff profiles with a non-flat opposite-rate trade-off.

    Returns ``(profile, satisfied_xis)`` for each qualifying profile.
    """
    found = []
    for p in profiles:
        pay = profile_payoffs(p, cfg)
        if abs(pay.a - pay.b) > tol:
            continue
        rep = payoff_gradient(p, cfg, h)
        xis = tuple(xi for xi in ("theta", "phi") if rep.pareto_satisfied[xi])
        if xis:
            found.append((p, xis))
    return found
