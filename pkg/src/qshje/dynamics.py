"""Quantum law of motion, metric factor, turning points, trajectories.

Each axis obeys dx_i/dt = 2 [E_i - V_i(x_i)] / P_i(x_i). The momentum never
vanishes, so the sign of the velocity relative to the momentum tracks the
sign of the local kinetic term: equal in classically allowed regions,
opposite in forbidden ones. At a turning point the exact flow only stalls
asymptotically; an event fires when |E - V| drops below tp_epsilon and the
configured policy decides between reflection (momentum sign flips, motion
returns into the allowed region) and transmission (momentum sign flips and
the position jumps discontinuously across the turning point).
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import brentq

from .errors import LeftDomain, OutOfDomain, StepUnderflow
from .reduced_action import (
    ReducedAction1D,
    SeparableAction3D,
    momentum_1d,
    schwarzian,
)
from .schrodinger1d import EnergySplit, Potential1D

_AXES = ("x", "y", "z")


class TurningPointPolicy(enum.Enum):
    REFLECT = "reflect"
    TRANSMIT = "transmit"


class IntegratorKind(enum.Enum):
    RK4 = "rk4"
    RK45 = "rk45"


class Region(enum.Enum):
    ALLOWED = "allowed"
    FORBIDDEN = "forbidden"
    TURNING_POINT = "turning_point"


@dataclass(frozen=True)
class MotionConfig:
    tp_epsilon: float = 1e-6
    tp_policy: tuple[TurningPointPolicy, ...] = (TurningPointPolicy.REFLECT,) * 3
    step: float = 1e-3
    t_max: float = 10.0
    integrator: IntegratorKind = IntegratorKind.RK4
    min_step: float = 1e-12

    def __post_init__(self) -> None:
        if not (self.tp_epsilon > 0.0):
            raise ValueError("tp_epsilon must be positive")
        if not (self.step > 0.0):
            raise ValueError("step must be positive")
        pol = self.tp_policy
        if isinstance(pol, TurningPointPolicy):
            pol = (pol,) * 3
        pol = tuple(pol)
        if len(pol) != 3:
            raise ValueError("tp_policy must give one policy per axis")
        object.__setattr__(self, "tp_policy", pol)


@dataclass(frozen=True)
class TrajectoryState:
    t: float
    pos: tuple[float, float, float]
    momenta: tuple[float, float, float]
    velocities: tuple[float, float, float]
    metric: tuple[float, float, float]
    region: tuple[Region, Region, Region]


@dataclass
class Trajectory:
    states: list[TrajectoryState] = field(default_factory=list)
    events: list[tuple[float, str, str]] = field(default_factory=list)

    def dwell_time(self, axis: str) -> float:
        """Total time the given axis spends in its classically forbidden region."""
        i = _AXES.index(axis)
        total = 0.0
        for prev, cur in zip(self.states, self.states[1:]):
            if prev.region[i] is Region.FORBIDDEN:
                total += cur.t - prev.t
        return total


# -- pointwise quantities -------------------------------------------------


def metric_g(action: ReducedAction1D, x) -> float | np.ndarray:
    """Quantum metric factor; equals 1 classically and 2m(E-V)/P^2 on
    solutions (the quantum correction enters with the same sign convention
    as in the QSHJE residual)."""
    hbar = action.constants.hbar
    p = momentum_1d(action, x)
    return 1.0 + 0.5 * hbar * hbar * schwarzian(action, x) / (p * p)


def velocity(
    action: ReducedAction1D, e_axis: float, potential: Potential1D, x
) -> float | np.ndarray:
    """Quantum law of motion: dx/dt = 2 [E - V(x)] / P(x)."""
    return 2.0 * (e_axis - potential(x)) / momentum_1d(action, x)


def velocity_alt(
    action: ReducedAction1D,
    e_axis: float,
    potential: Potential1D,
    x: float,
    step: float = 1e-4,
) -> float:
    """The rejected velocity candidate (P g + (P^2/2) dg/dP) / m.

    dg/dP is taken along the solution via the chain rule g'(x) / P'(x),
    with g'(x) from a 5-point stencil. Exposed for the documented comparison
    only; the integrator never uses it.
    """
    lo, hi = action.pair.domain
    if x - 2 * step < lo or x + 2 * step > hi:
        from .errors import StencilOutOfDomain

        raise StencilOutOfDomain(f"stencil around {x} leaves [{lo}, {hi}]")
    m = action.constants.mass
    p = momentum_1d(action, x)
    g = metric_g(action, x)
    qs = x + step * np.arange(-2.0, 3.0)
    gv = np.array([metric_g(action, q) for q in qs])
    dg_dx = float(np.array([1.0, -8.0, 0.0, 8.0, -1.0]) @ gv) / (12.0 * step)
    # analytic dP/dx = -P D'/D
    u, v = action._uv(x)
    du, dv = action._duv(x)
    d = u * u + v * v
    dp_dx = -p * 2.0 * (u * du + v * dv) / d
    # g constant along the solution (plane-wave-like): the dg/dP term drops
    dg_dp = 0.0 if dg_dx == 0.0 else dg_dx / dp_dx
    return (p * g + 0.5 * p * p * dg_dp) / m


def total_energy_check(
    state: TrajectoryState,
    potentials: tuple[Potential1D, Potential1D, Potential1D],
    energies: EnergySplit,
    mass: float = 1.0,
) -> float:
    """sum_i P_i^2 g_ii / 2m + V(pos) - E; near zero along trajectories."""
    kinetic = sum(
        p * p * g / (2.0 * mass) for p, g in zip(state.momenta, state.metric)
    )
    v_total = sum(float(pot(q)) for pot, q in zip(potentials, state.pos))
    return kinetic + v_total - energies.total()


# -- trajectory integration ----------------------------------------------


class _AxisMotion:
    """Mutable per-axis integration state: current momentum-branch sign."""

    def __init__(self, action: ReducedAction1D, potential: Potential1D,
                 energy: float, policy: TurningPointPolicy):
        self.action = action
        self.potential = potential
        self.energy = energy
        self.policy = policy
        self.sign = 1.0
        self.in_band = False  # suppresses re-firing while |E-V| <= eps

    def kinetic(self, q: float) -> float:
        return self.energy - float(self.potential(q))

    def momentum(self, q: float) -> float:
        return self.sign * momentum_1d(self.action, q)

    def speed(self, q: float) -> float:
        return 2.0 * self.kinetic(q) / self.momentum(q)

    def region(self, q: float, eps: float) -> Region:
        k = self.kinetic(q)
        if abs(k) <= eps:
            return Region.TURNING_POINT
        return Region.ALLOWED if k > 0 else Region.FORBIDDEN


def _rk4_step(fs, q: np.ndarray, h: float) -> np.ndarray:
    k1 = fs(q)
    k2 = fs(q + 0.5 * h * k1)
    k3 = fs(q + 0.5 * h * k2)
    k4 = fs(q + h * k3)
    return q + (h / 6.0) * (k1 + 2 * k2 + 2 * k3 + k4)


# Dormand-Prince 5(4) coefficients
_DP_C = np.array([0.0, 1 / 5, 3 / 10, 4 / 5, 8 / 9, 1.0, 1.0])
_DP_A = [
    [],
    [1 / 5],
    [3 / 40, 9 / 40],
    [44 / 45, -56 / 15, 32 / 9],
    [19372 / 6561, -25360 / 2187, 64448 / 6561, -212 / 729],
    [9017 / 3168, -355 / 33, 46732 / 5247, 49 / 176, -5103 / 18656],
    [35 / 384, 0.0, 500 / 1113, 125 / 192, -2187 / 6784, 11 / 84],
]
_DP_B5 = np.array([35 / 384, 0.0, 500 / 1113, 125 / 192, -2187 / 6784, 11 / 84, 0.0])
_DP_B4 = np.array([
    5179 / 57600, 0.0, 7571 / 16695, 393 / 640, -92097 / 339200, 187 / 2100, 1 / 40,
])


def _rk45_step(fs, q: np.ndarray, h: float) -> tuple[np.ndarray, float]:
    k = [fs(q)]
    for row in _DP_A[1:]:
        k.append(fs(q + h * sum(c * ki for c, ki in zip(row, k))))
    ks = np.array(k)
    q5 = q + h * (_DP_B5 @ ks)
    q4 = q + h * (_DP_B4 @ ks)
    return q5, float(np.max(np.abs(q5 - q4)))


def _locate_turning_point(ax: _AxisMotion, q: float, direction: float) -> float:
    """Root of E - V near q, searched in the direction of motion."""
    span = max(1e-9, abs(q) * 1e-9)
    lo, hi = ax.action.pair.domain
    for _ in range(200):
        q2 = q + direction * span
        if q2 < lo or q2 > hi:
            q2 = np.clip(q2, lo, hi)
        if ax.kinetic(q) * ax.kinetic(q2) <= 0.0:
            a, b = sorted((q, q2))
            return float(brentq(ax.kinetic, a, b, xtol=1e-15))
        if q2 in (lo, hi):
            break
        span *= 2.0
    raise StepUnderflow(f"cannot bracket turning point near {q}")


def _transmit_position(ax: _AxisMotion, q: float, direction: float) -> float:
    """Mirror point just past the turning point with the same |E - V|."""
    q_tp = _locate_turning_point(ax, q, direction)
    target = abs(ax.kinetic(q))
    fn = lambda s: abs(ax.kinetic(s)) - target
    lo, hi = ax.action.pair.domain
    span = max(abs(q_tp - q), 1e-12)
    for _ in range(200):
        q2 = q_tp + direction * span
        if q2 < lo or q2 > hi:
            q2 = np.clip(q2, lo, hi)
        if fn(q2) >= 0.0:
            a, b = sorted((q_tp, q2))
            return float(brentq(fn, a, b, xtol=1e-15))
        if q2 in (lo, hi):
            break
        span *= 2.0
    raise StepUnderflow(f"cannot find transmission point past {q_tp}")


def integrate(
    action3d: SeparableAction3D,
    energies: EnergySplit,
    potentials: tuple[Potential1D, Potential1D, Potential1D],
    start: tuple[float, float, float],
    cfg: MotionConfig,
) -> Trajectory:
    """Integrate the quantum law of motion with turning-point events."""
    axes = [
        _AxisMotion(action3d.component(ax), potentials[i],
                    energies.component(ax), cfg.tp_policy[i])
        for i, ax in enumerate(_AXES)
    ]
    for ax, q0 in zip(axes, start):
        lo, hi = ax.action.pair.domain
        if not lo <= q0 <= hi:
            raise LeftDomain(f"start {q0} outside [{lo}, {hi}]")
        if abs(ax.kinetic(q0)) <= cfg.tp_epsilon:
            raise ValueError("start point sits on a turning point")

    def rhs(q: np.ndarray) -> np.ndarray:
        return np.array([ax.speed(qi) for ax, qi in zip(axes, q)])

    def snapshot(t: float, q: np.ndarray) -> TrajectoryState:
        moms = tuple(ax.momentum(qi) for ax, qi in zip(axes, q))
        vels = tuple(ax.speed(qi) for ax, qi in zip(axes, q))
        mets = tuple(
            float(metric_g(ax.action, qi)) for ax, qi in zip(axes, q)
        )
        regs = tuple(ax.region(qi, cfg.tp_epsilon) for ax, qi in zip(axes, q))
        return TrajectoryState(t, tuple(float(v) for v in q), moms, vels,
                               mets, regs)

    traj = Trajectory()
    t = 0.0
    q = np.array(start, dtype=float)
    traj.states.append(snapshot(t, q))
    eps = cfg.tp_epsilon

    while t < cfg.t_max - 0.5 * cfg.min_step:
        remaining = cfg.t_max - t
        h = remaining if remaining < 1.5 * cfg.step else cfg.step
        # take a step, shrinking when an axis shoots through its turning band
        while True:
            try:
                if cfg.integrator is IntegratorKind.RK4:
                    q_new = _rk4_step(rhs, q, h)
                else:
                    q_new, err = _rk45_step(rhs, q, h)
            except OutOfDomain as exc:
                raise LeftDomain(str(exc)) from exc
            if cfg.integrator is IntegratorKind.RK45:
                if err > 1e-10 * max(1.0, float(np.max(np.abs(q_new)))) \
                        and h > cfg.min_step:
                    h *= 0.5
                    continue
            overshoot = any(
                not ax.in_band
                and ax.kinetic(qi) * ax.kinetic(qn) < 0.0
                and abs(ax.kinetic(qi)) > eps
                for ax, qi, qn in zip(axes, q, q_new)
            )
            if not overshoot or h <= cfg.min_step:
                break
            h *= 0.5
        if h <= cfg.min_step:
            raise StepUnderflow(f"event unresolved at t={t} (step {h:.3e})")

        t += h
        q = q_new
        for i, (ax, qi) in enumerate(zip(axes, q)):
            lo, hi = ax.action.pair.domain
            if qi < lo or qi > hi:
                raise LeftDomain(
                    f"axis {_AXES[i]} left [{lo}, {hi}] at t={t:.6g}"
                )

        # handle turning-point events axis by axis
        for i, ax in enumerate(axes):
            if abs(ax.kinetic(q[i])) > eps:
                ax.in_band = False
                continue
            if ax.in_band:
                continue
            ax.in_band = True
            direction = math.copysign(1.0, ax.speed(q[i]))
            if ax.policy is TurningPointPolicy.REFLECT:
                ax.sign = -ax.sign
                traj.events.append((t, _AXES[i], "Reflection"))
            else:
                q[i] = _transmit_position(ax, q[i], direction)
                ax.sign = -ax.sign
                traj.events.append((t, _AXES[i], "TurningPointCrossing"))

        traj.states.append(snapshot(t, q))

    return traj
