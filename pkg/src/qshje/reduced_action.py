"""1D reduced actions, the 3D separable action, and their verification.

A reduced action on one axis is hbar * arctan of a Moebius combination of the
two Schrodinger basis solutions. Rather than evaluating (and unwrapping) the
arctan directly, the continuous action is defined as the anchored
antiderivative of the closed-form momentum

    P(x) = orientation * hbar * (1 - gn*gd) * |W| / [(X1+gn*X2)^2 + (gd*X1+X2)^2]

which never vanishes, so the action is strictly monotonic per axis and free
of branch artifacts. The Schwarzian derivative of the action is computed
exactly from momentum derivatives (the basis second derivatives come from the
Schrodinger ODE itself).
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from functools import cached_property

import numpy as np

from .errors import DegeneratePoint, DegenerateGammas, DuplicateAxis
from .schrodinger1d import PhysicalConstants, Potential1D, SolutionPair

_GAMMA_DEGENERACY_TOL = 1e-12

# 5-point Gauss-Legendre nodes/weights on [-1, 1]
_GL_NODES = np.array([
    -0.906179845938663992797626878299,
    -0.538469310105683091036314420700,
    0.0,
    0.538469310105683091036314420700,
    0.906179845938663992797626878299,
])
_GL_WEIGHTS = np.array([
    0.236926885056189087514264040720,
    0.478628670499366468041291514836,
    0.568888888888888888888888888889,
    0.478628670499366468041291514836,
    0.236926885056189087514264040720,
])


@dataclass(frozen=True, eq=False)
class WaveParameters:
    """Coefficients of the progressive/regressive wave components."""

    alpha: complex
    beta: complex

    def __post_init__(self) -> None:
        if self.alpha == 0 and self.beta == 0:
            raise ValueError("(alpha, beta) must not both vanish")


@dataclass(frozen=True, eq=False)
class RecoveryConstants:
    """Mixing constants relating the two wavefunction branches."""

    a: complex
    b: complex
    c: complex
    d: complex

    def __post_init__(self) -> None:
        if abs(self.a * self.d - self.b * self.c) < 1e-14:
            raise ValueError("a*d - b*c must be nonzero (independent combinations)")


@dataclass(frozen=True, eq=False)
class ReducedAction1D:
    """One-axis reduced action: basis pair + two integration constants + sign."""

    pair: SolutionPair
    gamma_num: float
    gamma_den: float
    orientation: int = 1
    axis: str = "x"
    constants: PhysicalConstants = PhysicalConstants()

    def __post_init__(self) -> None:
        if abs(1.0 - self.gamma_num * self.gamma_den) < _GAMMA_DEGENERACY_TOL:
            raise DegenerateGammas(
                f"gamma_num*gamma_den = {self.gamma_num * self.gamma_den!r} "
                "makes the reduced action constant"
            )
        if self.orientation not in (1, -1):
            raise ValueError("orientation must be +1 or -1")
        if self.axis not in ("x", "y", "z"):
            raise ValueError(f"axis must be one of x, y, z, got {self.axis!r}")

    # -- internal combinations ------------------------------------------

    def _uv(self, x):
        p = self.pair
        x1, x2 = p.x1(x), p.x2(x)
        return x1 + self.gamma_num * x2, self.gamma_den * x1 + x2

    def _duv(self, x):
        p = self.pair
        d1, d2 = p.dx1(x), p.dx2(x)
        return d1 + self.gamma_num * d2, self.gamma_den * d1 + d2

    @cached_property
    def _cumulative_action(self):
        """Cumulative Gauss-Legendre integral of the momentum from the anchor."""
        lo, hi = self.pair.domain
        n_cells = max(800, int(math.ceil((hi - lo) / 0.005)))
        nodes = np.unique(np.concatenate(
            [np.linspace(lo, hi, n_cells + 1), [self.pair.anchor]]
        ))
        mid = 0.5 * (nodes[:-1] + nodes[1:])
        half = 0.5 * np.diff(nodes)
        pts = mid[:, None] + half[:, None] * _GL_NODES[None, :]
        vals = momentum_1d(self, pts.ravel()).reshape(pts.shape)
        cell = half * (vals @ _GL_WEIGHTS)
        cum = np.concatenate([[0.0], np.cumsum(cell)])
        ia = int(np.argmin(np.abs(nodes - self.pair.anchor)))
        return nodes, cum - cum[ia]


@dataclass(frozen=True, eq=False)
class SeparableAction3D:
    """Sum of three 1D reduced actions plus the additive constant lambda0."""

    ax: ReducedAction1D
    ay: ReducedAction1D
    az: ReducedAction1D
    lambda0: float = 0.0

    def __post_init__(self) -> None:
        labels = (self.ax.axis, self.ay.axis, self.az.axis)
        if len(set(labels)) != 3:
            raise DuplicateAxis(f"axis labels {labels} are not distinct")

    @property
    def components(self) -> tuple[ReducedAction1D, ...]:
        return (self.ax, self.ay, self.az)

    @property
    def hbar(self) -> float:
        return self.ax.constants.hbar

    def component(self, axis: str) -> ReducedAction1D:
        for a in self.components:
            if a.axis == axis:
                return a
        raise KeyError(axis)

    def value(self, point):
        x, y, z = point
        return (
            action_1d(self.ax, x)
            + action_1d(self.ay, y)
            + action_1d(self.az, z)
            + self.hbar * self.lambda0
        )

    def gradient(self, point):
        x, y, z = point
        return (
            momentum_1d(self.ax, x),
            momentum_1d(self.ay, y),
            momentum_1d(self.az, z),
        )


# -- operations ----------------------------------------------------------


def momentum_1d(action: ReducedAction1D, x):
    """Conjugate momentum dS0/dx; never zero on the domain."""
    action.pair.require_inside(x)
    u, v = action._uv(x)
    c = (
        action.orientation
        * action.constants.hbar
        * (1.0 - action.gamma_num * action.gamma_den)
        * abs(action.pair.wronskian_at_anchor)
    )
    out = c / (u * u + v * v)
    return float(out) if np.ndim(out) == 0 else out


def action_1d(action: ReducedAction1D, x):
    """Continuous branch-unwrapped reduced action, anchored at the principal
    arctan value of the anchor point."""
    action.pair.require_inside(x)
    hbar = action.constants.hbar
    ua, va = action._uv(action.pair.anchor)
    principal = math.atan2(float(ua), float(va))
    if principal > math.pi / 2:
        principal -= math.pi
    elif principal < -math.pi / 2:
        principal += math.pi
    # the orientation sign lives in the momentum; the anchor constant is the
    # plain principal value, so the action stays congruent to the arctan form
    anchor_term = hbar * principal

    nodes, cum = action._cumulative_action
    xs = np.atleast_1d(np.asarray(x, dtype=float))
    idx = np.clip(np.searchsorted(nodes, xs) - 1, 0, nodes.size - 2)
    base = cum[idx]
    a, b = nodes[idx], xs
    mid = 0.5 * (a + b)
    half = 0.5 * (b - a)
    pts = mid[:, None] + half[:, None] * _GL_NODES[None, :]
    vals = momentum_1d(action, pts.reshape(-1)).reshape(pts.shape)
    partial = half * (vals @ _GL_WEIGHTS)
    out = anchor_term + base + partial
    return float(out[0]) if np.ndim(x) == 0 else out


def schwarzian(action: ReducedAction1D, x):
    """Schwarzian derivative {S0; x}, exact from momentum derivatives."""
    action.pair.require_inside(x)
    u, v = action._uv(x)
    du, dv = action._duv(x)
    curv = action.pair.curvature(x)
    d = u * u + v * v
    d1 = 2.0 * (u * du + v * dv)
    d2 = 2.0 * (du * du + curv * u * u + dv * dv + curv * v * v)
    out = 0.5 * (d1 / d) ** 2 - d2 / d
    return float(out) if np.ndim(out) == 0 else out


def qshje_residual_1d(
    action: ReducedAction1D, potential: Potential1D, energy: float, x
):
    """Residual of the quantum stationary HJ equation at (V, E).

    The quantum correction enters as +(hbar^2/4m){S0; x} with the standard
    Schwarzian sign convention; this is the combination that vanishes
    identically when the basis pair solves the Schrodinger equation.
    """
    m = action.constants.mass
    hbar = action.constants.hbar
    p = momentum_1d(action, x)
    s = schwarzian(action, x)
    return p * p / (2.0 * m) + (hbar * hbar / (4.0 * m)) * s + potential(x) - energy


def momentum_lower_bound(action: ReducedAction1D, xs) -> float:
    """Explicit positive lower bound hbar |1-gn*gd| |W| / max(denominator)."""
    u, v = action._uv(np.asarray(xs, dtype=float))
    dmax = float(np.max(u * u + v * v))
    return (
        action.constants.hbar
        * abs(1.0 - action.gamma_num * action.gamma_den)
        * abs(action.pair.wronskian_at_anchor)
        / dmax
    )


def assemble_separable(
    ax: ReducedAction1D,
    ay: ReducedAction1D,
    az: ReducedAction1D,
    lambda0: float = 0.0,
) -> SeparableAction3D:
    return SeparableAction3D(ax=ax, ay=ay, az=az, lambda0=float(lambda0))


def fm_wavefunctions(action: SeparableAction3D, rec: RecoveryConstants,
                     axis: str = "x"):
    """Two independent wavefunction branches built from the reduced action.

    Psi1 = -hbar^2 |dS0/dx|^(-1/2) (a e^{iS0/hbar} + b e^{-iS0/hbar}) and
    Psi2 with (c, d); the prefactor momentum comes from the chosen axis.
    """
    comp = action.component(axis)
    hbar = comp.constants.hbar
    pos = {"x": 0, "y": 1, "z": 2}[axis]

    def _branches(point):
        s0 = action.value(point)
        p = momentum_1d(comp, point[pos])
        pref = -hbar * hbar * abs(p) ** -0.5
        ep = np.exp(1j * s0 / hbar)
        return pref * ep, pref / ep

    def psi1(point):
        ep, em = _branches(point)
        return rec.a * ep + rec.b * em

    def psi2(point):
        ep, em = _branches(point)
        return rec.c * ep + rec.d * em

    return psi1, psi2


def recover_action(psi1, psi2, rec: RecoveryConstants, point,
                   constants: PhysicalConstants = PhysicalConstants()):
    """Invert the wavefunction pair back to the reduced action (mod pi*hbar)."""
    p1, p2 = psi1(point), psi2(point)
    den = rec.c * p1 - rec.a * p2
    if abs(den) < 1e-12:
        raise DegeneratePoint(f"denominator {abs(den):.3e} below 1e-12 at {point}")
    num = -rec.d * p1 + rec.b * p2
    return (constants.hbar / 2j) * cmath.log(num / den)
