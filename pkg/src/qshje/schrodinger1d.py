"""Two independent real solutions of the 1D stationary Schrodinger equation.

For a potential V and axis energy E this module produces the canonical
solution basis (X1, X2) with X1(anchor)=1, X1'(anchor)=0 and X2(anchor)=0,
X2'(anchor)=1, so the Wronskian X1*X2' - X2*X1' equals 1 at the anchor and,
because the ODE has no first-derivative term, everywhere on the domain.

Zero and constant potentials use the closed-form trig/hyperbolic catalog;
everything else is integrated with a fixed-step Numerov scheme and cubic
Hermite dense output.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np
from scipy.interpolate import CubicHermiteSpline, CubicSpline

from .errors import EmptyDomain, NonFiniteSolution, OutOfDomain

_OVERFLOW_LIMIT = 1e250


@dataclass(frozen=True)
class PhysicalConstants:
    """hbar and particle mass; natural units by default."""

    hbar: float = 1.0
    mass: float = 1.0

    def __post_init__(self) -> None:
        if not (self.hbar > 0.0):
            raise ValueError(f"hbar must be positive, got {self.hbar}")
        if not (self.mass > 0.0):
            raise ValueError(f"mass must be positive, got {self.mass}")


class PotentialKind(enum.Enum):
    ZERO = "zero"
    CONSTANT = "constant"
    HARMONIC = "harmonic"
    PIECEWISE_LINEAR = "piecewise_linear"
    TABULATED = "tabulated"


@dataclass(frozen=True, eq=False)
class Potential1D:
    """One-axis potential V(x).

    The harmonic kind is V(x) = 0.5 * omega**2 * x**2 (unit mass folded into
    omega). Piecewise-linear potentials are held constant beyond their first
    and last breakpoints; tabulated potentials use a clamped cubic spline.
    """

    kind: PotentialKind
    axis_label: str = "x"
    v0: float = 0.0
    omega: float = 1.0
    breakpoints: tuple = ()
    grid: np.ndarray | None = None
    values: np.ndarray | None = None
    _spline: CubicSpline | None = field(default=None, repr=False)

    @staticmethod
    def zero(axis_label: str = "x") -> "Potential1D":
        return Potential1D(PotentialKind.ZERO, axis_label)

    @staticmethod
    def constant(v0: float, axis_label: str = "x") -> "Potential1D":
        return Potential1D(PotentialKind.CONSTANT, axis_label, v0=float(v0))

    @staticmethod
    def harmonic(omega: float, axis_label: str = "x") -> "Potential1D":
        return Potential1D(PotentialKind.HARMONIC, axis_label, omega=float(omega))

    @staticmethod
    def piecewise_linear(
        points: Sequence[tuple[float, float]], axis_label: str = "x"
    ) -> "Potential1D":
        pts = tuple((float(x), float(v)) for x, v in points)
        xs = [p[0] for p in pts]
        if len(pts) < 2 or any(b <= a for a, b in zip(xs, xs[1:])):
            raise ValueError("breakpoints must be >= 2 strictly increasing points")
        if not all(math.isfinite(p[1]) for p in pts):
            raise ValueError("breakpoint values must be finite")
        return Potential1D(
            PotentialKind.PIECEWISE_LINEAR, axis_label, breakpoints=pts
        )

    @staticmethod
    def tabulated(
        grid: Sequence[float], values: Sequence[float], axis_label: str = "x"
    ) -> "Potential1D":
        g = np.asarray(grid, dtype=float)
        v = np.asarray(values, dtype=float)
        if g.ndim != 1 or g.size < 2 or np.any(np.diff(g) <= 0):
            raise ValueError("tabulated grid must be 1D and strictly increasing")
        if not np.all(np.isfinite(v)) or v.shape != g.shape:
            raise ValueError("tabulated values must be finite and match the grid")
        spline = CubicSpline(g, v)
        return Potential1D(
            PotentialKind.TABULATED, axis_label, grid=g, values=v, _spline=spline
        )

    def __call__(self, x):
        x = np.asarray(x, dtype=float)
        if self.kind is PotentialKind.ZERO:
            out = np.zeros_like(x)
        elif self.kind is PotentialKind.CONSTANT:
            out = np.full_like(x, self.v0)
        elif self.kind is PotentialKind.HARMONIC:
            out = 0.5 * self.omega**2 * x**2
        elif self.kind is PotentialKind.PIECEWISE_LINEAR:
            xs = np.array([p[0] for p in self.breakpoints])
            vs = np.array([p[1] for p in self.breakpoints])
            out = np.interp(x, xs, vs)
        else:
            assert self._spline is not None
            lo, hi = self.grid[0], self.grid[-1]
            out = self._spline(np.clip(x, lo, hi))
        return out if out.ndim else float(out)


@dataclass(frozen=True, eq=False)
class SolutionPair:
    """Canonical basis (X1, X2) of the 1D Schrodinger equation at one energy.

    x1/x2 evaluate the solutions, dx1/dx2 their first derivatives. Second
    derivatives always come from the ODE itself: u'' = curvature(x) * u with
    curvature = 2m (V - E) / hbar^2.
    """

    x1: Callable
    x2: Callable
    dx1: Callable
    dx2: Callable
    curvature: Callable
    wronskian_at_anchor: float
    domain: tuple[float, float]
    energy: float
    anchor: float

    def __post_init__(self) -> None:
        lo, hi = self.domain
        if not lo < hi:
            raise EmptyDomain(f"domain [{lo}, {hi}] is empty")
        if self.wronskian_at_anchor == 0.0:
            raise ValueError("solutions are dependent: Wronskian vanishes at anchor")
        if not lo <= self.anchor <= hi:
            raise OutOfDomain(f"anchor {self.anchor} outside [{lo}, {hi}]")

    def require_inside(self, x) -> None:
        lo, hi = self.domain
        x = np.asarray(x, dtype=float)
        if np.any(x < lo) or np.any(x > hi):
            raise OutOfDomain(f"point {x} outside [{lo}, {hi}]")

    def d2x1(self, x):
        return self.curvature(x) * self.x1(x)

    def d2x2(self, x):
        return self.curvature(x) * self.x2(x)


@dataclass(frozen=True)
class EnergySplit:
    """Per-axis energies; total() is their exact float sum."""

    ex: float
    ey: float
    ez: float

    def total(self) -> float:
        return self.ex + self.ey + self.ez

    def component(self, axis: str) -> float:
        return {"x": self.ex, "y": self.ey, "z": self.ez}[axis]


def pair_from_callables(
    x1: Callable,
    x2: Callable,
    dx1: Callable,
    dx2: Callable,
    potential: Potential1D,
    energy: float,
    domain: tuple[float, float],
    anchor: float,
    constants: PhysicalConstants = PhysicalConstants(),
) -> SolutionPair:
    """Wrap analytically known solutions (e.g. sin/cos) as a SolutionPair."""
    curvature = _curvature_fn(potential, energy, constants)
    w0 = float(x1(anchor) * dx2(anchor) - x2(anchor) * dx1(anchor))
    return SolutionPair(
        x1=x1, x2=x2, dx1=dx1, dx2=dx2, curvature=curvature,
        wronskian_at_anchor=w0, domain=(float(domain[0]), float(domain[1])),
        energy=float(energy), anchor=float(anchor),
    )


def _curvature_fn(
    potential: Potential1D, energy: float, constants: PhysicalConstants
) -> Callable:
    scale = 2.0 * constants.mass / constants.hbar**2

    def curvature(x):
        return scale * (potential(x) - energy)

    return curvature


def solve_pair(
    potential: Potential1D,
    energy: float,
    domain: tuple[float, float],
    anchor: float,
    constants: PhysicalConstants = PhysicalConstants(),
    step: float = 1e-3,
) -> SolutionPair:
    """Build the canonical solution basis at the given axis energy.

    Zero/constant potentials come from the closed-form catalog; other kinds
    are integrated by fixed-step Numerov with cubic Hermite dense output.
    """
    lo, hi = float(domain[0]), float(domain[1])
    if not lo < hi:
        raise EmptyDomain(f"domain [{lo}, {hi}] is empty")
    if not lo <= anchor <= hi:
        raise OutOfDomain(f"anchor {anchor} outside [{lo}, {hi}]")
    if potential.kind in (PotentialKind.ZERO, PotentialKind.CONSTANT):
        return _catalog_pair(potential, energy, (lo, hi), anchor, constants)
    return _numerov_pair(potential, energy, (lo, hi), anchor, constants, step)


def _catalog_pair(potential, energy, domain, anchor, constants) -> SolutionPair:
    v0 = potential.v0 if potential.kind is PotentialKind.CONSTANT else 0.0
    k2 = 2.0 * constants.mass * (energy - v0) / constants.hbar**2
    a = float(anchor)
    if k2 > 0.0:
        k = math.sqrt(k2)
        x1 = lambda x: np.cos(k * (np.asarray(x, float) - a))
        x2 = lambda x: np.sin(k * (np.asarray(x, float) - a)) / k
        dx1 = lambda x: -k * np.sin(k * (np.asarray(x, float) - a))
        dx2 = lambda x: np.cos(k * (np.asarray(x, float) - a))
    elif k2 < 0.0:
        kp = math.sqrt(-k2)
        x1 = lambda x: np.cosh(kp * (np.asarray(x, float) - a))
        x2 = lambda x: np.sinh(kp * (np.asarray(x, float) - a)) / kp
        dx1 = lambda x: kp * np.sinh(kp * (np.asarray(x, float) - a))
        dx2 = lambda x: np.cosh(kp * (np.asarray(x, float) - a))
    else:
        x1 = lambda x: np.ones_like(np.asarray(x, float))
        x2 = lambda x: np.asarray(x, float) - a
        dx1 = lambda x: np.zeros_like(np.asarray(x, float))
        dx2 = lambda x: np.ones_like(np.asarray(x, float))
    return SolutionPair(
        x1=x1, x2=x2, dx1=dx1, dx2=dx2,
        curvature=_curvature_fn(potential, energy, constants),
        wronskian_at_anchor=1.0, domain=domain, energy=float(energy), anchor=a,
    )


def _rk4_seed(curvature, x0: float, u0: float, du0: float, h: float,
              substeps: int = 8) -> float:
    """High-accuracy value of u at x0+h from (u, u') at x0, for Numerov startup."""
    hh = h / substeps
    u, du, x = u0, du0, x0
    for _ in range(substeps):
        k1u, k1d = du, curvature(x) * u
        k2u = du + 0.5 * hh * k1d
        k2d = curvature(x + 0.5 * hh) * (u + 0.5 * hh * k1u)
        k3u = du + 0.5 * hh * k2d
        k3d = curvature(x + 0.5 * hh) * (u + 0.5 * hh * k2u)
        k4u = du + hh * k3d
        k4d = curvature(x + hh) * (u + hh * k3u)
        u, du = (
            u + hh * (k1u + 2 * k2u + 2 * k3u + k4u) / 6.0,
            du + hh * (k1d + 2 * k2d + 2 * k3d + k4d) / 6.0,
        )
        x += hh
    return u


def _numerov_sweep(curvature, grid: np.ndarray, u0: float, du0: float) -> np.ndarray:
    """Numerov recursion along `grid` (uniform spacing, grid[0] is the anchor)."""
    n = grid.size
    u = np.empty(n)
    u[0] = u0
    if n == 1:
        return u
    h = grid[1] - grid[0]
    f = curvature(grid)
    u[1] = _rk4_seed(curvature, grid[0], u0, du0, h)
    w = 1.0 - (h * h / 12.0) * f
    for i in range(1, n - 1):
        u[i + 1] = ((12.0 - 10.0 * w[i]) * u[i] - w[i - 1] * u[i - 1]) / w[i + 1]
        if abs(u[i + 1]) > _OVERFLOW_LIMIT:
            raise NonFiniteSolution(
                f"solution overflow near x={grid[i + 1]:.6g} (forbidden region)"
            )
    if not np.all(np.isfinite(u)):
        raise NonFiniteSolution("non-finite values in Numerov sweep")
    return u


def _derivative_on_grid(u: np.ndarray, f: np.ndarray, h: float) -> np.ndarray:
    """O(h^4) nodal derivatives for u'' = f u (centered, ODE-corrected)."""
    du = np.empty_like(u)
    du[1:-1] = (u[2:] - u[:-2]) / (2.0 * h) - (h / 12.0) * (
        f[2:] * u[2:] - f[:-2] * u[:-2]
    )
    if u.size >= 5:
        c = np.array([-25.0, 48.0, -36.0, 16.0, -3.0]) / (12.0 * h)
        du[0] = c @ u[:5]
        du[-1] = -(c @ u[-1:-6:-1])
    else:
        du[0] = (u[1] - u[0]) / h
        du[-1] = (u[-1] - u[-2]) / h
    return du


def _numerov_pair(potential, energy, domain, anchor, constants, step) -> SolutionPair:
    lo, hi = domain
    curvature = _curvature_fn(potential, energy, constants)
    segments = []  # (grid ascending, index of anchor)
    if anchor - lo > 0:
        n = max(2, int(math.ceil((anchor - lo) / step)) + 1)
        segments.append(np.linspace(anchor, lo, n))
    if hi - anchor > 0:
        n = max(2, int(math.ceil((hi - anchor) / step)) + 1)
        segments.append(np.linspace(anchor, hi, n))

    solutions = {}
    for name, (u0, du0) in (("x1", (1.0, 0.0)), ("x2", (0.0, 1.0))):
        grids, vals, ders = [], [], []
        for seg in segments:
            u = _numerov_sweep(curvature, seg, u0, du0)
            g, u = (seg[::-1], u[::-1]) if seg[-1] < seg[0] else (seg, u)
            du = _derivative_on_grid(u, curvature(g), g[1] - g[0])
            if len(segments) == 2 and g[-1] == anchor:
                # leftward sweep: drop the anchor node duplicated by the right sweep
                g, u, du = g[:-1], u[:-1], du[:-1]
            grids.append(g)
            vals.append(u)
            ders.append(du)
        order = np.argsort([g[0] for g in grids])
        grid = np.concatenate([grids[i] for i in order])
        u = np.concatenate([vals[i] for i in order])
        du = np.concatenate([ders[i] for i in order])
        # pin the exact initial conditions at the anchor node
        ia = int(np.argmin(np.abs(grid - anchor)))
        u[ia], du[ia] = u0, du0
        value_spline = CubicHermiteSpline(grid, u, du)
        deriv_spline = CubicHermiteSpline(grid, du, curvature(grid) * u)
        solutions[name] = (value_spline, deriv_spline)

    (s1, d1), (s2, d2) = solutions["x1"], solutions["x2"]
    return SolutionPair(
        x1=lambda x: s1(x), x2=lambda x: s2(x),
        dx1=lambda x: d1(x), dx2=lambda x: d2(x),
        curvature=curvature, wronskian_at_anchor=1.0,
        domain=domain, energy=float(energy), anchor=float(anchor),
    )


def wronskian(pair: SolutionPair, x) -> float | np.ndarray:
    """X1(x) X2'(x) - X2(x) X1'(x); constant over the domain for this ODE."""
    pair.require_inside(x)
    w = pair.x1(x) * pair.dx2(x) - pair.x2(x) * pair.dx1(x)
    return float(w) if np.ndim(w) == 0 else w
