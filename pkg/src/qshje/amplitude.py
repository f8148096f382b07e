"""Wavefunction amplitude from momentum factors and polar-form wavefunctions.

The amplitude factorizes axis by axis: R = k * |Px|^(-1/2) |Py|^(-1/2)
|Pz|^(-1/2) (absolute values because the momenta carry the direction sign).
Current conservation d/dxi (R^2 dS0/dxi) = 0 then holds per axis because
R^2 * Pi only involves the other two momenta.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import IllConditionedFit, StencilOutOfDomain
from .reduced_action import SeparableAction3D, WaveParameters, momentum_1d
from .schrodinger1d import PhysicalConstants, Potential1D, SolutionPair

_AXIS_INDEX = {"x": 0, "y": 1, "z": 2}

# 5-point central first/second derivative stencils
_D1 = np.array([1.0, -8.0, 0.0, 8.0, -1.0]) / 12.0
_D2 = np.array([-1.0, 16.0, -30.0, 16.0, -1.0]) / 12.0


@dataclass(frozen=True, eq=False)
class Amplitude3D:
    """Separable amplitude R = k_norm * prod |dS0/dxi|^(-1/2)."""

    action: SeparableAction3D
    k_norm: float = 1.0

    def __post_init__(self) -> None:
        if not (self.k_norm > 0.0):
            raise ValueError(f"k_norm must be positive, got {self.k_norm}")


@dataclass(frozen=True, eq=False)
class WavefunctionProduct:
    """Real-coefficient sum of basis products sum a_ijk Xi Yj Zk."""

    coefficients: np.ndarray  # (2, 2, 2)
    pairs: tuple[SolutionPair, SolutionPair, SolutionPair]

    def __post_init__(self) -> None:
        c = np.asarray(self.coefficients, dtype=float).reshape(2, 2, 2)
        object.__setattr__(self, "coefficients", c)
        if not np.any(c):
            raise ValueError("at least one product coefficient must be nonzero")

    def __call__(self, point):
        bx = np.array([self.pairs[0].x1(point[0]), self.pairs[0].x2(point[0])])
        by = np.array([self.pairs[1].x1(point[1]), self.pairs[1].x2(point[1])])
        bz = np.array([self.pairs[2].x1(point[2]), self.pairs[2].x2(point[2])])
        return float(np.einsum("ijk,i,j,k->", self.coefficients, bx, by, bz))


def amplitude_at(amp: Amplitude3D, point) -> float:
    """k_norm * prod_i |P_i(x_i)|^(-1/2); strictly positive."""
    px, py, pz = amp.action.gradient(point)
    return amp.k_norm * (abs(px) * abs(py) * abs(pz)) ** -0.5


def _stencil_points(comp, q: float, step: float) -> np.ndarray:
    lo, hi = comp.pair.domain
    if q - 2 * step < lo or q + 2 * step > hi:
        raise StencilOutOfDomain(
            f"stencil around {q} with step {step} leaves [{lo}, {hi}]"
        )
    return q + step * np.arange(-2.0, 3.0)


def current_residual(amp: Amplitude3D, axis: str, point, step: float = 1e-3) -> float:
    """d/dx_i (R^2 dS0/dx_i) by a 5-point finite-difference stencil."""
    i = _AXIS_INDEX[axis]
    comp = amp.action.component(axis)
    qs = _stencil_points(comp, point[i], step)
    vals = np.empty(5)
    for n, q in enumerate(qs):
        p = list(point)
        p[i] = q
        vals[n] = amplitude_at(amp, p) ** 2 * momentum_1d(comp, q)
    return float(_D1 @ vals) / step


def build_wavefunction(amp: Amplitude3D, wp: WaveParameters, point) -> complex:
    """Polar-form wavefunction R (alpha e^{iS0/hbar} + beta e^{-iS0/hbar})."""
    hbar = amp.action.hbar
    s0 = amp.action.value(point)
    r = amplitude_at(amp, point)
    phase = np.exp(1j * s0 / hbar)
    return complex(r * (wp.alpha * phase + wp.beta / phase))


def schrodinger_residual(
    psi,
    potential: Potential1D,
    energy: float,
    axis: str,
    point,
    domain: tuple[float, float],
    constants: PhysicalConstants = PhysicalConstants(),
    step: float = 1e-2,
) -> complex:
    """1D Schrodinger residual of an arbitrary wavefunction evaluator along
    one axis: -hbar^2/2m d2psi/dxi^2 + (V - E) psi, by finite differences."""
    i = _AXIS_INDEX[axis]
    q = point[i]
    lo, hi = domain
    if q - 2 * step < lo or q + 2 * step > hi:
        raise StencilOutOfDomain(f"stencil around {q} leaves [{lo}, {hi}]")
    vals = np.empty(5, dtype=complex)
    for n, dq in enumerate(step * np.arange(-2.0, 3.0)):
        p = list(point)
        p[i] = q + dq
        vals[n] = psi(p)
    d2 = (_D2 @ vals) / step**2
    pref = -constants.hbar**2 / (2.0 * constants.mass)
    return pref * d2 + (potential(q) - energy) * psi(point)


def compare_to_product(
    amp: Amplitude3D,
    wp: WaveParameters,
    prod: WavefunctionProduct,
    sample_points,
) -> float:
    """Least-squares fit of complex product coefficients to the polar-form
    wavefunction on the samples; returns the relative residual."""
    pts = list(sample_points)
    if len(pts) < 16:
        raise ValueError("need at least 16 sample points in general position")
    basis = np.empty((len(pts), 8), dtype=float)
    target = np.empty(len(pts), dtype=complex)
    for r, p in enumerate(pts):
        bx = np.array([prod.pairs[0].x1(p[0]), prod.pairs[0].x2(p[0])])
        by = np.array([prod.pairs[1].x1(p[1]), prod.pairs[1].x2(p[1])])
        bz = np.array([prod.pairs[2].x1(p[2]), prod.pairs[2].x2(p[2])])
        basis[r] = np.einsum("i,j,k->ijk", bx, by, bz).ravel()
        target[r] = build_wavefunction(amp, wp, p)
    scale = np.max(np.abs(basis), axis=0)
    if np.any(scale == 0.0):
        raise IllConditionedFit("a basis product vanishes on every sample")
    cond = np.linalg.cond(basis / scale)
    if not math.isfinite(cond) or cond > 1e10:
        raise IllConditionedFit(f"sample geometry too degenerate (cond={cond:.3g})")
    coeffs, *_ = np.linalg.lstsq(basis.astype(complex), target, rcond=None)
    misfit = basis @ coeffs - target
    return float(np.linalg.norm(misfit) / np.linalg.norm(target))


def export_wavefunction_rows(amp: Amplitude3D, wp: WaveParameters, points):
    """Rows (x, y, z, Re psi, Im psi, R, S0) for CSV export."""
    rows = []
    for p in points:
        psi = build_wavefunction(amp, wp, p)
        rows.append((
            p[0], p[1], p[2], psi.real, psi.imag,
            amplitude_at(amp, p), amp.action.value(p),
        ))
    return rows
