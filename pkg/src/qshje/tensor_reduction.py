"""The 16-coefficient arctan action, its separable subfamily, and the fit back.

A tensor action is hbar * arctan(N/D) with N, D trilinear in the basis
solutions: N = sum a_ijk Xi Yj Zk, D = sum b_ijk Xi Yj Zk. Expanding the
separable sum of three 1D arctans through the three-angle tangent addition
identity lands exactly in this family; fitting the 16+16 coefficients back to
six constants (by seeded multi-start nonlinear least squares) certifies or
refutes separability of a given tensor.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np
from scipy.optimize import least_squares

from .errors import DegenerateGammas, DegenerateTensor, DenominatorZero
from .schrodinger1d import PhysicalConstants, SolutionPair

_GAMMA_DEGENERACY_TOL = 1e-12


@dataclass(frozen=True, eq=False)
class TensorAction:
    """arctan of a ratio of trilinear forms over three solution bases."""

    a: np.ndarray  # (2, 2, 2), numerator coefficients
    b: np.ndarray  # (2, 2, 2), denominator coefficients
    pairs: tuple[SolutionPair, SolutionPair, SolutionPair]
    additive: float = 0.0
    constants: PhysicalConstants = PhysicalConstants()

    def __post_init__(self) -> None:
        a = np.asarray(self.a, dtype=float).reshape(2, 2, 2)
        b = np.asarray(self.b, dtype=float).reshape(2, 2, 2)
        object.__setattr__(self, "a", a)
        object.__setattr__(self, "b", b)
        if not (np.any(a) or np.any(b)):
            raise DegenerateTensor("both coefficient tensors are zero")

    def basis_values(self, point, derivative: bool = False) -> list[np.ndarray]:
        """[X1 X2], [Y1 Y2], [Z1 Z2] (or first derivatives) at the point."""
        out = []
        for q, pair in zip(point, self.pairs):
            if derivative:
                out.append(np.array([pair.dx1(q), pair.dx2(q)]))
            else:
                out.append(np.array([pair.x1(q), pair.x2(q)]))
        return out

    def numerator_denominator(self, point) -> tuple[float, float]:
        bx, by, bz = self.basis_values(point)
        n = float(np.einsum("ijk,i,j,k->", self.a, bx, by, bz))
        d = float(np.einsum("ijk,i,j,k->", self.b, bx, by, bz))
        return n, d

    @property
    def base_point(self) -> tuple[float, float, float]:
        return tuple(p.anchor for p in self.pairs)


@dataclass(frozen=True, eq=False)
class GammaExpansion:
    """Bilinear coefficient sets of one axis quotient (X1 + G1(y,z) X2) /
    (G2(y,z) X1 + X2) with G1, G2 bilinear in the other two bases."""

    g1: np.ndarray  # (2, 2)
    g2: np.ndarray  # (2, 2)
    axis: str = "x"

    def __post_init__(self) -> None:
        object.__setattr__(self, "g1", np.asarray(self.g1, dtype=float).reshape(2, 2))
        object.__setattr__(self, "g2", np.asarray(self.g2, dtype=float).reshape(2, 2))


@dataclass(frozen=True)
class GammaFit:
    """Outcome of fitting a tensor pair back to six gamma constants."""

    separable: bool
    gammas: tuple[float, ...] | None
    residual: float
    restarts: int
    threshold: float


def _gamma_axis_vectors(g_num: float, g_den: float):
    """Coefficient vectors of u = X1 + g_num X2 and v = g_den X1 + X2."""
    return np.array([1.0, g_num]), np.array([g_den, 1.0])


def expand_gammas(gammas: Sequence[float]) -> tuple[np.ndarray, np.ndarray]:
    """Coefficient tensors realizing tan(Sx+Sy+Sz) via the three-angle
    tangent addition identity (A+B+C-ABC)/(1-AB-BC-CA)."""
    g = [float(v) for v in gammas]
    if len(g) != 6:
        raise ValueError("expected six gamma constants")
    for gn, gd in ((g[0], g[1]), (g[2], g[3]), (g[4], g[5])):
        if abs(1.0 - gn * gd) < _GAMMA_DEGENERACY_TOL:
            raise DegenerateGammas(f"1 - {gn}*{gd} vanishes")
    u1, v1 = _gamma_axis_vectors(g[0], g[1])
    u2, v2 = _gamma_axis_vectors(g[2], g[3])
    u3, v3 = _gamma_axis_vectors(g[4], g[5])
    tri = lambda p, q, r: np.einsum("i,j,k->ijk", p, q, r)
    a = tri(u1, v2, v3) + tri(v1, u2, v3) + tri(v1, v2, u3) - tri(u1, u2, u3)
    b = tri(v1, v2, v3) - tri(u1, u2, v3) - tri(v1, u2, u3) - tri(u1, v2, u3)
    return a, b


def tensor_from_gammas(
    gammas: Sequence[float],
    pairs: tuple[SolutionPair, SolutionPair, SolutionPair],
    additive: float = 0.0,
    constants: PhysicalConstants = PhysicalConstants(),
) -> TensorAction:
    a, b = expand_gammas(gammas)
    return TensorAction(a=a, b=b, pairs=pairs, additive=additive,
                        constants=constants)


def eval_tensor_action(t: TensorAction, point) -> float:
    """Branch-unwrapped hbar*arctan(N/D) + hbar*additive, continued along the
    straight path from the base point (pair anchors)."""
    base = np.asarray(t.base_point, dtype=float)
    target = np.asarray(point, dtype=float)
    for q, pair in zip(target, t.pairs):
        pair.require_inside(q)

    def nd(s: float) -> tuple[float, float]:
        return t.numerator_denominator(base + s * (target - base))

    n_end, d_end = nd(1.0)
    scale = math.hypot(n_end, d_end)
    if scale == 0.0 or abs(d_end) < 1e-13 * scale:
        raise DenominatorZero(f"denominator ~0 at {tuple(target)}")

    n0, d0 = t.numerator_denominator(base)
    theta = math.atan2(n0, d0)
    if theta > math.pi / 2:
        theta -= math.pi
    elif theta < -math.pi / 2:
        theta += math.pi

    # adaptive projective-angle continuation along the segment
    stack = [(0.0, 1.0, (n0, d0), (n_end, d_end))]
    total = 0.0
    while stack:
        s0, s1, (na, da), (nb, db) = stack.pop()
        cross = da * nb - na * db
        dot = da * db + na * nb
        if math.hypot(cross, dot) == 0.0:
            raise DenominatorZero("vanishing (N, D) along the evaluation path")
        if abs(cross) <= 0.25 * abs(dot):
            # projective (RP^1) increment: |delta| < atan(0.25), sign-flip safe
            total += math.atan(cross / dot)
            continue
        if s1 - s0 < 1e-12:
            raise DenominatorZero("cannot localise arctan branch along path")
        sm = 0.5 * (s0 + s1)
        mid = nd(sm)
        stack.append((sm, s1, mid, (nb, db)))
        stack.append((s0, sm, (na, da), mid))

    hbar = t.constants.hbar
    return hbar * (theta + total) + hbar * t.additive


def tensor_gradient_component(t: TensorAction, point, axis_index: int) -> float:
    """Analytic dS/dx_i of the tensor action (branch-free)."""
    vals = t.basis_values(point)
    ders = t.basis_values(point, derivative=True)
    basis = list(vals)
    basis_d = list(vals)
    basis_d[axis_index] = ders[axis_index]
    n = float(np.einsum("ijk,i,j,k->", t.a, *basis))
    d = float(np.einsum("ijk,i,j,k->", t.b, *basis))
    n_i = float(np.einsum("ijk,i,j,k->", t.a, *basis_d))
    d_i = float(np.einsum("ijk,i,j,k->", t.b, *basis_d))
    denom = n * n + d * d
    if denom == 0.0:
        raise DenominatorZero(f"(N, D) vanishes at {tuple(point)}")
    return t.constants.hbar * (n_i * d - n * d_i) / denom


def count_monomials(obj) -> tuple[int, int]:
    """Distinct monomial counts (numerator, denominator) of the quotient."""
    if isinstance(obj, GammaExpansion):
        return 1 + int(np.count_nonzero(obj.g1)), int(np.count_nonzero(obj.g2)) + 1
    if isinstance(obj, TensorAction):
        return int(np.count_nonzero(obj.a)), int(np.count_nonzero(obj.b))
    raise TypeError(f"expected GammaExpansion or TensorAction, got {type(obj)!r}")


def _normalize_tensors(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Joint scaling so the largest-magnitude entry of b (falling back to a)
    equals 1; returns the stacked 32-vector."""
    vec = np.concatenate([a.ravel(), b.ravel()])
    bmax = np.max(np.abs(b))
    ref = b.ravel()[np.argmax(np.abs(b))] if bmax > 0 else \
        a.ravel()[np.argmax(np.abs(a))]
    if ref == 0.0:
        raise DegenerateTensor("both coefficient tensors are zero")
    return vec / ref


def fit_gammas(
    t: TensorAction,
    restarts: int = 20,
    threshold: float = 1e-7,
    seed: int = 0,
) -> GammaFit:
    """Invert expand_gammas by multi-start nonlinear least squares.

    Accepts (returning the six constants) when the sup-norm residual between
    the normalized planted and fitted tensors drops below `threshold`;
    otherwise reports NotSeparable with the best residual attained.
    """
    target = _normalize_tensors(t.a, t.b)
    tnorm2 = float(target @ target)

    def residual_vec(g: np.ndarray) -> np.ndarray:
        for gn, gd in ((g[0], g[1]), (g[2], g[3]), (g[4], g[5])):
            if abs(1.0 - gn * gd) < 1e-9:
                return np.full(32, 1e6)
        a, b = expand_gammas(g)
        cand = np.concatenate([a.ravel(), b.ravel()])
        s = float(cand @ target) / float(cand @ cand)
        return s * cand - target

    rng = np.random.default_rng(seed)
    starts = [np.zeros(6)] + [rng.uniform(-2.0, 2.0, 6) for _ in range(restarts - 1)]
    best_g, best_sup = None, math.inf
    for x0 in starts:
        try:
            sol = least_squares(residual_vec, x0, method="lm", xtol=1e-15,
                                ftol=1e-15, gtol=1e-15, max_nfev=2000)
        except Exception:
            continue
        sup = float(np.max(np.abs(residual_vec(sol.x))))
        if sup < best_sup:
            best_sup, best_g = sup, sol.x.copy()
        if best_sup < min(threshold * 1e-3, 1e-12) * max(1.0, math.sqrt(tnorm2)):
            break
    if best_g is None:
        raise DegenerateTensor("no least-squares restart converged")
    if best_sup < threshold:
        return GammaFit(True, tuple(float(v) for v in best_g), best_sup,
                        restarts, threshold)
    return GammaFit(False, None, best_sup, restarts, threshold)
