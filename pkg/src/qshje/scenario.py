"""Scenario file parsing and construction of the domain objects.

Scenarios are INI files (key/value with sections) describing the physical
constants, the three axis potentials, the energy split, the action form
(six gammas or a 16+16 tensor pair), the motion configuration, and output
settings. Command-line flags override file values.
"""

from __future__ import annotations

import configparser
from dataclasses import dataclass, field

import numpy as np

from .dynamics import IntegratorKind, MotionConfig, TurningPointPolicy
from .errors import ConfigError, DegenerateGammas
from .reduced_action import ReducedAction1D, SeparableAction3D, assemble_separable
from .schrodinger1d import (
    EnergySplit,
    PhysicalConstants,
    Potential1D,
    SolutionPair,
    solve_pair,
)
from .tensor_reduction import TensorAction

_AXES = ("x", "y", "z")


@dataclass
class AxisSetup:
    potential: Potential1D
    domain: tuple[float, float]
    anchor: float


@dataclass
class Scenario:
    constants: PhysicalConstants
    axes: tuple[AxisSetup, AxisSetup, AxisSetup]
    energies: EnergySplit
    action_form: str  # "gammas" | "tensor"
    gammas: tuple[float, ...] | None
    orientations: tuple[int, int, int]
    tensor_a: np.ndarray | None
    tensor_b: np.ndarray | None
    lambda0: float
    motion: MotionConfig
    start: tuple[float, float, float]
    out_dir: str
    out_format: str
    seed: int
    solver_step: float = 1e-3
    _pairs: tuple[SolutionPair, ...] | None = field(default=None, repr=False)

    # -- builders --------------------------------------------------------

    def pairs(self) -> tuple[SolutionPair, SolutionPair, SolutionPair]:
        if self._pairs is None:
            self._pairs = tuple(
                solve_pair(ax.potential, self.energies.component(a), ax.domain,
                           ax.anchor, self.constants, step=self.solver_step)
                for a, ax in zip(_AXES, self.axes)
            )
        return self._pairs

    def separable_action(self) -> SeparableAction3D:
        if self.action_form != "gammas":
            raise ConfigError("scenario does not carry a gamma-form action")
        pairs = self.pairs()
        acts = []
        for i, axis in enumerate(_AXES):
            try:
                acts.append(ReducedAction1D(
                    pair=pairs[i],
                    gamma_num=self.gammas[2 * i],
                    gamma_den=self.gammas[2 * i + 1],
                    orientation=self.orientations[i],
                    axis=axis,
                    constants=self.constants,
                ))
            except DegenerateGammas as exc:
                raise ConfigError(
                    f"[action] gammas for axis {axis}: {exc}"
                ) from exc
        return assemble_separable(*acts, lambda0=self.lambda0)

    def tensor_action(self) -> TensorAction:
        if self.action_form != "tensor":
            raise ConfigError("scenario does not carry a tensor-form action")
        return TensorAction(
            a=self.tensor_a, b=self.tensor_b, pairs=self.pairs(),
            additive=self.lambda0, constants=self.constants,
        )

    def potentials(self):
        return tuple(ax.potential for ax in self.axes)


def _floats(raw: str, n: int | None, where: str) -> list[float]:
    try:
        vals = [float(v) for v in raw.replace(",", " ").split()]
    except ValueError as exc:
        raise ConfigError(f"{where}: cannot parse floats from {raw!r}") from exc
    if n is not None and len(vals) != n:
        raise ConfigError(f"{where}: expected {n} values, got {len(vals)}")
    return vals


def _get(cp: configparser.ConfigParser, section: str, key: str,
         default: str | None = None) -> str:
    if cp.has_option(section, key):
        return cp.get(section, key)
    if default is not None:
        return default
    raise ConfigError(f"missing [{section}] {key}")


def _parse_potential(cp, section: str, axis: str) -> AxisSetup:
    kind = _get(cp, section, "kind").strip().lower()
    if kind == "zero":
        pot = Potential1D.zero(axis)
    elif kind == "constant":
        pot = Potential1D.constant(float(_get(cp, section, "v0")), axis)
    elif kind == "harmonic":
        pot = Potential1D.harmonic(float(_get(cp, section, "omega")), axis)
    elif kind == "piecewise_linear":
        raw = _get(cp, section, "points")
        pts = []
        for token in raw.split():
            try:
                x, v = token.split(":")
                pts.append((float(x), float(v)))
            except ValueError as exc:
                raise ConfigError(
                    f"[{section}] points: bad token {token!r}, want x:V"
                ) from exc
        try:
            pot = Potential1D.piecewise_linear(pts, axis)
        except ValueError as exc:
            raise ConfigError(f"[{section}] points: {exc}") from exc
    elif kind == "tabulated":
        grid = _floats(_get(cp, section, "grid"), None, f"[{section}] grid")
        vals = _floats(_get(cp, section, "values"), None, f"[{section}] values")
        try:
            pot = Potential1D.tabulated(grid, vals, axis)
        except ValueError as exc:
            raise ConfigError(f"[{section}]: {exc}") from exc
    else:
        raise ConfigError(f"[{section}] kind: unknown potential kind {kind!r}")
    dom = _floats(_get(cp, section, "domain", "-6 6"), 2, f"[{section}] domain")
    anchor = float(_get(cp, section, "anchor", "0"))
    return AxisSetup(pot, (dom[0], dom[1]), anchor)


def _parse_policy(raw: str) -> tuple[TurningPointPolicy, ...]:
    names = raw.split()
    if len(names) == 1:
        names = names * 3
    if len(names) != 3:
        raise ConfigError("[motion] tp_policy: give one policy or three")
    out = []
    for n in names:
        try:
            out.append(TurningPointPolicy(n.strip().lower()))
        except ValueError as exc:
            raise ConfigError(
                f"[motion] tp_policy: unknown policy {n!r}"
            ) from exc
    return tuple(out)


def load_scenario(path: str, overrides: dict | None = None) -> Scenario:
    """Parse a scenario INI file; `overrides` holds CLI flag values."""
    cp = configparser.ConfigParser()
    read = cp.read(path)
    if not read:
        raise ConfigError(f"cannot read scenario file {path!r}")
    return build_scenario(cp, overrides)


def build_scenario(cp: configparser.ConfigParser,
                   overrides: dict | None = None) -> Scenario:
    """Assemble a Scenario from an already-parsed config."""
    overrides = overrides or {}

    hbar = float(_get(cp, "constants", "hbar", "1.0")) \
        if cp.has_section("constants") else 1.0
    mass = float(_get(cp, "constants", "mass", "1.0")) \
        if cp.has_section("constants") else 1.0
    try:
        constants = PhysicalConstants(hbar=hbar, mass=mass)
    except ValueError as exc:
        raise ConfigError(f"[constants]: {exc}") from exc

    axes = []
    for axis in _AXES:
        section = f"potential.{axis}"
        if not cp.has_section(section):
            raise ConfigError(f"missing section [{section}]")
        axes.append(_parse_potential(cp, section, axis))

    if not cp.has_section("energies"):
        raise ConfigError("missing section [energies]")
    energies = EnergySplit(
        ex=float(_get(cp, "energies", "ex")),
        ey=float(_get(cp, "energies", "ey")),
        ez=float(_get(cp, "energies", "ez")),
    )

    if not cp.has_section("action"):
        raise ConfigError("missing section [action]")
    form = _get(cp, "action", "form").strip().lower()
    gammas = None
    tensor_a = tensor_b = None
    if form == "gammas":
        gammas = tuple(_floats(_get(cp, "action", "gammas"), 6,
                               "[action] gammas"))
        for i, axis in enumerate(_AXES):
            if abs(1.0 - gammas[2 * i] * gammas[2 * i + 1]) < 1e-12:
                raise ConfigError(
                    f"[action] gammas: degenerate pair for axis {axis} "
                    f"(gamma_num*gamma_den = "
                    f"{gammas[2 * i] * gammas[2 * i + 1]!r})"
                )
    elif form == "tensor":
        if cp.has_option("action", "tensor"):
            # flat 16-value row-major array: numerator then denominator
            flat = _floats(_get(cp, "action", "tensor"), 16, "[action] tensor")
            tensor_a = np.array(flat[:8]).reshape(2, 2, 2)
            tensor_b = np.array(flat[8:]).reshape(2, 2, 2)
        else:
            tensor_a = np.array(_floats(_get(cp, "action", "a"), 8,
                                        "[action] a")).reshape(2, 2, 2)
            tensor_b = np.array(_floats(_get(cp, "action", "b"), 8,
                                        "[action] b")).reshape(2, 2, 2)
    else:
        raise ConfigError(f"[action] form: expected gammas or tensor, got {form!r}")
    lambda0 = float(_get(cp, "action", "lambda0", "0"))
    orientations = tuple(
        int(v) for v in _floats(_get(cp, "action", "orientation", "1 1 1"), 3,
                                "[action] orientation")
    )
    if any(o not in (1, -1) for o in orientations):
        raise ConfigError("[action] orientation: entries must be +1 or -1")

    tp_policy = _parse_policy(
        overrides.get("tp_policy") or
        (_get(cp, "motion", "tp_policy", "reflect")
         if cp.has_section("motion") else "reflect")
    )
    if cp.has_section("motion"):
        tp_eps_raw = _get(cp, "motion", "tp_epsilon", "")
        tp_epsilon = float(tp_eps_raw) if tp_eps_raw else \
            1e-6 * max(abs(energies.total()), 1e-6)
        motion = MotionConfig(
            tp_epsilon=tp_epsilon,
            tp_policy=tp_policy,
            step=float(_get(cp, "motion", "step", "1e-3")),
            t_max=float(_get(cp, "motion", "t_max", "10")),
            integrator=IntegratorKind(
                _get(cp, "motion", "integrator", "rk4").strip().lower()
            ),
        )
        start = tuple(_floats(_get(cp, "motion", "start", "0 0 0"), 3,
                              "[motion] start"))
    else:
        motion = MotionConfig(tp_policy=tp_policy,
                              tp_epsilon=1e-6 * max(abs(energies.total()), 1e-6))
        start = (0.0, 0.0, 0.0)

    out_dir = overrides.get("out") or (
        _get(cp, "outputs", "dir", "out") if cp.has_section("outputs") else "out"
    )
    out_format = overrides.get("format") or (
        _get(cp, "outputs", "format", "csv")
        if cp.has_section("outputs") else "csv"
    )
    if out_format not in ("csv", "json"):
        raise ConfigError(f"[outputs] format: expected csv or json, got {out_format!r}")

    seed = overrides.get("seed")
    if seed is None:
        seed = int(_get(cp, "run", "seed", "0")) if cp.has_section("run") else 0
    solver_step = float(_get(cp, "run", "solver_step", "1e-3")) \
        if cp.has_section("run") else 1e-3

    return Scenario(
        constants=constants, axes=tuple(axes), energies=energies,
        action_form=form, gammas=gammas, orientations=orientations,
        tensor_a=tensor_a, tensor_b=tensor_b, lambda0=lambda0,
        motion=motion, start=start, out_dir=out_dir, out_format=out_format,
        seed=int(seed), solver_step=solver_step,
    )
