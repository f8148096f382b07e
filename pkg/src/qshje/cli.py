"""Command-line entry point: verify, trajectory, reduce, and sweep runs.

Exit codes: 0 success, 1 a verification check failed, 2 configuration error,
3 numerical failure. Set QSHJE_LOG=debug|info|warning to control logging.
"""

from __future__ import annotations

import argparse
import configparser
import json
import logging
import os
import sys
from dataclasses import dataclass

import numpy as np

from .amplitude import Amplitude3D, amplitude_at, current_residual
from .dynamics import Region, integrate, metric_g, total_energy_check
from .errors import ConfigError, QshjeError
from .reduced_action import (
    momentum_1d,
    momentum_lower_bound,
    qshje_residual_1d,
)
from .scenario import Scenario, build_scenario, load_scenario
from .schrodinger1d import wronskian
from .tensor_reduction import fit_gammas

_AXES = ("x", "y", "z")
log = logging.getLogger("qshje")


def _fmt(v: float) -> str:
    return format(float(v), ".17g")


def _configure_logging() -> None:
    level = os.environ.get("QSHJE_LOG", "warning").upper()
    logging.basicConfig(
        level=getattr(logging, level, logging.WARNING),
        format="%(levelname)s %(name)s: %(message)s",
    )


def _require_out_dir(path: str) -> None:
    if not os.path.isdir(path):
        raise ConfigError(f"output directory {path!r} does not exist")


def _write_csv(path: str, header: list[str], rows) -> None:
    with open(path, "w", newline="") as fh:
        fh.write(",".join(header) + "\n")
        for row in rows:
            fh.write(",".join(
                v if isinstance(v, str) else _fmt(v) for v in row
            ) + "\n")


def _write_json(path: str, payload) -> None:
    with open(path, "w", newline="") as fh:
        json.dump(payload, fh, indent=2, sort_keys=True)
        fh.write("\n")


# -- verification ----------------------------------------------------------


@dataclass(frozen=True)
class CheckResult:
    name: str
    value: float
    tolerance: float
    passed: bool


@dataclass
class VerificationReport:
    checks: list[CheckResult]

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)


def _axis_samples(scn: Scenario, rng, n: int = 200):
    """Interior sample grids per axis (margin keeps FD stencils inside)."""
    out = []
    for ax in scn.axes:
        lo, hi = ax.domain
        margin = 0.02 * (hi - lo)
        out.append(np.sort(rng.uniform(lo + margin, hi - margin, n)))
    return out

def run_verify(scn: Scenario) -> VerificationReport:
    rng = np.random.default_rng(scn.seed)
    checks: list[CheckResult] = []
    pairs = scn.pairs()
    samples = _axis_samples(scn, rng)

    for i, axis in enumerate(_AXES):
        w = wronskian(pairs[i], samples[i])
        # scale by the product magnitudes: the subtraction cancels to W, so
        # the honest accuracy measure is relative to what gets cancelled
        scale = 1.0 + np.abs(pairs[i].x1(samples[i]) * pairs[i].dx2(samples[i]))
        dev = float(np.max(np.abs(w - pairs[i].wronskian_at_anchor) / scale))
        checks.append(CheckResult(f"wronskian_constancy_{axis}", dev, 1e-6,
                                  dev < 1e-6))

    if scn.action_form == "tensor":
        fit = fit_gammas(scn.tensor_action(), seed=scn.seed)
        checks.append(CheckResult("separability_fit", fit.residual,
                                  fit.threshold, fit.separable))
        if not fit.separable:
            log.warning("tensor action is not separable (residual %.3e); "
                        "skipping the action-level checks", fit.residual)
            return VerificationReport(checks)
        scn = Scenario(**{**scn.__dict__, "action_form": "gammas",
                          "gammas": fit.gammas, "_pairs": pairs})
    action = scn.separable_action()

    for i, axis in enumerate(_AXES):
        comp = action.component(axis)
        res = qshje_residual_1d(comp, scn.axes[i].potential,
                                scn.energies.component(axis), samples[i])
        worst = float(np.max(np.abs(res)))
        checks.append(CheckResult(f"qshje_residual_{axis}", worst, 1e-6,
                                  worst < 1e-6))

        p = momentum_1d(comp, samples[i])
        pmin = float(np.min(np.abs(p)))
        bound = momentum_lower_bound(comp, samples[i])
        ok = pmin > 1e-12 and pmin >= bound * (1.0 - 1e-9)
        checks.append(CheckResult(f"momentum_positive_{axis}", pmin, 1e-12, ok))

    amp = Amplitude3D(action=action)
    pts3 = np.stack([s[rng.integers(0, s.size, 25)] for s in samples], axis=1)
    for i, axis in enumerate(_AXES):
        comp = action.component(axis)
        worst = 0.0
        for p in pts3:
            # relative to the local current magnitude, which can be huge when
            # another axis sits deep in its forbidden region
            current = amplitude_at(amp, p) ** 2 * abs(momentum_1d(comp, p[i]))
            worst = max(worst, abs(current_residual(amp, axis, p)) / current)
        checks.append(CheckResult(f"current_conservation_{axis}", worst, 1e-6,
                                  worst < 1e-6))

    worst = 0.0
    m = scn.constants.mass
    for p in pts3:
        kin = sum(
            momentum_1d(c, p[j]) ** 2 * metric_g(c, p[j]) / (2.0 * m)
            for j, c in enumerate(action.components)
        )
        v = sum(float(scn.axes[j].potential(p[j])) for j in range(3))
        worst = max(worst, abs(kin + v - scn.energies.total()))
    checks.append(CheckResult("energy_partition", worst, 1e-5, worst < 1e-5))
    return VerificationReport(checks)


def _emit_report(report: VerificationReport, scn: Scenario) -> None:
    for c in report.checks:
        print(f"{'PASS' if c.passed else 'FAIL'} {c.name}: "
              f"value={c.value:.6e} tolerance={c.tolerance:.1e}")
    payload = [
        {"name": c.name, "value": c.value, "tolerance": c.tolerance,
         "passed": c.passed}
        for c in report.checks
    ]
    if scn.out_format == "json":
        _write_json(os.path.join(scn.out_dir, "verify_report.json"), payload)
    else:
        _write_csv(
            os.path.join(scn.out_dir, "verify_report.csv"),
            ["name", "value", "tolerance", "passed"],
            [(c.name, c.value, c.tolerance, str(c.passed).lower())
             for c in report.checks],
        )


# -- trajectory ------------------------------------------------------------


def run_trajectory(scn: Scenario) -> int:
    action = scn.separable_action()
    traj = integrate(action, scn.energies, scn.potentials(), scn.start,
                     scn.motion)
    header = ["t", "x", "y", "z", "Px", "Py", "Pz", "vx", "vy", "vz",
              "gxx", "gyy", "gzz", "region_x", "region_y", "region_z"]

    def rowdata(s):
        return (s.t, *s.pos, *s.momenta, *s.velocities, *s.metric,
                *(r.value for r in s.region))

    if scn.out_format == "json":
        _write_json(
            os.path.join(scn.out_dir, "trajectory.json"),
            [dict(zip(header, [v if isinstance(v, str) else float(v)
                               for v in rowdata(s)]))
             for s in traj.states],
        )
        _write_json(
            os.path.join(scn.out_dir, "events.json"),
            [{"t": float(t), "axis": a, "kind": k} for t, a, k in traj.events],
        )
    else:
        _write_csv(os.path.join(scn.out_dir, "trajectory.csv"), header,
                   (rowdata(s) for s in traj.states))
        _write_csv(os.path.join(scn.out_dir, "events.csv"),
                   ["t", "axis", "kind"], traj.events)
    for i, axis in enumerate(_AXES):
        _write_csv(os.path.join(scn.out_dir, f"plot_t_{axis}.csv"),
                   ["t", axis], ((s.t, s.pos[i]) for s in traj.states))
        _write_csv(os.path.join(scn.out_dir, f"plot_phase_{axis}.csv"),
                   [axis, f"P{axis}"],
                   ((s.pos[i], s.momenta[i]) for s in traj.states))

    energy_dev = max(
        abs(total_energy_check(s, scn.potentials(), scn.energies,
                               scn.constants.mass))
        for s in traj.states
    )
    counts: dict[str, int] = {}
    for _, axis, kind in traj.events:
        counts[f"{kind}_{axis}"] = counts.get(f"{kind}_{axis}", 0) + 1
    summary = {
        "states": len(traj.states),
        "t_final": traj.states[-1].t,
        "events_total": len(traj.events),
        "event_counts": counts,
        "max_energy_residual": energy_dev,
        "dwell_time": {a: traj.dwell_time(a) for a in _AXES},
        "seed": scn.seed,
    }
    _write_json(os.path.join(scn.out_dir, "summary.json"), summary)
    print(f"trajectory: {len(traj.states)} states, {len(traj.events)} events, "
          f"max energy residual {energy_dev:.3e}")
    return 0


# -- reduce ----------------------------------------------------------------


def run_reduce(scn: Scenario) -> int:
    if scn.action_form != "tensor":
        raise ConfigError("reduce requires a tensor-form [action] section")
    fit = fit_gammas(scn.tensor_action(), seed=scn.seed)
    payload = {
        "separable": fit.separable,
        "gammas": list(fit.gammas) if fit.gammas is not None else None,
        "residual": fit.residual,
        "restarts": fit.restarts,
        "threshold": fit.threshold,
    }
    if scn.out_format == "json":
        _write_json(os.path.join(scn.out_dir, "reduce_result.json"), payload)
    else:
        gam = " ".join(_fmt(g) for g in fit.gammas) if fit.gammas else ""
        _write_csv(
            os.path.join(scn.out_dir, "reduce_result.csv"),
            ["separable", "gammas", "residual", "restarts", "threshold"],
            [(str(fit.separable).lower(), gam, fit.residual,
              str(fit.restarts), fit.threshold)],
        )
    if fit.separable:
        print("separable: gammas = "
              + " ".join(_fmt(g) for g in fit.gammas)
              + f" (residual {fit.residual:.3e})")
    else:
        print(f"NotSeparable (best residual {fit.residual:.3e} "
              f"over {fit.restarts} restarts)")
    return 0


# -- sweep -----------------------------------------------------------------


def run_sweep(config_path: str, overrides: dict) -> int:
    cp = configparser.ConfigParser()
    if not cp.read(config_path):
        raise ConfigError(f"cannot read scenario file {config_path!r}")
    if not cp.has_section("sweep"):
        raise ConfigError("missing section [sweep]")
    target = cp.get("sweep", "parameter", fallback=None)
    raw_values = cp.get("sweep", "values", fallback=None)
    command = cp.get("sweep", "command", fallback="trajectory").strip()
    if target is None or raw_values is None:
        raise ConfigError("[sweep] needs `parameter` and `values`")
    if "." not in target:
        raise ConfigError("[sweep] parameter must be section.key")
    section, key = target.rsplit(".", 1)
    if not cp.has_section(section):
        raise ConfigError(f"[sweep] parameter: no section [{section}]")
    values = raw_values.split()
    if not values:
        raise ConfigError("[sweep] values is empty")
    if command not in ("trajectory", "verify"):
        raise ConfigError(f"[sweep] command: unknown command {command!r}")

    base = build_scenario(cp, overrides)
    _require_out_dir(base.out_dir)
    index = []
    status = 0
    for n, value in enumerate(values):
        cp.set(section, key, value)
        sub_dir = os.path.join(base.out_dir, f"sweep_{n:03d}")
        os.makedirs(sub_dir, exist_ok=True)
        scn = build_scenario(cp, {**overrides, "out": sub_dir})
        log.info("sweep item %d: %s = %s", n, target, value)
        if command == "trajectory":
            run_trajectory(scn)
        else:
            report = run_verify(scn)
            _emit_report(report, scn)
            if not report.passed:
                status = 1
        index.append({"item": n, "parameter": target, "value": value,
                      "dir": f"sweep_{n:03d}"})
    _write_json(os.path.join(base.out_dir, "sweep_index.json"), index)
    print(f"sweep: {len(values)} items over {target}")
    return status


# -- argument parsing and dispatch ------------------------------------------


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="qshje",
        description="Separable quantum Hamilton-Jacobi actions: verification, "
                    "trajectories, and tensor reduction.",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    for name, text in (
        ("verify", "run the consistency checks for a scenario"),
        ("trajectory", "integrate the quantum law of motion"),
        ("reduce", "fit a tensor action back to six constants"),
        ("sweep", "run a command over a parameter sweep"),
    ):
        p = sub.add_parser(name, help=text)
        p.add_argument("--config", required=True, help="scenario INI file")
        p.add_argument("--seed", type=int, default=None,
                       help="override the scenario seed")
        p.add_argument("--out", default=None, help="output directory")
        p.add_argument("--format", choices=("csv", "json"), default=None,
                       help="output file format")
        p.add_argument("--tp-policy", choices=("reflect", "transmit"),
                       default=None, help="turning-point policy override")
    return parser


def main(argv: list[str] | None = None) -> int:
    _configure_logging()
    args = _build_parser().parse_args(argv)
    overrides = {
        "seed": args.seed,
        "out": args.out,
        "format": args.format,
        "tp_policy": args.tp_policy,
    }
    try:
        if args.command == "sweep":
            return run_sweep(args.config, overrides)
        scn = load_scenario(args.config, overrides)
        _require_out_dir(scn.out_dir)
        if args.command == "verify":
            report = run_verify(scn)
            _emit_report(report, scn)
            return 0 if report.passed else 1
        if args.command == "trajectory":
            return run_trajectory(scn)
        return run_reduce(scn)
    except ConfigError as exc:
        print(f"configuration error: {exc}", file=sys.stderr)
        return 2
    except QshjeError as exc:
        print(f"numerical failure: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
