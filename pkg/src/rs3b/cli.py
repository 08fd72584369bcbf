"""Command-line driver: verification campaigns, flows, spectra, duality orbits.

Every run emits one JSON report with stable key order; flow and spectra runs
additionally write CSV artifacts.  Exit codes: 0 all checks pass, 1 a check
failed, 2 configuration error.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from . import campaigns, flows, system
from .campaigns import CheckRecord, trial_rng
from .errors import RS3bError
from .system import Coupling


@dataclass
class CampaignConfig:
    n: int = 3
    y: float = 0.3
    lam: float = 1.0
    seed: int = 0
    trials: int = 200
    tolerances: dict = field(default_factory=dict)
    out: Path | None = None
    generator: str = "H"
    t_final: float = 10.0

    def coupling(self) -> Coupling:
        return Coupling(self.n, self.y, self.lam)

    def as_dict(self) -> dict:
        return {
            "n": self.n,
            "y": self.y,
            "lambda": self.lam,
            "seed": self.seed,
            "trials": self.trials,
            "tolerances": dict(sorted(self.tolerances.items())),
        }


def _apply_tolerances(records: list[CheckRecord], overrides: dict) -> None:
    for rec in records:
        if rec.name in overrides:
            rec.tol = float(overrides[rec.name])


def build_report(command: str, config: CampaignConfig,
                 records: list[CheckRecord], started: float) -> dict:
    return {
        "command": command,
        "config": config.as_dict(),
        "checks": [r.as_dict() for r in records],
        "elapsed_s": round(time.time() - started, 3),
    }


def emit(report: dict, config: CampaignConfig, stream=None) -> None:
    text = json.dumps(report, indent=2)
    print(text, file=stream if stream is not None else sys.stdout)
    if config.out is not None:
        config.out.mkdir(parents=True, exist_ok=True)
        (config.out / f"{report['command']}_report.json").write_text(text + "\n")


# ---------------------------------------------------------------------------
# subcommands
# ---------------------------------------------------------------------------

def cmd_verify(config: CampaignConfig) -> tuple[dict, int]:
    started = time.time()
    c = config.coupling()
    records = campaigns.full_battery(c, config.seed, config.trials)
    _apply_tolerances(records, config.tolerances)
    report = build_report("verify", config, records, started)
    return report, 0 if all(r.passed for r in records) else 1


def cmd_duality(config: CampaignConfig) -> tuple[dict, int]:
    started = time.time()
    c = config.coupling()
    records = campaigns.duality_battery(c, config.seed, config.trials)
    _apply_tolerances(records, config.tolerances)
    report = build_report("duality", config, records, started)
    return report, 0 if all(r.passed for r in records) else 1


def cmd_mcg(config: CampaignConfig) -> tuple[dict, int]:
    """Mapping-class relations, on the double and on reduced orbits."""
    started = time.time()
    c = config.coupling()
    records = campaigns.double_battery(c, config.seed, config.trials)
    _apply_tolerances(records, config.tolerances)
    report = build_report("mcg", config, records, started)
    return report, 0 if all(r.passed for r in records) else 1


def cmd_flow(config: CampaignConfig) -> tuple[dict, int]:
    started = time.time()
    c = config.coupling()
    rng = trial_rng(config.seed, 0)
    p0 = system.sample_local(c, rng, margin=0.05)
    if config.generator == "H":
        gen = flows.hamiltonian_generator(c)
    elif config.generator.startswith("I"):
        gen = flows.action_generator(c, int(config.generator[1:] or 1))
    else:
        raise ValueError(f"unknown generator {config.generator!r}")
    traj = flows.integrate_flow(c, gen, p0, config.t_final,
                                name=config.generator, n_samples=200)
    h0 = system.hamiltonian(c, p0)
    drift = max(abs(system.hamiltonian(c, traj.point(i)) - h0)
                for i in range(len(traj.t)))
    records = [CheckRecord(name="energy_conservation",
                           anchor="energy-flow-conservation",
                           trials=len(traj.t), skips=0,
                           max_residual=float(drift),
                           tol=10.0 * flows.TOL_ODE * max(config.t_final, 1.0))]
    _apply_tolerances(records, config.tolerances)
    report = build_report("flow", config, records, started)
    if config.out is not None:
        config.out.mkdir(parents=True, exist_ok=True)
        traj.to_csv(config.out / "trajectory.csv")
    return report, 0 if all(r.passed for r in records) else 1


def cmd_spectra(config: CampaignConfig) -> tuple[dict, int]:
    """Sample the two toric moment maps for external plotting of the polytope."""
    started = time.time()
    c = config.coupling()
    y = c.abs_y
    rows = []
    defect = 0.0
    for i in range(config.trials):
        rng = trial_rng(config.seed, i)
        q = system.sample_projective(c, rng)
        pos = system.position_map(c, q)
        act = system.action_map(c, q)
        rows.append(np.concatenate([pos, act]))
        for v in (pos, act):
            defect = max(defect, max(0.0, y - v.min()),
                         max(0.0, v.sum() - (np.pi - y)))
    records = [CheckRecord(name="polytope_membership",
                           anchor="toric-image-polytope",
                           trials=config.trials, skips=0,
                           max_residual=defect, tol=1e-9)]
    _apply_tolerances(records, config.tolerances)
    report = build_report("spectra", config, records, started)
    if config.out is not None:
        config.out.mkdir(parents=True, exist_ok=True)
        m = c.n - 1
        header = ",".join(f"J_{k + 1}" for k in range(m)) + "," \
            + ",".join(f"I_{k + 1}" for k in range(m))
        np.savetxt(config.out / "spectra.csv", np.array(rows), delimiter=",",
                   header=header, comments="", fmt="%.17g")
    return report, 0 if all(r.passed for r in records) else 1


COMMANDS = {
    "verify": cmd_verify,
    "duality": cmd_duality,
    "flow": cmd_flow,
    "spectra": cmd_spectra,
    "mcg": cmd_mcg,
}


# ---------------------------------------------------------------------------
# argument handling
# ---------------------------------------------------------------------------

def load_config_file(path: Path) -> dict:
    """Flat key=value text file; CLI flags override its entries."""
    values = {}
    for line in path.read_text().splitlines():
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        key, _, value = line.partition("=")
        values[key.strip()] = value.strip()
    return values


def _expand_tol_flags(argv):
    """Rewrite ``--tol-NAME VALUE`` (or ``--tol-NAME=VALUE``) to ``--tol NAME=VALUE``."""
    if argv is None:
        argv = sys.argv[1:]
    out = []
    it = iter(argv)
    for arg in it:
        if arg.startswith("--tol-"):
            rest = arg[len("--tol-"):]
            if "=" not in rest:
                rest = f"{rest}={next(it, '')}"
            out.extend(["--tol", rest])
        else:
            out.append(arg)
    return out


def parse_args(argv=None) -> tuple[str, CampaignConfig]:
    parser = argparse.ArgumentParser(
        prog="rs3b",
        description="verification workbench for the compactified "
                    "trigonometric Ruijsenaars-Schneider system")
    parser.add_argument("command", choices=sorted(COMMANDS))
    parser.add_argument("--config", type=Path, help="key=value config file")
    parser.add_argument("--n", type=int)
    parser.add_argument("--y", type=float)
    parser.add_argument("--lambda", dest="lam", type=float)
    parser.add_argument("--seed", type=int)
    parser.add_argument("--trials", type=int)
    parser.add_argument("--out", type=Path)
    parser.add_argument("--generator", type=str)
    parser.add_argument("--t", dest="t_final", type=float)
    parser.add_argument("--tol", action="append", default=[],
                        metavar="NAME=VALUE", help="per-check tolerance override")
    args = parser.parse_args(_expand_tol_flags(argv))

    config = CampaignConfig()
    if args.config is not None:
        file_values = load_config_file(args.config)
        casts = {"n": int, "y": float, "lambda": float, "seed": int,
                 "trials": int, "generator": str, "t": float, "out": Path}
        for key, raw in file_values.items():
            if key not in casts:
                raise ValueError(f"unknown config key {key!r}")
            attr = {"lambda": "lam", "t": "t_final"}.get(key, key)
            setattr(config, attr, casts[key](raw))
    for attr in ("n", "y", "lam", "seed", "trials", "out", "generator", "t_final"):
        value = getattr(args, attr)
        if value is not None:
            setattr(config, attr, value)
    for item in args.tol:
        name, _, value = item.partition("=")
        config.tolerances[name] = float(value)
    config.coupling()  # validates the coupling bound at parse time
    return args.command, config


def main(argv=None) -> int:
    try:
        command, config = parse_args(argv)
    except SystemExit as exc:  # argparse error
        return 2 if exc.code not in (0, None) else 0
    except (ValueError, OSError) as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    try:
        report, code = COMMANDS[command](config)
    except RS3bError as exc:
        print(f"run failed: {exc}", file=sys.stderr)
        return 1
    emit(report, config)
    return code


if __name__ == "__main__":
    sys.exit(main())
