"""Command-line front end.

Subcommands:
    sweep      run a configured sweep and write CSV result files
    scaling    fit bias-scaling exponents and check them against targets
    calibrate  solve noise strengths for dominant-eigenvalue targets
    probes     list built-in probes
    verify     run the acceptance suite

Exit codes: 0 ok, 2 configuration error, 3 numeric failure.
"""

from __future__ import annotations

import argparse
import json
import sys
from importlib import resources
from pathlib import Path

from .estimation import Scheme
from .probes import BUILTIN_PROBE_NAMES, builtin_probe, commuting_subgroup
from .sweeps import (
    DEFAULT_SCALING_DELTAS,
    ConfigError,
    NumericError,
    run_calibrate,
    run_scaling,
    run_sweep_to_files,
    sweep_config_from_dict,
)

PRESETS = ("fig4", "sm-figs", "scaling")


def _load_config(args) -> dict:
    if args.preset and args.config:
        raise ConfigError("give either --config or --preset, not both")
    if args.preset:
        if args.preset not in PRESETS:
            raise ConfigError(f"unknown preset {args.preset!r}; choose from {PRESETS}")
        text = resources.files("vpmetrology.presets").joinpath(f"{args.preset}.json").read_text()
        return json.loads(text)
    if args.config:
        path = Path(args.config)
        if not path.exists():
            raise ConfigError(f"config file {path} not found")
        try:
            return json.loads(path.read_text())
        except json.JSONDecodeError as exc:
            raise ConfigError(f"invalid JSON in {path}: {exc}") from exc
    raise ConfigError("need --config PATH or --preset NAME")


def _cmd_sweep(args) -> int:
    doc = _load_config(args)
    if args.seed is not None:
        doc["seed"] = args.seed
    if args.workers is not None:
        doc["workers"] = args.workers
    if args.accounting is not None:
        doc["accounting"] = args.accounting
    config = sweep_config_from_dict(doc)
    out = args.out or (f"{args.preset}.csv" if args.preset else "sweep.csv")
    paths = run_sweep_to_files(config, out)
    for kind, path in paths.items():
        print(f"{kind}: wrote {path}")
    return 0


def _cmd_scaling(args) -> int:
    doc = _load_config(args)
    schemes = [Scheme.parse(s) for s in doc.get("schemes", ["noisy", "qec", "vp2", "vp3"])]
    report = run_scaling(
        probe_names=doc.get("probes", list(BUILTIN_PROBE_NAMES)),
        schemes=schemes,
        kinds=doc.get("kinds", ["depolarizing", "dephasing"]),
        phi=float(doc.get("phi", 0.05)),
        deltas=doc.get("deltas", DEFAULT_SCALING_DELTAS),
    )
    text = json.dumps(report, indent=2)
    if args.out:
        Path(args.out).write_text(text + "\n")
        print(f"wrote {args.out}")
    else:
        print(text)
    for entry in report["results"]:
        status = "ok" if entry.get("passed") else "FAIL"
        slope = entry.get("slope")
        slope_txt = f"{slope:.3f}" if slope is not None else "n/a"
        print(
            f"{status:4} {entry['probe']:8} {entry['scheme']:5} {entry['noise']:12} "
            f"slope={slope_txt}",
            file=sys.stderr,
        )
    return 0 if report["all_passed"] else 3


def _cmd_calibrate(args) -> int:
    report = run_calibrate(args.probe, args.noise_kind, args.target)
    text = json.dumps(report, indent=2)
    if args.out:
        Path(args.out).write_text(text + "\n")
        print(f"wrote {args.out}")
    else:
        print(text)
    return 0


def _cmd_probes(args) -> int:
    for name in BUILTIN_PROBE_NAMES:
        probe = builtin_probe(name)
        sub = commuting_subgroup(probe.group)
        lo, hi = probe.inversion_domain
        print(
            f"{name:8} qubits={probe.n_qubits} observable={probe.observable.label()} "
            f"domain=[{lo:+.6f}, {hi:+.6f}] code_generators={len(sub.generators)} "
            f"code_dim={1 << (probe.n_qubits - len(sub.generators))}"
        )
    return 0


def _cmd_verify(args) -> int:
    from . import acceptance

    results = acceptance.run_all(names=args.criteria or None)
    width = max(len(r.name) for r in results)
    all_primary_ok = True
    for r in results:
        status = "PASS" if r.passed else "FAIL"
        print(f"[{status}] {r.name:<{width}}  {r.detail}")
        if not r.passed and r.primary:
            all_primary_ok = False
    return 0 if all_primary_ok else 1


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="vpmetrology",
        description="Noisy phase-estimation pipelines on stabilizer probes",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    sweep = sub.add_parser("sweep", help="run a sweep and write CSV files")
    sweep.add_argument("--config", help="sweep config JSON path")
    sweep.add_argument("--preset", help=f"built-in config: {', '.join(PRESETS)}")
    sweep.add_argument("--out", help="output CSV path (stem for multi-kind sweeps)")
    sweep.add_argument("--seed", type=int, help="override config seed")
    sweep.add_argument("--workers", type=int, help="override worker count")
    sweep.add_argument("--accounting", choices=["copies", "shots"], help="override accounting")
    sweep.set_defaults(func=_cmd_sweep)

    scaling = sub.add_parser("scaling", help="bias scaling-exponent report")
    scaling.add_argument("--config", help="scaling config JSON path")
    scaling.add_argument("--preset", help="built-in config (scaling)")
    scaling.add_argument("--out", help="output JSON path")
    scaling.set_defaults(func=_cmd_scaling)

    cal = sub.add_parser("calibrate", help="noise strength for eigenvalue targets")
    cal.add_argument("--probe", action="append", required=True, help="probe name (repeatable)")
    cal.add_argument("--noise-kind", default="depolarizing", choices=["depolarizing", "dephasing"])
    cal.add_argument("--target", action="append", type=float, required=True,
                     help="target dominant eigenvalue (repeatable)")
    cal.add_argument("--out", help="output JSON path")
    cal.set_defaults(func=_cmd_calibrate)

    probes = sub.add_parser("probes", help="list built-in probes")
    probes.set_defaults(func=_cmd_probes)

    verify = sub.add_parser("verify", help="run the acceptance suite")
    verify.add_argument("--criteria", nargs="*", help="subset of criterion names")
    verify.set_defaults(func=_cmd_verify)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    except NumericError as exc:
        print(f"numeric error: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
