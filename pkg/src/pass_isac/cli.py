"""Command-line entry point.

Subcommands: ``design`` (one scene, prints the solution), ``sweep`` and
``region`` (Monte-Carlo CSV experiments), ``validate`` (oracle checks), and
``defaults`` (prints the effective configuration in the config-file format).
"""

from __future__ import annotations

import argparse
import dataclasses
import logging
import sys

import numpy as np

from .experiments import (
    ExperimentSpec,
    config_text,
    load_config,
    run_design,
    run_experiment,
    run_validation,
    sample_scene,
)
from .geometry import ConfigError, PassIsacError, Scene, Vec3
from .metrics import LN2, IsacWeights

logger = logging.getLogger(__name__)


def _parse_floats(text: str) -> tuple[float, ...]:
    return tuple(float(v) for v in text.split(",") if v.strip())


def _parse_ints(text: str) -> tuple[int, ...]:
    return tuple(int(v) for v in text.split(",") if v.strip())


def _parse_point(text: str) -> tuple[float, ...]:
    values = _parse_floats(text)
    if len(values) not in (2, 3):
        raise argparse.ArgumentTypeError("expected 'x,y' or 'x,y,z'")
    return values


def _add_common(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--config", default=None, help="flat key=value config file")
    parser.add_argument("--seed", type=int, default=None, help="experiment seed")
    parser.add_argument("--out", default=None, help="output directory")
    parser.add_argument("--link", choices=["dl", "ul"], default=None)
    parser.add_argument("--methods", default=None,
                        help="comma list from {pass,baseline}")
    parser.add_argument("--drops", type=int, default=None)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="pass-isac",
        description="Pinching-antenna ISAC design and Monte-Carlo evaluation")
    sub = parser.add_subparsers(dest="command", required=True)

    p_design = sub.add_parser("design", help="design one scene and print the result")
    _add_common(p_design)
    p_design.add_argument("--weight", type=float, default=0.5,
                          help="communication weight in [0, 1]")
    p_design.add_argument("--user", type=_parse_point, default=None,
                          help="user coordinates 'x,y' (z is 0)")
    p_design.add_argument("--target", type=_parse_point, default=None,
                          help="target coordinates 'x,y[,z]'")

    p_sweep = sub.add_parser("sweep", help="weighted-rate sweep to CSV")
    _add_common(p_sweep)
    p_sweep.add_argument("--kind", choices=["sidelength", "elements"],
                         default="sidelength")
    p_sweep.add_argument("--dx", type=_parse_floats, default=None,
                         help="comma list of side lengths (m)")
    p_sweep.add_argument("--elements", type=_parse_ints, default=None,
                         help="comma list of element counts")
    p_sweep.add_argument("--weights", type=_parse_floats, default=None,
                         help="comma list of communication weights")
    p_sweep.add_argument("--resume", action="store_true",
                         help="keep rows already present in records.csv")

    p_region = sub.add_parser("region", help="rate-region sweep to CSV")
    _add_common(p_region)
    p_region.add_argument("--dx", type=_parse_floats, default=None)
    p_region.add_argument("--elements", type=_parse_ints, default=None)
    p_region.add_argument("--weights", type=_parse_floats, default=None)
    p_region.add_argument("--resume", action="store_true")

    p_validate = sub.add_parser("validate", help="run oracle checks to validation.csv")
    _add_common(p_validate)

    p_defaults = sub.add_parser("defaults", help="print the effective configuration")
    p_defaults.add_argument("--config", default=None)

    return parser


def _spec_from_args(spec: ExperimentSpec, args: argparse.Namespace,
                    **overrides) -> ExperimentSpec:
    updates = dict(overrides)
    if getattr(args, "seed", None) is not None:
        updates["seed"] = args.seed
    if getattr(args, "out", None) is not None:
        updates["out_dir"] = args.out
    if getattr(args, "link", None) is not None:
        updates["link"] = {"dl": "downlink", "ul": "uplink"}[args.link]
    if getattr(args, "methods", None) is not None:
        updates["methods"] = tuple(m.strip() for m in args.methods.split(",") if m.strip())
    if getattr(args, "drops", None) is not None:
        updates["drops"] = args.drops
    if getattr(args, "dx", None) is not None:
        updates["dx_values"] = args.dx
    if getattr(args, "elements", None) is not None:
        updates["element_counts"] = args.elements
    if getattr(args, "weights", None) is not None:
        updates["weight_values"] = args.weights
    if getattr(args, "resume", False):
        updates["resume"] = True
    return dataclasses.replace(spec, **updates)


def _print_solution(solution) -> None:
    report = solution.report
    print(f"method: {solution.method}  link: {solution.link}")
    print(f"tx locations (m): {[round(v, 6) for v in solution.tx_layout.locations]}")
    print(f"rx locations (m): {[round(v, 6) for v in solution.rx_layout.locations]}")
    print(f"power: {solution.power:.6g} W", end="")
    if solution.sensing_power is not None:
        print(f"  sensing power: {solution.sensing_power:.6g} W", end="")
    print()
    print(f"spectral efficiency: {report.spectral_efficiency:.6f} nats "
          f"({report.spectral_efficiency / LN2:.6f} bits)")
    print(f"sensing rate bound:  {report.smi_bound:.6f} nats/sample "
          f"({report.smi_bound / LN2:.6f} bits/sample)")
    print(f"weighted objective:  {report.weighted:.6f} nats")
    if solution.partition is not None:
        part = solution.partition
        selected = solution.extras.get("selected_n_user", part.n_user)
        print(f"split: alpha*={part.alpha_star:.6g} -> {part.n_user} user-side "
              f"elements (endpoint check kept {selected})")
    if solution.bcd is not None:
        print(f"bcd: {solution.bcd.iterations} iterations, "
              f"converged={solution.bcd.converged}")


def _cmd_design(args: argparse.Namespace) -> int:
    cfg, spec = load_config(args.config)
    spec = _spec_from_args(spec, args, kind="single")
    if not 0.0 <= args.weight <= 1.0:
        raise ConfigError("weight: must lie in [0, 1]")
    weights = IsacWeights(communication=args.weight, sensing=1.0 - args.weight)

    if (args.user is None) != (args.target is None):
        raise ConfigError("user/target: give both coordinates or neither")
    if args.user is not None:
        user = Vec3(args.user[0], args.user[1], 0.0)
        tz = args.target[2] if len(args.target) == 3 else cfg.target_altitude
        scene = Scene(user=user, target=Vec3(args.target[0], args.target[1], tz))
    else:
        rng = np.random.default_rng([spec.seed, 0, 0])
        scene = sample_scene(cfg.tx_length, cfg.scene_depth, rng,
                             cfg.target_altitude)
    print(f"scene: user=({scene.user.x:.4g}, {scene.user.y:.4g}, 0)  "
          f"target=({scene.target.x:.4g}, {scene.target.y:.4g}, {scene.target.z:.4g})")
    for method in spec.methods:
        solution = run_design(method, spec.link, scene, weights, cfg)
        print("-" * 60)
        _print_solution(solution)
    return 0


def _cmd_sweep(args: argparse.Namespace) -> int:
    cfg, spec = load_config(args.config)
    kind = "sweep-sidelength" if args.kind == "sidelength" else "sweep-elements"
    defaults = {"kind": kind}
    if args.dx is None and kind == "sweep-sidelength":
        defaults["dx_values"] = (10.0, 20.0, 30.0, 40.0, 50.0)
    if args.weights is None:
        defaults["weight_values"] = (0.0, 0.5, 1.0)
    if args.elements is None and kind == "sweep-elements":
        defaults["element_counts"] = (5, 10, 15, 20, 25, 30)
    spec = _spec_from_args(spec, args, **defaults)
    result = run_experiment(spec, cfg)
    print(f"wrote {result.records_path} and {result.summary_path} "
          f"({len(result.records)} records)")
    return 0


def _cmd_region(args: argparse.Namespace) -> int:
    cfg, spec = load_config(args.config)
    defaults = {"kind": "rate-region", "link": "uplink"}
    if args.weights is None:
        defaults["weight_values"] = tuple(np.linspace(0.0, 1.0, 11))
    spec = _spec_from_args(spec, args, **defaults)
    result = run_experiment(spec, cfg)
    print(f"wrote {result.records_path} and {result.summary_path} "
          f"({len(result.records)} records)")
    return 0


def _cmd_validate(args: argparse.Namespace) -> int:
    cfg, spec = load_config(args.config)
    spec = _spec_from_args(spec, args)
    records = run_validation(cfg, spec.seed, spec.out_dir)
    failures = 0
    for record in records:
        status = "PASS" if record.passed else "FAIL"
        print(f"[{status}] {record.name}: {record.detail}")
        failures += 0 if record.passed else 1
    print(f"{len(records) - failures}/{len(records)} checks passed; "
          f"report in {spec.out_dir}/validation.csv")
    return 0 if failures == 0 else 1


def _cmd_defaults(args: argparse.Namespace) -> int:
    cfg, spec = load_config(args.config)
    print(config_text(cfg, spec), end="")
    return 0


def main(argv: list[str] | None = None) -> int:
    logging.basicConfig(level=logging.INFO, format="%(levelname)s %(name)s: %(message)s")
    parser = build_parser()
    args = parser.parse_args(argv)
    handlers = {
        "design": _cmd_design,
        "sweep": _cmd_sweep,
        "region": _cmd_region,
        "validate": _cmd_validate,
        "defaults": _cmd_defaults,
    }
    try:
        return handlers[args.command](args)
    except PassIsacError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
