"""Command-line entry point: ``spqc <subcommand> [--key value ...]``.

Every experiment key can come from a config file (``--config``, INI-style
``key = value`` lines under a section named after the subcommand) and be
overridden by a ``--key value`` flag.  Exit codes: 0 success, 1 failed
verification, 2 configuration error.
"""
from __future__ import annotations

import argparse
import configparser
import dataclasses
import logging
import os
import sys
from pathlib import Path

from .errors import ConfigurationError, SpqcError

EXIT_OK, EXIT_VERIFY_FAILED, EXIT_CONFIG = 0, 1, 2

TRAIN_KEYS = {
    "seeds": "seeds",
    "epochs": "epochs",
    "lr": "learning_rate",
    "learning_rate": "learning_rate",
    "gradient": "gradient",
    "fd_step": "fd_step",
}


def _configure_threads() -> None:
    threads = os.environ.get("SPQC_THREADS")
    if threads and "XLA_FLAGS" not in os.environ:
        if not threads.isdigit() or int(threads) < 1:
            raise ConfigurationError(f"SPQC_THREADS must be a positive integer, got {threads!r}")
        os.environ["XLA_FLAGS"] = (
            f"--xla_cpu_multi_thread_eigen={'true' if int(threads) > 1 else 'false'} "
            f"intra_op_parallelism_threads={threads}"
        )


def parse_seeds(value: str) -> tuple[int, ...]:
    """``"5"`` means seeds 0..4; ``"3,7,11"`` lists them explicitly."""
    value = str(value).strip()
    try:
        if "," in value:
            return tuple(int(v) for v in value.split(",") if v.strip())
        count = int(value)
    except ValueError:
        raise ConfigurationError(f"cannot parse seeds {value!r}") from None
    if count < 1:
        raise ConfigurationError(f"seed count must be >= 1, got {count}")
    return tuple(range(count))


def _coerce(name: str, current, raw: str):
    try:
        if isinstance(current, bool):
            return raw.lower() in ("1", "true", "yes", "on")
        if isinstance(current, int):
            return int(raw)
        if isinstance(current, float):
            return float(raw)
        if isinstance(current, tuple):
            return tuple(int(v) for v in raw.split(",") if v.strip())
    except ValueError:
        raise ConfigurationError(f"bad value for {name}: {raw!r}") from None
    return raw


def build_config(cfg_cls, section: str, config_path: str | None, overrides: dict[str, str]):
    """Defaults, then the config file section, then command-line overrides."""
    values: dict[str, str] = {}
    if config_path:
        parser = configparser.ConfigParser()
        if not parser.read(config_path):
            raise ConfigurationError(f"cannot read config file {config_path}")
        if parser.has_section(section):
            values.update(parser[section])
    values.update({k: v for k, v in overrides.items() if v is not None})

    cfg = cfg_cls()
    train = cfg.train
    fields = {f.name for f in dataclasses.fields(cfg_cls)} - {"train"}
    updates, train_updates = {}, {}
    for key, raw in values.items():
        key = key.replace("-", "_")
        if key in TRAIN_KEYS:
            tkey = TRAIN_KEYS[key]
            train_updates[tkey] = parse_seeds(raw) if tkey == "seeds" else _coerce(key, getattr(train, tkey), raw)
        elif key in fields:
            updates[key] = _coerce(key, getattr(cfg, key), raw)
        else:
            raise ConfigurationError(f"unknown key {key!r} for {section}")
    train = dataclasses.replace(train, **train_updates)
    return dataclasses.replace(cfg, train=train, **updates)


def _add_overrides(sub: argparse.ArgumentParser, cfg_cls) -> None:
    names = [f.name for f in dataclasses.fields(cfg_cls) if f.name != "train"] + list(TRAIN_KEYS)
    for name in dict.fromkeys(names):
        sub.add_argument(f"--{name.replace('_', '-')}", dest=f"opt_{name}", metavar="VALUE")
    sub.add_argument("--config", help="INI-style config file")
    sub.add_argument("--out", default="results", help="output directory (default: results)")
    sub.add_argument("--svg", action="store_true", help="also render SVG figures")


def _overrides(args) -> dict[str, str]:
    return {k[4:]: v for k, v in vars(args).items() if k.startswith("opt_") and v is not None}


def _cmd_step_compare(args) -> int:
    from .experiments import StepCompareConfig, run_step_compare, write_step_compare

    cfg = build_config(StepCompareConfig, "step-compare", args.config, _overrides(args))
    spqc, pqc, data = run_step_compare(cfg)
    paths = write_step_compare(args.out, spqc, pqc, data)
    if args.svg:
        from .plots import line_plot

        paths.append(
            line_plot(
                Path(args.out) / "fig4.svg",
                data.xs,
                {"target": data.ys, "SPQC": spqc.mean_predictions, "PQC": pqc.mean_predictions},
            )
        )
    for r in (spqc, pqc):
        s = r.summary
        print(f"{r.name:<5} mse {s.mean('mse'):.3e} +- {s.std('mse'):.1e}  r2 {s.mean('r2'):.4f}")
    for p in paths:
        print(f"wrote {p}")
    return EXIT_OK


def _cmd_ancilla_scan(args) -> int:
    from .experiments import AncillaScanConfig, run_ancilla_scan, write_ancilla_scan

    cfg = build_config(AncillaScanConfig, "ancilla-scan", args.config, _overrides(args))
    results, data = run_ancilla_scan(cfg)
    paths = write_ancilla_scan(args.out, results, data)
    if args.svg:
        from .plots import line_plot

        series = {"target": data.ys} | {r.name: r.mean_predictions for r in results}
        paths.append(line_plot(Path(args.out) / "fig5.svg", data.xs, series))
    for r in results:
        s = r.summary
        print(f"{r.name:<5} mse {s.mean('mse'):.3e} +- {s.std('mse'):.1e}")
    for p in paths:
        print(f"wrote {p}")
    return EXIT_OK


def _cmd_star(args) -> int:
    from .experiments import StarConfig, run_star, write_star

    cfg = build_config(StarConfig, "star", args.config, _overrides(args))
    linear, quad, data = run_star(cfg)
    paths = write_star(args.out, linear, quad, data, cfg.boundary_side)
    if args.svg:
        from .plots import heatmap_from_csv

        paths.append(heatmap_from_csv(Path(args.out) / "fig6_boundary.csv", Path(args.out) / "fig6.svg", data.polygon))
    for r in (linear, quad):
        s = r.summary
        print(f"{r.name:<9} ({r.spec.total_qubits} qubits) acc {s.mean('accuracy'):.2f}% +- {s.std('accuracy'):.2f}")
    for p in paths:
        print(f"wrote {p}")
    return EXIT_OK


def _cmd_verify(args) -> int:
    from .verify import run_all

    return EXIT_OK if run_all() else EXIT_VERIFY_FAILED


def _cmd_sample(args) -> int:
    import numpy as np

    from .model import ReadoutSpec, SpqcModelSpec
    from .sampling import sample_forward
    from .training import init_params

    spec = SpqcModelSpec(args.n, args.m, args.depth, args.r, readout=ReadoutSpec(args.mixing_depth))
    theta = init_params(spec.num_params, args.theta_seed)
    try:
        x = np.array([float(v) for v in args.x.split(",")])
    except ValueError:
        raise ConfigurationError(f"cannot parse input {args.x!r}") from None
    report = sample_forward(spec, theta, x, args.shots, args.seed)
    print(report.to_text())
    return EXIT_OK


def make_parser() -> argparse.ArgumentParser:
    from .experiments import AncillaScanConfig, StarConfig, StepCompareConfig

    parser = argparse.ArgumentParser(prog="spqc", description="Superposed parameterised quantum circuit experiments")
    parser.add_argument("-v", "--verbose", action="store_true", help="log training progress")
    subs = parser.add_subparsers(dest="command", required=True)

    p = subs.add_parser("step-compare", help="SPQC vs depth-matched PQC on the square wave")
    _add_overrides(p, StepCompareConfig)
    p.set_defaults(func=_cmd_step_compare)

    p = subs.add_parser("ancilla-scan", help="square-wave fit for m = 1..4 address qubits")
    _add_overrides(p, AncillaScanConfig)
    p.set_defaults(func=_cmd_ancilla_scan)

    p = subs.add_parser("star", help="linear vs quadratic activation on the star dataset")
    _add_overrides(p, StarConfig)
    p.set_defaults(func=_cmd_star)

    p = subs.add_parser("verify", help="run the oracle, gradient and normalisation self-checks")
    p.set_defaults(func=_cmd_verify)

    p = subs.add_parser("sample", help="shot-based post-selection statistics for one input")
    p.add_argument("--n", type=int, default=1)
    p.add_argument("--m", type=int, default=2)
    p.add_argument("--depth", type=int, default=2)
    p.add_argument("--r", type=int, default=1, help="activation degree")
    p.add_argument("--mixing-depth", type=int, default=1)
    p.add_argument("--x", default="0.3", help="input features, comma separated")
    p.add_argument("--shots", type=int, default=100_000)
    p.add_argument("--seed", type=int, default=0, help="shot RNG seed")
    p.add_argument("--theta-seed", type=int, default=0, help="seed for the random parameter vector")
    p.set_defaults(func=_cmd_sample)
    return parser


def main(argv=None) -> int:
    parser = make_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(message)s")
    try:
        _configure_threads()
        return args.func(args)
    except ConfigurationError as exc:
        print(f"configuration error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except SpqcError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_VERIFY_FAILED if args.command == "verify" else EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
