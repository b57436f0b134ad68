"""Command-line entry points.

Subcommands:

    check        structure and hyperbolicity diagnostics for the configured
                 system/profile pair, no time evolution
    run          execute the configured experiment and write artifacts
    sweep        execute a parameter sweep config
    convergence  execute a convergence config (shorthand for run)

Exit codes: 0 when the run finished and its assertions passed, 2 when a
hypothesis of the stability framework is violated (bad structure, failed
hyperbolicity, invalid config), 3 on numerical failure (blowup outside a
violation experiment, boundary contamination, singular coefficients).
"""

from __future__ import annotations

import argparse
import json
import math
import sys

import numpy as np

from .config import load_config
from .errors import (
    ConfigError,
    HypothesisViolationError,
    SupportViolationError,
    WavestabError,
)
from .experiments import (
    build_profile,
    build_system,
    run_experiment,
    summary_to_dict,
)
from .systems import check_structure, hyperbolicity_margin

EXIT_OK = 0
EXIT_HYPOTHESIS = 2
EXIT_NUMERICAL = 3

_NUMERICAL_TERMINATIONS = {"Blowup", "BoundaryContamination", "SingularA00"}


def _add_common(parser):
    parser.add_argument("--config", required=True, metavar="PATH",
                        help="TOML experiment config")
    parser.add_argument("--out", default=None, metavar="DIR",
                        help="artifact directory (omit to skip writing)")
    parser.add_argument("--seed", type=int, default=None,
                        help="override [experiment].seed")
    parser.add_argument("--quiet", action="store_true",
                        help="suppress progress lines")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="wavestab",
        description="traveling-wave stability laboratory for 1+1 wave systems",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    for name, text in (
        ("check", "verify coefficient structure and hyperbolicity"),
        ("run", "run the configured experiment"),
        ("sweep", "run a parameter sweep"),
        ("convergence", "run a grid convergence study"),
    ):
        _add_common(sub.add_parser(name, help=text))
    return parser


def _cmd_check(cfg, out, quiet):
    system = build_system(cfg)
    profile = build_profile(cfg, system)
    structure = check_structure(system)
    grid = cfg.grid
    xi = np.linspace(0.5 * grid.x_min,
                     0.5 * (grid.x_max + grid.t_end), 2001)
    hyp = hyperbolicity_margin(system, profile, xi)
    report = {
        "system": system.name,
        "profile": profile.name,
        "structure_satisfied": bool(structure.satisfied),
        "conditions": {
            chk.name: {
                "satisfied": bool(chk.satisfied),
                "fitted_order": (
                    float(chk.fitted_order)
                    if math.isfinite(chk.fitted_order) else None
                ),
            }
            for chk in structure
        },
        "hyperbolicity_lam": float(hyp.lam),
        "hyperbolicity_argmin_xi": float(hyp.argmin_xi),
        "min_1_minus_a1_a2": float(hyp.min_1_minus_a1_a2),
        "min_1_minus_a1": float(hyp.min_1_minus_a1),
    }
    text = json.dumps(report, indent=2, sort_keys=True)
    if not quiet:
        print(text)
    if out is not None:
        from pathlib import Path

        Path(out).mkdir(parents=True, exist_ok=True)
        (Path(out) / "check.json").write_text(text + "\n")
    if not structure.satisfied or hyp.lam <= 0.0:
        return EXIT_HYPOTHESIS
    return EXIT_OK


def _summary_exit(cfg, summary) -> int:
    if summary.termination == "HypothesisViolation":
        return EXIT_HYPOTHESIS
    if summary.kind == "violation":
        # blowup of the violating leg is the expected outcome here
        return EXIT_OK if summary.ok else EXIT_NUMERICAL
    if summary.termination in _NUMERICAL_TERMINATIONS:
        return EXIT_NUMERICAL
    if summary.kind == "sweep":
        flagged = summary.extras.get("rows_flagged", 0)
        if summary.ok:
            return EXIT_HYPOTHESIS if flagged else EXIT_OK
        return EXIT_NUMERICAL
    return EXIT_OK if summary.ok else EXIT_NUMERICAL


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        cfg = load_config(args.config)
        if args.seed is not None:
            cfg.seed = args.seed
        np.random.seed(cfg.seed)
        if args.command == "check":
            return _cmd_check(cfg, args.out, args.quiet)
        if args.command == "sweep" and cfg.kind != "sweep":
            raise ConfigError("sweep subcommand needs a sweep config")
        if args.command == "convergence" and cfg.kind != "convergence":
            raise ConfigError(
                "convergence subcommand needs a convergence config"
            )
        summary = run_experiment(cfg, out_dir=args.out, quiet=args.quiet)
        if not args.quiet:
            print(json.dumps(summary_to_dict(summary), indent=2,
                             sort_keys=True))
        return _summary_exit(cfg, summary)
    except (ConfigError, HypothesisViolationError, SupportViolationError) as exc:
        print(f"hypothesis violation: {exc}", file=sys.stderr)
        return EXIT_HYPOTHESIS
    except WavestabError as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_HYPOTHESIS


if __name__ == "__main__":
    sys.exit(main())
