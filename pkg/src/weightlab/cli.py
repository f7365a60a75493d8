"""Command-line interface.

Subcommands: build-weight, diagnose, welding, curve, report.  A JSON config
supplies defaults; flags override config keys.  Exit codes: 0 success,
2 validation, 3 index-not-found, 4 numeric failure.  Failures print one
machine-parsable line to stderr.
"""

from __future__ import annotations

import argparse
import sys

from .errors import IndexNotFound, NumericFailure, ValidationError
from .harness import (
    ExperimentConfig,
    cmd_build_weight,
    cmd_curve,
    cmd_diagnose,
    cmd_report,
    cmd_welding,
)

_COMMANDS = {
    "build-weight": cmd_build_weight,
    "diagnose": cmd_diagnose,
    "welding": cmd_welding,
    "curve": cmd_curve,
    "report": cmd_report,
}


def _float_list(text: str):
    try:
        return tuple(float(x) for x in text.split(",") if x.strip() != "")
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a comma-separated float list: {text!r}")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="weightlab",
        description=(
            "Construct doubling weights from Riesz products via the "
            "Hardy-Littlewood maximal operator and probe their regularity."
        ),
    )
    sub = parser.add_subparsers(dest="command", required=True)
    for name, fn in _COMMANDS.items():
        p = sub.add_parser(name, help=fn.__doc__.splitlines()[0].lower())
        p.add_argument("--config", metavar="PATH", help="JSON config file")
        p.add_argument("--out", metavar="DIR", dest="output_dir")
        p.add_argument("--grid-exponent", type=int, dest="grid_exponent")
        p.add_argument("--epsilon", type=float)
        p.add_argument("--terms", type=int, metavar="K")
        p.add_argument("--t", type=_float_list, dest="t_values", metavar="LIST")
        p.add_argument("--p", type=_float_list, dest="p_values", metavar="LIST")
        p.add_argument("--deltas", type=_float_list, dest="delta_values", metavar="LIST")
        p.add_argument("--seed", type=int)
        p.add_argument("--scales", type=int)
        p.add_argument(
            "--index-policy", choices=("capped", "strict"), dest="index_policy"
        )
        p.add_argument("--threshold-base", type=float, dest="threshold_base")
        p.add_argument(
            "--family", choices=("all", "triadic"), dest="interval_family"
        )
        p.add_argument("--pair-budget", type=int, dest="pair_budget")
    return parser


def config_from_args(args) -> ExperimentConfig:
    base = (
        ExperimentConfig.from_json(args.config) if args.config else ExperimentConfig()
    )
    overrides = {
        name: getattr(args, name)
        for name in ExperimentConfig.__dataclass_fields__
        if hasattr(args, name)
    }
    return base.with_overrides(**overrides).validate()


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        config = config_from_args(args)
        _COMMANDS[args.command](config)
    except ValidationError as exc:
        print(f"error code=2 kind=validation msg={str(exc)!r}", file=sys.stderr)
        return 2
    except IndexNotFound as exc:
        print(f"error code=3 kind=index-not-found msg={str(exc)!r}", file=sys.stderr)
        return 3
    except NumericFailure as exc:
        print(f"error code=4 kind=numeric msg={str(exc)!r}", file=sys.stderr)
        return 4
    except OSError as exc:
        print(f"error code=2 kind=io msg={str(exc)!r}", file=sys.stderr)
        return 2
    return 0


if __name__ == "__main__":
    sys.exit(main())
