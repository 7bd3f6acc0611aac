"""Command-line surface: one subcommand per verification, exit 0/1/2."""

from __future__ import annotations

import argparse
import json
import sys
from collections.abc import Sequence
from pathlib import Path
from typing import Any

from .data import GENERATOR_KINDS
from .domain import RunConfig
from .services import SCALES, emit_report, execute, run_gen
from .services.report import jsonable
from .utils.errors import GuardError, InstanceFormatError, ParameterError, PCoverError
from .utils.logging import get_logger, set_verbose

logger = get_logger("pcover.cli")

EXIT_OK = 0
EXIT_VIOLATION = 1
EXIT_USAGE = 2

SUBCOMMANDS = {
    "certify": "exact p-smallness certificate of a family",
    "fragment": "minimum fragments and the cover U(W) for one W",
    "ledger": "bad-W cost against the bucketwise counting bound",
    "estimate": "expected supremum of the selector process",
    "reduce": "the X_p to uniform-subset reduction chain",
    "mcertify": "Poissonized multiset cover and the tail conclusion",
    "mledger": "multiset bad-W cost against (e/K)^t 2^(3 n_b)",
    "bridge": "discretization, cover and witness events of an empirical instance",
    "coverage": "exhaustive tail coverage by the witness events",
    "gen": "generate an instance document",
    "suite": "run the acceptance battery",
}

# extra flags carried in RunConfig.extra
EXTRA_KEYS = ("plot", "greedy", "estimator", "c", "J0", "L_tail", "scale", "kind", "n", "members", "M", "w")


def _guard(raw: str) -> tuple[str, int]:
    name, sep, value = raw.partition("=")
    if not sep:
        raise argparse.ArgumentTypeError(f"expected name=value, got {raw!r}")
    try:
        return name.strip(), int(value)
    except ValueError as err:
        raise argparse.ArgumentTypeError(f"guard {name!r} needs an integer limit, got {value!r}") from err


def _count(raw: str) -> int:
    """Positive integer counts, also written as 1e6."""
    try:
        value = float(raw)
    except ValueError as err:
        raise argparse.ArgumentTypeError(f"expected a count, got {raw!r}") from err
    if not value.is_integer() or value < 1:
        raise argparse.ArgumentTypeError(f"expected a positive whole count, got {raw!r}")
    return int(value)


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--family", help="family JSON document")
    common.add_argument("--lambda", dest="lambda_path", help="sequence collection JSON document")
    common.add_argument("--instance", help="finite empirical instance JSON document")
    common.add_argument("--p", help="selection probability, e.g. 1/8")
    common.add_argument("--N", type=int, help="number of samples")
    common.add_argument("--K", help="subsampling or law multiplier")
    common.add_argument("--J", help="ledger parameter J (J0 for mledger)")
    common.add_argument("--L", help="threshold multiplier")
    common.add_argument("--eps", help="discretization width")
    common.add_argument("--W", help="comma separated elements of W")
    common.add_argument("--w", type=int, help="uniform subset size for estimate")
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--trials", type=_count, default=100_000)
    common.add_argument("--mode", choices=("exact", "float"), default="exact", help="arithmetic")
    common.add_argument("--estimator", choices=("enumerate", "monte-carlo"), default="enumerate")
    common.add_argument("--c", help="constant c of the tail and symmetric-set bounds")
    common.add_argument("--J0", help="J0 of the tail bound")
    common.add_argument("--L-tail", dest="L_tail", help="tail level multiplier, default 2L")
    common.add_argument("--guard", action="append", type=_guard, default=[], metavar="NAME=LIMIT")
    common.add_argument("--out", help="report path; tables go to <out>.<table>.csv")
    common.add_argument("--plot", help="HTML plot path")
    common.add_argument("--greedy", action="store_true", help="also report the greedy cover")
    common.add_argument("--verbose", action="store_true")

    parser = argparse.ArgumentParser(prog="pcover", description="Selector-process cover verification toolkit.")
    sub = parser.add_subparsers(dest="subcommand", required=True)
    for name, help_text in SUBCOMMANDS.items():
        cmd = sub.add_parser(name, parents=[common], help=help_text)
        if name == "gen":
            cmd.add_argument("--kind", choices=GENERATOR_KINDS, required=True)
            cmd.add_argument("--n", type=int, default=4)
            cmd.add_argument("--members", type=int, default=3)
            cmd.add_argument("--M", type=int, default=2)
        if name == "suite":
            cmd.add_argument("--scale", choices=tuple(SCALES), default="quick")
    return parser


def config_from_args(args: argparse.Namespace) -> RunConfig:
    extra: dict[str, Any] = {key: getattr(args, key) for key in EXTRA_KEYS if getattr(args, key, None) not in (None, False)}
    if args.guard:
        extra["guards"] = dict(args.guard)
    return RunConfig(
        subcommand=args.subcommand,
        family=args.family,
        lambda_path=args.lambda_path,
        instance=args.instance,
        p=args.p,
        N=args.N,
        K=args.K,
        J=args.J,
        L=args.L,
        eps=args.eps,
        W=args.W,
        seed=args.seed,
        trials=args.trials,
        mode=args.mode,
        out=args.out,
        extra=extra,
    )


def _write_document(document: dict[str, Any], out: str | None) -> None:
    text = json.dumps(jsonable(document), indent=2, sort_keys=True) + "\n"
    if out is None:
        sys.stdout.write(text)
    else:
        Path(out).write_text(text, encoding="utf-8")


def run(argv: Sequence[str] | None = None) -> int:
    """Parse argv, run the subcommand and return the exit code."""
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code in (0, None) else EXIT_USAGE
    set_verbose(args.verbose)
    config = config_from_args(args)
    try:
        if config.subcommand == "gen":
            _write_document(run_gen(config), config.out)
            return EXIT_OK
        report = execute(config)
        emit_report(report, config.out)
    except (InstanceFormatError, GuardError, ParameterError) as err:
        print(f"pcover {config.subcommand}: {err}", file=sys.stderr)
        return EXIT_USAGE
    except PCoverError as err:
        print(f"pcover {config.subcommand}: {err}", file=sys.stderr)
        return EXIT_VIOLATION
    if not report.holds:
        logger.warning("%s: a verified property does not hold", config.subcommand)
        return EXIT_VIOLATION
    return EXIT_OK


def main() -> None:
    sys.exit(run())
