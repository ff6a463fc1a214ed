"""Argument parsing, configuration loading and exit-code mapping."""

import argparse
import copy
import json
import logging
import sys
from pathlib import Path
from typing import List, Optional

from pydantic import ValidationError

from ..config import FIXTURES, Config
from ..utils.errors import ConfigurationError, QuantileGateError
from ..utils.logger import set_log_level, setup_logger
from .commands import COMMANDS
from .schema import RunConfig

logger = setup_logger(__name__)


def _add_common(parser: argparse.ArgumentParser) -> None:
    source = parser.add_mutually_exclusive_group()
    source.add_argument("--config", metavar="PATH", help="JSON run configuration")
    source.add_argument("--fixture", choices=sorted(FIXTURES), type=str.upper,
                        help="built-in model preset")
    parser.add_argument("--p0", type=float, help="baseline probability (default: computed from the model)")
    parser.add_argument("--p1", type=str, help="target probability, or start:stop:step for sweep")
    step = parser.add_mutually_exclusive_group()
    step.add_argument("--dt", type=float, help="ZOH step size")
    step.add_argument("--n", type=int, dest="steps", help="number of ZOH steps")
    parser.add_argument("--paths", type=int, help="Monte Carlo paths")
    parser.add_argument("--seed", type=int, help="Monte Carlo seed (drawn and printed if absent)")
    parser.add_argument("--samples", type=int, help=f"time samples for synthesize (default {Config.SAMPLES})")
    parser.add_argument("--out", metavar="PATH", help="write output to PATH instead of stdout")
    parser.add_argument("--format", choices=["table", "csv", "json"], help="output format")
    parser.add_argument("-q", "--quiet", action="store_true", help="log warnings and errors only")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="quantile_gate",
        description="Minimal control energy for terminal probability targets in linear-Gaussian systems.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    helps = {
        'gramians': "continuous (and discrete) noise and control Gramians",
        'translate': "minimal energy to move a halfspace probability from p0 to p1",
        'synthesize': "sample the matched-filter control",
        'discretize': "zero-order-hold discretization",
        'validate': "Monte Carlo validation suite",
        'sweep': "E_min and beta over a p1 grid",
    }
    for name, text in helps.items():
        cmd = sub.add_parser(name, help=text, description=text)
        _add_common(cmd)
        if name == "validate":
            cmd.add_argument("--workers", type=int, default=Config.WORKERS, help="parallel Monte Carlo workers")
            cmd.add_argument("--estimator", choices=["scalar", "path"], default="scalar",
                             help="halfspace tightness estimator")
            cmd.add_argument("--directions", type=int, default=Config.N_DIRECTIONS,
                             help="random directions in the sweep row")
            cmd.add_argument("--progress", action="store_true", help="show a progress bar")
    return parser


def load_config(args: argparse.Namespace) -> RunConfig:
    """Read the JSON document (or preset), apply flag overrides, validate."""
    if args.config:
        with open(Path(args.config), encoding="utf-8") as f:
            raw = json.load(f)
        if not isinstance(raw, dict):
            raise ConfigurationError("configuration must be a JSON object")
    elif args.fixture:
        raw = copy.deepcopy(FIXTURES[args.fixture])
    else:
        raise ConfigurationError("give --config PATH or --fixture NAME")

    if args.p0 is not None:
        raw['p0'] = args.p0
    if args.p1 is not None:
        raw['p1'] = args.p1
    if args.dt is not None:
        raw['dt'] = args.dt
        raw.pop('N', None)
    if args.steps is not None:
        raw['N'] = args.steps
        raw.pop('dt', None)
    if args.paths is not None or args.seed is not None:
        mc = dict(raw.get('mc') or {})
        if args.paths is not None:
            mc['n_paths'] = args.paths
        if args.seed is not None:
            mc['seed'] = args.seed
        raw['mc'] = mc

    return RunConfig.model_validate(raw)


def main(argv: Optional[List[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    set_log_level(logging.WARNING if args.quiet else Config.LOG_LEVEL)
    try:
        cfg = load_config(args)
        return COMMANDS[args.command](cfg, args)
    except ValidationError as e:
        print(f"[ERROR] Invalid configuration:\n{e}", file=sys.stderr)
        return 2
    except QuantileGateError as e:
        print(f"[ERROR] {e}", file=sys.stderr)
        return e.exit_code
    except (OSError, ValueError, KeyError) as e:
        print(f"[ERROR] {e}", file=sys.stderr)
        return 2
    except Exception as e:
        logger.exception(f"Fatal error: {e}")
        return 4
