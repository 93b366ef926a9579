"""Build and evaluate ordered-weighted clustering coresets from the command line.

Build a p-Centrum coreset at p = 0.1n:
    python scripts/coreset_cli.py build --input points.csv --output coreset.csv \
        --k 2 --p 0.1n --eps 0.1 --seed 1 --report build.json

Evaluate it against 100 random centers, also at several p:
    python scripts/coreset_cli.py eval --input points.csv --coreset coreset.csv \
        --k 2 --p-list 0.01n,0.1n,0.5n,1n --seed 2

Size/error table on synthetic data:
    python scripts/coreset_cli.py benchmark --n 100000 --d 2 --k 2 --seed 1

Settings can also come from a YAML file (--config); flags given on the
command line take precedence.
"""

import argparse
import logging
import os
import sys

sys.path.insert(0, os.path.dirname(os.path.dirname(os.path.abspath(__file__))))

from ordcoreset.commands import COMMANDS, load_run_config, run_command
from ordcoreset.config import Config
from ordcoreset.csv_io import format_report, write_report_json

logger = logging.getLogger(__name__)


def _float_list(text):
    return [float(x) for x in text.split(",") if x.strip()]


def _str_list(text):
    return [x.strip() for x in text.split(",") if x.strip()]


def build_parser():
    parser = argparse.ArgumentParser(description="Ordered weighted clustering coresets")
    parser.add_argument("command", choices=sorted(COMMANDS), help="What to run")
    parser.add_argument("--config", default=None, help="YAML file with default settings")
    parser.add_argument("--input", default=None, help="Point CSV, one point per row")
    parser.add_argument("--output", default=None, help="Coreset (or instance) CSV to write")
    parser.add_argument("--report", default=None, help="JSON report path. Default: stdout")
    parser.add_argument("--coreset", default=None, help="Coreset CSV to evaluate")
    parser.add_argument("--k", type=int, default=None, help="Number of centers")
    parser.add_argument("--p", default=None, help='p as an integer or a fraction of n like "0.1n"')
    parser.add_argument("--p-list", type=_str_list, default=None,
                        help="Comma-separated p values to evaluate at")
    parser.add_argument("--eps", type=float, default=None, help="Target relative error")
    parser.add_argument("--eps-list", type=_float_list, default=None,
                        help="Comma-separated eps values for benchmark")
    parser.add_argument("--eps-net", type=float, default=None,
                        help="Direction net precision. Default: eps")
    parser.add_argument("--alpha", type=_float_list, default=None,
                        help="Power-law weight exponents w_i = 1/i^alpha for eval")
    parser.add_argument("--weights-file", default=None,
                        help="Weight vector file (one non-increasing entry per row) for eval")
    parser.add_argument("--samples", type=int, default=None,
                        help=f"Heuristic center samples. Default: {Config.NUM_SAMPLES}")
    parser.add_argument("--max-samples", type=int, default=None,
                        help="Sample count swept by the heuristic command")
    parser.add_argument("--eval-centers", type=int, default=None,
                        help=f"Random center sets for eval. Default: {Config.EVAL_CENTERS}")
    parser.add_argument("--seed", type=int, default=None, help="Random seed")
    parser.add_argument("--slack", type=float, default=None,
                        help=f"Split threshold multiplier. Default: {Config.SLACK}")
    parser.add_argument("--n", type=int, default=None, help="Instance size for generated data")
    parser.add_argument("--d", type=int, default=None, help="Dimension for generated data")
    parser.add_argument("--log-level", default=None, help=f"Default: {Config.LOG_LEVEL}")
    return parser


def _remove(paths):
    for path in paths:
        if os.path.exists(path):
            os.unlink(path)
            logger.info("Removed partial output %s", path)


def main(argv=None):
    args = build_parser().parse_args(argv)
    overrides = vars(args)
    config_path = overrides.pop("config")
    log_level = overrides["log_level"] or Config.LOG_LEVEL

    logging.basicConfig(
        level=getattr(logging, str(log_level).upper(), logging.INFO),
        format="%(asctime)s [%(levelname)s] %(message)s",
    )

    try:
        config = load_run_config(config_path, **overrides)
    except (OSError, ValueError) as e:
        logger.error("Invalid settings: %s", e)
        return 1
    logging.getLogger().setLevel(getattr(logging, str(config.log_level).upper(), logging.INFO))

    # only files this run creates are removed on failure
    fresh = [path for path in (config.output, config.report) if path and not os.path.exists(path)]
    try:
        report = run_command(config)
        if config.report:
            write_report_json(config.report, report)
        else:
            sys.stdout.write(format_report(report))
    except Exception as e:
        logger.exception("%s failed: %s", config.command, e)
        _remove(fresh)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
