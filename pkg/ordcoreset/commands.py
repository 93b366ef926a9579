"""Command implementations behind scripts/coreset_cli.py.

Each cmd_* function takes a RunConfig, writes its data outputs (coreset or
instance CSV) and returns the report as a flat dict. Writing the report and
cleaning up after failures is left to the caller.
"""

import logging
import math
import re
from dataclasses import dataclass, field, fields

import numpy as np
import yaml

from .centers import Exact1DCenterProvider, SamplingCenterProvider, sampling_curve
from .config import Config
from .core import WeightVector, cost_p, cost_v, p_grid
from .coreset_nd import build_pcentrum_coreset, build_simultaneous_coreset
from .csv_io import (
    ingest_csv,
    load_weight_vector,
    read_coreset_csv,
    write_coreset_csv,
    write_points_csv,
)
from .timing import median_ms
from .verify import (
    claim_check,
    claim_interval,
    coreset_error,
    gaussian_blobs,
    kahan_prefix_sums,
    piece_lower_bound,
    profile_errors,
    profile_pieces,
    random_box_centers,
    sqrt_instance,
)

logger = logging.getLogger(__name__)

DEFAULT_EPS_LIST = (0.5, 0.3, 0.2, 0.1, 0.05)

_FRACTION_OF_N = re.compile(r"^\s*([0-9]*\.?[0-9]+(?:[eE][-+]?[0-9]+)?)\s*n\s*$")


@dataclass
class RunConfig:
    command: str = None
    input: str = None
    output: str = None
    report: str = None
    coreset: str = None
    k: int = 2
    p: object = "0.1n"
    p_list: list = None
    eps: float = 0.1
    eps_list: list = None
    eps_net: float = None
    alpha: list = None
    weights_file: str = None
    samples: int = field(default_factory=lambda: Config.NUM_SAMPLES)
    max_samples: int = 100
    eval_centers: int = field(default_factory=lambda: Config.EVAL_CENTERS)
    seed: int = None
    slack: float = field(default_factory=lambda: Config.SLACK)
    n: int = None
    d: int = 2
    log_level: str = field(default_factory=lambda: Config.LOG_LEVEL)


def load_run_config(path=None, **overrides):
    """RunConfig from an optional YAML file; non-None overrides win."""
    values = {}
    if path:
        with open(path) as f:
            loaded = yaml.safe_load(f) or {}
        if not isinstance(loaded, dict):
            raise ValueError(f"{path}: expected a mapping of settings, got {type(loaded).__name__}")
        values.update({key.replace("-", "_"): value for key, value in loaded.items()})
    values.update({key: value for key, value in overrides.items() if value is not None})

    known = {f.name for f in fields(RunConfig)}
    unknown = sorted(set(values) - known)
    if unknown:
        raise ValueError(f"unknown settings: {', '.join(unknown)}")
    return RunConfig(**values)


def resolve_p(spec, n):
    """Absolute p, or a fraction of n written like "0.1n" (rounded up)."""
    if isinstance(spec, str):
        match = _FRACTION_OF_N.match(spec)
        if match:
            p = math.ceil(float(match.group(1)) * n)
        else:
            try:
                p = int(spec)
            except ValueError:
                raise ValueError(f"p must be an integer or a fraction like 0.1n, got {spec!r}") from None
    else:
        p = int(spec)
    if not 1 <= p <= n:
        raise ValueError(f"p resolves to {p}, outside [1, {n}]")
    return p


def _require(config, *names):
    missing = [name for name in names if getattr(config, name) in (None, "")]
    if missing:
        raise ValueError(f"{config.command or 'command'} needs: {', '.join('--' + m.replace('_', '-') for m in missing)}")


def _provider(config):
    return SamplingCenterProvider(seed=config.seed, num_samples=config.samples)


def _build_report(config, data, coreset, build_ms):
    return {
        "command": config.command,
        "n": data.n,
        "d": data.dimension,
        "k": config.k,
        "eps": config.eps,
        "slack": config.slack,
        "seed": config.seed,
        "samples": config.samples,
        "coreset_size": coreset.size,
        "build_ms": build_ms,
    }


def cmd_build(config):
    _require(config, "input", "output", "seed")
    data = ingest_csv(config.input)
    p = resolve_p(config.p, data.n)
    build_ms, coreset = median_ms(lambda: build_pcentrum_coreset(
        data, config.k, p, config.eps, center_provider=_provider(config),
        eps_net=config.eps_net, slack=config.slack,
    ))
    write_coreset_csv(config.output, coreset)
    report = _build_report(config, data, coreset, build_ms)
    report["p"] = p
    return report


def cmd_build_simultaneous(config):
    _require(config, "input", "output", "seed")
    data = ingest_csv(config.input)
    build_ms, coreset = median_ms(lambda: build_simultaneous_coreset(
        data, config.k, config.eps, center_provider=_provider(config),
        eps_net=config.eps_net, slack=config.slack,
    ))
    write_coreset_csv(config.output, coreset)
    report = _build_report(config, data, coreset, build_ms)
    report["p_grid"] = p_grid(data.n, config.eps)
    return report


def _eval_objectives(config, n):
    """(report key suffix, objective) pairs requested by the config."""
    if config.weights_file:
        return [("weights", load_weight_vector(config.weights_file))]
    if config.alpha:
        return [(f"alpha{a}", WeightVector.power_law(n, float(a))) for a in config.alpha]
    if config.p_list:
        return [(f"p{p}", p) for p in (resolve_p(spec, n) for spec in config.p_list)]
    return [(None, resolve_p(config.p, n))]


def _cost_all(objective):
    if isinstance(objective, WeightVector):
        return lambda data, center_sets: [cost_v(data, c, objective) for c in center_sets]
    return lambda data, center_sets: [cost_p(data, c, objective) for c in center_sets]


def _timings(data, coreset, center_sets, objective):
    evaluate = _cost_all(objective)
    t_x, _ = median_ms(lambda: evaluate(data, center_sets))
    t_xprime, _ = median_ms(lambda: evaluate(coreset, center_sets))
    speedup = t_x / t_xprime if t_xprime > 0 else math.inf
    return {"T_X_ms": t_x, "T_Xprime_ms": t_xprime, "speedup": speedup}


def evaluate_objectives(data, coreset, center_sets, objectives):
    """Error report entries for each objective and their maximum."""
    report = {}
    worst = None
    for key, objective in objectives:
        result = coreset_error(data, coreset, center_sets, objective)
        if key is not None:
            report[f"emp_err_{key}"] = result.max_error
        if worst is None or result.max_error > worst.max_error:
            worst = result
    report["emp_err"] = worst.max_error
    report["argmax_center_index"] = worst.argmax_index
    return report


def cmd_eval(config):
    _require(config, "input", "coreset", "seed")
    data = ingest_csv(config.input)
    coreset = read_coreset_csv(config.coreset)
    if coreset.n != data.n or coreset.dimension != data.dimension:
        raise ValueError(
            f"coreset (n={coreset.n}, d={coreset.dimension}) does not summarize "
            f"data (n={data.n}, d={data.dimension})"
        )
    objectives = _eval_objectives(config, data.n)
    center_sets = random_box_centers(data, config.k, config.eval_centers, config.seed)

    report = {
        "command": config.command,
        "n": data.n,
        "d": data.dimension,
        "k": config.k,
        "seed": config.seed,
        "num_centers": config.eval_centers,
        "coreset_size": coreset.size,
    }
    report.update(evaluate_objectives(data, coreset, center_sets, objectives))
    report.update(_timings(data, coreset, center_sets, objectives[0][1]))
    logger.info("emp_err=%.4g speedup=%.3g", report["emp_err"], report["speedup"])
    return report


def cmd_hardness(config):
    """Lower-bound instance, its simultaneous coreset and the piece-count check."""
    _require(config, "n")
    n, eps = int(config.n), config.eps
    data = sqrt_instance(n)
    if config.output:
        write_points_csv(config.output, data)

    prefix = kahan_prefix_sums(data.points.ravel())
    sqrt_p = np.sqrt(np.arange(1, n + 1, dtype=np.float64))
    prefix_error = float(np.max(np.abs(prefix - sqrt_p)))

    coreset = build_simultaneous_coreset(
        data, 1, eps, center_provider=Exact1DCenterProvider(),
        eps_net=config.eps_net, slack=config.slack,
    )
    origin = np.zeros((1, 1))
    errors = profile_errors(profile_pieces(data, origin), profile_pieces(coreset, origin))
    worst = int(np.argmax(errors))

    report = {
        "command": config.command,
        "n": n,
        "eps": eps,
        "slack": config.slack,
        "prefix_sum_max_abs_error": prefix_error,
        "coreset_size": coreset.size,
        "coreset_pieces": profile_pieces(coreset, origin).pieces,
        "worst_p": worst + 1,
        "worst_p_error": float(errors[worst]),
        "within_eps": bool(errors[worst] <= eps),
        "piece_lower_bound": piece_lower_bound(n, eps),
    }
    interval = claim_interval(n, eps)
    if interval is not None:
        check = claim_check(*interval, eps)
        report.update({
            "claim_a": interval[0],
            "claim_b": interval[1],
            "claim_p_hat": check.p_hat,
            "claim_ratio": check.ratio,
            "claim_violated": check.violated,
        })
    logger.info("Hardness n=%d eps=%s: coreset %d points, worst error %.4g at p=%d",
                n, eps, coreset.size, report["worst_p_error"], report["worst_p"])
    return report


def _benchmark_data(config):
    if config.input:
        return ingest_csv(config.input)
    _require(config, "n")
    return gaussian_blobs(int(config.n), config.d, config.k, config.seed)


def cmd_benchmark(config):
    """Coreset size, empirical error and evaluation time for a list of eps."""
    _require(config, "seed")
    data = _benchmark_data(config)
    p = resolve_p(config.p, data.n)
    center_sets = random_box_centers(data, config.k, config.eval_centers, config.seed)

    rows = []
    for eps in config.eps_list or DEFAULT_EPS_LIST:
        coreset = build_pcentrum_coreset(
            data, config.k, p, eps, center_provider=_provider(config),
            eps_net=config.eps_net, slack=config.slack,
        )
        row = {"eps": eps, "coreset_size": coreset.size}
        row["emp_err"] = coreset_error(data, coreset, center_sets, p).max_error
        timings = _timings(data, coreset, center_sets, p)
        row["T_X_ms"] = timings["T_X_ms"]
        row["T_Xprime_ms"] = timings["T_Xprime_ms"]
        rows.append(row)
        logger.info("eps=%s: %d points, emp_err=%.4g", eps, coreset.size, row["emp_err"])

    return {
        "command": config.command,
        "n": data.n,
        "d": data.dimension,
        "k": config.k,
        "p": p,
        "seed": config.seed,
        "num_centers": config.eval_centers,
        "rows": rows,
    }


def cmd_heuristic(config):
    """Best objective of the sampling heuristic as the sample count grows."""
    _require(config, "seed")
    data = _benchmark_data(config)
    p = resolve_p(config.p, data.n)
    solution, curve = sampling_curve(data, config.k, p, config.max_samples, config.seed)
    return {
        "command": config.command,
        "n": data.n,
        "d": data.dimension,
        "k": config.k,
        "p": p,
        "seed": config.seed,
        "objective": solution.objective,
        "rows": [{"samples": s, "objective": value} for s, value in curve],
    }


COMMANDS = {
    "build": cmd_build,
    "build-simultaneous": cmd_build_simultaneous,
    "eval": cmd_eval,
    "hardness": cmd_hardness,
    "benchmark": cmd_benchmark,
    "heuristic": cmd_heuristic,
}


def run_command(config):
    try:
        command = COMMANDS[config.command]
    except KeyError:
        raise ValueError(f"unknown command {config.command!r}") from None
    logger.info("Running %s", config.command)
    return command(config)
