import statistics
import time

from .config import Config


def median_ms(fn, repeats=None):
    """Run fn repeats times; return (median wall time in ms, last result)."""
    repeats = Config.TIMING_REPEATS if repeats is None else repeats
    if repeats < 1:
        raise ValueError(f"repeats must be >= 1, got {repeats}")
    samples = []
    result = None
    for _ in range(repeats):
        start = time.perf_counter()
        result = fn()
        samples.append((time.perf_counter() - start) * 1000.0)
    return statistics.median(samples), result
