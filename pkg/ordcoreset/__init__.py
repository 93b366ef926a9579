"""Coresets for ordered weighted clustering (p-Centrum and Ordered k-Median)."""

from .centers import (
    CenterSolution,
    Exact1DCenterProvider,
    SamplingCenterProvider,
    exact_center_1d,
    sample_best_centers,
)
from .core import (
    Dataset,
    WeightedCoreset,
    WeightVector,
    cost_p,
    cost_p_all,
    cost_v,
    owa_decompose,
    p_grid,
)
from .coreset1d import build_coreset_1d
from .coreset_nd import build_pcentrum_coreset, build_simultaneous_coreset
from .projection import LineBudgetError, project
from .verify import coreset_error, evaluate_coreset

__all__ = [
    "CenterSolution",
    "Dataset",
    "Exact1DCenterProvider",
    "LineBudgetError",
    "SamplingCenterProvider",
    "WeightVector",
    "WeightedCoreset",
    "build_coreset_1d",
    "build_pcentrum_coreset",
    "build_simultaneous_coreset",
    "coreset_error",
    "cost_p",
    "cost_p_all",
    "cost_v",
    "evaluate_coreset",
    "exact_center_1d",
    "owa_decompose",
    "p_grid",
    "project",
    "sample_best_centers",
]
