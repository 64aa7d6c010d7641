"""Shared accuracy metrics.

One definition of the min/max-ratio fidelity is used everywhere a
simulated-vs-real comparison is reported, so simulator and forecaster
numbers are directly comparable.
"""

from __future__ import annotations

import math
from typing import Sequence

from .errors import LengthMismatch


def mae(predicted: Sequence[float], actual: Sequence[float]) -> float:
    _check(predicted, actual)
    return sum(abs(p - a) for p, a in zip(predicted, actual)) / len(actual)


def rmse(predicted: Sequence[float], actual: Sequence[float]) -> float:
    _check(predicted, actual)
    return math.sqrt(sum((p - a) ** 2 for p, a in zip(predicted, actual)) / len(actual))


def r2(predicted: Sequence[float], actual: Sequence[float]) -> float:
    """Coefficient of determination; 0.0 when the actuals are constant and
    perfectly predicted, else conventionally -inf-ish negative values apply."""
    _check(predicted, actual)
    mean = sum(actual) / len(actual)
    ss_tot = sum((a - mean) ** 2 for a in actual)
    ss_res = sum((a - p) ** 2 for p, a in zip(predicted, actual))
    if ss_tot == 0.0:
        return 1.0 if ss_res == 0.0 else 0.0
    return 1.0 - ss_res / ss_tot


def fidelity_ratio(a: float, b: float) -> float:
    """Per-point fidelity: min/max ratio in (0, 1]; 1.0 when both are zero."""
    if a == b:
        return 1.0
    lo, hi = sorted((a, b))
    if hi == 0.0:
        return 1.0
    return lo / hi


def fidelity_ratios(predicted: Sequence[float], actual: Sequence[float]) -> list[float]:
    _check(predicted, actual)
    return [fidelity_ratio(p, a) for p, a in zip(predicted, actual)]


def _check(predicted: Sequence[float], actual: Sequence[float]) -> None:
    if len(predicted) != len(actual):
        raise LengthMismatch(f"{len(predicted)} predicted vs {len(actual)} actual")
    if not actual:
        raise LengthMismatch("empty series")
