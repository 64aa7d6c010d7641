"""Closed-form per-medium latency model.

Mean latency on one (AP, band) medium is an affine function of client
count and external airtime. Coefficients are calibration constants and
overridable per scenario.
"""

from __future__ import annotations

from ..errors import SchemaViolation
from .types import LatencyModelParams


def analytic_latency(
    n_clients: int,
    airtime_external: float,
    params: LatencyModelParams = LatencyModelParams(),
) -> float:
    """Latency in ms for a medium with n clients and external contention."""
    if n_clients < 0:
        raise SchemaViolation("n_clients must be >= 0")
    if not 0.0 <= airtime_external <= 0.95:
        raise SchemaViolation(f"airtime_external {airtime_external} outside [0, 0.95]")
    return (
        params.beta0_ms
        + params.beta1_ms_per_client * n_clients
        + params.beta2_ms_airtime * airtime_external
    )
