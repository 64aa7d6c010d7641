"""Simulated-vs-real latency comparison."""

from __future__ import annotations

from typing import Sequence

from ..errors import MisalignedTrace
from ..metrics import fidelity_ratio, mae
from .types import FidelityReport, SimulationReport


def compare_with_trace(
    report: SimulationReport, real_trace: Sequence[tuple[int, float]]
) -> FidelityReport:
    """Pair report intervals with a real (t, latency_ms) trace.

    Trace timestamps must match the report's interval ends exactly.
    """
    sim_by_t = {s.t_seconds: s.mean_latency_ms for s in report.per_interval}
    trace_ts = [int(t) for t, _ in real_trace]
    if sorted(trace_ts) != sorted(sim_by_t):
        raise MisalignedTrace(
            f"trace intervals {sorted(trace_ts)} != report intervals {sorted(sim_by_t)}"
        )
    if len(set(trace_ts)) != len(trace_ts):
        raise MisalignedTrace("duplicate timestamps in trace")

    pairs = []
    for t, real_ms in sorted(real_trace, key=lambda p: p[0]):
        sim_ms = sim_by_t[int(t)]
        if sim_ms is None:
            raise MisalignedTrace(f"report has no latency samples at t={t}")
        pairs.append((int(t), float(sim_ms), float(real_ms)))

    sims = [p[1] for p in pairs]
    reals = [p[2] for p in pairs]
    fid = [fidelity_ratio(s, r) for s, r in zip(sims, reals)]
    return FidelityReport(
        pairs=tuple(pairs),
        mae_ms=mae(sims, reals),
        per_point_fidelity=tuple(fid),
        mean_fidelity=sum(fid) / len(fid),
        max_fidelity=max(fid),
    )
