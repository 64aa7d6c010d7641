"""Scenario execution: analytic evaluation or discrete-event contention run.

The EVENT engine treats each (AP, band) as an independent single-server
FIFO; the hot per-packet loop lives in the selected kernel. Runs are pure
functions of the scenario (seed included), so identical scenarios produce
byte-identical reports.
"""

from __future__ import annotations

import numpy as np

from .analytic import analytic_latency
from .kernel import derive_seed, simulate_fifo
from .types import (
    ArrivalProcess,
    EngineKind,
    IntervalStats,
    MediumReport,
    Scenario,
    SimulationReport,
    SizeProcess,
)

UNSTABLE_LOAD = 0.98


def run_simulation(scenario: Scenario) -> SimulationReport:
    scenario.validate()
    if scenario.engine is EngineKind.ANALYTIC:
        return _run_analytic(scenario)
    return _run_event(scenario)


# --- analytic ----------------------------------------------------------


def _run_analytic(scenario: Scenario) -> SimulationReport:
    ep = scenario.engine_params
    dt = scenario.report_interval_seconds
    ticks = range(dt, scenario.duration_seconds + 1, dt)

    medium_reports = []
    for m in scenario.media:
        latency = analytic_latency(m.n_clients, m.airtime_external, scenario.latency_params)
        offered_bytes = float(sum(m.client_rates_bps))
        pps = offered_bytes / ep.packet_mean_bytes
        queue_len = pps * latency / 1000.0  # Little's law at the modeled latency
        intervals = []
        prev_count = 0
        for t in ticks:
            count = int(pps * t)
            intervals.append(
                IntervalStats(
                    t_seconds=t,
                    mean_latency_ms=latency,
                    p95_latency_ms=latency,
                    offered_bps=offered_bytes * 8.0,
                    served_bps=offered_bytes * 8.0,
                    packets_in=count - prev_count,
                    packets_served=count - prev_count,
                    mean_queue_len=queue_len,
                )
            )
            prev_count = count
        total = prev_count
        medium_reports.append(
            MediumReport(
                ap_id=m.ap_id,
                band=m.band,
                per_interval=tuple(intervals),
                packets_in_total=total,
                packets_served_total=total,
                final_queue=0,
            )
        )

    # Interval aggregate: client-count-weighted mean of the media latencies.
    weights = [m.n_clients for m in scenario.media]
    latencies = [r.per_interval[0].mean_latency_ms for r in medium_reports]
    w_total = sum(weights)
    if w_total > 0:
        mean_lat = sum(w * l for w, l in zip(weights, latencies)) / w_total
    elif latencies:
        mean_lat = sum(latencies) / len(latencies)
    else:
        mean_lat = 0.0

    aggregate = []
    for i, t in enumerate(ticks):
        aggregate.append(
            IntervalStats(
                t_seconds=t,
                mean_latency_ms=mean_lat,
                p95_latency_ms=mean_lat,
                offered_bps=sum(r.per_interval[i].offered_bps for r in medium_reports),
                served_bps=sum(r.per_interval[i].served_bps for r in medium_reports),
                packets_in=sum(r.per_interval[i].packets_in for r in medium_reports),
                packets_served=sum(r.per_interval[i].packets_served for r in medium_reports),
                mean_queue_len=sum(r.per_interval[i].mean_queue_len for r in medium_reports),
            )
        )

    return SimulationReport(
        scenario_id=scenario.scenario_id,
        engine=EngineKind.ANALYTIC,
        seed=scenario.seed,
        per_interval=tuple(aggregate),
        per_ap_band=tuple(medium_reports),
        unstable=False,
    )


# --- event-driven ------------------------------------------------------


def _run_event(scenario: Scenario) -> SimulationReport:
    ep = scenario.engine_params
    dt = scenario.report_interval_seconds
    duration = float(scenario.duration_seconds)
    n_intervals = scenario.duration_seconds // dt
    warmup = ep.warmup_seconds

    medium_reports = []
    unstable = False
    # Pooled latency samples per interval for the aggregate p95.
    pooled_lat: list[list[np.ndarray]] = [[] for _ in range(n_intervals)]

    for mi, m in enumerate(scenario.media):
        n = m.n_clients
        seeds = np.array([derive_seed(scenario.seed, mi, f) for f in range(n)], dtype=np.uint64)
        rates = np.array([r / ep.packet_mean_bytes for r in m.client_rates_bps], dtype=np.float64)
        means = np.full(n, ep.packet_mean_bytes, dtype=np.float64)
        poisson = np.full(n, 1 if ep.arrival_process is ArrivalProcess.POISSON else 0, dtype=np.uint8)
        expsz = np.full(n, 1 if ep.size_process is SizeProcess.EXPONENTIAL else 0, dtype=np.uint8)
        inflation = 1.0 / (1.0 - m.airtime_external)
        phy = ep.phy_bps(m.band)
        overhead_s = ep.overhead_ms / 1000.0

        mean_service = (ep.packet_mean_bytes * 8.0 / phy + overhead_s) * inflation
        if float(rates.sum()) * mean_service >= UNSTABLE_LOAD:
            unstable = True

        arr, dep, size = simulate_fifo(
            seeds, rates, means, poisson, expsz, phy, overhead_s, inflation, duration
        )

        served = dep <= duration
        latency_ms = (dep - arr) * 1000.0
        stats_ok = served & (arr >= warmup)

        arr_idx = np.minimum(np.ceil(arr / dt).astype(np.int64), n_intervals) - 1
        dep_idx = np.minimum(np.ceil(dep / dt).astype(np.int64), n_intervals) - 1
        dep_eff = np.minimum(dep, duration)

        intervals = []
        for k in range(n_intervals):
            lo, hi = k * dt, (k + 1) * dt
            in_mask = arr_idx == k
            served_mask = served & (dep_idx == k)
            stat_mask = stats_ok & (dep_idx == k)
            lat_k = latency_ms[stat_mask]
            pooled_lat[k].append(lat_k)
            overlap = np.clip(np.minimum(dep_eff, hi) - np.maximum(arr, lo), 0.0, None)
            intervals.append(
                IntervalStats(
                    t_seconds=hi,
                    mean_latency_ms=float(lat_k.mean()) if lat_k.size else None,
                    p95_latency_ms=float(np.percentile(lat_k, 95)) if lat_k.size else None,
                    offered_bps=float(size[in_mask].sum()) * 8.0 / dt,
                    served_bps=float(size[served_mask].sum()) * 8.0 / dt,
                    packets_in=int(in_mask.sum()),
                    packets_served=int(served_mask.sum()),
                    mean_queue_len=float(overlap.sum()) / dt,
                )
            )

        medium_reports.append(
            MediumReport(
                ap_id=m.ap_id,
                band=m.band,
                per_interval=tuple(intervals),
                packets_in_total=int(arr.size),
                packets_served_total=int(served.sum()),
                final_queue=int(arr.size - served.sum()),
            )
        )

    aggregate = []
    for k in range(n_intervals):
        lat = np.concatenate(pooled_lat[k]) if pooled_lat[k] else np.empty(0)
        aggregate.append(
            IntervalStats(
                t_seconds=(k + 1) * dt,
                mean_latency_ms=float(lat.mean()) if lat.size else None,
                p95_latency_ms=float(np.percentile(lat, 95)) if lat.size else None,
                offered_bps=sum(r.per_interval[k].offered_bps for r in medium_reports),
                served_bps=sum(r.per_interval[k].served_bps for r in medium_reports),
                packets_in=sum(r.per_interval[k].packets_in for r in medium_reports),
                packets_served=sum(r.per_interval[k].packets_served for r in medium_reports),
                mean_queue_len=sum(r.per_interval[k].mean_queue_len for r in medium_reports),
            )
        )

    return SimulationReport(
        scenario_id=scenario.scenario_id,
        engine=EngineKind.EVENT,
        seed=scenario.seed,
        per_interval=tuple(aggregate),
        per_ap_band=tuple(medium_reports),
        unstable=unstable,
    )
