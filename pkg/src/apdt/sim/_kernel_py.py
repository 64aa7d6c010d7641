"""Pure-Python event-engine kernel (fallback when the compiled one is absent).

Simulates one contention medium as a single-server FIFO fed by per-client
packet flows and returns per-packet (arrival, departure, size) arrays.
The compiled kernel in ``_kernel.pyx`` implements the identical algorithm
with the identical RNG; outputs must match bit for bit, which the parity
tests assert. Keep the two in lockstep when changing either.

RNG: splitmix64 per flow, so the merge order of concurrent flows cannot
perturb any flow's draw sequence.
"""

from __future__ import annotations

import math

import numpy as np

_M64 = (1 << 64) - 1
_GOLDEN = 0x9E3779B97F4A7C15
_INV_2_53 = 1.0 / 9007199254740992.0  # 2**-53


def _mix(z: int) -> int:
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9 & _M64
    z = (z ^ (z >> 27)) * 0x94D049BB133111EB & _M64
    return z ^ (z >> 31)


def splitmix_next(state: int) -> tuple[int, int]:
    """Advance a splitmix64 state; returns (new_state, output)."""
    state = (state + _GOLDEN) & _M64
    return state, _mix(state)


def derive_seed(*parts: int) -> int:
    """Deterministic substream seed from integer parts (order-sensitive)."""
    s = 0x8AD803B9113EA1D1
    for p in parts:
        s = (s + _GOLDEN) & _M64
        s = _mix(s ^ (p & _M64))
    return s


def _u01(z: int) -> float:
    return ((z >> 11) + 0.5) * _INV_2_53


def simulate_fifo(
    flow_seeds,
    rate_pps,
    mean_size_bytes,
    poisson_arrivals,
    exp_sizes,
    phy_bps: float,
    overhead_s: float,
    inflation: float,
    duration_s: float,
):
    """Run one medium. Returns (arrivals_s, departures_s, sizes_bytes).

    Arrivals are generated in (0, duration_s]; every arrived packet gets a
    departure time (callers treat departures > duration_s as still queued).
    """
    n_flows = len(flow_seeds)
    states = [int(flow_seeds[f]) & _M64 for f in range(n_flows)]
    rates = [float(rate_pps[f]) for f in range(n_flows)]
    means = [float(mean_size_bytes[f]) for f in range(n_flows)]
    is_poisson = [bool(poisson_arrivals[f]) for f in range(n_flows)]
    is_exp = [bool(exp_sizes[f]) for f in range(n_flows)]

    inf = math.inf
    next_t = [inf] * n_flows
    for f in range(n_flows):
        if rates[f] <= 0.0:
            continue
        if is_poisson[f]:
            states[f], z = splitmix_next(states[f])
            next_t[f] = -math.log(_u01(z)) / rates[f]
        else:
            next_t[f] = 1.0 / rates[f]

    arrivals: list[float] = []
    sizes: list[float] = []
    while True:
        best = -1
        bt = inf
        for f in range(n_flows):
            if next_t[f] < bt:
                bt = next_t[f]
                best = f
        if best < 0 or bt > duration_s:
            break
        if is_exp[best]:
            states[best], z = splitmix_next(states[best])
            size = -math.log(_u01(z)) * means[best]
        else:
            size = means[best]
        arrivals.append(bt)
        sizes.append(size)
        if is_poisson[best]:
            states[best], z = splitmix_next(states[best])
            next_t[best] = bt + (-math.log(_u01(z)) / rates[best])
        else:
            next_t[best] = bt + 1.0 / rates[best]

    n = len(arrivals)
    departures = [0.0] * n
    busy_until = 0.0
    for i in range(n):
        start = arrivals[i] if arrivals[i] > busy_until else busy_until
        service = (sizes[i] * 8.0 / phy_bps + overhead_s) * inflation
        busy_until = start + service
        departures[i] = busy_until

    return (
        np.asarray(arrivals, dtype=np.float64),
        np.asarray(departures, dtype=np.float64),
        np.asarray(sizes, dtype=np.float64),
    )
