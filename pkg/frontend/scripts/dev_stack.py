#!/usr/bin/env python3
"""Integration stack for console tests: seeded emulator + gateway.

Feeds two days of compressed history (so forecasts work), injects one
surge so an alert exists, then serves. Prints one JSON line with the URLs
and blocks until killed.
"""

import json
import sys

from apdt.emulator import (
    ControllerFacade,
    EmulatedWorld,
    EmulatorConfig,
    InjectedSurge,
    WorkloadProfile,
)
from apdt.forecast import ThresholdPolicy
from apdt.gateway import ApdtService, ServiceConfig, serve_api


def main() -> None:
    profile = WorkloadProfile(
        noise_cv=0.15, surge_rate_per_day=4.0, surge_multiplier=3.0,
        surge_duration_min=120.0,
    )
    surge = InjectedSurge(
        start_offset_s=2 * 86400 + 14 * 3600 + 40 * 60,
        duration_min=30.0, multiplier=3.0, ap_index=0,
    )
    config = EmulatorConfig(profile=profile, seed=4242, injected_surges=(surge,))
    world = EmulatedWorld(config)

    service = ApdtService(ServiceConfig(
        controller_url=None,
        threshold=ThresholdPolicy.absolute(1.8e6),
    ))
    # Two full days plus day 3 through 14:59, fed directly for speed.
    for _ in range(2 * 1440 + 15 * 60 - 1):
        world.step(60)
        version = service.store.apply_sample(world.sample())
        if version % 60 == 0:
            service.events.publish(
                "SNAPSHOT_UPDATED",
                {"version": version, "taken_at": world.clock_ms, "aps": 3, "clients": 60},
            )

    facade = ControllerFacade(world)
    facade.server.start()
    from apdt.controller import ControllerClient

    service.controller = ControllerClient(facade.base_url, auth_token=config.auth_token)

    server = serve_api(service, host="127.0.0.1", port=0)
    server.start()
    print(json.dumps({
        "api": server.base_url,
        "controller": facade.base_url,
        "store_version": service.store.version,
    }), flush=True)
    try:
        import time

        while True:
            time.sleep(3600)
    except KeyboardInterrupt:
        pass
    finally:
        server.stop()
        facade.server.stop()


if __name__ == "__main__":
    sys.exit(main())
