from .parse import parse_ap_payload, parse_client_payload
from .poller import Poller, PollerConfig, poll_once, run_poller

__all__ = [
    "Poller",
    "PollerConfig",
    "parse_ap_payload",
    "parse_client_payload",
    "poll_once",
    "run_poller",
]
