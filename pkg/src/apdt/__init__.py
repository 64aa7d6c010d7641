"""APDT: a closed-loop digital twin for Wi-Fi access-point networks.

Subpackages: `twin` (state store), `emulator` (synthetic network +
controller API), `ingest` (poller), `sim` (what-if engine), `forecast`
(traffic prediction), `actuate` (offload plans), `gateway` (HTTP API +
CLI).
"""

__version__ = "0.1.0"
