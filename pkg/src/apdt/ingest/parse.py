"""Strict parsing of controller payloads into domain types.

Unknown fields are ignored, missing required fields reject the whole
payload with the JSON path of the first violation. Units are normalized
here and nowhere else: airtime percent becomes a fraction, MACs are
uppercased, radio rates stay in bits/s, client byte rates in bytes/s.
"""

from __future__ import annotations

import json
from typing import Union

from ..errors import ParseError
from ..model import MAC_RE, AccessPointState, BandKind, ClientState, RadioState
from ..timeutil import from_iso

_REQUIRED_RADIO = ("band", "channel", "airtime", "noise_floor_dbm", "client_count",
                   "rx_rate_bps", "tx_rate_bps")
_REQUIRED_AP = ("ap_id", "name", "radios")
_REQUIRED_CLIENT = ("client_mac", "band", "snr_db", "byte_rate_bps",
                    "connected_since", "capable_5ghz")


def _loads(raw: Union[str, bytes], path: str) -> object:
    try:
        if isinstance(raw, bytes):
            raw = raw.decode("utf-8")
        return json.loads(raw)
    except (UnicodeDecodeError, json.JSONDecodeError) as e:
        raise ParseError(path, f"invalid JSON: {e}") from e


def _mac(value: object, path: str) -> str:
    mac = str(value).upper()
    if not MAC_RE.match(mac):
        raise ParseError(path, f"{value!r} is not a colon-hex MAC")
    return mac


def _number(rec: dict, key: str, path: str) -> float:
    v = rec.get(key)
    try:
        return float(v)
    except (TypeError, ValueError):
        raise ParseError(f"{path}.{key}", f"expected number, got {v!r}") from None


def _timestamp(rec: dict, key: str, path: str) -> int:
    v = rec.get(key)
    if isinstance(v, (int, float)):
        return int(v)
    try:
        return from_iso(str(v))
    except (ValueError, TypeError):
        raise ParseError(f"{path}.{key}", f"expected ISO-8601 timestamp, got {v!r}") from None


def parse_ap_payload(raw: Union[str, bytes, list]) -> list[AccessPointState]:
    """Parse the AP listing endpoint's body (text or decoded array)."""
    data = _loads(raw, "$") if isinstance(raw, (str, bytes)) else raw
    if not isinstance(data, list):
        raise ParseError("$", "expected a JSON array of AP records")
    out = []
    for i, rec in enumerate(data):
        path = f"$[{i}]"
        if not isinstance(rec, dict):
            raise ParseError(path, "expected an object")
        for key in _REQUIRED_AP:
            if key not in rec:
                raise ParseError(f"{path}.{key}", "missing required field")
        radios_raw = rec["radios"]
        if not isinstance(radios_raw, list) or not radios_raw:
            raise ParseError(f"{path}.radios", "expected a non-empty array")
        radios = []
        for j, rad in enumerate(radios_raw):
            rpath = f"{path}.radios[{j}]"
            if not isinstance(rad, dict):
                raise ParseError(rpath, "expected an object")
            for key in _REQUIRED_RADIO:
                if key not in rad:
                    raise ParseError(f"{rpath}.{key}", "missing required field")
            band_raw = rad["band"]
            try:
                band = BandKind(str(band_raw))
            except ValueError:
                raise ParseError(f"{rpath}.band", f"unknown band {band_raw!r}") from None
            radios.append(
                RadioState(
                    band=band,
                    channel=int(_number(rad, "channel", rpath)),
                    airtime_utilization=_number(rad, "airtime", rpath) / 100.0,
                    noise_floor_dbm=_number(rad, "noise_floor_dbm", rpath),
                    client_count=int(_number(rad, "client_count", rpath)),
                    rx_rate_bps=int(_number(rad, "rx_rate_bps", rpath)),
                    tx_rate_bps=int(_number(rad, "tx_rate_bps", rpath)),
                )
            )
        out.append(
            AccessPointState(
                ap_id=_mac(rec["ap_id"], f"{path}.ap_id"),
                name=str(rec["name"]),
                radios=tuple(radios),
                location_tag=str(rec.get("location_tag", "")),
                last_seen=_timestamp(rec, "last_seen", path) if "last_seen" in rec else 0,
            )
        )
    return out


def parse_client_payload(raw: Union[str, bytes, list], ap_id: str) -> list[ClientState]:
    """Parse one AP's client listing; the owning AP comes from the URL."""
    data = _loads(raw, "$") if isinstance(raw, (str, bytes)) else raw
    if not isinstance(data, list):
        raise ParseError("$", "expected a JSON array of client records")
    out = []
    for i, rec in enumerate(data):
        path = f"$[{i}]"
        if not isinstance(rec, dict):
            raise ParseError(path, "expected an object")
        for key in _REQUIRED_CLIENT:
            if key not in rec:
                raise ParseError(f"{path}.{key}", "missing required field")
        try:
            band = BandKind(str(rec["band"]))
        except ValueError:
            raise ParseError(f"{path}.band", f"unknown band {rec['band']!r}") from None
        out.append(
            ClientState(
                client_mac=_mac(rec["client_mac"], f"{path}.client_mac"),
                ap_id=ap_id.upper(),
                band=band,
                snr_db=_number(rec, "snr_db", path),
                byte_rate_bps=int(_number(rec, "byte_rate_bps", path)),
                connected_since=_timestamp(rec, "connected_since", path),
                capable_5ghz=bool(rec["capable_5ghz"]),
            )
        )
    return out
