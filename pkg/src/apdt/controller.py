"""HTTP client for the controller management API (telemetry + actuation)."""

from __future__ import annotations

import time
from typing import Optional

import requests

from .errors import (
    ApdtError,
    AuthRejected,
    ControllerUnreachable,
    IncapableClient,
    UnknownAp,
    UnknownClient,
    UnknownTargetAp,
)

_ERROR_CODES = {
    "unknown_ap": UnknownAp,
    "unknown_client": UnknownClient,
    "unknown_target_ap": UnknownTargetAp,
    "incapable_client": IncapableClient,
    "auth_rejected": AuthRejected,
}


class ControllerClient:
    def __init__(
        self,
        base_url: str,
        auth_token: Optional[str] = None,
        timeout_ms: int = 2000,
        max_retries: int = 2,
        backoff_ms: int = 500,
    ):
        self.base_url = base_url.rstrip("/")
        self.timeout_s = timeout_ms / 1000.0
        self.max_retries = max_retries
        self.backoff_ms = backoff_ms
        self._session = requests.Session()
        if auth_token:
            self._session.headers["Authorization"] = f"Bearer {auth_token}"

    def _request(self, method: str, path: str, json_body: Optional[dict] = None) -> object:
        url = f"{self.base_url}{path}"
        backoff = self.backoff_ms / 1000.0
        last_error: Optional[Exception] = None
        for attempt in range(self.max_retries + 1):
            try:
                resp = self._session.request(method, url, json=json_body, timeout=self.timeout_s)
            except requests.RequestException as e:
                last_error = e
                if attempt < self.max_retries:
                    time.sleep(backoff)
                    backoff *= 2
                continue
            if resp.status_code == 401:
                raise AuthRejected(f"{url}: controller rejected the bearer token")
            if resp.status_code >= 400:
                raise self._domain_error(resp)
            return resp.json()
        raise ControllerUnreachable(f"{url}: {last_error}")

    @staticmethod
    def _domain_error(resp: requests.Response) -> ApdtError:
        try:
            body = resp.json()
            code = body.get("error", "")
            detail = body.get("detail", "")
        except ValueError:
            code, detail = "", resp.text[:200]
        exc_type = _ERROR_CODES.get(code)
        if exc_type is not None:
            return exc_type(detail)
        err = ApdtError(f"HTTP {resp.status_code}: {code or detail}")
        err.http_status = resp.status_code
        return err

    # -- telemetry --------------------------------------------------------

    def get_aps_raw(self) -> object:
        return self._request("GET", "/controller/v1/aps")

    def get_clients_raw(self, ap_id: str) -> object:
        return self._request("GET", f"/controller/v1/aps/{ap_id}/clients")

    # -- actuation --------------------------------------------------------

    def disassociate(self, client_mac: str, command_id: Optional[str] = None) -> dict:
        body = {"command_id": command_id} if command_id else {}
        return self._request("POST", f"/controller/v1/clients/{client_mac}/disassociate", body)

    def steer(self, client_mac: str, band: str, command_id: Optional[str] = None) -> dict:
        body = {"band": band}
        if command_id:
            body["command_id"] = command_id
        return self._request("POST", f"/controller/v1/clients/{client_mac}/steer", body)

    def move(self, client_mac: str, target_ap_id: str, command_id: Optional[str] = None) -> dict:
        body = {"target_ap_id": target_ap_id}
        if command_id:
            body["command_id"] = command_id
        return self._request("POST", f"/controller/v1/clients/{client_mac}/move", body)
