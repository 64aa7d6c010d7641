"""Domain error hierarchy shared across modules.

Every error carries a stable machine-readable ``code`` (used verbatim in
HTTP error bodies and CLI output) and a human ``detail``.
"""

from __future__ import annotations


class ApdtError(Exception):
    """Base class for all domain errors."""

    code = "internal_error"
    http_status = 500

    def __init__(self, detail: str = ""):
        super().__init__(detail or self.code)
        self.detail = detail or self.code

    def to_json(self) -> dict:
        return {"error": self.code, "detail": self.detail}


# --- twin_core ---------------------------------------------------------

class OutOfOrderSample(ApdtError):
    code = "out_of_order_sample"
    http_status = 409


class SchemaViolation(ApdtError):
    code = "schema_violation"
    http_status = 400


class NotFound(ApdtError):
    code = "not_found"
    http_status = 404


class UnknownAp(NotFound):
    code = "unknown_ap"


class UnsupportedBin(ApdtError):
    code = "unsupported_bin"
    http_status = 400


class CorruptRecord(ApdtError):
    code = "corrupt_record"
    http_status = 400

    def __init__(self, line_number: int, detail: str = ""):
        super().__init__(f"line {line_number}: {detail}" if detail else f"line {line_number}")
        self.line_number = line_number


# --- realtwin_emulator --------------------------------------------------

class UnknownClient(NotFound):
    code = "unknown_client"


class IncapableClient(ApdtError):
    code = "incapable_client"
    http_status = 409


class UnknownTargetAp(NotFound):
    code = "unknown_target_ap"


# --- telemetry_ingest ---------------------------------------------------

class ControllerUnreachable(ApdtError):
    code = "controller_unreachable"
    http_status = 502


class AuthRejected(ApdtError):
    code = "auth_rejected"
    http_status = 401


class ParseError(ApdtError):
    code = "parse_error"
    http_status = 400

    def __init__(self, json_path: str, detail: str = ""):
        super().__init__(f"{json_path}: {detail}" if detail else json_path)
        self.json_path = json_path


class ConfigError(ApdtError):
    code = "config_error"
    http_status = 400


# --- wlan_simulator -----------------------------------------------------

class OverrideConflict(ApdtError):
    code = "override_conflict"
    http_status = 400

    def __init__(self, index: int, detail: str = ""):
        super().__init__(f"override[{index}]: {detail}" if detail else f"override[{index}]")
        self.index = index


class MisalignedTrace(ApdtError):
    code = "misaligned_trace"
    http_status = 400


# --- forecaster ---------------------------------------------------------

class EmptySeries(ApdtError):
    code = "empty_series"
    http_status = 400


class InsufficientHistory(ApdtError):
    code = "insufficient_history"
    http_status = 409


class DegenerateDesign(ApdtError):
    code = "degenerate_design"
    http_status = 400


class HorizonTooLong(ApdtError):
    code = "horizon_too_long"
    http_status = 400


class LengthMismatch(ApdtError):
    code = "length_mismatch"
    http_status = 400


# --- actuator -----------------------------------------------------------

class InvalidState(ApdtError):
    code = "invalid_state"
    http_status = 409


class SimulationFailed(ApdtError):
    code = "simulation_failed"
    http_status = 409


class ConflictingPlan(ApdtError):
    code = "conflicting_plan"
    http_status = 409


class InsufficientTelemetry(ApdtError):
    code = "insufficient_telemetry"
    http_status = 409


# --- gateway ------------------------------------------------------------

class BindFailure(ApdtError):
    code = "bind_failure"
    http_status = 500
