from .anomalies import AnomalyPolicy, detect_anomalies
from .logio import LogWriter, replay_log, write_log
from .store import NATIVE_BIN_SECONDS, TwinStore

__all__ = [
    "AnomalyPolicy",
    "LogWriter",
    "NATIVE_BIN_SECONDS",
    "TwinStore",
    "detect_anomalies",
    "replay_log",
    "write_log",
]
