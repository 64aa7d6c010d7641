from .evaluate import evaluate, evaluation_csv
from .features import (
    FEATURE_NAMES,
    DesignMatrix,
    HourlyProfile,
    aggregate_hourly,
    build_features,
)
from .model import ForecastModel, fit_ols, load_model, save_model
from .predict import (
    CongestionAlert,
    ThresholdPolicy,
    detect_congestion,
    predict,
    resolve_threshold,
)

__all__ = [
    "CongestionAlert",
    "DesignMatrix",
    "FEATURE_NAMES",
    "ForecastModel",
    "HourlyProfile",
    "ThresholdPolicy",
    "aggregate_hourly",
    "build_features",
    "detect_congestion",
    "evaluate",
    "evaluation_csv",
    "fit_ols",
    "load_model",
    "predict",
    "resolve_threshold",
    "save_model",
]
