"""Normal-equation least squares with an automatic ridge fallback.

The unregularized system is used whenever it is numerically sound; a
singular design (collinear features, flat nights) falls back to a small
ridge penalty scaled by trace(XtX)/p, and the lambda actually used is
recorded on the model.
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass
from typing import Optional

import numpy as np

from ..errors import DegenerateDesign
from .features import FEATURE_NAMES, DesignMatrix

SINGULAR_PIVOT_RTOL = 1e-12
RIDGE_SCALE = 1e-6


@dataclass(frozen=True)
class ForecastModel:
    coefficients: tuple[float, ...]
    ridge_lambda: float
    trained_on: tuple[str, tuple[int, int]]  # (ap_id, (window_start, window_end))
    training_r2: float
    feature_names: tuple[str, ...] = FEATURE_NAMES

    @property
    def model_version(self) -> str:
        payload = json.dumps(
            [list(self.coefficients), self.ridge_lambda, list(self.trained_on[1])],
            sort_keys=True,
        ).encode()
        return hashlib.sha256(payload).hexdigest()[:12]

    def to_json(self) -> dict:
        return {
            "model_version": self.model_version,
            "ap_id": self.trained_on[0],
            "feature_names": list(self.feature_names),
            "coefficients": list(self.coefficients),
            "ridge_lambda": self.ridge_lambda,
            "trained_on": {
                "ap_id": self.trained_on[0],
                "window": list(self.trained_on[1]),
            },
            "training_r2": self.training_r2,
        }

    @classmethod
    def from_json(cls, d: dict) -> "ForecastModel":
        return cls(
            coefficients=tuple(float(c) for c in d["coefficients"]),
            ridge_lambda=float(d["ridge_lambda"]),
            trained_on=(
                str(d["trained_on"]["ap_id"]),
                tuple(int(t) for t in d["trained_on"]["window"]),
            ),
            training_r2=float(d["training_r2"]),
            feature_names=tuple(d.get("feature_names", FEATURE_NAMES)),
        )


def fit_ols(dm: DesignMatrix, ap_id: str = "", ridge_lambda: float = 0.0) -> ForecastModel:
    """Solve (XtX + lambda I) beta = Xty; deterministic for identical inputs."""
    dm.validate_for_fit()
    X, y = dm.X, dm.y
    xtx = X.T @ X
    xty = X.T @ y
    p = xtx.shape[0]

    lam = float(ridge_lambda)
    if lam == 0.0 and _is_singular(xtx):
        lam = RIDGE_SCALE * float(np.trace(xtx)) / p
    system = xtx + lam * np.eye(p) if lam > 0.0 else xtx

    if lam > 0.0 and _is_singular(system):
        raise DegenerateDesign("design remains rank-deficient after ridge")
    try:
        beta = np.linalg.solve(system, xty)
    except np.linalg.LinAlgError as e:
        raise DegenerateDesign(str(e)) from e
    if not np.isfinite(beta).all():
        raise DegenerateDesign("non-finite coefficients")

    residuals = y - X @ beta
    ss_res = float(residuals @ residuals)
    centered = y - y.mean()
    ss_tot = float(centered @ centered)
    r2 = 1.0 - ss_res / ss_tot if ss_tot > 0.0 else (1.0 if ss_res == 0.0 else 0.0)

    window = (dm.timestamps[0], dm.timestamps[-1]) if dm.timestamps else (0, 0)
    return ForecastModel(
        coefficients=tuple(float(b) for b in beta),
        ridge_lambda=lam,
        trained_on=(ap_id, window),
        training_r2=r2,
    )


def _is_singular(m: np.ndarray) -> bool:
    s = np.linalg.svd(m, compute_uv=False)
    return bool(s[-1] <= SINGULAR_PIVOT_RTOL * s[0])


def save_model(model: ForecastModel, path: str) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(model.to_json(), fh, indent=2)


def load_model(path: str) -> Optional[ForecastModel]:
    with open(path, encoding="utf-8") as fh:
        return ForecastModel.from_json(json.load(fh))
