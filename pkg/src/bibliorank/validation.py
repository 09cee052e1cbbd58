"""Input checks shared by the estimators."""
from __future__ import annotations

import numbers

import numpy as np
from sklearn.utils import check_array, column_or_1d
from sklearn.utils.validation import check_consistent_length

MIN_POINTS = {"logarithmic": 3, "polynomial2": 4, "exponential": 3, "power": 3}


def check_ranks(X) -> np.ndarray:
    """Accept ranks as a 1-d sequence or a single-column 2-d array."""
    X = check_array(X, ensure_2d=False, dtype=np.float64)
    if X.ndim == 2:
        if X.shape[1] != 1:
            raise ValueError(f"expected a single rank column, got {X.shape[1]} columns")
        X = X[:, 0]
    return X


def check_rank_score(X, y, family: str | None = None) -> tuple[np.ndarray, np.ndarray]:
    """Validate a rank/score series for fitting `family`.

    Ranks must be strictly increasing. Logarithmic and power fits need
    positive ranks; exponential and power fits need positive scores.
    """
    x = check_ranks(X)
    y = column_or_1d(check_array(y, ensure_2d=False, dtype=np.float64), warn=False)
    check_consistent_length(x, y)
    if np.any(np.diff(x) <= 0):
        raise ValueError("ranks must be strictly increasing")
    if family is not None:
        if family not in MIN_POINTS:
            raise ValueError(f"unknown family {family!r}")
        need = MIN_POINTS[family]
        if len(x) < need:
            raise ValueError(f"{family} fit needs at least {need} points, got {len(x)}")
        if family in ("logarithmic", "power") and np.any(x <= 0):
            raise ValueError(f"{family} fit needs positive ranks")
        if family in ("exponential", "power") and np.any(y <= 0):
            raise ValueError(f"{family} fit needs positive scores")
    return x, y


def check_positive_int(value, name: str) -> int:
    if isinstance(value, bool) or not isinstance(value, numbers.Integral) or value < 1:
        raise ValueError(f"{name} must be a positive integer, got {value!r}")
    return int(value)
