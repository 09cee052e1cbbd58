"""Rank-score curve fitting and the data-error impact probabilities.

Curve families, all fitted by ordinary least squares:

==============  ====================  ================================
family          model                 fitted on
==============  ====================  ================================
logarithmic     y = a ln(x) + b       (ln x, y)
polynomial2     y = a x^2 + b x + c   (x, y)
exponential     y = a exp(b x)        (x, ln y), back-transformed
power           y = a x^b             (ln x, ln y), back-transformed
==============  ====================  ================================

R^2 is always measured against the untransformed scores so the four
families are comparable.

Error model: a total of ``s_all`` score units, of which ``floor(alpha *
s_all)`` are lost uniformly at random. Entity ``a`` holds ``s_a`` units.
The probability that exactly ``s_a - s_b`` of ``a``'s units are among the
lost ones is a hypergeometric point mass, evaluated here with exact
integer binomials.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from numbers import Rational

import numpy as np
from sklearn.base import BaseEstimator
from sklearn.utils.validation import check_is_fitted

from .scoring import ScoreTable
from .validation import check_rank_score, check_ranks

__all__ = [
    "FAMILIES",
    "RankScoreSeries",
    "FitResult",
    "BestFit",
    "CurveFit",
    "BestCurveFit",
    "r_squared",
    "fit_family",
    "best_fit",
    "ErrorModel",
    "error_probability_fraction",
    "error_probability_exact",
    "error_probability_bound",
    "monte_carlo_error_probability",
]

FAMILIES = ("logarithmic", "polynomial2", "exponential", "power")


@dataclass(frozen=True, eq=False)
class RankScoreSeries:
    x: np.ndarray
    y: np.ndarray

    def __post_init__(self) -> None:
        x, y = check_rank_score(self.x, self.y)
        object.__setattr__(self, "x", x)
        object.__setattr__(self, "y", y)

    @classmethod
    def from_scores(cls, scores) -> "RankScoreSeries":
        """Rank positive scores descending; rank 1 is the best."""
        y = np.sort(np.asarray([s for s in scores if s > 0], dtype=float))[::-1]
        return cls(np.arange(1, len(y) + 1, dtype=float), y)

    @classmethod
    def from_table(cls, table: ScoreTable) -> "RankScoreSeries":
        return cls.from_scores(h / 2 for _, h in table.ranked())

    def __len__(self) -> int:
        return len(self.x)


@dataclass(frozen=True)
class FitResult:
    family: str
    params: tuple[float, ...]
    r_squared: float

    def predict(self, x) -> np.ndarray:
        return _evaluate(self.family, self.params, check_ranks(x))

    def formula(self) -> str:
        p = [f"{v:.6g}" for v in self.params]
        signed = [f"{v:+.6g}" for v in self.params]
        if self.family == "logarithmic":
            return f"y={p[0]}*ln(x){signed[1]}"
        if self.family == "polynomial2":
            return f"y={p[0]}*x^2{signed[1]}*x{signed[2]}"
        if self.family == "exponential":
            return f"y={p[0]}*exp({p[1]}*x)"
        return f"y={p[0]}*x^{p[1]}"


@dataclass(frozen=True)
class BestFit:
    family: str
    result: FitResult
    candidates: dict[str, FitResult] = field(default_factory=dict)


def _evaluate(family: str, params, x: np.ndarray) -> np.ndarray:
    if family == "logarithmic":
        a, b = params
        return a * np.log(x) + b
    if family == "polynomial2":
        a, b, c = params
        return a * x**2 + b * x + c
    if family == "exponential":
        a, b = params
        return a * np.exp(b * x)
    if family == "power":
        a, b = params
        return a * np.power(x, b)
    raise ValueError(f"unknown family {family!r}")


def r_squared(y, y_pred) -> float:
    """1 - SS_res/SS_tot. A constant target predicted exactly scores 1."""
    y = np.asarray(y, dtype=float)
    y_pred = np.asarray(y_pred, dtype=float)
    ss_res = float(np.sum((y - y_pred) ** 2))
    ss_tot = float(np.sum((y - y.mean()) ** 2))
    if ss_tot == 0.0:
        scale = max(1.0, float(np.sum(y**2)))
        return 1.0 if ss_res <= 1e-20 * scale else -math.inf
    return 1.0 - ss_res / ss_tot


def _lstsq(design: np.ndarray, target: np.ndarray) -> np.ndarray:
    coef, _, rank, _ = np.linalg.lstsq(design, target, rcond=None)
    if rank < design.shape[1]:
        raise ValueError("degenerate design: ranks do not determine the fit")
    return coef


def fit_family(series: RankScoreSeries, family: str) -> FitResult:
    x, y = check_rank_score(series.x, series.y, family)
    ones = np.ones_like(x)
    if family == "logarithmic":
        a, b = _lstsq(np.column_stack([np.log(x), ones]), y)
        params = (float(a), float(b))
    elif family == "polynomial2":
        # fit on x / max(x) to keep the normal matrix well conditioned
        scale = float(np.max(np.abs(x)))
        t = x / scale
        a, b, c = _lstsq(np.column_stack([t**2, t, ones]), y)
        params = (float(a) / scale**2, float(b) / scale, float(c))
    elif family == "exponential":
        ln_a, b = _lstsq(np.column_stack([ones, x]), np.log(y))
        params = (math.exp(ln_a), float(b))
    else:
        ln_a, b = _lstsq(np.column_stack([ones, np.log(x)]), np.log(y))
        params = (math.exp(ln_a), float(b))
    return FitResult(family, params, r_squared(y, _evaluate(family, params, x)))


def best_fit(series: RankScoreSeries, families=FAMILIES) -> BestFit:
    """Fit every family and keep the highest R^2 (earlier family wins ties)."""
    results = {fam: fit_family(series, fam) for fam in families}
    winner = max(results, key=lambda fam: results[fam].r_squared)
    return BestFit(winner, results[winner], results)


class CurveFit(BaseEstimator):
    """One-family rank-score regressor.

    Parameters
    ----------
    family : {'logarithmic', 'polynomial2', 'exponential', 'power'}

    Attributes
    ----------
    params_ : tuple of float
    r_squared_ : float
        Training R^2 in score space.
    """

    def __init__(self, family="power"):
        self.family = family

    def fit(self, X, y):
        result = fit_family(RankScoreSeries(check_ranks(X), y), self.family)
        self.result_ = result
        self.params_ = result.params
        self.r_squared_ = result.r_squared
        return self

    def predict(self, X) -> np.ndarray:
        check_is_fitted(self, "result_")
        return self.result_.predict(X)

    def score(self, X, y) -> float:
        return r_squared(y, self.predict(X))


class BestCurveFit(BaseEstimator):
    """Fits every family in `families` and predicts with the best one."""

    def __init__(self, families=FAMILIES):
        self.families = families

    def fit(self, X, y):
        best = best_fit(RankScoreSeries(check_ranks(X), y), tuple(self.families))
        self.family_ = best.family
        self.result_ = best.result
        self.results_ = best.candidates
        return self

    def predict(self, X) -> np.ndarray:
        check_is_fitted(self, "result_")
        return self.result_.predict(X)

    def score(self, X, y) -> float:
        return r_squared(y, self.predict(X))


def _as_fraction(alpha) -> Fraction:
    if isinstance(alpha, Rational):
        return Fraction(alpha)
    # decimal reading, so 0.29 * 100 floors to 29 and not 28
    return Fraction(repr(float(alpha)))


@dataclass(frozen=True)
class ErrorModel:
    """Score-unit loss model; all counts are integers (already floored)."""

    s_all: int
    s_a: int
    s_b: int
    alpha: float

    def __post_init__(self) -> None:
        for name in ("s_all", "s_a", "s_b"):
            v = getattr(self, name)
            if isinstance(v, bool) or not isinstance(v, (int, np.integer)):
                raise TypeError(f"{name} must be an integer, got {v!r}")
        if not 0 <= self.s_b < self.s_a <= self.s_all:
            raise ValueError(
                f"need 0 <= s_b < s_a <= s_all, got s_b={self.s_b}, s_a={self.s_a}, s_all={self.s_all}"
            )
        if not 0 < _as_fraction(self.alpha) <= 1:
            raise ValueError(f"alpha must lie in (0, 1], got {self.alpha}")
        if self.s_decrease < 1:
            raise ValueError(f"floor(alpha * s_all) = {self.s_decrease}; at least one unit must be lost")

    @classmethod
    def from_scores(cls, s_all: float, s_a: float, s_b: float, alpha: float) -> "ErrorModel":
        """Build from real-valued scores, flooring each."""
        return cls(math.floor(s_all), math.floor(s_a), math.floor(s_b), alpha)

    @property
    def s_decrease(self) -> int:
        return math.floor(_as_fraction(self.alpha) * self.s_all)

    @property
    def gap(self) -> int:
        return self.s_a - self.s_b


def _point_mass(model: ErrorModel, lost: int) -> Fraction:
    n, k, draws = model.s_all, model.s_a, model.s_decrease
    if lost < 0 or lost > k or lost > draws or draws - lost > n - k:
        return Fraction(0)
    return Fraction(math.comb(k, lost) * math.comb(n - k, draws - lost), math.comb(n, draws))


def error_probability_fraction(model: ErrorModel, tail: bool = False) -> Fraction:
    """Exact probability as a rational number.

    By default the chance that exactly ``s_a - s_b`` of a's units are lost.
    With ``tail=True``, the chance that at least that many are lost.
    """
    if not tail:
        return _point_mass(model, model.gap)
    upper = min(model.s_a, model.s_decrease)
    return sum((_point_mass(model, j) for j in range(model.gap, upper + 1)), Fraction(0))


def error_probability_exact(model: ErrorModel, tail: bool = False) -> float:
    return float(error_probability_fraction(model, tail))


def error_probability_bound(model: ErrorModel) -> float:
    """alpha ** s_a, the upper bound for the top-versus-long-tail case."""
    return float(model.alpha) ** model.s_a


def monte_carlo_error_probability(model: ErrorModel, trials: int, rng: np.random.Generator,
                                  tail: bool = False, chunk: int = 5000) -> tuple[float, float]:
    """Estimate the loss probability by drawing random lost-unit subsets.

    Units ``0 .. s_a-1`` belong to entity a. Each trial ranks all units by
    a uniform key and loses the ``s_decrease`` smallest. Returns
    ``(estimate, standard_error)``.
    """
    n, k, draws, gap = model.s_all, model.s_a, model.s_decrease, model.gap
    hits = 0
    done = 0
    while done < trials:
        m = min(chunk, trials - done)
        keys = rng.random((m, n))
        if draws < n:
            cut = np.partition(keys, draws - 1, axis=1)[:, draws - 1:draws]
            lost = np.count_nonzero(keys[:, :k] <= cut, axis=1)
        else:
            lost = np.full(m, k)
        hits += int(np.count_nonzero(lost >= gap if tail else lost == gap))
        done += m
    p = hits / trials
    return p, math.sqrt(max(p * (1 - p), 0.0) / trials)
