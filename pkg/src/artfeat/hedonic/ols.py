"""Least squares via QR, sandwich-robust standard errors, and t inference."""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Mapping

import numpy as np
from scipy import stats
from scipy.linalg import solve_triangular

from ..errors import RankDeficientError
from ..corpus.records import Corpus
from .design import DesignMatrix, build_design
from .spec import ModelSpec

# a diagonal entry of R this small relative to the largest marks the column
# as linearly dependent on its predecessors
RANK_RTOL = 1e-10

STAR_THRESHOLDS = ((0.01, "***"), (0.05, "**"), (0.1, "*"))

STAR_LEGEND = "*** p<0.01, ** p<0.05, * p<0.1"


def significance_stars(p_value: float) -> str:
    for threshold, stars in STAR_THRESHOLDS:
        if p_value < threshold:
            return stars
    return ""


@dataclass(frozen=True, eq=False)
class FitResult:
    """Coefficients and inference for one fitted specification."""

    names: tuple[str, ...]
    coefficients: Mapping[str, float]
    robust_se: Mapping[str, float]
    t_stats: Mapping[str, float]
    p_values: Mapping[str, float]
    stars: Mapping[str, str]
    r_squared: float
    adj_r_squared: float
    n: int
    k: int
    residuals: np.ndarray
    covariance: np.ndarray
    robust_kind: str
    condition_number: float
    warnings: tuple[str, ...] = ()

    @property
    def df(self) -> int:
        return self.n - self.k


def _qr(design: DesignMatrix) -> tuple[np.ndarray, np.ndarray]:
    Q, R = np.linalg.qr(design.X)
    diag = np.abs(np.diag(R))
    dependent = np.nonzero(diag <= RANK_RTOL * diag.max())[0]
    if dependent.size:
        raise RankDeficientError(design.names[int(dependent[0])])
    return Q, R


def ols_beta(design: DesignMatrix) -> np.ndarray:
    """Least-squares coefficients by QR factorization (not normal equations)."""
    Q, R = _qr(design)
    return solve_triangular(R, Q.T @ design.y, lower=False)


def robust_covariance(
    design: DesignMatrix, residuals: np.ndarray, kind: str = "HC1"
) -> tuple[np.ndarray, np.ndarray]:
    """Heteroskedasticity-consistent covariance and standard errors.

    HC0 is the sandwich (X'X)^-1 (sum_i e_i^2 x_i x_i') (X'X)^-1 with the
    bread formed from R^-1 so its accuracy degrades with cond(X), not
    cond(X'X). HC1 rescales HC0 by exactly n/(n-k).
    """
    if kind not in ("HC0", "HC1"):
        raise ValueError(f"robust kind must be HC0 or HC1, got {kind!r}")
    X = design.X
    n, k = design.n, design.k
    _, R = _qr(design)
    r_inv = solve_triangular(R, np.eye(k), lower=False)
    bread = r_inv @ r_inv.T
    meat = X.T @ (X * (residuals * residuals)[:, None])
    cov = bread @ meat @ bread
    if kind == "HC1":
        cov = cov * (n / (n - k))
    se = np.sqrt(np.maximum(np.diag(cov), 0.0))
    return cov, se


def _infer(beta: np.ndarray, se: np.ndarray, df: int) -> tuple[np.ndarray, np.ndarray, list[str]]:
    t = np.empty_like(beta)
    p = np.empty_like(beta)
    for i in range(beta.size):
        if se[i] > 0.0:
            t[i] = beta[i] / se[i]
            p[i] = 2.0 * float(stats.t.sf(abs(t[i]), df))
        elif beta[i] == 0.0:
            t[i], p[i] = 0.0, 1.0
        else:
            # exact fit: the point estimate is infinitely many SEs from zero
            t[i], p[i] = np.copysign(np.inf, beta[i]), 0.0
    return t, p, [significance_stars(v) for v in p]


def inference(fit: FitResult) -> tuple[dict[str, float], dict[str, float], dict[str, str]]:
    """Recompute t statistics, two-sided Student-t p-values (n-k degrees of
    freedom), and significance stars from a fit's coefficients and SEs."""
    beta = np.asarray([fit.coefficients[name] for name in fit.names])
    se = np.asarray([fit.robust_se[name] for name in fit.names])
    t, p, stars = _infer(beta, se, fit.df)
    return (
        dict(zip(fit.names, t.tolist())),
        dict(zip(fit.names, p.tolist())),
        dict(zip(fit.names, stars)),
    )


def ols_fit(design: DesignMatrix, robust_kind: str = "HC1") -> FitResult:
    """Fit y on X and return coefficients with robust inference.

    R^2 is measured against the intercept-only baseline and clamped to
    [0, 1] against rounding noise; adjusted R^2 = 1 - (1-R^2)(n-1)/(n-k).
    """
    X, y = design.X, design.y
    n, k = design.n, design.k
    Q, R = _qr(design)
    beta = solve_triangular(R, Q.T @ y, lower=False)
    residuals = y - X @ beta
    ssr = float(residuals @ residuals)
    centered = y - y.mean()
    sst = float(centered @ centered)
    if sst > 0.0:
        r_squared = min(1.0, max(0.0, 1.0 - ssr / sst))
    else:
        # constant response: the intercept reproduces it exactly
        r_squared = 1.0 if ssr <= 1e-24 * max(1.0, float(y @ y)) else 0.0
    adj_r_squared = 1.0 - (1.0 - r_squared) * (n - 1) / (n - k)

    cov, se = robust_covariance(design, residuals, robust_kind)
    t, p, stars = _infer(beta, se, n - k)
    singular_values = np.linalg.svd(R, compute_uv=False)
    names = design.names
    return FitResult(
        names=names,
        coefficients=dict(zip(names, beta.tolist())),
        robust_se=dict(zip(names, se.tolist())),
        t_stats=dict(zip(names, t.tolist())),
        p_values=dict(zip(names, p.tolist())),
        stars=dict(zip(names, stars)),
        r_squared=r_squared,
        adj_r_squared=adj_r_squared,
        n=n,
        k=k,
        residuals=residuals,
        covariance=cov,
        robust_kind=robust_kind,
        condition_number=float(singular_values[0] / singular_values[-1]),
        warnings=design.warnings,
    )


def fit_model(spec: ModelSpec, corpus: Corpus) -> FitResult:
    """Build the design for a spec and fit it: the one-call entry point."""
    return ols_fit(build_design(spec, corpus), spec.robust_kind)
