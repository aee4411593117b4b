"""Linear and logistic regression baselines for head-to-head comparisons.

Both baselines are fit directly on the (possibly privatized) inputs with no
noise correction; the comparison harness feeds them the same records as the
kernel model.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np

from .errors import NumericalError, ParameterError
from .regression import LabeledDataset, log_likelihood

__all__ = [
    "LinearModel",
    "LogisticModel",
    "ols_fit",
    "logistic_fit",
    "baseline_metrics",
]


@dataclass(frozen=True)
class LinearModel:
    """OLS fit; coefficients[0] is the intercept."""

    coefficients: np.ndarray

    def predict(self, inputs) -> np.ndarray:
        X = _design(np.asarray(inputs, dtype=float))
        return X @ self.coefficients


@dataclass(frozen=True)
class LogisticModel:
    """Logistic MLE on the log-odds scale; coefficients[0] is the intercept."""

    coefficients: np.ndarray
    converged: bool = True
    separation_warning: bool = False

    def predict_proba(self, inputs) -> np.ndarray:
        X = _design(np.asarray(inputs, dtype=float))
        return _sigmoid(X @ self.coefficients)


def _design(inputs: np.ndarray) -> np.ndarray:
    if inputs.ndim == 1:
        inputs = inputs[:, None]
    return np.column_stack([np.ones(inputs.shape[0]), inputs])


def _sigmoid(t: np.ndarray) -> np.ndarray:
    out = np.empty_like(t, dtype=float)
    pos = t >= 0
    out[pos] = 1.0 / (1.0 + np.exp(-t[pos]))
    e = np.exp(t[~pos])
    out[~pos] = e / (1.0 + e)
    return out


def ols_fit(data: LabeledDataset) -> LinearModel:
    """Least squares via QR; raises on a rank-deficient design."""
    X = _design(data.inputs)
    if data.n < X.shape[1]:
        raise ParameterError("need at least q + 1 records for OLS")
    rank = np.linalg.matrix_rank(X)
    if rank < X.shape[1]:
        norms = np.linalg.norm(X, axis=0)
        worst = int(np.argmin(np.where(norms > 0, norms, np.inf)))
        raise NumericalError(f"design matrix is rank deficient (column {worst})")
    beta, *_ = np.linalg.lstsq(X, data.responses, rcond=None)
    return LinearModel(coefficients=beta)


def _logistic_loglik(X, y, beta) -> float:
    t = X @ beta
    # log sigma(t) = -log(1 + e^{-t}), stable form
    return float(np.sum(y * t - np.logaddexp(0.0, t)))


def logistic_fit(
    data: LabeledDataset, max_iter: int = 100, tol: float = 1e-8
) -> LogisticModel:
    """Logistic MLE by damped Newton iteration.

    The step is halved until the log-likelihood improves. Separable data
    (likelihood keeps improving with diverging coefficients) stops with
    bounded coefficients and a separation warning.
    """
    if not data.is_binary():
        raise ParameterError("logistic regression requires responses in {0, 1}")
    X = _design(data.inputs)
    if data.n < X.shape[1]:
        raise ParameterError("need at least q + 1 records for logistic regression")
    y = data.responses
    beta = np.zeros(X.shape[1])
    ll = _logistic_loglik(X, y, beta)
    converged = False
    separation = False
    for _ in range(max_iter):
        p = _sigmoid(X @ beta)
        grad = X.T @ (y - p)
        if np.max(np.abs(grad)) <= tol:
            converged = True
            break
        w = np.maximum(p * (1.0 - p), 1e-12)
        hess = X.T @ (X * w[:, None])
        try:
            step = np.linalg.solve(hess, grad)
        except np.linalg.LinAlgError:
            raise NumericalError("singular Hessian in logistic fit") from None
        damping = 1.0
        while damping > 1e-8:
            candidate = beta + damping * step
            ll_new = _logistic_loglik(X, y, candidate)
            if ll_new >= ll:
                beta, ll = candidate, ll_new
                break
            damping /= 2.0
        if np.max(np.abs(beta)) > 30.0:
            separation = True
            break
    # log-odds beyond ~15 mean probabilities within 3e-7 of 0/1 on unit-scale
    # inputs: the data is (near-)separable even if the gradient test passed
    if separation or np.max(np.abs(beta)) > 15.0:
        separation = True
        warnings.warn(
            "logistic fit stopped on (near-)separable data; coefficients bounded",
            stacklevel=2,
        )
    return LogisticModel(
        coefficients=beta, converged=converged, separation_warning=separation
    )


def baseline_metrics(model, data: LabeledDataset) -> dict:
    """MSE for linear models, mean log-likelihood for logistic models."""
    if isinstance(model, LinearModel):
        pred = model.predict(data.inputs)
        return {"mse": float(np.mean((data.responses - pred) ** 2))}
    if isinstance(model, LogisticModel):
        p = model.predict_proba(data.inputs)
        return {
            "mse": float(np.mean((data.responses - p) ** 2)),
            "log_likelihood": log_likelihood(data.responses, p),
        }
    raise ParameterError(f"unknown baseline model type {type(model).__name__}")
