"""Nadaraya-Watson regression with the deconvolution-adjusted kernel.

Predictions are kernel-weighted averages of the responses. With adjusted
kernels the weights can be negative, so predictions are not confined to the
convex hull of the responses; binary mode clips probabilities before any
likelihood computation.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import ParameterError
from .kernels import AdjustedKernel, Kernel
from .privacy import Dataset

__all__ = [
    "LabeledDataset",
    "RegressionModel",
    "nw_predict",
    "nw_predict_loo",
    "fit_metrics",
    "PROB_CLIP",
]

PROB_CLIP = 1e-6
DEGENERATE_DENOM = 1e-12
EXTRAPOLATION_DENOM = 1e-8


@dataclass
class LabeledDataset:
    """Input matrix with responses; responses in {0,1} for binary tasks."""

    inputs: np.ndarray
    responses: np.ndarray
    privatized: bool = False
    seed: int | None = None

    def __post_init__(self):
        inputs = np.asarray(self.inputs, dtype=float)
        if inputs.ndim == 1:
            inputs = inputs[:, None]
        responses = np.asarray(self.responses, dtype=float).ravel()
        if inputs.shape[0] != responses.size:
            raise ParameterError("inputs row count must equal responses length")
        if not (np.all(np.isfinite(inputs)) and np.all(np.isfinite(responses))):
            raise ParameterError("labeled data contains non-finite entries")
        self.inputs = inputs
        self.responses = responses

    @property
    def n(self) -> int:
        return self.inputs.shape[0]

    @property
    def dim(self) -> int:
        return self.inputs.shape[1]

    def is_binary(self) -> bool:
        return bool(np.all(np.isin(self.responses, (0.0, 1.0))))

    def input_dataset(self) -> Dataset:
        return Dataset(self.inputs, privatized=self.privatized, seed=self.seed)


@dataclass
class RegressionModel:
    """Trained Nadaraya-Watson model over (possibly privatized) inputs."""

    data: LabeledDataset
    kernel: Kernel
    bandwidth: float
    scales: np.ndarray
    mode: str = "continuous"
    degenerate_count: int = field(default=0, init=False)
    extrapolation_count: int = field(default=0, init=False)

    def __post_init__(self):
        if self.bandwidth <= 0:
            raise ParameterError("bandwidth must be positive")
        scales = np.atleast_1d(np.asarray(self.scales, dtype=float))
        if scales.size != self.data.dim:
            raise ParameterError("scales length must match input dimension")
        if self.mode not in ("continuous", "binary"):
            raise ParameterError(f"unknown regression mode {self.mode!r}")
        if self.mode == "binary" and not self.data.is_binary():
            raise ParameterError("binary mode requires responses in {0, 1}")
        self.scales = scales
        self._adjusted = AdjustedKernel(
            base=Kernel(self.kernel.family, self.data.dim),
            ratios=scales / self.bandwidth,
        )

    def _weights(self, queries: np.ndarray) -> np.ndarray:
        """(m, n) adjusted-kernel weights between queries and training inputs."""
        u = (queries[:, None, :] - self.data.inputs[None, :, :]) / self.bandwidth
        w = self._adjusted.factor(u[..., 0], 0)
        for j in range(1, self.data.dim):
            w = w * self._adjusted.factor(u[..., j], j)
        return w

    def _finalize(self, num, den, queries):
        with np.errstate(divide="ignore", invalid="ignore"):
            pred = num / den
        degenerate = np.abs(den) < DEGENERATE_DENOM
        if np.any(degenerate):
            self.degenerate_count += int(np.sum(degenerate))
            for idx in np.nonzero(degenerate)[0]:
                d2 = np.sum((self.data.inputs - queries[idx]) ** 2, axis=1)
                pred[idx] = self.data.responses[int(np.argmin(d2))]
        self.extrapolation_count += int(
            np.sum(np.abs(den) < EXTRAPOLATION_DENOM * self.data.n)
        )
        if self.mode == "binary":
            pred = np.clip(pred, PROB_CLIP, 1.0 - PROB_CLIP)
        return pred

    def predict(self, queries) -> np.ndarray:
        queries = np.asarray(queries, dtype=float)
        single = queries.ndim == 0 or (
            queries.ndim == 1 and self.data.dim > 1 and queries.size == self.data.dim
        )
        if queries.ndim == 0:
            queries = queries[None, None]
        elif queries.ndim == 1:
            queries = (
                queries[None, :] if queries.size == self.data.dim and self.data.dim > 1
                else queries[:, None]
            )
        out = np.empty(queries.shape[0])
        chunk = max(1, 2**22 // max(self.data.n, 1))
        for start in range(0, queries.shape[0], chunk):
            q = queries[start : start + chunk]
            w = self._weights(q)
            out[start : start + chunk] = self._finalize(
                w @ self.data.responses, w.sum(axis=1), q
            )
        if single and out.size == 1:
            return float(out[0])
        return out

    def predict_loo(self, j: int, queries) -> np.ndarray | float:
        """Prediction with training record j excluded from both sums."""
        if self.data.n < 2:
            raise ParameterError("leave-one-out needs at least two records")
        if not (0 <= j < self.data.n):
            raise ParameterError("held-out index out of range")
        queries = np.asarray(queries, dtype=float)
        single = queries.ndim == 0
        if queries.ndim <= 1:
            queries = np.atleast_1d(queries)[:, None] if self.data.dim == 1 else queries[None, :]
        w = self._weights(queries)
        wj = w[:, j].copy()
        num = w @ self.data.responses - wj * self.data.responses[j]
        den = w.sum(axis=1) - wj
        keep = np.ones(self.data.n, dtype=bool)
        keep[j] = False
        pred = self._finalize_loo(num, den, queries, keep)
        if single and pred.size == 1:
            return float(pred[0])
        return pred

    def _finalize_loo(self, num, den, queries, keep):
        with np.errstate(divide="ignore", invalid="ignore"):
            pred = num / den
        degenerate = np.abs(den) < DEGENERATE_DENOM
        if np.any(degenerate):
            self.degenerate_count += int(np.sum(degenerate))
            inputs = self.data.inputs[keep]
            responses = self.data.responses[keep]
            for idx in np.nonzero(degenerate)[0]:
                d2 = np.sum((inputs - queries[idx]) ** 2, axis=1)
                pred[idx] = responses[int(np.argmin(d2))]
        if self.mode == "binary":
            pred = np.clip(pred, PROB_CLIP, 1.0 - PROB_CLIP)
        return pred


def nw_predict(model: RegressionModel, x):
    return model.predict(x)


def nw_predict_loo(model: RegressionModel, j: int, x):
    return model.predict_loo(j, x)


def log_likelihood(y: np.ndarray, p: np.ndarray) -> float:
    """Mean per-sample Bernoulli log-likelihood with probability clipping."""
    p = np.clip(np.asarray(p, dtype=float), PROB_CLIP, 1.0 - PROB_CLIP)
    y = np.asarray(y, dtype=float)
    return float(np.mean(y * np.log(p) + (1.0 - y) * np.log1p(-p)))


def fit_metrics(model: RegressionModel, data: LabeledDataset) -> dict:
    """MSE, plus mean log-likelihood in binary mode."""
    if data.n < 1:
        raise ParameterError("evaluation dataset is empty")
    pred = np.atleast_1d(model.predict(data.inputs))
    metrics = {"mse": float(np.mean((data.responses - pred) ** 2))}
    if model.mode == "binary":
        metrics["log_likelihood"] = log_likelihood(data.responses, pred)
    return metrics
