"""Leave-one-out cross-validation bandwidth selection.

The selected bandwidth minimizes the summed LOO loss over a candidate grid.
For each candidate, the LOO prediction at z[j] is obtained from the full
kernel sums by subtracting record j's own contribution, which is
algebraically identical to rebuilding the model without record j.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass, field

import numpy as np

from .errors import NumericalError, ParameterError
from .kernels import Kernel
from .regression import (
    DEGENERATE_DENOM,
    PROB_CLIP,
    LabeledDataset,
    RegressionModel,
)

__all__ = ["CvConfig", "CvResult", "cv_select", "default_grid"]

LOO_SUBSAMPLE_DEFAULT = 20_000


@dataclass(frozen=True)
class CvConfig:
    """Candidate bandwidths, loss, and optional cap on LOO folds."""

    grid: np.ndarray
    loss: str = "squared_error"
    subsample: int | None = None
    subsample_seed: int = 0

    def __post_init__(self):
        grid = np.atleast_1d(np.asarray(self.grid, dtype=float))
        if grid.size == 0:
            raise ParameterError("candidate grid is empty")
        if np.any(grid <= 0):
            raise ParameterError("candidate bandwidths must be positive")
        if np.any(np.diff(grid) <= 0):
            raise ParameterError("candidate grid must be strictly increasing")
        if self.loss not in ("squared_error", "neg_log_likelihood"):
            raise ParameterError(f"unknown loss {self.loss!r}")
        if self.subsample is not None and self.subsample < 1:
            raise ParameterError("subsample cap must be positive")
        object.__setattr__(self, "grid", grid)


@dataclass
class CvResult:
    h_star: float
    scores: list[tuple[float, float]]
    folds: int
    subsampled: bool
    endpoint_minimum: bool


def _fold_indices(n: int, cfg: CvConfig) -> tuple[np.ndarray, bool]:
    cap = cfg.subsample if cfg.subsample is not None else LOO_SUBSAMPLE_DEFAULT
    if n <= cap:
        return np.arange(n), False
    rng = np.random.Generator(np.random.Philox(key=np.uint64(cfg.subsample_seed)))
    idx = rng.choice(n, size=cap, replace=False)
    idx.sort()
    return idx, True


def _loo_score(
    data: LabeledDataset,
    kernel: Kernel,
    scales,
    h: float,
    folds: np.ndarray,
    loss: str,
    binary: bool,
) -> tuple[float, int]:
    """Summed LOO loss over the given folds; also returns the degenerate count."""
    model = RegressionModel(
        data=data, kernel=kernel, bandwidth=h, scales=scales,
        mode="binary" if binary else "continuous",
    )
    z = data.inputs
    y = data.responses
    total = 0.0
    degenerate = 0
    chunk = max(1, 2**22 // data.n)
    for start in range(0, folds.size, chunk):
        j = folds[start : start + chunk]
        w = model._weights(z[j])
        own = w[np.arange(j.size), j]
        num = w @ y - own * y[j]
        den = w.sum(axis=1) - own
        with np.errstate(divide="ignore", invalid="ignore"):
            pred = num / den
        bad = np.abs(den) < DEGENERATE_DENOM
        degenerate += int(np.sum(bad))
        if np.any(bad):
            for k in np.nonzero(bad)[0]:
                d2 = np.sum((z - z[j[k]]) ** 2, axis=1)
                d2[j[k]] = np.inf
                pred[k] = y[int(np.argmin(d2))]
        if loss == "squared_error":
            total += float(np.sum((y[j] - pred) ** 2))
        else:
            p = np.clip(pred, PROB_CLIP, 1.0 - PROB_CLIP)
            total += float(-np.sum(y[j] * np.log(p) + (1.0 - y[j]) * np.log1p(-p)))
    return total, degenerate


def _select_best(scores: list[tuple[float, float]]) -> tuple[float, float]:
    """Argmin over (h, score) pairs; exact ties pick the larger h."""
    best_h, best_score = scores[0]
    for h, score in scores[1:]:
        if score <= best_score:
            best_h, best_score = h, score
    return best_h, best_score


def cv_select(
    data: LabeledDataset,
    kernel: Kernel,
    scales,
    cfg: CvConfig,
) -> CvResult:
    """Pick the candidate bandwidth minimizing the summed LOO loss.

    Ties break toward the larger bandwidth. A minimum attained at either
    end of the grid triggers a grid-widening warning; a grid on which every
    LOO prediction is degenerate at every candidate raises NumericalError.
    """
    if data.n < 3:
        raise ParameterError("cross-validation needs at least three records")
    scales = np.atleast_1d(np.asarray(scales, dtype=float))
    binary = cfg.loss == "neg_log_likelihood"
    if binary and not data.is_binary():
        raise ParameterError("neg_log_likelihood loss requires binary responses")
    folds, subsampled = _fold_indices(data.n, cfg)
    scores: list[tuple[float, float]] = []
    all_degenerate = True
    for h in cfg.grid:
        score, degenerate = _loo_score(
            data, kernel, scales, float(h), folds, cfg.loss, binary
        )
        if degenerate < folds.size:
            all_degenerate = False
        scores.append((float(h), score))
    if all_degenerate:
        raise NumericalError(
            "every LOO prediction was degenerate at every candidate bandwidth"
        )
    best_h, best_score = _select_best(scores)
    endpoint = best_h in (scores[0][0], scores[-1][0]) and len(scores) > 1
    if endpoint:
        warnings.warn(
            "CV minimum attained at a grid endpoint; consider widening the "
            "candidate grid",
            stacklevel=2,
        )
    return CvResult(
        h_star=best_h,
        scores=scores,
        folds=folds.size,
        subsampled=subsampled,
        endpoint_minimum=endpoint,
    )


def default_grid(data: LabeledDataset, scales, num: int = 25) -> np.ndarray:
    """25 log-spaced candidates around the n^(-1/5) rate, widened for noise.

    Spans 0.05 to 50 times sigma * n^(-1/5); the upper end is raised to at
    least 4 * max(scales), since deconvolution typically wants a bandwidth
    comparable to the noise scale.
    """
    if data.n < 2:
        raise ParameterError("need at least two records to build a grid")
    sigma = float(np.mean(np.std(data.inputs, axis=0, ddof=1)))
    if sigma <= 0:
        sigma = 1.0
    rate = sigma * data.n ** (-0.2)
    lo = 0.05 * rate
    hi = 50.0 * rate
    bmax = float(np.max(np.atleast_1d(np.asarray(scales, dtype=float))))
    hi = max(hi, 4.0 * bmax)
    return np.geomspace(lo, hi, num)
