"""Synthetic data generators for the simulation study.

Input distributions: a two-component Gaussian mixture truncated to [-3, 3]
and a chi-squared(3) truncated to [0, 3]. Regression responses add unit
Gaussian noise to one of two fixed curves.

The mixture's second component N(3/2, 1/2) is interpreted with variance 1/2
(sigma = 1/sqrt(2)); the interpretation is recorded in the metadata of every
generated dataset so downstream numbers stay auditable.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import ParameterError
from .privacy import Dataset, SupportBox
from .regression import LabeledDataset

__all__ = [
    "SyntheticSpec",
    "MIXTURE_SUPPORT",
    "CHI2_SUPPORT",
    "sample_inputs",
    "curve_value",
    "make_regression_dataset",
    "mixture_pdf_untruncated",
]

MIXTURE_SUPPORT = SupportBox(lower=np.array([-3.0]), upper=np.array([3.0]))
CHI2_SUPPORT = SupportBox(lower=np.array([0.0]), upper=np.array([3.0]))

MIXTURE_MEANS = (-1.0, 1.5)
MIXTURE_SIGMAS = (1.0, 1.0 / np.sqrt(2.0))  # second component: variance 1/2

_BATCH = 8192


@dataclass(frozen=True)
class SyntheticSpec:
    """Configuration of one synthetic draw."""

    distribution: str = "mixture"  # "mixture" | "chi2"
    curve: str = "none"  # "g1" | "g2" | "none"
    n: int = 1000
    seed: int = 0
    response_noise_sd: float = 1.0
    mixture_weights: tuple[float, float] = (1.0 / 3.0, 2.0 / 3.0)

    def __post_init__(self):
        if self.distribution not in ("mixture", "chi2"):
            raise ParameterError(f"unknown distribution {self.distribution!r}")
        if self.curve not in ("g1", "g2", "none"):
            raise ParameterError(f"unknown curve {self.curve!r}")
        if self.n < 1:
            raise ParameterError("n must be >= 1")
        if self.response_noise_sd < 0:
            raise ParameterError("response noise sd must be nonnegative")
        if abs(sum(self.mixture_weights) - 1.0) > 1e-12 or min(self.mixture_weights) < 0:
            raise ParameterError("mixture weights must be nonnegative and sum to 1")

    @property
    def support(self) -> SupportBox:
        return MIXTURE_SUPPORT if self.distribution == "mixture" else CHI2_SUPPORT

    def metadata(self) -> dict:
        meta = {
            "distribution": self.distribution,
            "curve": self.curve,
            "n": self.n,
            "seed": self.seed,
            "support": [float(self.support.lower[0]), float(self.support.upper[0])],
            "truncation": "truncate-then-normalize",
        }
        if self.distribution == "mixture":
            meta["mixture"] = {
                "weights": list(self.mixture_weights),
                "means": list(MIXTURE_MEANS),
                "sigmas": [float(s) for s in MIXTURE_SIGMAS],
                "second_component_parameterization": "variance 1/2",
            }
        if self.curve != "none":
            meta["response_noise_sd"] = self.response_noise_sd
        return meta


def mixture_pdf_untruncated(x, weights=(1.0 / 3.0, 2.0 / 3.0)):
    """Density of the untruncated Gaussian mixture, vectorized."""
    x = np.asarray(x, dtype=float)
    out = np.zeros_like(x, dtype=float)
    for w, m, s in zip(weights, MIXTURE_MEANS, MIXTURE_SIGMAS):
        out = out + w * np.exp(-0.5 * ((x - m) / s) ** 2) / (s * np.sqrt(2 * np.pi))
    return out


def _proposal_batch(rng: np.random.Generator, spec: SyntheticSpec) -> np.ndarray:
    if spec.distribution == "chi2":
        return rng.chisquare(3, size=_BATCH)
    comp = rng.random(_BATCH) < spec.mixture_weights[0]
    draws = rng.standard_normal(_BATCH)
    means = np.where(comp, MIXTURE_MEANS[0], MIXTURE_MEANS[1])
    sigmas = np.where(comp, MIXTURE_SIGMAS[0], MIXTURE_SIGMAS[1])
    return means + sigmas * draws


def sample_inputs(spec: SyntheticSpec) -> Dataset:
    """Rejection-sample n i.i.d. draws from the truncated target density.

    Proposals come from the untruncated law; draws outside the support box
    are discarded. Accepted draws keep their stream order, so the result is
    deterministic per seed.
    """
    ss = np.random.SeedSequence(spec.seed)
    rng = np.random.Generator(np.random.Philox(ss.spawn(2)[0]))
    lo = float(spec.support.lower[0])
    hi = float(spec.support.upper[0])
    accepted: list[np.ndarray] = []
    total = 0
    while total < spec.n:
        batch = _proposal_batch(rng, spec)
        keep = batch[(batch >= lo) & (batch <= hi)]
        accepted.append(keep)
        total += keep.size
    x = np.concatenate(accepted)[: spec.n]
    return Dataset(records=x[:, None], column_names=["x"], privatized=False, seed=spec.seed)


def curve_value(curve: str, x):
    """Regression curves: g1(x) = x^2 (1 - x^2) / 5, g2(x) = 4.5 sin(x) - 5."""
    x = np.asarray(x, dtype=float)
    if curve == "g1":
        out = x * x * (1.0 - x * x) / 5.0
    elif curve == "g2":
        out = 4.5 * np.sin(x) - 5.0
    else:
        raise ParameterError(f"unknown curve {curve!r}")
    if out.ndim == 0:
        return float(out)
    return out


def make_regression_dataset(spec: SyntheticSpec) -> LabeledDataset:
    """y[i] = curve(x[i]) + Gaussian noise, deterministic per seed.

    Inputs and response noise use separate child streams of the seed, so
    the inputs match sample_inputs(spec) exactly.
    """
    if spec.curve == "none":
        raise ParameterError("regression dataset needs a curve")
    inputs = sample_inputs(spec)
    ss = np.random.SeedSequence(spec.seed)
    noise_rng = np.random.Generator(np.random.Philox(ss.spawn(2)[1]))
    x = inputs.records[:, 0]
    y = curve_value(spec.curve, x) + spec.response_noise_sd * noise_rng.standard_normal(spec.n)
    return LabeledDataset(inputs=inputs.records, responses=y, privatized=False, seed=spec.seed)
