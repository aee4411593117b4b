"""Laplace reporting mechanism for epsilon-local differential privacy.

A record x in a known bounded box is released as z = x + n, where n has
independent Laplace components with scale b_j = q * (upper_j - lower_j) / epsilon.
That scale achieves epsilon-LDP for the whole q-dimensional record; the factor
q performs the budget split across dimensions.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import DataError, ParameterError

__all__ = [
    "SupportBox",
    "PrivacyParams",
    "Dataset",
    "laplace_scales",
    "sample_laplace",
    "privatize",
]


@dataclass(frozen=True)
class SupportBox:
    """Axis-aligned box bounding the support of the raw data."""

    lower: np.ndarray
    upper: np.ndarray

    def __post_init__(self):
        lower = np.atleast_1d(np.asarray(self.lower, dtype=float))
        upper = np.atleast_1d(np.asarray(self.upper, dtype=float))
        if lower.ndim != 1 or upper.ndim != 1 or lower.shape != upper.shape:
            raise ParameterError("support bounds must be 1-D vectors of equal length")
        if lower.size == 0:
            raise ParameterError("support box must have at least one dimension")
        if not (np.all(np.isfinite(lower)) and np.all(np.isfinite(upper))):
            raise ParameterError("support bounds must be finite")
        if np.any(lower > upper):
            raise ParameterError("lower bound exceeds upper bound")
        object.__setattr__(self, "lower", lower)
        object.__setattr__(self, "upper", upper)

    @property
    def dim(self) -> int:
        return self.lower.size

    @property
    def widths(self) -> np.ndarray:
        return self.upper - self.lower

    def contains(self, records: np.ndarray) -> np.ndarray:
        """Row mask: True where the record lies inside the box."""
        records = np.atleast_2d(records)
        return np.all((records >= self.lower) & (records <= self.upper), axis=1)

    def clamp(self, records: np.ndarray) -> np.ndarray:
        return np.clip(records, self.lower, self.upper)


@dataclass(frozen=True)
class PrivacyParams:
    """Privacy budget together with the per-dimension Laplace scales."""

    epsilon: float
    scales: np.ndarray
    support: SupportBox

    def __post_init__(self):
        scales = np.atleast_1d(np.asarray(self.scales, dtype=float))
        if self.epsilon <= 0:
            raise ParameterError("epsilon must be positive")
        if np.any(scales < 0):
            raise ParameterError("Laplace scales must be nonnegative")
        object.__setattr__(self, "scales", scales)

    @property
    def dim(self) -> int:
        return self.scales.size


@dataclass
class Dataset:
    """n x q matrix of numeric records, raw or privatized."""

    records: np.ndarray
    column_names: list[str] | None = None
    privatized: bool = False
    seed: int | None = None

    def __post_init__(self):
        records = np.asarray(self.records, dtype=float)
        if records.ndim == 1:
            records = records[:, None]
        if records.ndim != 2 or records.shape[0] < 1:
            raise DataError("records must form a nonempty n x q matrix")
        if not np.all(np.isfinite(records)):
            raise DataError("records contain non-finite entries")
        self.records = records

    @property
    def n(self) -> int:
        return self.records.shape[0]

    @property
    def dim(self) -> int:
        return self.records.shape[1]


def laplace_scales(support: SupportBox, epsilon: float) -> PrivacyParams:
    """Laplace scales b_j = q * (upper_j - lower_j) / epsilon for the box."""
    if epsilon <= 0:
        raise ParameterError("epsilon must be positive")
    q = support.dim
    scales = q * support.widths / epsilon
    return PrivacyParams(epsilon=float(epsilon), scales=scales, support=support)


def sample_laplace(b, u):
    """Zero-mean Laplace draw(s) with scale ``b`` from uniform(0,1) draw(s) ``u``.

    Inverse-CDF transform: -b * sign(u - 1/2) * ln(1 - 2|u - 1/2|).
    """
    b = np.asarray(b, dtype=float)
    u = np.asarray(u, dtype=float)
    if np.any(b < 0):
        raise ParameterError("Laplace scale must be nonnegative")
    if np.any((u <= 0) | (u >= 1)):
        raise ParameterError("uniform draws must lie strictly in (0, 1)")
    shifted = u - 0.5
    out = -b * np.sign(shifted) * np.log1p(-2.0 * np.abs(shifted))
    if out.ndim == 0:
        return float(out)
    return out


def _uniform_block(seed: int, n: int, q: int) -> np.ndarray:
    """Deterministic (n, q) block of uniforms in (0, 1).

    Philox is counter based, so entry (i, j) is a pure function of
    (seed, i, j): the stream does not depend on evaluation order or on how
    many workers later consume slices of the block.
    """
    rng = np.random.Generator(np.random.Philox(key=np.uint64(seed)))
    u = rng.random((n, q))
    # map the half-open [0, 1) draws into the open interval (0, 1)
    return np.nextafter(u, 1.0)


def privatize(
    data: Dataset,
    params: PrivacyParams,
    seed: int,
    clamp: bool = False,
) -> Dataset:
    """Release z[i] = x[i] + Laplace(b) noise, i.i.d. across records and dims.

    Records outside the declared support are rejected unless ``clamp`` is set,
    in which case they are clipped to the box before noising.
    """
    if data.privatized:
        raise ParameterError("dataset is already privatized")
    if data.dim != params.dim:
        raise ParameterError(
            f"dataset dimension {data.dim} does not match privacy params dimension {params.dim}"
        )
    records = data.records
    inside = params.support.contains(records)
    if not np.all(inside):
        if clamp:
            records = params.support.clamp(records)
        else:
            bad = int(np.sum(~inside))
            raise DataError(
                f"{bad} record(s) fall outside the declared support; "
                "pass clamp=True to clip them to the box"
            )
    u = _uniform_block(int(seed), data.n, data.dim)
    noise = sample_laplace(params.scales[None, :], u)
    return Dataset(
        records=records + noise,
        column_names=data.column_names,
        privatized=True,
        seed=int(seed),
    )
