"""CSV ingestion, result serialization, and the experiment sweep harness.

All numeric CSV output uses 17-significant-digit decimal so that a write /
ingest round trip is bit exact. Sweep outputs are tidy: one observation per
row with the fixed header ``estimator,epsilon,seed,metric,value``.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np
import pandas as pd

from . import __version__
from .bandwidth import CvConfig, cv_select, default_grid
from .baselines import baseline_metrics, logistic_fit, ols_fit
from .density import EstimateGrid
from .errors import DataError, ParameterError
from .kernels import Kernel
from .privacy import Dataset, SupportBox, laplace_scales, privatize
from .regression import LabeledDataset, RegressionModel, fit_metrics

__all__ = [
    "ColumnSpec",
    "IngestResult",
    "SweepSpec",
    "ingest_csv",
    "write_dataset_csv",
    "write_estimate",
    "run_sweep",
    "emit_plotdata",
    "SWEEP_HEADER",
]

FLOAT_FMT = "%.17g"
SWEEP_HEADER = ["estimator", "epsilon", "seed", "metric", "value"]


@dataclass(frozen=True)
class ColumnSpec:
    """One CSV column with its transform and declared post-transform support.

    Transforms: ``identity``; ``log_shift`` mapping x to ln(x - shift);
    ``indicator`` mapping values in ``positive_labels`` to 1 and all others
    to 0 (for binary responses).
    """

    source: str
    transform: str = "identity"
    shift: float = 0.0
    positive_labels: tuple = ()
    support: tuple[float, float] | None = None

    def __post_init__(self):
        if self.transform not in ("identity", "log_shift", "indicator"):
            raise ParameterError(f"unknown transform {self.transform!r}")

    def apply(self, series: pd.Series) -> np.ndarray:
        if self.transform == "indicator":
            labels = {str(v).strip() for v in self.positive_labels}
            return series.astype(str).str.strip().isin(labels).to_numpy(dtype=float)
        values = pd.to_numeric(series, errors="coerce").to_numpy(dtype=float)
        if self.transform == "identity":
            return values
        bad = np.nonzero(values <= self.shift)[0]
        if bad.size:
            head = ", ".join(str(i) for i in bad[:5])
            raise DataError(
                f"log_shift({self.shift}) domain violation in column "
                f"{self.source!r}: {bad.size} row(s) have values <= {self.shift} "
                f"(first row indices: {head})"
            )
        return np.log(values - self.shift)


@dataclass
class IngestResult:
    data: Dataset | LabeledDataset
    support: SupportBox | None
    rows_total: int
    rows_dropped: int


def ingest_csv(
    path,
    input_spec: ColumnSpec,
    response_spec: ColumnSpec | None = None,
    privatized: bool = False,
) -> IngestResult:
    """Load selected columns, apply transforms, drop rows with missing values.

    Returns a Dataset, or a LabeledDataset when a response column is given.
    The declared support (after transform) is recorded when present in the
    input spec.
    """
    # round_trip parsing keeps a write/ingest cycle bit exact at 17 digits
    frame = pd.read_csv(path, skipinitialspace=True, float_precision="round_trip")
    for spec in filter(None, (input_spec, response_spec)):
        if spec.source not in frame.columns:
            raise DataError(f"column {spec.source!r} not found in {path}")
    rows_total = len(frame)
    cols = [input_spec.source] + ([response_spec.source] if response_spec else [])
    selected = frame[cols].replace("?", np.nan).dropna()
    rows_dropped = rows_total - len(selected)
    if len(selected) == 0:
        raise DataError("no rows left after dropping missing values")
    x = input_spec.apply(selected[input_spec.source])
    if np.any(np.isnan(x)):
        keep = ~np.isnan(x)
        rows_dropped += int(np.sum(~keep))
        selected = selected.loc[selected.index[keep]]
        x = x[keep]
    support = None
    if input_spec.support is not None:
        support = SupportBox(
            lower=np.array([input_spec.support[0]]),
            upper=np.array([input_spec.support[1]]),
        )
    if response_spec is None:
        data = Dataset(records=x[:, None], column_names=[input_spec.source], privatized=privatized)
    else:
        y = response_spec.apply(selected[response_spec.source])
        data = LabeledDataset(inputs=x[:, None], responses=y, privatized=privatized)
    return IngestResult(
        data=data, support=support, rows_total=rows_total, rows_dropped=rows_dropped
    )


def write_dataset_csv(path, data: Dataset | LabeledDataset, columns=None) -> None:
    if isinstance(data, LabeledDataset):
        matrix = np.column_stack([data.inputs, data.responses])
        names = columns or [f"x{i}" for i in range(data.dim)] + ["y"]
        if data.dim == 1:
            names = columns or ["x", "y"]
    else:
        matrix = data.records
        names = columns or data.column_names or [
            "x" if data.dim == 1 else f"x{i}" for i in range(data.dim)
        ]
    frame = pd.DataFrame(matrix, columns=names)
    frame.to_csv(path, index=False, float_format=FLOAT_FMT, lineterminator="\n")


def write_estimate(outdir, stem: str, estimate: EstimateGrid) -> tuple[Path, Path]:
    """Two-column (x, density) CSV plus a JSON metadata sidecar."""
    outdir = Path(outdir)
    outdir.mkdir(parents=True, exist_ok=True)
    if estimate.points.shape[1] != 1:
        raise ParameterError("CLI estimate output supports 1-D grids only")
    csv_path = outdir / f"{stem}.csv"
    frame = pd.DataFrame(
        {"x": estimate.points[:, 0], "density": estimate.values}
    )
    frame.to_csv(csv_path, index=False, float_format=FLOAT_FMT, lineterminator="\n")
    meta = {
        "estimator_tag": estimate.estimator_tag,
        "bandwidth": estimate.bandwidth,
        "epsilon": estimate.epsilon,
        "seed": estimate.seed,
    }
    json_path = outdir / f"{stem}.json"
    json_path.write_text(json.dumps(meta, sort_keys=True, indent=2) + "\n")
    return csv_path, json_path


@dataclass(frozen=True)
class SweepSpec:
    """Privacy budgets, seeds per budget, and which estimators/metrics to run."""

    epsilons: tuple[float, ...]
    seeds: int = 1
    base_seed: int = 0
    estimators: tuple[str, ...] = ("kernel", "linear")
    metrics: tuple[str, ...] = ("mse",)

    def __post_init__(self):
        if not self.epsilons or any(e <= 0 for e in self.epsilons):
            raise ParameterError("epsilons must be a nonempty list of positive values")
        if self.seeds < 1:
            raise ParameterError("seeds must be >= 1")
        for est in self.estimators:
            if est not in ("kernel", "linear", "logistic"):
                raise ParameterError(f"unknown estimator {est!r}")


def _fit_cell(
    estimator: str,
    data: LabeledDataset,
    support: SupportBox,
    kernel: Kernel,
    scales: np.ndarray,
    mode: str,
    metrics: tuple[str, ...],
    cv_subsample: int | None,
) -> dict[str, float]:
    if estimator == "kernel":
        cfg = CvConfig(
            grid=default_grid(data, scales),
            loss="neg_log_likelihood" if mode == "binary" else "squared_error",
            subsample=cv_subsample,
        )
        result = cv_select(data, kernel, scales, cfg)
        model = RegressionModel(
            data=data, kernel=kernel, bandwidth=result.h_star, scales=scales, mode=mode
        )
        values = fit_metrics(model, data)
        values["bandwidth"] = result.h_star
    elif estimator == "linear":
        values = baseline_metrics(ols_fit(data), data)
    else:
        values = baseline_metrics(logistic_fit(data), data)
    return {m: values[m] for m in metrics if m in values} | (
        {"bandwidth": values["bandwidth"]} if "bandwidth" in values else {}
    )


def run_sweep(
    spec: SweepSpec,
    data: LabeledDataset,
    support: SupportBox,
    kernel: Kernel | None = None,
    mode: str = "continuous",
    cv_subsample: int | None = None,
) -> list[dict]:
    """Privatize, CV-select, fit, and score for every (epsilon, seed) cell.

    Noiseless reference rows (epsilon = inf, seed = -1) mirror the horizontal
    baselines of the sweep figures. Cell failures never abort the sweep; they
    appear as rows with a NaN value and an error note.
    """
    if data.privatized:
        raise ParameterError("sweep expects raw (not yet privatized) data")
    kernel = kernel or Kernel("cauchy", data.dim)
    rows: list[dict] = []
    zero = np.zeros(data.dim)

    def add_rows(estimator, epsilon, seed, values, error=None):
        for metric in spec.metrics:
            rows.append(
                {
                    "estimator": estimator,
                    "epsilon": epsilon,
                    "seed": seed,
                    "metric": metric,
                    "value": values.get(metric, math.nan) if values else math.nan,
                    "error": error or "",
                    "bandwidth": values.get("bandwidth", math.nan) if values else math.nan,
                }
            )

    for estimator in spec.estimators:
        try:
            values = _fit_cell(
                estimator, data, support, kernel, zero, mode, spec.metrics, cv_subsample
            )
            add_rows(estimator, math.inf, -1, values)
        except Exception as exc:  # noqa: BLE001 - failures become marked rows
            add_rows(estimator, math.inf, -1, None, error=str(exc))

    for epsilon in spec.epsilons:
        params = laplace_scales(support, epsilon)
        for k in range(spec.seeds):
            seed = spec.base_seed + k
            z = privatize(data.input_dataset(), params, seed=seed, clamp=True)
            zdata = LabeledDataset(
                inputs=z.records, responses=data.responses, privatized=True, seed=seed
            )
            for estimator in spec.estimators:
                try:
                    values = _fit_cell(
                        estimator, zdata, support, kernel, params.scales, mode,
                        spec.metrics, cv_subsample,
                    )
                    add_rows(estimator, epsilon, seed, values)
                except Exception as exc:  # noqa: BLE001
                    add_rows(estimator, epsilon, seed, None, error=str(exc))
    return rows


def emit_plotdata(rows: list[dict], outdir, manifest: dict | None = None) -> tuple[Path, Path]:
    """Write the tidy sweep CSV plus a JSON manifest, in canonical order."""
    if not rows:
        raise ParameterError("no sweep results to write")
    outdir = Path(outdir)
    outdir.mkdir(parents=True, exist_ok=True)
    frame = pd.DataFrame(rows)
    frame = frame.sort_values(
        by=["epsilon", "seed", "estimator", "metric"], kind="mergesort"
    ).reset_index(drop=True)
    csv_path = outdir / "sweep.csv"
    frame[SWEEP_HEADER].to_csv(
        csv_path, index=False, float_format=FLOAT_FMT, lineterminator="\n"
    )
    bandwidths = {}
    for _, row in frame.iterrows():
        if row.get("bandwidth") == row.get("bandwidth"):  # not NaN
            bandwidths[f"eps={row['epsilon']},seed={row['seed']}"] = row["bandwidth"]
    errors = [
        {"estimator": r["estimator"], "epsilon": r["epsilon"], "seed": r["seed"], "error": r["error"]}
        for r in rows
        if r.get("error")
    ]
    payload = {
        "package_version": __version__,
        "bandwidths": bandwidths,
        "failures": errors,
    }
    if manifest:
        payload.update(manifest)
    json_path = outdir / "manifest.json"
    json_path.write_text(json.dumps(payload, sort_keys=True, indent=2) + "\n")
    return csv_path, json_path
