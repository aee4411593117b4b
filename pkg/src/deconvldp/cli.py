"""Command-line interface.

Subcommands: privatize, kde, naive-kde, deconv-kde, regress, cv, synth,
sweep. Exit codes: 0 success, 2 parameter error, 3 data error, 4 numerical
failure. All outputs are byte-identical across repeated runs with the same
flags and seed.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

import numpy as np

from . import __version__
from .bandwidth import CvConfig, cv_select, default_grid
from .baselines import baseline_metrics, logistic_fit, ols_fit
from .dataio import (
    FLOAT_FMT,
    ColumnSpec,
    SweepSpec,
    emit_plotdata,
    ingest_csv,
    run_sweep,
    write_dataset_csv,
    write_estimate,
)
from .density import (
    deconv_kde,
    default_bandwidth,
    default_eval_grid,
    kde,
    naive_kde,
    nonneg_renormalize,
)
from .errors import DataError, NumericalError, ParameterError
from .kernels import Kernel
from .privacy import Dataset, SupportBox, laplace_scales, privatize
from .regression import LabeledDataset, RegressionModel, fit_metrics
from .synthdata import SyntheticSpec, make_regression_dataset, sample_inputs


def _parse_support(text: str) -> SupportBox:
    lows, highs = [], []
    for part in text.split(","):
        try:
            lo, hi = part.split(":")
            lows.append(float(lo))
            highs.append(float(hi))
        except ValueError:
            raise ParameterError(
                f"bad support spec {text!r}; expected lo:hi[,lo:hi...]"
            ) from None
    return SupportBox(lower=np.array(lows), upper=np.array(highs))


def _load_dataset(path: str, column: str | None, privatized: bool) -> Dataset:
    spec = ColumnSpec(source=column or "x")
    return ingest_csv(path, spec, privatized=privatized).data


def _load_labeled(path: str, x_col: str, y_col: str, privatized: bool) -> LabeledDataset:
    result = ingest_csv(
        path, ColumnSpec(source=x_col), ColumnSpec(source=y_col), privatized=privatized
    )
    return result.data


def _bandwidth_for_density(args, data: Dataset) -> float:
    if args.bandwidth is not None:
        if args.bandwidth == "cv":
            raise ParameterError("density commands take a numeric --bandwidth")
        return float(args.bandwidth)
    sigma = float(np.std(data.records[:, 0], ddof=1))
    return default_bandwidth(data.n, sigma if sigma > 0 else 1.0)


def _cmd_synth(args) -> int:
    spec = SyntheticSpec(
        distribution=args.dist, curve=args.curve, n=args.n, seed=args.seed
    )
    if args.curve == "none":
        data = sample_inputs(spec)
    else:
        data = make_regression_dataset(spec)
    out = Path(args.out)
    out.parent.mkdir(parents=True, exist_ok=True)
    write_dataset_csv(out, data)
    meta_path = out.with_suffix(".json")
    meta_path.write_text(json.dumps(spec.metadata(), sort_keys=True, indent=2) + "\n")
    print(f"wrote {out} ({spec.n} rows)")
    return 0


def _cmd_privatize(args) -> int:
    support = _parse_support(args.support)
    data = _load_dataset(args.input, args.column, privatized=False)
    params = laplace_scales(support, args.epsilon)
    z = privatize(data, params, seed=args.seed, clamp=args.clamp)
    out = Path(args.out)
    out.parent.mkdir(parents=True, exist_ok=True)
    write_dataset_csv(out, z)
    print(f"wrote {out} (epsilon={args.epsilon}, scales={params.scales.tolist()})")
    return 0


def _cmd_density(args, which: str) -> int:
    support = _parse_support(args.support)
    if support.dim > 2:
        raise ParameterError("CLI density grids support at most two dimensions")
    if support.dim != 1:
        raise ParameterError("density subcommands currently evaluate 1-D grids")
    kernel = Kernel(args.kernel, 1)
    privatized = which != "kde"
    data = _load_dataset(args.input, args.column, privatized=privatized)
    h = _bandwidth_for_density(args, data)
    if which == "kde":
        grid = default_eval_grid(support, [0.0], h, num=args.grid_points, family=args.kernel)
        est = kde(data, kernel, h, grid)
    else:
        params = laplace_scales(support, args.epsilon)
        grid = default_eval_grid(support, params.scales, h, num=args.grid_points, family=args.kernel)
        if which == "naive-kde":
            est = naive_kde(data, kernel, h, grid, epsilon=args.epsilon)
        else:
            est = deconv_kde(
                data, kernel, h, params.scales, grid, epsilon=args.epsilon
            )
    if args.nonneg:
        est = nonneg_renormalize(est)
    est.seed = args.seed
    csv_path, json_path = write_estimate(args.out, which.replace("-", "_"), est)
    print(f"wrote {csv_path} and {json_path} (h={h:.6g})")
    return 0


def _regression_scales(args, support: SupportBox) -> np.ndarray:
    if args.epsilon is None:
        return np.zeros(support.dim)
    return laplace_scales(support, args.epsilon).scales


def _cmd_regress(args) -> int:
    support = _parse_support(args.support)
    data = _load_labeled(args.input, args.x_col, args.y_col, privatized=args.epsilon is not None)
    scales = _regression_scales(args, support)
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    if args.model in ("linear", "logistic"):
        model = ols_fit(data) if args.model == "linear" else logistic_fit(data)
        metrics = baseline_metrics(model, data)
        grid = np.linspace(float(support.lower[0]), float(support.upper[0]), args.grid_points)
        curve = model.predict(grid) if args.model == "linear" else model.predict_proba(grid)
        extra = {"coefficients": model.coefficients.tolist()}
    else:
        kernel = Kernel(args.kernel, data.dim)
        if args.bandwidth == "cv":
            cfg = CvConfig(
                grid=default_grid(data, scales),
                loss="neg_log_likelihood" if args.mode == "binary" else "squared_error",
            )
            h = cv_select(data, kernel, scales, cfg).h_star
        else:
            h = float(args.bandwidth)
        model = RegressionModel(
            data=data, kernel=kernel, bandwidth=h, scales=scales, mode=args.mode
        )
        metrics = fit_metrics(model, data)
        grid = np.linspace(float(support.lower[0]), float(support.upper[0]), args.grid_points)
        curve = model.predict(grid)
        extra = {"bandwidth": h}
    import pandas as pd

    pd.DataFrame({"x": grid, "m_hat": np.atleast_1d(curve)}).to_csv(
        out / "curve.csv", index=False, float_format=FLOAT_FMT, lineterminator="\n"
    )
    payload = {
        "model": args.model,
        "mode": args.mode,
        "epsilon": args.epsilon,
        "seed": args.seed,
        **extra,
        "metrics": metrics,
    }
    (out / "metrics.json").write_text(json.dumps(payload, sort_keys=True, indent=2) + "\n")
    print(f"wrote {out / 'curve.csv'} and {out / 'metrics.json'}")
    return 0


def _cmd_cv(args) -> int:
    support = _parse_support(args.support)
    data = _load_labeled(args.input, args.x_col, args.y_col, privatized=args.epsilon is not None)
    scales = _regression_scales(args, support)
    kernel = Kernel(args.kernel, data.dim)
    if args.grid:
        lo, hi, count = args.grid.split(":")
        grid = np.geomspace(float(lo), float(hi), int(count))
    else:
        grid = default_grid(data, scales)
    cfg = CvConfig(
        grid=grid,
        loss="neg_log_likelihood" if args.mode == "binary" else "squared_error",
    )
    result = cv_select(data, kernel, scales, cfg)
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    import pandas as pd

    pd.DataFrame(result.scores, columns=["h", "score"]).to_csv(
        out / "cv_scores.csv", index=False, float_format=FLOAT_FMT, lineterminator="\n"
    )
    print(f"selected bandwidth h={result.h_star:.6g} over {result.folds} folds")
    return 0


def _cmd_sweep(args) -> int:
    support = _parse_support(args.support)
    data = _load_labeled(args.input, args.x_col, args.y_col, privatized=False)
    epsilons = tuple(float(e) for e in args.epsilons.split(","))
    mode = args.mode
    estimators = ("kernel", "logistic" if mode == "binary" else "linear")
    metrics = ("log_likelihood",) if mode == "binary" else ("mse",)
    spec = SweepSpec(
        epsilons=epsilons,
        seeds=args.seeds,
        base_seed=args.seed,
        estimators=estimators,
        metrics=metrics,
    )
    rows = run_sweep(
        spec,
        data,
        support,
        kernel=Kernel(args.kernel, data.dim),
        mode=mode,
        cv_subsample=args.cv_subsample,
    )
    manifest = {
        "seed": args.seed,
        "kernel_family": args.kernel,
        "epsilons": list(epsilons),
    }
    csv_path, json_path = emit_plotdata(rows, args.out, manifest)
    print(f"wrote {csv_path} and {json_path}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="deconvldp",
        description="Local differential privacy with deconvoluting kernel estimators",
    )
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, epsilon_required=False, needs_support=True):
        p.add_argument("--seed", type=int, default=0)
        p.add_argument("--kernel", choices=["gaussian", "cauchy"], default="cauchy")
        p.add_argument("--epsilon", type=float, required=epsilon_required, default=None)
        if needs_support:
            p.add_argument("--support", required=True, help="lo:hi[,lo:hi...]")
        p.add_argument("--out", required=True)

    p = sub.add_parser("synth", help="generate synthetic data")
    p.add_argument("--dist", choices=["mixture", "chi2"], required=True)
    p.add_argument("--curve", choices=["g1", "g2", "none"], default="none")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", required=True)
    p.set_defaults(func=_cmd_synth)

    p = sub.add_parser("privatize", help="apply the Laplace mechanism to a CSV")
    p.add_argument("--input", required=True)
    p.add_argument("--column", default="x")
    p.add_argument("--clamp", action="store_true")
    common(p, epsilon_required=True)
    p.set_defaults(func=_cmd_privatize)

    for name in ("kde", "naive-kde", "deconv-kde"):
        p = sub.add_parser(name, help=f"{name} density estimate")
        p.add_argument("--input", required=True)
        p.add_argument("--column", default="x")
        p.add_argument("--bandwidth", default=None)
        p.add_argument("--grid-points", type=int, default=512)
        p.add_argument("--nonneg", action="store_true")
        common(p, epsilon_required=name != "kde")
        p.set_defaults(func=lambda a, _name=name: _cmd_density(a, _name))

    p = sub.add_parser("regress", help="kernel or baseline regression")
    p.add_argument("--input", required=True)
    p.add_argument("--x-col", default="x")
    p.add_argument("--y-col", default="y")
    p.add_argument("--model", choices=["kernel", "linear", "logistic"], default="kernel")
    p.add_argument("--mode", choices=["continuous", "binary"], default="continuous")
    p.add_argument("--bandwidth", default="cv")
    p.add_argument("--grid-points", type=int, default=200)
    common(p)
    p.set_defaults(func=_cmd_regress)

    p = sub.add_parser("cv", help="cross-validate the bandwidth")
    p.add_argument("--input", required=True)
    p.add_argument("--x-col", default="x")
    p.add_argument("--y-col", default="y")
    p.add_argument("--mode", choices=["continuous", "binary"], default="continuous")
    p.add_argument("--grid", default=None, help="min:max:count")
    common(p)
    p.set_defaults(func=_cmd_cv)

    p = sub.add_parser("sweep", help="epsilon sweep with baselines")
    p.add_argument("--input", required=True)
    p.add_argument("--x-col", default="x")
    p.add_argument("--y-col", default="y")
    p.add_argument("--epsilons", required=True, help="comma-separated")
    p.add_argument("--seeds", type=int, default=1)
    p.add_argument("--mode", choices=["continuous", "binary"], default="continuous")
    p.add_argument("--cv-subsample", type=int, default=None)
    common(p)
    p.set_defaults(func=_cmd_sweep)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ParameterError as exc:
        print(f"parameter error: {exc}", file=sys.stderr)
        return 2
    except DataError as exc:
        print(f"data error: {exc}", file=sys.stderr)
        return 3
    except NumericalError as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return 4


if __name__ == "__main__":
    sys.exit(main())
