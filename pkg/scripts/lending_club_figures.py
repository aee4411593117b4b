"""Optional reproduction of the Lending Club interest-rate figures.

The accepted-loans dataset is Kaggle-gated and is never downloaded here;
pass the path to the accepted-loans CSV yourself. Rows are filtered to loans
issued in 2010 (the filtered row count is printed so any divergence from the
expected 12,537 is visible). The input is the low-range FICO score mapped
through ln(fico - 600); its declared support runs from the minimum eligible
observed score to the FICO scale maximum of 850, i.e. up to ln(250). The
response is the interest rate in percent.

Reference values with pass bands of +/-15% each:
  - noiseless, h = 0.02: kernel MSE 4.42, linear MSE 4.61
  - epsilon = 5, h = 0.20: kernel MSE 5.70, linear MSE 7.11
The script also checks the sweep ordering property (kernel MSE <= linear MSE
at every tested epsilon), which is the part asserted by the acceptance suite
on synthetic data.

Run:  python scripts/lending_club_figures.py /path/to/accepted_2007_to_2018.csv
"""

import sys

import numpy as np
import pandas as pd

from deconvldp import (
    Kernel,
    LabeledDataset,
    RegressionModel,
    SupportBox,
    SweepSpec,
    fit_metrics,
    run_sweep,
)
from deconvldp.baselines import baseline_metrics, ols_fit
from deconvldp.privacy import Dataset, laplace_scales, privatize

BAND = 0.15
REFERENCE = {
    "noiseless kernel": 4.42,
    "noiseless linear": 4.61,
    "eps=5 kernel": 5.70,
    "eps=5 linear": 7.11,
}


def load(path):
    frame = pd.read_csv(
        path,
        usecols=["issue_d", "fico_range_low", "int_rate"],
        low_memory=False,
    )
    issued_2010 = frame["issue_d"].astype(str).str.contains("2010")
    frame = frame[issued_2010].dropna()
    rate = (
        frame["int_rate"].astype(str).str.rstrip("%").astype(float)
        if frame["int_rate"].dtype == object
        else frame["int_rate"].astype(float)
    )
    fico = frame["fico_range_low"].astype(float)
    keep = fico > 600
    print(f"2010 rows: {len(frame)} (expected near 12,537); eligible: {keep.sum()}")
    x = np.log(fico[keep].to_numpy() - 600.0)
    return LabeledDataset(x, rate[keep].to_numpy())


def report(label, mse):
    ref = REFERENCE[label]
    ok = abs(mse - ref) <= BAND * ref
    print(f"{label}: MSE {mse:.3f} (reference {ref}, +/-15%) {'PASS' if ok else 'FAIL'}")


def main():
    if len(sys.argv) < 2:
        sys.exit("usage: python scripts/lending_club_figures.py /path/to/accepted.csv")
    data = load(sys.argv[1])
    support = SupportBox(
        lower=np.array([float(data.inputs.min())]),
        upper=np.array([np.log(250.0)]),
    )
    kernel = Kernel("cauchy", 1)

    model = RegressionModel(
        data=data, kernel=kernel, bandwidth=0.02, scales=np.zeros(1)
    )
    report("noiseless kernel", fit_metrics(model, data)["mse"])
    report("noiseless linear", baseline_metrics(ols_fit(data), data)["mse"])

    params = laplace_scales(support, 5.0)
    z = privatize(Dataset(records=data.inputs), params, seed=0, clamp=True)
    zdata = LabeledDataset(z.records, data.responses, privatized=True)
    model = RegressionModel(
        data=zdata, kernel=kernel, bandwidth=0.20, scales=params.scales
    )
    report("eps=5 kernel", fit_metrics(model, zdata)["mse"])
    report("eps=5 linear", baseline_metrics(ols_fit(zdata), zdata)["mse"])

    spec = SweepSpec(epsilons=(1.0, 2.0, 5.0, 10.0), seeds=1)
    rows = run_sweep(spec, data, support, kernel=kernel, cv_subsample=3000)
    by_eps = {}
    for r in rows:
        if np.isfinite(r["epsilon"]):
            by_eps.setdefault(r["epsilon"], {})[r["estimator"]] = r["value"]
    ordered = all(v["kernel"] <= v["linear"] for v in by_eps.values())
    print(f"sweep ordering (kernel <= linear at every epsilon): "
          f"{'PASS' if ordered else 'FAIL'}")


if __name__ == "__main__":
    main()
