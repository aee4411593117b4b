"""End-to-end synthetic privacy sweep, exercising the CLI pipeline.

Generates a g2 regression dataset on the truncated mixture design, then runs
the epsilon sweep (kernel regression with CV bandwidth vs the linear
baseline) and writes tidy plot data plus a manifest.

Run:  python scripts/run_synthetic_sweep.py [outdir]
"""

import sys
from pathlib import Path

from deconvldp.cli import main as cli

outdir = Path(sys.argv[1] if len(sys.argv) > 1 else "sweep_output")
data_csv = outdir / "g2_data.csv"

cli(
    [
        "synth", "--dist", "mixture", "--curve", "g2",
        "--n", "5000", "--seed", "0", "--out", str(data_csv),
    ]
)
cli(
    [
        "sweep", "--input", str(data_csv), "--support=-3:3",
        "--epsilons", "0.5,1,2,5,10", "--seeds", "3",
        "--cv-subsample", "2500", "--out", str(outdir),
    ]
)
print(f"sweep results in {outdir}/sweep.csv")
