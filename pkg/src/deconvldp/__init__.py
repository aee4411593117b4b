"""Privacy-preserving density estimation and regression for numeric data.

Datasets bounded in a known box are privatized with the Laplace mechanism
under epsilon-local differential privacy; deconvoluting kernel estimators
then recover density and regression estimates from the noisy records.
"""

__version__ = "0.1.0"

from .bandwidth import CvConfig, CvResult, cv_select, default_grid
from .baselines import LinearModel, LogisticModel, baseline_metrics, logistic_fit, ols_fit
from .density import (
    EstimateGrid,
    deconv_kde,
    default_bandwidth,
    default_eval_grid,
    empirical_cf,
    ise,
    kde,
    naive_kde,
    nonneg_renormalize,
)
from .dataio import (
    ColumnSpec,
    IngestResult,
    SweepSpec,
    emit_plotdata,
    ingest_csv,
    run_sweep,
    write_dataset_csv,
    write_estimate,
)
from .errors import DataError, DeconvLdpError, NumericalError, ParameterError
from .kernels import (
    AdjustedKernel,
    Kernel,
    adjusted_value,
    adjusted_value_numeric,
    kernel_cf,
    kernel_value,
    laplace_cf,
)
from .privacy import (
    Dataset,
    PrivacyParams,
    SupportBox,
    laplace_scales,
    privatize,
    sample_laplace,
)
from .regression import LabeledDataset, RegressionModel, fit_metrics, nw_predict, nw_predict_loo
from .synthdata import SyntheticSpec, curve_value, make_regression_dataset, sample_inputs
