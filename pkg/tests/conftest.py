import numpy as np
import pytest
from scipy import integrate, stats

from deconvldp.synthdata import CHI2_SUPPORT, MIXTURE_SUPPORT, mixture_pdf_untruncated


@pytest.fixture(scope="session")
def truncated_mixture_pdf():
    """Quadrature-normalized truncated mixture density on [-3, 3]."""
    mass, _ = integrate.quad(lambda t: float(mixture_pdf_untruncated(t)), -3.0, 3.0)

    def pdf(x):
        x = np.asarray(x, dtype=float)
        inside = (x >= -3.0) & (x <= 3.0)
        return np.where(inside, mixture_pdf_untruncated(x) / mass, 0.0)

    return pdf


@pytest.fixture(scope="session")
def truncated_chi2_pdf():
    """Quadrature-normalized truncated chi-squared(3) density on [0, 3]."""
    dist = stats.chi2(3)
    mass = dist.cdf(3.0)

    def pdf(x):
        x = np.asarray(x, dtype=float)
        inside = (x >= 0.0) & (x <= 3.0)
        return np.where(inside, dist.pdf(np.clip(x, 0.0, 3.0)) / mass, 0.0)

    return pdf
