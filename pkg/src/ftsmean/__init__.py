"""Mean inference for functional time series.

Long-run covariance kernel estimation for dependent curve sequences,
basis-projection eigensolving for integral covariance operators, and
two-sample mean-equality tests with Monte Carlo and chi-square
calibration, plus a seeded simulation and experiment harness.
"""

from .curves import (
    BasisSet,
    Curve,
    FunctionalSample,
    Grid,
    fourier_basis,
    inner_product,
    make_grid,
    read_curves_csv,
    resample,
    sample_mean,
    write_curves_csv,
)
from .eigen import EigenSystem, ProjectedOperator, project_surface, select_p, symmetric_eig
from .errors import (
    CurveCsvError,
    DegenerateEigenvalueError,
    DegenerateSpectrumError,
    GridMismatchError,
    InsufficientSampleError,
    InvalidLagError,
    NonstationaryKernelError,
)
from .longrun import (
    Bandwidth,
    Surface,
    WeightKernel,
    autocov_surface,
    bartlett_kernel,
    flat_top_kernel,
    iid_cov,
    longrun_cov,
    pooled_longrun,
    truncated_kernel,
)
from .power import ExperimentSpec, PowerTable, format_table, power_table_csv, run_experiment
from .simulate import (
    Far1Config,
    RngSeed,
    add_alternative_mean,
    brownian_bridge,
    brownian_sample,
    far1_sample,
    gaussian_far1_kernel,
)
from .twosample import (
    TestConfig,
    TestReport,
    projections,
    pvalue_chisq,
    pvalue_mc,
    run_two_sample_test,
    statistic_U,
    statistic_U1,
    statistic_U2,
)

__version__ = "0.1.0"

__all__ = [
    "BasisSet",
    "Bandwidth",
    "Curve",
    "CurveCsvError",
    "DegenerateEigenvalueError",
    "DegenerateSpectrumError",
    "EigenSystem",
    "ExperimentSpec",
    "Far1Config",
    "FunctionalSample",
    "Grid",
    "GridMismatchError",
    "InsufficientSampleError",
    "InvalidLagError",
    "NonstationaryKernelError",
    "PowerTable",
    "ProjectedOperator",
    "RngSeed",
    "Surface",
    "TestConfig",
    "TestReport",
    "WeightKernel",
    "add_alternative_mean",
    "autocov_surface",
    "bartlett_kernel",
    "brownian_bridge",
    "brownian_sample",
    "far1_sample",
    "flat_top_kernel",
    "format_table",
    "fourier_basis",
    "gaussian_far1_kernel",
    "iid_cov",
    "inner_product",
    "longrun_cov",
    "make_grid",
    "pooled_longrun",
    "power_table_csv",
    "project_surface",
    "projections",
    "pvalue_chisq",
    "pvalue_mc",
    "read_curves_csv",
    "resample",
    "run_experiment",
    "run_two_sample_test",
    "sample_mean",
    "select_p",
    "statistic_U",
    "statistic_U1",
    "statistic_U2",
    "symmetric_eig",
    "truncated_kernel",
    "write_curves_csv",
]
