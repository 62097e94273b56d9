"""hurstlab: Hurst exponent estimation from non-decimated wavelet spectra.

Median-based spectral-slope estimators (medl, medla) next to the classic
log-mean-energy and mid-energy baselines, with exact fractional Gaussian
noise synthesis, the supporting sampling theory, and a reproducible Monte
Carlo harness.
"""

from .asymptotics import (
    A_CONST,
    PHI_INV_3_4,
    Q_CONST,
    NormalityReport,
    TheoreticalLaw,
    hurst_sampling_law,
    medl_median_variance,
    medl_population_median,
    medla_median_variance,
    medla_population_median,
    normality_diagnostics,
)
from .estimators import (
    HurstEstimate,
    LevelRange,
    Method,
    PairSamplePlan,
    SpectrumPoint,
    estimate_hurst,
    medl_level_stat,
    medla_level_stat,
    regress_spectrum,
    sample_admissible_pairs,
    soltani_level_stat,
    traditional_level_stat,
)
from .exceptions import HurstLabError
from .filters import WaveletFilter, available_filters, get_filter
from .sigio import read_signal, write_report, write_signal
from .simharness import (
    ExperimentConfig,
    MethodSummary,
    SimulationReport,
    compare_methods,
    run_experiment,
)
from .synthesis import FgnSpec, Signal, fgn_autocovariance, fgn_to_fbm, generate_fgn
from .transform import (
    DwtDecomposition,
    NdwtDecomposition,
    dwt,
    level_acf,
    level_convention,
    ndwt,
)

__version__ = "0.1.0"

__all__ = [
    "__version__",
    "A_CONST",
    "PHI_INV_3_4",
    "Q_CONST",
    "DwtDecomposition",
    "ExperimentConfig",
    "FgnSpec",
    "HurstEstimate",
    "HurstLabError",
    "LevelRange",
    "Method",
    "MethodSummary",
    "NdwtDecomposition",
    "NormalityReport",
    "PairSamplePlan",
    "Signal",
    "SimulationReport",
    "SpectrumPoint",
    "TheoreticalLaw",
    "WaveletFilter",
    "available_filters",
    "compare_methods",
    "dwt",
    "estimate_hurst",
    "fgn_autocovariance",
    "fgn_to_fbm",
    "generate_fgn",
    "get_filter",
    "hurst_sampling_law",
    "level_acf",
    "level_convention",
    "medl_level_stat",
    "medl_median_variance",
    "medl_population_median",
    "medla_level_stat",
    "medla_median_variance",
    "medla_population_median",
    "ndwt",
    "normality_diagnostics",
    "read_signal",
    "regress_spectrum",
    "run_experiment",
    "sample_admissible_pairs",
    "soltani_level_stat",
    "traditional_level_stat",
    "write_report",
    "write_signal",
]
