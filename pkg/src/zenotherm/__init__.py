"""Temperature-induced Zeno subspaces of a three-level system in a bosonic bath.

Exact block-diagonal simulation of the thermal survival probability plus
numerical verification of the analytic bounds and threshold temperatures.
"""

from .bounds import (CEpsilon, EigenWindow, HypercubeThreshold,
                     HypersphereThreshold, PartitionMode, ThresholdReport,
                     alpha_of_eps, c_epsilon, chi_of_eps, eigenvalue_window,
                     geometric_factor, geometric_factor_stirling, n_epsilon,
                     overlap_lower_bound, partition_ratio, survival_floor,
                     threshold_hypercube, threshold_hypersphere,
                     threshold_report, threshold_single)
from .config import ExperimentConfig, parse_config, preset, serialize_config
from .errors import (BandStraddle, BudgetExceeded, ChiOutOfRange, ConfigError,
                     ConvergenceFailure, EpsOutOfRange, InadmissibleC,
                     NonpositiveTemperature, PlanTooLarge, ZenothermError,
                     ZeroCoupling)
from .evolution import (BlockSpectrum, block_survival_series, eigendecompose,
                        survival_amplitude)
from .model import (BandSide, BandStats, BathSpec, HermitianBlock,
                    SystemParams, band_stats, build_block)
from .thermal import (SurvivalCurve, TruncationPlan, boltzmann_weight,
                      plan_truncation, thermal_survival)
from . import verify

__all__ = [name for name in dir() if not name.startswith("_")]
__version__ = "0.1.0"
