"""Discrete additive noise that minimizes the leakage of quantized sensor data."""

from .designer import NoiseDesigner, UniformQuantizer
from .distributions import GaussianNoise, SensorModel, UniformNoise, empirical_pmf
from .estimators import Estimator, dpi_gap, mean_estimator
from .exceptions import (
    ComplexityError,
    DomainError,
    InfeasibleDistortion,
    ModelError,
    NotConverged,
)
from .info_theory import (
    JointPmf,
    convexity_parts,
    decoupled_mi,
    entropy,
    mi_gradient,
    mi_joint_direct,
    mi_objective,
    mutual_information,
    sum_pmf,
)
from .multi_obs import StackedModel, simulate_stream, stacked_mi
from .quantizer import Pmf, QuantizerSpec, levels, quantize, quantized_pmf
from .solver import (
    DesignProblem,
    NoiseDesign,
    SolverOptions,
    brute_force_solve,
    kkt_check,
    solve,
    tradeoff_sweep,
)

__version__ = "0.1.0"
