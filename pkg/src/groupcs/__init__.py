"""Group-sparse compressed sensing toolkit."""
from .bounds import BoundReport, bound_coefficients, compressibility_threshold, conventional_constants
from .constants import NormConstants, closed_form_constants
from .decomposition import SparseDecomposition, optimal_decomposition, sparsity_index
from .group_model import (
    GroupKSparseSet,
    GroupPartition,
    enumerate_gks,
    is_group_k_sparse,
    new_partition,
    singleton_partition,
    uniform_partition,
)
from .grip import GripReport, grip_constant, rip_constant
from .harness import ExperimentConfig, ExperimentReport, reproduce_section6_table, run_experiment
from .kernels import BACKEND
from .norms import NormSpec, eval_norm, parse_norm
from .sampling import SamplingPlan, generate_matrix, sampling_plan
from .solver import RecoveryProblem, RecoveryResult, SolverOptions, prox_penalty, recover

__version__ = "0.1.0"

__all__ = [
    "BACKEND", "BoundReport", "ExperimentConfig", "ExperimentReport", "GripReport", "GroupKSparseSet",
    "GroupPartition", "NormConstants", "NormSpec", "RecoveryProblem", "RecoveryResult", "SamplingPlan",
    "SolverOptions", "SparseDecomposition", "bound_coefficients", "closed_form_constants",
    "compressibility_threshold", "conventional_constants", "enumerate_gks", "eval_norm",
    "generate_matrix", "grip_constant", "is_group_k_sparse", "new_partition", "optimal_decomposition",
    "parse_norm", "prox_penalty", "recover", "reproduce_section6_table", "rip_constant",
    "run_experiment", "sampling_plan", "singleton_partition", "sparsity_index", "uniform_partition",
]
