"""Proximal point methods for nonsmooth quasar-convex objectives."""

from .checker import (
    ViolationReport,
    check_diff_characterization,
    check_quadratic_growth,
    check_quasar_inequality,
    check_supercoercive,
    check_trace_linear,
    check_trace_sublinear,
    iteration_bound_quasar,
    iteration_bound_strong,
    theoretical_rate,
)
from .core import (
    BoxConstraint,
    DomainError,
    KinkSphere,
    ObjectiveSpec,
    ParameterError,
    QuasarCertificate,
    finite_diff_gradient,
    project_box,
)
from .experiments import BatchReport, ExperimentPlan, generate_instances, run_cell, run_plan
from .functions import (
    HomogeneousParams,
    RandomFamilyParams,
    make_example1,
    make_example2,
    q_alpha_kappa,
    q_infimum,
    strong_modulus,
    theta_alpha,
    theta_infimum,
)
from .ppa import PpaConfig, SolverTrace, run_ppa, select_iterate
from .prox import ProxConfig, ProxResult, prox, prox_oracle_grid, prox_residual, ssn_subsolve
from .ssn import SsnConfig, run_ssn

__version__ = "0.1.0"
