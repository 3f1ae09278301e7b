# pep8: noqa
from lipsolve._version import __version__
from lipsolve.builders import (
    binomial_mle_map,
    build_binomial_model,
    build_example1_model,
    build_example2_model,
    example2_predictive,
)
from lipsolve.dominator import (
    DominanceReport,
    Domination,
    dominance_check,
    dominating_predictive,
)
from lipsolve.exceptions import *
from lipsolve.functionals import (
    RiskProfile,
    bayes_risk,
    chain_rule_check,
    conditional_mutual_information,
    d_q,
    dq_gradient,
    kl_risk,
    lip_gradient,
    risk_profile,
)
from lipsolve.io import (
    load_model,
    load_predictive,
    load_prior,
    save_model,
    save_predictive,
    save_prior,
)
from lipsolve.model import (
    ModelTable,
    OutcomeSpace,
    PredictiveTable,
    Prior,
    ValidationReport,
    ZeroPattern,
    mix,
    point_mass,
    restrict_model,
    uniform_prior,
    validate_model,
    zero_pattern,
)
from lipsolve.predictive import (
    AnnealingSchedule,
    LimitReport,
    bayes_predictive,
    limit_predictive,
    plug_in_predictive,
    verify_limit_by_annealing,
)
from lipsolve.reference import (
    is_mirror_symmetric,
    jeffreys_histogram,
    k_reference_prior,
    mirror_prior,
    reference_prior,
    symmetrize,
    total_variation,
)
from lipsolve.solver import (
    Certificate,
    MinimaxPredictive,
    SolverConfig,
    SolverResult,
    anneal_lip,
    certificate,
    minimax_predictive,
    solve_lip,
)

__license__ = "MIT"
__package__ = "lipsolve"
