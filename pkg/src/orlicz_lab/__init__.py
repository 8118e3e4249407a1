"""orlicz_lab: numerical laboratory for Orlicz-space calculus, embeddings,
and monotone elliptic problems with L1 or measure right-hand sides.

Module map
----------
nfunction   convex growth functions: built-in families, convex conjugation,
            doubling statistics, index estimates, domination checks
fields      sampled scalar/vector fields on uniform 1-D and 2-D grids
norms       Luxemburg and Marcinkiewicz norms, modulars, rearrangements
embedding   dimensional transform, growth classification, level-set targets
operators   flux operators (potential, state-perturbed), validity checks
solver      finite-volume discretization, damped Newton solves, a priori
            tables, convergence studies, regularity verdicts
report      JSON/CSV/SVG artifact emission with reproducible bytes
verify      the acceptance criteria grouped into named suites
cli         the ``orlicz-lab`` command-line front end
"""

from . import errors
from .embedding import (
    FAST,
    SLOW,
    embedding_functions,
    growth_class,
    regularity_targets,
)
from .fields import SampledField
from .nfunction import (
    NFunction,
    check_nfunction,
    conjugate,
    delta2_stats,
    dominates_much,
    exp_conjugate,
    fenchel_young_check,
    from_spec,
    llogl,
    pathological_nfunction,
    power,
    simonenko_indices,
    t_exp_t,
    tabulated,
    to_spec,
    zygmund,
)
from .norms import (
    luxemburg_norm,
    marcinkiewicz_norm,
    modular,
    rearrange,
    weak_marcinkiewicz,
)
from .operators import (
    gradient_flux_operator,
    slow_companion,
    validate_operator,
    z_perturbed_operator,
)
from .solver import (
    AtomicMeasure,
    ProblemSpec,
    apriori_report,
    approximate_l1_data,
    convergence_study,
    data_sequence,
    load_problem,
    mollify_measure,
    refinement_stability,
    regularity_verdict,
    solve_approximate,
    uniqueness_experiment,
)
from .verify import run_criterion, run_suite

__version__ = "0.1.0"

__all__ = [
    "AtomicMeasure",
    "FAST",
    "NFunction",
    "ProblemSpec",
    "SLOW",
    "SampledField",
    "apriori_report",
    "approximate_l1_data",
    "check_nfunction",
    "conjugate",
    "convergence_study",
    "data_sequence",
    "delta2_stats",
    "dominates_much",
    "embedding_functions",
    "errors",
    "exp_conjugate",
    "fenchel_young_check",
    "from_spec",
    "gradient_flux_operator",
    "growth_class",
    "llogl",
    "load_problem",
    "luxemburg_norm",
    "marcinkiewicz_norm",
    "modular",
    "mollify_measure",
    "pathological_nfunction",
    "power",
    "rearrange",
    "refinement_stability",
    "regularity_targets",
    "regularity_verdict",
    "run_criterion",
    "run_suite",
    "simonenko_indices",
    "slow_companion",
    "solve_approximate",
    "t_exp_t",
    "tabulated",
    "to_spec",
    "uniqueness_experiment",
    "validate_operator",
    "weak_marcinkiewicz",
    "z_perturbed_operator",
    "zygmund",
]
