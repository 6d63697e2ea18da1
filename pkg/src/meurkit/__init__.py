"""Variance uncertainty bounds built from mutually exclusive physical states.

The core objects are :class:`QuantumState`, :class:`Observable` and
:class:`Meps` (a unit vector orthogonal to the system state). Every bound
returns a :class:`BoundReport` comparing its value with the quantity it
bounds.
"""

from .bounds import (
    BoundReport,
    ExclusionOperator,
    WeightParameter,
    aligned_exclusion_operator,
    amended_schroedinger_bound,
    amended_schroedinger_g,
    amended_schroedinger_h,
    corollary1_bound,
    corollary2_bound,
    f_factor,
    hermitian_variant_bound,
    meur_bound,
    multi_meur_bound,
    optimal_meps_exclusion,
    remark1_bound,
    robertson,
    schroedinger,
    theorem5_bound,
    tropical_sum,
    validate_exclusion_operator,
    weighted_sum_l1,
    weighted_sum_l2,
    young_weighted_product,
)
from .errors import *  # noqa: F401,F403
from .meps import (
    Meps,
    great_circle,
    optimal_meps_anticommutator,
    optimal_meps_product,
    orthogonal_meps,
    project_and_normalize,
    sample_meps,
)
from .optimize import (
    LambdaSearchConfig,
    LambdaOptimum,
    SweepSpec,
    SweepTable,
    best_tropical_bound,
    evaluate_selector,
    maximize_over_lambda,
    parse_selector,
    run_sweep,
)
from .qcore import (
    Observable,
    PairStatistics,
    QuantumState,
    anticommutator,
    commutator,
    expectation,
    hatted_image,
    pair_statistics,
    variance,
)
from .scenarios import (
    Scenario,
    builtin_scenario,
    load_scenario,
    paper_4dim_scenario,
    pauli_scenario,
    resolve_scenario,
    save_scenario,
    spin1_scenario,
)

__version__ = "0.1.0"
