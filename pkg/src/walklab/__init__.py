"""walklab: continuous-time random walks with generator-dependent rates on
finite groups, Coxeter systems, free products, and rays — exact transition
calculations, monotonicity checks, Monte Carlo, and counterexample search.
"""

__version__ = "0.1.0"

from .errors import (  # noqa: F401
    BracketFailure,
    BudgetExhausted,
    CapExceeded,
    ConfigError,
    DuplicateGenerators,
    EmptyGenerators,
    NotGenerating,
    SingularSystem,
    ToleranceUnachievable,
    TooLarge,
    UnsupportedFamily,
    UnsupportedType,
    WalklabError,
)
from .groups import (  # noqa: F401
    CayleyGraph,
    FiniteGroup,
    GeneratorSet,
    Permutation,
    RateAssignment,
    builtin_group,
    cayley_graph,
    direct_product,
    generate_group,
    trivial_group,
)
from .coxeter import (  # noqa: F401
    BruhatOrder,
    CoxeterMatrix,
    CoxeterRealization,
    Wall,
    all_walls,
    bruhat_order,
    coxeter_group,
    dihedral_matrix,
    reflections,
    type_a_matrix,
    type_b_matrix,
    verify_wall_axioms,
    wall_of_edge,
)
from .ctmc import (  # noqa: F401
    Distribution,
    MajorizationOrder,
    MajorizationVerdict,
    RateGraph,
    discrete_coin_distribution,
    expected_occupation,
    hitting_laplace,
    lp_distance_to_uniform,
    majorizes,
    refresh_operator,
    restricted_survival,
    stationarity_metrics,
    timed_refresh_distribution,
    transition_distribution,
    wall_crossing_cdf,
)
from .ray import (  # noqa: F401
    KMSpectrum,
    LineRates,
    RayRates,
    km_crosscheck,
    km_monotonicity,
    km_spectrum,
    line_experiments,
    line_return_probability_scan,
    profile_checks,
    rate_sensitivity,
    ray_distribution,
    regime_ratio_experiment,
)
from .speed import (  # noqa: F401
    SpeedSolution,
    free_coxeter_speed,
    product_speed_check,
    tree_speed_closed_form,
)
from .simulate import (  # noqa: F401
    DominanceResult,
    FreeProductGroup,
    SimConfig,
    SpeedEstimate,
    TrajectorySummary,
    dominance_test,
    endpoint_chi_square,
    multiply_normal_form,
    occupation_samples,
    simulate_walk,
    speed_mc,
)
from .search import (  # noqa: F401
    FoundExample,
    SearchConfig,
    catalog_reproductions,
    p_increase_interval,
    perturb_metric_delta,
    random_search,
    reverify,
)
