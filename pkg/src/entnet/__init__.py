"""entnet: optimal entanglement swapping and entanglement percolation in pure-state networks."""

from .errors import InfeasibleRegimeError
from .states import (
    SINGLET,
    PureState,
    TwoQubitVector,
    concurrence,
    distill_pair,
    double_state_scp,
    scp,
)
from .measurement import (
    MagicBasisVector,
    OutcomeEnsemble,
    ProbInterval,
    ProjectiveMeasurement,
    SwapOutcome,
    bell_basis,
    bell_from_probabilities,
    from_magic_coords,
    magic_coords,
    prob_interval,
    swap,
    xz_basis,
    zz_basis,
)
from .merit import (
    MeritReport,
    SquarePlan,
    TwoRepeaterPlan,
    merits,
    one_repeater_max_concurrence,
    one_repeater_max_scp,
    one_repeater_max_wce,
    square_bell_limit,
    square_numeric_scp,
    square_plan,
    square_singlet_threshold,
    two_repeater_bell_plan,
    two_repeater_numeric_scp,
    window_bounds,
)
from .chain import (
    ChainSpec,
    ZzWalkState,
    decay_rate,
    enumerate_chain,
    scp_zz_closed_form,
    strategy_scp,
    zz_walk,
)
from .recursion import (
    FixedPointReport,
    RecursionMap,
    analyze,
    centipede_step,
    diamond_step,
    make_map,
    threshold,
    tree_step,
)
from .percolation import (
    DoublingReport,
    LatticeGraph,
    TrialStats,
    asymmetric_triangular_lattice,
    classical_threshold,
    doubling_comparison,
    honeycomb_lattice,
    run_percolation,
    square_lattice,
    strategy_thresholds,
    tau_estimate,
    transform_asymmetric_triangular,
    transform_honeycomb_to_triangular,
    transform_square_doubling,
    triangular_lattice,
)

__all__ = [
    "InfeasibleRegimeError",
    "SINGLET",
    "PureState",
    "TwoQubitVector",
    "concurrence",
    "distill_pair",
    "double_state_scp",
    "scp",
    "MagicBasisVector",
    "OutcomeEnsemble",
    "ProbInterval",
    "ProjectiveMeasurement",
    "SwapOutcome",
    "bell_basis",
    "bell_from_probabilities",
    "from_magic_coords",
    "magic_coords",
    "prob_interval",
    "swap",
    "xz_basis",
    "zz_basis",
    "MeritReport",
    "SquarePlan",
    "TwoRepeaterPlan",
    "merits",
    "one_repeater_max_concurrence",
    "one_repeater_max_scp",
    "one_repeater_max_wce",
    "square_bell_limit",
    "square_numeric_scp",
    "square_plan",
    "square_singlet_threshold",
    "two_repeater_bell_plan",
    "two_repeater_numeric_scp",
    "window_bounds",
    "ChainSpec",
    "ZzWalkState",
    "decay_rate",
    "enumerate_chain",
    "scp_zz_closed_form",
    "strategy_scp",
    "zz_walk",
    "FixedPointReport",
    "RecursionMap",
    "analyze",
    "centipede_step",
    "diamond_step",
    "make_map",
    "threshold",
    "tree_step",
    "DoublingReport",
    "LatticeGraph",
    "TrialStats",
    "asymmetric_triangular_lattice",
    "classical_threshold",
    "doubling_comparison",
    "honeycomb_lattice",
    "run_percolation",
    "square_lattice",
    "strategy_thresholds",
    "tau_estimate",
    "transform_asymmetric_triangular",
    "transform_honeycomb_to_triangular",
    "transform_square_doubling",
    "triangular_lattice",
]

__version__ = "0.1.0"
