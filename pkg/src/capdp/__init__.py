"""Capacitated dynamic programming: knapsack, hop-budgeted paths, and the
concave convolutions that make both fast.

The package is organized by problem shape:

- :mod:`capdp.profiles` holds the shared value encoding (``BOTTOM``/``TOP``
  sentinels over int64 codes) and concavity checks.
- :mod:`capdp.smawk` and :mod:`capdp.concave_conv` are the structured
  building blocks: row maxima of totally monotone matrices and linear-time
  (max,+)/(min,+) convolution of concave sequences.
- :mod:`capdp.knapsack` and :mod:`capdp.unbounded` solve 0/1 and unbounded
  knapsack with a reference sweep plus the faster structured routes.
- :mod:`capdp.dag` and :mod:`capdp.monge` cover hop-budgeted best paths on
  node-weighted DAGs (Lagrangian search with certificates) and on
  edge-weighted graphs with the quadrangle inequality.
- :mod:`capdp.io` reads and writes the on-disk instance formats used by the
  ``capdp`` command line tool in :mod:`capdp.cli`.
"""

from .concave_conv import (
    conv_concave,
    conv_kstep_concave,
    sliding_window_max,
)
from .dag import (
    HopProfile,
    KnapsackDagBridge,
    LagrangianOutcome,
    LagrangianResult,
    NodeWeightedDag,
    PropertyPWitness,
    check_property_p,
    dp_hop_profile,
    knapsack_dag_oracle,
    knapsack_to_dag,
    knapsack_via_dag,
    probe_budget,
    separated_dp_oracle,
    solve_lagrangian,
    solve_sparse_separated,
)
from .errors import (
    CapdpError,
    ConcavityViolationError,
    InfeasibleError,
    NonIntegralError,
    NotConcaveError,
    NotTransitiveError,
    OracleDisagreementError,
    OverflowGuardError,
    ParseError,
    ScaleLimitError,
    ValidationError,
)
from .generators import (
    KNAPSACK_FAMILIES,
    default_capacity,
    gen_few_distinct,
    gen_gap_dag,
    gen_random_monge,
    gen_sequence,
    gen_small_values,
    gen_small_weights,
    gen_transitive_dag,
    gen_uncorrelated,
    gen_violation_dag,
    wrap_endpoints,
)
from .io import (
    InstanceFile,
    format_dag,
    format_items,
    format_monge,
    format_report,
    format_sequence,
    load_instance,
    parse_instance,
    profile_text,
)
from .knapsack import (
    KnapsackInstance,
    greedy_class_profile,
    min_weight_per_value,
    solve_knapsack_bellman,
    solve_knapsack_td,
    solve_knapsack_value_domain,
)
from .monge import (
    MongeDagOracle,
    canonical_path,
    gen_squared_monge,
    monge_all_k,
    monge_all_targets,
    monge_best_path,
    monge_dp_profile,
    monge_dp_targets,
)
from .profiles import (
    BOTTOM,
    TOP,
    ConcavityWitness,
    ValueProfile,
    check_concave,
    check_kstep_concave,
    naive_maxplus_conv,
    naive_minplus_conv,
)
from .rng import SplitMix64
from .smawk import MatrixOracle, is_monge, smawk_row_maxima
from .unbounded import (
    DensityChampion,
    UnboundedInstance,
    base_window,
    density_champion,
    solve_unbounded_doubling,
    solve_unbounded_dp,
    solve_unbounded_steinitz,
    solve_unbounded_value_domain,
)

__version__ = "0.1.0"

__all__ = [
    "BOTTOM",
    "TOP",
    "CapdpError",
    "ConcavityViolationError",
    "ConcavityWitness",
    "DensityChampion",
    "HopProfile",
    "InfeasibleError",
    "InstanceFile",
    "KNAPSACK_FAMILIES",
    "KnapsackDagBridge",
    "KnapsackInstance",
    "LagrangianOutcome",
    "LagrangianResult",
    "MatrixOracle",
    "MongeDagOracle",
    "NodeWeightedDag",
    "NonIntegralError",
    "NotConcaveError",
    "NotTransitiveError",
    "OracleDisagreementError",
    "OverflowGuardError",
    "ParseError",
    "PropertyPWitness",
    "ScaleLimitError",
    "SplitMix64",
    "UnboundedInstance",
    "ValidationError",
    "ValueProfile",
    "base_window",
    "canonical_path",
    "check_concave",
    "check_kstep_concave",
    "check_property_p",
    "conv_concave",
    "conv_kstep_concave",
    "default_capacity",
    "density_champion",
    "dp_hop_profile",
    "format_dag",
    "format_items",
    "format_monge",
    "format_report",
    "format_sequence",
    "gen_few_distinct",
    "gen_gap_dag",
    "gen_random_monge",
    "gen_sequence",
    "gen_small_values",
    "gen_small_weights",
    "gen_squared_monge",
    "gen_transitive_dag",
    "gen_uncorrelated",
    "gen_violation_dag",
    "greedy_class_profile",
    "is_monge",
    "knapsack_dag_oracle",
    "knapsack_to_dag",
    "knapsack_via_dag",
    "load_instance",
    "min_weight_per_value",
    "monge_all_k",
    "monge_all_targets",
    "monge_best_path",
    "monge_dp_profile",
    "monge_dp_targets",
    "naive_maxplus_conv",
    "naive_minplus_conv",
    "parse_instance",
    "probe_budget",
    "profile_text",
    "separated_dp_oracle",
    "sliding_window_max",
    "smawk_row_maxima",
    "solve_knapsack_bellman",
    "solve_knapsack_td",
    "solve_knapsack_value_domain",
    "solve_lagrangian",
    "solve_sparse_separated",
    "solve_unbounded_doubling",
    "solve_unbounded_dp",
    "solve_unbounded_steinitz",
    "solve_unbounded_value_domain",
    "wrap_endpoints",
]
