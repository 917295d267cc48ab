"""Critical percolation laboratory on products of regular trees.

Exact combinatorics (restricted triangle diagrams, boundary and level
identities) next to seeded Monte Carlo (growth, connectivity, particle-tree
checks, invasion estimates of the critical curve) on T x T and T x Z.
"""

__version__ = "0.1.0"

from .diagrams import (brute_triangle, level_sum_identity, offpointa_check,
                       open_triangle, open_triangle_mixed, path_profile_count,
                       reduced_triangle)
from .estimators import (connection_prob_class, connection_prob_table,
                         estimate_G, extrinsic_ballisticity, moment_tail_check,
                         subcritical_stability)
from .invasion import critical_curve, invade
from .percolation import Config, explore
from .schramm import (SchrammParams, connection_vs_2_over_m, grow,
                      invariance_test, return_probability,
                      transience_threshold, w_root_degree)
from .trees import (ProductOfTrees, TreeCrossLine, TreeGraph, make_graph,
                    sphere_size, tree_distance)

__all__ = [
    "__version__",
    "Config",
    "ProductOfTrees",
    "SchrammParams",
    "TreeCrossLine",
    "TreeGraph",
    "brute_triangle",
    "connection_prob_class",
    "connection_prob_table",
    "connection_vs_2_over_m",
    "critical_curve",
    "estimate_G",
    "explore",
    "extrinsic_ballisticity",
    "grow",
    "invade",
    "invariance_test",
    "level_sum_identity",
    "make_graph",
    "moment_tail_check",
    "offpointa_check",
    "open_triangle",
    "open_triangle_mixed",
    "path_profile_count",
    "reduced_triangle",
    "return_probability",
    "sphere_size",
    "subcritical_stability",
    "transience_threshold",
    "tree_distance",
    "w_root_degree",
]
