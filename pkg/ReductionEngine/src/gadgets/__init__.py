"""OuMv-to-graph constructions, one module per target problem."""

from .base import (DENSITY, DISTANCE, MATCHING_SIZE, QUERY_KINDS, ReductionDriver,
                   reference_answer, swap_edges)
from .layout import GadgetLayout, format_label
from .matching_gadgets import (MATCHING_VARIANTS, MatchingDriver, MatchingLayout,
                               PowerLawMatchingDriver, build_matching_const,
                               build_matching_expander, build_matching_powerlaw,
                               build_matching_varying, make_matching_driver)
from .stpath_gadgets import (ST_VARIANTS, ApproxParams, DistanceDriver, ForestLayout,
                             build_st_approx, build_st_const, build_st_expander,
                             build_st_powerlaw, build_st_varying, make_st_driver)
from .densest_gadgets import (DENSE_VARIANTS, DenseLayout, DensestDriver, DensityDecision,
                              build_dense_const, build_dense_expander, build_dense_powerlaw,
                              make_dense_driver, witness_audit)
from .partial_gadgets import (PARTIAL_VARIANTS, DecrementalDriver, IncrementalDriver,
                              IncrementalReplay, RoundState, advance_round_matching,
                              advance_round_st, build_decremental_matching,
                              build_decremental_st, make_partial_driver, reverse_to_incremental,
                              run_decremental)
from .power_law_host import PowerLawHost, build_power_law_host, embed

__all__ = [
    "DENSITY", "DISTANCE", "MATCHING_SIZE", "QUERY_KINDS", "ReductionDriver",
    "reference_answer", "swap_edges", "GadgetLayout", "format_label",
    "MATCHING_VARIANTS", "MatchingDriver", "MatchingLayout", "PowerLawMatchingDriver",
    "build_matching_const", "build_matching_expander", "build_matching_powerlaw",
    "build_matching_varying", "make_matching_driver",
    "ST_VARIANTS", "ApproxParams", "DistanceDriver", "ForestLayout", "build_st_approx",
    "build_st_const", "build_st_expander", "build_st_powerlaw", "build_st_varying",
    "make_st_driver",
    "DENSE_VARIANTS", "DenseLayout", "DensestDriver", "DensityDecision", "build_dense_const",
    "build_dense_expander", "build_dense_powerlaw", "make_dense_driver", "witness_audit",
    "PARTIAL_VARIANTS", "DecrementalDriver", "IncrementalDriver", "IncrementalReplay",
    "RoundState", "advance_round_matching", "advance_round_st", "build_decremental_matching",
    "build_decremental_st", "make_partial_driver", "reverse_to_incremental", "run_decremental",
    "PowerLawHost", "build_power_law_host", "embed",
]
