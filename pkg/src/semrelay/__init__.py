"""Rate optimization for a two-hop text link with a semantic-decoding relay.

The first hop carries learned semantic symbols whose fidelity is summarized
by a logistic similarity model; the second hop is conventional bit
transmission. The package jointly optimizes relay placement and the
bandwidth split between the hops, and ships an exhaustive-search oracle
plus baseline schemes for verification.
"""

from semrelay.model import (
    DEFAULT_ALPHA_FLOOR,
    TOL_EQ,
    DesignPoint,
    SigmoidFit,
    SystemParams,
    bit_rate_ru,
    effective_rate,
    max_semantic_bandwidth,
    min_snr_threshold_db,
    semantic_bit_rate,
    semantic_rate,
    semantic_similarity,
    snr_br_db,
)
from semrelay.bounds import LocalPoint
from semrelay.penalty import PenaltyConfig, SolveReport, run, violation
from semrelay.baselines import (
    GridSpec,
    df_relay_rate,
    df_search,
    equal_bandwidth_search,
    fixed_placement_search,
    oracle_search,
)

__all__ = [
    "DEFAULT_ALPHA_FLOOR",
    "TOL_EQ",
    "DesignPoint",
    "GridSpec",
    "LocalPoint",
    "PenaltyConfig",
    "SigmoidFit",
    "SolveReport",
    "SystemParams",
    "bit_rate_ru",
    "df_relay_rate",
    "df_search",
    "effective_rate",
    "equal_bandwidth_search",
    "fixed_placement_search",
    "max_semantic_bandwidth",
    "min_snr_threshold_db",
    "oracle_search",
    "run",
    "semantic_bit_rate",
    "semantic_rate",
    "semantic_similarity",
    "snr_br_db",
    "violation",
]
