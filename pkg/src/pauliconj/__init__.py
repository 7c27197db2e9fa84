"""Pauli-conjugation noise tailoring for small stabilizer codes.

Computes exact effective logical channels of [[n,1]] stabilizer codes under
coherent Z-rotation noise, searches for the best Pauli conjugation scheme via
symmetry-reduced twirl sets, and quantifies the gain over twirling through
fidelity sweeps, gate-error robustness, concatenated thresholds and
multi-cycle dynamics.
"""

__version__ = "0.1.0"

from .channel import (
    SyndromeDecomposition,
    avg_fidelity,
    channel_fidelity,
    effective_logical_channel,
    syndrome_decomposition,
    twirled_channel,
)
from .codes import StabilizerCode, build_decoder, build_error_generators, registry, syndrome
from .concatenation import ZChannel, find_threshold, iterate_levels, logical_map
from .multiround import (
    coherent_fidelity_k,
    dephasing_fidelity_k,
    logical_twirl_sim,
    random_walk_channel,
)
from .pauli import PauliOp, commutes, compose, is_independent, span_of, weight
from .tailoring import (
    EquivClass,
    TwirlSet,
    ZNoiseSupport,
    build_twirl_set,
    default_classes,
    equivalence_classes,
    reduce_generators,
    search_optimal,
)

__all__ = [
    "PauliOp",
    "StabilizerCode",
    "SyndromeDecomposition",
    "TwirlSet",
    "EquivClass",
    "ZChannel",
    "ZNoiseSupport",
    "avg_fidelity",
    "build_decoder",
    "build_error_generators",
    "build_twirl_set",
    "channel_fidelity",
    "coherent_fidelity_k",
    "commutes",
    "compose",
    "default_classes",
    "dephasing_fidelity_k",
    "effective_logical_channel",
    "equivalence_classes",
    "find_threshold",
    "is_independent",
    "iterate_levels",
    "logical_map",
    "logical_twirl_sim",
    "random_walk_channel",
    "reduce_generators",
    "registry",
    "search_optimal",
    "span_of",
    "syndrome",
    "syndrome_decomposition",
    "twirled_channel",
    "weight",
]
