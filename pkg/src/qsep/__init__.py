"""Separability analysis of bipartite states through entanglement-breaking channels."""

__version__ = "0.1.0"

from .channels import (
    DepolarizingChannel,
    HolevoChannel,
    KrausChannel,
    TracePreservation,
    apply_id_tensor,
    ebc_from_decomposition,
    is_trace_preserving,
    normalized_ebc_from_decomposition,
    wavepacket_reduction,
)
from .criteria import Outcome, Verdict
from .oracle import certified_verdict, oracle_separable
from .states import BipartiteState, PureState, SeparableDecomposition, assemble

__all__ = [
    "BipartiteState",
    "DepolarizingChannel",
    "HolevoChannel",
    "KrausChannel",
    "Outcome",
    "PureState",
    "SeparableDecomposition",
    "TracePreservation",
    "Verdict",
    "apply_id_tensor",
    "assemble",
    "certified_verdict",
    "ebc_from_decomposition",
    "is_trace_preserving",
    "normalized_ebc_from_decomposition",
    "oracle_separable",
    "wavepacket_reduction",
]
