"""Offline runtime verification of multi-trace slices against interaction models."""

__version__ = "0.1.0"

from .engine import (
    AnalysisConfig,
    AnalysisReport,
    LoopActPolicy,
    Verdict,
    analysis_kind_accept,
    analysis_kind_prefix,
    analyze,
)
from .ir import Action, Signature, emit, receive
from .semantics import accepts_empty, execute, explore, frontier, membership, prune
from .traces import MultiTrace, Partition

__all__ = [
    "Action",
    "AnalysisConfig",
    "AnalysisReport",
    "LoopActPolicy",
    "MultiTrace",
    "Partition",
    "Signature",
    "Verdict",
    "accepts_empty",
    "analysis_kind_accept",
    "analysis_kind_prefix",
    "analyze",
    "emit",
    "execute",
    "explore",
    "frontier",
    "membership",
    "prune",
    "receive",
]
