"""Exact and simulated laws of a delayed two-player antagonistic game."""

__version__ = "0.1.0"

from .enums import DistributionKind, LawType, Provenance, Side, SimulationMode
from .models import DeterministicLaw, ErlangLaw, ExponentialLaw, GameParams, TransformQuery

__all__ = [
    "DeterministicLaw",
    "DistributionKind",
    "ErlangLaw",
    "ExponentialLaw",
    "GameParams",
    "LawType",
    "Provenance",
    "Side",
    "SimulationMode",
    "TransformQuery",
]
