"""Static enums for delayedgame."""

from enum import Enum


class LawType(str, Enum):
    """Distribution family of the observation inter-arrival time."""

    EXPONENTIAL = "exponential"
    DETERMINISTIC = "deterministic"
    ERLANG = "erlang"


class SimulationMode(str, Enum):
    """How the simulator produces casualties per observation window."""

    INTERVAL = "interval"  # Poisson counts given the window length
    EVENT = "event"  # explicit attack epochs


class DistributionKind(str, Enum):
    """Kind of a distribution table."""

    PMF = "pmf"
    PDF = "pdf"


class Provenance(str, Enum):
    """Where the values of a distribution table come from."""

    ANALYTIC = "analytic"
    NUMERIC = "numeric"
    EMPIRICAL = "empirical"


class Side(str, Enum):
    """Player whose casualties are reported."""

    A = "A"
    B = "B"
