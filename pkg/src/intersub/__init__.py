"""Exact intersubjectivity, sharpness and extremality computations for polytope GPTs."""

from .metrics import (
    DegreeReport,
    cis_degree,
    classical_degree,
    coin_toss_degree,
    intersubjectivity_degree,
    is_elementwise_sharp,
    is_extremal,
    is_sharp_effect,
    sharpness_degree,
)
from .model import Effect, GuardError, Measurement, OutcomePartition, StateSpace

__version__ = "0.1.0"

__all__ = [
    "DegreeReport",
    "Effect",
    "GuardError",
    "Measurement",
    "OutcomePartition",
    "StateSpace",
    "cis_degree",
    "classical_degree",
    "coin_toss_degree",
    "intersubjectivity_degree",
    "is_elementwise_sharp",
    "is_extremal",
    "is_sharp_effect",
    "sharpness_degree",
]
