"""Qubit-encoded simulation of collective emission from atoms in a discretized radiation bath."""
from .boson import annihilation_op, creation_op, number_op
from .engine import StateVector, build_plan, evolve, exact_evolve, init_state, trotter_step
from .errors import (
    CapacityError,
    ConfigError,
    ConstructionError,
    IntegrationError,
    InvalidArgumentError,
    NoCrossingError,
    SuperradError,
)
from .hamiltonian import SystemSpec, build_total, make_system
from .pauli import PauliSum, PauliTerm

__version__ = "0.1.0"

__all__ = [
    "CapacityError",
    "ConfigError",
    "ConstructionError",
    "IntegrationError",
    "InvalidArgumentError",
    "NoCrossingError",
    "PauliSum",
    "PauliTerm",
    "StateVector",
    "SuperradError",
    "SystemSpec",
    "annihilation_op",
    "build_plan",
    "build_total",
    "creation_op",
    "evolve",
    "exact_evolve",
    "init_state",
    "make_system",
    "number_op",
    "trotter_step",
]
