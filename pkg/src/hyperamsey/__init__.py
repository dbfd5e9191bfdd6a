"""Asymmetric Ramsey properties of random uniform hypergraphs, at desk scale."""

from .constructions import lifted_triangle, tight_cycle, tight_path
from .density import m, m_k, m_k_asym
from .hypercore import Hypergraph, new_hypergraph
from .ramsey import arrow, colour, validate_colouring

__all__ = [
    "Hypergraph",
    "arrow",
    "colour",
    "lifted_triangle",
    "m",
    "m_k",
    "m_k_asym",
    "new_hypergraph",
    "tight_cycle",
    "tight_path",
    "validate_colouring",
]
__version__ = "0.1.0"
