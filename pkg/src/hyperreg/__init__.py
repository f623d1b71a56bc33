"""Regular substructures in linear uniform hypergraphs: exact oracles,
randomized collision and sunflower searches, extremal constructions and
surface immersions."""

from .errors import BudgetExhausted, HypergraphError
from .hypercore import (
    ColouredGraph,
    EvenCertificate,
    Hypergraph,
    LinearHypergraph,
    RegularCertificate,
    TwoRegularColouredCertificate,
    check_certificate,
    parse_hypergraph,
    serialize_hypergraph,
)
from .oracles import OracleBudget, find_even_subhypergraph, find_r_regular_exact, hom_cycle_count

__version__ = "0.1.0"

__all__ = [
    "BudgetExhausted",
    "ColouredGraph",
    "EvenCertificate",
    "Hypergraph",
    "HypergraphError",
    "LinearHypergraph",
    "OracleBudget",
    "RegularCertificate",
    "TwoRegularColouredCertificate",
    "check_certificate",
    "find_even_subhypergraph",
    "find_r_regular_exact",
    "hom_cycle_count",
    "parse_hypergraph",
    "serialize_hypergraph",
]
