"""Discrete Morse theory on independence complexes of circulant bipartite graphs."""

from .complex import Complex, independence_complex
from .errors import BudgetExceededError, NotAcyclicError, UnknownFaceError
from .graphs import (
    Graph,
    Vertex,
    are_isomorphic,
    build_complete,
    build_complete_bipartite,
    build_cycle,
    build_gmd,
    categorical_product,
)
from .homology import HomologyProfile, IntegerMatrix, boundary_matrix, reduced_homology, smith_normal_form
from .homotopy import HomotopyPrediction
from .morse import (
    MorseChainComplex,
    MorseMatching,
    infer_wedge,
    morse_chain_complex,
    sequential_element_matching,
    verify_acyclic,
    verify_partial_matching,
)
from .theory import InstanceParams, kozlov_predicted, predicted_critical_cells, predicted_homotopy

__all__ = [
    "BudgetExceededError",
    "Complex",
    "Graph",
    "HomologyProfile",
    "HomotopyPrediction",
    "InstanceParams",
    "IntegerMatrix",
    "MorseChainComplex",
    "MorseMatching",
    "NotAcyclicError",
    "UnknownFaceError",
    "Vertex",
    "are_isomorphic",
    "boundary_matrix",
    "build_complete",
    "build_complete_bipartite",
    "build_cycle",
    "build_gmd",
    "categorical_product",
    "independence_complex",
    "infer_wedge",
    "kozlov_predicted",
    "morse_chain_complex",
    "predicted_critical_cells",
    "predicted_homotopy",
    "reduced_homology",
    "sequential_element_matching",
    "smith_normal_form",
    "verify_acyclic",
    "verify_partial_matching",
]
