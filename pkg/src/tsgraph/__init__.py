"""Type Size coding of unlabeled Erdos-Renyi graphs, with rate analysis."""
from .analysis import (
    BernoulliModel,
    BoundCheckReport,
    RateReport,
    entropy,
    epsilon_rate_bracket,
    epsilon_rate_exact,
    q_inv,
    theoretical_rate_bound,
    varentropy,
)
from .counting import class_size_bounds, exact_count, lambda_approx, type_class_table
from .estimator import ErdosRenyiRate, TypeSizeCoder
from .graph6 import parse_graph6, write_graph6
from .graphs import ErModel, LabeledGraph, Structure, canonicalize, complement, pair_index, pair_of, sample_er
from .tscode import (
    Codebook,
    build_codebook,
    class_ordering,
    codeword_to_index,
    decode,
    encode,
    index_to_codeword,
    m_epsilon,
)

__version__ = "0.1.0"

__all__ = [
    "BernoulliModel", "BoundCheckReport", "Codebook", "ErModel", "ErdosRenyiRate", "LabeledGraph",
    "RateReport", "Structure", "TypeSizeCoder", "build_codebook", "canonicalize", "class_ordering",
    "class_size_bounds", "codeword_to_index", "complement", "decode", "encode", "entropy",
    "epsilon_rate_bracket", "epsilon_rate_exact", "exact_count", "index_to_codeword", "lambda_approx",
    "m_epsilon", "pair_index", "pair_of", "parse_graph6", "q_inv", "sample_er", "theoretical_rate_bound",
    "type_class_table", "varentropy", "write_graph6",
]
