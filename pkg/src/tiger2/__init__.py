"""Object model, validation and format conversion for <tiger2/> syntactic
annotation graphs."""
from .declarations import (DeclarationRegistry, Diagnostic, FeatureDecl, ValueDecl,
                           applicable, register, validate_corpus)
from .model import (UNTYPED, Corpus, Edge, Graph, Node, NodeKind, NodeLookupError, Segment,
                    children, detect_cycles, extract_layer, in_edges, is_discontinuous,
                    node_lookup, out_edges, stats, structurally_equal, terminal_order,
                    yield_of)
from .xmlio import ParseOptions, SerializeOptions, parse_tiger2, serialize_tiger2

__version__ = "0.1.0"

__all__ = [
    "UNTYPED", "Corpus", "DeclarationRegistry", "Diagnostic", "Edge", "FeatureDecl",
    "Graph", "Node", "NodeKind", "NodeLookupError", "ParseOptions", "Segment",
    "SerializeOptions", "ValueDecl", "applicable", "children", "detect_cycles",
    "extract_layer", "in_edges", "is_discontinuous", "node_lookup", "out_edges",
    "parse_tiger2", "register", "serialize_tiger2", "stats", "structurally_equal",
    "terminal_order", "validate_corpus", "yield_of",
]
