"""Multi-stakeholder qualitative preference queries."""
from .direct import eval_direct
from .engines import ENGINES, evaluate
from .formats import parse_graph, parse_profile
from .graph import BOTTOM, ExplicitGraph, LazyGraph
from .model import PreferenceProfile, VariableSchema
from .query import SemanticsMode, parse_query
from .translate import translate

__all__ = [
    "BOTTOM", "ENGINES", "ExplicitGraph", "LazyGraph", "PreferenceProfile",
    "SemanticsMode", "VariableSchema", "eval_direct", "evaluate", "parse_graph",
    "parse_profile", "parse_query", "translate",
]
