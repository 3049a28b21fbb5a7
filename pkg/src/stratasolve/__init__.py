"""Stable models via super dependency graph traversal."""

from .aas import Nogood, NodeCache, aas_solve, query_atom, solve_one, update_and_resolve
from .enumerators import all_stable1, all_stable2
from .firstorder import faas_solve, ground, parse_program
from .graphs import build_super_graph, is_stratified, omega_index
from .kb import KnowledgeBase, PartialInterpretation, Rule, parse_kb
from .models import ModelSet
from .semantics import brute_force_stable_models, is_stable

__version__ = "0.1.0"

__all__ = [
    "KnowledgeBase",
    "ModelSet",
    "NodeCache",
    "Nogood",
    "PartialInterpretation",
    "Rule",
    "aas_solve",
    "all_stable1",
    "all_stable2",
    "brute_force_stable_models",
    "build_super_graph",
    "faas_solve",
    "ground",
    "is_stable",
    "is_stratified",
    "omega_index",
    "parse_kb",
    "parse_program",
    "query_atom",
    "solve_one",
    "update_and_resolve",
]
