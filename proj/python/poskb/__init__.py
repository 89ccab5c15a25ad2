"""Stratified possibilistic knowledge bases compiled from density trees.

Exact rationals cross the extension boundary as ``n/d`` strings; the
helpers here convert them to :class:`fractions.Fraction`.
"""

from fractions import Fraction

from ._core import (  # noqa: F401
    DensityTree,
    Error,
    KnowledgeBase,
    compile_tree,
    equal_possibility,
    learn_csv,
    load_kb,
)
from . import _core

__all__ = [
    "DensityTree",
    "Error",
    "KnowledgeBase",
    "compile_tree",
    "equal_possibility",
    "learn_csv",
    "load_kb",
    "entries",
    "map_query",
    "marginal",
    "possibility",
    "top_theta",
    "validate",
]


def entries(kb):
    """Knowledge base entries as ``(Fraction, formula_text)`` pairs."""
    return [(Fraction(w), f) for w, f in kb.entries]


def possibility(kb, world_bits):
    """Possibility of the world encoded by ``world_bits`` (atom 0 = bit 0)."""
    return Fraction(kb.possibility(world_bits))


def validate(kb, max_atoms=20):
    """Sum of possibilities over all worlds (1 for a distribution)."""
    return Fraction(kb.validate(max_atoms))


def map_query(kb, evidence, query):
    """Map entailment; ``cutoff`` is converted to a Fraction."""
    result = _core.map_query(kb, evidence, query)
    result["cutoff"] = Fraction(result["cutoff"])
    return result


def top_theta(kb, evidence, query=None):
    """Top-theta levels (or the widest level entailing ``query``)."""

    def convert(level):
        return {
            "weight": Fraction(level["weight"]),
            "theta": Fraction(level["theta"]),
            "entailed": level["entailed"],
        }

    result = _core.top_theta(kb, evidence, query)
    if result is None:
        return None
    if isinstance(result, list):
        return [convert(level) for level in result]
    return convert(result)


def marginal(kb, query):
    """Exact probability of ``query`` as a Fraction."""
    return Fraction(_core.marginal(kb, query))
