"""LFG-style parsing of Turkish: morphology, unification and GLR parsing."""
from .avm import AVM, FSet, Clash, unify, add_element, pretty
from .pipeline import Parser, UnknownWordError, tokenize

__all__ = ["AVM", "FSet", "Clash", "unify", "add_element", "pretty",
           "Parser", "UnknownWordError", "tokenize"]
__version__ = "0.1.0"
