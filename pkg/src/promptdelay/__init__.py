"""Delay games with Prompt-LTL winning conditions: solving, strategy extraction and cross-checking."""

from .errors import AutomatonFormatError, CapacityError, FormulaSyntaxError, InternalError, PromptDelayError
from .logic import LassoWord, Partition, evaluate, parse_formula, parse_lasso, relativize
from .strategy import Verdict, decide

__version__ = "0.1.0"

__all__ = [
    "AutomatonFormatError", "CapacityError", "FormulaSyntaxError", "InternalError", "PromptDelayError",
    "LassoWord", "Partition", "evaluate", "parse_formula", "parse_lasso", "relativize",
    "Verdict", "decide",
]
