"""Symbolic q-hypergeometric terms."""

from .evaluate import EvaluationError, LaurentPoly
from .forms import FormError
from .product import QProduct
from .summand import QBinom, QPoch, QPow, Summand, SymPow, VarTable, gen_name

__all__ = [
    "EvaluationError",
    "FormError",
    "LaurentPoly",
    "QBinom",
    "QPoch",
    "QPow",
    "QProduct",
    "Summand",
    "SymPow",
    "VarTable",
    "gen_name",
]
