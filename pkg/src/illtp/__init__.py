"""Theorem proving for intuitionistic linear logic.

Modules: ``formula`` (syntax), ``problem`` (file format), ``translate``
(IL to ILL), ``il`` (intuitionistic decision procedure), ``illf`` (focused
ILL prover and proof checker), ``kleene`` (the Kleene test library),
``petri`` (Petri net encodings), ``bench`` (harness and LaTeX output) and
``cli``.
"""

from .formula import Sequent
from .illf import ProveResult, SearchLimits, Verdict, check_proof, prove

__version__ = "0.1.0"

__all__ = ["Sequent", "ProveResult", "SearchLimits", "Verdict", "check_proof", "prove", "__version__"]
