"""Syntactic downward closure for concurrent Kleene algebra.

Terms over ``0, 1, a, +, ., |, *`` denote sets of series-parallel pomsets.
:func:`close` turns a term into one whose plain (bi-Kleene) language is
already closed under subsumption, so that equivalence modulo the exchange law
reduces to equivalence without it.
"""

from .closure import build_system, close, close_par, preclose, verify_closure
from .kalaws import tidy
from .linsys import LinearSystem, apply, solve_least
from .pomsets import (
    KERNEL,
    UNIT,
    LabelledPoset,
    ParP,
    Pomset,
    Prim,
    SeqP,
    from_labelled_poset,
    is_n_free,
    par_compose,
    seq_compose,
    subsumes,
    to_labelled_poset,
)
from .semantics import (
    LanguageTooLarge,
    bka_language,
    bka_member,
    cka_language,
    cka_member,
    downclose,
    enumerate_sp,
    find_difference,
    language_equal,
)
from .splitting import par_splices, remainders, seq_splices
from .terms import Term, nullable, parse, simplify, size, width

__all__ = [
    "KERNEL",
    "LabelledPoset",
    "LanguageTooLarge",
    "LinearSystem",
    "ParP",
    "Pomset",
    "Prim",
    "SeqP",
    "Term",
    "UNIT",
    "apply",
    "bka_language",
    "bka_member",
    "build_system",
    "cka_language",
    "cka_member",
    "close",
    "close_par",
    "downclose",
    "enumerate_sp",
    "find_difference",
    "from_labelled_poset",
    "is_n_free",
    "language_equal",
    "nullable",
    "par_compose",
    "par_splices",
    "parse",
    "preclose",
    "remainders",
    "seq_compose",
    "seq_splices",
    "simplify",
    "size",
    "solve_least",
    "subsumes",
    "tidy",
    "to_labelled_poset",
    "verify_closure",
    "width",
]
