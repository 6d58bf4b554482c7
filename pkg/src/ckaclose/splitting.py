"""Parallel and sequential splitting relations and right-hand remainders.

Splices are returned as sets of ``(left, right)`` pairs of simplified terms;
simplification removes the many unit-decorated duplicates the inference rules
generate (``1.b`` and ``b`` become the same pair component).
"""

from __future__ import annotations

from functools import lru_cache
from itertools import product

from .terms import ONE, Letter, One, Par, Plus, Seq, Star, Term, Zero, par, seq, simplify

__all__ = ["par_splices", "seq_splices", "remainders"]

SplicePair = tuple[Term, Term]


def _norm(pairs) -> frozenset[SplicePair]:
    return frozenset((simplify(l), simplify(r)) for l, r in pairs)


@lru_cache(maxsize=None)
def par_splices(e: Term) -> frozenset[SplicePair]:
    """Pairs ``(l, r)`` derivable in the parallel splitting relation of ``e``."""
    out: set[SplicePair] = {(ONE, e), (e, ONE)}
    if isinstance(e, Plus):
        for o in e.operands:
            out |= par_splices(o)
    elif isinstance(e, Star):
        out |= par_splices(e.body)
    elif isinstance(e, Seq):
        ops = e.operands
        for i, o in enumerate(ops):
            if all(x.nullable for j, x in enumerate(ops) if j != i):
                out |= par_splices(o)
    elif isinstance(e, Par):
        for combo in product(*(par_splices(o) for o in e.operands)):
            out.add((par(*(l for l, _ in combo)), par(*(r for _, r in combo))))
    return _norm(out)


@lru_cache(maxsize=None)
def seq_splices(e: Term) -> frozenset[SplicePair]:
    """Pairs ``(l, r)`` derivable in the sequential splitting relation of ``e``."""
    out: set[SplicePair] = set()
    if isinstance(e, Zero):
        pass
    elif isinstance(e, One):
        out.add((ONE, ONE))
    elif isinstance(e, Letter):
        out |= {(e, ONE), (ONE, e)}
    elif isinstance(e, Plus):
        for o in e.operands:
            out |= seq_splices(o)
    elif isinstance(e, Seq):
        ops = e.operands
        for i, o in enumerate(ops):
            before, after = ops[:i], ops[i + 1 :]
            for l, r in seq_splices(o):
                out.add((seq(*before, l), seq(r, *after)))
    elif isinstance(e, Par):
        for combo in product(*(seq_splices(o) for o in e.operands)):
            out.add((par(*(l for l, _ in combo)), par(*(r for _, r in combo))))
    elif isinstance(e, Star):
        out.add((ONE, ONE))
        for l, r in seq_splices(e.body):
            out.add((seq(e, l), seq(r, e)))
    return _norm(out)


@lru_cache(maxsize=None)
def remainders(e: Term) -> frozenset[Term]:
    """Least set containing ``e`` and closed under right components of sequential splices."""
    start = simplify(e)
    seen = {start}
    todo = [start]
    while todo:
        f = todo.pop()
        for _, r in seq_splices(f):
            if r not in seen:
                seen.add(r)
                todo.append(r)
    return frozenset(seen)
