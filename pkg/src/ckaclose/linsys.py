"""Linear systems over terms and their least solutions by Kleene elimination.

A system ``(M, p)`` over an index ``I`` asks for the least ``x`` with
``M.x + p <= x``.  Eliminating an index ``k`` replaces every other row by
``M(i,j) + M(i,k).M(k,k)*.M(k,j)`` and ``p(i) + M(i,k).M(k,k)*.p(k)``; once
the smaller system is solved, ``x(k) = M(k,k)*.(p(k) + sum_j M(k,j).x(j))``.
Only Kleene-algebra operations are used, so the result is least in both the
BKA and the CKA sense.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Hashable, Mapping, Optional, Sequence

from .kalaws import tidy
from .terms import ZERO, Term, Zero, plus, seq, simplify, star

__all__ = ["LinearSystem", "solve_least", "apply", "pivot_order"]

Key = Hashable


@dataclass
class LinearSystem:
    """``index`` is ordered; absent matrix or vector entries mean 0."""

    index: list
    matrix: dict = field(default_factory=dict)
    vector: dict = field(default_factory=dict)

    def __post_init__(self):
        self.index = list(self.index)
        if len(set(self.index)) != len(self.index):
            raise ValueError("duplicate index keys")
        keys = set(self.index)
        for i, j in self.matrix:
            if i not in keys or j not in keys:
                raise KeyError(f"matrix entry ({i}, {j}) outside the index")
        for i in self.vector:
            if i not in keys:
                raise KeyError(f"vector entry {i} outside the index")

    def m(self, i: Key, j: Key) -> Term:
        return self.matrix.get((i, j), ZERO)

    def p(self, i: Key) -> Term:
        return self.vector.get(i, ZERO)

    def rows(self) -> list[list[Term]]:
        return [[self.m(i, j) for j in self.index] for i in self.index]


def _simp(t: Term, trace, normal) -> Term:
    s = normal(t)
    if trace is not None and s is not t:
        trace(t, s)
    return s


def pivot_order(sys: LinearSystem) -> list:
    """Greedy elimination order that keeps fill-in small.

    Repeatedly picks the remaining index with the fewest non-zero
    (row, column) pairs among the others; ties fall back to the reverse of
    the index order, which is the canonical choice.
    """
    rank = {k: n for n, k in enumerate(reversed(sys.index))}
    out_edges = {k: set() for k in sys.index}
    in_edges = {k: set() for k in sys.index}
    for (i, j), t in sys.matrix.items():
        if i != j and not isinstance(simplify(t), Zero):
            out_edges[i].add(j)
            in_edges[j].add(i)
    remaining = set(sys.index)
    order = []
    while remaining:
        k = min(remaining, key=lambda k: (len(in_edges[k]) * len(out_edges[k]), rank[k]))
        order.append(k)
        remaining.discard(k)
        for i in in_edges[k]:
            out_edges[i].discard(k)
        for j in out_edges[k]:
            in_edges[j].discard(k)
        for i in in_edges[k]:
            for j in out_edges[k]:
                if i != j:
                    out_edges[i].add(j)
                    in_edges[j].add(i)
        del in_edges[k], out_edges[k]
    return order


def solve_least(
    sys: LinearSystem,
    order: Optional[Sequence] = None,
    *,
    trace: Optional[Callable[[Term, Term], None]] = None,
    normal: Callable[[Term], Term] = tidy,
) -> dict:
    """Least solution of ``sys``, eliminating indices in ``order``.

    ``order`` defaults to :func:`pivot_order`.  Entries pass through
    ``normal`` (Kleene-algebra laws only) after every step;
    ``trace(before, after)`` is called for each rewrite that changed a term.
    """
    order = pivot_order(sys) if order is None else list(order)
    if len(order) != len(sys.index) or set(order) != set(sys.index):
        raise ValueError("order must be a permutation of the index")

    M = {(i, j): _simp(t, trace, normal) for (i, j), t in sys.matrix.items()}
    M = {ij: t for ij, t in M.items() if not isinstance(t, Zero)}
    p = {i: _simp(sys.p(i), trace, normal) for i in sys.index}
    remaining = set(sys.index)
    # per pivot: (k, loop*, row of k restricted to later indices, p(k))
    eliminated = []

    for k in order:
        remaining.discard(k)
        loop = _simp(star(M.get((k, k), ZERO)), trace, normal)
        row = {j: M[(k, j)] for j in remaining if (k, j) in M}
        col = {i: M[(i, k)] for i in remaining if (i, k) in M}
        pk = p[k]
        for i, mik in col.items():
            head = _simp(seq(mik, loop), trace, normal)
            for j, mkj in row.items():
                M[(i, j)] = _simp(plus(M.get((i, j), ZERO), seq(head, mkj)), trace, normal)
            p[i] = _simp(plus(p[i], seq(head, pk)), trace, normal)
        for ij in [ij for ij in M if k in ij]:
            del M[ij]
        eliminated.append((k, loop, row, pk))

    x: dict = {}
    for k, loop, row, pk in reversed(eliminated):
        acc = plus(pk, *(seq(mkj, x[j]) for j, mkj in row.items()))
        x[k] = _simp(seq(loop, acc), trace, normal)
    return {k: x[k] for k in sys.index}


def apply(sys: LinearSystem, v: Mapping) -> dict:
    """``M.v + p``, entrywise and simplified."""
    missing = [i for i in sys.index if i not in v]
    if missing:
        raise KeyError(f"vector has no entry for {missing[0]}")
    return {
        i: simplify(plus(sys.p(i), *(seq(sys.m(i, j), v[j]) for j in sys.index)))
        for i in sys.index
    }
