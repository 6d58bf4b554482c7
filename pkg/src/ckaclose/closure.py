"""Syntactic downward closure of terms.

``close(e)`` returns a term whose BKA language is the downward closure of the
BKA language of ``e`` and which is CKA-equivalent to ``e``.  Sums, sequential
compositions and stars are closed operand-wise; a parallel composition
``e | f`` is closed by solving a linear system indexed by pairs of remainders
of ``e`` and ``f``, whose coefficients are preclosures of smaller width.
"""

from __future__ import annotations

import threading
from contextlib import contextmanager
from dataclasses import dataclass
from typing import Optional

from .kalaws import tidy
from .linsys import LinearSystem, solve_least
from .semantics import DEFAULT_CAP, bka_language, downclose, largest_member, smallest_beyond
from .splitting import par_splices, remainders, seq_splices
from .terms import (
    ZERO,
    Letter,
    One,
    Par,
    Plus,
    Seq,
    Star,
    Term,
    Zero,
    par,
    plus,
    seq,
    simplify,
    size,
    star,
    width,
)

__all__ = [
    "RecursionGuardError",
    "preclose",
    "build_system",
    "close_par",
    "close",
    "ClosureReport",
    "verify_closure",
    "clear_caches",
]


class RecursionGuardError(RuntimeError):
    """The (width, size) measure failed to decrease along a recursive call."""


_lock = threading.RLock()
_close_cache: dict[Term, Term] = {}
_preclose_cache: dict[tuple[Term, Term], Term] = {}
_guard = threading.local()


def clear_caches() -> None:
    with _lock:
        _close_cache.clear()
        _preclose_cache.clear()


@contextmanager
def _measured(e: Term):
    stack = getattr(_guard, "stack", None)
    if stack is None:
        stack = _guard.stack = []
    m = (width(e), size(e))
    if stack and not m < stack[-1]:
        raise RecursionGuardError(f"closure of {e} does not decrease {stack[-1]} -> {m}")
    stack.append(m)
    try:
        yield
    finally:
        stack.pop()


def preclose(e: Term, f: Term) -> Term:
    """``e|f`` plus ``close(l) | close(r)`` for every parallel splice of ``e|f``
    whose sides are both strictly narrower than ``e|f``."""
    e, f = simplify(e), simplify(f)
    key = (e, f)
    hit = _preclose_cache.get(key)
    if hit is not None:
        return hit
    whole = par(e, f)
    w = width(e) + width(f)
    terms = [whole]
    for l, r in sorted(par_splices(whole)):
        if width(l) < w and width(r) < w:
            terms.append(par(close(l), close(r)))
    out = tidy(plus(*terms))
    with _lock:
        return _preclose_cache.setdefault(key, out)


def _key(g: Term, h: Term) -> Term:
    return simplify(par(g, h))


def build_system(e: Term, f: Term) -> LinearSystem:
    """The system whose least solution at ``e|f`` closes ``e|f``.

    Indices are ``g|h`` for remainders ``g`` of ``e`` and ``h`` of ``f``
    (merged when they coincide after simplification); the vector entry at
    ``g|h`` is ``g|h`` itself; the coefficient from ``g|h`` to ``g'|h'`` sums
    the preclosures ``lg (.) lh`` over sequential splices ``(lg, g')`` of
    ``g`` and ``(lh, h')`` of ``h``.
    """
    e, f = simplify(e), simplify(f)
    pairs = [(g, h) for g in sorted(remainders(e)) for h in sorted(remainders(f))]
    index: list[Term] = []
    seen = set()
    for g, h in pairs:
        k = _key(g, h)
        if k not in seen:
            seen.add(k)
            index.append(k)
    index.sort()
    entries: dict[tuple[Term, Term], list[Term]] = {}
    for g, h in pairs:
        i = _key(g, h)
        for lg, g2 in seq_splices(g):
            for lh, h2 in seq_splices(h):
                entries.setdefault((i, _key(g2, h2)), []).append(preclose(lg, lh))
    matrix = {}
    for ij, ts in entries.items():
        t = tidy(plus(*ts))
        if not isinstance(t, Zero):
            matrix[ij] = t
    vector = {i: i for i in index if not isinstance(i, Zero)}
    return LinearSystem(index, matrix, vector)


def close_par(e: Term, f: Term) -> Term:
    """Closure of ``e|f`` read off the least solution of :func:`build_system`."""
    e, f = simplify(e), simplify(f)
    if width(e) == 0 or width(f) == 0:
        # 0 annihilates and 1 is neutral, so the simplified term is smaller
        return close(simplify(par(e, f)))
    sysm = build_system(e, f)
    return solve_least(sysm)[_key(e, f)]


def close(e: Term) -> Term:
    """A closure of ``e``: CKA-equivalent, with downward-closed BKA language."""
    e = simplify(e)
    hit = _close_cache.get(e)
    if hit is not None:
        return hit
    with _measured(e):
        if width(e) <= 1 or isinstance(e, (Zero, One, Letter)):
            # every pomset is a word, and a word only subsumes itself
            out = e
        elif isinstance(e, Plus):
            out = plus(*(close(o) for o in e.operands))
        elif isinstance(e, Seq):
            out = seq(*(close(o) for o in e.operands))
        elif isinstance(e, Star):
            out = star(close(e.body))
        elif isinstance(e, Par):
            first, *rest = e.operands
            out = close_par(first, par(*rest))
        else:
            raise TypeError(e)
        out = tidy(out)
    with _lock:
        return _close_cache.setdefault(e, out)


@dataclass(frozen=True)
class ClosureReport:
    """Outcome of :func:`verify_closure`; the witnesses are ``None`` when a check passed."""

    bound: int
    upper_bound: int
    missing: Optional[object]  # in the downward closure but not in the closure term
    extra: Optional[object]  # in the closure term but not in the downward closure

    @property
    def ok(self) -> bool:
        return self.missing is None and self.extra is None


def verify_closure(e: Term, k: int, *, closed: Optional[Term] = None, cap: int = DEFAULT_CAP) -> ClosureReport:
    """Bounded two-sided check of a closure of ``e``.

    With ``K = k * size(e)``: every pomset in the downward closure of the
    ``k``-bounded language of ``e`` must lie in the ``K``-bounded language of
    the closure, and every pomset of the ``k``-bounded language of the closure
    must lie in the downward closure of the ``K``-bounded language of ``e``.
    The ``K``-bounded sides are only expanded up to the event count that can
    matter, which keeps the check exact; a closure member with more events
    than anything on the other side is found structurally and reported
    without enumerating the rest.
    """
    c = close(e) if closed is None else closed
    big = max(k * size(e), k)
    lhs = downclose(bka_language(e, k, cap=cap), cap=cap)
    n = max((p.events for p in lhs), default=0)
    rhs = bka_language(c, big, cap=cap, max_events=n)
    missing = min((p for p in lhs if p not in rhs), default=None)
    if missing is not None:
        return ClosureReport(k, big, missing, None)
    top = largest_member(e, big)
    limit = -1 if top is None else top.events
    beyond = smallest_beyond(c, k, limit)
    if beyond is not None:
        return ClosureReport(k, big, None, beyond)
    mine = bka_language(c, k, cap=cap)
    allowed = downclose(bka_language(e, big, cap=cap, max_events=limit), cap=cap) if limit >= 0 else frozenset()
    extra = min((p for p in mine if p not in allowed), default=None)
    return ClosureReport(k, big, None, extra)
