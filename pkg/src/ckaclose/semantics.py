"""Bounded pomset-language semantics and downward closure.

Every star is unrolled at most ``k`` times, which makes languages finite.
Passing ``k=None`` together with an event budget (``max_events`` or
``within``) computes the exact language restricted to that budget instead:
stars are then iterated to a fixpoint, which terminates because every
non-empty iteration adds events.

Downward closure has two independent implementations: generating everything
the exchange law rewrites a pomset into, by structural decomposition, and
enumerating all series-parallel pomsets over a label multiset and filtering
them with the subsumption search.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from functools import lru_cache
from itertools import combinations, product
from typing import Callable, Iterable, Optional

from .pomsets import (
    UNIT,
    ParP,
    Pomset,
    Prim,
    SeqP,
    par_all,
    par_compose,
    seq_all,
    seq_compose,
    subsumes,
)
from .terms import Letter, One, Par, Plus, Seq, Star, Term, Zero, subterms

__all__ = [
    "DEFAULT_CAP",
    "PomsetLanguage",
    "LanguageTooLarge",
    "bka_language",
    "cka_language",
    "downclose",
    "down_set",
    "enumerate_sp",
    "language_equal",
    "find_difference",
    "Counterexample",
    "bka_member",
    "cka_member",
    "lang_seq",
    "lang_par",
    "lang_star",
    "largest_member",
    "smallest_beyond",
]

DEFAULT_CAP = 200_000
ENUMERATE_LABEL_CAP = 7

PomsetLanguage = frozenset  # frozenset[Pomset]


class LanguageTooLarge(RuntimeError):
    """A language outgrew the configured cardinality cap."""

    def __init__(self, cap: int):
        super().__init__(f"pomset language exceeds cap of {cap} elements")
        self.cap = cap


def _check(s, cap: int):
    if len(s) > cap:
        raise LanguageTooLarge(cap)
    return s


def _make_filter(max_events: Optional[int], within) -> Optional[Callable[[Pomset], bool]]:
    if max_events is None and within is None:
        return None
    budget = Counter(within) if within is not None else None
    limit = max_events if max_events is not None else (sum(budget.values()) if budget else 0)
    cache: dict[Pomset, bool] = {}

    def fits(p: Pomset) -> bool:
        ok = cache.get(p)
        if ok is None:
            ok = p.events <= limit
            if ok and budget is not None:
                ok = all(budget[l] >= n for l, n in Counter(p.labels).items())
            cache[p] = ok
        return ok

    return fits


def lang_seq(a: Iterable[Pomset], b: Iterable[Pomset], fits=None, cap: int = DEFAULT_CAP) -> frozenset:
    b = list(b)
    out = set()
    for x in a:
        for y in b:
            p = seq_compose(x, y)
            if fits is None or fits(p):
                out.add(p)
        _check(out, cap)
    return frozenset(out)


def lang_par(a: Iterable[Pomset], b: Iterable[Pomset], fits=None, cap: int = DEFAULT_CAP) -> frozenset:
    b = list(b)
    out = set()
    for x in a:
        for y in b:
            p = par_compose(x, y)
            if fits is None or fits(p):
                out.add(p)
        _check(out, cap)
    return frozenset(out)


def lang_star(a: Iterable[Pomset], k: Optional[int], fits=None, cap: int = DEFAULT_CAP) -> frozenset:
    """``a`` iterated at most ``k`` times, or to a fixpoint when ``k`` is None."""
    a = [p for p in a if p is not UNIT]
    result = {UNIT}
    if k is None:
        if fits is None:
            raise ValueError("unbounded star needs an event budget")
        frontier = {UNIT}
        while frontier:
            new = set()
            for x in frontier:
                for y in a:
                    p = seq_compose(x, y)
                    if p not in result and fits(p):
                        new.add(p)
            result |= new
            _check(result, cap)
            frontier = new
        return frozenset(result)
    layer = {UNIT}
    for _ in range(k):
        layer = set(lang_seq(layer, a, fits, cap))
        if not layer:
            break
        result |= layer
        _check(result, cap)
    return frozenset(result)


def bka_language(
    e: Term,
    k: Optional[int] = 2,
    *,
    cap: int = DEFAULT_CAP,
    max_events: Optional[int] = None,
    within: Optional[Iterable[str]] = None,
) -> frozenset:
    """Pomsets denoted by ``e`` with each star unrolled at most ``k`` times.

    ``max_events`` / ``within`` (a label multiset) discard pomsets that exceed
    them; since composition only adds events this prunes early without
    changing the surviving part of the language.
    """
    if k is not None and k < 0:
        raise ValueError("bound must be non-negative")
    fits = _make_filter(max_events, within)
    if fits is None and k is None:
        raise ValueError("k=None needs max_events or within")
    memo: dict[Term, frozenset] = {}
    for t in subterms(e):
        if isinstance(t, Zero):
            r = frozenset()
        elif isinstance(t, One):
            r = frozenset([UNIT])
        elif isinstance(t, Letter):
            p = Prim(t.symbol)
            r = frozenset([p]) if fits is None or fits(p) else frozenset()
        elif isinstance(t, Plus):
            acc = set()
            for o in t.operands:
                acc |= memo[o]
            r = frozenset(_check(acc, cap))
        elif isinstance(t, Seq):
            r = memo[t.operands[0]]
            for o in t.operands[1:]:
                r = lang_seq(r, memo[o], fits, cap)
        elif isinstance(t, Par):
            r = memo[t.operands[0]]
            for o in t.operands[1:]:
                r = lang_par(r, memo[o], fits, cap)
        elif isinstance(t, Star):
            r = lang_star(memo[t.body], k, fits, cap)
        else:
            raise TypeError(t)
        memo[t] = r
    return memo[e]


def largest_member(e: Term, k: int) -> Optional[Pomset]:
    """A pomset of maximal event count in ``bka_language(e, k)``, or None if it is empty.

    Computed structurally, without enumerating the language.
    """
    memo: dict[Term, Optional[Pomset]] = {}
    for t in subterms(e):
        if isinstance(t, Zero):
            r = None
        elif isinstance(t, One):
            r = UNIT
        elif isinstance(t, Letter):
            r = Prim(t.symbol)
        elif isinstance(t, Plus):
            cands = [memo[o] for o in t.operands if memo[o] is not None]
            r = max(cands, key=lambda p: (p.events, p)) if cands else None
        elif isinstance(t, (Seq, Par)):
            parts = [memo[o] for o in t.operands]
            if any(p is None for p in parts):
                r = None
            else:
                r = seq_all(parts) if isinstance(t, Seq) else par_all(parts)
        elif isinstance(t, Star):
            b = memo[t.body]
            r = UNIT if b is None or b is UNIT else seq_all([b] * k)
        else:
            raise TypeError(t)
        memo[t] = r
    return memo[e]


# -- downward closure -----------------------------------------------------------


def _pick(*ps: Optional[Pomset]) -> Optional[Pomset]:
    live = [p for p in ps if p is not None]
    return min(live, key=lambda p: (p.events, p)) if live else None


def smallest_beyond(e: Term, k: int, limit: int) -> Optional[Pomset]:
    """A pomset of ``bka_language(e, k)`` with more than ``limit`` events, and
    with as few events as possible; None if there is none.

    Each subterm keeps one representative per event count up to ``limit``
    and a single one beyond it, so nothing is enumerated.  The choice among
    equally small candidates is deterministic but not the least in the
    pomset order.
    """
    Profile = tuple  # (dict[int, Pomset], Optional[Pomset])

    def merge(*profs: Profile) -> Profile:
        exact: dict[int, Pomset] = {}
        for ex, _ in profs:
            for c, r in ex.items():
                exact[c] = _pick(exact.get(c), r)
        return exact, _pick(*(o for _, o in profs))

    def least(prof: Profile) -> Optional[Pomset]:
        ex, over = prof
        return ex[min(ex)] if ex else over

    def combine(a: Profile, b: Profile, op) -> Profile:
        exact: dict[int, Pomset] = {}
        over = None
        for ca, ra in a[0].items():
            for cb, rb in b[0].items():
                r = op(ra, rb)
                if ca + cb <= limit:
                    exact[ca + cb] = _pick(exact.get(ca + cb), r)
                else:
                    over = _pick(over, r)
        la, lb = least(a), least(b)
        if a[1] is not None and lb is not None:
            over = _pick(over, op(a[1], lb))
        if b[1] is not None and la is not None:
            over = _pick(over, op(la, b[1]))
        return exact, over

    def atom(p: Pomset) -> Profile:
        return ({p.events: p}, None) if p.events <= limit else ({}, p)

    memo: dict[Term, Profile] = {}
    for t in subterms(e):
        if isinstance(t, Zero):
            r = ({}, None)
        elif isinstance(t, One):
            r = atom(UNIT)
        elif isinstance(t, Letter):
            r = atom(Prim(t.symbol))
        elif isinstance(t, Plus):
            r = merge(*(memo[o] for o in t.operands))
        elif isinstance(t, (Seq, Par)):
            op = seq_compose if isinstance(t, Seq) else par_compose
            r = memo[t.operands[0]]
            for o in t.operands[1:]:
                r = combine(r, memo[o], op)
        elif isinstance(t, Star):
            body, power, acc = memo[t.body], atom(UNIT), [atom(UNIT)]
            for _ in range(k):
                power = combine(power, body, seq_compose)
                acc.append(power)
            r = merge(*acc)
        else:
            raise TypeError(t)
        memo[t] = r
    return memo[e][1]


def _set_partitions(items: tuple) -> Iterable[list[tuple]]:
    if not items:
        yield []
        return
    head, rest = items[0], items[1:]
    for part in _set_partitions(rest):
        yield [(head,), *part]
        for i, block in enumerate(part):
            yield part[:i] + [(head, *block)] + part[i + 1 :]


@lru_cache(maxsize=65536)
def _cuts(u: Pomset) -> frozenset:
    """Pairs ``(u0, u1)`` with ``u0.u1`` below ``u``, covering every such pair.

    Any ``U0.U1`` below ``u`` is dominated componentwise by a member: for a
    sequential ``u`` by the Levi lemma, for a parallel one by interpolation.
    """
    if isinstance(u, SeqP):
        kids = u.children
        return frozenset(
            (seq_all([*kids[:i], l]), seq_all([r, *kids[i + 1 :]]))
            for i, c in enumerate(kids)
            for l, r in _cuts(c)
        )
    if isinstance(u, ParP):
        out = set()
        for choice in product(*(_cuts(c) for c in u.children)):
            out.add((par_all(l for l, _ in choice), par_all(r for _, r in choice)))
        return frozenset(out)
    if u is UNIT:
        return frozenset([(UNIT, UNIT)])
    return frozenset([(u, UNIT), (UNIT, u)])


@lru_cache(maxsize=65536)
def _non_parallel_below(u: Pomset) -> frozenset:
    """Members of ``down_set(u)`` that are not parallel compositions.

    A sequential ``w`` below ``u`` splits as ``w0.w1`` with ``w0.w1`` below
    ``u``, so ``w0`` and ``w1`` lie below the halves of some cut; both halves
    have fewer events than ``u``.
    """
    if not isinstance(u, ParP):
        return down_set(u)
    out: set[Pomset] = set()
    for left, right in _cuts(u):
        if left is not UNIT and right is not UNIT:
            tails = down_set(right)
            out.update(seq_compose(l, r) for l in down_set(left) for r in tails)
    return frozenset(out)


@lru_cache(maxsize=65536)
def down_set(u: Pomset) -> frozenset:
    """All pomsets subsumed by ``u``, built by exchange-law decomposition.

    A parallel member of the down-set regroups the parallel components of
    ``u`` into blocks and puts a non-parallel pomset below each block.
    """
    if isinstance(u, SeqP):
        parts = [down_set(c) for c in u.children]
        return frozenset(seq_all(choice) for choice in product(*parts))
    if not isinstance(u, ParP):
        return frozenset([u])
    out: set[Pomset] = set()
    for blocks in _set_partitions(u.children):
        options = [_non_parallel_below(par_all(b)) for b in blocks]
        out.update(par_all(choice) for choice in product(*options))
    return frozenset(out)


def _sp_all(labels: tuple[str, ...], cap: int) -> frozenset:
    return _enumerate(labels, cap)[0]


@lru_cache(maxsize=None)
def _enumerate(labels: tuple[str, ...], cap: int) -> tuple[frozenset, frozenset, frozenset]:
    """(all, non-sequential, non-parallel) SP pomsets over exactly ``labels``."""
    n = len(labels)
    if n == 0:
        return frozenset([UNIT]), frozenset([UNIT]), frozenset([UNIT])
    if n == 1:
        p = frozenset([Prim(labels[0])])
        return p, p, p
    splits = set()
    for r in range(1, n):
        for idx in combinations(range(n), r):
            left = tuple(labels[i] for i in idx)
            right = tuple(labels[i] for i in range(n) if i not in idx)
            splits.add((left, right))
    seqs: set[Pomset] = set()
    pars: set[Pomset] = set()
    for left, right in splits:
        _, left_nonseq, left_nonpar = _enumerate(left, cap)
        right_all = _enumerate(right, cap)[0]
        for x in left_nonseq:
            for y in right_all:
                seqs.add(seq_compose(x, y))
        # first parallel component is non-parallel; the rest is anything non-unit
        for x in left_nonpar:
            for y in right_all:
                pars.add(par_compose(x, y))
        if len(seqs) + len(pars) > cap:
            raise LanguageTooLarge(cap)
    return frozenset(seqs | pars), frozenset(pars), frozenset(seqs)


def enumerate_sp(labels: Iterable[str], *, label_cap: int = ENUMERATE_LABEL_CAP, cap: int = DEFAULT_CAP) -> frozenset:
    """Every series-parallel pomset whose label multiset is exactly ``labels``."""
    labels = tuple(sorted(labels))
    if len(labels) > label_cap:
        raise LanguageTooLarge(label_cap)
    return _sp_all(labels, cap)


def downclose(lang: Iterable[Pomset], *, method: str = "rewrite", cap: int = DEFAULT_CAP) -> frozenset:
    """``{u : u ⊑ v for some v in lang}``.

    ``method="rewrite"`` uses :func:`down_set`; ``method="oracle"``
    enumerates candidates over each label multiset and tests subsumption.
    """
    out: set[Pomset] = set()
    if method == "rewrite":
        for v in lang:
            out |= down_set(v)
            _check(out, cap)
    elif method == "oracle":
        for v in lang:
            out.update(u for u in enumerate_sp(v.labels, cap=cap) if subsumes(u, v))
            _check(out, cap)
    else:
        raise ValueError(f"unknown method {method!r}")
    return frozenset(out)


def cka_language(e: Term, k: Optional[int] = 2, **kwargs) -> frozenset:
    """Downward closure of :func:`bka_language` (same keyword arguments)."""
    cap = kwargs.get("cap", DEFAULT_CAP)
    return downclose(bka_language(e, k, **kwargs), cap=cap)


# -- comparison and membership ----------------------------------------------------


@dataclass(frozen=True)
class Counterexample:
    pomset: Pomset
    side: int  # 0: only in the first language, 1: only in the second


def find_difference(first: Iterable[Pomset], second: Iterable[Pomset]) -> Optional[Counterexample]:
    """A smallest pomset in the symmetric difference, or None if the sets agree."""
    a, b = frozenset(first), frozenset(second)
    only = [(p, 0) for p in a - b] + [(p, 1) for p in b - a]
    if not only:
        return None
    p, side = min(only, key=lambda t: (t[0], t[1]))
    return Counterexample(p, side)


def language_equal(first: Iterable[Pomset], second: Iterable[Pomset]) -> bool:
    return find_difference(first, second) is None


@lru_cache(maxsize=4096)
def _same_labels(e: Term, labels: tuple[str, ...], cap: int) -> frozenset:
    return frozenset(v for v in bka_language(e, None, within=labels, cap=cap) if v.labels == labels)


def bka_member(u: Pomset, e: Term, cap: int = DEFAULT_CAP) -> bool:
    """Exact membership of ``u`` in the unbounded BKA language of ``e``."""
    return u in _same_labels(e, u.labels, cap)


def cka_member(u: Pomset, e: Term, cap: int = DEFAULT_CAP) -> bool:
    """Exact membership of ``u`` in the unbounded CKA language of ``e``."""
    same = _same_labels(e, u.labels, cap)
    return u in same or any(subsumes(u, v) for v in same)
