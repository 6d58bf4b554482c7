"""Series-parallel pomsets in normal form, plus an explicit labelled-poset view.

A :class:`Pomset` is kept in the unique decomposition normal form: sequential
nodes hold at least two non-sequential children, parallel nodes hold at least
two non-parallel children sorted by their printed form, and the empty pomset
never occurs as a child.  Under that normal form two pomsets are isomorphic
exactly when they are the same object (nodes are interned).
"""

from __future__ import annotations

import os
import weakref
from dataclasses import dataclass, field
from itertools import combinations
from typing import Iterable, Mapping, Optional

if os.environ.get("CKACLOSE_PURE"):
    from ._pysubsume import find_subsumption
    KERNEL = "python"
else:
    try:
        from ._csubsume import find_subsumption
        KERNEL = "cython"
    except ImportError:  # extension not built
        from ._pysubsume import find_subsumption
        KERNEL = "python"

__all__ = [
    "Pomset",
    "Unit",
    "Prim",
    "SeqP",
    "ParP",
    "UNIT",
    "prim",
    "seq_compose",
    "par_compose",
    "seq_all",
    "par_all",
    "LabelledPoset",
    "to_labelled_poset",
    "from_labelled_poset",
    "NotSeriesParallel",
    "is_n_free",
    "subsumes",
    "find_subsumption_map",
    "isomorphic",
    "KERNEL",
]

_INTERNED: "weakref.WeakValueDictionary[str, Pomset]" = weakref.WeakValueDictionary()
_LABEL_IDS: dict[str, int] = {}


def _label_id(label: str) -> int:
    return _LABEL_IDS.setdefault(label, len(_LABEL_IDS))


class Pomset:
    __slots__ = ("key", "events", "labels", "_enc", "__weakref__")

    key: str
    events: int
    labels: tuple[str, ...]  # sorted label multiset

    def __hash__(self) -> int:
        return hash(self.key)

    def __eq__(self, other: object) -> bool:
        return self is other

    def __ne__(self, other: object) -> bool:
        return self is not other

    def __lt__(self, other: "Pomset") -> bool:
        return (self.events, self.key) < (other.events, other.key)

    def __str__(self) -> str:
        return self.key

    def __repr__(self) -> str:
        return f"Pomset({self.key!r})"

    def __reduce__(self):
        return (from_dict, (to_dict(self),))

    @property
    def children(self) -> tuple["Pomset", ...]:
        return ()

    @property
    def is_sequential(self) -> bool:
        return isinstance(self, SeqP)

    def encoding(self) -> tuple[tuple[int, ...], tuple[int, ...]]:
        """``(label ids, predecessor bitmasks)`` with events in a topological order."""
        if self._enc is None:
            labels: list[int] = []
            preds: list[int] = []
            _encode(self, 0, labels, preds)
            self._enc = (tuple(labels), tuple(preds))
        return self._enc

    @property
    def order_size(self) -> int:
        return sum(bin(p).count("1") for p in self.encoding()[1])


def _make(cls, key: str, events: int, labels: tuple[str, ...], **fields) -> Pomset:
    node = _INTERNED.get(key)
    if node is None:
        node = object.__new__(cls)
        node.key = key
        node.events = events
        node.labels = labels
        node._enc = None
        for k, v in fields.items():
            setattr(node, k, v)
        _INTERNED[key] = node
    return node


class Unit(Pomset):
    __slots__ = ()

    def __new__(cls):
        return _make(cls, "1", 0, ())


class Prim(Pomset):
    __slots__ = ("label",)

    def __new__(cls, label: str):
        return _make(cls, label, 1, (label,), label=label)


class SeqP(Pomset):
    __slots__ = ("_children",)

    def __new__(cls, children: tuple[Pomset, ...]):
        assert len(children) >= 2
        assert not any(isinstance(c, (SeqP, Unit)) for c in children)
        key = ".".join(f"({c.key})" if isinstance(c, ParP) else c.key for c in children)
        return _make(
            cls,
            key,
            sum(c.events for c in children),
            tuple(sorted(x for c in children for x in c.labels)),
            _children=children,
        )

    @property
    def children(self) -> tuple[Pomset, ...]:
        return self._children


class ParP(Pomset):
    __slots__ = ("_children",)

    def __new__(cls, children: tuple[Pomset, ...]):
        assert len(children) >= 2
        assert not any(isinstance(c, (ParP, Unit)) for c in children)
        children = tuple(sorted(children, key=lambda c: c.key))
        key = "|".join(c.key for c in children)
        return _make(
            cls,
            key,
            sum(c.events for c in children),
            tuple(sorted(x for c in children for x in c.labels)),
            _children=children,
        )

    @property
    def children(self) -> tuple[Pomset, ...]:
        return self._children


UNIT = Unit()


def prim(label: str) -> Prim:
    return Prim(label)


def seq_compose(u: Pomset, v: Pomset) -> Pomset:
    """Normal form of ``u . v``."""
    if u is UNIT:
        return v
    if v is UNIT:
        return u
    left = u.children if isinstance(u, SeqP) else (u,)
    right = v.children if isinstance(v, SeqP) else (v,)
    return SeqP(left + right)


def par_compose(u: Pomset, v: Pomset) -> Pomset:
    """Normal form of ``u | v``."""
    if u is UNIT:
        return v
    if v is UNIT:
        return u
    left = u.children if isinstance(u, ParP) else (u,)
    right = v.children if isinstance(v, ParP) else (v,)
    return ParP(left + right)


def seq_all(ps: Iterable[Pomset]) -> Pomset:
    out: list[Pomset] = []
    for p in ps:
        if isinstance(p, SeqP):
            out.extend(p.children)
        elif p is not UNIT:
            out.append(p)
    if not out:
        return UNIT
    return out[0] if len(out) == 1 else SeqP(tuple(out))


def par_all(ps: Iterable[Pomset]) -> Pomset:
    out: list[Pomset] = []
    for p in ps:
        if isinstance(p, ParP):
            out.extend(p.children)
        elif p is not UNIT:
            out.append(p)
    if not out:
        return UNIT
    return out[0] if len(out) == 1 else ParP(tuple(out))


def _encode(u: Pomset, base: int, labels: list[int], preds: list[int]) -> int:
    # appends u's events starting at index ``base``; returns the new length
    if isinstance(u, Prim):
        labels.append(_label_id(u.label))
        preds.append(0)
        return base + 1
    if isinstance(u, SeqP):
        start = base
        for c in u.children:
            end = _encode(c, start, labels, preds)
            below = ((1 << start) - 1) & ~((1 << base) - 1)
            for i in range(start, end):
                preds[i] |= below
            start = end
        return start
    start = base
    for c in u.children:
        start = _encode(c, start, labels, preds)
    return start


# -- serialisation ------------------------------------------------------------


def to_dict(u: Pomset) -> dict:
    if isinstance(u, Unit):
        return {"kind": "unit"}
    if isinstance(u, Prim):
        return {"kind": "prim", "label": u.label}
    kind = "seq" if isinstance(u, SeqP) else "par"
    return {"kind": kind, "children": [to_dict(c) for c in u.children]}


def from_dict(d: Mapping) -> Pomset:
    kind = d["kind"]
    if kind == "unit":
        return UNIT
    if kind == "prim":
        return Prim(d["label"])
    kids = [from_dict(c) for c in d["children"]]
    if kind == "seq":
        return seq_all(kids)
    if kind == "par":
        return par_all(kids)
    raise ValueError(f"unknown pomset kind {kind!r}")


def to_dot(u: Pomset, name: str = "pomset") -> str:
    """Graphviz rendering of the Hasse diagram of ``u``."""
    p = to_labelled_poset(u)
    lines = [f"digraph {name} {{", "  rankdir=LR;"]
    for x in sorted(p.carrier):
        lines.append(f'  e{x} [label="{p.labelling[x]}"];')
    for x, y in sorted(p.covering_pairs()):
        lines.append(f"  e{x} -> e{y};")
    lines.append("}")
    return "\n".join(lines)


# -- labelled posets ------------------------------------------------------------


@dataclass(frozen=True)
class LabelledPoset:
    """Explicit ``(carrier, strict order, labelling)`` triple.

    ``order`` holds pairs ``(x, y)`` with ``x < y`` and is kept transitively
    closed.
    """

    carrier: frozenset[int]
    order: frozenset[tuple[int, int]]
    labelling: Mapping[int, str] = field(hash=False)

    def __post_init__(self):
        for x, y in self.order:
            if x == y or x not in self.carrier or y not in self.carrier:
                raise ValueError(f"bad order pair {(x, y)}")
            if (y, x) in self.order:
                raise ValueError(f"order is not antisymmetric at {(x, y)}")
        if set(self.labelling) != set(self.carrier):
            raise ValueError("labelling must be total on the carrier")

    @classmethod
    def build(cls, labelling: Mapping[int, str], pairs: Iterable[tuple[int, int]]) -> "LabelledPoset":
        """Construct from any generating set of pairs (the transitive closure is taken)."""
        carrier = frozenset(labelling)
        succ: dict[int, set[int]] = {x: set() for x in carrier}
        for x, y in pairs:
            succ[x].add(y)
        closed: set[tuple[int, int]] = set()
        for x in carrier:
            stack, seen = list(succ[x]), set()
            while stack:
                y = stack.pop()
                if y in seen:
                    continue
                seen.add(y)
                stack.extend(succ[y])
            closed.update((x, y) for y in seen)
        return cls(carrier, frozenset(closed), dict(labelling))

    def less(self, x: int, y: int) -> bool:
        return (x, y) in self.order

    def comparable(self, x: int, y: int) -> bool:
        return (x, y) in self.order or (y, x) in self.order

    def restrict(self, subset: Iterable[int]) -> "LabelledPoset":
        s = frozenset(subset)
        return LabelledPoset(
            s,
            frozenset((x, y) for x, y in self.order if x in s and y in s),
            {x: self.labelling[x] for x in s},
        )

    def covering_pairs(self) -> set[tuple[int, int]]:
        return {
            (x, y)
            for x, y in self.order
            if not any((x, z) in self.order and (z, y) in self.order for z in self.carrier)
        }

    def encoding(self) -> tuple[list[int], tuple[int, ...], tuple[int, ...]]:
        """Events in a topological order plus their label ids and predecessor masks."""
        remaining = set(self.carrier)
        topo: list[int] = []
        while remaining:
            ready = sorted(x for x in remaining if not any((y, x) in self.order for y in remaining))
            topo.extend(ready)
            remaining.difference_update(ready)
        idx = {x: i for i, x in enumerate(topo)}
        labels = tuple(_label_id(self.labelling[x]) for x in topo)
        preds = [0] * len(topo)
        for x, y in self.order:
            preds[idx[y]] |= 1 << idx[x]
        return topo, labels, tuple(preds)


def to_labelled_poset(u: Pomset) -> LabelledPoset:
    """A representative of ``u`` with events numbered 0..n-1 left to right."""
    labels, preds = u.encoding()
    names = {v: k for k, v in _LABEL_IDS.items()}
    pairs = frozenset((x, y) for y, m in enumerate(preds) for x in range(len(labels)) if (m >> x) & 1)
    return LabelledPoset(frozenset(range(len(labels))), pairs, {i: names[l] for i, l in enumerate(labels)})


class NotSeriesParallel(ValueError):
    pass


def is_n_free(p: LabelledPoset) -> bool:
    """True iff no four events form the N shape ``u0<u1, u2<u3, u0<u3`` alone."""
    below = p.less
    xs = sorted(p.carrier)
    for u0, u3 in p.order:
        for u1 in xs:
            if u1 in (u0, u3) or not below(u0, u1) or p.comparable(u1, u3):
                continue
            for u2 in xs:
                if u2 in (u0, u1, u3) or not below(u2, u3):
                    continue
                if not p.comparable(u2, u0) and not p.comparable(u2, u1):
                    return False
    return True


def _components(nodes: list[int], adjacent) -> list[list[int]]:
    seen: set[int] = set()
    comps = []
    for start in nodes:
        if start in seen:
            continue
        comp, stack = [], [start]
        seen.add(start)
        while stack:
            x = stack.pop()
            comp.append(x)
            for y in nodes:
                if y not in seen and adjacent(x, y):
                    seen.add(y)
                    stack.append(y)
        comps.append(comp)
    return comps


def from_labelled_poset(p: LabelledPoset) -> Pomset:
    """Decompose an N-free labelled poset into its series-parallel normal form."""

    def go(nodes: list[int]) -> Pomset:
        if not nodes:
            return UNIT
        if len(nodes) == 1:
            return Prim(p.labelling[nodes[0]])
        parts = _components(nodes, p.comparable)
        if len(parts) > 1:
            return par_all(go(c) for c in parts)
        blocks = _components(nodes, lambda x, y: not p.comparable(x, y))
        if len(blocks) == 1:
            raise NotSeriesParallel("poset contains an N-shaped subposet")
        # blocks of a connected N-free poset are totally ordered
        blocks.sort(key=lambda b: min(sum(1 for x in nodes if p.less(x, y)) for y in b))
        for lo, hi in zip(blocks, blocks[1:]):
            if not all(p.less(x, y) for x in lo for y in hi):
                raise NotSeriesParallel("poset contains an N-shaped subposet")
        return seq_all(go(b) for b in blocks)

    return go(sorted(p.carrier))


# -- subsumption ----------------------------------------------------------------


def find_subsumption_map(u: Pomset, v: Pomset) -> Optional[list[int]]:
    """A subsumption from ``v`` to ``u`` on the canonical encodings, if ``u ⊑ v``.

    The result maps event ``i`` of ``to_labelled_poset(v)`` to an event of
    ``to_labelled_poset(u)``.
    """
    if u.labels != v.labels:
        return None
    if u is v:
        return list(range(u.events))
    if u.order_size < v.order_size:
        return None
    vl, vp = v.encoding()
    ul, up = u.encoding()
    return find_subsumption(vl, vp, ul, up)


def subsumes(u: Pomset, v: Pomset) -> bool:
    """``u ⊑ v``: ``u`` is at least as sequential as ``v`` on the same events."""
    return find_subsumption_map(u, v) is not None


def isomorphic(p: LabelledPoset, q: LabelledPoset) -> bool:
    """Graph isomorphism of labelled posets by two-way subsumption search."""
    if len(p.carrier) != len(q.carrier) or len(p.order) != len(q.order):
        return False
    _, pl, pp = p.encoding()
    _, ql, qp = q.encoding()
    return find_subsumption(pl, pp, ql, qp) is not None


def poset_subsumption(src: LabelledPoset, dst: LabelledPoset) -> Optional[dict[int, int]]:
    """Subsumption ``h: src -> dst`` between explicit posets, as an event map."""
    st, sl, sp = src.encoding()
    dt, dl, dp = dst.encoding()
    h = find_subsumption(sl, sp, dl, dp)
    if h is None:
        return None
    return {st[i]: dt[j] for i, j in enumerate(h)}


def sequential_factors(u: Pomset) -> tuple[Pomset, ...]:
    """The unique decomposition of ``u`` into non-sequential factors."""
    if u is UNIT:
        return ()
    return u.children if isinstance(u, SeqP) else (u,)


def parallel_factors(u: Pomset) -> tuple[Pomset, ...]:
    if u is UNIT:
        return ()
    return u.children if isinstance(u, ParP) else (u,)


def sub_multisets(items: tuple) -> set[tuple]:
    """All sub-multisets of a sorted tuple, as sorted tuples."""
    out = set()
    for r in range(len(items) + 1):
        out.update(combinations(items, r))
    return out
