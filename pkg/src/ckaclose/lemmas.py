"""Executable factorisation, Levi and interpolation constructions on pomsets.

Each function finds a subsumption (or isomorphism) witnessing its
precondition and then cuts the posets along the images of the given factors.
Restrictions of N-free posets stay N-free, so every piece converts back to a
series-parallel normal form.
"""

from __future__ import annotations

from typing import Sequence

from .pomsets import (
    UNIT,
    LabelledPoset,
    Pomset,
    from_labelled_poset,
    par_compose,
    poset_subsumption,
    to_labelled_poset,
)

__all__ = [
    "PreconditionError",
    "factor_seq_subsumption",
    "factor_par_subsumption",
    "levi_seq",
    "levi_par",
    "interpolate",
]


class PreconditionError(ValueError):
    pass


def _poset_of(parts: Sequence[Pomset], sequential: bool) -> tuple[LabelledPoset, list[frozenset[int]]]:
    labelling: dict[int, str] = {}
    pairs: set[tuple[int, int]] = set()
    blocks: list[frozenset[int]] = []
    start = 0
    for p in parts:
        sub = to_labelled_poset(p)
        labelling.update({x + start: l for x, l in sub.labelling.items()})
        pairs.update((x + start, y + start) for x, y in sub.order)
        block = frozenset(x + start for x in sub.carrier)
        if sequential:
            pairs.update((x, y) for b in blocks for x in b for y in block)
        blocks.append(block)
        start += p.events
    return LabelledPoset.build(labelling, pairs), blocks


def _cut(p: LabelledPoset, events) -> Pomset:
    return from_labelled_poset(p.restrict(events))


def factor_seq_subsumption(u: Pomset, v0: Pomset, v1: Pomset) -> tuple[Pomset, Pomset]:
    """Given ``u ⊑ v0.v1``, return ``(u0, u1)`` with ``u = u0.u1``, ``u0 ⊑ v0``, ``u1 ⊑ v1``."""
    pu = to_labelled_poset(u)
    pv, (b0, b1) = _poset_of([v0, v1], sequential=True)
    h = poset_subsumption(pv, pu)
    if h is None:
        raise PreconditionError(f"{u} is not subsumed by ({v0}).({v1})")
    return _cut(pu, {h[x] for x in b0}), _cut(pu, {h[x] for x in b1})


def factor_par_subsumption(u0: Pomset, u1: Pomset, v: Pomset) -> tuple[Pomset, Pomset]:
    """Given ``u0|u1 ⊑ v``, return ``(v0, v1)`` with ``v = v0|v1``, ``u0 ⊑ v0``, ``u1 ⊑ v1``."""
    pu, (b0, b1) = _poset_of([u0, u1], sequential=False)
    pv = to_labelled_poset(v)
    h = poset_subsumption(pv, pu)
    if h is None:
        raise PreconditionError(f"({u0})|({u1}) is not subsumed by {v}")
    return (
        _cut(pv, {x for x in pv.carrier if h[x] in b0}),
        _cut(pv, {x for x in pv.carrier if h[x] in b1}),
    )


def levi_seq(u: Pomset, v: Pomset, ws: Sequence[Pomset]) -> tuple[int, Pomset, Pomset]:
    """Given ``u.v ⊑ w0...w(n-1)`` with every ``wi`` non-empty, find ``(m, y, z)``.

    The witness satisfies ``y.z ⊑ ws[m]``, ``u ⊑ w0...w(m-1).y`` and
    ``v ⊑ z.w(m+1)...``.  ``m`` is the first factor touching ``v``'s events
    (the last factor if none does).
    """
    if not ws:
        raise PreconditionError("need at least one factor")
    if any(w is UNIT for w in ws):
        raise PreconditionError("factors must be non-empty")
    puv, (bu, bv) = _poset_of([u, v], sequential=True)
    pw, blocks = _poset_of(list(ws), sequential=True)
    h = poset_subsumption(pw, puv)
    if h is None:
        raise PreconditionError("u.v is not subsumed by the product of ws")
    m = next((i for i, b in enumerate(blocks) if any(h[x] in bv for x in b)), len(ws) - 1)
    wm = pw.restrict(blocks[m])
    y = _cut(wm, {x for x in wm.carrier if h[x] in bu})
    z = _cut(wm, {x for x in wm.carrier if h[x] in bv})
    return m, y, z


def levi_par(u: Pomset, v: Pomset, w: Pomset, x: Pomset) -> tuple[Pomset, Pomset, Pomset, Pomset]:
    """Given ``u|v = w|x``, return ``(y0, y1, z0, z1)`` with
    ``u = y0|y1``, ``v = z0|z1``, ``w = y0|z0`` and ``x = y1|z1``."""
    if par_compose(u, v) is not par_compose(w, x):
        raise PreconditionError("u|v and w|x differ")
    puv, (bu, bv) = _poset_of([u, v], sequential=False)
    pwx, (bw, bx) = _poset_of([w, x], sequential=False)
    iso = poset_subsumption(pwx, puv)
    assert iso is not None  # equal pomsets, equal order sizes: an isomorphism
    img_w = {iso[e] for e in bw}
    img_x = {iso[e] for e in bx}
    return (
        _cut(puv, bu & img_w),
        _cut(puv, bu & img_x),
        _cut(puv, bv & img_w),
        _cut(puv, bv & img_x),
    )


def interpolate(u: Pomset, v: Pomset, w: Pomset, x: Pomset) -> tuple[Pomset, Pomset, Pomset, Pomset]:
    """Given ``u.v ⊑ w|x``, return ``(w0, w1, x0, x1)`` with
    ``w0.w1 ⊑ w``, ``x0.x1 ⊑ x``, ``u ⊑ w0|x0`` and ``v ⊑ w1|x1``."""
    puv, (bu, bv) = _poset_of([u, v], sequential=True)
    pwx, (bw, bx) = _poset_of([w, x], sequential=False)
    h = poset_subsumption(pwx, puv)
    if h is None:
        raise PreconditionError("u.v is not subsumed by w|x")
    return (
        _cut(pwx, {e for e in bw if h[e] in bu}),
        _cut(pwx, {e for e in bw if h[e] in bv}),
        _cut(pwx, {e for e in bx if h[e] in bu}),
        _cut(pwx, {e for e in bx if h[e] in bv}),
    )
