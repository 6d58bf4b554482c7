"""Kleene-algebra rewriting that keeps terms small during closure construction.

:func:`tidy` applies laws valid in every Kleene algebra, hence in bi-Kleene
algebra, and never the exchange law:

* inside a star, summands ``f*``, ``f.f*`` and ``x1*...xn*`` are replaced by
  ``f`` and ``x1 + ... + xn`` (``(f* + g)* = (f + g)*`` and relatives);
* a summand below a sibling (by :func:`leq`) is dropped, and ``1 + h.h*``
  becomes ``h*``;
* common prefixes and suffixes of summands are factored out;
* ``x*.y*`` collapses when one factor is below the other, and
  ``e*.(f.e*)*`` and ``(e*.f)*.e*`` denest to ``(e + f)*``.

Unlike :func:`ckaclose.terms.simplify`, these laws preserve the full language
but not the star-bounded approximations.
"""

from __future__ import annotations

from collections import defaultdict

from .terms import ONE, ZERO, Letter, One, Par, Plus, Seq, Star, Term, Zero, is_empty, par, plus, seq, simplify, star

__all__ = ["tidy", "below_star", "leq"]

_cache: dict[Term, Term] = {}


def _summands(t: Term) -> tuple[Term, ...]:
    return t.operands if isinstance(t, Plus) else (t,)


def _factors(t: Term) -> tuple[Term, ...]:
    return t.operands if isinstance(t, Seq) else (t,)


def below_star(x: Term, g: Term) -> bool:
    """Sufficient syntactic test for ``x <= g*``."""
    gs = set(_summands(g))

    def ok(t: Term) -> bool:
        if t is ONE or t is ZERO or t in gs:
            return True
        if isinstance(t, Star):
            return t.body is g or ok(t.body)
        if isinstance(t, (Plus, Seq)):
            return all(ok(o) for o in t.operands)
        return False

    return ok(x)


_leq_cache: dict[tuple[Term, Term], bool] = {}


def leq(x: Term, y: Term) -> bool:
    """Sound but incomplete syntactic test for ``x <= y`` in bi-Kleene algebra.

    Uses monotonicity of the operators, ``1 <= y`` for nullable ``y``,
    ``f <= g*`` when ``f <= g``, closure of ``g*`` under sequencing, and
    skipping of nullable factors.
    """
    if x is y or x is ZERO or is_empty(x):
        return True
    if x is ONE:
        return y.nullable
    key = (x, y)
    hit = _leq_cache.get(key)
    if hit is None:
        _leq_cache[key] = False  # cycles count as failure
        hit = _leq(x, y)
        _leq_cache[key] = hit
    return hit


def _leq(x: Term, y: Term) -> bool:
    if isinstance(x, Plus):
        return all(leq(o, y) for o in x.operands)
    if isinstance(y, Plus) and any(leq(x, o) for o in y.operands):
        return True
    if isinstance(y, Star):
        if leq(x, y.body) or below_star(x, y.body):
            return True
        if isinstance(x, Star) and leq(x.body, y):
            return True
        if isinstance(x, Seq) and all(leq(o, y) for o in x.operands):
            return True
    if isinstance(y, Seq):
        return _leq_seq(_factors(x), y.operands)
    if isinstance(y, Par):
        return _leq_par(list(x.operands) if isinstance(x, Par) else [x], list(y.operands))
    if isinstance(x, Star) and isinstance(y, Star):
        return leq(x.body, y.body)
    return False


def _leq_seq(xs: tuple[Term, ...], ys: tuple[Term, ...]) -> bool:
    memo: dict[tuple[int, int], bool] = {}

    def go(i: int, j: int) -> bool:
        if j == len(ys):
            return i == len(xs)
        r = memo.get((i, j))
        if r is not None:
            return r
        yj = ys[j]
        r = (
            (yj.nullable and go(i, j + 1))
            or (i < len(xs) and leq(xs[i], yj) and go(i + 1, j + 1))
            or (i < len(xs) and isinstance(yj, Star) and leq(xs[i], yj) and go(i + 1, j))
        )
        memo[(i, j)] = r
        return r

    return go(0, 0)


def _leq_par(xs: list[Term], ys: list[Term]) -> bool:
    if not xs:
        return all(y.nullable for y in ys)
    x, rest = xs[0], xs[1:]
    for n, y in enumerate(ys):
        if leq(x, y) and _leq_par(rest, ys[:n] + ys[n + 1 :]):
            return True
    return False


def _unstar(s: Term) -> tuple[Term, ...] | None:
    """Summands that may replace ``s`` inside a star body, or None."""
    if isinstance(s, Star):
        return _summands(s.body)
    fs = _factors(s)
    if len(fs) > 1:
        if all(isinstance(f, Star) for f in fs):
            return tuple(x for f in fs for x in _summands(f.body))
        last, first = fs[-1], fs[0]
        if isinstance(last, Star) and simplify(seq(*fs[:-1])) is last.body:
            return (last.body,)
        if isinstance(first, Star) and simplify(seq(*fs[1:])) is first.body:
            return (first.body,)
    return None


def _star(body: Term) -> Term:
    parts = set(_summands(body))
    changed = True
    while changed:
        changed = False
        for s in list(parts):
            repl = _unstar(s)
            if repl is not None:
                parts.discard(s)
                parts.update(repl)
                changed = True
        parts.discard(ONE)
        for s in sorted(parts):
            rest = plus(*(p for p in parts if p is not s))
            if parts != {s} and below_star(s, rest):
                # (s + R)* = R* when s <= R*
                parts.discard(s)
                changed = True
                break
            fs = _factors(s)
            core = simplify(seq(*(f for f in fs if not isinstance(f, Star))))
            if len(fs) > 1 and core is not s and core is not ONE:
                # dropping star factors is harmless when they stay below the new body
                wider = plus(core, rest) if parts != {s} else core
                if all(below_star(f, wider) for f in fs if isinstance(f, Star)):
                    parts.discard(s)
                    parts.add(core)
                    changed = True
                    break
    if not parts:
        return ONE
    inner = _plus(parts)
    if inner is ONE or inner is ZERO:
        return ONE
    return simplify(star(inner))


def _group(ops: list[Term], prefix: bool) -> list[Term] | None:
    groups: dict[Term, list[Term]] = defaultdict(list)
    for o in ops:
        fs = _factors(o)
        key = fs[0] if prefix else fs[-1]
        rest = simplify(seq(*fs[1:])) if prefix else simplify(seq(*fs[:-1]))
        groups[key].append(rest)
    if all(len(v) == 1 for v in groups.values()):
        return None
    out = []
    for key, rests in groups.items():
        inner = _plus(rests) if len(rests) > 1 else rests[0]
        out.append(simplify(seq(key, inner) if prefix else seq(inner, key)))
    return out


def _plus(ops) -> Term:
    t = simplify(plus(*ops))
    while isinstance(t, Plus):
        before = t.operands
        ops = list(before)
        if ONE in ops:
            for i, o in enumerate(ops):
                repl = _unstar(o) if isinstance(o, Seq) else None
                if repl is not None and len(repl) == 1:
                    ops[i] = simplify(star(repl[0]))
                    ops.remove(ONE)
                    break
        keep = list(ops)
        for o in ops:
            if any(s is not o and leq(o, s) for s in keep):
                keep.remove(o)
        if ONE in keep and any(o.nullable for o in keep if o is not ONE):
            keep.remove(ONE)
        if keep != list(before):
            t = simplify(plus(*keep))
            continue
        regrouped = _group(ops, True) or _group(ops, False)
        if regrouped is None:
            break
        t = simplify(plus(*regrouped))
    return t


def _seq(ops) -> Term:
    t = simplify(seq(*ops))
    while isinstance(t, Seq):
        fs = list(t.operands)
        new = None
        for i in range(len(fs) - 1):
            x, y = fs[i], fs[i + 1]
            if not (isinstance(x, Star) and isinstance(y, Star)):
                continue
            if below_star(x, y.body):
                new = fs[:i] + fs[i + 1 :]
            elif below_star(y, x.body):
                new = fs[: i + 1] + fs[i + 2 :]
            else:
                # e*.(f.e*)* and (e*.f)*.e* both equal (e + f)*
                yf, xf = _factors(y.body), _factors(x.body)
                if len(yf) > 1 and yf[-1] is x:
                    merged = _star(plus(x.body, seq(*yf[:-1])))
                elif len(xf) > 1 and xf[0] is y:
                    merged = _star(plus(y.body, seq(*xf[1:])))
                else:
                    continue
                new = fs[:i] + [merged] + fs[i + 2 :]
            break
        if new is None:
            break
        t = simplify(seq(*new))
    return t


def _step(e: Term) -> Term:
    if isinstance(e, (Zero, One, Letter)):
        return e
    if isinstance(e, Star):
        return _star(tidy(e.body))
    kids = [tidy(o) for o in e.operands]
    if isinstance(e, Plus):
        return _plus(kids)
    if isinstance(e, Seq):
        return _seq(kids)
    if isinstance(e, Par):
        return simplify(par(*kids))
    raise TypeError(e)


def tidy(e: Term) -> Term:
    """Shrink ``e`` with Kleene-algebra laws; the language is unchanged."""
    e = simplify(e)
    hit = _cache.get(e)
    if hit is not None:
        return hit
    cur = e
    while True:
        nxt = _step(cur)
        if nxt is cur:
            break
        cur = nxt
    _cache[e] = cur
    return cur
