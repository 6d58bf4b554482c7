import random

import pytest

from ckaclose.lemmas import (
    PreconditionError,
    factor_par_subsumption,
    factor_seq_subsumption,
    interpolate,
    levi_par,
    levi_seq,
)
from ckaclose.pomsets import UNIT, ParP, par_all, par_compose, seq_all, seq_compose, subsumes
from ckaclose.semantics import down_set, enumerate_sp

from conftest import pom, random_pomset


def check_factor_seq(u, v0, v1):
    u0, u1 = factor_seq_subsumption(u, v0, v1)
    assert seq_compose(u0, u1) is u
    assert subsumes(u0, v0) and subsumes(u1, v1)


def check_factor_par(u0, u1, v):
    v0, v1 = factor_par_subsumption(u0, u1, v)
    assert par_compose(v0, v1) is v
    assert subsumes(u0, v0) and subsumes(u1, v1)


def check_levi_seq(u, v, ws):
    m, y, z = levi_seq(u, v, ws)
    assert 0 <= m < len(ws)
    assert subsumes(seq_compose(y, z), ws[m])
    assert subsumes(u, seq_all([*ws[:m], y]))
    assert subsumes(v, seq_all([z, *ws[m + 1:]]))


def check_levi_par(u, v, w, x):
    y0, y1, z0, z1 = levi_par(u, v, w, x)
    assert par_compose(y0, y1) is u and par_compose(z0, z1) is v
    assert par_compose(y0, z0) is w and par_compose(y1, z1) is x


def check_interpolate(u, v, w, x):
    w0, w1, x0, x1 = interpolate(u, v, w, x)
    assert subsumes(seq_compose(w0, w1), w) and subsumes(seq_compose(x0, x1), x)
    assert subsumes(u, par_compose(w0, x0)) and subsumes(v, par_compose(w1, x1))


def test_factor_seq_examples():
    assert factor_seq_subsumption(pom("a.b"), pom("a"), pom("b")) == (pom("a"), pom("b"))
    assert factor_seq_subsumption(pom("a.b.c"), pom("a|b"), pom("c")) == (pom("a.b"), pom("c"))
    assert factor_seq_subsumption(pom("a.b"), UNIT, pom("a|b")) == (UNIT, pom("a.b"))


def test_factor_par_examples():
    assert factor_par_subsumption(pom("a"), pom("b"), pom("a|b")) == (pom("a"), pom("b"))
    assert factor_par_subsumption(pom("a.b"), pom("c"), pom("a|b|c")) == (pom("a|b"), pom("c"))
    assert factor_par_subsumption(pom("a|b"), UNIT, pom("a|b")) == (pom("a|b"), UNIT)


def test_levi_seq_examples():
    check_levi_seq(pom("a"), pom("b"), [pom("a"), pom("b")])
    check_levi_seq(UNIT, pom("a|b"), [pom("a|b")])
    check_levi_seq(pom("a.b"), pom("c"), [pom("a|b"), pom("c")])


def test_levi_par_examples():
    u, v = pom("a.b"), pom("c")
    assert levi_par(u, v, u, v) == (u, UNIT, UNIT, v)
    assert levi_par(pom("a|b"), pom("c"), pom("a"), pom("b|c")) == (pom("a"), pom("b"), UNIT, pom("c"))
    assert levi_par(UNIT, UNIT, UNIT, UNIT) == (UNIT,) * 4


def test_interpolate_examples():
    assert interpolate(pom("a"), pom("b"), pom("a"), pom("b")) == (pom("a"), UNIT, UNIT, pom("b"))
    check_interpolate(UNIT, pom("a.b"), pom("a"), pom("b"))
    check_interpolate(pom("a|c"), pom("b"), pom("a.b"), pom("c"))


def test_preconditions_are_enforced():
    with pytest.raises(PreconditionError):
        factor_seq_subsumption(pom("b.a"), pom("a"), pom("b"))
    with pytest.raises(PreconditionError):
        factor_par_subsumption(pom("a"), pom("b"), pom("a.b"))
    with pytest.raises(PreconditionError):
        levi_seq(pom("a"), pom("b"), [UNIT, pom("a.b")])
    with pytest.raises(PreconditionError):
        levi_par(pom("a"), pom("b"), pom("a"), pom("c"))
    with pytest.raises(PreconditionError):
        interpolate(pom("a"), pom("b"), pom("b.a"), UNIT)


def lemma_lab(pomsets, seed=0):
    """Run every lemma on instances built from ``pomsets``; returns invocation counts.

    Instances satisfy the preconditions by construction: the subsumed side is
    drawn from the exchange-rewrite down-set, the subsuming side from the
    enumerated pomsets above.
    """
    rng = random.Random(seed)
    counts = dict.fromkeys(("factor_seq", "factor_par", "levi_seq", "levi_par", "interpolate"), 0)
    for p in pomsets:
        for (v0, v1) in _splits(p, sequential=True):
            check_factor_seq(_below(seq_compose(v0, v1), rng), v0, v1)
            counts["factor_seq"] += 1
        for (u0, u1) in _splits(p, sequential=False):
            check_factor_par(u0, u1, _above(par_compose(u0, u1), rng))
            counts["factor_par"] += 1
            w, x = _regroup(p, rng)
            check_levi_par(u0, u1, w, x)
            counts["levi_par"] += 1
        ws = [f for f in (p.children if p.is_sequential else (p,)) if f is not UNIT]
        if ws:
            u, v = _cut_word(_below(p, rng), rng)
            check_levi_seq(u, v, ws)
            counts["levi_seq"] += 1
        q = _above(p, rng)
        for (w, x) in _splits(q, sequential=False):
            u, v = _cut_word(_below(par_compose(w, x), rng), rng)
            check_interpolate(u, v, w, x)
            counts["interpolate"] += 1
    return counts


def _splits(p, sequential):
    """Ways of writing ``p`` as a binary composition (units allowed)."""
    if sequential:
        kids = p.children if p.is_sequential else ((p,) if p is not UNIT else ())
        return [(seq_all(kids[:i]), seq_all(kids[i:])) for i in range(len(kids) + 1)]
    kids = p.children if isinstance(p, ParP) else ((p,) if p is not UNIT else ())
    out = []
    for mask in range(2 ** len(kids)):
        left = [k for n, k in enumerate(kids) if mask >> n & 1]
        right = [k for n, k in enumerate(kids) if not mask >> n & 1]
        out.append((par_all(left), par_all(right)))
    return out


def _regroup(p, rng):
    kids = list(p.children) if isinstance(p, ParP) else ([p] if p is not UNIT else [])
    rng.shuffle(kids)
    i = rng.randint(0, len(kids))
    return par_all(kids[:i]), par_all(kids[i:])


def _cut_word(u, rng):
    kids = u.children if u.is_sequential else ((u,) if u is not UNIT else ())
    i = rng.randint(0, len(kids))
    return seq_all(kids[:i]), seq_all(kids[i:])


def _below(v, rng):
    return rng.choice(sorted(down_set(v)))


def _above(u, rng):
    return rng.choice(sorted(p for p in enumerate_sp(u.labels) if subsumes(u, p)))


def test_random_instances():
    rng = random.Random(5)
    pool = [random_pomset(rng, rng.randint(0, 5)) for _ in range(150)]
    counts = lemma_lab(pool, seed=5)
    assert all(n > 0 for n in counts.values()), counts
