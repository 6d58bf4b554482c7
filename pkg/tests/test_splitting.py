import pytest
from hypothesis import given

from ckaclose.pomsets import UNIT, ParP, par_all, seq_all
from ckaclose.semantics import bka_language, downclose
from ckaclose.splitting import par_splices, remainders, seq_splices
from ckaclose.terms import ONE, ZERO, Letter, One, Par, Plus, Seq, Star, Zero, par, parse, seq, simplify, size, width

from conftest import small_corpus, terms_strategy


def S(text):
    return simplify(parse(text))


def pairs(*items):
    return frozenset((S(l), S(r)) for l, r in items)


# -- property checks shared with the acceptance run ------------------------------------


def _par_cuts(p):
    kids = p.children if isinstance(p, ParP) else ((p,) if p is not UNIT else ())
    for mask in range(2 ** len(kids)):
        yield (par_all(k for n, k in enumerate(kids) if mask >> n & 1),
               par_all(k for n, k in enumerate(kids) if not mask >> n & 1))


def _seq_cuts(p):
    kids = p.children if p.is_sequential else ((p,) if p is not UNIT else ())
    for i in range(len(kids) + 1):
        yield seq_all(kids[:i]), seq_all(kids[i:])


def splitting_failures(e, k, exact=False):
    """Violations of the domination, width and density properties of ``e`` at bound ``k``.

    The sequential properties compare against languages at bound
    ``k * size(e)``; with ``exact`` they use the unbounded languages instead
    (restricted to the event counts in question, which loses nothing).
    """
    bad = []
    ps, ss = par_splices(e), seq_splices(e)
    lang = bka_language(e, k)
    langs = {}

    def L(t):
        if t not in langs:
            langs[t] = bka_language(t, k)
        return langs[t]

    for l, r in ps:
        if not bka_language(par(l, r), k) <= lang:
            bad.append(("par-domination", l, r))
        if width(l) + width(r) > width(e):
            bad.append(("par-width", l, r))
    for p in lang:
        for v, w in _par_cuts(p):
            if not any(v in L(l) and w in L(r) for l, r in ps):
                bad.append(("par-density", p, (v, w)))

    big = k * size(e)
    down = downclose(lang)
    products = {(l, r): downclose(bka_language(seq(l, r), k)) for l, r in ss}
    # every later question concerns pomsets of at most this many events
    reach = max((p.events for x in (down, *products.values()) for p in x), default=0)
    wide = {}

    def C(t):
        if t not in wide:
            wide[t] = downclose(bka_language(t, None if exact else big, max_events=reach))
        return wide[t]

    for (l, r), lr in products.items():
        if not lr <= C(e):
            bad.append(("seq-domination", l, r))
        if width(l) > width(e) or width(r) > width(e):
            bad.append(("seq-width", l, r))
    for p in down:
        for v, w in _seq_cuts(p):
            if not any(v in C(l) and w in C(r) for l, r in ss):
                bad.append(("seq-density", p, (v, w)))
    return bad


def remainder_bound(e):
    """The structural over-approximation of the remainders of ``e``, minus ``e``."""
    if isinstance(e, Zero):
        out = set()
    elif isinstance(e, One):
        out = {ONE}
    elif isinstance(e, Letter):
        out = {e, ONE}
    elif isinstance(e, Plus):
        out = set().union(*(remainders(o) for o in e.operands))
    elif isinstance(e, Seq):
        head, tail = e.operands[0], seq(*e.operands[1:])
        out = {seq(x, tail) for x in remainders(head)} | set(remainders(tail))
    elif isinstance(e, Par):
        head, tail = e.operands[0], par(*e.operands[1:])
        out = {par(x, y) for x in remainders(head) for y in remainders(tail)}
    elif isinstance(e, Star):
        out = {ONE, e} | {seq(x, e) for x in remainders(e.body)}
    return {simplify(t) for t in out}


# -- examples ---------------------------------------------------------------------


def test_par_splices_examples():
    assert par_splices(parse("a")) == pairs(("1", "a"), ("a", "1"))
    assert par_splices(ZERO) == pairs(("1", "0"), ("0", "1"))
    got = par_splices(parse("(a|b)|c"))
    for l, r in [("1", "a|b|c"), ("a", "b|c"), ("b", "a|c"), ("c", "a|b"), ("a|b", "c"), ("a|c", "b")]:
        assert (S(l), S(r)) in got


def test_par_splices_of_sequences_need_nullable_neighbours():
    assert (S("a"), S("b")) in par_splices(parse("(a|b).c*"))
    assert (S("a"), S("b")) not in par_splices(parse("(a|b).c"))


def test_seq_splices_examples():
    assert seq_splices(parse("a")) == pairs(("a", "1"), ("1", "a"))
    assert seq_splices(ONE) == pairs(("1", "1"))
    assert seq_splices(ZERO) == frozenset()
    assert (S("(a.b+c)*.a"), S("b.(a.b+c)*")) in seq_splices(parse("(a.b+c)*"))


def test_remainders_examples():
    assert remainders(parse("a")) == {S("a"), ONE}
    assert remainders(ONE) == {ONE}
    assert remainders(parse("a*")) == {S("a*"), ONE, S("a.a*")}
    assert remainders(parse("a.b")) == {S("a.b"), S("b"), ONE}


@pytest.mark.parametrize("text", ["a*|b", "(a.b+c)*|a", "a.(b|c)*", "(a+b.c)*.a"])
def test_remainders_within_structural_bound(text):
    e = S(text)
    assert remainders(e) - {e} <= remainder_bound(e)


@given(terms_strategy(max_leaves=5))
def test_remainder_bound_holds(e):
    e = simplify(e)
    assert remainders(e) - {e} <= remainder_bound(e)


@given(terms_strategy(max_leaves=3))
def test_splitting_properties_random(e):
    e = simplify(e)
    for k in (1, 2):
        assert splitting_failures(e, k, exact=True) == []


def test_bound_zero_truncates_below_parallel_splices():
    # a is a parallel splice of a*, yet bound 0 leaves only the empty pomset
    e = S("a*")
    assert (S("a"), ONE) in par_splices(e)
    assert ("par-domination", S("a"), ONE) in splitting_failures(e, 0, exact=True)
    assert splitting_failures(e, 1, exact=True) == []


def test_size_scaled_bound_is_too_small_for_star_splices():
    # a*.a.a* holds 2k+1 letters at bound k, a* only 2k at bound k*size(a*)
    e = S("a*")
    assert ("seq-domination", S("a*.a"), S("a*")) in splitting_failures(e, 1)


@pytest.mark.parametrize("text", ["a*|b", "(a.b+c)*", "a*.b|c", "(a|b)*"])
def test_splitting_properties_starred(text):
    for k in (1, 2):
        assert splitting_failures(S(text), k, exact=True) == []


def test_splitting_properties_small_corpus():
    failures = [(e, f) for e in small_corpus() for f in splitting_failures(e, 0)]
    assert failures == []
