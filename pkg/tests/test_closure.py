from concurrent.futures import ThreadPoolExecutor

import pytest

from ckaclose.closure import (
    RecursionGuardError,
    _measured,
    build_system,
    clear_caches,
    close,
    close_par,
    preclose,
    verify_closure,
)
from ckaclose.semantics import bka_language, cka_language
from ckaclose.terms import ONE, par, parse, seq, simplify, width

from conftest import pom, small_corpus

SLICE = 5


def S(text):
    return simplify(parse(text))


def bka(e, n=SLICE):
    return bka_language(e, None, max_events=n)


def cka(e, n=SLICE):
    return cka_language(e, None, max_events=n)


def P(*texts):
    return frozenset(pom(t) for t in texts)


STARRED = ["a*|b", "a*.b|c", "a|b*.c", "(a.b+c)*|a", "a*|b*", "(a|b)*|c", "a.(b|c)*", "(a|b)*", "a*|b|c"]


def test_close_base_cases():
    for text in ("0", "1", "a", "a.b*+c"):
        assert close(S(text)) is S(text)


def test_close_parallel_pair():
    assert bka_language(close(S("a|b")), 2) == P("a|b", "a.b", "b.a")
    assert bka_language(close_par(S("a"), S("b")), 2) == P("a|b", "a.b", "b.a")


def test_close_is_compositional():
    e = S("(a|b).c")
    assert bka(close(e)) == bka(seq(close_par(S("a"), S("b")), S("c")))


def test_close_par_with_unit():
    for text in ("a|b", "a*.b", "(a|b)*"):
        e = S(text)
        assert bka(close_par(e, ONE)) == bka(close(e))


def test_close_par_worked_value():
    c = close_par(S("a*"), S("b"))
    assert cka(c) == cka(S("a*.(a*|b).a*"))
    assert bka(c) == cka(S("a*|b"))


def test_preclose_examples():
    # only non-sequential pomsets need covering; the sequential ones come
    # from the linear system
    assert bka_language(preclose(S("a"), S("b")), 2) == P("a|b")
    assert preclose(ONE, ONE) is ONE
    want = S("a|b|c + a|(b.c + c.b) + b|(a.c + c.a) + c|(a.b + b.a)")
    assert bka_language(preclose(S("a|b"), S("c")), 2) == bka_language(want, 2)


def test_preclose_covers_non_sequential_pomsets():
    for e, f in [("a*", "b"), ("a.b", "c"), ("a|b", "c*")]:
        pre = bka(preclose(S(e), S(f)))
        for p in cka(par(S(e), S(f))):
            if not p.is_sequential:
                assert p in pre


def test_build_system_worked_indices():
    sysm = build_system(S("a*"), S("b"))
    assert set(sysm.index) == {S(t) for t in ("1", "b", "a*", "a.a*", "a*|b", "a.a*|b")}
    diag = sysm.m(S("a*|b"), S("a*|b"))
    assert bka(diag) == bka(S("a.a*"))
    assert sysm.m(S("b"), ONE) is S("b")
    assert all(sysm.p(i) is i for i in sysm.index)


def test_build_system_of_units():
    sysm = build_system(ONE, ONE)
    assert sysm.index == [ONE]
    assert sysm.m(ONE, ONE) is ONE and sysm.p(ONE) is ONE


@pytest.mark.parametrize("text", STARRED)
def test_closure_on_exact_slices(text):
    e = S(text)
    c = close(e)
    assert bka(c) == cka(e)
    assert cka(c) == cka(e)


def test_star_free_exactness_small_corpus():
    bad = [e for e in small_corpus() if bka_language(close(e), 0) != cka_language(e, 0)]
    assert bad == []


def test_width_preservation():
    for e in list(small_corpus()) + [S(t) for t in STARRED]:
        assert width(close(e)) == width(e)


def test_memoization_returns_identical_terms():
    e = S("a*|b.c")
    first = close(e)
    assert close(e) is first
    clear_caches()
    assert close(e) is first  # hash-consing makes the rebuilt term identical


def test_concurrent_close():
    clear_caches()
    terms = [S(t) for t in STARRED[:5]] * 4
    with ThreadPoolExecutor(max_workers=4) as pool:
        results = list(pool.map(close, terms))
    assert all(close(t) is r for t, r in zip(terms, results))


def test_depth_guard():
    with _measured(S("a|b")):
        with _measured(S("a")):
            pass
        with pytest.raises(RecursionGuardError):
            with _measured(S("a|b|c")):
                pass


def test_verify_closure_passes():
    for text, k in [("a|b", 1), ("a|b", 2), ("(a|b).c", 2), ("a*.b|c", 2)]:
        report = verify_closure(S(text), k)
        assert report.ok, (text, k, report)


def test_verify_closure_reports_longer_members():
    # the closure of a*|b nests its stars, so at bound 1 it already holds
    # pomsets longer than anything in a*|b at bound 1 * size
    report = verify_closure(S("a*|b"), 1)
    assert report.missing is None
    assert report.extra is not None
    assert report.extra.events > max(p.events for p in bka_language(S("a*|b"), report.upper_bound))
    assert report.extra in cka(S("a*|b"), report.extra.events)


def test_verify_closure_catches_a_wrong_closure():
    report = verify_closure(S("a|b"), 1, closed=S("a|b + a.b"))
    assert report.missing is pom("b.a")
    report = verify_closure(S("a|b"), 1, closed=S("a|b + a.b + b.a + a.a"))
    assert report.extra is pom("a.a")
