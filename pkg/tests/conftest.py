import random
import re
from functools import lru_cache

from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

from ckaclose.pomsets import Prim, par_compose, seq_compose
from ckaclose.semantics import bka_language
from ckaclose.terms import ONE, ZERO, Par, letter, par, parse, plus, seq, simplify, star, subterms

settings.register_profile("ckaclose", deadline=None, suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("ckaclose")

ABC = "abc"


def pom(text):
    """The single pomset denoted by a star-free, choice-free expression."""
    (p,) = bka_language(parse(text), 0)
    return p


def random_pomset(rng, n, alphabet=ABC):
    if n == 0:
        return pom("1")
    if n == 1:
        return Prim(rng.choice(alphabet))
    k = rng.randint(1, n - 1)
    op = seq_compose if rng.random() < 0.5 else par_compose
    return op(random_pomset(rng, k, alphabet), random_pomset(rng, n - k, alphabet))


def random_term(rng, depth, alphabet=ABC, stars=True, constants=True):
    roll = rng.random()
    if depth == 0 or roll < 0.2:
        if constants and rng.random() < 0.15:
            return rng.choice((ZERO, ONE))
        return letter(rng.choice(alphabet))
    ops = [plus, seq, par] + ([star] if stars else [])
    op = rng.choice(ops)
    if op is star:
        return star(random_term(rng, depth - 1, alphabet, stars, constants))
    return op(random_term(rng, depth - 1, alphabet, stars, constants), random_term(rng, depth - 1, alphabet, stars, constants))


def terms_strategy(max_leaves=6, stars=True, constants=True, alphabet=ABC):
    leaves = [st.sampled_from([letter(a) for a in alphabet])]
    if constants:
        leaves.append(st.sampled_from([ZERO, ONE]))
    base = st.one_of(*leaves)

    def grow(inner):
        pair = st.tuples(inner, inner)
        opts = [pair.map(lambda t: plus(*t)), pair.map(lambda t: seq(*t)), pair.map(lambda t: par(*t))]
        if stars:
            opts.append(inner.map(star))
        return st.one_of(*opts)

    return st.recursive(base, grow, max_leaves=max_leaves)


def pomsets_strategy(max_events=6, alphabet=ABC):
    return st.builds(
        lambda seed, n: random_pomset(random.Random(seed), n, alphabet),
        st.integers(0, 2**32),
        st.integers(0, max_events),
    )


# -- the star-free corpus --------------------------------------------------------


def par_count(t):
    return sum(len(s.operands) - 1 for s in subterms(t) if isinstance(s, Par))


def _rename(t):
    """Rename letters in order of first appearance, so renamings collapse."""
    m = {}
    for ch in re.findall(r"[abc]", str(t)):
        if ch not in m:
            m[ch] = ABC[len(m)]
    return simplify(parse(str(t).translate(str.maketrans(m))))


@lru_cache(maxsize=None)
def _trees(n):
    if n == 1:
        return frozenset(letter(a) for a in ABC)
    out = set()
    for i in range(1, n):
        for x in _trees(i):
            for y in _trees(n - i):
                out.update((plus(x, y), seq(x, y), par(x, y)))
    return frozenset(out)


@lru_cache(maxsize=None)
def star_free_corpus(exhaustive=5, sampled=6, samples=1000, seed=7):
    """Star-free terms over a, b, c with at most two parallel operators.

    Every term with up to ``exhaustive`` letter occurrences is included
    (deduplicated modulo simplification and letter renaming); terms with
    ``sampled`` occurrences are drawn at random, since there are millions.
    """
    found = set()
    for n in range(1, exhaustive + 1):
        for t in _trees(n):
            s = simplify(t)
            if par_count(s) <= 2:
                found.add(_rename(s))
    rng = random.Random(seed)
    extra = set()
    while len(extra) < samples:
        t = _random_tree(rng, sampled)
        s = simplify(t)
        if par_count(s) <= 2:
            r = _rename(s)
            if r not in found:
                extra.add(r)
    return tuple(sorted(found)) + tuple(sorted(extra))


def _random_tree(rng, n):
    if n == 1:
        return letter(rng.choice(ABC))
    k = rng.randint(1, n - 1)
    op = rng.choice((plus, seq, par))
    return op(_random_tree(rng, k), _random_tree(rng, n - k))


def small_corpus():
    """Up to four letter occurrences; enough for the quadratic properties."""
    return tuple(t for t in star_free_corpus() if len(re.findall(r"[abc]", str(t))) <= 4)
