"""Expression syntax for bi-Kleene and concurrent Kleene algebra.

Terms are hash-consed: building the same term twice yields the same object,
so equality is identity and terms are cheap dictionary keys.  The n-ary
constructors :func:`plus`, :func:`seq` and :func:`par` flatten nested nodes
of the same kind but do not otherwise normalise; :func:`simplify` applies the
unit, annihilator, idempotence and commutativity laws.
"""

from __future__ import annotations

import re
import weakref
from typing import Iterable, Iterator, Optional

__all__ = [
    "Term",
    "Zero",
    "One",
    "Letter",
    "Plus",
    "Seq",
    "Par",
    "Star",
    "ZERO",
    "ONE",
    "letter",
    "plus",
    "seq",
    "par",
    "star",
    "nullable",
    "width",
    "is_empty",
    "size",
    "letters",
    "is_star_free",
    "simplify",
    "parse",
    "ParseError",
    "UnknownSymbolError",
]

_INTERNED: "weakref.WeakValueDictionary[tuple, Term]" = weakref.WeakValueDictionary()


class Term:
    """Base class of all terms; never instantiated directly."""

    __slots__ = ("_hash", "nullable", "empty", "width", "size", "_text", "_simp", "__weakref__")

    # filled in by subclasses
    _hash: int
    nullable: bool
    empty: bool
    width: int
    size: int

    def __hash__(self) -> int:
        return self._hash

    def __eq__(self, other: object) -> bool:
        return self is other

    def __ne__(self, other: object) -> bool:
        return self is not other

    def __lt__(self, other: "Term") -> bool:
        return str(self) < str(other)

    def __repr__(self) -> str:
        return f"Term({str(self)!r})"

    def __str__(self) -> str:
        text = self._text
        if text is None:
            text = self._text = _render(self)
        return text

    def __reduce__(self):
        return (parse, (str(self),))

    # operator sugar, handy in tests and at the REPL
    def __add__(self, other: "Term") -> "Term":
        return plus(self, other)

    def __mul__(self, other: "Term") -> "Term":
        return seq(self, other)

    def __or__(self, other: "Term") -> "Term":
        return par(self, other)

    @property
    def children(self) -> tuple["Term", ...]:
        return ()


def _intern(cls, payload, init):
    key = (cls, payload)
    node = _INTERNED.get(key)
    if node is None:
        node = object.__new__(cls)
        node._text = None
        node._simp = None
        init(node)
        node._hash = hash(key)
        _INTERNED[key] = node
    return node


class Zero(Term):
    __slots__ = ()

    def __new__(cls):
        def init(n):
            n.nullable, n.empty, n.width, n.size = False, True, 0, 1

        return _intern(cls, None, init)


class One(Term):
    __slots__ = ()

    def __new__(cls):
        def init(n):
            n.nullable, n.empty, n.width, n.size = True, False, 0, 1

        return _intern(cls, None, init)


class Letter(Term):
    __slots__ = ("symbol",)

    def __new__(cls, symbol: str):
        def init(n):
            n.symbol = symbol
            n.nullable, n.empty, n.width, n.size = False, False, 1, 1

        return _intern(cls, symbol, init)


class _Nary(Term):
    __slots__ = ("operands",)

    @property
    def children(self) -> tuple[Term, ...]:
        return self.operands


class Plus(_Nary):
    __slots__ = ()

    def __new__(cls, operands: tuple[Term, ...]):
        assert len(operands) >= 2

        def init(n):
            n.operands = operands
            n.nullable = any(o.nullable for o in operands)
            n.empty = all(o.empty for o in operands)
            n.width = 0 if n.empty else max(o.width for o in operands)
            n.size = 1 + sum(o.size for o in operands)

        return _intern(cls, operands, init)


class Seq(_Nary):
    __slots__ = ()

    def __new__(cls, operands: tuple[Term, ...]):
        assert len(operands) >= 2

        def init(n):
            n.operands = operands
            n.nullable = all(o.nullable for o in operands)
            n.empty = any(o.empty for o in operands)
            n.width = 0 if n.empty else max(o.width for o in operands)
            n.size = 1 + sum(o.size for o in operands)

        return _intern(cls, operands, init)


class Par(_Nary):
    __slots__ = ()

    def __new__(cls, operands: tuple[Term, ...]):
        assert len(operands) >= 2

        def init(n):
            n.operands = operands
            n.nullable = all(o.nullable for o in operands)
            n.empty = any(o.empty for o in operands)
            n.width = 0 if n.empty else sum(o.width for o in operands)
            n.size = 1 + sum(o.size for o in operands)

        return _intern(cls, operands, init)


class Star(Term):
    __slots__ = ("body",)

    def __new__(cls, body: Term):
        def init(n):
            n.body = body
            n.nullable, n.empty = True, False
            n.width = body.width
            n.size = 1 + body.size

        return _intern(cls, body, init)

    @property
    def children(self) -> tuple[Term, ...]:
        return (self.body,)


ZERO = Zero()
ONE = One()


def letter(symbol: str) -> Letter:
    return Letter(symbol)


def _flat(cls, operands: Iterable[Term]) -> list[Term]:
    out: list[Term] = []
    for o in operands:
        if type(o) is cls:
            out.extend(o.operands)
        else:
            out.append(o)
    return out


def plus(*operands: Term) -> Term:
    """Association-flattened sum; ``plus()`` is 0."""
    ops = _flat(Plus, operands)
    if not ops:
        return ZERO
    return ops[0] if len(ops) == 1 else Plus(tuple(ops))


def seq(*operands: Term) -> Term:
    """Association-flattened sequential composition; ``seq()`` is 1."""
    ops = _flat(Seq, operands)
    if not ops:
        return ONE
    return ops[0] if len(ops) == 1 else Seq(tuple(ops))


def par(*operands: Term) -> Term:
    """Association-flattened parallel composition; ``par()`` is 1."""
    ops = _flat(Par, operands)
    if not ops:
        return ONE
    return ops[0] if len(ops) == 1 else Par(tuple(ops))


def star(body: Term) -> Star:
    return Star(body)


# -- derived attributes -------------------------------------------------------


def nullable(e: Term) -> bool:
    """Whether the empty pomset belongs to the language of ``e``."""
    return e.nullable


def is_empty(e: Term) -> bool:
    """Syntactic emptiness: 0 annihilates ``.`` and ``|``, is the unit of ``+``."""
    return e.empty


def width(e: Term) -> int:
    """Maximum parallelism of ``e``; 0 when ``e`` denotes the empty language."""
    return e.width


def size(e: Term) -> int:
    """Number of syntax-tree nodes."""
    return e.size


def letters(e: Term) -> set[str]:
    seen: set[Term] = set()
    out: set[str] = set()
    stack = [e]
    while stack:
        t = stack.pop()
        if t in seen:
            continue
        seen.add(t)
        if isinstance(t, Letter):
            out.add(t.symbol)
        stack.extend(t.children)
    return out


def is_star_free(e: Term) -> bool:
    seen: set[Term] = set()
    stack = [e]
    while stack:
        t = stack.pop()
        if isinstance(t, Star):
            return False
        if t not in seen:
            seen.add(t)
            stack.extend(t.children)
    return True


def subterms(e: Term) -> Iterator[Term]:
    """Distinct subterms of ``e``, children before parents."""
    seen: set[Term] = set()
    order: list[Term] = []
    stack: list[tuple[Term, bool]] = [(e, False)]
    while stack:
        t, expanded = stack.pop()
        if expanded:
            order.append(t)
            continue
        if t in seen:
            continue
        seen.add(t)
        stack.append((t, True))
        stack.extend((c, False) for c in reversed(t.children))
    return iter(order)


# -- simplification -----------------------------------------------------------


def _simp_plus(ops: Iterable[Term]) -> Term:
    uniq = {o for o in _flat(Plus, ops) if o is not ZERO}
    if not uniq:
        return ZERO
    if len(uniq) == 1:
        return next(iter(uniq))
    return Plus(tuple(sorted(uniq, key=str)))


def _simp_seq(ops: Iterable[Term]) -> Term:
    out = []
    for o in _flat(Seq, ops):
        if o is ZERO:
            return ZERO
        if o is not ONE:
            out.append(o)
    if not out:
        return ONE
    return out[0] if len(out) == 1 else Seq(tuple(out))


def _simp_par(ops: Iterable[Term]) -> Term:
    out = []
    for o in _flat(Par, ops):
        if o is ZERO:
            return ZERO
        if o is not ONE:
            out.append(o)
    if not out:
        return ONE
    return out[0] if len(out) == 1 else Par(tuple(sorted(out, key=str)))


def _simp_star(body: Term) -> Term:
    while True:
        if body is ZERO or body is ONE:
            return ONE
        if isinstance(body, Plus) and ONE in body.operands:
            body = _simp_plus(o for o in body.operands if o is not ONE)
            continue
        return Star(body)


def simplify(e: Term) -> Term:
    """Normalise ``e`` with bi-Kleene laws that never involve the exchange law.

    Applied: 0/1 folding for ``+``, ``.`` and ``|``; deduplication of summands;
    flattening; operands of ``+`` and ``|`` sorted by their printed form; and
    the star identities 0* = 1* = 1 and (1 + e)* = e*.  Every rule keeps the
    star-bounded language unchanged at every bound; ``(e*)* = e*`` and other
    denesting laws do not, so they live in :mod:`ckaclose.kalaws` instead.
    """
    if e._simp is not None:
        return e._simp
    for t in subterms(e):
        if t._simp is not None:
            continue
        if isinstance(t, Plus):
            r = _simp_plus(o._simp for o in t.operands)
        elif isinstance(t, Seq):
            r = _simp_seq(o._simp for o in t.operands)
        elif isinstance(t, Par):
            r = _simp_par(o._simp for o in t.operands)
        elif isinstance(t, Star):
            r = _simp_star(t.body._simp)
        else:
            r = t
        t._simp = r
        if r._simp is None:
            r._simp = r
    return e._simp


# -- printing -----------------------------------------------------------------

_PREC = {Plus: 0, Par: 1, Seq: 2}


def _render(e: Term) -> str:
    if isinstance(e, Zero):
        return "0"
    if isinstance(e, One):
        return "1"
    if isinstance(e, Letter):
        return e.symbol
    if isinstance(e, Star):
        inner = str(e.body)
        if isinstance(e.body, _Nary):
            inner = f"({inner})"
        return inner + "*"
    prec = _PREC[type(e)]
    parts = []
    for o in e.operands:
        s = str(o)
        # same-kind children cannot occur (flattened), so <= is safe
        if isinstance(o, _Nary) and _PREC[type(o)] <= prec:
            s = f"({s})"
        parts.append(s)
    sep = {Plus: " + ", Par: " | ", Seq: "."}[type(e)]
    return sep.join(parts)


# -- parsing ------------------------------------------------------------------


class ParseError(ValueError):
    def __init__(self, message: str, position: int):
        super().__init__(f"{message} at position {position}")
        self.position = position


class UnknownSymbolError(ParseError):
    pass


_TOKEN = re.compile(r"\s*(?:([a-z][a-z0-9_]*)|([01])|([+.|*()]))")


def _tokenize(text: str) -> list[tuple[str, str, int]]:
    tokens = []
    pos = 0
    while True:
        while pos < len(text) and text[pos].isspace():
            pos += 1
        if pos >= len(text):
            break
        m = _TOKEN.match(text, pos)
        if m is None:
            raise ParseError(f"unexpected character {text[pos]!r}", pos)
        start = m.start(m.lastindex)
        if m.group(1):
            tokens.append(("sym", m.group(1), start))
        elif m.group(2):
            tokens.append(("lit", m.group(2), start))
        else:
            tokens.append(("op", m.group(3), start))
        pos = m.end()
    tokens.append(("end", "", len(text)))
    return tokens


class _Parser:
    # sum := par ('+' par)* ; par := seq ('|' seq)* ; seq := post ('.' post)*
    # post := atom '*'*

    def __init__(self, text: str, alphabet: Optional[Iterable[str]]):
        self.tokens = _tokenize(text)
        self.i = 0
        self.alphabet = None if alphabet is None else set(alphabet)

    def peek(self):
        return self.tokens[self.i]

    def take(self):
        tok = self.tokens[self.i]
        self.i += 1
        return tok

    def parse(self) -> Term:
        e = self.sum()
        kind, value, pos = self.peek()
        if kind != "end":
            raise ParseError(f"unexpected {value!r}", pos)
        return e

    def _chain(self, op: str, sub, build) -> Term:
        items = [sub()]
        while self.peek()[:2] == ("op", op):
            self.take()
            items.append(sub())
        return items[0] if len(items) == 1 else build(*items)

    def sum(self) -> Term:
        return self._chain("+", self.par, plus)

    def par(self) -> Term:
        return self._chain("|", self.seq, par)

    def seq(self) -> Term:
        return self._chain(".", self.post, seq)

    def post(self) -> Term:
        e = self.atom()
        while self.peek()[:2] == ("op", "*"):
            self.take()
            e = Star(e)
        return e

    def atom(self) -> Term:
        kind, value, pos = self.take()
        if kind == "sym":
            if self.alphabet is not None and value not in self.alphabet:
                raise UnknownSymbolError(f"unknown symbol {value!r}", pos)
            return Letter(value)
        if kind == "lit":
            return ONE if value == "1" else ZERO
        if (kind, value) == ("op", "("):
            e = self.sum()
            k2, v2, p2 = self.take()
            if (k2, v2) != ("op", ")"):
                raise ParseError("expected ')'", p2)
            return e
        if kind == "end":
            raise ParseError("unexpected end of input", pos)
        raise ParseError(f"unexpected {value!r}", pos)


def parse(text: str, alphabet: Optional[Iterable[str]] = None) -> Term:
    """Parse an expression; ``*`` binds tighter than ``.``, then ``|``, then ``+``.

    >>> str(parse("e + f . g* | h"))
    'e + f.g* | h'
    """
    return _Parser(text, alphabet).parse()
