"""Command-line front end.

Exit status: 0 equal / success, 1 not equal (or failed verification),
2 usage error, 3 resource limit.
"""

from __future__ import annotations

import argparse
import json
import re
import sys
from pathlib import Path
from typing import Optional, Sequence, TextIO

from .closure import build_system, close, verify_closure
from .linsys import LinearSystem, solve_least
from .pomsets import to_dict, to_dot
from .semantics import DEFAULT_CAP, LanguageTooLarge, bka_language, cka_language, cka_member
from .splitting import par_splices, remainders, seq_splices
from .terms import ZERO, Par, ParseError, Plus, Seq, Star, Term, is_star_free, par, parse, simplify

EXIT_EQUAL, EXIT_DIFFERENT, EXIT_USAGE, EXIT_LIMIT = 0, 1, 2, 3


class SystemFormatError(ValueError):
    def __init__(self, message: str, row: int, column: Optional[int] = None):
        where = f"line {row}" + ("" if column is None else f", column {column}")
        super().__init__(f"{where}: {message}")
        self.row = row
        self.column = column


class _UsageError(Exception):
    pass


# -- system files ---------------------------------------------------------------


_ROW = re.compile(r"^(\S+)\s+\|\s+(.*)$")


def _entry(text: str, row: int, col: int) -> Term:
    if text == "_":
        return ZERO
    try:
        return parse(text)
    except ParseError as exc:
        raise SystemFormatError(str(exc), row, col) from None


def loads_system(text: str) -> LinearSystem:
    """Parse the tableau format.

    The first non-blank line lists index names.  Every further line reads
    ``name | m1 m2 ... mn ; p`` with one whitespace-free expression per column
    (``_`` for 0); the bar after the row name must be surrounded by spaces,
    since names such as ``a*|b`` may contain bars themselves.  Omitted rows are all zero.  Lines starting with ``#`` are
    comments.
    """
    lines = [(n, l.strip()) for n, l in enumerate(text.splitlines(), 1)]
    lines = [(n, l) for n, l in lines if l and not l.startswith("#")]
    if not lines:
        return LinearSystem([])
    head_no, head = lines[0]
    index = head.split()
    if len(set(index)) != len(index):
        raise SystemFormatError("duplicate index name", head_no)
    pos = {name: i for i, name in enumerate(index)}
    matrix, vector = {}, {}
    seen = set()
    for n, line in lines[1:]:
        m = _ROW.match(line)
        if m is None or ";" not in line:
            raise SystemFormatError("expected 'name | entries ; vector'", n)
        name, rest = m.group(1), m.group(2)
        if name not in pos:
            raise SystemFormatError(f"unknown row {name!r}", n)
        if name in seen:
            raise SystemFormatError(f"row {name!r} given twice", n)
        seen.add(name)
        cells, p = (s.strip() for s in rest.rsplit(";", 1))
        cells = cells.split()
        if len(cells) != len(index):
            raise SystemFormatError(f"expected {len(index)} entries, found {len(cells)}", n)
        for col, (cell, target) in enumerate(zip(cells, index), 1):
            t = _entry(cell, n, col)
            if t is not ZERO:
                matrix[(name, target)] = t
        if len(p.split()) != 1:
            raise SystemFormatError("vector entry must be a single expression", n, len(index) + 1)
        t = _entry(p, n, len(index) + 1)
        if t is not ZERO:
            vector[name] = t
    return LinearSystem(index, matrix, vector)


def load_system(path) -> LinearSystem:
    return loads_system(Path(path).read_text())


def dumps_system(sys_: LinearSystem) -> str:
    """Inverse of :func:`loads_system`; term keys are printed without spaces."""
    name = {i: _compact(i) if isinstance(i, Term) else str(i) for i in sys_.index}
    out = [" ".join(name[i] for i in sys_.index)]
    for i in sys_.index:
        cells = [_compact(sys_.m(i, j)) if sys_.m(i, j) is not ZERO else "_" for j in sys_.index]
        p = sys_.p(i)
        out.append(f"{name[i]} | {' '.join(cells)} ; {_compact(p) if p is not ZERO else '_'}")
    return "\n".join(out) + "\n"


def _compact(t: Term) -> str:
    return str(t).replace(" ", "")


# -- helpers --------------------------------------------------------------------


def _term(text: str) -> Term:
    try:
        return parse(text)
    except ParseError as exc:
        raise _UsageError(f"cannot parse {text!r}: {exc}") from None


def _outer_pars(e: Term) -> list[Term]:
    """Parallel subterms that the closure reaches without passing another ``|``."""
    found: list[Term] = []
    todo = [simplify(e)]
    while todo:
        t = todo.pop()
        if isinstance(t, Par):
            if t not in found:
                found.append(t)
        elif isinstance(t, (Plus, Seq)):
            todo.extend(reversed(t.operands))
        elif isinstance(t, Star):
            todo.append(t.body)
    return found


def _system_of(p: Par) -> LinearSystem:
    first, *rest = p.operands
    return build_system(first, par(*rest))


def _emit(out: TextIO, fmt: str, text: str, data) -> None:
    if fmt == "structured":
        json.dump(data, out, indent=2, sort_keys=True)
        out.write("\n")
    else:
        out.write(text if text.endswith("\n") or not text else text + "\n")


# -- commands -------------------------------------------------------------------


def cmd_close(args, out) -> int:
    e = _term(args.expr)
    c = close(e)
    data = {"input": str(e), "closure": str(c)}
    lines = [str(c)]
    if args.show_system:
        systems = []
        for p in _outer_pars(e):
            s = _system_of(p)
            systems.append({"term": str(p), "table": dumps_system(s)})
            lines.append(f"# system for {p}")
            lines.append(dumps_system(s).rstrip("\n"))
        data["systems"] = systems
    status = EXIT_EQUAL
    if args.verify is not None:
        r = verify_closure(e, args.verify, closed=c, cap=args.cap)
        data["verify"] = {
            "bound": r.bound,
            "upper_bound": r.upper_bound,
            "ok": r.ok,
            "missing": None if r.missing is None else to_dict(r.missing),
            "extra": None if r.extra is None else to_dict(r.extra),
        }
        if r.ok:
            lines.append(f"verified at bound {r.bound}")
        else:
            status = EXIT_DIFFERENT
            if r.missing is not None:
                lines.append(f"verification failed: {r.missing} is below the term but not in its closure")
            else:
                lines.append(f"verification failed: {r.extra} is in the closure but not below the term")
    _emit(out, args.format, "\n".join(lines), data)
    return status


def cmd_equiv(args, out) -> int:
    e1, e2 = _term(args.left), _term(args.right)
    k = args.bound
    witness = None
    for side, (a, b) in enumerate(((e1, e2), (e2, e1))):
        for p in sorted(cka_language(a, k, cap=args.cap)):
            if not cka_member(p, b, cap=args.cap):
                witness = (p, side)
                break
        if witness:
            break
    exact = is_star_free(e1) and is_star_free(e2)
    if witness is None:
        verdict = "equal" if exact else f"equal-up-to-bound {k}"
        _emit(out, args.format, verdict, {"result": verdict, "bound": k, "exact": exact})
        return EXIT_EQUAL
    p, side = witness
    where = ("left", "right")[side]
    text = f"not-equal\ncounterexample: {p} (only in {where})"
    _emit(out, args.format, text, {"result": "not-equal", "bound": k, "counterexample": to_dict(p), "only_in": where})
    return EXIT_DIFFERENT


def cmd_lang(args, out) -> int:
    e = _term(args.expr)
    fn = cka_language if args.semantics == "cka" else bka_language
    lang = sorted(fn(e, args.bound, cap=args.cap))
    if args.format == "dot":
        if not 0 <= args.pick < len(lang):
            raise _UsageError(f"--pick {args.pick} out of range: the language has {len(lang)} pomsets")
        out.write(to_dot(lang[args.pick]))
        return EXIT_EQUAL
    _emit(out, args.format, "\n".join(map(str, lang)), [to_dict(p) for p in lang])
    return EXIT_EQUAL


def cmd_splits(args, out) -> int:
    e = _term(args.expr)
    pairs = sorted((par_splices if args.kind == "par" else seq_splices)(e))
    text = "\n".join(f"{l}  ,  {r}" for l, r in pairs)
    _emit(out, args.format, text, [{"left": str(l), "right": str(r)} for l, r in pairs])
    return EXIT_EQUAL


def cmd_remainders(args, out) -> int:
    e = _term(args.expr)
    rs = sorted(remainders(e))
    _emit(out, args.format, "\n".join(map(str, rs)), [str(r) for r in rs])
    return EXIT_EQUAL


def cmd_solve(args, out) -> int:
    try:
        s = load_system(args.file)
    except OSError as exc:
        raise _UsageError(str(exc)) from None
    x = solve_least(s)
    text = "\n".join(f"{i} = {x[i]}" for i in s.index)
    _emit(out, args.format, text, {str(i): str(x[i]) for i in s.index})
    return EXIT_EQUAL


# -- entry point ----------------------------------------------------------------


def _bound(text: str) -> int:
    k = int(text)
    if k < 0:
        raise argparse.ArgumentTypeError("bound must be non-negative")
    return k


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise _UsageError(message)


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("text", "structured"), default="text")
    common.add_argument("--cap", type=int, default=DEFAULT_CAP, help="language cardinality cap")

    p = _Parser(prog="ckaclose", description="Closures and pomset languages of concurrent Kleene algebra terms.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    c = sub.add_parser("close", parents=[common], help="print a syntactic closure")
    c.add_argument("expr")
    c.add_argument("--verify", type=_bound, metavar="K", help="check the closure at star bound K")
    c.add_argument("--show-system", action="store_true", help="dump the linear systems used")
    c.set_defaults(run=cmd_close)

    q = sub.add_parser("equiv", parents=[common], help="compare CKA languages")
    q.add_argument("left")
    q.add_argument("right")
    q.add_argument("--bound", type=_bound, default=2)
    q.set_defaults(run=cmd_equiv)

    lang = sub.add_parser("lang", help="list a bounded pomset language")
    lang.add_argument("expr")
    lang.add_argument("--bound", type=_bound, default=2)
    lang.add_argument("--semantics", choices=("bka", "cka"), default="bka")
    lang.add_argument("--format", choices=("text", "structured", "dot"), default="text")
    lang.add_argument("--pick", type=int, default=0, help="pomset to draw with --format dot (sorted order)")
    lang.add_argument("--cap", type=int, default=DEFAULT_CAP)
    lang.set_defaults(run=cmd_lang)

    s = sub.add_parser("splits", parents=[common], help="list splices")
    s.add_argument("expr")
    s.add_argument("--kind", choices=("par", "seq"), default="par")
    s.set_defaults(run=cmd_splits)

    r = sub.add_parser("remainders", parents=[common], help="list right-hand remainders")
    r.add_argument("expr")
    r.set_defaults(run=cmd_remainders)

    v = sub.add_parser("solve", parents=[common], help="least solution of a system file")
    v.add_argument("file")
    v.set_defaults(run=cmd_solve)
    return p


def main(argv: Optional[Sequence[str]] = None, out: TextIO = None, err: TextIO = None) -> int:
    out = sys.stdout if out is None else out
    err = sys.stderr if err is None else err
    try:
        args = build_parser().parse_args(argv)
        return args.run(args, out)
    except _UsageError as exc:
        err.write(f"error: {exc}\n")
        return EXIT_USAGE
    except SystemFormatError as exc:
        err.write(f"error: {exc}\n")
        return EXIT_USAGE
    except LanguageTooLarge as exc:
        err.write(f"resource limit: {exc}\n")
        return EXIT_LIMIT
    except SystemExit as exc:  # --help
        return int(exc.code or 0)


if __name__ == "__main__":
    sys.exit(main())
