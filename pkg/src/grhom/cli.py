"""Script front end: ``grhom run script.gx [--json out.json]``.

A script is a sequence of ``;``-terminated statements::

    ring 32003 [x0, x1, x2];
    quotient (x0*x1);
    let K = koszul(x0);
    print ext(K, twist(K, 1), 0);

Comments start with ``#`` or ``--`` and run to the end of the line.
Exit codes: 0 success, 1 script error (syntax, unbound name, misuse),
2 math-domain error raised by the engine.
"""
from __future__ import annotations

import argparse
import json
import logging
import re
import sys
import time
from dataclasses import dataclass, field
from typing import Callable, Union

from .complexes import ChainMap, Complex, cone as _cone_map, koszul, shift, twist
from .dercat import DerivedObject, ext_table, mutate_left, mutate_right, spherical_twist
from .globalext import MODES, BoundRequest, graded_ext, rhom_sheaf, truncation_bound
from .gradedmod import FreeModule, ModuleMap, PresentedModule, cokernel, image, minimal_free_resolution
from .linalg import NotAComplexError
from .polyring import Polynomial, PolynomialSyntaxError, Ring

log = logging.getLogger("grhom")

# ---------------------------------------------------------------------------
# syntax tree


@dataclass(frozen=True)
class Num:
    value: int
    pos: tuple = field(default=(0, 0), compare=False)


@dataclass(frozen=True)
class Name:
    id: str
    pos: tuple = field(default=(0, 0), compare=False)


@dataclass(frozen=True)
class Poly:
    text: str
    pos: tuple = field(default=(0, 0), compare=False)


@dataclass(frozen=True)
class Matrix:
    rows: tuple
    pos: tuple = field(default=(0, 0), compare=False)


@dataclass(frozen=True)
class Call:
    func: str
    args: tuple
    kwargs: tuple = ()
    pos: tuple = field(default=(0, 0), compare=False)


Expr = Union[Num, Name, Poly, Matrix, Call]


@dataclass(frozen=True)
class RingDecl:
    p: int
    names: tuple
    pos: tuple = field(default=(0, 0), compare=False)


@dataclass(frozen=True)
class QuotientDecl:
    gens: tuple
    pos: tuple = field(default=(0, 0), compare=False)


@dataclass(frozen=True)
class Let:
    name: str
    expr: Expr
    pos: tuple = field(default=(0, 0), compare=False)


@dataclass(frozen=True)
class Print:
    expr: Expr
    pos: tuple = field(default=(0, 0), compare=False)


@dataclass(frozen=True)
class Script:
    statements: tuple = ()


class ScriptError(Exception):
    """Syntax or usage error, located at ``line:col`` (1-based)."""

    def __init__(self, message: str, pos: tuple = (0, 0)):
        self.message = message
        self.line, self.col = pos
        super().__init__(f"{self.line}:{self.col}: {message}" if self.line else message)


# ---------------------------------------------------------------------------
# parser

_IDENT = re.compile(r"[A-Za-z_][A-Za-z0-9_']*")
_INT = re.compile(r"-?\d+")
_DELIMS = ",;)]"


class _Reader:
    def __init__(self, text: str):
        self.text = text
        self.i = 0
        self._starts = [0] + [m.end() for m in re.finditer("\n", text)]

    def pos(self, i: int | None = None) -> tuple:
        i = self.i if i is None else i
        lo, hi = 0, len(self._starts) - 1
        while lo < hi:
            mid = (lo + hi + 1) // 2
            if self._starts[mid] <= i:
                lo = mid
            else:
                hi = mid - 1
        return (lo + 1, i - self._starts[lo] + 1)

    def error(self, msg: str, i: int | None = None):
        raise ScriptError(msg, self.pos(i))

    def skip(self) -> None:
        t = self.text
        while self.i < len(t):
            c = t[self.i]
            if c.isspace():
                self.i += 1
            elif c == "#" or t.startswith("--", self.i):
                nl = t.find("\n", self.i)
                self.i = len(t) if nl < 0 else nl + 1
            else:
                break

    def peek(self) -> str:
        self.skip()
        return self.text[self.i] if self.i < len(self.text) else ""

    def expect(self, ch: str) -> None:
        if self.peek() != ch:
            got = self.peek() or "end of input"
            self.error(f"expected '{ch}', found '{got}'")
        self.i += 1

    def ident(self) -> str:
        self.skip()
        m = _IDENT.match(self.text, self.i)
        if not m:
            self.error("expected an identifier")
        self.i = m.end()
        return m.group()

    def integer(self) -> int:
        self.skip()
        m = _INT.match(self.text, self.i)
        if not m:
            self.error("expected an integer")
        self.i = m.end()
        return int(m.group())

    def raw(self) -> tuple[str, int]:
        """Text up to the next delimiter at bracket depth 0."""
        self.skip()
        start, depth, t = self.i, 0, self.text
        while self.i < len(t):
            c = t[self.i]
            if c in "([":
                depth += 1
            elif c in ")]":
                if depth == 0:
                    break
                depth -= 1
            elif depth == 0 and c in ",;":
                break
            elif c == "#":
                break
            self.i += 1
        return t[start:self.i], start


def _expr(rd: _Reader) -> Expr:
    rd.skip()
    start = rd.i
    pos = rd.pos()
    m = _IDENT.match(rd.text, rd.i)
    if m:
        rd.i = m.end()
        nxt = rd.peek()
        if m.group() == "matrix" and nxt == "[":
            node = _matrix(rd, pos)
            return _after(rd, node)
        if nxt == "(":
            node = _call(rd, m.group(), pos)
            return _after(rd, node)
        rd.i = start
    text, at = rd.raw()
    body = "".join(text.split())
    if not body:
        rd.error("expected an expression", at)
    gap = re.search(r"[A-Za-z0-9_')]\s+[A-Za-z0-9_(]", text.strip())
    if gap:
        rd.error("missing operator", at + text.index(text.strip()) + gap.start() + 1)
    if _IDENT.fullmatch(body):
        return Name(body, pos)
    if _INT.fullmatch(body):
        return Num(int(body), pos)
    if not re.fullmatch(r"[A-Za-z0-9_'^*+\-()]+", body):
        rd.error(f"cannot read '{text.strip()}'", at)
    return Poly(body, pos)


def _after(rd: _Reader, node: Expr) -> Expr:
    nxt = rd.peek()
    if nxt and nxt not in _DELIMS:
        rd.error(f"unexpected '{nxt}'")
    return node


def _call(rd: _Reader, func: str, pos: tuple) -> Call:
    rd.expect("(")
    args, kwargs = [], []
    if rd.peek() == ")":
        rd.i += 1
        return Call(func, (), (), pos)
    while True:
        rd.skip()
        kw = re.compile(r"([A-Za-z_]\w*)\s*=(?!=)").match(rd.text, rd.i)
        if kw:
            rd.i = kw.end()
            kwargs.append((kw.group(1), _expr(rd)))
        elif kwargs:
            rd.error("positional argument after keyword argument")
        else:
            args.append(_expr(rd))
        c = rd.peek()
        if c and c in ",;":
            rd.i += 1
            continue
        rd.expect(")")
        return Call(func, tuple(args), tuple(kwargs), pos)


def _matrix(rd: _Reader, pos: tuple) -> Matrix:
    rd.expect("[")
    rows = []
    while True:
        rd.expect("[")
        row = []
        if rd.peek() != "]":
            while True:
                row.append(_expr(rd))
                if rd.peek() == ",":
                    rd.i += 1
                    continue
                break
        rd.expect("]")
        rows.append(tuple(row))
        if rd.peek() == ",":
            rd.i += 1
            continue
        break
    rd.expect("]")
    if len({len(r) for r in rows}) > 1:
        raise ScriptError("matrix rows have different lengths", pos)
    return Matrix(tuple(rows), pos)


def _statement(rd: _Reader):
    pos = rd.pos()
    word = rd.ident()
    if word == "ring":
        p = rd.integer()
        rd.expect("[")
        names = []
        if rd.peek() != "]":
            while True:
                names.append(rd.ident())
                if rd.peek() == ",":
                    rd.i += 1
                    continue
                break
        rd.expect("]")
        node = RingDecl(p, tuple(names), pos)
    elif word == "quotient":
        rd.expect("(")
        gens = []
        if rd.peek() != ")":
            while True:
                gens.append(_expr(rd))
                if rd.peek() == ",":
                    rd.i += 1
                    continue
                break
        rd.expect(")")
        node = QuotientDecl(tuple(gens), pos)
    elif word == "let":
        name = rd.ident()
        rd.expect("=")
        node = Let(name, _expr(rd), pos)
    elif word == "print":
        node = Print(_expr(rd), pos)
    else:
        raise ScriptError(f"unknown statement '{word}'", pos)
    rd.expect(";")
    return node


def parse(text: str) -> Script:
    """Parse and statically check a script."""
    rd = _Reader(text)
    stmts = []
    while rd.peek():
        stmts.append(_statement(rd))
    script = Script(tuple(stmts))
    _check(script)
    return script


def _names_in(e: Expr):
    if isinstance(e, Name):
        yield e
    elif isinstance(e, Matrix):
        for row in e.rows:
            for x in row:
                yield from _names_in(x)
    elif isinstance(e, Call):
        for x in e.args:
            yield from _names_in(x)
        for _, x in e.kwargs:
            yield from _names_in(x)


def _polys_in(e: Expr):
    if isinstance(e, Poly):
        yield e
    elif isinstance(e, Matrix):
        for row in e.rows:
            for x in row:
                yield from _polys_in(x)
    elif isinstance(e, Call):
        for x in e.args:
            yield from _polys_in(x)
        for _, x in e.kwargs:
            yield from _polys_in(x)


def _check(script: Script) -> None:
    ring = None
    bound: set[str] = set()
    seen_let = False
    for st in script.statements:
        if isinstance(st, RingDecl):
            if ring is not None:
                raise ScriptError("only one ring declaration is allowed", st.pos)
            if not st.names:
                raise ScriptError("a ring needs at least one variable", st.pos)
            if len(set(st.names)) != len(st.names):
                raise ScriptError("duplicate variable names", st.pos)
            ring = Ring(32003, st.names)
            continue
        if ring is None:
            raise ScriptError("the ring must be declared first", st.pos)
        if isinstance(st, QuotientDecl):
            if seen_let:
                raise ScriptError("ring mismatch: quotient after bindings were made", st.pos)
            exprs = st.gens
        elif isinstance(st, Let):
            exprs = (st.expr,)
        else:
            exprs = (st.expr,)
        for e in exprs:
            for nm in _names_in(e):
                if nm.id not in bound and nm.id not in ring.names:
                    raise ScriptError(f"unbound identifier '{nm.id}'", nm.pos)
            for pl in _polys_in(e):
                try:
                    ring.parse(pl.text)
                except (PolynomialSyntaxError, ValueError) as exc:
                    raise ScriptError(f"bad polynomial '{pl.text}': {exc}", pl.pos) from None
        if isinstance(st, Let):
            if st.name in ring.names:
                raise ScriptError(f"'{st.name}' is a ring variable", st.pos)
            bound.add(st.name)
            seen_let = True


# ---------------------------------------------------------------------------
# pretty printer


def format_expr(e: Expr) -> str:
    if isinstance(e, Num):
        return str(e.value)
    if isinstance(e, Name):
        return e.id
    if isinstance(e, Poly):
        return e.text
    if isinstance(e, Matrix):
        return "matrix [" + ", ".join("[" + ", ".join(map(format_expr, r)) + "]" for r in e.rows) + "]"
    args = ", ".join(format_expr(a) for a in e.args)
    if e.kwargs:
        kws = ", ".join(f"{k}={format_expr(v)}" for k, v in e.kwargs)
        args = f"{args}; {kws}" if args else kws
    return f"{e.func}({args})"


def format_statement(st) -> str:
    if isinstance(st, RingDecl):
        return f"ring {st.p} [{', '.join(st.names)}];"
    if isinstance(st, QuotientDecl):
        return f"quotient ({', '.join(map(format_expr, st.gens))});"
    if isinstance(st, Let):
        return f"let {st.name} = {format_expr(st.expr)};"
    return f"print {format_expr(st.expr)};"


def format_script(script: Script) -> str:
    return "".join(format_statement(st) + "\n" for st in script.statements)


# ---------------------------------------------------------------------------
# values and coercions


def _describe_free(degrees) -> str:
    if not degrees:
        return "0"
    parts, prev, count = [], None, 0
    for d in list(degrees) + [None]:
        if d == prev:
            count += 1
            continue
        if prev is not None:
            base = "R" if prev == 0 else f"R({-prev})"
            parts.append(base if count == 1 else f"{base}^{count}")
        prev, count = d, 1
    return " + ".join(parts)


def describe_module(M: PresentedModule) -> str:
    body = _describe_free(M.degrees)
    return f"coker({body}, {len(M.relations)} rel)" if M.relations else body


def describe_complex(C: Complex) -> str:
    if C.is_zero():
        return "0"
    return " -> ".join(f"[{j}] {describe_module(C.terms[j])}" for j in sorted(C.terms))


def complex_json(C: Complex) -> list[dict]:
    out = []
    for j in sorted(C.terms):
        M = C.terms[j]
        twists: dict[int, int] = {}
        for d in M.degrees:
            twists[-d] = twists.get(-d, 0) + 1
        out.append({"degree": j, "twists": {str(k): v for k, v in sorted(twists.items())}, "relations": len(M.relations)})
    return out


class _Env:
    def __init__(self, ring: Ring):
        self.ring = ring
        self.values: dict[str, object] = {}

    # coercions ---------------------------------------------------------
    def poly(self, e: Expr) -> Polynomial:
        r = self.ring
        if isinstance(e, Num):
            return r(e.value)
        if isinstance(e, Poly):
            return r.parse(e.text)
        if isinstance(e, Name) and e.id not in self.values:
            return r.parse(e.id)
        v = self.value(e)
        if isinstance(v, Polynomial):
            return v
        if isinstance(v, int):
            return r(v)
        raise ScriptError("expected a polynomial", e.pos)

    def integer(self, e: Expr) -> int:
        v = self.value(e)
        if isinstance(v, int) and not isinstance(v, bool):
            return v
        if isinstance(v, Polynomial) and v.degree in (0, None):
            c = v.constant()
            return c if c <= v.ring.p // 2 else c - v.ring.p
        raise ScriptError("expected an integer", e.pos)

    def complex(self, e: Expr) -> Complex:
        v = self.value(e)
        if isinstance(v, DerivedObject):
            return v.complex
        if isinstance(v, Complex):
            return v
        if isinstance(v, PresentedModule):
            return Complex.single(v)
        if isinstance(v, FreeModule):
            return Complex.single(PresentedModule.free_module(v.ring, v.degrees))
        raise ScriptError("expected a complex, module or sheaf", e.pos)

    def obj(self, e: Expr) -> DerivedObject:
        v = self.value(e)
        if isinstance(v, DerivedObject):
            return v
        return DerivedObject(self.complex(e), format_expr(e))

    def module(self, e: Expr) -> PresentedModule:
        v = self.value(e)
        if isinstance(v, PresentedModule):
            return v
        if isinstance(v, FreeModule):
            return PresentedModule.free_module(v.ring, v.degrees)
        C = v.complex if isinstance(v, DerivedObject) else v
        if isinstance(C, Complex) and len(C.terms) == 1:
            return next(iter(C.terms.values()))
        raise ScriptError("expected a module", e.pos)

    def free(self, e: Expr) -> FreeModule:
        v = self.value(e)
        if isinstance(v, FreeModule):
            return v
        try:
            M = self.module(e)
        except ScriptError:
            M = None
        if M is None or M.relations:
            raise ScriptError("expected a free module", e.pos)
        return M.free

    def map(self, e: Expr) -> ModuleMap:
        v = self.value(e)
        if not isinstance(v, ModuleMap):
            raise ScriptError("expected a map", e.pos)
        return v

    # evaluation --------------------------------------------------------
    def value(self, e: Expr):
        if isinstance(e, Num):
            return e.value
        if isinstance(e, Name):
            if e.id in self.values:
                return self.values[e.id]
            return self.ring.parse(e.id)
        if isinstance(e, Poly):
            return self.ring.parse(e.text)
        if isinstance(e, Matrix):
            return [[self.poly(x) for x in row] for row in e.rows]
        handler = _EXPRS.get(e.func) or _COMMANDS.get(e.func)
        if handler is None:
            raise ScriptError(f"unknown function '{e.func}'", e.pos)
        fn, arity = handler
        lo, hi = arity
        if not lo <= len(e.args) <= hi:
            want = str(lo) if lo == hi else f"{lo}..{hi}" if hi < 99 else f"at least {lo}"
            raise ScriptError(f"{e.func} takes {want} arguments, got {len(e.args)}", e.pos)
        allowed = _KWARGS.get(e.func, ())
        for k, _ in e.kwargs:
            if k not in allowed:
                raise ScriptError(f"{e.func} has no option '{k}'", e.pos)
        return fn(self, e)


def _kw(e: Call, key: str):
    for k, v in e.kwargs:
        if k == key:
            return v
    return None


# expression handlers -------------------------------------------------------


def _x_O(env: _Env, e: Call):
    d = env.integer(e.args[0])
    return Complex.single(PresentedModule.free_module(env.ring, [-d]))


def _x_free(env: _Env, e: Call):
    return FreeModule(env.ring, tuple(-env.integer(a) for a in e.args))


def _x_map(env: _Env, e: Call):
    T, S = env.free(e.args[0]), env.free(e.args[1])
    M = env.value(e.args[2])
    if not isinstance(M, list):
        raise ScriptError("expected a matrix", e.args[2].pos)
    if len(M) != T.rank or any(len(row) != S.rank for row in M):
        raise ScriptError(f"matrix must be {T.rank} x {S.rank}", e.args[2].pos)
    return ModuleMap.from_matrix(S, T, M)


def _x_image(env: _Env, e: Call):
    return image(env.map(e.args[0]))


def _x_coker(env: _Env, e: Call):
    return cokernel(env.map(e.args[0]))


def _x_koszul(env: _Env, e: Call):
    return koszul([env.poly(a) for a in e.args])


def _x_complex(env: _Env, e: Call):
    maps = [env.map(a) for a in e.args]
    top = _kw(e, "top")
    top = 0 if top is None else env.integer(top)
    return Complex.from_maps(list(reversed(maps)), top)


def _x_shift(env: _Env, e: Call):
    return shift(env.complex(e.args[0]), env.integer(e.args[1]))


def _x_twist(env: _Env, e: Call):
    return twist(env.complex(e.args[0]), env.integer(e.args[1]))


def _x_cone(env: _Env, e: Call):
    f = env.map(e.args[0])
    A = Complex.single(PresentedModule.free_module(f.ring, f.source.degrees))
    B = Complex.single(PresentedModule.free_module(f.ring, f.target.degrees))
    return _cone_map(ChainMap(A, B, {0: f.columns}))


_EXPRS: dict[str, tuple[Callable, tuple[int, int]]] = {
    "O": (_x_O, (1, 1)),
    "free": (_x_free, (1, 999)),
    "map": (_x_map, (3, 3)),
    "image": (_x_image, (1, 1)),
    "coker": (_x_coker, (1, 1)),
    "koszul": (_x_koszul, (1, 999)),
    "complex": (_x_complex, (1, 999)),
    "shift": (_x_shift, (2, 2)),
    "twist": (_x_twist, (2, 2)),
    "cone": (_x_cone, (1, 1)),
}


# command handlers: each returns (payload, human text) ----------------------


@dataclass
class Output:
    payload: object
    text: str


def _c_rhom(env: _Env, e: Call):
    C, D = env.complex(e.args[0]), env.complex(e.args[1])
    a, b = env.integer(e.args[2]), env.integer(e.args[3])
    res = rhom_sheaf(C, D, (a, b))
    lines = [f"Ext^{rec.m} = k^{rec.dim}" for rec in res.records]
    lines.append(f"(r = {res.r_used}; m = {b} .. {a}) {res.display()}")
    return Output({"records": res.to_json(), "display": res.display()}, "\n".join(lines))


def _c_ext(env: _Env, e: Call):
    C, D = env.complex(e.args[0]), env.complex(e.args[1])
    m = env.integer(e.args[2])
    if C.is_zero() or D.is_zero():
        lo = hi = m
    else:
        lo, hi = int(D.inf - C.sup), int(D.sup - C.inf)
        lo, hi = min(lo, m), max(hi, m)
    res = rhom_sheaf(C, D, (lo, hi))
    rec = next(r for r in res.records if r.m == m)
    terms = {} if res.strand is None else {str(q - res.offset): d for q, d in sorted(res.strand.dims.items())}
    payload = {**rec.to_json(), "strand": res.display(), "strand_window": [hi, lo], "strand_terms": terms}
    text = f"Ext^{m} = k^{rec.dim}\nstrand (m = {hi} .. {lo}): {res.display()}"
    return Output(payload, text)


def _c_graded_ext(env: _Env, e: Call):
    C, D = env.complex(e.args[0]), env.complex(e.args[1])
    m, w = env.integer(e.args[2]), env.integer(e.args[3])
    if w < 0:
        raise ValueError("the twist window must be nonnegative")
    dims = graded_ext(C, D, m, w)
    text = "  ".join(f"v={v}: {d}" for v, d in dims)
    return Output({"m": m, "dims": [[v, d] for v, d in dims]}, text)


def _c_cohomology(env: _Env, e: Call):
    C = env.complex(e.args[0])
    m, v = env.integer(e.args[1]), env.integer(e.args[2])
    from .globalext import structure_sheaf

    rec = rhom_sheaf(structure_sheaf(env.ring), C, (m, m), v=v).records[0]
    return Output({"m": m, "v": v, "dim": rec.dim, "r_used": rec.r_used}, f"H^{m}(X, F({v})) = k^{rec.dim}")


def _c_bound(env: _Env, e: Call):
    C, D = env.complex(e.args[0]), env.complex(e.args[1])
    m = env.integer(e.args[2])
    out = {}
    for mode in MODES:
        try:
            out[mode] = truncation_bound(BoundRequest(C, D, m, mode))
        except ValueError:
            out[mode] = None
    text = "  ".join(f"{k}: {'n/a' if v is None else v}" for k, v in out.items())
    return Output(out, text)


def _c_betti(env: _Env, e: Call):
    M = env.module(e.args[0])
    cap = env.integer(e.args[1]) if len(e.args) > 1 else None
    if cap is None and env.ring.is_quotient:
        cap = env.ring.nvars + 1
    res = minimal_free_resolution(M, cap)
    bt = res.betti
    return Output({"betti": bt.to_json(), "complete": res.complete}, bt.grid())


def _c_ext_table(env: _Env, e: Call):
    objs = [env.obj(a) for a in e.args]
    for a, o in zip(e.args, objs):
        if not o.name:
            o.name = format_expr(a)
    names = [format_expr(a) for a in e.args]
    tb = ext_table([DerivedObject(o.complex, n) for o, n in zip(objs, names)])
    flags = f"exceptional: {tb.is_exceptional_collection}  strong: {tb.is_strong}"
    return Output({**tb.to_json(), "display": tb.display()}, tb.display() + "\n" + flags)


def _object_output(X: DerivedObject) -> Output:
    C = X.complex
    sheaves = {}
    for j, H in sorted(X.cohomology_sheaves.items()):
        sheaves[str(j)] = {"generators": len(H.degrees), "hilbert": H.hilbert_polynomial_values(range(0, 4))}
    text = describe_complex(C)
    if sheaves:
        text += "\ncohomology sheaves in degrees " + ", ".join(sheaves)
    return Output({"complex": complex_json(C), "display": describe_complex(C), "cohomology_sheaves": sheaves}, text)


def _x_mutate_left(env: _Env, e: Call):
    E, F = env.obj(e.args[0]), env.obj(e.args[1])
    return mutate_left(E, F, name=format_expr(e))


def _x_mutate_right(env: _Env, e: Call):
    F, E = env.obj(e.args[0]), env.obj(e.args[1])
    return mutate_right(F, E, name=format_expr(e))


def _x_spherical_twist(env: _Env, e: Call):
    E, F = env.obj(e.args[0]), env.obj(e.args[1])
    return spherical_twist(E, F, name=format_expr(e))


_COMMANDS: dict[str, tuple[Callable, tuple[int, int]]] = {
    "rhom": (_c_rhom, (4, 4)),
    "ext": (_c_ext, (3, 3)),
    "gradedExt": (_c_graded_ext, (4, 4)),
    "cohomology": (_c_cohomology, (3, 3)),
    "bound": (_c_bound, (3, 3)),
    "betti": (_c_betti, (1, 2)),
    "extTable": (_c_ext_table, (1, 999)),
    "mutateLeft": (_x_mutate_left, (2, 2)),
    "mutateRight": (_x_mutate_right, (2, 2)),
    "sphericalTwist": (_x_spherical_twist, (2, 2)),
}
_KWARGS = {"complex": ("top",)}


def _render(v) -> Output:
    if isinstance(v, Output):
        return v
    if isinstance(v, DerivedObject):
        return _object_output(v)
    if isinstance(v, Complex):
        return Output({"complex": complex_json(v), "display": describe_complex(v)}, describe_complex(v))
    if isinstance(v, PresentedModule):
        return Output({"module": describe_module(v)}, describe_module(v))
    if isinstance(v, FreeModule):
        return Output({"module": _describe_free(v.degrees)}, _describe_free(v.degrees))
    if isinstance(v, ModuleMap):
        rows = [[str(x) for x in row] for row in v.matrix()]
        return Output({"matrix": rows}, "\n".join(" ".join(r) for r in rows))
    if isinstance(v, list):
        rows = [[str(x) for x in row] for row in v]
        return Output({"matrix": rows}, "\n".join(" ".join(r) for r in rows))
    return Output({"value": str(v)}, str(v))


# ---------------------------------------------------------------------------
# execution

MATH_ERRORS = (ValueError, ArithmeticError, NotAComplexError, RuntimeError)


@dataclass
class Record:
    command: str
    payload: object
    text: str
    seconds: float

    def to_json(self) -> dict:
        return {"command": self.command, "result": self.payload, "time": round(self.seconds, 6)}


@dataclass
class Session:
    ring: Ring | None = None
    records: list[Record] = field(default_factory=list)

    def ring_json(self) -> dict:
        if self.ring is None:
            return {}
        return {
            "p": self.ring.p,
            "variables": list(self.ring.names),
            "ideal": [str(f) for f in self.ring.ideal_gens],
        }

    def to_json(self) -> dict:
        return {"ring": self.ring_json(), "results": [r.to_json() for r in self.records]}


class MathError(Exception):
    def __init__(self, exc: Exception, pos: tuple):
        self.exc = exc
        self.line, self.col = pos
        super().__init__(f"{self.line}:{self.col}: {type(exc).__name__}: {exc}")


def execute(script: Script, prime: int | None = None, echo: Callable[[str], None] | None = None) -> Session:
    """Evaluate statements in order; the records collect every ``print``."""
    session = Session()
    env: _Env | None = None
    n = 0
    for st in script.statements:
        t0 = time.perf_counter()
        try:
            if isinstance(st, RingDecl):
                session.ring = Ring(prime if prime is not None else st.p, st.names)
                env = _Env(session.ring)
            elif isinstance(st, QuotientDecl):
                gens = [env.poly(g) for g in st.gens]
                session.ring = session.ring.quotient(gens)
                env = _Env(session.ring)
            elif isinstance(st, Let):
                env.values[st.name] = env.value(st.expr)
            else:
                n += 1
                out = _render(env.value(st.expr))
                rec = Record(format_expr(st.expr), out.payload, out.text, time.perf_counter() - t0)
                session.records.append(rec)
                if echo is not None:
                    echo(f"i{n} : {rec.command}\no{n} = {rec.text.replace(chr(10), chr(10) + ' ' * (len(str(n)) + 4))}\n")
        except ScriptError as exc:
            if not exc.line:
                exc.line, exc.col = st.pos
                exc.args = (f"{exc.line}:{exc.col}: {exc.message}",)
            raise
        except MATH_ERRORS as exc:
            raise MathError(exc, st.pos) from exc
        log.info("%s (%.3fs)", format_statement(st), time.perf_counter() - t0)
    return session


def dumps(session: Session, timing: bool = True) -> str:
    doc = session.to_json()
    if not timing:
        for r in doc["results"]:
            r.pop("time", None)
    return json.dumps(doc, indent=2, sort_keys=True)


def main(argv: list[str] | None = None) -> int:
    ap = argparse.ArgumentParser(prog="grhom", description="Ext groups of complexes of coherent sheaves over GF(p).")
    sub = ap.add_subparsers(dest="cmd", required=True)
    run = sub.add_parser("run", help="run a script")
    run.add_argument("script")
    run.add_argument("--json", metavar="PATH", help="write all results as one JSON document")
    run.add_argument("--prime", type=int, help="override the characteristic declared in the script")
    run.add_argument("--verbose", action="store_true", help="log Groebner basis and resolution progress")
    run.add_argument("--seed", type=int, help="accepted for compatibility; every computation is deterministic")
    fmt = sub.add_parser("fmt", help="pretty-print a script")
    fmt.add_argument("script")
    args = ap.parse_args(argv)

    if getattr(args, "verbose", False):
        logging.basicConfig(level=logging.DEBUG, format="%(name)s: %(message)s", stream=sys.stderr)
    try:
        with open(args.script, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        print(f"grhom: {exc}", file=sys.stderr)
        return 1
    try:
        script = parse(text)
    except ScriptError as exc:
        print(f"{args.script}:{exc}", file=sys.stderr)
        return 1
    if args.cmd == "fmt":
        sys.stdout.write(format_script(script))
        return 0
    try:
        session = execute(script, args.prime, echo=lambda s: print(s, flush=True))
    except ScriptError as exc:
        print(f"{args.script}:{exc}", file=sys.stderr)
        return 1
    except MathError as exc:
        print(f"{args.script}:{exc}", file=sys.stderr)
        return 2
    if args.json:
        with open(args.json, "w", encoding="utf-8") as fh:
            fh.write(dumps(session) + "\n")
    return 0


if __name__ == "__main__":
    sys.exit(main())
