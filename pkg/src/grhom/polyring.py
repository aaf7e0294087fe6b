"""Standard-graded polynomial rings over GF(p) and sparse polynomials.

Monomials are packed into a single integer whose natural integer order is the
graded reverse lexicographic order.  The layout, from the least significant
bits upwards, is one 16-bit field per variable holding ``0x7FFF - e_i``
(variable ``x_0`` lowest) followed by a 32-bit total-degree field.  With that
layout

* ``a < b`` as integers  <=>  ``a < b`` in grevlex,
* multiplication is ``a + b - LOW``,
* ``a | b`` is a borrow test on guard bits.

Elements of free modules use the same trick: a module term is
``((MAXC - comp) << CSHIFT) | mono`` so that the integer order is
position-over-term with component 0 largest.
"""
from __future__ import annotations

import re
from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Sequence

from .linalg import check_prime

FIELD = 16
LOWF = (1 << (FIELD - 1)) - 1  # largest exponent per variable
MAX_DEGREE = 10_000
MAXC = 1 << 24


class RingMismatchError(ValueError):
    pass


class Ring:
    """``GF(p)[x_0..x_n]`` or a quotient of it by a homogeneous ideal.

    A quotient is created with :meth:`quotient`; its Groebner basis (grevlex)
    is computed by :mod:`grhom.groebner` and stored on the ring.
    """

    def __init__(self, p: int = 32003, names: Sequence[str] | int = 3, _ideal=None):
        self.p = check_prime(p)
        if isinstance(names, int):
            names = [f"x{i}" for i in range(names)]
        names = tuple(names)
        if not names:
            raise ValueError("a ring needs at least one variable")
        if len(set(names)) != len(names):
            raise ValueError("duplicate variable names")
        self.names = names
        self.nvars = len(names)
        self.ebits = FIELD * self.nvars
        self.emask = (1 << self.ebits) - 1
        self.low = sum(LOWF << (FIELD * i) for i in range(self.nvars))
        self.guard = sum(1 << (FIELD * i + FIELD - 1) for i in range(self.nvars))
        self.cshift = self.ebits + 32
        self.kmask = (1 << self.cshift) - 1
        self.one_key = self.low  # the monomial 1
        # (generators, reduced GB as list of (lead, {mono: coeff}) with monic leads)
        self._monos: dict[int, tuple[int, ...]] = {}
        self._std: dict[int, tuple[int, ...]] = {}
        self.ideal_gens: tuple[Polynomial, ...] = ()
        self.ideal_gb: tuple[tuple[int, dict[int, int]], ...] = ()
        if _ideal is not None:
            self.ideal_gens, self.ideal_gb = _ideal

    # -- identity ------------------------------------------------------
    def _key(self):
        return (self.p, self.names, tuple(sorted(tuple(sorted(g.terms.items())) for g in self.ideal_gens)))

    def __eq__(self, other):
        return isinstance(other, Ring) and self._key() == other._key()

    def __hash__(self):
        return hash(self._key())

    def __repr__(self):
        base = f"GF({self.p})[{', '.join(self.names)}]"
        if self.ideal_gens:
            base += "/(" + ", ".join(map(str, self.ideal_gens)) + ")"
        return base

    @property
    def n(self) -> int:
        """Dimension of the ambient projective space."""
        return self.nvars - 1

    @property
    def is_quotient(self) -> bool:
        return bool(self.ideal_gens)

    @cached_property
    def ambient(self) -> "Ring":
        if not self.is_quotient:
            return self
        return Ring(self.p, self.names)

    def quotient(self, gens: Iterable["Polynomial | str"]) -> "Ring":
        from .groebner import ideal_groebner

        s = self.ambient
        polys = [s.parse(g) if isinstance(g, str) else Polynomial(s, g.terms) for g in gens]
        polys = [f for f in polys if f.terms] + list(self.ideal_gens)
        for f in polys:
            if not f.is_homogeneous():
                raise ValueError(f"ideal generator {f} is not homogeneous")
        if not polys:
            return s
        gb = ideal_groebner(s, [f.terms for f in polys])
        return Ring(self.p, self.names, (tuple(polys), tuple(gb)))

    # -- monomials -----------------------------------------------------
    def mono(self, exps: Sequence[int]) -> int:
        if len(exps) != self.nvars:
            raise ValueError("exponent vector has wrong length")
        deg = 0
        k = 0
        for i, e in enumerate(exps):
            if e < 0 or e > LOWF:
                raise ValueError(f"exponent {e} out of range")
            deg += e
            k |= (LOWF - e) << (FIELD * i)
        if deg > MAX_DEGREE:
            raise OverflowError(f"degree {deg} exceeds {MAX_DEGREE}")
        return (deg << self.ebits) | k

    def exps(self, k: int) -> tuple[int, ...]:
        return tuple(LOWF - ((k >> (FIELD * i)) & 0xFFFF) for i in range(self.nvars))

    def mdeg(self, k: int) -> int:
        return (k & self.kmask) >> self.ebits

    def mmul(self, a: int, b: int) -> int:
        return a + b - self.low

    def mdiv(self, a: int, b: int) -> int:
        """``a / b``; assumes ``b | a``."""
        return a - b + self.low

    def divides(self, a: int, b: int) -> bool:
        g = self.guard
        return (((a & self.emask) | g) - (b & self.emask)) & g == g

    def mlcm(self, a: int, b: int) -> int:
        em, g = self.emask, self.guard
        ca, cb = a & em, b & em
        gm = ((ca | g) - cb) & g
        sel = gm - (gm >> (FIELD - 1))  # fields where ca >= cb
        c = (cb & sel) | (ca & ~sel & em)
        deg = self.nvars * LOWF - sum((c >> (FIELD * i)) & 0xFFFF for i in range(self.nvars))
        return (deg << self.ebits) | c

    def var(self, i: int) -> "Polynomial":
        e = [0] * self.nvars
        e[i] = 1
        return Polynomial(self, {self.mono(e): 1})

    def gens(self) -> list["Polynomial"]:
        return [self.var(i) for i in range(self.nvars)]

    def monomials_of_degree(self, d: int) -> tuple[int, ...]:
        """All monomials of degree ``d`` in decreasing grevlex order."""
        if d < 0:
            return ()
        got = self._monos.get(d)
        if got is not None:
            return got
        out: list[int] = []

        def rec(i, left, acc):
            if i == self.nvars - 1:
                out.append(self.mono(acc + [left]))
                return
            for e in range(left, -1, -1):
                rec(i + 1, left - e, acc + [e])

        rec(0, d, [])
        out.sort(reverse=True)
        self._monos[d] = got = tuple(out)
        return got

    def standard_monomials_of_degree(self, d: int) -> tuple[int, ...]:
        """Monomials of degree ``d`` not divisible by a lead term of the ideal."""
        got = self._std.get(d)
        if got is None:
            leads = [lead for lead, _ in self.ideal_gb]
            got = tuple(k for k in self.monomials_of_degree(d) if not any(self.divides(l, k) for l in leads))
            self._std[d] = got
        return got

    # -- module terms --------------------------------------------------
    def term(self, comp: int, k: int) -> int:
        return ((MAXC - comp) << self.cshift) | k

    def comp_of(self, t: int) -> int:
        return MAXC - (t >> self.cshift)

    def comp_base(self, comp: int) -> int:
        return (MAXC - comp) << self.cshift

    # -- elements ------------------------------------------------------
    def __call__(self, x) -> "Polynomial":
        if isinstance(x, Polynomial):
            return Polynomial(self, x.terms)
        if isinstance(x, str):
            return self.parse(x)
        return Polynomial(self, {self.one_key: int(x) % self.p} if int(x) % self.p else {})

    def zero(self) -> "Polynomial":
        return Polynomial(self, {})

    def one(self) -> "Polynomial":
        return Polynomial(self, {self.one_key: 1})

    def parse(self, text: str) -> "Polynomial":
        return _Parser(self, text).parse()

    def normal_form(self, terms: dict[int, int]) -> dict[int, int]:
        """Reduce a polynomial modulo the defining ideal."""
        if not self.ideal_gb:
            return dict(terms)
        from .groebner import reduce_poly

        return reduce_poly(self, terms)


def grevlex_compare(ring: Ring, a: Sequence[int], b: Sequence[int]) -> int:
    """-1, 0 or 1 as ``x^a`` is smaller, equal or larger than ``x^b``."""
    if len(a) != len(b) or len(a) != ring.nvars:
        raise ValueError("mismatched variable counts")
    ka, kb = ring.mono(a), ring.mono(b)
    return (ka > kb) - (ka < kb)


@dataclass(frozen=True)
class Monomial:
    exponents: tuple[int, ...]

    @property
    def degree(self) -> int:
        return sum(self.exponents)


class Polynomial:
    """Sparse polynomial; ``terms`` maps packed monomials to nonzero coefficients.

    Elements of a quotient ring are kept in normal form, so equality of values
    is structural equality.
    """

    __slots__ = ("ring", "terms")

    def __init__(self, ring: Ring, terms: dict[int, int] | None = None, reduce: bool = True):
        p = ring.p
        t = {k: c % p for k, c in (terms or {}).items() if c % p}
        if reduce and ring.ideal_gb:
            t = ring.normal_form(t)
        self.ring = ring
        self.terms = t

    def _coerce(self, other) -> "Polynomial":
        if isinstance(other, Polynomial):
            if other.ring.names != self.ring.names or other.ring.p != self.ring.p:
                raise RingMismatchError("polynomials live in different rings")
            return other
        return self.ring(other)

    def __add__(self, other):
        other = self._coerce(other)
        t = dict(self.terms)
        p = self.ring.p
        for k, c in other.terms.items():
            v = (t.get(k, 0) + c) % p
            if v:
                t[k] = v
            else:
                t.pop(k, None)
        return Polynomial(self.ring, t, reduce=False)

    __radd__ = __add__

    def __neg__(self):
        p = self.ring.p
        return Polynomial(self.ring, {k: p - c for k, c in self.terms.items()}, reduce=False)

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __mul__(self, other):
        if isinstance(other, int):
            return Polynomial(self.ring, {k: c * other for k, c in self.terms.items()}, reduce=False)
        other = self._coerce(other)
        r = self.ring
        p, low = r.p, r.low
        t: dict[int, int] = {}
        for ka, ca in self.terms.items():
            for kb, cb in other.terms.items():
                k = ka + kb - low
                t[k] = (t.get(k, 0) + ca * cb) % p
        return Polynomial(r, t)

    __rmul__ = __mul__

    def __pow__(self, e: int):
        out = self.ring.one()
        for _ in range(e):
            out = out * self
        return out

    def __eq__(self, other):
        if isinstance(other, int):
            other = self.ring(other)
        return isinstance(other, Polynomial) and self.terms == other.terms

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def __bool__(self):
        return bool(self.terms)

    def is_zero(self) -> bool:
        return not self.terms

    @property
    def degree(self) -> int | None:
        """Total degree, ``None`` for the zero polynomial."""
        if not self.terms:
            return None
        return max(self.ring.mdeg(k) for k in self.terms)

    def is_homogeneous(self) -> bool:
        return len({self.ring.mdeg(k) for k in self.terms}) <= 1

    def sorted_terms(self) -> list[tuple[Monomial, int]]:
        r = self.ring
        return [(Monomial(r.exps(k)), self.terms[k]) for k in sorted(self.terms, reverse=True)]

    def constant(self) -> int:
        return self.terms.get(self.ring.one_key, 0)

    def __str__(self):
        if not self.terms:
            return "0"
        r = self.ring
        p = r.p
        parts = []
        for k in sorted(self.terms, reverse=True):
            c = self.terms[k]
            neg = c > p // 2
            a = p - c if neg else c
            factors = []
            for name, e in zip(r.names, r.exps(k)):
                if e == 1:
                    factors.append(name)
                elif e > 1:
                    factors.append(f"{name}^{e}")
            body = "*".join(factors)
            if not body:
                s = str(a)
            elif a == 1:
                s = body
            else:
                s = f"{a}*{body}"
            parts.append(("-" if neg else "+", s))
        out = ("-" if parts[0][0] == "-" else "") + parts[0][1]
        for sign, s in parts[1:]:
            out += f" {sign} {s}"
        return out

    __repr__ = __str__


_TOKEN = re.compile(r"\s*(?:(\d+)|([A-Za-z_][A-Za-z_0-9]*)|(\S))")


class PolynomialSyntaxError(ValueError):
    def __init__(self, msg: str, pos: int):
        super().__init__(f"{msg} at offset {pos}")
        self.pos = pos


class _Parser:
    """Recursive descent over ``sum := ['-'] prod (('+'|'-') prod)*``."""

    def __init__(self, ring: Ring, text: str):
        self.ring = ring
        self.toks: list[tuple[str, str, int]] = []
        pos = 0
        text = text.strip()
        while pos < len(text):
            m = _TOKEN.match(text, pos)
            if not m:
                break
            num, name, sym = m.groups()
            start = m.start(m.lastindex)
            if num is not None:
                self.toks.append(("num", num, start))
            elif name is not None:
                self.toks.append(("name", name, start))
            else:
                self.toks.append(("sym", sym, start))
            pos = m.end()
        self.i = 0
        self.text = text

    def peek(self):
        return self.toks[self.i] if self.i < len(self.toks) else ("end", "", len(self.text))

    def take(self, sym=None):
        tok = self.peek()
        if sym is not None and tok[1] != sym:
            raise PolynomialSyntaxError(f"expected {sym!r}", tok[2])
        self.i += 1
        return tok

    def parse(self) -> Polynomial:
        if not self.toks:
            raise PolynomialSyntaxError("empty polynomial", 0)
        f = self.sum()
        tok = self.peek()
        if tok[0] != "end":
            raise PolynomialSyntaxError(f"unexpected {tok[1]!r}", tok[2])
        return f

    def sum(self) -> Polynomial:
        neg = False
        if self.peek()[1] in "+-" and self.peek()[0] == "sym":
            neg = self.take()[1] == "-"
        f = self.prod()
        if neg:
            f = -f
        while self.peek()[0] == "sym" and self.peek()[1] in ("+", "-"):
            op = self.take()[1]
            g = self.prod()
            f = f + g if op == "+" else f - g
        return f

    def prod(self) -> Polynomial:
        f = self.power()
        while self.peek()[0] == "sym" and self.peek()[1] == "*":
            self.take()
            f = f * self.power()
        return f

    def power(self) -> Polynomial:
        f = self.atom()
        if self.peek()[1] == "^" and self.peek()[0] == "sym":
            self.take()
            tok = self.take()
            if tok[0] != "num":
                raise PolynomialSyntaxError("expected exponent", tok[2])
            f = f ** int(tok[1])
        return f

    def atom(self) -> Polynomial:
        kind, val, pos = self.take()
        r = self.ring
        if kind == "num":
            return r(int(val))
        if kind == "name":
            if val in r.names:
                return r.var(r.names.index(val))
            alt = val.replace("_", "")
            if alt in r.names:
                return r.var(r.names.index(alt))
            raise PolynomialSyntaxError(f"unknown variable {val!r}", pos)
        if val == "(":
            f = self.sum()
            self.take(")")
            return f
        if val == "-":
            return -self.atom()
        raise PolynomialSyntaxError(f"unexpected {val!r}", pos)
