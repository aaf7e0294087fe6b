"""Bounded cohomologically indexed complexes of presented modules.

Sign conventions (everything else is derived from these two):

* shift:  ``C[i]^j = C^{i+j}`` with differential ``(-1)^i d``;
* cone:   ``cone(f)^j = A^{j+1} (+) B^j`` with differential ``[[-d_A, 0], [f, d_B]]``.

The Hom complex differential sends ``g`` of degree ``m`` to
``d_D g - (-1)^m g d_F``.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass, field
from itertools import combinations
from typing import Iterable, Sequence

import numpy as np

from .gradedmod import (
    FreeModule,
    ModuleMap,
    PresentedModule,
    apply_columns,
    entry,
    kernel_of_columns,
    make_gb,
    minimal_generators,
    shift_comps,
    subquotient,
    truncate_module,
    unit_vec,
    vec_iadd,
    vec_mul_poly,
)
from .groebner import Vec
from .linalg import Cohomology, NotAComplexError, cohomology_rank, sparse_rank
from .polyring import Polynomial, Ring

log = logging.getLogger(__name__)

INF = float("inf")


def _neg(ring: Ring, v: Vec) -> Vec:
    p = ring.p
    return {t: p - c for t, c in v.items()}


def _scale(ring: Ring, v: Vec, c: int) -> Vec:
    p = ring.p
    c %= p
    if c == 0:
        return {}
    return {t: x * c % p for t, x in v.items()}


def _drop_comp(ring: Ring, v: Vec, q: int) -> Vec:
    step = 1 << ring.cshift
    out = {}
    for t, c in v.items():
        k = ring.comp_of(t)
        if k < q:
            out[t] = c
        elif k > q:
            out[t + step] = c
    return out


class Complex:
    """``terms[j]`` with differentials ``d[j]: terms[j] -> terms[j+1]``.

    ``d[j]`` is a tuple of column vectors, one per generator of ``terms[j]``,
    living in the cover of ``terms[j+1]``.  Zero terms are not stored.
    """

    def __init__(self, ring: Ring, terms: dict[int, PresentedModule], diffs: dict[int, Sequence[Vec]] | None = None, check: bool = True):
        self.ring = ring
        self.terms = {j: M for j, M in sorted(terms.items()) if M.ngens}
        diffs = diffs or {}
        self.diffs: dict[int, tuple] = {}
        for j, M in self.terms.items():
            cols = tuple(diffs.get(j, ()))
            if j + 1 not in self.terms:
                cols = tuple({} for _ in range(M.ngens))
            if len(cols) != M.ngens:
                if not cols:
                    cols = tuple({} for _ in range(M.ngens))
                else:
                    raise ValueError(f"differential at {j} has {len(cols)} columns, expected {M.ngens}")
            self.diffs[j] = cols
        if check:
            self.check()

    # -- access --------------------------------------------------------
    def term(self, j: int) -> PresentedModule:
        M = self.terms.get(j)
        if M is None:
            return PresentedModule.free_module(self.ring, [])
        return M

    def d(self, j: int) -> tuple:
        return self.diffs.get(j, tuple({} for _ in range(self.term(j).ngens)))

    def dmap(self, j: int) -> ModuleMap:
        return ModuleMap(self.term(j).free, self.term(j + 1).free, self.d(j))

    @property
    def inf(self) -> float:
        return min(self.terms) if self.terms else INF

    @property
    def sup(self) -> float:
        return max(self.terms) if self.terms else -INF

    def is_zero(self) -> bool:
        return not self.terms

    def is_free(self) -> bool:
        return all(M.is_free() for M in self.terms.values())

    def ranks(self) -> dict[int, int]:
        return {j: M.ngens for j, M in self.terms.items()}

    def check(self) -> None:
        """Raise :class:`NotAComplexError` unless ``d^{j+1} d^j = 0`` for all ``j``."""
        r = self.ring
        for j in self.terms:
            if j + 2 not in self.terms:
                continue
            tgt = self.terms[j + 2]
            d1 = self.diffs[j + 1]
            for col in self.diffs[j]:
                v = apply_columns(r, d1, col)
                if v and tgt.normal_form(v):
                    raise NotAComplexError(f"d^{j + 1} d^{j} != 0")

    def __repr__(self):
        parts = [f"{j}:{list(M.degrees)}{'' if M.is_free() else '*'}" for j, M in self.terms.items()]
        return "Complex(" + ", ".join(parts) + ")"

    # -- constructors ----------------------------------------------------
    @classmethod
    def single(cls, M: PresentedModule, j: int = 0) -> "Complex":
        return cls(M.ring, {j: M})

    @classmethod
    def zero(cls, ring: Ring) -> "Complex":
        return cls(ring, {})

    @classmethod
    def from_maps(cls, maps: Sequence[ModuleMap], top: int = 0, modules: Sequence[PresentedModule] | None = None) -> "Complex":
        """Complex ``F_0 -> F_1 -> ... -> F_k`` given composable maps, right-most target in degree ``top``."""
        if not maps:
            raise ValueError("need at least one map")
        ring = maps[0].ring
        k = len(maps)
        terms: dict[int, PresentedModule] = {}
        diffs: dict[int, tuple] = {}
        for idx, f in enumerate(maps):
            j = top - k + idx
            terms.setdefault(j, PresentedModule.free_module(ring, f.source.degrees))
            terms[j + 1] = PresentedModule.free_module(ring, f.target.degrees)
            if terms[j].degrees != f.source.degrees:
                raise ValueError("maps are not composable")
            diffs[j] = f.columns
        if modules is not None:
            for idx, M in enumerate(modules):
                terms[top - k + idx] = M
        return cls(ring, terms, diffs)


# ---------------------------------------------------------------------------
# basic operations


def shift(C: Complex, i: int) -> Complex:
    """``C[i]``: ``C[i]^j = C^{i+j}``, differential ``(-1)^i d``."""
    sign = -1 if i % 2 else 1
    r = C.ring
    terms = {j - i: M for j, M in C.terms.items()}
    diffs = {j - i: tuple(_scale(r, c, sign) for c in cols) for j, cols in C.diffs.items()}
    return Complex(r, terms, diffs, check=False)


def twist(C: Complex, j: int) -> Complex:
    """``C(j)``: internal degrees lowered by ``j``, same matrices."""
    return Complex(C.ring, {k: M.twist(j) for k, M in C.terms.items()}, dict(C.diffs), check=False)


def direct_sum(complexes: Sequence[Complex], ring: Ring | None = None) -> Complex:
    ring = ring or complexes[0].ring
    idx = sorted({j for C in complexes for j in C.terms})
    terms, diffs = {}, {}
    for j in idx:
        mods = [C.term(j) for C in complexes]
        terms[j] = PresentedModule.direct_sum(mods, ring)
        cols = []
        off_t = 0
        for C in complexes:
            for col in C.d(j):
                cols.append(shift_comps(ring, col, off_t))
            off_t += C.term(j + 1).ngens
        diffs[j] = tuple(cols)
    return Complex(ring, terms, diffs, check=False)


def koszul(elements: Sequence[Polynomial]) -> Complex:
    """Koszul complex on ``f_1..f_c`` in cohomological degrees ``-c..0``."""
    if not elements:
        raise ValueError("need at least one element")
    ring = elements[0].ring
    c = len(elements)
    degs = []
    for f in elements:
        if not f.is_homogeneous():
            raise ValueError(f"{f} is not homogeneous")
        degs.append(f.degree if f.degree is not None else 0)
    subsets = {i: list(combinations(range(c), i)) for i in range(c + 1)}
    terms = {-i: PresentedModule.free_module(ring, [sum(degs[s] for s in S) for S in subsets[i]]) for i in range(c + 1)}
    diffs = {}
    for i in range(1, c + 1):
        pos = {S: n for n, S in enumerate(subsets[i - 1])}
        cols = []
        for S in subsets[i]:
            col: Vec = {}
            for k, s in enumerate(S):
                rest = S[:k] + S[k + 1:]
                sign = -1 if k % 2 else 1
                base = ring.comp_base(pos[rest])
                for mono, co in elements[s].terms.items():
                    vec_iadd(ring, col, {base + mono: co * sign})
            cols.append(col)
        diffs[-i] = tuple(cols)
    return Complex(ring, terms, diffs)


@dataclass
class ChainMap:
    """``comps[j]`` lists the images of the generators of ``source^j`` in ``target^j``'s cover."""

    source: Complex
    target: Complex
    comps: dict[int, tuple]

    def comp(self, j: int) -> tuple:
        return self.comps.get(j, tuple({} for _ in range(self.source.term(j).ngens)))

    def check(self) -> None:
        r = self.source.ring
        for j in set(self.source.terms) | {j - 1 for j in self.source.terms}:
            tgt = self.target.term(j + 1)
            fj, fj1 = self.comp(j), self.comp(j + 1)
            dS, dT = self.source.d(j), self.target.d(j)
            for g in range(self.source.term(j).ngens):
                a = apply_columns(r, dT, fj[g]) if fj[g] else {}
                b = apply_columns(r, fj1, dS[g]) if dS[g] else {}
                diff = dict(a)
                vec_iadd(r, diff, b, -1)
                if diff and tgt.normal_form(diff):
                    raise NotAComplexError(f"chain map does not commute at degree {j}")


def identity_map(C: Complex) -> ChainMap:
    r = C.ring
    return ChainMap(C, C, {j: tuple(unit_vec(r, i) for i in range(M.ngens)) for j, M in C.terms.items()})


def cone(f: ChainMap, check: bool = True) -> Complex:
    """``cone(f)^j = A^{j+1} (+) B^j``, differential ``[[-d_A, 0], [f, d_B]]``."""
    A, B = f.source, f.target
    r = A.ring
    if check:
        f.check()
    idx = sorted({j - 1 for j in A.terms} | set(B.terms))
    terms, diffs = {}, {}
    for j in idx:
        terms[j] = PresentedModule.direct_sum([A.term(j + 1), B.term(j)], r)
    for j in idx:
        na_next = A.term(j + 2).ngens
        cols = []
        dA = A.d(j + 1)
        fj = f.comp(j + 1)
        for g in range(A.term(j + 1).ngens):
            col = _neg(r, dA[g])
            vec_iadd(r, col, shift_comps(r, fj[g], na_next))
            cols.append(col)
        for col in B.d(j):
            cols.append(shift_comps(r, col, na_next))
        diffs[j] = tuple(cols)
    return Complex(r, terms, diffs)


# ---------------------------------------------------------------------------
# Hom complex


@dataclass
class HomComplex:
    complex: Complex
    # (m, j, g) -> offset of the summand Hom(F^j gen g, D^{j+m}) inside term m
    offsets: dict
    source: Complex
    target: Complex


def hom_complex(F: Complex, D: Complex) -> HomComplex:
    """Internal Hom from a free complex ``F`` into ``D``."""
    if not F.is_free():
        raise ValueError("hom_complex needs a complex of free modules as source")
    r = F.ring
    ms = sorted({k - j for j in F.terms for k in D.terms})
    offsets = {}
    mods = {}
    summands = {}
    for m in ms:
        parts = []
        off = 0
        lst = []
        for j, Fj in F.terms.items():
            Dk = D.terms.get(j + m)
            if Dk is None:
                continue
            for g, b in enumerate(Fj.degrees):
                offsets[(m, j, g)] = off
                lst.append((j, g))
                parts.append(Dk.twist(b))
                off += Dk.ngens
        if parts:
            mods[m] = PresentedModule.direct_sum(parts, r)
            summands[m] = lst
    # rows of F's differentials: a[j][g] = list of (h, poly) with d_F^{j-1}(e_h) having entry poly at g
    rows: dict[int, dict[int, list]] = {}
    for j in F.terms:
        prev = F.d(j - 1) if (j - 1) in F.terms else ()
        acc: dict[int, list] = {}
        for h, col in enumerate(prev):
            for g in {r.comp_of(t) for t in col}:
                acc.setdefault(g, []).append((h, entry(r, col, g)))
        rows[j] = acc
    diffs = {}
    for m, lst in summands.items():
        sign = -1 if m % 2 == 0 else 1  # -(-1)^m
        cols = []
        for j, g in lst:
            Dk = D.terms[j + m]
            dD = D.d(j + m)
            tgt_off = offsets.get((m + 1, j, g))
            for k in range(Dk.ngens):
                col: Vec = {}
                if tgt_off is not None and dD[k]:
                    vec_iadd(r, col, shift_comps(r, dD[k], tgt_off))
                for h, poly in rows[j].get(g, ()):
                    off2 = offsets.get((m + 1, j - 1, h))
                    if off2 is None:
                        continue
                    base = r.comp_base(off2 + k)
                    for mono, c in poly.items():
                        vec_iadd(r, col, {base + mono: c * sign})
                cols.append(col)
        diffs[m] = tuple(cols)
    return HomComplex(Complex(r, mods, diffs, check=False), offsets, F, D)


# ---------------------------------------------------------------------------
# cohomology and strands


def cohomology_module(C: Complex, m: int) -> PresentedModule:
    """``ker(d^m) / im(d^{m-1})`` as a minimally presented module."""
    r = C.ring
    M = C.term(m)
    if M.ngens == 0:
        return PresentedModule.free_module(r, [])
    N = C.term(m + 1)
    K = kernel_of_columns(r, M.degrees, N.degrees, C.d(m), N.gb_basis) if N.ngens else [unit_vec(r, i) for i in range(M.ngens)]
    B = [c for c in C.d(m - 1) if c]
    _, gb = minimal_generators(r, M.degrees, B, M.gb_basis)
    return subquotient(r, M.degrees, K, gb.basis())[0]


DENSE_LIMIT = 4_000_000  # entries; larger differentials use sparse elimination


@dataclass
class StrandComplex:
    """Degree-``v`` strand: finite-dimensional spaces and matrices over GF(p).

    ``cols[m]`` holds the differential out of position ``m`` as sparse
    columns ``{row: value}``.
    """

    p: int
    degree: int
    dims: dict[int, int]
    cols: dict[int, list[dict[int, int]]]
    bases: dict[int, list[int]] = field(default_factory=dict)
    _ranks: dict[int, int] = field(default_factory=dict, repr=False)

    def positions(self) -> list[int]:
        return sorted(self.dims)

    def matrix(self, m: int) -> np.ndarray:
        """Dense differential ``dims[m+1] x dims[m]``."""
        rows, ncol = self.dims.get(m + 1, 0), self.dims.get(m, 0)
        mat = np.zeros((rows, ncol), dtype=np.int64)
        for n, col in enumerate(self.cols.get(m, ())):
            for k, c in col.items():
                mat[k, n] = c
        return mat

    @property
    def mats(self) -> dict[int, np.ndarray]:
        return {m: self.matrix(m) for m in self.cols}

    def rank(self, m: int) -> int:
        if m not in self._ranks:
            cols = self.cols.get(m, [])
            self._ranks[m] = sparse_rank(cols, self.p) if cols else 0
        return self._ranks[m]

    def cohomology_dim(self, m: int) -> int:
        return self.dims.get(m, 0) - self.rank(m) - self.rank(m - 1)

    def cohomology(self, m: int) -> Cohomology:
        """Dimension and representative cycles (dense; falls back to ranks only when huge)."""
        n = self.dims.get(m, 0)
        big = n * max(self.dims.get(m + 1, 0), self.dims.get(m - 1, 0))
        if big > DENSE_LIMIT:
            return Cohomology(self.cohomology_dim(m), None)
        d_in = self.matrix(m - 1) if m - 1 in self.cols else np.zeros((n, 0), dtype=np.int64)
        d_out = self.matrix(m) if m in self.cols else np.zeros((0, n), dtype=np.int64)
        return cohomology_rank(d_in, d_out, self.p)

    def cohomology_dims(self) -> dict[int, int]:
        return {m: self.cohomology_dim(m) for m in self.positions()}

    def euler_characteristic(self) -> int:
        return sum((-1) ** (m % 2) * d for m, d in self.dims.items())

    def display(self) -> str:
        """Cohomology in the left-arrow style, highest cohomological degree first."""
        h = self.cohomology_dims()
        if not h:
            return "0"
        ms = sorted(h, reverse=True)
        return " <- ".join(f"k^{h[m]}" if h[m] else "0" for m in ms)


def strand(C: Complex, v: int, positions: Iterable[int] | None = None) -> StrandComplex:
    """Degree-``v`` strand, optionally only around the given positions."""
    r = C.ring
    want = set(C.terms)
    if positions is not None:
        want &= {q for m in positions for q in (m - 1, m, m + 1)}
    bases = {j: C.terms[j].basis(v) for j in sorted(want)}
    dims = {j: len(b) for j, b in bases.items()}
    out = {}
    km = r.kmask
    for j in bases:
        if j + 1 not in bases or not dims[j] or not dims[j + 1]:
            continue
        N = C.terms[j + 1]
        index = {t: n for n, t in enumerate(bases[j + 1])}
        cols = C.diffs[j]
        mat = []
        for t in bases[j]:
            col = cols[r.comp_of(t)]
            if not col:
                mat.append({})
                continue
            img = N.normal_form(apply_columns(r, (col,), {r.term(0, t & km): 1}))
            mat.append({index[s]: c for s, c in img.items()})
        out[j] = mat
    return StrandComplex(r.p, v, dims, out, bases)


# ---------------------------------------------------------------------------
# truncation, resolution, minimization


def truncate_complex(C: Complex, r_deg: int) -> Complex:
    """``C_{>=r}`` termwise, with the induced differentials."""
    r = C.ring
    trs = {j: truncate_module(M, r_deg) for j, M in C.terms.items()}
    terms = {j: t.module for j, t in trs.items()}
    diffs = {}
    for j, t in trs.items():
        if j + 1 not in trs:
            continue
        nxt = trs[j + 1]
        cols = []
        for g in t.gens:
            img = apply_columns(r, C.diffs[j], g)
            cols.append(nxt.express(img) if img else {})
        diffs[j] = tuple(cols)
    return Complex(r, terms, diffs, check=False)


def smart_truncate_below(C: Complex, b: int) -> Complex:
    """``tau_{>=b} C``: terms above ``b`` kept, ``coker(d^{b-1})`` in degree ``b``."""
    r = C.ring
    terms = {j: M for j, M in C.terms.items() if j > b}
    if b in C.terms:
        M = C.terms[b]
        rels = list(M.relations) + [c for c in C.d(b - 1) if c]
        terms[b] = PresentedModule(r, M.degrees, rels)
    diffs = {j: C.diffs[j] for j in terms}
    return Complex(r, terms, diffs, check=False)


def tighten(C: Complex) -> Complex:
    """Smart truncation below the lowest nonzero cohomology module."""
    for j in sorted(C.terms):
        if cohomology_module(C, j).ngens:
            return smart_truncate_below(C, j) if j > C.inf else C
    return Complex.zero(C.ring)


@dataclass
class Resolution:
    complex: Complex  # free
    map: ChainMap  # quasi-isomorphism (in the computed range) to the input


def resolve_complex(C: Complex, length_cap: int | None = None, minimal: bool = True) -> Resolution:
    """Free resolution ``F -> C``, computed top-down.

    ``F^j`` is a minimal free cover of
    ``W^j = {(x, c) in F^{j+1} (+) C^j : d x = 0, f x = d c}``; the result is
    then pruned to a minimal complex.  Terms below ``sup(C) - length_cap`` are
    not computed.  Over a quotient ring a cap is required.
    """
    r = C.ring
    if C.is_zero():
        z = Complex.zero(r)
        return Resolution(z, ChainMap(z, C, {}))
    if length_cap is None and r.is_quotient:
        raise ValueError("resolutions over a quotient ring need a length cap")
    hi, lo = int(C.sup), int(C.inf)
    bottom = hi - length_cap if length_cap is not None else None
    Fdeg: dict[int, tuple] = {}
    Fd: dict[int, list] = {}
    fmap: dict[int, list] = {}
    j = hi
    while bottom is None or j >= bottom:
        a1 = Fdeg.get(j + 1, ())
        Cj = C.term(j)
        b1 = Fdeg.get(j + 2, ())
        Cj1 = C.term(j + 1)
        src = tuple(a1) + Cj.degrees
        tgt = tuple(b1) + Cj1.degrees
        if not src:
            if j < lo:
                break
            j -= 1
            continue
        nb1 = len(b1)
        cols = []
        for x in range(len(a1)):
            v = dict(Fd[j + 1][x])
            vec_iadd(r, v, shift_comps(r, fmap[j + 1][x], nb1))
            cols.append(v)
        for col in C.d(j):
            cols.append(shift_comps(r, _neg(r, col), nb1))
        if tgt:
            tb = [shift_comps(r, g, nb1) for g in Cj1.gb_basis]
            K = kernel_of_columns(r, src, tgt, cols, tb)
        else:
            K = [unit_vec(r, i) for i in range(len(src))]
        base = [shift_comps(r, g, len(a1)) for g in Cj.gb_basis]
        kept, _ = minimal_generators(r, src, K, base)
        gens = [K[i] for i in kept]
        log.debug("resolve_complex: position %d, %d new generators", j, len(gens))
        if not gens:
            if j < lo:
                break
            j -= 1
            continue
        probe = make_gb(r, src)
        degs = []
        dcols, fcols = [], []
        for g in gens:
            degs.append(probe.degree(g))
            lo_part, hi_part = {}, {}
            na1 = len(a1)
            for t, c in g.items():
                if r.comp_of(t) < na1:
                    lo_part[t] = c
                else:
                    hi_part[t] = c
            dcols.append(lo_part)
            fcols.append(shift_comps(r, hi_part, -na1))
        Fdeg[j] = tuple(degs)
        Fd[j] = dcols
        fmap[j] = fcols
        j -= 1
    terms = {k: PresentedModule.free_module(r, d) for k, d in Fdeg.items()}
    F = Complex(r, terms, {k: tuple(v) for k, v in Fd.items()}, check=False)
    fm = {k: tuple(v) for k, v in fmap.items()}
    if minimal:
        F, fm = _prune(F, fm)
    return Resolution(F, ChainMap(F, C, fm))


def minimize(C: Complex) -> Complex:
    """Cancel unit entries between free generators (Gaussian elimination on the complex)."""
    return _prune(C, None)[0]


def _prune(C: Complex, fmap: dict | None):
    r = C.ring
    p = r.p
    km = r.kmask
    one = r.one_key
    terms = dict(C.terms)
    diffs = {j: list(cols) for j, cols in C.diffs.items()}
    fm = None if fmap is None else {j: list(v) for j, v in fmap.items()}
    changed = True
    while changed:
        changed = False
        for j in sorted(terms):
            if j + 1 not in terms:
                continue
            src, tgt = terms[j], terms[j + 1]
            freeb, freea = src.free_generators, tgt.free_generators
            hit = None
            for b, col in enumerate(diffs[j]):
                if b not in freeb:
                    continue
                for t, c in col.items():
                    if (t & km) == one and r.comp_of(t) in freea:
                        hit = (b, r.comp_of(t), c)
                        break
                if hit:
                    break
            if not hit:
                continue
            b, a, u = hit
            uinv = pow(u, -1, p)
            colb = diffs[j][b]
            gamma = {t: c for t, c in colb.items() if r.comp_of(t) != a}
            newcols = []
            newf = []
            for c_idx, col in enumerate(diffs[j]):
                if c_idx == b:
                    continue
                delta = entry(r, col, a)
                rest = {t: c for t, c in col.items() if r.comp_of(t) != a}
                if delta:
                    corr = vec_mul_poly(r, gamma, delta)
                    vec_iadd(r, rest, corr, -uinv)
                newcols.append(_drop_comp(r, rest, a))
                if fm is not None and j in fm:
                    fc = dict(fm[j][c_idx])
                    if delta:
                        vec_iadd(r, fc, vec_mul_poly(r, fm[j][b], delta), -uinv)
                    newf.append(fc)
            diffs[j] = newcols
            if fm is not None and j in fm:
                fm[j] = newf
            # next differential loses column a
            if j + 1 in diffs:
                diffs[j + 1] = [c for k, c in enumerate(diffs[j + 1]) if k != a]
            if fm is not None and j + 1 in fm:
                fm[j + 1] = [c for k, c in enumerate(fm[j + 1]) if k != a]
            # previous differential loses row b
            if j - 1 in diffs:
                diffs[j - 1] = [_drop_comp(r, c, b) for c in diffs[j - 1]]
            terms[j] = _drop_generator(src, b)
            terms[j + 1] = _drop_generator(tgt, a)
            changed = True
            break
    keep = {j: M for j, M in terms.items() if M.ngens}
    out = Complex(r, keep, {j: tuple(diffs[j]) for j in keep if j in diffs}, check=False)
    if fm is not None:
        fm = {j: tuple(v) for j, v in fm.items() if j in keep}
    return out, fm


def _drop_generator(M: PresentedModule, q: int) -> PresentedModule:
    r = M.ring
    degs = M.degrees[:q] + M.degrees[q + 1:]
    rels = [_drop_comp(r, v, q) for v in M.relations]
    basis = [_drop_comp(r, v, q) for v in M.gb_basis]
    return PresentedModule(r, degs, rels, gb_basis=basis)


# ---------------------------------------------------------------------------
# statistics


def complex_dimension(C: Complex) -> float:
    """Krull dimension of the support (max over cohomology modules); ``-inf`` if exact."""
    best = -INF
    for m in C.terms:
        H = cohomology_module(C, m)
        if H.ngens:
            best = max(best, H.krull_dimension())
    return best


def complex_stats(C: Complex) -> tuple[float, float, float]:
    return C.inf, C.sup, complex_dimension(C)


def betti_table(F: Complex) -> dict[tuple[int, int], int]:
    """``beta_{i,j}`` of a free complex: generators of degree ``j`` in ``F^{-i}``."""
    out: dict[tuple[int, int], int] = {}
    for k, M in F.terms.items():
        for d in M.degrees:
            out[(-k, d)] = out.get((-k, d), 0) + 1
    return out
