"""Graded free modules, homogeneous maps and finitely presented modules.

A :class:`PresentedModule` is the cokernel of its relations inside the free
module on its generators.  Over a quotient ring ``R = S/I`` the relations
``I * generators`` are implicit, so an R-module's stored relations are only
the "extra" ones.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Sequence

from .groebner import (
    ModuleGB,
    Vec,
    hilbert_numerator_of_gb,
    pole_order,
    standard_monomials,
)
from .polyring import Polynomial, Ring, RingMismatchError

log = logging.getLogger(__name__)


class DegreeError(ValueError):
    """A matrix entry does not have the degree forced by the twists."""


# ---------------------------------------------------------------------------
# vector helpers


def shift_comps(ring: Ring, v: Vec, offset: int) -> Vec:
    """Move every component of ``v`` by ``offset``."""
    d = offset << ring.cshift
    return {t - d: c for t, c in v.items()}


def vec_scale_mono(ring: Ring, v: Vec, k: int, c: int = 1) -> Vec:
    p = ring.p
    d = k - ring.low
    return {t + d: x * c % p for t, x in v.items()}


def vec_add(ring: Ring, a: Vec, b: Vec, c: int = 1) -> Vec:
    """``a + c*b`` (returns a new dict)."""
    p = ring.p
    out = dict(a)
    for t, x in b.items():
        v = (out.get(t, 0) + c * x) % p
        if v:
            out[t] = v
        else:
            out.pop(t, None)
    return out


def vec_iadd(ring: Ring, out: Vec, b: Vec, c: int = 1) -> None:
    p = ring.p
    for t, x in b.items():
        v = (out.get(t, 0) + c * x) % p
        if v:
            out[t] = v
        else:
            del out[t]


def vec_mul_poly(ring: Ring, v: Vec, f: dict[int, int]) -> Vec:
    p = ring.p
    low = ring.low
    out: Vec = {}
    for k, c in f.items():
        d = k - low
        for t, x in v.items():
            nt = t + d
            val = (out.get(nt, 0) + c * x) % p
            if val:
                out[nt] = val
            else:
                del out[nt]
    return out


def apply_columns(ring: Ring, columns: Sequence[Vec], v: Vec) -> Vec:
    """Image of ``v`` under the map whose ``j``-th generator goes to ``columns[j]``."""
    p = ring.p
    low = ring.low
    km = ring.kmask
    out: Vec = {}
    for t, c in v.items():
        col = columns[ring.comp_of(t)]
        if not col:
            continue
        d = (t & km) - low
        for s, x in col.items():
            nt = s + d
            val = (out.get(nt, 0) + c * x) % p
            if val:
                out[nt] = val
            else:
                del out[nt]
    return out


def unit_vec(ring: Ring, comp: int, c: int = 1) -> Vec:
    return {ring.term(comp, ring.one_key): c % ring.p}


def split_vec(ring: Ring, v: Vec, at: int) -> tuple[Vec, Vec]:
    """Split ``v`` into components ``< at`` and ``>= at`` (the latter renumbered from 0)."""
    lo, hi = {}, {}
    d = at << ring.cshift
    for t, c in v.items():
        if ring.comp_of(t) < at:
            lo[t] = c
        else:
            hi[t + d] = c
    return lo, hi


def entry(ring: Ring, v: Vec, comp: int) -> dict[int, int]:
    base = ring.comp_base(comp)
    km = ring.kmask
    return {t & km: c for t, c in v.items() if (t - (t & km)) == base}


# ---------------------------------------------------------------------------
# free modules and maps


@dataclass(frozen=True)
class FreeModule:
    """``(+)_i ring(-degrees[i])``."""

    ring: Ring
    degrees: tuple[int, ...]

    @property
    def rank(self) -> int:
        return len(self.degrees)

    def twist(self, j: int) -> "FreeModule":
        return FreeModule(self.ring, tuple(d - j for d in self.degrees))

    def __add__(self, other: "FreeModule") -> "FreeModule":
        return FreeModule(self.ring, self.degrees + other.degrees)


@dataclass(frozen=True)
class ModuleMap:
    """Degree-0 map of free modules; ``columns[j]`` is the image of generator ``j``."""

    source: FreeModule
    target: FreeModule
    columns: tuple

    def __post_init__(self):
        if self.source.ring.names != self.target.ring.names:
            raise RingMismatchError("source and target live over different rings")
        if len(self.columns) != self.source.rank:
            raise ValueError("one column per source generator required")

    @property
    def ring(self) -> Ring:
        return self.target.ring

    @classmethod
    def from_matrix(cls, source: FreeModule, target: FreeModule, rows) -> "ModuleMap":
        """Build from a row-major matrix of polynomials (or strings / ints)."""
        r = target.ring
        cols = []
        for j in range(source.rank):
            col: Vec = {}
            for i in range(target.rank):
                f = rows[i][j]
                if not isinstance(f, Polynomial):
                    f = r(f)
                base = r.comp_base(i)
                for k, c in f.terms.items():
                    col[base + k] = c
            cols.append(col)
        m = cls(source, target, tuple(cols))
        m.check_degrees()
        return m

    def entry(self, i: int, j: int) -> Polynomial:
        return Polynomial(self.ring, entry(self.ring, self.columns[j], i))

    def matrix(self) -> list[list[Polynomial]]:
        return [[self.entry(i, j) for j in range(self.source.rank)] for i in range(self.target.rank)]

    def check_degrees(self) -> None:
        r = self.ring
        for j, col in enumerate(self.columns):
            for t in col:
                i = r.comp_of(t)
                if i >= self.target.rank:
                    raise DegreeError(f"column {j} has a component outside the target")
                want = self.source.degrees[j] - self.target.degrees[i]
                if r.mdeg(t & r.kmask) != want:
                    raise DegreeError(f"entry ({i},{j}) should have degree {want}")

    def __call__(self, v: Vec) -> Vec:
        return apply_columns(self.ring, self.columns, v)

    def compose(self, other: "ModuleMap") -> "ModuleMap":
        """``self . other``, with entries reduced modulo the ring's ideal."""
        cols = tuple(self(c) for c in other.columns)
        if self.ring.is_quotient:
            gb = make_gb(self.ring, self.target.degrees)
            cols = tuple(gb.reduce(c) if c else c for c in cols)
        return ModuleMap(other.source, self.target, cols)

    def has_unit_entry(self) -> bool:
        r = self.ring
        km = r.kmask
        return any((t & km) == r.one_key for col in self.columns for t in col)

    def is_zero(self) -> bool:
        return not any(self.columns)


# ---------------------------------------------------------------------------
# Groebner-basis helpers shared by kernels, images and resolutions


def make_gb(ring: Ring, degrees: Sequence[int], basis: Iterable[Vec] = ()) -> ModuleGB:
    gb = ModuleGB(ring, degrees)
    gb.add_basis(basis)
    return gb


def minimal_generators(ring: Ring, degrees: Sequence[int], gens: Sequence[Vec], base: Iterable[Vec] = ()):
    """Indices of a minimal subset of ``gens`` generating ``<gens> + N`` modulo ``N``.

    ``base`` must be a Groebner basis of ``N``.  Returns ``(indices, gb)`` where
    ``gb`` is a Groebner basis of ``<gens> + N``.
    """
    gb = make_gb(ring, degrees, base)
    kept = gb.run(gens)
    return sorted(kept, key=lambda n: (gb.degree(gens[n]) if gens[n] else 0, n)), gb


def kernel_of_columns(
    ring: Ring,
    source_degrees: Sequence[int],
    target_degrees: Sequence[int],
    columns: Sequence[Vec],
    target_basis: Iterable[Vec] = (),
) -> list[Vec]:
    """Groebner basis of ``{x : sum x_j columns[j] in N}`` where ``target_basis`` is a GB of ``N``.

    Computed by elimination: position-over-term puts the target block first.
    """
    b = len(target_degrees)
    a = len(source_degrees)
    if a == 0:
        return []
    gb = make_gb(ring, list(target_degrees) + list(source_degrees), target_basis)
    gens = []
    for j, col in enumerate(columns):
        v = dict(col)
        v[ring.term(b + j, ring.one_key)] = 1
        gens.append(v)
    gb.run(gens)
    out = []
    for f in gb.basis():
        if ring.comp_of(max(f)) >= b:
            out.append(shift_comps(ring, f, -b))
    return out


# ---------------------------------------------------------------------------
# presented modules


class PresentedModule:
    """``cokernel(relations)`` inside ``(+)_i ring(-degrees[i])``."""

    def __init__(self, ring: Ring, degrees: Sequence[int], relations: Iterable[Vec] = (), gb_basis=None):
        self.ring = ring
        self.degrees = tuple(degrees)
        rels = []
        for v in relations:
            v = {t: c % ring.p for t, c in v.items() if c % ring.p}
            if v:
                rels.append(v)
        self.relations = tuple(rels)
        for v in self.relations:
            for t in v:
                if ring.comp_of(t) >= len(self.degrees):
                    raise ValueError("relation has a component outside the generators")
        self._gb_basis = None if gb_basis is None else list(gb_basis)

    # -- basic data ----------------------------------------------------
    @property
    def free(self) -> FreeModule:
        return FreeModule(self.ring, self.degrees)

    @property
    def ngens(self) -> int:
        return len(self.degrees)

    @cached_property
    def gb(self) -> ModuleGB:
        if self._gb_basis is not None:
            return make_gb(self.ring, self.degrees, self._gb_basis)
        gb = ModuleGB(self.ring, self.degrees)
        gb.run(self.relations)
        self._gb_basis = gb.basis()
        return make_gb(self.ring, self.degrees, self._gb_basis)

    @property
    def gb_basis(self) -> list[Vec]:
        self.gb
        return self._gb_basis

    @cached_property
    def free_generators(self) -> frozenset[int]:
        """Generators not involved in any relation (direct free summands)."""
        used = {self.ring.comp_of(t) for v in self.relations for t in v}
        return frozenset(i for i in range(self.ngens) if i not in used)

    def is_free(self) -> bool:
        return not self.relations

    def is_zero(self) -> bool:
        """True iff every generator reduces to zero."""
        gb = self.gb
        return all(not gb.reduce(unit_vec(self.ring, i)) for i in range(self.ngens))

    def normal_form(self, v: Vec) -> Vec:
        return self.gb.reduce(v)

    def basis(self, d: int) -> list[int]:
        return standard_monomials(self.gb, d)

    def hilbert_function(self, d: int) -> int:
        return len(self.basis(d))

    @cached_property
    def hilbert_numerator(self) -> dict[int, int]:
        return hilbert_numerator_of_gb(self.gb)

    def hilbert_polynomial_values(self, degrees: Iterable[int]) -> list[int]:
        from .groebner import hilbert_function_from_numerator

        return [hilbert_function_from_numerator(self.hilbert_numerator, self.ring.nvars, d) for d in degrees]

    def krull_dimension(self) -> float:
        return pole_order(self.hilbert_numerator, self.ring.nvars)

    # -- constructions -------------------------------------------------
    @classmethod
    def free_module(cls, ring: Ring, degrees: Sequence[int]) -> "PresentedModule":
        return cls(ring, degrees, (), gb_basis=[])

    @classmethod
    def cokernel(cls, f: ModuleMap) -> "PresentedModule":
        return cls(f.ring, f.target.degrees, f.columns)

    def twist(self, j: int) -> "PresentedModule":
        return PresentedModule(self.ring, [d - j for d in self.degrees], self.relations, gb_basis=self.gb_basis)

    @staticmethod
    def direct_sum(mods: Sequence["PresentedModule"], ring: Ring | None = None) -> "PresentedModule":
        if not mods:
            if ring is None:
                raise ValueError("empty direct sum needs a ring")
            return PresentedModule.free_module(ring, [])
        ring = mods[0].ring
        degrees: list[int] = []
        rels: list[Vec] = []
        basis: list[Vec] = []
        for m in mods:
            off = len(degrees)
            degrees.extend(m.degrees)
            rels.extend(shift_comps(ring, v, off) for v in m.relations)
            basis.extend(shift_comps(ring, v, off) for v in m.gb_basis)
        return PresentedModule(ring, degrees, rels, gb_basis=basis)

    def __repr__(self):
        return f"PresentedModule(degrees={list(self.degrees)}, relations={len(self.relations)})"

    def presentation(self) -> ModuleMap:
        """Relations as a map from a free module onto the relation submodule."""
        r = self.ring
        gb = make_gb(r, self.degrees)
        srcdeg = tuple(gb.degree(v) for v in self.relations)
        return ModuleMap(FreeModule(r, srcdeg), self.free, self.relations)


def subquotient(ring: Ring, degrees: Sequence[int], gens: Sequence[Vec], base: Sequence[Vec]):
    """Minimal presentation of ``(<gens> + N) / N`` with ``base`` a GB of ``N``.

    Returns ``(module, kept_gens)`` where ``kept_gens[i]`` is the ambient vector
    representing generator ``i`` of ``module``.
    """
    kept, _ = minimal_generators(ring, degrees, gens, base)
    chosen = [gens[i] for i in kept]
    probe = make_gb(ring, degrees)
    gdeg = [probe.degree(v) for v in chosen]
    rels = kernel_of_columns(ring, gdeg, degrees, chosen, base)
    # keep a minimal set of relations
    idx, gb = minimal_generators(ring, gdeg, rels)
    rels = [rels[i] for i in idx]
    return PresentedModule(ring, gdeg, rels, gb_basis=gb.basis()), chosen


def kernel(f: ModuleMap, target: PresentedModule | None = None) -> PresentedModule:
    """Kernel of ``f`` (into ``target`` if given, else into the free target)."""
    r = f.ring
    base = target.gb_basis if target is not None else []
    gens = kernel_of_columns(r, f.source.degrees, f.target.degrees, f.columns, base)
    return subquotient(r, f.source.degrees, gens, [])[0]


def image(f: ModuleMap, target: PresentedModule | None = None) -> PresentedModule:
    r = f.ring
    base = target.gb_basis if target is not None else []
    return subquotient(r, f.target.degrees, list(f.columns), base)[0]


def cokernel(f: ModuleMap, target: PresentedModule | None = None) -> PresentedModule:
    rels = list(f.columns) + (list(target.relations) if target is not None else [])
    return PresentedModule(f.ring, f.target.degrees, rels)


def prune(M: PresentedModule) -> PresentedModule:
    """Minimal presentation of ``M``."""
    r = M.ring
    gens = [unit_vec(r, i) for i in range(M.ngens)]
    return subquotient(r, M.degrees, gens, M.gb_basis)[0]


def restrict_scalars(M: PresentedModule) -> PresentedModule:
    """View an R-module as a module over the ambient polynomial ring S."""
    R = M.ring
    if not R.is_quotient:
        raise ValueError("restrict_scalars needs a quotient ring")
    S = R.ambient
    rels = list(M.relations)
    for i in range(M.ngens):
        base = S.comp_base(i)
        for f in R.ideal_gens:
            rels.append({base + k: c for k, c in f.terms.items()})
    return PresentedModule(S, M.degrees, rels)


def lift_to_ambient(M: PresentedModule) -> PresentedModule:
    """Same module over ``S`` if ``M`` is over ``S`` already, else :func:`restrict_scalars`."""
    return restrict_scalars(M) if M.ring.is_quotient else M


# ---------------------------------------------------------------------------
# truncation


@dataclass
class Truncation:
    module: PresentedModule
    gens: list[Vec]  # generator i of the truncation, as a vector in the original cover
    r: int
    original: PresentedModule
    _index: dict = field(default_factory=dict)
    identity: bool = False

    def express(self, v: Vec) -> Vec:
        """Write an element of the original module of degree >= r in the truncation's generators."""
        M = self.original
        if self.identity:
            return dict(v)
        ring = M.ring
        v = M.normal_form(v)
        out: Vec = {}
        km = ring.kmask
        for t, c in v.items():
            i = ring.comp_of(t)
            k = t & km
            di = M.degrees[i]
            if di > self.r:
                vec_iadd(ring, out, {ring.term(self._index[("g", i)], k): c})
                continue
            need = self.r - di
            e = list(ring.exps(k))
            low_part = [0] * ring.nvars
            for x in range(ring.nvars):
                take = min(e[x], need)
                low_part[x] = take
                e[x] -= take
                need -= take
            mu2 = ring.mono(low_part)
            mu1 = ring.mono(e)
            nf = M.normal_form({ring.term(i, mu2): 1})
            for s, cs in nf.items():
                j = self._index[("s", s)]
                vec_iadd(ring, out, {ring.term(j, mu1): cs * c})
        return out


def truncate_module(M: PresentedModule, r: int) -> Truncation:
    """``M_{>=r}`` with its generators expressed in ``M``'s cover."""
    ring = M.ring
    if not M.degrees or r <= min(M.degrees):
        return Truncation(M, [unit_vec(ring, i) for i in range(M.ngens)], r, M, identity=True)
    return _truncate_general(M, r)


def _truncate_general(M: PresentedModule, r: int) -> Truncation:
    ring = M.ring
    gens: list[Vec] = []
    index: dict = {}
    degs: list[int] = []
    for s in M.basis(r):
        index[("s", s)] = len(gens)
        gens.append({s: 1})
        degs.append(r)
    for i, d in enumerate(M.degrees):
        if d > r:
            index[("g", i)] = len(gens)
            gens.append(unit_vec(ring, i))
            degs.append(d)
    rels = kernel_of_columns(ring, degs, M.degrees, gens, M.gb_basis)
    mod = PresentedModule(ring, degs, rels)
    return Truncation(mod, gens, r, M, index)


__all__ = [
    "BettiTable",
    "FreeResolution",
    "betti_stats",
    "minimal_free_resolution",
    "FreeModule",
    "ModuleMap",
    "PresentedModule",
    "DegreeError",
    "kernel",
    "image",
    "cokernel",
    "prune",
    "subquotient",
    "restrict_scalars",
    "truncate_module",
    "minimal_generators",
    "kernel_of_columns",
]


# ---------------------------------------------------------------------------
# minimal free resolutions and Betti tables

NEG_INF = float("-inf")


@dataclass
class BettiTable:
    """``beta[(i, j)]``: number of degree-``j`` generators of the ``i``-th free module."""

    beta: dict[tuple[int, int], int]
    over: str = "R"

    @property
    def pd(self) -> int:
        return max((i for (i, _), b in self.beta.items() if b), default=0)

    def a_max(self, i: int) -> float:
        return max((j for (k, j), b in self.beta.items() if k == i and b), default=NEG_INF)

    def a_min(self, i: int) -> float:
        return min((j for (k, j), b in self.beta.items() if k == i and b), default=float("inf"))

    def total(self, i: int) -> int:
        return sum(b for (k, _), b in self.beta.items() if k == i)

    def grid(self) -> str:
        """Rows ``j - i``, columns ``i``."""
        if not self.beta:
            return "0"
        cols = sorted({i for i, _ in self.beta})
        rows = sorted({j - i for i, j in self.beta})
        width = max(len(str(b)) for b in self.beta.values()) + 1
        lab = max(len(f"{r}:") for r in rows)
        lab = max(lab, len("total:"))
        lines = [" " * lab + "".join(f"{i:>{width}}" for i in cols)]
        lines.append("total:".rjust(lab) + "".join(f"{self.total(i):>{width}}" for i in cols))
        for r in rows:
            cells = []
            for i in cols:
                b = self.beta.get((i, r + i), 0)
                cells.append(f"{(b if b else '.'):>{width}}")
            lines.append(f"{r}:".rjust(lab) + "".join(cells))
        return "\n".join(lines)

    def to_json(self) -> dict:
        return {"over": self.over, "betti": [[i, j, b] for (i, j), b in sorted(self.beta.items())]}


@dataclass
class FreeResolution:
    """``maps[i]: F_{i+1} -> F_i`` with ``F_0`` covering the module."""

    modules: list[FreeModule]
    maps: list[ModuleMap]
    complete: bool

    @property
    def betti(self) -> BettiTable:
        beta: dict[tuple[int, int], int] = {}
        for i, F in enumerate(self.modules):
            for d in F.degrees:
                beta[(i, d)] = beta.get((i, d), 0) + 1
        tag = "R" if self.modules and self.modules[0].ring.is_quotient else "S"
        return BettiTable(beta, tag)


def minimal_free_resolution(M: PresentedModule, length_cap: int | None = None) -> FreeResolution:
    """Minimal free resolution up to homological degree ``length_cap``.

    Over a quotient ring a cap is required since resolutions are usually infinite.
    """
    r = M.ring
    if length_cap is None and r.is_quotient:
        raise ValueError("resolutions over a quotient ring need a length cap")
    M = prune(M)
    modules = [M.free]
    maps: list[ModuleMap] = []
    if not M.ngens:
        return FreeResolution([], [], True)
    cols = list(M.relations)
    idx, _ = minimal_generators(r, M.degrees, cols)
    cols = [cols[i] for i in idx]
    i = 0
    while cols:
        if length_cap is not None and i >= length_cap:
            return FreeResolution(modules, maps, False)
        tgt = modules[-1]
        probe = make_gb(r, tgt.degrees)
        srcdeg = tuple(probe.degree(v) for v in cols)
        src = FreeModule(r, srcdeg)
        maps.append(ModuleMap(src, tgt, tuple(cols)))
        modules.append(src)
        log.debug("minimal_free_resolution: step %d, rank %d", i + 1, len(srcdeg))
        K = kernel_of_columns(r, srcdeg, tgt.degrees, cols)
        idx, _ = minimal_generators(r, srcdeg, K)
        cols = [K[j] for j in idx]
        i += 1
    return FreeResolution(modules, maps, True)


def betti_stats(M: PresentedModule) -> tuple[int, dict[int, float], dict[int, float]]:
    """``(pd_S, a_max, a_min)`` of ``M`` viewed as a module over the polynomial ring."""
    res = minimal_free_resolution(lift_to_ambient(M))
    bt = res.betti
    pd = bt.pd if res.modules else NEG_INF
    n = len(res.modules)
    return pd, {i: bt.a_max(i) for i in range(n)}, {i: bt.a_min(i) for i in range(n)}
