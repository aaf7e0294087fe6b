"""Exceptional objects, extension tables, mutations and spherical twists.

Mutations follow the triangles

    L_E(F) -> RHom(E, F) (x) E --ev--> F
    E --ev*--> RHom(E, F)^* (x) F -> R_F(E)

so ``L_E(F) = cone(ev)[-1]`` and ``R_F(E) = cone(ev*)``.  A class in
``Ext^m(E, F)`` is a chain map ``P -> F[m]`` out of a free resolution ``P``
of a truncation of ``E``; it contributes a summand ``P[-m] -> F`` to ``ev``
and ``P -> F[m]`` to ``ev*``.  ``P`` is replaced by a smart truncation so
that every object stays bounded.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from typing import Sequence

from .complexes import (
    ChainMap,
    Complex,
    cohomology_module,
    cone,
    direct_sum,
    minimize,
    shift,
    smart_truncate_below,
    tighten,
)
from .globalext import rhom_sheaf
from .gradedmod import PresentedModule, shift_comps, vec_iadd
from .polyring import Ring


class NotExceptionalError(ValueError):
    pass


class NotSphericalError(ValueError):
    pass


@dataclass
class DerivedObject:
    complex: Complex
    name: str = ""

    @property
    def ring(self) -> Ring:
        return self.complex.ring

    def __str__(self):
        return self.name or repr(self.complex)

    @cached_property
    def cohomology_sheaves(self) -> dict[int, PresentedModule]:
        """Cohomology modules whose sheaves are nonzero (positive-dimensional support)."""
        out = {}
        for j in self.complex.terms:
            H = cohomology_module(self.complex, j)
            if H.ngens and H.krull_dimension() >= 1:
                out[j] = H
        return out


def as_object(X, name: str = "") -> DerivedObject:
    if isinstance(X, DerivedObject):
        return X
    if isinstance(X, PresentedModule):
        return DerivedObject(Complex.single(X), name)
    return DerivedObject(X, name)


def variety_dimension(ring: Ring) -> int:
    return int(PresentedModule.free_module(ring, [0]).krull_dimension()) - 1


def ext_window(E: DerivedObject, F: DerivedObject) -> tuple[int, int]:
    """Degrees outside this window carry no Ext on a smooth variety."""
    e, f = E.complex, F.complex
    if e.is_zero() or f.is_zero():
        return (0, -1)
    dx = variety_dimension(E.ring)
    return int(f.inf - e.sup), int(f.sup - e.inf + dx)


def ext_dims(E, F, window: tuple[int, int] | None = None) -> dict[int, int]:
    E, F = as_object(E), as_object(F)
    lo, hi = window or ext_window(E, F)
    if hi < lo:
        return {}
    return rhom_sheaf(E.complex, F.complex, (lo, hi)).dims()


def is_exceptional(E) -> tuple[bool, dict[int, int]]:
    E = as_object(E)
    e = E.complex
    if e.is_zero():
        return False, {}
    dx = variety_dimension(E.ring)
    amp = int(e.sup - e.inf)
    dims = ext_dims(E, E, (-amp - dx, amp + dx))
    ok = all(d == (1 if m == 0 else 0) for m, d in dims.items())
    return ok, dims


def _poly(entry: dict[int, int]) -> str:
    parts = []
    for m in sorted(entry):
        c = entry[m]
        if not c:
            continue
        if m == 0:
            parts.append(str(c))
        else:
            mono = "T" if m == 1 else f"T^{m}" if m > 0 else f"T^({m})"
            parts.append(mono if c == 1 else f"{c}{mono}")
    return "+".join(parts) if parts else "0"


@dataclass
class ExtTable:
    names: list[str]
    entries: list[list[dict[int, int]]]  # entries[i][j][m] = dim Ext^m(E_i, E_j)

    def entry(self, i: int, j: int) -> dict[int, int]:
        return {m: d for m, d in self.entries[i][j].items() if d}

    def matrix(self, m: int = 0) -> list[list[int]]:
        return [[row[j].get(m, 0) for j in range(len(row))] for row in self.entries]

    @property
    def is_exceptional_collection(self) -> bool:
        k = len(self.entries)
        for i in range(k):
            if self.entry(i, i) != {0: 1}:
                return False
            for j in range(i):
                if self.entry(i, j):
                    return False
        return True

    @property
    def is_strong(self) -> bool:
        if not self.is_exceptional_collection:
            return False
        k = len(self.entries)
        return all(set(self.entry(i, j)) <= {0} for i in range(k) for j in range(i + 1, k))

    def display(self) -> str:
        cells = [[_poly(self.entry(i, j)) for j in range(len(self.entries))] for i in range(len(self.entries))]
        w = max((len(c) for row in cells for c in row), default=1)
        return "\n".join(" ".join(c.rjust(w) for c in row) for row in cells)

    def to_json(self) -> dict:
        return {
            "objects": list(self.names),
            "matrix": self.matrix(0),
            "polynomials": [[{str(m): d for m, d in sorted(self.entry(i, j).items())} for j in range(len(self.entries))] for i in range(len(self.entries))],
            "exceptional": self.is_exceptional_collection,
            "strong": self.is_strong,
        }


def ext_table(objects: Sequence) -> ExtTable:
    if not objects:
        raise ValueError("need at least one object")
    objs = [as_object(X, f"E{i + 1}") for i, X in enumerate(objects)]
    rows = [[ext_dims(a, b) for b in objs] for a in objs]
    return ExtTable([str(o) for o in objs], rows)


# ---------------------------------------------------------------------------
# evaluation maps


@dataclass
class _Classes:
    source: Complex  # bounded model of E (normalized, sup 0)
    target: Complex  # F normalized
    maps: list[tuple[int, dict[int, tuple]]]  # (m0, phi) with phi[j] columns P^j -> F0^{j+m0}
    shift_E: int
    shift_F: int
    dims: dict[int, int] = field(default_factory=dict)


def _ext_classes(E: DerivedObject, F: DerivedObject, window: tuple[int, int] | None = None) -> _Classes:
    e, f = E.complex, F.complex
    r = e.ring
    sE, sF = int(e.sup), int(f.sup)
    lo, hi = window or ext_window(E, F)
    off = sE - sF
    F0 = shift(f, sF)
    e_inf = int(e.inf) - sE
    depth = max(hi + off - int(F0.inf), -e_inf)
    res = rhom_sheaf(e, f, (lo, hi), length_cap=depth + 2, with_basis=True)
    P = res.resolution.complex
    model = smart_truncate_below(P, -depth)
    hom = res.hom
    # comp index within Hom term m0 -> (j, g, k)
    decode: dict[int, dict[int, tuple[int, int, int]]] = {}
    for (m0, j, g), start in hom.offsets.items():
        nk = F0.term(j + m0).ngens
        table = decode.setdefault(m0, {})
        for k in range(nk):
            table[start + k] = (j, g, k)
    km = r.kmask
    maps = []
    for rec in res.records:
        if not rec.dim:
            continue
        m0 = rec.m + off
        basis_terms = res.strand.bases[m0]
        if rec.basis is None:
            raise RuntimeError(f"Ext^{rec.m} is too large for explicit representatives")
        for col in rec.basis.T:
            phi: dict[int, list] = {}
            for idx, c in enumerate(col):
                c = int(c)
                if not c:
                    continue
                t = basis_terms[idx]
                j, g, k = decode[m0][r.comp_of(t)]
                cols = phi.setdefault(j, [dict() for _ in range(model.term(j).ngens)])
                vec_iadd(r, cols[g], {r.term(k, t & km): c})
            maps.append((m0, {j: tuple(v) for j, v in phi.items() if j in model.terms}))
    return _Classes(model, F0, maps, sE, sF, res.dims())


def evaluation_map(E, F, window: tuple[int, int] | None = None) -> tuple[ChainMap, _Classes]:
    """``ev: (+)_m Ext^m(E, F) (x) E[-m] -> F`` on normalized models."""
    E, F = as_object(E), as_object(F)
    cl = _ext_classes(E, F, window)
    r = E.ring
    P, F0 = cl.source, cl.target
    pieces = [shift(P, -m0) for m0, _ in cl.maps]
    src = direct_sum(pieces, r) if pieces else Complex.zero(r)
    comps: dict[int, list] = {}
    for j in src.terms:
        cols = []
        for (m0, phi), piece in zip(cl.maps, pieces):
            n = piece.term(j).ngens
            got = phi.get(j - m0)
            cols.extend(got if got is not None else [{} for _ in range(n)])
        comps[j] = tuple(cols)
    return ChainMap(src, F0, comps), cl


def coevaluation_map(E, F, window: tuple[int, int] | None = None) -> tuple[ChainMap, _Classes]:
    """``ev*: E -> (+)_m Ext^m(E, F)^* (x) F[m]`` on normalized models."""
    E, F = as_object(E), as_object(F)
    cl = _ext_classes(E, F, window)
    r = E.ring
    P, F0 = cl.source, cl.target
    pieces = [shift(F0, m0) for m0, _ in cl.maps]
    tgt = direct_sum(pieces, r) if pieces else Complex.zero(r)
    comps = {}
    for j, M in P.terms.items():
        cols = [dict() for _ in range(M.ngens)]
        off = 0
        for (m0, phi), piece in zip(cl.maps, pieces):
            for g, v in enumerate(phi.get(j, ())):
                if v:
                    vec_iadd(r, cols[g], shift_comps(r, v, off))
            off += piece.term(j).ngens
        comps[j] = tuple(cols)
    return ChainMap(P, tgt, comps), cl


def _check_pair(E: DerivedObject, F: DerivedObject) -> None:
    for X in (E, F):
        ok, dims = is_exceptional(X)
        if not ok:
            raise NotExceptionalError(f"{X} is not exceptional: {dims}")
    back = {m: d for m, d in ext_dims(F, E).items() if d}
    if back:
        raise NotExceptionalError(f"({E}, {F}) is not an exceptional pair: Ext(F, E) = {back}")


def mutate_left(E, F, check: bool = True, name: str = "") -> DerivedObject:
    """``L_E(F) = cone(ev)[-1]``, minimized."""
    E, F = as_object(E), as_object(F)
    if check:
        _check_pair(E, F)
    ev, cl = evaluation_map(E, F)
    L = shift(cone(ev), -1 - cl.shift_F)
    return DerivedObject(tighten(minimize(L)), name or f"L_{E}({F})")


def mutate_right(F, E, check: bool = True, name: str = "") -> DerivedObject:
    """``R_F(E) = cone(ev*)`` for the exceptional pair ``(E, F)``."""
    E, F = as_object(E), as_object(F)
    if check:
        _check_pair(E, F)
    ev, cl = coevaluation_map(E, F)
    Rt = shift(cone(ev), -cl.shift_E)
    return DerivedObject(tighten(minimize(Rt)), name or f"R_{F}({E})")


def spherical_ext_check(E) -> bool:
    """``Ext^i(E, E)`` is one-dimensional for ``i = 0, dim X`` and zero otherwise.

    The condition ``E (x) omega_X = E`` is not checked.
    """
    E = as_object(E)
    e = E.complex
    if e.is_zero():
        return False
    dx = variety_dimension(E.ring)
    amp = int(e.sup - e.inf)
    dims = ext_dims(E, E, (-amp - dx, amp + dx))
    want = {0, dx}
    return all(d == (1 if m in want else 0) for m, d in dims.items())


def spherical_twist(E, F, check: bool = True, name: str = "") -> DerivedObject:
    """``T_E(F) = L_E(F)[1] = cone(ev)``."""
    E, F = as_object(E), as_object(F)
    if check and not spherical_ext_check(E):
        raise NotSphericalError(f"{E} fails the spherical Ext check")
    ev, cl = evaluation_map(E, F)
    T = shift(cone(ev), -cl.shift_F)
    return DerivedObject(tighten(minimize(T)), name or f"T_{E}({F})")
