"""Ext between complexes of sheaves and derived global sections.

``Ext^m_X(C~, D~(v))`` is read off the degree-``v`` strand of
``Hom_R(F, D)`` where ``F`` resolves the truncation ``C_{>=r}``.  The
truncation degree ``r`` comes from :func:`truncation_bound`.
"""
from __future__ import annotations

import weakref
from dataclasses import dataclass, field
import numpy as np

from .complexes import (
    Complex,
    Resolution,
    StrandComplex,
    complex_dimension,
    cohomology_module,
    hom_complex,
    resolve_complex,
    shift,
    strand,
    truncate_complex,
    twist,
)
from .gradedmod import PresentedModule, betti_stats

NEG_INF = float("-inf")
MODES = ("simple", "general", "concentrated")

_betti_cache: "weakref.WeakKeyDictionary[PresentedModule, tuple]" = weakref.WeakKeyDictionary()


def _stats(M: PresentedModule):
    got = _betti_cache.get(M)
    if got is None:
        got = betti_stats(M)
        _betti_cache[M] = got
    return got


def _a_max(M: PresentedModule, i: int) -> float:
    return _stats(M)[1].get(i, NEG_INF)


def _pd(M: PresentedModule) -> float:
    return _stats(M)[0]


def _as_complex(X) -> Complex:
    if isinstance(X, PresentedModule):
        return Complex.single(X)
    return X


@dataclass
class EllData:
    ell: float
    dim_D: float
    inf_C: float
    sup_C: float
    inf_D: float
    sup_D: float


@dataclass
class BoundRequest:
    C: Complex
    D: Complex
    m: int | tuple[int, int]
    mode: str = "simple"

    def __post_init__(self):
        self.C = _as_complex(self.C)
        self.D = _as_complex(self.D)
        if self.mode not in MODES:
            raise ValueError(f"mode must be one of {MODES}")
        if self.C.ring is not self.D.ring:
            raise ValueError("complexes live over different rings")

    @property
    def m_range(self) -> range:
        if isinstance(self.m, tuple):
            return range(self.m[0], self.m[1] + 1)
        return range(self.m, self.m + 1)


def ell_data(C: Complex, D: Complex, m: int) -> EllData:
    dim_D = complex_dimension(D)
    ell = min(dim_D + D.sup, m + C.sup - D.inf)
    return EllData(ell, dim_D, C.inf, C.sup, D.inf, D.sup)


def _bound_simple(D: Complex, n: int) -> float:
    best = NEG_INF
    for M in D.terms.values():
        for a in _stats(M)[1].values():
            best = max(best, a)
    return best - n


def _bound_general(C: Complex, D: Complex, m: int, n: int) -> float:
    ell = ell_data(C, D, m).ell
    if ell == NEG_INF:
        return NEG_INF
    best = NEG_INF
    for j, M in D.terms.items():
        for i in range(max(0, n - int(ell)), int(_pd(M)) + 1):
            if j <= min(D.sup, C.sup - n + m + i):
                best = max(best, _a_max(M, i))
    return best - n


def _bound_concentrated(C: Complex, D: Complex, m: int, n: int) -> float:
    ell = ell_data(C, D, m).ell
    if ell == NEG_INF:
        return NEG_INF
    ell = int(ell)
    first = NEG_INF
    second = NEG_INF
    for j, M in D.terms.items():
        pd = _pd(M)
        if n - ell <= pd and j <= min(D.sup, m - ell):
            first = max(first, _a_max(M, n - ell) + j)
        for i in range(max(0, n - ell + 1), int(pd) + 1):
            if j <= min(D.sup, m - n + i - 1):
                second = max(second, _a_max(M, i) + j - i)
    return max(first - n + ell - m, second + 1 - m)


def _normalized(C: Complex, D: Complex) -> tuple[Complex, Complex, int, int]:
    sC, sD = int(C.sup), int(D.sup)
    return shift(C, sC), shift(D, sD), sC, sD


def truncation_bound(req: BoundRequest) -> int:
    """Smallest ``r`` allowed by the selected bound, for every ``m`` in the request.

    Indices refer to the caller's complexes; normalization to ``sup = 0`` is
    internal.  When every relevant Betti degree is ``-inf`` the answer is 0.
    """
    C, D = req.C, req.D
    if C.is_zero() or D.is_zero():
        return 0
    C0, D0, sC, sD = _normalized(C, D)
    n = C.ring.n
    if req.mode == "concentrated":
        for j in C0.terms:
            if j != 0 and cohomology_module(C0, j).ngens:
                raise ValueError("the concentrated bound needs H^j(C) = 0 for j != 0")
    best = NEG_INF
    for m in req.m_range:
        m0 = m + sC - sD
        if req.mode == "simple":
            b = _bound_simple(D0, n)
        elif req.mode == "general":
            b = _bound_general(C0, D0, m0, n)
        else:
            b = _bound_concentrated(C0, D0, m0, n)
        best = max(best, b)
    return 0 if best == NEG_INF else int(best)


@dataclass
class ExtRecord:
    m: int
    dim: int
    r_used: int
    v: int
    basis: np.ndarray | None = field(default=None, repr=False)

    def to_json(self) -> dict:
        return {"m": self.m, "dim": self.dim, "r_used": self.r_used, "v": self.v}


@dataclass
class RHomResult:
    """Strand data plus per-``m`` records; ``offset`` maps caller ``m`` to strand position."""

    records: list[ExtRecord]
    strand: StrandComplex | None
    offset: int
    resolution: Resolution | None
    hom: object | None
    r_used: int

    def dims(self) -> dict[int, int]:
        return {rec.m: rec.dim for rec in self.records}

    def display(self) -> str:
        """Left-arrow display, highest ``m`` first."""
        d = self.dims()
        return " <- ".join(f"k^{d[m]}" if d[m] else "0" for m in sorted(d, reverse=True))

    def to_json(self) -> list[dict]:
        return [rec.to_json() for rec in self.records]


def _resolve_truncation(C0: Complex, D0: Complex, r: int, m_hi: int, length_cap: int | None = None) -> Resolution:
    T = truncate_complex(C0, r)
    cap = int(m_hi - D0.inf + 2)
    if length_cap is not None:
        cap = max(cap, length_cap)
    return resolve_complex(T, max(cap, 0))


def rhom_sheaf(
    C,
    D,
    m_range: tuple[int, int] = (0, 0),
    mode: str = "simple",
    r: int | None = None,
    v: int = 0,
    length_cap: int | None = None,
    with_basis: bool = False,
) -> RHomResult:
    """``dim Ext^m_X(C~, D~(v))`` for ``m`` in the inclusive ``m_range``.

    ``r`` overrides the truncation degree (used to probe sharpness).  For
    ``v < 0`` the target is re-twisted and the bound recomputed.  The
    resolution of the truncation is computed to at least ``length_cap`` steps.
    """
    C, D = _as_complex(C), _as_complex(D)
    lo, hi = m_range
    if hi < lo:
        raise ValueError("empty m range")
    v_out = v
    if v < 0:
        D = twist(D, v)
        v = 0
    if C.is_zero() or D.is_zero():
        recs = [ExtRecord(m, 0, 0, v_out) for m in range(lo, hi + 1)]
        return RHomResult(recs, None, 0, None, None, 0)
    if r is None:
        r = truncation_bound(BoundRequest(C, D, (lo, hi), mode))
    C0, D0, sC, sD = _normalized(C, D)
    off = sC - sD
    res = _resolve_truncation(C0, D0, r, hi + off, length_cap)
    H = hom_complex(res.complex, D0)
    st = strand(H.complex, v, range(lo + off, hi + off + 1))
    recs = []
    for m in range(lo, hi + 1):
        if with_basis:
            h = st.cohomology(m + off)
            recs.append(ExtRecord(m, h.dim, r, v_out, h.basis))
        else:
            recs.append(ExtRecord(m, st.cohomology_dim(m + off), r, v_out))
    return RHomResult(recs, st, off, res, H, r)


def graded_ext(C, D, m: int, window: int, mode: str = "simple", r: int | None = None) -> list[tuple[int, int]]:
    """``[(v, dim Ext^m_X(C~, D~(v))) for v in 0..window]`` from one resolution."""
    C, D = _as_complex(C), _as_complex(D)
    if C.is_zero() or D.is_zero():
        return [(v, 0) for v in range(window + 1)]
    if r is None:
        r = truncation_bound(BoundRequest(C, D, m, mode))
    C0, D0, sC, sD = _normalized(C, D)
    m0 = m + sC - sD
    res = _resolve_truncation(C0, D0, r, m0)
    H = hom_complex(res.complex, D0).complex
    out = []
    for v in range(window + 1):
        out.append((v, strand(H, v, (m0,)).cohomology_dim(m0)))
    return out


def structure_sheaf(ring) -> Complex:
    return Complex.single(PresentedModule.free_module(ring, [0]))


def sheaf_cohomology(D, m: int, v: int = 0, mode: str = "simple") -> int:
    """``dim H^m(X, D~(v))`` (hypercohomology for complexes)."""
    D = _as_complex(D)
    return rhom_sheaf(structure_sheaf(D.ring), D, (m, m), mode=mode, v=v).records[0].dim


@dataclass
class VanishingCertificate:
    """``claimed`` is true when ``v >= a_max_{n-m}(N) - n``, which forces ``H^m(X, N~(v)) = 0``."""

    m: int
    v: int
    bound: float
    claimed: bool
    observed: int | None = None

    @property
    def consistent(self) -> bool:
        return not self.claimed or self.observed in (None, 0)


def vanishing_check(N: PresentedModule, m: int, v: int, verify: bool = False) -> VanishingCertificate:
    if m <= 0:
        raise ValueError("vanishing certificates need m > 0")
    n = N.ring.n
    bound = _a_max(N, n - m) - n
    cert = VanishingCertificate(m, v, bound, v >= bound)
    if verify:
        cert.observed = sheaf_cohomology(N, m, v)
    return cert


def euler_characteristic(result: RHomResult) -> int:
    return sum((-1) ** (rec.m % 2) * rec.dim for rec in result.records)
