"""Homogeneous Buchberger algorithm for submodules of graded free modules.

Module elements are plain ``dict[int, int]`` keyed by packed module terms (see
:mod:`grhom.polyring`).  Over a quotient ring ``R = S/I`` the submodule
``I * F`` is handled implicitly: the Groebner basis of ``I`` acts as an extra
reducer in every component and contributes the "ideal pairs" of Buchberger's
criterion.  Everything is homogeneous, so pairs are processed degree by degree.
"""
from __future__ import annotations

import heapq
import logging
from collections import defaultdict
from typing import Iterable, Sequence

from .polyring import LOWF, Ring

log = logging.getLogger(__name__)

Vec = dict  # packed module term -> coefficient


class InhomogeneousError(ValueError):
    pass


def _monic(f: Vec, p: int) -> Vec:
    lead = max(f)
    c = f[lead]
    if c == 1:
        return f
    inv = pow(c, -1, p)
    return {t: v * inv % p for t, v in f.items()}


class ModuleGB:
    """Incremental Groebner basis of a submodule of ``(+)_c Ring(-twists[c])``.

    Elements added with :meth:`add_basis` are trusted to already form a
    Groebner basis among themselves; :meth:`run` adds generators and completes.
    """

    def __init__(self, ring: Ring, twists: Sequence[int]):
        self.ring = ring
        self.twists = list(twists)
        self.elems: list[Vec] = []
        self.leads: list[int] = []
        self._by_comp: dict[int, list[int]] = defaultdict(list)
        self._red: dict[int, list[tuple[int, int]]] = defaultdict(list)  # comp -> [(guarded lead, idx)]
        self._ideal = [((lead & ring.emask) | ring.guard, lead, poly) for lead, poly in ring.ideal_gb]
        self._pairs: dict[int, list[list]] = defaultdict(list)
        self._heap: list = []
        self._seq = 0

    # -- degrees -------------------------------------------------------
    def term_degree(self, t: int) -> int:
        r = self.ring
        return r.mdeg(t & r.kmask) + self.twists[r.comp_of(t)]

    def degree(self, f: Vec) -> int:
        return self.term_degree(max(f))

    def check_homogeneous(self, f: Vec) -> int:
        degs = {self.term_degree(t) for t in f}
        if len(degs) != 1:
            raise InhomogeneousError("element is not homogeneous")
        return degs.pop()

    # -- reduction -----------------------------------------------------
    def _find(self, t: int):
        r = self.ring
        kc = t & r.emask
        g = r.guard
        for ag, lead, poly in self._ideal:
            if ((ag - kc) & g) == g:
                return lead, poly
        for ag, idx in self._red.get(r.comp_of(t), ()):
            if ((ag - kc) & g) == g:
                return self.leads[idx], self.elems[idx]
        return None

    def reduce(self, f: Vec) -> Vec:
        """Full normal form of ``f`` (not normalized)."""
        p = self.ring.p
        f = {t: c % p for t, c in f.items() if c % p}
        heap = [-t for t in f]
        heapq.heapify(heap)
        rem: Vec = {}
        find = self._find
        while heap:
            t = -heapq.heappop(heap)
            c = f.pop(t, None)
            if c is None:
                continue
            hit = find(t)
            if hit is None:
                rem[t] = c
                continue
            lead, g = hit
            delta = t - lead
            for tg, cg in g.items():
                if tg == lead:
                    continue
                nt = tg + delta
                old = f.get(nt)
                if old is None:
                    f[nt] = (-c * cg) % p
                    heapq.heappush(heap, -nt)
                else:
                    v = (old - c * cg) % p
                    if v:
                        f[nt] = v
                    else:
                        del f[nt]
        return rem

    # -- basis maintenance ---------------------------------------------
    def _insert(self, f: Vec) -> int:
        r = self.ring
        lead = max(f)
        idx = len(self.elems)
        self.elems.append(f)
        self.leads.append(lead)
        comp = r.comp_of(lead)
        self._by_comp[comp].append(idx)
        self._red[comp].append(((lead & r.emask) | r.guard, idx))
        return idx

    def add_basis(self, elems: Iterable[Vec]) -> None:
        for f in elems:
            if f:
                self._insert(_monic(dict(f), self.ring.p))

    def _push(self, comp: int, lcm: int, i: int, j: int) -> None:
        rec = [True, lcm, i, j]
        self._pairs[comp].append(rec)
        deg = self.ring.mdeg(lcm) + self.twists[comp]
        self._seq += 1
        heapq.heappush(self._heap, (deg, self._seq, comp, rec))

    def _update(self, t: int) -> None:
        r = self.ring
        lead = self.leads[t]
        comp = r.comp_of(lead)
        kt = lead & r.kmask
        dt = r.mdeg(kt)
        cands = []
        for i in self._by_comp[comp]:
            if i == t:
                continue
            ki = self.leads[i] & r.kmask
            l = r.mlcm(ki, kt)
            # the product criterion only holds for pairs with an ideal generator
            cands.append((l, False, i))
        for h, (_, lh, _) in enumerate(self._ideal):
            l = r.mlcm(lh, kt)
            cands.append((l, r.mdeg(l) == dt + r.mdeg(lh), -1 - h))
        kept = []
        for n, cand in enumerate(cands):
            l, coprime, _ = cand
            if coprime:
                kept.append(cand)
                continue
            if any(r.divides(q[0], l) for q in cands[n + 1:]) or any(r.divides(q[0], l) for q in kept):
                continue
            kept.append(cand)
        # Gebauer-Moeller chain criterion on old pairs
        for rec in self._pairs[comp]:
            if not rec[0]:
                continue
            l = rec[1]
            if not r.divides(kt, l):
                continue
            if r.mlcm(self._lead_k(rec[2]), kt) != l and r.mlcm(self._lead_k(rec[3]), kt) != l:
                rec[0] = False
        self._pairs[comp] = [rec for rec in self._pairs[comp] if rec[0]]
        for l, coprime, i in kept:
            if not coprime:
                self._push(comp, l, t, i)

    def _lead_k(self, i: int) -> int:
        if i >= 0:
            return self.leads[i] & self.ring.kmask
        return self._ideal[-1 - i][1]

    def _spoly(self, rec) -> Vec:
        _, l, i, j = rec
        r = self.ring
        p = r.p
        li = self.leads[i]
        fi = self.elems[i]
        d1 = (r.comp_base(r.comp_of(li)) + l) - li
        out = {t + d1: c for t, c in fi.items()}
        if j >= 0:
            lj, fj = self.leads[j], self.elems[j]
            d2 = (r.comp_base(r.comp_of(lj)) + l) - lj
            terms = fj.items()
        else:
            _, lh, fj = self._ideal[-1 - j]
            d2 = r.comp_base(r.comp_of(li)) + l - lh
            terms = fj.items()
        for t, c in terms:
            nt = t + d2
            v = (out.get(nt, 0) - c) % p
            if v:
                out[nt] = v
            else:
                out.pop(nt, None)
        return out

    def run(self, gens: Sequence[Vec]) -> list[int]:
        """Add ``gens`` and complete the basis.

        Returns the positions (in ``gens``) of the generators that were not
        already in the submodule generated by the basis, the earlier
        generators of lower degree, and the kept generators of equal degree.
        These form a minimal generating set modulo the initial basis.
        """
        p = self.ring.p
        order = []
        for n, g in enumerate(gens):
            g = {t: c % p for t, c in g.items() if c % p}
            if g:
                order.append((self.check_homogeneous(g), n, g))
        order.sort(key=lambda x: (x[0], x[1]))
        kept: list[int] = []
        k = 0
        heap = self._heap
        while heap or k < len(order):
            dp = heap[0][0] if heap else None
            if k < len(order) and (dp is None or order[k][0] < dp):
                _, n, g = order[k]
                k += 1
                h = self.reduce(g)
                if h:
                    kept.append(n)
                    self._update(self._insert(_monic(h, p)))
                continue
            _, _, comp, rec = heapq.heappop(heap)
            if not rec[0]:
                continue
            rec[0] = False
            h = self.reduce(self._spoly(rec))
            if h:
                self._update(self._insert(_monic(h, p)))
        for comp in list(self._pairs):
            self._pairs[comp] = []
        if log.isEnabledFor(logging.DEBUG) and len(self.elems) > 50:
            log.debug("groebner: %d elements after %d inputs", len(self.elems), len(order))
        return kept

    def basis(self) -> list[Vec]:
        """Minimal Groebner basis (drops elements whose lead is divisible by another lead)."""
        r = self.ring
        out = []
        for i, (li, fi) in enumerate(zip(self.leads, self.elems)):
            ci, ki = r.comp_of(li), li & r.kmask
            redundant = False
            for j in self._by_comp[ci]:
                if j == i:
                    continue
                kj = self.leads[j] & r.kmask
                if r.divides(kj, ki) and (kj != ki or j < i):
                    redundant = True
                    break
            if not redundant:
                out.append(fi)
        return out

    def is_standard(self, t: int) -> bool:
        return self._find(t) is None


def reduce_poly(ring: Ring, terms: dict[int, int]) -> dict[int, int]:
    """Normal form of a polynomial (monomial keys) modulo ``ring``'s ideal."""
    gb = _poly_gb(ring)
    base = ring.comp_base(0)
    rem = gb.reduce({base + k: c for k, c in terms.items()})
    return {t - base: c for t, c in rem.items()}


_POLY_GB: dict = {}


def _poly_gb(ring: Ring) -> ModuleGB:
    key = ring
    gb = _POLY_GB.get(key)
    if gb is None:
        gb = ModuleGB(ring, [0])
        _POLY_GB[key] = gb
    return gb


_IDEAL_CACHE: dict = {}


def ideal_groebner(S: Ring, polys: Sequence[dict[int, int]]) -> list[tuple[int, dict[int, int]]]:
    """Reduced grevlex Groebner basis of a homogeneous ideal of ``S``.

    Results are memoized per (ring, generator set); the cache is only ever
    filled with finished, immutable values.
    """
    key = (S, frozenset(frozenset(f.items()) for f in polys))
    hit = _IDEAL_CACHE.get(key)
    if hit is not None:
        return hit
    gb = ModuleGB(S, [0])
    base = S.comp_base(0)
    gb.run([{base + k: c for k, c in f.items()} for f in polys])
    elems = gb.basis()
    # interreduce tails
    out = []
    for n, f in enumerate(elems):
        others = ModuleGB(S, [0])
        others.add_basis(e for m, e in enumerate(elems) if m != n)
        lead = max(f)
        tail = others.reduce({t: c for t, c in f.items() if t != lead})
        g = {lead: f[lead]}
        g.update(tail)
        g = _monic(g, S.p)
        out.append((lead - base, {t - base: c for t, c in g.items()}))
    out.sort(key=lambda x: x[0], reverse=True)
    result = [(l, f) for l, f in out]
    _IDEAL_CACHE[key] = result
    return result


# ---------------------------------------------------------------------------
# standard monomials, Hilbert series, dimension


def standard_monomials(gb: ModuleGB, degree: int) -> list[int]:
    """Packed module terms of ``degree`` not divisible by any lead term.

    These form a basis of the degree-``degree`` piece of the quotient module.
    Sorted in decreasing term order.
    """
    r = gb.ring
    out = []
    for comp, tw in enumerate(gb.twists):
        d = degree - tw
        if d < 0:
            continue
        base = r.comp_base(comp)
        red = [ag for ag, _ in gb._red.get(comp, ())]
        g = r.guard
        for k in r.standard_monomials_of_degree(d):
            kc = k & r.emask
            if not any(((ag - kc) & g) == g for ag in red):
                out.append(base + k)
    out.sort(reverse=True)
    return out


def lead_monomial_ideals(gb: ModuleGB) -> list[list[tuple[int, ...]]]:
    """Per component, the exponent vectors generating the lead-term ideal (incl. the ring's ideal)."""
    r = gb.ring
    ideal_leads = [r.exps(l) for l, _ in r.ideal_gb]
    out = []
    for comp in range(len(gb.twists)):
        gens = list(ideal_leads)
        for i in gb._by_comp.get(comp, ()):
            gens.append(r.exps(gb.leads[i] & r.kmask))
        out.append(gens)
    return out


def _poly_mul(a: dict[int, int], b: dict[int, int]) -> dict[int, int]:
    out: dict[int, int] = defaultdict(int)
    for i, x in a.items():
        for j, y in b.items():
            out[i + j] += x * y
    return {k: v for k, v in out.items() if v}


def monomial_quotient_numerator(gens: Sequence[tuple[int, ...]], nvars: int) -> dict[int, int]:
    """Numerator ``N(t)`` with ``HS(S/J) = N(t) / (1-t)^nvars`` for a monomial ideal ``J``.

    Uses ``N(J + (m)) = N(J) - t^deg(m) N(J : m)``.
    """
    gens = _minimalize_monomials([tuple(g) for g in gens])
    if not gens:
        return {0: 1}
    if any(sum(g) == 0 for g in gens):
        return {}
    # split off a pure power if possible (keeps recursion shallow)
    *rest, m = sorted(gens, key=sum)
    num = monomial_quotient_numerator(rest, nvars)
    colon = [tuple(max(a - b, 0) for a, b in zip(g, m)) for g in rest]
    sub = monomial_quotient_numerator(colon, nvars)
    d = sum(m)
    out = dict(num)
    for k, v in sub.items():
        out[k + d] = out.get(k + d, 0) - v
    return {k: v for k, v in out.items() if v}


def _minimalize_monomials(gens):
    gens = sorted(set(gens), key=sum)
    out = []
    for g in gens:
        if not any(all(a <= b for a, b in zip(h, g)) for h in out):
            out.append(g)
    return out


def hilbert_numerator_of_gb(gb: ModuleGB) -> dict[int, int]:
    """Numerator ``Q(t)`` of the Hilbert series of ``F / N`` over the ambient polynomial ring.

    Keys may be negative (negative twists); ``Q`` is returned as ``{power: coeff}``.
    """
    out: dict[int, int] = defaultdict(int)
    for comp, gens in enumerate(lead_monomial_ideals(gb)):
        tw = gb.twists[comp]
        for k, v in monomial_quotient_numerator(gens, gb.ring.nvars).items():
            out[k + tw] += v
    return {k: v for k, v in out.items() if v}


def hilbert_numerator(betti: dict[tuple[int, int], int]) -> dict[int, int]:
    """``Q(t) = sum_ij (-1)^i beta_ij t^j`` from Betti numbers of a finite free resolution over S."""
    out: dict[int, int] = defaultdict(int)
    for (i, j), b in betti.items():
        out[j] += (-1) ** i * b
    return {k: v for k, v in out.items() if v}


def pole_order(numerator: dict[int, int], nvars: int) -> float:
    """Krull dimension ``nvars - mult_{t=1} Q``; ``-inf`` for the zero series."""
    q = {k: v for k, v in numerator.items() if v}
    if not q:
        return float("-inf")
    lo = min(q)
    coeffs = [q.get(k, 0) for k in range(lo, max(q) + 1)]  # polynomial in t after t^lo shift
    mult = 0
    while True:
        if sum(coeffs) != 0:
            break
        # synthetic division by (t - 1)
        new = []
        acc = 0
        for c in reversed(coeffs[1:]):
            acc = acc + c
            new.append(acc)
        coeffs = list(reversed(new))
        mult += 1
    return nvars - mult


def hilbert_function_from_numerator(numerator: dict[int, int], nvars: int, d: int) -> int:
    from math import comb

    total = 0
    for k, v in numerator.items():
        e = d - k
        if e >= 0:
            total += v * comb(e + nvars - 1, nvars - 1)
    return total


__all__ = [
    "ModuleGB",
    "InhomogeneousError",
    "ideal_groebner",
    "reduce_poly",
    "standard_monomials",
    "hilbert_numerator",
    "hilbert_numerator_of_gb",
    "monomial_quotient_numerator",
    "pole_order",
    "hilbert_function_from_numerator",
    "LOWF",
]
