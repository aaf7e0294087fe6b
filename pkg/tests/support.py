"""Shared constructions for the test-suite."""
from __future__ import annotations

import random
from functools import lru_cache

from grhom.complexes import Complex
from grhom.dercat import DerivedObject
from grhom.gradedmod import FreeModule, ModuleMap, PresentedModule, image
from grhom.polyring import Ring

P = 32003
F2_QUADRICS = ["x4^2-x3*x5", "x3*x4-x2*x5", "x1*x4-x0*x5", "x3^2-x2*x4", "x1*x3-x0*x4", "x1*x2-x0*x3"]
F2_MATRIX = [["x5", "x4", "x3", "x1"], ["x4", "x3", "x2", "x0"]]


def vec(ring: Ring, entries) -> dict:
    """Module vector from a list of polynomials (strings or Polynomials)."""
    v = {}
    for k, f in enumerate(entries):
        f = ring(f)
        for mono, c in f.terms.items():
            v[ring.term(k, mono)] = c
    return v


def to_dict(f) -> dict:
    """Polynomial -> ``{exponents: coeff}`` for the oracles."""
    return {f.ring.exps(k): c for k, c in f.terms.items()}


def module_to_oracle(M: PresentedModule):
    r = M.ring
    rels = []
    for v in M.relations:
        col = [{} for _ in M.degrees]
        for t, c in v.items():
            col[r.comp_of(t)][r.exps(t & r.kmask)] = c
        rels.append(col)
    return list(M.degrees), rels


def map_to_oracle(f: ModuleMap):
    return [[to_dict(f.entry(i, j)) for j in range(f.source.rank)] for i in range(f.target.rank)]


def free_complex_to_oracle(C: Complex):
    terms = {j: module_to_oracle(M) for j, M in C.terms.items()}
    diffs = {}
    for j in C.terms:
        if j + 1 in C.terms:
            diffs[j] = map_to_oracle(C.dmap(j))
    return terms, diffs


def random_form(ring: Ring, d: int, rng: random.Random, density: float = 0.6):
    terms = {}
    for k in ring.monomials_of_degree(d):
        if rng.random() < density:
            c = rng.randrange(1, ring.p)
            terms[k] = c
    if not terms:
        terms[rng.choice(ring.monomials_of_degree(d))] = 1
    from grhom.polyring import Polynomial

    return Polynomial(ring, terms)


def random_presented(ring: Ring, rng: random.Random, max_deg: int = 2) -> PresentedModule:
    """Cokernel of a random homogeneous matrix with entries of degree 1..max_deg."""
    g = rng.randint(1, 2)
    tdeg = [rng.randint(0, 1) for _ in range(g)]
    nrel = rng.randint(1, 3)
    rels = []
    for _ in range(nrel):
        base = max(tdeg) + rng.randint(1, max_deg)
        base = min(base, min(tdeg) + max_deg)
        col = {}
        for i, a in enumerate(tdeg):
            d = base - a
            if 1 <= d <= max_deg and rng.random() < 0.8:
                f = random_form(ring, d, rng)
                for k, c in f.terms.items():
                    col[ring.term(i, k)] = c
        if col:
            rels.append(col)
    return PresentedModule(ring, tdeg, rels)


@lru_cache(maxsize=None)
def p2() -> Ring:
    return Ring(P, 3)


@lru_cache(maxsize=None)
def f2_ring() -> Ring:
    S6 = Ring(P, 6)
    return S6.quotient(F2_QUADRICS)


@lru_cache(maxsize=None)
def f2_objects() -> dict[str, DerivedObject]:
    R = f2_ring()
    m = F2_MATRIX
    mB = ModuleMap(FreeModule(R, (0, 0)), FreeModule(R, (-1,) * 4), tuple(vec(R, m[i]) for i in range(2)))
    mC = ModuleMap(FreeModule(R, (0,) * 4), FreeModule(R, (-1,) * 2), tuple(vec(R, [m[0][j], m[1][j]]) for j in range(4)))
    OE = PresentedModule(R, [0], [vec(R, [x]) for x in ["x2", "x3", "x4", "x5"]])
    return {
        "A": DerivedObject(Complex.single(PresentedModule.free_module(R, [0])), "A"),
        "B": DerivedObject(Complex.single(image(mB)), "B"),
        "C": DerivedObject(Complex.single(image(mC)), "C"),
        "D": DerivedObject(Complex.single(PresentedModule.free_module(R, [-1])), "D"),
        "O_E": DerivedObject(Complex.single(OE), "O_E"),
    }


def line_bundle(ring: Ring, d: int) -> Complex:
    """``O(d)``: the free module ``R(d)`` in cohomological degree 0."""
    return Complex.single(PresentedModule.free_module(ring, [-d]))
