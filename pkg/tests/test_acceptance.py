"""The ten acceptance criteria, one test each.

Every test records a PASS/FAIL line which is printed in the pytest summary
(and directly when this file is run as a script).
"""
from __future__ import annotations

import random

import pytest

from grhom.complexes import (
    Complex,
    cohomology_module,
    cone,
    direct_sum,
    hom_complex,
    identity_map,
    koszul,
    minimize,
    resolve_complex,
    shift,
    smart_truncate_below,
    strand,
    truncate_complex,
    twist,
)
from grhom.dercat import DerivedObject, ext_table, mutate_left, spherical_ext_check, spherical_twist
from grhom.globalext import (
    BoundRequest,
    rhom_sheaf,
    structure_sheaf,
    truncation_bound,
    vanishing_check,
)
from grhom.gradedmod import (
    FreeModule,
    ModuleMap,
    PresentedModule,
    betti_stats,
    kernel,
    minimal_free_resolution,
    restrict_scalars,
    truncate_module,
)
from grhom.polyring import Ring

import oracles
from support import (
    P,
    f2_objects,
    free_complex_to_oracle,
    line_bundle,
    map_to_oracle,
    module_to_oracle,
    random_form,
    random_presented,
    vec,
)

RESULTS: dict[int, tuple[bool, str]] = {}

DESCRIPTIONS = {
    1: "derived global sections of a non-regular Koszul complex on P^2",
    2: "under-truncation at r = 1 gives the wrong answer",
    3: "self-extensions of a line on two crossing lines",
    4: "extension table of (O, O(1), O(2)) on P^2",
    5: "three left mutations give the Beilinson collection",
    6: "spherical twist by O_E on the Hirzebruch surface F_2",
    7: "stability of Ext under larger truncation degrees",
    8: "agreement with the classical module pipeline",
    9: "line-bundle cohomology closed forms and vanishing certificates",
    10: "structural properties of complexes, resolutions and strands",
}


def _run(k: int, body):
    try:
        detail = body() or ""
    except AssertionError as exc:
        RESULTS[k] = (False, str(exc).splitlines()[0] if str(exc) else "assertion failed")
        print(f"criterion {k}: FAIL  {DESCRIPTIONS[k]}")
        raise
    RESULTS[k] = (True, detail)
    print(f"criterion {k}: PASS  {DESCRIPTIONS[k]}")


def _p2():
    S = Ring(P, 3)
    return S, S.gens()


# ---------------------------------------------------------------------------


def _koszul_p2():
    S, (x0, x1, x2) = _p2()
    return S, structure_sheaf(S), koszul([x0 * x0, x0 * x1])


def criterion_1():
    S, O, K = _koszul_p2()
    r = truncation_bound(BoundRequest(O, K, (-3, 3), "simple"))
    assert r == 2, f"bound {r} != 2"
    dims = rhom_sheaf(O, K, (-3, 3)).dims()
    assert dims == {m: (4 if m == 0 else 0) for m in range(-3, 4)}, dims
    return f"r = {r}, dims {dims}"


def criterion_2():
    S, O, K = _koszul_p2()
    h0 = rhom_sheaf(O, K, (0, 0), r=1).records[0].dim
    assert h0 == 1, f"H^0 at r = 1 is {h0}"
    assert h0 != rhom_sheaf(O, K, (0, 0)).records[0].dim
    return f"H^0 at r = 1 is {h0}"


def _two_lines():
    S = Ring(P, 3)
    R = S.quotient(["x0*x1"])
    K = koszul([R.parse("x0")])
    return R, K, twist(K, 1)


def criterion_3():
    R, K, K1 = _two_lines()
    r = truncation_bound(BoundRequest(K, K1, 0, "simple"))
    assert r == 0, f"bound {r} != 0"
    dims = rhom_sheaf(K, K1, (-3, 3)).dims()
    assert dims == {m: (3 if m in (0, 1) else 0) for m in range(-3, 4)}, dims
    st = rhom_sheaf(K, K1, (-1, 1)).strand
    assert st.dims == {-1: 1, 0: 6, 1: 5}, st.dims
    assert st.euler_characteristic() == 0
    assert st.display() == "k^3 <- k^3 <- 0"
    return f"strand {st.display()}"


def criterion_4():
    S, _ = _p2()
    tb = ext_table([DerivedObject(line_bundle(S, d), f"O({d})") for d in range(3)])
    assert all(set(tb.entry(i, j)) <= {0} for i in range(3) for j in range(3)), "entries outside T^0"
    assert tb.is_exceptional_collection and tb.is_strong
    got = tb.matrix(0)
    assert got == [[1, 3, 3], [0, 1, 3], [0, 0, 1]], f"computed {got}; Hom(O, O(2)) = H^0(O(2)) = 6"


def criterion_5():
    S, (x0, x1, x2) = _p2()
    O = DerivedObject(line_bundle(S, 0), "O")
    O1 = DerivedObject(line_bundle(S, 1), "O(1)")
    O2 = DerivedObject(line_bundle(S, 2), "O(2)")
    L1 = mutate_left(O1, O2)
    L2 = mutate_left(O, L1)
    L3 = mutate_left(O, O1)
    tb = ext_table([L2, L3, O])
    assert tb.matrix(0) == [[1, 3, 3], [0, 1, 3], [0, 0, 1]], tb.matrix(0)
    assert all(set(tb.entry(i, j)) <= {0} for i in range(3) for j in range(3))
    assert tb.is_strong
    sheaves = L1.cohomology_sheaves
    assert len(sheaves) == 1, f"L1 has cohomology sheaves in degrees {sorted(sheaves)}"
    (H,) = sheaves.values()
    euler = ModuleMap.from_matrix(FreeModule(S, (-1,) * 3), FreeModule(S, (-2,)), [[x0, x1, x2]])
    Kmod = kernel(euler)
    window = range(2, 8)
    assert [H.hilbert_function(d) for d in window] == [Kmod.hilbert_function(d) for d in window]
    return f"table {tb.matrix(0)}"


@pytest.fixture(scope="module")
def f2():
    return f2_objects()


def criterion_6(objs):
    A, B, C, D, E = (objs[k] for k in ("A", "B", "C", "D", "O_E"))
    win = (-2, 4)
    ext = {name: {m: d for m, d in rhom_sheaf(E.complex, X.complex, win).dims().items() if d} for name, X in zip("ABCD", (A, B, C, D))}
    assert ext["B"] == {} and ext["D"] == {}, ext
    assert set(ext["A"]) == {2} and set(ext["C"]) == {2}, ext
    assert spherical_ext_check(E)
    L = mutate_left(E, A, check=False)
    sheaves = L.cohomology_sheaves
    assert len(sheaves) == 2, sorted(sheaves)
    lo, hi = sorted(sheaves)
    assert hi == lo + 1
    degs = range(3, 7)
    hf = {j: M.hilbert_polynomial_values(degs) for j, M in sheaves.items()}
    hf_A = A.complex.term(0).hilbert_polynomial_values(degs)
    hf_E = E.complex.term(0).hilbert_polynomial_values(degs)
    assert sorted(hf.values()) == sorted([hf_A, hf_E]), hf
    twisted = [spherical_twist(E, X) for X in (A, B, C, D)]
    tb = ext_table(twisted)
    want = [[1, 2, 4, 6], [0, 1, 2, 4], [0, 0, 1, 2], [0, 0, 0, 1]]
    assert tb.matrix(0) == want, tb.matrix(0)
    assert tb.is_exceptional_collection
    return f"sheaves of L(A) in degrees {lo}, {hi}; twisted table {tb.matrix(0)}"


def criterion_7():
    S, O, K = _koszul_p2()
    r = truncation_bound(BoundRequest(O, K, (-3, 3)))
    base = rhom_sheaf(O, K, (-3, 3), r=r).dims()
    for extra in (1, 2):
        assert rhom_sheaf(O, K, (-3, 3), r=r + extra).dims() == base
    R, K, K1 = _two_lines()
    r = truncation_bound(BoundRequest(K, K1, (-3, 3)))
    base = rhom_sheaf(K, K1, (-3, 3), r=r).dims()
    for extra in (1, 2):
        assert rhom_sheaf(K, K1, (-3, 3), r=r + extra).dims() == base


def smith_pipeline(M: PresentedModule, N: PresentedModule, m: int) -> int:
    """``dim Ext^m(M~, N~)`` via the classical truncation bound, computed independently."""
    S = M.ring
    pd, amax, _ = betti_stats(N)
    bound = oracles.smith_bound(amax, pd, N.krull_dimension(), S.n, m)
    r = int(max(bound, min(M.degrees)))
    res = minimal_free_resolution(truncate_module(M, r).module)
    degrees = [list(F.degrees) for F in res.modules]
    maps = [map_to_oracle(f) for f in res.maps]
    ndeg, nrel = module_to_oracle(N)
    return oracles.ext_from_resolution(S.nvars, degrees, maps, ndeg, nrel, S.p, m)[m]


def criterion_8():
    S, _ = _p2()
    rng = random.Random(2026)
    nonzero = 0
    for _ in range(20):
        M, N = random_presented(S, rng), random_presented(S, rng)
        got = rhom_sheaf(M, N, (0, 2)).dims()
        want = {m: smith_pipeline(M, N, m) for m in range(3)}
        assert got == want, (M.degrees, N.degrees, got, want)
        nonzero += any(want.values())
    return f"20 pairs agree, {nonzero} with nonzero Ext"


def criterion_9():
    checked = 0
    for n in (1, 2, 3):
        S = Ring(P, n + 1)
        O = structure_sheaf(S)
        free = PresentedModule.free_module(S, [0])
        for d in range(-6, 7):
            dims = rhom_sheaf(O, line_bundle(S, d), (0, n)).dims()
            want = {m: oracles.cohomology_pn(n, m, d) for m in range(n + 1)}
            assert dims == want, (n, d, dims, want)
            for m in range(1, n + 1):
                cert = vanishing_check(free, m, d)
                cert.observed = dims[m]
                assert cert.consistent, (n, m, d)
                checked += 1
    S = Ring(P, 3)
    N = PresentedModule(S, [0], [vec(S, ["x0*x1"])])
    for m in (1, 2):
        for v in range(-6, 7):
            assert vanishing_check(N, m, v, verify=True).consistent, (m, v)
            checked += 1
    OE = restrict_scalars(f2_objects()["O_E"].complex.term(0))
    for m in (1,):
        for v in range(-3, 3):
            assert vanishing_check(OE, m, v, verify=True).consistent, (m, v)
            checked += 1
    return f"{checked} certificates"


def _random_complex(S: Ring, rng: random.Random) -> Complex:
    kind = rng.randrange(3)
    if kind == 0:
        forms = [random_form(S, rng.randint(1, 2), rng) for _ in range(rng.randint(1, 3))]
        C = koszul(forms)
    elif kind == 1:
        a = [rng.randint(-1, 1) for _ in range(rng.randint(1, 2))]
        b = [max(a) + rng.randint(1, 2) for _ in range(rng.randint(1, 3))]
        rows = [[random_form(S, bj - ai, rng) for bj in b] for ai in a]
        f = ModuleMap.from_matrix(FreeModule(S, tuple(b)), FreeModule(S, tuple(a)), rows)
        C = Complex.from_maps([f])
    else:
        forms = [random_form(S, 1, rng) for _ in range(2)]
        C = direct_sum([koszul(forms), shift(koszul([random_form(S, 2, rng)]), 1)], S)
    return twist(shift(C, rng.randint(-1, 1)), rng.randint(-1, 1))


def criterion_10():
    S, (x0, x1, x2) = _p2()
    R = S.quotient(["x0*x1"])
    # every constructor yields a complex
    K = koszul([x0 * x0, x0 * x1])
    built = [K, shift(K, 3), twist(K, 2), cone(identity_map(K)), hom_complex(K, twist(K, 1)).complex,
             truncate_complex(K, 2), minimize(cone(identity_map(K))), smart_truncate_below(K, -1),
             resolve_complex(truncate_complex(K, 2)).complex, direct_sum([K, shift(K, 1)], S)]
    for C in built:
        C.check()
    assert minimize(cone(identity_map(K))).is_zero()
    # minimal resolutions carry no constants
    for M in (PresentedModule(S, [0], [{S.term(0, k): 1} for k in S.monomials_of_degree(1)]),
              PresentedModule(R, [0], [{R.term(0, k): 1} for k in R.monomials_of_degree(1)]),
              truncate_module(PresentedModule.free_module(S, [0]), 2).module):
        res = minimal_free_resolution(M, 4)
        assert not any(f.has_unit_entry() for f in res.maps)
    # resolve_complex is a quasi-isomorphism, checked on Hilbert functions
    Kr = koszul([R.parse("x0")])
    for C, cap in ((truncate_complex(K, 2), None), (truncate_complex(twist(Kr, 1), 1), 4), (hom_complex(Kr, twist(Kr, 1)).complex, 4)):
        res = resolve_complex(C, cap)
        F = res.complex
        assert not any(F.dmap(j).has_unit_entry() for j in F.terms if j + 1 in F.terms)
        lo = C.sup - (cap if cap is not None else 10) + 1
        degs = [d for M in C.terms.values() for d in M.degrees]
        window = range(min(degs) - 1, max(degs) + 4)
        for j in C.terms:
            if j <= lo:
                continue
            a, b = cohomology_module(C, j), cohomology_module(F, j)
            assert [a.hilbert_function(d) for d in window] == [b.hilbert_function(d) for d in window], j
    # strands commute with cohomology, against a brute-force strand
    rng = random.Random(10)
    for _ in range(50):
        C = _random_complex(S, rng)
        terms, diffs = free_complex_to_oracle(C)
        for v in range(-1, 3):
            st = strand(C, v)
            brute = oracles.strand_cohomology(S.nvars, terms, diffs, v, S.p)
            for j in C.terms:
                assert st.cohomology_dim(j) == brute[j] == cohomology_module(C, j).hilbert_function(v)
    return "50 random complexes"


# ---------------------------------------------------------------------------
# pytest entry points


def test_criterion_01_koszul_sections():
    _run(1, criterion_1)


def test_criterion_02_sharpness():
    _run(2, criterion_2)


def test_criterion_03_crossing_lines():
    _run(3, criterion_3)


@pytest.mark.xfail(strict=True, reason="Hom(O, O(2)) on P^2 is 6-dimensional; the stated 3 cannot hold")
def test_criterion_04_beilinson_table():
    _run(4, criterion_4)


def test_criterion_05_mutation_orbit():
    _run(5, criterion_5)


def test_criterion_06_hirzebruch_twist(f2):
    _run(6, lambda: criterion_6(f2))


def test_criterion_07_bound_stability():
    _run(7, criterion_7)


def test_criterion_08_module_pipeline():
    _run(8, criterion_8)


def test_criterion_09_closed_forms():
    _run(9, criterion_9)


def test_criterion_10_structure():
    _run(10, criterion_10)


if __name__ == "__main__":
    for k, fn in [(1, criterion_1), (2, criterion_2), (3, criterion_3), (4, criterion_4), (5, criterion_5),
                  (6, lambda: criterion_6(f2_objects())), (7, criterion_7), (8, criterion_8), (9, criterion_9),
                  (10, criterion_10)]:
        try:
            _run(k, fn)
        except AssertionError:
            pass
