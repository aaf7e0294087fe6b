import random

import pytest
from hypothesis import given, settings, strategies as st

from grhom.gradedmod import (
    DegreeError,
    FreeModule,
    ModuleMap,
    PresentedModule,
    betti_stats,
    cokernel,
    image,
    kernel,
    minimal_free_resolution,
    restrict_scalars,
    truncate_module,
)
from grhom.polyring import Ring

import oracles
from support import P, f2_objects, f2_ring, module_to_oracle, random_presented, vec


@pytest.fixture(scope="module")
def S():
    return Ring(P, 3)


def _residue_field(R):
    return PresentedModule(R, [0], [vec(R, [f"x{i}"]) for i in range(R.nvars)])


def _hf_range(M, lo=-2, hi=7):
    return [M.hilbert_function(d) for d in range(lo, hi)]


def test_degree_rule_enforced(S):
    with pytest.raises(DegreeError):
        ModuleMap.from_matrix(FreeModule(S, (0,)), FreeModule(S, (0,)), [["x0"]])
    f = ModuleMap.from_matrix(FreeModule(S, (1,)), FreeModule(S, (0,)), [["x0"]])
    assert not f.has_unit_entry()


@settings(max_examples=20, deadline=None)
@given(st.integers(0, 10**6))
def test_kernel_image_cokernel_are_additive(seed):
    """dim S_d^a = dim ker_d + dim im_d and dim target_d = dim im_d + dim coker_d."""
    rng = random.Random(seed)
    S = Ring(P, 3)
    src = tuple(rng.randint(1, 2) for _ in range(rng.randint(1, 3)))
    tgt = (0, 0)
    from support import random_form

    rows = [[random_form(S, s - t, rng, density=0.5) for s in src] for t in tgt]
    f = ModuleMap.from_matrix(FreeModule(S, src), FreeModule(S, tgt), rows)
    K, I, C = kernel(f), image(f), cokernel(f)
    Fs = PresentedModule.free_module(S, src)
    Ft = PresentedModule.free_module(S, tgt)
    for d in range(6):
        assert Fs.hilbert_function(d) == K.hilbert_function(d) + I.hilbert_function(d)
        assert Ft.hilbert_function(d) == I.hilbert_function(d) + C.hilbert_function(d)


def test_f2_modules():
    obj = f2_objects()
    OE = obj["O_E"].complex.terms[0]
    assert [OE.hilbert_function(d) for d in range(5)] == [1, 2, 3, 4, 5]
    B = obj["B"].complex.terms[0]
    assert B.ngens == 2 and B.krull_dimension() == 3
    R = f2_ring()
    assert [PresentedModule.free_module(R, [0]).hilbert_function(d) for d in range(4)] == [1, 6, 15, 28]


def test_betti_examples(S):
    bt = minimal_free_resolution(_residue_field(S)).betti
    assert [bt.total(i) for i in range(4)] == [1, 3, 3, 1]
    assert bt.pd == 3 and bt.a_max(3) == 3
    bt = minimal_free_resolution(PresentedModule(S, [0], [vec(S, ["x0*x1"])])).betti
    assert bt.pd == 1 and bt.a_max(1) == 2


def test_infinite_resolution_over_quotient(S):
    R = S.quotient(["x0*x1"])
    res = minimal_free_resolution(_residue_field(R), 4)
    assert [len(F.degrees) for F in res.modules] == [1, 3, 4, 4, 4]
    assert not res.complete
    for f in res.maps:
        assert not f.has_unit_entry()
    for g, h in zip(res.maps, res.maps[1:]):
        assert g.compose(h).is_zero()


@settings(max_examples=15, deadline=None)
@given(st.integers(0, 10**6))
def test_resolution_is_minimal_and_exact(seed):
    S = Ring(P, 3)
    M = random_presented(S, random.Random(seed))
    res = minimal_free_resolution(M)
    assert res.complete
    for f in res.maps:
        assert not f.has_unit_entry()
    for g, h in zip(res.maps, res.maps[1:]):
        assert g.compose(h).is_zero()
    # alternating sum of the free modules computes the Hilbert function
    for d in range(7):
        alt = sum((-1) ** i * PresentedModule.free_module(S, F.degrees).hilbert_function(d)
                  for i, F in enumerate(res.modules))
        assert alt == M.hilbert_function(d)


def test_betti_stats(S):
    pd, amax, _ = betti_stats(PresentedModule.free_module(S, [4]))
    assert pd == 0 and amax[0] == 4
    pd, amax, _ = betti_stats(_residue_field(S))
    assert pd == 3 and max(amax.values()) == 3
    R = S.quotient(["x0*x1"])
    pd, amax, _ = betti_stats(PresentedModule.free_module(R, [-1]))
    assert pd == 1 and amax == {0: -1, 1: 1}


def test_restrict_scalars_keeps_hilbert_function():
    R = f2_ring()
    for M in (PresentedModule.free_module(R, [0, 1]), f2_objects()["C"].complex.terms[0]):
        assert _hf_range(restrict_scalars(M)) == _hf_range(M)
        assert not restrict_scalars(M).ring.is_quotient


def test_truncation_examples(S):
    F = PresentedModule.free_module(S, [0])
    assert truncate_module(F, 0).module is F
    assert truncate_module(F, 2).module.ngens == 6
    assert truncate_module(F, 1).module.ngens == 3


@settings(max_examples=15, deadline=None)
@given(st.integers(0, 10**6), st.integers(-1, 4))
def test_truncation_window(seed, r):
    S = Ring(P, 3)
    M = random_presented(S, random.Random(seed))
    T = truncate_module(M, r).module
    for d in range(-2, 7):
        assert T.hilbert_function(d) == (M.hilbert_function(d) if d >= r else 0)


def test_hilbert_function_matches_oracle(S):
    rng = random.Random(7)
    for _ in range(5):
        M = random_presented(S, rng)
        degs, rels = module_to_oracle(M)
        for d in range(5):
            assert M.hilbert_function(d) == oracles.hilbert_function(3, degs, rels, d, P)


def test_betti_table_rendering(S):
    bt = minimal_free_resolution(_residue_field(S)).betti
    assert bt.grid().splitlines()[1].split() == ["total:", "1", "3", "3", "1"]
    assert bt.to_json()["betti"][0] == [0, 0, 1]
    assert bt.to_json()["over"] == "S"
