import pytest
from hypothesis import given, settings, strategies as st

from grhom.complexes import Complex
from grhom.dercat import (
    DerivedObject,
    NotExceptionalError,
    NotSphericalError,
    ext_dims,
    ext_table,
    is_exceptional,
    mutate_left,
    mutate_right,
    spherical_ext_check,
    spherical_twist,
)
from grhom.gradedmod import PresentedModule
from grhom.polyring import Ring

from support import P, line_bundle


@pytest.fixture(scope="module")
def P1():
    return Ring(P, 2)


@pytest.fixture(scope="module")
def P2():
    return Ring(P, 3)


@pytest.fixture(scope="module")
def cubic():
    return Ring(P, 3).quotient(["x0^3 + x1^3 + x2^3"])


def O(ring, d=0):
    return DerivedObject(line_bundle(ring, d), f"O({d})")


def _nonzero(d):
    return {m: x for m, x in d.items() if x}


def _chi(dims):
    return sum((-1) ** (m % 2) * x for m, x in dims.items())


def test_line_bundles_are_exceptional(P2):
    ok, dims = is_exceptional(O(P2))
    assert ok and _nonzero(dims) == {0: 1}
    sum2 = DerivedObject(Complex.single(PresentedModule.free_module(P2, [0, 0])), "O+O")
    ok, dims = is_exceptional(sum2)
    assert not ok and _nonzero(dims) == {0: 4}
    assert not is_exceptional(DerivedObject(Complex.zero(P2)))[0]


def test_single_object_table(P2):
    t = ext_table([O(P2)])
    assert t.matrix() == [[1]]
    assert t.is_exceptional_collection and t.is_strong
    assert t.to_json()["objects"] == ["O(0)"]


def test_table_of_line_bundles_on_p1(P1):
    t = ext_table([O(P1, 0), O(P1, 1)])
    assert t.matrix() == [[1, 2], [0, 1]]
    assert t.is_strong
    t = ext_table([O(P1, 1), O(P1, 0)])
    assert not t.is_exceptional_collection


def test_mutations_on_p1(P1):
    L = mutate_left(O(P1, 0), O(P1, 1))
    assert _nonzero(ext_dims(L, O(P1, 0))) == {0: 2}
    assert ext_table([L, O(P1, 0)]).is_exceptional_collection
    R = mutate_right(O(P1, 1), O(P1, 0))
    assert _nonzero(ext_dims(O(P1, 0), R)) == {0: 3}
    assert ext_table([O(P1, 1), R]).is_exceptional_collection


def test_mutation_with_vanishing_rhom_shifts(P2):
    L = mutate_left(O(P2, 1), O(P2, 0), check=False)
    assert L.complex.ranks() == {1: 1}


@settings(max_examples=6, deadline=None)
@given(st.integers(-1, 1), st.integers(1, 2))
def test_left_mutation_keeps_pairs_exceptional(a, gap):
    S = Ring(P, 3)
    E, F = O(S, a), O(S, a + gap)
    L = mutate_left(E, F)
    assert ext_table([L, E]).is_exceptional_collection
    # Euler form: [L] = [F] - chi(E, F) [E]
    chi_EF = _chi(ext_dims(E, F))
    G = O(S, a - 1)
    assert _chi(ext_dims(G, L)) == -(_chi(ext_dims(G, F)) - chi_EF * _chi(ext_dims(G, E)))


def test_errors(P2):
    sum2 = DerivedObject(Complex.single(PresentedModule.free_module(P2, [0, 0])), "O+O")
    with pytest.raises(NotExceptionalError):
        mutate_left(sum2, O(P2))
    with pytest.raises(NotExceptionalError):
        mutate_left(O(P2, 1), O(P2, 0))
    with pytest.raises(NotSphericalError):
        spherical_twist(O(P2), O(P2))
    with pytest.raises(ValueError):
        ext_table([])


def test_structure_sheaf_of_elliptic_curve_is_spherical(cubic):
    assert spherical_ext_check(O(cubic))
    assert not spherical_ext_check(O(Ring(P, 2)))


def test_spherical_twist_on_elliptic_curve(cubic):
    E, F, G = O(cubic, 0), O(cubic, 1), O(cubic, 1)
    T = spherical_twist(E, F)
    assert _chi(ext_dims(G, T)) == _chi(ext_dims(G, F)) - _chi(ext_dims(E, F)) * _chi(ext_dims(G, E))
    assert _nonzero(ext_dims(T, T)) == _nonzero(ext_dims(F, F))
