import numpy as np
import pytest

from gerstenwerk.bar import BarResolution
from gerstenwerk.bimodule import BimoduleMap
from gerstenwerk.chain import (
    Complex, GradedMorphism, ResolutionData, boundary, complex_from_dict, complex_to_dict, decode_array,
    encode_array, lift_through_resolution, null_homotopy, payload_hash, reassociate, tensor_complexes,
    tensor_morphisms,
)
from gerstenwerk.errors import ValidationError


def _random_morphism(src, tgt, degree, rng, degrees):
    comps = {}
    for i in degrees:
        if tgt.obj(i - degree).dim and src.obj(i).dim:
            m = src.obj(i)
            comps[i] = BimoduleMap(m, tgt.obj(i - degree), images=rng.integers(0, src.algebra.p, size=(tgt.obj(i - degree).dim, m.rank)))
    return GradedMorphism(src, tgt, degree, comps)


@pytest.fixture(scope="module")
def bars(algebras):
    return {name: BarResolution(A, 4) for name, A in algebras.items()}


@pytest.mark.parametrize("name", ["A1", "A2", "A3"])
def test_boundary_squares_to_zero(bars, name, rng):
    P = bars[name].complex
    h = _random_morphism(P, P, 1, rng, range(1, 5))
    assert boundary(boundary(h)).is_zero(range(0, 4))
    assert boundary(GradedMorphism.identity(P)).is_zero()


@pytest.mark.parametrize("name", ["A1", "A2", "A3"])
def test_null_homotopy_of_boundary(bars, name, rng):
    # the solver fixes s_i = 0 where the target has nothing below, so h does too
    P = bars[name].complex
    h = _random_morphism(P, P, 1, rng, range(2, 4))
    f = boundary(h)
    s = null_homotopy(f, range(0, 3))
    assert s is not None
    assert boundary(s).equals(f, range(0, 3))


def test_null_homotopy_rejects_non_chain_map(bars, rng):
    P = bars["A1"].complex
    f = _random_morphism(P, P, 0, rng, range(1, 4))
    if not boundary(f).is_zero(range(0, 3)):
        with pytest.raises(ValidationError):
            null_homotopy(f, range(0, 3))


@pytest.mark.parametrize("name", ["A1", "A2", "A3"])
def test_identity_lift(bars, name):
    bar = bars[name]
    F = lift_through_resolution(bar.resolution, bar.resolution)
    assert boundary(F).is_zero(range(0, 4))
    assert (bar.mu @ F.comp(0)).equals(bar.mu)


@pytest.mark.parametrize("name", ["A1", "A3"])
def test_tensor_complex_and_reassociation(bars, name):
    P = bars[name].complex
    PP = tensor_complexes(P, P, hi=3)
    PP.check()
    one = GradedMorphism.identity(P)
    idPP = tensor_morphisms(one, one, PP, PP)
    assert idPP.equals(GradedMorphism.identity(PP), range(0, 4))
    L = tensor_complexes(PP, P, hi=2)
    R = tensor_complexes(P, PP, hi=2)
    a = reassociate(R, L)
    assert boundary(a).is_zero(range(0, 2))


def test_homology_of_two_term_complex(algebras):
    A = algebras["A2"]
    bar = BarResolution(A, 2)
    # truncating P at degree 1 leaves homology in degree 1 only
    c = Complex(A, {0: bar.module(0), 1: bar.module(1)}, {0: bar.diff(1)})
    h = ResolutionData(c, bar.mu, bar.unit).homology(2)
    assert h[0] == 0 and h[1] == c.obj(1).dim - np.linalg.matrix_rank(bar.diff(1).matrix)


def test_complex_roundtrip(bars):
    bar = bars["A3"]
    data = complex_to_dict(bar.complex, bar.mu)
    c, mu = complex_from_dict(bar.algebra, data)
    for i in range(0, 4):
        assert np.array_equal(c.d(i).matrix, bar.complex.d(i).matrix)
    assert np.array_equal(mu.matrix, bar.mu.matrix)
    assert payload_hash(data) == payload_hash(complex_to_dict(c, mu))


def test_array_codec():
    a = np.arange(24).reshape(2, 3, 4) - 7
    assert np.array_equal(decode_array(encode_array(a)), a)


def test_schema_checked(algebras):
    with pytest.raises(ValidationError):
        complex_from_dict(algebras["A1"], {"schema": "other"})
