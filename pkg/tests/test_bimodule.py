import numpy as np
import pytest

from gerstenwerk.bimodule import (
    BimoduleError, BimoduleMap, FreeBimodule, direct_sum, inverse, is_isomorphism, kernel_cokernel,
    left_unitor, pullback, pushout, right_unitor, tensor_maps, tensor_over_algebra, unit_bimodule,
)
from gerstenwerk.linalg import matmul, rank


def _free_to_unit(A, rank_, rng):
    F = FreeBimodule(A, list(range(rank_)))
    return BimoduleMap(F, unit_bimodule(A), images=rng.integers(0, A.p, size=(A.dim, rank_)))


@pytest.mark.parametrize("name", ["A1", "A2", "A3"])
def test_modules_are_bimodules(algebras, name, rng):
    A = algebras[name]
    unit_bimodule(A).check()
    F = FreeBimodule(A, ["g", "h"])
    F.check()
    assert F.dim == A.dim * 2 * A.dim
    assert _free_to_unit(A, 2, rng).is_bimodule_map()


@pytest.mark.parametrize("name", ["A1", "A2", "A3"])
def test_free_tensor_free_rank(algebras, name):
    A = algebras[name]
    F, G = FreeBimodule(A, ["a"]), FreeBimodule(A, ["b", "c"])
    t = tensor_over_algebra(F, G)
    # (A x V x A) (x)_A (A x W x A) = A x V x A x W x A
    assert t.module.dim == A.dim * (1 * A.dim * 2) * A.dim
    t.module.check()


@pytest.mark.parametrize("name", ["A1", "A2", "A3"])
def test_unitors_are_isomorphisms(algebras, name):
    A = algebras[name]
    F = FreeBimodule(A, ["g"])
    one = unit_bimodule(A)
    assert is_isomorphism(left_unitor(tensor_over_algebra(one, F)))
    assert is_isomorphism(right_unitor(tensor_over_algebra(F, one)))
    assert is_isomorphism(left_unitor(tensor_over_algebra(one, one)))


def test_tensor_maps_functorial(algebras, rng):
    A = algebras["A2"]
    f = _free_to_unit(A, 1, rng)
    g = _free_to_unit(A, 1, rng)
    src = tensor_over_algebra(f.source, g.source)
    mid = tensor_over_algebra(f.target, g.source)
    tgt = tensor_over_algebra(f.target, g.target)
    one_f = BimoduleMap.identity(f.target)
    one_g = BimoduleMap.identity(g.source)
    whole = tensor_maps(f, g, src, tgt)
    steps = tensor_maps(one_f, g, mid, tgt) @ tensor_maps(f, one_g, src, mid)
    assert whole.equals(steps)


@pytest.mark.parametrize("name", ["A1", "A2", "A3"])
def test_pushout_and_pullback(algebras, name, rng):
    A = algebras[name]
    iota = _free_to_unit(A, 1, rng)
    g = _free_to_unit(A, 1, rng)
    po = pushout(iota, g)
    rel = rank(np.concatenate([iota.matrix, -g.matrix]), A.p)
    assert po.module.dim == 2 * A.dim - rel
    assert (po.from_first @ iota).equals(po.from_second @ g)
    # the mediating map out of the pushout recovers the codiagonal when iota = g
    po2 = pushout(iota, iota)
    one = BimoduleMap.identity(iota.target)
    m = po2.mediate(one, one)
    assert (m @ po2.from_first).equals(one)
    pb = pullback(iota, g)
    assert (g @ pb.to_first).equals(iota @ pb.to_second)
    row = direct_sum(g.source, iota.source).row(g, -iota)
    assert not np.any(matmul(row.matrix, pb.inclusion.matrix, A.p))
    assert pb.module.dim == row.source.dim - rank(row.matrix, A.p)


def test_pushout_rejects_noncommuting_cocone(algebras, rng):
    A = algebras["A1"]
    iota = _free_to_unit(A, 1, rng)
    po = pushout(iota, iota)
    one = BimoduleMap.identity(iota.target)
    zero = BimoduleMap.zero(iota.target, iota.target)
    if not iota.is_zero():
        with pytest.raises(BimoduleError):
            po.mediate(one, zero)


def test_kernel_cokernel_dimensions(algebras, rng):
    A = algebras["A3"]
    f = _free_to_unit(A, 2, rng)
    ker, incl, coker, proj = kernel_cokernel(f)
    r = rank(f.matrix, A.p)
    assert ker.dim == f.source.dim - r and coker.dim == A.dim - r
    assert (f @ incl).is_zero() and (proj @ f).is_zero()


def test_direct_sum_of_free_is_free(algebras):
    A = algebras["A1"]
    ds = direct_sum(FreeBimodule(A, ["a"]), FreeBimodule(A, ["b", "c"]))
    assert isinstance(ds.module, FreeBimodule) and ds.module.rank == 3
    for inj, proj in zip(ds.injections, ds.projections):
        assert (proj @ inj).equals(BimoduleMap.identity(inj.source))


def test_inverse(algebras):
    A = algebras["A2"]
    one = unit_bimodule(A)
    two = BimoduleMap(one, one, 2 * np.eye(A.dim, dtype=int))
    assert (inverse(two) @ two).equals(BimoduleMap.identity(one))


@pytest.mark.parametrize("name", ["A1", "A2", "A3"])
def test_pullback_of_projections(algebras, name):
    # pairs (u, v) in (A + A)^2 with pr1 u = pr2 v: 4d coordinates, d conditions
    A = algebras[name]
    one = unit_bimodule(A)
    ds = direct_sum(one, one)
    pr1, pr2 = ds.projections
    assert pullback(pr1, pr2).module.dim == 3 * A.dim
