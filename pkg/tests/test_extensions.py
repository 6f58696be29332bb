import numpy as np
import pytest

from gerstenwerk.bar import BarResolution, alexander_whitney_diagonal
from gerstenwerk.bimodule import BimoduleMap
from gerstenwerk.chain import boundary
from gerstenwerk.errors import ValidationError
from gerstenwerk.ext import Cocycle, HochschildCohomology, cup
from gerstenwerk.extensions import (
    ExtensionMorphism, act, baer_sum, cocycle_of_extension, factorizing_hat, hermann_loop, identity_morphism,
    k_of_cocycle, loop_to_cocycle, pull_back, push_out, schwede_homotopy, schwede_loop, sigma, sigma_embedding,
    splice, tensor_extensions, verify_conjugation, verify_diamond_bracket, verify_schwede_hermann,
)
from gerstenwerk.lifting import GerstenhaberEngine

NAMES = ["A1", "A2", "A3"]


@pytest.fixture(scope="module")
def ctx(algebras):
    out = {}
    for name, A in algebras.items():
        bar = BarResolution(A, 6)
        out[name] = (bar, HochschildCohomology(bar))
    return out


def _scalar(bar, c):
    return BimoduleMap(bar.unit, bar.unit, c * np.eye(bar.algebra.dim, dtype=np.int64))


@pytest.mark.parametrize("name", NAMES)
def test_k_of_cocycle_roundtrip(ctx, name):
    bar, H = ctx[name]
    for n in range(1, 5):
        for f in H.basis_cocycles(n):
            K = k_of_cocycle(f)
            K.extension.check()
            assert K.extension.is_exact()
            assert boundary(K.Phi).is_zero(range(0, n + 1))
            assert H.class_equal(cocycle_of_extension(bar, K.extension), f)


def test_k_of_cocycle_degree_zero_term(ctx):
    # 0 -> A -> K(f)_0 -> A -> 0 is exact, so dim K(f)_0 = 2 dim A = 4 over F2[x]/(x^2)
    bar, H = ctx["A1"]
    for f in H.basis_cocycles(1):
        assert k_of_cocycle(f).extension.obj(0).dim == 4


@pytest.mark.parametrize("name", NAMES)
def test_split_extensions_are_zero(ctx, name):
    bar, H = ctx[name]
    for n in range(1, 5):
        S = sigma(bar.algebra, n)
        assert S.is_exact()
        assert H.is_coboundary(cocycle_of_extension(bar, S))
        zero = Cocycle(bar, n, np.zeros((bar.rank(n), bar.algebra.dim)))
        assert H.is_coboundary(cocycle_of_extension(bar, k_of_cocycle(zero).extension))


@pytest.mark.parametrize("name", NAMES)
def test_baer_sum_is_addition(ctx, name):
    bar, H = ctx[name]
    for n in range(1, 5):
        basis = H.basis_cocycles(n)
        f, g = basis[0], basis[-1]
        S = baer_sum(k_of_cocycle(f).extension, k_of_cocycle(g).extension)
        assert S.is_exact()
        assert H.class_equal(cocycle_of_extension(bar, S), f + g)


@pytest.mark.parametrize("n", [1, 2, 3])
def test_sigma_is_neutral(ctx, n):
    bar, H = ctx["A3"]
    E = k_of_cocycle(H.basis_cocycles(n)[1]).extension
    S = baer_sum(sigma(bar.algebra, n), E)
    j = ExtensionMorphism(E, S, sigma_embedding(E, S))
    assert j.is_valid()


def test_scalar_action(ctx):
    bar, H = ctx["A2"]
    for n in (1, 2, 3):
        f = H.basis_cocycles(n)[0]
        E = k_of_cocycle(f).extension
        two, one = _scalar(bar, 2), _scalar(bar, 1)
        assert H.class_equal(cocycle_of_extension(bar, act(two, E, one)), f.scale(2))
        assert H.class_equal(cocycle_of_extension(bar, act(one, E, two)), f.scale(2))
        assert H.class_equal(cocycle_of_extension(bar, act(one, E, one)), f)
        assert H.class_equal(cocycle_of_extension(bar, E.signed(-1)), f.scale(-1))


def test_push_pull_commute_on_classes(ctx):
    bar, H = ctx["A2"]
    f = H.basis_cocycles(2)[0]
    E = k_of_cocycle(f).extension
    two = _scalar(bar, 2)
    BE, _ = push_out(two, E)
    left, _ = pull_back(BE, two)
    right = act(two, E, two)
    assert H.class_equal(cocycle_of_extension(bar, left), cocycle_of_extension(bar, right))
    assert H.class_equal(cocycle_of_extension(bar, right), f.scale(4))


@pytest.mark.parametrize("name", NAMES)
def test_splice_and_tensor_give_cup(ctx, name):
    bar, H = ctx[name]
    D = alexander_whitney_diagonal(bar)
    for m in (1, 2):
        for n in (1, 2):
            f, g = H.basis_cocycles(m)[0], H.basis_cocycles(n)[-1]
            E, F = k_of_cocycle(f).extension, k_of_cocycle(g).extension
            S = splice(E, F)
            S.check()
            assert H.class_equal(cocycle_of_extension(bar, S), cup(f, g, D))
            T = tensor_extensions(E, F)
            assert H.class_equal(cocycle_of_extension(bar, T), cup(f, g, D))


def test_tensor_of_split_is_split(ctx):
    bar, H = ctx["A1"]
    T = tensor_extensions(sigma(bar.algebra, 1), sigma(bar.algebra, 2))
    assert H.is_coboundary(cocycle_of_extension(bar, T))


@pytest.mark.parametrize("name", NAMES)
def test_schwede_loop_extracts_minus_g(ctx, name):
    # (mu_f(g) - 1) Phi_f is -iota g in degree n-1, so s_{n-1} = -g
    bar, H = ctx[name]
    for n in (2, 3):
        K = k_of_cocycle(H.basis_cocycles(n)[0])
        one = ExtensionMorphism(K.extension, K.extension, identity_morphism(K.extension))
        for g in H.basis_cocycles(n - 1):
            loop = schwede_loop(K, g)
            assert loop.is_valid()
            ex = loop_to_cocycle(K, loop, one)
            assert ex.preimage_holds
            assert H.class_equal(ex.cocycle, g.scale(-1))


def test_schwede_loop_is_additive(ctx):
    bar, H = ctx["A3"]
    K = k_of_cocycle(H.basis_cocycles(3)[0])
    g, h = H.basis_cocycles(2)
    lhs = (schwede_loop(K, g) @ schwede_loop(K, h)).map
    assert lhs.equals(schwede_loop(K, g + h).map, range(0, 4))


def test_schwede_homotopy(ctx, rng):
    bar, H = ctx["A3"]
    n = 3
    K = k_of_cocycle(H.basis_cocycles(n)[0])
    g = H.basis_cocycles(n - 1)[0]
    p = BimoduleMap(bar.module(n - 2), bar.unit, images=rng.integers(0, 2, size=(bar.algebra.dim, bar.rank(n - 2))))
    g2 = Cocycle(bar, n - 1, g.values + (p @ bar.complex.d(n - 2)).images.T)
    diff = schwede_loop(K, g).map - schwede_loop(K, g2).map
    assert boundary(schwede_homotopy(K, p)).equals(diff, range(0, n + 1))


def test_hermann_loop_closes(ctx):
    bar, H = ctx["A2"]
    f, g = H.basis_cocycles(3)[0], H.basis_cocycles(2)[0]
    hl = hermann_loop(k_of_cocycle(f).extension, k_of_cocycle(g).extension)
    assert hl.word.is_closed()
    assert hl.alpha.is_valid() and hl.beta.is_valid()


@pytest.mark.parametrize("name", NAMES)
def test_schwede_hermann_report(ctx, name):
    bar, H = ctx[name]
    for n in (2, 3):
        f = H.basis_cocycles(n)[-1]
        for g in H.basis_cocycles(n - 1):
            rep = verify_schwede_hermann(f, g, H)
            assert rep.passed, rep.failures()


@pytest.mark.parametrize("name", ["A1", "A2"])
def test_diamond_report(ctx, name):
    bar, H = ctx[name]
    eng = GerstenhaberEngine(bar)
    f, g = H.basis_cocycles(1)[-1], H.basis_cocycles(2)[-1]
    rep = verify_diamond_bracket(f, g, eng.diag, eng.lifting(f), eng.lifting(g), H)
    assert rep.passed, rep.failures()


def test_conjugation(ctx):
    bar, H = ctx["A1"]
    E = k_of_cocycle(H.basis_cocycles(2)[0]).extension
    F = k_of_cocycle(H.basis_cocycles(1)[1]).extension
    assert verify_conjugation(bar, E, F).passed


@pytest.mark.parametrize("name", NAMES)
def test_factorizing_hat(ctx, name):
    bar, H = ctx[name]
    for n in (1, 2, 3):
        K = k_of_cocycle(H.basis_cocycles(n)[0])
        E = K.extension
        betas = [ExtensionMorphism(E, E, identity_morphism(E))]
        if n >= 2:
            betas += [schwede_loop(K, g) for g in H.basis_cocycles(n - 1)]
        for beta in betas:
            fh = factorizing_hat(E, E, beta)
            assert fh.report.passed, fh.report.failures()


def test_invalid_morphism_detected(ctx):
    bar, H = ctx["A2"]
    E = k_of_cocycle(H.basis_cocycles(2)[0]).extension
    bad = ExtensionMorphism(E, E, identity_morphism(E).scale(2))
    assert not bad.is_valid()


def test_rejections(ctx):
    bar, H = ctx["A1"]
    with pytest.raises(ValidationError):
        k_of_cocycle(H.basis_cocycles(0)[0])
    with pytest.raises(ValidationError):
        baer_sum(sigma(bar.algebra, 1), sigma(bar.algebra, 2))
    with pytest.raises(ValidationError):
        hermann_loop(sigma(bar.algebra, 1), sigma(bar.algebra, 1))
