import numpy as np
import pytest

from gerstenwerk.ainfty import (
    build_ainfty, coder_ops, coderivation_failures, cup_from_coderivations, extend_to_coderivation,
)
from gerstenwerk.bar import BarResolution, alexander_whitney_diagonal
from gerstenwerk.errors import ValidationError
from gerstenwerk.ext import Cocycle, HochschildCohomology, cup
from gerstenwerk.lifting import GerstenhaberEngine

NAMES = ["A1", "A2", "A3"]


@pytest.fixture(scope="module")
def structures(algebras):
    out = {}
    for name, A in algebras.items():
        bar = BarResolution(A, 6)
        diag = alexander_whitney_diagonal(bar)
        top = 5 if A.dim < 3 else 3
        out[name] = (bar, diag, HochschildCohomology(bar), build_ainfty(bar, diag, top))
    return out


@pytest.mark.parametrize("name", NAMES)
def test_stasheff_and_counit(structures, name):
    _, _, _, S = structures[name]
    assert S.stasheff_failures(4) == []
    assert S.weak_counit_failures(4) == []


def test_stasheff_detects_a_sign_error(structures):
    bar, diag, _, _ = structures["A2"]
    S = build_ainfty(bar, diag, 4)
    for blocks in S.delta[2].comps.values():
        for key in blocks:
            if key[0] % 2:
                blocks[key] = -blocks[key]
    assert S.stasheff_failures(3) != []


@pytest.mark.parametrize("name", NAMES)
def test_extended_coderivations_commute_with_delta(structures, name):
    _, _, H, S = structures[name]
    for m in range(0, 4):
        for f in H.basis_cocycles(m):
            assert coderivation_failures(extend_to_coderivation(f, S, K=2)) == []


@pytest.mark.parametrize("name", ["A1", "A2"])
def test_arity_three(structures, name):
    _, _, H, S = structures[name]
    for m in (1, 2):
        for f in H.basis_cocycles(m):
            assert coderivation_failures(extend_to_coderivation(f, S, K=3)) == []


def test_wrong_first_component_is_detected(structures):
    _, _, H, S = structures["A2"]
    F = extend_to_coderivation(H.basis_cocycles(1)[0], S, K=2)
    F.components[1] = F.components[1].scale(-1)
    assert coderivation_failures(F) != []


@pytest.mark.parametrize("name", NAMES)
def test_arity_zero_bracket_and_cup(structures, name):
    bar, diag, H, S = structures[name]
    eng = GerstenhaberEngine(bar, diag)
    for m in (1, 2):
        for k in (1, 2):
            for f in H.basis_cocycles(m):
                for g in H.basis_cocycles(k):
                    F, G = extend_to_coderivation(f, S, K=2), extend_to_coderivation(g, S, K=2)
                    _, _, br = coder_ops(F, G)
                    assert coderivation_failures(br) == []
                    i = m + k - 1
                    blk = br.f(0).at(i).get(())
                    v = np.zeros((bar.rank(i), bar.algebra.dim)) if blk is None else blk.T
                    assert H.class_equal(Cocycle(bar, i, v), eng.bracket(f, g))
                    if m + k > S.top:
                        continue
                    c = cup_from_coderivations(F, G, m + k)
                    expected = cup(f, g, diag).scale((-1) ** (m * k + 1))
                    assert np.array_equal(c, expected.values)


def test_cap_limit(structures):
    _, _, H, S = structures["A1"]
    with pytest.raises(ValidationError):
        extend_to_coderivation(H.basis_cocycles(1)[0], S, K=4)
