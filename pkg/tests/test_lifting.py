import numpy as np
import pytest

from gerstenwerk.bar import BarResolution, alexander_whitney_diagonal, perturb_diagonal, random_degree_one
from gerstenwerk.chain import tensor_complexes
from gerstenwerk.errors import ValidationError
from gerstenwerk.ext import HochschildCohomology, oracle_gerstenhaber
from gerstenwerk.lifting import GerstenhaberEngine, bracket, solve_homotopy_lifting

NAMES = ["A1", "A2", "A3"]


@pytest.mark.parametrize("name", NAMES)
def test_lifting_equations(engines, name):
    eng = engines[name]
    for n in range(1, 5):
        for f in eng.cohomology.basis_cocycles(n):
            lift = eng.lifting(f)
            assert lift.satisfies_equation()
            assert lift.mu_is_zero()


@pytest.mark.parametrize("name", NAMES)
def test_random_liftings_give_the_same_class(engines, name, rng):
    eng = engines[name]
    H = eng.cohomology
    for m, k in ((1, 2), (2, 2), (2, 1)):
        for f in H.basis_cocycles(m):
            for g in H.basis_cocycles(k):
                pf = solve_homotopy_lifting(f, eng.diag, rng=rng)
                pg = solve_homotopy_lifting(g, eng.diag, rng=rng)
                assert pf.satisfies_equation() and pf.mu_is_zero()
                assert H.class_equal(bracket(f, g, pf, pg), eng.bracket(f, g))


@pytest.mark.parametrize("name", NAMES)
def test_structure_constants_match_oracle(engines, name):
    eng = engines[name]
    H = eng.cohomology
    for m, k in ((1, 1), (1, 2), (2, 3)):
        ours = eng.structure_constants(m, k)
        theirs = [H.coordinates(oracle_gerstenhaber(f, g)) for f in H.basis_cocycles(m) for g in H.basis_cocycles(k)]
        assert np.array_equal(ours, np.array(theirs, dtype=np.int64).reshape(ours.shape))


def test_mismatched_diagonals_rejected(engines):
    eng = engines["A1"]
    other = GerstenhaberEngine(eng.bar, alexander_whitney_diagonal(eng.bar))
    f = eng.cohomology.basis_cocycles(1)[0]
    with pytest.raises(ValidationError):
        bracket(f, f, eng.lifting(f), other.lifting(f))


def test_non_counital_diagonal_rejected(algebras):
    bar = BarResolution(algebras["A1"], 4)
    pp = tensor_complexes(bar.complex, bar.complex, hi=3)
    D = perturb_diagonal(alexander_whitney_diagonal(bar), pp, random_degree_one(bar, pp, 3, np.random.default_rng(7)), 3)
    f = HochschildCohomology(bar).basis_cocycles(1)[0]
    if not D.is_strict_counital():
        with pytest.raises(ValidationError, match="counital"):
            solve_homotopy_lifting(f, D)


def test_degree_zero_lifting(engines):
    eng = engines["A3"]
    H = eng.cohomology
    c = H.basis_cocycles(0)[1]
    E = H.basis_cocycles(1)[0]
    assert H.class_equal(eng.bracket(E, c), oracle_gerstenhaber(E, c))
