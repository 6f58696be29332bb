import json

import numpy as np
import pytest

from gerstenwerk.algebra import (
    AlgebraValidationError, ground_field, load_algebra, make_algebra, quiver_algebra, truncated_polynomial,
)
from gerstenwerk.errors import ValidationError


def test_corpus_shapes(algebras):
    assert [(A.p, A.dim) for A in algebras.values()] == [(2, 2), (3, 2), (2, 3)]


def test_one_loop_quiver_is_truncated_polynomial(algebras):
    # the quiver with one loop and cap 3 is F2[x]/(x^3), built by a separate routine
    poly = truncated_polynomial(2, 3)
    assert np.array_equal(algebras["A3"].mult, poly.mult)
    assert np.array_equal(algebras["A3"].unit, poly.unit)


def test_product_in_A2(algebras):
    A = algebras["A2"]
    # (1 + x)(2 + x) = 2 + 3x + x^2 = 2 in F3[x]/(x^2)
    assert A.product([1, 1], [2, 1]).tolist() == [2, 0]


def test_corpus_files_load(algebras):
    for name, A in algebras.items():
        B = load_algebra(f"corpus/{name}.json")
        assert B.content_hash() == A.content_hash()


def test_load_from_text_and_dict(algebras):
    d = algebras["A1"].to_dict()
    assert load_algebra(json.dumps(d)).content_hash() == algebras["A1"].content_hash()
    assert load_algebra(d).content_hash() == algebras["A1"].content_hash()


def test_hash_ignores_name():
    assert truncated_polynomial(2, 2, name="a").content_hash() == truncated_polynomial(2, 2, name="b").content_hash()


def test_two_vertex_quiver():
    A = quiver_algebra({"schema": "gw-quiver/1", "characteristic": 3, "vertices": ["1", "2"],
                        "arrows": [["a", "1", "2"]]})
    assert A.dim == 3
    e1, e2, a = (A.basis_vector(i) for i in range(3))
    assert A.product(e1, a).tolist() == a.tolist()
    assert not np.any(A.product(a, e1))
    assert A.product(a, e2).tolist() == a.tolist()


def test_zero_paths():
    A = quiver_algebra({"characteristic": 2, "vertices": ["v"], "arrows": [["x", "v", "v"], ["y", "v", "v"]],
                        "zero_paths": [["x", "y"], ["y", "x"], ["x", "x"], ["y", "y"]]})
    assert A.dim == 3


def test_infinite_quiver_rejected():
    with pytest.raises(AlgebraValidationError):
        quiver_algebra({"characteristic": 2, "vertices": ["v"], "arrows": [["x", "v", "v"]]})


def _nonassociative():
    m = np.zeros((3, 3, 3), dtype=int)
    for i in range(3):
        m[0, i, i] = m[i, 0, i] = 1
    m[1, 1, 2] = 1   # x*x = y
    m[2, 1, 1] = 1   # y*x = x, while x*y = 0
    return m


def test_nonassociative_names_triple():
    with pytest.raises(AlgebraValidationError) as err:
        make_algebra(2, ["1", "x", "y"], [1, 0, 0], _nonassociative())
    assert err.value.triple is not None
    assert "not associative" in str(err.value)


@pytest.mark.parametrize("patch, message", [
    ({"unit": [0, 1]}, "identity"),
    ({"characteristic": 4}, "prime"),
    ({"dimension": 3}, "dimension"),
    ({"schema": "gw-algebra/9"}, "schema"),
])
def test_bad_descriptions(algebras, patch, message):
    d = {**algebras["A1"].to_dict(), **patch}
    with pytest.raises(ValidationError, match=message):
        load_algebra(d)


def test_missing_field(algebras):
    d = algebras["A1"].to_dict()
    del d["mult"]
    with pytest.raises(ValidationError, match="mult"):
        load_algebra(d)


def test_ground_field_reduction():
    k = ground_field(5)
    assert k.dim == 1 and k.reduced_indices == ()
