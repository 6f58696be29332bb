"""Finite-dimensional unital algebras over F_p given by structure constants."""
from __future__ import annotations

import hashlib
import itertools
import json
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .errors import ValidationError
from .linalg import FieldSpec

ALGEBRA_SCHEMA = "gw-algebra/1"
QUIVER_SCHEMA = "gw-quiver/1"


class AlgebraValidationError(ValidationError):
    """Raised for malformed or non-associative/non-unital algebra data."""

    def __init__(self, message, triple=None):
        super().__init__(message)
        self.triple = triple


@dataclass(frozen=True, eq=False)
class AlgebraPresentation:
    """Basis, unit and multiplication table ``mult[a, b] = e_a * e_b``.

    ``mult`` has shape (d, d, d); ``mult[a, b, c]`` is the coefficient of
    ``e_c`` in ``e_a e_b``.
    """

    field: FieldSpec
    labels: tuple
    unit: np.ndarray
    mult: np.ndarray
    name: str = ""
    _cache: dict = field(default_factory=dict, repr=False, compare=False)

    @property
    def p(self) -> int:
        return self.field.p

    @property
    def dim(self) -> int:
        return len(self.labels)

    def __repr__(self):
        return f"AlgebraPresentation({self.name or 'A'}, p={self.p}, dim={self.dim})"

    # structure ---------------------------------------------------------

    @property
    def lmul(self) -> np.ndarray:
        """``lmul[a]`` is the matrix of v -> e_a v."""
        return self._cached("lmul", lambda: np.ascontiguousarray(self.mult.transpose(0, 2, 1)))

    @property
    def rmul(self) -> np.ndarray:
        """``rmul[b]`` is the matrix of v -> v e_b."""
        return self._cached("rmul", lambda: np.ascontiguousarray(self.mult.transpose(1, 2, 0)))

    @property
    def mult3(self) -> np.ndarray:
        """``mult3[a, x, b, c]``: coefficient of e_c in e_a e_x e_b."""
        def build():
            ab = np.einsum("axy,ybc->axbc", self.mult, self.mult)
            return np.mod(ab, self.p)
        return self._cached("mult3", build)

    def _cached(self, key, fn):
        if key not in self._cache:
            self._cache[key] = fn()
        return self._cache[key]

    def product(self, u, v) -> np.ndarray:
        return np.mod(np.einsum("a,b,abc->c", np.asarray(u), np.asarray(v), self.mult), self.p)

    def left_matrix(self, v) -> np.ndarray:
        return np.mod(np.einsum("a,acb->cb", np.asarray(v), self.lmul), self.p)

    def right_matrix(self, v) -> np.ndarray:
        return np.mod(np.einsum("b,bca->ca", np.asarray(v), self.rmul), self.p)

    def basis_vector(self, i: int) -> np.ndarray:
        v = np.zeros(self.dim, dtype=np.int64)
        v[i] = 1
        return v

    # reduced basis for the normalized bar construction ---------------------

    @property
    def unit_index(self) -> int:
        """First basis element with a nonzero unit coefficient."""
        return int(np.flatnonzero(self.unit)[0])

    @property
    def reduced_indices(self) -> tuple:
        """Basis indices spanning the chosen complement of k*1."""
        u = self.unit_index
        return tuple(i for i in range(self.dim) if i != u)

    @property
    def reduction(self) -> np.ndarray:
        """Matrix of A -> A/k1 in reduced coordinates, shape (d-1, d)."""
        def build():
            u = self.unit_index
            inv = pow(int(self.unit[u]), self.p - 2, self.p)
            strip = np.eye(self.dim, dtype=np.int64)
            strip[:, u] = np.mod(strip[:, u] - inv * self.unit, self.p)
            return np.mod(strip[list(self.reduced_indices)], self.p)
        return self._cached("reduction", build)

    # validation ----------------------------------------------------------

    def validate(self):
        d, p = self.dim, self.p
        if self.mult.shape != (d, d, d):
            raise AlgebraValidationError(f"multiplication table has shape {self.mult.shape}, expected {(d, d, d)}")
        if self.unit.shape != (d,) or not np.any(self.unit):
            raise AlgebraValidationError("unit must be a nonzero vector of length dim")
        left = np.einsum("abx,xcy->abcy", self.mult, self.mult) % p
        right = np.einsum("bcx,axy->abcy", self.mult, self.mult) % p
        bad = np.argwhere(np.any(left != right, axis=3))
        if bad.size:
            a, b, c = (int(t) for t in bad[0])
            la, lb, lc = self.labels[a], self.labels[b], self.labels[c]
            raise AlgebraValidationError(
                f"not associative: ({la}*{lb})*{lc} != {la}*({lb}*{lc})", triple=(a, b, c))
        eye = np.eye(d, dtype=np.int64)
        if np.any(self.left_matrix(self.unit) != eye):
            raise AlgebraValidationError("unit is not a left identity")
        if np.any(self.right_matrix(self.unit) != eye):
            raise AlgebraValidationError("unit is not a right identity")
        return self

    # serialization -------------------------------------------------------

    def to_dict(self) -> dict:
        return {
            "schema": ALGEBRA_SCHEMA,
            "name": self.name,
            "characteristic": self.p,
            "dimension": self.dim,
            "basis": list(self.labels),
            "unit": [int(x) for x in self.unit],
            "mult": self.mult.tolist(),
        }

    def content_hash(self) -> str:
        blob = json.dumps({k: v for k, v in self.to_dict().items() if k != "name"}, sort_keys=True)
        return hashlib.sha256(blob.encode()).hexdigest()


def make_algebra(p, labels, unit, mult, name="") -> AlgebraPresentation:
    field_ = FieldSpec(int(p))
    mult = np.mod(np.asarray(mult, dtype=np.int64), field_.p)
    unit = np.mod(np.asarray(unit, dtype=np.int64), field_.p)
    return AlgebraPresentation(field_, tuple(labels), unit, mult, name).validate()


def load_algebra(description) -> AlgebraPresentation:
    """Build a validated algebra from a dict, JSON text or a file path.

    Accepts both the "gw-algebra/1" and "gw-quiver/1" schemas.
    """
    if isinstance(description, (str, Path)) and not str(description).lstrip().startswith("{"):
        path = Path(description)
        data = json.loads(path.read_text())
        data.setdefault("name", path.stem)
    elif isinstance(description, str):
        data = json.loads(description)
    else:
        data = dict(description)
    schema = data.get("schema", ALGEBRA_SCHEMA)
    if schema == QUIVER_SCHEMA:
        return quiver_algebra(data)
    if schema != ALGEBRA_SCHEMA:
        raise AlgebraValidationError(f"unknown schema {schema!r}")
    try:
        p = int(data["characteristic"])
        d = int(data["dimension"])
        labels = data.get("basis") or [f"e{i}" for i in range(d)]
        unit = data["unit"]
        mult = data["mult"]
    except KeyError as exc:
        raise AlgebraValidationError(f"missing field {exc.args[0]!r}") from None
    if len(labels) != d or len(unit) != d:
        raise AlgebraValidationError("basis/unit length does not match dimension")
    try:
        FieldSpec(p)
    except ValueError as exc:
        raise AlgebraValidationError(str(exc)) from None
    mult = np.asarray(mult, dtype=np.int64)
    if mult.shape != (d, d, d):
        raise AlgebraValidationError(f"multiplication table has shape {mult.shape}, expected {(d, d, d)}")
    return make_algebra(p, labels, unit, mult, data.get("name", ""))


def quiver_algebra(data) -> AlgebraPresentation:
    """Monomial path algebra kQ / (paths of length >= cap, listed zero paths).

    Paths compose left to right: ``p * q`` is the concatenation when the
    target of ``p`` is the source of ``q``.
    """
    p = int(data["characteristic"])
    vertices = list(data["vertices"])
    arrows = [tuple(a) for a in data.get("arrows", [])]
    cap = data.get("nilpotency")
    zero_paths = {tuple(z) for z in data.get("zero_paths", [])}
    src = {a[0]: a[1] for a in arrows}
    tgt = {a[0]: a[2] for a in arrows}

    longest = max((len(z) for z in zero_paths), default=0)

    def killed(path):
        # paths grow one arrow at a time from live prefixes, so only suffixes are new
        if cap is not None and len(path) >= cap:
            return True
        n = len(path)
        return any(path[i:] in zero_paths for i in range(max(0, n - longest), n))

    paths = [(v,) for v in vertices]
    frontier = [(a[0],) for a in arrows if not killed((a[0],))]
    limit = 1000
    while frontier:
        paths.extend(("path",) + f for f in frontier)
        nxt = []
        for f in frontier:
            for a in arrows:
                if tgt[f[-1]] == src[a[0]] and not killed(f + (a[0],)):
                    nxt.append(f + (a[0],))
        frontier = nxt
        if len(paths) > limit:
            raise AlgebraValidationError("quiver algebra is infinite-dimensional; set a nilpotency cap")
    index = {pth: i for i, pth in enumerate(paths)}
    d = len(paths)

    def ends(pth):
        if pth[0] != "path":
            return pth[0], pth[0]
        return src[pth[1]], tgt[pth[-1]]

    mult = np.zeros((d, d, d), dtype=np.int64)
    for x, y in itertools.product(paths, repeat=2):
        sx, tx = ends(x)
        sy, ty = ends(y)
        if tx != sy:
            continue
        if x[0] != "path":
            prod = y
        elif y[0] != "path":
            prod = x
        else:
            # live paths are exactly the basis, so a product survives iff it is listed
            prod = ("path",) + x[1:] + y[1:]
            if prod not in index:
                continue
        mult[index[x], index[y], index[prod]] = 1
    unit = np.array([1 if pth[0] != "path" else 0 for pth in paths], dtype=np.int64)
    labels = [pth[0] if pth[0] != "path" else "".join(pth[1:]) for pth in paths]
    return make_algebra(p, labels, unit, mult, data.get("name", "quiver"))


def truncated_polynomial(p: int, n: int, var: str = "x", name: str = "") -> AlgebraPresentation:
    """k[x]/(x^n) with basis 1, x, ..., x^(n-1)."""
    mult = np.zeros((n, n, n), dtype=np.int64)
    for i in range(n):
        for j in range(n):
            if i + j < n:
                mult[i, j, i + j] = 1
    labels = ["1"] + [var if i == 1 else f"{var}^{i}" for i in range(1, n)]
    unit = np.zeros(n, dtype=np.int64)
    unit[0] = 1
    return make_algebra(p, labels, unit, mult, name or f"F{p}[{var}]/({var}^{n})")


def ground_field(p: int) -> AlgebraPresentation:
    return make_algebra(p, ["1"], [1], [[[1]]], name=f"F{p}")


def corpus() -> dict:
    """The three algebras every acceptance run uses."""
    a3 = quiver_algebra({"schema": QUIVER_SCHEMA, "characteristic": 2, "vertices": ["v"],
                         "arrows": [["x", "v", "v"]], "nilpotency": 3, "name": "A3"})
    return {
        "A1": truncated_polynomial(2, 2, name="A1"),
        "A2": truncated_polynomial(3, 2, name="A2"),
        "A3": a3,
    }
