"""Exact linear algebra over prime fields F_p.

Matrices are numpy ``int64`` arrays with entries in ``[0, p)``; vectors are
columns.  Elimination always picks the first nonzero entry scanning columns
left to right and rows top to bottom, so every answer is reproducible.

Large matrices are split into the connected components of their bipartite
row/column incidence graph before elimination.  A column is a pivot of the
whole matrix exactly when it is a pivot of its component, so the split path
returns bit-identical solutions and kernel bases.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np
import scipy.sparse as sp
from scipy.sparse.csgraph import connected_components

#: column count above which elimination runs component-by-component
SPARSE_THRESHOLD = 512


class ShapeError(ValueError):
    pass


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    i = 2
    while i * i <= n:
        if n % i == 0:
            return False
        i += 1
    return True


@dataclass(frozen=True)
class FieldSpec:
    """The prime field F_p."""

    p: int

    def __post_init__(self):
        if not is_prime(int(self.p)):
            raise ValueError(f"characteristic {self.p} is not prime")

    def inv(self, a: int) -> int:
        a %= self.p
        if a == 0:
            raise ZeroDivisionError("0 has no inverse")
        return pow(int(a), self.p - 2, self.p)


@lru_cache(maxsize=None)
def _inverses(p: int) -> np.ndarray:
    table = np.zeros(p, dtype=np.int64)
    for a in range(1, p):
        table[a] = pow(a, p - 2, p)
    return table


def reduce(a, p: int) -> np.ndarray:
    return np.mod(np.asarray(a, dtype=np.int64), p)


def matmul(a, b, p: int) -> np.ndarray:
    """Product mod p.  Large products go through float64 BLAS, which is exact
    while inner dimension * (p-1)**2 stays below 2**52."""
    a = np.asarray(a, dtype=np.int64)
    b = np.asarray(b, dtype=np.int64)
    if a.ndim == 2 and a.size * (b.shape[-1] if b.ndim == 2 else 1) > 200_000 and a.shape[1] * (p - 1) ** 2 < 2 ** 52:
        af = np.mod(a, p).astype(np.float64)
        bf = np.mod(b, p).astype(np.float64)
        return np.mod((af @ bf).astype(np.int64), p)
    return np.mod(a @ b, p)


def _to_dense(a) -> np.ndarray:
    if sp.issparse(a):
        return np.asarray(a.toarray(), dtype=np.int64)
    return np.asarray(a, dtype=np.int64)


def rref(a, p: int, ncols: int | None = None):
    """Reduced row echelon form of ``a`` over F_p.

    Only the first ``ncols`` columns are used to choose pivots (the remaining
    columns ride along, which is how transforms are recorded).  Returns the
    reduced matrix and the list of pivot columns.
    """
    m = np.mod(_to_dense(a).copy(), p)
    nrows, total = m.shape
    ncols = total if ncols is None else ncols
    inv = _inverses(p)
    pivots = []
    row = 0
    for col in range(ncols):
        if row >= nrows:
            break
        nz = np.flatnonzero(m[row:, col])
        if nz.size == 0:
            continue
        r = row + int(nz[0])
        if r != row:
            m[[row, r]] = m[[r, row]]
        lead = m[row, col]
        if lead != 1:
            m[row] = (m[row] * inv[lead]) % p
        others = np.flatnonzero(m[:, col])
        others = others[others != row]
        if others.size:
            m[others] = (m[others] - np.outer(m[others, col], m[row])) % p
        pivots.append(col)
        row += 1
    return m, pivots


class _Block:
    """Elimination data for one component: rows, cols, pivots, transform."""

    __slots__ = ("rows", "cols", "pivots", "transform", "reduced")

    def __init__(self, a: np.ndarray, rows, cols, p: int):
        self.rows = np.asarray(rows, dtype=np.int64)
        self.cols = np.asarray(cols, dtype=np.int64)
        nr, nc = a.shape
        aug = np.concatenate([a, np.eye(nr, dtype=np.int64)], axis=1)
        red, piv = rref(aug, p, ncols=nc)
        self.pivots = list(piv)
        self.reduced = red[:, :nc]
        self.transform = red[:, nc:]


def largest_block(a) -> tuple[int, int]:
    """(rows, cols) of the biggest connected block of a sparse matrix."""
    coo = sp.coo_matrix(a)
    nrows, ncols = coo.shape
    if coo.nnz == 0:
        return 0, 0
    n = nrows + ncols
    graph = sp.coo_matrix((np.ones(coo.nnz), (coo.row, coo.col + nrows)), shape=(n, n))
    ncomp, labels = connected_components(graph, directed=False)
    rl = np.bincount(labels[:nrows][np.unique(coo.row)], minlength=ncomp)
    cl = np.bincount(labels[nrows:][np.unique(coo.col)], minlength=ncomp)
    j = int(np.argmax(rl * (rl + cl)))
    return int(rl[j]), int(cl[j])


class Solver:
    """Precomputed elimination of a fixed matrix, reused for many solves."""

    def __init__(self, a, p: int, threshold: int | None = None):
        threshold = SPARSE_THRESHOLD if threshold is None else threshold
        self.p = p
        self.shape = tuple(a.shape)
        nrows, ncols = self.shape
        self.blocks: list[_Block] = []
        if nrows == 0 or ncols == 0:
            self._zero_rows = np.arange(nrows)
            self._rank = 0
            self.pivots = []
            return
        if ncols <= threshold and not sp.issparse(a):
            dense = np.mod(_to_dense(a), p)
            self.blocks.append(_Block(dense, range(nrows), range(ncols), p))
            self._zero_rows = np.zeros(0, dtype=np.int64)
        else:
            self._split(a, nrows, ncols)
        self._rank = sum(len(b.pivots) for b in self.blocks)
        self.pivots = sorted(int(b.cols[c]) for b in self.blocks for c in b.pivots)

    def _split(self, a, nrows, ncols):
        p = self.p
        coo = sp.coo_matrix(a if sp.issparse(a) else np.mod(_to_dense(a), p))
        mask = np.mod(coo.data, p) != 0
        r, c = coo.row[mask], coo.col[mask]
        data = np.mod(coo.data[mask].astype(np.int64), p)
        n = nrows + ncols
        graph = sp.coo_matrix((np.ones(r.size), (r, c + nrows)), shape=(n, n))
        ncomp, labels = connected_components(graph, directed=False)
        row_lab, col_lab = labels[:nrows], labels[nrows:]
        csr = sp.csr_matrix((data, (r, c)), shape=(nrows, ncols), dtype=np.int64)
        active = set(np.unique(r).tolist())
        self._zero_rows = np.array([i for i in range(nrows) if i not in active], dtype=np.int64)
        rows_by = {}
        for i in sorted(active):
            rows_by.setdefault(row_lab[i], []).append(i)
        cols_by = {}
        for j in np.unique(c).tolist():
            cols_by.setdefault(col_lab[j], []).append(j)
        for lab in sorted(rows_by, key=lambda k: cols_by[k][0]):
            rows, cols = rows_by[lab], cols_by[lab]
            sub = csr[rows][:, cols].toarray()
            self.blocks.append(_Block(np.mod(sub, p), rows, cols, p))

    @property
    def rank(self) -> int:
        return self._rank

    def solve(self, b):
        """A particular solution of A x = b (free variables zero), or None.

        ``b`` may be a vector or a matrix of right-hand sides; with several
        right-hand sides None is returned if any one of them is inconsistent.
        """
        p = self.p
        b = np.mod(_to_dense(b), p)
        vec = b.ndim == 1
        if vec:
            b = b[:, None]
        nrows, ncols = self.shape
        if b.shape[0] != nrows:
            raise ShapeError(f"right-hand side has {b.shape[0]} rows, expected {nrows}")
        x = np.zeros((ncols, b.shape[1]), dtype=np.int64)
        if self._zero_rows.size and np.any(b[self._zero_rows]):
            return None
        for blk in self.blocks:
            t = matmul(blk.transform, b[blk.rows], p)
            k = len(blk.pivots)
            if np.any(t[k:]):
                return None
            if k:
                x[blk.cols[blk.pivots]] = t[:k]
        return x[:, 0] if vec else x

    def consistent(self, b) -> np.ndarray:
        """Boolean per right-hand-side column: does A x = b have a solution."""
        p = self.p
        b = np.mod(_to_dense(b), p)
        if b.ndim == 1:
            b = b[:, None]
        ok = np.ones(b.shape[1], dtype=bool)
        if self._zero_rows.size:
            ok &= ~np.any(b[self._zero_rows], axis=0)
        for blk in self.blocks:
            t = matmul(blk.transform, b[blk.rows], p)
            k = len(blk.pivots)
            ok &= ~np.any(t[k:], axis=0)
        return ok

    def kernel(self) -> np.ndarray:
        """Kernel basis as columns, one per free column in ascending order."""
        p = self.p
        ncols = self.shape[1]
        vecs = {}
        covered = set()
        for blk in self.blocks:
            pivset = set(blk.pivots)
            covered.update(int(c) for c in blk.cols)
            for local in range(len(blk.cols)):
                if local in pivset:
                    continue
                v = np.zeros(ncols, dtype=np.int64)
                v[blk.cols[local]] = 1
                for i, pc in enumerate(blk.pivots):
                    v[blk.cols[pc]] = (-blk.reduced[i, local]) % p
                vecs[int(blk.cols[local])] = v
        for j in range(ncols):
            if j not in covered:
                v = np.zeros(ncols, dtype=np.int64)
                v[j] = 1
                vecs[j] = v
        if not vecs:
            return np.zeros((ncols, 0), dtype=np.int64)
        return np.stack([vecs[j] for j in sorted(vecs)], axis=1)


def _check_vector(a, b):
    if b.shape[0] != a.shape[0]:
        raise ShapeError(f"matrix has {a.shape[0]} rows but vector has {b.shape[0]}")


def solve_linear(a, b, p: int):
    """Some x with a @ x = b over F_p, or None if the system is inconsistent."""
    a = np.asarray(a) if not sp.issparse(a) else a
    b = np.asarray(b, dtype=np.int64)
    if a.ndim != 2:
        raise ShapeError("expected a matrix")
    _check_vector(a, b)
    return Solver(a, p).solve(b)


def rank(a, p: int) -> int:
    return Solver(a, p).rank


def kernel_basis(a, p: int) -> np.ndarray:
    """Columns spanning {x : a @ x = 0}; there are cols(a) - rank(a) of them."""
    return Solver(a, p).kernel()


def image_basis(a, p: int) -> np.ndarray:
    """The pivot columns of ``a``; they form a basis of its column space."""
    s = Solver(a, p)
    a = _to_dense(a)
    return np.mod(a[:, s.pivots], p) if s.pivots else np.zeros((a.shape[0], 0), dtype=np.int64)


def coset_membership(span, v, p: int):
    """Coefficients c with sum c_i span_i = v, or None.

    ``span`` is a list of vectors or a matrix whose columns are the vectors.
    """
    v = np.asarray(v, dtype=np.int64)
    if isinstance(span, (list, tuple)):
        if not span:
            return np.zeros(0, dtype=np.int64) if not np.any(np.mod(v, p)) else None
        vecs = [np.asarray(s, dtype=np.int64) for s in span]
        if any(s.shape != v.shape for s in vecs):
            raise ShapeError("span vectors and target differ in dimension")
        mat = np.stack(vecs, axis=1)
    else:
        mat = np.asarray(span, dtype=np.int64)
        if mat.shape[0] != v.shape[0]:
            raise ShapeError("span vectors and target differ in dimension")
        if mat.shape[1] == 0:
            return np.zeros(0, dtype=np.int64) if not np.any(np.mod(v, p)) else None
    return Solver(mat, p).solve(v)


def quotient_map(sub, n: int, p: int):
    """Projection F_p^n -> F_p^n / span(sub) and a linear section.

    Returns ``(Q, S)`` with ``Q @ sub == 0``, ``Q @ S == I`` and ``Q``
    surjective.  Quotient coordinates are the non-pivot coordinates of the
    row-reduced subspace basis.
    """
    sub = np.asarray(sub, dtype=np.int64).reshape(n, -1)
    if sub.shape[1] == 0:
        eye = np.eye(n, dtype=np.int64)
        return eye, eye.copy()
    red, piv = rref(sub.T, p)
    red = red[: len(piv)]
    nonpiv = [j for j in range(n) if j not in set(piv)]
    sel = np.zeros((len(piv), n), dtype=np.int64)
    for i, c in enumerate(piv):
        sel[i, c] = 1
    full = np.mod(np.eye(n, dtype=np.int64) - red.T @ sel, p)
    q = full[nonpiv]
    s = np.zeros((n, len(nonpiv)), dtype=np.int64)
    for j, c in enumerate(nonpiv):
        s[c, j] = 1
    return q, s


def left_inverse(a, p: int) -> np.ndarray:
    """L with L @ a == I for a matrix of full column rank."""
    a = np.asarray(a, dtype=np.int64)
    n, k = a.shape
    red, piv = rref(np.concatenate([a, np.eye(n, dtype=np.int64)], axis=1), p, ncols=k)
    if len(piv) != k:
        raise ValueError("matrix does not have full column rank")
    return red[:k, k:]


def is_injective(a, p: int) -> bool:
    a = np.asarray(a)
    return Solver(a, p).rank == a.shape[1]


def is_surjective(a, p: int) -> bool:
    a = np.asarray(a)
    return Solver(a, p).rank == a.shape[0]
