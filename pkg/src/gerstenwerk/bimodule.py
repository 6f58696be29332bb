"""Bimodules over a finite-dimensional algebra and the abelian operations on them.

A bimodule is a vector space with matrices for left and right multiplication
by every basis element of the algebra.  Free bimodules A (x) V (x) A keep their
actions implicit: coordinates are laid out as ``(a, generator, b)`` and the
action matrices are only built on request.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from .algebra import AlgebraPresentation
from .errors import ValidationError
from .linalg import (
    Solver,
    image_basis,
    kernel_basis,
    left_inverse,
    matmul,
    quotient_map,
)


class BimoduleError(ValidationError):
    pass


class Bimodule:
    """Explicit bimodule: ``left[a]``/``right[a]`` act on column vectors."""

    def __init__(self, algebra: AlgebraPresentation, left, right, name: str = ""):
        self.algebra = algebra
        self.left = np.mod(np.asarray(left, dtype=np.int64), algebra.p)
        self.right = np.mod(np.asarray(right, dtype=np.int64), algebra.p)
        self.dim = int(self.left.shape[1]) if self.left.ndim == 3 else 0
        self.name = name

    def __repr__(self):
        return f"{type(self).__name__}({self.name or '?'}, dim={self.dim})"

    @property
    def p(self) -> int:
        return self.algebra.p

    def left_matrix(self, a: int) -> np.ndarray:
        return self.left[a]

    def right_matrix(self, b: int) -> np.ndarray:
        return self.right[b]

    def lact(self, a: int, v) -> np.ndarray:
        return matmul(self.left_matrix(a), v, self.p)

    def ract(self, b: int, v) -> np.ndarray:
        return matmul(self.right_matrix(b), v, self.p)

    def lact_vector(self, u, v) -> np.ndarray:
        """Left multiply ``v`` by the algebra element with coordinates ``u``."""
        out = np.zeros_like(np.asarray(v, dtype=np.int64))
        for a in np.flatnonzero(u):
            out = out + int(u[a]) * self.lact(int(a), v)
        return np.mod(out, self.p)

    def ract_vector(self, u, v) -> np.ndarray:
        out = np.zeros_like(np.asarray(v, dtype=np.int64))
        for b in np.flatnonzero(u):
            out = out + int(u[b]) * self.ract(int(b), v)
        return np.mod(out, self.p)

    def check(self):
        """Raise BimoduleError unless the actions form an A-bimodule."""
        alg, p, n = self.algebra, self.p, self.dim
        eye = np.eye(n, dtype=np.int64)
        if np.any(self.lact_vector(alg.unit, eye) != eye) or np.any(self.ract_vector(alg.unit, eye) != eye):
            raise BimoduleError("unit does not act as the identity")
        d = alg.dim
        for a in range(d):
            la = self.left_matrix(a)
            ra = self.right_matrix(a)
            for b in range(d):
                prod = alg.mult[a, b]
                if np.any(matmul(la, self.left_matrix(b), p) != self.lact_vector(prod, eye)):
                    raise BimoduleError(f"left action fails on ({a}, {b})")
                if np.any(matmul(self.right_matrix(b), ra, p) != self.ract_vector(prod, eye)):
                    raise BimoduleError(f"right action fails on ({a}, {b})")
                if np.any(matmul(la, self.right_matrix(b), p) != matmul(self.right_matrix(b), la, p)):
                    raise BimoduleError(f"left and right actions do not commute on ({a}, {b})")
        return self


class FreeBimodule(Bimodule):
    """A (x) k[generators] (x) A with coordinates ``(a, g, b)``."""

    def __init__(self, algebra: AlgebraPresentation, generators: Sequence, name: str = ""):
        self.algebra = algebra
        self.generators = list(generators)
        self.rank = len(self.generators)
        d = algebra.dim
        self.dim = d * self.rank * d
        self.name = name
        self._mats = {}

    @property
    def shape(self):
        return (self.algebra.dim, self.rank, self.algebra.dim)

    def left_matrix(self, a: int) -> np.ndarray:
        key = ("l", a)
        if key not in self._mats:
            inner = np.eye(self.rank * self.algebra.dim, dtype=np.int64)
            self._mats[key] = np.kron(self.algebra.lmul[a], inner)
        return self._mats[key]

    def right_matrix(self, b: int) -> np.ndarray:
        key = ("r", b)
        if key not in self._mats:
            inner = np.eye(self.algebra.dim * self.rank, dtype=np.int64)
            self._mats[key] = np.kron(inner, self.algebra.rmul[b])
        return self._mats[key]

    @property
    def left(self):
        return np.stack([self.left_matrix(a) for a in range(self.algebra.dim)])

    @property
    def right(self):
        return np.stack([self.right_matrix(a) for a in range(self.algebra.dim)])

    def lact(self, a, v):
        v = np.asarray(v, dtype=np.int64)
        d = self.algebra.dim
        t = v.reshape(d, -1)
        return np.mod(self.algebra.lmul[a] @ t, self.p).reshape(v.shape)

    def ract(self, b, v):
        v = np.asarray(v, dtype=np.int64)
        d = self.algebra.dim
        tail = v.shape[1:]
        t = v.reshape((self.dim // d, d) + tail)
        out = np.einsum("cb,nb...->nc...", self.algebra.rmul[b], t)
        return np.mod(out, self.p).reshape(v.shape)

    def index(self, a: int, g: int, b: int) -> int:
        d = self.algebra.dim
        return (a * self.rank + g) * d + b

    def generator_vector(self, g: int) -> np.ndarray:
        """Coordinates of 1 (x) g (x) 1."""
        u = self.algebra.unit
        v = np.zeros(self.shape, dtype=np.int64)
        v[:, g, :] = np.outer(u, u)
        return np.mod(v.reshape(-1), self.p)


def unit_bimodule(algebra: AlgebraPresentation) -> Bimodule:
    """The algebra as a bimodule over itself (the monoidal unit)."""
    m = Bimodule(algebra, algebra.lmul, algebra.rmul, name="1")
    m.is_unit = True
    return m


def zero_bimodule(algebra: AlgebraPresentation) -> Bimodule:
    d = algebra.dim
    return Bimodule(algebra, np.zeros((d, 0, 0)), np.zeros((d, 0, 0)), name="0")


class BimoduleMap:
    """A bimodule homomorphism given by its matrix (target.dim x source.dim).

    Maps out of a free bimodule may instead be given by generator images; the
    full matrix is then assembled on first use.
    """

    def __init__(self, source: Bimodule, target: Bimodule, matrix=None, images=None):
        self.source = source
        self.target = target
        p = source.algebra.p
        if matrix is None and images is None:
            matrix = np.zeros((target.dim, source.dim), dtype=np.int64)
        if matrix is not None:
            matrix = np.mod(np.asarray(matrix, dtype=np.int64), p).reshape(target.dim, source.dim)
        if images is not None:
            if not isinstance(source, FreeBimodule):
                raise BimoduleError("generator images need a free source")
            images = np.mod(np.asarray(images, dtype=np.int64), p).reshape(target.dim, source.rank)
        self._matrix = matrix
        self._images = images

    def __repr__(self):
        return f"BimoduleMap({self.source!r} -> {self.target!r})"

    @property
    def p(self):
        return self.source.algebra.p

    @property
    def images(self) -> np.ndarray:
        """Images of the free generators, as columns."""
        if self._images is None:
            src = self.source
            if src.rank:
                gv = np.stack([src.generator_vector(g) for g in range(src.rank)], axis=1)
                self._images = matmul(self._matrix, gv, self.p)
            else:
                self._images = np.zeros((self.target.dim, 0), dtype=np.int64)
        return self._images

    @property
    def matrix(self) -> np.ndarray:
        if self._matrix is None:
            self._matrix = expand_free(self.source, self.target, self._images)
        return self._matrix

    def __call__(self, v):
        return matmul(self.matrix, v, self.p)

    def __matmul__(self, other: "BimoduleMap") -> "BimoduleMap":
        if other.target.dim != self.source.dim:
            raise BimoduleError("composition of incompatible maps")
        if other._matrix is None and isinstance(other.source, FreeBimodule):
            return BimoduleMap(other.source, self.target, images=self(other.images))
        return BimoduleMap(other.source, self.target, matmul(self.matrix, other.matrix, self.p))

    def _same(self, other):
        if self.source.dim != other.source.dim or self.target.dim != other.target.dim:
            raise BimoduleError("maps have different shapes")

    def __add__(self, other):
        self._same(other)
        if self._matrix is None and other._matrix is None:
            return BimoduleMap(self.source, self.target, images=self._images + other._images)
        return BimoduleMap(self.source, self.target, self.matrix + other.matrix)

    def __neg__(self):
        return self.scale(-1)

    def __sub__(self, other):
        return self + (-other)

    def scale(self, c: int):
        if self._matrix is None:
            return BimoduleMap(self.source, self.target, images=c * self._images)
        return BimoduleMap(self.source, self.target, c * self.matrix)

    def is_zero(self) -> bool:
        if self._matrix is None:
            return not np.any(self._images)
        return not np.any(self._matrix)

    def equals(self, other) -> bool:
        return (self - other).is_zero()

    def is_bimodule_map(self) -> bool:
        if self._matrix is None:
            return True
        m, p = self.matrix, self.p
        for a in range(self.source.algebra.dim):
            if np.any(matmul(self.target.left_matrix(a), m, p) != matmul(m, self.source.left_matrix(a), p)):
                return False
            if np.any(matmul(self.target.right_matrix(a), m, p) != matmul(m, self.source.right_matrix(a), p)):
                return False
        return True

    @staticmethod
    def zero(source, target):
        return BimoduleMap(source, target)

    @staticmethod
    def identity(module):
        return BimoduleMap(module, module, np.eye(module.dim, dtype=np.int64))


def expand_free(source: FreeBimodule, target: Bimodule, images) -> np.ndarray:
    """Matrix of the bimodule map sending generator g to ``images[:, g]``."""
    d = source.algebra.dim
    out = np.zeros((target.dim, d, source.rank, d), dtype=np.int64)
    if source.rank == 0 or target.dim == 0:
        return out.reshape(target.dim, source.dim)
    for b in range(d):
        right = target.ract(b, images)
        for a in range(d):
            out[:, a, :, b] = target.lact(a, right)
    return np.mod(out.reshape(target.dim, source.dim), source.algebra.p)


# sub- and quotient objects ------------------------------------------------


def submodule(module: Bimodule, basis) -> tuple[Bimodule, BimoduleMap]:
    """The sub-bimodule spanned by the columns of ``basis`` (assumed stable)."""
    alg, p = module.algebra, module.p
    basis = np.asarray(basis, dtype=np.int64).reshape(module.dim, -1)
    k = basis.shape[1]
    if k == 0:
        sub = zero_bimodule(alg)
        return sub, BimoduleMap(sub, module)
    linv = left_inverse(basis, p)
    left = np.stack([matmul(linv, module.lact(a, basis), p) for a in range(alg.dim)])
    right = np.stack([matmul(linv, module.ract(a, basis), p) for a in range(alg.dim)])
    sub = Bimodule(alg, left, right)
    return sub, BimoduleMap(sub, module, basis)


def quotient(module: Bimodule, relations) -> tuple[Bimodule, BimoduleMap, np.ndarray]:
    """module / span(relations): returns the quotient, projection and a k-linear section."""
    alg, p = module.algebra, module.p
    q, s = quotient_map(relations, module.dim, p)
    left = np.stack([matmul(q, module.lact(a, s), p) for a in range(alg.dim)]) if q.shape[0] else np.zeros((alg.dim, 0, 0))
    right = np.stack([matmul(q, module.ract(a, s), p) for a in range(alg.dim)]) if q.shape[0] else np.zeros((alg.dim, 0, 0))
    quo = Bimodule(alg, left, right)
    return quo, BimoduleMap(module, quo, q), s


def kernel_cokernel(f: BimoduleMap):
    """(kernel, inclusion, cokernel, projection) of a bimodule map."""
    p = f.p
    kb = kernel_basis(f.matrix, p)
    ker, incl = submodule(f.source, kb)
    img = image_basis(f.matrix, p)
    coker, proj, _ = quotient(f.target, img)
    return ker, incl, coker, proj


def image_factorization(f: BimoduleMap):
    """f = incl @ surj through the image of f."""
    p = f.p
    basis = image_basis(f.matrix, p)
    img, incl = submodule(f.target, basis)
    if img.dim == 0:
        return img, BimoduleMap(f.source, img), incl
    surj = BimoduleMap(f.source, img, matmul(left_inverse(basis, p), f.matrix, p))
    return img, surj, incl


# direct sums ----------------------------------------------------------------


class DirectSum:
    """A direct sum with its injections and projections.

    ``index[t]`` lists the coordinates of summand t inside the sum; the
    injection and projection matrices are built only when asked for.
    """

    def __init__(self, module: Bimodule, summands: list, index: list):
        self.module = module
        self.summands = list(summands)
        self.index = [np.asarray(ix, dtype=np.int64) for ix in index]
        self._inj = None
        self._proj = None

    def _embedding(self, t):
        e = np.zeros((self.module.dim, self.summands[t].dim), dtype=np.int64)
        e[self.index[t], np.arange(self.summands[t].dim)] = 1
        return e

    @property
    def injections(self) -> list:
        if self._inj is None:
            self._inj = [BimoduleMap(m, self.module, self._embedding(t)) for t, m in enumerate(self.summands)]
        return self._inj

    @property
    def projections(self) -> list:
        if self._proj is None:
            self._proj = [BimoduleMap(self.module, m, self._embedding(t).T) for t, m in enumerate(self.summands)]
        return self._proj

    def column(self, *maps: BimoduleMap) -> BimoduleMap:
        """The map X -> (+) M_i with components ``maps``."""
        mat = np.zeros((self.module.dim, maps[0].source.dim), dtype=np.int64)
        for ix, m in zip(self.index, maps):
            mat[ix] += m.matrix
        return BimoduleMap(maps[0].source, self.module, mat)

    def row(self, *maps: BimoduleMap) -> BimoduleMap:
        """The map (+) M_i -> Y with components ``maps``."""
        mat = np.zeros((maps[0].target.dim, self.module.dim), dtype=np.int64)
        for ix, m in zip(self.index, maps):
            mat[:, ix] += m.matrix
        return BimoduleMap(self.module, maps[0].target, mat)


def direct_sum(*modules: Bimodule) -> DirectSum:
    """Direct sum; a sum of free bimodules is again free on the joined generators."""
    alg = modules[0].algebra
    d = alg.dim
    if all(isinstance(m, FreeBimodule) for m in modules):
        gens = [g for m in modules for g in m.generators]
        total = FreeBimodule(alg, gens, name="(+)".join(m.name or "?" for m in modules))
        G = total.rank
        index, off = [], 0
        for m in modules:
            a, g, b = np.meshgrid(np.arange(d), np.arange(m.rank), np.arange(d), indexing="ij")
            index.append(((a * G + off + g) * d + b).reshape(-1))
            off += m.rank
        return DirectSum(total, modules, index)
    n = sum(m.dim for m in modules)
    left = np.zeros((d, n, n), dtype=np.int64)
    right = np.zeros((d, n, n), dtype=np.int64)
    index, off = [], 0
    for m in modules:
        for a in range(d):
            left[a, off:off + m.dim, off:off + m.dim] = m.left_matrix(a)
            right[a, off:off + m.dim, off:off + m.dim] = m.right_matrix(a)
        index.append(np.arange(off, off + m.dim))
        off += m.dim
    total = Bimodule(alg, left, right, name="(+)".join(m.name or "?" for m in modules))
    return DirectSum(total, modules, index)


def block_map(src: DirectSum, tgt: DirectSum, blocks) -> BimoduleMap:
    """Map between direct sums from a nested list ``blocks[i][j]``: src_j -> tgt_i.

    Entries may be None (zero), a BimoduleMap, or an integer c meaning c times
    the identity (only between equal summands).
    """
    p = src.module.p
    mat = np.zeros((tgt.module.dim, src.module.dim), dtype=np.int64)
    for i, ti in enumerate(tgt.index):
        for j, sj in enumerate(src.index):
            b = blocks[i][j]
            if isinstance(b, BimoduleMap):
                mat[np.ix_(ti, sj)] += b.matrix
            elif b is not None and b != 0:
                mat[ti, sj] += int(b)
    return BimoduleMap(src.module, tgt.module, np.mod(mat, p))


# pullbacks and pushouts -------------------------------------------------------


@dataclass
class Pullback:
    """K = {(y', y) : f(y') = pi(y)} with projections to Y' and Y."""

    module: Bimodule
    to_first: BimoduleMap   # pi' : K -> Y'
    to_second: BimoduleMap  # f'  : K -> Y
    inclusion: BimoduleMap  # K -> Y' (+) Y
    pi: BimoduleMap
    f: BimoduleMap

    def mediate(self, a: BimoduleMap, b: BimoduleMap) -> BimoduleMap:
        """Unique W -> K with to_first o u = a and to_second o u = b."""
        p = a.p
        if not matmul(self.f.matrix, a.matrix, p).tolist() == matmul(self.pi.matrix, b.matrix, p).tolist():
            raise BimoduleError("cone does not commute")
        if self.module.dim == 0:
            return BimoduleMap(a.source, self.module)
        stacked = np.concatenate([a.matrix, b.matrix], axis=0)
        x = Solver(self.inclusion.matrix, p).solve(stacked)
        if x is None:
            raise BimoduleError("cone does not factor through the pullback")
        return BimoduleMap(a.source, self.module, x)


def pullback(pi: BimoduleMap, f: BimoduleMap) -> Pullback:
    if pi.target.dim != f.target.dim:
        raise BimoduleError("pullback needs maps with a common target")
    ds = direct_sum(f.source, pi.source)
    diff = ds.row(f, -pi)
    ker, incl = submodule(ds.module, kernel_basis(diff.matrix, pi.p))
    return Pullback(ker, ds.projections[0] @ incl, ds.projections[1] @ incl, incl, pi, f)


@dataclass
class Pushout:
    """R = (Y (+) Y') / {(iota x, -g x)} with maps from Y and Y'."""

    module: Bimodule
    from_first: BimoduleMap   # g'     : Y  -> R
    from_second: BimoduleMap  # iota'  : Y' -> R
    section: np.ndarray
    iota: BimoduleMap
    g: BimoduleMap

    def mediate(self, u: BimoduleMap, v: BimoduleMap) -> BimoduleMap:
        """Unique R -> T with u = m o from_first and v = m o from_second."""
        p = u.p
        if np.any(matmul(u.matrix, self.iota.matrix, p) != matmul(v.matrix, self.g.matrix, p)):
            raise BimoduleError("cocone does not commute")
        row = np.concatenate([u.matrix, v.matrix], axis=1)
        return BimoduleMap(self.module, u.target, matmul(row, self.section, p))


def pushout(iota: BimoduleMap, g: BimoduleMap) -> Pushout:
    if iota.source.dim != g.source.dim:
        raise BimoduleError("pushout needs maps with a common source")
    ds = direct_sum(iota.target, g.target)
    rel = ds.column(iota, -g)
    quo, proj, section = quotient(ds.module, image_basis(rel.matrix, iota.p))
    return Pushout(quo, proj @ ds.injections[0], proj @ ds.injections[1], section, iota, g)


def is_isomorphism(f: BimoduleMap) -> bool:
    from .linalg import rank
    return f.source.dim == f.target.dim and (f.source.dim == 0 or rank(f.matrix, f.p) == f.source.dim)


def inverse(f: BimoduleMap) -> BimoduleMap:
    if not is_isomorphism(f):
        raise BimoduleError("map is not invertible")
    return BimoduleMap(f.target, f.source, left_inverse(f.matrix, f.p))


# tensor products over the algebra ---------------------------------------------


@dataclass
class TensorProduct:
    """M (x)_A N with the balanced pairing and a section of it.

    ``pair(U, V)`` sends column pairs to coordinates of u (x) v; the section
    ``(Us, Vs)`` satisfies ``pair(Us, Vs) == I``.
    """

    module: Bimodule
    left: Bimodule
    right: Bimodule
    pair: Callable
    section: tuple

    @property
    def projection(self) -> np.ndarray:
        """Matrix of the balanced projection M (x)_k N -> M (x)_A N."""
        m, n = self.left.dim, self.right.dim
        eye_m = np.eye(m, dtype=np.int64)
        eye_n = np.eye(n, dtype=np.int64)
        u = np.repeat(eye_m, n, axis=1)
        v = np.tile(eye_n, (1, m))
        return self.pair(u, v)


def _khatri_rao(u, v):
    return np.einsum("ik,jk->ijk", u, v).reshape(u.shape[0] * v.shape[0], -1)


def tensor_over_algebra(m: Bimodule, n: Bimodule) -> TensorProduct:
    if m.algebra is not n.algebra:
        raise BimoduleError("tensor product over different algebras")
    alg, p = m.algebra, m.p
    d = alg.dim
    if isinstance(m, FreeBimodule) and isinstance(n, FreeBimodule):
        return _tensor_free(m, n)
    mn = m.dim * n.dim
    if mn == 0:
        z = zero_bimodule(alg)
        return TensorProduct(z, m, n, lambda u, v: np.zeros((0, np.asarray(u).shape[1]), dtype=np.int64),
                             (np.zeros((m.dim, 0), dtype=np.int64), np.zeros((n.dim, 0), dtype=np.int64)))
    eye_m = np.eye(m.dim, dtype=np.int64)
    eye_n = np.eye(n.dim, dtype=np.int64)
    rels = [np.kron(m.right_matrix(a), eye_n) - np.kron(eye_m, n.left_matrix(a)) for a in range(d)]
    rel = np.mod(np.concatenate(rels, axis=1), p)
    q, s = quotient_map(image_basis(rel, p), mn, p)
    left = np.stack([matmul(q, matmul(np.kron(m.left_matrix(a), eye_n), s, p), p) for a in range(d)])
    right = np.stack([matmul(q, matmul(np.kron(eye_m, n.right_matrix(a)), s, p), p) for a in range(d)])
    mod = Bimodule(alg, left, right, name=f"{m.name}(x){n.name}")
    if q.shape[0] == 0:
        mod = zero_bimodule(alg)

    def pair(u, v):
        return matmul(q, _khatri_rao(np.asarray(u), np.asarray(v)), p)

    idx = [int(np.flatnonzero(s[:, j])[0]) for j in range(s.shape[1])]
    us = np.zeros((m.dim, len(idx)), dtype=np.int64)
    vs = np.zeros((n.dim, len(idx)), dtype=np.int64)
    for j, k in enumerate(idx):
        us[k // n.dim, j] = 1
        vs[k % n.dim, j] = 1
    return TensorProduct(mod, m, n, pair, (us, vs))


def _tensor_free(m: FreeBimodule, n: FreeBimodule) -> TensorProduct:
    alg, p = m.algebra, m.p
    d = alg.dim
    gens = [(g, c, h) for g in m.generators for c in range(d) for h in n.generators]
    mod = FreeBimodule(alg, gens, name=f"{m.name}(x){n.name}")
    G, H = m.rank, n.rank

    def pair(u, v):
        u = np.asarray(u, dtype=np.int64)
        v = np.asarray(v, dtype=np.int64)
        k = u.shape[1]
        uu = u.reshape(d, G, d, k)
        vv = v.reshape(d, H, d, k)
        out = np.einsum("agxk,yhbk,xyc->agchbk", uu, vv, alg.mult, optimize=True)
        return np.mod(out.reshape(mod.dim, k), p)

    us = np.zeros((d, G, d, d, G * d * H, d), dtype=np.int64)
    vs = np.zeros((d, H, d, d, G * d * H, d), dtype=np.int64)
    for a in range(d):
        for g in range(G):
            for c in range(d):
                for h in range(H):
                    for b in range(d):
                        gen = (g * d + c) * H + h
                        us[a, g, c, a, gen, b] = 1
                        vs[:, h, b, a, gen, b] = alg.unit
    us = us.reshape(m.dim, mod.dim)
    vs = vs.reshape(n.dim, mod.dim)
    return TensorProduct(mod, m, n, pair, (us, vs))


def tensor_maps(f: BimoduleMap, g: BimoduleMap, src: TensorProduct, tgt: TensorProduct, sign: int = 1) -> BimoduleMap:
    """f (x)_A g between the given tensor products."""
    us, vs = src.section
    if src.module.dim == 0 or tgt.module.dim == 0:
        return BimoduleMap(src.module, tgt.module)
    cols = tgt.pair(f(us), g(vs))
    return BimoduleMap(src.module, tgt.module, sign * cols)


def left_unitor(t: TensorProduct) -> BimoduleMap:
    """1 (x)_A N -> N, a (x) n -> a n."""
    us, vs = t.section
    n = t.right
    cols = [n.lact_vector(us[:, j], vs[:, j]) for j in range(us.shape[1])]
    mat = np.stack(cols, axis=1) if cols else np.zeros((n.dim, 0), dtype=np.int64)
    return BimoduleMap(t.module, n, mat)


def right_unitor(t: TensorProduct) -> BimoduleMap:
    """M (x)_A 1 -> M, m (x) a -> m a."""
    us, vs = t.section
    m = t.left
    cols = [m.ract_vector(vs[:, j], us[:, j]) for j in range(us.shape[1])]
    mat = np.stack(cols, axis=1) if cols else np.zeros((m.dim, 0), dtype=np.int64)
    return BimoduleMap(t.module, m, mat)
