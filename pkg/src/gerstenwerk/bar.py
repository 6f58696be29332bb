"""The normalized bar resolution of an algebra as a bimodule, its diagonal and
the tensor-power exactness check.

Generators of P_n are words [a_1|...|a_n] in the reduced basis (all basis
elements except the unit-supporting one).  Cochains P_n -> A are stored by
their values on words: an array of shape (G_n, d).
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field

import numpy as np
import scipy.sparse as sp

from .algebra import AlgebraPresentation
from .bimodule import BimoduleMap, FreeBimodule, left_unitor, right_unitor, unit_bimodule
from .chain import (
    Complex,
    GradedMorphism,
    ResolutionData,
    TensorComplex,
    boundary,
    tensor_complexes,
    tensor_morphisms,
)
from .errors import TruncationError, ValidationError
from .linalg import Solver, largest_block, matmul, rank


def _sign(k: int) -> int:
    return -1 if k % 2 else 1


class BarResolution:
    """Degrees 0..N of the normalized bar resolution of A over A (x) A^op."""

    def __init__(self, algebra: AlgebraPresentation, N: int, images: dict | None = None):
        """``images`` optionally supplies the differential images per degree (from a cache)."""
        if N < 1:
            raise ValidationError("truncation degree must be at least 1")
        self.algebra = algebra
        self.N = N
        self.p = algebra.p
        self.letters = list(algebra.reduced_indices)
        self.r = len(self.letters)
        # reduced product table: red[q, q', s] = coefficient of letter s in letter_q * letter_q'
        m = algebra.mult[np.ix_(self.letters, self.letters)]
        self.red_mult = np.mod(np.einsum("qtc,sc->qts", m, algebra.reduction), self.p)
        self.modules = {}
        diffs = {}
        for n in range(N + 1):
            words = self.words(n)
            self.modules[n] = FreeBimodule(algebra, words, name=f"P{n}")
            if self.r == 0 and n > 0:
                self.modules[n] = FreeBimodule(algebra, [], name=f"P{n}")
        for n in range(1, N + 1):
            x = images[n] if images is not None else self._diff_images(n)
            diffs[n - 1] = BimoduleMap(self.modules[n], self.modules[n - 1], images=x)
        self.complex = Complex(algebra, self.modules, diffs, name="P")
        unit = unit_bimodule(algebra)
        self.unit = unit
        self.mu = BimoduleMap(self.modules[0], unit, images=algebra.unit.reshape(-1, 1))
        self.resolution = ResolutionData(self.complex, self.mu, unit)

    def __repr__(self):
        return f"BarResolution({self.algebra.name or '?'}, N={self.N})"

    def rank(self, n: int) -> int:
        return self.r ** n if (n >= 0 and (self.r or n == 0)) else 0

    def words(self, n: int) -> list:
        """Words of length n as tuples of algebra basis indices, lexicographic."""
        if n > 0 and self.r == 0:
            return []
        return [tuple(w) for w in itertools.product(self.letters, repeat=n)]

    def word_index(self, word) -> int:
        idx = 0
        pos = {a: q for q, a in enumerate(self.letters)}
        for a in word:
            idx = idx * self.r + pos[a]
        return idx

    def module(self, n: int) -> FreeBimodule:
        if n < 0:
            raise ValidationError("negative degree")
        if n > self.N:
            raise TruncationError(f"degree {n} is outside the window [0, {self.N}]; increase N", n)
        return self.modules[n]

    def _diff_images(self, n: int) -> np.ndarray:
        """Images of the generators of P_n in P_{n-1}, shape (dim P_{n-1}, G_n)."""
        A, p, r = self.algebra, self.p, self.r
        d = A.dim
        u = A.unit
        Gm = self.rank(n - 1)
        G = self.rank(n)
        out = np.zeros((d, Gm, d, G), dtype=np.int64)
        if G == 0:
            return out.reshape(d * Gm * d, 0)
        letters = np.array(self.letters)
        digits = np.array(list(itertools.product(range(r), repeat=n)), dtype=np.int64).reshape(G, n)
        place = r ** np.arange(n - 2, -1, -1) if n > 1 else np.zeros(0, dtype=np.int64)
        cols = np.arange(G)
        # a_1 [a_2 | ... | a_n]
        tail = digits[:, 1:] @ place if n > 1 else np.zeros(G, dtype=np.int64)
        for b in range(d):
            if u[b]:
                np.add.at(out, (letters[digits[:, 0]], tail, b, cols), u[b])
        # (-1)^n [a_1 | ... | a_{n-1}] a_n
        head = digits[:, :-1] @ place if n > 1 else np.zeros(G, dtype=np.int64)
        for a in range(d):
            if u[a]:
                np.add.at(out, (a, head, letters[digits[:, -1]], cols), _sign(n) * u[a])
        # sum_k (-1)^k [ ... | a_k a_{k+1} | ... ]
        for k in range(1, n):
            prod = self.red_mult[digits[:, k - 1], digits[:, k]]  # (G, r)
            for s in range(r):
                merged = np.concatenate([digits[:, :k - 1], np.full((G, 1), s), digits[:, k + 1:]], axis=1)
                idx = merged @ place if n > 1 else np.zeros(G, dtype=np.int64)
                coef = _sign(k) * prod[:, s]
                for a in range(d):
                    for b in range(d):
                        c = u[a] * u[b]
                        if c:
                            np.add.at(out, (a, idx, b, cols), c * coef)
        return np.mod(out.reshape(-1, G), p)

    def diff(self, n: int) -> BimoduleMap:
        """d_{n-1} : P_n -> P_{n-1}."""
        return self.complex.d(n - 1)

    def check(self, top: int | None = None):
        self.complex.check()
        self.resolution.check(top)
        return self

    # cochains ------------------------------------------------------------

    def apply(self, images, n_src: int, n_tgt: int, elements) -> np.ndarray:
        """Apply the bimodule map P_{n_src} -> P_{n_tgt} with the given generator
        images to elements of P_{n_src} (columns)."""
        A = self.algebra
        d = A.dim
        Gs, Gt = self.rank(n_src), self.rank(n_tgt)
        X = np.asarray(elements, dtype=np.int64)
        k = X.shape[1]
        if k == 0 or Gs == 0 or Gt == 0:
            return np.zeros((d * Gt * d, k), dtype=np.int64)
        # float64 keeps every partial sum below 2^52 at these sizes, so it is exact
        X = X.reshape(d, Gs, d, k).astype(np.float64)
        M = np.asarray(images, dtype=np.int64).reshape(d, Gt, d, Gs).astype(np.float64)
        mult = A.mult.astype(np.float64)
        Y = np.tensordot(X, M, axes=([1], [3])) % self.p          # a b t x h y
        Z = np.tensordot(Y, mult, axes=([0, 3], [0, 1])) % self.p  # b t h y c
        W = np.tensordot(Z, mult, axes=([3, 0], [0, 1])) % self.p  # t h c e
        out = W.transpose(2, 1, 3, 0).astype(np.int64)
        return out.reshape(-1, k)

    def cochain_map(self, n: int, values) -> BimoduleMap:
        """The bimodule map P_n -> A with the given word values (G_n, d)."""
        values = np.asarray(values, dtype=np.int64).reshape(self.rank(n), self.algebra.dim)
        return BimoduleMap(self.module(n), self.unit, images=values.T)

    def cochain_morphism(self, n: int, values, target: Complex | None = None) -> GradedMorphism:
        """A degree n graded morphism P -> 1 (unit complex) with one component."""
        from .chain import unit_complex
        tgt = target if target is not None else unit_complex(self.algebra)
        return GradedMorphism(self.complex, tgt, n, {n: BimoduleMap(self.module(n), tgt.obj(0), images=np.asarray(values).reshape(self.rank(n), -1).T)})

    def dual_differential(self, n: int) -> np.ndarray:
        """Matrix of f |-> f o d_n on word-value coordinates, (G_{n+1} d) x (G_n d).

        Cochain values are flattened as index g * d + c.
        """
        A, p = self.algebra, self.p
        d = A.dim
        G, Gp = self.rank(n), self.rank(n + 1)
        if G == 0 or Gp == 0:
            return np.zeros((Gp * d, G * d), dtype=np.int64)
        X = self.diff(n + 1).images.reshape(d, G, d, Gp)
        # (f o d)(w')[c'] = sum X[a,g,b,w'] (a f(g) b)[c'] = sum X[a,g,b,w'] f[g,c] mult3[a,c,b,c']
        M = np.einsum("agbw,acbz->wzgc", X, A.mult3, optimize=True)
        return np.mod(M.reshape(Gp * d, G * d), p)

    def compose_cochain(self, values, n: int, images, i: int) -> np.ndarray:
        """Word values of f o phi where phi : P_i -> P_n is given by generator images."""
        A = self.algebra
        d = A.dim
        G, Gi = self.rank(n), self.rank(i)
        f = np.asarray(values, dtype=np.int64).reshape(G, d)
        X = np.asarray(images, dtype=np.int64).reshape(d, G, d, Gi)
        out = np.einsum("agbw,gc,acbz->wz", X, f, A.mult3, optimize=True)
        return np.mod(out, self.p)


# diagonals ----------------------------------------------------------------------


class Diagonal:
    """A morphism of resolutions P -> P (x) P stored blockwise on generators.

    ``kind == 'aw'`` is the Alexander-Whitney diagonal, evaluated by formula;
    otherwise ``blocks[i][j]`` holds the images of the generators of P_i in
    P_j (x)_A P_{i-j} (coordinates of the free module on (g, c, h)).
    """

    def __init__(self, bar: BarResolution, kind: str = "aw", blocks: dict | None = None, top: int | None = None):
        self.bar = bar
        self.kind = kind
        self.blocks = blocks or {}
        self.top = bar.N if top is None else top
        self._strict = None
        self._coassoc = None

    def block(self, i: int, j: int) -> np.ndarray:
        """Images of generators of P_i in P_j (x) P_{i-j}, shape (dim, G_i)."""
        if self.kind != "aw":
            return self.blocks[i][j]
        bar, A = self.bar, self.bar.algebra
        d = A.dim
        k = i - j
        Gj, Gk, Gi = bar.rank(j), bar.rank(k), bar.rank(i)
        out = np.zeros((d, Gj, d, Gk, d, Gi), dtype=np.int64)
        if Gi == 0:
            return out.reshape(-1, Gi)
        t = np.arange(Gi)
        R = bar.r ** k
        u = A.unit
        for a in range(d):
            for c in range(d):
                for b in range(d):
                    coef = u[a] * u[c] * u[b]
                    if coef:
                        out[a, t // R, c, t % R, b, t] = coef
        return np.mod(out.reshape(-1, Gi), bar.p)

    def left_contraction(self, i: int, n: int, values) -> np.ndarray:
        """lambda^l (f (x) 1) Delta on generators of P_i for f of degree n.

        Returns images in P_{i-n}, shape (dim P_{i-n}, G_i).
        """
        bar, A = self.bar, self.bar.algebra
        d = A.dim
        k = i - n
        Gn, Gk, Gi = bar.rank(n), bar.rank(k), bar.rank(i)
        f = np.asarray(values, dtype=np.int64).reshape(Gn, d)
        if self.kind == "aw":
            out = np.zeros((d, Gk, d, Gi), dtype=np.int64)
            t = np.arange(Gi)
            R = bar.r ** k
            for b in range(d):
                if A.unit[b]:
                    out[:, t % R, b, t] += (f[t // R] * A.unit[b]).T
            return np.mod(out.reshape(-1, Gi), bar.p)
        X = self.block(i, n).reshape(d, Gn, d, Gk, d, Gi)
        out = np.einsum("agchbt,gy,aycz->zhbt", X, f, A.mult3, optimize=True)
        return np.mod(out.reshape(-1, Gi), bar.p)

    def right_contraction(self, i: int, n: int, values) -> np.ndarray:
        """lambda^r (1 (x) f) Delta on generators of P_i, without the Koszul sign."""
        bar, A = self.bar, self.bar.algebra
        d = A.dim
        j = i - n
        Gn, Gj, Gi = bar.rank(n), bar.rank(j), bar.rank(i)
        f = np.asarray(values, dtype=np.int64).reshape(Gn, d)
        if self.kind == "aw":
            out = np.zeros((d, Gj, d, Gi), dtype=np.int64)
            t = np.arange(Gi)
            R = bar.r ** n
            for a in range(d):
                if A.unit[a]:
                    out[a, t // R, :, t] += f[t % R] * A.unit[a]
            return np.mod(out.reshape(-1, Gi), bar.p)
        X = self.block(i, j).reshape(d, Gj, d, Gn, d, Gi)
        out = np.einsum("agchbt,hy,cybz->agzt", X, f, A.mult3, optimize=True)
        return np.mod(out.reshape(-1, Gi), bar.p)

    def lifting_rhs(self, i: int, n: int, values) -> np.ndarray:
        """(f (x) 1 - 1 (x) f) Delta on generators of P_i, images in P_{i-n}."""
        if i < n or i > self.top:
            raise TruncationError(f"degree {i} outside the diagonal window", i)
        left = self.left_contraction(i, n, values)
        right = self.right_contraction(i, n, values)
        return np.mod(left - _sign(n * (i - n)) * right, self.bar.p)

    def counit_maps(self, i: int):
        """Generator images of lambda^l (mu (x) 1) Delta and lambda^r (1 (x) mu) Delta on P_i."""
        mu = self.bar.algebra.unit.reshape(1, -1)
        return self.left_contraction(i, 0, mu), self.right_contraction(i, 0, mu)

    def is_strict_counital(self) -> bool:
        if self._strict is None:
            ok = True
            for i in range(self.top + 1):
                a, b = self.counit_maps(i)
                if np.any(a != b):
                    ok = False
                    break
            self._strict = ok
        return self._strict

    def _triple(self, i: int, side: str) -> dict:
        """(Delta (x) 1) Delta or (1 (x) Delta) Delta on generators of P_i, by blocks
        (j1, j2, j3) in coordinates (a, g1, c1, g2, c2, g3, b, t)."""
        bar, A = self.bar, self.bar.algebra
        d, m = A.dim, A.mult
        R = bar.rank
        out = {}
        for j in range(i + 1):
            k = i - j
            X = self.block(i, j).reshape(d, R(j), d, R(k), d, R(i))
            if side == "left":
                for j1 in range(j + 1):
                    Y = self.block(j, j1).reshape(d, R(j1), d, R(j - j1), d, R(j))
                    val = np.einsum("agchbt,xpqrsg,axz,scw->zpqrwhbt", X, Y, m, m, optimize=True)
                    out[(j1, j - j1, k)] = np.mod(val, bar.p)
            else:
                for k1 in range(k + 1):
                    Z = self.block(k, k1).reshape(d, R(k1), d, R(k - k1), d, R(k))
                    val = np.einsum("agchbt,xpqrsh,cxz,sbw->agzpqrwt", X, Z, m, m, optimize=True)
                    out[(j, k1, k - k1)] = np.mod(val, bar.p)
        return out

    def is_coassociative(self, top: int | None = None) -> bool:
        """(Delta (x) 1) Delta == (1 (x) Delta) Delta on generators in degrees <= top."""
        top = min(self.top, 6) if top is None else top
        if self._coassoc is not None and self._coassoc[0] >= top:
            return self._coassoc[1]
        ok = True
        for i in range(top + 1):
            left, right = self._triple(i, "left"), self._triple(i, "right")
            if set(left) != set(right) or any(np.any(left[key] != right[key]) for key in left):
                ok = False
                break
        self._coassoc = (top, ok)
        return ok

    def graded_morphism(self, pp: TensorComplex) -> GradedMorphism:
        """Delta as a GradedMorphism P -> P (x) P inside the given tensor complex."""
        bar = self.bar
        comps = {}
        for i in pp.degrees():
            if i > min(self.top, bar.N):
                break
            total = np.zeros((pp.obj(i).dim, bar.rank(i)), dtype=np.int64)
            for j, k in pp.blocks[i]:
                total[pp.index(j, k)] += self.block(i, j)
            comps[i] = BimoduleMap(bar.module(i), pp.obj(i), images=np.mod(total, bar.p))
        src = bar.complex
        return GradedMorphism(src, pp, 0, comps)


def alexander_whitney_diagonal(bar: BarResolution) -> Diagonal:
    return Diagonal(bar, "aw")


def diagonal_from_morphism(bar: BarResolution, pp: TensorComplex, delta: GradedMorphism, top: int) -> Diagonal:
    """Read the blocks of a degree-0 morphism P -> P (x) P off its generator images."""
    blocks = {}
    for i in range(top + 1):
        images = delta.comp(i).images
        blocks[i] = {j: np.mod(images[pp.index(j, k)], bar.p) for j, k in pp.blocks[i]}
    return Diagonal(bar, "blocks", blocks, top=top)


def perturb_diagonal(diag: Diagonal, pp: TensorComplex, h: GradedMorphism, top: int) -> Diagonal:
    """Delta + boundary(h) for a degree 1 morphism h : P -> P (x) P."""
    delta = diag.graded_morphism(pp)
    return diagonal_from_morphism(diag.bar, pp, delta + boundary(h), top)


def random_degree_one(bar: BarResolution, pp: TensorComplex, top: int, rng) -> GradedMorphism:
    """A random degree 1 morphism h : P -> P (x) P (h_i : P_i -> (P (x) P)_{i+1})."""
    comps = {}
    for i in range(0, top):
        tgt = pp.obj(i + 1)
        comps[i] = BimoduleMap(bar.module(i), tgt, images=rng.integers(0, bar.p, size=(tgt.dim, bar.rank(i))))
    return GradedMorphism(bar.complex, pp, -1, comps)


def symmetrize_diagonal(diag: Diagonal, pp: TensorComplex | None = None, top: int | None = None) -> Diagonal:
    """Delta' = (alpha (x) 1 - beta (x) 1) Delta + Delta beta with alpha, beta the two
    counit contractions; the result is strictly counital."""
    bar = diag.bar
    top = diag.top if top is None else top
    if diag.kind == "aw" and diag.is_strict_counital():
        return diag
    if pp is None:
        pp = tensor_complexes(bar.complex, bar.complex, hi=top)
    src = bar.complex
    a_comps, b_comps = {}, {}
    for i in range(top + 1):
        a, b = diag.counit_maps(i)
        a_comps[i] = BimoduleMap(bar.module(i), bar.module(i), images=a)
        b_comps[i] = BimoduleMap(bar.module(i), bar.module(i), images=b)
    alpha = GradedMorphism(src, src, 0, a_comps)
    beta = GradedMorphism(src, src, 0, b_comps)
    one = GradedMorphism.identity(src)
    delta = diag.graded_morphism(pp)
    correction = tensor_morphisms(alpha - beta, one, pp, pp) @ delta
    new = correction + delta @ beta
    return diagonal_from_morphism(bar, pp, new, top)


# power flatness -------------------------------------------------------------------


@dataclass
class PowerFlatReport:
    power: int
    window: int
    homology: dict = field(default_factory=dict)
    augmentation_onto: bool = False
    dims: dict = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return self.augmentation_onto and not any(self.homology.values())


class TensorPower:
    """k-linear model of the r-th tensor power of P over A, sparse.

    Degree-i basis: blocks (j_1..j_r) with j_1 + ... + j_r = i, then
    coordinates (a, w_1, c_1, w_2, ..., c_{r-1}, w_r, b).
    """

    def __init__(self, bar: BarResolution, r: int):
        self.bar, self.r = bar, r
        self._layout = {}

    def layout(self, i: int):
        if i not in self._layout:
            bar = self.bar
            d = bar.algebra.dim
            blocks, offset = [], 0
            for comp in itertools.product(range(i + 1), repeat=self.r):
                if sum(comp) != i or any(j > bar.N for j in comp):
                    continue
                gens = d ** (self.r - 1)
                for j in comp:
                    gens *= bar.rank(j)
                blocks.append((comp, offset, gens))
                offset += gens
            self._layout[i] = (blocks, offset)
        return self._layout[i]

    def generator_count(self, i: int) -> int:
        return self.layout(i)[1]

    def dim(self, i: int) -> int:
        d = self.bar.algebra.dim
        return d * self.generator_count(i) * d

    def _gen_index(self, i, comp, words, coefs):
        bar, d = self.bar, self.bar.algebra.dim
        blocks, _ = self.layout(i)
        for bcomp, off, _g in blocks:
            if bcomp == comp:
                break
        else:
            raise KeyError(comp)
        idx = 0
        for l, j in enumerate(comp):
            idx = idx * max(bar.rank(j), 1) + words[l]
            if l < self.r - 1:
                idx = idx * d + coefs[l]
        return off + idx

    def differential(self, i: int) -> sp.csr_matrix:
        """k-linear matrix of the differential from degree i to degree i - 1."""
        bar, A = self.bar, self.bar.algebra
        d, p = A.dim, bar.p
        blocks, G = self.layout(i)
        _, Gm = self.layout(i - 1)
        rows, cols, vals = [], [], []  # generator images in (a, gen', b) coordinates
        bar_images = {j: bar.diff(j).images.reshape(d, bar.rank(j - 1), d, bar.rank(j)) for j in range(1, i + 1) if j <= bar.N}
        for comp, off, ngen in blocks:
            ranges = []
            for l, j in enumerate(comp):
                ranges.append(range(bar.rank(j)))
                if l < self.r - 1:
                    ranges.append(range(d))
            for gi, tup in enumerate(itertools.product(*ranges)):
                words = tup[0::2]
                coefs = tup[1::2]
                col = off + gi
                sgn = 1
                for l, j in enumerate(comp):
                    if j == 0:
                        continue
                    X = bar_images[j][:, :, :, words[l]]
                    nz = np.argwhere(X)
                    newcomp = comp[:l] + (j - 1,) + comp[l + 1:]
                    for x, g2, y in nz:
                        v = sgn * int(X[x, g2, y])
                        # left factor x merges into c_{l-1} (or a), right y into c_l (or b)
                        lefts = [(x, 1)] if l == 0 else [(z, int(A.mult[coefs[l - 1], x, z])) for z in range(d) if A.mult[coefs[l - 1], x, z]]
                        rights = [(y, 1)] if l == self.r - 1 else [(z, int(A.mult[y, coefs[l], z])) for z in range(d) if A.mult[y, coefs[l], z]]
                        for zl, cl in lefts:
                            for zr, cr in rights:
                                nw = list(words)
                                nw[l] = g2
                                nc = list(coefs)
                                a_out, b_out = None, None
                                if l == 0:
                                    a_out = zl
                                else:
                                    nc[l - 1] = zl
                                if l == self.r - 1:
                                    b_out = zr
                                else:
                                    nc[l] = zr
                                gidx = self._gen_index(i - 1, newcomp, nw, nc)
                                aa = a_out if a_out is not None else -1
                                bb = b_out if b_out is not None else -1
                                rows.append((aa, gidx, bb))
                                cols.append(col)
                                vals.append(v * cl * cr)
                    sgn *= _sign(j)
        return self._expand(rows, cols, vals, G, Gm)

    def _expand(self, rows, cols, vals, G, Gm):
        """Turn generator images into the full k-linear matrix a (x) gen (x) b."""
        A, p = self.bar.algebra, self.bar.p
        d = A.dim
        u = A.unit
        # an entry with a == -1 means "unit on the left" (the generator's own a)
        R, C, V = [], [], []
        lm, rm = A.lmul, A.rmul
        for (aa, g2, bb), col, v in zip(rows, cols, vals):
            v %= p
            if not v:
                continue
            left_vec = u if aa < 0 else np.eye(d, dtype=np.int64)[aa]
            right_vec = u if bb < 0 else np.eye(d, dtype=np.int64)[bb]
            for a in range(d):
                lv = lm[a] @ left_vec
                for b in range(d):
                    rv = rm[b] @ right_vec
                    for z1 in np.flatnonzero(lv % p):
                        for z2 in np.flatnonzero(rv % p):
                            R.append((z1 * Gm + g2) * d + z2)
                            C.append((a * G + col) * d + b)
                            V.append(v * int(lv[z1]) * int(rv[z2]))
        mat = sp.coo_matrix((np.mod(np.array(V, dtype=np.int64), p), (np.array(R, dtype=np.int64), np.array(C, dtype=np.int64))),
                            shape=(d * Gm * d, d * G * d))
        return sp.csr_matrix(mat)

    def augmentation(self) -> np.ndarray:
        """mu^{(x) r} : degree 0 -> A, a (x) c_1 ... c_{r-1} (x) b |-> a c_1 ... b."""
        A, p = self.bar.algebra, self.bar.p
        d = A.dim
        _, G = self.layout(0)
        out = np.zeros((d, d, G, d), dtype=np.int64)
        for gi, coefs in enumerate(itertools.product(range(d), repeat=self.r - 1)):
            for a in range(d):
                for b in range(d):
                    v = np.eye(d, dtype=np.int64)[a]
                    for c in coefs:
                        v = np.mod(A.rmul[c] @ v, p)
                    v = np.mod(A.rmul[b] @ v, p)
                    out[:, a, gi, b] = v
        return out.reshape(d, d * G * d)


POWER_FLAT_MAX_ENTRIES = 80_000_000


def verify_power_flat(bar: BarResolution, r: int, N: int | None = None,
                      max_entries: int = POWER_FLAT_MAX_ENTRIES) -> PowerFlatReport:
    """Homology of the augmented P^{(x) r} in degrees 0..N-r (all zero when exact).

    Ranks are taken block by block; if the largest dense block (plus its
    transform) would exceed ``max_entries`` integers a ValidationError is raised
    before any elimination, so a too-large window fails cleanly.
    """
    N = bar.N if N is None else N
    if r < 1:
        raise ValidationError("power must be at least 1")
    if N <= r:
        raise TruncationError(f"window N={N} must exceed the power r={r}", N)
    if N > bar.N:
        raise TruncationError(f"window N={N} exceeds the resolution's truncation {bar.N}", N)
    p = bar.p
    tp = TensorPower(bar, r)
    top = N - r
    diffs = {i: tp.differential(i) for i in range(1, top + 2)}
    for i, D in diffs.items():
        rows, cols = largest_block(D)
        if rows * (rows + cols) > max_entries:
            raise ValidationError(f"power-flat r={r} N={N}: degree {i} needs a dense {rows}x{cols} block, "
                                  f"over the memory budget; use a smaller --max-degree or power")
    aug = tp.augmentation()
    report = PowerFlatReport(power=r, window=N)
    ranks = {i: Solver(diffs[i], p).rank if diffs[i].nnz else 0 for i in diffs}
    aug_rank = rank(aug, p)
    report.augmentation_onto = aug_rank == bar.algebra.dim
    for i in range(0, top + 1):
        dim = tp.dim(i)
        out_rank = aug_rank if i == 0 else ranks[i]
        report.homology[i] = dim - out_rank - ranks[i + 1]
        report.dims[i] = dim
    return report
