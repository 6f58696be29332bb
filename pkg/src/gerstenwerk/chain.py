"""Complexes of bimodules, graded morphisms and their homotopy calculus.

Differentials follow the homological convention d_i : E_{i+1} -> E_i.  A
degree n morphism f has components f_i : E_i -> E'_{i-n}, composition is
(gf)_i = g_{i-n} f_i and the boundary is d'f - (-1)^n f d.  Everything lives
in an explicit finite window; objects outside it are zero.
"""
from __future__ import annotations

import base64
import hashlib
import json
import zlib
from dataclasses import dataclass

import numpy as np

from .algebra import AlgebraPresentation
from .bimodule import (
    Bimodule,
    BimoduleMap,
    DirectSum,
    FreeBimodule,
    TensorProduct,
    direct_sum,
    left_unitor,
    right_unitor,
    tensor_maps,
    tensor_over_algebra,
    unit_bimodule,
    zero_bimodule,
)
from .errors import TruncationError, ValidationError, VerificationError
from .linalg import Solver, matmul, rank

CHAIN_SCHEMA = "gw-chain/1"


def _sign(k: int) -> int:
    return -1 if k % 2 else 1


class Complex:
    """Objects ``objects[i]`` and differentials ``diffs[i] : E_{i+1} -> E_i``."""

    def __init__(self, algebra: AlgebraPresentation, objects: dict, diffs: dict | None = None, name: str = ""):
        self.algebra = algebra
        self.objects = dict(sorted(objects.items()))
        self.diffs = dict(diffs or {})
        self.name = name
        self.lo = min(self.objects) if self.objects else 0
        self.hi = max(self.objects) if self.objects else -1
        self._zero = zero_bimodule(algebra)
        self._solvers = {}

    def __repr__(self):
        dims = [self.obj(i).dim for i in self.degrees()]
        return f"Complex({self.name or '?'}, window=[{self.lo},{self.hi}], dims={dims})"

    def degrees(self):
        return range(self.lo, self.hi + 1)

    def obj(self, i: int) -> Bimodule:
        return self.objects.get(i, self._zero)

    def d(self, i: int) -> BimoduleMap:
        """The differential E_{i+1} -> E_i (zero outside the window)."""
        m = self.diffs.get(i)
        if m is None:
            m = BimoduleMap(self.obj(i + 1), self.obj(i))
            self.diffs[i] = m
        return m

    def solver(self, i: int) -> Solver:
        """Cached elimination of d_i, used for lifting through this complex."""
        if i not in self._solvers:
            self._solvers[i] = Solver(self.d(i).matrix, self.algebra.p)
        return self._solvers[i]

    def check(self):
        p = self.algebra.p
        for i in range(self.lo, self.hi - 1):
            if np.any(matmul(self.d(i).matrix, self.d(i + 1).matrix, p)):
                raise VerificationError(f"d_{i} d_{i + 1} != 0 in {self.name}")
        return self

    def homology_dims(self, degrees=None) -> dict:
        p = self.algebra.p
        out = {}
        for i in degrees if degrees is not None else self.degrees():
            dim = self.obj(i).dim
            r_out = rank(self.d(i - 1).matrix, p) if dim and self.obj(i - 1).dim else 0
            r_in = rank(self.d(i).matrix, p) if dim and self.obj(i + 1).dim else 0
            out[i] = dim - r_out - r_in
        return out

    @staticmethod
    def concentrated(module: Bimodule, degree: int = 0, name: str = "") -> "Complex":
        return Complex(module.algebra, {degree: module}, {}, name=name or module.name)


def unit_complex(algebra: AlgebraPresentation) -> Complex:
    return Complex.concentrated(unit_bimodule(algebra), 0, name="1")


class GradedMorphism:
    """Degree n morphism with components f_i : E_i -> E'_{i-n}."""

    def __init__(self, source: Complex, target: Complex, degree: int, components: dict | None = None):
        self.source = source
        self.target = target
        self.degree = degree
        self.components = {}
        for i, m in (components or {}).items():
            if m is None:
                continue
            if m.source.dim != source.obj(i).dim or m.target.dim != target.obj(i - degree).dim:
                raise ValidationError(
                    f"component {i} has shape {m.target.dim}x{m.source.dim}, expected "
                    f"{target.obj(i - degree).dim}x{source.obj(i).dim}")
            self.components[i] = m

    def __repr__(self):
        return f"GradedMorphism({self.source.name} -> {self.target.name}, degree={self.degree})"

    @property
    def p(self):
        return self.source.algebra.p

    def __getitem__(self, i: int) -> BimoduleMap:
        return self.comp(i)

    def comp(self, i: int) -> BimoduleMap:
        m = self.components.get(i)
        if m is None:
            m = BimoduleMap(self.source.obj(i), self.target.obj(i - self.degree))
        return m

    def degrees(self):
        return self.source.degrees()

    def _check_compatible(self, other):
        if other.degree != self.degree:
            raise ValidationError("graded morphisms of different degrees")

    def __add__(self, other):
        self._check_compatible(other)
        keys = set(self.components) | set(other.components)
        return GradedMorphism(self.source, self.target, self.degree,
                              {i: self.comp(i) + other.comp(i) for i in keys})

    def __neg__(self):
        return self.scale(-1)

    def __sub__(self, other):
        return self + (-other)

    def scale(self, c: int):
        return GradedMorphism(self.source, self.target, self.degree,
                              {i: m.scale(c) for i, m in self.components.items()})

    def __matmul__(self, other: "GradedMorphism") -> "GradedMorphism":
        """Composition ``self o other``."""
        comps = {}
        for i in other.components:
            j = i - other.degree
            if j in self.components:
                comps[i] = self.components[j] @ other.components[i]
        return GradedMorphism(other.source, self.target, self.degree + other.degree, comps)

    def mismatches(self, other=None, degrees=None) -> list:
        """Degrees where self and other (default zero) differ."""
        bad = []
        for i in degrees if degrees is not None else self.degrees():
            a = self.comp(i)
            if other is None:
                if not a.is_zero():
                    bad.append(i)
            elif not a.equals(other.comp(i)):
                bad.append(i)
        return bad

    def equals(self, other, degrees=None) -> bool:
        return not self.mismatches(other, degrees)

    def is_zero(self, degrees=None) -> bool:
        return not self.mismatches(None, degrees)

    def is_chain_map(self, degrees=None) -> bool:
        return boundary(self).is_zero(degrees)

    @staticmethod
    def identity(c: Complex) -> "GradedMorphism":
        return GradedMorphism(c, c, 0, {i: BimoduleMap.identity(c.obj(i)) for i in c.degrees()})

    @staticmethod
    def zero(source: Complex, target: Complex, degree: int) -> "GradedMorphism":
        return GradedMorphism(source, target, degree, {})

    @staticmethod
    def differential(c: Complex) -> "GradedMorphism":
        return GradedMorphism(c, c, 1, {i: c.d(i - 1) for i in c.degrees() if i - 1 >= c.lo})

    @staticmethod
    def single(source: Complex, target: Complex, degree: int, i: int, m: BimoduleMap) -> "GradedMorphism":
        return GradedMorphism(source, target, degree, {i: m})


def boundary(f: GradedMorphism) -> GradedMorphism:
    """d'f - (-1)^n f d, a morphism of degree n + 1."""
    n = f.degree
    src, tgt = f.source, f.target
    comps = {}
    for i in src.degrees():
        a = tgt.d(i - n - 1) @ f.comp(i)
        b = f.comp(i - 1) @ src.d(i - 1)
        comps[i] = a - b.scale(_sign(n))
    return GradedMorphism(src, tgt, n + 1, comps)


def null_homotopy(f: GradedMorphism, degrees=None):
    """A degree n-1 morphism s with boundary(s) == f, or None.

    Solves bottom-up: d' s_i = f_i + (-1)^(n-1) s_{i-1} d_{i-1}.  Components
    whose target has nothing below are set to zero.  The source must be
    degreewise free.
    """
    n = f.degree
    src, tgt = f.source, f.target
    degs = list(degrees if degrees is not None else src.degrees())
    if not boundary(f).is_zero(degs):
        raise ValidationError("null_homotopy needs a chain map")
    comps = {}
    prev = None
    for i in degs:
        rhs = f.comp(i)
        if prev is not None:
            rhs = rhs + (prev @ src.d(i - 1)).scale(_sign(n - 1))
        up = tgt.obj(i - n + 1)
        if src.obj(i).dim == 0 or up.dim == 0 or tgt.obj(i - n).dim == 0:
            if not rhs.is_zero() and up.dim == 0:
                return None
            if not rhs.is_zero() and tgt.obj(i - n).dim == 0:
                return None
            prev = BimoduleMap(src.obj(i), up)
            continue
        if not isinstance(src.obj(i), FreeBimodule):
            raise ValidationError("null_homotopy needs a free source")
        x = tgt.solver(i - n).solve(rhs.images)
        if x is None:
            return None
        prev = BimoduleMap(src.obj(i), up, images=x)
        comps[i] = prev
    return GradedMorphism(src, tgt, n - 1, comps)


# tensor products of complexes ---------------------------------------------------


class TensorComplex(Complex):
    """E (x) F with the block decomposition (j, k) of every degree kept."""

    def __init__(self, left: Complex, right: Complex, hi: int | None = None):
        alg = left.algebra
        lo = left.lo + right.lo
        top = left.hi + right.hi if hi is None else min(hi, left.hi + right.hi)
        self.left, self.right = left, right
        self.blocks = {}
        self.products = {}
        self.sums = {}
        objects = {}
        for i in range(lo, top + 1):
            blocks = [(j, i - j) for j in left.degrees() if right.lo <= i - j <= right.hi]
            self.blocks[i] = blocks
            for jk in blocks:
                self.products[jk] = tensor_over_algebra(left.obj(jk[0]), right.obj(jk[1]))
            ds = direct_sum(*[self.products[jk].module for jk in blocks]) if blocks else None
            self.sums[i] = ds
            objects[i] = ds.module if ds else zero_bimodule(alg)
        super().__init__(alg, objects, {}, name=f"({left.name}(x){right.name})")
        for i in range(lo, top):
            self.diffs[i] = self._differential(i + 1)

    def block_index(self, i: int, jk) -> int | None:
        try:
            return self.blocks.get(i, []).index(tuple(jk))
        except ValueError:
            return None

    def index(self, j: int, k: int) -> np.ndarray:
        """Coordinates of the block E_j (x) F_k inside (E (x) F)_{j+k}."""
        i = j + k
        return self.sums[i].index[self.block_index(i, (j, k))]

    def injection(self, j: int, k: int) -> BimoduleMap:
        i = j + k
        t = self.block_index(i, (j, k))
        ds = self.sums[i]
        return BimoduleMap(ds.summands[t], ds.module, ds._embedding(t))

    def projection(self, j: int, k: int) -> BimoduleMap:
        i = j + k
        t = self.block_index(i, (j, k))
        ds = self.sums[i]
        return BimoduleMap(ds.module, ds.summands[t], ds._embedding(t).T)

    def assemble(self, source_sum: DirectSum | None, i_src: int, target: "TensorComplex", i_tgt: int, parts: dict):
        """Matrix of a map from degree i_src of self to degree i_tgt of target
        given block maps ``parts[(src_block, tgt_block)]``."""
        src_dim = self.obj(i_src).dim
        tgt_dim = target.obj(i_tgt).dim
        mat = np.zeros((tgt_dim, src_dim), dtype=np.int64)
        for (sb, tb), m in parts.items():
            mat[np.ix_(target.index(*tb), self.index(*sb))] += m.matrix
        return BimoduleMap(self.obj(i_src), target.obj(i_tgt), np.mod(mat, self.algebra.p))

    def _differential(self, i: int) -> BimoduleMap:
        """(E (x) F)_i -> (E (x) F)_{i-1}."""
        parts = {}
        for j, k in self.blocks[i]:
            tp = self.products[(j, k)]
            if (j - 1, k) in self.products and (j - 1, k) in self.blocks.get(i - 1, []):
                m = tensor_maps(self.left.d(j - 1), BimoduleMap.identity(self.right.obj(k)), tp, self.products[(j - 1, k)])
                parts[((j, k), (j - 1, k))] = m
            if (j, k - 1) in self.products and (j, k - 1) in self.blocks.get(i - 1, []):
                m = tensor_maps(BimoduleMap.identity(self.left.obj(j)), self.right.d(k - 1), tp, self.products[(j, k - 1)], _sign(j))
                parts[((j, k), (j, k - 1))] = m
        return self.assemble(None, i, self, i - 1, parts)


def tensor_complexes(e: Complex, f: Complex, hi: int | None = None) -> TensorComplex:
    if e.algebra is not f.algebra:
        raise ValidationError("complexes over different algebras")
    return TensorComplex(e, f, hi)


def tensor_morphisms(f: GradedMorphism, g: GradedMorphism, src: TensorComplex, tgt: TensorComplex) -> GradedMorphism:
    """(f (x) g)_i restricted to E_j (x) F_k is (-1)^(m j) f_j (x) g_k, m = deg g."""
    n, m = f.degree, g.degree
    comps = {}
    for i in src.degrees():
        parts = {}
        for j, k in src.blocks[i]:
            tb = (j - n, k - m)
            if tb not in tgt.blocks.get(i - n - m, []):
                continue
            fj, gk = f.comp(j), g.comp(k)
            if fj.is_zero() or gk.is_zero():
                continue
            parts[((j, k), tb)] = tensor_maps(fj, gk, src.products[(j, k)], tgt.products[tb], _sign(m * j))
        if parts:
            comps[i] = src.assemble(None, i, tgt, i - n - m, parts)
    return GradedMorphism(src, tgt, n + m, comps)


def left_unitor_complex(t: TensorComplex) -> GradedMorphism:
    """1 (x) F -> F for the unit complex on the left."""
    comps = {}
    for i in t.degrees():
        if (0, i) in t.products:
            comps[i] = left_unitor(t.products[(0, i)]) @ t.projection(0, i)
    return GradedMorphism(t, t.right, 0, comps)


def right_unitor_complex(t: TensorComplex) -> GradedMorphism:
    """E (x) 1 -> E for the unit complex on the right."""
    comps = {}
    for i in t.degrees():
        if (i, 0) in t.products:
            comps[i] = right_unitor(t.products[(i, 0)]) @ t.projection(i, 0)
    return GradedMorphism(t, t.left, 0, comps)


def reassociate(x: TensorComplex, y: TensorComplex) -> GradedMorphism:
    """E (x) (F (x) G) -> (E (x) F) (x) G, the canonical block re-association."""
    inner = x.right
    outer = y.left
    if not isinstance(inner, TensorComplex) or not isinstance(outer, TensorComplex):
        raise ValidationError("reassociate needs E(x)(F(x)G) and (E(x)F)(x)G")
    p = x.algebra.p
    comps = {}
    for i in x.degrees():
        if i not in y.blocks:
            continue
        if _all_free(x, i) and _all_free(y, i) and all(_all_free(inner, q) for _, q in x.blocks[i]) \
                and all(_all_free(outer, j) for j, _ in y.blocks[i]):
            comps[i] = _free_reassociation(x, y, i)
            continue
        mat = np.zeros((y.obj(i).dim, x.obj(i).dim), dtype=np.int64)
        for j, q in x.blocks[i]:
            tp = x.products[(j, q)]
            us, xs = tp.section
            cols = x.index(j, q)
            ncol = us.shape[1]
            for k, l in inner.blocks.get(q, []):
                if (j + k, l) not in y.products or (j, k) not in outer.products:
                    continue
                itp = inner.products[(k, l)]
                ys = xs[inner.index(k, l)]
                vs, ws = itp.section
                etp = outer.products[(j, k)]
                otp = y.products[(j + k, l)]
                ef_idx = outer.index(j, k)
                y_idx = y.index(j + k, l)
                ef_dim = outer.obj(j + k).dim
                for s in range(vs.shape[1]):
                    weights = ys[s]
                    if not np.any(weights):
                        continue
                    ef = np.zeros((ef_dim, ncol), dtype=np.int64)
                    ef[ef_idx] = etp.pair(us, np.repeat(vs[:, s:s + 1], ncol, axis=1))
                    z = otp.pair(ef, np.repeat(ws[:, s:s + 1], ncol, axis=1))
                    mat[np.ix_(y_idx, cols)] += z * weights[None, :]
        comps[i] = BimoduleMap(x.obj(i), y.obj(i), np.mod(mat, p))
    return GradedMorphism(x, y, 0, comps)


def _all_free(t: TensorComplex, i: int) -> bool:
    return isinstance(t.obj(i), FreeBimodule) and all(
        isinstance(t.products[jk].module, FreeBimodule) and isinstance(t.products[jk].left, FreeBimodule)
        and isinstance(t.products[jk].right, FreeBimodule) for jk in t.blocks.get(i, []))


def _gen_offset(t: TensorComplex, j: int, k: int) -> int:
    d = t.algebra.dim
    ix = t.index(j, k)
    return int(ix[0]) // d if ix.size else 0


def _free_reassociation(x: TensorComplex, y: TensorComplex, i: int) -> BimoduleMap:
    """The associator is a permutation of generators when everything is free."""
    d = x.algebra.dim
    inner, outer = x.right, y.left
    Gx = x.obj(i).rank
    perm = np.zeros(Gx, dtype=np.int64)
    for j, q in x.blocks[i]:
        rank_e = x.left.obj(j).rank
        rank_q = inner.obj(q).rank
        xoff = _gen_offset(x, j, q)
        for k, l in inner.blocks.get(q, []):
            rank_f = inner.left.obj(k).rank
            rank_g = inner.right.obj(l).rank
            ioff = _gen_offset(inner, k, l)
            yoff = _gen_offset(y, j + k, l)
            eoff = _gen_offset(outer, j, k)
            g, c, h, c2, w = np.meshgrid(np.arange(rank_e), np.arange(d), np.arange(rank_f), np.arange(d),
                                         np.arange(rank_g), indexing="ij")
            src = xoff + (g * d + c) * rank_q + ioff + (h * d + c2) * rank_g + w
            tgt = yoff + ((eoff + (g * d + c) * rank_f + h) * d + c2) * rank_g + w
            perm[src.reshape(-1)] = tgt.reshape(-1)
    Gy = y.obj(i).rank
    a, g, b = np.meshgrid(np.arange(d), np.arange(Gx), np.arange(d), indexing="ij")
    cols = ((a * Gx + g) * d + b).reshape(-1)
    rows = ((a * Gy + perm[g]) * d + b).reshape(-1)
    mat = np.zeros((y.obj(i).dim, x.obj(i).dim), dtype=np.int64)
    mat[rows, cols] = 1
    return BimoduleMap(x.obj(i), y.obj(i), mat)


# resolutions --------------------------------------------------------------------


@dataclass
class ResolutionData:
    """A complex in degrees >= 0 with an augmentation mu : E_0 -> target."""

    complex: Complex
    mu: BimoduleMap
    target: Bimodule

    def check(self, top: int | None = None):
        """Raise unless mu d_0 = 0, mu is onto and the complex is exact below ``top``."""
        c, p = self.complex, self.complex.algebra.p
        top = c.hi if top is None else top
        if np.any(matmul(self.mu.matrix, c.d(0).matrix, p)):
            raise VerificationError("mu d_0 != 0")
        if rank(self.mu.matrix, p) != self.target.dim:
            raise VerificationError("augmentation is not surjective")
        h = self.homology(top)
        bad = {i: v for i, v in h.items() if v}
        if bad:
            raise VerificationError(f"homology does not vanish: {bad}")
        return self

    def homology(self, top: int | None = None) -> dict:
        """Homology of the augmented complex in degrees 0..top-1 (0 means exact)."""
        c, p = self.complex, self.complex.algebra.p
        top = c.hi if top is None else top
        out = {}
        for i in range(0, top):
            dim = c.obj(i).dim
            r_in = rank(c.d(i).matrix, p) if dim and c.obj(i + 1).dim else 0
            if i == 0:
                r_out = rank(self.mu.matrix, p) if dim and self.target.dim else 0
            else:
                r_out = rank(c.d(i - 1).matrix, p) if dim and c.obj(i - 1).dim else 0
            out[i] = dim - r_out - r_in
        return out


def lift_through_resolution(src: ResolutionData, tgt: ResolutionData, base: BimoduleMap | None = None, top: int | None = None) -> GradedMorphism:
    """A chain map F : src -> tgt with mu_tgt F_0 = base mu_src (default base = 1).

    The source must be degreewise free.  Lifts degrees 0..top (default: all of
    the target, which must fit inside the source window).
    """
    p, c, e = src.complex.algebra.p, src.complex, tgt.complex
    if top is None:
        top = e.hi
        if top > c.hi:
            raise TruncationError(f"lifting needs degree {top} but the window stops at {c.hi}; increase N", top)
    top = min(top, c.hi)
    base_mu = src.mu if base is None else base @ src.mu
    comps = {}
    for i in range(0, top + 1):
        if not isinstance(c.obj(i), FreeBimodule):
            raise ValidationError("lifting needs a free source")
        if i == 0:
            rhs = base_mu.images
            mat = tgt.mu.matrix
        else:
            rhs = (comps[i - 1] @ c.d(i - 1)).images if i - 1 in comps else np.zeros((e.obj(i - 1).dim, c.obj(i).rank), dtype=np.int64)
            mat = e.d(i - 1).matrix
        if e.obj(i).dim == 0:
            if np.any(rhs):
                raise VerificationError(f"lift obstructed in degree {i}")
            continue
        x = Solver(mat, p).solve(rhs) if i == 0 else e.solver(i - 1).solve(rhs)
        if x is None:
            raise VerificationError(f"lift obstructed in degree {i}: target not exact there")
        comps[i] = BimoduleMap(c.obj(i), e.obj(i), images=x)
    return GradedMorphism(c, e, 0, comps)


# serialization ------------------------------------------------------------------


def encode_array(a) -> dict:
    a = np.ascontiguousarray(np.asarray(a, dtype=np.int64))
    raw = zlib.compress(a.tobytes(), 6)
    return {"shape": list(a.shape), "data": base64.b64encode(raw).decode("ascii")}


def decode_array(d) -> np.ndarray:
    raw = zlib.decompress(base64.b64decode(d["data"]))
    return np.frombuffer(raw, dtype=np.int64).reshape(d["shape"]).copy()


def complex_to_dict(c: Complex, mu: BimoduleMap | None = None) -> dict:
    """gw-chain/1 payload: window, per-degree modules and differentials."""
    degrees = []
    for i in c.degrees():
        m = c.obj(i)
        entry = {"degree": i, "dim": m.dim}
        if isinstance(m, FreeBimodule):
            entry["free"] = [list(g) if isinstance(g, tuple) else g for g in m.generators]
        else:
            entry["left"] = encode_array(m.left)
            entry["right"] = encode_array(m.right)
        if i + 1 <= c.hi:
            d = c.d(i)
            if isinstance(d.source, FreeBimodule):
                entry["d_images"] = encode_array(d.images)
            else:
                entry["d_matrix"] = encode_array(d.matrix)
        degrees.append(entry)
    out = {"schema": CHAIN_SCHEMA, "window": [c.lo, c.hi], "name": c.name, "degrees": degrees}
    if mu is not None:
        out["mu"] = encode_array(mu.matrix)
    return out


def complex_from_dict(algebra: AlgebraPresentation, data: dict):
    """Inverse of complex_to_dict; returns (complex, mu or None)."""
    if data.get("schema") != CHAIN_SCHEMA:
        raise ValidationError(f"not a {CHAIN_SCHEMA} payload")
    objects = {}
    for entry in data["degrees"]:
        i = entry["degree"]
        if "free" in entry:
            gens = [tuple(g) if isinstance(g, list) else g for g in entry["free"]]
            objects[i] = FreeBimodule(algebra, gens, name=f"{data['name']}_{i}")
        else:
            objects[i] = Bimodule(algebra, decode_array(entry["left"]), decode_array(entry["right"]))
    diffs = {}
    for entry in data["degrees"]:
        i = entry["degree"]
        if "d_images" in entry:
            diffs[i] = BimoduleMap(objects[i + 1], objects[i], images=decode_array(entry["d_images"]))
        elif "d_matrix" in entry:
            diffs[i] = BimoduleMap(objects[i + 1], objects[i], decode_array(entry["d_matrix"]))
    c = Complex(algebra, objects, diffs, name=data["name"])
    mu = None
    if "mu" in data:
        mu = BimoduleMap(c.obj(0), unit_bimodule(algebra), decode_array(data["mu"]))
    return c, mu


def payload_hash(data: dict) -> str:
    return hashlib.sha256(json.dumps(data, sort_keys=True).encode()).hexdigest()
