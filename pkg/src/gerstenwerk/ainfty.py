"""The A-infinity coalgebra on C = P[-1] coming from the bar diagonal, and truncated
coderivations of it.

Elements of a tensor power P^(x)r are stored blockwise on generators: a block
(j_1, ..., j_r) holds an array with axes (c_0, g_1, c_1, ..., g_r, c_r, t) where
g_u runs over words of length j_u, the c_u are algebra coordinates between the
factors and t indexes the generators of the source.  Arity 0 means values in A
with axes (c_0, t).

Shift conventions: an element of P_j has degree j - 1 in C.  Every map carries
a parity e (its degree on C mod 2) and (1^r (x) F (x) 1^t) picks up the Koszul
sign (-1)^(e * (sum of the C-degrees of the first r factors)).  delta_1 = d and
delta_2 = (-1)^(j+1) Delta on the block (j, k); with these signs the identities
sum (1^r (x) delta_s (x) 1^t) delta_(r+t+1) = 0 hold with no further signs, and
mu (x) mu (Koszul sign included, mu has parity 1) sends delta_2 to mu.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field

import numpy as np
import scipy.sparse as sp

from .bar import BarResolution, Diagonal
from .errors import TruncationError, ValidationError
from .ext import Cocycle, cup
from .lifting import solve_homotopy_lifting
from .linalg import Solver


def _sign(k: int) -> int:
    return -1 if k % 2 else 1


def _labels_x(r: int) -> list:
    out = ["c0"]
    for u in range(1, r + 1):
        out += [f"g{u}", f"c{u}"]
    return out + ["t"]


class MultiMap:
    """A family of bimodule maps P_i -> (P^(x)r) given on generators, with a parity.

    ``comps[i]`` maps blocks to arrays; source degrees above ``top`` are unknown.
    """

    def __init__(self, bar: BarResolution, arity: int, parity: int, comps: dict | None = None,
                 top: int | None = None, name: str = ""):
        self.bar = bar
        self.arity = arity
        self.parity = parity % 2
        self.comps = comps or {}
        self.top = bar.N if top is None else top
        self.name = name

    def __repr__(self):
        return f"MultiMap({self.name or '?'}, arity={self.arity}, parity={self.parity}, top={self.top})"

    def at(self, i: int) -> dict:
        if i > self.top:
            raise TruncationError(f"{self.name or 'map'} known up to degree {self.top}, needed {i}", i)
        return self.comps.get(i, {})

    def scale(self, c: int) -> "MultiMap":
        return MultiMap(self.bar, self.arity, self.parity,
                        {i: {b: c * x for b, x in blk.items()} for i, blk in self.comps.items()}, self.top, self.name)

    @staticmethod
    def zero(bar: BarResolution, arity: int, parity: int, top: int) -> "MultiMap":
        return MultiMap(bar, arity, parity, {}, top)


def _add_into(acc: dict, blocks: dict, c: int = 1):
    for b, x in blocks.items():
        acc[b] = acc[b] + c * x if b in acc else c * x


def _reduce(blocks: dict, p: int) -> dict:
    return {b: np.mod(x, p) for b, x in blocks.items()}


def blocks_equal(a: dict, b: dict, p: int) -> bool:
    for key in set(a) | set(b):
        x = a.get(key)
        y = b.get(key)
        if x is None:
            if np.any(np.mod(y, p)):
                return False
        elif y is None:
            if np.any(np.mod(x, p)):
                return False
        elif np.any(np.mod(x - y, p)):
            return False
    return True


def _substitute(bar: BarResolution, X: np.ndarray, r: int, s: int, Y: np.ndarray, q: int) -> np.ndarray:
    """Replace factor s (1-based) of an arity r element by an arity q image."""
    mult = bar.algebra.mult.astype(np.float64)
    p = bar.p
    lx = _labels_x(r)
    ly = ["y0"] + [z for u in range(1, q + 1) for z in (f"h{u}", f"y{u}")] + ["src"]
    gs = lx.index(f"g{s}")
    T = np.tensordot(X.astype(np.float64), Y.astype(np.float64), axes=([gs], [len(ly) - 1])) % p
    lt = [z for z in lx if z != f"g{s}"] + ly[:-1]
    left, right = f"c{s - 1}", f"c{s}"
    if q == 0:
        T = np.tensordot(T, mult, axes=([lt.index(left), lt.index("y0")], [0, 1])) % p
        lt = [z for z in lt if z not in (left, "y0")] + ["new"]
        T = np.tensordot(T, mult, axes=([lt.index("new"), lt.index(right)], [0, 1])) % p
        lt = [z for z in lt if z not in ("new", right)] + ["m"]
        order = []
        for z in lx:
            if z == f"g{s}" or z == right:
                continue
            order.append("m" if z == left else z)
    else:
        T = np.tensordot(T, mult, axes=([lt.index(left), lt.index("y0")], [0, 1])) % p
        lt = [z for z in lt if z not in (left, "y0")] + ["nl"]
        T = np.tensordot(T, mult, axes=([lt.index(f"y{q}"), lt.index(right)], [0, 1])) % p
        lt = [z for z in lt if z not in (f"y{q}", right)] + ["nr"]
        order = []
        for z in lx:
            if z == left:
                order.append("nl")
            elif z == f"g{s}":
                for u in range(1, q + 1):
                    order.append(f"h{u}")
                    if u < q:
                        order.append(f"y{u}")
            elif z == right:
                order.append("nr")
            else:
                order.append(z)
    return T.transpose([lt.index(z) for z in order]).astype(np.int64)


def apply_at(F: MultiMap, s: int, blocks: dict, r: int) -> dict:
    """(1^(s-1) (x) F (x) 1^(r-s)) applied to arity r blocks, Koszul sign included."""
    bar = F.bar
    out = {}
    for key, X in blocks.items():
        j = key[s - 1]
        before = sum(key[:s - 1]) - (s - 1)
        sgn = _sign(F.parity * before)
        for fkey, Y in F.at(j).items():
            Z = _substitute(bar, X, r, s, Y, F.arity)
            nkey = key[:s - 1] + tuple(fkey) + key[s:]
            _add_into(out, {nkey: sgn * Z})
    return _reduce(out, bar.p)


def compose_terms(F: MultiMap, G: MultiMap, r: int, i: int) -> dict:
    """(1^r (x) F (x) 1^t) G on generators of P_i, where G has arity r + t + 1."""
    if r >= G.arity:
        return {}
    return apply_at(F, r + 1, G.at(i), G.arity)


def _dim_blocks(bar: BarResolution, blocks: list) -> list:
    d = bar.algebra.dim
    return [int(np.prod([d] + [bar.rank(j) * d for j in b])) for b in blocks]


def tensor_blocks(arity: int, q: int) -> list:
    """Blocks (j_1..j_r) of total degree q, lexicographic."""
    if arity == 0:
        return [()] if q == 0 else []
    return [b for b in itertools.product(range(q + 1), repeat=arity) if sum(b) == q]


def flatten(bar: BarResolution, blocks: dict, arity: int, q: int, k: int) -> np.ndarray:
    keys = tensor_blocks(arity, q)
    parts = []
    for key, size in zip(keys, _dim_blocks(bar, keys)):
        x = blocks.get(key)
        parts.append(np.zeros((size, k), dtype=np.int64) if x is None else x.reshape(size, k))
    return np.concatenate(parts, axis=0) if parts else np.zeros((0, k), dtype=np.int64)


def unflatten(bar: BarResolution, vec: np.ndarray, arity: int, q: int) -> dict:
    d = bar.algebra.dim
    keys = tensor_blocks(arity, q)
    out = {}
    off = 0
    k = vec.shape[1]
    for key, size in zip(keys, _dim_blocks(bar, keys)):
        shape = [d] + [z for j in key for z in (bar.rank(j), d)] + [k]
        chunk = vec[off:off + size]
        if np.any(chunk):
            out[key] = chunk.reshape(shape)
        off += size
    return out


@dataclass
class AInftyStructure:
    bar: BarResolution
    diagonal: Diagonal
    delta: dict  # arity -> MultiMap (1 and 2)
    top: int
    _dsolvers: dict = field(default_factory=dict)

    @property
    def p(self) -> int:
        return self.bar.p

    def delta_s(self, s: int) -> MultiMap:
        if s in self.delta:
            return self.delta[s]
        return MultiMap.zero(self.bar, s, 1, self.top)

    def stasheff(self, N: int, i: int) -> dict:
        """sum over r+s+t = N of (1^r (x) delta_s (x) 1^t) delta_(r+t+1) on P_i."""
        acc = {}
        for s in range(1, N + 1):
            for r in range(0, N - s + 1):
                t = N - s - r
                if r + t + 1 not in self.delta or s not in self.delta:
                    continue
                _add_into(acc, compose_terms(self.delta[s], self.delta[r + t + 1], r, i))
        return _reduce(acc, self.p)

    def stasheff_failures(self, max_arity: int = 4, top: int | None = None) -> list:
        top = self.top if top is None else top
        bad = []
        for N in range(1, max_arity + 1):
            for i in range(top + 1):
                if any(np.any(x) for x in self.stasheff(N, i).values()):
                    bad.append((N, i))
        return bad

    def counit(self) -> MultiMap:
        A = self.bar.algebra
        return MultiMap(self.bar, 0, 1, {0: {(): A.unit.reshape(A.dim, 1).copy()}}, self.top, "mu")

    def weak_counit_failures(self, max_arity: int = 4) -> list:
        """(mu (x) mu) delta_2 = mu and mu^(x)n delta_n = 0 for n != 2 (n >= 3 here)."""
        mu = self.counit()
        bad = []
        for n in range(2, max_arity + 1):
            for i in range(self.top + 1):
                blocks = self.delta_s(n).at(i)
                for s in range(n, 0, -1):
                    blocks = apply_at(mu, s, blocks, s)
                expect = mu.at(i) if n == 2 else {}
                if not blocks_equal(blocks, expect, self.p):
                    bad.append((n, i))
        return bad

    def differential_matrix(self, arity: int, q: int):
        """Sparse matrix of sum_s (1^(s-1) (x) delta_1 (x) 1) on (P^(x)arity)_q as a
        vector space.  On a block, slot s acts on the contiguous axes
        (c_(s-1), g_s, c_s) only, so each term is I (x) L (x) I."""
        bar = self.bar
        A = bar.algebra
        d = A.dim
        src_keys = tensor_blocks(arity, q)
        tgt_keys = tensor_blocks(arity, q - 1)
        src_off = np.cumsum([0] + _dim_blocks(bar, src_keys))
        tgt_off = np.cumsum([0] + _dim_blocks(bar, tgt_keys))
        tgt_pos = {k: n for n, k in enumerate(tgt_keys)}
        rows, cols, vals = [], [], []
        for n, key in enumerate(src_keys):
            for s in range(1, arity + 1):
                j = key[s - 1]
                if j < 1:
                    continue
                nkey = key[:s - 1] + (j - 1,) + key[s:]
                D = bar.diff(j).images.reshape(d, bar.rank(j - 1), d, bar.rank(j))
                L = np.einsum("cxe,xhyg,yaf->ehfcga", A.mult, D, A.mult).reshape(d * bar.rank(j - 1) * d, d * bar.rank(j) * d)
                before = int(np.prod([bar.rank(key[u]) * d for u in range(s - 1)])) if s > 1 else 1
                after = int(np.prod([d * bar.rank(key[u]) for u in range(s, arity)])) if s < arity else 1
                sgn = _sign(sum(key[:s - 1]) - (s - 1))
                term = sp.kron(sp.identity(before, dtype=np.int64, format="csr"),
                               sp.kron(sp.csr_matrix(np.mod(sgn * L, bar.p)), sp.identity(after, dtype=np.int64)))
                term = term.tocoo()
                rows.append(term.row + tgt_off[tgt_pos[nkey]])
                cols.append(term.col + src_off[n])
                vals.append(term.data)
        shape = (int(tgt_off[-1]), int(src_off[-1]))
        if not rows:
            return sp.csr_matrix(shape, dtype=np.int64)
        m = sp.coo_matrix((np.concatenate(vals), (np.concatenate(rows), np.concatenate(cols))), shape=shape).tocsr()
        m.data = np.mod(m.data, bar.p)
        m.eliminate_zeros()
        return m

    def dsolver(self, arity: int, q: int) -> Solver:
        key = (arity, q)
        if key not in self._dsolvers:
            self._dsolvers[key] = Solver(self.differential_matrix(arity, q), self.p)
        return self._dsolvers[key]


def build_ainfty(bar: BarResolution, diag: Diagonal, top: int | None = None) -> AInftyStructure:
    """delta_1 = d, delta_2 = signed Delta, delta_(>=3) = 0 on the window [0, top]."""
    top = min(bar.N, diag.top) if top is None else top
    if not diag.is_coassociative(min(top, 6)):
        raise ValidationError("build_ainfty needs a coassociative diagonal; higher delta_n are not solved for")
    d = bar.algebra.dim
    R = bar.rank
    d1, d2 = {}, {}
    for i in range(1, bar.N + 1):
        d1[i] = {(i - 1,): bar.diff(i).images.reshape(d, R(i - 1), d, R(i))}
    for i in range(top + 1):
        d2[i] = {}
        for j in range(i + 1):
            x = diag.block(i, j).reshape(d, R(j), d, R(i - j), d, R(i))
            if np.any(x):
                d2[i][(j, i - j)] = np.mod(_sign(j + 1) * x, bar.p)
    delta = {1: MultiMap(bar, 1, 1, d1, bar.N, "delta1"), 2: MultiMap(bar, 2, 1, d2, top, "delta2")}
    return AInftyStructure(bar, diag, delta, top)


@dataclass
class TruncatedCoderivation:
    """Components f_0..f_K of a coderivation of parity l (degree l on C)."""

    ainf: AInftyStructure
    degree: int
    components: dict  # arity -> MultiMap
    cap: int

    def f(self, r: int) -> MultiMap:
        if r > self.cap:
            raise TruncationError(f"arity {r} above the cap {self.cap}", r)
        return self.components.get(r) or MultiMap.zero(self.ainf.bar, r, self.degree, self.ainf.top)

    @property
    def top(self) -> int:
        return min(m.top for m in self.components.values()) if self.components else self.ainf.top


def _circ_terms(f, g, n: int, i: int, f_cap: int, g_cap: int) -> dict:
    """(f o g)_n on P_i = sum_{r+s+t=n} (1^r (x) f_s (x) 1^t) g_(r+t+1)."""
    acc = {}
    for s in range(0, min(n, f_cap) + 1):
        for r in range(0, n - s + 1):
            t = n - s - r
            if r + t + 1 > g_cap:
                continue
            _add_into(acc, compose_terms(f(s), g(r + t + 1), r, i))
    return acc


def _delta_fn(ainf):
    return lambda s: ainf.delta_s(s)


def bracket_with_delta(F: TruncatedCoderivation, n: int, i: int, skip_top: bool = False) -> dict:
    """[f, delta]_n = (f o delta)_n - (-1)^l (delta o f)_n on P_i.

    With ``skip_top`` the term delta_1-differential of f_n at source i is left out;
    that is what the solver moves to the left side."""
    ainf = F.ainf
    l = F.degree
    acc = _circ_terms(F.f, _delta_fn(ainf), n, i, F.cap, 2)
    # delta o f: s = 1 terms act on f_n, s = 2 terms on f_(n-1)
    if not skip_top:
        for r in range(n):
            _add_into(acc, compose_terms(ainf.delta[1], F.f(n), r, i), -_sign(l))
    if n >= 1:
        for r in range(n - 1):
            _add_into(acc, compose_terms(ainf.delta[2], F.f(n - 1), r, i), -_sign(l))
    return _reduce(acc, ainf.p)


def coderivation_failures(F: TruncatedCoderivation, max_arity: int | None = None, top: int | None = None) -> list:
    max_arity = F.cap if max_arity is None else max_arity
    top = F.top if top is None else top
    bad = []
    for n in range(0, max_arity + 1):
        for i in range(top + 1):
            if any(np.any(x) for x in bracket_with_delta(F, n, i).values()):
                bad.append((n, i))
    return bad


def _out_degree(i: int, l: int, r: int) -> int:
    """P-degree of the target of f_r on P_i for a coderivation of degree l."""
    return i - 1 - l + r


def extend_to_coderivation(f0: Cocycle, ainf: AInftyStructure, K: int = 2, top: int | None = None) -> TruncatedCoderivation:
    """f_0 = the cocycle, f_1 = psi_f (normalized lifting), f_r for 2 <= r <= K solved
    from the arity r component of [f, delta] = 0 degree by degree."""
    if K > 3:
        raise ValidationError("arity cap above 3 is not supported")
    bar = ainf.bar
    m = f0.degree
    l = m - 1
    # outputs of f_(K-1) must stay inside the window of delta_2
    top = min(ainf.top if top is None else top, ainf.top + l + 2 - max(K, 1))
    d = bar.algebra.dim
    comps = {0: MultiMap(bar, 0, l, {m: {(): f0.values.T.copy()}} if m <= top else {}, top, "f0")}
    F = TruncatedCoderivation(ainf, l, comps, min(K, 1) if K >= 1 else 0)
    if K >= 1:
        lift = solve_homotopy_lifting(f0, ainf.diagonal, top=min(top, bar.N + l))
        c1 = {}
        for i, x in lift.components.items():
            if i <= top:
                c1[i] = {(i - l,): x.reshape(d, bar.rank(i - l), d, bar.rank(i))}
        comps[1] = MultiMap(bar, 1, l, c1, top, "f1")
    for r in range(2, K + 1):
        comps[r] = MultiMap(bar, r, l, {}, top, f"f{r}")
        F.cap = r
        for i in range(top + 1):
            q = _out_degree(i, l, r)
            if q < 0:
                continue
            rest = bracket_with_delta(F, r, i, skip_top=True)
            rhs = _sign(l) * flatten(bar, rest, r, q - 1, bar.rank(i)) if q >= 1 else None
            if q == 0:
                if any(np.any(x) for x in rest.values()):
                    raise TruncationError(f"coderivation obstruction at arity {r}, degree {i}", i)
                continue
            x = ainf.dsolver(r, q).solve(rhs)
            if x is None:
                raise TruncationError(f"coderivation obstruction at arity {r}, degree {i}", i)
            comps[r].comps[i] = unflatten(bar, np.mod(x, bar.p), r, q)
    F.cap = K
    return F


def _as_coder(F):
    if isinstance(F, TruncatedCoderivation):
        return F.f, F.cap, F.degree, F.ainf
    raise ValidationError("expected a truncated coderivation")


def coder_ops(F: TruncatedCoderivation, G: TruncatedCoderivation, top: int | None = None):
    """(f o g, f cup g, [f, g]) as truncated coderivation-shaped families.

    Arity caps: f o g is complete up to min(K_f, K_g - 1); the bracket up to
    min(K_f, K_g) - 1; the cup product up to K_f + K_g."""
    f, kf, l, ainf = _as_coder(F)
    g, kg, k, ainf2 = _as_coder(G)
    if ainf2 is not ainf:
        raise ValidationError("coderivations over different A-infinity structures")
    top = min(F.top, G.top) if top is None else top
    bar = ainf.bar
    cap_circ = min(kf, kg - 1)
    cap_br = min(kf, kg) - 1
    if cap_br < 0:
        raise TruncationError("arity caps too small for the bracket", 0)

    def circ(a, b, ca, cb, cap, parity):
        comps = {}
        for n in range(cap + 1):
            comps[n] = MultiMap(bar, n, parity, {i: _reduce(_circ_terms(a, b, n, i, ca, cb), bar.p) for i in range(top + 1)}, top)
        return comps

    fg = circ(f, g, kf, kg, cap_circ, k + l)
    gf = circ(g, f, kg, kf, min(kg, kf - 1), k + l)
    br = {}
    for n in range(cap_br + 1):
        comps = {}
        for i in range(top + 1):
            acc = {}
            _add_into(acc, fg[n].at(i))
            _add_into(acc, gf[n].at(i), -_sign(k * l))
            comps[i] = _reduce(acc, bar.p)
        br[n] = MultiMap(bar, n, k + l, comps, top)
    cupc = {}
    d2 = ainf.delta[2]
    for n in range(kf + kg + 1):
        comps = {}
        for i in range(top + 1):
            acc = {}
            for s in range(0, min(n, kf) + 1):
                u = n - s
                if u > kg:
                    continue
                blocks = apply_at(g(u), 2, d2.at(i), 2)
                blocks = apply_at(f(s), 1, blocks, 1 + u)
                _add_into(acc, blocks, _sign(k))
            comps[i] = _reduce(acc, bar.p)
        cupc[n] = MultiMap(bar, n, k + l + 1, comps, top)
    bracket = TruncatedCoderivation(ainf, (k + l) % 2, br, cap_br)
    return ({n: fg[n] for n in fg}, cupc, bracket)


def cup_from_coderivations(F: TruncatedCoderivation, G: TruncatedCoderivation, i: int) -> np.ndarray:
    """(f cup g)_0 on P_i as word values (G_i, d)."""
    _, cupc, _ = coder_ops(F, G, top=i)
    blk = cupc[0].at(i).get(())
    bar = F.ainf.bar
    if blk is None:
        return np.zeros((bar.rank(i), bar.algebra.dim), dtype=np.int64)
    return np.mod(blk.T, bar.p)
