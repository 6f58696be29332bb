"""Hochschild cocycles on the bar resolution, cohomology bases, cup product,
class comparison and the classical circle-product bracket (used as an
independent oracle)."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .bar import BarResolution, Diagonal
from .errors import TruncationError, ValidationError
from .linalg import Solver, image_basis, kernel_basis, matmul, rref


def _sign(k: int) -> int:
    return -1 if k % 2 else 1


@dataclass
class Cocycle:
    """A cochain P_n -> A stored by its values on words, shape (G_n, d)."""

    bar: BarResolution
    degree: int
    values: np.ndarray

    def __post_init__(self):
        g, d = self.bar.rank(self.degree), self.bar.algebra.dim
        self.values = np.mod(np.asarray(self.values, dtype=np.int64).reshape(g, d), self.bar.p)

    @property
    def flat(self) -> np.ndarray:
        return self.values.reshape(-1)

    def __add__(self, other):
        self._check(other)
        return Cocycle(self.bar, self.degree, self.values + other.values)

    def __sub__(self, other):
        self._check(other)
        return Cocycle(self.bar, self.degree, self.values - other.values)

    def __neg__(self):
        return self.scale(-1)

    def scale(self, c: int):
        return Cocycle(self.bar, self.degree, c * self.values)

    def _check(self, other):
        if other.degree != self.degree:
            raise ValidationError(f"degree mismatch: {self.degree} vs {other.degree}")

    def is_zero(self) -> bool:
        return not np.any(self.values)

    def is_closed(self) -> bool:
        if self.degree >= self.bar.N:
            raise TruncationError(f"closedness in degree {self.degree} needs P_{self.degree + 1}; increase N", self.degree)
        return not np.any(matmul(self.bar.dual_differential(self.degree), self.flat, self.bar.p))

    def as_map(self):
        return self.bar.cochain_map(self.degree, self.values)

    def compose(self, images, i: int) -> "Cocycle":
        """f o phi for phi : P_i -> P_n given by generator images."""
        return Cocycle(self.bar, i, self.bar.compose_cochain(self.values, self.degree, images, i))

    def __repr__(self):
        return f"Cocycle(degree={self.degree}, values={self.values.tolist()})"


@dataclass
class ExtBasis:
    degree: int
    cocycles: np.ndarray      # kernel basis, columns in flat coordinates
    coboundaries: np.ndarray  # image basis
    representatives: np.ndarray  # cocycles completing the coboundaries to a basis of the kernel

    @property
    def dim(self) -> int:
        return self.representatives.shape[1]


class HochschildCohomology:
    """Cohomology of Hom(P, A) with cached per-degree bases."""

    def __init__(self, bar: BarResolution):
        self.bar = bar
        self.p = bar.p
        self._bases = {}
        self._solvers = {}

    def basis(self, n: int) -> ExtBasis:
        if n < 0:
            raise ValidationError("negative degree")
        if n >= self.bar.N:
            raise TruncationError(f"HH^{n} needs P_{n + 1}; the window stops at {self.bar.N}", n)
        if n not in self._bases:
            bar, p = self.bar, self.p
            size = bar.rank(n) * bar.algebra.dim
            z = kernel_basis(bar.dual_differential(n), p) if size else np.zeros((0, 0), dtype=np.int64)
            if n == 0 or size == 0:
                b = np.zeros((size, 0), dtype=np.int64)
            else:
                b = image_basis(bar.dual_differential(n - 1), p)
            # representatives: kernel columns that are pivots after the coboundaries
            both = np.concatenate([b, z], axis=1)
            _, piv = rref(both, p) if both.size else (None, [])
            reps = [c - b.shape[1] for c in piv if c >= b.shape[1]]
            h = z[:, reps] if reps else np.zeros((size, 0), dtype=np.int64)
            self._bases[n] = ExtBasis(n, z, b, h)
        return self._bases[n]

    def dims(self, top: int) -> dict:
        return {n: self.basis(n).dim for n in range(top + 1)}

    def basis_cocycles(self, n: int) -> list:
        h = self.basis(n).representatives
        return [Cocycle(self.bar, n, h[:, j]) for j in range(h.shape[1])]

    def _solver(self, n: int) -> Solver:
        if n not in self._solvers:
            e = self.basis(n)
            self._solvers[n] = Solver(np.concatenate([e.representatives, e.coboundaries], axis=1), self.p)
        return self._solvers[n]

    def coordinates(self, f: Cocycle) -> np.ndarray:
        """Coordinates of the class of f in the pinned basis."""
        e = self.basis(f.degree)
        if not f.is_closed():
            raise ValidationError(f"cochain of degree {f.degree} is not closed")
        x = self._solver(f.degree).solve(f.flat)
        if x is None:
            raise ValidationError("cocycle outside the span of the stored basis")
        return np.mod(x[:e.dim], self.p)

    def is_coboundary(self, f: Cocycle) -> bool:
        if f.degree == 0:
            return f.is_zero()
        b = self.basis(f.degree).coboundaries
        if b.shape[1] == 0:
            return f.is_zero()
        return Solver(b, self.p).solve(f.flat) is not None

    def class_equal(self, f: Cocycle, g: Cocycle) -> bool:
        if f.degree != g.degree:
            raise ValidationError("class_equal needs equal degrees")
        return self.is_coboundary(f - g)

    def coboundary_of(self, n: int, values) -> Cocycle:
        """The coboundary h o d of a degree n-1 cochain h."""
        bar = self.bar
        return Cocycle(bar, n, matmul(bar.dual_differential(n - 1), np.asarray(values).reshape(-1), self.p))


def cup(f: Cocycle, g: Cocycle, diag: Diagonal) -> Cocycle:
    """(-1)^(mn) (f (x) g) Delta; the Koszul sign of f (x) g cancels the prefactor."""
    bar = f.bar
    if g.bar is not bar or diag.bar is not bar:
        raise ValidationError("cup needs cocycles on the same resolution")
    m, n = f.degree, g.degree
    i = m + n
    if i > diag.top:
        raise TruncationError(f"cup product needs degree {i}", i)
    A = bar.algebra
    d = A.dim
    if diag.kind == "aw":
        R = bar.r ** n
        t = np.arange(bar.rank(i))
        if t.size == 0:
            return Cocycle(bar, i, np.zeros((0, d)))
        out = np.einsum("tx,ty,xyz->tz", f.values[t // R], g.values[t % R], A.mult)
        return Cocycle(bar, i, out)
    X = diag.block(i, m).reshape(d, bar.rank(m), d, bar.rank(n), d, bar.rank(i))
    out = np.einsum("agchbt,gy,aycz,hw,zwbo->to", X, f.values, A.mult3, g.values, A.mult3, optimize=True)
    return Cocycle(bar, i, out)


def circle(f: Cocycle, g: Cocycle) -> Cocycle:
    """f o g = sum_i (-1)^((k-1)(i-1)) f(a_1..a_{i-1}, g(a_i..a_{i+k-1}), ...),
    with values of g projected to the reduced basis (normalized cochains)."""
    bar = f.bar
    m, k = f.degree, g.degree
    n = m + k - 1
    r = bar.r
    A = bar.algebra
    G = bar.rank(n)
    out = np.zeros((G, A.dim), dtype=np.int64)
    if G == 0:
        return Cocycle(bar, n, out)
    digits = np.array(np.unravel_index(np.arange(G), (r,) * n)).T.reshape(G, n) if n else np.zeros((1, 0), dtype=np.int64)
    red_g = matmul(g.values, A.reduction.T, bar.p)  # (G_k, r)
    place_k = r ** np.arange(k - 1, -1, -1)
    place_m = r ** np.arange(m - 1, -1, -1)
    for i in range(1, m + 1):
        inner = digits[:, i - 1:i - 1 + k] @ place_k
        coeffs = red_g[inner]  # (G, r)
        for s in range(r):
            word = np.concatenate([digits[:, :i - 1], np.full((G, 1), s), digits[:, i - 1 + k:]], axis=1)
            idx = word @ place_m
            out += _sign((k - 1) * (i - 1)) * coeffs[:, s:s + 1] * f.values[idx]
    return Cocycle(bar, n, out)


def oracle_gerstenhaber(f: Cocycle, g: Cocycle) -> Cocycle:
    """Classical bracket f o g - (-1)^((m-1)(k-1)) g o f on normalized cochains."""
    m, k = f.degree, g.degree
    if m < 0 or k < 0 or m + k < 1:
        raise ValidationError("the circle-product oracle needs degrees >= 0, not both 0")
    return circle(f, g) - circle(g, f).scale(_sign((m - 1) * (k - 1)))
