"""Homotopy liftings psi_f and the bracket [f, g] = f psi_g - (-1)^((m-1)(k-1)) g psi_f.

A lifting of a degree n cocycle f is stored by the generator images of its
components psi_i : P_i -> P_{i-n+1}.  Solving is degree by degree through the
differential of P; the component psi_{n-1} lands in P_0 and alone decides
mu psi_f.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .bar import BarResolution, Diagonal
from .bimodule import BimoduleMap
from .chain import GradedMorphism
from .errors import TruncationError, ValidationError
from .ext import Cocycle, HochschildCohomology
from .linalg import matmul


def _sign(k: int) -> int:
    return -1 if k % 2 else 1


@dataclass
class HomotopyLifting:
    cocycle: Cocycle
    diagonal: Diagonal
    components: dict  # i -> generator images in P_{i-n+1}, shape (dim, G_i)
    top: int
    normalized: bool = False
    correction: bool = field(default=False)  # whether the normalization step changed psi

    @property
    def degree(self) -> int:
        return self.cocycle.degree - 1

    @property
    def bar(self) -> BarResolution:
        return self.cocycle.bar

    def component(self, i: int) -> np.ndarray:
        if i > self.top:
            raise TruncationError(f"lifting solved up to degree {self.top}, asked for {i}", i)
        if i not in self.components:
            bar = self.bar
            tgt = i - self.degree
            dim = bar.module(tgt).dim if 0 <= tgt <= bar.N else 0
            return np.zeros((dim, bar.rank(i)), dtype=np.int64)
        return self.components[i]

    def morphism(self) -> GradedMorphism:
        bar = self.bar
        comps = {i: BimoduleMap(bar.module(i), bar.module(i - self.degree), images=x)
                 for i, x in self.components.items()}
        return GradedMorphism(bar.complex, bar.complex, self.degree, comps)

    def residuals(self) -> list:
        """Degrees where d psi - (-1)^(n-1) psi d differs from (f (x) 1 - 1 (x) f) Delta."""
        bar, n = self.bar, self.cocycle.degree
        bad = []
        for i in range(max(n, 0), self.top + 1):
            lhs = matmul(bar.diff(i - n + 1).matrix, self.component(i), bar.p) if i - n + 1 >= 1 else 0
            if i >= 1:
                lhs = lhs - _sign(n - 1) * _psi_d(self, i)
            rhs = self.diagonal.lifting_rhs(i, n, self.cocycle.values)
            if np.any(np.mod(lhs - rhs, bar.p)):
                bad.append(i)
        return bad

    def satisfies_equation(self) -> bool:
        return not self.residuals()

    def mu_values(self) -> np.ndarray:
        """mu_P psi_f as word values on P_{n-1} (zero when n < 1)."""
        bar, n = self.bar, self.cocycle.degree
        if n < 1:
            return np.zeros((0, bar.algebra.dim), dtype=np.int64)
        return _mu(bar, self.component(n - 1))

    def mu_is_zero(self) -> bool:
        return not np.any(self.mu_values())


def _mu(bar: BarResolution, images) -> np.ndarray:
    """Word values of mu o phi for phi with generator images in P_0."""
    d = bar.algebra.dim
    X = np.asarray(images).reshape(d, 1, d, -1)
    return np.mod(np.einsum("axbt,abc->tc", X, bar.algebra.mult), bar.p)


def _psi_d(lift: HomotopyLifting, i: int) -> np.ndarray:
    """psi_{i-1} d_{i-1} on generators of P_i."""
    bar, l = lift.bar, lift.degree
    if i - 1 < max(l, 0) or i - 1 - l < 0:
        return np.zeros((bar.module(i - l).dim if i - l >= 0 else 0, bar.rank(i)), dtype=np.int64)
    prev = lift.component(i - 1)
    return bar.apply(prev, i - 1, i - 1 - l, bar.diff(i).images)


def _unit_lift(bar: BarResolution, values) -> np.ndarray:
    """Generator images in P_0 = A (x) A of z(g) (x) 1, a lift of z through mu."""
    A = bar.algebra
    d = A.dim
    z = np.asarray(values, dtype=np.int64)
    out = np.zeros((d, 1, d, z.shape[0]), dtype=np.int64)
    out[:, 0, :, :] = np.einsum("ta,b->abt", z, A.unit)
    return np.mod(out.reshape(d * d, -1), bar.p)


def _solve_up(bar: BarResolution, l: int, start: dict, lo: int, top: int, rhs_fn, rng=None) -> dict:
    """Solve d x_i = rhs_fn(i) + (-1)^l x_{i-1} d_{i-1} for i = lo..top."""
    comps = dict(start)
    sgn = _sign(l)
    for i in range(lo, top + 1):
        tgt = i - l
        rhs = rhs_fn(i)
        if i - 1 in comps and i - 1 - l >= 0:
            rhs = rhs + sgn * bar.apply(comps[i - 1], i - 1, i - 1 - l, bar.diff(i).images)
        rhs = np.mod(rhs, bar.p)
        if tgt - 1 < 0:
            if np.any(rhs):
                raise ValidationError(f"inconsistent lifting equation in degree {i}")
            continue
        solver = bar.complex.solver(tgt - 1)
        x = solver.solve(rhs)
        if x is None:
            raise TruncationError(f"no solution for the lifting component in degree {i}", i)
        if rng is not None:
            ker = solver.kernel()
            if ker.shape[1]:
                x = x + matmul(ker, rng.integers(0, bar.p, size=(ker.shape[1], x.shape[1])), bar.p)
        comps[i] = np.mod(x, bar.p)
    return comps


def solve_homotopy_lifting(f: Cocycle, diag: Diagonal, top: int | None = None, rng=None,
                           normalize: bool = True) -> HomotopyLifting:
    """Solve d(psi) = (f (x) 1 - 1 (x) f) Delta degree by degree.

    With ``rng`` the solution is randomized: psi_{n-1} is a lift of a random
    cocycle and every component gets a random kernel element.  ``normalize``
    then subtracts a chain map Phi with mu Phi = mu psi, so mu psi = 0.
    """
    bar, n = f.bar, f.degree
    if diag.bar is not bar:
        raise ValidationError("cocycle and diagonal live on different resolutions")
    if not diag.is_strict_counital():
        raise ValidationError("homotopy liftings need a strictly counital diagonal; symmetrize it first")
    top = min(bar.N, diag.top, bar.N + n - 1) if top is None else top
    if top > min(bar.N, diag.top) or top - n + 1 > bar.N:
        raise TruncationError(f"lifting window {top} exceeds the resolution window", top)
    if n < bar.N and not f.is_closed():
        raise ValidationError(f"degree {n} cochain is not a cocycle")
    l = n - 1
    start = {}
    if n >= 1 and rng is not None:
        H = HochschildCohomology(bar)
        Z = H.basis(n - 1).cocycles if n - 1 < bar.N else np.zeros((bar.rank(n - 1) * bar.algebra.dim, 0))
        z = matmul(Z, rng.integers(0, bar.p, size=Z.shape[1]), bar.p) if Z.shape[1] else np.zeros(Z.shape[0], dtype=np.int64)
        x = _unit_lift(bar, z.reshape(bar.rank(n - 1), -1))
        start[n - 1] = x
    comps = _solve_up(bar, l, start, max(n, 0), top, lambda i: diag.lifting_rhs(i, n, f.values), rng)
    lift = HomotopyLifting(f, diag, comps, top)
    if normalize and n >= 1:
        z = lift.mu_values()
        if np.any(z):
            chi = _solve_up(bar, l, {n - 1: _unit_lift(bar, z)}, n, top,
                            lambda i: np.zeros((bar.module(i - l - 1).dim if i - l - 1 >= 0 else 0, bar.rank(i)), dtype=np.int64))
            lift.components = {i: np.mod(lift.component(i) - chi.get(i, 0), bar.p) for i in set(comps) | set(chi)}
            lift.correction = True
        lift.normalized = lift.mu_is_zero()
    elif n < 1:
        lift.normalized = True
    return lift


def bracket(f: Cocycle, g: Cocycle, psi_f: HomotopyLifting, psi_g: HomotopyLifting) -> Cocycle:
    """[f, g] = f psi_g - (-1)^((m-1)(k-1)) g psi_f, a cocycle of degree m+k-1."""
    if psi_f.cocycle is not f and not np.array_equal(psi_f.cocycle.values, f.values):
        raise ValidationError("lifting does not belong to the first cocycle")
    if psi_g.cocycle is not g and not np.array_equal(psi_g.cocycle.values, g.values):
        raise ValidationError("lifting does not belong to the second cocycle")
    if psi_f.diagonal is not psi_g.diagonal:
        raise ValidationError("liftings were solved for different diagonals")
    bar = f.bar
    m, k = f.degree, g.degree
    i = m + k - 1
    if i < 0:
        raise ValidationError("bracket of two degree 0 classes is zero by degree")
    a = bar.compose_cochain(f.values, m, psi_g.component(i), i)
    b = bar.compose_cochain(g.values, k, psi_f.component(i), i)
    return Cocycle(bar, i, a - _sign((m - 1) * (k - 1)) * b)


class GerstenhaberEngine:
    """Caches liftings of basis cocycles and evaluates brackets of classes."""

    def __init__(self, bar: BarResolution, diag: Diagonal | None = None):
        from .bar import alexander_whitney_diagonal
        self.bar = bar
        self.diag = diag if diag is not None else alexander_whitney_diagonal(bar)
        self.cohomology = HochschildCohomology(bar)
        self._lifts = {}

    def lifting(self, f: Cocycle, top: int | None = None) -> HomotopyLifting:
        key = (f.degree, f.values.tobytes(), top)
        if key not in self._lifts:
            self._lifts[key] = solve_homotopy_lifting(f, self.diag, top)
        return self._lifts[key]

    def remember(self, lift: HomotopyLifting, top: int | None):
        """Register a lifting computed elsewhere (e.g. read from a cache)."""
        f = lift.cocycle
        self._lifts[(f.degree, f.values.tobytes(), top)] = lift

    def stored_liftings(self) -> list:
        return [(key[2], lift) for key, lift in self._lifts.items()]

    def bracket(self, f: Cocycle, g: Cocycle) -> Cocycle:
        # full-window liftings, so one cached lifting serves every partner degree
        return bracket(f, g, self.lifting(f), self.lifting(g))

    def structure_constants(self, m: int, k: int) -> np.ndarray:
        """Matrix with one row per pair (i, j) of basis classes in degrees (m, k):
        the coordinates of [e_i, e_j] in the basis of HH^(m+k-1)."""
        H = self.cohomology
        rows = []
        for f in H.basis_cocycles(m):
            for g in H.basis_cocycles(k):
                rows.append(H.coordinates(self.bracket(f, g)))
        dim = H.basis(m + k - 1).dim
        return np.array(rows, dtype=np.int64).reshape(-1, dim)
