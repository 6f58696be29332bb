"""n-extensions of bimodules and the chain-level constructions on them.

An n-extension of X by Y is an exact complex Y -> E_{n-1} -> ... -> E_0 -> X,
stored as a Complex in degrees 0..n (E_n = Y) with the augmentation mu.  For
the Ext interpretation of Hochschild cohomology X = Y = A, and equality of
extensions is always tested through the class of a lifted cocycle.
"""

from dataclasses import dataclass, field

import numpy as np

from .bar import BarResolution
from .bimodule import (
    Bimodule,
    BimoduleMap,
    block_map,
    direct_sum,
    inverse,
    is_isomorphism,
    pullback,
    pushout,
    quotient,
    tensor_over_algebra,
    left_unitor,
)
from .chain import (
    Complex,
    GradedMorphism,
    ResolutionData,
    boundary,
    left_unitor_complex,
    lift_through_resolution,
    null_homotopy,
    right_unitor_complex,
    tensor_complexes,
    tensor_morphisms,
)
from .errors import TruncationError, ValidationError, VerificationError
from .ext import Cocycle
from .linalg import image_basis, rank


def _sign(k: int) -> int:
    return -1 if k % 2 else 1


class NExtension:
    """Exact sequence Y -> E_{n-1} -> ... -> E_0 -> X held as a complex plus mu.

    ``data`` keeps the witnesses of how the extension was built (pullbacks,
    pushouts, summands) so that morphisms can be transported along them.
    """

    def __init__(self, complex: Complex, mu: BimoduleMap, name: str = "", data: dict | None = None):
        if complex.lo != 0:
            raise ValidationError("an n-extension lives in degrees 0..n")
        self.complex = complex
        self.mu = mu
        self.n = complex.hi
        self.name = name or complex.name
        self.data = dict(data or {})
        if self.n < 1:
            raise ValidationError("n-extensions need n >= 1")

    def __repr__(self):
        dims = [self.complex.obj(i).dim for i in range(self.n + 1)]
        return f"NExtension({self.name or '?'}, n={self.n}, dims={dims})"

    @property
    def algebra(self):
        return self.complex.algebra

    @property
    def X(self) -> Bimodule:
        return self.mu.target

    @property
    def Y(self) -> Bimodule:
        return self.complex.obj(self.n)

    def obj(self, i: int) -> Bimodule:
        return self.complex.obj(i)

    def d(self, i: int) -> BimoduleMap:
        return self.complex.d(i)

    @property
    def iota(self) -> BimoduleMap:
        return self.complex.d(self.n - 1)

    def below(self, i: int) -> BimoduleMap:
        """The map out of degree i: d_{i-1}, or mu when i = 0."""
        return self.mu if i == 0 else self.d(i - 1)

    def resolution(self) -> ResolutionData:
        return ResolutionData(self.complex, self.mu, self.X)

    def homology(self) -> dict:
        return self.resolution().homology(self.n + 1)

    def is_exact(self) -> bool:
        try:
            self.check()
        except VerificationError:
            return False
        return True

    def check(self):
        """Raise VerificationError unless the augmented sequence is exact."""
        self.complex.check()
        self.resolution().check(self.n + 1)
        return self

    def signed(self, c: int) -> "NExtension":
        """(E, phi, c mu); c = -1 gives the negative of a class."""
        return NExtension(self.complex, self.mu.scale(c), name=f"{c}*{self.name}", data=self.data)

    def unit_complex(self, end: str = "Y") -> Complex:
        return Complex.concentrated(self.Y if end == "Y" else self.X, 0, name="1")

    def pi(self) -> GradedMorphism:
        """pi_E : E -> Y of degree n (identity in degree n)."""
        return GradedMorphism(self.complex, self.unit_complex(), self.n, {self.n: BimoduleMap.identity(self.Y)})

    def kappa(self) -> GradedMorphism:
        """kappa_E : Y -> E of degree -n, so that pi_E kappa_E = 1."""
        unit = self.unit_complex()
        return GradedMorphism(unit, self.complex, -self.n, {0: BimoduleMap(unit.obj(0), self.Y, np.eye(self.Y.dim, dtype=np.int64))})

    def iota_kappa(self) -> GradedMorphism:
        """iota_E kappa_E : Y -> E of degree 1 - n."""
        unit = self.unit_complex()
        return GradedMorphism(unit, self.complex, 1 - self.n, {0: self.iota})

    def mu_morphism(self) -> GradedMorphism:
        """mu_E : E -> X as a degree 0 morphism to the concentrated complex."""
        return GradedMorphism(self.complex, self.unit_complex("X"), 0, {0: self.mu})


def _ext_from(objects: dict, diffs: dict, mu: BimoduleMap, algebra, name: str, data=None) -> NExtension:
    return NExtension(Complex(algebra, objects, diffs, name=name), mu, name=name, data=data)


def identity_morphism(E: NExtension) -> GradedMorphism:
    return GradedMorphism.identity(E.complex)


def extension_morphism_failures(u: GradedMorphism, E: NExtension, F: NExtension) -> list:
    """Reasons why u : E -> F is not a morphism of n-extensions (empty when it is)."""
    bad = []
    if E.n != F.n:
        return [f"degrees differ: {E.n} vs {F.n}"]
    if u.degree != 0:
        bad.append("morphism has nonzero degree")
    chain = boundary(u).mismatches(None, range(0, E.n + 1))
    if chain:
        bad.append(f"not a chain map in degrees {chain}")
    if not (F.mu @ u.comp(0)).equals(E.mu):
        bad.append("mu_F u_0 != mu_E")
    top = u.comp(E.n).matrix
    if top.shape[0] != top.shape[1] or np.any(top != np.eye(top.shape[0], dtype=np.int64)):
        bad.append("top component is not the identity")
    return bad


@dataclass
class ExtensionMorphism:
    source: NExtension
    target: NExtension
    map: GradedMorphism

    def failures(self) -> list:
        return extension_morphism_failures(self.map, self.source, self.target)

    def is_valid(self) -> bool:
        return not self.failures()

    def __matmul__(self, other: "ExtensionMorphism") -> "ExtensionMorphism":
        return ExtensionMorphism(other.source, self.target, self.map @ other.map)

    def comp(self, i: int) -> BimoduleMap:
        return self.map.comp(i)


@dataclass
class LoopWord:
    """A word of morphisms with direction flags (+1 forward, -1 inverse).

    Reading left to right, each step moves from the current extension along
    its morphism (or against it when inverted); the word is closed when it
    ends where it started.
    """

    base: NExtension
    steps: list = field(default_factory=list)  # (ExtensionMorphism, +1 | -1)

    def endpoints(self) -> list:
        cur = self.base
        path = [cur]
        for m, direction in self.steps:
            start, end = (m.source, m.target) if direction > 0 else (m.target, m.source)
            if start is not cur:
                raise ValidationError("loop word is not composable")
            cur = end
            path.append(cur)
        return path

    def is_closed(self) -> bool:
        return self.endpoints()[-1] is self.base


# classes of extensions --------------------------------------------------------------


def _require_unit_ends(E: NExtension):
    a = E.algebra
    if E.X.dim != a.dim or E.Y.dim != a.dim:
        raise ValidationError("the extension must start and end at the algebra")


def lift_to_extension(bar: BarResolution, E: NExtension) -> GradedMorphism:
    """A morphism of resolutions P -> E over the identity of A."""
    _require_unit_ends(E)
    if E.n > bar.N:
        raise TruncationError(f"lifting to an {E.n}-extension needs P_{E.n}; increase N", E.n)
    return lift_through_resolution(bar.resolution, E.resolution(), top=E.n)


def cocycle_of_extension(bar: BarResolution, E: NExtension) -> Cocycle:
    """The degree-n component of a lift P -> E, read as a cochain P_n -> A."""
    F = lift_to_extension(bar, E)
    return Cocycle(bar, E.n, F.comp(E.n).images.T)


# K(f) ---------------------------------------------------------------------------


@dataclass
class KExtension:
    """K(f) together with theta_f, iota_f and Phi_f : P -> K(f)."""

    extension: NExtension
    cocycle: Cocycle
    theta: BimoduleMap
    pushout: object
    Phi: GradedMorphism

    @property
    def iota(self) -> BimoduleMap:
        return self.extension.iota

    @property
    def n(self) -> int:
        return self.extension.n


def k_of_cocycle(f: Cocycle) -> KExtension:
    """Push the resolution out along f : P_n -> A."""
    bar, n = f.bar, f.degree
    if n < 1:
        raise ValidationError("K(f) needs a cocycle of degree at least 1")
    if n > bar.N:
        raise TruncationError(f"K(f) needs P_{n}; increase N", n)
    if n < bar.N and not f.is_closed():
        raise ValidationError("K(f) needs a cocycle")
    P = bar.complex
    fmap = f.as_map()
    po = pushout(P.d(n - 1), fmap)
    K = po.module
    theta, iota = po.from_first, po.from_second
    objects = {i: P.obj(i) for i in range(n - 1)}
    objects[n - 1] = K
    objects[n] = bar.unit
    diffs = {i: P.d(i) for i in range(n - 2)}
    diffs[n - 1] = iota
    zero = BimoduleMap(bar.unit, P.obj(n - 2) if n >= 2 else bar.unit)
    if n >= 2:
        diffs[n - 2] = po.mediate(P.d(n - 2), zero)
        mu = bar.mu
    else:
        # n = 1: the pushout sits in degree 0 and the augmentation is induced
        mu = po.mediate(bar.mu, BimoduleMap(bar.unit, bar.unit))
    E = _ext_from(objects, diffs, mu, bar.algebra, f"K{n}", data={"pushout": po})
    comps = {i: BimoduleMap.identity(P.obj(i)) for i in range(n - 1)}
    comps[n - 1] = theta
    comps[n] = fmap
    Phi = GradedMorphism(P, E.complex, 0, comps)
    return KExtension(E, f, theta, po, Phi)


# sigma, pullback, pushout, Baer sum -----------------------------------------------


def sigma(algebra, n: int, X: Bimodule | None = None, Y: Bimodule | None = None) -> NExtension:
    """The split n-extension Y -> Y -> 0 ... 0 -> X -> X (Y -> X (+) Y -> X for n = 1)."""
    from .bimodule import unit_bimodule
    if n < 1:
        raise ValidationError("sigma_n needs n >= 1")
    X = X if X is not None else unit_bimodule(algebra)
    Y = Y if Y is not None else (X if X.dim == algebra.dim and getattr(X, "is_unit", False) else unit_bimodule(algebra))
    if n == 1:
        ds = direct_sum(X, Y)
        objects = {0: ds.module, 1: Y}
        diffs = {0: ds.column(BimoduleMap(Y, X), BimoduleMap.identity(Y))}
        mu = ds.row(BimoduleMap.identity(X), BimoduleMap(Y, X))
        return _ext_from(objects, diffs, mu, algebra, "sigma1", {"sum": ds})
    objects = {0: X, n - 1: Y, n: Y}
    diffs = {n - 1: BimoduleMap.identity(Y)}
    return _ext_from(objects, diffs, BimoduleMap.identity(X), algebra, f"sigma{n}")


def pull_back(E: NExtension, alpha: BimoduleMap) -> tuple[NExtension, GradedMorphism]:
    """E alpha for alpha : X' -> X, with the canonical morphism E alpha -> E."""
    pb = pullback(E.mu, alpha)
    objects = dict(E.complex.objects)
    objects[0] = pb.module
    diffs = dict(E.complex.diffs)
    diffs[0] = pb.mediate(BimoduleMap(E.obj(1), alpha.source), E.d(0))
    EA = _ext_from(objects, diffs, pb.to_first, E.algebra, f"{E.name}a", {"pullback": pb, "parent": E})
    comps = {i: BimoduleMap.identity(E.obj(i)) for i in range(1, E.n + 1)}
    comps[0] = pb.to_second
    return EA, GradedMorphism(EA.complex, E.complex, 0, comps)


def push_out(beta: BimoduleMap, E: NExtension) -> tuple[NExtension, GradedMorphism]:
    """beta E for beta : Y -> Y', with the canonical morphism E -> beta E.

    For n = 1 the pushout lands in degree 0 and induces the new augmentation.
    """
    n = E.n
    po = pushout(E.iota, beta)
    objects = dict(E.complex.objects)
    objects[n - 1] = po.module
    objects[n] = beta.target
    diffs = dict(E.complex.diffs)
    diffs[n - 1] = po.from_second
    mu = E.mu
    if n >= 2:
        diffs[n - 2] = po.mediate(E.d(n - 2), BimoduleMap(beta.target, E.obj(n - 2)))
    else:
        mu = po.mediate(E.mu, BimoduleMap(beta.target, E.X))
    BE = _ext_from(objects, diffs, mu, E.algebra, f"b{E.name}", {"pushout": po, "parent": E})
    comps = {i: BimoduleMap.identity(E.obj(i)) for i in range(0, n - 1)}
    comps[n - 1] = po.from_first
    comps[n] = beta
    return BE, GradedMorphism(E.complex, BE.complex, 0, comps)


def act(beta: BimoduleMap, E: NExtension, alpha: BimoduleMap) -> NExtension:
    """beta E alpha, computed as beta (E alpha)."""
    EA, _ = pull_back(E, alpha)
    BEA, _ = push_out(beta, EA)
    BEA.data.update({"pulled": EA})
    return BEA


def pull_morphism(w: GradedMorphism, EA: NExtension, FA: NExtension) -> GradedMorphism:
    """w alpha : E alpha -> F alpha induced by w : E -> F (both pulled along alpha)."""
    comps = dict(w.components)
    comps[0] = FA.data["pullback"].mediate(EA.mu, w.comp(0) @ EA.data["pullback"].to_second)
    return GradedMorphism(EA.complex, FA.complex, 0, comps)


def push_morphism(w: GradedMorphism, BE: NExtension, BF: NExtension) -> GradedMorphism:
    """beta w : beta E -> beta F induced by w : E -> F with w_n the identity."""
    n = BE.n
    po_e, po_f = BE.data["pushout"], BF.data["pushout"]
    comps = dict(w.components)
    comps[n - 1] = po_e.mediate(po_f.from_first @ w.comp(n - 1), po_f.from_second)
    comps[n] = BimoduleMap.identity(BF.Y)
    return GradedMorphism(BE.complex, BF.complex, 0, comps)


def act_morphism(w: GradedMorphism, BEA: NExtension, BFA: NExtension) -> GradedMorphism:
    """beta w alpha between two results of ``act`` with the same beta and alpha."""
    pulled = pull_morphism(w, BEA.data["pulled"], BFA.data["pulled"])
    return push_morphism(pulled, BEA, BFA)


def direct_sum_extension(E: NExtension, F: NExtension) -> NExtension:
    if E.n != F.n:
        raise ValidationError(f"extensions of different degrees {E.n} and {F.n}")
    sums = {i: direct_sum(E.obj(i), F.obj(i)) for i in range(E.n + 1)}
    objects = {i: s.module for i, s in sums.items()}
    diffs = {i: block_map(sums[i + 1], sums[i], [[E.d(i), None], [None, F.d(i)]]) for i in range(E.n)}
    xs = direct_sum(E.X, F.X)
    mu = block_map(sums[0], xs, [[E.mu, None], [None, F.mu]])
    return _ext_from(objects, diffs, mu, E.algebra, f"({E.name}+{F.name})",
                     {"sums": sums, "xsum": xs, "summands": (E, F)})


def direct_sum_morphism(u: GradedMorphism, v: GradedMorphism, S: NExtension, T: NExtension) -> GradedMorphism:
    s, t = S.data["sums"], T.data["sums"]
    comps = {i: block_map(s[i], t[i], [[u.comp(i), None], [None, v.comp(i)]]) for i in range(S.n + 1)}
    return GradedMorphism(S.complex, T.complex, 0, comps)


def baer_sum(E: NExtension, F: NExtension) -> NExtension:
    """E + F = (1 1)(E (+) F)(1;1)."""
    if E.n != F.n:
        raise ValidationError(f"extensions of different degrees {E.n} and {F.n}")
    if E.X.dim != F.X.dim or E.Y.dim != F.Y.dim:
        raise ValidationError("Baer sum needs common end terms")
    D = direct_sum_extension(E, F)
    xs = D.data["xsum"]
    ys = D.data["sums"][E.n]
    diag = xs.column(BimoduleMap.identity(E.X), BimoduleMap.identity(E.X))
    codiag = ys.row(BimoduleMap.identity(E.Y), BimoduleMap.identity(E.Y))
    S = act(codiag, D, diag)
    S.name = f"{E.name}+{F.name}"
    S.data["direct"] = D
    return S


def baer_sum_morphism(u: GradedMorphism, v: GradedMorphism, S: NExtension, T: NExtension) -> GradedMorphism:
    """u + v : E + F -> E' + F' for morphisms u : E -> E', v : F -> F'."""
    w = direct_sum_morphism(u, v, S.data["direct"], T.data["direct"])
    return act_morphism(w, S, T)


def sigma_embedding(E: NExtension, S: NExtension) -> GradedMorphism:
    """The isomorphism E -> sigma_n + E, S = baer_sum(sigma_n, E)."""
    n = E.n
    D = S.data["direct"]
    sig = D.data["summands"][0]
    sums = D.data["sums"]
    comps = {}
    for i in range(n + 1):
        if i == 0:
            into_sigma = sig.data["sum"].column(E.mu, BimoduleMap(E.obj(0), E.Y)) if n == 1 else E.mu
        elif i == n - 1 or i == n:
            into_sigma = BimoduleMap(E.obj(i), sig.obj(i))
        else:
            into_sigma = BimoduleMap(E.obj(i), sig.obj(i))
        comps[i] = sums[i].column(into_sigma, BimoduleMap.identity(E.obj(i)))
    w = GradedMorphism(E.complex, D.complex, 0, comps)
    pulled = S.data["pulled"]
    pb = pulled.data["pullback"]
    comps = dict(w.components)
    comps[0] = pb.mediate(E.mu, w.comp(0))
    po = S.data["pushout"]
    top = n - 1
    comps[top] = po.from_first @ comps[top]
    comps[n] = BimoduleMap(E.Y, S.Y, np.eye(E.Y.dim, dtype=np.int64))
    return GradedMorphism(E.complex, S.complex, 0, comps)


# splices and tensor products -------------------------------------------------------


def splice(upper: NExtension, lower: NExtension) -> NExtension:
    """upper # lower: the Yoneda splice joined by iota_lower mu_upper."""
    if upper.X.dim != lower.Y.dim:
        raise ValidationError("splice endpoints do not match")
    n, m = lower.n, upper.n
    objects = {i: lower.obj(i) for i in range(n)}
    objects.update({n + j: upper.obj(j) for j in range(m + 1)})
    diffs = {i: lower.d(i) for i in range(n - 1)}
    diffs[n - 1] = BimoduleMap(upper.obj(0), lower.obj(n - 1), (lower.iota @ upper.mu).matrix)
    diffs.update({n + j: upper.d(j) for j in range(m)})
    return _ext_from(objects, diffs, lower.mu, lower.algebra, f"{upper.name}#{lower.name}",
                     {"upper": upper, "lower": lower})


def tensor_extensions(E: NExtension, F: NExtension, check: bool = True) -> NExtension:
    """E (x) F with augmentation mu_E (x) mu_F and top term identified with A.

    ``data['raw']`` is the tensor complex itself and ``data['to_ext']`` /
    ``data['from_ext']`` the identifications between the two.
    """
    _require_unit_ends(E)
    _require_unit_ends(F)
    alg = E.algebra
    T = tensor_complexes(E.complex, F.complex)
    top = E.n + F.n
    tp0 = T.products[(0, 0)]
    ends = tensor_over_algebra(E.X, F.X)
    mu = left_unitor(ends) @ BimoduleMap(tp0.module, ends.module, ends.pair(E.mu(tp0.section[0]), F.mu(tp0.section[1])))
    mu = mu @ T.projection(0, 0)
    tpt = T.products[(E.n, F.n)]
    unitor = left_unitor(tpt) @ T.projection(E.n, F.n)  # (E(x)F)_top -> A
    Y = E.Y
    objects = {i: T.obj(i) for i in range(top)}
    objects[top] = Y
    diffs = {i: T.d(i) for i in range(top - 1)}
    diffs[top - 1] = T.d(top - 1) @ inverse(unitor)
    ext = _ext_from(objects, diffs, mu, alg, f"{E.name}(x){F.name}", {"raw": T, "factors": (E, F)})
    to_comps = {i: BimoduleMap(T.obj(i), ext.obj(i), np.eye(T.obj(i).dim, dtype=np.int64)) for i in range(top)}
    to_comps[top] = unitor
    from_comps = {i: BimoduleMap(ext.obj(i), T.obj(i), np.eye(T.obj(i).dim, dtype=np.int64)) for i in range(top)}
    from_comps[top] = inverse(unitor)
    ext.data["to_ext"] = GradedMorphism(T, ext.complex, 0, to_comps)
    ext.data["from_ext"] = GradedMorphism(ext.complex, T, 0, from_comps)
    if check:
        try:
            ext.check()
        except VerificationError as e:
            raise VerificationError(f"E (x) F is not an extension: {e}") from e
    return ext


# loops --------------------------------------------------------------------------


def schwede_loop(K: KExtension, g: Cocycle) -> ExtensionMorphism:
    """mu_f(g) : K(f) -> K(f), the identity except h in degree n-1 with
    h theta_f = theta_f - iota_f g and h iota_f = iota_f."""
    n = K.n
    if g.degree != n - 1:
        raise ValidationError(f"Schwede's map needs a cocycle of degree {n - 1}")
    if g.degree < g.bar.N and not g.is_closed():
        raise ValidationError("Schwede's map needs a cocycle")
    E = K.extension
    h = K.pushout.mediate(K.theta - K.iota @ g.as_map(), K.iota)
    comps = {i: BimoduleMap.identity(E.obj(i)) for i in range(n + 1)}
    comps[n - 1] = h
    return ExtensionMorphism(E, E, GradedMorphism(E.complex, E.complex, 0, comps))


def schwede_homotopy(K: KExtension, p: BimoduleMap) -> GradedMorphism:
    """The degree 1 map iota_f p in degree n-2 relating mu_f(g) and mu_f(g + p d)."""
    E = K.extension
    return GradedMorphism(E.complex, E.complex, -1, {K.n - 2: K.iota @ p})


@dataclass
class LoopExtraction:
    cocycle: Cocycle
    homotopy: GradedMorphism
    beta_prime: GradedMorphism
    preimage_holds: bool


def loop_to_cocycle(K: KExtension, alpha: ExtensionMorphism, beta: ExtensionMorphism) -> LoopExtraction:
    """The cocycle pi_E s with (alpha - beta) Phi_f = phi s + s d.

    Also rebuilds beta' from s and records whether alpha mu_f(s_{n-1}) = beta'.
    """
    n = K.n
    bar = K.cocycle.bar
    E = alpha.target
    if alpha.source is not K.extension or beta.source is not K.extension or beta.target is not E:
        raise ValidationError("loop_to_cocycle needs two morphisms K(f) -> E")
    if n + 1 > bar.N:
        raise TruncationError(f"loop extraction needs P_{n + 1}; increase N", n + 1)
    Phi = (alpha.map - beta.map) @ K.Phi
    s = null_homotopy(Phi, range(0, n + 1))
    if s is None:
        raise TruncationError("no null homotopy of (alpha - beta) Phi_f in the window", n)
    top = s.comp(n - 1)
    c = Cocycle(bar, n - 1, top.images.T if top.source.dim else np.zeros((0, bar.algebra.dim)))
    P, Kc = bar.complex, K.extension
    comps = {}
    for i in range(0, n - 1):
        b = beta.comp(i) + E.d(i) @ s.comp(i)
        if i >= 1:
            b = b + s.comp(i - 1) @ P.d(i - 1)
        comps[i] = b
    b = beta.comp(n - 1)
    if n >= 2:
        b = b + s.comp(n - 2) @ Kc.d(n - 2)
    comps[n - 1] = b
    comps[n] = beta.comp(n)
    beta_p = GradedMorphism(Kc.complex, E.complex, 0, comps)
    holds = (alpha.map @ schwede_loop(K, c).map).equals(beta_p, range(0, n + 1))
    return LoopExtraction(c, s, beta_p, holds)


@dataclass
class HermannLoop:
    """gamma_E(F) = (alpha^F + 1_E)^-1 (beta^F + 1_E), based at sigma_n + E."""

    word: LoopWord
    F_bar: NExtension
    alpha_F: GradedMorphism
    beta_F: GradedMorphism
    sigma_sum: NExtension
    target: NExtension
    alpha: ExtensionMorphism
    beta: ExtensionMorphism
    embedding: GradedMorphism  # E -> sigma_n + E


def f_bar(F: NExtension) -> tuple[NExtension, GradedMorphism, GradedMorphism, NExtension]:
    """F-bar for an (n-1)-extension F, with alpha^F, beta^F : sigma_n -> F-bar."""
    n = F.n + 1
    alg = F.algebra
    X, Y = F.X, F.Y
    x2 = direct_sum(X, X)
    objects = {0: x2.module, n: Y}
    objects.update({i: F.obj(i - 1) for i in range(1, n)})
    diffs = {n - 1: BimoduleMap(Y, F.obj(n - 2), F.iota.matrix)}
    diffs.update({i: F.d(i - 1) for i in range(1, n - 1)})
    diffs[0] = x2.column(F.mu, -F.mu)
    mu = x2.row(BimoduleMap.identity(X), BimoduleMap.identity(X))
    Fb = _ext_from(objects, diffs, mu, alg, f"{F.name}bar", {"x2": x2})
    sig = sigma(alg, n, X, Y)
    top = BimoduleMap(sig.obj(n - 1), Fb.obj(n - 1), F.iota.matrix)
    comps_a = {n: BimoduleMap.identity(Y), n - 1: top,
               0: x2.column(BimoduleMap.identity(X), BimoduleMap(X, X))}
    comps_b = {n: BimoduleMap.identity(Y), n - 1: top,
               0: x2.column(BimoduleMap(X, X), BimoduleMap.identity(X))}
    alpha = GradedMorphism(sig.complex, Fb.complex, 0, comps_a)
    beta = GradedMorphism(sig.complex, Fb.complex, 0, comps_b)
    return Fb, alpha, beta, sig


def hermann_loop(E: NExtension, F: NExtension) -> HermannLoop:
    n = E.n
    if n < 2:
        raise ValidationError("Hermann's loop needs n >= 2")
    if F.n != n - 1:
        raise ValidationError(f"Hermann's loop pairs an {n}-extension with an {n - 1}-extension")
    Fb, a, b, sig = f_bar(F)
    S = baer_sum(sig, E)
    T = baer_sum(Fb, E)
    one = identity_morphism(E)
    ua = ExtensionMorphism(S, T, baer_sum_morphism(a, one, S, T))
    ub = ExtensionMorphism(S, T, baer_sum_morphism(b, one, S, T))
    word = LoopWord(S, [(ub, +1), (ua, -1)])
    return HermannLoop(word, Fb, a, b, S, T, ua, ub, sigma_embedding(E, S))


# verification reports ---------------------------------------------------------------


@dataclass
class VerificationReport:
    """Named identities with pass/fail and, on failure, the offending data."""

    title: str
    checks: list = field(default_factory=list)  # (name, passed, detail)

    def add(self, name: str, passed: bool, detail=None):
        self.checks.append((name, bool(passed), None if passed else detail))
        return passed

    def add_equal(self, name: str, a: GradedMorphism, b: GradedMorphism | None, degrees):
        bad = a.mismatches(b, degrees)
        detail = None
        if bad:
            i = bad[0]
            lhs = a.comp(i).matrix
            rhs = b.comp(i).matrix if b is not None else np.zeros_like(lhs)
            detail = {"degrees": bad, "lhs": lhs.tolist(), "rhs": rhs.tolist()}
        return self.add(name, not bad, detail)

    @property
    def passed(self) -> bool:
        return all(ok for _, ok, _ in self.checks)

    def failures(self) -> list:
        return [(n, d) for n, ok, d in self.checks if not ok]

    def to_dict(self) -> dict:
        return {"title": self.title, "passed": self.passed,
                "checks": [{"name": n, "passed": ok, **({"detail": d} if d is not None else {})}
                           for n, ok, d in self.checks]}


def _class_check(report, H, name, a: Cocycle, b: Cocycle):
    ok = H.class_equal(a, b)
    return report.add(name, ok, None if ok else {"got": a.values.tolist(), "expected": b.values.tolist()})


# the explicit model of Hermann's loop on K(f) ---------------------------------------------


@dataclass
class SchwedeHermannModel:
    extension: NExtension       # the model of K(g)-bar + K(f)
    alpha: ExtensionMorphism    # alpha^{K(g)} + 1
    beta: ExtensionMorphism     # beta^{K(g)} + 1
    Phi: GradedMorphism
    s: GradedMorphism
    Kf: KExtension
    Kg: KExtension


def schwede_hermann_model(f: Cocycle, g: Cocycle) -> tuple[SchwedeHermannModel, dict]:
    """The sequence Y -> L -> P_{n-3} (+) P_{n-2} -> ... -> X (+) P_0 -> X."""
    n = f.degree
    if n < 2 or g.degree != n - 1:
        raise ValidationError("the model needs deg f = n >= 2 and deg g = n - 1")
    bar = f.bar
    P, A, X = bar.complex, bar.algebra, bar.unit
    Kf, Kg = k_of_cocycle(f), k_of_cocycle(g)
    Ef, Eg = Kf.extension, Kg.extension
    ds = direct_sum(Eg.obj(n - 2), Ef.obj(n - 1))
    rel = ds.column(Eg.iota, -Ef.iota)
    L, proj, sec = quotient(ds.module, image_basis(rel.matrix, bar.p))
    sums = {i: direct_sum(P.obj(i - 1), P.obj(i)) for i in range(1, n - 1)}
    x0 = direct_sum(X, P.obj(0))
    objects = {0: x0.module, n - 1: L, n: X}
    objects.update({i: s.module for i, s in sums.items()})
    below = sums[n - 2] if n >= 3 else x0
    if n >= 3:
        D = block_map(ds, below, [[Eg.d(n - 3), None], [None, Ef.d(n - 2)]])
    else:
        D = block_map(ds, below, [[Eg.mu, None], [None, Ef.d(0)]])
    diffs = {n - 1: proj @ ds.column(Eg.iota, BimoduleMap(X, Ef.obj(n - 1))),
             n - 2: BimoduleMap(L, below.module, D.matrix @ sec % bar.p)}
    for i in range(1, n - 2):
        diffs[i] = block_map(sums[i + 1], sums[i], [[P.d(i - 1), None], [None, P.d(i)]])
    if n >= 3:
        diffs[0] = block_map(sums[1], x0, [[bar.mu, None], [None, P.d(0)]])
    mu = x0.row(BimoduleMap(X, X), bar.mu)
    M = _ext_from(objects, diffs, mu, A, "M", {"L": (L, proj, sec, ds), "x0": x0, "sums": sums})

    def vertical(first):
        comps = {n: BimoduleMap.identity(X), n - 1: proj @ ds.injections[1]}
        comps.update({i: sums[i].column(BimoduleMap(P.obj(i), P.obj(i - 1)), BimoduleMap.identity(P.obj(i)))
                      for i in range(1, n - 1)})
        comps[0] = x0.column(first, BimoduleMap.identity(P.obj(0)))
        return ExtensionMorphism(Ef, M, GradedMorphism(Ef.complex, M.complex, 0, comps))

    alpha = vertical(bar.mu)
    beta = vertical(BimoduleMap(P.obj(0), X))
    Phi = GradedMorphism(P, M.complex, 0, {0: x0.column(bar.mu, BimoduleMap(P.obj(0), P.obj(0)))})
    s = {}
    for i in range(0, n - 2):
        s[i] = sums[i + 1].column(BimoduleMap.identity(P.obj(i)), BimoduleMap(P.obj(i), P.obj(i + 1))).scale(_sign(i))
    s[n - 2] = (proj @ ds.injections[0] @ Kg.theta).scale(_sign(n))
    s[n - 1] = g.as_map().scale(_sign(n + 1))
    s = GradedMorphism(P, M.complex, -1, s)
    squares = {"pushout": (ds, proj, diffs[n - 1], Eg, Ef), "pullback": (x0, mu)}
    return SchwedeHermannModel(M, alpha, beta, Phi, s, Kf, Kg), squares


def _pushout_square_is_universal(bar, sq) -> bool:
    ds, proj, top, Eg, Ef = sq
    X = bar.unit
    y2 = direct_sum(X, X)
    diag = block_map(y2, ds, [[Eg.iota, None], [None, Ef.iota]])
    codiag = y2.row(BimoduleMap.identity(X), BimoduleMap.identity(X))
    po = pushout(diag, codiag)
    m = po.mediate(proj, top)
    return is_isomorphism(m)


def _pullback_square_is_universal(bar, sq) -> bool:
    x0, mu = sq
    X, P0 = bar.unit, bar.complex.obj(0)
    x2 = direct_sum(X, X)
    x3 = direct_sum(X, X, P0)
    one = BimoduleMap.identity(X)
    bottom = block_map(x3, x2, [[1, 1, None], [None, None, bar.mu]])
    right = x2.column(one, one)
    pb = pullback(bottom, right)
    vert = block_map(x0, x3, [[1, None], [-1, bar.mu], [None, BimoduleMap.identity(P0)]])
    m = pb.mediate(mu, vert)
    return is_isomorphism(m)


def verify_schwede_hermann(f: Cocycle, g: Cocycle, H=None) -> VerificationReport:
    """Check the explicit homotopy s with d s + s d = (alpha - beta) Phi_f on K(f)."""
    from .ext import HochschildCohomology
    n = f.degree
    bar = f.bar
    if n + 1 > bar.N:
        raise TruncationError(f"verification needs P_{n + 1}; increase N", n + 1)
    H = H or HochschildCohomology(bar)
    rep = VerificationReport(f"schwede-hermann n={n}")
    model, squares = schwede_hermann_model(f, g)
    M = model.extension
    rep.add("model sequence is exact", M.is_exact(), M.homology())
    rep.add("alpha is a morphism of extensions", model.alpha.is_valid(), model.alpha.failures())
    rep.add("beta is a morphism of extensions", model.beta.is_valid(), model.beta.failures())
    degs = range(0, n + 2)
    Phi = (model.alpha.map - model.beta.map) @ model.Kf.Phi
    rep.add_equal("(alpha - beta) Phi_f = (mu_P; 0) in degree 0", Phi, model.Phi, degs)
    rep.add_equal("d s + s d = Phi", boundary(model.s), model.Phi, degs)
    rep.add("pushout square", _pushout_square_is_universal(bar, squares["pushout"]))
    rep.add("pullback square", _pullback_square_is_universal(bar, squares["pullback"]))
    ex = loop_to_cocycle(model.Kf, model.alpha, model.beta)
    rep.add("alpha mu_f(s_{n-1}) = beta'", ex.preimage_holds)
    _class_check(rep, H, "model loop extracts (-1)^(n+1) g", ex.cocycle, g.scale(_sign(n + 1)))
    Fg = model.Kg.extension
    hl = hermann_loop(model.Kf.extension, Fg)
    j = ExtensionMorphism(model.Kf.extension, hl.sigma_sum, hl.embedding)
    rep.add("E -> sigma_n + E is a morphism of extensions", j.is_valid(), j.failures())
    rep.add("Hermann word closes", hl.word.is_closed())
    ex2 = loop_to_cocycle(model.Kf, hl.alpha @ j, hl.beta @ j)
    rep.add("Hermann loop: alpha mu_f(s_{n-1}) = beta'", ex2.preimage_holds)
    _class_check(rep, H, "Hermann loop extracts (-1)^(n+1) g", ex2.cocycle, g.scale(_sign(n + 1)))
    return rep


# the diamond ---------------------------------------------------------------------------


def _raw(TE: NExtension, m: GradedMorphism) -> GradedMorphism:
    """Precompose a map out of the raw tensor complex with the identification."""
    return m @ TE.data["from_ext"]


def pi_tensor_one(TE: NExtension) -> GradedMorphism:
    """pi_A (x) 1_B : A (x) B -> B, of degree deg A."""
    A, B = TE.data["factors"]
    T = TE.data["raw"]
    pi = A.pi()
    U = tensor_complexes(pi.target, B.complex)
    return _raw(TE, left_unitor_complex(U) @ tensor_morphisms(pi, identity_morphism(B), T, U))


def one_tensor_pi(TE: NExtension) -> GradedMorphism:
    """1_A (x) pi_B : A (x) B -> A, of degree deg B."""
    A, B = TE.data["factors"]
    T = TE.data["raw"]
    pi = B.pi()
    U = tensor_complexes(A.complex, pi.target)
    return _raw(TE, right_unitor_complex(U) @ tensor_morphisms(identity_morphism(A), pi, T, U))


def mu_tensor_one(TE: NExtension) -> GradedMorphism:
    """mu_A (x) 1_B : A (x) B -> B."""
    A, B = TE.data["factors"]
    T = TE.data["raw"]
    mu = A.mu_morphism()
    U = tensor_complexes(mu.target, B.complex)
    return _raw(TE, left_unitor_complex(U) @ tensor_morphisms(mu, identity_morphism(B), T, U))


def one_tensor_mu(TE: NExtension) -> GradedMorphism:
    """1_A (x) mu_B : A (x) B -> A."""
    A, B = TE.data["factors"]
    T = TE.data["raw"]
    mu = B.mu_morphism()
    U = tensor_complexes(A.complex, mu.target)
    return _raw(TE, right_unitor_complex(U) @ tensor_morphisms(identity_morphism(A), mu, T, U))


def assemble_pair(S: NExtension, rho1: GradedMorphism, rho0: GradedMorphism) -> GradedMorphism:
    """The morphism into the splice S = upper # lower given by a pair.

    rho1 goes into upper with degree h = deg(lower), rho0 into lower with degree
    0, and mu_upper rho1 = pi_lower rho0 is required.  The result is rho0_i
    below h and (-1)^(h (i - h)) rho1_i from h on.
    """
    upper, lower = S.data["upper"], S.data["lower"]
    h = lower.n
    src = rho1.source
    if not (upper.mu @ rho1.comp(h)).equals(rho0.comp(h)):
        raise VerificationError("pair is incompatible: mu rho1 != pi rho0")
    comps = {}
    for i in src.degrees():
        m = rho0.comp(i) if i < h else rho1.comp(i).scale(_sign(h * (i - h)))
        if i > S.n or m.is_zero():
            continue
        comps[i] = BimoduleMap(src.obj(i), S.obj(i), m.matrix)
    return GradedMorphism(src, S.complex, 0, comps)


@dataclass
class Diamond:
    EF: NExtension    # E # F
    FE: NExtension    # (-1)^(mn) F # E
    TEF: NExtension   # E (x) F
    TFE: NExtension   # (-1)^(mn) F (x) E
    lambda_EF: ExtensionMorphism
    rho_EF: ExtensionMorphism
    lambda_FE: ExtensionMorphism
    rho_FE: ExtensionMorphism
    sign: int

    def morphisms(self) -> dict:
        return {"lambda_EF": self.lambda_EF, "rho_EF": self.rho_EF,
                "lambda_FE": self.lambda_FE, "rho_FE": self.rho_FE}

    def loop(self) -> LoopWord:
        """rho_FE^-1 lambda_EF rho_EF^-1 lambda_FE, based at E # F."""
        return LoopWord(self.EF, [(self.rho_FE, -1), (self.lambda_FE, +1), (self.rho_EF, -1), (self.lambda_EF, +1)])


def diamond_morphisms(E: NExtension, F: NExtension) -> Diamond:
    m, n = E.n, F.n
    s = _sign(m * n)
    TEF = tensor_extensions(E, F)
    TFE = tensor_extensions(F, E).signed(s)
    EF = splice(E, F)
    FE = splice(F, E).signed(s)
    lam_ef = assemble_pair(EF, one_tensor_pi(TEF), mu_tensor_one(TEF))
    rho_ef = assemble_pair(FE, pi_tensor_one(TEF).scale(s), one_tensor_mu(TEF).scale(s))
    lam_fe = assemble_pair(FE, one_tensor_pi(TFE), mu_tensor_one(TFE))
    rho_fe = assemble_pair(EF, pi_tensor_one(TFE).scale(s), one_tensor_mu(TFE).scale(s))
    return Diamond(EF, FE, TEF, TFE,
                   ExtensionMorphism(TEF, EF, lam_ef), ExtensionMorphism(TEF, FE, rho_ef),
                   ExtensionMorphism(TFE, FE, lam_fe), ExtensionMorphism(TFE, EF, rho_fe), s)


def _rhs_morphism(bar, diag, f: Cocycle, top: int) -> GradedMorphism:
    """(f (x) 1 - 1 (x) f) Delta : P -> P of degree deg f."""
    m = f.degree
    comps = {i: BimoduleMap(bar.module(i), bar.module(i - m), images=diag.lifting_rhs(i, m, f.values))
             for i in range(m, top + 1)}
    return GradedMorphism(bar.complex, bar.complex, m, comps)


def verify_diamond_bracket(f: Cocycle, g: Cocycle, diag, psi_f, psi_g, H=None) -> VerificationReport:
    """Walk through the homotopy witnessing that the diamond loop gives (-1)^m [g, f]."""
    from .ext import HochschildCohomology, oracle_gerstenhaber
    from .lifting import bracket
    bar = f.bar
    m, n = f.degree, g.degree
    if m < 1 or n < 1:
        raise ValidationError("the diamond needs m, n >= 1")
    top = m + n + 1
    if top > bar.N or top > diag.top:
        raise TruncationError(f"the diamond needs degree {top}; increase N", top)
    if not diag.is_strict_counital():
        raise ValidationError("the diamond needs a strictly counital diagonal")
    H = H or HochschildCohomology(bar)
    rep = VerificationReport(f"diamond m={m} n={n}")
    degs = range(0, top + 1)
    s = _sign(m * n)
    Kf, Kg = k_of_cocycle(f), k_of_cocycle(g)
    E, F = Kf.extension, Kg.extension
    dm = diamond_morphisms(E, F)
    for name, u in dm.morphisms().items():
        rep.add(f"{name} is a morphism of extensions", u.is_valid(), u.failures())
    rep.add("diamond word closes", dm.loop().is_closed())
    P = bar.complex
    PP = tensor_complexes(P, P, hi=top)
    Delta = diag.graded_morphism(PP)
    fh, gh = Kf.Phi, Kg.Phi
    TEF, TFE = dm.TEF, dm.TFE
    X1 = TEF.data["to_ext"] @ tensor_morphisms(fh, gh, PP, TEF.data["raw"]) @ Delta
    X2 = TFE.data["to_ext"] @ tensor_morphisms(gh, fh, PP, TFE.data["raw"]) @ Delta
    Rf = _rhs_morphism(bar, diag, f, top)
    Rg = _rhs_morphism(bar, diag, g, top)
    pf, pg = psi_f.morphism(), psi_g.morphism()
    kap, ik = E.kappa(), E.iota_kappa()
    P1 = tensor_complexes(P, kap.source, hi=top)
    runit = right_unitor_complex(P1)
    runit_inv = GradedMorphism(P, P1, 0, {i: inverse(runit.comp(i)) for i in P1.degrees()})
    T_FE = TFE.data["raw"]
    eps = tensor_morphisms(gh, kap, P1, T_FE) @ runit_inv @ Rf \
        + (tensor_morphisms(gh, ik, P1, T_FE) @ runit_inv @ pf).scale(_sign(m))
    eps = (TFE.data["to_ext"] @ eps).scale(s)
    rep.add_equal("epsilon is a chain map", boundary(eps), None, degs)
    rep.add("(mu_F (x) mu_E) epsilon = 0", (TFE.mu @ eps.comp(0)).is_zero())
    psi1 = (pi_tensor_one(TEF) @ X1).scale(s) - (one_tensor_pi(TFE) @ X2).scale(s)
    psi0 = (one_tensor_mu(TEF) @ X1).scale(s) - (mu_tensor_one(TFE) @ X2).scale(s)
    rep.add_equal("Psi^0 = 0", psi0, None, degs)
    rep.add_equal("Psi^1 = (-1)^(mn) g^ (f (x) 1 - 1 (x) f) Delta", psi1, (gh @ Rf).scale(s), degs)
    lam_ef, rho_ef, lam_fe, rho_fe = (dm.lambda_EF.map, dm.rho_EF.map, dm.lambda_FE.map, dm.rho_FE.map)
    rep.add_equal("rho_EF X - (-1)^(mn) lambda_FE X' = lambda_FE epsilon",
                  rho_ef @ X1 - (lam_fe @ X2).scale(s), lam_fe @ eps, degs)
    Y2 = X2.scale(s) + eps
    gam1 = (pi_tensor_one(TFE) @ Y2).scale(s) - one_tensor_pi(TEF) @ X1
    gam0 = (one_tensor_mu(TFE) @ Y2).scale(s) - mu_tensor_one(TEF) @ X1
    gmor = bar.cochain_morphism(n, g.values, kap.source)
    # d(kappa_E g) = iota_E kappa_E g, so the last coefficient is (-1)^(mn+m+n)
    expected_gam1 = fh @ Rg + (kap @ gmor @ Rf).scale(s) + (ik @ gmor @ pf).scale(_sign(m * n + m + n))
    rep.add_equal("Gamma^0 = 0", gam0, None, degs)
    rep.add_equal("Gamma^1 = f^ R_g + (-1)^(mn) kappa g R_f + (-1)^(mn+m+n) iota kappa g psi_f",
                  gam1, expected_gam1, degs)
    sbar = fh @ pg + (kap @ gmor @ pf).scale(_sign(m * n + m + n))
    rep.add_equal("d sbar - (-1)^(n-1) sbar d = Gamma^1", boundary(sbar), gam1, degs)
    rep.add("mu_E sbar = 0", (E.mu @ sbar.comp(n - 1)).is_zero())
    EF = dm.EF
    comps = {}
    for i in range(n, m + n):
        c = sbar.comp(i)
        comps[i] = BimoduleMap(P.obj(i), EF.obj(i + 1), c.scale(_sign(n * (i - n))).matrix)
    hom = GradedMorphism(P, EF.complex, -1, comps)
    Gamma = rho_fe @ Y2 - lam_ef @ X1
    rep.add_equal("d s + s d = rho_FE(...) - lambda_EF X", boundary(hom), Gamma, degs)
    top_comp = hom.comp(m + n - 1)
    extracted = Cocycle(bar, m + n - 1, top_comp.images.T)
    expected = bracket(g, f, psi_g, psi_f).scale(_sign(m))
    _class_check(rep, H, "s_{m+n-1} ~ (-1)^m [g, f]", extracted, expected)
    _class_check(rep, H, "s_{m+n-1} ~ (-1)^m [g, f] (circle-product oracle)", extracted,
                 oracle_gerstenhaber(g, f).scale(_sign(m)))
    return rep


# conjugation and factorizing ----------------------------------------------------------


def canonical_map(K: KExtension, E: NExtension, lift: GradedMorphism) -> ExtensionMorphism:
    """f-bar : K(f) -> E induced by a lift P -> E whose top component is f."""
    n = K.n
    comps = {i: lift.comp(i) for i in range(n - 1)}
    comps[n - 1] = K.pushout.mediate(lift.comp(n - 1), E.iota)
    comps[n] = BimoduleMap.identity(E.Y)
    return ExtensionMorphism(K.extension, E, GradedMorphism(K.extension.complex, E.complex, 0, comps))


def verify_conjugation(bar: BarResolution, E: NExtension, F: NExtension) -> VerificationReport:
    """(u + 1_E)(1 + f-bar) = (1 + f-bar)(u + 1_K(f)) for u = alpha^F, beta^F."""
    rep = VerificationReport(f"conjugation n={E.n}")
    lift = lift_to_extension(bar, E)
    f = Cocycle(bar, E.n, lift.comp(E.n).images.T)
    K = k_of_cocycle(f)
    fbar = canonical_map(K, E, lift)
    rep.add("f-bar is a morphism of extensions", fbar.is_valid(), fbar.failures())
    Fb, a, b, sig = f_bar(F)
    one_s, one_f = identity_morphism(sig), identity_morphism(Fb)
    sK, sE = baer_sum(sig, K.extension), baer_sum(sig, E)
    fK, fE = baer_sum(Fb, K.extension), baer_sum(Fb, E)
    left_in = baer_sum_morphism(one_s, fbar.map, sK, sE)
    right_out = baer_sum_morphism(one_f, fbar.map, fK, fE)
    for name, u in (("alpha", a), ("beta", b)):
        lhs = baer_sum_morphism(u, identity_morphism(E), sE, fE) @ left_in
        rhs = right_out @ baer_sum_morphism(u, identity_morphism(K.extension), sK, fK)
        rep.add_equal(f"({name}^F + 1_E)(1 + f-bar) = (1 + f-bar)({name}^F + 1)", lhs, rhs, range(0, E.n + 1))
    return rep


@dataclass
class FactorizingHat:
    extension: NExtension
    beta_hat: ExtensionMorphism
    projection: GradedMorphism  # F-hat -> F with projection o beta_hat = beta
    report: VerificationReport


def factorizing_hat(E: NExtension, F: NExtension, beta: ExtensionMorphism) -> FactorizingHat:
    """Factor beta : E -> F through F-hat so that every component of beta-hat is injective."""
    n = E.n
    rep = VerificationReport(f"factorizing n={n}")
    rep.add("beta is a morphism of extensions", beta.is_valid(), beta.failures())
    if n == 1:
        Fh, bh = F, beta
        proj = identity_morphism(F)
    else:
        labels = {n: [("F", n)]}
        for i in range(n):
            labels[i] = [("F", i)] + ([("E", i)] if i <= n - 2 else []) + ([("E", i - 1)] if i >= 1 else [])

        def module(lab):
            return F.obj(lab[1]) if lab[0] == "F" else E.obj(lab[1])

        sums = {i: direct_sum(*[module(l) for l in labels[i]]) for i in range(n + 1)}
        objects = {i: sums[i].module for i in range(n)}
        objects[n] = F.Y
        diffs = {}
        for i in range(1, n + 1):
            blocks = []
            for tl in labels[i - 1]:
                row = []
                for sl in labels[i]:
                    if sl[0] == "F" and tl[0] == "F":
                        row.append(F.d(i - 1))
                    elif sl[0] == "E" and sl == tl:
                        row.append(1)
                    else:
                        row.append(None)
                blocks.append(row)
            diffs[i - 1] = block_map(sums[i], sums[i - 1], blocks)
        diffs[n - 1] = BimoduleMap(F.Y, sums[n - 1].module, diffs[n - 1].matrix)
        mu = sums[0].row(F.mu, BimoduleMap(E.obj(0), F.X))
        Fh = _ext_from(objects, diffs, mu, F.algebra, f"{F.name}hat", {"sums": sums})
        bcomps, pcomps = {}, {}
        for i in range(n + 1):
            parts = []
            for lab in labels[i]:
                if lab[0] == "F":
                    parts.append(beta.comp(i))
                elif lab[1] == i:
                    parts.append(BimoduleMap.identity(E.obj(i)))
                else:
                    parts.append(E.d(i - 1))
            col = sums[i].column(*parts)
            bcomps[i] = BimoduleMap(E.obj(i), Fh.obj(i), col.matrix)
            pcomps[i] = BimoduleMap(Fh.obj(i), F.obj(i), sums[i].projections[0].matrix)
        bh = ExtensionMorphism(E, Fh, GradedMorphism(E.complex, Fh.complex, 0, bcomps))
        proj = GradedMorphism(Fh.complex, F.complex, 0, pcomps)
    rep.add("F-hat is exact", Fh.is_exact(), Fh.homology())
    rep.add("beta-hat is a morphism of extensions", bh.is_valid(), bh.failures())
    rep.add_equal("projection beta-hat = beta", proj @ bh.map, beta.map, range(0, n + 1))
    rep.add("projection is a chain map", boundary(proj).is_zero(range(0, n + 1)))
    for i in range(n + 1):
        c = bh.comp(i)
        ok = c.source.dim == 0 or rank(c.matrix, E.algebra.p) == c.source.dim
        rep.add(f"beta-hat_{i} is injective", ok, {"rank": rank(c.matrix, E.algebra.p), "dim": c.source.dim})
    return FactorizingHat(Fh, bh, proj, rep)
