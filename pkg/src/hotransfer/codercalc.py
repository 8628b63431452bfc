"""Arity calculus for morphisms and coderivations between cofree coalgebras.

A coalgebra morphism ``F: C(V) -> C(W)`` is stored through its arity terms
``F_(n): C^n(V) -> W``; a coderivation ``η`` (relative to a morphism, or to
the identity) and an (F, F')-coderivation ``H`` likewise.  The component
``C^n(V) -> C^k(W)`` of any of them is

    sum over compositions n = n_1 + ... + n_k (and, for coderivations,
    a distinguished slot i) of  (id ⊗ X_1 ⊗ ... ⊗ X_k) ∘ Δ_{k; n_1..n_k}

where the slot maps are the morphism's terms, or the coderivation's term in
the distinguished slot with the left/right morphism terms elsewhere.  Signs
come only from :func:`koszul_apply`.  Every arity formula below is
``outer_(k) ∘ component(n, k)`` summed over k, which is what
:func:`arity_sum` computes without materializing the components.
"""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field
from functools import cached_property

from .cooperad import Cooperad, CofreeSlice, cocompose_word, cofree_slice, compositions
from .gradedcx import GradedMap, GradedModule, koszul_apply
from .linalg import Field


def _nonzero(m: GradedMap | None) -> GradedMap | None:
    return None if m is None or m.is_zero() else m


@dataclass
class ArityMorphism:
    cooperad: Cooperad
    source: GradedModule
    target: GradedModule
    terms: dict[int, GradedMap] = dc_field(default_factory=dict)
    degree = 0

    @property
    def field(self) -> Field:
        return self.cooperad.field

    @classmethod
    def identity(cls, cooperad: Cooperad, V: GradedModule) -> ArityMorphism:
        return cls(cooperad, V, V, {1: GradedMap.identity(cooperad.field, V)})

    def term(self, n: int) -> GradedMap | None:
        return _nonzero(self.terms.get(n))

    def full_term(self, n: int) -> GradedMap:
        t = self.terms.get(n)
        if t is None:
            sl = cofree_slice(self.cooperad, self.source, n)
            return GradedMap.zero(self.field, sl, self.target, self.degree)
        return t

    def copy(self) -> ArityMorphism:
        return type(self)(self.cooperad, self.source, self.target, dict(self.terms))

    @property
    def max_arity(self) -> int:
        return max(self.terms, default=0)


@dataclass
class ArityCoderivation:
    """Coderivation along ``along`` (None means the identity of C(source))."""

    cooperad: Cooperad
    source: GradedModule
    target: GradedModule
    degree: int
    terms: dict[int, GradedMap] = dc_field(default_factory=dict)
    along: ArityMorphism | None = None

    @property
    def field(self) -> Field:
        return self.cooperad.field

    term = ArityMorphism.term
    full_term = ArityMorphism.full_term
    max_arity = ArityMorphism.max_arity

    def copy(self) -> ArityCoderivation:
        return type(self)(self.cooperad, self.source, self.target, self.degree, dict(self.terms), self.along)

    @cached_property
    def _identity(self) -> ArityMorphism:
        return ArityMorphism.identity(self.cooperad, self.source)

    def reference(self) -> ArityMorphism:
        return self.along if self.along is not None else self._identity


@dataclass
class FFCoderivation:
    """(L, R)-coderivation: L-factors left of the distinguished slot, R-factors right of it."""

    cooperad: Cooperad
    source: GradedModule
    target: GradedModule
    left: ArityMorphism
    right: ArityMorphism
    degree: int = 1
    terms: dict[int, GradedMap] = dc_field(default_factory=dict)

    def __post_init__(self):
        if getattr(self.cooperad, "symmetric", False):
            raise ValueError("(F,F')-coderivations need a nonsymmetric cooperad")

    @property
    def field(self) -> Field:
        return self.cooperad.field

    term = ArityMorphism.term
    full_term = ArityMorphism.full_term
    max_arity = ArityMorphism.max_arity

    def copy(self) -> FFCoderivation:
        return type(self)(self.cooperad, self.source, self.target, self.left, self.right, self.degree, dict(self.terms))


def _slot_pattern(x) -> tuple[ArityMorphism, object, ArityMorphism]:
    """(left, center, right) factor families for the component formula of x."""
    if isinstance(x, ArityMorphism):
        return x, None, x
    if isinstance(x, ArityCoderivation):
        ref = x.reference()
        return ref, x, ref
    if isinstance(x, FFCoderivation):
        return x.left, x, x.right
    raise TypeError(f"not an arity family: {type(x).__name__}")


def arity_sum(x, n: int, outer: dict[int, GradedMap | None] | None, target, outer_degree: int = 0,
              ks=None) -> GradedMap:
    """``sum_k outer[k] ∘ component_{n->k}(x)`` as a map C^n(source) -> target.

    With ``outer=None`` the single k in ``ks`` is used with the identity of
    C^k(W) as outer map, i.e. the component itself.
    """
    coop = x.cooperad
    F = coop.field
    V, W = x.source, x.target
    left, center, right = _slot_pattern(x)
    sl = cofree_slice(coop, V, n)
    center_deg = center.degree if center is not None else 0
    total_deg = outer_degree + center_deg
    if ks is None:
        ks = range(1, n + 1)
    plan = []
    for k in ks:
        G = None
        if outer is not None:
            G = _nonzero(outer.get(k))
            if G is None:
                continue
        slW = cofree_slice(coop, W, k)
        idC = GradedMap.identity(F, coop.piece(k))
        comps = []
        for comp in compositions(n, k):
            slots = []
            for s in (range(k) if center is not None else (None,)):
                maps = []
                for j, m in enumerate(comp):
                    if s is None or j < s:
                        fam = left
                    elif j == s:
                        fam = center
                    else:
                        fam = right
                    t = fam.term(m)
                    if t is None:
                        break
                    maps.append(t)
                else:
                    slots.append([idC] + maps)
            if slots:
                comps.append((comp, slots))
        if comps:
            plan.append((slW, G, comps))

    if not plan:
        return GradedMap(F, sl, target, total_deg, {})
    tdeg = target.by_degree
    sdeg = sl.degrees
    cols = {}
    for xi in range(sl.dim):
        if sdeg[xi] + total_deg not in tdeg:
            continue
        acc: dict = {}
        for slW, G, comps in plan:
            for comp, slots in comps:
                pieces = cocompose_word(sl, xi, comp)
                if not pieces:
                    continue
                elem = {}
                for coeff, top, xs in pieces:
                    key = (top,) + xs
                    elem[key] = elem.get(key, 0) + coeff
                for maps in slots:
                    for w, val in koszul_apply(maps, elem, F).items():
                        idx = slW.encode(w[0], w[1:])
                        if G is None:
                            acc[idx] = acc.get(idx, 0) + val
                        else:
                            for j, g in G.cols.get(idx, {}).items():
                                acc[j] = acc.get(j, 0) + val * g
        col = {}
        for j, v in acc.items():
            v = F(v)
            if v != 0:
                col[j] = v
        if col:
            cols[xi] = col
    return GradedMap(F, sl, target, total_deg, cols)


# ---------------------------------------------------------------------------
# the formulas


def morphism_component(F: ArityMorphism, n: int, k: int) -> GradedMap:
    return arity_sum(F, n, None, cofree_slice(F.cooperad, F.target, k), ks=(k,))


def coderivation_component(eta: ArityCoderivation | FFCoderivation, n: int, k: int) -> GradedMap:
    return arity_sum(eta, n, None, cofree_slice(eta.cooperad, eta.target, k), ks=(k,))


def compose_morphisms_arity(G: ArityMorphism, F: ArityMorphism, n: int) -> GradedMap:
    """(G ∘ F)_(n) = sum_k G_(k) ∘ F_{n->k}."""
    return arity_sum(F, n, G.terms, G.target)


def compose_morphisms(G: ArityMorphism, F: ArityMorphism, N: int) -> ArityMorphism:
    out = ArityMorphism(F.cooperad, F.source, G.target)
    for n in range(1, N + 1):
        out.terms[n] = compose_morphisms_arity(G, F, n)
    return out


def square_arity(mu: ArityCoderivation, n: int) -> GradedMap:
    """(μ ∘ μ)_(n) for a self-coderivation μ."""
    return arity_sum(mu, n, mu.terms, mu.target, outer_degree=mu.degree)


def after_coderivation(G, eta: ArityCoderivation, n: int) -> GradedMap:
    """(G ∘ η)_(n): G any arity family on C(η.target), η a coderivation."""
    return arity_sum(eta, n, G.terms, G.target, outer_degree=getattr(G, "degree", 0))


def coderivation_after(nu: ArityCoderivation, x, n: int) -> GradedMap:
    """(ν ∘ X)_(n): ν a coderivation on C(W), X a morphism or (F,F')-coderivation into C(W)."""
    return arity_sum(x, n, nu.terms, nu.target, outer_degree=nu.degree)


def mixed_arity(F: ArityMorphism, mu: ArityCoderivation, nu: ArityCoderivation, n: int) -> GradedMap:
    """(F ∘ μ - ν ∘ F)_(n)."""
    a = after_coderivation(F, mu, n)
    b = coderivation_after(nu, F, n)
    a.degree = b.degree = mu.degree
    return a - b


def ff_mixed_arity(H: FFCoderivation, mu: ArityCoderivation, nu: ArityCoderivation, n: int) -> GradedMap:
    """(ν ∘ H + H ∘ μ)_(n)."""
    if getattr(H.cooperad, "symmetric", False):
        raise ValueError("(F,F')-coderivations need a nonsymmetric cooperad")
    a = coderivation_after(nu, H, n)
    b = after_coderivation(H, mu, n)
    a.degree = b.degree = H.degree + mu.degree
    return a + b


# ---------------------------------------------------------------------------
# full matrices: testing oracle only


class TruncatedCofree:
    """C^{≤N}(V) = C^1(V) ⊕ ... ⊕ C^N(V) with global indices."""

    def __init__(self, cooperad: Cooperad, V: GradedModule, N: int):
        self.cooperad = cooperad
        self.V = V
        self.N = N
        self.slices = {n: cofree_slice(cooperad, V, n) for n in range(1, N + 1)}
        self.offset = {}
        off = 0
        for n in range(1, N + 1):
            self.offset[n] = off
            off += self.slices[n].dim
        self.dim = off

    def split(self, g: int) -> tuple[int, int]:
        for n in range(self.N, 0, -1):
            if g >= self.offset[n]:
                return n, g - self.offset[n]
        raise IndexError(g)

    def glob(self, n: int, i: int) -> int:
        return self.offset[n] + i

    @cached_property
    def degrees(self) -> tuple[int, ...]:
        out = []
        for n in range(1, self.N + 1):
            out.extend(self.slices[n].degrees)
        return tuple(out)

    @cached_property
    def by_degree(self):
        out: dict[int, list[int]] = {}
        for i, d in enumerate(self.degrees):
            out.setdefault(d, []).append(i)
        return out


def expand_full(x, N: int) -> GradedMap:
    """Block matrix of all components C^n(V) -> C^k(W), 1 <= k <= n <= N."""
    EV = TruncatedCofree(x.cooperad, x.source, N)
    EW = TruncatedCofree(x.cooperad, x.target, N)
    _, center, _ = _slot_pattern(x)
    deg = center.degree if center is not None else 0
    cols: dict = {}
    for n in range(1, N + 1):
        for k in range(1, n + 1):
            comp = arity_sum(x, n, None, EW.slices[k], ks=(k,))
            for i, col in comp.cols.items():
                t = cols.setdefault(EV.glob(n, i), {})
                for j, v in col.items():
                    t[EW.glob(k, j)] = v
    return GradedMap(x.cooperad.field, EV, EW, deg, cols)


def extract_terms(full: GradedMap) -> dict[int, GradedMap]:
    """Arity terms (the n -> 1 blocks) of a full matrix."""
    EV, EW = full.source, full.target
    F = full.field
    V1 = EW.slices[1]
    terms = {}
    for n in range(1, EV.N + 1):
        cols = {}
        for i in range(EV.slices[n].dim):
            col = full.cols.get(EV.glob(n, i), {})
            sub = {j: v for j, v in col.items() if j < V1.dim}
            if sub:
                cols[i] = sub
        terms[n] = GradedMap(F, EV.slices[n], EW.V, full.degree, cols)
    return terms


def _full_decompose(E: TruncatedCofree, g: int, k: int) -> dict[tuple, object]:
    """Δ_k(e) in C(k) ⊗ E^{⊗k}, words (top, e_1, ..., e_k) with global indices."""
    n, x = E.split(g)
    out: dict = {}
    for comp in compositions(n, k):
        for coeff, top, xs in cocompose_word(E.slices[n], x, comp):
            key = (top,) + tuple(E.glob(m, xi) for m, xi in zip(comp, xs))
            out[key] = out.get(key, 0) + coeff
    return out


@dataclass
class ColeibnizReport:
    ok: bool
    failure: dict | None = None

    def __bool__(self):
        return self.ok


def check_coleibniz(X: GradedMap, kind: str, left: GradedMap | None = None, right: GradedMap | None = None) -> ColeibnizReport:
    """Brute-force check of the co-Leibniz square (or morphism compatibility) on full matrices.

    kind: "morphism" checks Δ_k ∘ X = (id ⊗ X^{⊗k}) ∘ Δ_k; "coderivation" checks
    Δ_k ∘ X = sum_i (id ⊗ L^{⊗(i-1)} ⊗ X ⊗ R^{⊗(k-i)}) ∘ Δ_k with L, R
    defaulting to the identity.
    """
    EV, EW = X.source, X.target
    F = X.field
    coop = EV.cooperad
    if left is None:
        left = GradedMap.identity(F, EV) if EV is EW or kind == "coderivation" else None
    if right is None:
        right = left
    for g in range(EV.dim):
        img = X.col(g)
        for k in range(2, EV.N + 1):
            idC = GradedMap.identity(F, coop.piece(k))
            lhs: dict = {}
            for h, v in img.items():
                for w, c in _full_decompose(EW, h, k).items():
                    lhs[w] = lhs.get(w, 0) + v * c
            lhs = {w: F(v) for w, v in lhs.items() if F(v) != 0}
            dec = _full_decompose(EV, g, k)
            if kind == "morphism":
                rhs = koszul_apply([idC] + [X] * k, dec, F) if dec else {}
            else:
                rhs = {}
                for i in range(k):
                    maps = [idC] + [left] * i + [X] + [right] * (k - i - 1)
                    for w, v in (koszul_apply(maps, dec, F) if dec else {}).items():
                        rhs[w] = rhs.get(w, 0) + v
                rhs = {w: F(v) for w, v in rhs.items() if F(v) != 0}
            if lhs != rhs:
                bad = next(w for w in sorted(set(lhs) | set(rhs)) if lhs.get(w, 0) != rhs.get(w, 0))
                n, x = EV.split(g)
                target_arity = sum(EW.split(e)[0] for e in bad[1:])
                return ColeibnizReport(False, {"k": k, "source_arity": n, "source_index": x,
                                               "target_arity": target_arity})
    return ColeibnizReport(True)
