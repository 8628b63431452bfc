"""A∞ front end: dg algebras, operations m_n, and transfer to homology.

An A∞-structure on V is a square-zero degree -1 coderivation μ on the
tensor coalgebra of the suspension sV (the coassociative cooperad with every
C(n) one-dimensional in degree 0).  The dictionary between the two is

    m_n = s⁻¹ ∘ μ_(n) ∘ s^{⊗n},

where s: V -> sV has degree +1 and s^{⊗n} is applied with the Koszul rule
(mechanically, through :func:`koszul_apply`).  With this convention the
relation (μ∘μ)_(n) = 0 becomes

    sum over r + s + t = n of (-1)^(r + s t) m_{r+1+t} ∘ (1^{⊗r} ⊗ m_s ⊗ 1^{⊗t}) = 0,

again with Koszul signs when m_s passes the first r inputs.  So m_1 = d, m_2
is a product obeying d(ab) = da·b + (-1)^|a| a·db, and m_2 is associative
when m_3 = 0.
"""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field

from .codercalc import ArityCoderivation, ArityMorphism, square_arity
from .cooperad import Cooperad, TensorSpace, as_cooperad, cofree_slice
from .gradedcx import ChainComplex, GradedMap, GradedModule, cycle_choosing_map, koszul_apply
from .linalg import Field, Matrix, rref
from .transfer import (
    InternalAssertFailure,
    ProblemError,
    TransferProblem,
    TransferResult,
    transfer_down,
    verify,
)


# ---------------------------------------------------------------------------
# dg algebras


@dataclass
class DGAlgebraPresentation:
    """A dg algebra: complex A plus a degree-0 product A ⊗ A -> A."""

    complex: ChainComplex
    product: GradedMap  # source: TensorSpace((A, A))
    unit: int | None = None

    @property
    def field(self) -> Field:
        return self.complex.field

    @property
    def module(self) -> GradedModule:
        return self.complex.module

    @classmethod
    def build(cls, field: Field, module: GradedModule, differential: GradedMap | None,
              product_entries, unit: str | int | None = None, check: bool = True) -> DGAlgebraPresentation:
        """``product_entries``: iterable of (a, b, c, coeff) meaning a·b contains coeff·c (indices)."""
        try:
            cx = ChainComplex.build(field, module, differential, check=check)
        except ValueError as e:
            raise ProblemError(str(e)) from None
        T = TensorSpace((module, module))
        entries = [(T.encode((a, b)), c, v) for a, b, c, v in product_entries]
        try:
            prod = GradedMap.from_entries(field, T, module, 0, entries)
        except ValueError as e:
            raise ProblemError(f"product is not of degree 0: {e}") from None
        if isinstance(unit, str):
            unit = module.index(unit)
        A = cls(cx, prod, unit)
        if check:
            A.check()
        return A

    def mul(self, x: dict, y: dict) -> dict:
        """Product of two sparse vectors."""
        T = self.product.source
        F = self.field
        out: dict = {}
        for i, a in x.items():
            for j, b in y.items():
                for k, v in self.product.cols.get(T.encode((i, j)), {}).items():
                    out[k] = out.get(k, 0) + a * b * v
        return {k: F(v) for k, v in out.items() if F(v) != 0}

    def check(self) -> None:
        names = self.module.names
        degs = self.module.degrees
        F = self.field
        n = self.module.dim
        d = self.complex.differential
        basis = [{i: F.one} for i in range(n)]
        for a in range(n):
            for b in range(n):
                ab = self.mul(basis[a], basis[b])
                for c in range(n):
                    if self.mul(ab, basis[c]) != self.mul(basis[a], self.mul(basis[b], basis[c])):
                        raise ProblemError(f"product is not associative on ({names[a]}, {names[b]}, {names[c]})")
                lhs = d.apply(ab)
                rhs = _add(F, self.mul(d.apply(basis[a]), basis[b]),
                           self.mul(basis[a], d.apply(basis[b])), -1 if degs[a] % 2 else 1)
                if lhs != rhs:
                    raise ProblemError(f"Leibniz rule fails on ({names[a]}, {names[b]})")


def _add(F, x: dict, y: dict, sy=1) -> dict:
    out = dict(x)
    for k, v in y.items():
        out[k] = out.get(k, 0) + sy * v
    return {k: F(v) for k, v in out.items() if F(v) != 0}


# ---------------------------------------------------------------------------
# operations and the suspension dictionary


@dataclass
class AInfinityStructure:
    """Operations m_n: V^{⊗n} -> V of degree n - 2, n = 1..N (m_1 = d_V).

    ``ops[n]`` has source the slice C^n(V) of the coassociative cooperad,
    whose basis is the set of words of length n.
    """

    V: ChainComplex
    cooperad: Cooperad
    ops: dict[int, GradedMap] = dc_field(default_factory=dict)

    @property
    def field(self) -> Field:
        return self.V.field

    @property
    def N(self) -> int:
        return self.cooperad.max_arity

    def op(self, n: int) -> GradedMap:
        m = self.ops.get(n)
        if m is None:
            return GradedMap.zero(self.field, cofree_slice(self.cooperad, self.V.module, n), self.V.module, n - 2)
        return m

    def apply(self, n: int, word: tuple[int, ...]) -> dict:
        sl = cofree_slice(self.cooperad, self.V.module, n)
        return dict(self.op(n).cols.get(sl.encode(0, word), {}))


@dataclass
class AInfinityMorphismData:
    """Components f_n: V^{⊗n} -> W of degree n - 1."""

    source: ChainComplex
    target: ChainComplex
    cooperad: Cooperad
    comps: dict[int, GradedMap] = dc_field(default_factory=dict)


@dataclass(frozen=True, eq=False)
class Suspension:
    """V and sV with the degree ±1 identifications between them."""

    V: GradedModule
    sV: GradedModule
    s: GradedMap
    s_inv: GradedMap

    @classmethod
    def of(cls, field: Field, V: GradedModule) -> Suspension:
        sV = V.shifted(1)
        one = field.one
        s = GradedMap(field, V, sV, 1, {i: {i: one} for i in range(V.dim)})
        si = GradedMap(field, sV, V, -1, {i: {i: one} for i in range(V.dim)})
        return cls(V, sV, s, si)

    def sign(self, word: tuple[int, ...]) -> int:
        """ε with s^{⊗n}(v_1 ⊗ ... ⊗ v_n) = ε · sv_1 ⊗ ... ⊗ sv_n."""
        out = koszul_apply([self.s] * len(word), {word: 1}, self.s.field)
        (val,) = out.values()
        return 1 if val == 1 else -1


def suspend_complex(X: ChainComplex) -> tuple[ChainComplex, Suspension]:
    S = Suspension.of(X.field, X.module)
    d = S.s @ X.differential @ S.s_inv
    return ChainComplex.build(X.field, S.sV, d, check=False), S


def _conjugate(F: Field, m: GradedMap, S_src: Suspension, S_tgt: Suspension, n: int, coop: Cooperad,
               to_suspended: bool, degree: int) -> GradedMap:
    """Translate an arity-n term between V- and sV-language (word signs ε)."""
    src = cofree_slice(coop, S_src.sV if to_suspended else S_src.V, n)
    tgt = S_tgt.sV if to_suspended else S_tgt.V
    words_slice = cofree_slice(coop, S_src.V, n)
    cols = {}
    for x, col in m.cols.items():
        _, word = words_slice.decode(x)
        e = S_src.sign(word)
        cols[x] = {y: F(e * v) for y, v in col.items()}
    return GradedMap(F, src, tgt, degree, cols)


def mn_to_coderivation(S: AInfinityStructure, susp: tuple[ChainComplex, Suspension] | None = None) -> ArityCoderivation:
    """μ_(n) = s ∘ m_n ∘ (s^{⊗n})⁻¹ on the tensor coalgebra of sV."""
    sX, Su = susp or suspend_complex(S.V)
    F = S.field
    mu = ArityCoderivation(S.cooperad, Su.sV, Su.sV, -1, {1: sX.differential})
    for n, m in S.ops.items():
        mu.terms[n] = _conjugate(F, m, Su, Su, n, S.cooperad, True, -1)
    return mu


def mn_from_coderivation(mu: ArityCoderivation, V: ChainComplex) -> AInfinityStructure:
    """m_n = s⁻¹ ∘ μ_(n) ∘ s^{⊗n}."""
    Su = Suspension.of(V.field, V.module)
    S = AInfinityStructure(V, mu.cooperad)
    for n, t in mu.terms.items():
        S.ops[n] = _conjugate(V.field, t, Su, Su, n, mu.cooperad, False, n - 2)
    return S


def morphism_from_arity(Fm: ArityMorphism, V: ChainComplex, W: ChainComplex) -> AInfinityMorphismData:
    """f_n = s⁻¹ ∘ F_(n) ∘ s^{⊗n}."""
    Sv = Suspension.of(V.field, V.module)
    Sw = Suspension.of(W.field, W.module)
    out = AInfinityMorphismData(V, W, Fm.cooperad)
    for n, t in Fm.terms.items():
        out.comps[n] = _conjugate(V.field, t, Sv, Sw, n, Fm.cooperad, False, n - 1)
    return out


def morphism_to_arity(f: AInfinityMorphismData) -> ArityMorphism:
    Sv = Suspension.of(f.source.field, f.source.module)
    Sw = Suspension.of(f.target.field, f.target.module)
    Fm = ArityMorphism(f.cooperad, Sv.sV, Sw.sV)
    for n, t in f.comps.items():
        Fm.terms[n] = _conjugate(f.source.field, t, Sv, Sw, n, f.cooperad, True, 0)
    return Fm


def dga_structure(A: DGAlgebraPresentation, N: int) -> AInfinityStructure:
    coop = as_cooperad(N, A.field)
    S = AInfinityStructure(A.complex, coop, {1: A.complex.differential})
    if N >= 2:
        sl = cofree_slice(coop, A.module, 2)
        # the tensor-space and slice bases agree word by word
        S.ops[2] = GradedMap(A.field, sl, A.module, 0, {x: dict(c) for x, c in A.product.cols.items()})
    return S


def dga_to_coderivation(A: DGAlgebraPresentation, N: int,
                        susp: tuple[ChainComplex, Suspension] | None = None) -> ArityCoderivation:
    """ν with ν_(1) = d_A, ν_(2) the suspended product, nothing above."""
    return mn_to_coderivation(dga_structure(A, N), susp)


# ---------------------------------------------------------------------------
# Stasheff relations


def stasheff_direct(S: AInfinityStructure, n: int) -> GradedMap:
    """sum_{r+s+t=n} (-1)^(r+st) m_{r+1+t} ∘ (1^r ⊗ m_s ⊗ 1^t), expanded word by word."""
    F = S.field
    coop = S.cooperad
    V = S.V.module
    ident = GradedMap.identity(F, V)
    src = cofree_slice(coop, V, n)
    cols = {}
    for x in range(src.dim):
        _, w = src.decode(x)
        acc: dict = {}
        for s in range(1, n + 1):
            ms = S.ops.get(s)
            if ms is None or ms.is_zero():
                continue
            for r in range(0, n - s + 1):
                t = n - r - s
                mo = S.ops.get(r + 1 + t)
                if mo is None or mo.is_zero():
                    continue
                sign = -1 if (r + s * t) % 2 else 1
                block = cofree_slice(coop, V, s).encode(0, w[r:r + s])
                word = w[:r] + (block,) + w[r + s:]
                inner = koszul_apply([ident] * r + [ms] + [ident] * t, {word: sign}, F)
                outer_sl = cofree_slice(coop, V, r + 1 + t)
                for u, v in inner.items():
                    for y, c in mo.cols.get(outer_sl.encode(0, u), {}).items():
                        acc[y] = acc.get(y, 0) + v * c
        col = {y: F(v) for y, v in acc.items() if F(v) != 0}
        if col:
            cols[x] = col
    return GradedMap(F, src, V, n - 3, cols)


def stasheff_translated(S: AInfinityStructure, n: int) -> GradedMap:
    """s⁻¹ ∘ (μ∘μ)_(n) ∘ s^{⊗n} for the coderivation μ attached to S."""
    mu = mn_to_coderivation(S)
    sq = square_arity(mu, n)
    Su = Suspension.of(S.field, S.V.module)
    return _conjugate(S.field, sq, Su, Su, n, S.cooperad, False, n - 3)


def stasheff_residual(S: AInfinityStructure, n: int) -> GradedMap:
    """Arity-n Stasheff residual, computed both ways; disagreement is a bug."""
    a = stasheff_direct(S, n)
    b = stasheff_translated(S, n)
    if a != b:
        raise InternalAssertFailure(n, "stasheff_two_paths")
    return a


# ---------------------------------------------------------------------------
# transfer to homology and Massey products


@dataclass
class HomologyTransfer:
    A: DGAlgebraPresentation
    H: ChainComplex
    reps: GradedMap
    structure: AInfinityStructure
    morphism: AInfinityMorphismData
    problem: TransferProblem
    result: TransferResult

    def verify(self):
        return verify(self.result.structure, self.result.morphism, self.problem.structure, self.problem.N)


def homology_problem(A: DGAlgebraPresentation, N: int, window=None, f: GradedMap | None = None):
    """The transfer problem H(A) -> A (f defaults to the cycle-choosing map)."""
    H, reps = cycle_choosing_map(A.complex, window)
    if f is None:
        f = reps
    coop = as_cooperad(max(N, 1), A.field)
    sA, SA = suspend_complex(A.complex)
    sH, SH = suspend_complex(H)
    nu = dga_to_coderivation(A, N, (sA, SA))
    nu = ArityCoderivation(coop, sA.module, sA.module, -1, nu.terms)
    sf = SA.s @ f @ SH.s_inv
    sf.degree = 0
    p = TransferProblem(coop, sH, sA, GradedMap(A.field, sH.module, sA.module, 0, sf.cols), nu, N, "down")
    return H, reps, p


def transfer_to_homology(A: DGAlgebraPresentation, N: int, pivot_policy: str = "forward",
                         check: bool = False, window=None) -> HomologyTransfer:
    """A∞-structure on H(A) with m_1 = 0 and an A∞-quasi-isomorphism H(A) -> A.

    Over a field the cycle-choosing map is a homotopy equivalence, so the
    Hom-complex hypothesis holds automatically and ``check`` defaults to off.
    """
    H, reps, p = homology_problem(A, N, window)
    res = transfer_down(p, pivot_policy=pivot_policy, check=check)
    S = mn_from_coderivation(res.structure, H)
    f = morphism_from_arity(res.morphism, H, A.complex)
    return HomologyTransfer(A, H, reps, S, f, p, res)


class MasseyPreconditionError(ValueError):
    pass


@dataclass
class MasseyResult:
    classes: tuple[str, str, str]
    degree: int
    value: dict[str, object]  # class name -> coefficient
    indeterminacy: list[dict[str, object]]  # basis of a·H + H·c in the result degree
    zero_mod_indeterminacy: bool

    @property
    def is_zero(self) -> bool:
        return not self.value


def massey_triple(S: AInfinityStructure, a, b, c) -> MasseyResult:
    """Class of m_3(a, b, c) together with the indeterminacy a·H + H·c.

    It represents the triple Massey product <a, b, c> up to a global sign fixed
    by the suspension convention.  Requires m_1 = 0, m_2(a, b) = 0 = m_2(b, c).
    """
    H = S.V.module
    F = S.field
    if not S.op(1).is_zero():
        raise MasseyPreconditionError("m_1 must vanish")
    ia, ib, ic = (H.index(x) if isinstance(x, str) else x for x in (a, b, c))
    for (p, q) in ((ia, ib), (ib, ic)):
        prod = S.apply(2, (p, q))
        if prod:
            shown = " + ".join(f"{F.format(v)}*{H.names[k]}" for k, v in sorted(prod.items()))
            raise MasseyPreconditionError(f"m_2({H.names[p]}, {H.names[q]}) = {shown} is not zero")
    deg = H.degrees[ia] + H.degrees[ib] + H.degrees[ic] + 1
    val = S.apply(3, (ia, ib, ic)) if S.N >= 3 else {}
    target = H.by_degree.get(deg, [])
    gens = []
    for h in H.by_degree.get(H.degrees[ib] + H.degrees[ic] + 1, []):
        gens.append(S.apply(2, (ia, h)))
    for h in H.by_degree.get(H.degrees[ia] + H.degrees[ib] + 1, []):
        gens.append(S.apply(2, (h, ic)))
    gens = [g for g in gens if g]
    basis = []
    if gens and target:
        M = Matrix(F, [[g.get(t, F.zero) for t in target] for g in gens], len(target))
        R, piv, _ = rref(M)
        basis = [{H.names[t]: R.rows[i][j] for j, t in enumerate(target) if R.rows[i][j] != 0}
                 for i in range(len(piv))]
    zero_mod = True
    if val:
        vecs = [[bvec.get(H.names[t], F.zero) for t in target] for bvec in basis]
        v = [val.get(t, F.zero) for t in target]
        r0 = len(rref(Matrix(F, vecs, len(target)))[1]) if vecs else 0
        r1 = len(rref(Matrix(F, vecs + [v], len(target)))[1])
        zero_mod = r1 == r0
    return MasseyResult((H.names[ia], H.names[ib], H.names[ic]), deg,
                        {H.names[k]: v for k, v in sorted(val.items())}, basis, zero_mod)
