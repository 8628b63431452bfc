"""Inductive transfer of square-zero coderivations along a chain map, and comparison.

Each algorithm walks n = 2, ..., N.  At arity n it computes an obstruction
that is a cycle in a Hom complex, kills it with a boundary, then splits the
remaining defect into "image of a cycle" plus "boundary" and uses the two
pieces as corrections.  All choices are made by the exact solvers in
:mod:`hotransfer.linalg`, so the output is deterministic for a fixed pivot
policy.

Correction signs.  With ``r = (F∘μ - ν∘F)_(n)`` we have
``r = f∘μ_(n) - ∂F_(n) + (lower terms)``, so ``r = f∘e' + ∂e''`` is absorbed by
``μ_(n) -= e'`` and ``F_(n) += e''``.  In the other direction
``r = -ν_(n)∘C^n(f) - ∂F_(n) + ...`` and the corrections are ``ν_(n) += e'``,
``F_(n) += e''``; the obstruction identity there reads
``(ν∘ν)_(n)∘C^n(f) = -∂r``.  The comparison homotopies are updated by
``H_(n) += e''`` for the same reason.
"""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field
from functools import lru_cache

from .codercalc import (
    ArityCoderivation,
    ArityMorphism,
    FFCoderivation,
    after_coderivation,
    arity_sum,
    coderivation_after,
    compose_morphisms_arity,
    ff_mixed_arity,
    mixed_arity,
    morphism_component,
    square_arity,
)
from .cooperad import Cooperad, cofree_slice
from .gradedcx import ChainComplex, GradedMap, HomSlice, hom_homology_map_is_iso
from .linalg import sparse_in_span_with_witness, sparse_kernel_basis, sparse_solve

HYPOTHESIS_WINDOW = (-2, -1, 0)


class TransferError(Exception):
    pass


class ProblemError(TransferError, ValueError):
    """Ill-formed input: not a chain map, d² ≠ 0, wrong arity-1 term, mismatched data."""


class HypothesisFailure(TransferError):
    def __init__(self, arity: int, which: str, partial=None, report=None):
        self.arity = arity
        self.which = which
        self.partial = partial
        self.report = report
        super().__init__(f"quasi-isomorphism hypothesis fails at arity {arity} ({which})")


class InternalAssertFailure(TransferError, AssertionError):
    def __init__(self, arity: int, which: str):
        self.arity = arity
        self.which = which
        super().__init__(f"checkpoint {which} failed at arity {arity}")


class SymmetricCooperad(TransferError, ValueError):
    pass


# ---------------------------------------------------------------------------
# problem and result types


@dataclass
class TransferProblem:
    """Transfer data.  ``structure`` lives on C(W) for "down" and on C(V) for "up"."""

    cooperad: Cooperad
    V: ChainComplex
    W: ChainComplex
    f: GradedMap
    structure: ArityCoderivation
    N: int
    direction: str = "down"

    def __post_init__(self):
        if self.direction not in ("down", "up"):
            raise ProblemError(f"unknown direction {self.direction!r}")
        if self.N < 1:
            raise ProblemError("max arity must be at least 1")
        if self.N > self.cooperad.max_arity:
            raise ProblemError(f"max arity {self.N} exceeds the cooperad truncation {self.cooperad.max_arity}")

    @property
    def field(self):
        return self.cooperad.field

    @property
    def carrier(self) -> ChainComplex:
        return self.W if self.direction == "down" else self.V

    def validate(self) -> None:
        F = self.field
        for name, X in (("V", self.V), ("W", self.W)):
            bad = (X.differential @ X.differential).first_nonzero()
            if bad is not None:
                raise ProblemError(f"d² ≠ 0 on {name} at basis element {X.module.names[bad[0]]}")
        if self.f.degree != 0:
            raise ProblemError("f must have degree 0")
        defect = self.W.differential @ self.f - self.f @ self.V.differential
        bad = defect.first_nonzero()
        if bad is not None:
            raise ProblemError(f"f is not a chain map (fails on {self.V.module.names[bad[0]]})")
        s = self.structure
        X = self.carrier
        if s.degree != -1:
            raise ProblemError("the given coderivation must have degree -1")
        if s.full_term(1) != X.differential:
            raise ProblemError("arity-1 term of the given coderivation differs from the differential")
        for n in range(1, self.N + 1):
            sq = square_arity(s, n)
            bad = sq.first_nonzero()
            if bad is not None:
                sl = cofree_slice(self.cooperad, X.module, n)
                raise ProblemError(f"given coderivation is not square-zero at arity {n} (on {sl.name(bad[0])})")
        del F


@dataclass
class ArityRecord:
    arity: int
    obstruction_nnz: int = 0
    solve_shape: tuple[int, int] = (0, 0)
    correction_nnz: int = 0
    defect_nnz: int = 0
    decompose_shape: tuple[int, int] = (0, 0)
    cycle_nnz: int = 0
    boundary_nnz: int = 0
    checks: dict = dc_field(default_factory=dict)

    def line(self) -> str:
        checks = " ".join(f"{k}={'ok' if v else 'FAIL'}" for k, v in self.checks.items())
        return (f"arity {self.arity}: obstruction nnz={self.obstruction_nnz} "
                f"solve {self.solve_shape[0]}x{self.solve_shape[1]} e nnz={self.correction_nnz}; "
                f"defect nnz={self.defect_nnz} decompose {self.decompose_shape[0]}x{self.decompose_shape[1]} "
                f"e' nnz={self.cycle_nnz} e'' nnz={self.boundary_nnz}; {checks}")


def format_trace(records) -> list[str]:
    return [r.line() for r in records]


@dataclass
class TransferResult:
    direction: str
    structure: ArityCoderivation  # μ on C(V) (down) or ν on C(W) (up)
    morphism: ArityMorphism
    trace: list[ArityRecord]
    N: int

    def trace_lines(self) -> list[str]:
        return format_trace(self.trace)


@dataclass
class ComparisonResult:
    direction: str
    iso: ArityMorphism  # Φ on C(V) or Ψ on C(W)
    homotopy: FFCoderivation | ArityCoderivation
    trace: list[ArityRecord]
    N: int

    def trace_lines(self) -> list[str]:
        return format_trace(self.trace)


# ---------------------------------------------------------------------------
# Hom-complex plumbing


@lru_cache(maxsize=128)
def slice_differential(cooperad: Cooperad, X: ChainComplex, n: int) -> GradedMap:
    """Differential of C^n(X) induced by d_X (C(n) carries none)."""
    d = ArityCoderivation(cooperad, X.module, X.module, -1, {1: X.differential})
    return arity_sum(d, n, None, cofree_slice(cooperad, X.module, n), ks=(n,))


def hom_slice(cooperad: Cooperad, S: ChainComplex, T: ChainComplex, n: int, degree: int) -> HomSlice:
    """Hom(C^n(S), T) in one degree."""
    sl = cofree_slice(cooperad, S.module, n)
    return HomSlice(cooperad.field, sl, T.module, degree, slice_differential(cooperad, S, n), T.differential)


def hom_d(phi: GradedMap, cooperad: Cooperad, S: ChainComplex, T: ChainComplex, n: int) -> GradedMap:
    """∂φ = d_T∘φ - (-1)^|φ| φ∘d for φ: C^n(S) -> T."""
    a = T.differential @ phi
    b = phi @ slice_differential(cooperad, S, n)
    a.degree = b.degree = phi.degree - 1
    return a - b if phi.degree % 2 == 0 else a + b


def _post_f_cols(X: HomSlice, Y: HomSlice, f: GradedMap) -> dict:
    """Coordinates of φ ↦ f∘φ from X to Y."""
    out = {}
    for i, (x, y) in enumerate(X.coords):
        col = {}
        for y2, v in f.cols.get(y, {}).items():
            col[Y.index[(x, y2)]] = v
        out[i] = col
    return out


def _pre_cnf_cols(X: HomSlice, Y: HomSlice, cnf: GradedMap) -> dict:
    """Coordinates of φ ↦ φ∘C^n(f) from Hom(C^n W, W) to Hom(C^n V, W)."""
    transpose: dict[int, list] = {}
    for xv, col in cnf.cols.items():
        for xw, v in col.items():
            transpose.setdefault(xw, []).append((xv, v))
    out = {}
    for i, (w, y) in enumerate(X.coords):
        col = {}
        for xv, v in transpose.get(w, ()):
            j = Y.index[(xv, y)]
            col[j] = col.get(j, 0) + v
        out[i] = col
    return out


def _apply(field, cols: dict, vec: dict) -> dict:
    out: dict = {}
    for j, a in vec.items():
        for i, v in cols[j].items():
            out[i] = out.get(i, 0) + a * v
    return {i: field(v) for i, v in out.items() if field(v) != 0}


def _kill_boundary(field, X: HomSlice, c: GradedMap, reverse: bool):
    """e in X with ∂e = c, or None.  Returns (e, (rows, cols))."""
    lower = X.shifted(-1)
    cols = X.differential_columns(lower)
    sol = sparse_solve(field, cols, lower.flatten(c), reverse=reverse)
    shape = (lower.dim, X.dim)
    return (None if sol is None else X.unflatten(sol)), shape


def _split_defect(field, X: HomSlice, Y: HomSlice, g_cols: dict, r: GradedMap, reverse: bool):
    """Write r = g(e') + ∂e'' with e' a cycle in X and e'' in Y shifted up by one."""
    Z = sparse_kernel_basis(field, X.differential_columns(), reverse=reverse)
    A = [_apply(field, g_cols, z) for z in Z]
    Yup = Y.shifted(1)
    B = Yup.differential_columns(Y)
    shape = (Y.dim, len(A) + len(B))
    sol = sparse_in_span_with_witness(field, Y.flatten(r), A, B, reverse=reverse)
    if sol is None:
        return None, None, shape
    x1, x2 = sol
    e1: dict = {}
    for j, a in x1.items():
        for i, v in Z[j].items():
            e1[i] = e1.get(i, 0) + a * v
    e1 = {i: field(v) for i, v in e1.items() if field(v) != 0}
    return X.unflatten(e1), Yup.unflatten(x2), shape


def _require(ok: bool, n: int, which: str, rec: ArityRecord):
    rec.checks[which] = ok
    if not ok:
        raise InternalAssertFailure(n, which)


def _c_n_f(cooperad, V, W, f, n) -> GradedMap:
    return morphism_component(ArityMorphism(cooperad, V.module, W.module, {1: f}), n, n)


# ---------------------------------------------------------------------------
# hypothesis check


@dataclass
class HypothesisReport:
    ok: bool
    direction: str
    window: tuple[int, ...]
    arities: dict = dc_field(default_factory=dict)

    @property
    def first_failure(self) -> int | None:
        bad = [n for n, r in sorted(self.arities.items()) if not r["ok"]]
        return bad[0] if bad else None

    def __bool__(self):
        return self.ok


def hypothesis_at_arity(cooperad, V: ChainComplex, W: ChainComplex, f: GradedMap, n: int, direction: str,
                        window=HYPOTHESIS_WINDOW) -> dict:
    F = cooperad.field
    degrees = {}
    ok = True
    cnf = _c_n_f(cooperad, V, W, f, n) if direction == "up" else None
    for k in window:
        Y = hom_slice(cooperad, V, W, n, k)
        if direction == "down":
            X = hom_slice(cooperad, V, V, n, k)
            g = _post_f_cols(X, Y, f)
        else:
            X = hom_slice(cooperad, W, W, n, k)
            g = _pre_cnf_cols(X, Y, cnf)
        iso, info = hom_homology_map_is_iso(F, X, Y, g)
        degrees[k] = info
        ok = ok and iso
    return {"ok": ok, "degrees": degrees}


def check_hypothesis(p: TransferProblem, window=HYPOTHESIS_WINDOW, arities=None) -> HypothesisReport:
    """Is f∘- (down) or -∘C^n(f) (up) a homology isomorphism on the Hom slices, arity by arity?

    Only the Hom degrees in ``window`` are examined; they contain every
    obstruction and correction the algorithms touch.
    """
    rep = HypothesisReport(True, p.direction, tuple(window))
    for n in arities or range(1, p.N + 1):
        r = hypothesis_at_arity(p.cooperad, p.V, p.W, p.f, n, p.direction, window)
        rep.arities[n] = r
        rep.ok = rep.ok and r["ok"]
    return rep


# ---------------------------------------------------------------------------
# verification


@dataclass
class VerifyReport:
    ok: bool
    N: int
    arities: dict = dc_field(default_factory=dict)
    failures: list = dc_field(default_factory=list)

    @property
    def max_failing_arity(self) -> int | None:
        return max((f["arity"] for f in self.failures), default=None)

    def __bool__(self):
        return self.ok

    def lines(self) -> list[str]:
        out = []
        for n in sorted(self.arities):
            parts = " ".join(f"{k}={'ok' if v else 'FAIL'}" for k, v in self.arities[n].items())
            out.append(f"arity {n}: {parts}")
        for f in self.failures:
            out.append(f"failure: {f['relation']} at arity {f['arity']} on {f['element']}")
        out.append("PASS" if self.ok else f"FAIL (max failing arity {self.max_failing_arity})")
        return out


def _record(rep: VerifyReport, n: int, name: str, m: GradedMap):
    bad = m.first_nonzero()
    rep.arities.setdefault(n, {})[name] = bad is None
    if bad is not None:
        rep.ok = False
        rep.failures.append({"relation": name, "arity": n, "element": m.source.name(bad[0])})


def verify(mu: ArityCoderivation, F: ArityMorphism, nu: ArityCoderivation, N: int) -> VerifyReport:
    """Exact check of μ∘μ = 0, ν∘ν = 0 and F∘μ - ν∘F = 0 at every arity ≤ N."""
    rep = VerifyReport(True, N)
    for n in range(1, N + 1):
        _record(rep, n, "mu_square", square_arity(mu, n))
        _record(rep, n, "nu_square", square_arity(nu, n))
        _record(rep, n, "chain_map", mixed_arity(F, mu, nu, n))
    return rep


def verify_comparison_down(phi: ArityMorphism, H, mu, mu2, F, F2, nu, N: int) -> VerifyReport:
    """μ'∘Φ = Φ∘μ and F'∘Φ - F = ν∘H + H∘μ, arity by arity."""
    rep = VerifyReport(True, N)
    G = ArityMorphism(F.cooperad, F.source, F.target)
    for n in range(1, N + 1):
        G.terms[n] = compose_morphisms_arity(F2, phi, n)
        X = coderivation_after(mu2, phi, n) - _as_degree(after_coderivation(phi, mu, n), -1)
        _record(rep, n, "iso_chain_map", X)
        D = G.terms[n] - F.full_term(n) - _homotopy_terms(H, G, F, mu, nu, n)
        _record(rep, n, "homotopy", D)
    return rep


def verify_comparison_up(psi: ArityMorphism, H, nu, nu2, F, F2, mu, N: int) -> VerifyReport:
    """ν∘Ψ = Ψ∘ν' and Ψ∘F' - F = ν∘H + H∘μ, arity by arity."""
    rep = VerifyReport(True, N)
    G = ArityMorphism(F.cooperad, F.source, F.target)
    for n in range(1, N + 1):
        G.terms[n] = compose_morphisms_arity(psi, F2, n)
        X = coderivation_after(nu, psi, n) - _as_degree(after_coderivation(psi, nu2, n), -1)
        _record(rep, n, "iso_chain_map", X)
        D = G.terms[n] - F.full_term(n) - _homotopy_terms(H, G, F, mu, nu, n)
        _record(rep, n, "homotopy", D)
    return rep


def _as_degree(m: GradedMap, d: int) -> GradedMap:
    m.degree = d
    return m


def _homotopy_terms(H, G, F, mu, nu, n) -> GradedMap:
    """(ν∘H + H∘μ)_(n); H is an (G, F)-coderivation, or a plain one along F."""
    if isinstance(H, FFCoderivation):
        H.left, H.right = G, F
        return ff_mixed_arity(H, mu, nu, n)
    a = coderivation_after(nu, H, n)
    b = after_coderivation(H, mu, n)
    a.degree = b.degree = 0
    return a + b


# ---------------------------------------------------------------------------
# the four algorithms


def _check_arity_one(p: TransferProblem):
    d = p.W.differential @ p.f - p.f @ p.V.differential
    if not d.is_zero():
        raise ProblemError("f is not a chain map")


def transfer_down(p: TransferProblem, pivot_policy: str = "forward", check: bool = True,
                  validate: bool = True) -> TransferResult:
    """Transfer ν on C(W) to μ on C(V) together with an ∞-morphism F with F_(1) = f.

    ``check`` runs the per-arity hypothesis test before solving; the solves
    themselves raise :class:`HypothesisFailure` whenever they have no solution.
    """
    if p.direction != "down":
        raise ProblemError("transfer_down needs a problem with direction 'down'")
    if validate:
        p.validate()
    else:
        _check_arity_one(p)
    coop, V, W, f, nu, N = p.cooperad, p.V, p.W, p.f, p.structure, p.N
    fld = coop.field
    rev = _reverse(pivot_policy)
    mu = ArityCoderivation(coop, V.module, V.module, -1, {1: V.differential})
    F = ArityMorphism(coop, V.module, W.module, {1: f})
    trace: list[ArityRecord] = []

    def partial():
        return TransferResult("down", mu.copy(), F.copy(), list(trace), N)

    for n in range(2, N + 1):
        rec = ArityRecord(n)
        if check:
            h = hypothesis_at_arity(coop, V, W, f, n, "down")
            if not h["ok"]:
                raise HypothesisFailure(n, "hypothesis", partial(), h)
        c = square_arity(mu, n)
        rec.obstruction_nnz = c.nnz()
        _require(hom_d(c, coop, V, V, n).is_zero(), n, "cycle", rec)
        r = mixed_arity(F, mu, nu, n)
        _require(f @ c == hom_d(r, coop, V, W, n), n, "image_boundary", rec)

        XV = hom_slice(coop, V, V, n, -1)
        e, rec.solve_shape = _kill_boundary(fld, XV, c, rev)
        if e is None:
            raise HypothesisFailure(n, "obstruction", partial())
        rec.correction_nnz = e.nnz()
        mu_prev, F_prev = mu.terms.get(n), F.terms.get(n)
        mu.terms[n] = mu.full_term(n) - e
        r = mixed_arity(F, mu, nu, n)
        _require(hom_d(r, coop, V, W, n).is_zero(), n, "defect_cycle", rec)
        rec.defect_nnz = r.nnz()

        Y = hom_slice(coop, V, W, n, -1)
        e1, e2, rec.decompose_shape = _split_defect(fld, XV, Y, _post_f_cols(XV, Y, f), r, rev)
        if e1 is None:
            _restore(mu, n, mu_prev), _restore(F, n, F_prev)
            raise HypothesisFailure(n, "defect", partial())
        rec.cycle_nnz, rec.boundary_nnz = e1.nnz(), e2.nnz()
        mu.terms[n] = mu.terms[n] - e1
        F.terms[n] = F.full_term(n) + e2
        _require(square_arity(mu, n).is_zero(), n, "square_zero", rec)
        _require(mixed_arity(F, mu, nu, n).is_zero(), n, "chain_map", rec)
        trace.append(rec)
    return TransferResult("down", mu, F, trace, N)


def transfer_up(p: TransferProblem, pivot_policy: str = "forward", check: bool = True,
                validate: bool = True) -> TransferResult:
    """Transfer μ on C(V) to ν on C(W) together with F: C(V) -> C(W), F_(1) = f."""
    if p.direction != "up":
        raise ProblemError("transfer_up needs a problem with direction 'up'")
    if validate:
        p.validate()
    else:
        _check_arity_one(p)
    coop, V, W, f, mu, N = p.cooperad, p.V, p.W, p.f, p.structure, p.N
    fld = coop.field
    rev = _reverse(pivot_policy)
    nu = ArityCoderivation(coop, W.module, W.module, -1, {1: W.differential})
    F = ArityMorphism(coop, V.module, W.module, {1: f})
    trace: list[ArityRecord] = []

    def partial():
        return TransferResult("up", nu.copy(), F.copy(), list(trace), N)

    for n in range(2, N + 1):
        rec = ArityRecord(n)
        if check:
            h = hypothesis_at_arity(coop, V, W, f, n, "up")
            if not h["ok"]:
                raise HypothesisFailure(n, "hypothesis", partial(), h)
        cnf = _c_n_f(coop, V, W, f, n)
        c = square_arity(nu, n)
        rec.obstruction_nnz = c.nnz()
        _require(hom_d(c, coop, W, W, n).is_zero(), n, "cycle", rec)
        r = mixed_arity(F, mu, nu, n)
        _require(c @ cnf == -hom_d(r, coop, V, W, n), n, "image_boundary", rec)

        XW = hom_slice(coop, W, W, n, -1)
        e, rec.solve_shape = _kill_boundary(fld, XW, c, rev)
        if e is None:
            raise HypothesisFailure(n, "obstruction", partial())
        rec.correction_nnz = e.nnz()
        nu_prev, F_prev = nu.terms.get(n), F.terms.get(n)
        nu.terms[n] = nu.full_term(n) - e
        r = mixed_arity(F, mu, nu, n)
        _require(hom_d(r, coop, V, W, n).is_zero(), n, "defect_cycle", rec)
        rec.defect_nnz = r.nnz()

        Y = hom_slice(coop, V, W, n, -1)
        e1, e2, rec.decompose_shape = _split_defect(fld, XW, Y, _pre_cnf_cols(XW, Y, cnf), r, rev)
        if e1 is None:
            _restore(nu, n, nu_prev), _restore(F, n, F_prev)
            raise HypothesisFailure(n, "defect", partial())
        rec.cycle_nnz, rec.boundary_nnz = e1.nnz(), e2.nnz()
        nu.terms[n] = nu.terms[n] + e1
        F.terms[n] = F.full_term(n) + e2
        _require(square_arity(nu, n).is_zero(), n, "square_zero", rec)
        _require(mixed_arity(F, mu, nu, n).is_zero(), n, "chain_map", rec)
        trace.append(rec)
    return TransferResult("up", nu, F, trace, N)


def _restore(fam, n, prev):
    if prev is None:
        fam.terms.pop(n, None)
    else:
        fam.terms[n] = prev


def _reverse(policy: str) -> bool:
    if policy not in ("forward", "reverse"):
        raise ValueError(f"unknown pivot policy {policy!r}")
    return policy == "reverse"


def _new_homotopy(coop, V, W, G, F, symmetric: bool):
    if symmetric:
        return ArityCoderivation(coop, V.module, W.module, 1, {}, along=F)
    if getattr(coop, "symmetric", False):
        raise SymmetricCooperad("homotopies as (F,F')-coderivations need a nonsymmetric cooperad")
    return FFCoderivation(coop, V.module, W.module, G, F, 1, {})


def _same_arity_one(a, b, what):
    if a.full_term(1) != b.full_term(1):
        raise ProblemError(f"arity-1 terms of the two {what} differ")


def compare_down(mu, mu2, F, F2, nu, f, N: int, V: ChainComplex, W: ChainComplex,
                 pivot_policy: str = "forward", symmetric: bool = False,
                 check_inputs: bool = True) -> ComparisonResult:
    """Φ: (C(V), μ) -> (C(V), μ') with Φ_(1) = id and H with F'∘Φ - F = ν∘H + H∘μ.

    H is an (F'∘Φ, F)-coderivation of degree +1 with H_(1) = 0, or with
    ``symmetric`` a plain coderivation along F.
    """
    coop = mu.cooperad
    fld = coop.field
    rev = _reverse(pivot_policy)
    _same_arity_one(mu, mu2, "structures")
    if F.full_term(1) != f or F2.full_term(1) != f:
        raise ProblemError("both morphisms must have arity-1 term f")
    if check_inputs:
        for a, b in ((mu, F), (mu2, F2)):
            rep = verify(a, b, nu, N)
            if not rep.ok:
                raise ProblemError(f"input does not verify against the given structure: {rep.failures[0]}")
    phi = ArityMorphism.identity(coop, V.module)
    G = ArityMorphism(coop, V.module, W.module, {1: f})
    H = _new_homotopy(coop, V, W, G, F, symmetric)
    trace: list[ArityRecord] = []

    def partial():
        return ComparisonResult("down", phi.copy(), H.copy(), list(trace), N)

    for n in range(2, N + 1):
        rec = ArityRecord(n)
        G.terms[n - 1] = compose_morphisms_arity(F2, phi, n - 1)
        X = coderivation_after(mu2, phi, n) - _as_degree(after_coderivation(phi, mu, n), -1)
        rec.obstruction_nnz = X.nnz()
        _require(hom_d(X, coop, V, V, n).is_zero(), n, "cycle", rec)
        D = compose_morphisms_arity(F2, phi, n) - F.full_term(n) - _homotopy_terms(H, G, F, mu, nu, n)
        _require(f @ X == hom_d(D, coop, V, W, n), n, "image_boundary", rec)

        XV = hom_slice(coop, V, V, n, 0)
        e, rec.solve_shape = _kill_boundary(fld, XV, X, rev)
        if e is None:
            raise HypothesisFailure(n, "obstruction", partial())
        rec.correction_nnz = e.nnz()
        phi_prev = phi.terms.get(n)
        phi.terms[n] = phi.full_term(n) - e
        D = compose_morphisms_arity(F2, phi, n) - F.full_term(n) - _homotopy_terms(H, G, F, mu, nu, n)
        _require(hom_d(D, coop, V, W, n).is_zero(), n, "defect_cycle", rec)
        rec.defect_nnz = D.nnz()

        Y = hom_slice(coop, V, W, n, 0)
        e1, e2, rec.decompose_shape = _split_defect(fld, XV, Y, _post_f_cols(XV, Y, f), D, rev)
        if e1 is None:
            _restore(phi, n, phi_prev)
            raise HypothesisFailure(n, "defect", partial())
        rec.cycle_nnz, rec.boundary_nnz = e1.nnz(), e2.nnz()
        phi.terms[n] = phi.terms[n] - e1
        H.terms[n] = H.full_term(n) + e2
        X = coderivation_after(mu2, phi, n) - _as_degree(after_coderivation(phi, mu, n), -1)
        _require(X.is_zero(), n, "iso_chain_map", rec)
        D = compose_morphisms_arity(F2, phi, n) - F.full_term(n) - _homotopy_terms(H, G, F, mu, nu, n)
        _require(D.is_zero(), n, "homotopy", rec)
        trace.append(rec)
    if N >= 1:
        G.terms[N] = compose_morphisms_arity(F2, phi, N)
    return ComparisonResult("down", phi, H, trace, N)


def compare_up(nu, nu2, F, F2, mu, f, N: int, V: ChainComplex, W: ChainComplex,
               pivot_policy: str = "forward", symmetric: bool = False,
               check_inputs: bool = True) -> ComparisonResult:
    """Ψ: (C(W), ν') -> (C(W), ν) with Ψ_(1) = id and H with Ψ∘F' - F = ν∘H + H∘μ.

    Here (μ, F, ν) and (μ, F', ν') both verify; H is a (Ψ∘F', F)-coderivation.
    """
    coop = nu.cooperad
    fld = coop.field
    rev = _reverse(pivot_policy)
    _same_arity_one(nu, nu2, "structures")
    if F.full_term(1) != f or F2.full_term(1) != f:
        raise ProblemError("both morphisms must have arity-1 term f")
    if check_inputs:
        for a, b in ((F, nu), (F2, nu2)):
            rep = verify(mu, a, b, N)
            if not rep.ok:
                raise ProblemError(f"input does not verify against the given structure: {rep.failures[0]}")
    psi = ArityMorphism.identity(coop, W.module)
    G = ArityMorphism(coop, V.module, W.module, {1: f})
    H = _new_homotopy(coop, V, W, G, F, symmetric)
    trace: list[ArityRecord] = []

    def partial():
        return ComparisonResult("up", psi.copy(), H.copy(), list(trace), N)

    for n in range(2, N + 1):
        rec = ArityRecord(n)
        G.terms[n - 1] = compose_morphisms_arity(psi, F2, n - 1)
        cnf = _c_n_f(coop, V, W, f, n)
        X = coderivation_after(nu, psi, n) - _as_degree(after_coderivation(psi, nu2, n), -1)
        rec.obstruction_nnz = X.nnz()
        _require(hom_d(X, coop, W, W, n).is_zero(), n, "cycle", rec)
        D = compose_morphisms_arity(psi, F2, n) - F.full_term(n) - _homotopy_terms(H, G, F, mu, nu, n)
        _require(X @ cnf == hom_d(D, coop, V, W, n), n, "image_boundary", rec)

        XW = hom_slice(coop, W, W, n, 0)
        e, rec.solve_shape = _kill_boundary(fld, XW, X, rev)
        if e is None:
            raise HypothesisFailure(n, "obstruction", partial())
        rec.correction_nnz = e.nnz()
        psi_prev = psi.terms.get(n)
        psi.terms[n] = psi.full_term(n) - e
        D = compose_morphisms_arity(psi, F2, n) - F.full_term(n) - _homotopy_terms(H, G, F, mu, nu, n)
        _require(hom_d(D, coop, V, W, n).is_zero(), n, "defect_cycle", rec)
        rec.defect_nnz = D.nnz()

        Y = hom_slice(coop, V, W, n, 0)
        e1, e2, rec.decompose_shape = _split_defect(fld, XW, Y, _pre_cnf_cols(XW, Y, cnf), D, rev)
        if e1 is None:
            _restore(psi, n, psi_prev)
            raise HypothesisFailure(n, "defect", partial())
        rec.cycle_nnz, rec.boundary_nnz = e1.nnz(), e2.nnz()
        psi.terms[n] = psi.terms[n] - e1
        H.terms[n] = H.full_term(n) + e2
        X = coderivation_after(nu, psi, n) - _as_degree(after_coderivation(psi, nu2, n), -1)
        _require(X.is_zero(), n, "iso_chain_map", rec)
        D = compose_morphisms_arity(psi, F2, n) - F.full_term(n) - _homotopy_terms(H, G, F, mu, nu, n)
        _require(D.is_zero(), n, "homotopy", rec)
        trace.append(rec)
    if N >= 1:
        G.terms[N] = compose_morphisms_arity(psi, F2, N)
    return ComparisonResult("up", psi, H, trace, N)
