from __future__ import annotations

import random

import pytest
from hypothesis import given, settings, strategies as st

from families import rand_map
from hotransfer.ainf import homology_problem
from hotransfer.algebras import heisenberg
from hotransfer.codercalc import (
    ArityCoderivation,
    ArityMorphism,
    compose_morphisms_arity,
    expand_full,
    extract_terms,
)
from hotransfer.cooperad import Cooperad, cofree_slice, planar_tree_cooperad
from hotransfer.gradedcx import ChainComplex, GradedMap, GradedModule, cycle_choosing_map
from hotransfer.linalg import GF, QQ
from hotransfer.transfer import (
    HypothesisFailure,
    ProblemError,
    SymmetricCooperad,
    TransferProblem,
    check_hypothesis,
    compare_down,
    compare_up,
    transfer_down,
    transfer_up,
    verify,
    verify_comparison_down,
    verify_comparison_up,
)

F5 = GF(5)


def inverse(G: ArityMorphism, N: int) -> ArityMorphism:
    """Inverse of an automorphism with G_(1) = id."""
    K = ArityMorphism(G.cooperad, G.source, G.source, {1: G.full_term(1)})
    for n in range(2, N + 1):
        K.terms[n] = -compose_morphisms_arity(G, K, n)
    return K


def conjugated(C: Cooperad, X: ChainComplex, N: int, rng) -> ArityCoderivation:
    """G ∘ d ∘ G⁻¹ for a random automorphism G: square-zero with higher terms."""
    M = X.module
    G = ArityMorphism(C, M, M, {1: GradedMap.identity(C.field, M)})
    for n in range(2, N + 1):
        G.terms[n] = rand_map(C.field, rng, cofree_slice(C, M, n), M, 0, 0.6)
    d = ArityCoderivation(C, M, M, -1, {1: X.differential})
    full = expand_full(G, N) @ expand_full(d, N) @ expand_full(inverse(G, N), N)
    terms = extract_terms(full)
    for t in terms.values():
        t.degree = -1
    return ArityCoderivation(C, M, M, -1, terms)


def small_complex(F):
    # x -> y acyclic pair plus free classes a (deg 0) and b (deg 1)
    M = GradedModule(("x", "y", "a", "b"), (1, 0, 0, 1))
    return ChainComplex.build(F, M, GradedMap(F, M, M, -1, {0: {1: 1}}))


@pytest.fixture(scope="module")
def heis():
    A = heisenberg(QQ)
    H, reps, p = homology_problem(A, 4)
    return A, p


def test_heisenberg_down_verifies(heis):
    _, p = heis
    res = transfer_down(p)
    assert verify(res.structure, res.morphism, p.structure, p.N).ok
    assert [r.arity for r in res.trace] == [2, 3, 4]
    for r in res.trace:
        assert all(r.checks.values())
    # m_3 is forced to be nonzero by the nontrivial Massey product
    assert not res.structure.full_term(3).is_zero()
    assert res.structure.full_term(1).is_zero()


def test_pivot_policies_both_verify(heis):
    _, p = heis
    for policy in ("forward", "reverse"):
        res = transfer_down(p, pivot_policy=policy)
        assert verify(res.structure, res.morphism, p.structure, p.N).ok
    with pytest.raises(ValueError):
        transfer_down(p, pivot_policy="sideways")


def test_identity_transfer_is_trivial():
    rng = random.Random(2)
    C = planar_tree_cooperad(3, F5)
    X = small_complex(F5)
    nu = conjugated(C, X, 3, rng)
    p = TransferProblem(C, X, X, GradedMap.identity(F5, X.module), nu, 3, "down")
    res = transfer_down(p)
    assert verify(res.structure, res.morphism, nu, 3).ok


@settings(max_examples=10, deadline=None)
@given(st.integers(0, 10_000))
def test_planar_tree_transfer_down_and_up(seed):
    rng = random.Random(seed)
    N = 3
    C = planar_tree_cooperad(N, F5)
    W = small_complex(F5)
    nu = conjugated(C, W, N, rng)
    H, f = cycle_choosing_map(W)
    p = TransferProblem(C, H, W, f, nu, N, "down")
    assert check_hypothesis(p).ok
    res = transfer_down(p)
    assert verify(res.structure, res.morphism, nu, N).ok
    up = TransferProblem(C, H, W, f, res.structure, N, "up")
    back = transfer_up(up)
    assert verify(res.structure, back.morphism, back.structure, N).ok


def test_zero_map_fails_hypothesis_at_arity_one(heis):
    A, p = heis
    z = GradedMap.zero(QQ, p.V.module, p.W.module, 0)
    bad = TransferProblem(p.cooperad, p.V, p.W, z, p.structure, 3, "down")
    rep = check_hypothesis(bad)
    assert not rep.ok and rep.first_failure == 1
    with pytest.raises(HypothesisFailure) as e:
        transfer_down(bad, check=True)
    assert e.value.arity == 2
    assert e.value.partial is not None and e.value.partial.structure.full_term(1).is_zero()


def test_validation_errors(heis):
    _, p = heis
    M = p.W.module
    # [e1] -> e3 has degree 0 but d e3 ≠ 0
    twisted = GradedMap(QQ, p.V.module, M, 0, {p.V.module.index("[e1]"): {M.index("e3"): 1}})
    with pytest.raises(ProblemError):
        TransferProblem(p.cooperad, p.V, p.W, twisted, p.structure, 3, "down").validate()
    wrong = ArityCoderivation(p.cooperad, M, M, -1, dict(p.structure.terms))
    wrong.terms[1] = GradedMap.zero(QQ, cofree_slice(p.cooperad, M, 1), M, -1)
    with pytest.raises(ProblemError, match="arity-1"):
        TransferProblem(p.cooperad, p.V, p.W, p.f, wrong, 3, "down").validate()
    with pytest.raises(ProblemError):
        TransferProblem(p.cooperad, p.V, p.W, p.f, p.structure, 9, "down")
    with pytest.raises(ProblemError):
        TransferProblem(p.cooperad, p.V, p.W, p.f, p.structure, 3, "sideways")
    with pytest.raises(ProblemError):
        transfer_up(p)


def test_non_square_zero_structure_rejected(heis):
    _, p = heis
    M = p.W.module
    C = p.cooperad
    terms = dict(p.structure.terms)
    sl = cofree_slice(C, M, 3)
    x = next(i for i, d in enumerate(sl.degrees) if M.by_degree.get(d - 1))
    terms[3] = GradedMap(QQ, sl, M, -1, {x: {M.by_degree[sl.degrees[x] - 1][0]: 1}})
    bad = ArityCoderivation(C, M, M, -1, terms)
    with pytest.raises(ProblemError, match="square-zero"):
        TransferProblem(C, p.V, p.W, p.f, bad, 4, "down").validate()


def test_compare_down_with_itself_is_identity(heis):
    _, p = heis
    res = transfer_down(p)
    comp = compare_down(res.structure, res.structure, res.morphism, res.morphism, p.structure, p.f, p.N, p.V, p.W)
    assert all(comp.iso.full_term(n).is_zero() for n in range(2, p.N + 1))
    assert all(comp.homotopy.full_term(n).is_zero() for n in range(1, p.N + 1))


def test_compare_down_and_up_across_policies(heis):
    _, p = heis
    a = transfer_down(p)
    b = transfer_down(p, pivot_policy="reverse")
    comp = compare_down(a.structure, b.structure, a.morphism, b.morphism, p.structure, p.f, p.N, p.V, p.W)
    rep = verify_comparison_down(comp.iso, comp.homotopy, a.structure, b.structure, a.morphism, b.morphism,
                                 p.structure, p.N)
    assert rep.ok, rep.lines()
    up = TransferProblem(p.cooperad, p.V, p.W, p.f, a.structure, 3, "up")
    u1 = transfer_up(up)
    u2 = transfer_up(up, pivot_policy="reverse")
    comp = compare_up(u1.structure, u2.structure, u1.morphism, u2.morphism, a.structure, p.f, 3, p.V, p.W)
    rep = verify_comparison_up(comp.iso, comp.homotopy, u1.structure, u2.structure, u1.morphism, u2.morphism,
                               a.structure, 3)
    assert rep.ok, rep.lines()


def test_compare_rejects_mismatched_inputs(heis):
    _, p = heis
    a = transfer_down(p)
    other = ArityMorphism(p.cooperad, p.V.module, p.W.module, dict(a.morphism.terms))
    other.terms[1] = other.terms[1].scale(QQ(2))
    with pytest.raises(ProblemError):
        compare_down(a.structure, a.structure, a.morphism, other, p.structure, p.f, p.N, p.V, p.W)
    broken = ArityCoderivation(p.cooperad, p.V.module, p.V.module, -1, dict(a.structure.terms))
    broken.terms[3] = broken.terms[3].scale(QQ(2))
    with pytest.raises(ProblemError):
        compare_down(a.structure, broken, a.morphism, a.morphism, p.structure, p.f, p.N, p.V, p.W)


def test_symmetric_cooperads_refuse_ff_homotopies(heis):
    _, p = heis

    class Symmetric(Cooperad):
        symmetric = True

    C = p.cooperad
    S = Symmetric(C.field, C.pieces, C.cocomp, name="sym")
    M = p.V.module
    mu = ArityCoderivation(S, M, M, -1, {1: p.V.differential})
    Fm = ArityMorphism(S, M, p.W.module, {1: p.f})
    nu = ArityCoderivation(S, p.W.module, p.W.module, -1, {1: p.W.differential})
    with pytest.raises(SymmetricCooperad):
        compare_down(mu, mu, Fm, Fm, nu, p.f, 1, p.V, p.W, check_inputs=False)


def test_up_obstruction_identity_has_a_minus_sign():
    # replay each arity from the finished result: (ν∘ν)_(n)∘Cⁿ(f) = -∂(F∘μ - ν∘F)_(n)
    from hotransfer.codercalc import mixed_arity, square_arity
    from hotransfer.transfer import _c_n_f, hom_d

    N = 4
    C = planar_tree_cooperad(N, F5)
    X = small_complex(F5)
    f = GradedMap.identity(F5, X.module)
    seen = 0
    for seed, policy in [(s, p) for s in range(4) for p in ("forward", "reverse")]:
        mu = conjugated(C, X, N, random.Random(seed))
        res = transfer_up(TransferProblem(C, X, X, f, mu, N, "up"), policy, check=False)
        for n in range(2, N + 1):
            nu = ArityCoderivation(C, X.module, X.module, -1, {k: res.structure.full_term(k) for k in range(1, n)})
            Fm = ArityMorphism(C, X.module, X.module, {k: res.morphism.full_term(k) for k in range(1, n)})
            lhs = square_arity(nu, n) @ _c_n_f(C, X, X, f, n)
            dr = hom_d(mixed_arity(Fm, mu, nu, n), C, X, X, n)
            assert lhs == -dr
            if not lhs.is_zero():
                seen += 1
                assert lhs != dr
    assert seen > 0
