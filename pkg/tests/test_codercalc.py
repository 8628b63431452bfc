from __future__ import annotations

import random

import pytest
from hypothesis import given, settings, strategies as st

from families import rand_coderivation, rand_ff, rand_map, rand_module, rand_morphism
from hotransfer.ainf import DGAlgebraPresentation, dga_to_coderivation
from hotransfer.codercalc import (
    ArityCoderivation,
    ArityMorphism,
    FFCoderivation,
    check_coleibniz,
    coderivation_component,
    compose_morphisms_arity,
    expand_full,
    extract_terms,
    ff_mixed_arity,
    mixed_arity,
    morphism_component,
    square_arity,
)
from hotransfer.cooperad import as_cooperad, cofree_slice, planar_tree_cooperad
from hotransfer.gradedcx import GradedMap, GradedModule, koszul_apply
from hotransfer.linalg import GF, QQ

F3 = GF(3)
N = 4
COOPERADS = {"A_infinity": as_cooperad(N, F3), "planar_trees": planar_tree_cooperad(N, F3)}


def family(seed: int, coop_name: str):
    rng = random.Random(seed)
    C = COOPERADS[coop_name]
    V = rand_module(rng, rng.randint(1, 2), prefix="v")
    W = rand_module(rng, rng.randint(1, 2), prefix="w")
    return rng, C, V, W


seeds = st.integers(0, 2**20)
coops = st.sampled_from(sorted(COOPERADS))


@settings(max_examples=25, deadline=None)
@given(seeds, coops)
def test_square_matches_full_product(seed, coop):
    rng, C, V, _ = family(seed, coop)
    mu = rand_coderivation(C, rng, V, N)
    E = expand_full(mu, N)
    full = extract_terms(E @ E)
    for n in range(1, N + 1):
        assert square_arity(mu, n) == full[n]


@settings(max_examples=25, deadline=None)
@given(seeds, coops)
def test_composition_matches_full_product(seed, coop):
    rng, C, V, W = family(seed, coop)
    Fm = rand_morphism(C, rng, V, W, N)
    Gm = rand_morphism(C, rng, W, V, N)
    full = extract_terms(expand_full(Gm, N) @ expand_full(Fm, N))
    for n in range(1, N + 1):
        assert compose_morphisms_arity(Gm, Fm, n) == full[n]


@settings(max_examples=25, deadline=None)
@given(seeds, coops)
def test_mixed_matches_full_product(seed, coop):
    rng, C, V, W = family(seed, coop)
    mu = rand_coderivation(C, rng, V, N)
    nu = rand_coderivation(C, rng, W, N)
    Fm = rand_morphism(C, rng, V, W, N)
    EF = expand_full(Fm, N)
    full = extract_terms(EF @ expand_full(mu, N) - expand_full(nu, N) @ EF)
    for n in range(1, N + 1):
        assert mixed_arity(Fm, mu, nu, n) == full[n]


@settings(max_examples=20, deadline=None)
@given(seeds, coops)
def test_ff_mixed_matches_full_product(seed, coop):
    rng, C, V, W = family(seed, coop)
    mu = rand_coderivation(C, rng, V, N)
    nu = rand_coderivation(C, rng, W, N)
    L = rand_morphism(C, rng, V, W, N)
    R = rand_morphism(C, rng, V, W, N)
    H = rand_ff(C, rng, V, W, L, R, N)
    EH = expand_full(H, N)
    full = extract_terms(expand_full(nu, N) @ EH + EH @ expand_full(mu, N))
    for n in range(1, N + 1):
        assert ff_mixed_arity(H, mu, nu, n) == full[n]
    rep = check_coleibniz(EH, "coderivation", expand_full(L, N), expand_full(R, N))
    assert rep.ok, rep.failure


@settings(max_examples=20, deadline=None)
@given(seeds, coops)
def test_coleibniz_of_generated_families(seed, coop):
    rng, C, V, W = family(seed, coop)
    mu = rand_coderivation(C, rng, V, N)
    Fm = rand_morphism(C, rng, V, W, N)
    E = expand_full(mu, N)
    assert check_coleibniz(E, "coderivation").ok
    assert check_coleibniz(expand_full(Fm, N), "morphism").ok
    # odd square and commutators stay coderivations
    nu = rand_coderivation(C, rng, V, N)
    E2 = expand_full(nu, N)
    assert check_coleibniz(E @ E, "coderivation").ok
    assert check_coleibniz(E @ E2 + E2 @ E, "coderivation").ok
    rt = extract_terms(E)
    assert all(rt[n] == mu.terms[n] for n in range(1, N + 1))


@pytest.mark.parametrize("coop", sorted(COOPERADS))
def test_corrupted_block_is_detected(coop):
    rng, C, V, _ = family(7, coop)
    V = GradedModule(("a", "b"), (0, 0))
    mu = rand_coderivation(C, rng, V, N, degree=0)
    X = expand_full(mu, N)
    g = X.source.glob(3, 0)
    col = X.cols.setdefault(g, {})
    t = X.target.glob(2, 1)
    col[t] = F3(col.get(t, 0) + 1)
    rep = check_coleibniz(X, "coderivation")
    assert not rep.ok
    assert rep.failure["source_arity"] == 3 and rep.failure["target_arity"] == 2


def test_identity_expands_to_identity():
    C = COOPERADS["planar_trees"]
    V = GradedModule(("a", "b"), (0, 1))
    E = expand_full(ArityMorphism.identity(C, V), N)
    assert E == GradedMap.identity(F3, E.source)


def test_components_vanish_above_the_diagonal():
    rng, C, V, W = family(3, "A_infinity")
    Fm = rand_morphism(C, rng, V, W, N)
    E = expand_full(Fm, N)
    for g, col in E.cols.items():
        n, _ = E.source.split(g)
        assert all(E.target.split(h)[0] <= n for h in col)


def test_morphism_component_diagonal_and_linear():
    rng, C, V, W = family(11, "planar_trees")
    f1 = rand_map(F3, rng, V, W, 0, 0.9)
    Fm = ArityMorphism(C, V, W, {1: f1})
    for n in range(1, N + 1):
        src = cofree_slice(C, V, n)
        diag = morphism_component(Fm, n, n)
        tgt = cofree_slice(C, W, n)
        for x in range(src.dim):
            c, w = src.decode(x)
            img = koszul_apply([f1] * n, {w: 1}, F3)
            assert diag.cols.get(x, {}) == {tgt.encode(c, u): v for u, v in img.items()}
        for k in range(1, n):
            assert morphism_component(Fm, n, k).is_zero()


def test_ainf_arity_two_composition_law():
    rng, C, V, W = family(5, "A_infinity")
    Fm = rand_morphism(C, rng, V, W, 2, 0.8)
    Gm = rand_morphism(C, rng, W, V, 2, 0.8)
    got = compose_morphisms_arity(Gm, Fm, 2)
    s2W = cofree_slice(C, W, 2)
    expect = Gm.terms[1] @ Fm.terms[2]
    ff: dict = {}
    src = cofree_slice(C, V, 2)
    for x in range(src.dim):
        _, w = src.decode(x)
        for u, v in koszul_apply([Fm.terms[1]] * 2, {w: 1}, F3).items():
            ff.setdefault(x, {})[s2W.encode(0, u)] = v
    expect = expect + Gm.terms[2] @ GradedMap(F3, src, s2W, 0, ff)
    assert got == expect


def test_ainf_coderivation_component_three_to_two():
    rng, C, V, _ = family(9, "A_infinity")
    V = GradedModule(("a", "b"), (0, 1))
    eta = rand_coderivation(C, rng, V, 2, degree=-1, density=0.9)
    eta.terms[1] = GradedMap.zero(F3, cofree_slice(C, V, 1), V, -1)
    got = coderivation_component(eta, 3, 2)
    ident = GradedMap.identity(F3, V)
    s2, s3 = cofree_slice(C, V, 2), cofree_slice(C, V, 3)
    e2 = eta.terms[2]
    cols: dict = {}
    for x in range(s3.dim):
        _, (a, b, c) = s3.decode(x)
        acc: dict = {}
        for u, v in koszul_apply([e2, ident], {(s2.encode(0, (a, b)), c): 1}, F3).items():
            acc[u] = acc.get(u, 0) + v
        for u, v in koszul_apply([ident, e2], {(a, s2.encode(0, (b, c))): 1}, F3).items():
            acc[u] = acc.get(u, 0) + v
        col = {s2.encode(0, u): F3(v) for u, v in acc.items() if F3(v) != 0}
        if col:
            cols[x] = col
    assert got == GradedMap(F3, s3, s2, -1, cols)


def _small_algebra(assoc: bool, leibniz: bool):
    # x·x = y, plus x·y = z to break associativity; or d x = z with z·z = z, where d(x·z) = 0 ≠ (dx)·z
    M = GradedModule(("x", "y", "z"), (0, 0, 0))
    prod = [(0, 0, 1, 1)] + ([] if assoc else [(0, 1, 2, 1)])
    d = GradedMap.zero(QQ, M, M, -1)
    if not leibniz:
        M = GradedModule(("x", "y", "z"), (1, 2, 0))
        prod = [(2, 2, 2, 1)]
        d = GradedMap(QQ, M, M, -1, {0: {2: 1}})
    return DGAlgebraPresentation.build(QQ, M, d, prod, check=False)


def test_square_detects_leibniz_and_associativity():
    good = _small_algebra(True, True)
    mu = dga_to_coderivation(good, 3)
    assert all(square_arity(mu, n).is_zero() for n in (1, 2, 3))
    bad = _small_algebra(False, True)
    mu = dga_to_coderivation(bad, 3)
    assert square_arity(mu, 2).is_zero()
    assert not square_arity(mu, 3).is_zero()
    bad = _small_algebra(True, False)
    mu = dga_to_coderivation(bad, 3)
    assert not square_arity(mu, 2).is_zero()


def test_ff_rejects_symmetric_cooperads():
    C = as_cooperad(2, F3)

    class Sym:
        symmetric = True
        field = F3
        max_arity = 2

    V = GradedModule(("a",), (0,))
    ident = ArityMorphism.identity(C, V)
    with pytest.raises(ValueError):
        FFCoderivation(Sym(), V, V, ident, ident)


def test_plain_coderivation_along_morphism_is_coderivation():
    rng, C, V, W = family(13, "planar_trees")
    Fm = rand_morphism(C, rng, V, W, N)
    eta = ArityCoderivation(C, V, W, 1, {n: rand_map(F3, rng, cofree_slice(C, V, n), W, 1) for n in range(1, N + 1)},
                            along=Fm)
    EF = expand_full(Fm, N)
    rep = check_coleibniz(expand_full(eta, N), "coderivation", EF, EF)
    assert rep.ok, rep.failure
