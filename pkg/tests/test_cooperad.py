from __future__ import annotations

import pytest

from hotransfer.cooperad import (
    Cooperad,
    as_cooperad,
    cocompose,
    cocompose_word,
    cofree_slice,
    cooperad_from_dict,
    cooperad_to_dict,
    planar_tree_cooperad,
    validate,
)
from hotransfer.gradedcx import GradedModule
from hotransfer.linalg import GF, QQ

V = GradedModule(("a", "b"), (0, 1))


def test_as_cooperad_shape():
    C = as_cooperad(1)
    assert C.max_arity == 1 and C.piece(1).dim == 1
    C = as_cooperad(4)
    assert all(C.piece(n).dim == 1 and C.piece(n).degrees == (0,) for n in range(1, 5))
    assert C.entries((1, 2), 0) == [(0, (0, 0), 1)]


@pytest.mark.parametrize("make", [as_cooperad, planar_tree_cooperad])
@pytest.mark.parametrize("F", [QQ, GF(3)])
def test_builtin_cooperads_validate(make, F):
    rep = validate(make(4, F))
    assert rep.ok, rep.failures[:3]


def test_planar_tree_piece_dims():
    C = planar_tree_cooperad(5)
    assert [C.piece(n).dim for n in range(1, 6)] == [1, 1, 2, 5, 14]


def _copy(C: Cooperad) -> Cooperad:
    return Cooperad(C.field, C.pieces, {k: list(v) for k, v in C.cocomp.items()}, name="copy")


def test_perturbation_is_reported():
    C = _copy(as_cooperad(4))
    s, t, cs, v = C.cocomp[(2, 1)][0]
    C.cocomp[(2, 1)][0] = (s, t, cs, v + 1)
    rep = validate(C)
    assert not rep.ok
    kinds = {f["kind"] for f in rep.failures}
    assert "coassociativity" in kinds
    assert any((2, 1) in f.get("involved", ()) for f in rep.failures if f["kind"] == "coassociativity")


def test_counit_violation_is_reported():
    C = _copy(as_cooperad(3))
    C.cocomp[(3,)] = [(0, 0, (0,), 2)]
    rep = validate(C)
    assert any(f["kind"] == "counit-left" and f["arity"] == 3 for f in rep.failures)


def test_file_round_trip_matches_builtin():
    C = as_cooperad(4, GF(5))
    d = cooperad_to_dict(C)
    C2 = cooperad_from_dict(d, GF(5))
    assert validate(C2).ok
    for n in range(1, 5):
        s1, s2 = cofree_slice(C, V, n), cofree_slice(C2, V, n)
        assert s1.dim == s2.dim and s1.degrees == s2.degrees
        for comp in [(1,) * n, (n,)] + ([(1, n - 1)] if n > 1 else []):
            assert cocompose(s1, len(comp), comp).cols == cocompose(s2, len(comp), comp).cols


def test_bad_file_rejected():
    d = cooperad_to_dict(as_cooperad(3))
    d["cocompositions"][0][0] = 7
    with pytest.raises(ValueError):
        cooperad_from_dict(d, QQ)
    d = cooperad_to_dict(as_cooperad(3))
    d["format"] = 9
    with pytest.raises(ValueError):
        cooperad_from_dict(d, QQ)


def test_cocompose_identities():
    C = as_cooperad(3)
    sl = cofree_slice(C, V, 3)
    whole = cocompose(sl, 1, (3,))
    for x in range(sl.dim):
        assert len(whole.cols[x]) == 1 and next(iter(whole.cols[x].values())) == 1
    full = cocompose(sl, 3, (1, 1, 1))
    assert all(len(c) == 1 and next(iter(c.values())) == 1 for c in full.cols.values())


def test_deconcatenation_has_no_signs():
    C = as_cooperad(2)
    sl = cofree_slice(C, V, 2)
    for x in range(sl.dim):
        ((coeff, top, xs),) = cocompose_word(sl, x, (1, 1))
        _, w = sl.decode(x)
        assert coeff == 1 and xs == w


def test_cocompose_rejects_non_compositions():
    sl = cofree_slice(as_cooperad(3), V, 3)
    with pytest.raises(ValueError):
        cocompose(sl, 2, (1, 1))


def test_odd_labels_pick_up_koszul_signs():
    # one generator of degree 1 in arity 2, so Δ_(2,1) moves it past the first block
    F = QQ
    pieces = {1: GradedModule(("i",), (0,)), 2: GradedModule(("t",), (1,)), 3: GradedModule(("u",), (2,))}
    cocomp = {(1,): [(0, 0, (0,), 1)], (2,): [(0, 0, (0,), 1)], (3,): [(0, 0, (0,), 1)],
              (1, 1): [(0, 0, (0, 0), 1)], (1, 1, 1): [(0, 0, (0, 0, 0), 1)],
              (1, 2): [(0, 0, (0, 0), 1)], (2, 1): [(0, 0, (0, 0), 1)]}
    C = Cooperad(F, pieces, cocomp)
    sl = cofree_slice(C, V, 3)
    b = V.index("b")
    x = sl.encode(0, (b, b, b))
    ((coeff, _, _),) = cocompose_word(sl, x, (1, 2))
    assert coeff == -1
    ((coeff, _, _),) = cocompose_word(sl, x, (2, 1))
    assert coeff == 1
