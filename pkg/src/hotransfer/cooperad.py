"""Nonsymmetric conilpotent cooperads given by structure constants.

A cooperad is stored as its total cocompositions
``Δ_{k; n_1..n_k}: C(n) -> C(k) ⊗ C(n_1) ⊗ ... ⊗ C(n_k)``, keyed by the
integer composition ``(n_1, ..., n_k)``.  ``C(1)`` is one-dimensional in
degree 0 and the pieces carry no differential.  Everything is truncated at
``max_arity``.

The A-infinity case uses :func:`as_cooperad`: one basis element per arity,
all constants ``+1`` (plain deconcatenation).  It is meant to be applied to
the *suspension* ``sV``; the suspension signs are produced later by the
Koszul rule, see :mod:`hotransfer.ainf`.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property, lru_cache
from itertools import product
from typing import Iterator

from .gradedcx import GradedMap, GradedModule
from .linalg import QQ, Field

FORMAT_VERSION = 1


@lru_cache(maxsize=None)
def compositions(n: int, k: int) -> tuple[tuple[int, ...], ...]:
    """Compositions of n into k positive parts, in lexicographic order."""
    if k == 1:
        return ((n,),) if n >= 1 else ()
    out = []
    for first in range(1, n - k + 2):
        for rest in compositions(n - first, k - 1):
            out.append((first,) + rest)
    return tuple(out)


def all_compositions(n: int) -> Iterator[tuple[int, ...]]:
    for k in range(1, n + 1):
        yield from compositions(n, k)


class Cooperad:
    """Structure constants of a nonsymmetric cooperad, truncated at ``max_arity``.

    ``cocomp[(n_1, ..., n_k)]`` is a list of ``(source, top, (c_1..c_k), coeff)``:
    source basis index in ``C(n)``, top index in ``C(k)``, indices in ``C(n_i)``.
    """

    def __init__(self, field: Field, pieces: dict[int, GradedModule], cocomp: dict, name: str = "custom"):
        self.field = field
        self.pieces = dict(pieces)
        self.max_arity = max(pieces)
        self.name = name
        self.cocomp = {tuple(k): [(s, t, tuple(cs), field(v)) for s, t, cs, v in entries]
                       for k, entries in cocomp.items()}
        if set(self.pieces) != set(range(1, self.max_arity + 1)):
            raise ValueError("pieces must be given for every arity 1..N")
        one = self.pieces[1]
        if one.dim != 1 or one.degrees[0] != 0:
            raise ValueError("C(1) must be one-dimensional in degree 0")

    symmetric = False

    def piece(self, n: int) -> GradedModule:
        return self.pieces[n]

    @cached_property
    def _by_source(self) -> dict:
        out: dict = {}
        for comp, entries in self.cocomp.items():
            d = out.setdefault(comp, {})
            for s, t, cs, v in entries:
                if v != 0:
                    d.setdefault(s, []).append((t, cs, v))
        return out

    def entries(self, comp: tuple[int, ...], c: int) -> list:
        """Terms ``(top, (c_1..c_k), coeff)`` of Δ_comp applied to basis element c."""
        return self._by_source.get(comp, {}).get(c, [])

    def __repr__(self):
        return f"Cooperad({self.name!r}, N={self.max_arity})"


@lru_cache(maxsize=None)
def as_cooperad(N: int, field: Field = QQ) -> Cooperad:
    """The coassociative cooperad used for A-infinity structures (on sV)."""
    if N < 1:
        raise ValueError("N must be >= 1")
    pieces = {n: GradedModule((f"a{n}",), (0,)) for n in range(1, N + 1)}
    cocomp = {}
    for n in range(1, N + 1):
        for comp in all_compositions(n):
            cocomp[comp] = [(0, 0, (0,) * len(comp), 1)]
    return Cooperad(field, pieces, cocomp, name="A_infinity")


def _planar_trees(n: int):
    if n == 1:
        return [None]
    out = []
    for a in range(1, n):
        for left in _planar_trees(a):
            for right in _planar_trees(n - a):
                out.append((left, right))
    return out


def _leaves(t) -> int:
    return 1 if t is None else _leaves(t[0]) + _leaves(t[1])


def _cuts(t):
    """All ways to write t as (top tree) grafted with a list of subtrees."""
    yield None, [t]
    if t is not None:
        for tl, pl in _cuts(t[0]):
            for tr, pr in _cuts(t[1]):
                yield (tl, tr), pl + pr


def _tree_name(t) -> str:
    return "|" if t is None else f"({_tree_name(t[0])}{_tree_name(t[1])})"


def planar_tree_cooperad(N: int, field: Field = QQ) -> Cooperad:
    """Cofree cooperad on one binary cogenerator: C(n) = planar binary trees with n leaves."""
    trees = {n: _planar_trees(n) for n in range(1, N + 1)}
    index = {n: {t: i for i, t in enumerate(ts)} for n, ts in trees.items()}
    pieces = {n: GradedModule(tuple(_tree_name(t) for t in ts), (0,) * len(ts)) for n, ts in trees.items()}
    cocomp: dict = {}
    for n, ts in trees.items():
        for s, t in enumerate(ts):
            for top, pieces_ in _cuts(t):
                comp = tuple(_leaves(p) for p in pieces_)
                k = len(comp)
                cs = tuple(index[m][p] for m, p in zip(comp, pieces_))
                cocomp.setdefault(comp, []).append((s, index[k][top], cs, 1))
    return Cooperad(field, pieces, cocomp, name="planar_trees")


@dataclass(frozen=True, eq=False)
class CofreeSlice:
    """Basis of C^n(V) = C(n) ⊗ V^{⊗n}, enumerated lexicographically in (c, v_1, ..., v_n)."""

    cooperad: Cooperad
    V: GradedModule
    n: int

    @property
    def dim(self) -> int:
        return self.cooperad.piece(self.n).dim * self.V.dim ** self.n

    def encode(self, c: int, word: tuple[int, ...]) -> int:
        d = self.V.dim
        i = c
        for v in word:
            i = i * d + v
        return i

    @cached_property
    def words(self) -> list[tuple[int, tuple[int, ...]]]:
        C = self.cooperad.piece(self.n)
        return [(c, w) for c in range(C.dim) for w in product(range(self.V.dim), repeat=self.n)]

    def decode(self, i: int) -> tuple[int, tuple[int, ...]]:
        return self.words[i]

    @cached_property
    def degrees(self) -> tuple[int, ...]:
        cd = self.cooperad.piece(self.n).degrees
        vd = self.V.degrees
        return tuple(cd[c] + sum(vd[v] for v in w) for c, w in self.words)

    @cached_property
    def by_degree(self) -> dict[int, list[int]]:
        out: dict[int, list[int]] = {}
        for i, d in enumerate(self.degrees):
            out.setdefault(d, []).append(i)
        return out

    def name(self, i: int) -> str:
        c, w = self.decode(i)
        C = self.cooperad.piece(self.n)
        body = "⊗".join(self.V.names[v] for v in w)
        return body if C.dim == 1 else f"{C.names[c]}:{body}"

    @cached_property
    def names(self) -> tuple[str, ...]:
        return tuple(self.name(i) for i in range(self.dim))


@lru_cache(maxsize=256)
def cofree_slice(cooperad: Cooperad, V: GradedModule, n: int) -> CofreeSlice:
    if n > cooperad.max_arity:
        raise ValueError(f"arity {n} exceeds the cooperad truncation {cooperad.max_arity}")
    return CofreeSlice(cooperad, V, n)


def _encode(c: int, word, d: int) -> int:
    for v in word:
        c = c * d + v
    return c


def cocompose_word(sl: CofreeSlice, x: int, comp: tuple[int, ...]) -> list[tuple[object, int, tuple[int, ...]]]:
    """Δ_comp of basis element x of C^n(V), as ``[(coeff, top, (x_1..x_k))]``.

    ``x_i`` indexes C^{n_i}(V).  Moving each C(n_i)-label past the V-letters of
    the earlier blocks contributes the Koszul sign.
    """
    coop = sl.cooperad
    c, word = sl.decode(x)
    vdeg = sl.V.degrees
    vdim = sl.V.dim
    offsets = []
    pos = 0
    for m in comp:
        offsets.append(pos)
        pos += m
    if pos != sl.n:
        raise ValueError(f"composition {comp} does not sum to {sl.n}")
    blocks = [word[o:o + m] for o, m in zip(offsets, comp)]
    bdeg = [sum(vdeg[v] for v in b) for b in blocks]
    out = []
    for top, cs, coeff in coop.entries(comp, c):
        parity = 0
        acc = 0
        for i, ci in enumerate(cs):
            cd = coop.pieces[comp[i]].degrees[ci]
            parity ^= (cd & 1) & (acc & 1)
            acc += bdeg[i]
        sign = -1 if parity else 1
        xs = tuple(_encode(ci, b, vdim) for ci, b in zip(cs, blocks))
        out.append((coeff * sign, top, xs))
    return out


class TensorSpace:
    """Lexicographic basis of a tensor product of module-like factors."""

    def __init__(self, factors):
        self.factors = list(factors)

    @property
    def dim(self) -> int:
        d = 1
        for f in self.factors:
            d *= f.dim
        return d

    def encode(self, idx: tuple[int, ...]) -> int:
        i = 0
        for f, x in zip(self.factors, idx):
            i = i * f.dim + x
        return i

    def decode(self, i: int) -> tuple[int, ...]:
        out = []
        for f in reversed(self.factors):
            i, r = divmod(i, f.dim)
            out.append(r)
        return tuple(reversed(out))

    @cached_property
    def degrees(self) -> tuple[int, ...]:
        return tuple(sum(f.degrees[x] for f, x in zip(self.factors, self.decode(i))) for i in range(self.dim))

    @cached_property
    def by_degree(self):
        out: dict[int, list[int]] = {}
        for i, d in enumerate(self.degrees):
            out.setdefault(d, []).append(i)
        return out


def cocompose(sl: CofreeSlice, k: int, comp: tuple[int, ...]) -> GradedMap:
    """Cocomposition C^n(V) -> C(k) ⊗ C^{n_1}(V) ⊗ ... ⊗ C^{n_k}(V) as a matrix."""
    comp = tuple(comp)
    if len(comp) != k or sum(comp) != sl.n or any(m < 1 for m in comp):
        raise ValueError(f"{comp} is not a composition of {sl.n} into {k} parts")
    coop = sl.cooperad
    target = TensorSpace([coop.piece(k)] + [cofree_slice(coop, sl.V, m) for m in comp])
    F = coop.field
    cols = {}
    for x in range(sl.dim):
        col: dict = {}
        for coeff, top, xs in cocompose_word(sl, x, comp):
            j = target.encode((top,) + xs)
            col[j] = col.get(j, 0) + coeff
        col = {j: F(v) for j, v in col.items() if F(v) != 0}
        if col:
            cols[x] = col
    return GradedMap(F, sl, target, 0, cols)


# ---------------------------------------------------------------------------
# validation


@dataclass
class CooperadReport:
    failures: list[dict]

    @property
    def ok(self) -> bool:
        return not self.failures

    def __bool__(self):
        return self.ok


def validate(C: Cooperad) -> CooperadReport:
    """Check counit axioms and coassociativity on all three-level trees up to the truncation."""
    F = C.field
    fails: list[dict] = []
    N = C.max_arity
    for comp in C.cocomp:
        if sum(comp) > N or len(comp) > N or any(m < 1 for m in comp):
            fails.append({"kind": "range", "composition": comp})
    for n in range(1, N + 1):
        for c in range(C.piece(n).dim):
            got = _collect(F, C.entries((n,), c))
            if got != {(0, (c,)): F.one}:
                fails.append({"kind": "counit-left", "arity": n, "source": c, "composition": (n,)})
            got = _collect(F, C.entries((1,) * n, c))
            if got != {(c, (0,) * n): F.one}:
                fails.append({"kind": "counit-right", "arity": n, "source": c, "composition": (1,) * n})
            for degree_ok in _degree_check(C, n, c):
                fails.append(degree_ok)
    for n in range(1, N + 1):
        for m in all_compositions(n):
            L = len(m)
            for ell in all_compositions(L):
                for c in range(C.piece(n).dim):
                    a, b = _three_level(C, c, m, ell)
                    if a != b:
                        groups = _group(m, ell)
                        fails.append({
                            "kind": "coassociativity", "arity": n, "source": c, "leaves": m, "middle": ell,
                            "involved": sorted({tuple(sum(g) for g in groups), m, ell} | {tuple(g) for g in groups}),
                        })
    return CooperadReport(fails)


def _degree_check(C, n, c):
    cd = C.piece(n).degrees[c]
    out = []
    for comp in all_compositions(n):
        for top, cs, v in C.entries(comp, c):
            d = C.piece(len(comp)).degrees[top] + sum(C.piece(m).degrees[x] for m, x in zip(comp, cs))
            if d != cd:
                out.append({"kind": "degree", "arity": n, "source": c, "composition": comp})
    return out


def _collect(F, entries):
    out: dict = {}
    for top, cs, v in entries:
        out[(top, cs)] = out.get((top, cs), 0) + v
    return {k: F(v) for k, v in out.items() if F(v) != 0}


def _group(m, ell):
    groups, pos = [], 0
    for l in ell:
        groups.append(m[pos:pos + l])
        pos += l
    return groups


def _three_level(C: Cooperad, c, m, ell):
    """Both iterated cocompositions of c along leaves m and middle arities ell."""
    F = C.field
    deg = lambda ar, i: C.piece(ar).degrees[i]
    groups = _group(m, ell)
    nmid = tuple(sum(g) for g in groups)
    k = len(ell)
    # path A: Δ_{k; nmid}, then Δ_{ell_i; group_i} on each factor
    A: dict = {}
    for top, cs, v in C.entries(nmid, c):
        choices = [C.entries(g, ci) for g, ci in zip(groups, cs)]
        for pick in product(*choices):
            coeff = v
            for _, _, w in pick:
                coeff *= w
            key = (top, tuple((mid, sub) for mid, sub, _ in pick))
            A[key] = A.get(key, 0) + coeff
    # path B: Δ_{L; m}, then Δ_{k; ell} on the top factor, then regroup with Koszul signs
    B: dict = {}
    for top, es, v in C.entries(m, c):
        for top2, fs, w in C.entries(tuple(ell), top):
            parity, acc, pos = 0, 0, 0
            subs = []
            for i, l in enumerate(ell):
                parity ^= (deg(ell[i], fs[i]) & 1) & (acc & 1)
                sub = es[pos:pos + l]
                acc += sum(deg(mm, e) for mm, e in zip(m[pos:pos + l], sub))
                subs.append(sub)
                pos += l
            key = (top2, tuple(zip(fs, subs)))
            B[key] = B.get(key, 0) + (-1 if parity else 1) * v * w
    clean = lambda d: {key: F(x) for key, x in d.items() if F(x) != 0}
    return clean(A), clean(B)


# ---------------------------------------------------------------------------
# file format


def cooperad_to_dict(C: Cooperad) -> dict:
    F = C.field
    entries = []
    for comp in sorted(C.cocomp, key=lambda t: (sum(t), len(t), t)):
        for s, t, cs, v in C.cocomp[comp]:
            entries.append([sum(comp), len(comp), list(comp), s, [t, *cs], F.format(v)])
    return {
        "format": FORMAT_VERSION,
        "kind": "cooperad",
        "name": C.name,
        "max_arity": C.max_arity,
        "pieces": {str(n): [[nm, d] for nm, d in zip(M.names, M.degrees)] for n, M in sorted(C.pieces.items())},
        "cocompositions": entries,
    }


def cooperad_from_dict(data: dict, field: Field, check: bool = True) -> Cooperad:
    if data.get("format") != FORMAT_VERSION:
        raise ValueError(f"unsupported cooperad format {data.get('format')!r}")
    pieces = {int(n): GradedModule.from_pairs(b) for n, b in data["pieces"].items()}
    cocomp: dict = {}
    for row in data["cocompositions"]:
        n, k, comp, s, target, coeff = row
        comp = tuple(comp)
        if sum(comp) != n or len(comp) != k:
            raise ValueError(f"inconsistent cocomposition entry {row}")
        if len(target) != k + 1:
            raise ValueError(f"target multi-index of {row} must have {k + 1} entries")
        cocomp.setdefault(comp, []).append((s, target[0], tuple(target[1:]), field.parse(str(coeff))))
    C = Cooperad(field, pieces, cocomp, name=data.get("name", "custom"))
    if check:
        rep = validate(C)
        if not rep.ok:
            raise ValueError(f"cooperad fails validation: {rep.failures[:3]}")
    return C
