"""Small dg algebra families used by examples, tests and the CLI."""

from __future__ import annotations

import random
from itertools import combinations, product as iproduct

from .ainf import DGAlgebraPresentation
from .gradedcx import GradedMap, GradedModule
from .linalg import Field
from .transfer import ProblemError


def exterior_dga(field: Field, gens: list[tuple[str, int]], d_gens: dict[str, list[tuple[tuple[str, ...], object]]],
                 ) -> DGAlgebraPresentation:
    """Exterior algebra on odd generators, including the unit "1".

    ``d_gens[g]`` lists (monomial, coeff) pairs, a monomial being a tuple of
    generator names; d is extended to all monomials by the Leibniz rule.
    """
    if any(d % 2 == 0 for _, d in gens):
        raise ValueError("exterior generators must have odd degree")
    gidx = {g: i for i, (g, _) in enumerate(gens)}
    gdeg = [d for _, d in gens]
    monos = [s for k in range(len(gens) + 1) for s in combinations(range(len(gens)), k)]
    mindex = {m: i for i, m in enumerate(monos)}
    names = tuple("".join(gens[i][0] for i in m) if m else "1" for m in monos)
    degs = tuple(sum(gdeg[i] for i in m) for m in monos)
    M = GradedModule(names, degs)

    def mul_mono(a: tuple, b: tuple):
        if set(a) & set(b):
            return None
        seq = list(a) + list(b)
        inv = sum(1 for i in range(len(seq)) for j in range(i + 1, len(seq)) if seq[i] > seq[j])
        return tuple(sorted(seq)), (-1 if inv % 2 else 1)

    entries = []
    for a in monos:
        for b in monos:
            r = mul_mono(a, b)
            if r is not None:
                entries.append((mindex[a], mindex[b], mindex[r[0]], r[1]))

    def mono_of(names_: tuple[str, ...]):
        r, s = (), 1
        for g in names_:
            out = mul_mono(r, (gidx[g],))
            if out is None:
                return None, 0
            r, s2 = out
            s *= s2
        return r, s

    dg: dict[int, dict[tuple, object]] = {}
    for g, terms in d_gens.items():
        vec: dict = {}
        for mono, c in terms:
            m, s = mono_of(tuple(mono))
            if m is not None:
                vec[m] = vec.get(m, 0) + s * field(c)
        dg[gidx[g]] = vec

    cols = {}
    for m in monos:
        acc: dict = {}
        for j, g in enumerate(m):
            sign = -1 if j % 2 else 1  # each earlier generator is odd
            for t, c in dg.get(g, {}).items():
                left, right = m[:j], m[j + 1:]
                x = mul_mono(left, t)
                if x is None:
                    continue
                y = mul_mono(x[0], right)
                if y is None:
                    continue
                acc[y[0]] = acc.get(y[0], 0) + sign * x[1] * y[1] * c
        col = {mindex[t]: field(v) for t, v in acc.items() if field(v) != 0}
        if col:
            cols[mindex[m]] = col
    d = GradedMap(field, M, M, -1, cols)
    return DGAlgebraPresentation.build(field, M, d, entries, unit="1")


def heisenberg(field: Field) -> DGAlgebraPresentation:
    """Λ(e1, e2, e3), all in degree -1, with d e3 = e1 e2."""
    return exterior_dga(field, [("e1", -1), ("e2", -1), ("e3", -1)], {"e3": [(("e1", "e2"), 1)]})


def truncated_free_dga(field: Field, gens: list[tuple[str, int]], d_gens: dict[str, dict[tuple[str, ...], object]],
                       max_len: int = 3) -> DGAlgebraPresentation:
    """Free associative algebra on ``gens`` modulo words longer than ``max_len`` (no unit)."""
    gidx = {g: i for i, (g, _) in enumerate(gens)}
    gdeg = [d for _, d in gens]
    words = [w for k in range(1, max_len + 1) for w in iproduct(range(len(gens)), repeat=k)]
    windex = {w: i for i, w in enumerate(words)}
    M = GradedModule(tuple("".join(gens[i][0] for i in w) for w in words),
                     tuple(sum(gdeg[i] for i in w) for w in words))
    entries = []
    for a in words:
        for b in words:
            if len(a) + len(b) <= max_len:
                entries.append((windex[a], windex[b], windex[a + b], 1))
    dg = {gidx[g]: {tuple(gidx[x] for x in w): field(c) for w, c in terms.items()} for g, terms in d_gens.items()}
    cols = {}
    for w in words:
        acc: dict = {}
        pre = 0
        for j, g in enumerate(w):
            sign = -1 if pre % 2 else 1
            for t, c in dg.get(g, {}).items():
                nw = w[:j] + t + w[j + 1:]
                if len(nw) <= max_len and len(t) > 0:
                    acc[nw] = acc.get(nw, 0) + sign * c
            pre += gdeg[g]
        col = {windex[t]: field(v) for t, v in acc.items() if field(v) != 0}
        if col:
            cols[windex[w]] = col
    d = GradedMap(field, M, M, -1, cols)
    return DGAlgebraPresentation.build(field, M, d, entries)


def random_truncated_free_dga(field: Field, rng: random.Random, max_gens: int = 3, max_len: int = 3,
                              degrees=(-1, 0, 1), tries: int = 20) -> DGAlgebraPresentation:
    """Random truncated free dg algebra with d triangular on the generators.

    d(x_i) is a random combination of words in x_1..x_{i-1} of the right
    degree; candidates with d² ≠ 0 are redrawn (and d(x_i) = 0 as last resort).
    """
    g = rng.randint(1, max_gens)
    gens = [(f"x{i + 1}", rng.choice(degrees)) for i in range(g)]
    d_gens: dict[str, dict] = {}
    p = getattr(field, "p", 7)
    for i in range(1, g):
        name, deg = gens[i]
        cands = [w for k in range(1, max_len + 1) for w in iproduct(range(i), repeat=k)
                 if sum(gens[j][1] for j in w) == deg - 1]
        chosen = {}
        for _ in range(tries):
            trial = {}
            for w in cands:
                if rng.random() < 0.5:
                    trial[tuple(gens[j][0] for j in w)] = rng.randrange(1, p)
            d_gens[name] = trial
            try:
                truncated_free_dga(field, gens[: i + 1], d_gens, max_len)
                chosen = trial
                break
            except ProblemError:
                continue
        d_gens[name] = chosen
    return truncated_free_dga(field, gens, d_gens, max_len)


def change_basis(A: DGAlgebraPresentation, P: dict[int, dict[int, object]], suffix: str = "'") -> DGAlgebraPresentation:
    """Same dg algebra in the basis b_i = sum_j P[i][j] a_j (P invertible, degree preserving)."""
    from .linalg import Matrix, rref

    F = A.field
    M = A.module
    n = M.dim
    rows = [[F(P.get(i, {}).get(j, 1 if i == j else 0)) for j in range(n)] for i in range(n)]
    for i in range(n):
        for j in range(n):
            if rows[i][j] != 0 and M.degrees[i] != M.degrees[j]:
                raise ValueError("basis change must preserve degrees")
    _, piv, Pinv = rref(Matrix(F, [r[:] for r in rows], n))
    if len(piv) != n:
        raise ValueError("basis change is not invertible")
    # a_j = sum_i Q[j][i] b_i with Q = P^{-1}
    Q = Pinv.rows

    def to_b(vec: dict) -> dict:
        out: dict = {}
        for j, v in vec.items():
            for i in range(n):
                if Q[j][i] != 0:
                    out[i] = out.get(i, 0) + v * Q[j][i]
        return {i: F(v) for i, v in out.items() if F(v) != 0}

    def b_vec(i: int) -> dict:
        return {j: v for j, v in enumerate(rows[i]) if v != 0}

    B = GradedModule(tuple(nm + suffix for nm in M.names), M.degrees)
    d = A.complex.differential
    cols = {i: to_b(d.apply(b_vec(i))) for i in range(n)}
    d2 = GradedMap(F, B, B, -1, {i: c for i, c in cols.items() if c})
    entries = []
    for i in range(n):
        for k in range(n):
            for j, v in to_b(A.mul(b_vec(i), b_vec(k))).items():
                entries.append((i, k, j, v))
    unit = None
    if A.unit is not None:
        u = to_b({A.unit: F.one})
        if len(u) == 1 and next(iter(u.values())) == 1:
            unit = next(iter(u))
    return DGAlgebraPresentation.build(F, B, d2, entries, unit=unit)


def random_basis_change(A: DGAlgebraPresentation, rng: random.Random, density: float = 0.5) -> dict:
    """Random degree-preserving P = L·U with L, U unitriangular and entries of L, U in {-1, 0, 1}."""
    P: dict[int, dict[int, object]] = {}
    for deg, idx in A.module.by_degree.items():
        k = len(idx)
        L = [[1 if a == b else (rng.choice((-1, 1)) if b < a and rng.random() < density else 0)
              for b in range(k)] for a in range(k)]
        U = [[1 if a == b else (rng.choice((-1, 1)) if b > a and rng.random() < density else 0)
              for b in range(k)] for a in range(k)]
        for a in range(k):
            P[idx[a]] = {idx[b]: sum(L[a][t] * U[t][b] for t in range(k)) for b in range(k)}
    return P
