"""Graded modules, chain complexes and graded maps.

Grading is homological: differentials have degree -1.  A :class:`GradedMap`
stores the image of every basis vector as a sparse dict, which is the
natural shape for the tensor-word computations downstream; ``block(k)``
gives the dense per-degree matrix when one is wanted.
"""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field
from functools import cached_property
from itertools import product
from typing import Iterable, Sequence

from .linalg import Field, Matrix, kernel_basis, rref, solve, sparse_kernel_basis

SparseVec = dict


@dataclass(frozen=True)
class GradedModule:
    names: tuple[str, ...]
    degrees: tuple[int, ...]

    def __post_init__(self):
        if len(self.names) != len(self.degrees):
            raise ValueError("names and degrees differ in length")
        if len(set(self.names)) != len(self.names):
            raise ValueError("basis names must be unique")

    @classmethod
    def from_pairs(cls, pairs: Iterable[tuple[str, int]]) -> GradedModule:
        pairs = list(pairs)
        return cls(tuple(str(n) for n, _ in pairs), tuple(int(d) for _, d in pairs))

    @property
    def dim(self) -> int:
        return len(self.names)

    def index(self, name: str) -> int:
        return self._index[name]

    @cached_property
    def _index(self) -> dict[str, int]:
        return {n: i for i, n in enumerate(self.names)}

    @cached_property
    def by_degree(self) -> dict[int, list[int]]:
        out: dict[int, list[int]] = {}
        for i, d in enumerate(self.degrees):
            out.setdefault(d, []).append(i)
        return out

    def degree_range(self) -> tuple[int, int]:
        if not self.degrees:
            return (0, 0)
        return min(self.degrees), max(self.degrees)

    def shifted(self, k: int, prefix: str = "") -> GradedModule:
        return GradedModule(tuple(prefix + n for n in self.names), tuple(d + k for d in self.degrees))

    def negated(self) -> GradedModule:
        return GradedModule(self.names, tuple(-d for d in self.degrees))


class GradedMap:
    """Homogeneous linear map ``source -> target`` of a fixed degree.

    ``cols[i]`` is the image of source basis vector ``i`` as {target index: coeff};
    missing columns are zero.  ``source``/``target`` may be any object with
    ``dim`` and ``degrees`` (modules or cofree slices).
    """

    __slots__ = ("field", "source", "target", "degree", "cols")

    def __init__(self, field: Field, source, target, degree: int, cols: dict | None = None):
        self.field = field
        self.source = source
        self.target = target
        self.degree = degree
        self.cols: dict[int, SparseVec] = {} if cols is None else cols

    @classmethod
    def zero(cls, field, source, target, degree=0) -> GradedMap:
        return cls(field, source, target, degree)

    @classmethod
    def identity(cls, field, module) -> GradedMap:
        one = field.one
        return cls(field, module, module, 0, {i: {i: one} for i in range(module.dim)})

    @classmethod
    def from_entries(cls, field, source, target, degree, entries: Iterable[tuple[int, int, object]]) -> GradedMap:
        """Build from (source index, target index, coeff) triples; repeated entries add."""
        m = cls(field, source, target, degree)
        for i, j, v in entries:
            col = m.cols.setdefault(i, {})
            col[j] = col.get(j, 0) + field(v)
        m._prune()
        m.check_degrees()
        return m

    @classmethod
    def from_blocks(cls, field, source, target, degree, blocks: dict[int, Matrix]) -> GradedMap:
        entries = []
        for k, M in blocks.items():
            src = source.by_degree.get(k, [])
            tgt = target.by_degree.get(k + degree, [])
            if M.nrows != len(tgt) or M.ncols != len(src):
                raise ValueError(f"block {k} has shape {M.nrows}x{M.ncols}, expected {len(tgt)}x{len(src)}")
            for r, j in enumerate(tgt):
                for c, i in enumerate(src):
                    if M.rows[r][c] != 0:
                        entries.append((i, j, M.rows[r][c]))
        return cls.from_entries(field, source, target, degree, entries)

    def _prune(self):
        F = self.field
        for i in list(self.cols):
            col = {j: F(v) for j, v in self.cols[i].items()}
            col = {j: v for j, v in col.items() if v != 0}
            if col:
                self.cols[i] = col
            else:
                del self.cols[i]
        return self

    def check_degrees(self):
        sd, td, k = self.source.degrees, self.target.degrees, self.degree
        for i, col in self.cols.items():
            for j in col:
                if td[j] != sd[i] + k:
                    raise ValueError(
                        f"degree violation: source element {i} (degree {sd[i]}) hits target element {j} "
                        f"(degree {td[j]}) under a map of degree {k}"
                    )
        return self

    def block(self, k: int) -> Matrix:
        src = self.source.by_degree.get(k, [])
        tgt = self.target.by_degree.get(k + self.degree, [])
        pos = {j: r for r, j in enumerate(tgt)}
        M = Matrix.zeros(self.field, len(tgt), len(src))
        for c, i in enumerate(src):
            for j, v in self.cols.get(i, {}).items():
                M.rows[pos[j]][c] = v
        return M

    def col(self, i: int) -> SparseVec:
        return self.cols.get(i, {})

    def apply(self, vec: SparseVec) -> SparseVec:
        F = self.field
        out: SparseVec = {}
        for i, a in vec.items():
            for j, v in self.cols.get(i, {}).items():
                out[j] = out.get(j, 0) + a * v
        return _clean(F, out)

    def __matmul__(self, other: GradedMap) -> GradedMap:
        """Composition ``self ∘ other``."""
        F = self.field
        cols = {}
        for i, c in other.cols.items():
            out: SparseVec = {}
            for j, a in c.items():
                for k, v in self.cols.get(j, {}).items():
                    out[k] = out.get(k, 0) + a * v
            out = _clean(F, out)
            if out:
                cols[i] = out
        return GradedMap(F, other.source, self.target, self.degree + other.degree, cols)

    def _combine(self, other: GradedMap, sign: int) -> GradedMap:
        if self.degree != other.degree and not (self.is_zero() or other.is_zero()):
            raise ValueError(f"cannot add maps of degrees {self.degree} and {other.degree}")
        F = self.field
        cols = {i: dict(c) for i, c in self.cols.items()}
        for i, c in other.cols.items():
            t = cols.setdefault(i, {})
            for j, v in c.items():
                t[j] = t.get(j, 0) + sign * v
        deg = self.degree if not self.is_zero() else other.degree
        return GradedMap(F, self.source, self.target, deg, cols)._prune()

    def __add__(self, other):
        return self._combine(other, 1)

    def __sub__(self, other):
        return self._combine(other, -1)

    def __neg__(self):
        return self.scale(-1)

    def scale(self, a) -> GradedMap:
        F = self.field
        a = F(a)
        return GradedMap(F, self.source, self.target, self.degree,
                         {i: {j: F(a * v) for j, v in c.items()} for i, c in self.cols.items()})._prune()

    def is_zero(self) -> bool:
        return not self.cols

    def nnz(self) -> int:
        return sum(len(c) for c in self.cols.values())

    def first_nonzero(self):
        """(source index, target index, value) of the smallest nonzero entry, or None."""
        if not self.cols:
            return None
        i = min(self.cols)
        j = min(self.cols[i])
        return i, j, self.cols[i][j]

    def __eq__(self, other):
        if not isinstance(other, GradedMap):
            return NotImplemented
        return (self - other).is_zero()

    def __repr__(self):
        return f"GradedMap(degree={self.degree}, {self.source.dim}->{self.target.dim}, nnz={self.nnz()})"


def _clean(F: Field, vec: SparseVec) -> SparseVec:
    out = {}
    for j, v in vec.items():
        v = F(v)
        if v != 0:
            out[j] = v
    return out


@dataclass(frozen=True, eq=False)
class ChainComplex:
    module: GradedModule
    differential: GradedMap
    field: Field = dc_field(repr=False)

    @classmethod
    def build(cls, field: Field, module: GradedModule, differential: GradedMap | None = None,
              check: bool = True) -> ChainComplex:
        if differential is None:
            differential = GradedMap.zero(field, module, module, -1)
        if differential.degree != -1 and not differential.is_zero():
            raise ValueError("differential must have degree -1")
        differential.degree = -1
        cx = cls(module, differential, field)
        if check:
            cx.check()
        return cx

    @property
    def degrees(self):
        return self.module.degrees

    @property
    def dim(self):
        return self.module.dim

    @property
    def by_degree(self):
        return self.module.by_degree

    def check(self):
        sq = self.differential @ self.differential
        bad = sq.first_nonzero()
        if bad is not None:
            raise ValueError(f"d^2 != 0 on basis element {self.module.names[bad[0]]!r}")
        self.differential.check_degrees()
        return self


def koszul_sign(map_degrees: Sequence[int], elem_degrees: Sequence[int]) -> int:
    """(-1)^{sum_{i<j} |phi_j| |x_i|}."""
    parity = 0
    acc = 0
    for md, ed in zip(map_degrees, elem_degrees):
        parity ^= (md & 1) & (acc & 1)
        acc += ed
    return -1 if parity else 1


def koszul_apply(maps: Sequence[GradedMap], element: dict[tuple, object], field: Field | None = None) -> dict[tuple, object]:
    """Apply ``maps[0] ⊗ ... ⊗ maps[k-1]`` to a linear combination of tensor words.

    Words are tuples of basis indices, one per factor.  Sign:
    ``(phi_1 ⊗ ... ⊗ phi_k)(x_1 ⊗ ... ⊗ x_k) = (-1)^{sum_{i<j}|phi_j||x_i|} phi_1 x_1 ⊗ ... ⊗ phi_k x_k``.
    """
    F = field or maps[0].field
    k = len(maps)
    mdeg = [m.degree for m in maps]
    out: dict[tuple, object] = {}
    for word, coeff in element.items():
        if len(word) != k:
            raise ValueError(f"word of arity {len(word)} given to {k} maps")
        try:
            edeg = [m.source.degrees[x] for m, x in zip(maps, word)]
        except IndexError:
            raise ValueError(f"word {word} is not a basis word of the maps' sources") from None
        s = koszul_sign(mdeg, edeg)
        images = [maps[i].cols.get(word[i]) for i in range(k)]
        if any(not im for im in images):
            continue
        c0 = coeff * s
        for combo in product(*(im.items() for im in images)):
            v = c0
            for _, a in combo:
                v *= a
            w = tuple(j for j, _ in combo)
            out[w] = out.get(w, 0) + v
    return {w: F(v) for w, v in out.items() if F(v) != 0}


def hom_differential(phi: GradedMap, source: ChainComplex, target: ChainComplex) -> GradedMap:
    """d_N ∘ phi - (-1)^n phi ∘ d_M."""
    n = phi.degree
    a = target.differential @ phi
    b = phi @ source.differential
    a.degree = b.degree = n - 1
    return a - b if n % 2 == 0 else a + b


class HomSlice:
    """Coordinates on Hom(M, N)_n = prod_k Hom(M_k, N_{n+k}).

    ``M`` and ``N`` need ``dim``, ``degrees``, ``by_degree`` and a sparse
    ``differential`` (a GradedMap of degree -1).  The coordinate list is
    ordered by source index, then target index.
    """

    def __init__(self, field: Field, source, target, degree: int, source_diff: GradedMap, target_diff: GradedMap):
        self.field = field
        self.source = source
        self.target = target
        self.degree = degree
        self.source_diff = source_diff
        self.target_diff = target_diff
        coords = []
        tb = target.by_degree
        for x, d in enumerate(source.degrees):
            for y in tb.get(d + degree, ()):
                coords.append((x, y))
        self.coords = coords
        self.index = {c: i for i, c in enumerate(coords)}

    @property
    def dim(self) -> int:
        return len(self.coords)

    def shifted(self, k: int) -> HomSlice:
        return HomSlice(self.field, self.source, self.target, self.degree + k, self.source_diff, self.target_diff)

    def flatten(self, phi: GradedMap) -> SparseVec:
        out = {}
        for x, col in phi.cols.items():
            for y, v in col.items():
                out[self.index[(x, y)]] = v
        return out

    def unflatten(self, vec: SparseVec) -> GradedMap:
        cols: dict = {}
        for i, v in vec.items():
            if v != 0:
                x, y = self.coords[i]
                cols.setdefault(x, {})[y] = v
        return GradedMap(self.field, self.source, self.target, self.degree, cols)

    def differential_columns(self, lower: HomSlice | None = None) -> list[SparseVec]:
        """Columns of ∂: Hom_n -> Hom_{n-1}, indexed by ``lower``'s coordinates."""
        F = self.field
        lower = lower or self.shifted(-1)
        dN = self.target_diff.cols
        # transpose of d_M: x -> [(x', c)] with d_M x' = ... + c x
        dMt: dict[int, list] = {}
        for xp, col in self.source_diff.cols.items():
            for x, c in col.items():
                dMt.setdefault(x, []).append((xp, c))
        sgn = -1 if self.degree % 2 == 0 else 1
        li = lower.index
        cols = []
        for x, y in self.coords:
            c: SparseVec = {}
            for z, v in dN.get(y, {}).items():
                k = li[(x, z)]
                c[k] = c.get(k, 0) + v
            for xp, v in dMt.get(x, ()):
                k = li[(xp, y)]
                c[k] = c.get(k, 0) + sgn * v
            cols.append(_clean(F, c))
        return cols


def homology(C: ChainComplex, window: tuple[int, int] | None = None):
    """Homology with echelon-chosen representatives.

    Returns ``(H, reps, proj)``: H a GradedModule, ``reps: H -> C`` sending each
    class to a cycle, and ``proj: C -> H`` whose restriction to cycles is the
    quotient map (so ``proj ∘ reps = id``).
    """
    F = C.field
    lo, hi = _window(C.module, window)
    names, degs, rep_vecs, proj_rows = [], [], [], []
    for k in range(lo, hi + 1):
        idx = C.by_degree.get(k, [])
        if not idx:
            continue
        below = C.by_degree.get(k - 1, [])
        above = C.by_degree.get(k + 1, [])
        Dk = C.differential.block(k) if below else Matrix.zeros(F, 0, len(idx))
        Z = kernel_basis(Dk)
        if above:
            Dup = C.differential.block(k + 1)
            _, piv, _ = rref(Dup)
            B = [Dup.column(j) for j in piv]
        else:
            B = []
        chosen: list[list] = []
        span = list(B)
        for z in Z:
            if _rank_cols(F, span + [z], len(idx)) > len(span):
                span.append(z)
                chosen.append(z)
        # complete B ∪ chosen to a basis of C_k, invert, read off class coordinates
        basis = list(B) + chosen
        for j in range(len(idx)):
            e = [F.zero] * len(idx)
            e[j] = F.one
            if _rank_cols(F, basis + [e], len(idx)) > len(basis):
                basis.append(e)
        P = Matrix(F, [list(r) for r in zip(*basis)], len(basis)) if basis else Matrix.zeros(F, 0, 0)
        _, _, T = rref(P)  # T = P^{-1} since P is invertible
        used = set()
        for t, z in enumerate(chosen):
            nm = _class_name(C.module, idx, z, used)
            names.append(nm)
            degs.append(k)
            rep_vecs.append({idx[j]: v for j, v in enumerate(z) if v != 0})
            row = T.rows[len(B) + t]
            proj_rows.append({idx[j]: v for j, v in enumerate(row) if v != 0})
    H = GradedModule(tuple(names), tuple(degs))
    reps = GradedMap(F, H, C.module, 0, {h: v for h, v in enumerate(rep_vecs) if v})
    pcols: dict = {}
    for h, row in enumerate(proj_rows):
        for i, v in row.items():
            pcols.setdefault(i, {})[h] = v
    proj = GradedMap(F, C.module, H, 0, pcols)
    return H, reps, proj


def _class_name(M: GradedModule, idx, z, used):
    lead = next(j for j, v in enumerate(z) if v != 0)
    support = [j for j, v in enumerate(z) if v != 0]
    base = f"[{M.names[idx[lead]]}]" if len(support) == 1 and z[lead] == 1 else f"[{M.names[idx[lead]]}+]"
    nm, c = base, 1
    while nm in used:
        c += 1
        nm = f"{base}{c}"
    used.add(nm)
    return nm


def _rank_cols(F, cols, n):
    if not cols:
        return 0
    return len(rref(Matrix(F, [list(r) for r in zip(*cols)], len(cols)))[1])


def _window(M: GradedModule, window):
    lo, hi = M.degree_range()
    if window is None:
        return lo - 1, hi + 1
    if M.dim and (window[0] > lo or window[1] < hi):
        raise ValueError(f"window {window} does not cover degrees {lo}..{hi}")
    return window


def cycle_choosing_map(C: ChainComplex, window=None) -> tuple[ChainComplex, GradedMap]:
    H, reps, _ = homology(C, window)
    return ChainComplex.build(C.field, H), reps


@dataclass
class QuasiIsoReport:
    ok: bool
    per_degree: dict[int, tuple[int, int, int]]  # degree -> (dim H source, dim H target, rank induced)

    def __bool__(self):
        return self.ok


def induced_on_homology(f: GradedMap, source: ChainComplex, target: ChainComplex, window=None):
    Hs, rs, _ = homology(source, window)
    Ht, _, pt = homology(target, window)
    return Hs, Ht, pt @ f @ rs


def is_quasi_iso(f: GradedMap, source: ChainComplex, target: ChainComplex, window=None) -> QuasiIsoReport:
    lo = min(source.module.degree_range()[0], target.module.degree_range()[0]) - 1
    hi = max(source.module.degree_range()[1], target.module.degree_range()[1]) + 1
    if window is not None:
        lo, hi = min(lo, window[0]), max(hi, window[1])
    Hs, Ht, g = induced_on_homology(f, source, target, (lo, hi))
    g.degree = 0
    report = {}
    ok = True
    for k in range(lo, hi + 1):
        a = len(Hs.by_degree.get(k, []))
        b = len(Ht.by_degree.get(k, []))
        r = len(rref(g.block(k))[1]) if a and b else 0
        report[k] = (a, b, r)
        if not (a == b == r):
            ok = False
    return QuasiIsoReport(ok, report)


def hom_homology_map_is_iso(field: Field, X: HomSlice, Y: HomSlice, g_cols, reverse: bool = False) -> tuple[bool, dict]:
    """Is the chain map g: Hom-complex X -> Y an isomorphism on homology in degree ``X.degree``?

    ``g_cols`` maps X-coordinates (degree n) to sparse Y-coordinate vectors.
    """
    from .linalg import sparse_rank

    dX = X.differential_columns()
    dY = Y.differential_columns()
    dXup = X.shifted(1).differential_columns(X)
    dYup = Y.shifted(1).differential_columns(Y)
    ZX = sparse_kernel_basis(field, dX)
    zX = len(ZX)
    bX = sparse_rank(field, dXup)
    zY = len(sparse_kernel_basis(field, dY))
    bY = sparse_rank(field, dYup)
    img = [_apply_cols(field, g_cols, z) for z in ZX]
    span = sparse_rank(field, img + dYup)
    hX, hY = zX - bX, zY - bY
    injective = span - bY == hX
    surjective = span == zY
    return injective and surjective, {"dim_H_source": hX, "dim_H_target": hY, "image_rank": span - bY,
                                      "injective": injective, "surjective": surjective}


def _apply_cols(field, cols, vec):
    out: SparseVec = {}
    for j, a in vec.items():
        for i, v in cols[j].items():
            out[i] = out.get(i, 0) + a * v
    return _clean(field, out)
