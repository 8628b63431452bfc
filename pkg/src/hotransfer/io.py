"""Problem and result files (JSON, ``"format": 1``).

Coefficients are strings ("3", "-1/2"; residues for prime fields).  Degrees
are written in the file's grading convention; with ``"grading":
"cohomological"`` every degree is negated on the way in and out, so the
library always works homologically.

A problem either names a dg algebra ("algebra") or gives V, W, f and a
structure explicitly.  With the builtin "A_infinity" cooperad, structures
are operation families m_n in unsuspended degrees; with a cooperad given by
structure constants they are coderivation terms, one C(n) label per input
word.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass, field as dc_field

from .ainf import (
    AInfinityStructure,
    DGAlgebraPresentation,
    Suspension,
    _conjugate,
    dga_structure,
    mn_from_coderivation,
    mn_to_coderivation,
    suspend_complex,
)
from .codercalc import ArityCoderivation, ArityMorphism
from .cooperad import Cooperad, as_cooperad, cofree_slice, cooperad_from_dict, cooperad_to_dict
from .gradedcx import ChainComplex, GradedMap, GradedModule, cycle_choosing_map
from .linalg import Field, field_from_name
from .transfer import ProblemError, TransferProblem

FORMAT = 1


class FileError(ProblemError):
    def __init__(self, msg: str, path: str | None = None):
        super().__init__(msg)
        self.path = path


def _err(path: str, msg: str):
    raise FileError(f"{path}: {msg}", path)


_WS = " \t\n\r"


def _skip(text: str, i: int) -> int:
    while i < len(text) and text[i] in _WS:
        i += 1
    return i


def locate(text: str, path: str) -> tuple[int, int] | None:
    """(line, column) of the value at a path like ``algebra.basis[3][1]``, if found."""
    steps = [int(t[1:-1]) if t.startswith("[") else t for t in re.findall(r"\[\d+\]|[^.\[\]]+", path)]
    dec = json.JSONDecoder()
    i = _skip(text, 0)
    try:
        for step in steps:
            if isinstance(step, str) and text[i] == "{":
                i = _skip(text, i + 1)
                while text[i] != "}":
                    key, i = json.decoder.scanstring(text, i + 1)
                    i = _skip(text, _skip(text, i) + 1)
                    if key == step:
                        break
                    _, i = dec.raw_decode(text, i)
                    i = _skip(text, i)
                    if text[i] == ",":
                        i = _skip(text, i + 1)
                else:
                    return None
            elif isinstance(step, int) and text[i] == "[":
                i = _skip(text, i + 1)
                for _ in range(step):
                    _, i = dec.raw_decode(text, i)
                    i = _skip(text, i)
                    if text[i] != ",":
                        return None
                    i = _skip(text, i + 1)
                if text[i] == "]":
                    return None
            else:
                return None
    except (IndexError, ValueError):
        return None
    line = text.count("\n", 0, i) + 1
    return line, i - (text.rfind("\n", 0, i) + 1) + 1


def loads(text: str, what: str = "input") -> dict:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as e:
        raise FileError(f"{what}: parse error at line {e.lineno} column {e.colno}: {e.msg}") from None
    if not isinstance(data, dict):
        raise FileError(f"{what}: top level must be an object")
    if data.get("format") != FORMAT:
        raise FileError(f"{what}: unsupported or missing format (expected \"format\": {FORMAT})")
    return data


def _scalar(x) -> bool:
    return not isinstance(x, (list, dict))


def _flat(x) -> bool:
    """Scalars, scalar lists, and entries such as [["a", "b"], "c", "1"] stay on one line."""
    if _scalar(x):
        return True
    if not isinstance(x, list):
        return False
    if all(_scalar(y) for y in x):
        return True
    return any(_scalar(y) for y in x) and all(_scalar(y) or (isinstance(y, list) and all(map(_scalar, y)))
                                              for y in x)


def _dump(x, indent: int) -> str:
    pad = " " * indent
    if _flat(x):
        return json.dumps(x, ensure_ascii=False)
    if isinstance(x, list):
        inner = ",\n".join(pad + " " + _dump(y, indent + 1) for y in x)
        return "[\n" + inner + "\n" + pad + "]"
    if not x:
        return "{}"
    inner = ",\n".join(f"{pad} {json.dumps(k, ensure_ascii=False)}: {_dump(v, indent + 1)}" for k, v in x.items())
    return "{\n" + inner + "\n" + pad + "}"


def dumps(data: dict) -> str:
    """Deterministic JSON: one line per innermost list."""
    return _dump(data, 0) + "\n"


# ---------------------------------------------------------------------------
# low-level pieces


def _parse_field(data: dict, override: str | None) -> Field:
    name = override or data.get("field", "rational")
    try:
        return field_from_name(name)
    except (ValueError, TypeError) as e:
        raise FileError(f"field: {e}") from None


def _coeff(F: Field, v, path: str):
    if isinstance(v, bool) or not isinstance(v, (str, int)):
        _err(path, f"coefficient must be a string or integer, got {v!r}")
    try:
        return F.parse(str(v))
    except (ValueError, ZeroDivisionError) as e:
        _err(path, f"bad coefficient {v!r} ({e})")


def _parse_basis(raw, sign: int, path: str) -> GradedModule:
    if not isinstance(raw, list):
        _err(path, "basis must be a list of [name, degree] pairs")
    names, degs = [], []
    for i, item in enumerate(raw):
        if (not isinstance(item, list) or len(item) != 2 or not isinstance(item[0], str)
                or isinstance(item[1], bool) or not isinstance(item[1], int)):
            _err(f"{path}[{i}]", f"malformed basis entry {item!r} (want [name, integer degree])")
        names.append(item[0])
        degs.append(sign * item[1])
    if len(set(names)) != len(names):
        dup = next(n for n in names if names.count(n) > 1)
        _err(path, f"duplicate basis name {dup!r}")
    return GradedModule(tuple(names), tuple(degs))


def _index(M: GradedModule, name, path: str) -> int:
    if not isinstance(name, str):
        _err(path, f"basis name expected, got {name!r}")
    try:
        return M.index(name)
    except (KeyError, ValueError):
        _err(path, f"unknown basis name {name!r}")


def _parse_linear(F: Field, raw, src: GradedModule, tgt: GradedModule, degree: int, path: str) -> GradedMap:
    if raw is None:
        return GradedMap.zero(F, src, tgt, degree)
    if not isinstance(raw, list):
        _err(path, "expected a list of [source, target, coeff] entries")
    entries = []
    for i, e in enumerate(raw):
        p = f"{path}[{i}]"
        if not isinstance(e, list) or len(e) != 3:
            _err(p, f"malformed entry {e!r}")
        a, b = _index(src, e[0], p), _index(tgt, e[1], p)
        if src.degrees[a] + degree != tgt.degrees[b]:
            _err(p, f"entry {e[0]} -> {e[1]} does not have degree {degree}")
        entries.append((a, b, _coeff(F, e[2], p)))
    return GradedMap.from_entries(F, src, tgt, degree, entries)


def _linear_entries(F: Field, m: GradedMap, src: GradedModule, tgt: GradedModule) -> list:
    return [[src.names[i], tgt.names[j], F.format(v)] for i in sorted(m.cols) for j, v in sorted(m.cols[i].items())]


def _parse_complex(F: Field, raw, sign: int, path: str) -> ChainComplex:
    if not isinstance(raw, dict):
        _err(path, "expected an object with 'basis' and 'differential'")
    M = _parse_basis(raw.get("basis"), sign, f"{path}.basis")
    d = _parse_linear(F, raw.get("differential"), M, M, -1, f"{path}.differential")
    try:
        return ChainComplex.build(F, M, d)
    except ValueError as e:
        _err(path, str(e))


def _complex_dict(F: Field, X: ChainComplex, sign: int) -> dict:
    M = X.module
    return {"basis": [[n, sign * d] for n, d in zip(M.names, M.degrees)],
            "differential": _linear_entries(F, X.differential, M, M)}


def _parse_terms(F: Field, raw, coop: Cooperad, src: GradedModule, tgt: GradedModule, degree_of, ainf: bool,
                 path: str) -> dict[int, GradedMap]:
    """Entries [[c?, x_1, ..., x_n], y, coeff] grouped by arity n."""
    if raw is None:
        return {}
    if not isinstance(raw, list):
        _err(path, "expected a list of [[inputs...], output, coeff] entries")
    groups: dict[int, list] = {}
    for i, e in enumerate(raw):
        p = f"{path}[{i}]"
        if not isinstance(e, list) or len(e) != 3 or not isinstance(e[0], list) or not e[0]:
            _err(p, f"malformed entry {e!r}")
        ins = list(e[0])
        if ainf:
            c = 0
        else:
            if len(ins) < 2:
                _err(p, "entry needs a cooperad label followed by inputs")
            lab = ins.pop(0)
            n = len(ins)
            if n > coop.max_arity:
                _err(p, f"arity {n} exceeds the cooperad truncation")
            c = _index(coop.piece(n), lab, p)
        n = len(ins)
        if n > coop.max_arity:
            _err(p, f"arity {n} exceeds max arity {coop.max_arity}")
        word = tuple(_index(src, x, p) for x in ins)
        y = _index(tgt, e[1], p)
        sl = cofree_slice(coop, src, n)
        x = sl.encode(c, word)
        if sl.degrees[x] + degree_of(n) != tgt.degrees[y]:
            _err(p, f"entry has the wrong degree for arity {n}")
        groups.setdefault(n, []).append((x, y, _coeff(F, e[2], p)))
    out = {}
    for n, ents in groups.items():
        out[n] = GradedMap.from_entries(F, cofree_slice(coop, src, n), tgt, degree_of(n), ents)
    return out


def _terms_entries(F: Field, terms: dict[int, GradedMap], coop: Cooperad, src: GradedModule,
                   tgt: GradedModule, ainf: bool) -> dict:
    out = {}
    for n in sorted(terms):
        m = terms[n]
        sl = cofree_slice(coop, src, n)
        rows = []
        for x in sorted(m.cols):
            c, word = sl.decode(x)
            ins = [src.names[v] for v in word]
            if not ainf:
                ins = [coop.piece(n).names[c]] + ins
            for y, v in sorted(m.cols[x].items()):
                rows.append([ins, tgt.names[y], F.format(v)])
        out[str(n)] = rows
    return out


def _parse_terms_by_arity(F, raw, coop, src, tgt, degree_of, ainf, path) -> dict[int, GradedMap]:
    if raw is None:
        return {}
    if not isinstance(raw, dict):
        _err(path, "expected an object keyed by arity")
    out = {}
    for k, rows in raw.items():
        try:
            n = int(k)
        except ValueError:
            _err(path, f"bad arity key {k!r}")
        if not 1 <= n <= coop.max_arity:
            continue
        terms = _parse_terms(F, rows, coop, src, tgt, degree_of, ainf, f"{path}.{k}")
        if set(terms) - {n}:
            _err(f"{path}.{k}", f"entries of another arity under key {k}")
        out[n] = terms.get(n, GradedMap.zero(F, cofree_slice(coop, src, n), tgt, degree_of(n)))
    return out


def _parse_algebra(F: Field, raw, sign: int, path: str) -> DGAlgebraPresentation:
    if not isinstance(raw, dict):
        _err(path, "expected an object")
    M = _parse_basis(raw.get("basis"), sign, f"{path}.basis")
    d = _parse_linear(F, raw.get("differential"), M, M, -1, f"{path}.differential")
    prod = []
    for i, e in enumerate(raw.get("product") or []):
        p = f"{path}.product[{i}]"
        if not isinstance(e, list) or len(e) != 4:
            _err(p, f"malformed product entry {e!r} (want [a, b, c, coeff])")
        a, b, c = (_index(M, x, p) for x in e[:3])
        if M.degrees[a] + M.degrees[b] != M.degrees[c]:
            _err(p, "product entry is not of degree 0")
        prod.append((a, b, c, _coeff(F, e[3], p)))
    unit = raw.get("unit")
    if unit is not None:
        _index(M, unit, f"{path}.unit")
    try:
        return DGAlgebraPresentation.build(F, M, d, prod, unit=unit)
    except ValueError as e:
        _err(path, str(e))


# ---------------------------------------------------------------------------
# problem files


@dataclass
class ProblemFile:
    """A parsed problem, with everything converted to homological degrees."""

    field: Field
    grading: str
    N: int
    window: tuple[int, int] | None
    cooperad: Cooperad
    ainf: bool
    V: ChainComplex
    W: ChainComplex
    f: GradedMap
    structure_on: str  # "V" or "W"
    structure_terms: dict[int, GradedMap]  # m_n (ainf) or coderivation terms, arity >= 2
    algebra: DGAlgebraPresentation | None = None
    raw: dict = dc_field(default_factory=dict, repr=False)

    @property
    def sign(self) -> int:
        return -1 if self.grading == "cohomological" else 1

    @property
    def carrier(self) -> ChainComplex:
        return self.W if self.structure_on == "W" else self.V

    def default_direction(self) -> str:
        return "down" if self.structure_on == "W" else "up"

    # -- translation into coderivation language
    def suspended(self):
        """(V', W', f') as the transfer sees them (suspended for A∞ problems)."""
        if not self.ainf:
            return self.V, self.W, self.f
        sV, SV = suspend_complex(self.V)
        sW, SW = suspend_complex(self.W)
        sf = SW.s @ self.f @ SV.s_inv
        return sV, sW, GradedMap(self.field, sV.module, sW.module, 0, sf.cols)

    def structure_coderivation(self, X: ChainComplex, sX: ChainComplex) -> ArityCoderivation:
        if self.ainf:
            S = AInfinityStructure(X, self.cooperad, {1: X.differential, **self.structure_terms})
            mu = mn_to_coderivation(S, (sX, Suspension.of(self.field, X.module)))
            return ArityCoderivation(self.cooperad, sX.module, sX.module, -1, mu.terms)
        return ArityCoderivation(self.cooperad, X.module, X.module, -1,
                                 {1: X.differential, **self.structure_terms})

    def transfer_problem(self, direction: str | None = None) -> TransferProblem:
        direction = direction or self.default_direction()
        if (direction == "down") != (self.structure_on == "W"):
            raise ProblemError(f"direction {direction} needs a structure on {'W' if direction == 'down' else 'V'}")
        sV, sW, sf = self.suspended()
        X, sX = (self.W, sW) if direction == "down" else (self.V, sV)
        nu = self.structure_coderivation(X, sX)
        return TransferProblem(self.cooperad, sV, sW, sf, nu, self.N, direction)


def load_problem(text: str, field: str | None = None, cohomological: bool | None = None,
                 max_arity: int | None = None, window=None, what: str = "problem") -> ProblemFile:
    data = loads(text, what)
    try:
        return _load_problem(data, field, cohomological, max_arity, window)
    except FileError as e:
        raise _located(e, text, what) from None


def _located(e: FileError, text: str, what: str) -> FileError:
    pos = locate(text, e.path) if e.path else None
    where = f" (line {pos[0]} column {pos[1]})" if pos else ""
    return FileError(f"{what}: {e}{where}", e.path)


def _load_problem(data: dict, field, cohomological, max_arity, window) -> ProblemFile:
    F = _parse_field(data, field)
    grading = data.get("grading", "homological")
    if cohomological is not None and cohomological:
        grading = "cohomological"
    if grading not in ("homological", "cohomological"):
        _err("grading", f"unknown grading {grading!r}")
    sign = -1 if grading == "cohomological" else 1
    N = max_arity if max_arity is not None else data.get("max_arity", 4)
    if isinstance(N, bool) or not isinstance(N, int) or N < 1:
        _err("max_arity", f"must be a positive integer, got {N!r}")
    win = window if window is not None else data.get("window")
    if win is not None:
        if not (isinstance(win, (list, tuple)) and len(win) == 2 and all(isinstance(x, int) for x in win)):
            _err("window", f"must be [lo, hi], got {win!r}")
        lo, hi = sign * win[0], sign * win[1]
        win = (min(lo, hi), max(lo, hi))
    craw = data.get("cooperad", "A_infinity")
    if craw == "A_infinity":
        coop, ainf = as_cooperad(max(N, 1), F), True
    elif isinstance(craw, dict):
        try:
            coop = cooperad_from_dict(craw, F)
        except (ValueError, KeyError, TypeError) as e:
            _err("cooperad", str(e))
        ainf = False
        if coop.max_arity < N:
            _err("cooperad", f"structure constants stop at arity {coop.max_arity} < max arity {N}")
    else:
        _err("cooperad", f"unknown cooperad {craw!r}")

    algebra = None
    if "algebra" in data:
        if not ainf:
            _err("algebra", "dg algebras need the A_infinity cooperad")
        algebra = _parse_algebra(F, data["algebra"], sign, "algebra")

    def degree_of(n):
        return n - 2 if ainf else -1

    if algebra is not None and "V" not in data:
        W = algebra.complex
        H, reps = cycle_choosing_map(W, win)
        V = H
        fraw = data.get("f", "cycle_choosing")
        if fraw == "cycle_choosing":
            f = reps
        elif fraw == "zero":
            f = GradedMap.zero(F, V.module, W.module, 0)
        else:
            _err("f", "with an algebra and no V, f must be \"cycle_choosing\" or \"zero\"")
        terms = dict(dga_structure(algebra, N).ops)
        terms.pop(1, None)
        return ProblemFile(F, grading, N, win, coop, ainf, V, W, f, "W", terms, algebra, data)

    V = _parse_complex(F, data.get("V"), sign, "V")
    if algebra is not None:
        W = algebra.complex
    else:
        W = _parse_complex(F, data.get("W"), sign, "W")
    f = _parse_linear(F, data.get("f"), V.module, W.module, 0, "f")
    sraw = data.get("structure")
    if algebra is not None and sraw is None:
        terms = dict(dga_structure(algebra, N).ops)
        terms.pop(1, None)
        return ProblemFile(F, grading, N, win, coop, ainf, V, W, f, "W", terms, algebra, data)
    if not isinstance(sraw, dict) or sraw.get("on") not in ("V", "W"):
        _err("structure", "expected {\"on\": \"V\" | \"W\", \"operations\": [...]}")
    on = sraw["on"]
    X = V if on == "V" else W
    terms = _parse_terms(F, sraw.get("operations"), coop, X.module, X.module, degree_of, ainf, "structure.operations")
    if 1 in terms:
        _err("structure.operations", "arity-1 entries are given by the differential")
    return ProblemFile(F, grading, N, win, coop, ainf, V, W, f, on, terms, algebra, data)


# ---------------------------------------------------------------------------
# result files


def _cooperad_field(pf: ProblemFile):
    return "A_infinity" if pf.ainf else cooperad_to_dict(pf.cooperad)


def structure_to_plain(pf: ProblemFile, coder: ArityCoderivation, X: ChainComplex) -> dict[int, GradedMap]:
    """Arity ≥ 2 terms in file language (m_n for A∞ problems)."""
    if pf.ainf:
        S = mn_from_coderivation(coder, X)
        return {n: m for n, m in S.ops.items() if n >= 2}
    return {n: t for n, t in coder.terms.items() if n >= 2}


def morphism_to_plain(pf: ProblemFile, Fm, src: ChainComplex, tgt: ChainComplex, degree_shift: int = 0
                      ) -> dict[int, GradedMap]:
    """Arity terms of a morphism (or homotopy, with ``degree_shift`` = 1) in file language."""
    if not pf.ainf:
        return dict(Fm.terms)
    Sv = Suspension.of(pf.field, src.module)
    Sw = Suspension.of(pf.field, tgt.module)
    return {n: _conjugate(pf.field, t, Sv, Sw, n, pf.cooperad, False, n - 1 + degree_shift)
            for n, t in Fm.terms.items()}


def plain_to_morphism(pf: ProblemFile, terms: dict[int, GradedMap], src: ChainComplex, tgt: ChainComplex,
                      sS: GradedModule, sT: GradedModule, degree: int = 0) -> dict[int, GradedMap]:
    if not pf.ainf:
        return dict(terms)
    Sv = Suspension.of(pf.field, src.module)
    Sw = Suspension.of(pf.field, tgt.module)
    out = {}
    for n, t in terms.items():
        m = _conjugate(pf.field, t, Sv, Sw, n, pf.cooperad, True, degree)
        out[n] = GradedMap(pf.field, cofree_slice(pf.cooperad, sS, n), sT, degree, m.cols)
    return out


def result_dict(pf: ProblemFile, direction: str, result, report=None, status: str = "ok",
                failure: dict | None = None) -> dict:
    F = pf.field
    V, W = pf.V, pf.W
    X = V if direction == "down" else W
    ops = structure_to_plain(pf, result.structure, X) if result is not None else {}
    mor = morphism_to_plain(pf, result.morphism, V, W) if result is not None else {1: pf.f}
    out = {
        "format": FORMAT,
        "kind": "transfer",
        "direction": direction,
        "status": status,
        "field": F.name,
        "grading": pf.grading,
        "max_arity": pf.N,
        "cooperad": _cooperad_field(pf),
        "V": _complex_dict(F, V, pf.sign),
        "W": _complex_dict(F, W, pf.sign),
        "structure": {"on": "V" if direction == "down" else "W",
                      "operations": _terms_entries(F, ops, pf.cooperad, X.module, X.module, pf.ainf)},
        "morphism": _terms_entries(F, mor, pf.cooperad, V.module, W.module, pf.ainf),
    }
    if failure is not None:
        out["failure"] = failure
    if report is not None:
        out["verification"] = {"passed": report.ok, "lines": report.lines()}
    out["trace"] = result.trace_lines() if result is not None else []
    return out


@dataclass
class LoadedResult:
    direction: str
    structure: ArityCoderivation
    morphism: ArityMorphism
    data: dict


def load_result(text: str, pf: ProblemFile, what: str = "result") -> LoadedResult:
    """Re-ingest a result file against its problem (bases and field must agree)."""
    data = loads(text, what)
    try:
        return _load_result(data, pf, what)
    except FileError as e:
        raise _located(e, text, what) from None


def _load_result(data: dict, pf: ProblemFile, what: str) -> LoadedResult:
    if data.get("kind") != "transfer":
        _err("kind", "not a transfer result")
    if data.get("field") != pf.field.name:
        _err("field", f"field {data.get('field')!r} differs from the problem's {pf.field.name!r}")
    if data.get("grading", "homological") != pf.grading:
        _err("grading", "grading convention differs from the problem's")
    if data.get("cooperad") != _cooperad_field(pf):
        _err("cooperad", "cooperad differs from the problem's")
    for key, X in (("V", pf.V), ("W", pf.W)):
        if data.get(key, {}).get("basis") != [[n, pf.sign * d] for n, d in zip(X.module.names, X.module.degrees)]:
            _err(f"{key}.basis", f"basis of {key} differs from the problem's")
    direction = data.get("direction")
    if direction not in ("down", "up"):
        _err("direction", f"bad direction {direction!r}")
    if int(data.get("max_arity", 0)) < pf.N:
        _err("max_arity", f"result has max arity {data.get('max_arity')} < {pf.N}")
    F = pf.field
    sV, sW, sf = pf.suspended()
    X, sX = (pf.V, sV) if direction == "down" else (pf.W, sW)
    ainf = pf.ainf

    def deg_op(n):
        return n - 2 if ainf else -1

    def deg_mor(n):
        return n - 1 if ainf else 0

    ops = _parse_terms_by_arity(F, data.get("structure", {}).get("operations"), pf.cooperad, X.module, X.module,
                                deg_op, ainf, "structure.operations")
    ops = {n: t for n, t in ops.items() if n <= pf.N}
    mor = _parse_terms_by_arity(F, data.get("morphism"), pf.cooperad, pf.V.module, pf.W.module, deg_mor, ainf,
                                "morphism")
    mor = {n: t for n, t in mor.items() if n <= pf.N}
    if ainf:
        S = AInfinityStructure(X, pf.cooperad, {1: X.differential, **ops})
        mu = mn_to_coderivation(S, (sX, Suspension.of(F, X.module)))
        coder = ArityCoderivation(pf.cooperad, sX.module, sX.module, -1, mu.terms)
    else:
        coder = ArityCoderivation(pf.cooperad, X.module, X.module, -1, {1: X.differential, **ops})
    Fm = ArityMorphism(pf.cooperad, sV.module, sW.module,
                       plain_to_morphism(pf, mor, pf.V, pf.W, sV.module, sW.module))
    if 1 not in Fm.terms:
        _err("morphism", "morphism has no arity-1 term")
    return LoadedResult(direction, coder, Fm, data)


def comparison_dict(pf: ProblemFile, comp, report) -> dict:
    """Φ (or Ψ) and the homotopy H, in file language."""
    F = pf.field
    V, W = pf.V, pf.W
    X = V if comp.direction == "down" else W
    if pf.ainf:
        iso = morphism_to_plain(pf, comp.iso, X, X)
        hom = morphism_to_plain(pf, comp.homotopy, V, W, degree_shift=1)
    else:
        iso, hom = dict(comp.iso.terms), dict(comp.homotopy.terms)
    return {
        "format": FORMAT,
        "kind": "comparison",
        "direction": comp.direction,
        "status": "ok" if report.ok else "failed",
        "field": F.name,
        "grading": pf.grading,
        "max_arity": pf.N,
        "cooperad": _cooperad_field(pf),
        "iso": {"on": "V" if comp.direction == "down" else "W",
                "terms": _terms_entries(F, iso, pf.cooperad, X.module, X.module, pf.ainf)},
        "homotopy": _terms_entries(F, hom, pf.cooperad, V.module, W.module, pf.ainf),
        "verification": {"passed": report.ok, "lines": report.lines()},
        "trace": comp.trace_lines(),
    }


def algebra_dict(A: DGAlgebraPresentation, sign: int = 1) -> dict:
    """The "algebra" block of a problem file."""
    F = A.field
    M = A.module
    T = A.product.source
    prod = []
    for x in sorted(A.product.cols):
        a, b = T.decode(x)
        for c, v in sorted(A.product.cols[x].items()):
            prod.append([M.names[a], M.names[b], M.names[c], F.format(v)])
    out = {"basis": [[n, sign * d] for n, d in zip(M.names, M.degrees)],
           "differential": _linear_entries(F, A.complex.differential, M, M),
           "product": prod}
    if A.unit is not None:
        out["unit"] = M.names[A.unit]
    return out


def algebra_problem(A: DGAlgebraPresentation, N: int, f: str = "cycle_choosing", grading: str = "homological",
                    window=None) -> dict:
    sign = -1 if grading == "cohomological" else 1
    out = {"format": FORMAT, "field": A.field.name, "grading": grading, "max_arity": N,
           "cooperad": "A_infinity", "algebra": algebra_dict(A, sign)}
    if f != "cycle_choosing":
        out["f"] = f
    if window is not None:
        out["window"] = list(window)
    return out
