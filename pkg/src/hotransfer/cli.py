"""Command line: homology, transfer, verify, compare, massey.

Exit codes: 0 verified, 1 verification failed, 2 hypothesis failure,
3 parse or validation error, 4 internal checkpoint failure.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from .ainf import MasseyPreconditionError, massey_triple, transfer_to_homology
from .gradedcx import cycle_choosing_map
from .io import (
    FileError,
    comparison_dict,
    dumps,
    load_problem,
    load_result,
    result_dict,
)
from .transfer import (
    HypothesisFailure,
    InternalAssertFailure,
    ProblemError,
    check_hypothesis,
    compare_down,
    compare_up,
    transfer_down,
    transfer_up,
    verify,
    verify_comparison_down,
    verify_comparison_up,
)

EXIT_OK, EXIT_VERIFY, EXIT_HYPOTHESIS, EXIT_INPUT, EXIT_INTERNAL = 0, 1, 2, 3, 4


def _window(text: str | None):
    if text is None:
        return None
    for sep in (":", ","):
        if sep in text:
            lo, hi = text.split(sep, 1)
            try:
                return [int(lo), int(hi)]
            except ValueError:
                break
    raise FileError(f"--window: expected LO:HI, got {text!r}")


def _read(path: str) -> str:
    try:
        return Path(path).read_text()
    except OSError as e:
        raise FileError(f"{path}: {e.strerror or e}") from None


def _problem(args):
    return load_problem(_read(args.problem), field=args.field, cohomological=args.cohomological or None,
                        max_arity=args.max_arity, window=_window(args.window), what=args.problem)


def _emit(args, data: dict) -> None:
    text = dumps(data)
    if args.out:
        Path(args.out).write_text(text)
    else:
        sys.stdout.write(text)


def _say(args, line: str) -> None:
    # with no --out the JSON goes to stdout, so chatter moves to stderr
    print(line, file=sys.stdout if args.out else sys.stderr)


# ---------------------------------------------------------------------------
# commands


def cmd_homology(args) -> int:
    pf = _problem(args)
    X = pf.W if pf.structure_on == "W" else pf.V
    H, reps = cycle_choosing_map(X, pf.window)
    F = pf.field
    for i, name in enumerate(H.module.names):
        col = reps.cols.get(i, {})
        rep = " + ".join(f"{F.format(v)}*{X.module.names[j]}" for j, v in sorted(col.items()))
        print(f"degree {pf.sign * H.module.degrees[i]}: {name} = {rep}")
    dims = {}
    for d in H.module.degrees:
        dims[pf.sign * d] = dims.get(pf.sign * d, 0) + 1
    print("dimensions: " + ", ".join(f"{d}:{k}" for d, k in sorted(dims.items())))
    print(f"total dimension {H.module.dim}")
    return EXIT_OK


def cmd_transfer(args) -> int:
    pf = _problem(args)
    direction = args.direction or pf.default_direction()
    p = pf.transfer_problem(direction)
    p.validate()
    if not args.skip_hypothesis:
        rep = check_hypothesis(p)
        if not rep.ok:
            n = rep.first_failure
            _emit(args, result_dict(pf, direction, None, status="hypothesis_failure",
                                    failure={"arity": n, "which": "hypothesis"}))
            _say(args, f"hypothesis fails at arity {n}: {'f∘-' if direction == 'down' else '-∘C(f)'} "
                       "is not a quasi-isomorphism on the Hom slices")
            return EXIT_HYPOTHESIS
    run = transfer_down if direction == "down" else transfer_up
    try:
        res = run(p, pivot_policy=args.pivot_policy, check=False, validate=False)
    except HypothesisFailure as e:
        _emit(args, result_dict(pf, direction, e.partial, status="hypothesis_failure",
                                failure={"arity": e.arity, "which": e.which}))
        _say(args, f"hypothesis fails at arity {e.arity} ({e.which} step)")
        return EXIT_HYPOTHESIS
    if direction == "down":
        report = verify(res.structure, res.morphism, p.structure, p.N)
    else:
        report = verify(p.structure, res.morphism, res.structure, p.N)
    _emit(args, result_dict(pf, direction, res, report, status="ok" if report.ok else "failed"))
    for line in res.trace_lines() + report.lines():
        _say(args, line)
    return EXIT_OK if report.ok else EXIT_VERIFY


def cmd_verify(args) -> int:
    pf = _problem(args)
    r = load_result(_read(args.result), pf, what=args.result)
    p = pf.transfer_problem(r.direction)
    p.validate()
    if r.direction == "down":
        report = verify(r.structure, r.morphism, p.structure, p.N)
    else:
        report = verify(p.structure, r.morphism, r.structure, p.N)
    for line in report.lines():
        print(line)
    return EXIT_OK if report.ok else EXIT_VERIFY


def cmd_compare(args) -> int:
    pf = _problem(args)
    a = load_result(_read(args.first), pf, what=args.first)
    b = load_result(_read(args.second), pf, what=args.second)
    if a.direction != b.direction:
        raise FileError("the two results were transferred in different directions")
    p = pf.transfer_problem(a.direction)
    p.validate()
    sV, sW, sf = p.V, p.W, p.f
    if a.direction == "down":
        comp = compare_down(a.structure, b.structure, a.morphism, b.morphism, p.structure, sf, p.N, sV, sW,
                            pivot_policy=args.pivot_policy)
        report = verify_comparison_down(comp.iso, comp.homotopy, a.structure, b.structure, a.morphism,
                                        b.morphism, p.structure, p.N)
    else:
        comp = compare_up(a.structure, b.structure, a.morphism, b.morphism, p.structure, sf, p.N, sV, sW,
                          pivot_policy=args.pivot_policy)
        report = verify_comparison_up(comp.iso, comp.homotopy, a.structure, b.structure, a.morphism,
                                      b.morphism, p.structure, p.N)
    _emit(args, comparison_dict(pf, comp, report))
    for line in comp.trace_lines() + report.lines():
        _say(args, line)
    return EXIT_OK if report.ok else EXIT_VERIFY


def cmd_massey(args) -> int:
    pf = _problem(args)
    if pf.algebra is None:
        raise FileError("massey needs a problem with an 'algebra' block")
    N = max(pf.N, 3)
    ht = transfer_to_homology(pf.algebra, N, pivot_policy=args.pivot_policy, window=pf.window)
    rep = ht.verify()
    if not rep.ok:
        for line in rep.lines():
            print(line)
        return EXIT_VERIFY
    H = ht.H.module
    for x in (args.a, args.b, args.c):
        if x not in H.names:
            raise FileError(f"unknown homology class {x!r} (known: {', '.join(H.names)})")
    m = massey_triple(ht.structure, args.a, args.b, args.c)
    F = pf.field

    def show(vec: dict) -> str:
        return " + ".join(f"{F.format(v)}*{k}" for k, v in vec.items()) or "0"

    print(f"<{', '.join(m.classes)}> = {show(m.value)} in degree {pf.sign * m.degree}")
    if m.indeterminacy:
        print("indeterminacy spanned by: " + "; ".join(show(v) for v in m.indeterminacy))
    else:
        print("indeterminacy: 0")
    print("vanishes modulo indeterminacy" if m.zero_mod_indeterminacy else "nonzero modulo indeterminacy")
    return EXIT_OK


# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="hotransfer", description="Exact homotopy transfer of algebraic structures.")
    sub = ap.add_subparsers(dest="command", required=True)

    def common(sp, out=True, hyp=False):
        sp.add_argument("problem", help="problem file (JSON)")
        sp.add_argument("--field", help='"rational" or "prime:p" (overrides the file)')
        sp.add_argument("--max-arity", type=int, help="truncation arity N (overrides the file)")
        sp.add_argument("--window", help="homology degree window LO:HI")
        sp.add_argument("--cohomological", action="store_true", help="degrees in the files are cohomological")
        sp.add_argument("--pivot-policy", choices=("forward", "reverse"), default="forward")
        if hyp:
            sp.add_argument("--skip-hypothesis", action="store_true",
                            help="skip the up-front Hom-complex hypothesis check")
        if out:
            sp.add_argument("--out", help="write the JSON result here instead of stdout")

    sp = sub.add_parser("homology", help="homology of the complex carrying the given structure")
    common(sp, out=False)
    sp.set_defaults(run=cmd_homology)

    sp = sub.add_parser("transfer", help="transfer the structure along f")
    common(sp, hyp=True)
    sp.add_argument("--direction", choices=("down", "up"))
    sp.set_defaults(run=cmd_transfer)

    sp = sub.add_parser("verify", help="re-check a result file against its problem")
    common(sp, out=False)
    sp.add_argument("result")
    sp.set_defaults(run=cmd_verify)

    sp = sub.add_parser("compare", help="compare two transfers of the same problem")
    common(sp)
    sp.add_argument("first")
    sp.add_argument("second")
    sp.set_defaults(run=cmd_compare)

    sp = sub.add_parser("massey", help="triple Massey product of three homology classes")
    common(sp, out=False)
    sp.add_argument("a")
    sp.add_argument("b")
    sp.add_argument("c")
    sp.set_defaults(run=cmd_massey)
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.run(args)
    except InternalAssertFailure as e:
        print(f"internal checkpoint failed: {e}", file=sys.stderr)
        return EXIT_INTERNAL
    except HypothesisFailure as e:
        print(f"hypothesis fails at arity {e.arity} ({e.which})", file=sys.stderr)
        return EXIT_HYPOTHESIS
    except (FileError, ProblemError, MasseyPreconditionError) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_INPUT
    except ValueError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
