"""Command-line interface.

Subcommands mirror the library: classgroup, fsig, decompose, verify.  Rings
come from --builtin addresses (an:4, veronese:3, poly:2, quadric) or from
JSON definition files via --ring.  Machine formats print rationals as exact
a/b strings and are byte-deterministic for identical invocations.

Exit codes: 0 success, 1 torsion bound violated (a bug sentinel), 2 bad
input, 3 enumeration cap exceeded.
"""

from __future__ import annotations

import argparse
import json
import sys

from .divisors import CapExceededError, WeilDivisor, class_group
from .frobenius import FrobeniusContext, decompose
from .fsignature import (
    convergence_report,
    exact_signature_volume,
    signature_sequence,
)
from .rings import (
    RingFormatError,
    RingSpec,
    load_ring_file,
    parse_builtin,
    validate,
)
from .verify import (
    default_corpus,
    report_to_csv,
    report_to_json,
    run_corpus,
    violation_bundle,
)

EXIT_OK = 0
EXIT_VIOLATION = 1
EXIT_BAD_INPUT = 2
EXIT_CAP = 3


def _add_ring_args(sub, required=True):
    group = sub.add_mutually_exclusive_group(required=required)
    group.add_argument("--builtin", help="builtin ring address, e.g. an:4")
    group.add_argument("--ring", help="path to a JSON ring definition file")


def _resolve_ring(args) -> RingSpec:
    if args.builtin:
        return parse_builtin(args.builtin)
    spec = load_ring_file(args.ring)
    problems = validate(spec)
    if problems:
        raise RingFormatError(
            f"invalid ring file {args.ring}: " + "; ".join(problems)
        )
    return spec


def _parse_divisor(text: str, spec: RingSpec) -> WeilDivisor:
    try:
        coeffs = tuple(int(x) for x in text.split(","))
    except ValueError:
        raise ValueError(f"bad divisor {text!r}; expected comma-separated integers")
    if len(coeffs) != spec.num_facets:
        raise ValueError(
            f"divisor needs {spec.num_facets} coefficients for {spec.name}"
        )
    return WeilDivisor(coeffs)


def _group_label(cg) -> str:
    parts = []
    if cg.free_rank == 1:
        parts.append("Z")
    elif cg.free_rank > 1:
        parts.append(f"Z^{cg.free_rank}")
    parts.extend(f"Z/{d}" for d in cg.invariant_factors)
    return " + ".join(parts) if parts else "trivial"


def _class_label(c) -> str:
    free = ",".join(map(str, c.free))
    torsion = ",".join(map(str, c.torsion))
    if not free and not torsion:
        return "0"
    if not free:
        return f"[{torsion}]"
    if not torsion:
        return f"({free})"
    return f"({free})+[{torsion}]"


def cmd_classgroup(args) -> int:
    spec = _resolve_ring(args)
    cg = class_group(spec)
    data = {
        "ring": spec.name,
        "group": _group_label(cg),
        "free_rank": cg.free_rank,
        "invariant_factors": list(cg.invariant_factors),
        "torsion_cardinality": cg.torsion_cardinality,
    }
    if args.format == "json":
        print(json.dumps(data, indent=2, sort_keys=True))
    elif args.format == "csv":
        print("ring,group,free_rank,invariant_factors,torsion_cardinality")
        factors = ";".join(map(str, cg.invariant_factors))
        print(
            f"{spec.name},{data['group']},{cg.free_rank},"
            f"{factors},{cg.torsion_cardinality}"
        )
    else:
        print(f"ring: {spec.name}")
        print(f"class group: {data['group']}")
        print(f"free rank: {cg.free_rank}")
        print(f"invariant factors: {list(cg.invariant_factors)}")
        print(f"torsion cardinality: {cg.torsion_cardinality}")
    return EXIT_OK


def cmd_fsig(args) -> int:
    spec = _resolve_ring(args)
    divisor = _parse_divisor(args.divisor, spec) if args.divisor else None
    seq = signature_sequence(spec, args.p, args.e_max, divisor=divisor, cap=args.cap)
    exact = exact_signature_volume(spec) if args.exact else None
    an_param = spec.params[0] if spec.family == "an_singularity" else None
    report = convergence_report(seq, exact=exact, an_param=an_param)
    if args.format == "json":
        doc = {
            "ring": spec.name,
            "p": args.p,
            "divisor": list(divisor.coeffs) if divisor else None,
            "sequence": [
                {"e": r.e, "q": r.q, "a_e": est.a_e, "s_e": str(r.s_e)}
                for r, est in zip(report.rows, seq)
            ],
            "exact": str(exact.value) if exact else None,
            "method": exact.method if exact else None,
        }
        print(json.dumps(doc, indent=2, sort_keys=True))
    elif args.format == "csv":
        print("e,q,a_e,s_e")
        for est in seq:
            print(f"{est.ctx.e},{est.ctx.q},{est.a_e},{est.s_e}")
        if exact:
            print(f"exact,,,{exact.value}")
    else:
        print(f"ring: {spec.name}  p={args.p}")
        for r, est in zip(report.rows, seq):
            line = f"  e={r.e}  q={r.q}  a_e={est.a_e}  s_e={r.s_e}"
            if r.deviation is not None:
                line += f"  |s_e-s|={r.deviation} (~{float(r.deviation):.3g})"
            print(line)
        if exact:
            print(f"exact F-signature: {exact.value} ({exact.method})")
    return EXIT_OK


def cmd_decompose(args) -> int:
    spec = _resolve_ring(args)
    divisor = (
        _parse_divisor(args.divisor, spec)
        if args.divisor
        else WeilDivisor((0,) * spec.num_facets)
    )
    ctx = FrobeniusContext(args.p, args.e)
    dec = decompose(spec, divisor, ctx, detail=args.detail, cap=args.cap)
    items = sorted(dec.summands.items(), key=lambda kv: (kv[0].free, kv[0].torsion))
    if args.format == "json":
        doc = {
            "ring": spec.name,
            "p": args.p,
            "e": args.e,
            "q": ctx.q,
            "divisor": list(divisor.coeffs),
            "rank": dec.rank,
            "summands": [
                {
                    "free": list(c.free),
                    "torsion": list(c.torsion),
                    "multiplicity": n,
                }
                for c, n in items
            ],
        }
        if args.detail:
            doc["cosets"] = [
                {"w": [str(x) for x in w], "divisor": list(d.coeffs)}
                for w, d in dec.detail
            ]
        print(json.dumps(doc, indent=2, sort_keys=True))
    elif args.format == "csv":
        print("class,multiplicity")
        for c, n in items:
            print(f"{_class_label(c)},{n}")
    else:
        print(f"ring: {spec.name}  p={args.p} e={args.e} q={ctx.q}  rank={dec.rank}")
        print(f"base divisor: {list(divisor.coeffs)}")
        for c, n in items:
            print(f"  class {_class_label(c)}: {n}")
        if args.detail:
            for w, d in dec.detail:
                print(f"    w=({', '.join(map(str, w))})  divisor={list(d.coeffs)}")
    return EXIT_OK


def cmd_verify(args) -> int:
    ps = [int(x) for x in args.primes.split(",") if x]
    if args.corpus:
        rings = default_corpus()
    else:
        rings = [_resolve_ring(args)]
    report = run_corpus(ps, args.e_max, rings=rings, q_max=args.q_max, cap=args.cap)

    if args.format == "json":
        payload = report_to_json(report)
    elif args.format == "csv":
        payload = report_to_csv(report)
    else:
        lines = []
        for v in report.verdicts:
            rel = "=" if v.equality else ("<" if v.inequality_holds else ">")
            lines.append(
                f"{v.ring} p={v.p}: |tors Cl| = {v.torsion_cardinality} "
                f"{rel} {1 / v.exact_signature} = 1/s  "
                f"(s = {v.exact_signature}, {len(v.witnesses)} witness rows)"
            )
        for err in report.errors:
            lines.append(f"{err.ring} p={err.p}: {err.kind}: {err.message}")
        lines.append(
            f"verdicts: {len(report.verdicts)}  errors: {len(report.errors)}  "
            f"all_hold: {report.all_hold}"
        )
        payload = "\n".join(lines) + "\n"

    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(payload)
        print(f"wrote {args.out}")
    else:
        sys.stdout.write(payload)

    if not report.all_hold:
        bad = next(v for v in report.verdicts if not v.inequality_holds)
        spec = next(s for s in rings if s.name == bad.ring)
        bundle_path = (args.out or "report") + ".violation.json"
        with open(bundle_path, "w", encoding="utf-8") as fh:
            json.dump(violation_bundle(bad, spec), fh, indent=2, sort_keys=True)
        print(
            f"torsion bound VIOLATED for {bad.ring}; reproduction bundle "
            f"written to {bundle_path}",
            file=sys.stderr,
        )
        return EXIT_VIOLATION
    if any(e.kind != "cap" for e in report.errors):
        return EXIT_BAD_INPUT
    if report.errors:
        return EXIT_CAP
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="toricfsig",
        description=(
            "Class groups, Frobenius decompositions and F-signatures of "
            "normal affine semigroup rings"
        ),
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_cg = sub.add_parser("classgroup", help="divisor class group of a ring")
    _add_ring_args(p_cg)
    p_cg.add_argument("--format", choices=["text", "csv", "json"], default="text")
    p_cg.set_defaults(func=cmd_classgroup)

    p_fs = sub.add_parser("fsig", help="F-signature sequence and exact value")
    _add_ring_args(p_fs)
    p_fs.add_argument("-p", type=int, default=2, help="prime characteristic")
    p_fs.add_argument("-e", "--e-max", type=int, default=1, dest="e_max")
    p_fs.add_argument("--exact", action="store_true", help="include exact value")
    p_fs.add_argument("--divisor", help="comma-separated divisor coefficients")
    p_fs.add_argument("--cap", type=int, default=None)
    p_fs.add_argument("--format", choices=["text", "csv", "json"], default="text")
    p_fs.set_defaults(func=cmd_fsig)

    p_dc = sub.add_parser("decompose", help="summand classes of F^e_* R(D)")
    _add_ring_args(p_dc)
    p_dc.add_argument("-p", type=int, default=2)
    p_dc.add_argument("-e", type=int, default=1)
    p_dc.add_argument("--divisor", help="comma-separated divisor coefficients")
    p_dc.add_argument("--detail", action="store_true", help="list per-coset summands")
    p_dc.add_argument("--cap", type=int, default=None)
    p_dc.add_argument("--format", choices=["text", "csv", "json"], default="text")
    p_dc.set_defaults(func=cmd_decompose)

    p_vf = sub.add_parser("verify", help="check the torsion bound |tors Cl| <= 1/s")
    _add_ring_args(p_vf, required=False)
    p_vf.add_argument("--corpus", action="store_true", help="all builtin rings")
    p_vf.add_argument("-p", "--primes", default="2,3,5", help="comma-separated primes")
    p_vf.add_argument("-e", "--e-max", type=int, default=4, dest="e_max")
    p_vf.add_argument("--q-max", type=int, default=256, dest="q_max")
    p_vf.add_argument("--cap", type=int, default=None)
    p_vf.add_argument("--out", help="write the report to this path")
    p_vf.add_argument("--format", choices=["text", "csv", "json"], default="text")
    p_vf.set_defaults(func=cmd_verify)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.command == "verify" and not (args.corpus or args.builtin or args.ring):
        parser.error("verify needs --corpus, --builtin or --ring")
    try:
        return args.func(args)
    except CapExceededError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CAP
    except (RingFormatError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_BAD_INPUT


if __name__ == "__main__":
    raise SystemExit(main())
