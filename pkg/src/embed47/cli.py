"""Command line front end.

Exit codes: 0 ok, 1 verification failure, 2 validation error, 3 dimension
mismatch, 4 malformed psi table, 5 budget exhausted without --sample.
"""

from __future__ import annotations

import argparse
import json
import sys
from importlib import resources
from pathlib import Path

from . import oracle
from .classify import (
    COND3,
    INDETERMINATE,
    NOTE_ORD,
    build_core,
    classify,
    knot_action_equiv,
)
from .errors import BudgetExceeded, DimensionError, PsiTableError, ValidationError
from .manifold import ManifoldData, h2diff_enumerate, validate
from .s1s3 import PsiOracle, TauLabel, orbit_table, tau_equiv
from .zmodule import IntMatrix

EXIT_OK, EXIT_FAIL, EXIT_INVALID, EXIT_DIMENSION, EXIT_PSI, EXIT_BUDGET = range(6)

BUNDLED = ("s1s3", "s2s2", "s2s2_nonspin")


def parse_csv(text: str | None) -> tuple[int, ...]:
    if text is None or not text.strip():
        return ()
    return tuple(int(x) for x in text.split(","))


def parse_matrix(text: str | None, cols: int) -> IntMatrix:
    """``"1,0;0,1"`` -> [[1,0],[0,1]]; empty text is the empty matrix."""
    if text is None or not text.strip():
        return IntMatrix.zeros(0, cols)
    return IntMatrix.from_rows([parse_csv(row) for row in text.split(";")])


def parse_range(text: str) -> range:
    lo, _, hi = text.partition(":")
    lo = int(lo)
    return range(lo, (int(hi) if hi else lo) + 1)


def load_manifold(ref: str) -> ManifoldData:
    if ref in BUNDLED and not Path(ref).exists():
        doc = json.loads(resources.files("embed47.data").joinpath(f"{ref}.json").read_text("utf-8"))
    else:
        try:
            doc = json.loads(Path(ref).read_text(encoding="utf-8"))
        except (OSError, json.JSONDecodeError) as exc:
            raise ValidationError(f"cannot read manifold spec {ref}: {exc}", code="MALFORMED") from exc
    return validate(ManifoldData.from_dict(doc))


def emit(doc, as_json: bool, text: str):
    if as_json:
        print(json.dumps(doc, sort_keys=True, indent=2, ensure_ascii=False))
    else:
        print(text)


def _verdict(v):
    return "indeterminate" if v is INDETERMINATE else v


def cmd_classify(args) -> int:
    data = load_manifold(args.manifold)
    query = {}
    if args.query:
        query = json.loads(Path(args.query).read_text(encoding="utf-8"))
    u = tuple(query.get("u", parse_csv(args.u)))
    L = (IntMatrix.from_rows(query["l_matrix"], data.h1_rank) if "l_matrix" in query
         else parse_matrix(args.l, data.h1_rank))
    b = tuple(query.get("b", parse_csv(args.b)))
    assumptions = set(query.get("assumptions", [])) | set(args.assume or [])
    a = query.get("a", args.a)
    a_prime = query.get("a_prime", args.a_prime)
    if len(u) != data.h2_rank:
        raise DimensionError(f"u has {len(u)} coordinates, H_2 has rank {data.h2_rank}")
    if not b:
        b = (0,) * data.h1_rank

    core = build_core(data, u, L)
    report = classify(core, b, assumptions, manifold=data.name)
    doc = report.to_dict()
    lines = [
        f"manifold        {data.name}",
        f"d = div u       {core.d}   (dhat = {core.d_hat})",
        f"C = coker       invariant factors {list(core.C.invariant_factors)}",
        f"K = ker         rank {core.K.rank}",
        f"theta           {report.theta.status.value} [{report.theta.basis}]"
        f" order={report.theta.order} bound={report.theta.divisor_bound}",
    ]
    if report.determined:
        lines.append(f"orbit size      {report.orbit_size}")
        lines.append(f"inertia order   {report.inertia_order}")
    else:
        lines.append(f"orbit size      one of {list(report.orbit_candidates)}")
        lines.append(f"inertia order   one of {list(report.inertia_candidates)}")
    if a is not None and a_prime is not None:
        verdict = knot_action_equiv(core, b, int(a), int(a_prime), assumptions)
        doc["knot_action"] = {"a": int(a), "a_prime": int(a_prime), "equivalent": _verdict(verdict)}
        if core.d and core.form_vanishes:
            doc["notes"].append(NOTE_ORD)
        lines.append(f"f#{a} = f#{a_prime}?   {_verdict(verdict)}")
    if args.bound is not None:
        window = [list(x.coords) for x in h2diff_enumerate(data, args.bound)]
        doc["h2diff_window"] = {"bound": args.bound, "classes": window}
        lines.append(f"H2^DIFF (|u_i| <= {args.bound}): {window}")
    lines += [f"  note: {n}" for n in doc["notes"]]
    emit(doc, args.json, "\n".join(lines))
    return EXIT_OK


def cmd_s1s3(args) -> int:
    psi = PsiOracle.load(args.psi) if args.psi else PsiOracle()
    rows = orbit_table(parse_range(args.l_range), parse_range(args.b_range))
    doc = {"table": [r.to_dict() for r in rows]}
    lines = ["   l    b  |P|  inertia"] + [f"{r.l:4d} {r.b:4d} {r.p_size:4d} {r.inertia:8d}" for r in rows]
    if args.pairs:
        first, second = args.pairs.split()
        x, y = TauLabel.parse(first), TauLabel.parse(second)
        verdict = _verdict(tau_equiv(x, y, psi))
        doc["pair"] = {"x": [x.a, x.l, x.b], "y": [y.a, y.l, y.b], "equivalent": verdict}
        lines.append(f"{first} ~ {second}: {verdict}")
    emit(doc, args.json, "\n".join(lines))
    return EXIT_OK


def cmd_verify(args) -> int:
    names = list(oracle.SUITES) if args.suite == "all" else [args.suite]
    runs = []
    for name in names:
        if name == "unimzd":
            run = oracle.verify_unimzd(args.max_rank, args.max_d, args.entry_bound,
                                       spot_samples=args.spot_samples, seed=args.seed,
                                       budget=args.budget, sample=args.sample)
        elif name == "cap-welldef":
            run = oracle.verify_cap_welldef(args.max_rank, negative_controls=args.negative_controls,
                                            budget=args.budget, sample=args.sample, seed=args.seed)
        else:
            run = oracle.SUITES[name]()
        runs.append(run)
    emit({"runs": [r.to_dict() for r in runs]}, args.json, "\n".join(r.summary() for r in runs))
    return EXIT_OK if all(r.passed for r in runs) else EXIT_FAIL


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="embed47",
        description="Knot-action orbits for embeddings of 4-manifolds in S^7.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("classify", help="orbit/inertia report for a query (u, l, b)")
    p.add_argument("--manifold", required=True,
                   help="manifold JSON file, or one of: " + ", ".join(BUNDLED))
    p.add_argument("--query", help="query JSON with u, l_matrix, b, a, a_prime, assumptions")
    p.add_argument("--u", help="u in H_2 as CSV")
    p.add_argument("--l", help="matrix of l as CSV rows separated by ';'")
    p.add_argument("--b", help="b in coker(2L mod d) as CSV")
    p.add_argument("--assume", action="append", choices=[COND3])
    p.add_argument("--a", type=int)
    p.add_argument("--a-prime", type=int)
    p.add_argument("--bound", type=int, help="also list H2^DIFF classes with |u_i| <= N")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_classify)

    p = sub.add_parser("s1s3", help="|P_{l,b}| table for S^1 x S^3")
    p.add_argument("--l-range", default="-6:6", help="inclusive LO:HI (write --l-range=-6:6)")
    p.add_argument("--b-range", default="-12:12", help="inclusive LO:HI")
    p.add_argument("--psi", help="psi_l table JSON")
    p.add_argument("--pairs", help="two labels 'a,l,b a2,l2,b2' to compare")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_s1s3)

    p = sub.add_parser("verify", help="run brute-force verification suites")
    p.add_argument("suite", choices=list(oracle.SUITES) + ["all"])
    p.add_argument("--max-rank", type=int, default=2)
    p.add_argument("--max-d", type=int, default=8)
    p.add_argument("--entry-bound", type=int, default=2)
    p.add_argument("--spot-samples", type=int, default=500)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--budget", type=int, default=200_000)
    p.add_argument("--sample", action="store_true", help="sample grids that exceed the budget")
    p.add_argument("--negative-controls", action="store_true")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_verify)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except DimensionError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DIMENSION
    except ValidationError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID
    except PsiTableError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PSI
    except BudgetExceeded as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_BUDGET
    except (ValueError, json.JSONDecodeError, OSError) as exc:
        print(f"error: MALFORMED: {exc}", file=sys.stderr)
        return EXIT_INVALID


if __name__ == "__main__":
    sys.exit(main())
