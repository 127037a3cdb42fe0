"""Command-line entry point: ``gext <command> ...``."""
from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from ..affext import certify_extension, synthesize_extension
from ..blowup import dual_graph, total_transform_multiplicity
from ..cech import classify_extension
from ..errors import GextError
from ..ideals import DEFAULT_BUDGET, reduction_budget
from ..lnd import DEFAULT_CAP
from .cases import CaseFile
from .corpus import builtin_corpus
from .pipeline import _cocycle_of, run_case, tower_from


def _read_json(path: str):
    return json.loads(Path(path).read_text())


def _tower_spec(data) -> tuple[list, tuple | None]:
    """Accept a bare step list or {"steps": [...], "removed_point": [...]}."""
    if isinstance(data, dict):
        rp = data.get("removed_point")
        return data["steps"], ((rp[0], tuple(rp[1])) if rp else None)
    return data, None


def _print_reports(reports, as_json: bool) -> None:
    if as_json:
        print(json.dumps([r.to_json() for r in reports], indent=2, ensure_ascii=False))
        return
    for r in reports:
        print(r.summary_line())
        for c in r.checks:
            if r.outcome(c) != "pass":
                print(f"    {c.name}: {c.status} -- {c.detail}")


def cmd_verify(a) -> int:
    if a.corpus:
        cases = builtin_corpus()
    elif a.case:
        cases = [CaseFile.load(a.case)]
    else:
        raise SystemExit("verify needs a case file or --corpus")
    reports = [run_case(c, a.budget, a.cap) for c in cases]
    _print_reports(reports, a.json)
    return 0 if all(r.passed for r in reports) else 1


def cmd_corpus(a) -> int:
    out = Path(a.out)
    out.mkdir(parents=True, exist_ok=True)
    for c in builtin_corpus():
        (out / f"{c.id}.json").write_text(c.dumps() + "\n")
    print(f"wrote {len(builtin_corpus())} case files to {out}")
    return 0


def cmd_cech(a) -> int:
    payload = {"cocycle": a.cocycle} if a.cocycle else {"m": a.m, "n": a.n, "p": a.p}
    with reduction_budget(a.budget):
        cls = classify_extension(_cocycle_of(payload))
    if a.json:
        print(json.dumps(cls.to_json(), indent=2))
    else:
        print(f"l0 = {cls.l0}  d = {cls.d}  canonical class = {cls.canonical_monomials}")
        if cls.degree_flag:
            print(f"note: degree before reduction was {cls.d_unreduced}")
    return 0


def cmd_blowup(a) -> int:
    steps, _ = _tower_spec(_read_json(a.tower))
    t = tower_from(steps)
    dot = dual_graph(t)
    if a.dot:
        Path(a.dot).write_text(dot)
    out = {"self_intersections": t.self_intersections(), "edges": [list(e) for e in t.edges()]}
    if a.multiplicity:
        with reduction_budget(a.budget):
            out["multiplicity"] = total_transform_multiplicity(t)
    if a.json:
        print(json.dumps(out, indent=2))
    else:
        if not a.dot:
            print(dot)
        for k, v in out.items():
            print(f"{k}: {v}")
    return 0


def cmd_modify(a) -> int:
    case = CaseFile.load(a.case)
    if "modification" not in case.payload:
        raise SystemExit("the case has no modification block")
    r = run_case(case, a.budget, a.cap)
    _print_reports([r], a.json)
    return 0 if r.passed else 1


def cmd_synth(a) -> int:
    src = Path(a.cocycle)
    c = _cocycle_of(_read_json(src) if src.is_file() else {"cocycle": a.cocycle})
    steps, rp = _tower_spec(_read_json(a.tower))
    with reduction_budget(a.budget):
        e = synthesize_extension(c, tower_from(steps), rp, certify=False)
        cert = certify_extension(e, c)
    report = {"level_trace": list(e.level_trace), "charts": sorted(e.charts),
              "certification": cert.to_json()}
    if a.report:
        Path(a.report).write_text(json.dumps(report, indent=2, ensure_ascii=False) + "\n")
    if a.json:
        print(json.dumps(report, indent=2, ensure_ascii=False))
    else:
        print(f"level trace {list(e.level_trace)}")
        for ch in cert.checks:
            print(f"  {ch.status:12s} {ch.name}  {ch.detail}")
    return 0 if cert.passed else 1


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--budget", type=int, default=DEFAULT_BUDGET,
                        help="reduction steps allowed per Groebner call")
    common.add_argument("--cap", type=int, default=DEFAULT_CAP,
                        help="iteration cap for nilpotency and reduction loops")
    common.add_argument("--json", action="store_true", help="machine-readable output")

    p = argparse.ArgumentParser(prog="gext", description="G_a-extension toolkit")
    sub = p.add_subparsers(dest="command", required=True)

    v = sub.add_parser("verify", parents=[common], help="run a case file or the built-in corpus")
    v.add_argument("case", nargs="?")
    v.add_argument("--corpus", action="store_true")
    v.set_defaults(fn=cmd_verify)

    c = sub.add_parser("corpus", parents=[common], help="write the built-in corpus as JSON files")
    c.add_argument("--out", required=True)
    c.set_defaults(fn=cmd_corpus)

    ce = sub.add_parser("cech", parents=[common], help="cocycle classification")
    ce_sub = ce.add_subparsers(dest="action", required=True)
    cl = ce_sub.add_parser("classify", parents=[common])
    cl.add_argument("--m", type=int)
    cl.add_argument("--n", type=int)
    cl.add_argument("--p", default="1")
    cl.add_argument("--cocycle", help="Laurent polynomial in x, y, e.g. x^-1*y^-1")
    cl.set_defaults(fn=cmd_cech)

    b = sub.add_parser("blowup", parents=[common], help="tower dual graph and multiplicities")
    b.add_argument("--tower", required=True)
    b.add_argument("--dot")
    b.add_argument("--multiplicity", action="store_true")
    b.set_defaults(fn=cmd_blowup)

    m = sub.add_parser("modify", parents=[common], help="check a case's modification block")
    m.add_argument("--case", required=True)
    m.set_defaults(fn=cmd_modify)

    s = sub.add_parser("synth", parents=[common], help="build and certify an extension")
    s.add_argument("--cocycle", required=True,
                   help="JSON cocycle file or a Laurent polynomial in x, y")
    s.add_argument("--tower", required=True)
    s.add_argument("--report")
    s.set_defaults(fn=cmd_synth)
    return p


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    if getattr(args, "command", None) == "cech" and args.cocycle is None and \
            (args.m is None or args.n is None):
        print("gext cech classify: give --cocycle or both --m and --n", file=sys.stderr)
        return 2
    try:
        return args.fn(args)
    except GextError as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
