"""Command-line front end: generate, verify and analyze triangulations.

Three subcommands:

* ``generate`` writes a deterministic facet file for a named family
  (sphere, circle, rp, product, subdivide).
* ``verify`` runs the closed-pseudomanifold validation and reports
  whether the complex is analyzable.
* ``analyze`` runs the full F1 pipeline and emits a report document,
  JSON by default.

Exit codes: 0 all checks pass, 1 validation failure, 2 cross-check
failure, 3 usage error.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import sys
from pathlib import Path
from typing import Optional

from . import __version__
from .complexes import (
    ComplexFormatError,
    FacetComplex,
    load_complex,
    save_complex,
    validate_closed_pseudomanifold,
)
from .factory import GeneratorSpec
from .linalg import PresentedGroup
from .pipeline import CohomotopyReport, InvalidComplexError, compute_F1

EXIT_OK = 0
EXIT_VALIDATION = 1
EXIT_CROSSCHECK = 2
EXIT_USAGE = 3

# refuse, without --allow-slow, inputs whose skeleta make the pipeline a
# multi-hour run on one core
SLOW_FACET_LIMIT = 30000
SLOW_SIMPLEX_LIMIT = 150000

# how cocycle representatives and coordinates are normalized in reports
PIVOT_RULE = ("coordinates in the echelon cohomology basis whose pivots "
              "are lowest simplex indices in lexicographic vertex order")


class _Parser(argparse.ArgumentParser):
    """argparse defaults to exit code 2 on bad usage; the contract says 3."""

    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _build_parser() -> _Parser:
    p = _Parser(prog="cohomotopy",
                description="Exact cohomotopy invariants of triangulated "
                            "closed manifolds.")
    p.add_argument("--version", action="version",
                   version=f"cohomotopy {__version__}")
    sub = p.add_subparsers(dest="command", required=True)

    g = sub.add_parser("generate", help="write a facet file for a family",
                       description="Families: sphere d | circle m | rp d | "
                                   "product(a, b) | subdivide(a); nested "
                                   "expressions like product(sphere:3, "
                                   "circle:3) are accepted.")
    g.add_argument("spec", nargs="+",
                   help="family and parameters, e.g. 'rp 4' or "
                        "'product sphere:3 circle:3'")
    g.add_argument("-o", "--output", required=True, help="output facet file")

    v = sub.add_parser("verify", help="validate a facet file")
    v.add_argument("file", help="facet file to validate")

    a = sub.add_parser("analyze", help="run the full pipeline on a file")
    a.add_argument("file", help="facet file to analyze")
    fmt = a.add_mutually_exclusive_group()
    fmt.add_argument("--json", action="store_true", default=None,
                     help="emit the JSON report document (default)")
    fmt.add_argument("--text", action="store_true",
                     help="emit a human-readable summary instead of JSON")
    a.add_argument("--allow-slow", action="store_true",
                   help="run even when the input is large enough to take "
                        "hours")
    a.add_argument("--skip-crosscheck", action="store_true",
                   help="skip the Steenrod-based consistency checks")
    a.add_argument("--no-timing", action="store_true",
                   help="omit the timing block (reports become "
                        "byte-reproducible)")
    a.add_argument("--threads", type=int, default=1, metavar="N",
                   help="cap internal parallelism (results are identical "
                        "for any value)")
    a.add_argument("--max-degree", type=int, default=None, metavar="K",
                   help="truncate homology tables above degree K")
    return p


# ------------------------------------------------------------
# generate
# ------------------------------------------------------------

def _cmd_generate(args) -> int:
    try:
        spec = GeneratorSpec.parse_args(args.spec)
    except ValueError as e:
        print(f"cohomotopy generate: {e}", file=sys.stderr)
        return EXIT_USAGE
    K = spec.build()
    try:
        save_complex(K, args.output)
    except OSError as e:
        print(f"cohomotopy generate: cannot write {args.output}: {e}",
              file=sys.stderr)
        return EXIT_VALIDATION
    print(f"wrote {args.output}: dim {K.dim}, {K.n_vertices} vertices, "
          f"{len(K.facets)} facets")
    return EXIT_OK


# ------------------------------------------------------------
# verify
# ------------------------------------------------------------

def _load(path: str) -> FacetComplex:
    return load_complex(path)


def _cmd_verify(args) -> int:
    try:
        K = _load(args.file)
    except (OSError, ComplexFormatError) as e:
        print(f"invalid: {e}", file=sys.stderr)
        return EXIT_VALIDATION
    rep = validate_closed_pseudomanifold(K)
    print(f"dimension {K.dim}, {K.n_vertices} vertices, "
          f"{len(K.facets)} facets")
    print(f"ridges shared by exactly two facets: "
          f"{'yes' if rep.ridge_ok else 'no'}")
    print(f"facet graph connected: {'yes' if rep.connected else 'no'}"
          + ("" if rep.connected else f" ({rep.n_components} components)"))
    for m in rep.messages:
        print(f"  {m}")
    ok = rep.is_valid
    if ok and K.dim < 4:
        print(f"dimension {K.dim} is below the supported minimum 4; "
              f"the complex validates but cannot be analyzed")
        ok = False
    print("verdict: " + ("ok" if ok else "not analyzable"))
    return EXIT_OK if ok else EXIT_VALIDATION


# ------------------------------------------------------------
# analyze
# ------------------------------------------------------------

def _slow_estimate(K: FacetComplex) -> Optional[str]:
    """Cost warning for large inputs, or None when fine to run."""
    nf = len(K.facets)
    if nf <= SLOW_FACET_LIMIT:
        total = sum(K.f_vector())
        if total <= SLOW_SIMPLEX_LIMIT:
            return None
        size = f"{total} simplices in total"
    else:
        size = f"{nf} facets"
        total = nf * (2 ** (K.dim + 1) - 1)
    # crude single-core scaling anchored on measured mid-size runs
    minutes = max(1, round(5 * (total / 40000.0) ** 1.5))
    if minutes >= 120:
        est = f"~{minutes / 60.0:.0f} hours"
    else:
        est = f"~{minutes} minutes"
    return (f"input has {size}; a full analysis needs roughly {est} "
            f"on one core")


def _group_doc(g: PresentedGroup) -> dict:
    return {
        "free_rank": g.free_rank,
        "invariant_factors": list(g.torsion),
        "rendered": g.rendered(),
    }


def _bits_list(bits: int) -> list[int]:
    out = []
    i = 0
    while bits:
        if bits & 1:
            out.append(i)
        bits >>= 1
        i += 1
    return out


def _chain_doc(chain: dict[int, int]) -> list[list[int]]:
    return [[i, chain[i]] for i in sorted(chain)]


def _witness_doc(cls) -> dict:
    if cls.kind == "I":
        return {"twisted_2_cycle": _chain_doc(cls.twisted_cycle_witness)}
    if cls.kind == "IIa":
        return {"coboundary_1_cochain": _bits_list(cls.coboundary_witness)}
    return {"mod2_2_cycle": _bits_list(cls.dual_cycle_witness)}


def _report_doc(report: CohomotopyReport, path: str, digest: str,
                with_timing: bool) -> dict:
    val = report.validation
    doc = {
        "schema": 1,
        "tool": {"name": "cohomotopy", "version": __version__},
        "input": {
            "path": path,
            "sha256": digest,
            "dim": report.dim,
            "f_vector": list(report.f_vector),
        },
        "validation": {
            "valid": val.is_valid,
            "ridge_ok": val.ridge_ok,
            "connected": val.connected,
            "messages": list(val.messages),
        },
        "orientable": report.orientable,
        "homology": [
            {"degree": k, **_group_doc(g)}
            for k, g in enumerate(report.homology)],
        "cohomology": [
            {"degree": k, **_group_doc(g)}
            for k, g in enumerate(report.cohomology)],
        "twisted_homology": [
            {"degree": k, **_group_doc(g)}
            for k, g in enumerate(report.twisted_homology)],
        "characteristic_classes": {
            "basis_relative": {
                "pivot_rule": PIVOT_RULE,
                "w1": list(report.w1_coordinates),
                "w2": list(report.w2_coordinates),
                "w1_representative": _bits_list(report.w1.bits),
                "w2_representative": _bits_list(report.w2.bits),
            },
            "obstruction_is_zero": report.classification.kind == "IIa",
        },
        "classification": {
            "type": report.classification.kind,
            "basis_relative": {
                "pivot_rule": PIVOT_RULE,
                "witness": _witness_doc(report.classification),
            },
        },
        "twisted_h1": _group_doc(report.h1_twisted),
        "epsilon": None,
        "f1": _group_doc(report.f1),
        "crosschecks": [
            {"name": c.name, "passed": c.passed, "detail": c.detail}
            for c in report.crosschecks],
        "all_checks_pass": report.all_checks_pass(),
    }
    if report.epsilon is not None:
        eps = report.epsilon
        doc["epsilon"] = {
            "basis_relative": {
                "pivot_rule": PIVOT_RULE,
                "torsion_orders": list(eps.torsion_orders),
                "values": list(eps.values),
                "preimage_cycles": [
                    None if c is None else _bits_list(c)
                    for c in eps.preimage_cycles],
            },
        }
    if with_timing:
        doc["timings"] = [
            {"stage": name, "seconds": round(secs, 3)}
            for name, secs in report.timings]
    return doc


def _print_text(doc: dict) -> None:
    inp = doc["input"]
    print(f"input: {inp['path']} (dim {inp['dim']}, "
          f"{inp['f_vector'][-1]} facets, sha256 {inp['sha256'][:12]})")
    v = doc["validation"]
    print(f"validation: {'ok' if v['valid'] else 'FAILED'}")
    for m in v["messages"]:
        print(f"  {m}")
    print(f"orientable: {'yes' if doc['orientable'] else 'no'}")

    def table(name, rows):
        cells = "  ".join(f"H{r['degree']}={r['rendered']}" for r in rows)
        print(f"{name}: {cells}")

    table("homology", doc["homology"])
    table("cohomology", doc["cohomology"])
    table("twisted homology", doc["twisted_homology"])
    cc = doc["characteristic_classes"]["basis_relative"]
    print(f"w1 coordinates: {cc['w1']}  w2 coordinates: {cc['w2']}")
    print(f"classification: type {doc['classification']['type']}")
    print(f"twisted H1: {doc['twisted_h1']['rendered']}")
    if doc["epsilon"] is not None:
        e = doc["epsilon"]["basis_relative"]
        pairs = ", ".join(
            f"Z_{d}: {'-' if v is None else v}"
            for d, v in zip(e["torsion_orders"], e["values"]))
        print(f"extension functional: {pairs if pairs else '(no torsion)'}")
    print(f"F1 = {doc['f1']['rendered']}")
    print("cross-checks:")
    for c in doc["crosschecks"]:
        mark = {True: "pass", False: "FAIL", None: "skipped"}[c["passed"]]
        print(f"  [{mark}] {c['name']}: {c['detail']}")
    for t in doc.get("timings", []):
        print(f"  {t['stage']}: {t['seconds']}s")


def _cmd_analyze(args) -> int:
    if args.threads < 1:
        print("cohomotopy analyze: --threads must be at least 1",
              file=sys.stderr)
        return EXIT_USAGE
    try:
        raw = Path(args.file).read_bytes()
    except OSError as e:
        print(f"cohomotopy analyze: {e}", file=sys.stderr)
        return EXIT_VALIDATION
    digest = hashlib.sha256(raw).hexdigest()
    try:
        K = load_complex(args.file)
    except ComplexFormatError as e:
        print(f"cohomotopy analyze: {e}", file=sys.stderr)
        return EXIT_VALIDATION

    if not args.allow_slow:
        warning = _slow_estimate(K)
        if warning is not None:
            print(f"cohomotopy analyze: {warning}; "
                  f"pass --allow-slow to run anyway", file=sys.stderr)
            return EXIT_USAGE

    try:
        report = compute_F1(K, threads=args.threads,
                            skip_crosscheck=args.skip_crosscheck,
                            max_degree=args.max_degree)
    except InvalidComplexError as e:
        print("cohomotopy analyze: input failed validation:",
              file=sys.stderr)
        for m in e.validation.messages:
            print(f"  {m}", file=sys.stderr)
        return EXIT_VALIDATION
    except ValueError as e:
        print(f"cohomotopy analyze: {e}", file=sys.stderr)
        return EXIT_VALIDATION

    doc = _report_doc(report, args.file, digest,
                      with_timing=not args.no_timing)
    if args.text:
        _print_text(doc)
    else:
        print(json.dumps(doc, indent=2, ensure_ascii=False))
    return EXIT_OK if report.all_checks_pass() else EXIT_CROSSCHECK


def main(argv: Optional[list[str]] = None) -> int:
    args = _build_parser().parse_args(argv)
    if args.command == "generate":
        return _cmd_generate(args)
    if args.command == "verify":
        return _cmd_verify(args)
    return _cmd_analyze(args)


if __name__ == "__main__":
    sys.exit(main())
