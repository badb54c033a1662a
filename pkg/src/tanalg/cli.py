"""Command line entry point: ``tanalg <subcommand> ...``.

Exit codes: 0 when every executed check passes, 1 when a check fails,
2 for unreadable or malformed input and invalid options.
"""
from __future__ import annotations

import argparse
import json
import logging
import os
import sys
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Sequence

from .algebra import AlgebraError, FiniteAlgebra, Homomorphism, identity_hom, to_terminal, zero_hom
from .bundles import (BUNDLE_AXIOMS, ROUNDTRIP_AXIOMS, build_diff_bundle, bundle_to_json,
                      canonical_l_algebra, roundtrip_check, tangent_diff_bundle,
                      verify_diff_bundle)
from .catalog import ParseError, catalog, parse, serialize, to_json, variety_violation
from .congruence import brute_force_least_congruence, generate_congruence, quotient
from .reflect import ASSIGNMENT_AXIOMS, MODES, AssignmentEngine, verify_assignment
from .report import FAIL, PASS, SKIPPED, AxiomReport, BudgetExceeded, VerificationError
from .tangent import DEFAULT_BUDGET, TANGENT_AXIOMS, verify_tangent

log = logging.getLogger("tanalg")

EXIT_OK, EXIT_FAIL, EXIT_ENV = 0, 1, 2
REGISTRY = ASSIGNMENT_AXIOMS + TANGENT_AXIOMS + BUNDLE_AXIOMS + ROUNDTRIP_AXIOMS


class ConfigError(ValueError):
    pass


@dataclass
class RunConfig:
    subcommand: str
    inputs: dict[str, str] = field(default_factory=dict)
    mode: str = "ab"
    budget: int = DEFAULT_BUDGET
    depth: int = 3
    report: str | None = None
    verbosity: int = 0
    options: dict[str, Any] = field(default_factory=dict)

    def validate(self, sizes: Sequence[int] = ()) -> None:
        if self.depth not in (1, 2, 3):
            raise ConfigError(f"depth must be 1, 2 or 3, got {self.depth}")
        if self.mode not in MODES:
            raise ConfigError(f"unknown mode {self.mode!r}")
        for n in sizes:
            if self.budget < n:
                raise ConfigError(f"budget {self.budget} is below the input size {n}")


def default_budget() -> int:
    raw = os.environ.get("TANALG_BUDGET")
    if raw is None:
        return DEFAULT_BUDGET
    try:
        value = int(raw)
    except ValueError:
        raise ConfigError(f"TANALG_BUDGET must be an integer, got {raw!r}") from None
    if value < 1:
        raise ConfigError("TANALG_BUDGET must be positive")
    return value


def dump(doc: dict) -> str:
    return json.dumps(doc, sort_keys=True, indent=2) + "\n"


def _status(report: AxiomReport) -> int:
    return EXIT_OK if report.ok else EXIT_FAIL


def _load(path: str) -> FiniteAlgebra:
    X = parse(Path(path))
    return X if X.name else X.renamed(Path(path).stem)


def _failure(axiom: str, exc: AlgebraError) -> dict:
    return {"id": axiom, "status": FAIL, "witness": list(exc.witness or []), "cost": 0,
            "detail": str(exc)}


# subcommands

def cmd_validate(cfg: RunConfig) -> tuple[int, dict]:
    X = _load(cfg.inputs["input"])
    bad = variety_violation(X)
    doc = {"command": "validate", "input": X.name, "size": X.size,
           "operations": [list(o) for o in X.signature.operations],
           "laws": {"status": PASS if bad is None else FAIL}}
    if bad is not None:
        doc["laws"].update({"law": bad[0], "witness": [int(w) for w in bad[1]]})
    return (EXIT_OK if bad is None else EXIT_FAIL), doc


def cmd_reflect(cfg: RunConfig) -> tuple[int, dict]:
    X = _load(cfg.inputs["input"])
    cfg.validate([X.size])
    engine = AssignmentEngine(cfg.mode)
    doc: dict[str, Any] = {"command": "reflect", "input": X.name, "mode": cfg.mode,
                           "size": X.size}
    try:
        R = engine.reflect(X)
    except VerificationError as exc:
        doc["axioms"] = [_failure(exc.axiom, exc)]
        return EXIT_FAIL, doc
    L = R.reflected.renamed(f"L({X.name})")
    doc["reflected_size"] = L.size
    doc["zero"] = R.zero
    if cfg.options.get("emit_unit"):
        doc["unit"] = R.unit.values.tolist()
    out = cfg.options.get("out")
    if out:
        Path(out).write_text(serialize(L))
    else:
        doc["algebra"] = to_json(L)
    return EXIT_OK, doc


def _parse_seed(text: str) -> tuple[int, int]:
    try:
        a, b = text.split(":")
        return int(a), int(b)
    except ValueError:
        raise ConfigError(f"seed {text!r} must look like a:b") from None


def cmd_congruence(cfg: RunConfig) -> tuple[int, dict]:
    X = _load(cfg.inputs["input"])
    seeds = [_parse_seed(s) for s in cfg.options.get("seeds", [])]
    try:
        c = generate_congruence(X, seeds)
    except AlgebraError as exc:
        raise ConfigError(str(exc)) from None
    Q, _ = quotient(X, c)
    doc: dict[str, Any] = {"command": "congruence", "input": X.name,
                           "seeds": [list(s) for s in seeds], "classes": c.classes(),
                           "quotient_size": Q.size}
    code = EXIT_OK
    if cfg.options.get("brute_force"):
        agree = brute_force_least_congruence(X, seeds) == c
        doc["brute_force"] = PASS if agree else FAIL
        code = EXIT_OK if agree else EXIT_FAIL
    return code, doc


def cmd_tangent(cfg: RunConfig) -> tuple[int, dict]:
    X = _load(cfg.inputs["input"])
    cfg.validate([X.size])
    engine = AssignmentEngine(cfg.mode)
    doc: dict[str, Any] = {"command": "tangent", "input": X.name, "mode": cfg.mode}
    try:
        TX = engine.tangent(X)
    except VerificationError as exc:
        doc["axioms"] = [_failure(exc.axiom, exc)]
        return EXIT_FAIL, doc
    except BudgetExceeded as exc:
        doc["axioms"] = [{"id": "T(X)", "status": SKIPPED, "witness": [exc.size], "cost": 0,
                          "detail": str(exc)}]
        return EXIT_OK, doc
    doc["sizes"] = {"X": X.size, "LX": TX.L.size, "TX": TX.total.size}
    if cfg.options.get("verify"):
        rep = verify_tangent(TX, depth=cfg.depth, budget=cfg.budget)
        doc.update(rep.to_dict())
        return _status(rep), doc
    return EXIT_OK, doc


def cmd_bundle(cfg: RunConfig) -> tuple[int, dict]:
    X = _load(cfg.inputs["base"])
    A = _load(cfg.inputs["fiber"])
    if X.signature != A.signature:
        raise ConfigError("base and fiber must share a signature")
    cfg.validate([X.size * A.size])
    engine = AssignmentEngine(cfg.mode)
    doc: dict[str, Any] = {"command": "bundle", "base": X.name, "fiber": A.name,
                           "mode": cfg.mode}
    try:
        alg = canonical_l_algebra(A, engine)
        D = build_diff_bundle(X, alg, engine, verify=False)
    except VerificationError as exc:
        doc["axioms"] = [_failure(exc.axiom, exc)]
        return EXIT_FAIL, doc
    rep = verify_diff_bundle(D, engine)
    if cfg.options.get("roundtrip"):
        for e in roundtrip_check(X, alg, engine).entries:
            rep.add(e)
    doc.update(rep.to_dict())
    doc["bundle"] = bundle_to_json(D)
    return _status(rep), doc


# suite

GROUPS = ("Z2", "Z3", "Z4", "Z6", "Klein4", "S3", "D4", "Q8")
ASSIGNMENT_RUNS = (
    ("ab", GROUPS + ("Loop5", "RingZ4", "RingZ6", "TrivZ2xZ2")),
    ("cmon", ("LZ3", "Idem2", "Mag4", "S3")),
    ("identity", ("Z2", "Z3", "Klein4")),
    ("terminal", ("S3", "LZ3")),
)
TANGENT_RUNS = (
    ("S3", "ab"), ("LZ3", "cmon"), ("Loop5", "ab"), ("Z2", "identity"), ("S3", "terminal"),
    ("Z3", "ab"), ("Idem2", "cmon"),
)
BUNDLE_RUNS = (
    ("S3", "Z2"), ("Z4", "Z2"), ("Z2", "Z2"), ("Z3", "Z2"), ("Z2", "Z3"),
    ("S3", "Z1"), ("Z1", "Z4"), ("Z1", "Klein4"), ("Klein4", "Z2"), ("Q8", "Z1"),
)
# (mode, algebra, entry expected to fail, text its detail must contain)
NEGATIVE_RUNS = (
    ("identity", "LZ3", "A1.commutative_witness", "commutativity"),
    ("ab", "Idem2", "A1.commutative_witness", "has no inverse"),
)


def _homs(engine: AssignmentEngine, X: FiniteAlgebra) -> list[Homomorphism]:
    P = engine.product(X, X)
    hs = [identity_hom(X), to_terminal(X), *P.projections]
    if X.pointed:
        hs.append(zero_hom(X, X))
    return hs


def _run_doc(kind: str, subject: str, mode: str, rep: AxiomReport) -> dict:
    doc = {"kind": kind, "subject": subject, "mode": mode}
    doc.update(rep.to_dict())
    return doc


def cmd_suite(cfg: RunConfig) -> tuple[int, dict]:
    C = catalog()
    engines = {m: AssignmentEngine(m) for m in MODES}
    runs: list[dict] = []
    for mode, names in ASSIGNMENT_RUNS:
        eng = engines[mode]
        for name in names:
            log.info("assignment %s %s", mode, name)
            X = C[name]
            runs.append(_run_doc("assignment", name, mode,
                                 verify_assignment(eng, [X], _homs(eng, X))))
    for name, mode in TANGENT_RUNS:
        log.info("tangent %s %s", mode, name)
        TX = engines[mode].tangent(C[name])
        runs.append(_run_doc("tangent", name, mode,
                             verify_tangent(TX, depth=cfg.depth, budget=cfg.budget)))
    eng = engines["ab"]
    for base, fiber in BUNDLE_RUNS:
        log.info("bundle %s x %s", base, fiber)
        alg = canonical_l_algebra(C[fiber], eng)
        D = build_diff_bundle(C[base], alg, eng, verify=False)
        runs.append(_run_doc("bundle", f"{base} x {fiber}", "ab", verify_diff_bundle(D, eng)))
        runs.append(_run_doc("roundtrip", f"{base} x {fiber}", "ab",
                             roundtrip_check(C[base], alg, eng)))
    runs.append(_run_doc("bundle", "T(S3)", "ab", verify_diff_bundle(
        tangent_diff_bundle(eng, C["S3"]), eng)))

    negatives = []
    for mode, name, expect, text in NEGATIVE_RUNS:
        log.info("negative %s %s", mode, name)
        observed: dict[str, Any]
        try:
            rep = verify_assignment(engines[mode], [C[name]])
            e = rep[expect] if expect in rep.ids else None
            observed = e.to_dict() if e else {"status": PASS}
        except VerificationError as exc:
            observed = _failure(exc.axiom, exc)
        detected = (observed.get("status") == FAIL and bool(observed.get("witness"))
                    and text in observed.get("detail", ""))
        negatives.append({"mode": mode, "subject": name, "expected": expect,
                          "observed": observed, "status": PASS if detected else FAIL})

    executed = {e["id"] for r in runs for e in r["axioms"] if e["status"] != SKIPPED}
    missing = [i for i in REGISTRY if i not in executed]
    counts = {s: sum(1 for r in runs for e in r["axioms"] if e["status"] == s)
              for s in (PASS, FAIL, SKIPPED)}
    neg_failed = sum(1 for n in negatives if n["status"] != PASS)
    doc = {"command": "suite", "runs": runs, "negative": negatives,
           "coverage": {"registry": len(REGISTRY), "executed": len(REGISTRY) - len(missing),
                        "missing": missing},
           "summary": counts}
    ok = counts[FAIL] == 0 and not missing and neg_failed == 0
    return (EXIT_OK if ok else EXIT_FAIL), doc


COMMANDS = {"validate": cmd_validate, "reflect": cmd_reflect, "congruence": cmd_congruence,
            "tangent": cmd_tangent, "bundle": cmd_bundle, "suite": cmd_suite}


# rendering

def render(doc: dict) -> str:
    lines = [f"{doc.get('command', '')}: " + ", ".join(
        f"{k}={doc[k]}" for k in ("input", "base", "fiber", "mode", "size", "reflected_size")
        if k in doc)]
    blocks = [("", doc)] + [(f"{r['kind']} {r['subject']} [{r['mode']}]", r)
                            for r in doc.get("runs", [])]
    for title, block in blocks:
        if title:
            lines.append(title)
        for e in block.get("axioms", []):
            w = "" if e.get("witness") is None else f" witness={e['witness']}"
            d = f"  {e['detail']}" if e.get("detail") else ""
            lines.append(f"  {e['status']:<8}{e['id']}{w}{d}")
    for n in doc.get("negative", []):
        lines.append(f"  {n['status']:<8}negative {n['subject']} [{n['mode']}] "
                     f"expects {n['expected']} to fail")
    if "laws" in doc:
        lines.append(f"  laws: {doc['laws']}")
    if "classes" in doc:
        lines.append(f"  classes: {doc['classes']}")
    for key in ("sizes", "coverage", "summary"):
        if key in doc:
            lines.append(f"{key}: {doc[key]}")
    notes = {k: v for k, v in doc.get("notes", {}).items() if not isinstance(v, list)}
    if notes:
        lines.append("notes:")
        lines.extend(f"  {k}: {v}" for k, v in notes.items())
    if "error" in doc:
        lines.append(f"error: {doc['error']}")
    return "\n".join(lines) + "\n"


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="tanalg",
                                 description="Tangent structures from linear assignments "
                                             "on finite algebras.")
    sub = ap.add_subparsers(dest="subcommand", required=True)

    def common(p, inputs=("input",), mode=True):
        for name in inputs:
            p.add_argument(f"--{name}", required=True)
        if mode:
            p.add_argument("--mode", default="ab", choices=MODES)
        p.add_argument("--report", help="write the JSON report here")
        p.add_argument("--budget", type=int, default=None)
        p.add_argument("--depth", type=int, default=3)
        p.add_argument("--pretty", action="store_true", help="human-readable output")
        p.add_argument("-v", "--verbose", action="count", default=0)

    common(sub.add_parser("validate", help="check the variety laws"), mode=False)
    p = sub.add_parser("reflect", help="reflect onto commutative witnesses")
    common(p)
    p.add_argument("--out", help="write the reflected algebra here")
    p.add_argument("--emit-unit", action="store_true")
    p = sub.add_parser("congruence", help="least congruence containing the seeds")
    common(p, mode=False)
    p.add_argument("--seeds", nargs="*", default=[], metavar="A:B")
    p.add_argument("--brute-force", action="store_true", help="compare with enumeration")
    p = sub.add_parser("tangent", help="build T(X) and verify the tangent axioms")
    common(p)
    p.add_argument("--verify", action="store_true")
    p = sub.add_parser("bundle", help="differential bundle X x A")
    common(p, inputs=("base", "fiber"))
    p.add_argument("--roundtrip", action="store_true")
    p = sub.add_parser("suite", help="full battery over the catalog")
    common(p, inputs=(), mode=False)
    return ap


def config_from_args(ns: argparse.Namespace) -> RunConfig:
    inputs = {k: getattr(ns, k) for k in ("input", "base", "fiber") if getattr(ns, k, None)}
    options = {k: getattr(ns, k) for k in ("out", "emit_unit", "seeds", "brute_force",
                                           "verify", "roundtrip") if hasattr(ns, k)}
    budget = ns.budget if ns.budget is not None else default_budget()
    cfg = RunConfig(ns.subcommand, inputs, getattr(ns, "mode", "ab"), budget, ns.depth,
                    ns.report, ns.verbose, options)
    cfg.validate()
    return cfg


def run(cfg: RunConfig) -> tuple[int, dict]:
    try:
        return COMMANDS[cfg.subcommand](cfg)
    except ParseError as exc:
        return EXIT_ENV, {"command": cfg.subcommand, "error": str(exc),
                          "location": list(exc.witness or [])}
    except (ConfigError, OSError) as exc:
        return EXIT_ENV, {"command": cfg.subcommand, "error": str(exc)}


def main(argv: Sequence[str] | None = None) -> int:
    ap = build_parser()
    ns = ap.parse_args(argv)
    logging.basicConfig(level=logging.WARNING - 10 * min(ns.verbose, 2),
                        format="%(levelname)s %(message)s", stream=sys.stderr)
    try:
        cfg = config_from_args(ns)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ENV
    code, doc = run(cfg)
    text = dump(doc)
    if cfg.report:
        try:
            Path(cfg.report).write_text(text)
        except OSError as exc:
            print(f"error: cannot write report: {exc}", file=sys.stderr)
            return EXIT_ENV
    if ns.pretty:
        sys.stdout.write(render(doc))
    elif not cfg.report:
        sys.stdout.write(text)
    if "error" in doc:
        print(f"error: {doc['error']}", file=sys.stderr)
    return code


if __name__ == "__main__":
    sys.exit(main())
