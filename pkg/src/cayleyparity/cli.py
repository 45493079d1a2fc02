"""Command-line front end.

Every command loads (or builds) one group, runs one pipeline and writes a
report to stdout, as indented text or as a versioned JSON document.
``sweep`` runs the full battery of checks over the builtin catalogue.

Exit codes: 0 when every check passes, 1 when some report records a
violation, 2 for input or configuration errors.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from functools import partial

from . import linalg
from .catalogue import EXHAUSTIVE_ODD_ORDERS, enumerate_builtin_groups, load_group, parse_order_range
from .cayley import (
    GODSIL_SPIGA_CAP,
    SIGNED_CLASS_CAP,
    even_order_demo,
    pc_eigensystem,
    verify_godsil_spiga,
    verify_odd_eigenvalue,
    verify_signed_corollary,
)
from .classalg import conjugacy_report, pc_quotient_check
from .errors import CapExceeded, CayleyParityError, InapplicableOrder, InputError, VerificationError
from .groups import DEFAULT_CAP, FiniteGroup, conjugacy_classes, describe, pc_classes, power_classes
from .schemes import scheme_from_partition, scheme_to_dict, verify_scheme_axioms
from .spectra import eigensystem_to_dict, verify_identities

REPORT_FORMAT = "cayleyparity.report"
REPORT_VERSION = 1
THREADS_ENV = "CAYLEYPARITY_THREADS"

COMMANDS = (
    "describe-group",
    "classes",
    "scheme",
    "eigen",
    "frame-quotient",
    "verify-odd",
    "verify-signed",
    "verify-gs",
    "quotient-check",
    "sweep",
    "even-order-demo",
)
_NEEDS_GROUP = set(COMMANDS) - {"sweep", "even-order-demo"}


@dataclass(frozen=True)
class RunConfig:
    command: str
    group_source: str | None = None
    order_range: tuple[int, int] | None = None
    odd_only: bool = False
    output_format: str = "plain"
    seed: int = 0
    n_primes: int = 3
    signed_cap: int = SIGNED_CLASS_CAP
    gs_cap: int = GODSIL_SPIGA_CAP
    group_cap: int = DEFAULT_CAP
    scheme_kind: str = "pc"
    with_relation: bool = False
    timing: bool = False
    threads: int = 1

    def __post_init__(self):
        if self.command not in COMMANDS:
            raise InputError(f"unknown command {self.command!r}")
        if self.order_range is not None and self.command != "sweep":
            raise InputError("--order-range is only valid with sweep")
        if self.command in _NEEDS_GROUP and not self.group_source:
            raise InputError(f"{self.command} needs --group")
        if self.output_format not in ("plain", "json"):
            raise InputError(f"--format must be plain or json, got {self.output_format!r}")
        if self.n_primes < 1 or self.threads < 1:
            raise InputError("--primes and the thread count must be positive")


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise InputError(message)


def build_parser() -> argparse.ArgumentParser:
    ap = _Parser(prog="cayleyparity", description="Association-scheme spectra and odd-eigenvalue checks")
    ap.add_argument("command", choices=COMMANDS)
    ap.add_argument("--group", dest="group_source", help='"builtin:<descriptor>" or a group JSON file')
    ap.add_argument("--order-range", help="for sweep, e.g. 3..45")
    ap.add_argument("--odd-only", action="store_true")
    ap.add_argument("--format", dest="output_format", default="plain", choices=("plain", "json"))
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--primes", dest="n_primes", type=int, default=3, help="admissible primes per mod-p check")
    ap.add_argument("--signed-cap", type=int, default=SIGNED_CLASS_CAP)
    ap.add_argument("--gs-cap", type=int, default=GODSIL_SPIGA_CAP)
    ap.add_argument("--max-order", dest="group_cap", type=int, default=DEFAULT_CAP)
    ap.add_argument("--kind", dest="scheme_kind", default="pc", choices=("pc", "conjugacy"))
    ap.add_argument("--with-relation", action="store_true", help="include the relation table in scheme output")
    ap.add_argument("--timing", action="store_true", help="include elapsed times (breaks byte-identical output)")
    return ap


def _threads_from_env(env) -> int:
    raw = env.get(THREADS_ENV, "1")
    try:
        t = int(raw)
    except ValueError:
        raise InputError(f"{THREADS_ENV}={raw!r} is not an integer") from None
    if t < 1:
        raise InputError(f"{THREADS_ENV} must be positive")
    return t


def config_from_args(argv, env=None) -> RunConfig:
    ns = build_parser().parse_args(argv)
    env = os.environ if env is None else env
    return RunConfig(
        command=ns.command,
        group_source=ns.group_source,
        order_range=parse_order_range(ns.order_range) if ns.order_range else None,
        odd_only=ns.odd_only,
        output_format=ns.output_format,
        seed=ns.seed,
        n_primes=ns.n_primes,
        signed_cap=ns.signed_cap,
        gs_cap=ns.gs_cap,
        group_cap=ns.group_cap,
        scheme_kind=ns.scheme_kind,
        with_relation=ns.with_relation,
        timing=ns.timing,
        threads=_threads_from_env(env),
    )


# -- pipelines: each returns (result document, plain lines, violation flag) --------


def _describe(G: FiniteGroup, cfg):
    doc = describe(G)
    doc["conjugacy_class_sizes"] = conjugacy_classes(G).sizes()
    doc["pc_class_count"] = len(pc_classes(G))
    lines = [
        f"group {G.descriptor}: order {G.order}, exponent {doc['exponent']}, "
        f"{'abelian' if G.is_abelian else 'non-abelian'}",
        f"conjugacy classes: {len(doc['conjugacy_class_sizes'])}, PC-classes: {doc['pc_class_count']}",
    ]
    return doc, lines, False


def _classes(G, cfg):
    parts = {"conjugacy": conjugacy_classes(G), "power": power_classes(G), "pc": pc_classes(G)}
    doc = {name: [list(b) for b in p.blocks] for name, p in parts.items()}
    lines = [f"{name} ({len(blocks)}): {blocks}" for name, blocks in doc.items()]
    return doc, lines, False


def _scheme(G, cfg):
    part = pc_classes(G) if cfg.scheme_kind == "pc" else conjugacy_classes(G)
    S = scheme_from_partition(G, part)
    axioms = verify_scheme_axioms(S)
    doc = scheme_to_dict(S, include_relation=cfg.with_relation)
    doc["kind"] = cfg.scheme_kind
    doc["axioms"] = axioms.to_dict()
    doc["intersection_numbers"] = axioms.intersection.p.tolist() if axioms.passed else None
    lines = [
        f"{cfg.scheme_kind} scheme of {G.descriptor}: n={S.n}, d={S.d}, valencies {doc['valencies']}",
        f"axioms: {'pass' if axioms.passed else 'FAIL ' + str(axioms.failed())}",
    ]
    return doc, lines, not axioms.passed


def _eigen(G, cfg):
    E = pc_eigensystem(G)
    ident = verify_identities(E)
    doc = eigensystem_to_dict(E)
    doc["identities"] = ident.to_dict()
    doc["det_P_parity"] = linalg.det_parity(E.P)
    lines = [f"eigensystem of the PC scheme of {G.descriptor}: n={E.n}, d={E.d}"]
    lines += ["P = " + str([list(r) for r in E.P]), f"v = {list(E.v)}", f"m = {list(E.m)}"]
    lines += [f"det P = {doc['det_P']} ({doc['det_P_parity']})", f"frame quotient = {doc['frame_quotient']}"]
    lines.append(f"identities: {'pass' if ident.passed else 'FAIL'}")
    return doc, lines, not ident.passed


def _frame_quotient(G, cfg):
    rep = conjugacy_report(G, n_primes=cfg.n_primes, seed=cfg.seed)
    doc = rep.to_dict()
    bad = not (rep.identities_hold and rep.consistent_across_primes) or (G.order % 2 == 1 and rep.parity != "odd")
    lines = [
        f"conjugacy scheme of {G.descriptor}: v = {rep.valencies}, m = {rep.multiplicities}",
        f"frame quotient = {rep.frame_quotient} ({rep.parity}) over primes {rep.primes}",
        f"identities mod p: {'pass' if rep.identities_hold else 'FAIL'}; "
        f"consistent across primes: {'yes' if rep.consistent_across_primes else 'NO'}",
    ]
    return doc, lines, bad


def _verification(fn):
    def pipeline(G, cfg):
        started = time.perf_counter()
        rep = fn(G, cfg)
        rep.elapsed = time.perf_counter() - started
        lines = [rep.summary()]
        lines += [f"counterexample: {c}" for c in rep.counterexamples]
        if cfg.timing:
            lines.append(f"elapsed: {rep.elapsed:.3f}s")
        return rep.to_dict(timing=cfg.timing), lines, not rep.passed

    return pipeline


def _quotient(G, cfg):
    rep = pc_quotient_check(G, n_primes=cfg.n_primes, seed=cfg.seed)
    fields = [r.field for r in rep.reports]
    if rep.exact is not None:
        fields.append("Q")
    lines = [
        f"quotient-check {G.descriptor}: {'pass' if rep.passed else 'FAIL'} over {', '.join(fields)}",
    ]
    return rep.to_dict(), lines, not rep.passed


PIPELINES = {
    "describe-group": _describe,
    "classes": _classes,
    "scheme": _scheme,
    "eigen": _eigen,
    "frame-quotient": _frame_quotient,
    "verify-odd": _verification(lambda G, c: verify_odd_eigenvalue(G)),
    "verify-signed": _verification(lambda G, c: verify_signed_corollary(G, cap=c.signed_cap)),
    "verify-gs": _verification(lambda G, c: verify_godsil_spiga(G, cap=c.gs_cap)),
    "quotient-check": _quotient,
}


# -- sweep -----------------------------------------------------------------------------


def _check(name, thunk, timing):
    started = time.perf_counter()
    try:
        status, payload = thunk()
    except (InapplicableOrder, CapExceeded) as exc:
        status, payload = "skipped", {"reason": str(exc)}
    except VerificationError as exc:
        status, payload = "fail", {"error": type(exc).__name__, "message": str(exc)}
    rec = {"check": name, "status": status, "result": payload}
    if timing:
        rec["elapsed_seconds"] = round(time.perf_counter() - started, 6)
    return rec


def sweep_group(descriptor: str, cfg: RunConfig) -> dict:
    G = load_group("builtin:" + descriptor, cap=cfg.group_cap)
    E = pc_eigensystem(G)

    def report(fn):
        def thunk():
            rep = fn()
            return ("pass" if rep.passed else "fail"), rep.to_dict(timing=cfg.timing)

        return thunk

    def frame_parity():
        rep = conjugacy_report(G, n_primes=cfg.n_primes, seed=cfg.seed)
        ok = rep.identities_hold and rep.consistent_across_primes and (G.order % 2 == 0 or rep.parity == "odd")
        return ("pass" if ok else "fail"), rep.to_dict()

    def det_parity():
        par = linalg.det_parity(E.P)
        ok = G.order % 2 == 0 or par == "odd"
        return ("pass" if ok else "fail"), {"det_P": int(linalg.det(E.P)), "parity": par}

    def quotient():
        rep = pc_quotient_check(G, n_primes=cfg.n_primes, seed=cfg.seed)
        return ("pass" if rep.passed else "fail"), rep.to_dict()

    checks = [
        _check("verify-odd", report(lambda: verify_odd_eigenvalue(G, E)), cfg.timing),
        _check("verify-signed", report(lambda: verify_signed_corollary(G, E, cap=cfg.signed_cap)), cfg.timing),
        _check("frame-quotient", frame_parity, cfg.timing),
        _check("det-parity", det_parity, cfg.timing),
        _check("quotient-check", quotient, cfg.timing),
    ]
    status = "fail" if any(c["status"] == "fail" for c in checks) else "pass"
    return {"group": descriptor, "n": G.order, "pc_classes": E.d, "status": status, "checks": checks}


def _sweep(cfg: RunConfig):
    lo, hi = cfg.order_range or (3, 27)
    descriptors = enumerate_builtin_groups((lo, hi), odd_only=cfg.odd_only)
    job = partial(sweep_group, cfg=cfg)
    if cfg.threads > 1 and len(descriptors) > 1:
        # the work is pure-Python heavy, so workers are processes
        with ProcessPoolExecutor(max_workers=cfg.threads) as pool:
            results = list(pool.map(job, descriptors))
    else:
        results = [job(d) for d in descriptors]
    results.sort(key=lambda r: r["group"])
    covered = [o for o in EXHAUSTIVE_ODD_ORDERS if lo <= o <= hi]
    doc = {
        "order_range": [lo, hi],
        "odd_only": cfg.odd_only,
        "exhaustive_orders": covered,
        "groups": results,
        "violations": sum(r["status"] == "fail" for r in results),
    }
    lines = []
    for r in results:
        marks = " ".join(f"{c['check']}={c['status']}" for c in r["checks"])
        lines.append(f"{r['group']:<48} n={r['n']:<4} {r['status']:<5} {marks}")
    lines.append(f"{len(results)} groups, {doc['violations']} with violations")
    return doc, lines, doc["violations"] > 0


def _demo(cfg):
    doc = even_order_demo()
    lines = [
        f"{doc['group']} with C = {doc['connection_set']}: normal={doc['normal']}, integral={doc['integral']}",
        f"spectrum {doc['spectrum']}; odd eigenvalue present: {doc['has_odd']}",
    ]
    return doc, lines, False


# -- entry points ----------------------------------------------------------------------


def _emit(cfg: RunConfig, doc, lines, out):
    if cfg.output_format == "json":
        envelope = {"format": REPORT_FORMAT, "version": REPORT_VERSION, "command": cfg.command, "result": doc}
        if cfg.command in _NEEDS_GROUP:
            envelope["group"] = cfg.group_source
        if cfg.command in ("frame-quotient", "quotient-check", "sweep"):
            envelope["seed"] = cfg.seed
        out.write(json.dumps(envelope, indent=2, sort_keys=True) + "\n")
    else:
        out.write("\n".join(lines) + "\n")


def run(cfg: RunConfig, out=None, err=None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    try:
        if cfg.command == "sweep":
            doc, lines, bad = _sweep(cfg)
        elif cfg.command == "even-order-demo":
            doc, lines, bad = _demo(cfg)
        else:
            G = load_group(cfg.group_source, cap=cfg.group_cap)
            doc, lines, bad = PIPELINES[cfg.command](G, cfg)
    except InputError as exc:
        err.write(f"error: {type(exc).__name__}: {exc}\n")
        return 2
    except VerificationError as exc:
        err.write(f"violation: {type(exc).__name__}: {exc}\n")
        return 1
    except CayleyParityError as exc:
        err.write(f"error: {type(exc).__name__}: {exc}\n")
        return 1
    _emit(cfg, doc, lines, out)
    return 1 if bad else 0


def main(argv=None) -> int:
    try:
        cfg = config_from_args(sys.argv[1:] if argv is None else argv)
    except InputError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return 2
    return run(cfg)


if __name__ == "__main__":
    sys.exit(main())
