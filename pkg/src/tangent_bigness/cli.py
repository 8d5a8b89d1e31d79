"""Command-line interface: ``tangent-bigness <command> ...``.

Exit codes: 0 success, 1 a verification failed, 2 bad input.
"""
from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction
from pathlib import Path

from . import certify, curves, elliptic, fibration, hierarchy, orbifold
from .corpus import (EXPECTED_COUNTS, CorpusError, certificate_paths, fixture_names, load_surface,
                     read_json)
from .picard import (STRICT, TOTAL, MalformedConfig, NotWeakDelPezzo, SurfaceModel, canonical_class,
                     change_basis, format_class, parse_class)

EXIT_OK, EXIT_FAIL, EXIT_INPUT = 0, 1, 2


class InputError(Exception):
    pass


def _jsonable(obj):
    if isinstance(obj, Fraction):
        return int(obj) if obj.denominator == 1 else str(obj)
    if isinstance(obj, dict):
        return {str(k): _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    return obj


def emit(args, payload: dict, text: str) -> None:
    if args.format == "json":
        print(json.dumps(_jsonable(payload), indent=2, sort_keys=True, ensure_ascii=False))
    else:
        print(text)


def both(S: SurfaceModel, c) -> dict:
    return {"total": format_class(change_basis(S, c, TOTAL)), "strict": format_class(change_basis(S, c, STRICT))}


def parse_pencil(S: SurfaceModel, spec: str) -> fibration.PencilClass:
    """``line:P``, ``conic:A,B,C,D`` or ``from-line:<class>``."""
    kind, _, rest = spec.partition(":")
    try:
        if kind == "line":
            return fibration.pencil(S, line_through=int(rest))
        if kind == "conic":
            return fibration.pencil(S, conic_through=[int(x) for x in rest.split(",")])
        if kind == "from-line":
            return fibration.pencil_from_line(S, parse_class(S, rest))
    except ValueError as exc:
        raise InputError(f"bad pencil {spec!r}: {exc}") from exc
    raise InputError(f"bad pencil {spec!r}; use line:P, conic:A,B,C,D or from-line:CLASS")


def vmrt_payload(S: SurfaceModel, P: fibration.PencilClass) -> tuple[dict, str]:
    members = fibration.reducible_members(S, P)
    corr = fibration.correction_divisor(S, P)
    v = fibration.vmrt_class(S, P)
    payload = {
        "pencil": P.label,
        "F": both(S, P.F),
        "members": [[{"class": both(S, c), "multiplicity": m} for c, m in mem.components] for mem in members],
        "correction": both(S, corr),
        "vmrt": {"total": v.render(S, TOTAL), "strict": v.render(S, STRICT)},
    }
    lines = [f"pencil {P.label}: F = {format_class(change_basis(S, P.F, STRICT))}"]
    for mem in members:
        parts = [(f"{m}*" if m > 1 else "") + format_class(change_basis(S, c, STRICT)) for c, m in mem.components]
        lines.append("  member: " + " + ".join(parts))
    lines.append(f"  correction: {format_class(change_basis(S, corr, STRICT))}")
    lines.append(f"  VMRT: {v.render(S, STRICT)}   (total basis: {v.render(S, TOTAL)})")
    return payload, "\n".join(lines)


# commands ---------------------------------------------------------------

def cmd_analyze(args) -> int:
    S = load_surface(args.config, args.corpus)
    rep = curves.dynkin_type(S)
    ls, roots = curves.lines(S), curves.irreducible_minus2(S)
    payload = {
        "name": S.name, "degree": S.degree,
        "K": both(S, canonical_class(S)),
        "lines": [both(S, c) for c in ls],
        "minus2": [both(S, c) for c in roots],
        "line_count": len(ls),
        "type": rep.label,
        "components": [{"type": c.type, "members": [both(S, m) for m in c.members]} for c in rep.components],
    }
    out = [f"{S.name}: degree {S.degree}, type {rep.label}, {len(ls)} line{'' if len(ls) == 1 else 's'}, "
           f"{len(roots)} (-2)-curve{'' if len(roots) == 1 else 's'}",
           f"K = {format_class(canonical_class(S, STRICT))} = {format_class(canonical_class(S))}",
           "lines:   " + ", ".join(format_class(change_basis(S, c, STRICT)) for c in ls),
           "(-2):    " + (", ".join(format_class(change_basis(S, c, STRICT)) for c in roots) or "none")]
    if args.vmrt:
        p, t = vmrt_payload(S, parse_pencil(S, args.vmrt))
        payload["vmrt"] = p
        out.append(t)
    emit(args, payload, "\n".join(out))
    return EXIT_OK


def cmd_vmrt(args) -> int:
    S = load_surface(args.config, args.corpus)
    p, t = vmrt_payload(S, parse_pencil(S, args.pencil))
    emit(args, p, t)
    return EXIT_OK


def _load_cert(S, ref, corpus):
    path = Path(ref)
    if not path.exists():
        cand = [p for p in certificate_paths(corpus) if p.stem == ref]
        if not cand:
            raise CorpusError(f"no certificate file {ref!r}")
        path = cand[0]
    try:
        return certify.certificate_from_dict(S, read_json(path))
    except (KeyError, TypeError, ValueError) as exc:
        raise InputError(f"{path}: malformed certificate ({exc!r})") from exc


def cmd_certify(args) -> int:
    S = load_surface(args.config, args.corpus)
    if args.action == "verify":
        cert = _load_cert(S, args.certificate, args.corpus)
        v = certify.verify(S, cert)
        payload = {"certificate": cert.name, "kind": cert.kind, "ok": v.ok, "reason": v.reason}
        emit(args, payload, f"{'ACCEPT' if v.ok else 'REJECT'} {cert.name} ({cert.kind}): {v.reason}")
        return EXIT_OK if v.ok else EXIT_FAIL
    cert = certify.search_certificate(S, args.mode)
    if cert is None:
        emit(args, {"surface": S.name, "mode": args.mode, "found": False},
             f"{S.name}: no {args.mode} certificate from the standard menu")
        return EXIT_FAIL
    data = certify.certificate_to_dict(S, cert)
    if args.out:
        Path(args.out).write_text(json.dumps(data, indent=2) + "\n", encoding="utf-8")
    summary = " + ".join(f"{t.coeff}*[{t.ptclass.label}]" for t in cert.terms)
    emit(args, {"surface": S.name, "mode": args.mode, "found": True, "certificate": data},
         f"{S.name}: found {args.mode} certificate\n  {summary}" + (f"\n  written to {args.out}" if args.out else ""))
    return EXIT_OK


def cmd_elliptic(args) -> int:
    if args.action == "enum":
        found = elliptic.enumerate_double_nonreduced(args.euler)
        labels = ["+".join(sorted(c.elements())) for c in found]
        emit(args, {"euler": args.euler, "double_nonreduced": labels},
             f"Euler sum {args.euler}: {len(labels)} multiset(s) with two or more non-reduced fibres"
             + "".join(f"\n  {s}" for s in labels))
        return EXIT_OK
    if args.fibers:
        try:
            assignments = [elliptic.FiberAssignment(tuple(args.fibers), args.multiple)]
        except ValueError as exc:
            raise InputError(str(exc)) from exc
    else:
        assignments = elliptic.enumerate_assignments(min_nonreduced=1)
    rows, text = [], []
    for a in assignments:
        ident = elliptic.elliptic_nonbig_identity(a)
        rows.append({"fibers": a.label, "k": ident.k, "identity": ident.render(), "strategy": ident.strategy})
        text.append(f"{a.label}: {ident.render()}")
    emit(args, {"identities": rows}, "\n".join(text))
    return EXIT_OK


def cmd_orbifold(args) -> int:
    S = load_surface(args.config, args.corpus)
    inv = orbifold.orbifold_invariants(S)
    emit(args, {"name": S.name, **inv.as_dict(), "positive_s2": inv.s2 > 0},
         f"{S.name}: c1^2 = {inv.c1sq}, c2 = {inv.c2}, s2 = {inv.s2}"
         + ("  (s2 > 0)" if inv.s2 > 0 else ""))
    return EXIT_OK


def cmd_hierarchy(args) -> int:
    rep = hierarchy.classification_report(args.degree, args.corpus, tuple(args.withhold or ()))
    lab = rep.labeling
    text = [f"hierarchy {rep.dag.name}: {len(lab.with_status(hierarchy.BIG))} Big, "
            f"{len(lab.with_status(hierarchy.NOT_BIG))} NotBig, "
            f"{len(lab.with_status(hierarchy.UNDETERMINED))} Undetermined"]
    for n in rep.dag.ids:
        chain = lab.chain(n)
        text.append(f"  {n:<12} {lab.status(n):<13} {chain[0] if chain else ''}")
    text += [f"  DISCREPANCY: {d}" for d in rep.discrepancies]
    emit(args, rep.as_dict(), "\n".join(text))
    return EXIT_OK if rep.ok else EXIT_FAIL


def run_suite(corpus=None) -> list[dict]:
    """Every corpus check as ``{"check", "ok", "detail"}``; input errors count as failures."""
    checks = []

    def record(name, fn):
        try:
            ok, detail = fn()
        except Exception as exc:  # noqa: BLE001 - the suite reports, it does not stop
            ok, detail = False, f"{type(exc).__name__}: {exc}"
        checks.append({"check": name, "ok": bool(ok), "detail": detail})

    for name in fixture_names(corpus):
        def fixture(name=name):
            S = load_surface(name, corpus)
            got = (len(curves.lines(S)), len(curves.irreducible_minus2(S)))
            want = EXPECTED_COUNTS.get(name)
            return (want is None or got == want), f"{got[0]} lines, {got[1]} (-2)-curves, type {curves.dynkin_type(S).label}"
        record(f"fixture {name}", fixture)
    for path in certificate_paths(corpus):
        def cert(path=path):
            data = read_json(path)
            S = load_surface(data["surface"], corpus)
            v = certify.verify(S, certify.certificate_from_dict(S, data))
            return v.ok, v.reason
        record(f"certificate {path.stem}", cert)
    for deg in (4, 3, "cross"):
        def classify(deg=deg):
            rep = hierarchy.classification_report(deg, corpus)
            return rep.ok, "; ".join(rep.discrepancies) or "matches the classification"
        record(f"classification {deg}", classify)

    def ell():
        double = elliptic.enumerate_double_nonreduced(12)
        ks = {elliptic.elliptic_nonbig_identity(a).k for a in elliptic.enumerate_assignments(1)}
        ok = [dict(c) for c in double] == [{"I0*": 2}] and ks <= {1, 2}
        return ok, f"double non-reduced: {[dict(c) for c in double]}, k values {sorted(ks)}"
    record("elliptic enumeration", ell)

    def orb():
        inv = orbifold.orbifold_invariants(load_surface("E6", corpus))
        ok = (inv.c1sq, inv.c2, inv.s2) == (3, Fraction(49, 24), Fraction(23, 24))
        return ok, f"E6: c1^2 = {inv.c1sq}, c2 = {inv.c2}, s2 = {inv.s2}"
    record("orbifold E6", orb)
    return checks


def cmd_suite(args) -> int:
    checks = run_suite(args.corpus)
    failed = [c for c in checks if not c["ok"]]
    text = [f"{'ok  ' if c['ok'] else 'FAIL'} {c['check']}: {c['detail']}" for c in checks]
    text.append(f"{len(checks) - len(failed)}/{len(checks)} checks passed")
    emit(args, {"checks": checks, "passed": len(checks) - len(failed), "failed": len(failed)}, "\n".join(text))
    return EXIT_FAIL if failed else EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    # global flags are accepted before or after the subcommand; SUPPRESS keeps the
    # subparser copies from overwriting a value given at the top level
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("text", "json"), default=argparse.SUPPRESS)
    common.add_argument("--corpus", default=argparse.SUPPRESS, help="corpus directory (configs/, certificates/)")
    p = argparse.ArgumentParser(prog="tangent-bigness",
                                description="Bigness certificates for tangent bundles of weak del Pezzo surfaces")
    p.add_argument("--format", choices=("text", "json"), default="text")
    p.add_argument("--corpus", default=None, help="corpus directory (configs/, certificates/)")
    sub = p.add_subparsers(dest="command", required=True)

    a = sub.add_parser("analyze", parents=[common], help="negative curves and Dynkin type")
    a.add_argument("config", help="config JSON path or fixture name")
    a.add_argument("--vmrt", metavar="PENCIL", help="also compute a VMRT: line:P, conic:A,B,C,D, from-line:CLASS")
    a.set_defaults(func=cmd_analyze)

    v = sub.add_parser("vmrt", parents=[common], help="fibres and dual VMRT class of a pencil")
    v.add_argument("config")
    v.add_argument("pencil")
    v.set_defaults(func=cmd_vmrt)

    c = sub.add_parser("certify", parents=[common], help="verify or search certificates")
    csub = c.add_subparsers(dest="action", required=True)
    cv = csub.add_parser("verify", parents=[common])
    cv.add_argument("config")
    cv.add_argument("certificate", help="certificate JSON path or corpus certificate name")
    cs = csub.add_parser("search", parents=[common])
    cs.add_argument("config")
    cs.add_argument("--mode", choices=(certify.BIG, certify.NONBIG), required=True)
    cs.add_argument("--out", help="write the certificate JSON here")
    c.set_defaults(func=cmd_certify)

    e = sub.add_parser("elliptic", parents=[common], help="Kodaira fibre bookkeeping")
    esub = e.add_subparsers(dest="action", required=True)
    ee = esub.add_parser("enum", parents=[common])
    ee.add_argument("--euler", type=int, default=12)
    ei = esub.add_parser("identity", parents=[common])
    ei.add_argument("fibers", nargs="*", help="fibre types, e.g. I0* I0*; default: every case")
    ei.add_argument("--multiple", type=int, default=1, help="multiplicity of a multiple fibre (Halphen)")
    e.set_defaults(func=cmd_elliptic)

    o = sub.add_parser("orbifold", parents=[common], help="orbifold Chern numbers of the anticanonical model")
    o.add_argument("config")
    o.set_defaults(func=cmd_orbifold)

    h = sub.add_parser("hierarchy", parents=[common], help="propagate facts over a hierarchy")
    hsub = h.add_subparsers(dest="action", required=True)
    hr = hsub.add_parser("report", parents=[common])
    hr.add_argument("--degree", choices=("3", "4", "cross"), required=True)
    hr.add_argument("--withhold", action="append", metavar="CERT", help="leave out a seed certificate")
    h.set_defaults(func=cmd_hierarchy)

    s = sub.add_parser("suite", parents=[common], help="check the whole corpus")
    s.set_defaults(func=cmd_suite)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (InputError, CorpusError, MalformedConfig, NotWeakDelPezzo, curves.NotADE,
            fibration.NotAPencil, fibration.NoIntegralSolution, certify.NoBlowDown) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
