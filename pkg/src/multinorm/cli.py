"""Command line interface.

Exit codes: 0 success, 2 unreadable or malformed input (with its location),
3 input that violates a mathematical precondition (the named check is
printed), 4 an internal verification failed, including any failing
certificate in a sweep.
"""

from __future__ import annotations

import argparse
import json
import logging
import os
import sys

from . import documents
from .errors import InputError, InternalCheckError, InvariantViolation, StructureError
from .obstruction import (
    intersection_obstruction_order, phi_report, second_obstruction_bound,
    sha_abelian, theorem1_certificate,
)
from .wedge import exterior_square

log = logging.getLogger("multinorm")

EXIT_OK, EXIT_INPUT, EXIT_INVARIANT, EXIT_INTERNAL = 0, 2, 3, 4
HOLDS = "trivial — multinorm principle holds"


def _emit(args, text_lines, payload):
    if args.format == "json":
        print(json.dumps(payload, sort_keys=True, ensure_ascii=False))
    else:
        for line in text_lines:
            print(line)


def _group_json(G):
    return {"invariant_factors": list(G.invariant_factors), "order": G.order, "text": str(G)}


def cmd_wedge(args):
    arg = args.group
    if os.path.exists(arg):
        G = documents.parse_group(documents._Cursor(documents.load(arg), f"{arg}:$"))
    else:
        G = documents.parse_group(documents._Cursor(arg, "argument"))
    W, basis, _ = exterior_square(G)
    _emit(args, [str(W)], {"group": _group_json(G), "wedge": _group_json(W)})
    return EXIT_OK


def cmd_sha(args):
    job = documents.parse_sha_input(documents.load(args.file), f"{args.file}:$")
    sha = sha_abelian(job.group, job.family)
    lines = [str(sha)]
    payload = {"sha": _group_json(sha), "galois_group": _group_json(job.group),
               "places": len(job.family)}
    if job.field is not None:
        payload["field"] = job.field.to_json()
    if args.verbose:
        lines.insert(0, f"G = {job.group}")
        for lab, v in zip(job.family.labels or (), job.family.places):
            lines.insert(-1, f"  place {lab}: decomposition group {v.abstract}")
        payload["family"] = [
            {"label": lab, "decomposition": str(v.abstract), **v.to_json()}
            for lab, v in zip(job.family.labels or (), job.family.places)]
    _emit(args, lines, payload)
    return EXIT_OK


def _pair(args):
    return documents.parse_pair_input(documents.load(args.file), f"{args.file}:$")


def cmd_multinorm(args):
    job = _pair(args)
    T, F = job.tower, job.family
    cert = theorem1_certificate(T, F)
    if not cert.verdict:
        raise InternalCheckError(cert.failed[0], "certificate failed: " + ", ".join(cert.failed))
    sha = cert.shaE
    main = HOLDS if sha.is_trivial() else str(sha)
    lines = [main, f"coker(g) = {cert.cokerT} (cross-check: isomorphic to Sha(E))"]
    _emit(args, lines, {"sha_E": _group_json(sha), "coker_g": _group_json(cert.cokerT),
                        "multinorm_principle_holds": sha.is_trivial(),
                        "cross_check": True})
    return EXIT_OK


def cmd_certificate(args):
    job = _pair(args)
    cert = theorem1_certificate(job.tower, job.family)
    lines = [
        f"G = {job.tower.G}, G1 = {job.tower.G1}, G2 = {job.tower.G2}, GE = {job.tower.GE}",
        f"Sha(L) = {cert.sha_L}",
        f"Sha(L1) = {cert.sha_L1}",
        f"Sha(L2) = {cert.sha_L2}",
        f"coker(g) = {cert.cokerT}",
        f"Sha(E) = {cert.shaE}",
        f"coker(T0) = {cert.cokerT0}",
    ]
    lines.append(f"P matrix = {[list(r) for r in cert.mapP.matrix] if cert.mapP else None}")
    lines.append(f"S matrix = {[list(r) for r in cert.mapS.matrix] if cert.mapS else None}")
    for name, ok in cert.checks.items():
        lines.append(f"check {name}: {'pass' if ok else 'FAIL'}")
    lines.append(f"verdict: {'true' if cert.verdict else 'false'}")
    _emit(args, lines, cert.to_json())
    return EXIT_OK if cert.verdict else EXIT_INTERNAL


def cmd_intersection(args):
    job = _pair(args)
    n = intersection_obstruction_order(job.tower, job.family)
    _emit(args, [str(n)], {"intersection_obstruction_order": n,
                           "intersection_principle_holds": n == 1})
    return EXIT_OK


def _cayley(args):
    return documents.parse_cayley_pair(documents.load(args.file), f"{args.file}:$")


def cmd_bound(args):
    job = _cayley(args)
    bound = second_obstruction_bound(job.group, job.n1, job.n2)
    rep = phi_report(job.group, job.n1, job.n2)
    lines = [f"second obstruction bound: {bound}",
             f"phi injective: {'true' if rep.injective else 'false'}"]
    _emit(args, lines, {"second_obstruction_bound": bound, "phi_injective": rep.injective})
    return EXIT_OK


def cmd_phi(args):
    job = _cayley(args)
    G = job.group
    rep = phi_report(G, job.n1, job.n2)
    lines = [f"phi injective: {'true' if rep.injective else 'false'}",
             f"H^ab = {rep.H_ab}", f"G^ab = {rep.G_ab}",
             f"ker(H^ab -> G^ab) = {rep.kernel.abstract}"]
    if rep.witnesses:
        lines.append("kernel witnesses: " + ", ".join(G.name(w) for w in rep.witnesses))
    if job.names:
        s, t = job.names["sigma"], job.names["tau"]
        c = G.commutator(s, t)
        lines.append(f"[sigma, tau] = {G.name(c)} (in kernel: {c in rep.witnesses})")
    _emit(args, lines, {
        "phi_injective": rep.injective, "H_ab": _group_json(rep.H_ab),
        "G_ab": _group_json(rep.G_ab), "kernel": _group_json(rep.kernel.abstract),
        "witnesses": [G.name(w) for w in rep.witnesses]})
    return EXIT_OK


def cmd_sweep(args):
    from .report import ReportWriter
    from .sweep import run_sweep

    writer = ReportWriter(args.report_dir) if args.report_dir else None

    def progress(G, towers):
        log.info("done G = %s, towers so far %d", G, towers)

    rep = run_sweep(args.max_order, args.families, args.seed, keep_records=False,
                    progress=progress, on_record=writer.add if writer else None)
    paths = writer.close() if writer else {}
    lines = [f"towers: {rep.towers}", f"certificates: {rep.certificates}",
             f"failures: {len(rep.failures)}"]
    for r in rep.failures[:20]:
        lines.append(f"  FAIL G={r.group} |N1|={r.n1_order} |N2|={r.n2_order} "
                     f"family={r.family} failed={','.join(r.failed)}")
    for k, p in paths.items():
        lines.append(f"{k}: {p}")
    _emit(args, lines, {"towers": rep.towers, "certificates": rep.certificates,
                        "failures": len(rep.failures), "ok": rep.ok,
                        "max_order": rep.max_order, "families": rep.families,
                        "seed": rep.seed, "files": paths})
    if not rep.ok:
        print(f"internal check failed: sweep found {len(rep.failures)} failing certificates",
              file=sys.stderr)
    return EXIT_OK if rep.ok else EXIT_INTERNAL


def build_parser():
    p = argparse.ArgumentParser(
        prog="multinorm",
        description="Norm principle obstructions for abelian extensions.")
    p.add_argument("--format", choices=("text", "json"), default="text")
    p.add_argument("-v", "--verbose", action="store_true")
    # the same options are accepted after the subcommand name
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("text", "json"), default=argparse.SUPPRESS)
    common.add_argument("-v", "--verbose", action="store_true", default=argparse.SUPPRESS)
    sub = p.add_subparsers(dest="command", required=True)

    def add(name, fn, help_, arg=None, arg_help=None):
        sp = sub.add_parser(name, help=help_, parents=[common])
        if arg:
            sp.add_argument(arg, help=arg_help)
        sp.set_defaults(func=fn)
        return sp

    add("sha", cmd_sha, "obstruction to the Hasse norm principle", "file",
        "field or group document (JSON)")
    add("multinorm", cmd_multinorm, "multinorm obstruction of a pair", "file",
        "pair document (JSON)")
    add("certificate", cmd_certificate, "full certificate for a pair", "file",
        "pair document (JSON)")
    add("intersection", cmd_intersection, "order of the intersection obstruction", "file",
        "pair document (JSON)")
    add("bound", cmd_bound, "second obstruction bound and phi verdict", "file",
        "Cayley pair document (JSON)")
    add("phi", cmd_phi, "kernel of H^ab -> G^ab with witnesses", "file",
        "Cayley pair document (JSON)")
    add("wedge", cmd_wedge, "exterior square of an abelian group", "group",
        'invariant factors such as "2,2", or a group document')
    sw = add("sweep", cmd_sweep, "exhaustive certificate sweep over small groups")
    sw.add_argument("--max-order", type=int, default=32)
    sw.add_argument("--families", type=int, default=25)
    sw.add_argument("--seed", type=int, default=0)
    sw.add_argument("--report-dir", default=None,
                    help="write sweep.csv, summary.csv and sweep.png here")
    return p


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s: %(message)s", stream=sys.stderr)
    try:
        return args.func(args)
    except InputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except InvariantViolation as exc:
        print(f"invariant violated: {exc.check}: {exc}", file=sys.stderr)
        return EXIT_INVARIANT
    except InternalCheckError as exc:
        print(f"internal check failed: {exc.check}: {exc}", file=sys.stderr)
        return EXIT_INTERNAL
    except StructureError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
