"""Command-line front end.

Commands: certify, h0, chern, lattice (pair | gram | genus | effectivity |
expected-dim | rigid-classes), quartic-run, count-points, picard-bound,
verify.  Documents are JSON with fixed field names; output is byte-stable
for fixed inputs and options.

Exit codes: 0 success, 1 input/usage errors, 2 Inconclusive or Unknown
verdicts.
"""
from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction

from . import k3lat
from .cohom import h0_exterior, h0_homology
from .errors import BundleCertError
from .monad import (
    KERNEL,
    chern_monad,
    monad_from_document,
    validate,
)
from .polycore import Ambient, parse_poly
from .stability import (
    CertifyOptions,
    Polarization,
    certify,
    pullback_transfer,
    verify_certificate,
)

EXIT_OK = 0
EXIT_ERROR = 1
EXIT_INCONCLUSIVE = 2


def _load_json(path: str) -> dict:
    with open(path, "r", encoding="utf-8") as fh:
        return json.load(fh)


def _emit(text: str, out: str | None):
    if out:
        with open(out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _parse_twist(text: str) -> tuple:
    return tuple(int(x) for x in text.split(","))


def _parse_point(text: str) -> tuple:
    a, b = text.split(":")
    return (int(a), int(b))


def _monad_and_ambient(path: str):
    doc = _load_json(path)
    return monad_from_document(doc), doc


def _surface_poly(path: str):
    doc = _load_json(path)
    amb = Ambient.product_projective(1, 1)
    return parse_poly(doc["polynomial"], amb), doc


def cmd_certify(args) -> int:
    m, _ = _monad_and_ambient(args.monad)
    H = Polarization(m.ambient, _parse_twist(args.polarization))
    opts = CertifyOptions(
        fiber_points=(_parse_point(args.fiber_point), _parse_point(args.fiber_point)),
        margin=args.margin,
    )
    cert = certify(m, H, opts)
    if args.format == "json" or args.out:
        _emit(cert.to_json(), args.out)
    if args.format == "text":
        lines = [
            f"bundle: {cert.bundle}",
            f"chern: rank {cert.chern.rank}, c1 {list(cert.chern.c1)}, c2 {cert.chern.c2}",
            f"slope: {cert.slope}",
            f"core checks: {len(cert.core_checks)}, tail rules: {len(cert.tail_rules)}",
            f"verdict: {cert.verdict}",
        ]
        if cert.failure:
            lines.append(f"failure: {json.dumps(cert.failure, sort_keys=True)}")
        sys.stdout.write("\n".join(lines) + "\n")
    return EXIT_OK if cert.verdict == "Stable" else EXIT_INCONCLUSIVE


def cmd_h0(args) -> int:
    m, _ = _monad_and_ambient(args.monad)
    L = _parse_twist(args.twist)
    if m.kind == KERNEL:
        res = h0_exterior(m, args.exterior, L)
    else:
        if args.exterior != 1:
            raise BundleCertError("homology monads support --exterior 1 only")
        res = h0_homology(m, L)
    if res.exact:
        sys.stdout.write(f"{res.value}\n")
    else:
        sys.stdout.write(f"[{res.lo}, {res.hi}]\n")
    return EXIT_OK


def cmd_chern(args) -> int:
    m, _ = _monad_and_ambient(args.monad)
    c = chern_monad(m)
    doc = {"rank": c.rank, "c1": list(c.c1), "c2": c.c2}
    if args.cover == "double":
        cc = k3lat.pullback_chern(c)
        doc["cover"] = {
            "rank": cc.rank,
            "c1": f"pullback of O({list(cc.c1)})",
            "c2": cc.c2,
        }
    _emit(json.dumps(doc, sort_keys=True, indent=2) + "\n", args.out)
    return EXIT_OK


def _lattice_from_args(args) -> k3lat.GramLattice:
    catalogue = {
        "U": k3lat.U,
        "U2": k3lat.U2,
        "double-plane": k3lat.DOUBLE_PLANE,
        "quartic-452": k3lat.QUARTIC_452,
        "E8-minus": k3lat.E8_MINUS,
    }
    if args.lattice in catalogue:
        return catalogue[args.lattice]
    doc = _load_json(args.lattice)
    return k3lat.GramLattice(tuple(doc["names"]), tuple(tuple(r) for r in doc["gram"]))


def cmd_lattice(args) -> int:
    lat = _lattice_from_args(args)
    sub = args.lattice_cmd
    out = {}
    if sub == "pair":
        D1 = lat.cls(_parse_twist(args.classes[0]))
        D2 = lat.cls(_parse_twist(args.classes[1]))
        out = {"pair": k3lat.pair(D1, D2)}
    elif sub == "genus":
        D = lat.cls(_parse_twist(args.classes[0]))
        out = {"self_intersection": k3lat.self_int(D), "genus": k3lat.genus(D)}
    elif sub == "gram":
        classes = [lat.cls(_parse_twist(c)) for c in args.classes]
        mat, det = k3lat.gram_of(classes)
        out = {"gram": [list(r) for r in mat], "det": det}
        if det == 0:
            try:
                out["dependency"] = list(k3lat.dependency(classes))
            except ValueError:
                pass
    elif sub == "effectivity":
        D = lat.cls(_parse_twist(args.classes[0]))
        H = lat.cls(_parse_twist(args.classes[1]))
        cert = k3lat.not_effective_cert(D, H)
        if cert is None:
            out = {"verdict": "Unknown"}
        else:
            out = {
                "verdict": "NotEffective",
                "rule": cert.rule,
                "degree": cert.degree,
                "candidates": [list(c[0]) for c in cert.candidates],
            }
    elif sub == "expected-dim":
        out = {"expected_dim": k3lat.expected_dim(args.rank, args.c1sq, args.c2)}
    elif sub == "rigid-classes":
        x, y = k3lat.rigid_rank2_classes(args.k)
        out = {"c1": x, "c2": y}
    _emit(json.dumps(out, sort_keys=True, indent=2) + "\n", args.out)
    if out.get("verdict") == "Unknown":
        return EXIT_INCONCLUSIVE
    return EXIT_OK


def cmd_quartic_run(args) -> int:
    doc = _load_json(args.surface)
    cert = k3lat.quartic_region_run(doc["surface"], tuple(doc.get("map", ("x", "y", "w"))))
    _emit(cert.to_json(), args.out)
    return EXIT_OK if cert.verdict == "Stable" else EXIT_INCONCLUSIVE


def cmd_count_points(args) -> int:
    from .zeta import count_points

    f, _ = _surface_poly(args.surface)
    lines = []
    for n in range(1, args.max_n + 1):
        N = count_points(f, args.prime, n, threads=args.threads)
        q = args.prime ** n
        t = N - 1 - q * q
        lines.append(f"{n}, {q}, {N}, {t}")
    _emit("\n".join(lines) + "\n", args.out)
    return EXIT_OK


def cmd_picard_bound(args) -> int:
    from .zeta import run_picard_bound

    f, _ = _surface_poly(args.surface)
    result = run_picard_bound(
        f, args.prime, max_n=args.max_n, threads=args.threads, k_alg=args.k_alg
    )
    _emit(json.dumps(result, sort_keys=True, indent=2) + "\n", args.out)
    return EXIT_OK


def cmd_verify(args) -> int:
    doc = _load_json(args.certificate)
    schema = doc.get("schema", "")
    if schema.startswith("stability-certificate"):
        problems = verify_certificate(doc)
    elif schema.startswith("quartic-certificate"):
        cert = k3lat.quartic_region_run(doc["surface"])
        problems = []
        if cert.to_document() != doc:
            problems = ["quartic certificate does not reproduce byte-identically"]
    else:
        sys.stdout.write(f"unknown certificate schema {schema!r}\n")
        return EXIT_ERROR
    if problems:
        sys.stdout.write("verification FAILED:\n" + "\n".join(problems) + "\n")
        return EXIT_ERROR
    sys.stdout.write("certificate verified: all recorded dimensions recompute identically\n")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="bundlecert")
    sub = ap.add_subparsers(dest="command", required=True)

    def add_common(p):
        p.add_argument("--out", default=None, help="write the main artifact to this path")
        p.add_argument("--format", choices=("text", "json"), default="text")

    p = sub.add_parser("certify", help="stability certificate for a monad bundle")
    p.add_argument("--monad", required=True)
    p.add_argument("--polarization", required=True, help='e.g. "1" on P2 or "1,1"')
    p.add_argument("--fiber-point", default="0:1")
    p.add_argument("--margin", type=int, default=None)
    add_common(p)
    p.set_defaults(fn=cmd_certify)

    p = sub.add_parser("h0", help="h^0 of (an exterior power of) a monad bundle")
    p.add_argument("--monad", required=True)
    p.add_argument("--twist", required=True, help='"k" or "k,l"')
    p.add_argument("--exterior", type=int, default=1)
    add_common(p)
    p.set_defaults(fn=cmd_h0)

    p = sub.add_parser("chern", help="Chern data of a monad bundle")
    p.add_argument("--monad", required=True)
    p.add_argument("--cover", choices=("none", "double"), default="none")
    add_common(p)
    p.set_defaults(fn=cmd_chern)

    p = sub.add_parser("lattice", help="intersection-lattice computations")
    p.add_argument("lattice_cmd", choices=(
        "pair", "gram", "genus", "effectivity", "expected-dim", "rigid-classes"))
    p.add_argument("--lattice", default="quartic-452",
                   help="catalogue name (U, U2, double-plane, quartic-452, E8-minus) or a JSON file")
    p.add_argument("--class", dest="classes", action="append", default=[],
                   help='class coordinates, e.g. "1,0" (repeatable)')
    p.add_argument("--rank", type=int, default=2)
    p.add_argument("--c1sq", type=int, default=0)
    p.add_argument("--c2", type=int, default=0)
    p.add_argument("--k", type=int, default=0)
    add_common(p)
    p.set_defaults(fn=cmd_lattice)

    p = sub.add_parser("quartic-run", help="stability pipeline on the quartic surface")
    p.add_argument("--surface", required=True, help="JSON with the quartic and the section map")
    add_common(p)
    p.set_defaults(fn=cmd_quartic_run)

    p = sub.add_parser("count-points", help="point counts of the branched double cover")
    p.add_argument("--surface", required=True, help="JSON with the (4,4) branch curve")
    p.add_argument("--prime", type=int, required=True)
    p.add_argument("--max-n", type=int, default=9)
    p.add_argument("--threads", type=int, default=1)
    add_common(p)
    p.set_defaults(fn=cmd_count_points)

    p = sub.add_parser("picard-bound", help="geometric Picard-rank upper bound")
    p.add_argument("--surface", required=True)
    p.add_argument("--prime", type=int, required=True)
    p.add_argument("--max-n", type=int, default=9)
    p.add_argument("--threads", type=int, default=1)
    p.add_argument("--k-alg", type=int, default=2)
    add_common(p)
    p.set_defaults(fn=cmd_picard_bound)

    p = sub.add_parser("verify", help="replay a certificate document")
    p.add_argument("certificate")
    add_common(p)
    p.set_defaults(fn=cmd_verify)

    return ap


def main(argv=None) -> int:
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as e:
        return EXIT_ERROR if e.code else EXIT_OK
    try:
        return args.fn(args)
    except BundleCertError as e:
        sys.stderr.write(f"error: {e}\n")
        return EXIT_ERROR
    except (OSError, json.JSONDecodeError, KeyError, ValueError) as e:
        sys.stderr.write(f"input error: {e}\n")
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
