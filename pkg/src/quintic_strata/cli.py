"""Command-line front end.

Every command prints one JSON object (keys sorted) on standard output.
Exit status: 0 success, 1 domain error, 2 usage or parse error.
"""
from __future__ import annotations

import argparse
import json
import re
import sys
from typing import List, Optional

from .cohomology import CohomologyError, h0_twist, h1_twist, signature
from .document import MatrixDocument, parse, to_text
from .forms import ParseError
from .gallery import GalleryError, sample_stratum
from .graded import GradingError, determinant, dual_resolution, hilbert, minimize
from .linalg import QQ, parse_field
from .strata import (KRONECKER_CHECKS, ModuliSpace, StrataError, audit, classify,
                     kronecker_moduli_dimension, normalize_sublabel, oracle_compare, worker_count)

EXIT_OK, EXIT_DOMAIN, EXIT_USAGE = 0, 1, 2


class UsageError(Exception):
    pass


class DomainError(Exception):
    def __init__(self, msg: str, payload: Optional[dict] = None):
        super().__init__(msg)
        self.payload = payload


def _emit(obj) -> None:
    sys.stdout.write(json.dumps(obj, sort_keys=True, indent=2, ensure_ascii=False) + "\n")


def _read(path: str, field=QQ) -> MatrixDocument:
    try:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc.strerror}") from None
    try:
        return parse(text, field)
    except ParseError as exc:
        raise UsageError(f"{path}: {exc}") from None


def _space(text: Optional[str]) -> Optional[ModuliSpace]:
    if text is None:
        return None
    try:
        return ModuliSpace.parse(text)
    except StrataError as exc:
        raise UsageError(str(exc)) from None


def _field(text: str):
    try:
        return parse_field(text)
    except ValueError as exc:
        raise UsageError(str(exc)) from None


def _hilbert_dict(hd):
    s = hd.slope
    return {"chi": hd.chi, "r": hd.r, "slope": f"{s.numerator}/{s.denominator}"}


def _injective(doc: MatrixDocument):
    phi = doc.morphism()
    if not phi.is_square:
        raise DomainError("presentation is not square")
    det = determinant(phi)
    if det.is_zero():
        raise DomainError("presentation is not injective (determinant 0)",
                          {"determinant": "0", "label": "NotInjective"})
    return phi, det


# ---------------------------------------------------------------------------
# commands
# ---------------------------------------------------------------------------

def cmd_classify(args) -> int:
    doc = _read(args.file, _field(args.field))
    space = _space(args.space)
    if space is None and doc.space is not None:
        space = ModuliSpace(doc.space)
    report = classify(doc.morphism(), space)
    _emit(report.as_dict())
    return EXIT_OK if report.in_stratum else EXIT_DOMAIN


def _twist_range(text: str):
    m = re.fullmatch(r"(-?\d+)\.\.(-?\d+)", text.strip())
    if not m:
        raise UsageError(f"--twists expects M..N, got {text!r}")
    lo, hi = int(m.group(1)), int(m.group(2))
    if lo > hi:
        raise UsageError("--twists needs M <= N")
    return range(lo, hi + 1)


def cmd_cohom(args) -> int:
    twists = _twist_range(args.twists)
    doc = _read(args.file, _field(args.field))
    phi, det = _injective(doc)
    phi = minimize(phi)
    hd = hilbert(phi)
    rows = [{"h0": h0_twist(phi, m, False), "h1": h1_twist(phi, m, False), "m": m} for m in twists]
    sig = signature(phi, False)
    _emit({"cohomology": rows, "determinant": det.to_text(), "hilbert": _hilbert_dict(hd),
           "signature": sig.as_dict(), "space": f"M(5,{hd.chi})" if hd.r == 5 else None,
           "warnings": []})
    return EXIT_OK


def cmd_det(args) -> int:
    doc = _read(args.file, _field(args.field))
    phi = doc.morphism()
    if not phi.is_square:
        raise DomainError("determinant of a non-square presentation")
    det = determinant(phi)
    _emit({"degree": sum(phi.target) - sum(phi.source), "determinant": det.to_text(),
           "injective": not det.is_zero()})
    return EXIT_OK


def cmd_dualize(args) -> int:
    doc = _read(args.file, _field(args.field))
    phi, _ = _injective(doc)
    g = dual_resolution(phi, args.twist)
    hd = hilbert(g)
    out = MatrixDocument.from_morphism(g, hd.chi if hd.r == 5 else None)
    _emit({"document": to_text(out), "hilbert": _hilbert_dict(hd),
           "space": f"M(5,{hd.chi})" if hd.r == 5 else None, "twist": args.twist, "warnings": []})
    return EXIT_OK


def cmd_sample(args) -> int:
    space = _space(args.space)
    F = _field(args.field)
    try:
        sub = normalize_sublabel(args.sublabel)
    except StrataError as exc:
        raise UsageError(str(exc)) from None
    try:
        phi = sample_stratum(space, args.stratum, sub, args.seed, F)
    except GalleryError as exc:
        raise DomainError(str(exc)) from None
    rep = classify(phi, space)
    doc = MatrixDocument.from_morphism(phi, space.chi)
    _emit({"document": to_text(doc), "field": F.tag(), "label": rep.label, "seed": args.seed,
           "space": str(space), "sublabel": rep.sublabel, "warnings": rep.warnings})
    return EXIT_OK


def cmd_audit(args) -> int:
    space = _space(args.space)
    if space is not None and space.chi not in (0, 1, 3):
        raise DomainError(f"no audit rows for {space}; audited spaces are M(5,0), M(5,1), M(5,3)")
    try:
        rows = audit(space, args.samples, args.seed, worker_count())
    except StrataError as exc:
        raise DomainError(str(exc)) from None
    kron = []
    for n, a, b, expected in KRONECKER_CHECKS:
        d = kronecker_moduli_dimension(n, a, b)
        kron.append({"a": a, "b": b, "dim": d, "expected": expected, "n": n, "ok": d == expected})
    ok = all(r.ok for r in rows) and all(k["ok"] for k in kron)
    _emit({"kronecker": kron, "ok": ok, "rows": [r.as_dict() for r in rows]})
    return EXIT_OK if ok else EXIT_DOMAIN


def cmd_oracle(args) -> int:
    space = _space(args.space)
    if args.trials < 1:
        raise UsageError("--trials must be positive")
    try:
        res = oracle_compare(space, args.stratum, args.trials, args.prime, args.seed, worker_count())
    except StrataError as exc:
        raise DomainError(str(exc)) from None
    _emit(res.as_dict())
    return EXIT_OK if res.ok else EXIT_DOMAIN


# ---------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="quintic-strata",
                                description="Strata of moduli of plane sheaves of multiplicity 5.")
    sub = p.add_subparsers(dest="command", required=True)

    def with_field(sp):
        sp.add_argument("--field", default="q", help="q or fp:P (default q)")

    c = sub.add_parser("classify", help="stratum of the cokernel")
    c.add_argument("file")
    c.add_argument("--space", help="M(5,C); defaults to the file's space line or the Euler characteristic")
    with_field(c)
    c.set_defaults(fn=cmd_classify)

    c = sub.add_parser("cohom", help="h0 and h1 of twists of the cokernel")
    c.add_argument("file")
    c.add_argument("--twists", required=True, help="range M..N")
    with_field(c)
    c.set_defaults(fn=cmd_cohom)

    c = sub.add_parser("det", help="determinant of the presentation")
    c.add_argument("file")
    with_field(c)
    c.set_defaults(fn=cmd_det)

    c = sub.add_parser("dualize", help="presentation of the dual sheaf twisted by K")
    c.add_argument("file")
    c.add_argument("--twist", type=int, required=True)
    with_field(c)
    c.set_defaults(fn=cmd_dualize)

    c = sub.add_parser("sample", help="seeded sample of a stratum")
    c.add_argument("--space", required=True)
    c.add_argument("--stratum", required=True, choices=["X0", "X1", "X2", "X3"])
    c.add_argument("--sublabel")
    c.add_argument("--seed", type=int, required=True)
    with_field(c)
    c.set_defaults(fn=cmd_sample)

    c = sub.add_parser("audit", help="dimension audit of the catalogue")
    c.add_argument("--space")
    c.add_argument("--samples", type=int, default=20)
    c.add_argument("--seed", type=int, default=0)
    c.set_defaults(fn=cmd_audit)

    c = sub.add_parser("oracle-compare", help="closed forms against finite-field enumeration")
    c.add_argument("--space", required=True)
    c.add_argument("--stratum", required=True)
    c.add_argument("--trials", type=int, default=1000)
    c.add_argument("--prime", type=int, default=5)
    c.add_argument("--seed", type=int, default=0)
    c.set_defaults(fn=cmd_oracle)
    return p


def _glue_negative(argv: List[str]) -> List[str]:
    """Let ``--twists -1..1`` through argparse, which reads -1..1 as an option."""
    out = []
    i = 0
    while i < len(argv):
        a = argv[i]
        if a in ("--twists", "--twist") and i + 1 < len(argv) and argv[i + 1].startswith("-"):
            out.append(f"{a}={argv[i + 1]}")
            i += 2
            continue
        out.append(a)
        i += 1
    return out


def main(argv: Optional[List[str]] = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    try:
        args = parser.parse_args(_glue_negative(argv))
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK
    try:
        return args.fn(args)
    except UsageError as exc:
        print(f"quintic-strata: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (GradingError, ParseError) as exc:
        print(f"quintic-strata: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (DomainError, CohomologyError, StrataError) as exc:
        payload = {"error": str(exc)}
        payload.update(getattr(exc, "payload", None) or {})
        _emit(payload)
        return EXIT_DOMAIN


if __name__ == "__main__":
    sys.exit(main())
