"""Command line entry point: ``ikeda-periods verify|compute|oracle``."""

from __future__ import annotations

import argparse
import json
import logging
import sys
from fractions import Fraction
from pathlib import Path

from .kernel import format_scalar

DELIM = "-" * 72


def _matrix(text: str):
    """Parse a JSON matrix of entries of B (strings like "1/2" are allowed)."""
    from .qforms import HalfIntMat

    rows = json.loads(text)
    return HalfIntMat.from_entries([[Fraction(x) for x in row] for row in rows])


def _emit(obj) -> None:
    print(DELIM)
    print(json.dumps(obj, indent=1))
    print(DELIM)


# ---------------------------------------------------------------------------
# verify


def cmd_verify(args) -> int:
    from .verifier import CaseConfig, assemble_C, compute_parts, load_curated, render_figure, scale_invariance_suite

    data = load_curated(args.curated) if args.curated else None
    overrides = json.loads(Path(args.config).read_text()) if args.config else None
    cfg = CaseConfig.from_curated(args.case, args.embedding, data, overrides, args.allow_unverified)
    parts = compute_parts(cfg)
    C, rep = assemble_C(cfg, args.case, parts)
    if args.scale_suite:
        for name, ok in scale_invariance_suite(cfg, parts).items():
            rep.check(f"scale invariance: {name}", ok)
    print(rep.to_markdown())
    doc = rep.to_json()
    if args.report:
        Path(args.report).write_text(json.dumps(doc, indent=1) + "\n")
    if args.markdown:
        Path(args.markdown).write_text(rep.to_markdown())
    if args.figure:
        render_figure(rep, args.figure)
    _emit({"case": args.case, "embedding": args.embedding, "C": format_scalar(C), "passed": rep.passed})
    return 0 if rep.passed and all(c["ok"] for c in rep.checks) else 1


# ---------------------------------------------------------------------------
# compute


def cmd_compute(args) -> int:
    what = args.what
    if what == "fp":
        from .siegel_series import fp_polynomial

        F = fp_polynomial(_matrix(args.matrix), args.p)
        _emit({"p": F.p, "m": F.m, "coeffs": list(F.coeffs), "derivation": F.derivation})
    elif what == "eisenstein":
        from .eisenstein import fc_even_genus

        B = _matrix(args.matrix)
        if B.size != args.genus:
            raise SystemExit(f"matrix has size {B.size}, expected genus {args.genus}")
        _emit({"genus": args.genus, "weight": args.weight, "coefficient": format_scalar(fc_even_genus(B, args.weight))})
    elif what == "miyawaki":
        from .lifts import LiftContext, miyawaki_fc

        k = int(args.case.lstrip("k"))
        ctx = LiftContext.for_case(k, args.embedding)
        _emit({"case": args.case, "embedding": args.embedding,
               "coefficient": format_scalar(miyawaki_fc(_matrix(args.matrix), ctx))})
    elif what == "stdL":
        from .verifier import CaseConfig, compute_parts

        cfg = CaseConfig.from_curated(args.case, args.embedding)
        parts = compute_parts(cfg)
        _emit({"case": args.case, "embedding": args.embedding,
               "C(k; A_i, A)": [format_scalar(c) for c in parts["C(k; A_i, A)"]],
               "|c_F(A)|^2 L_alg(k-3, F, St)": format_scalar(parts["X"])})
    elif what == "heckeprod":
        from .modforms import eigenforms
        from .pullback import product_hecke_L

        fs = eigenforms(args.weight)
        f = fs[0] if args.embedding == "plus" or len(fs) == 1 else fs[1]
        v = product_hecke_L(args.l1, args.l2, f, [g.series for g in fs])
        _emit({"l1": args.l1, "l2": args.l2, "weight": args.weight, "embedding": args.embedding,
               "L_alg": format_scalar(v)})
    elif what == "eigenform":
        from .modforms import eigenforms

        out = []
        for f in eigenforms(args.weight, args.prec):
            out.append([format_scalar(c) for c in f.series.coeffs])
        _emit({"weight": args.weight, "eigenforms": out})
    return 0


# ---------------------------------------------------------------------------
# oracles


def cmd_oracle(args) -> int:
    if args.what == "e8":
        from .eisenstein import fc_even_genus, z_norm
        from .qforms import e8_pair_count, psd_matrices_by_trace

        Z = z_norm(2, 4)
        rows, ok = [], True
        for T in psd_matrices_by_trace(2, args.max_trace):
            a, b = fc_even_genus(T, 4) / Z, e8_pair_count(T)
            ok &= a == b
            rows.append({"T": T.to_json(), "eisenstein": str(a), "e8": b})
        _emit({"checked": len(rows), "all_equal": ok, "rows": rows})
        return 0 if ok else 1
    if args.what == "brute-siegel":
        from .siegel_series import b_p_polynomial, brute_bp

        B = _matrix(args.matrix)
        brute = brute_bp(B, args.p, args.level)
        engine = [str(c) for c in b_p_polynomial(B.two, args.p)]
        ok = all(Fraction(b) == (Fraction(engine[j]) if j < len(engine) else 0) for j, b in enumerate(brute))
        _emit({"brute": brute, "engine": engine, "agree": ok})
        return 0 if ok else 1
    if args.what == "sigma":
        from .eisenstein import e1_star, sigma

        E = e1_star(args.weight, args.upto)
        ok = all(E[m] == 2 * sigma(args.weight - 1, m) for m in range(1, args.upto + 1))
        _emit({"weight": args.weight, "upto": args.upto, "agree": ok})
        return 0 if ok else 1
    return 2


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="ikeda-periods", description=__doc__)
    p.add_argument("-v", "--verbose", action="store_true")
    sub = p.add_subparsers(dest="command", required=True)

    v = sub.add_parser("verify", help="assemble C_{h,g} for a case")
    v.add_argument("--case", choices=["k10", "k14"], required=True)
    v.add_argument("--embedding", choices=["plus", "minus"], default="plus")
    v.add_argument("--report", help="write the JSON report here")
    v.add_argument("--markdown", help="write the markdown report here")
    v.add_argument("--figure", help="write a PNG of the assembly factors here")
    v.add_argument("--curated", help="alternative curated-values JSON file")
    v.add_argument("--config", help="JSON overrides {name: {value, provenance}}")
    v.add_argument("--allow-unverified", action="store_true", help="accept overrides without provenance")
    v.add_argument("--scale-suite", action="store_true", help="also run the scale-invariance checks")
    v.set_defaults(func=cmd_verify)

    c = sub.add_parser("compute", help="compute one ingredient")
    c.add_argument("what", choices=["fp", "eisenstein", "miyawaki", "stdL", "heckeprod", "eigenform"])
    c.add_argument("--matrix", help='JSON matrix of entries, e.g. "[[1, \\"1/2\\"], [\\"1/2\\", 1]]"')
    c.add_argument("--p", type=int)
    c.add_argument("--genus", type=int)
    c.add_argument("--weight", type=int)
    c.add_argument("--case", choices=["k10", "k14"])
    c.add_argument("--embedding", choices=["plus", "minus"], default="plus")
    c.add_argument("--l1", type=int)
    c.add_argument("--l2", type=int)
    c.add_argument("--prec", type=int, default=20)
    c.set_defaults(func=cmd_compute)

    o = sub.add_parser("oracle", help="run an independent check")
    o.add_argument("what", choices=["e8", "brute-siegel", "sigma"])
    o.add_argument("--max-trace", type=int, default=4)
    o.add_argument("--matrix")
    o.add_argument("--p", type=int, default=2)
    o.add_argument("--level", type=int, default=2)
    o.add_argument("--weight", type=int, default=4)
    o.add_argument("--upto", type=int, default=50)
    o.set_defaults(func=cmd_oracle)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(levelname)s %(name)s: %(message)s")
    try:
        return args.func(args)
    except (ValueError, ArithmeticError, KeyError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
