"""Command-line front end.

Every subcommand prints one JSON document (schema 1) or, with --format table,
a short plain-text rendering. Exit codes: 0 success, 2 parse error, 3 a
mathematical domain error, whose class name is reported.
"""
from __future__ import annotations

import argparse
import json
import random
import sys
from typing import Dict, List, Optional, Sequence, TextIO

from .errors import MathDomainError, ParseError

SCHEMA = 1


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise ParseError(message)


def _add_input(p: argparse.ArgumentParser, ring_flags: Sequence[str] = ("--ring",)):
    p.add_argument("-i", "--input", help="presentation file")
    p.add_argument("--decl", action="append", default=[], help="inline declaration line (repeatable)")
    for flag in ring_flags:
        p.add_argument(flag, help="ring name from the presentation")
    p.add_argument("--over", help="base ring name (default: the coefficient ring)")


def build_parser() -> argparse.ArgumentParser:
    top = _Parser(prog="simpcomm", description="Exact simplicial commutative algebra at desk scale.")
    top.add_argument("--format", choices=["json", "table"], default="json")
    top.add_argument("--threads", type=int, default=1, help="accepted for compatibility; work is single-threaded")
    sub = top.add_subparsers(dest="command", parser_class=_Parser)
    sub.required = True

    p = sub.add_parser("cotangent", help="cotangent complex truncation")
    _add_input(p)
    p.add_argument("--deg", type=int, default=2)
    p.add_argument("--seed", type=int, default=0)

    p = sub.add_parser("aq", help="André-Quillen (co)homology in one degree")
    _add_input(p)
    p.add_argument("--deg", type=int, default=1)
    p.add_argument("--module", choices=["B", "k"], default="B")
    p.add_argument("--cohomology", action="store_true")

    for name in ("tor", "derived-tensor"):
        p = sub.add_parser(name, help="Tor groups" if name == "tor" else "homotopy of the derived tensor product")
        _add_input(p, ("--left", "--right"))
        p.add_argument("--deg", type=int, default=3)

    p = sub.add_parser("dold-kan", help="Dold-Kan roundtrip on random complexes")
    p.add_argument("--roundtrip", action="store_true", required=True)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--trials", type=int, default=100)
    p.add_argument("--p", type=int, default=5)
    p.add_argument("--N", type=int, default=4)

    p = sub.add_parser("resolve", help="free simplicial resolution certificate")
    _add_input(p)
    p.add_argument("--levels", type=int, default=3)
    p.add_argument("--seed", type=int, default=0)

    p = sub.add_parser("extensions", help="classify square-zero extensions by B-module k")
    _add_input(p)

    p = sub.add_parser("obstruction", help="deformation obstruction over a square-zero thickening")
    _add_input(p)
    p.add_argument("--ideal", action="append", required=True, help="generator of the square-zero ideal")
    p.add_argument("--var", action="append", default=[], help="new variable")
    p.add_argument("--relation", action="append", default=[], help="relation lifted to the thickening")

    p = sub.add_parser("witt", help="Witt vectors W_n(F_{p^e}) by iterated lifting")
    p.add_argument("--p", type=int, required=True)
    p.add_argument("--e", type=int, default=1)
    p.add_argument("--n", type=int, required=True)

    p = sub.add_parser("hecke", help="derived Hecke algebras")
    hs = p.add_subparsers(dest="hecke_command", parser_class=_Parser)
    hs.required = True
    t = hs.add_parser("torus")
    t.add_argument("--rank", type=int, default=1)
    t.add_argument("--q", type=int, required=True)
    t.add_argument("--ell", type=int, required=True)
    t.add_argument("--n", type=int, default=1)
    t.add_argument("--deg", type=int, default=2)
    t.add_argument("--radius", type=int, default=1)
    c = hs.add_parser("cohomology")
    c.add_argument("--group", required=True,
                   help="table file (JSON list of rows) or cyclic:m, abelian:m1,m2,.., symmetric:n, pgl2:q")
    c.add_argument("--ell", type=int, required=True)
    c.add_argument("--n", type=int, default=1)
    c.add_argument("--deg", type=int, default=2)
    c.add_argument("--products", action="store_true")
    s = hs.add_parser("satake")
    s.add_argument("--input", required=True, help="JSON: q, ell, n, deg, terms [{coset, degree, coords}]")

    p = sub.add_parser("proptest", help="seeded randomized property suites")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--trials", type=int, default=20)
    return top


# ---------------------------------------------------------------------------
# helpers


def _document(args):
    from .presentation import parse_document
    text = ""
    if args.input:
        try:
            with open(args.input, encoding="utf-8") as fh:
                text = fh.read()
        except OSError as exc:
            raise ParseError(f"cannot read {args.input}: {exc.strerror}") from None
    text = "\n".join(([text] if text else []) + list(args.decl))
    if not text.strip():
        raise ParseError("no presentation given (use -i or --decl)")
    return parse_document(text)


def _ring(doc, name: Optional[str]):
    return doc.last_ring if name is None else doc.ring(name)


def _over(doc, args):
    return None if args.over is None else doc.ring(args.over)


def _group(spec: str):
    from .groups import FiniteGroup
    kind, _, rest = spec.partition(":")
    try:
        if kind == "cyclic":
            return FiniteGroup.cyclic(int(rest))
        if kind == "abelian":
            factors = [int(x) for x in rest.split(",") if x.strip()]
            return factors
        if kind == "symmetric":
            return FiniteGroup.symmetric(int(rest))
        if kind == "pgl2":
            return FiniteGroup.pgl2(int(rest))
    except ValueError:
        raise ParseError(f"bad group spec {spec!r}") from None
    try:
        with open(spec, encoding="utf-8") as fh:
            table = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise ParseError(f"cannot read group table {spec!r}: {exc}") from None
    return FiniteGroup.from_table(table)


# ---------------------------------------------------------------------------
# subcommands


def _cmd_cotangent(args) -> Dict:
    from .cotangent import conormal_module, cotangent
    doc = _document(args)
    B, A = _ring(doc, args.ring), _over(doc, args)
    out = cotangent(B, A, args.deg, seed=args.seed).to_json()
    try:
        out["conormal"] = conormal_module(B, A).to_json()
    except MathDomainError:
        out["conormal"] = None
    return out


def _cmd_aq(args) -> Dict:
    from .cotangent import aq_cohomology, aq_homology
    doc = _document(args)
    M = None if args.module == "B" else "k"
    f = aq_cohomology if args.cohomology else aq_homology
    return {"kind": "cohomology" if args.cohomology else "homology",
            "report": f(_ring(doc, args.ring), _over(doc, args), M, args.deg).to_json()}


def _pair(doc, args):
    if args.left is None or args.right is None:
        raise ParseError("--left and --right are required")
    return doc.ring(args.left), doc.ring(args.right), _over(doc, args)


def _cmd_tor(args) -> Dict:
    from .tor import tor
    doc = _document(args)
    B, B2, A = _pair(doc, args)
    return {"groups": [tor(B, B2, A, i).to_json() for i in range(args.deg + 1)]}


def _cmd_derived_tensor(args) -> Dict:
    from .simplicial_rings import derived_tensor
    doc = _document(args)
    B, B2, A = _pair(doc, args)
    return derived_tensor(B, B2, A, args.deg).to_json()


def dold_kan_roundtrips(seed: int, trials: int, p: int = 5, N: int = 4) -> int:
    from .coeffs import GF
    from .simplicial import chain_complexes_equal, dold_kan_realize, normalized_complex, random_chain_complex
    rng = random.Random(seed)
    R = GF(p)
    exact = 0
    for _ in range(trials):
        C = random_chain_complex(rng, R, N, 3)
        exact += chain_complexes_equal(normalized_complex(dold_kan_realize(C, N)), C)
    return exact


def _cmd_dold_kan(args) -> Dict:
    exact = dold_kan_roundtrips(args.seed, args.trials, args.p, args.N)
    return {"trials": args.trials, "exact": exact, "result": f"{exact}/{args.trials} exact"}


def _cmd_resolve(args) -> Dict:
    from .simplicial_rings import resolve
    doc = _document(args)
    _, cert = resolve(_ring(doc, args.ring), _over(doc, args), args.levels, seed=args.seed)
    return cert.to_json()


def _cmd_extensions(args) -> Dict:
    from .extensions import classify_extensions
    doc = _document(args)
    classes = classify_extensions(_ring(doc, args.ring), _over(doc, args), "k")
    return {"count": len(classes), "classes": [c.to_json() for c in classes]}


def _cmd_obstruction(args) -> Dict:
    from .extensions import deformation_obstruction
    doc = _document(args)
    At = _ring(doc, args.ring)
    return deformation_obstruction(At, args.ideal, args.var, args.relation).to_json()


def _cmd_witt(args) -> Dict:
    from .extensions import witt_vectors
    return witt_vectors(args.p ** args.e, args.n).to_json()


def _cmd_hecke(args) -> Dict:
    return {"torus": _hecke_torus, "cohomology": _hecke_cohomology, "satake": _hecke_satake}[args.hecke_command](args)


def _hecke_torus(args) -> Dict:
    from .hecke import torus_dha, weyl_invariants
    A = torus_dha(args.rank, args.q, args.ell, args.n, args.deg)
    out = {"rank": args.rank, "q": args.q, "coefficients": f"Z/{A.N}",
           "cohomology": A.H.to_json()["degrees"], "radius": args.radius, "components": []}
    for d in range(args.deg + 1):
        basis = A.basis(d, args.radius)
        comp = {"degree": d, "basis": [x.to_json()["terms"][0] for x in basis]}
        if A.T is not None:
            comp["weyl_invariants"] = [x.to_json()["terms"] for x in weyl_invariants(A, d, args.radius)]
        out["components"].append(comp)
    return out


def _hecke_cohomology(args) -> Dict:
    from .groups import group_cohomology
    R = group_cohomology(_group(args.group), args.ell, args.n, args.deg)
    return R.to_json(products=args.products)


def _hecke_satake(args) -> Dict:
    from .hecke import PGL2Model, satake_restrict
    try:
        with open(args.input, encoding="utf-8") as fh:
            data = json.load(fh)
        q, ell = int(data["q"]), int(data["ell"])
        n, deg = int(data.get("n", 1)), int(data.get("deg", 2))
        terms = {(int(t["coset"]), int(t["degree"])): [int(c) for c in t["coords"]] for t in data["terms"]}
    except (OSError, ValueError, KeyError, TypeError) as exc:
        raise ParseError(f"bad Satake input: {exc}") from None
    M = PGL2Model(q, ell, n, deg)
    h = M.element(terms)
    S = satake_restrict(h)
    return {"input": h.to_json(), "satake": S.to_json(), "checks": S.checks}


def proptest_suite(seed: int, trials: int) -> Dict[str, List[int]]:
    """Randomized checks of structural invariants; returns passes/trials per suite."""
    from .chains import homology
    from .coeffs import GF
    from .poly import MultiPoly
    from .simplicial import moore_complex, normalized_complex, random_simplicial_module
    from .snf import smith_normal_form
    rng = random.Random(seed)
    out: Dict[str, List[int]] = {}
    out["dold_kan_roundtrip"] = [dold_kan_roundtrips(rng.randrange(10 ** 9), trials), trials]
    ok = 0
    for _ in range(trials):
        X = random_simplicial_module(rng, GF(5), 4, 3)
        M, N = moore_complex(X), normalized_complex(X)
        ok += all(homology(M, i).dimension == homology(N, i).dimension for i in range(4))
    out["moore_vs_normalized"] = [ok, trials]
    k = GF(5)
    ok = 0
    for _ in range(trials):
        f, g, h = (MultiPoly(k, ("x", "y"), {(rng.randint(0, 3), rng.randint(0, 3)): rng.randrange(5)
                                             for _ in range(4)}) for _ in range(3))
        ok += (f + g) + h == f + (g + h) and f * g == g * f and (f * g) * h == f * (g * h)
    out["polynomial_axioms"] = [ok, trials]
    ok = 0
    for _ in range(trials):
        M = [[rng.randint(-9, 9) for _ in range(3)] for _ in range(3)]
        D, P, Q = smith_normal_form(M)
        diag = [D[i][i] for i in range(3)]
        PMQ = [[sum(P[i][a] * M[a][b] * Q[b][j] for a in range(3) for b in range(3)) for j in range(3)]
               for i in range(3)]
        chain = all(diag[i + 1] % diag[i] == 0 if diag[i] else diag[i + 1] == 0 for i in range(2))
        ok += PMQ == D and chain
    out["smith_normal_form"] = [ok, trials]
    return out


def _cmd_proptest(args) -> Dict:
    suites = proptest_suite(args.seed, args.trials)
    return {"seed": args.seed, "suites": {k: f"{a}/{b}" for k, (a, b) in suites.items()},
            "passed": all(a == b for a, b in suites.values())}


COMMANDS = {
    "cotangent": _cmd_cotangent, "aq": _cmd_aq, "tor": _cmd_tor, "derived-tensor": _cmd_derived_tensor,
    "dold-kan": _cmd_dold_kan, "resolve": _cmd_resolve, "extensions": _cmd_extensions,
    "obstruction": _cmd_obstruction, "witt": _cmd_witt, "hecke": _cmd_hecke, "proptest": _cmd_proptest,
}


# ---------------------------------------------------------------------------
# output


def _table(report: Dict, indent: int = 0) -> List[str]:
    lines = []
    pad = "  " * indent
    for key in sorted(report):
        v = report[key]
        if isinstance(v, dict):
            lines.append(f"{pad}{key}:")
            lines += _table(v, indent + 1)
        elif isinstance(v, list) and v and isinstance(v[0], dict):
            lines.append(f"{pad}{key}:")
            for item in v:
                lines += _table(item, indent + 1)
                lines.append(f"{pad}  --")
        else:
            lines.append(f"{pad}{key}: {json.dumps(v)}")
    return lines


def _emit(report: Dict, fmt: str, out: TextIO):
    if fmt == "table":
        if "result" in report and isinstance(report["result"], str):
            out.write(report["result"] + "\n")
            return
        out.write("\n".join(_table(report)) + "\n")
    else:
        out.write(json.dumps(report, sort_keys=True, indent=2) + "\n")


def run(argv: Sequence[str], out: TextIO = None, err: TextIO = None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    argv = list(argv)
    # the format is needed for errors raised before parsing completes
    fmt = "table" if "--format=table" in argv or any(
        a == "--format" and b == "table" for a, b in zip(argv, argv[1:])) else "json"
    try:
        args = build_parser().parse_args(argv)
        fmt = args.format
        if args.threads < 1:
            raise ParseError("--threads must be positive")
        report = {"schema": SCHEMA, "command": args.command, **COMMANDS[args.command](args)}
    except SystemExit as exc:
        # --help and --version
        return 0 if not exc.code else 2
    except ParseError as exc:
        _emit({"schema": SCHEMA, "error": "ParseError", "message": str(exc)}, fmt, err)
        return 2
    except MathDomainError as exc:
        _emit({"schema": SCHEMA, "error": type(exc).__name__, "message": str(exc)}, fmt, out)
        return 3
    _emit(report, fmt, out)
    return 0


def main() -> None:
    sys.exit(run(sys.argv[1:]))


if __name__ == "__main__":
    main()
