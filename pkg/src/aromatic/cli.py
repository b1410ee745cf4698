"""Command-line entry point: enumerate, op, homology, bseries and verify.

Exit status is 0 when every check passes, 1 when a check fails and 2 for
usage errors, refused arity caps and invalid input.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
from fractions import Fraction
from pathlib import Path

from . import __version__, bseries, operad
from .cache import BUILDERS, BasisCache
from .complexes import build_aromatic_bicomplex, build_ce_complex, build_graph_complex
from .config import load_config
from .errors import AromaticError, CapExceededError
from .linalg import LinComb, format_fraction, homology_dimensions
from .report import SCHEMA, SUITES, Check, VerificationReport, run_suite
from .species import canonical_code, enumerate_unlabelled, parse

log = logging.getLogger("aromatic")

COMPLEXES = ("ce-L", "ce-Ltilde", "aromatic", "aromatic-df", "graphs", "graphs-cr")
HOMOLOGY_CAPS = {"ce-L": "ce-homology", "ce-Ltilde": "ce-homology", "aromatic": "bicomplex",
                 "aromatic-df": "bicomplex", "graphs": "graph-complex", "graphs-cr": "graph-complex"}
ENUMERABLE = {
    "trees": ("trees", ""),
    "aromas": ("aromas", ""),
    "aromas+": ("aromas", "plus"),
    "forests": ("forests", ""),
    "forests-noloop": ("forests", "noloop"),
    "unlabelled-trees": ("unlabelled-trees", ""),
    "unlabelled-aromas": ("unlabelled-aromas", ""),
    "unlabelled-aromas+": ("unlabelled-aromas", "plus"),
}
ENUMERATE_CAPS = {"trees": 7, "aromas": 6, "forests": 6, "unlabelled-trees": 12, "unlabelled-aromas": 12}


def _common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--json", metavar="PATH", help="also write a JSON report ('-' for stdout)")
    p.add_argument("--cache-dir", metavar="DIR", help="basis cache directory")
    p.add_argument("--config", metavar="FILE", help="key = value configuration file")
    p.add_argument("--seed", type=int, help="seed for random test fields")
    p.add_argument("-v", "--verbose", action="store_true")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="aromatic", description="Rooted-tree and aromatic-forest operad toolkit.")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("enumerate", help="list a basis of labelled or unlabelled objects")
    p.add_argument("kind", choices=sorted(ENUMERABLE))
    p.add_argument("--n", "--arity", dest="n", type=int, required=True)
    p.add_argument("--count", action="store_true", help="print the count only")
    _common(p)

    p = sub.add_parser("op", help="apply an operadic operation to serialized objects")
    p.add_argument("operation", choices=["compose", "prelie", "bracket", "act", "div", "div0", "tau", "brace",
                                         "is-lie", "canonical"])
    p.add_argument("args", nargs="+", help="objects in the labelled text format (compose: OUTER LABEL INNER)")
    _common(p)

    p = sub.add_parser("homology", help="build a complex and report its homology")
    p.add_argument("--complex", required=True, choices=COMPLEXES)
    p.add_argument("--arity", type=int, required=True)
    p.add_argument("--dump-matrices", metavar="DIR")
    _common(p)

    p = sub.add_parser("bseries", help="elementary differentials and the volume obstruction")
    g = p.add_mutually_exclusive_group(required=True)
    g.add_argument("--check-divergence", action="store_true")
    g.add_argument("--obstruction", metavar="COEFFS.json")
    p.add_argument("--max-order", type=int)
    p.add_argument("--dim", type=int, default=3)
    p.add_argument("--degree", type=int, default=3, help="degree of the random polynomial field")
    _common(p)

    p = sub.add_parser("verify", help="run verification suites")
    p.add_argument("suite", choices=list(SUITES) + ["all"])
    p.add_argument("--max-n", type=int)
    p.add_argument("--parallel", action="store_true", help="run independent checks in worker processes")
    _common(p)
    return parser


def _config(args):
    cli = {"seed": args.seed, "cache_dir": args.cache_dir, "json": args.json}
    cli["max_n"] = getattr(args, "max_n", None)
    cli["parallel"] = getattr(args, "parallel", None) or None
    cli["dump_matrices"] = getattr(args, "dump_matrices", None)
    return load_config(cli, path=args.config)


def _emit_json(data: dict, path) -> None:
    if not path:
        return
    text = json.dumps(data, indent=2, sort_keys=True, ensure_ascii=False) + "\n"
    if path == "-":
        sys.stdout.write(text)
    else:
        Path(path).write_text(text, encoding="utf-8")


def _parse_label(text: str):
    return int(text) if text.lstrip("-").isdigit() else text


# ---------------------------------------------------------------------------

def cmd_enumerate(args, cfg) -> int:
    kind, variant = ENUMERABLE[args.kind]
    if args.n > ENUMERATE_CAPS[kind]:
        raise CapExceededError(f"{args.kind} with n={args.n} exceeds the enumeration cap {ENUMERATE_CAPS[kind]}")
    cache = BasisCache(cfg.cache_dir)
    items = cache.get(kind, args.n, variant) if BUILDERS[kind][1] else cache.get_raw(kind, args.n, variant)
    if args.count:
        print(len(items))
    else:
        for x in items:
            print(x)
    _emit_json({"schema": SCHEMA, "kind": args.kind, "n": args.n, "count": len(items),
                "items": [str(x) for x in items]}, cfg.json)
    return 0


def cmd_op(args, cfg) -> int:
    name = args.operation
    if name == "compose":
        if len(args.args) != 3:
            raise AromaticError("compose takes OUTER LABEL INNER")
        result = operad.compose_at(parse(args.args[0]), _parse_label(args.args[1]), parse(args.args[2]))
    else:
        objs = [parse(a) for a in args.args]
        arity = {"prelie": 2, "bracket": 2, "act": 2, "div": 1, "div0": 1, "tau": 1, "is-lie": 1, "canonical": 1}
        if name in arity and len(objs) != arity[name]:
            raise AromaticError(f"{name} takes {arity[name]} argument(s)")
        if name == "prelie":
            result = operad.prelie(*objs)
        elif name == "bracket":
            result = operad.lie_bracket(*objs)
        elif name == "act":
            result = operad.module_action(*objs)
        elif name == "div":
            result = operad.div(objs[0])
        elif name == "div0":
            result = operad.div0(objs[0])
        elif name == "tau":
            result = LinComb.basis(operad.tau(objs[0]))
        elif name == "brace":
            result = operad.cyclic_brace(objs)
        elif name == "is-lie":
            ok = operad.is_lie_element(objs[0])
            print("true" if ok else "false")
            _emit_json({"schema": SCHEMA, "operation": name, "result": ok}, cfg.json)
            return 0
        else:
            code, sign = canonical_code(objs[0])
            print(code)
            _emit_json({"schema": SCHEMA, "operation": name, "code": code, "sign": sign}, cfg.json)
            return 0
    print(result if result else "0")
    _emit_json({"schema": SCHEMA, "operation": name, "result": result.to_json()}, cfg.json)
    return 0


def _expected_homology(name: str, n: int):
    """Expected homology for the complexes with closed forms, else None."""
    if name == "ce-L":
        return {0: (n - 1) ** n}
    if name == "ce-Ltilde":
        return {1: 1} if n == 1 else ({0: (n - 2) ** n} if n >= 3 else {})
    if name == "graphs":
        return {0: 1} if n == 1 else {}
    return None


def _dump(directory, stem: str, matrices: dict) -> None:
    path = Path(directory)
    path.mkdir(parents=True, exist_ok=True)
    for key, m in matrices.items():
        tag = "_".join(str(k) for k in key) if isinstance(key, tuple) else str(key)
        (path / f"{stem}_d{tag}.txt").write_text(m.dump(), encoding="utf-8")


def cmd_homology(args, cfg) -> int:
    cap = cfg.cap(HOMOLOGY_CAPS[args.complex])
    if args.arity < 1:
        raise AromaticError("--arity must be at least 1")
    if args.arity > cap:
        raise CapExceededError(f"{args.complex} arity {args.arity} exceeds the cap {cap}")
    n = args.arity
    report = VerificationReport(f"homology {args.complex}")
    degrees = []
    if args.complex.startswith("aromatic"):
        bc = build_aromatic_bicomplex("full" if args.complex == "aromatic" else "divergence-free", n)
        hor = bc.horizontal_homology()
        ver = bc.vertical_homology()
        for (p, q), b in sorted(bc.bases.items()):
            degrees.append({"degree": [p, q], "dim_chain": len(b), "dim_homology": hor[(p, q)],
                            "dim_vertical_homology": ver[(p, q)]})
        report.checks.append(Check("d^H d^H = 0, d^V d^V = 0 and d^H d^V = d^V d^H", "bicomplex axioms",
                                   {"n": n}, True, True, True, 0.0))
        report.checks.append(Check("d^V is acyclic", "vertical acyclicity", {"n": n}, 0, sum(ver.values()),
                                   sum(ver.values()) == 0, 0.0))
        if cfg.dump_matrices:
            _dump(cfg.dump_matrices, f"{args.complex}_n{n}_H", bc.dH)
            _dump(cfg.dump_matrices, f"{args.complex}_n{n}_V", bc.dV)
        print(f"{args.complex} arity {n}: d^H homology by bidegree (p, q)")
    else:
        if args.complex.startswith("ce"):
            c = build_ce_complex("L" if args.complex == "ce-L" else "Ltilde", n)
        else:
            c = build_graph_complex("all" if args.complex == "graphs" else "connected-reduced", n)
        hom = homology_dimensions(c)
        for k in c.degrees():
            degrees.append({"degree": k, "dim_chain": len(c.bases[k]), "dim_homology": hom[k]})
        report.checks.append(Check("d d = 0", "chain complex axiom", {"n": n}, True, True, True, 0.0))
        expected = _expected_homology(args.complex, n)
        if expected is not None:
            computed = {k: d for k, d in hom.items() if d}
            report.checks.append(Check("homology dimensions", "closed-form homology", {"n": n},
                                       expected, computed, computed == expected, 0.0))
        if cfg.dump_matrices:
            _dump(cfg.dump_matrices, f"{args.complex}_n{n}", c.differentials)
        print(f"{args.complex} arity {n}")
    print(f"{'degree':>10} {'dim chain':>10} {'dim homology':>13}")
    for row in degrees:
        deg = row["degree"]
        label = f"({deg[0]},{deg[1]})" if isinstance(deg, list) else str(deg)
        print(f"{label:>10} {row['dim_chain']:>10} {row['dim_homology']:>13}")
    for c in report.checks:
        print(f"[{'pass' if c.passed else 'FAIL'}] {c.claim}" + ("" if c.passed else
              f": expected {c.expected}, computed {c.computed}"))
    _emit_json({"schema": SCHEMA, "complex": args.complex, "arity": n, "degrees": degrees,
                "checks": [c.to_json() for c in report.checks]}, cfg.json)
    return 0 if report.passed else 1


def load_coefficients(path) -> dict:
    """Read {order: [{tree, value}]} or a flat {tree: value} map into {code: Fraction}."""
    data = json.loads(Path(path).read_text(encoding="utf-8"))
    out = {}
    if not isinstance(data, dict):
        raise AromaticError("coefficient file must hold a JSON object")
    for key, value in data.items():
        if isinstance(value, list):
            for entry in value:
                out[entry["tree"]] = Fraction(str(entry["value"]))
        else:
            out[key] = Fraction(str(value))
    return out


def cmd_bseries(args, cfg) -> int:
    if args.check_divergence:
        top = args.max_order or cfg.cap("bseries")
        if top > cfg.cap("bseries"):
            raise CapExceededError(f"divergence check order {top} exceeds the cap {cfg.cap('bseries')}")
        f = bseries.random_field(args.dim, args.degree, cfg.seed)
        report = VerificationReport("bseries divergence")
        for n in range(1, top + 1):
            for code in enumerate_unlabelled("tree", n):
                ok = bseries.check_divergence_identity(code, f)
                report.checks.append(Check("Div F(τ) = Σ F(closings)", "divergence of elementary differentials",
                                           {"tree": code, "d": args.dim, "seed": cfg.seed}, True, ok, ok, 0.0))
                print(f"[{'pass' if ok else 'FAIL'}] {code}")
        _emit_json(report.to_json(timings=False), cfg.json)
        return 0 if report.passed else 1
    top = args.max_order or cfg.cap("obstruction")
    if top > cfg.cap("obstruction"):
        raise CapExceededError(f"obstruction order {top} exceeds the cap {cfg.cap('obstruction')}")
    b = load_coefficients(args.obstruction)
    obstruction = bseries.volume_obstruction(b, top)
    if not obstruction:
        print(f"volume obstruction vanishes through order {top}")
    for order, lc in sorted(obstruction.items()):
        print(f"order {order}: {lc}")
    _emit_json({"schema": SCHEMA, "max_order": top, "vanishes": not obstruction,
                "obstruction": {str(k): v.to_json() for k, v in sorted(obstruction.items())},
                "coefficients": {k: format_fraction(v) for k, v in sorted(b.items())}}, cfg.json)
    return 0


def cmd_verify(args, cfg) -> int:
    report = run_suite(args.suite, cfg)
    print(report.render())
    _emit_json(report.to_json(), cfg.json)
    return 0 if report.passed else 1


COMMANDS = {"enumerate": cmd_enumerate, "op": cmd_op, "homology": cmd_homology, "bseries": cmd_bseries,
            "verify": cmd_verify}


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(levelname)s %(message)s")
    try:
        cfg = _config(args)
        return COMMANDS[args.command](args, cfg)
    except CapExceededError as exc:
        print(f"refused: {exc}", file=sys.stderr)
        return 2
    except (AromaticError, ValueError, KeyError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
