"""Command line front end.

Every subcommand builds a JSON report with a fixed key order and writes it to
``--output`` (stdout by default).  ``--figure PATH`` also renders a matplotlib
figure.  Exit codes: 0 pass, 1 property failure, 2 usage or parse error,
3 undecided (budget exhausted).
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from pathlib import Path

import numpy as np

EXIT_PASS, EXIT_FAIL, EXIT_USAGE, EXIT_UNDECIDED = 0, 1, 2, 3


class UsageError(Exception):
    pass


# ---------------------------------------------------------------------------
# config and output


def read_config(path) -> dict:
    """key=value lines; '#' starts a comment; keys use dashes or underscores."""
    out = {}
    text = Path(path).read_text(encoding="utf-8")
    for lineno, line in enumerate(text.splitlines(), start=1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise UsageError(f"{path}:{lineno}: expected key=value")
        k, v = line.split("=", 1)
        out[k.strip().replace("-", "_")] = v.strip()
    return out


def _jsonable(obj):
    if isinstance(obj, dict):
        return {str(k): _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return _jsonable(obj.tolist())
    if isinstance(obj, np.integer):
        return int(obj)
    if isinstance(obj, np.bool_):
        return bool(obj)
    return obj


def dump_report(report: dict, output) -> None:
    text = json.dumps(_jsonable(report), indent=2, ensure_ascii=False) + "\n"
    if output in (None, "-"):
        sys.stdout.write(text)
    else:
        Path(output).write_text(text, encoding="utf-8")


def _config_echo(args) -> dict:
    skip = {"func", "config", "output", "figure", "timing"}
    return {k: v for k, v in sorted(vars(args).items()) if k not in skip and v is not None}


# ---------------------------------------------------------------------------
# shared helpers


def _system(args):
    from .rootsys import parse_system

    if not args.system:
        raise UsageError("--system is required")
    return parse_system(args.system)


def _ring(args):
    from .rings import parse_ring

    if not args.ring:
        raise UsageError("--ring is required")
    return parse_ring(args.ring)


def _rep(args, rs):
    from .reps import get_representation

    return get_representation(rs, args.rep or "adjoint")


def _context(args):
    from .groupcore import GroupContext

    rs = _system(args)
    return GroupContext(_rep(args, rs), _ring(args))


def _root(rs, text):
    return rs.parse_root(text)


# ---------------------------------------------------------------------------
# subcommands returning (report, status, figure-callback)


def cmd_rootsys(args):
    from .plotting import plot_root_system

    rs = _system(args)
    rep = {
        "system": rs.label,
        "rank": rs.rank,
        "simple_roots": [{"name": rs.name(a), "coords": list(a)} for a in rs.simple],
        "positive_roots": [{"name": rs.name(a), "coords": list(a), "height": rs.height(a),
                            "long": rs.is_long(a)} for a in rs.positive],
        "number_of_roots": len(rs.roots),
        "cartan_matrix": np.asarray(rs.cartan_matrix).tolist(),
        "diagram_automorphisms": [[i + 1 for i in p] for p in rs.diagram_automorphisms()],
    }
    return rep, EXIT_PASS, lambda path: plot_root_system(rs, path)


def cmd_basis(args):
    from .chevbasis import build_chevalley_basis, killing_form

    rs = _system(args)
    B = build_chevalley_basis(rs)
    rep = {
        "system": rs.label,
        "dim": B.dim,
        "labels": B.labels,
        "extraspecial_pairs": [{"sum": rs.name(x), "alpha": rs.name(a), "beta": rs.name(b),
                                "N": B.N(a, b)} for x, (a, b) in B.extraspecial_pairs.items()],
    }
    if args.table:
        rep["structure_table"] = B.structure_table()
    if args.killing:
        rep["killing_form"] = killing_form(B).tolist()
    if args.pair:
        a, b = (_root(rs, t) for t in args.pair.split(","))
        rep["N"] = {"alpha": rs.name(a), "beta": rs.name(b), "value": B.N(a, b)}
    return rep, EXIT_PASS, None


def cmd_rep(args):
    from .plotting import plot_matrix_pattern, plot_weight_diagram
    from .reps import build_weight_diagram, fundamental_weight, is_microweight

    rs = _system(args)
    R = _rep(args, rs)
    rep = R.to_json()
    rep["square_zero"] = R.square_zero
    rep["lattice_index_in_sc"] = R.lattice.index_in_sc
    D = None
    tag = args.rep or "adjoint"
    if tag.startswith("w") and tag[1:].isdigit():
        hw = fundamental_weight(rs, int(tag[1:]))
        if is_microweight(rs, hw):
            D = build_weight_diagram(rs, hw)
            rep["diagram"] = D.to_json()
            rep["diagram_diameter"] = D.diameter
    if not args.matrices:
        rep.pop("matrices")
    if D is not None:
        return rep, EXIT_PASS, lambda path: plot_weight_diagram(D, path)
    return rep, EXIT_PASS, lambda path: plot_matrix_pattern(R.mats, R.dim, path, f"{rs.label} {R.name}")


def cmd_ring(args):
    from .rings import (find_idempotent_systems, idempotents, maximal_ideals, ring_automorphisms)

    R = _ring(args)
    if not getattr(R, "finite", False):
        return {"ring": str(R.name), "finite": False}, EXIT_PASS, None
    units = R.units
    rep = {
        "ring": R.name,
        "finite": True,
        "size": len(R),
        "characteristic": R.characteristic,
        "elements": [R.format(a) for a in range(len(R))],
        "units": [R.format(u) for u in units],
        "is_field": R.is_field(),
        "idempotents": [R.format(e) for e in idempotents(R)],
        "maximal_ideals": [[R.format(x) for x in sorted(I.elements)] for I in maximal_ideals(R)],
        "automorphisms": len(ring_automorphisms(R)),
    }
    rep["semilocal"] = True
    rep["local"] = len(rep["maximal_ideals"]) == 1
    if args.idempotent_systems:
        k = args.idempotent_systems
        rep["idempotent_systems"] = [[R.format(e) for e in s.elements] for s in find_idempotent_systems(R, k)]
    return rep, EXIT_PASS, None


def cmd_relations(args):
    from .groupcore import RELATIONS, verify_relations, verify_torus_conjugation
    from .plotting import plot_relations

    G = _context(args)
    rels = tuple(r.strip().upper() for r in args.relations.split(",")) if args.relations else RELATIONS
    bad = [r for r in rels if r not in RELATIONS]
    if bad:
        raise UsageError(f"unknown relation(s) {', '.join(bad)}; choose from {', '.join(RELATIONS)}")
    reports = [r.to_json() for r in verify_relations(G, rels, exhaustive=args.exhaustive,
                                                      budget=args.budget, seed=args.seed)]
    if args.torus:
        reports.append(verify_torus_conjugation(G, samples=args.samples, seed=args.seed).to_json())
    ok = all(r["verdict"] == "pass" for r in reports)
    rep = {"verdict": "pass" if ok else "fail", "reports": reports}
    return rep, EXIT_PASS if ok else EXIT_FAIL, lambda path: plot_relations(reports, path)


def cmd_constants(args):
    from .groupcore import commutator_constants, product_order

    rs = _system(args)
    rep_obj = _rep(args, rs)
    if not args.pair:
        raise UsageError("--pair a,b is required")
    parts = args.pair.split(",")
    if len(parts) != 2:
        raise UsageError("--pair expects two roots separated by a comma")
    a, b = (_root(rs, t) for t in parts)
    consts = commutator_constants(rep_obj, a, b)
    terms = []
    for i, j, root in product_order(rep_obj, a, b):
        if (i, j) in consts:
            terms.append({"i": i, "j": j, "root": rs.name(root), "c": consts[(i, j)]})
    rep = {"system": rs.label, "rep": rep_obj.name, "alpha": rs.name(a), "beta": rs.name(b),
           "convention": "[x_a(t), x_b(u)] = x_a(t) x_b(u) x_a(-t) x_b(-u) = prod x_{ia+jb}(c_ij t^i u^j)",
           "terms": terms}
    return rep, EXIT_PASS, None


def cmd_group(args):
    from .groupcore import (center_by_commutant, elementary_group, full_group, scalar_center_oracle,
                            weyl_quotient_order)

    G = _context(args)
    R = G.R
    what = args.what
    rep = {"system": G.rs.label, "rep": G.rep.name, "ring": R.name, "what": what}
    if what == "order":
        rep["elementary_order"] = elementary_group(G, args.closure_budget).order()
    elif what == "full":
        F = full_group(G, args.closure_budget)
        rep["elementary_order"] = F.E.order()
        rep["full_order"] = F.order()
    elif what == "center":
        E = elementary_group(G, args.closure_budget)
        Z = center_by_commutant(G, E)
        rep["elementary_order"] = E.order()
        rep["center_order"] = len(Z)
        rep["center"] = [[[R.format(v) for v in row] for row in C] for C in Z]
        oracle = scalar_center_oracle(G)
        rep["scalar_oracle"] = [R.format(u) for u in oracle]
        scal = sorted(int(C[0, 0]) for C in Z if np.all(C == np.diag(np.diagonal(C))) and len(set(np.diagonal(C))) == 1)
        rep["agrees_with_oracle"] = len(Z) == len(oracle) and scal == sorted(oracle)
        if not rep["agrees_with_oracle"]:
            return rep, EXIT_FAIL, None
    elif what == "weyl":
        rep["weyl_quotient_order"] = weyl_quotient_order(G)
    return rep, EXIT_PASS, None


def cmd_generate(args):
    from . import genalg
    from .plotting import plot_weight_diagram
    from .reps import build_weight_diagram, fundamental_weight, is_microweight

    rs = _system(args)
    if args.action == "check-mn":
        G = _context(args)
        R = G.R
        cl = genalg.algebra_closure(R, genalg.lie_algebra_images(G))
        units = cl.matrix_units_reached()
        rep = {"system": rs.label, "rep": G.rep.name, "ring": R.name, "dim": G.n,
               "closure_order": cl.order, "full": cl.is_full, "rounds": cl.rounds,
               "matrix_units_reached": len(units), "matrix_units_total": G.n * G.n}
        return rep, EXIT_PASS if len(units) == G.n * G.n else EXIT_FAIL, None
    if args.action == "path":
        tag = args.weight or args.rep
        if not tag or not (tag.startswith("w") and tag[1:].isdigit()):
            raise UsageError("--weight w<k> is required")
        hw = fundamental_weight(rs, int(tag[1:]))
        if not is_microweight(rs, hw):
            raise UsageError(f"{tag} is not a microweight of {rs.label}")
        D = build_weight_diagram(rs, hw)
        start = _vertex(args.start, len(D.vertices))
        if args.label is None:
            raise UsageError("--label is required")
        cert = genalg.find_path_certificate(D, start, args.label, args.max_length)
        check = genalg.check_certificate(D, start, cert.labels)
        rep = {"system": rs.label, "weight": tag, "certificate": _one_based(cert.to_json()),
               "independent_check": {**check, "walk": [v + 1 for v in check.get("walk", [])]}}
        walk = check.get("walk")
        return rep, EXIT_PASS if check["valid"] else EXIT_FAIL, lambda path: plot_weight_diagram(D, path, walk)
    if args.action == "lie":
        G = _context(args)
        mode = args.mode
        ok = True
        rows = []
        for a in rs.roots:
            X = genalg.recover_lie_generator(G, G.x(a, G.R.one), mode)
            good = bool((X == G.R.reduce_ints(G.rep.X(a))).all())
            ok &= good
            rows.append({"root": rs.name(a), "recovered": good})
        return {"system": rs.label, "rep": G.rep.name, "ring": G.R.name, "mode": mode, "roots": rows}, \
            EXIT_PASS if ok else EXIT_FAIL, None
    raise UsageError(f"unknown generate action {args.action!r}")


def _vertex(text, n) -> int:
    """Vertices are named g1..gN (1-based) on the command line."""
    t = (text or "g1").lower().lstrip("g")
    if not t.isdigit() or not 1 <= int(t) <= n:
        raise UsageError(f"vertex {text!r} is not one of g1..g{n}")
    return int(t) - 1


def _one_based(cert: dict) -> dict:
    out = dict(cert)
    for k in ("from", "to", "end"):
        out[k] = cert[k] + 1
    return out


def cmd_auto(args):
    from . import autos
    from .plotting import plot_candidates

    G = _context(args)
    if args.action == "decompose":
        if not args.input:
            raise UsageError("--input phi.json is required")
        try:
            data = json.loads(Path(args.input).read_text(encoding="utf-8"))
        except (OSError, json.JSONDecodeError) as exc:
            raise UsageError(f"cannot read {args.input}: {exc}") from exc
        if isinstance(data, list):
            data = {"images": data}
        elif isinstance(data, dict) and "images" not in data and isinstance(data.get("result"), dict):
            data = data["result"]  # a report written by 'auto sample'
        try:
            pres = autos.AutomorphismPresentation.from_json(G, data)
        except (KeyError, TypeError, autos.AutomorphismError) as exc:
            raise UsageError(f"malformed presentation in {args.input}: {exc}") from exc
        res = autos.decompose(pres, override_gate=args.override_gate, budget=args.budget)
        rep = res.to_json()
        status = {"standard": EXIT_PASS, "out of theorem scope": EXIT_PASS,
                  "undecided": EXIT_UNDECIDED}.get(res.verdict, EXIT_FAIL)
        tried = next((t["tried"] for t in res.transcript if t["step"] == "candidates"), [])
        return rep, status, (lambda path: plot_candidates(tried, path)) if tried else None
    if args.action == "sample":
        if args.kind == "identity":
            pres = autos.AutomorphismPresentation.from_map(G, lambda key, M: M)
        else:
            comp = autos.random_standard(G, np.random.default_rng(args.seed))
            pres = autos.presentation_of(G, comp)
        return pres.to_json(), EXIT_PASS, None
    raise UsageError(f"unknown auto action {args.action!r}")


# ---------------------------------------------------------------------------
# parser


def _common(p, ring=True, rep=True):
    p.add_argument("--system", help="root system, e.g. A2, B2, G2")
    if rep:
        p.add_argument("--rep", "--lattice", dest="rep", help="representation: adjoint, sc, standard, universal, w<k>")
    if ring:
        p.add_argument("--ring", help="ring spec, e.g. Z/6, 'Z/2 x Z/3', 'Z/5[y]/(y^2 - 2)', 'loc(Z/12, 2)', GF(4)")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--budget", type=int, default=10_000, help="sample/enumeration budget")
    p.add_argument("--output", "-o", help="JSON report path (default: stdout)")
    p.add_argument("--figure", help="also render a figure to this PNG path")
    p.add_argument("--config", help="key=value file supplying defaults")
    p.add_argument("--timing", action="store_true", help="add wall-clock timing (reports stop being byte-identical)")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="chevalley", description="Chevalley groups over finite commutative rings.")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("rootsys", help="roots, Cartan matrix, diagram symmetries")
    _common(p, ring=False, rep=False)
    p.set_defaults(func=cmd_rootsys)

    p = sub.add_parser("basis", help="Chevalley basis structure constants")
    _common(p, ring=False, rep=False)
    p.add_argument("--table", action="store_true", help="include the full structure table")
    p.add_argument("--killing", action="store_true", help="include the Killing form")
    p.add_argument("--pair", help="print N(a,b) for roots 'a,b'")
    p.set_defaults(func=cmd_basis)

    p = sub.add_parser("rep", help="representation matrices, weights and lattice")
    _common(p, ring=False)
    p.add_argument("--matrices", action="store_true", help="include the root matrices")
    p.set_defaults(func=cmd_rep)

    p = sub.add_parser("ring", help="structure of a finite ring")
    p.add_argument("--ring")
    p.add_argument("--idempotent-systems", type=int, help="list k-tuples of orthogonal idempotents")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--output", "-o")
    p.add_argument("--figure")
    p.add_argument("--config")
    p.add_argument("--timing", action="store_true")
    p.set_defaults(func=cmd_ring)

    p = sub.add_parser("relations", help="verify the Steinberg relations R1-R6")
    _common(p)
    p.add_argument("--exhaustive", action="store_true")
    p.add_argument("--relations", help="comma separated subset, e.g. R1,R2")
    p.add_argument("--torus", action="store_true", help="also check torus conjugation on seeded samples")
    p.add_argument("--samples", type=int, default=200)
    p.set_defaults(func=cmd_relations)

    p = sub.add_parser("constants", help="commutator constants c_ij for a pair of roots")
    _common(p, ring=False)
    p.add_argument("--pair", help="'a,b' with a and b roots, e.g. a1,a2")
    p.set_defaults(func=cmd_constants)

    p = sub.add_parser("group", help="orders and centers by closure")
    _common(p)
    p.add_argument("--what", choices=["order", "full", "center", "weyl"], default="order")
    p.add_argument("--closure-budget", type=int, default=500_000)
    p.set_defaults(func=cmd_group)

    p = sub.add_parser("generate", help="generation lemmas: matrix units, path certificates, Lie recovery")
    p.add_argument("action", choices=["check-mn", "path", "lie"])
    _common(p)
    p.add_argument("--weight", help="microweight tag w<k> for 'path'")
    p.add_argument("--from", dest="start", help="start vertex g<k> (1-based)")
    p.add_argument("--label", type=int, help="simple root index of the first step")
    p.add_argument("--max-length", type=int)
    p.add_argument("--mode", choices=["half", "square-zero"], default="square-zero")
    p.set_defaults(func=cmd_generate)

    p = sub.add_parser("auto", help="decompose automorphisms into standard factors")
    p.add_argument("action", choices=["decompose", "sample"])
    _common(p)
    p.add_argument("--input", help="presentation JSON: list of {root, param, image}")
    p.add_argument("--override-gate", action="store_true",
                   help="attempt the search even when 2 (or 3) is not a unit")
    p.add_argument("--kind", choices=["identity", "random"], default="random")
    p.set_defaults(func=cmd_auto)
    return ap


def _apply_config(parser, argv):
    pre = argparse.ArgumentParser(add_help=False)
    pre.add_argument("--config")
    known, _ = pre.parse_known_args(argv)
    if not known.config:
        return
    cfg = read_config(known.config)
    # defaults reach every subparser; explicit flags still win
    for action in parser._subparsers._group_actions:
        for sp in action.choices.values():
            valid = {a.dest: a for a in sp._actions}
            sp.set_defaults(**{k: (valid[k].type(v) if valid[k].type else _bool(v, valid[k]))
                               for k, v in cfg.items() if k in valid})


def _bool(v, action):
    if isinstance(action, argparse._StoreTrueAction):
        return v.lower() in ("1", "true", "yes", "on")
    return v


def main(argv=None) -> int:
    from .groupcore import Undecided
    from .rings import RingError, RingSpecError
    from .rootsys import RootSystemError
    from .reps import RepresentationError

    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    try:
        _apply_config(parser, argv)
    except (OSError, UsageError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_PASS
    t0 = time.perf_counter()
    try:
        result, status, figure = args.func(args)
    except RingSpecError as exc:
        print(f"error: {exc}\n  {exc.text}\n  {' ' * exc.pos}^", file=sys.stderr)
        return EXIT_USAGE
    except (UsageError, RootSystemError, RepresentationError, RingError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except Undecided as exc:
        result, status, figure = {"verdict": "undecided", "reason": str(exc)}, EXIT_UNDECIDED, None
    report = {"command": args.command, "config": _config_echo(args),
              "status": {EXIT_PASS: "pass", EXIT_FAIL: "fail", EXIT_UNDECIDED: "undecided"}[status],
              "result": result}
    if args.timing:
        report["timing_seconds"] = round(time.perf_counter() - t0, 3)
    dump_report(report, args.output)
    if args.figure and figure is not None:
        figure(args.figure)
    return status


if __name__ == "__main__":
    sys.exit(main())
