"""Command-line driver: ``arrange <group> <command> [options]``.

Exit codes: 0 on success, 2 on bad input, 1 on an internal invariant
failure.  JSON output is deterministic for identical inputs.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
from fractions import Fraction
from typing import Sequence

import numpy as np

from . import arrangement as A
from . import blowup, gf, obstruct, plumbing, symplectic, wiring
from .errors import ArrangeError

log = logging.getLogger("arrange")


class UsageError(ArrangeError):
    pass


def _jsonable(x):
    if isinstance(x, Fraction):
        return {"num": x.numerator, "den": x.denominator}
    if isinstance(x, np.integer):
        return int(x)
    if isinstance(x, np.floating):
        return float(x)
    if isinstance(x, np.ndarray):
        return x.tolist()
    raise TypeError(f"not serializable: {type(x).__name__}")


def dumps(obj) -> str:
    return json.dumps(obj, indent=2, default=_jsonable) + "\n"


def _ints(text: str | None) -> list[int] | None:
    if text is None:
        return None
    text = text.strip()
    if not text:
        return []
    try:
        return [int(x) for x in text.replace(",", " ").split()]
    except ValueError:
        raise UsageError(f"expected a comma-separated list of integers, got {text!r}") from None


def _family(text: str) -> A.Arrangement:
    """``pp:P``, ``bpab:P,ALPHA,BETA``, ``fano``, ``generic:N``, ``pencil:N`` or ``nk:N,K``."""
    name, _, args = text.partition(":")
    vals = _ints(args) or []
    try:
        if name == "pp" and len(vals) == 1:
            return A.projective_plane(vals[0])
        if name == "bpab" and len(vals) == 3:
            return A.b_alpha_beta(*vals)
        if name == "fano" and not vals:
            return A.fano()
        if name == "generic" and len(vals) == 1:
            return A.generic(vals[0])
        if name == "pencil" and len(vals) == 1:
            return A.pencil(vals[0])
        if name == "nk" and len(vals) == 2:
            found = A.search_nk(vals[0], vals[1], limit=1)
            if not found:
                raise UsageError(f"no ({vals[0]}_{vals[1]}) configuration exists")
            return found[0]
    except TypeError:
        pass
    raise UsageError(f"unknown family {text!r}; try pp:3, bpab:2,2,2, fano, generic:4, nk:14,4")


def _load_arrangement(args) -> A.Arrangement:
    src = getattr(args, "infile", None)
    fam = getattr(args, "family", None)
    if (src is None) == (fam is None):
        raise UsageError("give exactly one of --in FILE or --family SPEC")
    if fam is not None:
        return _family(fam)
    try:
        with open(src) as fh:
            data = json.load(fh)
    except OSError as exc:
        raise UsageError(f"cannot read {src}: {exc}") from None
    except json.JSONDecodeError as exc:
        raise UsageError(f"{src} is not JSON: {exc}") from None
    if "arrangements" in data:
        data = data["arrangements"][0]
    if "arrangement" in data and isinstance(data["arrangement"], dict) and \
            "incidence" in data["arrangement"]:
        data = data["arrangement"]
    return A.Arrangement.from_dict(data)


def _blown(arr: A.Arrangement, text: str | None) -> list[int]:
    if text in (None, "all"):
        return list(range(arr.num_points))
    if text == "none":
        return []
    return _ints(text)


# ---------------------------------------------------------------------------
# gen


def cmd_gen(args) -> tuple[object, str]:
    if args.command == "pp":
        arr = A.projective_plane(args.p)
    elif args.command == "bpab":
        arr = A.b_alpha_beta(args.p, args.alpha, args.beta)
    elif args.command == "random":
        arr = A.random_arrangement(args.lines, np.random.default_rng(args.seed), args.merge)
    else:
        res = A.search_nk_detailed(args.n, args.k, limit=args.limit, exhaustive=args.exhaustive)
        data = {
            "n": args.n, "k": args.k,
            "classes": len(res.arrangements),
            "complete": res.complete,
            "nodes": res.nodes,
            "raw_solutions": res.raw_solutions,
            "arrangements": [dict(a.to_dict(), key=a.key()) for a in res.arrangements],
        }
        text = (f"({args.n}_{args.k}): {len(res.arrangements)} isomorphism class(es), "
                f"{res.raw_solutions} normalized solutions, {res.nodes} nodes, "
                f"{'complete' if res.complete else 'INCOMPLETE'}")
        return data, text
    data = arr.to_dict()
    return data, json.dumps(data)


# ---------------------------------------------------------------------------
# code


def cmd_code(args) -> tuple[object, str]:
    arr = _load_arrangement(args)
    model = blowup.BlowupModel(arr, _blown(arr, args.blown))
    basis = blowup.relation_code(model, args.d)
    if args.command == "basis":
        data = {"modulus": args.d, "length": arr.num_lines, "dimension": len(basis),
                "blown_points": list(model.blown_points),
                "basis": [v.tolist() for v in basis]}
        text = "\n".join([f"dimension {len(basis)} over F_{args.d}"]
                         + [" ".join(map(str, v.tolist())) for v in basis])
        return data, text
    if not basis:
        raise UsageError("the relation code is zero; no minimum weight")
    summary = gf.min_weight(basis, cap=args.cap)
    data = summary.to_dict()
    data["witness_support"] = list(summary.min_weight_witness.support())
    text = (f"length {summary.length}, dimension {summary.dimension}, min weight "
            f"{summary.min_weight} ({summary.count_min_weight} words), witness "
            f"{' '.join(map(str, summary.min_weight_witness.tolist()))}")
    return data, text


# ---------------------------------------------------------------------------
# obstruct


def cmd_obstruct(args) -> tuple[object, str]:
    if args.command == "pp":
        rep = obstruct.obstruct_projective_plane(args.p)
        return rep.to_dict(), rep.summary()
    if args.command == "deletion":
        rep = obstruct.obstruct_deletion(args.p, args.t, _ints(args.deleted))
        return rep.to_dict(), rep.summary()
    arr = _load_arrangement(args)
    if args.search:
        reps = obstruct.find_obstructions(arr, primes=_ints(args.primes) or [2, 3],
                                          max_ab=args.max_ab,
                                          limit_per_pattern=args.limit)
        data = {"arrangement": {"key": arr.key(), "lines": arr.num_lines},
                "reports": [r.to_dict() for r in reps],
                "obstructed": any(r.obstructed for r in reps)}
        text = "\n\n".join(r.summary() for r in reps) or "no admissible branch choices"
        return data, text
    if args.embedding:
        with open(args.embedding) as fh:
            emb = A.SubArrangementEmbedding.from_dict(json.load(fh))
    else:
        emb = obstruct.standard_branch(args.p, args.alpha, args.beta, host=arr)
    if args.blown in (None, "branch"):
        blown = sorted(set(emb.point_map))
    elif args.blown == "all":
        blown = obstruct.blow_policies(arr, emb)["all"]
    else:
        blown = _ints(args.blown)
    rep = obstruct.obstruct_arrangement(arr, args.p, args.alpha, args.beta, emb, blown)
    return rep.to_dict(), rep.summary()


# ---------------------------------------------------------------------------
# wiring


def _word(args) -> wiring.WiringDiagram:
    text = args.word.strip()
    if text.startswith("n"):
        return wiring.parse_word(text)
    if args.n is None:
        raise UsageError("give --n or an 'n=<wires>;' prefix in --word")
    return wiring.parse_word(f"n={args.n}; {text}")


def cmd_wiring(args) -> tuple[object, str]:
    if args.command == "canon":
        w = _word(args)
        split, ev = wiring.split_all(w)
        canon, moves = wiring.canonicalize(split)
        ev = ev + moves
        data = {"input": wiring.format_word(w), "canonical": wiring.format_word(canon),
                "word": canon.to_dict()["word"], "events": [e.to_dict() for e in ev]}
        text = f"{wiring.format_word(canon)}\n" + "\n".join(str(e) for e in ev)
        return data, text
    if args.command == "homotopy":
        w = _word(args)
        ev = wiring.homotopy_to_pencil(w)
        final = wiring.replay(w, ev)
        data = {"input": wiring.format_word(w), "final": wiring.format_word(final),
                "events": [e.to_dict() for e in ev]}
        return data, "\n".join(str(e) for e in ev) + f"\n=> {wiring.format_word(final)}"
    if args.command == "from-order":
        arr = _load_arrangement(args)
        lo, po = _ints(args.line_order), _ints(args.point_order)
        if lo is None or po is None:
            found = wiring.search_wiring(arr)
            if found is None:
                data = {"wirable": False}
                return data, "no wiring diagram exists for this arrangement"
            lo, po = found
        w = wiring.from_arrangement(arr, lo, po)
        data = {"wirable": True, "line_order": lo, "point_order": po,
                "diagram": w.to_dict(), "text": wiring.format_word(w)}
        return data, wiring.format_word(w)
    w = _word(args)
    svg = wiring.to_svg(w)
    return {"svg": svg}, svg


# ---------------------------------------------------------------------------
# plumbing


def cmd_plumbing(args) -> tuple[object, str]:
    arr = _load_arrangement(args)
    pm = plumbing.plumbing_matrix(arr)
    if args.command == "matrix":
        return pm.to_dict(), "\n".join(" ".join(f"{x:3d}" for x in row) for row in pm.Q.tolist())
    ones = plumbing.gs_all_ones(pm)
    cert = plumbing.gs_criterion(pm)
    data = {"all_ones": ones, "certificate": cert.to_dict()}
    text = (f"Qz at all-ones: lines {ones['line_coords']}, points {ones['point_coords']}; "
            f"positive={ones['positive']} (certificate: {cert.method})")
    return data, text


# ---------------------------------------------------------------------------
# symplectic


def _strands(args) -> list[symplectic.StrandFunction]:
    out = []
    for e in args.expr or []:
        out.append(symplectic.strand_from_expression(e, (args.tmin, args.tmax)))
    for c in args.csv or []:
        out.append(symplectic.strand_from_csv(c))
    if args.steep is not None:
        out.append(symplectic.steep_strand(args.steep))
    if not out:
        raise UsageError("give at least one --expr, --csv or --steep")
    return out


def cmd_symplectic(args) -> tuple[object, str]:
    strands = _strands(args)
    f = symplectic.format_float
    if args.command == "area":
        rows = []
        for s in strands:
            v = float(symplectic.area_form_value(s, args.r, args.t, args.epsilon))
            rows.append({"name": s.name, "r": args.r, "t": args.t,
                         "epsilon": args.epsilon, "value": float(f(v))})
        return {"values": rows}, "\n".join(f"{x['name']}: {f(x['value'])}" for x in rows)
    res = symplectic.find_epsilon(strands, symplectic.Grid(args.nr, args.nt), margin=args.margin)
    data = res.to_dict()
    for s in data["strands"]:
        s["min_value"] = float(f(s["min_value"]))
        s["argmin"] = {k: float(f(v)) for k, v in s["argmin"].items()}
    text = "\n".join(f"{s.name}: epsilon {f(s.epsilon)} (min {f(s.min_value)} at "
                     f"r={f(s.argmin[0])}, t={f(s.argmin[1])})" for s in res.strands)
    return data, text + f"\nepsilon = {f(res.epsilon)}"


# ---------------------------------------------------------------------------
# parser


def _common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--json", action="store_true", help="machine-readable output")
    p.add_argument("--out", metavar="FILE", help="write output to FILE instead of stdout")
    p.add_argument("--threads", type=int, default=1,
                   help="worker cap (computations run single-threaded)")
    p.add_argument("--seed", type=int, default=0, help="seed for random generators")


def _arr_input(p: argparse.ArgumentParser) -> None:
    p.add_argument("--in", dest="infile", metavar="FILE", help="arrangement JSON")
    p.add_argument("--family", metavar="SPEC",
                   help="built-in family: pp:P, bpab:P,A,B, fano, generic:N, pencil:N, nk:N,K")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="arrange", description=__doc__.splitlines()[0])
    parser.add_argument("-v", "--verbose", action="store_true")
    groups = parser.add_subparsers(dest="group", required=True)

    g = groups.add_parser("gen", help="generate arrangements")
    gs = g.add_subparsers(dest="command", required=True)
    p = gs.add_parser("pp", help="projective plane over F_p")
    p.add_argument("--p", type=int, required=True)
    _common(p)
    p = gs.add_parser("bpab", help="two-pencil family B^p_{alpha,beta}")
    p.add_argument("--p", type=int, required=True)
    p.add_argument("--alpha", type=int, required=True)
    p.add_argument("--beta", type=int, required=True)
    _common(p)
    p = gs.add_parser("nk-search", help="(n_k)-configurations up to isomorphism")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--limit", type=int)
    p.add_argument("--exhaustive", action="store_true",
                   help="use the unpruned search (slow; a cross-check)")
    _common(p)
    p = gs.add_parser("random", help="random valid arrangement")
    p.add_argument("--lines", type=int, required=True)
    p.add_argument("--merge", type=float, default=0.5)
    _common(p)
    g.set_defaults(func=cmd_gen)

    g = groups.add_parser("code", help="relation codes")
    gs = g.add_subparsers(dest="command", required=True)
    for name in ("basis", "minweight"):
        p = gs.add_parser(name)
        _arr_input(p)
        p.add_argument("--d", type=int, default=2, help="prime modulus")
        p.add_argument("--blown", help="'all' (default), 'none' or a list of points")
        p.add_argument("--cap", type=int, default=gf.DEFAULT_ENUM_CAP)
        _common(p)
    g.set_defaults(func=cmd_code)

    g = groups.add_parser("obstruct", help="branched-cover obstructions")
    gs = g.add_subparsers(dest="command", required=True)
    p = gs.add_parser("pp")
    p.add_argument("--p", type=int, required=True)
    _common(p)
    p = gs.add_parser("deletion")
    p.add_argument("--p", type=int, required=True)
    p.add_argument("--t", type=int, required=True)
    p.add_argument("--deleted", help="explicit deleted lines")
    _common(p)
    p = gs.add_parser("custom")
    _arr_input(p)
    p.add_argument("--p", type=int, default=2)
    p.add_argument("--alpha", type=int, default=1)
    p.add_argument("--beta", type=int, default=1)
    p.add_argument("--embedding", metavar="FILE", help="branch embedding JSON")
    p.add_argument("--blown", help="'branch' (default), 'all' or a list of points")
    p.add_argument("--search", action="store_true",
                   help="try all small branch families and both blow-up policies")
    p.add_argument("--primes", help="primes for --search (default 2,3)")
    p.add_argument("--max-ab", type=int, default=2)
    p.add_argument("--limit", type=int, default=50, help="branch candidates per family")
    _common(p)
    g.set_defaults(func=cmd_obstruct)

    g = groups.add_parser("wiring", help="wiring diagrams")
    gs = g.add_subparsers(dest="command", required=True)
    for name in ("canon", "homotopy", "svg"):
        p = gs.add_parser(name)
        p.add_argument("--word", required=True, help='e.g. "t2 t1 t2" or "n=3; t2 t1 t2"')
        p.add_argument("--n", type=int)
        _common(p)
    p = gs.add_parser("from-order")
    _arr_input(p)
    p.add_argument("--line-order")
    p.add_argument("--point-order")
    _common(p)
    g.set_defaults(func=cmd_wiring)

    g = groups.add_parser("plumbing", help="plumbing matrix and G-S criterion")
    gs = g.add_subparsers(dest="command", required=True)
    for name in ("matrix", "gs"):
        p = gs.add_parser(name)
        _arr_input(p)
        _common(p)
    g.set_defaults(func=cmd_plumbing)

    g = groups.add_parser("symplectic", help="area-form positivity")
    gs = g.add_subparsers(dest="command", required=True)
    for name in ("area", "epsilon"):
        p = gs.add_parser(name)
        p.add_argument("--expr", action="append", help="closed form q(r, t)")
        p.add_argument("--csv", action="append", help="CSV with r,t,q columns")
        p.add_argument("--steep", type=float, help="built-in steep strand with this slope")
        p.add_argument("--tmin", type=float, default=-1.0)
        p.add_argument("--tmax", type=float, default=1.0)
        if name == "area":
            p.add_argument("--r", type=float, required=True)
            p.add_argument("--t", type=float, required=True)
            p.add_argument("--epsilon", type=float, default=1.0)
        else:
            p.add_argument("--nr", type=int, default=41)
            p.add_argument("--nt", type=int, default=201)
            p.add_argument("--margin", type=float, default=symplectic.DEFAULT_MARGIN)
        _common(p)
    g.set_defaults(func=cmd_symplectic)
    return parser


def run(argv: Sequence[str] | None = None, stdout=None) -> int:
    stdout = sys.stdout if stdout is None else stdout
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        data, text = args.func(args)
    except (ArrangeError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except AssertionError as exc:
        print(f"internal error: {exc}", file=sys.stderr)
        return 1
    out = dumps(data) if args.json else (text if text.endswith("\n") else text + "\n")
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(out)
    else:
        stdout.write(out)
    return 0


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
