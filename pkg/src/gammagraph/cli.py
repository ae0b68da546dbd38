"""Command-line front end: ``gammagraph <command> ...`` or ``python -m gammagraph``.

Exit codes: 0 success, 1 domain error, 2 usage error.
"""
from __future__ import annotations

import argparse
import json
import sys
from importlib.resources import files

from . import chains, decomp, epsolve, generators, linkages, models, repro, walls
from .errors import GammaGraphError
from .graph import LabelledGraph, find_nonzero_cycle, weight
from .groups import make_group


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _group(text: str):
    try:
        return make_group([int(x) for x in text.split(",")])
    except ValueError as exc:
        raise UsageError(f"bad group {text!r}: use moduli like 3 or 2,2") from exc


def _ints(text: str) -> list[int]:
    try:
        return [int(x) for x in text.split(",") if x]
    except ValueError as exc:
        raise UsageError(f"bad integer list {text!r}") from exc


def _load(path: str) -> dict:
    try:
        with open(path, encoding="utf-8") as fh:
            return json.load(fh)
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc.strerror}") from exc
    except json.JSONDecodeError as exc:
        raise UsageError(f"{path} is not JSON: {exc}") from exc


def _dump(obj) -> str:
    return json.dumps(obj, sort_keys=True, indent=1) + "\n"


def _emit(args, text: str) -> None:
    if getattr(args, "out", None):
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _emit_dot(args, dot: str) -> None:
    if getattr(args, "dot", None):
        with open(args.dot, "w", encoding="utf-8") as fh:
            fh.write(dot)


def _graph_of(data: dict) -> LabelledGraph:
    """Accept a bare graph or any document with a 'host'/'graph' entry."""
    if "edges" in data:
        return LabelledGraph.from_json(data)
    for key in ("host", "graph"):
        if key in data:
            return LabelledGraph.from_json(data[key])
    if "wall" in data:
        return LabelledGraph.from_json(data["wall"]["host"])
    raise GammaGraphError("input holds no graph")


# -- gen -----------------------------------------------------------------------------

def cmd_gen(args) -> int:
    kind = args.kind
    if kind == "projective":
        G = generators.projective_grid(args.n, _group(args.group), args.g, args.k)
        doc, dot = G.to_json(), G.to_dot("projective")
    elif kind == "dnl":
        G = generators.dnl_instance(args.n, args.m, args.ell)
        doc, dot = G.to_json(), G.to_dot("dnl")
    elif kind == "graph":
        G = generators.random_graph(args.n, args.edges, _group(args.group), args.seed)
        if args.bipartite:
            G = generators.random_bipartite_labelling(G, G.group, args.seed, args.shifts)
        doc, dot = G.to_json(), G.to_dot("random")
    elif kind == "wall":
        group = _group(args.group)
        weights = args.weight if args.weight is not None else None
        if weights is None and args.seed is None:
            raise UsageError("gen wall needs --seed or --weight")
        W = generators.facially_odd_wall(args.r, args.s, group, weights=weights, seed=args.seed)
        doc, dot = W.to_json(), W.to_dot()
    elif kind == "linkage":
        W, L = generators.bipartite_wall_with_linkage(args.r, args.purity, _ints(args.weights),
                                                      _group(args.group), s=args.s, shift_seed=args.seed)
        doc, dot = {"wall": W.to_json(), "linkage": L.to_json()}, W.to_dot()
    elif kind == "model":
        if args.seed is None:
            raise UsageError("gen model needs --seed")
        w = "random" if args.weights == "random" else int(args.weights)
        M = generators.odd_model(args.t, _group(args.group), w, args.trees, seed=args.seed)
        doc, dot = M.to_json(), M.host.to_dot("model")
    elif kind == "chain":
        if args.seed is None:
            raise UsageError("gen chain needs --seed")
        group = _group(args.group)
        ok = None
        if args.p is not None:
            ok = lambda x: any(c % args.p for c in x.coords)  # noqa: E731
        G, ch = generators.random_closed_chain(group, args.length, args.seed, increment_ok=ok)
        doc, dot = {"host": G.to_json(), "chain": ch.to_json()}, G.to_dot("chain")
    else:  # pragma: no cover - argparse restricts choices
        raise UsageError(kind)
    _emit(args, _dump(doc))
    _emit_dot(args, dot)
    return 0


# -- check ---------------------------------------------------------------------------

def cmd_check(args) -> int:
    data = _load(args.input)
    if args.what == "bipartite":
        G = _graph_of(data)
        ok, ev = decomp.is_gamma_bipartite(G)
        out = {"gamma_bipartite": ok}
        if ok:
            out["dossier"] = ev.to_json()
        else:
            out["witness"] = ev.to_json()
            out["witness_weight"] = _weight_json(G, ev)
        print("true" if ok else "false")
        _emit(args, _dump(out))
        _emit_dot(args, G.to_dot("check", highlight=() if ok else ev.edges))
        return 0
    if args.what == "nonzero":
        G = _graph_of(data)
        C = find_nonzero_cycle(G)
        print("none" if C is None else "found")
        _emit(args, _dump({"cycle": None if C is None else C.to_json()}))
        return 0
    if args.what == "wall":
        W = walls.Wall.from_json(data["wall"] if "wall" in data else data)
        odd, zero = walls.is_facially_odd(W)
        bip, ev = walls.is_bipartite_wall(W)
        out = {"valid": True, "facially_odd": odd, "zero_bricks": [list(z) for z in zero],
               "bipartite": bip, "evidence": ev.to_json()}
        print(f"facially_odd={str(odd).lower()} bipartite={str(bip).lower()}")
        _emit(args, _dump(out))
        _emit_dot(args, W.to_dot())
        return 0
    raise UsageError(args.what)  # pragma: no cover


def _weight_json(G, H):
    return weight(G, H).to_json()


# -- decomp --------------------------------------------------------------------------

def cmd_decomp(args) -> int:
    G = _graph_of(_load(args.input))
    if args.what == "blocks":
        out = {"blocks": [B.to_json() for B in decomp.three_blocks(G)]}
    elif args.what == "labelled":
        blocks = decomp.three_blocks(G)
        out = {"labelled_blocks": [decomp.labelled_three_block(G, B).to_json() for B in blocks]}
    else:
        res = decomp.shift_reduce(G)
        if isinstance(res, decomp.ShiftCertificate):
            out = {"reduced": True, "certificate": res.to_json()}
        else:
            out = {"reduced": False, "witness": res.to_json()}
    _emit(args, _dump(out))
    return 0


# -- model ---------------------------------------------------------------------------

def cmd_model(args) -> int:
    M = models.KModel.from_json(_load(args.input))
    problem = models.validate_model(M)
    if problem:
        raise GammaGraphError(f"invalid model: {problem}")
    if args.what == "classify":
        kind, verdicts = models.classify_model(M)
        print(kind)
        out = {"kind": kind, "subsets": [[list(U), v] for U, v in sorted(verdicts.items())]}
    elif args.what == "central":
        cs = models.d_central_vertices(M, args.i, args.d)
        out = {"i": cs.i, "d": cs.d, "vertices": sorted(cs.vertices),
               "branching": sorted(u for u in M.trees[args.i] if models.is_d_branching(M, args.i, u, args.d))}
    else:
        if args.k is not None:
            out = {"closed_chains": [c.to_json() for c in models.closed_chains_from_model(M, args.k, args.l)]}
        else:
            out = {"chain": models.chain_from_odd_model(M).to_json()}
    _emit(args, _dump(out))
    return 0


# -- linkage -------------------------------------------------------------------------

def cmd_linkage(args) -> int:
    data = _load(args.input)
    L = linkages.Linkage.from_json(data["linkage"] if "linkage" in data else data)
    W = walls.Wall.from_json(data["wall"]) if "wall" in data else None
    if args.what == "classify":
        v = linkages.purity(L)
        print(v.kind)
        out = {"kind": v.kind, "pair": list(v.pair) if v.pair else None}
        if W is not None:
            out["odd"] = linkages.is_gamma_odd_linkage(W, L)
    elif args.what == "pure":
        P = linkages.extract_pure(L, args.t)
        out = {"kind": linkages.purity(P).kind, "linkage": P.to_json()}
    else:
        if W is None:
            raise GammaGraphError("this command needs a wall in the input")
        if args.what == "pack":
            cycles = linkages.packing_from_linkage(W, L, args.k, args.mode)
            out = {"mode": args.mode, "cycles": [C.to_json() for C in cycles]}
        elif args.k is not None:
            out = {"closed_chains": [c.to_json() for c in linkages.closed_chains_from_linkage(W, L, args.k, args.l)]}
        else:
            out = {"chain": linkages.chain_from_linkage(W, L, args.l).to_json()}
    _emit(args, _dump(out))
    return 0


# -- chain ---------------------------------------------------------------------------

def cmd_chain(args) -> int:
    data = _load(args.input)
    if args.what in ("wall", "closed-wall"):
        W = walls.Wall.from_json(data["wall"] if "wall" in data else data)
        if args.what == "wall":
            out = {"chain": chains.chain_from_odd_wall(W, args.l).to_json()}
        else:
            out = {"closed_chains": [c.to_json() for c in chains.closed_chains_from_wall(W, args.k, args.l)]}
    else:
        G = LabelledGraph.from_json(data["host"])
        ch = chains.ClosedCycleChain.from_json(data["chain"])
        problem = chains.validate_chain(ch, G)
        if problem:
            raise GammaGraphError(f"invalid chain: {problem}")
        I, alpha = chains.pigeonhole_select(ch, G, args.p, args.a)
        targets = [args.target] if args.target is not None else range(args.p ** args.a)
        cycles = {str(t): chains.reroute_to_weight(ch, G, I, alpha, t).to_json() for t in targets}
        out = {"indices": list(I), "alpha": alpha.to_json(), "cycles": cycles}
    _emit(args, _dump(out))
    return 0


# -- ep ------------------------------------------------------------------------------

def cmd_ep(args) -> int:
    files = [x for x in args.files if x != "solve"]
    path = args.input or (files[-1] if files else None)
    if path is None:
        raise UsageError("ep needs an input graph")
    G = _graph_of(_load(path))
    F = epsolve.FamilySpec.parse(args.family)
    caps = {"cap": args.cap, "max_vertices": args.max_vertices}
    repeats = not args.no_repeats
    if args.mode == "report":
        _emit(args, epsolve.batch_report([(path, G, F)], repeats, timing=not args.no_timing, **caps))
        return 0
    if args.mode == "packing":
        nu, wit = epsolve.max_packing(G, F, **caps)
        out = {"nu": nu, "packing": [H.to_json() for H in wit]}
    elif args.mode == "half":
        k, wit = epsolve.max_half_integral_packing(G, F, repeats, **caps)
        out = {"nu_half": k, "packing": [H.to_json() for H in wit]}
    else:
        tau, Z = epsolve.min_hitting_set(G, F, **caps)
        out = {"tau": tau, "hitting_set": Z}
    _emit(args, _dump(out))
    return 0


# -- repro ---------------------------------------------------------------------------

def cmd_repro(args) -> int:
    bundle = repro.run_suite(args.suite, args.seed, args.count)
    _emit(args, _dump(bundle))
    print(f"{args.suite}: {bundle['passed']}/{bundle['total']} passed", file=sys.stderr)
    return 0 if bundle["pass"] else 1


# -- parser --------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="gammagraph", description="Group-labelled graph toolkit.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def outputs(sp, dot=False):
        sp.add_argument("--out", help="write the JSON/CSV result here instead of stdout")
        if dot:
            sp.add_argument("--dot", help="also write a DOT rendering to this file")

    g = sub.add_parser("gen", help="generate instances")
    g.add_argument("kind", choices=["projective", "dnl", "graph", "wall", "linkage", "model", "chain"])
    g.add_argument("--n", type=int, default=3)
    g.add_argument("--m", type=int, default=4)
    g.add_argument("--ell", type=int, default=2)
    g.add_argument("--k", type=int, default=None)
    g.add_argument("--g", type=int, default=1)
    g.add_argument("--group", default="2")
    g.add_argument("--r", type=int, default=3)
    g.add_argument("--s", type=int, default=None)
    g.add_argument("--t", type=int, default=6)
    g.add_argument("--edges", type=int, default=10)
    g.add_argument("--length", type=int, default=6)
    g.add_argument("--weight", type=int, default=None, help="one weight for every brick")
    g.add_argument("--weights", default="1", help="comma list (linkage) or int|random (model)")
    g.add_argument("--purity", choices=["series", "nested", "crossing"], default="series")
    g.add_argument("--trees", choices=["trivial", "random"], default="trivial")
    g.add_argument("--bipartite", action="store_true", help="zero labelling moved by random shifts")
    g.add_argument("--shifts", type=int, default=10)
    g.add_argument("--p", type=int, default=None, help="chain increments avoid multiples of p")
    g.add_argument("--seed", type=int, default=None)
    outputs(g, dot=True)

    c = sub.add_parser("check", help="certify bipartiteness or wall properties")
    c.add_argument("what", choices=["bipartite", "nonzero", "wall"])
    c.add_argument("input")
    outputs(c, dot=True)

    d = sub.add_parser("decomp", help="3-blocks and shift reduction")
    d.add_argument("what", choices=["blocks", "labelled", "shift"])
    d.add_argument("input")
    outputs(d)

    m = sub.add_parser("model", help="K_t-model tools")
    m.add_argument("what", choices=["classify", "central", "chain"])
    m.add_argument("input")
    m.add_argument("--i", type=int, default=0)
    m.add_argument("--d", type=int, default=0)
    m.add_argument("--k", type=int, default=None)
    m.add_argument("--l", type=int, default=1)
    outputs(m)

    li = sub.add_parser("linkage", help="linkage tools")
    li.add_argument("what", choices=["classify", "pure", "pack", "chain"])
    li.add_argument("input")
    li.add_argument("--t", type=int, default=2)
    li.add_argument("--k", type=int, default=None)
    li.add_argument("--l", type=int, default=1)
    li.add_argument("--mode", choices=["integral", "half_integral"], default="integral")
    outputs(li)

    ch = sub.add_parser("chain", help="cycle-chain extraction and weight targeting")
    ch.add_argument("what", choices=["wall", "closed-wall", "target"])
    ch.add_argument("input")
    ch.add_argument("--l", type=int, default=None)
    ch.add_argument("--k", type=int, default=1)
    ch.add_argument("--p", type=int, default=3)
    ch.add_argument("--a", type=int, default=1)
    ch.add_argument("--target", type=int, default=None)
    outputs(ch)

    e = sub.add_parser("ep", help="exact packing and hitting numbers")
    e.add_argument("files", nargs="*", help="[solve] graph.json")
    e.add_argument("--input", default=None)
    e.add_argument("--family", default="nonzero", help="nonzero | weight:L | apaths:v1,v2,...")
    e.add_argument("--mode", choices=["packing", "half", "hitting", "report"], default="report")
    e.add_argument("--no-repeats", action="store_true", help="half-integral packings without repeated members")
    e.add_argument("--no-timing", action="store_true", help="leave runtime_ms empty for byte-stable output")
    e.add_argument("--cap", type=int, default=epsolve.DEFAULT_FAMILY_CAP)
    e.add_argument("--max-vertices", type=int, default=epsolve.DEFAULT_MAX_VERTICES)
    outputs(e)

    r = sub.add_parser("repro", help="run a reproduction suite")
    r.add_argument("suite", choices=list(repro.SUITES))
    r.add_argument("--seed", type=int, default=0)
    r.add_argument("--count", type=int, default=None, help="override the suite's item count")
    outputs(r)
    return p


COMMANDS = {"gen": cmd_gen, "check": cmd_check, "decomp": cmd_decomp, "model": cmd_model,
            "linkage": cmd_linkage, "chain": cmd_chain, "ep": cmd_ep, "repro": cmd_repro}


def run(argv=None) -> int:
    try:
        args = build_parser().parse_args(argv)
        if args.command == "gen" and args.kind == "projective" and args.k is None:
            args.k = args.n
        return COMMANDS[args.command](args)
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return 2
    except GammaGraphError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except SystemExit as exc:  # --help
        return int(exc.code or 0)


def main() -> None:
    sys.exit(run())


def load_schema(name: str) -> dict:
    """Bundled JSON schema, e.g. load_schema('graph')."""
    return json.loads((files("gammagraph") / "schemas" / f"{name}.schema.json").read_text(encoding="utf-8"))
