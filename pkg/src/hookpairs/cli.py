"""Command-line front end. Every command prints one JSON document.

Exit codes: 0 when a witness was produced or verified, 2 for an honest
negative (no witness, report, failed validation), 1 for bad input.
"""

from __future__ import annotations

import argparse
import json
import random
import sys
import warnings
from fractions import Fraction
from pathlib import Path

from . import __version__
from .clawfree_berge import (
    BagAntiPair,
    TreeDecomposition,
    central_bag,
    clawfree_berge_pair,
    clique_separator_decomposition,
    validate_tree_decomposition,
)
from .counterexample import random_no_seh_graph, verify_no_large_pair
from .graph_core import (
    Graph,
    GraphError,
    Measure,
    Multigraph,
    build_named,
    double_hook,
    is_module,
    line_graph,
    measure_for,
    quotient,
    to_list,
    to_mask,
)
from .hook_engine import (
    ActiveHook,
    Constants,
    HypothesisFailure,
    Report,
    TechLog,
    main_hook_pipeline,
    tech_hooks,
    validate_active_hook,
)
from .line_pairs import line_graph_pair, outcome_to_json
from .oracle import (
    SizeCapExceeded,
    best_homogeneous_pair,
    check_embedding,
    check_pair,
    contains_induced,
    is_berge_small,
    max_homogeneous_set,
)
from .structured import HomPair, StructuredPair, sparse_to_structured, tech_claw_free, validate_structured

SCHEMA_VERSION = 1


class InputError(Exception):
    pass


# ---------------------------------------------------------------- io

def _read_edges(text: str) -> tuple[int | None, list[tuple[int, int]]]:
    n = None
    edges = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        try:
            nums = [int(p) for p in parts]
        except ValueError:
            raise InputError(f"line {lineno}: expected integers, got {raw!r}") from None
        if len(nums) == 1 and n is None and not edges:
            n = nums[0]
        elif len(nums) == 2:
            edges.append((nums[0], nums[1]))
        else:
            raise InputError(f"line {lineno}: expected 'u v' or a leading vertex count")
    return n, edges


def load_graph(path: str) -> Graph:
    p = Path(path)
    try:
        data = p.read_bytes()
    except OSError as err:
        raise InputError(str(err)) from None
    if p.suffix == ".g6":
        import networkx as nx

        try:
            h = nx.from_graph6_bytes(data.strip().splitlines()[0])
        except Exception as err:  # networkx raises several types here
            raise InputError(f"malformed graph6: {err}") from None
        return Graph.from_networkx(h)
    n, edges = _read_edges(data.decode())
    if n is None:
        n = max((max(e) for e in edges), default=-1) + 1
    try:
        return Graph.from_edges(n, edges)
    except GraphError as err:
        raise InputError(str(err)) from None


def load_multigraph(path: str) -> Multigraph:
    p = Path(path)
    if p.suffix == ".g6":
        g = load_graph(path)
        return Multigraph.of(g.n, g.edges())
    try:
        n, edges = _read_edges(p.read_text())
    except OSError as err:
        raise InputError(str(err)) from None
    if n is None:
        n = max((max(e) for e in edges), default=-1) + 1
    try:
        return Multigraph.of(n, edges)
    except GraphError as err:
        raise InputError(str(err)) from None


def graph6(g: Graph) -> str:
    import networkx as nx

    return nx.to_graph6_bytes(g.to_networkx(), header=False).decode().strip()


def load_measure(spec: str | None, size: int) -> Measure:
    if spec is None or spec == "uniform":
        return Measure.uniform(size)
    try:
        data = json.loads(Path(spec).read_text())
    except (OSError, ValueError) as err:
        raise InputError(f"cannot read measure: {err}") from None
    weights = data.get("weights") if isinstance(data, dict) else data
    try:
        mu = Measure.from_json(weights)
    except (GraphError, ValueError, TypeError) as err:
        raise InputError(f"bad measure: {err}") from None
    if len(mu) != size:
        raise InputError(f"measure has {len(mu)} weights, expected {size}")
    return mu


def load_json(path: str) -> dict:
    try:
        return json.loads(Path(path).read_text())
    except (OSError, ValueError) as err:
        raise InputError(f"cannot read {path}: {err}") from None


def dump(doc: dict) -> str:
    return json.dumps({"schema_version": SCHEMA_VERSION, **doc}, sort_keys=True, separators=(",", ":"))


def _need(args, name: str):
    value = getattr(args, name, None)
    if value is None:
        raise InputError(f"--{name.replace('_', '-')} is required")
    return value


def _frac(text: str) -> Fraction:
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"not a rational number: {text!r}") from None


# ---------------------------------------------------------------- commands

def cmd_oracle(args) -> tuple[int, dict]:
    g = load_graph(_need(args, "graph"))
    if args.query == "hom":
        size, mask = max_homogeneous_set(g)
        kind = "clique" if g.is_clique(mask) else "independent"
        return 0, {"hom": size, "witness": to_list(mask), "kind": kind}
    if args.query == "pair":
        mu = load_measure(args.measure, g.n)
        res = best_homogeneous_pair(g, mu)
        if res is None:
            return 2, {"result": None}
        return 0, {"result": {**res.to_json(), "graph": "input"}}
    if args.query == "berge":
        res = is_berge_small(g)
        return 0, {"berge": res.berge, "kind": res.kind, "certificate": res.certificate}
    pattern = build_named(_need(args, "pattern"), args.k or 0) if args.pattern != "file" else load_graph(_need(args, "pattern_graph"))
    emb = contains_induced(g, pattern)
    if emb is None:
        return 2, {"embedding": None}
    return 0, {"embedding": emb, "pattern": args.pattern, "k": args.k or 0}


def cmd_line_pair(args) -> tuple[int, dict]:
    h = load_multigraph(_need(args, "graph"))
    mu = load_measure(args.measure, len(h.edges))
    delta = args.delta if args.delta is not None else Fraction(1, 14)
    res = line_graph_pair(h, mu, delta)
    out = outcome_to_json(res)
    out["graph"] = "line_graph"
    out["root_edges"] = [list(e) for e in h.edges]
    return 0, {"result": out}


def cmd_cfb_pair(args) -> tuple[int, dict]:
    g = load_graph(_need(args, "graph"))
    mu = measure_for(g, load_measure(args.measure, g.n))
    res = clawfree_berge_pair(g, mu)
    return 0, {"result": {**res.pair.to_json(), "route": res.route, "graph": "input"}}


def cmd_decompose(args) -> tuple[int, dict]:
    g = load_graph(_need(args, "graph"))
    td = clique_separator_decomposition(g)
    out = {"result": {**td.to_json(), "type": "tree_decomposition", "graph": "input"}}
    if args.delta is not None:
        mu = load_measure(args.measure, g.n)
        bag = central_bag(g, mu, td, args.delta)
        if isinstance(bag, BagAntiPair):
            out["central"] = {"type": "pair", "kind": "anti-adjacent", "P": to_list(bag.P), "Q": to_list(bag.Q),
                              "mu_P": str(bag.mu_P), "mu_Q": str(bag.mu_Q), "graph": "input"}
        else:
            out["central"] = {"type": "bag", "node": bag.node, "bag": to_list(bag.bag), "mu": str(bag.mu)}
    return 0, out


def _pair_json(res: HomPair, labels=None) -> dict:
    lift = (lambda m: [labels[v] for v in to_list(m)]) if labels else to_list
    return {"type": "pair", "kind": res.kind, "P": lift(res.P), "Q": lift(res.Q), "graph": "input"}


def cmd_sparse_structure(args) -> tuple[int, dict]:
    g = load_graph(_need(args, "graph"))
    res = sparse_to_structured(g, _need(args, "eps"))
    if isinstance(res, HomPair):
        return 0, {"result": _pair_json(res)}
    return 0, {"result": res.to_json()}


def _load_pair(args) -> StructuredPair:
    try:
        return StructuredPair.from_json(load_json(_need(args, "pair")))
    except (KeyError, GraphError, ValueError) as err:
        raise InputError(f"bad structured pair: {err}") from None


def cmd_tech_clawfree(args) -> tuple[int, dict]:
    sp = _load_pair(args)
    res = tech_claw_free(sp)
    local = {v: i for i, v in enumerate(sp.labels)} if sp.labels is not None else None
    here = (lambda vs: sorted(local[v] for v in vs)) if local else sorted
    return 0, {
        "result": {
            "type": "modules",
            "shat": here(res.shat),
            "parts": [here(p) for p in res.parts],
            "quotient_edges": res.quotient_edges,
            "filtered_eps": str(res.filtered_eps),
            "graph": "pair",
        }
    }


def _constants(args, k: int, eps=None) -> Constants:
    return Constants.of(k, args.eps if args.eps is not None else eps, args.delta, args.gamma)


def cmd_tech_hooks(args) -> tuple[int, dict]:
    sp = _load_pair(args)
    k = args.k or 0
    c = _constants(args, k, sp.eps)
    log = TechLog()
    try:
        out = tech_hooks(sp, k, c, strict=not args.relaxed, log=log)
    except HypothesisFailure as err:
        return 2, {"result": {"type": "report", "stage": "tech_hooks", "reason": err.reason, "details": _jsonable(err.details)}, "log": log.to_json()}
    return 0, {"result": {**out.to_json(), "graph": "pair"}, "log": log.to_json()}


def cmd_main_hook(args) -> tuple[int, dict]:
    g = load_graph(_need(args, "graph"))
    k = args.k if args.k is not None else 2
    kwargs = {}
    if args.degree_ratio is not None:
        kwargs["degree_ratio"] = args.degree_ratio
    if args.sd_frac is not None:
        kwargs["sd_frac"] = args.sd_frac
    if args.sd_eps is not None:
        kwargs["sd_eps"] = args.sd_eps
    c = _constants(args, k) if (args.eps or args.delta or args.gamma) else None
    out = main_hook_pipeline(g, k, constants=c, strict=not args.relaxed, **kwargs)
    doc = out.to_json()
    if isinstance(out, Report):
        return 2, {"result": _jsonable(doc)}
    doc["graph"] = "complement" if doc.get("complemented") else "input"
    return 0, {"result": doc}


def cmd_counterexample(args) -> tuple[int, dict]:
    seed = args.seed
    if seed is None:
        seed = random.SystemRandom().randrange(2**32)
        print(f"seed: {seed}", file=sys.stderr)
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always")
        res = random_no_seh_graph(_need(args, "n"), _need(args, "delta"), args.k or 4, seed, p=args.p)
    out = {
        "result": {"type": "graph", "graph6": graph6(res.graph), "kept": list(res.kept)},
        "stats": res.stats,
        "warnings": [str(w.message) for w in caught],
    }
    verdict = verify_no_large_pair(res.graph, args.delta)
    out["verdict"] = verdict.to_json()
    return (0 if verdict.status == "VerifiedAbsent" else 2), out


def _jsonable(obj):
    if isinstance(obj, dict):
        return {str(k): _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, Fraction):
        return str(obj)
    return obj


# ---------------------------------------------------------------- validation

def validate_witness(doc: dict, g: Graph | None) -> list[str]:
    """Re-check a witness document produced by any command."""
    w = doc.get("result", doc)
    if w is None:
        return ["document holds no witness"]
    kind = w.get("type")
    domain = w.get("graph", "input")
    if domain == "pair":
        return ["witness refers to a structured pair; validate with the pair's own graph"] if g is None else _validate_on(w, kind, g)
    if domain == "line_graph":
        h = Multigraph.of(1 + max((max(e) for e in w["root_edges"]), default=-1), [tuple(e) for e in w["root_edges"]])
        host = line_graph(h)
        if kind == "clique":
            return [] if host.is_clique(to_mask(w["K"])) else ["K is not a clique of the line graph"]
        return check_pair(host, to_mask(w["P"]), to_mask(w["Q"]), w["kind"])
    if g is None:
        return ["--graph is required for this witness"]
    if domain == "complement":
        g = g.complement()
    return _validate_on(w, kind, g)


def _validate_on(w: dict, kind: str, g: Graph) -> list[str]:
    if kind == "pair":
        return check_pair(g, to_mask(w["P"]), to_mask(w["Q"]), w["kind"])
    if kind == "active_hook":
        h = ActiveHook(to_mask(w["X"]), to_mask(w["R"]), w["active"], w["ell"], tuple(w["embedding"]))
        return validate_active_hook(g, h)
    if kind == "double_hook":
        return check_embedding(g, double_hook(w["ell"]).graph, list(w["embedding"]))
    if kind == "tree_decomposition":
        return validate_tree_decomposition(g, TreeDecomposition.from_json(w))
    if kind == "structured_pair":
        return validate_structured(StructuredPair.from_json(w))
    if kind == "modules":
        parts = [to_mask(p) for p in w["parts"]]
        host = to_mask(w["shat"])
        problems = [f"part {to_list(p)} is not a module" for p in parts if not is_module(g, p, host)]
        if not problems:
            q = quotient(g, parts)
            if sorted(map(tuple, w["quotient_edges"])) != sorted(map(tuple, q.edges())):
                problems.append("quotient edges do not match")
        return problems
    return [f"unknown witness type {kind!r}"]


def cmd_validate(args) -> tuple[int, dict]:
    doc = load_json(args.witness)
    g = load_graph(args.graph) if args.graph else None
    if g is None and args.pair:
        g = _load_pair(args).g
    try:
        problems = validate_witness(doc, g)
    except (KeyError, TypeError, GraphError) as err:
        raise InputError(f"malformed witness: {err}") from None
    return (0 if not problems else 2), {"valid": not problems, "problems": problems}


# ---------------------------------------------------------------- parser

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--graph", help="graph file (.g6 or whitespace edge list)")
    common.add_argument("--measure", help="JSON list of rational weights, or 'uniform'")
    common.add_argument("--k", type=int)
    common.add_argument("--delta", type=_frac)
    common.add_argument("--eps", type=_frac)
    common.add_argument("--gamma", type=_frac)
    common.add_argument("--seed", type=int)
    common.add_argument("--format", choices=["json"], default="json")
    common.add_argument("--pair", help="structured pair JSON")
    common.add_argument("--relaxed", action="store_true", help="run even when the constants miss the covering inequality")

    parser = argparse.ArgumentParser(prog="hookpairs", description="Homogeneous pairs and induced hooks.")
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    o = sub.add_parser("oracle", parents=[common], help="exact brute-force answers")
    o.add_argument("query", choices=["hom", "pair", "berge", "induced"])
    o.add_argument("--pattern", choices=["path", "cycle", "clique", "claw", "hook", "double_hook", "file"])
    o.add_argument("--pattern-graph")
    o.set_defaults(func=cmd_oracle)

    for name, func in (
        ("line-pair", cmd_line_pair),
        ("cfb-pair", cmd_cfb_pair),
        ("decompose", cmd_decompose),
        ("sparse-structure", cmd_sparse_structure),
        ("tech-clawfree", cmd_tech_clawfree),
        ("tech-hooks", cmd_tech_hooks),
    ):
        sub.add_parser(name, parents=[common]).set_defaults(func=func)

    m = sub.add_parser("main-hook", parents=[common])
    m.add_argument("--degree-ratio", type=_frac)
    m.add_argument("--sd-frac", type=_frac)
    m.add_argument("--sd-eps", type=_frac)
    m.set_defaults(func=cmd_main_hook)

    c = sub.add_parser("counterexample", parents=[common])
    c.add_argument("--n", type=int)
    c.add_argument("--p", type=_frac, help="override the edge probability (exploration only)")
    c.set_defaults(func=cmd_counterexample)

    v = sub.add_parser("validate", parents=[common])
    v.add_argument("witness")
    v.set_defaults(func=cmd_validate)
    return parser


def run(argv: list[str] | None = None, out=None) -> int:
    out = out or sys.stdout
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 0 if exc.code == 0 else 1
    try:
        code, doc = args.func(args)
    except (InputError, GraphError, SizeCapExceeded) as err:
        print(dump({"command": args.command, "error": str(err)}), file=out)
        return 1
    print(dump({"command": args.command, **doc}), file=out)
    return code


def main() -> None:
    sys.exit(run())
