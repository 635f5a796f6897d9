"""Weighted homogeneous pairs in claw-free Berge graphs.

Pipeline: heavy-vertex shortcut, clique-separator tree decomposition,
central bag, then either a nine-clique partition of the bag or the
elementary-graph route through line graphs of bipartite multigraphs.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from .graph_core import (
    Graph,
    GraphError,
    Measure,
    Multigraph,
    bits,
    component_of,
    components,
    largest_component_or_split,
    AntiPair,
    lowest,
    measure_for,
    popcount,
    to_list,
    to_mask,
)
from .line_pairs import DELTA1, LineClique, line_graph_pair
from .oracle import BERGE_CAP, PairWitness, best_homogeneous_pair, is_berge_small, make_pair
from .recognition import find_claw, is_elementary, nine_clique_partition, reconstruct_line_root

DELTA2 = Fraction(1, 28)
DELTA3 = Fraction(1, 58)


# ---------------------------------------------------------------- tree decompositions

@dataclass(frozen=True)
class TreeDecomposition:
    bags: tuple[int, ...]
    edges: tuple[tuple[int, int], ...]

    def to_json(self) -> dict:
        return {
            "type": "tree_decomposition",
            "nodes": list(range(len(self.bags))),
            "edges": [list(e) for e in self.edges],
            "bags": [to_list(b) for b in self.bags],
        }

    @classmethod
    def from_json(cls, data: dict) -> "TreeDecomposition":
        return cls(tuple(to_mask(b) for b in data["bags"]), tuple(tuple(e) for e in data["edges"]))


def validate_tree_decomposition(g: Graph, td: TreeDecomposition) -> list[str]:
    problems = []
    m = len(td.bags)
    if m == 0:
        return ["no bags"]
    if len(td.edges) != m - 1:
        problems.append("tree must have one edge fewer than nodes")
    nbrs: list[set] = [set() for _ in range(m)]
    for a, b in td.edges:
        if not (0 <= a < m and 0 <= b < m) or a == b:
            problems.append(f"bad tree edge {a}-{b}")
            continue
        nbrs[a].add(b)
        nbrs[b].add(a)

    def connected(nodes: set) -> bool:
        if not nodes:
            return False
        start = min(nodes)
        seen = {start}
        stack = [start]
        while stack:
            t = stack.pop()
            for s in nbrs[t]:
                if s in nodes and s not in seen:
                    seen.add(s)
                    stack.append(s)
        return seen == nodes

    if not connected(set(range(m))):
        problems.append("tree is not connected")
    cover = 0
    for b in td.bags:
        cover |= b
    if cover != g.full:
        problems.append(f"vertices {to_list(g.full & ~cover)} not covered")
    for v in range(g.n):
        holding = {t for t, b in enumerate(td.bags) if b >> v & 1}
        if holding and not connected(holding):
            problems.append(f"bags holding {v} are not connected in the tree")
    for u, v in g.edges():
        if not any(b >> u & 1 and b >> v & 1 for b in td.bags):
            problems.append(f"edge {u}-{v} lies in no bag")
    return problems


def cliques_by_size(g: Graph, mask: int) -> list[int]:
    """All nonempty cliques inside ``mask``, by size then lexicographically."""
    out: list[int] = []

    def grow(clique: int, cand: int) -> None:
        while cand:
            v = lowest(cand)
            cand &= cand - 1
            c = clique | (1 << v)
            out.append(c)
            grow(c, cand & g.adj[v])

    grow(0, mask)
    out.sort(key=lambda c: (popcount(c), to_list(c)))
    return out


def separates(g: Graph, s: int, mask: int) -> bool:
    rest = mask & ~s
    return bool(rest) and component_of(g, lowest(rest), rest) != rest


def min_clique_separator(g: Graph, mask: int) -> int | None:
    for s in cliques_by_size(g, mask):
        if separates(g, s, mask):
            return s
    return None


def clique_separator_decomposition(g: Graph) -> TreeDecomposition:
    """Tree decomposition whose bags have no clique separator.

    Disconnected graphs are decomposed per component and the component
    trees are chained through their first nodes.
    """
    bags: list[int] = []
    edges: list[tuple[int, int]] = []

    def decompose(mask: int) -> int:
        """Decompose G[mask]; return the id of its first node."""
        s = min_clique_separator(g, mask)
        if s is None:
            bags.append(mask)
            return len(bags) - 1
        rest = mask & ~s
        a = next(c for c in components(g, rest) if g.neighborhood(c) & mask == s)
        first = decompose(a | s)
        second = decompose(mask & ~a)
        edges.append((_holding(s, first, second), _holding(s, second, len(bags))))
        return first

    def _holding(s: int, start: int, stop: int) -> int:
        # node ids of one sub-decomposition are contiguous
        for t in range(start, stop):
            if bags[t] & s == s:
                return t
        raise AssertionError("separator not inside any bag")

    prev = None
    for comp in components(g):
        root = decompose(comp)
        if prev is not None:
            edges.append((prev, root))
        prev = root
    td = TreeDecomposition(tuple(bags), tuple(edges))
    problems = validate_tree_decomposition(g, td)
    if problems:
        raise AssertionError("; ".join(problems))
    return td


# ---------------------------------------------------------------- central bag

@dataclass(frozen=True)
class BagOutcome:
    node: int
    bag: int
    mu: Fraction


@dataclass(frozen=True)
class BagAntiPair:
    P: int
    Q: int
    mu_P: Fraction
    mu_Q: Fraction


def central_bag(g: Graph, mu: Measure, td: TreeDecomposition, delta) -> BagOutcome | BagAntiPair:
    delta = Fraction(delta)
    if not (0 < delta <= Fraction(1, 4)):
        raise GraphError("delta must lie in (0, 1/4]")
    m = len(td.bags)
    nbrs: list[list[int]] = [[] for _ in range(m)]
    for a, b in td.edges:
        nbrs[a].append(b)
        nbrs[b].append(a)

    def side_union(start: int, banned: int) -> int:
        union, seen, stack = 0, {start, banned}, [start]
        while stack:
            t = stack.pop()
            union |= td.bags[t]
            for s in nbrs[t]:
                if s not in seen:
                    seen.add(s)
                    stack.append(s)
        return union

    out_degree = [0] * m
    for a, b in td.edges:
        wa = mu.mass(side_union(a, b))
        wb = mu.mass(side_union(b, a))
        if wa < wb or (wa == wb and b > a):
            out_degree[a] += 1  # a -> b
        else:
            out_degree[b] += 1
    t = min(i for i in range(m) if out_degree[i] == 0)
    bag = td.bags[t]
    # vertices seen only below a neighbour of t carry at most half the mass
    for s in nbrs[t]:
        if mu.mass(side_union(s, t) & ~bag) * 2 > mu.total:
            raise AssertionError("central node has a subtree heavier than half")
    if mu.mass(bag) >= Fraction(1, 2) - delta:
        return BagOutcome(t, bag, mu.mass(bag))
    res = largest_component_or_split(g, mu, g.full & ~bag, delta)
    if not isinstance(res, AntiPair):
        raise AssertionError("big component outside a central bag")
    return BagAntiPair(res.P, res.Q, mu.mass(res.P), mu.mass(res.Q))


# ---------------------------------------------------------------- elementary graphs

@dataclass(frozen=True)
class CliqueOutcome:
    K: int
    mu: Fraction
    route: str


@dataclass(frozen=True)
class AntiOutcome:
    P: int
    Q: int
    mu_P: Fraction
    mu_Q: Fraction
    route: str


def _augmentation_candidates(g: Graph) -> list[tuple[int, int]]:
    """Pairs (X, Y) of disjoint cliques that look like an augmented flat edge:
    each side has one common neighbourhood outside X and Y, those two
    neighbourhoods are disjoint, and at least one X-Y edge exists."""
    found = []
    seeds = []
    for a, b in g.edges():
        seeds.append((1 << a, 1 << b))
        twins_a = to_mask(v for v in range(g.n) if g.adj[v] | 1 << v == g.adj[a] | 1 << a)
        twins_b = to_mask(v for v in range(g.n) if g.adj[v] | 1 << v == g.adj[b] | 1 << b)
        if not twins_a & twins_b:
            seeds.append((twins_a, twins_b))
    for x, y in seeds:
        for _ in range(g.n):
            both = x | y
            grow_y = 0
            for v in bits(g.full & ~both):
                hit = g.adj[v] & x
                if hit and hit != x:
                    grow_y |= 1 << v
            grow_x = 0
            for v in bits(g.full & ~both & ~grow_y):
                hit = g.adj[v] & y
                if hit and hit != y:
                    grow_x |= 1 << v
            if not grow_x and not grow_y:
                break
            x |= grow_x
            y |= grow_y
        if x & y or popcount(x | y) < 3:
            continue
        if not (g.is_clique(x) and g.is_clique(y) and g.has_edge_between(x, y)):
            continue
        out_x = g.neighborhood(x) & ~y
        out_y = g.neighborhood(y) & ~x
        if out_x & out_y:
            continue
        if any(g.adj[v] & ~(x | y) != out_x for v in bits(x)):
            continue
        if any(g.adj[v] & ~(x | y) != out_y for v in bits(y)):
            continue
        if (x, y) not in found and (y, x) not in found:
            found.append((x, y))
    found.sort(key=lambda p: (-popcount(p[0] | p[1]), to_list(p[0] | p[1])))
    return found


def _contract(g: Graph, groups: list[int]) -> Graph:
    """Quotient where every group becomes one vertex (groups partition V)."""
    index = {}
    for i, grp in enumerate(groups):
        for v in bits(grp):
            index[v] = i
    edges = set()
    for u, v in g.edges():
        a, b = index[u], index[v]
        if a != b:
            edges.add((min(a, b), max(a, b)))
    return Graph.from_edges(len(groups), sorted(edges))


def _find_root(g: Graph) -> tuple[list[int], Multigraph] | None:
    """Search for a matching of augmented flat edges whose contraction is the
    line graph of a bipartite multigraph. Greedy over candidates, largest
    first, with a direct attempt on g itself."""
    singletons = [1 << v for v in range(g.n)]
    root = reconstruct_line_root(g, bipartite_required=True)
    if root is not None:
        return singletons, root
    cands = _augmentation_candidates(g)
    for start in range(len(cands)):
        used = 0
        chosen: list[tuple[int, int]] = []
        for x, y in cands[start:] + cands[:start]:
            if (x | y) & used:
                continue
            chosen.append((x, y))
            used |= x | y
            groups = [grp for pair in chosen for grp in pair] + [1 << v for v in bits(g.full & ~used)]
            groups.sort(key=lowest)
            contracted = _contract(g, groups)
            # the augmented edges must be flat in the contracted graph
            ok = True
            for px, py in chosen:
                ix, iy = groups.index(px), groups.index(py)
                if contracted.adj[ix] & contracted.adj[iy]:
                    ok = False
            if not ok:
                continue
            root = reconstruct_line_root(contracted, bipartite_required=True)
            if root is not None:
                return groups, root
    return None


def elementary_pair(g: Graph, mu: Measure) -> CliqueOutcome | AntiOutcome:
    """Clique of measure at least 3/28 or anti-adjacent pair with both sides
    at least 1/28 in an elementary graph.

    The graph is reduced to a line graph of a bipartite multigraph by
    undoing augmentations found with a greedy search. When that search
    fails the exact oracle supplies the pair and the route says so.
    """
    if not is_elementary(g).elementary:
        raise GraphError("graph is not elementary")
    mu.check_probability()
    if g.n == 1:
        return CliqueOutcome(1, mu.total, "trivial")
    found = _find_root(g)
    if found is not None:
        groups, root = found
        mu2 = Measure(tuple(mu.mass(grp) for grp in groups))
        res = line_graph_pair(root, mu2, DELTA1)
        if isinstance(res, LineClique):
            members = list(bits(res.K))
            if len(members) <= 2:
                heavy = max(members, key=lambda i: (mu2[i], -i))
                k = groups[heavy]
            else:
                k = 0
                for i in members:
                    k |= groups[i]
            if not g.is_clique(k):
                raise AssertionError("expanded clique is not a clique")
            return CliqueOutcome(k, mu.mass(k), "line-root")
        p = q = 0
        for i in bits(res.P):
            p |= groups[i]
        for i in bits(res.Q):
            q |= groups[i]
        if g.has_edge_between(p, q):
            raise AssertionError("expanded anti-pair has an edge")
        return AntiOutcome(p, q, mu.mass(p), mu.mass(q), "line-root")
    best = best_homogeneous_pair(g, mu)
    clique = _heaviest_clique(g, mu)
    if best is None or (mu.mass(clique) >= 3 * DELTA2 and best.value < DELTA2):
        return CliqueOutcome(clique, mu.mass(clique), "oracle")
    if best.kind == "anti-adjacent":
        return AntiOutcome(best.P, best.Q, best.mu_P, best.mu_Q, "oracle")
    k = best.P | best.Q
    if g.is_clique(k):
        return CliqueOutcome(k, mu.mass(k), "oracle")
    return CliqueOutcome(clique, mu.mass(clique), "oracle")


def _heaviest_clique(g: Graph, mu: Measure) -> int:
    best, best_w = 0, Fraction(-1)
    for c in cliques_by_size(g, g.full):
        w = mu.mass(c)
        if w > best_w:
            best, best_w = c, w
    return best


# ---------------------------------------------------------------- main pipeline

@dataclass(frozen=True)
class CFBResult:
    pair: PairWitness
    route: list[str] = field(default_factory=list)


def _clique_to_pair(g: Graph, mu: Measure, k: int, delta: Fraction) -> PairWitness:
    """Split a clique into two sides of measure at least delta each
    (every vertex is lighter than delta here)."""
    p, acc = 0, Fraction(0)
    for v in bits(k):
        if acc >= delta:
            break
        p |= 1 << v
        acc += mu[v]
    return make_pair(g, mu, p, k & ~p, "adjacent")


def check_claw_free_berge(g: Graph) -> list[str]:
    problems = []
    claw = find_claw(g)
    if claw is not None:
        problems.append(f"claw {claw}")
    if g.n <= BERGE_CAP:
        b = is_berge_small(g)
        if not b.berge:
            problems.append(f"{b.kind} {b.certificate}")
    return problems


def clawfree_berge_pair(g: Graph, mu: Measure | str | None = None, validate: bool = True) -> CFBResult:
    mu = measure_for(g, mu)
    mu.check_probability()
    d = DELTA3
    if validate:
        problems = check_claw_free_berge(g)
        if problems:
            raise GraphError("input is not claw-free Berge: " + "; ".join(problems))
    for v in range(g.n):
        if mu[v] > 1 - 2 * d:
            raise GraphError(f"vertex {v} has measure {mu[v]} > 1 - 2/58")
    for v in range(g.n):
        if mu[v] >= d:
            nb = g.adj[v]
            non = g.full & ~nb & ~(1 << v)
            if mu.mass(nb) >= d:
                return CFBResult(make_pair(g, mu, 1 << v, nb, "adjacent"), ["heavy-vertex"])
            return CFBResult(make_pair(g, mu, 1 << v, non, "anti-adjacent"), ["heavy-vertex"])
    td = clique_separator_decomposition(g)
    central = central_bag(g, mu, td, d)
    if isinstance(central, BagAntiPair):
        return CFBResult(make_pair(g, mu, central.P, central.Q, "anti-adjacent"), ["central-bag-split"])
    y = central.bag
    sub, labels = g.induced(y)
    mu_y = mu.mass(y)
    sub_mu = Measure(tuple(mu[v] / mu_y for v in labels))

    def lift(mask: int) -> int:
        return to_mask(labels[i] for i in bits(mask))

    nine = nine_clique_partition(sub)
    if nine.parts is not None:
        heavy = max(nine.parts, key=lambda c: (sub_mu.mass(c), -lowest(c)))
        k = lift(heavy)
        return CFBResult(_clique_to_pair(g, mu, k, d), ["central-bag", "nine-cliques"])
    res = elementary_pair(sub, sub_mu)
    route = ["central-bag", "elementary", res.route]
    if isinstance(res, CliqueOutcome):
        return CFBResult(_clique_to_pair(g, mu, lift(res.K), d), route)
    return CFBResult(make_pair(g, mu, lift(res.P), lift(res.Q), "anti-adjacent"), route)
