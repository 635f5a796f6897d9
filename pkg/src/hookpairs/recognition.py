"""Recognizers for the graph classes the pipelines dispatch on."""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations

from .graph_core import Graph, Multigraph, bits, line_graph, lowest, popcount, to_list
from .oracle import BERGE_CAP, SizeCapExceeded, find_odd_hole, induced_cycles

ROOT_EXHAUSTIVE_CAP = 14
ROOT_MULTIPLICITY = 2
NINE_CLIQUE_EXACT_CAP = 18


def find_claw(g: Graph) -> list[int] | None:
    """Claw as [center, a, b, c], or None."""
    for x in range(g.n):
        nb = g.adj[x]
        if popcount(nb) < 3:
            continue
        for a in bits(nb):
            rest = nb & ~g.adj[a] & ~((1 << (a + 1)) - 1)
            for b in bits(rest):
                third = rest & ~g.adj[b] & ~((1 << (b + 1)) - 1)
                if third:
                    return [x, a, b, lowest(third)]
    return None


def find_diamond(g: Graph) -> list[int] | None:
    """Diamond as [u, v, a, b] where uv is the central edge and ab the
    missing one."""
    for u, v in g.edges():
        common = g.adj[u] & g.adj[v]
        for a in bits(common):
            other = common & ~g.adj[a] & ~((1 << (a + 1)) - 1)
            if other:
                return [u, v, a, lowest(other)]
    return None


def find_pattern(g: Graph, pat: str) -> list[int] | None:
    if pat == "claw":
        return find_claw(g)
    if pat == "diamond":
        return find_diamond(g)
    if pat == "c5":
        for cyc in induced_cycles(g, min_len=5, max_len=5):
            return cyc
        return None
    if pat in ("odd_hole", "odd_antihole"):
        if g.n > BERGE_CAP:
            raise SizeCapExceeded(f"{pat} search: {g.n} exceeds cap {BERGE_CAP}")
        return find_odd_hole(g if pat == "odd_hole" else g.complement())
    raise ValueError(f"unknown pattern {pat!r}")


def flat_edges(g: Graph) -> list[tuple[int, int]]:
    return [(u, v) for u, v in g.edges() if not g.adj[u] & g.adj[v]]


# ---------------------------------------------------------------- elementary graphs

@dataclass(frozen=True)
class ElementaryResult:
    elementary: bool
    coloring: dict | None = None  # edge (u, v) -> 0/1
    odd_cycle: list | None = None  # list of edges forming an odd conflict cycle


def conflicts(g: Graph) -> tuple[list[tuple[int, int]], list[list[int]]]:
    """Conflict graph on the edges: xy and yz conflict when xz is a non-edge."""
    edges = g.edges()
    index = {e: i for i, e in enumerate(edges)}
    nbrs: list[list[int]] = [[] for _ in edges]
    for y in range(g.n):
        ny = to_list(g.adj[y])
        for x, z in combinations(ny, 2):
            if not g.has_edge(x, z):
                i = index[(min(x, y), max(x, y))]
                j = index[(min(y, z), max(y, z))]
                nbrs[i].append(j)
                nbrs[j].append(i)
    return edges, nbrs


def is_elementary(g: Graph) -> ElementaryResult:
    edges, nbrs = conflicts(g)
    color = [-1] * len(edges)
    parent = [-1] * len(edges)
    depth = [0] * len(edges)
    for s in range(len(edges)):
        if color[s] >= 0:
            continue
        color[s] = 0
        queue = [s]
        while queue:
            i = queue.pop(0)
            for j in nbrs[i]:
                if color[j] < 0:
                    color[j] = 1 - color[i]
                    parent[j] = i
                    depth[j] = depth[i] + 1
                    queue.append(j)
                elif color[j] == color[i]:
                    # odd cycle: paths from i and j up to their common ancestor
                    a, b = i, j
                    left, right = [a], [b]
                    while depth[a] > depth[b]:
                        a = parent[a]
                        left.append(a)
                    while depth[b] > depth[a]:
                        b = parent[b]
                        right.append(b)
                    while a != b:
                        a, b = parent[a], parent[b]
                        left.append(a)
                        right.append(b)
                    cycle = left + right[-2::-1]
                    return ElementaryResult(False, odd_cycle=[edges[c] for c in cycle])
    return ElementaryResult(True, coloring={e: color[i] for i, e in enumerate(edges)})


def check_elementary_coloring(g: Graph, coloring: dict) -> list[str]:
    problems = []
    for y in range(g.n):
        for x, z in combinations(to_list(g.adj[y]), 2):
            if g.has_edge(x, z):
                continue
            cx = coloring.get((min(x, y), max(x, y)))
            cz = coloring.get((min(y, z), max(y, z)))
            if cx is None or cz is None or cx == cz:
                problems.append(f"edges {x}{y} and {y}{z} conflict but share a colour")
    return problems


def check_conflict_cycle(g: Graph, cycle: list) -> list[str]:
    problems = []
    if len(cycle) % 2 == 0:
        problems.append("conflict cycle has even length")
    for i, e in enumerate(cycle):
        f = cycle[(i + 1) % len(cycle)]
        shared = set(e) & set(f)
        if len(shared) != 1:
            problems.append(f"{e} and {f} do not share exactly one vertex")
            continue
        x = (set(e) - shared).pop()
        z = (set(f) - shared).pop()
        if g.has_edge(x, z):
            problems.append(f"{e} and {f} do not conflict")
    return problems


# ---------------------------------------------------------------- line graph roots

def reconstruct_line_root(g: Graph, bipartite_required: bool = False, node_budget: int = 200_000) -> Multigraph | None:
    """Find a multigraph whose line graph is ``g`` (vertex i is root edge i).

    Each vertex of g is given a pair of endpoint labels so that two
    vertices are adjacent exactly when their pairs meet. Labels are
    introduced in order, which removes relabelling symmetry, and parallel
    edges are capped at multiplicity two. Above the exhaustive cap the
    search stops after ``node_budget`` nodes and answers None.
    """
    n = g.n
    if n == 0:
        return None
    # order vertices so each one after the first of its component has an
    # earlier neighbour
    order: list[int] = []
    seen = 0
    for s in range(n):
        if seen >> s & 1:
            continue
        seen |= 1 << s
        queue = [s]
        while queue:
            u = queue.pop(0)
            order.append(u)
            for x in bits(g.adj[u] & ~seen):
                seen |= 1 << x
                queue.append(x)
    ends: list[tuple[int, int] | None] = [None] * n
    budget = [node_budget if n > ROOT_EXHAUSTIVE_CAP else None]
    result: list[Multigraph | None] = [None]

    def consistent(v: int, pair: tuple[int, int]) -> bool:
        same = 0
        for u in range(n):
            e = ends[u]
            if e is None:
                continue
            meets = e[0] in pair or e[1] in pair
            if meets != g.has_edge(u, v):
                return False
            if e == pair:
                same += 1
        return same < ROOT_MULTIPLICITY

    def finish(labels: int) -> bool:
        h = Multigraph(labels, tuple(ends))  # type: ignore[arg-type]
        if bipartite_required and not h.is_bipartite():
            return False
        if line_graph(h) != g:
            raise AssertionError("root re-expansion mismatch")
        result[0] = h
        return True

    def search(i: int, labels: int) -> bool:
        if budget[0] is not None:
            budget[0] -= 1
            if budget[0] < 0:
                raise TimeoutError
        if i == n:
            return finish(labels)
        v = order[i]
        placed_nbrs = [u for u in bits(g.adj[v]) if ends[u] is not None]
        options: list[tuple[int, int]] = []
        if not placed_nbrs:
            options.append((labels, labels + 1))
        else:
            first = ends[placed_nbrs[0]]
            for a in dict.fromkeys(first):
                for b in list(range(labels)) + [labels]:
                    if b == a:
                        continue
                    options.append((min(a, b), max(a, b)))
        for pair in dict.fromkeys(options):
            if not consistent(v, pair):
                continue
            ends[v] = pair
            grown = max(labels, pair[1] + 1)
            if search(i + 1, grown):
                return True
            ends[v] = None
        return False

    try:
        search(0, 0)
    except TimeoutError:
        return None
    return result[0]


# ---------------------------------------------------------------- clique partitions

@dataclass(frozen=True)
class CliquePartitionResult:
    parts: list[int] | None
    status: str  # "found", "none" (proved impossible), or "unknown"


def _color_complement(g: Graph, k: int) -> list[int] | None:
    """Partition V(g) into at most k cliques (colouring of the complement)."""
    n = g.n
    comp = g.complement()
    order = sorted(range(n), key=lambda v: (-comp.degree(v), v))
    classes: list[int] = []

    def place(i: int) -> bool:
        if i == n:
            return True
        v = order[i]
        for c in range(len(classes)):
            if not comp.adj[v] & classes[c]:
                classes[c] |= 1 << v
                if place(i + 1):
                    return True
                classes[c] &= ~(1 << v)
        if len(classes) < k:
            classes.append(1 << v)
            if place(i + 1):
                return True
            classes.pop()
        return False

    return list(classes) if place(0) else None


def min_clique_cover(g: Graph) -> list[int]:
    for k in range(1, g.n + 1):
        parts = _color_complement(g, k)
        if parts is not None:
            return parts
    return []


def nine_clique_partition(g: Graph, parts_allowed: int = 9) -> CliquePartitionResult:
    if g.n <= NINE_CLIQUE_EXACT_CAP:
        parts = _color_complement(g, parts_allowed)
        return CliquePartitionResult(parts, "found" if parts is not None else "none")
    rest = g.full
    parts = []
    while rest and len(parts) < parts_allowed:
        clique = 0
        cand = rest
        while cand:
            v = max(bits(cand), key=lambda x: (popcount(g.adj[x] & cand), -x))
            clique |= 1 << v
            cand &= g.adj[v]
        parts.append(clique)
        rest &= ~clique
    if rest:
        return CliquePartitionResult(None, "unknown")
    return CliquePartitionResult(parts, "found")
