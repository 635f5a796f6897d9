"""Graphs, multigraphs and measures over dense integer vertices.

Vertex sets are Python ints used as bitmasks: bit ``v`` set means vertex
``v`` is in the set. Graphs are immutable; every operation returns a new
value.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Iterator, Sequence


class GraphError(ValueError):
    """Raised when an input violates an operation's precondition."""


# ---------------------------------------------------------------- bitsets

def bits(mask: int) -> Iterator[int]:
    """Yield the indices of set bits in ascending order."""
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


def to_mask(vertices: Iterable[int]) -> int:
    m = 0
    for v in vertices:
        m |= 1 << v
    return m


def to_list(mask: int) -> list[int]:
    return list(bits(mask))


def popcount(mask: int) -> int:
    return bin(mask).count("1")


def lowest(mask: int) -> int:
    return (mask & -mask).bit_length() - 1


# ---------------------------------------------------------------- graphs

@dataclass(frozen=True)
class Graph:
    """Simple undirected graph; ``adj[v]`` is the neighbourhood bitmask of v."""

    n: int
    adj: tuple[int, ...]

    def __post_init__(self):
        if len(self.adj) != self.n:
            raise GraphError("adjacency length does not match n")
        full = (1 << self.n) - 1
        for v, a in enumerate(self.adj):
            if a >> v & 1:
                raise GraphError(f"self-loop at {v}")
            if a & ~full:
                raise GraphError(f"neighbour of {v} out of range")
            for u in bits(a):
                if not self.adj[u] >> v & 1:
                    raise GraphError(f"asymmetric adjacency {v}-{u}")

    @classmethod
    def from_edges(cls, n: int, edges: Iterable[tuple[int, int]]) -> "Graph":
        adj = [0] * n
        for u, v in edges:
            if u == v:
                raise GraphError(f"self-loop at {u}")
            if not (0 <= u < n and 0 <= v < n):
                raise GraphError(f"edge {u}-{v} out of range")
            adj[u] |= 1 << v
            adj[v] |= 1 << u
        return cls(n, tuple(adj))

    @property
    def full(self) -> int:
        return (1 << self.n) - 1

    def has_edge(self, u: int, v: int) -> bool:
        return bool(self.adj[u] >> v & 1)

    def degree(self, v: int, within: int | None = None) -> int:
        a = self.adj[v] if within is None else self.adj[v] & within
        return popcount(a)

    def edges(self) -> list[tuple[int, int]]:
        return [(u, v) for u in range(self.n) for v in bits(self.adj[u] >> (u + 1) << (u + 1))]

    def edge_count(self) -> int:
        return sum(popcount(a) for a in self.adj) // 2

    def complement(self) -> "Graph":
        full = self.full
        return Graph(self.n, tuple(full & ~a & ~(1 << v) for v, a in enumerate(self.adj)))

    def neighborhood(self, mask: int) -> int:
        """Open neighbourhood N(X) = union of N(x) minus X."""
        out = 0
        for v in bits(mask):
            out |= self.adj[v]
        return out & ~mask

    def closed_neighborhood(self, mask: int) -> int:
        return self.neighborhood(mask) | mask

    def induced(self, mask: int) -> tuple["Graph", list[int]]:
        """Return G[mask] relabelled 0..k-1 together with the old labels."""
        verts = to_list(mask)
        index = {v: i for i, v in enumerate(verts)}
        adj = []
        for v in verts:
            a = 0
            for u in bits(self.adj[v] & mask):
                a |= 1 << index[u]
            adj.append(a)
        return Graph(len(verts), tuple(adj)), verts

    def has_edge_between(self, p: int, q: int) -> bool:
        for v in bits(p):
            if self.adj[v] & q:
                return True
        return False

    def fully_adjacent(self, p: int, q: int) -> bool:
        for v in bits(p):
            if self.adj[v] & q != q:
                return False
        return True

    def is_clique(self, mask: int) -> bool:
        for v in bits(mask):
            if (self.adj[v] | (1 << v)) & mask != mask:
                return False
        return True

    def is_independent(self, mask: int) -> bool:
        for v in bits(mask):
            if self.adj[v] & mask:
                return False
        return True

    def is_connected(self, mask: int | None = None) -> bool:
        mask = self.full if mask is None else mask
        if not mask:
            return False
        return component_of(self, lowest(mask), mask) == mask

    def to_networkx(self):
        import networkx as nx

        h = nx.Graph()
        h.add_nodes_from(range(self.n))
        h.add_edges_from(self.edges())
        return h

    @classmethod
    def from_networkx(cls, h) -> "Graph":
        nodes = sorted(h.nodes())
        index = {v: i for i, v in enumerate(nodes)}
        return cls.from_edges(len(nodes), ((index[u], index[v]) for u, v in h.edges()))


@dataclass(frozen=True)
class Multigraph:
    """Loopless multigraph; parallel edges appear as repeated pairs."""

    n: int
    edges: tuple[tuple[int, int], ...]

    def __post_init__(self):
        for u, v in self.edges:
            if u == v:
                raise GraphError(f"self-loop at {u}")
            if not (0 <= u < self.n and 0 <= v < self.n):
                raise GraphError(f"edge {u}-{v} out of range")

    @classmethod
    def of(cls, n: int, edges: Iterable[tuple[int, int]]) -> "Multigraph":
        return cls(n, tuple((min(u, v), max(u, v)) for u, v in edges))

    def is_bipartite(self) -> bool:
        side = [-1] * self.n
        nbrs: list[list[int]] = [[] for _ in range(self.n)]
        for u, v in self.edges:
            nbrs[u].append(v)
            nbrs[v].append(u)
        for s in range(self.n):
            if side[s] >= 0:
                continue
            side[s] = 0
            stack = [s]
            while stack:
                u = stack.pop()
                for w in nbrs[u]:
                    if side[w] < 0:
                        side[w] = 1 - side[u]
                        stack.append(w)
                    elif side[w] == side[u]:
                        return False
        return True


# ---------------------------------------------------------------- measures

@dataclass(frozen=True)
class Measure:
    """Nonnegative rational weights on 0..len-1.

    Probability measures have total 1, but restricted and rescaled measures
    used inside the pipelines need not, so the total is not enforced here;
    see :meth:`check_probability`.
    """

    weights: tuple[Fraction, ...]
    _prefix: tuple = field(default=(), compare=False, repr=False)

    def __post_init__(self):
        ws = tuple(Fraction(w) for w in self.weights)
        for w in ws:
            if w < 0:
                raise GraphError("negative weight")
        object.__setattr__(self, "weights", ws)

    @classmethod
    def uniform(cls, n: int) -> "Measure":
        if n <= 0:
            raise GraphError("uniform measure needs at least one element")
        return cls(tuple(Fraction(1, n) for _ in range(n)))

    @classmethod
    def of(cls, weights: Sequence) -> "Measure":
        return cls(tuple(Fraction(w) for w in weights))

    def __len__(self) -> int:
        return len(self.weights)

    def __getitem__(self, v: int) -> Fraction:
        return self.weights[v]

    @property
    def total(self) -> Fraction:
        return sum(self.weights, Fraction(0))

    def mass(self, mask: int) -> Fraction:
        total = Fraction(0)
        for v in bits(mask):
            total += self.weights[v]
        return total

    def check_probability(self) -> None:
        if self.total != 1:
            raise GraphError(f"measure total is {self.total}, expected 1")

    def to_json(self) -> list[str]:
        return [str(w) for w in self.weights]

    @classmethod
    def from_json(cls, data) -> "Measure":
        if isinstance(data, dict):
            data = data["weights"]
        return cls(tuple(Fraction(str(w)) for w in data))


def measure_for(g: Graph, mu: Measure | str | None) -> Measure:
    if mu is None or mu == "uniform":
        return Measure.uniform(g.n)
    if len(mu) != g.n:
        raise GraphError("measure length does not match vertex count")
    return mu


# ---------------------------------------------------------------- named graphs

@dataclass(frozen=True)
class HookShape:
    """A hook or double hook with its vertex labelling v1..vm as 0..m-1."""

    kind: str
    k: int
    graph: Graph
    active: int | None


def hook_edges(k: int) -> list[tuple[int, int]]:
    # path v1..v_{k+3} plus pendant v_{k+1} v_{k+4}
    return [(i, i + 1) for i in range(k + 2)] + [(k, k + 3)]


def double_hook_edges(k: int) -> list[tuple[int, int]]:
    # path v1..v_{k+6} plus pendants v3 v_{k+7} and v_{k+4} v_{k+8}
    return [(i, i + 1) for i in range(k + 5)] + [(2, k + 6), (k + 3, k + 7)]


def build_named(kind: str, k: int = 0) -> Graph:
    """Construct one of the named graphs used throughout the package.

    ``kind`` is one of ``path``, ``cycle``, ``clique``, ``claw``, ``hook``,
    ``double_hook``. For paths, cycles and cliques ``k`` is the vertex count.
    """
    if kind == "path":
        if k < 1:
            raise GraphError("path needs k >= 1")
        return Graph.from_edges(k, [(i, i + 1) for i in range(k - 1)])
    if kind == "cycle":
        if k < 3:
            raise GraphError("cycle needs k >= 3")
        return Graph.from_edges(k, [(i, (i + 1) % k) for i in range(k)])
    if kind == "clique":
        if k < 1:
            raise GraphError("clique needs k >= 1")
        return Graph.from_edges(k, [(i, j) for i in range(k) for j in range(i + 1, k)])
    if kind == "claw":
        return Graph.from_edges(4, [(0, 1), (0, 2), (0, 3)])
    if kind == "hook":
        if k < 0:
            raise GraphError("hook needs k >= 0")
        return Graph.from_edges(k + 4, hook_edges(k))
    if kind == "double_hook":
        if k < 0:
            raise GraphError("double hook needs k >= 0")
        return Graph.from_edges(k + 8, double_hook_edges(k))
    raise GraphError(f"unknown graph kind {kind!r}")


def hook(k: int) -> HookShape:
    return HookShape("hook", k, build_named("hook", k), 0)


def double_hook(k: int) -> HookShape:
    return HookShape("double_hook", k, build_named("double_hook", k), None)


def line_graph(h: Multigraph) -> Graph:
    """One vertex per edge of ``h``; two are adjacent iff they share an endpoint."""
    if not h.edges:
        raise GraphError("line graph of an edgeless multigraph")
    inc = [0] * h.n
    for i, (u, v) in enumerate(h.edges):
        inc[u] |= 1 << i
        inc[v] |= 1 << i
    adj = []
    for i, (u, v) in enumerate(h.edges):
        adj.append((inc[u] | inc[v]) & ~(1 << i))
    return Graph(len(h.edges), tuple(adj))


# ---------------------------------------------------------------- components

def component_of(g: Graph, v: int, mask: int) -> int:
    comp = frontier = 1 << v
    while frontier:
        nb = 0
        for u in bits(frontier):
            nb |= g.adj[u]
        frontier = nb & mask & ~comp
        comp |= frontier
    return comp


def components(g: Graph, mask: int | None = None) -> list[int]:
    """Components of G[mask], ordered by their lowest vertex."""
    rest = g.full if mask is None else mask
    out = []
    while rest:
        c = component_of(g, lowest(rest), rest)
        out.append(c)
        rest &= ~c
    return out


def largest_component(g: Graph, mask: int, mu: Measure | None = None) -> int:
    """Heaviest component (by ``mu``, else by size); ties go to the lowest vertex."""
    best, best_w = 0, None
    for c in components(g, mask):
        w = mu.mass(c) if mu is not None else popcount(c)
        if best_w is None or w > best_w:
            best, best_w = c, w
    return best


@dataclass(frozen=True)
class AntiPair:
    P: int
    Q: int


@dataclass(frozen=True)
class BigComponent:
    C: int


def largest_component_or_split(g: Graph, mu: Measure, x: int, delta) -> AntiPair | BigComponent:
    """Either an anti-adjacent split of ``x`` with both sides heavier than
    ``delta``, or a component of G[x] of measure at least mu(x) - delta."""
    delta = Fraction(delta)
    total = mu.mass(x)
    if not total > 3 * delta:
        raise GraphError(f"need mu(X) > 3*delta, got {total} <= {3 * delta}")
    comps = components(g, x)
    weights = [mu.mass(c) for c in comps]
    best = max(range(len(comps)), key=lambda i: (weights[i], -i))
    if weights[best] >= total - delta:
        return BigComponent(comps[best])
    if weights[best] > delta:
        return AntiPair(comps[best], x & ~comps[best])
    p, w = 0, Fraction(0)
    for c, cw in zip(comps, weights):
        p |= c
        w += cw
        if w > delta:
            break
    return AntiPair(p, x & ~p)


# ---------------------------------------------------------------- modules

def is_module(g: Graph, part: int, host: int) -> bool:
    outside = host & ~part
    first = None
    for v in bits(part):
        nb = g.adj[v] & outside
        if first is None:
            first = nb
        elif nb != first:
            return False
    return True


def check_partition(parts: Sequence[int]) -> int:
    union = 0
    for p in parts:
        if not p:
            raise GraphError("empty part")
        if union & p:
            raise GraphError("parts overlap")
        union |= p
    return union


def quotient(g: Graph, parts: Sequence[int]) -> Graph:
    """Quotient of G over a module partition; part i becomes vertex i."""
    host = check_partition(parts)
    for i, p in enumerate(parts):
        if not is_module(g, p, host):
            raise GraphError(f"part {i} is not a module")
    edges = []
    for i, p in enumerate(parts):
        for j in range(i + 1, len(parts)):
            q = parts[j]
            if g.fully_adjacent(p, q):
                edges.append((i, j))
            elif g.has_edge_between(p, q):
                raise GraphError(f"parts {i} and {j} have mixed adjacency")
    qg = Graph.from_edges(len(parts), edges)
    reps = [lowest(p) for p in parts]
    sub, _ = g.induced(to_mask(reps))
    # representatives are listed in ascending order by induced(); map back
    order = sorted(range(len(parts)), key=lambda i: reps[i])
    for a in range(len(parts)):
        for b in range(len(parts)):
            if a != b and sub.has_edge(a, b) != qg.has_edge(order[a], order[b]):
                raise GraphError("quotient self-check failed")
    return qg
