"""Graph builders shared by the test modules."""

from __future__ import annotations

import itertools
import random
from fractions import Fraction

from hypothesis import strategies as st

from hookpairs.graph_core import Graph, Measure, Multigraph, line_graph, to_mask
from hookpairs.structured import StructuredPair, min_eps


def random_graph(n: int, p: float, rng: random.Random) -> Graph:
    return Graph.from_edges(n, [(u, v) for u, v in itertools.combinations(range(n), 2) if rng.random() < p])


def random_measure(n: int, rng: random.Random, spread: int = 6) -> Measure:
    w = [rng.randint(1, spread) for _ in range(n)]
    total = sum(w)
    return Measure.of([Fraction(x, total) for x in w])


def random_multigraph(n: int, m: int, rng: random.Random) -> Multigraph:
    edges = []
    while len(edges) < m:
        u, v = rng.sample(range(n), 2)
        edges.append((u, v))
    return Multigraph.of(n, edges)


@st.composite
def graphs(draw, min_n: int = 1, max_n: int = 9):
    n = draw(st.integers(min_n, max_n))
    pairs = list(itertools.combinations(range(n), 2))
    flags = draw(st.lists(st.booleans(), min_size=len(pairs), max_size=len(pairs)))
    return Graph.from_edges(n, [e for e, f in zip(pairs, flags) if f])


@st.composite
def measures(draw, n: int):
    w = draw(st.lists(st.integers(1, 9), min_size=n, max_size=n))
    total = sum(w)
    return Measure.of([Fraction(x, total) for x in w])


def bipartite_line_graph(left: int, right: int, m: int, rng: random.Random) -> Graph:
    """Line graph of a random bipartite multigraph: claw-free and C5-free."""
    edges = [(rng.randrange(left), left + rng.randrange(right)) for _ in range(m)]
    return line_graph(Multigraph.of(left + right, edges))


def _attach(n_s: int, edges: list, block: int, order_a, order_b, first: int):
    """Append two paths A and B after the S vertices and attach S to them in
    blocks; returns (n, A, B)."""
    m = -(-n_s // block)
    A = list(range(first, first + m))
    B = list(range(first + m, first + 2 * m))
    edges += list(zip(A, A[1:])) + list(zip(B, B[1:]))
    for t, s in enumerate(order_a):
        edges.append((s, A[t // block]))
    for t, s in enumerate(order_b):
        edges.append((s, B[t // block]))
    return first + 2 * m, A, B


def wrap_structured(s_graph: Graph, block: int = 3, seed: int = 0) -> StructuredPair:
    """Structured pair around ``s_graph``: A attaches in index order, B in a
    shuffled order, with blocks of ``block`` vertices per path vertex."""
    rng = random.Random(seed)
    n_s = s_graph.n
    edges = list(s_graph.edges())
    shuffled = list(range(n_s))
    rng.shuffle(shuffled)
    n, A, B = _attach(n_s, edges, block, range(n_s), shuffled, n_s)
    g = Graph.from_edges(n, edges)
    sp = StructuredPair(g, to_mask(A), to_mask(B), (1 << n_s) - 1, Fraction(1))
    return StructuredPair(g, sp.A, sp.B, sp.S, min_eps(sp))


def path_pair(length: int, block: int = 3, seed: int = 0) -> StructuredPair:
    """S is a path s_0..s_{L-1} with a pendant vertex L at s_3."""
    edges = [(i, i + 1) for i in range(length - 1)] + [(3, length)]
    return wrap_structured(Graph.from_edges(length + 1, edges), block, seed)


def grid(r: int, c: int | None = None) -> Graph:
    c = r if c is None else c
    idx = lambda i, j: i * c + j  # noqa: E731
    edges = []
    for i in range(r):
        for j in range(c):
            if i + 1 < r:
                edges.append((idx(i, j), idx(i + 1, j)))
            if j + 1 < c:
                edges.append((idx(i, j), idx(i, j + 1)))
    return Graph.from_edges(r * c, edges)


def grid_pair(r: int, block: int = 3, seed: int = 0) -> StructuredPair:
    return wrap_structured(grid(r), block, seed)


def nested_gadget(r: int = 20, block: int = 6, outer: int = 6, seed: int = 0) -> Graph:
    """A grid wrapped by a first pair of paths, the whole wrapped again.

    Every inner path vertex a2[i], b2[i] sees the same grid block, so the
    outer structured pair has an active hook whose reservoir holds a second
    structured pair; this is what drives the pipeline to a double hook.
    """
    rng = random.Random(seed)
    edges = []
    s2 = [("s", i, j) for i in range(r) for j in range(r)]
    for i in range(r):
        for j in range(r):
            if i + 1 < r:
                edges.append((("s", i, j), ("s", i + 1, j)))
            if j + 1 < r:
                edges.append((("s", i, j), ("s", i, j + 1)))
    m2 = -(-len(s2) // block)
    a2 = [("2A", i) for i in range(m2)]
    b2 = [("2B", i) for i in range(m2)]
    for path in (a2, b2):
        edges.extend(zip(path, path[1:]))
    chunks = []
    for i in range(m2):
        blk = s2[i * block:(i + 1) * block]
        for v in blk:
            edges.append((v, a2[i]))
            edges.append((v, b2[i]))
        chunks += [a2[i], b2[i]] + blk
    m1 = -(-len(chunks) // outer)
    a1 = [("1A", i) for i in range(m1)]
    b1 = [("1B", i) for i in range(m1)]
    for path in (a1, b1):
        edges.extend(zip(path, path[1:]))
    for t, v in enumerate(chunks):
        edges.append((v, a1[t // outer]))
    shuffled = chunks[:]
    rng.shuffle(shuffled)
    for t, v in enumerate(shuffled):
        edges.append((v, b1[t // outer]))
    order = a1 + a2 + s2 + b2 + b1
    index = {v: i for i, v in enumerate(order)}
    return Graph.from_edges(len(order), [(index[u], index[v]) for u, v in edges])


def canonical(g: Graph) -> bytes:
    import pynauty

    pg = pynauty.Graph(g.n, adjacency_dict={v: [u for u in range(g.n) if g.has_edge(u, v)] for v in range(g.n)})
    return pynauty.certificate(pg)


def census(max_n: int, size: int, seed: int):
    """Random labelled graphs with n <= max_n, deduplicated up to isomorphism."""
    rng = random.Random(seed)
    seen = set()
    out = []
    while len(out) < size:
        n = rng.randint(1, max_n)
        g = random_graph(n, rng.choice((0.2, 0.35, 0.5, 0.65, 0.8)), rng)
        key = (n, canonical(g))
        if key not in seen:
            seen.add(key)
            out.append(g)
    return out


def line_gadget(seed: int, side: int = 40, cross: int = 60, blowup: float = 0.0) -> StructuredPair:
    """Structured pair inside the line graph of a bipartite multigraph H.

    H has two vertex halves, each spanned by a random tree (so their edge
    sets A and B are connected in the line graph), plus cross edges S
    between the halves that respect one global 2-colouring. A cross edge is
    doubled with probability ``blowup``, which blows its line-graph vertex
    up into a clique of twins. The line graph is claw-free and, H being
    bipartite, has no odd hole.
    """
    rng = random.Random(seed)
    colour = {}
    tree_edges = {"A": [], "B": []}
    halves = {"A": list(range(side)), "B": list(range(side, 2 * side))}
    for name, verts in halves.items():
        colour[verts[0]] = 0
        for i, v in enumerate(verts[1:], 1):
            u = verts[rng.randrange(i)]
            colour[v] = 1 - colour[u]
            tree_edges[name].append((u, v))
    load = {v: 0 for v in range(2 * side)}
    cross_edges = []
    tries = 0
    while len(cross_edges) < cross and tries < 50 * cross:
        tries += 1
        u = rng.choice(halves["A"])
        v = rng.choice(halves["B"])
        if colour[u] == colour[v] or load[u] >= 2 or load[v] >= 2 or (u, v) in cross_edges:
            continue
        load[u] += 1
        load[v] += 1
        cross_edges.append((u, v))
    s_edges = []
    for e in cross_edges:
        s_edges.append(e)
        if rng.random() < blowup:
            s_edges.append(e)
    edges = tree_edges["A"] + s_edges + tree_edges["B"]
    h = Multigraph.of(2 * side, edges)
    g = line_graph(h)
    na, ns = len(tree_edges["A"]), len(s_edges)
    A = (1 << na) - 1
    S = ((1 << ns) - 1) << na
    B = g.full & ~A & ~S
    sp = StructuredPair(g, A, B, S, Fraction(1))
    return StructuredPair(g, A, B, S, min_eps(sp))


def growth_fixture(index: int):
    """Structured pair whose S is a path with a pendant, plus a seeded
    active 0-hook and a target length k in 1..5.

    The pendant sits at path position p; the seed is the P4
    (p, p-1, p-2, pendant) with reservoir the rest of the path beyond p.
    """
    from hookpairs.hook_engine import ActiveHook, Constants

    rng = random.Random(index)
    k = 1 + index % 5
    length = rng.randint(40, 90)
    p = rng.randint(3, 8)
    block = rng.randint(2, 5)
    edges = [(i, i + 1) for i in range(length - 1)] + [(p, length)]
    sp = wrap_structured(Graph.from_edges(length + 1, edges), block, rng.randrange(10**6))
    emb = (p, p - 1, p - 2, length)
    seed = ActiveHook(to_mask(emb), to_mask(range(p + 1, length)), p, 0, emb)
    c = Constants(k, sp.eps, Fraction(1, 200), Fraction(1, 100))
    return sp, seed, c


def assembly_fixture(index: int):
    """Graph with two active hooks h1, h2 where h2 sits in h1's reservoir.

    h1 is an l1-hook with active vertex x; a connector path of m vertices
    leaves x and ends next to the pendant vertex of h2, an l2-hook whose own
    reservoir is a short path hanging off its active vertex. Extra
    reservoir vertices hang off the connector. Vertex labels are shuffled.
    """
    from hookpairs.graph_core import hook
    from hookpairs.hook_engine import ActiveHook

    rng = random.Random(index)
    l1 = rng.choice((0, 1, 2))
    m = rng.randint(1, max(1, 3 - l1))
    l2 = rng.randint(1, 3)
    r2 = rng.randint(1, 4)
    extra = rng.randint(0, 4)
    names = []
    edges = []

    def new(tag):
        names.append(tag)
        return len(names) - 1

    x1 = [new(("X1", i)) for i in range(l1 + 4)]
    edges += [(x1[a], x1[b]) for a, b in hook(l1).graph.edges()]
    conn = [new(("C", i)) for i in range(m)]
    edges += list(zip([x1[0]] + conn, conn))
    x2 = [new(("X2", i)) for i in range(l2 + 4)]
    edges += [(x2[a], x2[b]) for a, b in hook(l2).graph.edges()]
    edges.append((conn[-1], x2[l2 + 3]))
    res2 = [new(("R2", i)) for i in range(r2)]
    edges += list(zip([x2[0]] + res2, res2))
    for i in range(extra):
        v = new(("E", i))
        edges.append((rng.choice(conn), v))
    perm = list(range(len(names)))
    rng.shuffle(perm)
    g = Graph.from_edges(len(names), [(perm[u], perm[v]) for u, v in edges])
    e1 = tuple(perm[v] for v in x1)
    e2 = tuple(perm[v] for v in x2)
    r1 = to_mask(perm[v] for v in range(len(names)) if names[v][0] != "X1")
    h1 = ActiveHook(to_mask(e1), r1, e1[0], l1, e1)
    h2 = ActiveHook(to_mask(e2), to_mask(perm[v] for v in res2), e2[0], l2, e2)
    return g, h1, h2


def has_clique_separator(g: Graph, bag: int) -> bool:
    """Brute force: some clique of G[bag], possibly empty, disconnects it."""
    import networkx as nx

    sub, _ = g.induced(bag)
    h = sub.to_networkx()
    for clique in [[], *nx.enumerate_all_cliques(h)]:
        rest = h.copy()
        rest.remove_nodes_from(clique)
        if rest.number_of_nodes() and not nx.is_connected(rest):
            return True
    return False


def claw_free_berge_graphs(max_n: int) -> dict[int, list[Graph]]:
    """Every claw-free Berge graph on up to ``max_n`` vertices, one per
    isomorphism class. Both properties are hereditary, so each graph on n
    vertices extends one on n - 1 by a new vertex."""
    from hookpairs.oracle import is_berge_small
    from hookpairs.recognition import find_claw

    out = {1: [Graph.from_edges(1, [])]}
    for n in range(2, max_n + 1):
        seen = {}
        for g in out[n - 1]:
            base = list(g.edges())
            for nb in range(1 << g.n):
                h = Graph.from_edges(n, base + [(u, g.n) for u in range(g.n) if nb >> u & 1])
                if find_claw(h) is not None or not is_berge_small(h).berge:
                    continue
                seen.setdefault(canonical(h), h)
        out[n] = list(seen.values())
    return out


def _multigraph_key(n: int, edges: list) -> bytes:
    import pynauty

    m = len(edges)
    adj = {i: [] for i in range(n + m)}
    for j, (u, v) in enumerate(edges):
        adj[n + j] = [u, v]
    colours = [set(range(n)), set(range(n, n + m))] if m else [set(range(n))]
    return pynauty.certificate(pynauty.Graph(n + m, adjacency_dict=adj, vertex_coloring=colours))


def multigraphs(max_m: int) -> dict[int, list[Multigraph]]:
    """Every loopless multigraph without isolated vertices and with at most
    ``max_m`` edges, one per isomorphism class, keyed by edge count."""
    level = [(0, [])]
    out = {}
    for m in range(1, max_m + 1):
        seen = {}
        for n, edges in level:
            cands = list(itertools.combinations(range(n), 2)) + [(u, n) for u in range(n)] + [(n, n + 1)]
            for u, v in cands:
                nn = max(n, v + 1)
                e = sorted(edges + [(u, v)])
                seen.setdefault((nn, _multigraph_key(nn, e)), (nn, e))
        level = list(seen.values())
        out[m] = [Multigraph.of(n, e) for n, e in level]
    return out
