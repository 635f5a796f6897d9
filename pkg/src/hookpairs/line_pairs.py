"""Weighted cliques or anti-adjacent pairs in line graphs of multigraphs.

The measure lives on the edges of the root multigraph, which are the
vertices of its line graph. Every quantity is an exact ``Fraction``.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .graph_core import GraphError, Measure, Multigraph, line_graph, to_list

DELTA1 = Fraction(1, 14)


@dataclass(frozen=True)
class Bipartition:
    L: frozenset
    R: frozenset
    cut_weight: Fraction


@dataclass(frozen=True)
class LineClique:
    K: int  # bitmask over edge indices
    mu: Fraction
    center: int  # root vertex whose star gives the clique

    kind = "clique"


@dataclass(frozen=True)
class LineAntiPair:
    P: int
    Q: int
    mu_P: Fraction
    mu_Q: Fraction

    kind = "anti-pair"


def _cut_weight(h: Multigraph, mu: Measure, side: list[int]) -> Fraction:
    return sum((mu[i] for i, (u, v) in enumerate(h.edges) if side[u] != side[v]), Fraction(0))


def half_cut(h: Multigraph, mu: Measure) -> Bipartition:
    """Bipartition of V(h) cutting at least half the edge measure.

    Local search: flip the lowest-index vertex whose move strictly raises
    the cut weight. At a local optimum every vertex has at least half of its
    incident weight across the cut, so the cut carries at least half.
    """
    if len(mu) != len(h.edges):
        raise GraphError("measure length does not match edge count")
    side = [0] * h.n
    incident: list[list[int]] = [[] for _ in range(h.n)]
    for i, (u, v) in enumerate(h.edges):
        incident[u].append(i)
        incident[v].append(i)
    improved = True
    while improved:
        improved = False
        for v in range(h.n):
            gain = Fraction(0)
            for i in incident[v]:
                a, b = h.edges[i]
                other = b if a == v else a
                gain += mu[i] if side[other] == side[v] else -mu[i]
            if gain > 0:
                side[v] ^= 1
                improved = True
                break
    w = _cut_weight(h, mu, side)
    if 2 * w < mu.total:
        raise AssertionError("local search ended below half the total measure")
    return Bipartition(
        frozenset(v for v in range(h.n) if side[v] == 0),
        frozenset(v for v in range(h.n) if side[v] == 1),
        w,
    )


def _split_side(side: list[int], f: dict, threshold: Fraction) -> tuple[set, set]:
    """Greedy prefix in descending f then index order until f(prefix) > threshold.
    Vertices with f = 0 always land in the second part."""
    order = sorted((v for v in side if f[v] > 0), key=lambda v: (-f[v], v))
    first: set = set()
    acc = Fraction(0)
    for v in order:
        if acc > threshold:
            break
        first.add(v)
        acc += f[v]
    return first, set(side) - first


def line_graph_pair(h: Multigraph, mu: Measure | None = None, delta=DELTA1) -> LineClique | LineAntiPair:
    """Clique of measure at least 3*delta or anti-adjacent pair with both
    sides heavier than delta, in the line graph of ``h``."""
    if not h.edges:
        raise GraphError("multigraph has no edges")
    mu = Measure.uniform(len(h.edges)) if mu is None else mu
    mu.check_probability()
    delta = Fraction(delta)
    cut = half_cut(h, mu)
    w = cut.cut_weight
    crossing = [i for i, (u, v) in enumerate(h.edges) if (u in cut.L) != (v in cut.L)]
    f = {v: Fraction(0) for v in range(h.n)}
    for i in crossing:
        u, v = h.edges[i]
        f[u] += mu[i]
        f[v] += mu[i]
    heavy = max(range(h.n), key=lambda v: (f[v], -v))
    if f[heavy] >= 3 * delta:
        star = 0
        for i in crossing:
            if heavy in h.edges[i]:
                star |= 1 << i
        return LineClique(star, mu.mass(star), heavy)
    threshold = w / 2 - 3 * delta / 2
    L1, L2 = _split_side(sorted(cut.L), f, threshold)
    R1, R2 = _split_side(sorted(cut.R), f, threshold)

    def quadrant(left: set, right: set) -> int:
        m = 0
        for i in crossing:
            u, v = h.edges[i]
            if (u in left and v in right) or (v in left and u in right):
                m |= 1 << i
        return m

    q11, q12, q21, q22 = quadrant(L1, R1), quadrant(L1, R2), quadrant(L2, R1), quadrant(L2, R2)
    if mu.mass(q12) < delta or mu.mass(q21) < delta:
        p, q = q11, q22
    else:
        p, q = q12, q21
    mp, mq = mu.mass(p), mu.mass(q)
    if not (mp > delta and mq > delta):
        raise AssertionError(f"anti-pair below threshold: {mp}, {mq} (delta {delta})")
    g = line_graph(h)
    if g.has_edge_between(p, q):
        raise AssertionError("quadrant edge sets share an endpoint")
    return LineAntiPair(p, q, mp, mq)


def outcome_to_json(res: LineClique | LineAntiPair) -> dict:
    if isinstance(res, LineClique):
        return {"type": "clique", "K": to_list(res.K), "mu": str(res.mu), "center": res.center}
    return {
        "type": "pair",
        "kind": "anti-adjacent",
        "P": to_list(res.P),
        "Q": to_list(res.Q),
        "mu_P": str(res.mu_P),
        "mu_Q": str(res.mu_Q),
    }
