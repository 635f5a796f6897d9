"""Sparse random graphs with short cycles removed, and exact checks that
they have no large homogeneous pair."""

from __future__ import annotations

import math
import random
import warnings
from dataclasses import dataclass
from fractions import Fraction

from .graph_core import Graph, GraphError, Measure, bits, popcount, to_list, to_mask
from .oracle import PAIR_CAP, best_homogeneous_pair, check_pair

RNG_NAME = "python-random-mt19937"
CYCLE_CAP = 8


def edge_probability(n: int, delta) -> Fraction:
    return Fraction(50) / (Fraction(delta) ** 2 * n)


def _first_short_cycle(g: Graph, alive: int, k: int) -> list[int] | None:
    """First cycle of length 3..k in discovery order: by smallest vertex,
    then lexicographic DFS, each cycle reported once."""
    for s in bits(alive):
        above = alive & ~((1 << (s + 1)) - 1)
        path = [s]

        def dfs(u: int, used: int) -> list[int] | None:
            if len(path) >= 3 and g.adj[u] >> s & 1 and path[1] < u:
                return list(path)
            if len(path) == k:
                return None
            for w in bits(g.adj[u] & above & ~used):
                path.append(w)
                found = dfs(w, used | 1 << w)
                path.pop()
                if found:
                    return found
            return None

        found = dfs(s, 1 << s)
        if found:
            return found
    return None


def count_short_cycles(g: Graph, k: int, budget: int = 5_000_000) -> dict[int, int]:
    """Number of cycles of each length 3..k. Lengths 3 and 4 are counted
    from common neighbourhoods; longer ones by enumeration."""
    if k > CYCLE_CAP:
        raise GraphError(f"cycle lengths above {CYCLE_CAP} are not enumerated")
    counts = {length: 0 for length in range(3, k + 1)}
    if k >= 3:
        counts[3] = sum(popcount(g.adj[u] & g.adj[v]) for u, v in g.edges()) // 3
    if k >= 4:
        total = 0
        for u in range(g.n):
            for w in range(u + 1, g.n):
                c = popcount(g.adj[u] & g.adj[w])
                total += c * (c - 1) // 2
        counts[4] = total // 2
    if k >= 5:
        steps = [0]
        for s in range(g.n):
            above = g.full & ~((1 << (s + 1)) - 1)

            def dfs(u: int, used: int, length: int, second: int):
                steps[0] += 1
                if steps[0] > budget:
                    raise GraphError("cycle enumeration budget exhausted")
                if length >= 5 and g.adj[u] >> s & 1 and second < u:
                    counts[length] += 1
                if length == k:
                    return
                for w in bits(g.adj[u] & above & ~used):
                    dfs(w, used | 1 << w, length + 1, second if length > 1 else w)

            dfs(s, 1 << s, 1, -1)
    return counts


def girth_exceeds(g: Graph, k: int) -> bool:
    return _first_short_cycle(g, g.full, k) is None


@dataclass(frozen=True)
class NoSehResult:
    graph: Graph
    kept: tuple[int, ...]  # residual vertex i is kept[i] in the sample
    sample: Graph
    stats: dict


def random_no_seh_graph(n: int, delta, k: int, seed: int, p=None) -> NoSehResult:
    """Sample G(n, p) with p = 50/(delta^2 n) and delete one vertex from
    every cycle of length at most k.

    ``p`` may be given explicitly for exploration; the default is the
    formula above, clamped to 1 with a warning.
    """
    if n < 3:
        raise GraphError("n must be at least 3")
    delta = Fraction(delta)
    if not 0 < delta < 1:
        raise GraphError("delta must lie in (0, 1)")
    if not 3 <= k <= CYCLE_CAP:
        raise GraphError(f"k must lie in [3, {CYCLE_CAP}]")
    formula = edge_probability(n, delta)
    if p is None:
        p_used = formula
        if p_used > 1:
            warnings.warn(f"edge probability {float(formula):.3f} clamped to 1", stacklevel=2)
            p_used = Fraction(1)
    else:
        p_used = Fraction(p)
        if not 0 <= p_used <= 1:
            raise GraphError("p must lie in [0, 1]")
    rng = random.Random(seed)
    pf = float(p_used)
    edges = [(u, v) for u in range(n) for v in range(u + 1, n) if rng.random() < pf]
    sample = Graph.from_edges(n, edges)
    try:
        counts = count_short_cycles(sample, k)
        complete = True
    except GraphError:
        counts = count_short_cycles(sample, min(k, 4))
        complete = False
    alive = sample.full
    deleted = []
    while True:
        cyc = _first_short_cycle(sample, alive, k)
        if cyc is None:
            break
        v = min(cyc)
        alive &= ~(1 << v)
        deleted.append(v)
    residual, kept = sample.induced(alive)
    if not girth_exceeds(residual, k):
        raise AssertionError("short cycle survived deletion")
    stats = {
        "n": n,
        "delta": str(delta),
        "k": k,
        "seed": seed,
        "rng": RNG_NAME,
        "p_formula": str(formula),
        "p": str(p_used),
        "clamped": p is None and formula > 1,
        "short_cycles": {str(length): c for length, c in counts.items()},
        "cycles_found": sum(counts.values()),
        "cycle_count_complete": complete,
        "deleted": deleted,
        "n_residual": residual.n,
    }
    return NoSehResult(residual, tuple(kept), sample, stats)


def markov_budget(k: int, delta) -> Fraction:
    """3C with C = k (50/delta^2)^k."""
    return 3 * k * (Fraction(50) / Fraction(delta) ** 2) ** k


@dataclass(frozen=True)
class PairVerdict:
    status: str  # "VerifiedAbsent", "FoundPair" or "Unverifiable"
    size: int  # required side size ceil(delta * n)
    P: int = 0
    Q: int = 0
    kind: str | None = None
    best_found: int = 0  # Unverifiable: largest min side seen by sampling

    def to_json(self) -> dict:
        out = {"type": "verdict", "status": self.status, "size": self.size}
        if self.status == "FoundPair":
            out.update({"P": to_list(self.P), "Q": to_list(self.Q), "kind": self.kind})
        if self.status == "Unverifiable":
            out["best_found"] = self.best_found
        return out


def verify_no_large_pair(g: Graph, delta, samples: int = 2000, seed: int = 0) -> PairVerdict:
    delta = Fraction(delta)
    t = math.ceil(delta * g.n)
    if g.n < 2:
        return PairVerdict("VerifiedAbsent", t)
    if g.n <= PAIR_CAP:
        best = best_homogeneous_pair(g, Measure.uniform(g.n))
        if best is not None and min(popcount(best.P), popcount(best.Q)) >= t:
            return PairVerdict("FoundPair", t, best.P, best.Q, best.kind)
        return PairVerdict("VerifiedAbsent", t)
    rng = random.Random(seed)
    verts = list(range(g.n))
    best_min = 0
    for _ in range(samples):
        p = to_mask(rng.sample(verts, t))
        for kind, q in (
            ("anti-adjacent", g.full & ~g.closed_neighborhood(p)),
            ("adjacent", _common(g, p) & ~p),
        ):
            best_min = max(best_min, min(t, popcount(q)))
            if popcount(q) >= t:
                q = to_mask(sorted(bits(q))[:t])
                if check_pair(g, p, q, kind):
                    raise AssertionError("sampled pair failed validation")
                return PairVerdict("FoundPair", t, p, q, kind)
    return PairVerdict("Unverifiable", t, best_found=best_min)


def _common(g: Graph, p: int) -> int:
    out = g.full
    for v in bits(p):
        out &= g.adj[v]
    return out
