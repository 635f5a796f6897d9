"""Exponential-time ground truth used to check every constructive witness.

Everything here is brute force with simple pruning. Each routine has an
explicit size cap and raises :class:`SizeCapExceeded` rather than silently
truncating.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import comb, lcm

from .graph_core import Graph, GraphError, Measure, bits, lowest, measure_for, popcount, to_list

HOM_SET_CAP = 32
PAIR_CAP = 24
INDUCED_CAP = 12
BERGE_CAP = 16
SPARSE_DENSE_CAP = 24


class SizeCapExceeded(GraphError):
    pass


def _cap(value: int, cap: int, what: str) -> None:
    if value > cap:
        raise SizeCapExceeded(f"{what}: {value} exceeds cap {cap}")


# ---------------------------------------------------------------- cliques

def max_clique(g: Graph) -> int:
    """Largest clique as a bitmask (branch and bound)."""
    best = [0, 0]  # size, mask

    def expand(clique: int, size: int, cand: int) -> None:
        if not cand:
            if size > best[0]:
                best[0], best[1] = size, clique
            return
        if size + popcount(cand) <= best[0]:
            return
        while cand:
            if size + popcount(cand) <= best[0]:
                return
            v = lowest(cand)
            cand &= cand - 1
            expand(clique | (1 << v), size + 1, cand & g.adj[v])

    expand(0, 0, g.full)
    return best[1]


def max_homogeneous_set(g: Graph) -> tuple[int, int]:
    """Return (hom(G), witness mask): the larger of a maximum clique and a
    maximum independent set. Cliques win ties."""
    _cap(g.n, HOM_SET_CAP, "max_homogeneous_set")
    if g.n == 0:
        return 0, 0
    c = max_clique(g)
    s = max_clique(g.complement())
    if popcount(s) > popcount(c):
        return popcount(s), s
    return popcount(c), c


# ---------------------------------------------------------------- pairs

@dataclass(frozen=True)
class PairWitness:
    P: int
    Q: int
    kind: str  # "adjacent" or "anti-adjacent"
    mu_P: Fraction
    mu_Q: Fraction

    @property
    def value(self) -> Fraction:
        return min(self.mu_P, self.mu_Q)

    def to_json(self) -> dict:
        return {
            "type": "pair",
            "kind": self.kind,
            "P": to_list(self.P),
            "Q": to_list(self.Q),
            "mu_P": str(self.mu_P),
            "mu_Q": str(self.mu_Q),
        }


def check_pair(g: Graph, p: int, q: int, kind: str) -> list[str]:
    """Violations of the homogeneous-pair definition (empty when valid)."""
    problems = []
    if not p or not q:
        problems.append("empty side")
    if p & q:
        problems.append("sides overlap")
    if p >> g.n or q >> g.n:
        problems.append("vertex out of range")
    for v in bits(p & g.full):
        if kind == "adjacent":
            miss = q & ~g.adj[v] & ~(1 << v)
            if miss:
                problems.append(f"non-edge {v}-{lowest(miss)} in adjacent pair")
                break
        elif kind == "anti-adjacent":
            hit = q & g.adj[v]
            if hit:
                problems.append(f"edge {v}-{lowest(hit)} in anti-adjacent pair")
                break
        else:
            problems.append(f"unknown kind {kind!r}")
            break
    return problems


def make_pair(g: Graph, mu: Measure, p: int, q: int, kind: str) -> PairWitness:
    problems = check_pair(g, p, q, kind)
    if problems:
        raise AssertionError("; ".join(problems))
    return PairWitness(p, q, kind, mu.mass(p), mu.mass(q))


def _integer_weights(mu: Measure) -> list[int]:
    den = 1
    for w in mu.weights:
        den = lcm(den, w.denominator)
    return [int(w * den) for w in mu.weights]


def _best_anti(g: Graph, w: list[int]) -> tuple[int, int, int]:
    """Best (value, Q, partner) over nonempty Q with partner V minus N[Q].

    Depth-first search over Q in lexicographic order of sorted tuples, so
    the first optimum found has the lexicographically smallest Q. The
    partner only shrinks as Q grows, which gives the pruning rule.
    """
    n = g.n
    total = sum(w)
    best = [-1, 0, 0]
    closed = [g.adj[v] | (1 << v) for v in range(n)]

    def weight(mask: int) -> int:
        s = 0
        for v in bits(mask):
            s += w[v]
        return s

    def dfs(q: int, wq: int, nq: int, wn: int, start: int) -> None:
        for v in range(start, n):
            q2 = q | (1 << v)
            nq2 = nq | closed[v]
            wn2 = wn + weight(closed[v] & ~nq)
            partner_w = total - wn2
            if nq2 == g.full or partner_w <= best[0]:
                continue
            val = min(wq + w[v], partner_w)
            if val > best[0]:
                best[0], best[1], best[2] = val, q2, g.full & ~nq2
            dfs(q2, wq + w[v], nq2, wn2, v + 1)

    dfs(0, 0, 0, 0, 0)
    return best[0], best[1], best[2]


def best_homogeneous_pair(g: Graph, mu: Measure | str | None = None) -> PairWitness | None:
    """Pair maximizing min(mu(P), mu(Q)) over both kinds.

    Ties prefer anti-adjacent pairs, then the lexicographically smallest
    enumerated side. Returns None when no pair exists (n < 2).
    """
    _cap(g.n, PAIR_CAP, "best_homogeneous_pair")
    mu = measure_for(g, mu)
    if g.n < 2:
        return None
    w = _integer_weights(mu)
    anti = _best_anti(g, w)
    adj = _best_anti(g.complement(), w)
    if adj[0] > anti[0]:
        return make_pair(g, mu, adj[1], adj[2], "adjacent")
    return make_pair(g, mu, anti[1], anti[2], "anti-adjacent")


# ---------------------------------------------------------------- induced subgraphs

def contains_induced(g: Graph, h: Graph) -> list[int] | None:
    """Embedding of h as an induced subgraph of g (h-vertex i maps to
    ``result[i]``), or None."""
    _cap(h.n, INDUCED_CAP, "contains_induced")
    if h.n == 0:
        return []
    if h.n > g.n:
        return None
    # order pattern vertices so that each one (after the first of its
    # component) has an earlier neighbour; this keeps candidate sets small
    order: list[int] = []
    seen = 0
    for s in sorted(range(h.n), key=lambda v: -h.degree(v)):
        if seen >> s & 1:
            continue
        queue = [s]
        seen |= 1 << s
        while queue:
            u = queue.pop(0)
            order.append(u)
            for x in sorted(bits(h.adj[u] & ~seen), key=lambda v: -h.degree(v)):
                seen |= 1 << x
                queue.append(x)
    gdeg = [g.degree(v) for v in range(g.n)]
    hdeg = [h.degree(v) for v in range(h.n)]
    image = [-1] * h.n

    def place(i: int, used: int) -> bool:
        if i == len(order):
            return True
        u = order[i]
        cand = g.full & ~used
        for j in range(i):
            w = order[j]
            if h.adj[u] >> w & 1:
                cand &= g.adj[image[w]]
            else:
                cand &= ~g.adj[image[w]]
            if not cand:
                return False
        for x in bits(cand):
            if gdeg[x] < hdeg[u]:
                continue
            image[u] = x
            if place(i + 1, used | (1 << x)):
                return True
        image[u] = -1
        return False

    if place(0, 0):
        return list(image)
    return None


def check_embedding(g: Graph, h: Graph, emb: list[int]) -> list[str]:
    problems = []
    if len(emb) != h.n or len(set(emb)) != h.n:
        return ["embedding is not injective on the pattern"]
    for i in range(h.n):
        for j in range(i + 1, h.n):
            if h.has_edge(i, j) != g.has_edge(emb[i], emb[j]):
                problems.append(f"pattern pair {i},{j} maps to mismatched pair {emb[i]},{emb[j]}")
    return problems


# ---------------------------------------------------------------- Berge

def induced_cycles(g: Graph, min_len: int = 4, parity: int | None = None, max_len: int | None = None):
    """Yield chordless cycles (as vertex lists starting at their minimum)."""
    n = g.n
    for s in range(n):
        above = g.full & ~((1 << (s + 1)) - 1)
        # path s, p1, ..., pt; ``inner`` is N[p1..p_{t-1}]
        stack = [([s, p1], 1 << s | 1 << p1, 0) for p1 in reversed(list(bits(g.adj[s] & above)))]
        while stack:
            path, pmask, inner = stack.pop()
            t = len(path) - 1
            last = path[-1]
            cand = g.adj[last] & above & ~pmask & ~inner
            nxt = inner | g.adj[path[-1]] | (1 << last) if t >= 1 else inner
            ext = []
            for v in bits(cand):
                if g.adj[s] >> v & 1:
                    if t >= 2:
                        length = t + 2
                        # each cycle is found twice (two directions); keep one
                        if path[1] < v and length >= min_len and (parity is None or length % 2 == parity):
                            if max_len is None or length <= max_len:
                                yield path + [v]
                    continue
                if max_len is not None and t + 2 >= max_len:
                    continue
                ext.append(v)
            for v in reversed(ext):
                stack.append((path + [v], pmask | (1 << v), nxt))


def find_odd_hole(g: Graph, max_len: int | None = None) -> list[int] | None:
    for cyc in induced_cycles(g, min_len=5, parity=1, max_len=max_len):
        return cyc
    return None


@dataclass(frozen=True)
class BergeResult:
    berge: bool
    certificate: list[int] | None = None
    kind: str | None = None  # "odd_hole" or "odd_antihole"


def is_berge_small(g: Graph) -> BergeResult:
    _cap(g.n, BERGE_CAP, "is_berge_small")
    hole = find_odd_hole(g)
    if hole is not None:
        return BergeResult(False, hole, "odd_hole")
    anti = find_odd_hole(g.complement())
    if anti is not None:
        return BergeResult(False, anti, "odd_antihole")
    return BergeResult(True)


# ---------------------------------------------------------------- sparse or dense

@dataclass(frozen=True)
class SparseDenseResult:
    found: int | None  # vertex mask
    kind: str | None  # "sparse" or "dense"
    density: Fraction | None
    exhaustive: bool  # True when a negative answer is a proof


def _density(g: Graph, mask: int) -> Fraction:
    m = popcount(mask)
    if m < 2:
        return Fraction(0)
    e = sum(popcount(g.adj[v] & mask) for v in bits(mask)) // 2
    return Fraction(e, m * (m - 1) // 2)


def _sparse_subset(g: Graph, size: int, max_edges: int, budget: int) -> tuple[int | None, bool]:
    """Search for ``size`` vertices spanning at most ``max_edges`` edges.
    Returns (mask or None, search completed)."""
    n = g.n
    nodes = [0]

    def dfs(chosen: int, count: int, edges: int, start: int):
        if count == size:
            return chosen
        if n - start < size - count:
            return None
        nodes[0] += 1
        if nodes[0] > budget:
            raise TimeoutError
        for v in range(start, n - (size - count) + 1):
            e2 = edges + popcount(g.adj[v] & chosen)
            if e2 > max_edges:
                continue
            r = dfs(chosen | (1 << v), count + 1, e2, v + 1)
            if r is not None:
                return r
        return None

    try:
        return dfs(0, 0, 0, 0), True
    except TimeoutError:
        return None, False


def _greedy_sparse(g: Graph, size: int) -> int:
    mask = g.full
    while popcount(mask) > size:
        v = max(bits(mask), key=lambda x: (popcount(g.adj[x] & mask), x))
        mask &= ~(1 << v)
    return mask


def find_sparse_or_dense(g: Graph, eps, min_frac, budget: int = 2_000_000) -> SparseDenseResult:
    """A set of at least ``min_frac * n`` vertices with induced density at
    most ``eps`` or at least ``1 - eps``.

    Only sets of exactly the minimum size are searched: averaging over
    subsets shows a larger qualifying set always contains one. Greedy
    candidates are tried first; an exhaustive search with edge-count pruning
    follows up to ``SPARSE_DENSE_CAP`` vertices. When the search is skipped or
    its budget runs out the negative answer is marked non-exhaustive.
    """
    eps = Fraction(eps)
    min_frac = Fraction(min_frac)
    size = max(1, -(-min_frac.numerator * g.n // min_frac.denominator))
    if size > g.n:
        return SparseDenseResult(None, None, None, True)
    pairs = comb(size, 2)
    max_edges = int(eps * pairs)  # floor
    comp = g.complement()
    for kind, h in (("sparse", g), ("dense", comp)):
        m = _greedy_sparse(h, size)
        if _density(h, m) <= eps:
            return SparseDenseResult(m, kind, _density(g, m), True)
    if g.n > SPARSE_DENSE_CAP:
        # too large for the exhaustive pass; greedy only
        return SparseDenseResult(None, None, None, False)
    complete = True
    for kind, h in (("sparse", g), ("dense", comp)):
        m, done = _sparse_subset(h, size, max_edges, budget)
        complete &= done
        if m is not None:
            return SparseDenseResult(m, kind, _density(g, m), True)
    return SparseDenseResult(None, None, None, complete)
