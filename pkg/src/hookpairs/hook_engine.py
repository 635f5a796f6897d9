"""Active hooks: finding them in structured pairs and joining two into a
double hook.

The niceness claims are run as searches. Each one builds sets Z, Q, D; when
the part of D reachable from Q is heavy, an active hook is grown from the
shortest Q-to-S path. A claim whose construction should have succeeded but
did not raises ``HypothesisFailure``; at desk scale this means the constants
are too coarse for the graph, and the failure carries the details.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations

from .clawfree_berge import DELTA3, clawfree_berge_pair
from .graph_core import (
    AntiPair,
    Graph,
    GraphError,
    Measure,
    bits,
    double_hook,
    hook,
    largest_component_or_split,
    lowest,
    popcount,
    quotient,
    to_list,
    to_mask,
)
from .oracle import check_embedding, check_pair, find_sparse_or_dense
from .recognition import find_claw
from .structured import (
    HomPair,
    StructuredPair,
    extract_shat,
    filter_heavy,
    min_eps,
    niceness_violations,
    quotient_checks,
    relation,
    side_measure,
    pi_map,
    sparse_to_structured,
    validate_structured,
)


class HypothesisFailure(Exception):
    """A step that the constants promise did not go through on this input."""

    def __init__(self, reason: str, **details):
        self.reason = reason
        self.details = details
        super().__init__(reason)


# ---------------------------------------------------------------- constants

@dataclass(frozen=True)
class Constants:
    k: int
    eps: Fraction
    delta: Fraction
    gamma: Fraction

    @classmethod
    def default(cls, k: int) -> "Constants":
        return cls(k, Fraction(1, 200 * (k + 10)), Fraction(1, 200 * (k + 10)), Fraction(1, 50 * (k + 10)))

    @classmethod
    def of(cls, k: int, eps=None, delta=None, gamma=None) -> "Constants":
        d = cls.default(k)
        return cls(
            k,
            Fraction(eps) if eps is not None else d.eps,
            Fraction(delta) if delta is not None else d.delta,
            Fraction(gamma) if gamma is not None else d.gamma,
        )

    def inequalities(self, z: int = 6) -> dict[str, bool]:
        e, d, g, k = self.eps, self.delta, self.gamma, self.k
        return {
            "2eps<gamma": 2 * e < g,
            "cover": 2 * e + 3 * (6 * e + d) < 1,
            "reservoir": (z + k) * e + (k + 3) * d + g < 1,
        }

    def with_eps(self, eps) -> "Constants":
        return Constants(self.k, Fraction(eps), self.delta, self.gamma)

    def to_json(self) -> dict:
        return {"k": self.k, "eps": str(self.eps), "delta": str(self.delta), "gamma": str(self.gamma)}


# ---------------------------------------------------------------- active hooks

@dataclass(frozen=True)
class ActiveHook:
    X: int
    R: int
    active: int
    ell: int
    embedding: tuple[int, ...]  # hook(ell) vertex i -> graph vertex

    def to_json(self) -> dict:
        return {
            "type": "active_hook",
            "ell": self.ell,
            "X": to_list(self.X),
            "R": to_list(self.R),
            "active": self.active,
            "embedding": list(self.embedding),
        }

    def relabel(self, labels) -> "ActiveHook":
        emb = tuple(labels[v] for v in self.embedding)
        return ActiveHook(to_mask(emb), to_mask(labels[v] for v in bits(self.R)), labels[self.active], self.ell, emb)


def validate_active_hook(g: Graph, h: ActiveHook) -> list[str]:
    problems = []
    if h.ell < 0 or len(h.embedding) != h.ell + 4:
        return [f"embedding length {len(h.embedding)} does not fit a {h.ell}-hook"]
    if to_mask(h.embedding) != h.X:
        problems.append("X differs from the embedded vertices")
    if h.embedding[0] != h.active:
        problems.append("active vertex is not the image of the hook's first vertex")
    problems += check_embedding(g, hook(h.ell).graph, list(h.embedding))
    if h.X & h.R:
        problems.append("X meets R")
    if not h.R:
        problems.append("reservoir is empty")
    elif not g.is_connected(h.R):
        problems.append("reservoir is disconnected")
    if h.R and g.neighborhood(h.R) & h.X != 1 << h.active:
        problems.append(f"N(R) meets X in {to_list(g.neighborhood(h.R) & h.X)}, not just the active vertex")
    return problems


def reach(g: Graph, Q: int, D: int) -> int:
    """Vertices of D joined to Q by a path inside G[Q | D]."""
    if Q & D:
        raise GraphError("Q and D overlap")
    seen = Q
    frontier = Q
    while frontier:
        nxt = g.neighborhood(frontier) & D & ~seen
        seen |= nxt
        frontier = nxt
    return seen & D


def _embed_fixed(g: Graph, pattern: Graph, verts: list[int], fixed0: int) -> list[int] | None:
    """Bijective induced embedding of ``pattern`` onto ``verts`` with
    pattern vertex 0 sent to ``fixed0``."""
    if len(verts) != pattern.n:
        return None
    image = [-1] * pattern.n
    image[0] = fixed0
    order = [0]
    seen = 1
    i = 0
    while i < len(order):
        for x in bits(pattern.adj[order[i]] & ~seen):
            seen |= 1 << x
            order.append(x)
        i += 1
    if len(order) != pattern.n:
        return None

    def place(i: int, used: int) -> bool:
        if i == len(order):
            return True
        u = order[i]
        for x in verts:
            if used >> x & 1:
                continue
            if all(pattern.has_edge(u, order[j]) == g.has_edge(x, image[order[j]]) for j in range(i)):
                image[u] = x
                if place(i + 1, used | 1 << x):
                    return True
        image[u] = -1
        return False

    return list(image) if place(1, 1 << fixed0) else None


def find_hook_with_active(g: Graph, q: int, Z: int) -> tuple[int, list[int]] | None:
    """Longest i-hook in G[{q} | Z] with active vertex q, as (i, embedding)."""
    z = to_list(Z & ~(1 << q))
    for size in range(len(z) + 1, 3, -1):
        ell = size - 4
        pattern = hook(ell).graph
        for rest in combinations(z, size - 1):
            emb = _embed_fixed(g, pattern, [q, *rest], q)
            if emb is not None:
                return ell, emb
    return None


def _s_measure(g: Graph, S: int) -> Measure:
    s = popcount(S)
    return Measure(tuple(Fraction(1, s) if S >> v & 1 else Fraction(0) for v in range(g.n)))


def _inv_bound(c: Constants, j: int, s: int) -> Fraction:
    return ((c.k - j) * (c.eps + c.delta) + 2 * c.delta + c.gamma) * s


@dataclass(frozen=True)
class GrowthStep:
    j: int
    size: int
    bound: Fraction


def _grow(g: Graph, S: int, seed: ActiveHook, c: Constants, trace: list | None = None) -> ActiveHook | AntiPair:
    s = popcount(S)
    mu = _s_measure(g, S)
    h = seed
    for j in range(seed.ell, c.k):
        v = h.active
        rest = h.R & ~g.adj[v]
        res = largest_component_or_split(g, mu, rest, c.delta)
        if isinstance(res, AntiPair):
            return res
        nxt = res.C
        cand = h.R & g.adj[v] & g.neighborhood(nxt)
        if not cand:
            raise AssertionError(f"no vertex joins the active vertex to the next reservoir at step {j}")
        w = lowest(cand)
        emb = (w, *h.embedding)
        h = ActiveHook(h.X | 1 << w, nxt, w, j + 1, emb)
        bound = _inv_bound(c, j + 1, s)
        if trace is not None:
            trace.append(GrowthStep(j + 1, popcount(nxt), bound))
        if not popcount(nxt) > bound:
            raise HypothesisFailure("growth invariant breached", step=j + 1, size=popcount(nxt), bound=str(bound))
        problems = validate_active_hook(g, h)
        if problems:
            raise AssertionError(f"grown hook invalid at step {j + 1}: {problems}")
    return h


def grow_active_hook(sp: StructuredPair, seed: ActiveHook, c: Constants, trace: list | None = None) -> ActiveHook:
    """Extend an active i-hook with reservoir in S to an active k-hook."""
    g = sp.g
    problems = validate_active_hook(g, seed)
    if problems:
        raise GraphError("seed is not an active hook: " + "; ".join(problems))
    if seed.R & ~sp.S:
        raise GraphError("seed reservoir leaves S")
    if seed.ell >= c.k:
        return seed
    s = popcount(sp.S)
    bound = _inv_bound(c, seed.ell, s)
    if not popcount(seed.R) > bound:
        raise GraphError(f"reservoir of size {popcount(seed.R)} does not exceed {bound}")
    out = _grow(g, sp.S, seed, c, trace)
    if isinstance(out, AntiPair):
        raise HypothesisFailure("reservoir split into an anti-adjacent pair", P=to_list(out.P), Q=to_list(out.Q))
    return out


# ---------------------------------------------------------------- tech_hooks

@dataclass(frozen=True)
class TechAntiPair:
    P: int
    Q: int
    claim: str

    def to_json(self) -> dict:
        return {"type": "pair", "kind": "anti-adjacent", "P": to_list(self.P), "Q": to_list(self.Q), "claim": self.claim}


@dataclass(frozen=True)
class TechHook:
    hook: ActiveHook
    claim: str

    def to_json(self) -> dict:
        return {**self.hook.to_json(), "claim": self.claim}


@dataclass(frozen=True)
class TechModules:
    shat: int
    parts: tuple[int, ...]
    quotient: Graph
    notes: tuple = ()

    def to_json(self) -> dict:
        return {
            "type": "modules",
            "shat": to_list(self.shat),
            "parts": [to_list(p) for p in self.parts],
            "quotient_edges": [list(e) for e in self.quotient.edges()],
            "notes": list(self.notes),
        }


@dataclass
class TechLog:
    filtered_S: int = 0
    original_S: int = 0
    removed: int = 0
    working: Constants | None = None
    inequalities: dict = field(default_factory=dict)
    attempts: list = field(default_factory=list)

    def to_json(self) -> dict:
        return {
            "original_S": self.original_S,
            "filtered_S": self.filtered_S,
            "removed": self.removed,
            "working_constants": self.working.to_json() if self.working else None,
            "inequalities": self.inequalities,
            "attempts": self.attempts,
        }


class _Search:
    """Claim searches on a filtered structured pair."""

    def __init__(self, sp: StructuredPair, c: Constants, log: TechLog):
        self.sp = sp
        self.g = sp.g
        self.c = c
        self.log = log
        self.mu = {"A": side_measure(sp, "A"), "B": side_measure(sp, "B")}
        self.pi = {"A": pi_map(sp, "A"), "B": pi_map(sp, "B")}
        self.s_mu = _s_measure(sp.g, sp.S)

    def part(self, side: str) -> int:
        return self.sp.A if side == "A" else self.sp.B

    @staticmethod
    def other(side: str) -> str:
        return "B" if side == "A" else "A"

    def N(self, side: str, x: int) -> int:
        return self.g.adj[x] & self.part(side)

    def attempt(self, claim: str, side: str, Z: int, Q: int, D: int):
        g, c = self.g, self.c
        # these hold when the earlier claims did
        if Z & Q or Z & D or Q & D:
            raise HypothesisFailure(f"{claim}: Z, Q, D overlap", claim=claim)
        if (Q | D) & ~self.part(side):
            raise AssertionError(f"{claim}: Q or D leaves side {side}")
        if g.has_edge_between(Z, D):
            raise HypothesisFailure(f"{claim}: Z and D are not anti-adjacent", claim=claim)
        F = reach(g, Q, D)
        m = self.mu[side].mass(F)
        bound = popcount(Z) * c.eps + c.delta
        record = {"claim": claim, "side": side, "Z": to_list(Z), "mu_reach": str(m), "bound": str(bound), "fired": m > bound}
        self.log.attempts.append(record)
        if not m > bound:
            return None
        S = self.sp.S
        x0 = S & ~(g.closed_neighborhood(Z) & S | Z)
        if not self.s_mu.mass(x0) > 3 * c.delta:
            raise HypothesisFailure(f"{claim}: S outside N[Z] too small to split by components", claim=claim)
        res = largest_component_or_split(g, self.s_mu, x0, c.delta)
        if isinstance(res, AntiPair):
            return TechAntiPair(res.P, res.Q, claim)
        s0 = res.C
        if not any(F >> self.pi[side][x] & 1 for x in bits(s0)):
            raise HypothesisFailure(f"{claim}: no vertex of the big component projects into the reach", claim=claim)
        # shortest path from Q to s0 through D, lowest-index BFS
        parent: dict[int, int | None] = {}
        queue = []
        for q in bits(Q):
            parent[q] = None
            queue.append(q)
        end = None
        i = 0
        while i < len(queue):
            u = queue[i]
            i += 1
            if g.adj[u] & s0:
                end = u
                break
            for w in bits(g.adj[u] & D):
                if w not in parent:
                    parent[w] = u
                    queue.append(w)
        if end is None:
            raise AssertionError(f"{claim}: reach is heavy but no path from Q to the big component")
        path = [end]
        while parent[path[-1]] is not None:
            path.append(parent[path[-1]])
        path.reverse()  # q, d_1, ..., end
        q = path[0]
        found = find_hook_with_active(g, q, Z)
        if found is None:
            raise HypothesisFailure(f"{claim}: no hook with active vertex {q} in Z", claim=claim, q=q)
        i0, emb = found
        ell = i0 + len(path) - 1
        embedding = tuple(reversed(path[1:])) + tuple(emb)
        h = ActiveHook(to_mask(embedding), s0, embedding[0], ell, embedding)
        problems = validate_active_hook(g, h)
        if problems:
            raise AssertionError(f"{claim}: lengthened hook invalid: {problems}")
        bound0 = _inv_bound(c, min(ell, c.k), popcount(S))
        if not popcount(s0) > bound0:
            raise HypothesisFailure(f"{claim}: big component below the growth bound", claim=claim, size=popcount(s0), bound=str(bound0))
        out = _grow(g, S, h, c)
        if isinstance(out, AntiPair):
            return TechAntiPair(out.P, out.Q, claim)
        return TechHook(out, claim)

    def must(self, claim: str, side: str, Z: int, Q: int, D: int):
        out = self.attempt(claim, side, Z, Q, D)
        if out is None:
            raise HypothesisFailure(f"{claim}: construction did not fire", attempt=self.log.attempts[-1])
        return out

    # each claim returns an outcome or None when its property holds

    def a_neighbourhood(self, side: str):
        g = self.g
        A = self.part(side)
        o = self.other(side)
        for x in bits(self.sp.S):
            nx = self.N(side, x)
            for p, q in combinations(to_list(nx), 2):
                if g.has_edge(p, q):
                    continue
                rp = g.adj[p] & A & ~nx
                rq = g.adj[q] & A & ~nx
                if rp == rq:
                    continue
                if not rp & ~rq:
                    p, q, rp, rq = q, p, rq, rp
                r = lowest(rp & ~rq)
                Z = to_mask((p, q, r, x))
                return self.must(f"A-neighbourhood[{side}]", o, Z, self.N(o, x), self.part(o) & ~self.N(o, x))
        return None

    def nonedge_outside(self, side: str):
        g = self.g
        A = self.part(side)
        o = self.other(side)
        s = to_list(self.sp.S)
        for x, y in combinations(s, 2):
            if g.has_edge(x, y) or self.N(o, x) == self.N(o, y):
                continue
            ax, ay = self.N(side, x), self.N(side, y)
            common, outside = ax & ay, A & ~(ax | ay)
            if not g.has_edge_between(common, outside):
                continue
            z = lowest(self.N(o, x) ^ self.N(o, y))
            name = f"nonedge-outside[{side}]"
            out = self.attempt(name, side, to_mask((x, y, z)), common, outside)
            if out is not None:
                return out
            F = reach(g, common, outside)
            p = lowest(F & g.neighborhood(common))
            q = lowest(common & g.adj[p])
            D2 = outside & ~F
            Q2 = g.neighborhood(D2) & A & ~D2
            zx, zy = lowest(self.N(o, x)), lowest(self.N(o, y))
            return self.must(name + "'", side, to_mask((p, q, x, y, zx, zy)), Q2, D2)
        return None

    def nested_complete(self, side: str):
        g = self.g
        A = self.part(side)
        s = to_list(self.sp.S)
        for x in s:
            for y in s:
                if x == y or g.has_edge(x, y):
                    continue
                ax, ay = self.N(side, x), self.N(side, y)
                if ax == ay or ax & ay != ax:
                    continue
                for z in bits(ay & ~ax):
                    missing = ax & ~g.adj[z]
                    if missing:
                        p = lowest(missing)
                        D = A & ~ay
                        Q = g.neighborhood(D) & A & ~D
                        return self.must(f"nested-complete[{side}]", side, to_mask((z, p, x)), Q, D)
        return None

    def crossing_difference(self, side: str, x: int, y: int):
        """x, y with N(x) != N(y) on ``side`` but no edge from the symmetric
        difference to the common non-neighbourhood."""
        A = self.part(side)
        ax, ay = self.N(side, x), self.N(side, y)
        p = lowest(ax ^ ay)
        if ay >> p & 1:
            x, y = y, x
        D = A & ~(ax | ay)
        Q = self.g.neighborhood(D) & A & ~D
        z = lowest(self.N(self.other(side), y))
        return self.must(f"edge-crossing-difference[{side}]", side, to_mask((p, y, z)), Q, D)

    def crossing_reach(self, side: str, x: int, y: int):
        """Edge xy with N(x) - N(y) nonempty on ``side`` and a light reach
        from it; returns None when the other side's neighbourhoods agree."""
        g = self.g
        A = self.part(side)
        o = self.other(side)
        ax, ay = self.N(side, x), self.N(side, y)
        bx, by = self.N(o, x), self.N(o, y)
        if bx == by:
            return None
        F = reach(g, ax & ~ay, A & ~(ax | ay))
        D = A & ~(ax | ay | F)
        Q = g.neighborhood(D) & A & ~D
        p = lowest(ax & ~ay)
        z = lowest(by)
        name = f"edge-crossing-reach[{side}]"
        if by & ~bx:
            Z = to_mask((x, y, z, p, lowest(by & ~bx)))
        else:
            far = self.part(o) & ~(bx | by)
            diff = bx & ~by
            z2 = next((u for u in bits(diff) if g.adj[u] & far), None)
            if z2 is None:
                return self.crossing_difference(o, x, y)
            Z = to_mask((x, y, z, p, z2, lowest(g.adj[z2] & far)))
        return self.must(name, side, Z, Q, D)

    def edge_crossing(self):
        g = self.g
        c = self.c
        for x0, y0 in g.edges():
            if not (self.sp.S >> x0 & 1 and self.sp.S >> y0 & 1):
                continue
            for x, y in ((x0, y0), (y0, x0)):
                ax, ay = self.N("A", x), self.N("A", y)
                bx, by = self.N("B", x), self.N("B", y)
                if not (ax & ~ay and bx & ~by):
                    continue
                FB = reach(g, bx & ~by, self.sp.B & ~(bx | by))
                if self.mu["B"].mass(FB) <= 6 * c.eps + c.delta:
                    out = self.crossing_reach("B", x, y)
                    if out is None:
                        raise HypothesisFailure("edge-crossing: light reach with equal neighbourhoods", x=x, y=y)
                    return out
                z1 = next(u for u in bits(bx & ~by) if g.adj[u] & self.sp.B & ~(bx | by))
                z2 = lowest(g.adj[z1] & self.sp.B & ~(bx | by))
                out = self.attempt("edge-crossing", "A", to_mask((x, y, z1, z2)), ax & ~ay, self.sp.A & ~(ax | ay))
                if out is not None:
                    return out
                out = self.crossing_reach("A", x, y)
                if out is None:
                    raise HypothesisFailure("edge-crossing: light reach with equal neighbourhoods", x=x, y=y)
                return out
        return None

    def claw(self, shat: int, parts: list[int]):
        g = self.g
        q = quotient(g, parts)
        cl = find_claw(q)
        if cl is None:
            return None
        t, x, y, z = (lowest(parts[i]) for i in cl)
        rels = [relation(self.sp, leaf, t) for leaf in (x, y, z)]
        if all(r == "sub" for r in rels):
            side = "A"
        elif all(r == "sup" for r in rels):
            side = "B"
        else:
            raise HypothesisFailure("claw in the quotient with a mixed relation pattern", claw=[t, x, y, z], relations=rels)
        o = self.other(side)
        A = self.part(side)
        D = A & ~self.N(side, t)
        for u, v in ((x, y), (y, z), (x, z)):
            au, av = self.N(side, u), self.N(side, v)
            Q = self.N(side, t) & ~(au ^ av)
            p = lowest(self.N(o, u) & ~self.N(o, v))
            out = self.attempt(f"claw[{side}]", side, to_mask((t, u, v, p)), Q, D)
            if out is not None:
                return out
        raise HypothesisFailure("claw in the quotient but no construction fired", claw=[t, x, y, z])


def tech_hooks(sp: StructuredPair, k: int | None = None, c: Constants | None = None, strict: bool = True, log: TechLog | None = None):
    """Anti-adjacent pair in S, active hook with reservoir in S, or a module
    partition of a large part of S with a claw-free Berge quotient.

    Outcomes are in the vertex labels of ``sp.g``. With ``strict`` the
    constants must satisfy the covering inequality; otherwise the search
    runs anyway and every outcome is still validated.
    """
    if c is None:
        c = Constants.default(k if k is not None else 0)
    elif k is not None and k != c.k:
        c = Constants(k, c.eps, c.delta, c.gamma)
    log = log if log is not None else TechLog()
    base = StructuredPair(sp.g, sp.A, sp.B, sp.S, c.eps, None)
    problems = validate_structured(base)
    if problems:
        raise GraphError("invalid structured pair at eps = {}: {}".format(c.eps, "; ".join(problems)))
    ineq = c.inequalities()
    log.inequalities = {"input": ineq}
    if strict and not ineq["cover"]:
        raise GraphError(f"constants violate the covering inequality: {c.to_json()}")
    g0 = sp.g
    s0 = popcount(sp.S)
    log.original_S = s0
    f = filter_heavy(base, "measure", 10 * c.eps)
    fsp = f.sp
    labels = fsp.labels
    log.filtered_S = popcount(fsp.S)
    log.removed = popcount(f.removed_A | f.removed_B)
    mu_a, mu_b = side_measure(fsp, "A"), side_measure(fsp, "B")
    worst = max([min_eps(fsp)] + [mu_a.mass(fsp.nA(x)) for x in bits(fsp.S)] + [mu_b.mass(fsp.nB(x)) for x in bits(fsp.S)])
    work = c.with_eps(worst)
    log.working = work
    log.inequalities["working"] = work.inequalities()
    fsp = StructuredPair(fsp.g, fsp.A, fsp.B, fsp.S, worst, labels)

    def lift(mask: int) -> int:
        return to_mask(labels[v] for v in bits(mask))

    def finish(out):
        if isinstance(out, TechAntiPair):
            res = TechAntiPair(lift(out.P), lift(out.Q), out.claim)
            bad = check_pair(g0, res.P, res.Q, "anti-adjacent")
            if bad or res.P & ~sp.S or res.Q & ~sp.S:
                raise AssertionError(f"anti-pair failed validation: {bad}")
            return res
        h = out.hook.relabel(labels)
        bad = validate_active_hook(g0, h)
        if bad or h.R & ~sp.S or h.ell < c.k:
            raise AssertionError(f"hook failed validation: {bad}")
        return TechHook(h, out.claim)

    search = _Search(fsp, work, log)
    for step in (
        lambda: search.a_neighbourhood("A"),
        lambda: search.a_neighbourhood("B"),
        lambda: search.nonedge_outside("A"),
        lambda: search.nonedge_outside("B"),
        lambda: search.nested_complete("A"),
        lambda: search.nested_complete("B"),
        search.edge_crossing,
    ):
        out = step()
        if out is not None:
            return finish(out)
    left = niceness_violations(fsp, first_only=True)
    if left:
        raise HypothesisFailure("pair still not nice after all claims", violation=left[0])
    shat = extract_shat(fsp)
    out = search.claw(shat.shat, shat.parts)
    if out is not None:
        return finish(out)
    cert = quotient_checks(fsp.g, shat.shat, shat.parts, "clawfree_berge")
    if not cert.passed:
        raise HypothesisFailure("quotient is not claw-free Berge", failure=cert.failure, embedding=cert.embedding)
    res = TechModules(lift(shat.shat), tuple(lift(p) for p in shat.parts), cert.quotient, cert.notes)
    if 5 * popcount(res.shat) < s0:
        raise HypothesisFailure("S-hat below |S|/5", size=popcount(res.shat), S=s0)
    for p in res.parts:
        if popcount(p) > c.eps * s0:
            raise HypothesisFailure("module larger than eps|S|", part=to_list(p))
    return res


# ---------------------------------------------------------------- double hooks

@dataclass(frozen=True)
class InducedDoubleHook:
    ell: int
    embedding: tuple[int, ...]  # double_hook(ell) vertex i -> graph vertex
    complemented: bool = False

    def to_json(self) -> dict:
        return {"type": "double_hook", "ell": self.ell, "embedding": list(self.embedding), "complemented": self.complemented}


def _tail(g: Graph, u: int, X2: int) -> list[int] | None:
    """Induced path u, u_1, ..., c inside {u} | X2 where c has two further
    branches c-a and c-b1-b2; returns [u_1, ..., c, a, b1, b2], longest
    path first."""
    best: list | None = None

    def fork(used: int, c: int) -> list[int] | None:
        pool = X2 & ~used & g.adj[c] & ~g.neighborhood(used & ~(1 << c))
        for a in bits(pool):
            for b1 in bits(pool & ~g.adj[a] & ~(1 << a)):
                banned = g.neighborhood(used | 1 << a) | used | 1 << a | 1 << b1
                b2 = X2 & g.adj[b1] & ~banned
                if b2:
                    return [a, b1, lowest(b2)]
        return None

    def extend(path: list[int], used: int):
        nonlocal best
        last = path[-1]
        if len(path) >= 2:
            ends = fork(used, last)
            if ends is not None and (best is None or len(path) + 2 > len(best)):
                best = path[1:] + ends
        for w in bits(X2 & ~used & g.adj[last]):
            if g.adj[w] & used & ~(1 << last):
                continue
            extend(path + [w], used | 1 << w)

    extend([u], 1 << u)
    return best


def assemble_double_hook(g: Graph, h1: ActiveHook, h2: ActiveHook) -> InducedDoubleHook:
    """Join two active hooks through h1's reservoir into an induced double
    hook."""
    for h in (h1, h2):
        bad = validate_active_hook(g, h)
        if bad:
            raise GraphError("not an active hook: " + "; ".join(bad))
    x = h1.active
    if h2.X & ~h1.R:
        raise GraphError("second hook leaves the first reservoir")
    if h2.X & g.adj[x]:
        raise GraphError("second hook meets the neighbourhood of the first active vertex")
    allowed = h1.R & ~h2.X
    parent = {x: None}
    queue = [x]
    end = None
    i = 0
    while i < len(queue):
        u = queue[i]
        i += 1
        if u != x and g.adj[u] & h2.X:
            end = u
            break
        for w in bits(g.adj[u] & allowed):
            if w not in parent:
                parent[w] = u
                queue.append(w)
    if end is None:
        raise GraphError("second hook is not reachable from the first active vertex")
    path = [end]
    while parent[path[-1]] is not None:
        path.append(parent[path[-1]])
    path.reverse()  # x, r_1, ..., r_m
    tail = _tail(g, path[-1], h2.X)
    if tail is None:
        raise GraphError("no induced continuation through the second hook (it may be too short)")
    e1 = list(h1.embedding)
    l1 = h1.ell
    head = [e1[l1 + 2], e1[l1 + 1]] + e1[l1::-1]  # far end of X1 down to x
    spine = head + path[1:] + tail[:-3] + tail[-2:]
    ell = len(spine) - 6
    emb = spine + [e1[l1 + 3], tail[-3]]
    bad = check_embedding(g, double_hook(ell).graph, emb)
    if bad:
        raise AssertionError(f"assembled double hook is not induced: {bad[:3]}")
    return InducedDoubleHook(ell, tuple(emb))


# ---------------------------------------------------------------- main pipeline

@dataclass(frozen=True)
class MainHomPair:
    P: tuple[int, ...]
    Q: tuple[int, ...]
    kind: str
    stage: str

    def to_json(self) -> dict:
        return {"type": "pair", "kind": self.kind, "P": list(self.P), "Q": list(self.Q), "stage": self.stage}


@dataclass(frozen=True)
class Report:
    stage: str
    reason: str
    details: dict

    def to_json(self) -> dict:
        return {"type": "report", "stage": self.stage, "reason": self.reason, "details": self.details}


def _prune(g: Graph, ratio: Fraction) -> int:
    keep = g.full
    while keep:
        size = popcount(keep)
        v = max(bits(keep), key=lambda u: (popcount(g.adj[u] & keep), -u))
        if popcount(g.adj[v] & keep) <= ratio * size:
            break
        keep &= ~(1 << v)
    return keep


def _structure(g: Graph, ratio: Fraction):
    """Sparse graph -> (HomPair | StructuredPair, labels of g-vertices kept)."""
    keep = _prune(g, ratio)
    sub, verts = g.induced(keep)
    if not sub.n:
        return None, verts
    return sparse_to_structured(sub, ratio), verts


def main_hook_pipeline(
    g: Graph,
    k: int,
    sd_eps=Fraction(1, 4),
    sd_frac=Fraction(1, 2),
    degree_ratio=Fraction(1, 20),
    constants: Constants | None = None,
    strict: bool = True,
):
    """Homogeneous pair, induced double hook (in g or its complement), or a
    report naming the step that did not go through."""
    k = int(k)
    degree_ratio = Fraction(degree_ratio)
    notes: dict = {"k": k, "n": g.n, "sd_eps": str(sd_eps), "sd_frac": str(sd_frac), "degree_ratio": str(degree_ratio)}
    if g.n < 2:
        return Report("input", "graph has fewer than two vertices", notes)
    sd = find_sparse_or_dense(g, sd_eps, sd_frac)
    if sd.found is None:
        return Report("sparse_or_dense", "no sparse or dense set of the required size found", {**notes, "exhaustive": sd.exhaustive})
    complemented = sd.kind == "dense"
    h, hverts = g.induced(sd.found)
    if complemented:
        h = h.complement()
    notes["complemented"] = complemented
    notes["subset_size"] = h.n

    def to_g(labels, mask: int) -> tuple[int, ...]:
        return tuple(sorted(hverts[labels[v]] for v in bits(mask)))

    def pair_out(labels, P: int, Q: int, kind: str, stage: str):
        if complemented:
            kind = "adjacent" if kind == "anti-adjacent" else "anti-adjacent"
        out = MainHomPair(to_g(labels, P), to_g(labels, Q), kind, stage)
        bad = check_pair(g, to_mask(out.P), to_mask(out.Q), out.kind)
        if bad:
            raise AssertionError(f"pipeline pair failed validation: {bad}")
        return out

    try:
        first, verts = _structure(h, degree_ratio)
    except GraphError as err:
        return Report("sparse_to_structured", str(err), notes)
    if first is None:
        return Report("prune", "degree pruning removed every vertex", notes)
    notes["pruned_size"] = len(verts)
    if isinstance(first, HomPair):
        return pair_out(verts, first.P, first.Q, first.kind, "sparse_to_structured")
    sp = first
    sp_to_h = [verts[l] for l in sp.labels]
    c = constants or Constants.default(k)
    c = Constants(k, max(c.eps, sp.eps), c.delta, c.gamma)
    notes["constants"] = c.to_json()
    notes["inequalities"] = c.inequalities()
    log = TechLog()
    try:
        out = tech_hooks(sp, k, c, strict=strict, log=log)
    except (GraphError, HypothesisFailure) as err:
        return Report("tech_hooks", str(err), {**notes, "log": log.to_json(), **getattr(err, "details", {})})
    if isinstance(out, TechAntiPair):
        return pair_out(sp_to_h, out.P, out.Q, "anti-adjacent", "tech_hooks")
    if isinstance(out, TechModules):
        return _modules_pair(out, sp_to_h, pair_out, notes)
    h1 = out.hook
    rest = h1.R & ~sp.g.adj[h1.active]
    g2, v2 = sp.g.induced(rest)
    notes["first_hook"] = h1.to_json()
    ratio2 = max([Fraction(g2.degree(v), g2.n) for v in range(g2.n)] + [Fraction(1, max(g2.n, 1))])
    if not ratio2 < Fraction(1, 10):
        return Report("second_hook", "trimmed reservoir is not sparse enough", {**notes, "degree_ratio": str(ratio2)})
    try:
        second = sparse_to_structured(g2, ratio2)
    except GraphError as err:
        return Report("second_hook", str(err), notes)
    if isinstance(second, HomPair):
        return pair_out([sp_to_h[v] for v in v2], second.P, second.Q, second.kind, "second_structure")
    c2 = Constants(k, max(c.eps, second.eps), c.delta, c.gamma)
    log2 = TechLog()
    try:
        out2 = tech_hooks(second, k, c2, strict=strict, log=log2)
    except (GraphError, HypothesisFailure) as err:
        return Report("second_hook", str(err), {**notes, "log": log2.to_json(), **getattr(err, "details", {})})
    to_sp = [v2[l] for l in second.labels]
    if isinstance(out2, TechAntiPair):
        return pair_out([sp_to_h[v] for v in to_sp], out2.P, out2.Q, "anti-adjacent", "second_tech_hooks")
    if isinstance(out2, TechModules):
        return _modules_pair(out2, [sp_to_h[v] for v in to_sp], pair_out, notes)
    h2 = out2.hook.relabel(to_sp)
    try:
        dh = assemble_double_hook(sp.g, h1, h2)
    except GraphError as err:
        return Report("assemble", str(err), notes)
    emb = tuple(hverts[sp_to_h[v]] for v in dh.embedding)
    res = InducedDoubleHook(dh.ell, emb, complemented)
    target = g.complement() if complemented else g
    bad = check_embedding(target, double_hook(dh.ell).graph, list(emb))
    if bad:
        raise AssertionError(f"lifted double hook is not induced: {bad[:3]}")
    return res


def _modules_pair(out: TechModules, labels, pair_out, notes):
    q = out.quotient
    if q.n < 2:
        return Report("modules", "quotient has a single vertex", notes)
    total = popcount(out.shat)
    mu = Measure(tuple(Fraction(popcount(p), total) for p in out.parts))
    if any(w > 1 - 2 * DELTA3 for w in mu.weights):
        return Report("modules", "a module is too heavy for the claw-free Berge step", notes)
    try:
        res = clawfree_berge_pair(q, mu)
    except GraphError as err:
        return Report("modules", str(err), notes)
    P = to_mask(v for i in bits(res.pair.P) for v in bits(out.parts[i]))
    Q = to_mask(v for i in bits(res.pair.Q) for v in bits(out.parts[i]))
    return pair_out(labels, P, Q, res.pair.kind, "modules")
