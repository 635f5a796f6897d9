"""Structured pairs (A, B, S) and the niceness machinery on them.

A structured pair splits V(G) into A, B and S with G[A], G[B] connected,
N(A) = N(B) = S and every closed S-neighbourhood small. Vertices of S are
classified by how their neighbourhoods in A and B compare; on a nice pair
this classification decides every edge of a large part of S.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from .graph_core import (
    AntiPair,
    Graph,
    GraphError,
    Measure,
    bits,
    is_module,
    largest_component_or_split,
    lowest,
    popcount,
    quotient,
    to_list,
    to_mask,
)
from .oracle import BERGE_CAP, is_berge_small
from .recognition import find_claw, find_diamond, find_pattern


class NicenessViolation(GraphError):
    """A structured pair fails a niceness property (or a consequence of one)."""

    def __init__(self, prop: str, witness: tuple, detail: str = ""):
        self.prop = prop
        self.witness = witness
        super().__init__(f"{prop} violated by {witness} {detail}".strip())


@dataclass(frozen=True)
class StructuredPair:
    g: Graph
    A: int
    B: int
    S: int
    eps: Fraction
    labels: tuple[int, ...] | None = None  # vertex i of g is labels[i] in the source graph

    def source(self, mask: int) -> list[int]:
        if self.labels is None:
            return to_list(mask)
        return [self.labels[v] for v in bits(mask)]

    def nA(self, x: int) -> int:
        return self.g.adj[x] & self.A

    def nB(self, x: int) -> int:
        return self.g.adj[x] & self.B

    def side(self, name: str) -> int:
        return self.A if name == "A" else self.B

    def to_json(self) -> dict:
        return {
            "type": "structured_pair",
            "n": self.g.n,
            "edges": [list(e) for e in self.g.edges()],
            "A": to_list(self.A),
            "B": to_list(self.B),
            "S": to_list(self.S),
            "eps": str(self.eps),
            "labels": list(self.labels) if self.labels is not None else None,
        }

    @classmethod
    def from_json(cls, data: dict) -> "StructuredPair":
        g = Graph.from_edges(data["n"], [tuple(e) for e in data["edges"]])
        labels = data.get("labels")
        return cls(
            g,
            to_mask(data["A"]),
            to_mask(data["B"]),
            to_mask(data["S"]),
            Fraction(data["eps"]),
            tuple(labels) if labels is not None else None,
        )


def restrict(sp: StructuredPair, keep: int, eps=None) -> StructuredPair:
    """Induced structured pair on ``keep`` (relabelled, labels composed)."""
    sub, verts = sp.g.induced(keep)
    index = {v: i for i, v in enumerate(verts)}

    def remap(mask: int) -> int:
        return to_mask(index[v] for v in bits(mask & keep))

    labels = tuple(sp.labels[v] if sp.labels is not None else v for v in verts)
    return StructuredPair(sub, remap(sp.A), remap(sp.B), remap(sp.S), Fraction(eps if eps is not None else sp.eps), labels)


def min_eps(sp: StructuredPair) -> Fraction:
    """Smallest eps for which condition 4 holds."""
    s = popcount(sp.S)
    worst = max(popcount((sp.g.adj[v] | 1 << v) & sp.S) for v in range(sp.g.n))
    return Fraction(worst, s)


def validate_structured(sp: StructuredPair) -> list[str]:
    g, A, B, S = sp.g, sp.A, sp.B, sp.S
    problems = []
    if not (A and B and S):
        problems.append("A, B and S must be nonempty")
    if A & B or A & S or B & S:
        problems.append("A, B, S overlap")
    if A | B | S != g.full:
        problems.append(f"vertices {to_list(g.full & ~(A | B | S))} outside A, B, S")
    if A and not g.is_connected(A):
        problems.append("G[A] is disconnected")
    if B and not g.is_connected(B):
        problems.append("G[B] is disconnected")
    for v in bits(A):
        hit = g.adj[v] & B
        if hit:
            problems.append(f"A-B edge {v}-{lowest(hit)}")
            break
    if A and g.neighborhood(A) != S:
        problems.append(f"N(A) differs from S at {to_list(g.neighborhood(A) ^ S)}")
    if B and g.neighborhood(B) != S:
        problems.append(f"N(B) differs from S at {to_list(g.neighborhood(B) ^ S)}")
    if S:
        bound = sp.eps * popcount(S)
        for v in range(g.n):
            c = popcount((g.adj[v] | 1 << v) & S)
            if c > bound:
                problems.append(f"|N_S[{v}]| = {c} exceeds eps*|S| = {bound}")
                break
    return problems


def require_valid(sp: StructuredPair) -> None:
    problems = validate_structured(sp)
    if problems:
        raise GraphError("invalid structured pair: " + "; ".join(problems))


# ---------------------------------------------------------------- sparse graphs

@dataclass(frozen=True)
class HomPair:
    P: int
    Q: int
    kind: str


def sparse_to_structured(g: Graph, eps) -> HomPair | StructuredPair:
    """Homogeneous pair with both sides at least n/10, or a 10*eps-structured
    pair with |S| >= n/10, in a graph of maximum degree at most eps*n."""
    eps = Fraction(eps)
    n = g.n
    if not (0 < eps < Fraction(1, 10)):
        raise GraphError("eps must lie in (0, 1/10)")
    if n < 2:
        raise GraphError("need at least two vertices")
    for v in range(n):
        if g.degree(v) > eps * n:
            raise GraphError(f"vertex {v} has degree {g.degree(v)} > eps*n = {eps * n}")
    count = Measure.uniform(n)
    tenth = Fraction(1, 10)
    res = largest_component_or_split(g, count, g.full, tenth)
    if isinstance(res, AntiPair):
        return HomPair(res.P, res.Q, "anti-adjacent")
    g1 = res.C
    a = 1 << lowest(g1)
    while 2 * popcount(g.closed_neighborhood(a)) <= n:
        a |= 1 << lowest(g.neighborhood(a) & g1)
    rest = g1 & ~g.closed_neighborhood(a)
    res = largest_component_or_split(g, count, rest, tenth)
    if isinstance(res, AntiPair):
        return HomPair(res.P, res.Q, "anti-adjacent")
    b = res.C
    if 10 * popcount(a) >= n:
        return HomPair(a, b, "anti-adjacent")
    far = g.neighborhood(a) & ~g.closed_neighborhood(b)
    if 10 * popcount(far) >= n:
        return HomPair(b, far, "anti-adjacent")
    s = g.neighborhood(a) & g.neighborhood(b)
    keep = a | b | s
    sub, verts = g.induced(keep)
    index = {v: i for i, v in enumerate(verts)}
    sp = StructuredPair(
        sub,
        to_mask(index[v] for v in bits(a)),
        to_mask(index[v] for v in bits(b)),
        to_mask(index[v] for v in bits(s)),
        10 * eps,
        tuple(verts),
    )
    require_valid(sp)
    if 10 * popcount(s) < n:
        raise AssertionError("S smaller than n/10")
    return sp


# ---------------------------------------------------------------- filtering

@dataclass(frozen=True)
class FilterResult:
    sp: StructuredPair
    removed_A: int  # in the input's labels
    removed_B: int
    mode: str


def pi_map(sp: StructuredPair, side: str) -> dict[int, int]:
    """Lowest-index neighbour on the given side for every vertex of S."""
    part = sp.side(side)
    return {x: lowest(sp.g.adj[x] & part) for x in bits(sp.S)}


def side_measure(sp: StructuredPair, side: str) -> Measure:
    """mu_A(X) = |pi_A^{-1}(X)| / |S| as a measure on all vertices of g."""
    s = popcount(sp.S)
    counts = [0] * sp.g.n
    for _, p in pi_map(sp, side).items():
        counts[p] += 1
    return Measure(tuple(Fraction(c, s) for c in counts))


def filter_heavy(sp: StructuredPair, mode: str = "full_adjacency", threshold=None) -> FilterResult:
    """Drop vertices of S that see all of A or B (``full_adjacency``) or a
    heavy share of them under the pi-measures (``measure``)."""
    require_valid(sp)
    g = sp.g
    s = popcount(sp.S)
    if mode == "full_adjacency":
        sa = to_mask(x for x in bits(sp.S) if sp.nA(x) == sp.A)
        sb = to_mask(x for x in bits(sp.S) if sp.nB(x) == sp.B)
        hypothesis = all(10 * popcount(g.adj[p] & sp.S) <= s for p in bits(sp.A | sp.B))
    elif mode == "measure":
        threshold = Fraction(threshold if threshold is not None else 10 * sp.eps)
        mu_a, mu_b = side_measure(sp, "A"), side_measure(sp, "B")
        sa = to_mask(x for x in bits(sp.S) if mu_a.mass(sp.nA(x)) >= threshold)
        sb = to_mask(x for x in bits(sp.S) if mu_b.mass(sp.nB(x)) >= threshold)
        # the averaging argument needs every vertex of A and B to see at
        # most threshold/10 of S
        hypothesis = all(10 * popcount(g.adj[p] & sp.S) <= threshold * s for p in bits(sp.A | sp.B))
    else:
        raise ValueError(f"unknown filter mode {mode!r}")
    if hypothesis and (10 * popcount(sa) > s or 10 * popcount(sb) > s):
        raise AssertionError("filtered sets exceed |S|/10 although the averaging hypothesis holds")
    removed = sa | sb
    if removed == sp.S:
        raise GraphError("filtering removed all of S")
    keep = g.full & ~removed
    new_s = s - popcount(removed)
    out = restrict(sp, keep, sp.eps * s / new_s if new_s else sp.eps)
    require_valid(out)
    return FilterResult(out, sa, sb, mode)


# ---------------------------------------------------------------- relations

EQ, NEQ, EQ_A, EQ_B, SUB, SUP, MIXED = "eq", "neq", "eq_A", "eq_B", "sub", "sup", "mixed"


def _cmp(x: int, y: int) -> str:
    if x == y:
        return "="
    if x & y == x:
        return "<"
    if x & y == y:
        return ">"
    return "|"


def relation(sp: StructuredPair, x: int, y: int) -> str:
    a = _cmp(sp.nA(x), sp.nA(y))
    b = _cmp(sp.nB(x), sp.nB(y))
    if a == "=" and b == "=":
        return EQ
    if a == "|" and b == "|":
        return NEQ
    if a == "=":
        return EQ_A
    if b == "=":
        return EQ_B
    if a == "<" and b == ">":
        return SUB
    if a == ">" and b == "<":
        return SUP
    return MIXED


def compute_relations(sp: StructuredPair) -> dict[tuple[int, int], str]:
    s = to_list(sp.S)
    return {(x, y): relation(sp, x, y) for i, x in enumerate(s) for y in s[i + 1:]}


# ---------------------------------------------------------------- niceness

def _swap(sp: StructuredPair) -> StructuredPair:
    return StructuredPair(sp.g, sp.B, sp.A, sp.S, sp.eps, sp.labels)


def niceness_violations(sp: StructuredPair, first_only: bool = False) -> list[tuple[str, tuple]]:
    """Every niceness violation, labelled by property:

    full-side        x in S sees all of A (or all of B)
    nonedge-outside  nonadjacent x, y with different far neighbourhoods whose
                     common neighbourhood touches the rest of the side
    nested-complete  nested neighbourhoods N(x) < N(y) not fully joined
    edge-crossing    edge xy where x has private neighbours on both sides
    """
    g = sp.g
    out: list[tuple[str, tuple]] = []
    s = to_list(sp.S)
    for x in s:
        if sp.nA(x) == sp.A:
            out.append(("full-side", (x, "A")))
        if sp.nB(x) == sp.B:
            out.append(("full-side", (x, "B")))
        if out and first_only:
            return out
    for side_name, view in (("A", sp), ("B", _swap(sp))):
        for i, x in enumerate(s):
            for y in s[i + 1:]:
                if g.has_edge(x, y):
                    continue
                ax, ay = view.nA(x), view.nA(y)
                if view.nB(x) != view.nB(y):
                    common = ax & ay
                    outside = view.A & ~(ax | ay)
                    if g.has_edge_between(common, outside):
                        out.append((f"nonedge-outside[{side_name}]", (x, y)))
                for u, v, nu, nv in ((x, y, ax, ay), (y, x, ay, ax)):
                    if nu != nv and nu & nv == nu:
                        if not g.fully_adjacent(nu, nv & ~nu):
                            out.append((f"nested-complete[{side_name}]", (u, v)))
                if out and first_only:
                    return out
    for x, y in g.edges():
        if not (sp.S >> x & 1 and sp.S >> y & 1):
            continue
        for u, v in ((x, y), (y, x)):
            if sp.nA(u) & ~sp.nA(v) and sp.nB(u) & ~sp.nB(v):
                out.append(("edge-crossing", (u, v)))
                break
        if out and first_only:
            return out
    return out


def check_nice(sp: StructuredPair) -> None:
    bad = niceness_violations(sp, first_only=True)
    if bad:
        prop, wit = bad[0]
        raise NicenessViolation(prop, wit)


def find_stack(sp: StructuredPair) -> tuple | None:
    """Three vertices x, y, z with xy, yz non-edges and N(x) < N(y) < N(z)
    strictly on one side, or None."""
    g = sp.g
    s = to_list(sp.S)
    for view, name in ((sp, "A"), (_swap(sp), "B")):
        for y in s:
            ny = view.nA(y)
            lower = [x for x in s if x != y and not g.has_edge(x, y) and view.nA(x) != ny and view.nA(x) & ny == view.nA(x)]
            if not lower:
                continue
            for z in s:
                nz = view.nA(z)
                if z != y and not g.has_edge(y, z) and nz != ny and ny & nz == ny:
                    return (lower[0], y, z, name)
    return None


@dataclass(frozen=True)
class ShatResult:
    shat: int
    parts: list[int]
    choice: str  # which of ++, +-, -+, -- was taken
    sizes: dict = field(default_factory=dict)


def extract_shat(sp: StructuredPair, rel: dict | None = None, check: bool = True) -> ShatResult:
    """Large subset of S on which neighbourhoods in A and B decide every
    edge, partitioned into modules by equal neighbourhoods."""
    g = sp.g
    if check:
        check_nice(sp)
        st = find_stack(sp)
        if st is not None:
            raise NicenessViolation("stack", st)
    s = to_list(sp.S)
    out_a = in_a = out_b = in_b = 0
    for x in s:
        for y in s:
            if x == y or g.has_edge(x, y):
                continue
            ax, ay = sp.nA(x), sp.nA(y)
            if ax != ay and ax & ay == ax:
                out_a |= 1 << x
                in_a |= 1 << y
            bx, by = sp.nB(x), sp.nB(y)
            if bx != by and bx & by == bx:
                out_b |= 1 << x
                in_b |= 1 << y
    options = {
        "++": sp.S & ~(out_a | out_b),
        "+-": sp.S & ~(out_a | in_b),
        "-+": sp.S & ~(in_a | out_b),
        "--": sp.S & ~(in_a | in_b),
    }
    choice = max(options, key=lambda k: (popcount(options[k]), -list(options).index(k)))
    shat = options[choice]
    if 4 * popcount(shat) < popcount(sp.S):
        raise AssertionError("largest candidate is below |S|/4")
    if rel is None:
        rel = compute_relations(sp)
    members = to_list(shat)
    for i, x in enumerate(members):
        for y in members[i + 1:]:
            r = rel[(x, y)]
            if r == EQ:
                continue
            if g.has_edge(x, y) != (r in (EQ_A, EQ_B, SUB, SUP)) or (not g.has_edge(x, y)) != (r == NEQ):
                raise NicenessViolation("edge classification", (x, y), f"relation {r}, edge {g.has_edge(x, y)}")
    classes: dict[tuple[int, int], int] = {}
    for x in members:
        key = (sp.nA(x), sp.nB(x))
        classes[key] = classes.get(key, 0) | 1 << x
    parts = sorted(classes.values(), key=lowest)
    for p in parts:
        if not is_module(g, p, shat):
            raise AssertionError(f"class {to_list(p)} is not a module")
    return ShatResult(shat, parts, choice, {k: popcount(v) for k, v in options.items()})


# ---------------------------------------------------------------- quotient checks

@dataclass(frozen=True)
class QuotientCertificate:
    quotient: Graph
    target: str
    passed: bool
    failure: str | None = None
    embedding: list | None = None
    notes: tuple = ()


def quotient_checks(g: Graph, shat: int, parts: list[int], target: str) -> QuotientCertificate:
    q = quotient(g, parts) if parts else Graph(0, ())
    notes = []

    def fail(kind: str, emb) -> QuotientCertificate:
        return QuotientCertificate(q, target, False, kind, emb, tuple(notes))

    if target in ("clawfree_berge", "line_of_trianglefree"):
        claw = find_claw(q)
        if claw is not None:
            return fail("claw", claw)
    if target == "line_of_trianglefree":
        d = find_diamond(q)
        if d is not None:
            return fail("diamond", d)
    if target in ("berge", "clawfree_berge"):
        if q.n <= BERGE_CAP:
            b = is_berge_small(q)
            if not b.berge:
                return fail(b.kind, b.certificate)
        else:
            # exhaustive hole search is too slow here; only C5 is ruled out
            c5 = find_pattern(q, "c5")
            if c5 is not None:
                return fail("odd_hole", c5)
            notes.append(f"quotient has {q.n} > {BERGE_CAP} vertices; odd holes longer than 5 unchecked")
    return QuotientCertificate(q, target, True, notes=tuple(notes))


# ---------------------------------------------------------------- claw-free warm-up

@dataclass(frozen=True)
class TechClawFreeResult:
    shat: list[int]  # source labels
    parts: list[list[int]]
    quotient_edges: list
    filtered_eps: Fraction
    filtered_S: int
    original_S: int
    choice: str


def tech_claw_free(sp: StructuredPair) -> TechClawFreeResult:
    """Module partition of a large part of S whose quotient is a line graph
    of a triangle-free graph, for claw-free C5-free inputs at eps = 1/10."""
    require_valid(sp)
    if sp.eps > Fraction(1, 10):
        raise GraphError("tech_claw_free needs a 1/10-structured pair")
    claw = find_claw(sp.g)
    if claw is not None:
        raise GraphError(f"graph contains the claw {claw}")
    c5 = find_pattern(sp.g, "c5")
    if c5 is not None:
        raise GraphError(f"graph contains the induced C5 {c5}")
    s0 = popcount(sp.S)
    f = filter_heavy(sp, "full_adjacency")
    fsp = f.sp
    if fsp.eps > Fraction(1, 8):
        raise AssertionError("filtered pair is not 1/8-structured")
    g = fsp.g
    # the three claims behind niceness, checked directly
    for x in bits(fsp.S):
        for side, part in (("A", fsp.A), ("B", fsp.B)):
            nb = g.adj[x] & part
            if not g.is_clique(nb):
                raise AssertionError(f"N_{side}({x}) is not a clique")
    s = to_list(fsp.S)
    for view, side in ((fsp, "A"), (_swap(fsp), "B")):
        for i, x in enumerate(s):
            for y in s[i + 1:]:
                if g.has_edge(x, y):
                    continue
                ax, ay = view.nA(x), view.nA(y)
                if g.has_edge_between(ax & ay, view.A & ~(ax | ay)):
                    raise AssertionError(f"non-edge claim fails on side {side} for {x},{y}")
    for x, y in g.edges():
        if fsp.S >> x & 1 and fsp.S >> y & 1:
            for u, v in ((x, y), (y, x)):
                if fsp.nA(u) & ~fsp.nA(v) and fsp.nB(u) & ~fsp.nB(v):
                    raise AssertionError(f"edge claim fails for {u},{v}")
    shat = extract_shat(fsp)
    cert = quotient_checks(g, shat.shat, shat.parts, "line_of_trianglefree")
    if not cert.passed:
        raise AssertionError(f"quotient check failed: {cert.failure} {cert.embedding}")
    for p in shat.parts:
        if not any(g.adj[a] & p == p for a in bits(fsp.A)):
            raise AssertionError(f"part {to_list(p)} is not inside any A-neighbourhood")
    if 5 * popcount(shat.shat) < s0:
        raise AssertionError("S-hat below |S|/5")
    return TechClawFreeResult(
        fsp.source(shat.shat),
        [fsp.source(p) for p in shat.parts],
        [list(e) for e in cert.quotient.edges()],
        fsp.eps,
        popcount(fsp.S),
        s0,
        shat.choice,
    )
