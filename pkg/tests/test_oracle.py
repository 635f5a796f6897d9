import itertools
import random
from fractions import Fraction

import networkx as nx
import pytest
from hypothesis import given
from hypothesis import strategies as st

from fixtures import graphs, measures, random_graph
from hookpairs.graph_core import Graph, Measure, build_named, hook, to_mask
from hookpairs.oracle import (
    SizeCapExceeded,
    best_homogeneous_pair,
    check_embedding,
    check_pair,
    contains_induced,
    find_odd_hole,
    find_sparse_or_dense,
    is_berge_small,
    max_homogeneous_set,
)


def naive_induced(g: Graph, h: Graph) -> bool:
    for emb in itertools.permutations(range(g.n), h.n):
        if not check_embedding(g, h, list(emb)):
            return True
    return False


def naive_best_pair(g: Graph, mu: Measure) -> Fraction:
    """Enumerate every ordered pair of disjoint sets: 3^n assignments."""
    best = Fraction(0)
    for labels in itertools.product((0, 1, 2), repeat=g.n):
        p = to_mask(v for v in range(g.n) if labels[v] == 1)
        q = to_mask(v for v in range(g.n) if labels[v] == 2)
        if not p or not q:
            continue
        if not check_pair(g, p, q, "anti-adjacent") or not check_pair(g, p, q, "adjacent"):
            best = max(best, min(mu.mass(p), mu.mass(q)))
    return best


def test_hom_examples():
    assert max_homogeneous_set(build_named("cycle", 5))[0] == 2
    assert max_homogeneous_set(build_named("clique", 6))[0] == 6
    assert max_homogeneous_set(build_named("path", 4))[0] == 2


@given(graphs(max_n=10))
def test_hom_matches_networkx(g):
    size, witness = max_homogeneous_set(g)
    h = g.to_networkx()
    expect = max(
        max(len(c) for c in nx.find_cliques(h)),
        max(len(c) for c in nx.find_cliques(nx.complement(h))),
    )
    assert size == expect
    assert g.is_clique(witness) or g.is_independent(witness)


def test_pair_examples():
    empty = Graph.from_edges(6, [])
    best = best_homogeneous_pair(empty)
    assert best.kind == "anti-adjacent" and best.value == Fraction(1, 2)
    k33 = Graph.from_edges(6, [(a, b) for a in range(3) for b in range(3, 6)])
    best = best_homogeneous_pair(k33)
    assert best.kind == "adjacent" and best.value == Fraction(1, 2)
    c5 = best_homogeneous_pair(build_named("cycle", 5))
    assert (c5.kind, c5.P, c5.Q, c5.value) == ("anti-adjacent", 0b00001, 0b01100, Fraction(1, 5))


@given(graphs(min_n=2, max_n=7), st.data())
def test_pair_matches_naive(g, data):
    mu = data.draw(measures(g.n))
    best = best_homogeneous_pair(g, mu)
    assert check_pair(g, best.P, best.Q, best.kind) == []
    assert best.value == naive_best_pair(g, mu)


def test_induced_examples():
    assert contains_induced(build_named("path", 5), build_named("path", 4)) is not None
    assert contains_induced(build_named("cycle", 4), build_named("claw")) is None
    emb = contains_induced(build_named("cycle", 5), hook(0).graph)
    assert emb is not None and check_embedding(build_named("cycle", 5), hook(0).graph, emb) == []
    with pytest.raises(SizeCapExceeded):
        contains_induced(build_named("path", 20), build_named("path", 13))


@given(graphs(min_n=1, max_n=8), graphs(min_n=1, max_n=5))
def test_induced_matches_naive(g, h):
    emb = contains_induced(g, h)
    assert (emb is not None) == naive_induced(g, h)
    if emb is not None:
        assert check_embedding(g, h, emb) == []


def test_berge_examples():
    c5 = is_berge_small(build_named("cycle", 5))
    assert not c5.berge and c5.kind == "odd_hole" and sorted(c5.certificate) == list(range(5))
    rng = random.Random(1)
    for _ in range(20):
        bip = nx.bipartite.random_graph(5, 6, 0.5, seed=rng.randrange(10**6))
        assert is_berge_small(Graph.from_networkx(bip)).berge
    anti = is_berge_small(build_named("cycle", 7).complement())
    assert not anti.berge and anti.kind == "odd_antihole"


@given(graphs(max_n=9))
def test_berge_is_complement_invariant(g):
    assert is_berge_small(g).berge == is_berge_small(g.complement()).berge


@given(graphs(max_n=9))
def test_odd_hole_is_chordless(g):
    hole = find_odd_hole(g)
    if hole is not None:
        k = len(hole)
        assert k % 2 == 1 and k >= 5
        for i, j in itertools.combinations(range(k), 2):
            assert g.has_edge(hole[i], hole[j]) == ((j - i) % k in (1, k - 1))


def test_sparse_or_dense_examples():
    empty = Graph.from_edges(10, [])
    assert find_sparse_or_dense(empty, Fraction(1, 10), Fraction(1, 2)).kind == "sparse"
    k10 = build_named("clique", 10)
    res = find_sparse_or_dense(k10, Fraction(1, 10), Fraction(1, 2))
    assert res.kind == "dense" and res.density == 1


def test_sparse_or_dense_random_is_negative():
    # G(16, 1/2) at eps = 1/20 has no 8-set of density <= 1/20 or >= 19/20
    misses = 0
    for seed in range(5):
        g = random_graph(16, 0.5, random.Random(seed))
        res = find_sparse_or_dense(g, Fraction(1, 20), Fraction(1, 2))
        if res.found is None:
            assert res.exhaustive
            misses += 1
    assert misses >= 4


@pytest.mark.parametrize("seed", range(10))
def test_sparse_or_dense_witness_density(seed):
    rng = random.Random(seed)
    g = random_graph(12, rng.choice((0.1, 0.9)), rng)
    eps = Fraction(1, 4)
    res = find_sparse_or_dense(g, eps, Fraction(1, 2))
    assert res.found is not None
    sub, _ = g.induced(res.found)
    dens = Fraction(sub.edge_count(), max(1, sub.n * (sub.n - 1) // 2))
    assert bin(res.found).count("1") >= 6
    assert dens <= eps or dens >= 1 - eps
