"""Shared fixtures and independent oracles.

The oracles here deliberately avoid the library's traversal code: distances
come from dense Floyd-Warshall, components from union-find, ball sizes from
a dict-based BFS. Tests compare library outputs against these.
"""

from __future__ import annotations

from collections import deque

import numpy as np
import pytest

from netdecomp import Graph, NodeMask, generate, graph_from_edges


# ----------------------------------------------------------------------------
# oracles
# ----------------------------------------------------------------------------

INF = 10**9


def fw_distances(g: Graph, alive: set[int] | None = None) -> np.ndarray:
    """All-pairs distances by Floyd-Warshall on a dense matrix."""
    n = g.n
    d = np.full((n, n), INF, dtype=np.int64)
    keep = set(range(n)) if alive is None else alive
    for v in keep:
        d[v, v] = 0
    for u in range(n):
        if u not in keep:
            continue
        for v in g.adj[u]:
            if v in keep:
                d[u, v] = 1
    for k in range(n):
        if k not in keep:
            continue
        d = np.minimum(d, d[:, k, None] + d[None, k, :])
    return d


def uf_components(g: Graph, mask: NodeMask) -> list[frozenset]:
    """Alive components via union-find."""
    parent = list(range(g.n))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    alive = mask.alive
    for u in range(g.n):
        if not alive[u]:
            continue
        for v in g.adj[u]:
            if v > u and alive[v]:
                parent[find(u)] = find(v)
    groups: dict[int, set[int]] = {}
    for v in range(g.n):
        if alive[v]:
            groups.setdefault(find(v), set()).add(v)
    return [frozenset(s) for s in groups.values()]


def ref_ball_sizes(g: Graph, alive: set[int], sources, r_max: int) -> list[int]:
    """Cumulative ball sizes by an independent dict-based BFS."""
    dist = {s: 0 for s in sources}
    q = deque(sources)
    while q:
        u = q.popleft()
        for w in g.adj[u]:
            if w in alive and w not in dist:
                dist[w] = dist[u] + 1
                q.append(w)
    return [sum(1 for d in dist.values() if d <= r) for r in range(r_max + 1)]


def ref_eccentricity(g: Graph, alive: set[int], v: int) -> int:
    dist = {v: 0}
    q = deque([v])
    ecc = 0
    while q:
        u = q.popleft()
        for w in g.adj[u]:
            if w in alive and w not in dist:
                dist[w] = dist[u] + 1
                ecc = max(ecc, dist[w])
                q.append(w)
    return ecc


# ----------------------------------------------------------------------------
# fuzz graph corpus
# ----------------------------------------------------------------------------

FAMILIES = ("path", "grid", "gnp005", "gnp02", "gnp1", "regular4")


def fuzz_graph(rng: np.random.Generator, max_n: int = 200, connected: bool = False) -> Graph:
    """One random graph from the acceptance families, sized for unit tests."""
    family = FAMILIES[int(rng.integers(len(FAMILIES)))]
    seed = int(rng.integers(2**31))
    if family == "path":
        return generate("path", n=int(rng.integers(1, max_n + 1)))
    if family == "grid":
        side = int(rng.integers(1, max(2, int(max_n**0.5)) + 1))
        return generate("grid", rows=side, cols=max(1, int(rng.integers(1, side + 1))))
    if family == "regular4":
        n = int(rng.integers(5, max_n + 1))
        if (n * 4) % 2:
            n += 1
        g = generate("regular_expander", seed=seed, n=n, deg=4)
    else:
        p = {"gnp005": 0.005, "gnp02": 0.02, "gnp1": 0.1}[family]
        n = int(rng.integers(2, max_n + 1))
        g = generate("gnp", seed=seed, n=n, p=p)
    if connected:
        g = largest_component_graph(g)
    return g


def largest_component_graph(g: Graph) -> Graph:
    """Relabel the largest component as its own graph."""
    comps = uf_components(g, NodeMask.full(g.n))
    best = max(comps, key=lambda c: (len(c), -min(c)))
    order = sorted(best)
    pos = {v: i for i, v in enumerate(order)}
    edges = [
        (pos[u], pos[v]) for u in order for v in g.adj[u] if v in best and u < v
    ]
    return graph_from_edges(len(order), edges)


@pytest.fixture
def rng():
    return np.random.default_rng(20260810)


# ----------------------------------------------------------------------------
# cut-or-cluster oracles
# ----------------------------------------------------------------------------


def ref_preorder(g: Graph, alive: set[int], root: int) -> list[int]:
    """Independent reimplementation of the canonical traversal: BFS tree from
    root (first discoverer wins, neighbors ascending), then DFS preorder with
    children ascending."""
    parent = {root: -1}
    frontier = [root]
    while frontier:
        nxt = []
        for u in frontier:
            for w in g.adj[u]:
                if w in alive and w not in parent:
                    parent[w] = u
                    nxt.append(w)
        frontier = nxt
    children: dict[int, list[int]] = {v: [] for v in parent}
    for v, p in parent.items():
        if p >= 0:
            children[p].append(v)
    order = []
    stack = [root]
    while stack:
        v = stack.pop()
        order.append(v)
        stack.extend(sorted(children[v], reverse=True))
    return order


def ref_coverage_radius(g: Graph, alive: set[int], seed_nodes, target: float) -> int:
    sizes = ref_ball_sizes(g, alive, list(seed_nodes), len(alive))
    for r, c in enumerate(sizes):
        if c >= target:
            return r
    raise AssertionError("coverage target unreachable")


def check_cut_or_cluster_outcome(g: Graph, alive_ids, outcome, exact_diameter=None):
    """Assert the dichotomy postconditions by direct measurement."""
    n = len(alive_ids)
    alive_set = set(int(v) for v in alive_ids)
    rho = outcome.params.get("rho", 1.0)
    if outcome.variant == "cut":
        v1 = set(int(v) for v in outcome.v1)
        v2 = set(int(v) for v in outcome.v2)
        sep = set(int(v) for v in outcome.separator)
        assert v1 | v2 | sep == alive_set
        assert not (v1 & v2) and not (v1 & sep) and not (v2 & sep)
        assert 3 * len(v1) >= n and 3 * len(v2) >= n
        assert len(sep) <= (rho - 1) * n
        for u in v1:
            for w in g.adj[u]:
                assert w not in v2, f"cut sides adjacent via ({u},{w})"
    else:
        comp = set(int(v) for v in outcome.component)
        halo = set(int(v) for v in outcome.halo)
        assert 3 * len(comp) >= n
        assert len(halo) <= (rho - 1) * n
        # halo is exactly the outside neighborhood of the component
        neigh = set()
        for u in comp:
            for w in g.adj[u]:
                if w in alive_set and w not in comp:
                    neigh.add(w)
        assert neigh == halo
        k_l = outcome.params.get("k_l", 0)
        assert outcome.r_star <= outcome.a_final + k_l
        if exact_diameter is not None:
            assert exact_diameter <= 2 * (outcome.a_final + k_l)


def check_halving_trace(g: Graph, alive_ids, outcome):
    """Recompute every halving step from scratch; the recorded radii must
    match and min(a1, a2) <= b must hold at each step."""
    n = len(alive_ids)
    alive_set = set(int(v) for v in alive_ids)
    order = ref_preorder(g, alive_set, min(alive_set))
    pos = {v: i for i, v in enumerate(order)}
    for step in outcome.trace:
        seed_nodes = [int(v) for v in step["seed"]]
        a = ref_coverage_radius(g, alive_set, seed_nodes, n / 3)
        b = ref_coverage_radius(g, alive_set, seed_nodes, 2 * n / 3)
        assert a == step["a"] and b == step["b"], (step, a, b)
        if "chosen" in step:
            s_sorted = sorted(seed_nodes, key=pos.__getitem__)
            half = (len(s_sorted) + 1) // 2
            a1 = ref_coverage_radius(g, alive_set, s_sorted[:half], n / 3)
            a2 = ref_coverage_radius(g, alive_set, s_sorted[half:], n / 3)
            assert a1 == step["a1"] and a2 == step["a2"]
            assert min(a1, a2) <= b
            assert step["chosen"] == (1 if a1 < a2 else 2)
