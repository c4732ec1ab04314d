import json

import numpy as np
import pytest

from netdecomp import (
    NodeMask,
    generate,
    verify_weak_carving,
    weak_carve,
)

from conftest import fuzz_graph


def test_eps_out_of_range():
    g = generate("path", n=3)
    for eps in (0.0, 1.0, -0.2, 2.0):
        with pytest.raises(ValueError):
            weak_carve(g, NodeMask.full(3), eps, 0)


def test_empty_alive_set():
    g = generate("path", n=3)
    with pytest.raises(ValueError):
        weak_carve(g, NodeMask(np.zeros(3, dtype=bool)), 0.5, 0)


@pytest.mark.parametrize("impl", ["trivial", "linial_saks"])
def test_single_node(impl):
    g = generate("path", n=1)
    wc, _ = weak_carve(g, NodeMask.full(1), 0.5, 3, impl=impl)
    assert len(wc.clusters) == 1
    assert wc.clusters[0].nodes.tolist() == [0]
    assert len(wc.dead) == 0
    assert wc.declared_depth == 0


def test_trivial_connected_graph_one_cluster():
    g = generate("gnp", 7, n=30, p=0.2)
    mask = NodeMask.full(30)
    wc, led = weak_carve(g, mask, 0.5, 0, impl="trivial")
    assert len(wc.clusters) == 1
    assert wc.clusters[0].nodes.tolist() == list(range(30))
    assert wc.declared_congestion == 1
    assert len(wc.dead) == 0
    assert not verify_weak_carving(g, mask, wc, 0.5)
    # leader election on the BFS tree: 3 * radius from the min-id node
    assert led.total_rounds == 3 * wc.declared_depth


def test_trivial_handles_components_independently():
    g = generate("path", n=7)
    mask = NodeMask.full(7).without([3])
    wc, _ = weak_carve(g, mask, 0.5, 0, impl="trivial")
    assert len(wc.clusters) == 2
    assert sorted(c.nodes.tolist() for c in wc.clusters) == [[0, 1, 2], [4, 5, 6]]
    assert not verify_weak_carving(g, mask, wc, 0.5)


def test_linial_saks_structural_over_seeds():
    g = generate("gnp", 5, n=120, p=0.03)
    mask = NodeMask.full(120)
    for seed in range(20):
        wc, _ = weak_carve(g, mask, 0.3, seed, impl="linial_saks")
        violations = verify_weak_carving(g, mask, wc, 0.3)
        assert not violations, [v.to_json() for v in violations]


def test_linial_saks_respects_radius_cap():
    import math

    g = generate("gnp", 1, n=80, p=0.05)
    mask = NodeMask.full(80)
    eps = 0.25
    r_cap = max(1, math.ceil(2 * math.log(80) / eps))
    for seed in range(10):
        wc, _ = weak_carve(g, mask, eps, seed, impl="linial_saks")
        assert wc.declared_depth <= r_cap
        assert wc.declared_congestion <= r_cap


def test_linial_saks_clusters_non_adjacent_exhaustive():
    rng = np.random.default_rng(17)
    for _ in range(25):
        g = fuzz_graph(rng, max_n=70)
        mask = NodeMask.full(g.n)
        wc, _ = weak_carve(g, mask, 0.4, int(rng.integers(2**31)), impl="linial_saks")
        owner = {}
        for k, c in enumerate(wc.clusters):
            for v in c.nodes.tolist():
                owner[v] = k
        for u in range(g.n):
            if u in owner:
                for v in g.adj[u]:
                    if v in owner:
                        assert owner[u] == owner[v], (u, v)


def test_linial_saks_dead_within_budget_every_run():
    # the instance resamples until compliant, so the bound is per-run hard
    rng = np.random.default_rng(23)
    for _ in range(15):
        g = fuzz_graph(rng, max_n=90)
        mask = NodeMask.full(g.n)
        eps = float(rng.uniform(0.1, 0.6))
        wc, _ = weak_carve(g, mask, eps, int(rng.integers(2**31)), impl="linial_saks")
        assert len(wc.dead) <= eps * g.n


def test_linial_saks_deterministic():
    g = generate("gnp", 9, n=100, p=0.04)
    mask = NodeMask.full(100)
    a, led_a = weak_carve(g, mask, 0.3, 42, impl="linial_saks")
    b, led_b = weak_carve(g, mask, 0.3, 42, impl="linial_saks")
    assert json.dumps(a.to_json()) == json.dumps(b.to_json())
    assert led_a.to_json() == led_b.to_json()
    c, _ = weak_carve(g, mask, 0.3, 43, impl="linial_saks")
    assert json.dumps(a.to_json()) != json.dumps(c.to_json()) or len(a.clusters) == 1


def test_steiner_root_may_sit_outside_its_cluster():
    # structural property: trees must live inside the component and cover
    # exactly the terminals; roots outside the cluster are legitimate
    rng = np.random.default_rng(31)
    seen_outside = 0
    for trial in range(40):
        g = fuzz_graph(rng, max_n=60)
        mask = NodeMask.full(g.n)
        wc, _ = weak_carve(g, mask, 0.5, trial, impl="linial_saks")
        assert not verify_weak_carving(g, mask, wc, 0.5)
        for c in wc.clusters:
            if int(c.tree.root) not in set(c.nodes.tolist()):
                seen_outside += 1
    # not asserting seen_outside > 0: rare but allowed; the verifier accepting
    # every run is the real check


def test_unknown_impl():
    g = generate("path", n=2)
    with pytest.raises(ValueError):
        weak_carve(g, NodeMask.full(2), 0.5, 0, impl="magic")


def test_linial_saks_g500_hundred_seeds_mean_dead_and_structure():
    # empirical statistic: mean dead fraction over 100 seeds stays within
    # eps; structure (partition, non-adjacency, depth, congestion) holds on
    # every single run
    g = generate("gnp", 500, n=500, p=0.02)
    mask = NodeMask.full(500)
    eps = 0.25
    fractions = []
    for seed in range(100):
        wc, _ = weak_carve(g, mask, eps, seed, impl="linial_saks")
        violations = verify_weak_carving(g, mask, wc, eps)
        assert not violations, (seed, [v.to_json() for v in violations])
        fractions.append(len(wc.dead) / 500)
    mean = sum(fractions) / len(fractions)
    assert mean <= eps, mean
