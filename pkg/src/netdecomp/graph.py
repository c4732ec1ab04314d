"""Graph representation, BFS machinery, components, and generators.

The graph is immutable: a simple undirected graph over dense node ids
0..n-1 stored both as CSR arrays (for vectorized work) and as plain
adjacency lists (for the scalar BFS loops that dominate the algorithms).
Subgraphs are never materialized; every traversal takes a NodeMask and
only walks alive->alive edges.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

__all__ = [
    "Graph",
    "NodeMask",
    "BarrierSpec",
    "DiameterResult",
    "bfs_layers",
    "connected_components",
    "eccentricity",
    "induced_diameter",
    "generate",
    "complete_graph",
    "graph_from_edges",
    "to_text",
    "from_text",
]


# ----------------------------------------------------------------------------
# Core types
# ----------------------------------------------------------------------------


@dataclass(eq=False)
class Graph:
    """Simple undirected graph with sorted CSR adjacency.

    Invariants: no self-loops, no multi-edges, u in adj(v) iff v in adj(u),
    neighbor lists sorted ascending. Instances are immutable after
    construction and safe to share across threads.
    """

    n: int
    indptr: np.ndarray
    indices: np.ndarray
    _adj: tuple | None = field(default=None, repr=False)

    @property
    def m(self) -> int:
        return int(self.indices.size) // 2

    @property
    def adj(self) -> tuple:
        """Adjacency as a tuple of python lists (built once, cached)."""
        if self._adj is None:
            ip = self.indptr
            idx = self.indices.tolist()
            object.__setattr__(
                self,
                "_adj",
                tuple(idx[ip[v] : ip[v + 1]] for v in range(self.n)),
            )
        return self._adj

    def neighbors(self, v: int) -> np.ndarray:
        return self.indices[self.indptr[v] : self.indptr[v + 1]]

    def degree(self, v: int) -> int:
        return int(self.indptr[v + 1] - self.indptr[v])

    def edges(self) -> Iterable[tuple[int, int]]:
        """All edges as (u, v) with u < v, in sorted order."""
        for u in range(self.n):
            for v in self.adj[u]:
                if u < v:
                    yield (u, v)


def graph_from_edges(n: int, edges: Iterable[tuple[int, int]]) -> Graph:
    """Build a Graph from an edge list; validates simplicity and range."""
    seen = set()
    for u, v in edges:
        if not (0 <= u < n and 0 <= v < n):
            raise ValueError(f"edge ({u},{v}) out of range for n={n}")
        if u == v:
            raise ValueError(f"self-loop at node {u}")
        key = (u, v) if u < v else (v, u)
        if key in seen:
            raise ValueError(f"duplicate edge {key}")
        seen.add(key)
    deg = np.zeros(n, dtype=np.int64)
    for u, v in seen:
        deg[u] += 1
        deg[v] += 1
    indptr = np.zeros(n + 1, dtype=np.int64)
    np.cumsum(deg, out=indptr[1:])
    indices = np.zeros(int(indptr[-1]), dtype=np.int64)
    fill = indptr[:-1].copy()
    for u, v in seen:
        indices[fill[u]] = v
        fill[u] += 1
        indices[fill[v]] = u
        fill[v] += 1
    for v in range(n):
        indices[indptr[v] : indptr[v + 1]].sort()
    return Graph(n=n, indptr=indptr, indices=indices)


class NodeMask:
    """Boolean alive-mask over a graph's nodes; induced-subgraph view.

    Treated as immutable: derived masks are new objects. The bytes buffer
    mirrors the numpy array for fast scalar indexing in BFS loops.
    """

    __slots__ = ("alive", "_bytes", "_count")

    def __init__(self, alive: np.ndarray):
        alive = np.asarray(alive, dtype=bool)
        self.alive = alive
        self._bytes: bytearray | None = None
        self._count: int | None = None

    @classmethod
    def full(cls, n: int) -> "NodeMask":
        return cls(np.ones(n, dtype=bool))

    @classmethod
    def from_nodes(cls, n: int, nodes: Iterable[int]) -> "NodeMask":
        a = np.zeros(n, dtype=bool)
        nodes = np.asarray(list(nodes), dtype=np.int64)
        if nodes.size:
            a[nodes] = True
        return cls(a)

    def as_bytes(self) -> bytearray:
        if self._bytes is None:
            self._bytes = bytearray(self.alive.astype(np.uint8).tobytes())
        return self._bytes

    def count(self) -> int:
        if self._count is None:
            self._count = int(self.alive.sum())
        return self._count

    def node_ids(self) -> np.ndarray:
        return np.flatnonzero(self.alive)

    def without(self, nodes: Iterable[int]) -> "NodeMask":
        a = self.alive.copy()
        nodes = np.asarray(list(nodes), dtype=np.int64)
        if nodes.size:
            a[nodes] = False
        return NodeMask(a)

    def restrict(self, nodes: Iterable[int]) -> "NodeMask":
        """Mask alive exactly on `nodes` (which must be alive here)."""
        a = np.zeros_like(self.alive)
        nodes = np.asarray(list(nodes), dtype=np.int64)
        if nodes.size:
            if not self.alive[nodes].all():
                raise ValueError("restrict: some nodes are not alive")
            a[nodes] = True
        return NodeMask(a)


@dataclass(frozen=True)
class BarrierSpec:
    """Parameters of the subdivided-expander obstruction graph.

    Every edge of a random `degree`-regular base graph on `base_nodes`
    nodes is replaced by a path of `subdivision_length` edges. The result
    has base_nodes + (base_nodes*degree/2)*(subdivision_length-1) nodes.
    """

    base_nodes: int
    degree: int
    subdivision_length: int
    seed: int = 0

    def __post_init__(self):
        if self.degree < 3:
            raise ValueError("barrier base degree must be >= 3")
        if self.subdivision_length < 1:
            raise ValueError("subdivision length must be >= 1")
        if (self.base_nodes * self.degree) % 2 != 0:
            raise ValueError("base_nodes * degree must be even")
        if self.base_nodes <= self.degree:
            raise ValueError("need base_nodes > degree for a simple base graph")

    @property
    def expected_nodes(self) -> int:
        base_edges = self.base_nodes * self.degree // 2
        return self.base_nodes + base_edges * (self.subdivision_length - 1)

    @property
    def expected_edges(self) -> int:
        return (self.base_nodes * self.degree // 2) * self.subdivision_length


# ----------------------------------------------------------------------------
# Scratch buffers: repeated small BFS calls on a big graph should cost
# O(touched), not O(n). Stamp arrays avoid clearing between calls.
# ----------------------------------------------------------------------------


class Scratch:
    __slots__ = ("dist", "stamp", "parent", "gen")

    def __init__(self, n: int):
        self.dist = [0] * n
        self.stamp = [0] * n
        self.parent = [0] * n
        self.gen = 0

    def begin(self) -> int:
        self.gen += 1
        return self.gen


def _bfs_layers(
    adj: tuple,
    alive: bytearray,
    sources: Sequence[int],
    scratch: Scratch,
    r_max: int | None = None,
    stop_size: int | None = None,
) -> tuple[list[int], list[int]]:
    """Layered BFS inside the alive mask.

    Returns (cum, touched): cum[r] = number of alive nodes at distance <= r
    from the source set, for r up to the last explored layer; touched lists
    reached nodes in BFS order. Distances stay readable via scratch until
    the next begin(). Stops early when the frontier dies, when r_max layers
    were explored, or (after finishing a layer) when cum >= stop_size.
    """
    gen = scratch.begin()
    dist, stamp = scratch.dist, scratch.stamp
    frontier = []
    for s in sources:
        if stamp[s] != gen:
            stamp[s] = gen
            dist[s] = 0
            frontier.append(s)
    touched = list(frontier)
    cum = [len(frontier)]
    r = 0
    while frontier:
        if r_max is not None and r >= r_max:
            break
        if stop_size is not None and cum[-1] >= stop_size:
            break
        nxt = []
        d = r + 1
        for u in frontier:
            for w in adj[u]:
                if alive[w] and stamp[w] != gen:
                    stamp[w] = gen
                    dist[w] = d
                    nxt.append(w)
        if not nxt:
            break
        touched.extend(nxt)
        cum.append(cum[-1] + len(nxt))
        frontier = nxt
        r = d
    return cum, touched


def _bfs_tree(
    adj: tuple,
    alive: bytearray,
    root: int,
    scratch: Scratch,
    r_max: int | None = None,
) -> tuple[list[int], int]:
    """BFS tree from a single root; fills scratch.parent for reached nodes.

    parent[root] = -1; otherwise parent = the first discoverer in BFS order.
    Returns (touched-in-BFS-order, eccentricity-within-explored-range).
    """
    gen = scratch.begin()
    dist, stamp, parent = scratch.dist, scratch.stamp, scratch.parent
    stamp[root] = gen
    dist[root] = 0
    parent[root] = -1
    frontier = [root]
    touched = [root]
    r = 0
    while frontier:
        if r_max is not None and r >= r_max:
            break
        nxt = []
        d = r + 1
        for u in frontier:
            for w in adj[u]:
                if alive[w] and stamp[w] != gen:
                    stamp[w] = gen
                    dist[w] = d
                    parent[w] = u
                    nxt.append(w)
        if not nxt:
            break
        touched.extend(nxt)
        frontier = nxt
        r = d
    return touched, r


def _preorder(
    adj: tuple,
    alive: bytearray,
    root: int,
    scratch: Scratch,
) -> list[int]:
    """Depth-first preorder of the BFS tree rooted at `root`.

    Children are visited in ascending id order; a node is emitted before
    its children. Preorder is the fixed traversal used wherever nodes of a
    component need a canonical linear order.
    """
    touched, _ = _bfs_tree(adj, alive, root, scratch)
    children: dict[int, list[int]] = {v: [] for v in touched}
    parent = scratch.parent
    for v in touched:
        if v != root:
            children[parent[v]].append(v)
    order = []
    stack = [root]
    while stack:
        v = stack.pop()
        order.append(v)
        kids = children[v]
        kids.sort()
        stack.extend(reversed(kids))
    return order


# ----------------------------------------------------------------------------
# Public operations
# ----------------------------------------------------------------------------


def bfs_layers(
    g: Graph,
    mask: NodeMask,
    sources: Iterable[int],
    r_max: int,
) -> tuple[list[int], np.ndarray]:
    """Cumulative ball sizes |B_0|..|B_r_max| around a source set.

    Returns (cum, dist) where cum has length r_max+1 (padded with the final
    size once the ball saturates) and dist[v] is the exact distance from the
    sources inside the alive subgraph, -1 where unreached.
    """
    src = sorted(set(int(s) for s in sources))
    if not src:
        raise ValueError("no sources")
    if r_max < 0:
        raise ValueError("r_max must be >= 0")
    alive = mask.as_bytes()
    for s in src:
        if not alive[s]:
            raise ValueError(f"source {s} is not alive")
    scratch = Scratch(g.n)
    cum, touched = _bfs_layers(g.adj, alive, src, scratch, r_max=r_max)
    dist = np.full(g.n, -1, dtype=np.int64)
    sd = scratch.dist
    for v in touched:
        dist[v] = sd[v]
    while len(cum) < r_max + 1:
        cum.append(cum[-1])
    return cum, dist


def connected_components(g: Graph, mask: NodeMask) -> list[np.ndarray]:
    """Partition of the alive nodes into components, ordered by min node id.

    Each component is a sorted ascending array. Empty mask gives [].
    """
    alive = mask.as_bytes()
    seen = bytearray(g.n)
    comps = []
    adj = g.adj
    for v in range(g.n):
        if alive[v] and not seen[v]:
            comp = [v]
            seen[v] = 1
            frontier = [v]
            while frontier:
                nxt = []
                for u in frontier:
                    for w in adj[u]:
                        if alive[w] and not seen[w]:
                            seen[w] = 1
                            nxt.append(w)
                comp.extend(nxt)
                frontier = nxt
            comp.sort()
            comps.append(np.asarray(comp, dtype=np.int64))
    return comps


def eccentricity(g: Graph, mask: NodeMask, v: int) -> int:
    """Exact eccentricity of v within its alive component."""
    alive = mask.as_bytes()
    if not alive[v]:
        raise ValueError(f"node {v} is not alive")
    scratch = Scratch(g.n)
    _, ecc = _bfs_tree(g.adj, alive, v, scratch)
    return ecc


# ----------------------------------------------------------------------------
# Induced diameter
# ----------------------------------------------------------------------------


@dataclass(frozen=True)
class DiameterResult:
    value: int
    connected: bool
    exact: bool


def induced_diameter(
    g: Graph, nodes: Sequence[int], exact_threshold: int = 5000
) -> DiameterResult:
    """Diameter of the subgraph induced by `nodes`.

    Up to exact_threshold nodes this is exact, via a bitset-batched
    all-pairs BFS (one uint64 lane per source, OR-propagated along edges).
    Above the threshold it falls back to eccentricities from a deterministic
    node sample: the reported value is then a certified upper bound
    (2 * min sampled eccentricity), exact only if it meets the sampled
    lower bound.
    """
    nodes = np.asarray(sorted(int(v) for v in nodes), dtype=np.int64)
    k = int(nodes.size)
    if k == 0:
        raise ValueError("empty node set")
    if k == 1:
        return DiameterResult(0, True, True)
    if k > exact_threshold:
        return _diameter_sampled(g, nodes)

    pos = np.full(g.n, -1, dtype=np.int64)
    pos[nodes] = np.arange(k)
    # compact directed edge list inside the cluster
    counts = (g.indptr[nodes + 1] - g.indptr[nodes]).astype(np.int64)
    total = int(counts.sum())
    if total:
        starts = g.indptr[nodes]
        offs = np.repeat(np.cumsum(counts) - counts, counts)
        flat = np.arange(total) - offs + np.repeat(starts, counts)
        dst_raw = g.indices[flat]
        src_raw = np.repeat(nodes, counts)
        keep = pos[dst_raw] >= 0
        src = pos[src_raw[keep]]
        dst = pos[dst_raw[keep]]
    else:
        src = dst = np.zeros(0, dtype=np.int64)

    words = (k + 63) // 64
    reach = np.zeros((k, words), dtype=np.uint64)
    lanes = np.arange(k, dtype=np.uint64)
    reach[np.arange(k), (lanes // np.uint64(64)).astype(np.int64)] = (
        np.uint64(1) << (lanes % np.uint64(64))
    )
    full_row = np.full(words, ~np.uint64(0), dtype=np.uint64)
    if k % 64:
        full_row[-1] = (np.uint64(1) << np.uint64(k % 64)) - np.uint64(1)

    if src.size == 0:
        return DiameterResult(0, k == 1, True)
    order = np.argsort(src, kind="stable")
    src_s, dst_s = src[order], dst[order]
    deg = np.bincount(src_s, minlength=k)
    row_starts = np.concatenate(([0], np.cumsum(deg)))[:-1]
    has_nbrs = deg > 0
    starts_nz = row_starts[has_nbrs]

    diameter = 0
    for step in range(1, k):
        gathered = reach[dst_s]
        agg = np.bitwise_or.reduceat(gathered, starts_nz, axis=0)
        updated = reach[has_nbrs] | agg
        if np.array_equal(updated, reach[has_nbrs]):
            break
        reach[has_nbrs] = updated
        diameter = step
    connected = bool((reach == full_row).all())
    return DiameterResult(diameter, connected, True)


def _diameter_sampled(g: Graph, nodes: np.ndarray) -> DiameterResult:
    mask = NodeMask.from_nodes(g.n, nodes)
    alive = mask.as_bytes()
    scratch = Scratch(g.n)
    k = nodes.size
    stride = max(1, k // 16)
    sample = nodes[::stride][:16]
    lower = 0
    upper = None
    connected = True
    for v in sample:
        touched, ecc = _bfs_tree(g.adj, alive, int(v), scratch)
        if len(touched) != k:
            connected = False
        lower = max(lower, ecc)
        upper = ecc * 2 if upper is None else min(upper, ecc * 2)
    return DiameterResult(int(upper), connected, upper == lower)


# ----------------------------------------------------------------------------
# Generators
# ----------------------------------------------------------------------------


def _gen_path(n: int) -> Graph:
    if n < 1:
        raise ValueError("path needs n >= 1")
    return graph_from_edges(n, [(i, i + 1) for i in range(n - 1)])


def _gen_grid(rows: int, cols: int) -> Graph:
    if rows < 1 or cols < 1:
        raise ValueError("grid needs rows, cols >= 1")
    n = rows * cols
    edges = []
    for r in range(rows):
        for c in range(cols):
            v = r * cols + c
            if c + 1 < cols:
                edges.append((v, v + 1))
            if r + 1 < rows:
                edges.append((v, v + cols))
    return graph_from_edges(n, edges)


def _gen_gnp(n: int, p: float, seed: int) -> Graph:
    """G(n, p) by geometric skipping over the upper triangle: O(n + m)."""
    if n < 1:
        raise ValueError("gnp needs n >= 1")
    if not (0.0 <= p <= 1.0):
        raise ValueError("p must be in [0, 1]")
    if p == 1.0:
        return complete_graph(n)
    edges = []
    if p > 0.0:
        rng = np.random.default_rng(seed)
        lq = math.log1p(-p)
        total = n * (n - 1) // 2
        pos = -1
        while True:
            u = rng.random()
            pos += 1 + int(math.log(1.0 - u) / lq)
            if pos >= total:
                break
            # unrank the linear index into (i, j), i < j
            i = int((2 * n - 1 - math.sqrt((2 * n - 1) ** 2 - 8 * pos)) / 2)
            base = i * (2 * n - i - 1) // 2
            while base > pos:
                i -= 1
                base = i * (2 * n - i - 1) // 2
            while i * (2 * n - i - 1) // 2 + (n - i - 1) <= pos:
                i += 1
            base = i * (2 * n - i - 1) // 2
            j = i + 1 + (pos - base)
            edges.append((i, j))
    return graph_from_edges(n, edges)


def _gen_regular(n: int, deg: int, seed: int, max_attempts: int = 10000) -> Graph:
    """Random deg-regular simple graph via the configuration model.

    Stub pairings with self-loops or parallel edges are rejected wholesale
    and resampled; expansion is a statistical property of the ensemble, not
    certified per instance.
    """
    if deg < 0 or deg >= n:
        raise ValueError("need 0 <= deg < n")
    if (n * deg) % 2 != 0:
        raise ValueError("n * deg must be even")
    rng = np.random.default_rng(seed)
    stubs0 = np.repeat(np.arange(n, dtype=np.int64), deg)
    for _ in range(max_attempts):
        stubs = rng.permutation(stubs0)
        a, b = stubs[0::2], stubs[1::2]
        if (a == b).any():
            continue
        lo = np.minimum(a, b)
        hi = np.maximum(a, b)
        keys = lo * n + hi
        if np.unique(keys).size != keys.size:
            continue
        return graph_from_edges(n, list(zip(lo.tolist(), hi.tolist())))
    raise RuntimeError(f"configuration model failed after {max_attempts} attempts")


def _gen_barrier(spec: BarrierSpec) -> Graph:
    """Subdivide each edge of a random regular base graph into a path.

    Base nodes keep ids 0..base_nodes-1; internal path nodes are appended in
    the sorted order of base edges, so the construction is reproducible.
    """
    base = _gen_regular(spec.base_nodes, spec.degree, spec.seed)
    base_edges = sorted(base.edges())
    ell = spec.subdivision_length
    next_id = spec.base_nodes
    edges = []
    for (u, v) in base_edges:
        chain = [u] + list(range(next_id, next_id + ell - 1)) + [v]
        next_id += ell - 1
        for i in range(len(chain) - 1):
            edges.append((chain[i], chain[i + 1]))
    return graph_from_edges(next_id, edges)


def complete_graph(n: int) -> Graph:
    if n < 1:
        raise ValueError("complete graph needs n >= 1")
    return graph_from_edges(n, [(i, j) for i in range(n) for j in range(i + 1, n)])


_KINDS = ("path", "grid", "gnp", "regular_expander", "barrier")


def generate(kind: str, seed: int = 0, **params) -> Graph:
    """Build a named graph family member; deterministic for a fixed seed.

    kinds: path(n), grid(rows, cols), gnp(n, p), regular_expander(n, deg),
    barrier(base_nodes, degree, subdivision_length).
    """
    if kind == "path":
        return _gen_path(int(params["n"]))
    if kind == "grid":
        return _gen_grid(int(params["rows"]), int(params["cols"]))
    if kind == "gnp":
        return _gen_gnp(int(params["n"]), float(params["p"]), seed)
    if kind == "regular_expander":
        return _gen_regular(int(params["n"]), int(params["deg"]), seed)
    if kind == "barrier":
        spec = params.get("spec")
        if spec is None:
            spec = BarrierSpec(
                base_nodes=int(params["base_nodes"]),
                degree=int(params["degree"]),
                subdivision_length=int(params["subdivision_length"]),
                seed=seed,
            )
        return _gen_barrier(spec)
    raise ValueError(f"unknown kind {kind!r}; expected one of {_KINDS}")


# ----------------------------------------------------------------------------
# Text format: "n m" then one "u v" line per edge with u < v, LF endings.
# ----------------------------------------------------------------------------


def to_text(g: Graph) -> str:
    lines = [f"{g.n} {g.m}"]
    lines.extend(f"{u} {v}" for u, v in sorted(g.edges()))
    return "\n".join(lines) + "\n"


def from_text(text: str) -> Graph:
    rows = [ln for ln in text.split("\n") if ln.strip()]
    if not rows:
        raise ValueError("empty graph text")
    head = rows[0].split()
    if len(head) != 2:
        raise ValueError("header must be 'n m'")
    n, m = int(head[0]), int(head[1])
    if len(rows) - 1 != m:
        raise ValueError(f"expected {m} edge lines, found {len(rows) - 1}")
    edges = []
    for ln in rows[1:]:
        parts = ln.split()
        if len(parts) != 2:
            raise ValueError(f"bad edge line: {ln!r}")
        u, v = int(parts[0]), int(parts[1])
        if not (0 <= u < v < n):
            raise ValueError(f"edge ({u},{v}) violates 0 <= u < v < n")
        edges.append((u, v))
    return graph_from_edges(n, edges)
