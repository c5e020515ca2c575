"""Undirected simple graphs on nodes ``0..n-1`` stored as adjacency bitmasks.

Everything here is a pure function of an immutable :class:`Graph`, which keeps
the formation engine free to share graphs across cached utility evaluations.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from itertools import combinations, permutations
from typing import Iterable, Iterator, Optional, Sequence

UNREACHABLE = -1
CANONICAL_MAX_NODES = 9


class SizeLimitError(ValueError):
    """Raised when a brute-force routine is asked to go past its size bound."""


def _bits(mask: int) -> Iterator[int]:
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


@dataclass(frozen=True)
class Graph:
    n: int
    adj: tuple[int, ...]

    def __post_init__(self) -> None:
        if self.n < 0 or len(self.adj) != self.n:
            raise ValueError("adjacency length must equal node count")
        full = (1 << self.n) - 1
        for v, mask in enumerate(self.adj):
            if mask >> v & 1:
                raise ValueError(f"self-loop at node {v}")
            if mask & ~full:
                raise ValueError(f"edge endpoint out of range at node {v}")
            for w in _bits(mask):
                if not self.adj[w] >> v & 1:
                    raise ValueError(f"asymmetric adjacency between {v} and {w}")

    @classmethod
    def empty(cls, n: int) -> "Graph":
        return cls(n, (0,) * n)

    @classmethod
    def from_edges(cls, n: int, edges: Iterable[tuple[int, int]]) -> "Graph":
        adj = [0] * n
        for u, v in edges:
            if u == v:
                raise ValueError(f"self-loop at node {u}")
            if not (0 <= u < n and 0 <= v < n):
                raise ValueError(f"edge ({u}, {v}) out of range for n={n}")
            adj[u] |= 1 << v
            adj[v] |= 1 << u
        return cls(n, tuple(adj))

    @property
    def edges(self) -> tuple[tuple[int, int], ...]:
        return tuple(
            (u, v) for u in range(self.n) for v in _bits(self.adj[u]) if u < v
        )

    @property
    def edge_count(self) -> int:
        return sum(m.bit_count() for m in self.adj) // 2

    def degree(self, v: int) -> int:
        return self.adj[v].bit_count()

    def degrees(self) -> list[int]:
        return [m.bit_count() for m in self.adj]

    def neighbors(self, v: int) -> list[int]:
        return list(_bits(self.adj[v]))

    def has_edge(self, u: int, v: int) -> bool:
        return bool(self.adj[u] >> v & 1)

    def check_node(self, v: int) -> None:
        if not (0 <= v < self.n):
            raise ValueError(f"node {v} not in graph with {self.n} nodes")

    def add_edge(self, u: int, v: int) -> "Graph":
        if u == v:
            raise ValueError("self-loop")
        adj = list(self.adj)
        adj[u] |= 1 << v
        adj[v] |= 1 << u
        return Graph(self.n, tuple(adj))

    def remove_edge(self, u: int, v: int) -> "Graph":
        adj = list(self.adj)
        adj[u] &= ~(1 << v)
        adj[v] &= ~(1 << u)
        return Graph(self.n, tuple(adj))

    def add_node(self) -> "Graph":
        return Graph(self.n + 1, self.adj + (0,))

    def relabel(self, perm: Sequence[int]) -> "Graph":
        """Graph with node ``v`` renamed to ``perm[v]``."""
        return Graph.from_edges(self.n, ((perm[u], perm[v]) for u, v in self.edges))

    def __repr__(self) -> str:
        return f"Graph(n={self.n}, edges={list(self.edges)})"


# skip the O(n^2) validation on hot paths where masks are known to be valid
def _fast_graph(n: int, adj: tuple[int, ...]) -> Graph:
    g = object.__new__(Graph)
    object.__setattr__(g, "n", n)
    object.__setattr__(g, "adj", adj)
    return g


def with_edge(g: Graph, u: int, v: int) -> Graph:
    adj = list(g.adj)
    adj[u] |= 1 << v
    adj[v] |= 1 << u
    return _fast_graph(g.n, tuple(adj))


def without_edge(g: Graph, u: int, v: int) -> Graph:
    adj = list(g.adj)
    adj[u] &= ~(1 << v)
    adj[v] &= ~(1 << u)
    return _fast_graph(g.n, tuple(adj))


# ---------------------------------------------------------------------------
# distances and essential nodes


def distance_layers(adj: Sequence[int], source: int, allowed: int = -1) -> list[int]:
    """BFS frontier masks from ``source``: entry ``l`` holds nodes at distance ``l``."""
    seen = 1 << source
    frontier = seen
    layers = [frontier]
    while True:
        nxt = 0
        for v in _bits(frontier):
            nxt |= adj[v]
        nxt &= ~seen & allowed
        if not nxt:
            return layers
        seen |= nxt
        layers.append(nxt)
        frontier = nxt


def reachable(adj: Sequence[int], source: int, allowed: int = -1) -> int:
    seen = frontier = 1 << source
    while frontier:
        nxt = 0
        for v in _bits(frontier):
            nxt |= adj[v]
        frontier = nxt & ~seen & allowed
        seen |= frontier
    return seen


def components(g: Graph, allowed: Optional[int] = None) -> list[int]:
    """Connected components as bitmasks, restricted to ``allowed`` nodes."""
    remaining = ((1 << g.n) - 1) if allowed is None else allowed
    out = []
    while remaining:
        start = (remaining & -remaining).bit_length() - 1
        comp = reachable(g.adj, start, remaining)
        out.append(comp)
        remaining &= ~comp
    return out


def shortest_distances(g: Graph) -> list[list[int]]:
    """All-pairs hop distances; ``UNREACHABLE`` (-1) across components."""
    dist = [[UNREACHABLE] * g.n for _ in range(g.n)]
    for s in range(g.n):
        row = dist[s]
        for d, layer in enumerate(distance_layers(g.adj, s)):
            for v in _bits(layer):
                row[v] = d
    return dist


def separations(g: Graph) -> dict[int, list[int]]:
    """For each cut vertex ``v``, the components of its own component minus ``v``.

    Nodes ``y, z`` lying in different listed components are separated by ``v``,
    i.e. ``v`` is essential for the pair.
    """
    out: dict[int, list[int]] = {}
    full = (1 << g.n) - 1
    for v in range(g.n):
        if g.adj[v].bit_count() < 2:
            continue
        own = reachable(g.adj, v) & ~(1 << v)
        parts = []
        rest = own
        while rest:
            start = (rest & -rest).bit_length() - 1
            comp = reachable(g.adj, start, full & ~(1 << v))
            parts.append(comp)
            rest &= ~comp
        if len(parts) > 1:
            out[v] = parts
    return out


def essential_nodes(g: Graph, y: int, z: int) -> frozenset[int]:
    """Nodes other than ``y, z`` lying on every path joining them.

    Empty when the pair is adjacent, doubly connected, or in different components.
    """
    g.check_node(y)
    g.check_node(z)
    if y == z:
        raise ValueError("essential_nodes needs two distinct nodes")
    full = (1 << g.n) - 1
    if not reachable(g.adj, y) >> z & 1:
        return frozenset()
    out = set()
    for j in range(g.n):
        if j in (y, z):
            continue
        if not reachable(g.adj, y, full & ~(1 << j)) >> z & 1:
            out.add(j)
    return frozenset(out)


# ---------------------------------------------------------------------------
# standard families


def star_graph(n: int) -> Graph:
    """Center 0 joined to leaves 1..n-1."""
    return Graph.from_edges(n, ((0, v) for v in range(1, n)))


def complete_graph(n: int) -> Graph:
    return Graph.from_edges(n, combinations(range(n), 2))


def path_graph(n: int) -> Graph:
    return Graph.from_edges(n, ((v, v + 1) for v in range(n - 1)))


def cycle_graph(n: int) -> Graph:
    return Graph.from_edges(n, [(v, (v + 1) % n) for v in range(n)] if n >= 3 else [])


def complete_bipartite(p1: int, p2: int) -> Graph:
    return Graph.from_edges(p1 + p2, ((u, p1 + v) for u in range(p1) for v in range(p2)))


def turan_bipartite(n: int) -> Graph:
    return complete_bipartite((n + 1) // 2, n // 2)


def k_star_graph(k: int, leaf_counts: Sequence[int]) -> Graph:
    """Centers ``0..k-1`` pairwise adjacent; center ``i`` gets ``leaf_counts[i]`` leaves."""
    if len(leaf_counts) != k:
        raise ValueError("need one leaf count per center")
    edges = list(combinations(range(k), 2))
    nxt = k
    for i, m in enumerate(leaf_counts):
        for _ in range(m):
            edges.append((i, nxt))
            nxt += 1
    return Graph.from_edges(nxt, edges)


def balanced_k_star(k: int, n: int) -> Graph:
    """k-star on ``n`` nodes with leaves dealt round-robin to the centers."""
    leaves = n - k
    if leaves < k:
        raise ValueError("a k-star needs at least one leaf per center")
    counts = [leaves // k + (1 if i < leaves % k else 0) for i in range(k)]
    return k_star_graph(k, counts)


# ---------------------------------------------------------------------------
# topology labels


class Topology(str, Enum):
    NULL = "null"
    SINGLE_NODE = "single_node"
    STAR = "star"
    COMPLETE = "complete"
    BIPARTITE_TURAN = "bipartite_turan"
    KSTAR = "kstar"
    OTHER = "other"


@dataclass(frozen=True)
class TopologyLabel:
    kind: Topology
    p1: Optional[int] = None
    p2: Optional[int] = None
    k: Optional[int] = None
    leaf_counts: tuple[int, ...] = field(default=())

    def __post_init__(self) -> None:
        if self.kind is Topology.BIPARTITE_TURAN and self.p1 is not None:
            if abs(self.p1 - (self.p2 or 0)) > 1:
                raise ValueError("bipartite Turán sides must differ by at most one")
        if self.kind is Topology.KSTAR and self.leaf_counts:
            if min(self.leaf_counts) < 1 or max(self.leaf_counts) - min(self.leaf_counts) > 1:
                raise ValueError("k-star leaf counts must be positive and balanced")

    def matches(self, other: "TopologyLabel") -> bool:
        """Kind equality, plus center count when both sides name one."""
        if self.kind is not other.kind:
            return False
        if self.kind is Topology.KSTAR and self.k is not None and other.k is not None:
            return self.k == other.k
        return True

    def __str__(self) -> str:
        if self.kind is Topology.BIPARTITE_TURAN and self.p1 is not None:
            return f"bipartite_turan({self.p1},{self.p2})"
        if self.kind is Topology.KSTAR:
            counts = ",".join(map(str, self.leaf_counts))
            return f"kstar({self.k}; {counts})" if counts else f"kstar({self.k})"
        return self.kind.value

    @classmethod
    def parse(cls, text: str) -> "TopologyLabel":
        """Parse ``star``, ``complete``, ``turan``, ``kstar:3``, ``2star`` and friends."""
        t = text.strip().lower().replace("-", "_")
        simple = {
            "null": Topology.NULL,
            "single": Topology.SINGLE_NODE,
            "single_node": Topology.SINGLE_NODE,
            "star": Topology.STAR,
            "complete": Topology.COMPLETE,
            "turan": Topology.BIPARTITE_TURAN,
            "bipartite": Topology.BIPARTITE_TURAN,
            "bipartite_turan": Topology.BIPARTITE_TURAN,
            "other": Topology.OTHER,
        }
        if t in simple:
            return cls(simple[t])
        if t.endswith("star") and t[:-4].isdigit():
            return cls(Topology.KSTAR, k=int(t[:-4]))
        for prefix in ("kstar:", "kstar", "k_star:"):
            if t.startswith(prefix) and t[len(prefix):].isdigit():
                return cls(Topology.KSTAR, k=int(t[len(prefix):]))
        raise ValueError(f"unknown topology label {text!r}")


def _bipartition(g: Graph) -> Optional[tuple[int, int]]:
    color = [-1] * g.n
    color[0] = 0
    stack = [0]
    while stack:
        v = stack.pop()
        for w in _bits(g.adj[v]):
            if color[w] < 0:
                color[w] = 1 - color[v]
                stack.append(w)
            elif color[w] == color[v]:
                return None
    if min(color) < 0:
        return None
    a = sum(1 for c in color if c == 0)
    return a, g.n - a


def classify_topology(g: Graph) -> TopologyLabel:
    """Label ``g``; precedence Complete > Star > BipartiteTuran > KStar > Other."""
    n, m = g.n, g.edge_count
    if n == 0:
        return TopologyLabel(Topology.NULL)
    if n == 1:
        return TopologyLabel(Topology.SINGLE_NODE)
    if m == n * (n - 1) // 2:
        return TopologyLabel(Topology.COMPLETE)
    deg = g.degrees()
    if n >= 3 and m == n - 1 and max(deg) == n - 1:
        return TopologyLabel(Topology.STAR)
    sides = _bipartition(g)
    if sides is not None:
        p1, p2 = max(sides), min(sides)
        if p1 * p2 == m and p1 - p2 <= 1:
            return TopologyLabel(Topology.BIPARTITE_TURAN, p1=p1, p2=p2)
    centers = [v for v in range(n) if deg[v] >= 2]
    k = len(centers)
    if k >= 2 and all(d >= 1 for d in deg) and m == k * (k - 1) // 2 + (n - k):
        cmask = sum(1 << v for v in centers)
        if all((g.adj[v] & cmask) | (1 << v) == cmask for v in centers):
            if all(g.adj[v] & cmask for v in range(n) if deg[v] == 1):
                counts = [(g.adj[v] & ~cmask).bit_count() for v in centers]
                if min(counts) >= 1 and max(counts) - min(counts) <= 1:
                    return TopologyLabel(Topology.KSTAR, k=k, leaf_counts=tuple(sorted(counts)))
    return TopologyLabel(Topology.OTHER)


# ---------------------------------------------------------------------------
# canonical forms (individualization-refinement)


def _refine(g: Graph, colors: list[int]) -> list[int]:
    """Colour refinement keeping the relative order of existing colour classes."""
    while True:
        sigs = [
            (colors[v], tuple(sorted(colors[w] for w in _bits(g.adj[v]))))
            for v in range(g.n)
        ]
        ranking = {s: i for i, s in enumerate(sorted(set(sigs)))}
        new = [ranking[s] for s in sigs]
        if len(ranking) == len(set(colors)):
            return new
        colors = new


def _cells(colors: list[int]) -> list[list[int]]:
    cells: dict[int, list[int]] = {}
    for v, c in enumerate(colors):
        cells.setdefault(c, []).append(v)
    return [cells[c] for c in sorted(cells)]


def _homogeneous(g: Graph, cells: list[list[int]]) -> bool:
    # every cell and every pair of cells is fully joined or fully disjoint,
    # so any ordering inside the cells produces the same edge set
    masks = [sum(1 << v for v in cell) for cell in cells]
    for cell in cells:
        for v in cell:
            for mask in masks:
                hit = (g.adj[v] & mask).bit_count()
                if hit and hit != (mask & ~(1 << v)).bit_count():
                    return False
    return True


def _encode(g: Graph, order: list[int]) -> tuple[tuple[int, int], ...]:
    pos = {v: i for i, v in enumerate(order)}
    return tuple(sorted(tuple(sorted((pos[u], pos[v]))) for u, v in g.edges))


def _search(g: Graph, colors: list[int], best: list) -> None:
    colors = _refine(g, colors)
    cells = _cells(colors)
    if len(cells) == g.n or _homogeneous(g, cells):
        order = [v for cell in cells for v in cell]
        code = (tuple(colors[v] for v in order), _encode(g, order))
        if best[0] is None or code < best[0][0]:
            best[0] = (code, order)
        return
    target = min((c for c in cells if len(c) > 1), key=len)
    base = colors[target[0]]
    for v in target:
        # individualized node sorts ahead of the rest of its old cell
        split = [2 * c + (0 if c != base or u == v else 1) for u, c in enumerate(colors)]
        _search(g, split, best)


def _canonical_order(g: Graph, colors: Optional[Sequence[int]] = None) -> tuple:
    if g.n > CANONICAL_MAX_NODES:
        raise SizeLimitError(
            f"canonical forms are limited to {CANONICAL_MAX_NODES} nodes (got {g.n})"
        )
    best: list = [None]
    _search(g, list(colors) if colors is not None else [0] * g.n, best)
    if best[0] is None:
        return ((), ()), []
    return best[0]


def canonical_form(g: Graph) -> Graph:
    """Relabeled copy of ``g``, identical for every graph isomorphic to it."""
    if g.n == 0:
        return g
    (_, code), _ = _canonical_order(g)
    return Graph.from_edges(g.n, code)


def canonical_key(g: Graph) -> tuple[int, tuple[tuple[int, int], ...]]:
    """Hashable isomorphism-class key ``(n, canonical edges)``."""
    return g.n, canonical_form(g).edges


def node_orbits(g: Graph) -> list[frozenset[int]]:
    """Automorphism orbits of the nodes, ordered by smallest member."""
    if g.n > CANONICAL_MAX_NODES:
        raise SizeLimitError(
            f"orbits are limited to {CANONICAL_MAX_NODES} nodes (got {g.n})"
        )
    certs: dict = {}
    for v in range(g.n):
        marked = [0 if u == v else 1 for u in range(g.n)]
        code, _ = _canonical_order(g, marked)
        certs.setdefault(code, set()).add(v)
    return sorted((frozenset(s) for s in certs.values()), key=min)


def brute_force_canonical(g: Graph) -> tuple[tuple[int, int], ...]:
    """Lexicographically least relabeled edge list over all ``n!`` relabelings."""
    if g.n > CANONICAL_MAX_NODES:
        raise SizeLimitError("brute-force canonical form limited to 9 nodes")
    best = None
    for perm in permutations(range(g.n)):
        code = tuple(sorted(tuple(sorted((perm[u], perm[v]))) for u, v in g.edges))
        if best is None or code < best:
            best = code
    return best if best is not None else ()


# ---------------------------------------------------------------------------
# text formats


def to_edge_list(g: Graph) -> str:
    lines = [f"n {g.n}"]
    lines.extend(f"{u} {v}" for u, v in g.edges)
    return "\n".join(lines) + "\n"


def parse_edge_list(text: str) -> Graph:
    rows = [ln.split() for ln in text.splitlines() if ln.strip() and not ln.lstrip().startswith("#")]
    if not rows or rows[0][0] != "n" or len(rows[0]) != 2:
        raise ValueError("edge list must start with 'n <node_count>'")
    n = int(rows[0][1])
    edges = []
    for row in rows[1:]:
        if len(row) != 2:
            raise ValueError(f"bad edge line: {' '.join(row)!r}")
        edges.append((int(row[0]), int(row[1])))
    return Graph.from_edges(n, edges)


def to_dot(g: Graph, name: str = "G") -> str:
    lines = [f"graph {name} {{"]
    lines.extend(f"  {v};" for v in range(g.n))
    lines.extend(f"  {u} -- {v};" for u, v in g.edges)
    lines.append("}")
    return "\n".join(lines) + "\n"
