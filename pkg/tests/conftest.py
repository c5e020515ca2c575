from fractions import Fraction as F
from itertools import combinations

import networkx as nx
import pytest
from hypothesis import strategies as st

from netform import Graph, UtilityParams

B = (F(1), F(1, 2), F(3, 10), F(1, 5))


def make(c, gamma, c0, sigma=None, b=B):
    return UtilityParams.make(b, F(c), F(gamma), F(c0), sigma)


@pytest.fixture
def pstar():
    return make("3/5", "1/10", "1/10")


@pytest.fixture
def complete_params():
    return make("2/5", "1/10", "3/10")


@pytest.fixture
def turan_params():
    return make("13/20", "1/10", "3/10")


@pytest.fixture
def thm5_params():
    return make("7/10", 0, "1/4")


@st.composite
def graphs(draw, min_n=0, max_n=10):
    n = draw(st.integers(min_n, max_n))
    pairs = list(combinations(range(n), 2))
    mask = draw(st.lists(st.booleans(), min_size=len(pairs), max_size=len(pairs)))
    return Graph.from_edges(n, [p for p, keep in zip(pairs, mask) if keep])


@st.composite
def params(draw):
    d = draw(st.integers(2, 5))
    b, cur = [], F(draw(st.integers(5, 20)), 10)
    for _ in range(d):
        b.append(cur)
        cur = cur * F(draw(st.integers(1, 9)), 10)
    c = F(draw(st.integers(1, 30)), 20)
    gamma = F(draw(st.integers(0, 9)), 10)
    c0 = F(draw(st.integers(0, 10)), 20)
    return UtilityParams.make(b, c, gamma, c0)


def to_nx(g: Graph) -> nx.Graph:
    h = nx.Graph()
    h.add_nodes_from(range(g.n))
    h.add_edges_from(g.edges)
    return h


def naive_essential(h: nx.Graph, y, z):
    if not nx.has_path(h, y, z):
        return set()
    out = set()
    for j in h.nodes:
        if j in (y, z):
            continue
        sub = h.subgraph(v for v in h.nodes if v != j)
        if not nx.has_path(sub, y, z):
            out.add(j)
    return out


def naive_utility(g: Graph, j: int, p: UtilityParams, entrant=None, target=None):
    """Direct term-by-term evaluation on networkx, sharing no code with the package."""
    h = to_nx(g)
    fee = F(0)
    if entrant is not None:
        if j == entrant:
            fee = p.entry_factor * h.degree(target)
        h.add_edge(entrant, target)
    b = lambda i: p.benefits[i - 1] if 1 <= i <= len(p.benefits) else F(0)
    dist = dict(nx.all_pairs_shortest_path_length(h))
    total = -fee + h.degree(j) * (b(1) - p.link_cost)
    for w in h.nodes:
        l = dist[j].get(w)
        if w == j or l is None or l < 2:
            continue
        total += b(l)
        if naive_essential(h, j, w):
            total -= p.rent_fraction * b(l)
    for y, z in combinations(h.nodes, 2):
        if j in (y, z) or z not in dist[y]:
            continue
        ess = naive_essential(h, y, z)
        if j in ess:
            total += p.rent_fraction / len(ess) * 2 * b(dist[y][z])
    return total
