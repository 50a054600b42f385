"""
Hypothesis strategies for random graphs and hypergraphs
"""

from hypothesis import strategies as st

from src.models.hypergraph import Hypergraph


@st.composite
def hypergraphs(draw, max_nodes: int = 20, max_edges: int = 12, min_nodes: int = 2):
    """Random hypergraph with at most max_nodes nodes and distinct edges"""
    n = draw(st.integers(min_value=min_nodes, max_value=max_nodes))
    edge = st.lists(st.integers(0, n - 1), min_size=2, max_size=min(n, 6), unique=True)
    raw = draw(st.lists(edge, max_size=max_edges))
    return Hypergraph.from_edges(n, raw, dedupe=True)


@st.composite
def hypergraphs_with_permutation(draw, max_nodes: int = 20):
    h = draw(hypergraphs(max_nodes=max_nodes))
    sigma = draw(st.permutations(list(range(h.num_nodes))))
    return h, tuple(sigma)
