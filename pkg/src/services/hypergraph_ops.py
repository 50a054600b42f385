"""
Incidence, degree and adjacency computation, clique expansion and homophily
"""

import logging
from itertools import combinations

import numpy as np
import scipy.sparse as sp

from ..exceptions import HypergraphError
from ..models.hypergraph import (
    DegreeVectors,
    Hypergraph,
    HomophilyScore,
    IncidenceMatrix,
    LabelVector,
)

logger = logging.getLogger(__name__)


def build_incidence(h: Hypergraph) -> IncidenceMatrix:
    """
    Build the |V| x |E| incidence matrix B.

    Column j holds the members of edge j; rows follow node index order.
    """
    rows = np.fromiter(
        (v for edge in h.edges for v in edge), dtype=np.int64
    )
    cols = np.repeat(
        np.arange(h.num_edges, dtype=np.int64),
        [len(edge) for edge in h.edges],
    )
    data = np.ones(rows.shape[0], dtype=np.int64)
    coo = sp.coo_matrix((data, (rows, cols)), shape=(h.num_nodes, h.num_edges))
    return IncidenceMatrix(by_row=coo.tocsr(), by_column=coo.tocsc())


def degrees(b: IncidenceMatrix) -> DegreeVectors:
    """Node degrees are row sums of B, edge degrees are column sums"""
    node_degrees = np.asarray(b.by_row.sum(axis=1), dtype=np.int64).ravel()
    edge_degrees = np.asarray(b.by_column.sum(axis=0), dtype=np.int64).ravel()
    return DegreeVectors(node_degrees=node_degrees, edge_degrees=edge_degrees)


def adjacency(b: IncidenceMatrix) -> sp.csr_matrix:
    """
    A = B B^T.

    A[i, j] counts the edges shared by nodes i and j; A[i, i] = d(v_i).
    """
    return (b.by_row @ b.by_row.T).tocsr()


def clique_expansion(h: Hypergraph) -> Hypergraph:
    """Replace every hyperedge by all pairs of its members; duplicate pairs collapse"""
    pairs = set()
    for edge in h.edges:
        pairs.update(combinations(edge, 2))
    return Hypergraph(h.num_nodes, tuple(sorted(pairs)))


def homophily_score(h: Hypergraph, y: LabelVector) -> HomophilyScore:
    """
    Edge homophily measured on the clique expansion.

    Args:
        h: Graph or hypergraph
        y: Labels covering every node

    Returns:
        HomophilyScore; empty structures score 0 with the empty flag set
    """
    if len(y) == 0:
        raise HypergraphError("Cannot score homophily with an empty label vector")
    if len(y) != h.num_nodes:
        raise HypergraphError(
            f"Label vector has {len(y)} entries but the structure has {h.num_nodes} nodes"
        )

    expanded = clique_expansion(h)
    if expanded.num_edges == 0:
        logger.warning("Homophily requested for a structure without edges; reporting 0")
        return HomophilyScore(value=0.0, num_edges=0, empty=True)

    pairs = np.asarray(expanded.edges, dtype=np.int64)
    matches = y.labels[pairs[:, 0]] == y.labels[pairs[:, 1]]
    return HomophilyScore(value=float(matches.mean()), num_edges=int(pairs.shape[0]))
