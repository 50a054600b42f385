"""
Projection matrix construction, normalization and application
"""

import logging
from dataclasses import dataclass
from typing import Optional

import numpy as np
import scipy.sparse as sp

from ..exceptions import DimensionError, ProjectionError
from ..models.hypergraph import Hypergraph
from ..models.projection_config import Normalization, ProjectionConfig, WeightMode
from .hypergraph_ops import build_incidence, degrees

logger = logging.getLogger(__name__)


@dataclass(frozen=True, eq=False)
class ProjectionMatrix:
    """
    P = [P_V; P_E] with its normalized forward and reverse forms.

    Rows [0, |V|) form the node block, rows [|V|, |V|+|E|) the edge block in
    the edge order of the source hypergraph. The transposed copies are kept
    for the backward pass.
    """
    raw: sp.csr_matrix
    forward: sp.csr_matrix
    reverse: sp.csr_matrix
    forward_t: sp.csr_matrix
    reverse_t: sp.csr_matrix
    num_nodes: int
    num_edges: int
    config: ProjectionConfig

    @property
    def num_rows(self) -> int:
        return self.num_nodes + self.num_edges

    @property
    def node_block_rows(self) -> range:
        return range(0, self.num_nodes)

    @property
    def edge_block_rows(self) -> range:
        return range(self.num_nodes, self.num_rows)

    @property
    def permutation(self) -> np.ndarray:
        """sigma: column of the nonzero in each node-block row"""
        node_block = self.raw[: self.num_nodes]
        return node_block.indices[node_block.indptr[:-1]]

    def element_at_row(self, row: int) -> tuple[str, int]:
        """Map a projected row back to ('node', v) or ('edge', j)"""
        if row < 0 or row >= self.num_rows:
            raise IndexError(f"Row {row} outside [0, {self.num_rows})")
        if row < self.num_nodes:
            return "node", int(self.permutation[row])
        return "edge", row - self.num_nodes

    def row_of_node(self, node: int) -> int:
        return int(np.flatnonzero(self.permutation == node)[0])

    def row_of_edge(self, edge: int) -> int:
        if edge < 0 or edge >= self.num_edges:
            raise IndexError(f"Edge {edge} outside [0, {self.num_edges})")
        return self.num_nodes + edge

    def recover_hypergraph(self) -> Hypergraph:
        """Rebuild the source structure from the nonzero pattern of the edge block"""
        edge_block = self.raw[self.num_nodes:]
        edges = tuple(
            tuple(int(v) for v in np.sort(edge_block.indices[edge_block.indptr[j]:edge_block.indptr[j + 1]]))
            for j in range(self.num_edges)
        )
        return Hypergraph(self.num_nodes, edges)


def _scale_rows(m: sp.csr_matrix, factors: np.ndarray) -> sp.csr_matrix:
    return (sp.diags(factors) @ m).tocsr()


def _scale_cols(m: sp.csr_matrix, factors: np.ndarray) -> sp.csr_matrix:
    return (m @ sp.diags(factors)).tocsr()


def _inverse_sums(sums: np.ndarray, what: str) -> np.ndarray:
    if np.any(sums == 0):
        raise ProjectionError(f"Zero {what} sum encountered during normalization")
    return 1.0 / sums


def normalize(raw: sp.csr_matrix, variant: Normalization,
              num_nodes: int) -> tuple[sp.csr_matrix, sp.csr_matrix]:
    """
    Normalize P for the forward pass and P^T for the reverse pass.

    Row normalization of P only rescales the edge block; node-block rows keep
    their weight. Both sides operate on the raw matrix, never on each other.

    Args:
        raw: Raw projection matrix built by build_projection
        variant: Normalization variant
        num_nodes: Size of the node block

    Returns:
        (forward, reverse) as CSR matrices
    """
    raw = raw.tocsr().astype(np.float64)
    raw_t = raw.T.tocsr()

    side = variant.forward_side
    if side == "row":
        row_sums = np.asarray(raw.sum(axis=1)).ravel()
        factors = np.ones(raw.shape[0])
        factors[num_nodes:] = _inverse_sums(row_sums[num_nodes:], "edge row")
        forward = _scale_rows(raw, factors)
    elif side == "col":
        forward = _scale_cols(raw, _inverse_sums(np.asarray(raw.sum(axis=0)).ravel(), "column"))
    else:
        forward = raw.copy()

    side = variant.reverse_side
    if side == "row":
        reverse = _scale_rows(raw_t, _inverse_sums(np.asarray(raw_t.sum(axis=1)).ravel(), "row"))
    elif side == "col":
        reverse = _scale_cols(raw_t, _inverse_sums(np.asarray(raw_t.sum(axis=0)).ravel(), "column"))
    else:
        reverse = raw_t

    return forward, reverse


def build_projection(h: Hypergraph, cfg: ProjectionConfig) -> ProjectionMatrix:
    """
    Build the projection matrix of a hypergraph.

    Args:
        h: Source graph or hypergraph
        cfg: Weight, permutation and normalization settings

    Returns:
        ProjectionMatrix with raw, forward and reverse forms populated
    """
    is_valid, error = cfg.validate(num_nodes=h.num_nodes)
    if not is_valid:
        raise ProjectionError(error)

    n, m = h.num_nodes, h.num_edges
    sigma = (np.asarray(cfg.permutation, dtype=np.int64)
             if cfg.permutation is not None else np.arange(n, dtype=np.int64))

    incidence = build_incidence(h)
    if cfg.pv_weight_mode is WeightMode.DEGREE:
        # isolated nodes count as degree 1 so the node block stays positive
        node_degrees = np.maximum(degrees(incidence).node_degrees, 1)
        weights = node_degrees[sigma] * float(cfg.pv_weight)
    else:
        weights = np.full(n, float(cfg.pv_weight))

    node_block = sp.csr_matrix(
        (weights, (np.arange(n), sigma)), shape=(n, n), dtype=np.float64
    )
    if m:
        edge_block = incidence.by_column.T.tocsr().astype(np.float64)
        raw = sp.vstack([node_block, edge_block], format="csr")
    else:
        raw = node_block
    raw.sort_indices()

    forward, reverse = normalize(raw, cfg.normalization, n)
    logger.debug(
        f"Built projection: {n} nodes, {m} edges, normalization={cfg.normalization.value}, "
        f"pv_weight={cfg.pv_weight} ({cfg.pv_weight_mode.value})"
    )
    return ProjectionMatrix(
        raw=raw,
        forward=forward,
        reverse=reverse,
        forward_t=forward.T.tocsr(),
        reverse_t=reverse.T.tocsr(),
        num_nodes=n,
        num_edges=m,
        config=cfg,
    )


def project_forward(pm: ProjectionMatrix, x: np.ndarray) -> np.ndarray:
    """H0 = forward @ X; node rows first, then one row per edge"""
    if x.ndim != 2 or x.shape[0] != pm.num_nodes:
        raise DimensionError(
            f"Forward projection expects {pm.num_nodes} rows, got shape {x.shape}"
        )
    return np.asarray(pm.forward @ x)


def project_reverse(pm: ProjectionMatrix, h: np.ndarray) -> np.ndarray:
    """Y = reverse @ H; aggregates ego and edge rows back onto nodes"""
    if h.ndim != 2 or h.shape[0] != pm.num_rows:
        raise DimensionError(
            f"Reverse projection expects {pm.num_rows} rows, got shape {h.shape}"
        )
    return np.asarray(pm.reverse @ h)


def compound(pm: ProjectionMatrix, hops: Optional[int] = None) -> sp.csr_matrix:
    """
    (reverse @ forward) raised to the number of hops.

    With no normalization and unit weight this is I + B B^T.
    """
    hops = pm.config.hops if hops is None else hops
    step = (pm.reverse @ pm.forward).tocsr()
    result = step
    for _ in range(hops - 1):
        result = (result @ step).tocsr()
    return result
