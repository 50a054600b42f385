"""
Structural types for graphs and hypergraphs
"""

from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np
import scipy.sparse as sp

from ..exceptions import HypergraphError


@dataclass(frozen=True)
class Hypergraph:
    """
    A graph or hypergraph over nodes 0..num_nodes-1.

    Edges are stored as sorted tuples of distinct node indices. A graph is the
    special case where every edge has exactly two members.

    Attributes:
        num_nodes: Number of nodes
        edges: Ordered edges; the order fixes the column order of the
            incidence matrix and the row order of the projection edge block
    """
    num_nodes: int
    edges: tuple[tuple[int, ...], ...] = ()

    def __post_init__(self):
        if self.num_nodes < 0:
            raise HypergraphError(f"num_nodes must be non-negative, got {self.num_nodes}")

        normalized = []
        seen: dict[tuple[int, ...], int] = {}
        for position, edge in enumerate(self.edges):
            members = [int(v) for v in edge]
            if len(members) < 2:
                raise HypergraphError(
                    f"Edge {position} {members} has fewer than 2 members"
                )
            if len(set(members)) != len(members):
                raise HypergraphError(
                    f"Edge {position} {members} repeats a member"
                )
            for v in members:
                if v < 0 or v >= self.num_nodes:
                    raise HypergraphError(
                        f"Edge {position} {members} references node {v} "
                        f"but num_nodes is {self.num_nodes}"
                    )
            key = tuple(sorted(members))
            if key in seen:
                raise HypergraphError(
                    f"Edge {position} {list(key)} duplicates edge {seen[key]}"
                )
            seen[key] = position
            normalized.append(key)

        object.__setattr__(self, "edges", tuple(normalized))

    @classmethod
    def from_edges(cls, num_nodes: int, edges: Iterable[Sequence[int]],
                   one_based: bool = False, dedupe: bool = False) -> 'Hypergraph':
        """
        Build a hypergraph from raw edge lists.

        Args:
            num_nodes: Number of nodes
            edges: Iterable of node-index sequences
            one_based: Input indices start at 1
            dedupe: Drop repeated edges instead of rejecting them (first
                occurrence wins)

        Returns:
            Hypergraph instance
        """
        offset = 1 if one_based else 0
        prepared = [tuple(int(v) - offset for v in edge) for edge in edges]
        if dedupe:
            kept, seen = [], set()
            for edge in prepared:
                key = tuple(sorted(edge))
                if key in seen:
                    continue
                seen.add(key)
                kept.append(edge)
            prepared = kept
        return cls(num_nodes=num_nodes, edges=tuple(prepared))

    @property
    def num_edges(self) -> int:
        return len(self.edges)

    @property
    def is_graph(self) -> bool:
        """All edges have exactly two members"""
        return all(len(edge) == 2 for edge in self.edges)

    def canonical(self) -> 'Hypergraph':
        """Same structure with edges in lexicographic order"""
        return Hypergraph(self.num_nodes, tuple(sorted(self.edges)))

    def edge_set(self) -> frozenset[tuple[int, ...]]:
        return frozenset(self.edges)


@dataclass(frozen=True, eq=False)
class IncidenceMatrix:
    """
    Sparse 0/1 node-by-edge incidence matrix B.

    The row-oriented copy answers "which edges contain node i", the
    column-oriented copy answers "which nodes belong to edge j".
    """
    by_row: sp.csr_matrix
    by_column: sp.csc_matrix

    @property
    def rows(self) -> int:
        return self.by_row.shape[0]

    @property
    def cols(self) -> int:
        return self.by_row.shape[1]

    def members(self, edge: int) -> np.ndarray:
        """Node indices of one edge"""
        start, end = self.by_column.indptr[edge], self.by_column.indptr[edge + 1]
        return self.by_column.indices[start:end]

    def incident_edges(self, node: int) -> np.ndarray:
        """Edge indices containing one node"""
        start, end = self.by_row.indptr[node], self.by_row.indptr[node + 1]
        return self.by_row.indices[start:end]

    def toarray(self) -> np.ndarray:
        return self.by_row.toarray()


@dataclass(frozen=True, eq=False)
class DegreeVectors:
    """Node degrees d(v) and edge degrees δ(e)"""
    node_degrees: np.ndarray
    edge_degrees: np.ndarray


@dataclass(frozen=True, eq=False)
class LabelVector:
    """
    Class index per node.

    Attributes:
        labels: Integer array, one entry per node
        num_classes: Number of classes C; every label lies in [0, C)
    """
    labels: np.ndarray
    num_classes: int

    def __post_init__(self):
        labels = np.asarray(self.labels, dtype=np.int64).copy()
        labels.setflags(write=False)
        object.__setattr__(self, "labels", labels)
        if self.num_classes < 1:
            raise HypergraphError("num_classes must be at least 1")
        if labels.size and (labels.min() < 0 or labels.max() >= self.num_classes):
            raise HypergraphError(
                f"Labels must lie in [0, {self.num_classes}), "
                f"found range [{labels.min()}, {labels.max()}]"
            )

    def __len__(self) -> int:
        return int(self.labels.shape[0])

    def __eq__(self, other) -> bool:
        if not isinstance(other, LabelVector):
            return NotImplemented
        return self.num_classes == other.num_classes and np.array_equal(self.labels, other.labels)

    def class_counts(self) -> np.ndarray:
        return np.bincount(self.labels, minlength=self.num_classes)

    def empty_classes(self) -> list[int]:
        return [int(c) for c in np.flatnonzero(self.class_counts() == 0)]


@dataclass(frozen=True)
class HomophilyScore:
    """
    Edge homophily on the clique expansion.

    Attributes:
        value: Fraction of expanded pairwise edges whose endpoints share a label
        num_edges: Number of expanded pairwise edges
        empty: True when there were no edges and value was defaulted to 0
    """
    value: float
    num_edges: int
    empty: bool = field(default=False)

    def __float__(self) -> float:
        return self.value

    def to_dict(self) -> dict:
        return {
            "homophily": self.value,
            "num_edges": self.num_edges,
            "empty": self.empty,
        }
