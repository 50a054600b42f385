"""
Synthetic hypergraphs grown from graphs, their clique-expanded graphs, and
small generated datasets
"""

import logging
from dataclasses import dataclass
from itertools import combinations

import numpy as np

from ..exceptions import SynthesisError
from ..models.dataset import Dataset, DatasetKind, SynthSpec
from ..models.hypergraph import Hypergraph, LabelVector
from .hypergraph_ops import clique_expansion

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class SynthResult:
    """
    Attributes:
        dataset: Grown hypergraph dataset
        fallback_count: Same-label draws that found no candidate and fell
            back to the uniform branch
        duplicates_removed: Grown hyperedges dropped because they repeated an
            earlier one
    """
    dataset: Dataset
    fallback_count: int
    duplicates_removed: int


def synth_extend(dataset: Dataset, spec: SynthSpec) -> SynthResult:
    """
    Grow every 2-edge of a graph to exactly spec.rank members.

    Nodes are added one at a time. With probability p the new node is drawn
    uniformly from nodes outside the edge that share a label with a current
    member; otherwise it is drawn uniformly from all nodes outside the edge.
    """
    is_valid, error = spec.validate()
    if not is_valid:
        raise SynthesisError(error)
    if dataset.kind is not DatasetKind.GRAPH:
        raise SynthesisError(f"Dataset {dataset.name!r} must be a graph to grow hyperedges")
    if spec.rank > dataset.num_nodes:
        raise SynthesisError(
            f"Rank {spec.rank} exceeds the {dataset.num_nodes} nodes of {dataset.name!r}"
        )

    rng = np.random.default_rng(spec.seed)
    labels = dataset.labels.labels
    n = dataset.num_nodes
    fallback_count = 0
    grown = []
    for edge in dataset.structure.edges:
        members = list(edge)
        in_edge = np.zeros(n, dtype=bool)
        in_edge[members] = True
        for _ in range(spec.rank - len(members)):
            candidates = None
            if rng.random() < spec.probability:
                same_label = np.isin(labels, labels[members]) & ~in_edge
                candidates = np.flatnonzero(same_label)
                if candidates.size == 0:
                    fallback_count += 1
                    candidates = None
            if candidates is None:
                candidates = np.flatnonzero(~in_edge)
            chosen = int(candidates[rng.integers(candidates.size)])
            members.append(chosen)
            in_edge[chosen] = True
        grown.append(tuple(sorted(members)))

    unique = list(dict.fromkeys(grown))
    duplicates_removed = len(grown) - len(unique)
    if fallback_count:
        logger.info(f"Same-label pool was empty {fallback_count} times; used uniform draws")
    if duplicates_removed:
        logger.info(f"Removed {duplicates_removed} duplicate hyperedges after growth")

    result = dataset.with_structure(
        Hypergraph(n, tuple(unique)),
        DatasetKind.HYPERGRAPH,
        name=f"{dataset.name}-syn-r{spec.rank}-p{spec.probability:g}",
    )
    return SynthResult(dataset=result, fallback_count=fallback_count,
                       duplicates_removed=duplicates_removed)


def synth_graph(dataset: Dataset) -> Dataset:
    """Graph with the clique expansion of every hyperedge; features and labels unchanged"""
    if dataset.kind is not DatasetKind.HYPERGRAPH:
        raise SynthesisError(f"Dataset {dataset.name!r} must be a hypergraph to expand")
    return dataset.with_structure(
        clique_expansion(dataset.structure),
        DatasetKind.GRAPH,
        name=f"{dataset.name}-graph",
    )


def one_hot_gaussian_features(labels: LabelVector, num_features: int = 100,
                              sigma: float = 1.0, seed: int = 0) -> np.ndarray:
    """One-hot label encoding padded to num_features columns plus N(0, sigma^2) noise"""
    if num_features < labels.num_classes:
        raise SynthesisError(
            f"num_features ({num_features}) must be at least num_classes ({labels.num_classes})"
        )
    rng = np.random.default_rng(seed)
    features = np.zeros((len(labels), num_features))
    features[np.arange(len(labels)), labels.labels] = 1.0
    return features + rng.normal(0.0, sigma, size=features.shape)


def blob_dataset(num_nodes: int = 40, num_classes: int = 2, num_features: int = 4,
                 separation: float = 2.0, noise: float = 1.0, rank: int = 3,
                 edges_per_class: int = 20, seed: int = 0) -> Dataset:
    """
    Label-pure Gaussian blobs with random hyperedges inside each class.

    Class c has mean separation * e_c (first num_classes coordinates) and
    isotropic noise; every hyperedge draws `rank` distinct members of one class.
    """
    rng = np.random.default_rng(seed)
    labels = np.arange(num_nodes) % num_classes
    means = np.zeros((num_classes, num_features))
    means[np.arange(num_classes), np.arange(num_classes) % num_features] = separation
    features = means[labels] + rng.normal(0.0, noise, size=(num_nodes, num_features))

    edges = set()
    for c in range(num_classes):
        members = np.flatnonzero(labels == c)
        if members.size < rank:
            continue
        for _ in range(edges_per_class):
            edges.add(tuple(sorted(int(v) for v in rng.choice(members, size=rank, replace=False))))

    return Dataset(
        name="blobs",
        structure=Hypergraph(num_nodes, tuple(sorted(edges))),
        features=features,
        labels=LabelVector(labels, num_classes),
        kind=DatasetKind.GRAPH if rank == 2 else DatasetKind.HYPERGRAPH,
    )


def random_label_graph(num_nodes: int = 120, num_classes: int = 5, num_edges: int = 200,
                       num_features: int = 8, seed: int = 0) -> Dataset:
    """Uniformly random labels on a uniformly random simple graph"""
    rng = np.random.default_rng(seed)
    labels = np.arange(num_nodes) % num_classes
    rng.shuffle(labels)
    all_pairs = list(combinations(range(num_nodes), 2))
    picked = rng.choice(len(all_pairs), size=min(num_edges, len(all_pairs)), replace=False)
    edges = tuple(sorted(all_pairs[i] for i in picked))
    return Dataset(
        name="random-label-graph",
        structure=Hypergraph(num_nodes, edges),
        features=rng.normal(size=(num_nodes, num_features)),
        labels=LabelVector(labels, num_classes),
        kind=DatasetKind.GRAPH,
    )
