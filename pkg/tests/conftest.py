"""
Shared fixtures
"""

import numpy as np
import pytest

from src.models.dataset import Dataset, DatasetKind
from src.models.hypergraph import Hypergraph, LabelVector


@pytest.fixture
def worked_hypergraph():
    """7 nodes with edges {0,1,2,4}, {2,3}, {4,5,6}"""
    return Hypergraph.from_edges(7, [(1, 2, 3, 5), (3, 4), (5, 6, 7)], one_based=True)


@pytest.fixture
def worked_incidence():
    return np.array([
        [1, 0, 0],
        [1, 0, 0],
        [1, 1, 0],
        [0, 1, 0],
        [1, 0, 1],
        [0, 0, 1],
        [0, 0, 1],
    ])


@pytest.fixture
def worked_compound():
    """I + B B^T of the worked hypergraph"""
    return np.array([
        [2, 1, 1, 0, 1, 0, 0],
        [1, 2, 1, 0, 1, 0, 0],
        [1, 1, 3, 1, 1, 0, 0],
        [0, 0, 1, 2, 0, 0, 0],
        [1, 1, 1, 0, 3, 1, 1],
        [0, 0, 0, 0, 1, 2, 1],
        [0, 0, 0, 0, 1, 1, 2],
    ])


@pytest.fixture
def tiny_dataset():
    """Three nodes, one hyperedge, two features, two classes"""
    return Dataset(
        name="tiny",
        structure=Hypergraph(3, ((0, 1, 2),)),
        features=np.array([[1.0, 0.0], [0.0, 1.0], [1.0, 1.0]]),
        labels=LabelVector(np.array([0, 1, 0]), 2),
        kind=DatasetKind.HYPERGRAPH,
    )
