"""
Tests for dataset loading, validation and canonical saving
"""

import json

import numpy as np
import pytest

from src.exceptions import DatasetFormatError
from src.models.dataset import Dataset, DatasetKind
from src.models.hypergraph import Hypergraph, LabelVector
from src.services.dataset_store import dataset_to_dict, load_dataset, save_dataset


def _document(**overrides):
    doc = {
        "name": "mini",
        "kind": "hypergraph",
        "num_nodes": 3,
        "num_classes": 2,
        "edges": [[0, 1, 2]],
        "features": [[1.0, 0.0], [0.0, 1.0], [0.5, 0.5]],
        "labels": [0, 1, 1],
    }
    doc.update(overrides)
    return doc


@pytest.fixture
def write_doc(tmp_path):
    def _write(**overrides):
        path = tmp_path / "dataset.json"
        path.write_text(json.dumps(_document(**overrides)), encoding="utf-8")
        return path
    return _write


class TestLoadDataset:
    """Test reading dataset files"""

    def test_minimal_file(self, write_doc):
        """Test that a minimal file produces matching fields"""
        dataset = load_dataset(write_doc())
        assert dataset.name == "mini"
        assert dataset.kind is DatasetKind.HYPERGRAPH
        assert (dataset.num_nodes, dataset.num_features, dataset.num_classes) == (3, 2, 2)
        assert dataset.structure.edges == ((0, 1, 2),)
        np.testing.assert_array_equal(dataset.labels.labels, [0, 1, 1])

    def test_out_of_range_edge_named(self, write_doc):
        """Test that an out-of-range index names the offending edge"""
        with pytest.raises(DatasetFormatError, match="Edge 1"):
            load_dataset(write_doc(edges=[[0, 1], [1, 3]]))

    def test_duplicate_edges_rejected(self, write_doc):
        """Test that duplicates are an error unless dedupe is set"""
        path = write_doc(edges=[[0, 1], [1, 0]])
        with pytest.raises(DatasetFormatError, match="duplicates"):
            load_dataset(path)
        assert load_dataset(path, dedupe=True).structure.edges == ((0, 1),)

    def test_single_member_edge_rejected(self, write_doc):
        """Test that a size-1 edge is an error"""
        with pytest.raises(DatasetFormatError, match="fewer than 2"):
            load_dataset(write_doc(edges=[[2]]))

    def test_one_based_indices(self, write_doc):
        """Test that one-based files are shifted"""
        dataset = load_dataset(write_doc(edges=[[1, 3]]), one_based=True)
        assert dataset.structure.edges == ((0, 2),)

    def test_graph_kind_requires_pairs(self, write_doc):
        """Test that a graph file may not contain larger edges"""
        with pytest.raises(DatasetFormatError, match="declared a graph"):
            load_dataset(write_doc(kind="graph"))

    def test_feature_row_count(self, write_doc):
        """Test that every node needs a feature row"""
        with pytest.raises(DatasetFormatError, match="feature rows"):
            load_dataset(write_doc(features=[[1.0, 0.0], [0.0, 1.0]]))

    def test_ragged_features(self, write_doc):
        """Test that feature rows must share a width"""
        with pytest.raises(DatasetFormatError, match="differing lengths"):
            load_dataset(write_doc(features=[[1.0], [0.0, 1.0], [0.5, 0.5]]))

    def test_label_out_of_range(self, write_doc):
        """Test that labels must lie below num_classes"""
        with pytest.raises(DatasetFormatError):
            load_dataset(write_doc(labels=[0, 1, 2]))

    def test_empty_class(self, write_doc):
        """Test that a declared class without nodes is an error"""
        with pytest.raises(DatasetFormatError, match="no nodes"):
            load_dataset(write_doc(num_classes=3))

    def test_unknown_key(self, write_doc):
        """Test that extra keys are rejected by the schema"""
        with pytest.raises(DatasetFormatError):
            load_dataset(write_doc(weights=[1, 2, 3]))

    def test_invalid_json(self, tmp_path):
        """Test that malformed JSON is reported with the path"""
        path = tmp_path / "broken.json"
        path.write_text("{not json", encoding="utf-8")
        with pytest.raises(DatasetFormatError, match="broken.json"):
            load_dataset(path)

    def test_invalid_utf8(self, tmp_path):
        """Test that bytes that are not UTF-8 are reported with the path"""
        path = tmp_path / "latin.json"
        path.write_bytes(b'{"name": "caf\xe9"}')
        with pytest.raises(DatasetFormatError, match="latin.json.*UTF-8"):
            load_dataset(path)


class TestSaveDataset:
    """Test canonical writing"""

    def test_round_trip(self, tmp_path, write_doc):
        """Test that a saved dataset loads back equal"""
        dataset = load_dataset(write_doc(edges=[[2, 0], [0, 1]]))
        out = tmp_path / "saved.json"
        save_dataset(dataset, out)
        assert load_dataset(out) == dataset

    def test_canonical_edge_order(self):
        """Test that saved edges are sorted inside and across edges"""
        dataset = Dataset(
            name="order",
            structure=Hypergraph(4, ((2, 3), (1, 0), (0, 3, 2))),
            features=np.zeros((4, 1)),
            labels=LabelVector(np.array([0, 1, 0, 1]), 2),
            kind=DatasetKind.HYPERGRAPH,
        )
        assert dataset_to_dict(dataset)["edges"] == [[0, 1], [0, 2, 3], [2, 3]]

    def test_stable_bytes(self, tmp_path, tiny_dataset):
        """Test that saving twice gives identical files"""
        a, b = tmp_path / "a.json", tmp_path / "b.json"
        save_dataset(tiny_dataset, a)
        save_dataset(tiny_dataset, b)
        assert a.read_bytes() == b.read_bytes()
