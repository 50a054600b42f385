"""
Reading and writing datasets as canonical JSON documents
"""

import json
import logging
from pathlib import Path
from typing import Literal, Union

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, ValidationError

from ..exceptions import DatasetFormatError, HypergraphError
from ..models.dataset import Dataset, DatasetKind
from ..models.hypergraph import Hypergraph, LabelVector

logger = logging.getLogger(__name__)


class DatasetDocument(BaseModel):
    """On-disk schema of a dataset file"""
    model_config = ConfigDict(extra="forbid")

    name: str
    kind: Literal["graph", "hypergraph"]
    num_nodes: int = Field(ge=0)
    num_classes: int = Field(ge=1)
    edges: list[list[int]]
    features: list[list[float]]
    labels: list[int]


def dataset_from_document(doc: DatasetDocument, dedupe: bool = False,
                          one_based: bool = False) -> Dataset:
    """
    Turn a validated document into a Dataset.

    Args:
        doc: Parsed document
        dedupe: Drop repeated edges instead of rejecting the file
        one_based: Edge indices in the document start at 1
    """
    try:
        structure = Hypergraph.from_edges(doc.num_nodes, doc.edges,
                                          one_based=one_based, dedupe=dedupe)
        labels = LabelVector(labels=doc.labels, num_classes=doc.num_classes)
    except HypergraphError as e:
        raise DatasetFormatError(f"Dataset {doc.name!r}: {e}") from e

    widths = {len(row) for row in doc.features}
    if len(widths) > 1:
        raise DatasetFormatError(f"Dataset {doc.name!r}: feature rows have differing lengths {sorted(widths)}")

    features = np.asarray(doc.features, dtype=np.float64)
    if features.ndim == 1:
        features = features.reshape(len(doc.features), 0)

    return Dataset(
        name=doc.name,
        structure=structure,
        features=features,
        labels=labels,
        kind=DatasetKind(doc.kind),
    )


def load_dataset(path: Union[str, Path], dedupe: bool = False,
                 one_based: bool = False) -> Dataset:
    """
    Load a dataset JSON file.

    Raises:
        DatasetFormatError: the file is not valid JSON, does not follow the
            schema, or describes an invalid dataset
    """
    path = Path(path)
    try:
        raw = json.loads(path.read_text(encoding="utf-8"))
    except UnicodeDecodeError as e:
        raise DatasetFormatError(f"{path}: not UTF-8 text ({e.reason} at byte {e.start})") from e
    except json.JSONDecodeError as e:
        raise DatasetFormatError(f"{path}: not valid JSON ({e})") from e

    try:
        doc = DatasetDocument.model_validate(raw)
    except ValidationError as e:
        raise DatasetFormatError(f"{path}: {e}") from e

    try:
        dataset = dataset_from_document(doc, dedupe=dedupe, one_based=one_based)
    except DatasetFormatError as e:
        raise DatasetFormatError(f"{path}: {e}") from e

    logger.info(
        f"Loaded dataset {dataset.name!r}: {dataset.num_nodes} nodes, "
        f"{dataset.structure.num_edges} edges, {dataset.num_features} features, "
        f"{dataset.num_classes} classes"
    )
    return dataset


def dataset_to_dict(dataset: Dataset) -> dict:
    """Canonical document: edges sorted internally and lexicographically"""
    return {
        "name": dataset.name,
        "kind": dataset.kind.value,
        "num_nodes": dataset.num_nodes,
        "num_classes": dataset.num_classes,
        "edges": [list(edge) for edge in dataset.structure.canonical().edges],
        "features": [[float(v) for v in row] for row in dataset.features],
        "labels": [int(v) for v in dataset.labels.labels],
    }


def save_dataset(dataset: Dataset, path: Union[str, Path]) -> None:
    """Write the canonical JSON form; floats use round-trip precision"""
    path = Path(path)
    text = json.dumps(dataset_to_dict(dataset), sort_keys=True, separators=(",", ":"))
    path.write_text(text + "\n", encoding="utf-8")
    logger.info(f"Saved dataset {dataset.name!r} to {path}")
