"""
Train/validation/test split generation
"""

import logging
import math

import numpy as np

from ..exceptions import SplitError
from ..models.dataset import Dataset, Split, SplitProtocol, SplitSpec

logger = logging.getLogger(__name__)

MIN_CLASS_SIZE = 3


def _cut(nodes: np.ndarray, fractions: tuple[float, float, float]) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    n = nodes.size
    # tolerance keeps 0.29 * 100 from flooring to 28
    n_train = math.floor(fractions[0] * n + 1e-9)
    n_val = math.floor(fractions[1] * n + 1e-9)
    return nodes[:n_train], nodes[n_train:n_train + n_val], nodes[n_train + n_val:]


def _one_split(dataset: Dataset, spec: SplitSpec, rng: np.random.Generator) -> Split:
    if spec.protocol is SplitProtocol.UNIFORM:
        train, val, test = _cut(rng.permutation(dataset.num_nodes), spec.fractions)
    else:
        parts = ([], [], [])
        for c in range(dataset.num_classes):
            members = np.flatnonzero(dataset.labels.labels == c)
            for bucket, chunk in zip(parts, _cut(rng.permutation(members), spec.fractions)):
                bucket.append(chunk)
        train, val, test = (np.concatenate(p) if p else np.zeros(0, dtype=np.int64) for p in parts)

    return Split(train=np.sort(train), val=np.sort(val), test=np.sort(test))


def make_splits(dataset: Dataset, spec: SplitSpec) -> list[Split]:
    """
    Generate spec.num_splits independent splits.

    Per-class: every class is shuffled and cut by floor(fraction * n_c) for
    train and val, the remainder goes to test. Uniform: the same cut on all
    nodes. Each split draws from its own child of the split seed.
    """
    if spec.protocol is SplitProtocol.PER_CLASS:
        counts = dataset.labels.class_counts()
        small = [int(c) for c in np.flatnonzero(counts < MIN_CLASS_SIZE)]
        if small:
            raise SplitError(
                f"Classes {small} of {dataset.name!r} have fewer than "
                f"{MIN_CLASS_SIZE} members; per-class splits are impossible"
            )

    children = np.random.SeedSequence(spec.seed).spawn(spec.num_splits)
    splits = [_one_split(dataset, spec, np.random.default_rng(child)) for child in children]
    logger.debug(
        f"Made {len(splits)} {spec.protocol.value} splits of {dataset.name!r}: "
        f"{splits[0].train.size}/{splits[0].val.size}/{splits[0].test.size}"
    )
    return splits
