"""
Feed-forward network with manual backpropagation, masked cross-entropy and Adam.

The encoder pipeline wraps the MLP with the forward projection at stage f and
the reverse projection at stage r. Stage 0 is the input, stage k is the output
of layer k (after activation and dropout for hidden layers).
"""

import logging
from dataclasses import dataclass, field, replace
from enum import Enum
from typing import Any, NamedTuple, Optional, Sequence

import numpy as np
from scipy.special import log_softmax

from ..exceptions import DimensionError, SplitError, StaleCacheError
from ..models.training import MlpConfig, Placement
from .projection import ProjectionMatrix

logger = logging.getLogger(__name__)


class Mode(Enum):
    TRAIN = "train"
    EVAL = "eval"


class _TapeEntry(NamedTuple):
    kind: str          # 'linear', 'relu', 'dropout' or 'project'
    payload: Any       # layer input, mask, or transposed projection
    layer: int = -1


@dataclass(frozen=True, eq=False)
class ForwardCache:
    """Everything backward() needs from one forward pass"""
    tape: tuple[_TapeEntry, ...]
    version: int
    mode: Mode


@dataclass(eq=False)
class EncoderPipeline:
    """
    MLP parameters together with an optional projection and its placement.

    Attributes:
        mlp: Network shape and dropout
        weights: One C_{k-1} x C_k matrix per layer
        biases: One C_k vector per layer
        projection: Projection matrix, required when placement is set
        placement: Stages (f, r) or None for a plain MLP
        version: Bumped on every parameter update; forward caches remember it
    """
    mlp: MlpConfig
    weights: list[np.ndarray]
    biases: list[np.ndarray]
    projection: Optional[ProjectionMatrix] = None
    placement: Optional[Placement] = None
    version: int = field(default=0)

    def __post_init__(self):
        is_valid, error = self.mlp.validate()
        if not is_valid:
            raise DimensionError(error)

        l = self.mlp.num_layers
        if len(self.weights) != l or len(self.biases) != l:
            raise DimensionError(f"Expected {l} weight matrices and biases")
        for k, (w, b) in enumerate(zip(self.weights, self.biases)):
            expected = (self.mlp.layer_dims[k], self.mlp.layer_dims[k + 1])
            if w.shape != expected or b.shape != (expected[1],):
                raise DimensionError(
                    f"Layer {k + 1} parameters have shapes {w.shape}, {b.shape}; expected {expected}"
                )

        if self.placement is not None:
            if self.projection is None:
                raise DimensionError("A placement needs a projection matrix")
            is_valid, error = self.placement.validate(l)
            if not is_valid:
                raise DimensionError(error)
            if (self.projection.config.hops > 1
                    and self.placement.forward_stage != self.placement.reverse_stage):
                raise DimensionError("Multi-hop projection requires a same-stage placement (f, f)")

    @classmethod
    def initialize(cls, mlp: MlpConfig, projection: Optional[ProjectionMatrix] = None,
                   placement: Optional[Placement] = None,
                   dtype: type = np.float64) -> 'EncoderPipeline':
        """
        Create a pipeline with seeded Glorot-uniform weights and zero biases.
        """
        rng = np.random.default_rng(mlp.seed)
        weights, biases = [], []
        for fan_in, fan_out in zip(mlp.layer_dims[:-1], mlp.layer_dims[1:]):
            limit = np.sqrt(6.0 / (fan_in + fan_out))
            weights.append(rng.uniform(-limit, limit, size=(fan_in, fan_out)).astype(dtype))
            biases.append(np.zeros(fan_out, dtype=dtype))
        return cls(mlp=mlp, weights=weights, biases=biases,
                   projection=projection, placement=placement)

    @property
    def params(self) -> list[np.ndarray]:
        """Parameters in the order W1, b1, W2, b2, ..."""
        out = []
        for w, b in zip(self.weights, self.biases):
            out.extend([w, b])
        return out

    def set_params(self, params: Sequence[np.ndarray]) -> None:
        """Replace every parameter; invalidates earlier forward caches"""
        if len(params) != 2 * self.mlp.num_layers:
            raise DimensionError(f"Expected {2 * self.mlp.num_layers} parameter arrays")
        self.weights = list(params[0::2])
        self.biases = list(params[1::2])
        self.version += 1


def _apply_stage(pipeline: EncoderPipeline, stage: int, h: np.ndarray,
                 tape: list[_TapeEntry]) -> np.ndarray:
    placement, pm = pipeline.placement, pipeline.projection
    if placement is None:
        return h

    f, r = placement.forward_stage, placement.reverse_stage
    if stage == f == r:
        for _ in range(pm.config.hops):
            h = np.asarray(pm.forward @ h)
            tape.append(_TapeEntry("project", pm.forward_t))
            h = np.asarray(pm.reverse @ h)
            tape.append(_TapeEntry("project", pm.reverse_t))
    elif stage == f:
        h = np.asarray(pm.forward @ h)
        tape.append(_TapeEntry("project", pm.forward_t))
    elif stage == r:
        h = np.asarray(pm.reverse @ h)
        tape.append(_TapeEntry("project", pm.reverse_t))
    return h


def mlp_forward(pipeline: EncoderPipeline, x: np.ndarray, mode: Mode = Mode.EVAL,
                rng: Optional[np.random.Generator] = None) -> tuple[np.ndarray, ForwardCache]:
    """
    Run the pipeline on node features.

    Args:
        pipeline: Parameters, projection and placement
        x: |V| x C0 features
        mode: TRAIN applies inverted dropout after hidden activations
        rng: Generator for dropout masks; required in TRAIN mode with dropout > 0

    Returns:
        (logits over |V| rows, cache for backward)
    """
    dims = pipeline.mlp.layer_dims
    if x.ndim != 2 or x.shape[1] != dims[0]:
        raise DimensionError(f"Input must have {dims[0]} columns, got shape {x.shape}")
    if pipeline.projection is not None and pipeline.placement is not None \
            and x.shape[0] != pipeline.projection.num_nodes:
        raise DimensionError(
            f"Input has {x.shape[0]} rows but the projection covers "
            f"{pipeline.projection.num_nodes} nodes"
        )

    p = pipeline.mlp.dropout_rate
    use_dropout = mode is Mode.TRAIN and p > 0
    if use_dropout and rng is None:
        raise ValueError("Dropout in train mode needs a random generator")

    num_layers = pipeline.mlp.num_layers
    tape: list[_TapeEntry] = []
    h = _apply_stage(pipeline, 0, x, tape)
    for k in range(num_layers):
        tape.append(_TapeEntry("linear", h, k))
        h = h @ pipeline.weights[k] + pipeline.biases[k]
        if k < num_layers - 1:
            mask = h > 0
            tape.append(_TapeEntry("relu", mask))
            h = h * mask
            if use_dropout:
                keep = (rng.random(h.shape) >= p) / (1.0 - p)
                keep = keep.astype(h.dtype)
                tape.append(_TapeEntry("dropout", keep))
                h = h * keep
        h = _apply_stage(pipeline, k + 1, h, tape)

    return h, ForwardCache(tape=tuple(tape), version=pipeline.version, mode=mode)


def cross_entropy_masked(logits: np.ndarray, labels: np.ndarray,
                         mask: np.ndarray) -> tuple[float, np.ndarray]:
    """
    Mean negative log-likelihood over the masked rows.

    Args:
        logits: |V| x C scores
        labels: Class index per node
        mask: Node indices that contribute to the loss

    Returns:
        (loss, dlogits) with dlogits zero outside the mask
    """
    mask = np.asarray(mask, dtype=np.int64)
    if mask.size == 0:
        raise SplitError("Loss mask is empty")
    labels = np.asarray(labels, dtype=np.int64)
    if labels.shape[0] != logits.shape[0]:
        raise DimensionError(
            f"{labels.shape[0]} labels for {logits.shape[0]} logit rows"
        )

    rows = np.arange(mask.size)
    targets = labels[mask]
    log_probs = log_softmax(logits[mask], axis=1)
    loss = float(-log_probs[rows, targets].mean())

    grad = np.exp(log_probs)
    grad[rows, targets] -= 1.0
    dlogits = np.zeros_like(logits)
    dlogits[mask] = grad / mask.size
    return loss, dlogits


def backward(pipeline: EncoderPipeline, cache: ForwardCache,
             dlogits: np.ndarray) -> list[np.ndarray]:
    """
    Gradients of the loss for every parameter, ordered like pipeline.params.

    Projections contribute their transposes; dropout reuses the forward masks.
    """
    if cache.mode is not Mode.TRAIN:
        raise StaleCacheError("Backward needs a cache from a train-mode forward pass")
    if cache.version != pipeline.version:
        raise StaleCacheError(
            f"Cache was built for parameter version {cache.version}, "
            f"pipeline is at version {pipeline.version}"
        )

    num_layers = pipeline.mlp.num_layers
    grad_w: list[Optional[np.ndarray]] = [None] * num_layers
    grad_b: list[Optional[np.ndarray]] = [None] * num_layers
    g = dlogits
    for entry in reversed(cache.tape):
        if entry.kind == "project":
            g = np.asarray(entry.payload @ g)
        elif entry.kind in ("relu", "dropout"):
            g = g * entry.payload
        else:
            k, h_in = entry.layer, entry.payload
            grad_w[k] = h_in.T @ g
            grad_b[k] = g.sum(axis=0)
            if k == 0:
                break
            g = g @ pipeline.weights[k].T

    grads = []
    for gw, gb in zip(grad_w, grad_b):
        grads.extend([gw, gb])
    return grads


def accuracy(logits: np.ndarray, labels: np.ndarray, index: np.ndarray) -> float:
    """Fraction of indexed nodes whose argmax matches the label"""
    index = np.asarray(index, dtype=np.int64)
    if index.size == 0:
        return 0.0
    predictions = np.argmax(logits[index], axis=1)
    return float(np.mean(predictions == np.asarray(labels)[index]))


@dataclass(frozen=True, eq=False)
class AdamState:
    """
    Moment accumulators and settings for Adam.

    Weight decay is coupled: decay * param is added to the gradient before the
    moment updates.
    """
    lr: float
    weight_decay: float = 0.0
    beta1: float = 0.9
    beta2: float = 0.999
    epsilon: float = 1e-8
    t: int = 0
    m: tuple[np.ndarray, ...] = ()
    v: tuple[np.ndarray, ...] = ()

    @classmethod
    def for_params(cls, params: Sequence[np.ndarray], lr: float,
                   weight_decay: float = 0.0) -> 'AdamState':
        zeros = tuple(np.zeros_like(p) for p in params)
        return cls(lr=lr, weight_decay=weight_decay, m=zeros,
                   v=tuple(np.zeros_like(p) for p in params))


def adam_step(state: AdamState, params: Sequence[np.ndarray],
              grads: Sequence[np.ndarray]) -> tuple[list[np.ndarray], AdamState]:
    """
    One bias-corrected Adam update.

    Returns:
        (new parameters, new state); inputs are left untouched
    """
    if not (len(params) == len(grads) == len(state.m) == len(state.v)):
        raise DimensionError("Parameters, gradients and moments must line up")

    t = state.t + 1
    correction1 = 1.0 - state.beta1 ** t
    correction2 = 1.0 - state.beta2 ** t
    new_params, new_m, new_v = [], [], []
    for p, g, m, v in zip(params, grads, state.m, state.v):
        if p.shape != g.shape:
            raise DimensionError(f"Gradient shape {g.shape} does not match parameter {p.shape}")
        g = g + state.weight_decay * p
        m = state.beta1 * m + (1.0 - state.beta1) * g
        v = state.beta2 * v + (1.0 - state.beta2) * g * g
        m_hat = m / correction1
        v_hat = v / correction2
        new_params.append(p - state.lr * m_hat / (np.sqrt(v_hat) + state.epsilon))
        new_m.append(m)
        new_v.append(v)

    return new_params, replace(state, t=t, m=tuple(new_m), v=tuple(new_v))
