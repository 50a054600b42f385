"""
Tests for the encoder forward pass, masked loss, backward pass and Adam
"""

import itertools
import math

import numpy as np
import pytest

from src.exceptions import DimensionError, SplitError, StaleCacheError
from src.models.hypergraph import Hypergraph
from src.models.projection_config import ProjectionConfig
from src.models.training import MlpConfig, Placement
from src.services.neuralnet import (
    AdamState,
    EncoderPipeline,
    Mode,
    accuracy,
    adam_step,
    backward,
    cross_entropy_masked,
    mlp_forward,
)
from src.services.projection import build_projection, compound

SIX_NODES = Hypergraph(6, ((0, 1, 2), (2, 3), (3, 4, 5), (0, 5)))


def _random_pipeline(dims, placement=None, seed=0, hypergraph=SIX_NODES, cfg=None, dropout=0.0):
    rng = np.random.default_rng(seed)
    mlp = MlpConfig(layer_dims=tuple(dims), dropout_rate=dropout, seed=seed)
    weights = [rng.normal(size=(a, b)) for a, b in zip(dims[:-1], dims[1:])]
    biases = [rng.normal(scale=0.1, size=b) for b in dims[1:]]
    projection = None
    if placement is not None:
        projection = build_projection(hypergraph, cfg or ProjectionConfig())
    return EncoderPipeline(mlp=mlp, weights=weights, biases=biases,
                           projection=projection, placement=placement)


def _loss(pipeline, x, labels, mask, dropout_seed=None):
    # a fresh generator per call replays the same dropout masks
    rng = np.random.default_rng(dropout_seed) if dropout_seed is not None else None
    logits, cache = mlp_forward(pipeline, x, Mode.TRAIN, rng=rng)
    loss, dlogits = cross_entropy_masked(logits, labels, mask)
    return loss, dlogits, cache


def _assert_gradients_match(pipeline, x, labels, mask, dropout_seed=None, eps=1e-6):
    _, dlogits, cache = _loss(pipeline, x, labels, mask, dropout_seed)
    analytic = backward(pipeline, cache, dlogits)

    for index, param in enumerate(pipeline.params):
        numeric = np.zeros_like(param)
        for pos in np.ndindex(param.shape):
            original = param[pos]
            param[pos] = original + eps
            up = _loss(pipeline, x, labels, mask, dropout_seed)[0]
            param[pos] = original - eps
            down = _loss(pipeline, x, labels, mask, dropout_seed)[0]
            param[pos] = original
            numeric[pos] = (up - down) / (2 * eps)
        scale = np.linalg.norm(analytic[index]) + np.linalg.norm(numeric)
        error = np.linalg.norm(analytic[index] - numeric) / max(scale, 1e-12)
        assert error < 1e-4, f"parameter {index} relative error {error}"


class TestPipelineConstruction:
    """Test shape and placement checks"""

    def test_wrong_weight_shape(self):
        """Test that mismatched parameter shapes are rejected"""
        mlp = MlpConfig(layer_dims=(3, 2))
        with pytest.raises(DimensionError, match="Layer 1"):
            EncoderPipeline(mlp=mlp, weights=[np.zeros((2, 3))], biases=[np.zeros(2)])

    def test_placement_needs_projection(self):
        """Test that a placement without a projection is rejected"""
        mlp = MlpConfig(layer_dims=(3, 2))
        with pytest.raises(DimensionError, match="projection"):
            EncoderPipeline(mlp=mlp, weights=[np.zeros((3, 2))], biases=[np.zeros(2)],
                            placement=Placement(0, 1))

    def test_placement_beyond_depth(self):
        """Test that r must not exceed the number of layers"""
        with pytest.raises(DimensionError, match="0 <= f <= r <= 1"):
            _random_pipeline((3, 2), placement=Placement(0, 2))

    def test_multi_hop_needs_same_stage(self):
        """Test that hops > 1 is only allowed for (f, f)"""
        with pytest.raises(DimensionError, match="same-stage"):
            _random_pipeline((3, 2), placement=Placement(0, 1), cfg=ProjectionConfig(hops=2))

    def test_initialize_is_seeded(self):
        """Test that equal seeds give equal parameters"""
        mlp = MlpConfig(layer_dims=(4, 8, 3), seed=11)
        a = EncoderPipeline.initialize(mlp)
        b = EncoderPipeline.initialize(mlp)
        for pa, pb in zip(a.params, b.params):
            np.testing.assert_array_equal(pa, pb)

    def test_set_params_bumps_version(self):
        """Test that replacing parameters advances the version"""
        pipeline = EncoderPipeline.initialize(MlpConfig(layer_dims=(2, 2)))
        pipeline.set_params(pipeline.params)
        assert pipeline.version == 1


class TestForward:
    """Test mlp_forward"""

    def test_zero_parameters_give_zero_logits(self):
        """Test that all-zero weights and biases give zero logits"""
        mlp = MlpConfig(layer_dims=(3, 4, 2))
        pipeline = EncoderPipeline(mlp=mlp, weights=[np.zeros((3, 4)), np.zeros((4, 2))],
                                   biases=[np.zeros(4), np.zeros(2)])
        logits, _ = mlp_forward(pipeline, np.ones((5, 3)))
        np.testing.assert_array_equal(logits, np.zeros((5, 2)))

    def test_identity_layer(self):
        """Test that one identity layer without projection returns X"""
        mlp = MlpConfig(layer_dims=(3, 3))
        pipeline = EncoderPipeline(mlp=mlp, weights=[np.eye(3)], biases=[np.zeros(3)])
        x = np.random.default_rng(0).normal(size=(4, 3))
        logits, _ = mlp_forward(pipeline, x)
        np.testing.assert_array_equal(logits, x)

    def test_dense_oracle(self):
        """Test placement (0, 1) against a dense straight-line computation"""
        h = Hypergraph(5, ((0, 1, 2), (2, 3, 4), (0, 4)))
        pipeline = _random_pipeline((3, 4, 2), placement=Placement(0, 1), hypergraph=h)
        x = np.random.default_rng(5).normal(size=(5, 3))
        forward = pipeline.projection.forward.toarray()
        reverse = pipeline.projection.reverse.toarray()
        w1, b1, w2, b2 = pipeline.params
        expected = reverse @ np.maximum(forward @ x @ w1 + b1, 0) @ w2 + b2
        logits, _ = mlp_forward(pipeline, x)
        np.testing.assert_allclose(logits, expected, atol=1e-12)

    def test_same_stage_equals_compound(self):
        """Test that placement (0, 0) multiplies X by the compound operator"""
        pipeline = _random_pipeline((3, 2), placement=Placement(0, 0))
        x = np.random.default_rng(6).normal(size=(6, 3))
        w, b = pipeline.params
        expected = compound(pipeline.projection).toarray() @ x @ w + b
        logits, _ = mlp_forward(pipeline, x)
        np.testing.assert_allclose(logits, expected, atol=1e-12)

    def test_hops_repeat_compound(self):
        """Test that hops = 2 at (0, 0) applies the compound twice"""
        pipeline = _random_pipeline((3, 2), placement=Placement(0, 0), cfg=ProjectionConfig(hops=2))
        x = np.random.default_rng(7).normal(size=(6, 3))
        w, b = pipeline.params
        c = compound(pipeline.projection, hops=1).toarray()
        logits, _ = mlp_forward(pipeline, x)
        np.testing.assert_allclose(logits, c @ c @ x @ w + b, atol=1e-12)

    def test_no_projection_is_plain_mlp(self):
        """Test that placement None ignores the structure entirely"""
        plain = _random_pipeline((3, 4, 2))
        x = np.random.default_rng(8).normal(size=(6, 3))
        w1, b1, w2, b2 = plain.params
        logits, _ = mlp_forward(plain, x)
        np.testing.assert_allclose(logits, np.maximum(x @ w1 + b1, 0) @ w2 + b2)

    def test_train_without_dropout_matches_eval(self):
        """Test that dropout 0 makes train and eval forward passes identical"""
        pipeline = _random_pipeline((3, 4, 2), placement=Placement(0, 2))
        x = np.random.default_rng(9).normal(size=(6, 3))
        train_logits, _ = mlp_forward(pipeline, x, Mode.TRAIN)
        eval_logits, _ = mlp_forward(pipeline, x, Mode.EVAL)
        np.testing.assert_array_equal(train_logits, eval_logits)

    def test_eval_ignores_dropout(self):
        """Test that eval mode is deterministic even with a dropout rate"""
        pipeline = EncoderPipeline.initialize(MlpConfig(layer_dims=(3, 8, 2), dropout_rate=0.5))
        x = np.ones((4, 3))
        first, _ = mlp_forward(pipeline, x, Mode.EVAL)
        second, _ = mlp_forward(pipeline, x, Mode.EVAL)
        np.testing.assert_array_equal(first, second)

    def test_dropout_needs_generator(self):
        """Test that train-mode dropout without a generator is an error"""
        pipeline = EncoderPipeline.initialize(MlpConfig(layer_dims=(3, 8, 2), dropout_rate=0.5))
        with pytest.raises(ValueError, match="random generator"):
            mlp_forward(pipeline, np.ones((4, 3)), Mode.TRAIN)

    def test_input_width_checked(self):
        """Test that X must have C0 columns"""
        pipeline = EncoderPipeline.initialize(MlpConfig(layer_dims=(3, 2)))
        with pytest.raises(DimensionError):
            mlp_forward(pipeline, np.ones((4, 2)))


class TestCrossEntropy:
    """Test the masked cross-entropy loss"""

    def test_uniform_logits(self):
        """Test that uniform logits over C classes give ln C"""
        loss, _ = cross_entropy_masked(np.zeros((3, 4)), np.array([0, 1, 2]), np.array([0, 1, 2]))
        assert loss == pytest.approx(math.log(4))

    def test_saturated_logit(self):
        """Test that a confident correct prediction costs almost nothing"""
        logits = np.array([[50.0, 0.0, 0.0]])
        loss, _ = cross_entropy_masked(logits, np.array([0]), np.array([0]))
        assert loss == pytest.approx(0.0, abs=1e-9)

    def test_two_rows(self):
        """Test a hand-computed two-row value"""
        logits = np.array([[1.0, 0.0], [0.0, 1.0]])
        loss, _ = cross_entropy_masked(logits, np.array([0, 1]), np.array([0, 1]))
        assert loss == pytest.approx(-math.log(math.e / (math.e + 1)))
        assert loss == pytest.approx(0.3133, abs=1e-4)

    def test_gradient_zero_outside_mask(self):
        """Test that unmasked rows receive no gradient"""
        logits = np.random.default_rng(0).normal(size=(4, 3))
        _, dlogits = cross_entropy_masked(logits, np.array([0, 1, 2, 0]), np.array([1, 3]))
        np.testing.assert_array_equal(dlogits[[0, 2]], 0.0)

    def test_empty_mask(self):
        """Test that an empty mask is an error"""
        with pytest.raises(SplitError):
            cross_entropy_masked(np.zeros((2, 2)), np.array([0, 1]), np.array([], dtype=np.int64))


def _placements(num_layers):
    yield None
    for f, r in itertools.combinations_with_replacement(range(num_layers + 1), 2):
        yield Placement(f, r)


GRADIENT_CASES = [(2, p) for p in _placements(2)] + [(3, p) for p in _placements(3)]


class TestBackward:
    """Test analytic gradients against central finite differences"""

    @pytest.mark.parametrize("num_layers,placement", GRADIENT_CASES,
                             ids=[f"l{l}-{p or 'none'}" for l, p in GRADIENT_CASES])
    def test_gradient_check(self, num_layers, placement):
        """Test that gradients match finite differences for every placement"""
        dims = (4, 5, 3) if num_layers == 2 else (4, 5, 5, 3)
        pipeline = _random_pipeline(dims, placement=placement, seed=3)
        rng = np.random.default_rng(4)
        x = rng.normal(size=(6, 4))
        labels = rng.integers(0, 3, size=6)
        mask = np.array([0, 2, 3, 5])
        _assert_gradients_match(pipeline, x, labels, mask)

    @pytest.mark.parametrize("placement", [None, Placement(0, 2), Placement(1, 2), Placement(1, 1)],
                             ids=["none", "0-2", "1-2", "1-1"])
    def test_gradient_check_with_dropout(self, placement):
        """Test that gradients through replayed dropout masks match finite differences"""
        pipeline = _random_pipeline((4, 5, 3), placement=placement, seed=3, dropout=0.4)
        rng = np.random.default_rng(4)
        x = rng.normal(size=(6, 4))
        labels = rng.integers(0, 3, size=6)
        mask = np.array([0, 2, 3, 5])
        _assert_gradients_match(pipeline, x, labels, mask, dropout_seed=11)

    def test_dropout_masks_recorded(self):
        """Test that train mode with dropout zeroes some hidden units and rescales the rest"""
        pipeline = _random_pipeline((4, 50, 3), dropout=0.4)
        _, _, cache = _loss(pipeline, np.ones((6, 4)), np.zeros(6, dtype=int), np.arange(6),
                            dropout_seed=0)
        keep = next(entry.payload for entry in cache.tape if entry.kind == "dropout")
        np.testing.assert_allclose(keep[keep > 0], 1.0 / (1.0 - 0.4))
        assert 0 < np.count_nonzero(keep) < keep.size

    def test_zero_input_zero_first_layer_gradient(self):
        """Test that X = 0 gives a zero first-layer weight gradient"""
        pipeline = _random_pipeline((3, 4, 2), placement=Placement(0, 2))
        x = np.zeros((6, 3))
        _, dlogits, cache = _loss(pipeline, x, np.array([0, 1, 0, 1, 0, 1]), np.arange(6))
        grads = backward(pipeline, cache, dlogits)
        np.testing.assert_array_equal(grads[0], 0.0)
        assert np.any(grads[3] != 0)

    def test_stale_cache(self):
        """Test that backward refuses a cache from older parameters"""
        pipeline = _random_pipeline((3, 2))
        _, dlogits, cache = _loss(pipeline, np.ones((6, 3)), np.zeros(6, dtype=int), np.arange(6))
        pipeline.set_params(pipeline.params)
        with pytest.raises(StaleCacheError):
            backward(pipeline, cache, dlogits)

    def test_eval_cache_rejected(self):
        """Test that backward needs a train-mode cache"""
        pipeline = _random_pipeline((3, 2))
        logits, cache = mlp_forward(pipeline, np.ones((6, 3)), Mode.EVAL)
        with pytest.raises(StaleCacheError, match="train-mode"):
            backward(pipeline, cache, np.zeros_like(logits))


class TestAccuracy:
    """Test accuracy on an index set"""

    def test_fraction_correct(self):
        """Test that accuracy counts argmax matches"""
        logits = np.array([[2.0, 1.0], [0.0, 1.0], [3.0, 0.0]])
        assert accuracy(logits, np.array([0, 0, 0]), np.array([0, 1, 2])) == pytest.approx(2 / 3)

    def test_empty_index(self):
        """Test that an empty index scores 0"""
        assert accuracy(np.zeros((2, 2)), np.array([0, 1]), np.array([], dtype=np.int64)) == 0.0


class TestAdam:
    """Test the Adam update"""

    def test_zero_gradient_no_change(self):
        """Test that zero gradients without decay leave parameters unchanged"""
        params = [np.array([1.0, -2.0])]
        state = AdamState.for_params(params, lr=0.1)
        new_params, state = adam_step(state, params, [np.zeros(2)])
        np.testing.assert_array_equal(new_params[0], params[0])
        assert state.t == 1

    def test_first_step_magnitude(self):
        """Test that the bias-corrected first step moves by about lr"""
        params = [np.array([0.0])]
        state = AdamState.for_params(params, lr=0.01)
        new_params, _ = adam_step(state, params, [np.array([-37.0])])
        assert new_params[0][0] == pytest.approx(0.01, rel=1e-6)

    def test_two_step_trace(self):
        """Test two unit-gradient steps against the hand-unrolled updates"""
        params = [np.array([0.0])]
        state = AdamState.for_params(params, lr=0.1)
        params, state = adam_step(state, params, [np.array([1.0])])
        assert params[0][0] == pytest.approx(-0.1 / (1 + 1e-8), rel=1e-12)
        params, state = adam_step(state, params, [np.array([1.0])])
        assert params[0][0] == pytest.approx(-0.2 / (1 + 1e-8), rel=1e-12)
        assert state.t == 2

    def test_weight_decay_is_coupled(self):
        """Test that decay acts through the gradient"""
        params = [np.array([1.0])]
        state = AdamState.for_params(params, lr=0.01, weight_decay=0.1)
        new_params, _ = adam_step(state, params, [np.array([0.0])])
        assert new_params[0][0] == pytest.approx(0.99, abs=1e-6)

    def test_inputs_untouched(self):
        """Test that the update returns new arrays"""
        params = [np.array([1.0])]
        state = AdamState.for_params(params, lr=0.1)
        adam_step(state, params, [np.array([1.0])])
        assert params[0][0] == 1.0
        assert state.t == 0

    def test_shape_mismatch(self):
        """Test that gradient shapes must match parameters"""
        params = [np.zeros(2)]
        with pytest.raises(DimensionError):
            adam_step(AdamState.for_params(params, lr=0.1), params, [np.zeros(3)])
