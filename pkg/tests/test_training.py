import copy
import math

import numpy as np
import pytest

from conftest import planted_block_dataset
from lcr.errors import EmptyInput, NonFiniteLoss, ZeroVector
from lcr.fusion import attention_weights, init_params
from lcr.training import (
    TrainConfig,
    contrastive_loss,
    loss_and_grads,
    sample_blocks,
    train,
)


class TestSampleBlocks:
    def test_below_cap_returns_all_in_order(self):
        rng = np.random.default_rng(0)
        blocks = list("abcd")
        assert sample_blocks(blocks, 6, rng) == blocks

    def test_deterministic_given_seed(self):
        blocks = list(range(10))
        a = sample_blocks(blocks, 6, np.random.default_rng(42))
        b = sample_blocks(blocks, 6, np.random.default_rng(42))
        assert a == b
        assert a == sorted(a), "original order preserved"

    def test_uniform_without_replacement(self):
        # Each of 10 blocks should appear with frequency 6/10 over many draws.
        rng = np.random.default_rng(7)
        counts = np.zeros(10)
        draws = 10_000
        for _ in range(draws):
            for idx in sample_blocks(list(range(10)), 6, rng):
                counts[idx] += 1
        freqs = counts / draws
        assert np.all(np.abs(freqs - 0.6) < 0.02)

    def test_empty(self):
        with pytest.raises(EmptyInput):
            sample_blocks([], 3, np.random.default_rng(0))


class TestContrastiveLoss:
    def test_single_pair_is_zero(self):
        loss = contrastive_loss([np.array([1.0, 2.0])], [np.array([1.0, 0.0])], 0.5)
        assert loss == 0.0

    def test_two_orthonormal_pairs(self):
        # Hand-computed 2x2 softmax: loss = ln(1 + e^-1).
        codes = [np.array([1.0, 0.0]), np.array([0.0, 1.0])]
        queries = [np.array([1.0, 0.0]), np.array([0.0, 1.0])]
        loss = contrastive_loss(codes, queries, temperature=1.0)
        assert abs(loss - 0.3132616875182228) < 1e-12

    def test_zero_vector_rejected(self):
        with pytest.raises(ZeroVector):
            contrastive_loss([np.zeros(2)], [np.ones(2)], 1.0)

    def test_nonnegative(self):
        rng = np.random.default_rng(3)
        for _ in range(100):
            n, d = int(rng.integers(1, 6)), int(rng.integers(2, 8))
            loss = contrastive_loss(
                rng.standard_normal((n, d)), rng.standard_normal((n, d)), 0.3
            )
            assert loss >= 0.0


def _perturbed_loss(block_sets, queries, params, tau, name, idx, eps):
    p = copy.deepcopy(params)
    arr = getattr(p, name)
    if name == "b2":
        p.b2 = p.b2 + eps
    else:
        flat = arr.reshape(-1)
        flat[idx] += eps
    return loss_and_grads(block_sets, queries, p, tau)[0]


class TestGradients:
    @pytest.mark.parametrize("method", ["attn1", "attn1_mean", "attn2", "attn2_max"])
    def test_matches_central_finite_differences(self, method):
        rng = np.random.default_rng(11)
        h = 1e-6
        for trial in range(25):
            n = int(rng.integers(1, 5))
            dim = 8
            params = init_params(method, dim, seed=trial)
            block_sets = [
                rng.standard_normal((int(rng.integers(1, 5)), dim)) for _ in range(n)
            ]
            queries = rng.standard_normal((n, dim))
            _, grads = loss_and_grads(block_sets, queries, params, 0.5)
            for name in ("w2", "b2", "W1", "b1"):
                analytic = getattr(grads, name, None)
                if analytic is None or getattr(params, name) is None:
                    continue
                if name == "b2":
                    samples = [0]
                    flat_grad = np.array([analytic])
                else:
                    flat_grad = np.asarray(analytic).reshape(-1)
                    size = flat_grad.shape[0]
                    samples = rng.choice(size, size=min(8, size), replace=False)
                for idx in samples:
                    up = _perturbed_loss(block_sets, queries, params, 0.5, name, idx, h)
                    dn = _perturbed_loss(block_sets, queries, params, 0.5, name, idx, -h)
                    fd = (up - dn) / (2 * h)
                    if max(abs(flat_grad[idx]), abs(fd)) < 1e-8:
                        continue  # exactly-zero gradient vs difference noise
                    rel = abs(flat_grad[idx] - fd) / max(abs(flat_grad[idx]), abs(fd), 1e-6)
                    assert rel < 1e-4, (method, name, idx, flat_grad[idx], fd)

    def test_untrainable_method_rejected(self):
        params = init_params("mean", 4)
        with pytest.raises(ValueError):
            loss_and_grads([np.ones((2, 4))], np.ones((1, 4)), params, 0.1)


class TestTrain:
    def test_zero_learning_rate_keeps_params(self):
        pairs, _ = planted_block_dataset(seed=1, n_codes=16, dim=32, k=3)
        params = init_params("attn1_mean", 32, seed=5)
        before = copy.deepcopy(params)
        result = train(pairs, TrainConfig(epochs=2, learning_rate=0.0, seed=0), params)
        np.testing.assert_array_equal(result.params.w2, before.w2)
        assert result.params.b2 == before.b2

    def test_deterministic_given_seed(self):
        pairs, _ = planted_block_dataset(seed=2, n_codes=32, dim=32, k=4)
        cfg = TrainConfig(epochs=3, learning_rate=0.5, seed=9)
        r1 = train(pairs, cfg, init_params("attn1_mean", 32, seed=5))
        r2 = train(pairs, cfg, init_params("attn1_mean", 32, seed=5))
        np.testing.assert_array_equal(r1.params.w2, r2.params.w2)
        assert r1.epoch_losses == r2.epoch_losses

    def test_loss_decreases_and_attention_finds_planted_block(self):
        pairs, planted = planted_block_dataset(seed=0)
        params = init_params("attn1_mean", 128, seed=0)
        result = train(pairs, TrainConfig(epochs=5, learning_rate=1.0, seed=0), params)
        losses = result.epoch_losses
        assert all(a > b for a, b in zip(losses, losses[1:])), losses
        hits = sum(
            int(np.argmax(attention_weights(np.stack(blocks), result.params)) == p)
            for (_q, blocks), p in zip(pairs, planted)
        )
        assert hits / len(pairs) >= 0.90

    def test_nonfinite_loss_reports_batch(self):
        # Opposite query/code at a tiny temperature underflows the positive's
        # softmax probability to zero, so the log blows up.
        e1, e2 = np.eye(2)
        pairs = [(e1, [-e1]), (e2, [e2])]
        params = init_params("attn1", 2, seed=1)
        cfg = TrainConfig(epochs=1, learning_rate=0.1, temperature=1e-4, seed=0)
        with pytest.raises(NonFiniteLoss) as exc_info:
            train(pairs, cfg, params)
        assert exc_info.value.batch_id == 0

    def test_empty_dataset(self):
        with pytest.raises(EmptyInput):
            train([], TrainConfig(), init_params("attn1", 8))
