"""
Test script for batching, the prefetch queue and the training loops.
Uses the planted two-block fixture from helpers.py.
"""
import sys
import tempfile
from collections import Counter
from pathlib import Path

sys.path.insert(0, str(Path(__file__).parent.parent))
sys.path.insert(0, str(Path(__file__).parent))

import numpy as np

from config.train_config import SamplerConfig, TrainConfig
from evaluation import kmeans, nmi
from model import HineModel, NegSampler
from sampler import ChainSample, random_walks, sample_edge_triples, walks_to_chain_samples
from trainer import BatchQueue, HineTrainer, SignatureGroups, convergence_check, make_batches, train_ahine, train_ghine
from utils.exceptions import ChainLengthError, NumericalError
from helpers import planted_blocks, planted_trips

PLANTED = dict(dim=8, hidden=16, neg=5, batch_size=32, eta_embed=0.05, eta_dnn=0.005, convergence_tol=0.0)


def planted_config(**overrides):
    values = dict(PLANTED)
    values.update(overrides)
    return TrainConfig(**values)


def test_make_batches():
    samples = [ChainSample(i, (1,), i + 1) for i in range(5)]
    batches = make_batches(samples, 2, seed=0)
    assert [len(b) for b in batches] == [2, 2, 1]
    assert all(b.signature == (1,) for b in batches)
    print("✓ 5 samples, b=2 → batches of 2, 2, 1")

    mixed = [ChainSample(i % 7, (1,) if i % 3 else (1, 2), (i * 5) % 7) for i in range(40)]
    batches = make_batches(mixed, 4, seed=3)
    assert {b.signature for b in batches} == {(1,), (1, 2)}
    assert all(len(b) <= 4 for b in batches)
    visited = Counter(
        (int(s), batch.signature, int(t)) for batch in batches for s, t in zip(batch.sources, batch.targets)
    )
    assert visited == Counter((s.first, s.relations, s.last) for s in mixed)
    print("✓ Batches are signature-homogeneous and cover every sample once")

    again = make_batches(mixed, 4, seed=3)
    assert [(b.signature, b.sources.tolist(), b.targets.tolist()) for b in batches] == \
           [(b.signature, b.sources.tolist(), b.targets.tolist()) for b in again]
    print("✓ Same seed gives the same batch sequence")


def test_convergence_check():
    assert convergence_check([4.0, 4.0], 1e-3)
    assert not convergence_check([4.0, 3.0], 1e-3)
    assert not convergence_check([4.0], 1e-3)
    assert convergence_check([4.0, 4.0], 0.0)
    assert not convergence_check([4.0, 4.0 - 1e-12], 0.0)
    print("✓ Relative epoch-loss convergence rule")


def test_batch_queue():
    groups = SignatureGroups([ChainSample(i % 5, (i % 2,), (i + 1) % 5) for i in range(37)])
    batches = groups.batches(4, np.random.default_rng(0))
    sampler = NegSampler(np.ones(5), neg=3)
    delivered = list(BatchQueue(batches, sampler, np.random.default_rng(1), maxsize=2))
    assert [id(b) for b in delivered] == [id(b) for b in batches]
    assert all(b.negatives.shape == (len(b), 3) for b in delivered)
    print("✓ Prefetch queue is FIFO and attaches negatives")

    total = BatchQueue(groups.batches(4, np.random.default_rng(0)), sampler, np.random.default_rng(1)).consume_parallel(
        lambda b: float(len(b)), threads=3
    )
    assert total == 37.0

    class BrokenSampler:
        def draw(self, rng, targets):
            raise RuntimeError("noise table exploded")

    try:
        list(BatchQueue(batches, BrokenSampler(), np.random.default_rng(1)))
        raise AssertionError("expected RuntimeError")
    except RuntimeError as e:
        assert 'exploded' in str(e)
    print("✓ Producer errors surface in the consumer")


def test_zero_iterations_and_determinism():
    graph, _ = planted_blocks(block_size=15, seed=1)
    config = planted_config(max_iterations=0, seed=4)
    result = train_ghine(graph, config)
    fresh = HineModel.for_graph(graph, config)
    assert np.array_equal(result.embeddings, fresh.phi)
    assert result.report.epochs == []
    print("✓ max_iterations=0 returns the initialization")

    config = planted_config(max_iterations=3, seed=4)
    first = train_ghine(graph, config).embeddings
    second = train_ghine(graph, config).embeddings
    assert np.array_equal(first, second)
    print("✓ Two runs with one seed give identical embeddings")


def test_ghine_loss_decreases():
    graph, _ = planted_blocks(seed=0)
    result = train_ghine(graph, planted_config(max_iterations=5, seed=0))
    losses = result.report.losses()
    assert len(losses) == 5
    for previous, current in zip(losses, losses[1:]):
        assert current < previous + 1e-6, losses
    assert result.report.stop_reason == 'max_iterations'
    print(f"✓ Epoch loss decreases: {[round(v, 4) for v in losses]}")


def test_ghine_equals_ahine_at_c1():
    graph, _ = planted_blocks(block_size=25, seed=2)
    config = planted_config(max_chain_length=1, max_iterations=3, seed=8)
    samples = list(sample_edge_triples(graph, graph.num_edges, seed=8))
    ghine = train_ghine(graph, config, samples)
    ahine = train_ahine(graph, config, samples)
    assert np.array_equal(ghine.embeddings, ahine.embeddings)
    for e in ghine.transforms:
        for a, b in zip(ghine.transforms[e].weights, ahine.transforms[e].weights):
            assert np.array_equal(a, b)
    assert ghine.report.losses() == ahine.report.losses()
    print("✓ Chain training with c=1 is bitwise single-edge training")


def test_two_phase_schedule():
    graph, _ = planted_blocks(block_size=15, seed=3)
    walk_config = SamplerConfig(walks_per_node=2, max_walk_length=6, max_chain_length=2, seed=3)
    samples = list(walks_to_chain_samples(random_walks(graph, walk_config), 2))

    config = planted_config(max_chain_length=2, pretrain_epochs=2, max_iterations=3, seed=3)
    result = train_ahine(graph, config, samples)
    assert len(result.report.losses(1)) == 2
    assert len(result.report.losses(2)) == 3
    assert result.report.phase_stop_reasons == {1: 'max_iterations', 2: 'max_iterations'}

    raw = train_ahine(graph, planted_config(max_chain_length=2, pretrain_epochs=0, max_iterations=1, seed=3), samples)
    assert raw.report.losses(1) == []
    assert len(raw.report.losses(2)) == 1
    print("✓ Pretraining then chain training; pretrain_epochs=0 skips phase 1")

    try:
        train_ahine(graph, planted_config(max_chain_length=2), [ChainSample(0, (0, 0, 0), 1)])
        raise AssertionError("expected ChainLengthError")
    except ChainLengthError:
        pass
    print("✓ Samples longer than c rejected")


def test_checkpoint_resume():
    graph, _ = planted_blocks(block_size=15, seed=5)
    for dtype in ('float32', 'float64'):
        config = planted_config(max_iterations=4, seed=6, dtype=dtype)
        with tempfile.TemporaryDirectory() as tmp:
            straight = HineTrainer(graph, config, checkpoint_dir=tmp).train_ghine()
            checkpoint = Path(tmp) / 'phase1' / 'epoch_2'
            assert (checkpoint / 'transforms.bin').is_file()
            resumed = HineTrainer(graph, config).train_ghine(resume=checkpoint)
        assert straight.embeddings.dtype == np.dtype(dtype)
        assert np.array_equal(straight.embeddings, resumed.embeddings), dtype
        for e in straight.transforms:
            for a, b in zip(straight.transforms[e].weights, resumed.transforms[e].weights):
                assert np.array_equal(a, b), dtype
        assert straight.report.losses() == resumed.report.losses()
        print(f"✓ {dtype}: resume from epoch 2 reproduces the uninterrupted run")


def test_numerical_abort():
    graph, _ = planted_blocks(block_size=15, seed=7)
    config = planted_config(eta_embed=1e30, eta_dnn=1e30, max_iterations=5, seed=7)
    try:
        train_ghine(graph, config)
        raise AssertionError("expected NumericalError")
    except NumericalError as e:
        print(f"✓ Divergent run aborts: {e}")


def test_throughput_mode():
    graph, _ = planted_blocks(block_size=15, seed=9)
    result = train_ghine(graph, planted_config(max_iterations=2, seed=9), threads=2)
    assert len(result.report.losses()) == 2
    assert np.all(np.isfinite(result.embeddings))
    print("✓ Multi-threaded training completes")


def test_softmax_likelihood_improves():
    graph, _ = planted_blocks(seed=11)
    config = planted_config(max_iterations=10, seed=11)
    held_out = list(sample_edge_triples(graph, 50, seed=99))

    def mean_neg_log_prob(model):
        return float(np.mean([-np.log(model.full_softmax_prob(p.relations, p.first, p.last)) for p in held_out]))

    before = mean_neg_log_prob(HineModel.for_graph(graph, config))
    after = mean_neg_log_prob(train_ghine(graph, config).model)
    assert after < before
    print(f"✓ Held-out −log Pr {before:.4f} → {after:.4f}")


def test_planted_recovery():
    scores = []
    for seed in range(5):
        graph, blocks = planted_blocks(seed=seed)
        result = train_ghine(graph, planted_config(max_iterations=100, seed=seed))
        assignment = kmeans(result.embeddings, 2, seed=seed).assignment
        scores.append(nmi(assignment, blocks))

        held_out = list(sample_edge_triples(graph, 100, seed=seed + 50))
        negatives = np.random.default_rng(seed).integers(0, graph.num_nodes, size=(len(held_out), 5))

        def held_out_loss(model):
            return sum(model.neg_sampling_loss(p, negs)[0] for p, negs in zip(held_out, negatives))

        initial = held_out_loss(HineModel.for_graph(graph, planted_config(seed=seed)))
        final = held_out_loss(result.model)
        assert final <= initial, f"seed {seed}: held-out loss {final:.4f} > {initial:.4f}"
    average = float(np.mean(scores))
    assert average >= 0.8, scores
    print(f"✓ Planted blocks recovered: NMI per seed {[round(s, 3) for s in scores]}, mean {average:.3f}")


def test_chain_training_learns_composed_relations():
    """Classes are visible only through go,arrive chains; edge-only training cannot see them."""
    ahine_scores, ghine_scores = [], []
    for seed in range(5):
        graph, samples, classes = planted_trips(seed=seed)
        config = planted_config(max_chain_length=2, pretrain_epochs=5, max_iterations=100,
                                typed_negatives=True, seed=seed)
        chain = (graph.edge_types.id_of('go'), graph.edge_types.id_of('arrive'))
        homes = np.flatnonzero(graph.node_type_ids == graph.node_types.id_of('home'))
        dests = np.flatnonzero(graph.node_type_ids == graph.node_types.id_of('dest'))

        def chain_accuracy(model):
            """Share of (home, own-class dest, other-class dest) triples ranked correctly."""
            correct = total = 0
            for home in homes:
                scores = np.array([model.score(chain, int(home), int(d)) for d in dests])
                own = scores[classes[dests] == classes[home]]
                other = scores[classes[dests] != classes[home]]
                correct += int(np.sum(own[:, None] > other[None, :]))
                total += own.size * other.size
            return correct / total

        ahine_scores.append(chain_accuracy(train_ahine(graph, config, samples).model))
        ghine_scores.append(chain_accuracy(train_ghine(graph, config).model))

    ahine, ghine = float(np.mean(ahine_scores)), float(np.mean(ghine_scores))
    assert ahine >= 0.8, ahine_scores
    assert ahine - ghine >= 0.2, (ahine_scores, ghine_scores)
    print(f"✓ Two-hop class ranking: AHINE {ahine:.3f} vs GHINE {ghine:.3f}")


def main():
    """Run all tests."""
    print("\n" + "=" * 50)
    print("TRAINER TESTS")
    print("=" * 50 + "\n")

    try:
        test_make_batches()
        test_convergence_check()
        test_batch_queue()
        test_zero_iterations_and_determinism()
        test_ghine_loss_decreases()
        test_ghine_equals_ahine_at_c1()
        test_two_phase_schedule()
        test_checkpoint_resume()
        test_numerical_abort()
        test_throughput_mode()
        test_softmax_likelihood_improves()
        test_planted_recovery()
        test_chain_training_learns_composed_relations()

        print("\n✅ ALL TRAINER TESTS PASSED!\n")
    except Exception as e:
        print(f"\n❌ TEST FAILED: {e}\n")
        raise


if __name__ == "__main__":
    main()
