"""
Test script for embedding files, transform checkpoints and negative sampling.
"""
import sys
import tempfile
from pathlib import Path

sys.path.insert(0, str(Path(__file__).parent.parent))

import numpy as np

from model import (
    EmbeddingTable, HineModel, NegSampler, load_binary, load_checkpoint, load_embeddings, load_text,
    load_transforms, save_binary, save_checkpoint, save_embeddings, save_text, save_transforms
)
from sampler import ChainSample
from utils.exceptions import NodeLookupError, ParseError


def test_text_round_trip():
    rng = np.random.default_rng(0)
    table = EmbeddingTable(rng.normal(size=(5, 3)), names=['a', 'b', 'c', 'dd', 'e e'])
    with tempfile.TemporaryDirectory() as tmp:
        first = save_text(table, Path(tmp) / 'emb.txt')
        lines = first.read_text(encoding='utf-8').splitlines()
        assert lines[0] == "5 3"
        loaded = load_text(first)
        assert loaded.names == table.names
        expected = np.array([[float(format(v, '.6g')) for v in row] for row in table.vectors])
        assert np.array_equal(loaded.vectors, expected)
        print("✓ Text format keeps 6 significant digits and names with spaces")

        binary = save_binary(loaded, Path(tmp) / 'emb.bin')
        again = save_text(load_binary(binary), Path(tmp) / 'again.txt')
        assert again.read_text(encoding='utf-8') == first.read_text(encoding='utf-8')
        print("✓ text → binary → text is lossless at 6 digits")


def test_binary_format():
    table = EmbeddingTable(np.arange(12, dtype=np.float32).reshape(4, 3), names=['w', 'x', 'y', 'z'])
    with tempfile.TemporaryDirectory() as tmp:
        path = save_binary(table, Path(tmp) / 'emb.bin')
        raw = path.read_bytes()
        count, dim = np.frombuffer(raw[:16], dtype='<u8')
        assert (count, dim) == (4, 3)
        assert len(raw) == 16 + 4 * 3 * 4
        loaded = load_embeddings(path)
        assert loaded.names == table.names
        assert np.array_equal(loaded.vectors, table.vectors)

        path.write_bytes(raw[:-4])
        try:
            load_binary(path)
            raise AssertionError("expected ParseError")
        except ParseError:
            pass
    print("✓ Binary header counts match the rows; truncation detected")


def test_empty_and_lookup():
    with tempfile.TemporaryDirectory() as tmp:
        path = save_embeddings(EmbeddingTable(np.zeros((0, 4))), Path(tmp) / 'empty.txt')
        assert path.read_text(encoding='utf-8') == "0 4\n"
        assert len(load_text(path)) == 0

        bad = Path(tmp) / 'bad.txt'
        bad.write_text("2 2\na 1 2\n", encoding='utf-8')
        try:
            load_text(bad)
            raise AssertionError("expected ParseError")
        except ParseError as e:
            assert 'found 1' in str(e)
    print("✓ Empty table writes header '0 d'")

    table = EmbeddingTable(np.eye(3), names=['paris', 'berlin', 'madrid'])
    assert table.index_of('berlin') == 1
    try:
        table.index_of('pariss')
        raise AssertionError("expected NodeLookupError")
    except NodeLookupError as e:
        assert 'paris' in str(e)
    print("✓ Unknown names list close matches")


def test_checkpoint_round_trip():
    model = HineModel.initialize(6, 3, dim=4, hidden=5, hidden_layers=2, max_chain_length=2, seed=3,
                                 node_names=list('abcdef'), edge_type_names=['x', 'y', 'z'])
    with tempfile.TemporaryDirectory() as tmp:
        save_checkpoint(model, Path(tmp) / 'ckpt', {'phase': 1, 'epoch': 4})
        restored, meta = load_checkpoint(Path(tmp) / 'ckpt')
        assert meta['phase'] == 1 and meta['epoch'] == 4
        assert restored.max_chain_length == 2
        assert restored.edge_type_names == ['x', 'y', 'z']
        assert restored.embeddings.names == list('abcdef')
        for (name, mine), (_, theirs) in zip(model.parameter_blocks(), restored.parameter_blocks()):
            assert mine.dtype == theirs.dtype and np.array_equal(mine, theirs), name
        print("✓ float32 checkpoint restores every block exactly")

        wide = HineModel.initialize(6, 2, dim=4, hidden=5, seed=4, dtype='float64', node_names=list('abcdef'))
        wide.phi[0, 0] = 1.0 + 2.0 ** -40  # not representable in float32
        save_checkpoint(wide, Path(tmp) / 'wide', {'phase': 1, 'epoch': 1})
        restored, meta = load_checkpoint(Path(tmp) / 'wide')
        assert meta['embedding_row_dtype'] == '<f8'
        assert restored.phi.dtype == np.float64
        assert restored.phi[0, 0] == 1.0 + 2.0 ** -40
        for (name, mine), (_, theirs) in zip(wide.parameter_blocks(), restored.parameter_blocks()):
            assert mine.dtype == theirs.dtype and np.array_equal(mine, theirs), name
        print("✓ float64 checkpoint keeps full precision")

        path = save_transforms(model.transforms, Path(tmp) / 'transforms.bin')
        raw = path.read_bytes()
        for corrupt in (raw[:-1], b'NOTMAGIC' + raw[8:], raw + b'\x00'):
            path.write_bytes(corrupt)
            try:
                load_transforms(path)
                raise AssertionError("expected ParseError")
            except ParseError:
                pass
    print("✓ Truncated, foreign and padded transform files rejected")


def test_negative_sampler():
    samples = [ChainSample(0, (0,), 1)] * 3 + [ChainSample(2, (0,), 1)]
    # endpoint counts: node 0 -> 3, node 1 -> 4, node 2 -> 1, node 3 -> 0
    sampler = NegSampler.from_samples(samples, num_nodes=4, neg=5)
    expected = np.array([3, 4, 1, 0], dtype=np.float64) ** 0.75
    expected /= expected.sum()
    assert np.allclose(sampler.probabilities, expected)

    draws = sampler.draw(np.random.default_rng(1), np.zeros(20_000, dtype=np.int64))
    assert draws.shape == (20_000, 5) and draws.dtype == np.int64
    freq = np.bincount(draws.ravel(), minlength=4) / draws.size
    assert np.all(np.abs(freq - expected) < 0.01)
    assert freq[3] == 0
    print(f"✓ Unigram^0.75 noise frequencies {np.round(freq, 3).tolist()}")

    uniform = NegSampler.from_samples(samples, num_nodes=4, neg=2, noise='uniform')
    assert np.allclose(uniform.probabilities, 0.25)

    types = np.array([0, 0, 1, 1])
    typed = NegSampler.from_samples(samples, num_nodes=4, neg=4, node_type_ids=types)
    targets = np.array([1, 2, 3, 0])
    drawn = typed.draw(np.random.default_rng(2), targets)
    for target, row in zip(targets, drawn):
        assert np.all(types[row] == types[target])
    print("✓ Typed negatives stay within the target's node type")

    a = NegSampler.from_samples(samples, 4, 5).draw(np.random.default_rng(7), np.zeros(10, dtype=np.int64))
    b = NegSampler.from_samples(samples, 4, 5).draw(np.random.default_rng(7), np.zeros(10, dtype=np.int64))
    assert np.array_equal(a, b)
    print("✓ Negative draws are deterministic per generator")


def main():
    """Run all tests."""
    print("\n" + "=" * 50)
    print("MODEL IO TESTS")
    print("=" * 50 + "\n")

    try:
        test_text_round_trip()
        test_binary_format()
        test_empty_and_lookup()
        test_checkpoint_round_trip()
        test_negative_sampler()

        print("\n✅ ALL MODEL IO TESTS PASSED!\n")
    except Exception as e:
        print(f"\n❌ TEST FAILED: {e}\n")
        raise


if __name__ == "__main__":
    main()
