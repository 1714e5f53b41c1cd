"""
Test script for the command-line surface.
Drives cli.run() in-process and checks exit codes, stdout and written files.
"""
import contextlib
import io
import sys
import tempfile
from pathlib import Path

sys.path.insert(0, str(Path(__file__).parent.parent))
sys.path.insert(0, str(Path(__file__).parent))

from cli import run
from graph import export_graph, load_graph
from helpers import planted_blocks, write_lines

TINY_MODEL = ['--dim', '4', '--hidden', '8', '--max-iterations', '2', '--convergence-tol', '0', '--seed', '1']


def run_captured(argv):
    """Run the CLI and return (exit code, stdout)."""
    out = io.StringIO()
    with contextlib.redirect_stdout(out), contextlib.redirect_stderr(io.StringIO()):
        code = run([str(a) for a in argv])
    return code, out.getvalue()


def write_fixture(tmp: Path):
    planted, blocks = planted_blocks(block_size=10, seed=3)
    edges = tmp / 'graph.tsv'
    export_graph(planted, edges)
    # isolated nodes do not survive the edge list
    graph = load_graph(edges)
    block_of = dict(zip(planted.nodes.names, blocks))
    labels = write_lines(tmp / 'labels.tsv', [f"{name}\tblock{block_of[name]}" for name in graph.nodes.names])
    return graph, edges, labels


def test_usage_errors():
    code, out = run_captured(['--help'])
    assert code == 0 and 'eval-rank' in out
    code, _ = run_captured(['train', '--help'])
    assert code == 0
    print("✓ --help exits 0")

    assert run_captured(['train', '--graph', 'g.tsv', '--out', 'e.txt', '--no-such-flag'])[0] == 1
    assert run_captured(['frobnicate'])[0] == 1
    assert run_captured(['train', '--graph', 'g.tsv'])[0] == 1
    assert run_captured(['train', '--graph', 'g.tsv', '--out', 'e.txt', '--neg', '0'])[0] == 1
    assert run_captured(['info', '--graph', 'g.tsv', '--threads', '0'])[0] == 1
    print("✓ Unknown flags, missing arguments and invalid values exit 1")


def test_data_errors():
    with tempfile.TemporaryDirectory() as tmp:
        tmp = Path(tmp)
        assert run_captured(['info', '--graph', tmp / 'missing.tsv'])[0] == 2
        bad = write_lines(tmp / 'bad.tsv', ["A\twrite"])
        assert run_captured(['train', '--graph', bad, '--out', tmp / 'e.txt'])[0] == 2
    print("✓ Unreadable and malformed inputs exit 2")


def test_sample_train_evaluate():
    with tempfile.TemporaryDirectory() as tmp:
        tmp = Path(tmp)
        graph, edges, labels = write_fixture(tmp)

        code, out = run_captured(['info', '--graph', edges])
        assert code == 0
        assert f"num_nodes: {graph.num_nodes}" in out
        assert f"num_edges: {graph.num_edges}" in out
        print("✓ info prints graph statistics")

        samples = tmp / 'samples.tsv'
        code, out = run_captured(['sample', '--graph', edges, '--mode', 'edges', '--out', samples, '--seed', '1'])
        assert code == 0 and samples.is_file()
        assert out.startswith(f"{graph.num_edges} samples")
        print("✓ sample writes edge samples")

        embeddings = tmp / 'emb.txt'
        code, out = run_captured(['train', '--graph', edges, '--samples', samples, '--algorithm', 'ghine',
                                  '--out', embeddings, *TINY_MODEL])
        assert code == 0, out
        header = embeddings.read_text(encoding='utf-8').splitlines()[0]
        assert header == f"{graph.num_nodes} 4"
        print(f"✓ train: {out.strip()}")

        again = tmp / 'emb2.txt'
        assert run_captured(['train', '--graph', edges, '--samples', samples, '--algorithm', 'ghine',
                             '--out', again, *TINY_MODEL])[0] == 0
        assert again.read_bytes() == embeddings.read_bytes()
        print("✓ Same flags and seed write identical embeddings")

        code, out = run_captured(['eval-rank', '--embeddings', embeddings, '--labels', labels, '--k', '100',
                                  '--report', tmp / 'rank.txt'])
        assert code == 0
        assert 'map_at_100 = ' in out and 'map_at_100_dot = ' in out
        assert (tmp / 'rank.txt').read_text(encoding='utf-8') == out
        print("✓ eval-rank prints map_at_100")

        for command, key in (('eval-cluster', 'nmi = '), ('eval-classify', 'micro_f1 = ')):
            code, out = run_captured([command, '--embeddings', embeddings, '--labels', labels, '--seed', '0'])
            assert code == 0 and key in out, (command, out)
        code, out = run_captured(['eval-link', '--embeddings', embeddings, '--graph', edges])
        assert code == 0 and 'link_auc = ' in out
        code, out = run_captured(['nn', '--embeddings', embeddings, '--query', graph.nodes.names[0], '--k', '3'])
        assert code == 0 and len(out.splitlines()) == 3
        print("✓ eval-cluster, eval-classify, eval-link and nn run")

        unknown = write_lines(tmp / 'unknown.tsv', ["nobody\tblock0"])
        assert run_captured(['eval-rank', '--embeddings', embeddings, '--labels', unknown])[0] == 2


def test_export_and_resume():
    with tempfile.TemporaryDirectory() as tmp:
        tmp = Path(tmp)
        _, edges, _ = write_fixture(tmp)
        embeddings = tmp / 'emb.txt'
        checkpoints = tmp / 'ckpt'
        code, _ = run_captured(['train', '--graph', edges, '--algorithm', 'ghine', '--out', embeddings,
                                '--checkpoint-dir', checkpoints, *TINY_MODEL])
        assert code == 0
        assert (checkpoints / 'phase1' / 'epoch_2' / 'meta').is_file()

        binary = tmp / 'emb.bin'
        assert run_captured(['export', '--embeddings', embeddings, '--out', binary, '--format', 'binary'])[0] == 0
        back = tmp / 'back.txt'
        assert run_captured(['export', '--embeddings', binary, '--out', back])[0] == 0
        assert back.read_text(encoding='utf-8') == embeddings.read_text(encoding='utf-8')
        print("✓ text → binary → text export is lossless")

        from_checkpoint = tmp / 'ckpt.txt'
        assert run_captured(['export', '--checkpoint', checkpoints, '--out', from_checkpoint])[0] == 0
        assert from_checkpoint.read_text(encoding='utf-8') == embeddings.read_text(encoding='utf-8')
        print("✓ Export from a checkpoint root uses its newest checkpoint")

        resumed = tmp / 'resumed.txt'
        code, out = run_captured(['train', '--graph', edges, '--algorithm', 'ghine', '--out', resumed,
                                  '--resume', checkpoints / 'phase1' / 'epoch_1', *TINY_MODEL])
        assert code == 0, out
        assert resumed.read_bytes() == embeddings.read_bytes()
        print("✓ Resuming from epoch 1 reproduces the full run")


def test_pipeline_is_reproducible():
    with tempfile.TemporaryDirectory() as tmp:
        tmp = Path(tmp)
        _, edges, labels = write_fixture(tmp)
        outputs = []
        for attempt in ('a', 'b'):
            samples, embeddings, report = tmp / f'samples_{attempt}.tsv', tmp / f'emb_{attempt}.txt', tmp / f'rank_{attempt}.txt'
            code, _ = run_captured(['sample', '--graph', edges, '--mode', 'walks', '--out', samples,
                                    '--walks-per-node', '3', '--max-walk-length', '6', '--max-chain-length', '2',
                                    '--min-count', '0', '--seed', '7'])
            assert code == 0
            code, out = run_captured(['train', '--graph', edges, '--samples', samples, '--algorithm', 'ahine',
                                      '--pretrain-epochs', '1', '--max-chain-length', '2', '--out', embeddings,
                                      *TINY_MODEL])
            assert code == 0, out
            code, _ = run_captured(['eval-rank', '--embeddings', embeddings, '--labels', labels, '--k', '5',
                                    '--report', report])
            assert code == 0
            outputs.append([samples.read_bytes(), embeddings.read_bytes(), report.read_bytes()])
        for name, first, second in zip(('samples', 'embeddings', 'report'), *outputs):
            assert first and first == second, name
    print("✓ sample → train → eval-rank twice with one seed gives byte-identical files")


def test_eval_rank_label_order():
    with tempfile.TemporaryDirectory() as tmp:
        tmp = Path(tmp)
        # n1 and n2 tie for every query; n1 comes first in the embedding file but has the other class
        embeddings = write_lines(tmp / 'emb.txt', ["3 2", "q 1 0", "n1 0.3 1", "n2 0.3 1"])
        for lines in (["q\tX", "n1\tY", "n2\tX"], ["q\tX", "n2\tX", "n1\tY"]):
            labels = write_lines(tmp / 'labels.tsv', lines)
            code, out = run_captured(['eval-rank', '--embeddings', embeddings, '--labels', labels, '--k', '1'])
            assert code == 0
            assert 'map_at_1 = 0.000000' in out.splitlines(), out
            assert 'map_at_1_dot = 0.000000' in out.splitlines(), out
    print("✓ eval-rank output does not depend on label file order")


def test_numerical_abort_exit_code():
    with tempfile.TemporaryDirectory() as tmp:
        tmp = Path(tmp)
        _, edges, _ = write_fixture(tmp)
        code, _ = run_captured(['train', '--graph', edges, '--algorithm', 'ghine', '--out', tmp / 'e.txt',
                                '--eta-embed', '1e30', '--eta-dnn', '1e30', '--max-iterations', '5'])
        assert code == 3
    print("✓ Divergent training exits 3")


def main():
    """Run all tests."""
    print("\n" + "=" * 50)
    print("CLI TESTS")
    print("=" * 50 + "\n")

    try:
        test_usage_errors()
        test_data_errors()
        test_sample_train_evaluate()
        test_export_and_resume()
        test_pipeline_is_reproducible()
        test_eval_rank_label_order()
        test_numerical_abort_exit_code()

        print("\n✅ ALL CLI TESTS PASSED!\n")
    except Exception as e:
        print(f"\n❌ TEST FAILED: {e}\n")
        raise


if __name__ == "__main__":
    main()
