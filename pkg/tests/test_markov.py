import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from semflow.community import Partition
from semflow.errors import EmptyChain, InvalidThreshold, PartitionMismatch
from semflow.markov import (
    CommunitySequence,
    build_markov,
    community_sequence,
    prune,
    read_chain,
    write_chain,
)

A, B, C = 0, 1, 2


def seq(labels):
    return CommunitySequence(doc_id="d", labels=list(labels))


def brute_force_counts(labels, n_states):
    """Oracle: explicit pair-count loop."""
    counts = np.zeros((n_states, n_states), dtype=np.int64)
    for t in range(len(labels) - 1):
        counts[labels[t], labels[t + 1]] += 1
    return counts


def test_community_sequence_reads_partition_in_node_order():
    part = Partition(np.array([A, B, C, B]))
    got = community_sequence("d", part, n_sentences=4)
    assert got.labels == [A, B, C, B]


def test_community_sequence_mismatch():
    part = Partition(np.array([0, 1]))
    with pytest.raises(PartitionMismatch):
        community_sequence("d", part, n_sentences=3)


def test_build_markov_figure_sequence():
    chain = build_markov(seq([A, B, C, B]))
    assert chain.probs[A, B] == 1.0
    assert chain.probs[B, C] == 1.0
    assert chain.probs[C, B] == 1.0
    expected = np.zeros((3, 3))
    expected[A, B] = expected[B, C] = expected[C, B] = 1.0
    np.testing.assert_array_equal(chain.probs, expected)


def test_build_markov_self_transition_kept():
    chain = build_markov(seq([A, A, B]))
    assert chain.probs[A, A] == 0.5
    assert chain.probs[A, B] == 0.5


def test_build_markov_alternation():
    chain = build_markov(seq([A, B, A, B, A]))
    assert chain.probs[A, B] == 1.0
    assert chain.probs[B, A] == 1.0


def test_build_markov_too_short():
    with pytest.raises(EmptyChain):
        build_markov(seq([A]))
    with pytest.raises(EmptyChain):
        build_markov(seq([]))


def test_build_markov_zero_rows_stay_zero():
    chain = build_markov(seq([A, B]), n_states=3)
    np.testing.assert_array_equal(chain.probs[B], 0.0)
    np.testing.assert_array_equal(chain.probs[C], 0.0)


@settings(max_examples=60, deadline=None)
@given(st.lists(st.integers(min_value=0, max_value=5), min_size=2, max_size=60))
def test_build_markov_matches_bruteforce(labels):
    chain = build_markov(seq(labels))
    np.testing.assert_array_equal(chain.counts, brute_force_counts(labels, chain.n_states))
    assert chain.counts.sum() == len(labels) - 1
    row_sums = chain.probs.sum(axis=1)
    for state in range(chain.n_states):
        if chain.counts[state].sum() > 0:
            assert row_sums[state] == pytest.approx(1.0, abs=1e-9)
        else:
            assert row_sums[state] == 0.0


def test_prune_thresholds():
    chain = build_markov(seq([A, B, A, B, A, A, A, C, B]))
    # row A: A->B 2/4, A->A 1/4, A->C 1/4
    pruned = prune(chain, 0.3)
    assert pruned.probs[A, B] == 0.5
    assert pruned.probs[A, A] == 0.0
    assert pruned.probs[A, C] == 0.0
    assert pruned.counts[A, A] == 0
    # survivors keep their probabilities: no renormalization
    assert pruned.probs[A].sum() == 0.5


def test_prune_zero_is_identity():
    chain = build_markov(seq([A, B, C, B, A]))
    pruned = prune(chain, 0.0)
    np.testing.assert_array_equal(pruned.probs, chain.probs)
    np.testing.assert_array_equal(pruned.counts, chain.counts)


def test_prune_keeps_exact_boundary():
    chain = build_markov(seq([A, B, C, B]))
    pruned = prune(chain, 1.0)
    assert pruned.probs[A, B] == 1.0  # strict < removal: P == threshold survives


def test_prune_invalid_threshold():
    chain = build_markov(seq([A, B]))
    for bad in (-0.1, 1.1):
        with pytest.raises(InvalidThreshold):
            prune(chain, bad)


@settings(max_examples=40, deadline=None)
@given(
    st.lists(st.integers(min_value=0, max_value=4), min_size=2, max_size=40),
    st.floats(min_value=0.0, max_value=1.0),
    st.floats(min_value=0.0, max_value=1.0),
)
def test_prune_monotone_and_composable(labels, t1, t2):
    chain = build_markov(seq(labels))
    p1 = prune(chain, t1)
    p2 = prune(chain, t2)
    assert np.count_nonzero(prune(chain, max(t1, t2)).probs) <= np.count_nonzero(
        prune(chain, min(t1, t2)).probs
    )
    composed = prune(p1, t2)
    direct = prune(chain, max(t1, t2))
    np.testing.assert_array_equal(composed.probs, direct.probs)
    np.testing.assert_array_equal(composed.counts, direct.counts)
    assert p1.probs.min() >= 0.0 and p2.probs.max() <= 1.0


def test_chain_export_roundtrip(tmp_path):
    chain = build_markov(seq([A, B, C, B, A, A]))
    path = tmp_path / "chain.txt"
    write_chain(chain, path)
    loaded = read_chain(path)
    np.testing.assert_array_equal(loaded.counts, chain.counts)
    np.testing.assert_allclose(loaded.probs, chain.probs, atol=1e-8)
    header = path.read_text().splitlines()[0]
    assert header == f"{chain.n_states} {int(chain.counts.sum())}"
