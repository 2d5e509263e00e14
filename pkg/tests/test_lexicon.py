import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from extrofitting import SynonymGraph, Vocabulary, build_classes, class_members, load_lexicon
from extrofitting.errors import EmptyInput, UnknownToken

from conftest import as_stream

VOCAB = Vocabulary(["adore", "love", "worship", "hate", "car"])


def test_line_links_headword_to_each_synonym():
    g = load_lexicon(as_stream("adore love worship\n"), VOCAB)
    assert g.edges == {("adore", "love"), ("adore", "worship")}
    assert g.n_dropped_oov == 0
    assert g.neighbors("adore") == {"love", "worship"}
    assert g.neighbors("love") == {"adore"}


def test_out_of_vocabulary_edges_are_dropped_and_counted():
    g = load_lexicon(as_stream("adore love\n"), Vocabulary(["adore", "hate"]))
    assert len(g) == 0
    assert g.n_dropped_oov == 1


def test_repeated_lines_are_idempotent():
    once = load_lexicon(as_stream("adore love worship\n"), VOCAB)
    twice = load_lexicon(as_stream("adore love worship\nadore love worship\nlove adore\n"), VOCAB)
    assert once.edges == twice.edges


def test_headword_only_line_and_lowercasing():
    g = load_lexicon(as_stream("car\nADORE Love\n"), VOCAB, lowercase=True)
    assert g.edges == {("adore", "love")}


def test_empty_lexicon():
    with pytest.raises(EmptyInput):
        load_lexicon(as_stream("\n  \n"), VOCAB)


def test_components_with_singletons():
    vocab = Vocabulary(["a", "b", "c", "d"])
    sc = build_classes(SynonymGraph.from_pairs([("a", "b")]), vocab)
    assert sc.n_classes == 3
    assert sc.classes == [["a", "b"], ["c"], ["d"]]
    assert sc.n_nonsingleton_classes == 1
    assert sc.n_covered_words == 2


def test_components_are_transitive():
    vocab = Vocabulary(["a", "b", "c"])
    sc = build_classes(SynonymGraph.from_pairs([("a", "b"), ("b", "c")]), vocab)
    assert sc.n_classes == 1
    assert sc.classes == [["a", "b", "c"]]


def test_empty_graph_gives_singletons():
    vocab = Vocabulary([f"w{i}" for i in range(7)])
    sc = build_classes(SynonymGraph(frozenset()), vocab)
    assert sc.n_classes == 7
    assert list(sc.labels) == list(range(7))


def test_ids_follow_first_vocabulary_appearance():
    vocab = Vocabulary(["x", "p", "y", "q"])
    sc = build_classes(SynonymGraph.from_pairs([("q", "p"), ("y", "x")]), vocab)
    assert list(sc.labels) == [0, 1, 0, 1]


def test_graph_token_outside_vocab():
    with pytest.raises(UnknownToken):
        build_classes(SynonymGraph.from_pairs([("a", "zzz")]), Vocabulary(["a", "b"]))


def test_class_members():
    vocab = Vocabulary(["a", "b", "c"])
    sc = build_classes(SynonymGraph.from_pairs([("a", "b")]), vocab)
    assert class_members(sc, "a") == ["a", "b"]
    assert class_members(sc, "c") == ["c"]
    with pytest.raises(UnknownToken):
        class_members(sc, "nope")


WORDS = [f"w{i}" for i in range(30)]


@settings(max_examples=80, deadline=None)
@given(
    edges=st.lists(st.tuples(st.sampled_from(WORDS), st.sampled_from(WORDS)), max_size=40),
    seed=st.integers(0, 2**16),
)
def test_partition_properties(edges, seed):
    vocab = Vocabulary(WORDS)
    lines = [f"{a} {b}\n" for a, b in edges]
    g = load_lexicon(as_stream("".join(lines) or "w0\n"), vocab)
    sc = build_classes(g, vocab)

    # partition: every word exactly once, ids dense
    members = [w for cls in sc.classes for w in cls]
    assert sorted(members) == sorted(WORDS)
    assert set(sc.labels.tolist()) == set(range(sc.n_classes))
    # edges never cross classes
    for a, b in g.edges:
        assert sc.class_of(a) == sc.class_of(b)
    # determinism
    assert (build_classes(g, vocab).labels == sc.labels).all()
    # permuting lexicon lines leaves the partition unchanged
    random.Random(seed).shuffle(lines)
    g2 = load_lexicon(as_stream("".join(lines) or "w0\n"), vocab)
    assert build_classes(g2, vocab).as_sets() == sc.as_sets()
