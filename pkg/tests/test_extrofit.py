import numpy as np
import pytest

from extrofitting import (
    EmbeddingMatrix,
    ExtrofitConfig,
    SynonymGraph,
    Vocabulary,
    build_classes,
    expand,
    extrofit,
    representative,
    transfer,
)
from extrofitting.errors import BadDimension, DegenerateLexicon, PartitionMismatch
from extrofitting.linalg import lda_transform

from conftest import mean_edge_cosine, planted_space


@pytest.mark.parametrize("vec, expected", [((1, 2, 3), 2.0), ((0, 0, 0, 0), 0.0), ((-1, 1), 0.0)])
def test_representative(vec, expected):
    assert representative(np.array(vec, dtype=float)) == expected


@pytest.mark.parametrize(
    "row, k, expected",
    [((1, 2, 3), 1, (1, 2, 3, 2)), ((1, 3), 2, (1, 3, 2, 2)), ((0, 0, 0), 4, (0,) * 7)],
)
def test_expand(row, k, expected):
    out = expand(EmbeddingMatrix.from_rows(["w"], [row]), k)
    np.testing.assert_array_equal(out.data[0], expected)
    assert out.vocab.words == ("w",)


def test_expand_rejects_zero():
    with pytest.raises(BadDimension):
        expand(EmbeddingMatrix.from_rows(["w"], [[1.0]]), 0)


def classes_for(words, pairs):
    return build_classes(SynonymGraph.from_pairs(pairs), Vocabulary(words))


def test_transfer_averages_within_classes():
    # representative values a=2, b=4, c=7
    m = expand(EmbeddingMatrix.from_rows(["a", "b", "c"], [[1, 3], [3, 5], [7, 7]]), 1)
    sc = classes_for(m.vocab.words, [("a", "b")])
    out = transfer(m, sc, 1)
    np.testing.assert_array_equal(out.data[:, 2], [3, 3, 7])
    np.testing.assert_array_equal(out.data[:, :2], m.data[:, :2])


def test_transfer_three_members_and_multiple_columns():
    m = expand(EmbeddingMatrix.from_rows(["a", "b", "c"], [[0, 0], [2, 4], [6, 6]]), 2)
    out = transfer(m, classes_for(m.vocab.words, [("a", "b"), ("c", "b")]), 2)
    np.testing.assert_array_equal(out.data[:, 2:], np.full((3, 2), 3.0))


def test_transfer_equalization_is_exact(planted):
    m, g = planted
    sc = build_classes(g, m.vocab)
    out = transfer(expand(m, 3), sc, 3)
    appended = out.data[:, m.dim:]
    for members in sc.classes:
        rows = appended[[m.vocab.index[w] for w in members]]
        assert np.all(rows == rows[0, 0])


def test_transfer_partition_mismatch(planted):
    m, g = planted
    other = build_classes(SynonymGraph(frozenset()), Vocabulary(["x", "y"]))
    with pytest.raises(PartitionMismatch):
        transfer(expand(m, 1), other, 1)


def test_extrofit_shape_and_linearity(planted):
    m, g = planted
    sc = build_classes(g, m.vocab)
    out, model = extrofit(m, sc)
    assert out.vocab == m.vocab
    assert out.dim == m.dim == model.out_dim
    assert np.isfinite(out.data).all()

    enriched = transfer(expand(m, 1), sc, 1)
    np.testing.assert_allclose(out.data, enriched.data @ model.transform, rtol=0, atol=1e-10)
    np.testing.assert_array_equal(out.data, lda_transform(model, enriched.data))


@pytest.mark.parametrize("seed", range(5))
@pytest.mark.parametrize("weighting", ["class-size", "unweighted"])
def test_synonym_contraction(seed, weighting):
    m, g = planted_space(seed)
    out, _ = extrofit(m, build_classes(g, m.vocab), ExtrofitConfig(weighting=weighting))
    assert mean_edge_cosine(out, g) > mean_edge_cosine(m, g)


def test_identical_pair_stays_identical():
    rng = np.random.default_rng(0)
    rows = rng.normal(size=(30, 4))
    rows[7] = rows[3]
    words = [f"w{i}" for i in range(30)]
    m = EmbeddingMatrix.from_rows(words, rows)
    out, _ = extrofit(m, classes_for(words, [("w3", "w7")]))
    np.testing.assert_array_equal(out.data[3], out.data[7])


def test_words_outside_lexicon_are_projected(planted):
    m, g = planted
    out, _ = extrofit(m, build_classes(g, m.vocab))
    solo = [i for i, w in enumerate(m.vocab.words) if w.startswith("solo")]
    assert np.isfinite(out.data[solo]).all()
    assert not np.allclose(out.data[solo], m.data[solo])


def test_custom_dimensions(planted):
    m, g = planted
    sc = build_classes(g, m.vocab)
    out, model = extrofit(m, sc, ExtrofitConfig(n_expand=3, out_dim=15))
    assert out.dim == 15 and model.in_dim == m.dim + 3
    with pytest.raises(BadDimension):
        extrofit(m, sc, ExtrofitConfig(n_expand=1, out_dim=m.dim + 2))


def test_degenerate_lexicon(planted):
    m, _ = planted
    with pytest.raises(DegenerateLexicon):
        extrofit(m, build_classes(SynonymGraph(frozenset()), m.vocab))


def test_too_few_classes_for_out_dim():
    words = ["a", "b", "c", "d"]
    m = EmbeddingMatrix.from_rows(words, np.eye(4))
    with pytest.raises(BadDimension):
        extrofit(m, classes_for(words, [("a", "b")]))  # 3 classes, out_dim 4


def test_config_validation():
    with pytest.raises(BadDimension):
        ExtrofitConfig(n_expand=0)
    with pytest.raises(ValueError):
        ExtrofitConfig(weighting="bogus")
    with pytest.raises(ValueError):
        ExtrofitConfig(shrinkage=-0.1)
