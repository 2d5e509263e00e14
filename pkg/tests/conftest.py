import io

import numpy as np
import pytest

from extrofitting import EmbeddingMatrix, SynonymGraph
from extrofitting.evaluation import cosine


def planted_space(seed=0, dim=12, n_classes=20, class_size=5, n_single=100, noise=1.0):
    """200-word space (by default) with ``n_classes`` planted synonym groups.

    Group members are a shared random centre plus isotropic noise; the rest
    are unrelated words with matching marginal variance. The lexicon is one
    star per group, as a ``head syn1 syn2 ...`` line would produce.
    """
    rng = np.random.default_rng(seed)
    words, rows, pairs = [], [], []
    for c in range(n_classes):
        centre = rng.normal(size=dim)
        for s in range(class_size):
            words.append(f"c{c}m{s}")
            rows.append(centre + noise * rng.normal(size=dim))
            if s:
                pairs.append((f"c{c}m0", f"c{c}m{s}"))
    for i in range(n_single):
        words.append(f"solo{i}")
        rows.append(np.sqrt(1 + noise**2) * rng.normal(size=dim))
    perm = rng.permutation(len(words))
    m = EmbeddingMatrix.from_rows([words[i] for i in perm], np.asarray(rows)[perm])
    return m, SynonymGraph.from_pairs(pairs)


def mean_edge_cosine(m, graph):
    return float(np.mean([cosine(m.lookup(a), m.lookup(b)) for a, b in sorted(graph.edges)]))


def lexicon_text(graph):
    """Lexicon file content for ``graph``, one line per edge."""
    return "".join(f"{a} {b}\n" for a, b in sorted(graph.edges))


def as_stream(text):
    return io.BytesIO(text.encode("utf-8"))


@pytest.fixture
def planted():
    return planted_space()
