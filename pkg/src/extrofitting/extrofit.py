"""Extrofitting: expand, transfer synonym knowledge, project back with LDA."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .embeddings import EmbeddingMatrix
from .errors import BadDimension, DegenerateLexicon, PartitionMismatch
from .lexicon import SynonymClasses
from .linalg import (
    DEFAULT_SHRINKAGE,
    WEIGHTINGS,
    LdaModel,
    accumulate_scatter,
    lda_fit,
    lda_transform,
)


@dataclass(frozen=True)
class ExtrofitConfig:
    """``out_dim=None`` means "same as the input dimension"."""

    n_expand: int = 1
    out_dim: int | None = None
    shrinkage: float = DEFAULT_SHRINKAGE
    weighting: str = "class-size"

    def __post_init__(self) -> None:
        if self.n_expand < 1:
            raise BadDimension(f"n_expand must be >= 1, got {self.n_expand}")
        if self.out_dim is not None and self.out_dim < 1:
            raise BadDimension(f"out_dim must be >= 1, got {self.out_dim}")
        if self.weighting not in WEIGHTINGS:
            raise ValueError(f"weighting must be one of {WEIGHTINGS}")
        if not 0.0 <= self.shrinkage <= 1.0:
            raise ValueError("shrinkage must be in [0, 1]")

    def resolve_out_dim(self, dim: int, n_classes: int) -> int:
        q = dim if self.out_dim is None else self.out_dim
        if q > dim + self.n_expand:
            raise BadDimension(f"out_dim {q} exceeds expanded dimension {dim + self.n_expand}")
        if q > n_classes - 1:
            raise BadDimension(f"out_dim {q} needs at least {q + 1} classes, have {n_classes}")
        return q


def representative(vector: np.ndarray) -> float:
    """The value used to fill expanded dimensions: the mean of the components."""
    return float(np.mean(vector))


def expand(m: EmbeddingMatrix, k: int = 1) -> EmbeddingMatrix:
    """Append ``k`` columns, each holding the row's mean."""
    if k < 1:
        raise BadDimension(f"k must be >= 1, got {k}")
    rep = m.data.mean(axis=1, keepdims=True)
    return m.with_data(np.hstack([m.data, np.repeat(rep, k, axis=1)]))


def transfer(m: EmbeddingMatrix, sc: SynonymClasses, k: int = 1) -> EmbeddingMatrix:
    """Overwrite the last ``k`` columns with the class average of the row means.

    ``m`` must come from :func:`expand`, so column ``D`` (the first appended
    one) still holds each word's own representative value.
    """
    if sc.vocab != m.vocab:
        raise PartitionMismatch("synonym classes do not cover the embedding vocabulary")
    if not 1 <= k < m.dim:
        raise BadDimension(f"cannot transfer {k} expanded columns of a {m.dim}-d matrix")
    base = m.dim - k
    rep = m.data[:, base]
    totals = np.bincount(sc.labels, weights=rep, minlength=sc.n_classes)
    class_rep = totals / sc.sizes
    out = np.array(m.data)
    out[:, base:] = class_rep[sc.labels][:, None]
    return m.with_data(out)


def extrofit(
    m: EmbeddingMatrix, sc: SynonymClasses, cfg: ExtrofitConfig | None = None
) -> tuple[EmbeddingMatrix, LdaModel]:
    """Enrich ``m`` with the synonym classes ``sc``.

    Returns the projected matrix (same vocabulary, ``cfg.out_dim`` columns,
    default ``m.dim``) and the fitted LDA model. LDA is fitted on every
    vocabulary row; words outside the lexicon are singleton classes.
    """
    cfg = cfg or ExtrofitConfig()
    if sc.vocab != m.vocab:
        raise PartitionMismatch("synonym classes do not cover the embedding vocabulary")
    if sc.n_classes < 2:
        raise DegenerateLexicon(f"need at least 2 synonym classes, got {sc.n_classes}")
    if sc.n_nonsingleton_classes == 0:
        raise DegenerateLexicon("lexicon links no two vocabulary words")
    out_dim = cfg.resolve_out_dim(m.dim, sc.n_classes)

    enriched = transfer(expand(m, cfg.n_expand), sc, cfg.n_expand)
    scatter = accumulate_scatter(enriched.data, sc.labels, cfg.weighting, sc.n_classes)
    model = lda_fit(scatter, out_dim, cfg.shrinkage)
    return m.with_data(lda_transform(model, enriched.data)), model
