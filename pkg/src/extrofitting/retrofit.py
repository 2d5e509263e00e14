"""Retrofitting baseline: iteratively pull each vector toward its lexicon neighbours."""
from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np

from .embeddings import EmbeddingMatrix
from .errors import NonFiniteUpdate, ShapeMismatch, UnknownToken
from .lexicon import SynonymGraph

BETA_MODES = ("inverse-degree", "constant")


@dataclass(frozen=True)
class RetrofitConfig:
    alpha: float = 1.0
    beta_mode: str = "inverse-degree"
    iterations: int = 10
    convergence_eps: float | None = None

    def __post_init__(self) -> None:
        if self.iterations < 1:
            raise ValueError(f"iterations must be >= 1, got {self.iterations}")
        if not self.alpha > 0:
            raise ValueError(f"alpha must be positive, got {self.alpha}")
        if self.beta_mode not in BETA_MODES:
            raise ValueError(f"beta_mode must be one of {BETA_MODES}")

    def beta(self, degree: int) -> float:
        return 1.0 / degree if self.beta_mode == "inverse-degree" else 1.0


def _neighbor_index(m: EmbeddingMatrix, g: SynonymGraph) -> list[tuple[int, np.ndarray]]:
    index = m.vocab.index
    for token in g.tokens:
        if token not in index:
            raise UnknownToken(token)
    out = []
    for i, word in enumerate(m.vocab.words):
        nbrs = g.neighbors(word)
        if nbrs:
            out.append((i, np.array(sorted(index[w] for w in nbrs), dtype=np.int64)))
    return out


def retrofit(
    m: EmbeddingMatrix,
    g: SynonymGraph,
    cfg: RetrofitConfig | None = None,
    on_sweep: Callable[[int, np.ndarray], None] | None = None,
) -> EmbeddingMatrix:
    """Run ``cfg.iterations`` in-place sweeps of the online update.

    Each sweep visits words in vocabulary order and sets

        q_hat_i = (sum_j beta_ij q_hat_j + alpha q_i) / (sum_j beta_ij + alpha)

    using the already-updated values of words earlier in the sweep. Words
    without neighbours keep their original vector. ``on_sweep(k, data)`` is
    called after sweep ``k`` (1-based) with a read-only view of the current
    vectors.
    """
    cfg = cfg or RetrofitConfig()
    original = m.data
    current = np.array(original)
    neighbors = _neighbor_index(m, g)
    alpha = cfg.alpha

    for sweep in range(1, cfg.iterations + 1):
        before = current.copy() if cfg.convergence_eps is not None else None
        for i, nbrs in neighbors:
            beta = cfg.beta(len(nbrs))
            with np.errstate(over="ignore", invalid="ignore"):
                new = (beta * current[nbrs].sum(axis=0) + alpha * original[i]) / (beta * len(nbrs) + alpha)
            if not np.isfinite(new).all():
                raise NonFiniteUpdate(f"non-finite vector for {m.vocab[i]!r} in sweep {sweep}")
            current[i] = new
        if on_sweep is not None:
            view = current.view()
            view.setflags(write=False)
            on_sweep(sweep, view)
        if before is not None:
            change = np.linalg.norm(current - before, axis=1).mean()
            if change < cfg.convergence_eps:
                break
    return m.with_data(current)


def retrofit_objective(
    m_hat: EmbeddingMatrix,
    m: EmbeddingMatrix,
    g: SynonymGraph,
    cfg: RetrofitConfig | None = None,
) -> float:
    """Retrofitting loss of ``m_hat`` relative to the original vectors ``m``.

    Sums ``alpha * |q_hat_i - q_i|^2`` over all words and
    ``beta_ij * |q_hat_i - q_hat_j|^2`` over every word's neighbours, so each
    edge is counted once from each endpoint.
    """
    cfg = cfg or RetrofitConfig()
    if m_hat.vocab != m.vocab or m_hat.dim != m.dim:
        raise ShapeMismatch("m_hat and m must share vocabulary and dimension")
    index = m.vocab.index
    total = cfg.alpha * float(((m_hat.data - m.data) ** 2).sum())
    for a, b in sorted(g.edges):
        if a not in index:
            raise UnknownToken(a)
        if b not in index:
            raise UnknownToken(b)
        ia, ib = index[a], index[b]
        d2 = float(((m_hat.data[ia] - m_hat.data[ib]) ** 2).sum())
        total += (cfg.beta(g.degree(a)) + cfg.beta(g.degree(b))) * d2
    return total


def retrofit_energy(
    m_hat: EmbeddingMatrix,
    m: EmbeddingMatrix,
    g: SynonymGraph,
    cfg: RetrofitConfig | None = None,
) -> float:
    """The function each online update minimizes exactly, one word at a time.

    ``sum_i (alpha / beta_i) |q_hat_i - q_i|^2 + sum_{i<j, (i,j) in E} |q_hat_i - q_hat_j|^2``
    where ``beta_i`` is word ``i``'s neighbour weight. Every in-place update
    is a block coordinate minimization step of this energy, so it never
    increases across sweeps. :func:`retrofit_objective` counts each edge
    from both endpoints and lacks that guarantee.
    """
    cfg = cfg or RetrofitConfig()
    if m_hat.vocab != m.vocab or m_hat.dim != m.dim:
        raise ShapeMismatch("m_hat and m must share vocabulary and dimension")
    index = m.vocab.index
    anchor = ((m_hat.data - m.data) ** 2).sum(axis=1)
    total = 0.0
    for i, word in enumerate(m.vocab.words):
        deg = g.degree(word)
        if deg:
            total += cfg.alpha / cfg.beta(deg) * float(anchor[i])
    for a, b in sorted(g.edges):
        if a not in index or b not in index:
            raise UnknownToken(a if a not in index else b)
        total += float(((m_hat.data[index[a]] - m_hat.data[index[b]]) ** 2).sum())
    return total
