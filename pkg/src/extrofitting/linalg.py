"""Many-class linear discriminant analysis on dense data.

The generalized problem ``S_B u = e S_W u`` is solved by whitening with the
Cholesky factor of the (shrunk) within-class scatter, which keeps everything
symmetric. Accumulation is in float64 and runs over fixed-size row chunks in
a fixed order, so results are reproducible bit for bit.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy import linalg as sla

from .errors import (
    BadDimension,
    DegenerateInput,
    LabelOutOfRange,
    RankDeficient,
    SingularDenominator,
)

WEIGHTINGS = ("class-size", "unweighted")
DEFAULT_SHRINKAGE = 1e-4
CHUNK_ROWS = 1 << 15

# Ridge escalation, relative to trace(S_W) / F.
_RIDGE_START = 1e-8
_RIDGE_MAX = 1e-2


@dataclass(frozen=True, eq=False)
class ScatterPair:
    s_b: np.ndarray
    s_w: np.ndarray
    grand_mean: np.ndarray
    n_samples: int
    n_classes: int
    weighting: str = "class-size"

    @property
    def dim(self) -> int:
        return self.s_w.shape[0]


@dataclass(frozen=True, eq=False)
class LdaModel:
    """Fitted projection. ``transform`` is ``in_dim x out_dim``; columns are
    the discriminant directions, ordered by descending eigenvalue."""

    transform: np.ndarray
    eigenvalues: np.ndarray
    shrinkage: float
    ridge: float
    in_dim: int
    out_dim: int

    def within_metric(self, scatter: ScatterPair) -> np.ndarray:
        """The regularized within-class scatter this model was solved against."""
        return shrink_within(scatter.s_w, self.shrinkage) + self.ridge * np.eye(self.in_dim)


def _sym(a: np.ndarray) -> np.ndarray:
    return 0.5 * (a + a.T)


def accumulate_scatter(
    data: np.ndarray,
    labels: np.ndarray,
    weighting: str = "class-size",
    n_classes: int | None = None,
) -> ScatterPair:
    """Between- and within-class scatter of ``data`` under ``labels``.

    ``weighting="class-size"`` gives ``S_B = sum_c N_c (mu_c - mu)(mu_c - mu)^T``
    so that ``S_B + S_W`` is the total scatter; ``"unweighted"`` drops the
    ``N_c`` factor. Singleton classes add nothing to ``S_W`` and are handled
    row-wise for ``S_B`` (their mean is the row itself), so the cost of the
    many singleton classes of a large vocabulary stays linear.
    """
    if weighting not in WEIGHTINGS:
        raise ValueError(f"weighting must be one of {WEIGHTINGS}, not {weighting!r}")
    x = np.asarray(data, dtype=np.float64)
    if x.ndim != 2 or x.shape[1] < 1:
        raise BadDimension(f"data must be n x F with F >= 1, got shape {x.shape}")
    n, dim = x.shape
    labels = np.asarray(labels)
    if labels.shape != (n,):
        raise BadDimension(f"{labels.shape[0] if labels.ndim else 0} labels for {n} rows")
    if n < 2:
        raise DegenerateInput("need at least 2 samples")
    if not np.issubdtype(labels.dtype, np.integer):
        raise LabelOutOfRange("labels must be integers")
    if n_classes is None:
        n_classes = int(labels.max()) + 1
    if labels.min() < 0 or labels.max() >= n_classes:
        raise LabelOutOfRange(f"labels must lie in [0, {n_classes})")

    counts = np.bincount(labels, minlength=n_classes)
    n_present = int((counts > 0).sum())
    if n_present < 2:
        raise DegenerateInput(f"need at least 2 classes, got {n_present}")

    mean = np.zeros(dim)
    for start in range(0, n, CHUNK_ROWS):
        mean += x[start:start + CHUNK_ROWS].sum(axis=0)
    mean /= n

    row_in_group = counts[labels] > 1
    single_rows = np.flatnonzero(~row_in_group)
    group_rows = np.flatnonzero(row_in_group)

    # class means for multi-member classes only
    group_ids = np.flatnonzero(counts > 1)
    compact = np.full(n_classes, -1, dtype=np.int64)
    compact[group_ids] = np.arange(group_ids.size)
    group_sums = np.zeros((group_ids.size, dim))
    for start in range(0, group_rows.size, CHUNK_ROWS):
        idx = group_rows[start:start + CHUNK_ROWS]
        np.add.at(group_sums, compact[labels[idx]], x[idx])
    group_means = group_sums / counts[group_ids][:, None]

    s_w = np.zeros((dim, dim))
    for start in range(0, group_rows.size, CHUNK_ROWS):
        idx = group_rows[start:start + CHUNK_ROWS]
        resid = x[idx] - group_means[compact[labels[idx]]]
        s_w += resid.T @ resid

    s_b = np.zeros((dim, dim))
    for start in range(0, single_rows.size, CHUNK_ROWS):
        dev = x[single_rows[start:start + CHUNK_ROWS]] - mean
        s_b += dev.T @ dev
    dev = group_means - mean
    if weighting == "class-size":
        s_b += (dev * counts[group_ids][:, None]).T @ dev
    else:
        s_b += dev.T @ dev

    return ScatterPair(_sym(s_b), _sym(s_w), mean, n, n_present, weighting)


def shrink_within(s_w: np.ndarray, shrinkage: float) -> np.ndarray:
    """``(1 - shrinkage) S_W + shrinkage * (trace(S_W) / F) I``."""
    dim = s_w.shape[0]
    target = np.trace(s_w) / dim
    return (1.0 - shrinkage) * s_w + shrinkage * target * np.eye(dim)


def _cholesky(a: np.ndarray) -> np.ndarray | None:
    try:
        chol = sla.cholesky(a, lower=True, check_finite=False)
    except sla.LinAlgError:
        return None
    d = np.diag(chol)
    # numerically singular factors pass LAPACK but blow up the whitening
    if d.min() <= 0 or d.min() ** 2 <= a.shape[0] * np.finfo(float).eps * d.max() ** 2:
        return None
    return chol


def lda_fit(
    scatter: ScatterPair, out_dim: int, shrinkage: float = DEFAULT_SHRINKAGE
) -> LdaModel:
    """Top-``out_dim`` discriminant directions of ``scatter``.

    If the shrunk within-class scatter is not positive definite, a ridge of
    ``1e-8 * trace(S_W)/F`` is added and raised by factors of ten up to
    ``1e-2 * trace(S_W)/F``; the ridge actually used is stored on the model.
    When ``S_W`` is exactly zero the ridge is scaled by ``trace(S_B)/F``.
    Directions are normalized so that ``U^T S_W' U = I`` and signed so the
    largest-magnitude entry of each column is positive.
    """
    dim = scatter.dim
    if not 0.0 <= shrinkage <= 1.0:
        raise ValueError(f"shrinkage must be in [0, 1], got {shrinkage}")
    limit = min(dim, scatter.n_classes - 1)
    if not 1 <= out_dim <= limit:
        raise BadDimension(f"out_dim must be in [1, {limit}], got {out_dim}")

    s_w = shrink_within(scatter.s_w, shrinkage)
    scale = np.trace(scatter.s_w) / dim
    if scale == 0:
        # no within-class spread at all: size the ridge from the class separation
        scale = np.trace(scatter.s_b) / dim
    ridge = 0.0
    chol = _cholesky(s_w)
    if chol is None:
        ridge = _RIDGE_START * scale
        while scale > 0 and ridge <= _RIDGE_MAX * scale * (1 + 1e-9):
            chol = _cholesky(s_w + ridge * np.eye(dim))
            if chol is not None:
                break
            ridge *= 10.0
        if chol is None:
            raise RankDeficient(
                "within-class scatter is not positive definite even with a ridge of "
                f"{_RIDGE_MAX:g} * trace/F; increase shrinkage"
            )

    half = sla.solve_triangular(chol, scatter.s_b, lower=True, check_finite=False)
    whitened = _sym(sla.solve_triangular(chol, half.T, lower=True, check_finite=False))
    evals, evecs = sla.eigh(whitened, check_finite=False)
    order = np.argsort(evals, kind="stable")[::-1][:out_dim]
    evals = np.maximum(evals[order], 0.0)
    directions = sla.solve_triangular(chol.T, evecs[:, order], lower=False, check_finite=False)

    pivot = np.argmax(np.abs(directions), axis=0)
    signs = np.sign(directions[pivot, np.arange(out_dim)])
    signs[signs == 0] = 1.0
    directions = directions * signs

    return LdaModel(directions, evals, float(shrinkage), float(ridge), dim, out_dim)


def lda_transform(model: LdaModel, data: np.ndarray) -> np.ndarray:
    """Project rows of ``data``: ``data @ U``."""
    x = np.asarray(data, dtype=np.float64)
    if x.ndim == 1:
        x = x[None, :]
    if x.shape[1] != model.in_dim:
        raise BadDimension(f"data has {x.shape[1]} columns, model expects {model.in_dim}")
    return x @ model.transform


def fisher_objective(
    scatter: ScatterPair, directions: np.ndarray, shrinkage: float = DEFAULT_SHRINKAGE
) -> float:
    """``det(U^T S_B U) / det(U^T S_W' U)`` with ``S_W'`` shrunk as in :func:`lda_fit`."""
    u = np.asarray(directions, dtype=np.float64)
    if u.ndim == 1:
        u = u[:, None]
    if u.shape[0] != scatter.dim:
        raise BadDimension(f"directions have {u.shape[0]} rows, scatter is {scatter.dim}-d")
    num = u.T @ scatter.s_b @ u
    den = _sym(u.T @ shrink_within(scatter.s_w, shrinkage) @ u)
    den_eig = np.linalg.eigvalsh(den)
    if den_eig.min() <= den.shape[0] * np.finfo(float).eps * max(den_eig.max(), 0.0):
        raise SingularDenominator("U^T S_W U is singular")
    sign_num, log_num = np.linalg.slogdet(_sym(num))
    if sign_num == 0:
        return 0.0
    return float(sign_num * np.exp(log_num - np.sum(np.log(den_eig))))
