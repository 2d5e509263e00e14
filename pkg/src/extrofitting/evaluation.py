"""Word-similarity benchmarks and nearest-neighbour inspection."""
from __future__ import annotations

import logging
import re
from dataclasses import dataclass, field
from pathlib import Path
from typing import BinaryIO, Iterable, Sequence, TextIO

import numpy as np
from scipy.stats import rankdata

from .embeddings import EmbeddingMatrix
from .errors import (
    DegenerateInput,
    EmptyInput,
    LengthMismatch,
    UnknownToken,
    UnparseableLine,
    WrongColumnCount,
)

logger = logging.getLogger(__name__)

FORMATS = ("men3k", "ws353", "simlex999", "rg65", "generic")
SCORE_RANGES = {
    "men3k": (0.0, 50.0),
    "ws353": (0.0, 10.0),
    "simlex999": (0.0, 10.0),
    "rg65": (0.0, 4.0),
}
# MEN "lemma form" files tag words as run-v, car-n, ...
_POS_SUFFIX = re.compile(r"-[nvja]$")


@dataclass
class SimilarityDataset:
    name: str
    pairs: list[tuple[str, str, float]]
    warnings: list[str] = field(default_factory=list)

    def __len__(self) -> int:
        return len(self.pairs)


@dataclass
class EvalReport:
    dataset: str
    spearman: float | None
    n_scored: int
    n_skipped_oov: int
    error: str | None = None

    def tsv(self) -> str:
        rho = "nan" if self.spearman is None else f"{self.spearman:.4f}"
        line = f"{self.dataset}\t{rho}\t{self.n_scored}\t{self.n_skipped_oov}"
        return f"{line}\t{self.error}" if self.error else line


def _split_fields(line: str, fmt: str) -> list[str]:
    if fmt in ("simlex999", "generic"):
        return [f.strip() for f in line.split("\t")]
    if fmt == "ws353":
        sep = "\t" if "\t" in line else ","
        return [f.strip() for f in line.split(sep)]
    if fmt == "rg65" and ";" in line:
        return [f.strip() for f in line.split(";")]
    return line.split()


def _parse_score(text: str) -> float | None:
    try:
        value = float(text)
    except ValueError:
        return None
    return value if np.isfinite(value) else None


def load_dataset(
    source: TextIO | BinaryIO | Iterable[str | bytes],
    fmt: str,
    lowercase: bool = False,
    name: str | None = None,
) -> SimilarityDataset:
    """Parse one similarity file.

    Layouts: ``men3k`` and ``rg65`` are ``w1 w2 score`` (whitespace; RG-65
    may also use ``;``), ``ws353`` is comma- or tab-separated with an optional
    header, ``simlex999`` is tab-separated with a header naming the
    ``SimLex999`` column, ``generic`` is three-column TSV. A first line whose
    score column is not a number is treated as a header. Scores outside the
    dataset's published range are kept and reported in ``warnings``.
    """
    if fmt not in FORMATS:
        raise ValueError(f"unknown dataset format {fmt!r}; expected one of {FORMATS}")
    ds = SimilarityDataset(name or fmt, [])
    score_col = 2
    first = True
    for line_no, raw in enumerate(source, start=1):
        line = raw.decode("utf-8") if isinstance(raw, bytes) else raw
        line = line.rstrip("\r\n")
        if not line.strip() or line.lstrip().startswith("#"):
            continue
        fields = _split_fields(line, fmt)
        if first:
            first = False
            if fmt == "simlex999":
                header = [f.lower() for f in fields]
                if "simlex999" not in header:
                    raise UnparseableLine(line_no, "SimLex-999 header lacks a SimLex999 column")
                score_col = header.index("simlex999")
                continue
            if len(fields) > 2 and _parse_score(fields[2]) is None:
                continue
        if fmt == "generic" and len(fields) != 3:
            raise WrongColumnCount(line_no, 3, len(fields))
        if len(fields) <= max(score_col, 1):
            raise WrongColumnCount(line_no, score_col + 1, len(fields))
        score = _parse_score(fields[score_col])
        if score is None:
            raise UnparseableLine(line_no, f"bad score {fields[score_col]!r}")
        a, b = fields[0], fields[1]
        if fmt == "men3k":
            a, b = _POS_SUFFIX.sub("", a), _POS_SUFFIX.sub("", b)
        if lowercase:
            a, b = a.lower(), b.lower()
        lo_hi = SCORE_RANGES.get(fmt)
        if lo_hi and not lo_hi[0] <= score <= lo_hi[1]:
            msg = f"line {line_no}: score {score} outside [{lo_hi[0]:g}, {lo_hi[1]:g}]"
            ds.warnings.append(msg)
            logger.warning("%s: %s", ds.name, msg)
        ds.pairs.append((a, b, score))
    if not ds.pairs:
        raise EmptyInput("similarity dataset has no pairs")
    return ds


def load_dataset_files(
    paths: Sequence[str | Path], fmt: str, lowercase: bool = False, name: str | None = None
) -> SimilarityDataset:
    """Load and concatenate several files of one dataset (e.g. MEN dev + test)."""
    parts = []
    for path in paths:
        with open(path, encoding="utf-8") as fh:
            parts.append(load_dataset(fh, fmt, lowercase=lowercase, name=name))
    merged = SimilarityDataset(name or fmt, [])
    for part in parts:
        merged.pairs.extend(part.pairs)
        merged.warnings.extend(part.warnings)
    return merged


def spearman(xs: Sequence[float], ys: Sequence[float]) -> float:
    """Spearman's rho: Pearson correlation of average-tie ranks."""
    x = np.asarray(xs, dtype=np.float64)
    y = np.asarray(ys, dtype=np.float64)
    if x.shape != y.shape or x.ndim != 1:
        raise LengthMismatch(f"lengths differ: {x.size} vs {y.size}")
    if x.size < 2:
        raise DegenerateInput("need at least 2 observations")
    rx = rankdata(x) - (x.size + 1) / 2.0
    ry = rankdata(y) - (y.size + 1) / 2.0
    sx, sy = np.sqrt(rx @ rx), np.sqrt(ry @ ry)
    if sx == 0 or sy == 0:
        raise DegenerateInput("constant input has no rank correlation")
    return float(np.clip((rx @ ry) / (sx * sy), -1.0, 1.0))


def cosine(u: np.ndarray, v: np.ndarray) -> float:
    nu, nv = np.linalg.norm(u), np.linalg.norm(v)
    if nu == 0 or nv == 0:
        return 0.0
    return float(u @ v / (nu * nv))


def evaluate(m: EmbeddingMatrix, d: SimilarityDataset) -> EvalReport:
    """Spearman correlation between cosine similarities and human scores.

    Pairs with an out-of-vocabulary word are skipped and counted.
    """
    model, human = [], []
    skipped = 0
    for a, b, score in d.pairs:
        va, vb = m.lookup(a), m.lookup(b)
        if va is None or vb is None:
            skipped += 1
            continue
        model.append(cosine(va, vb))
        human.append(score)
    if len(model) < 2:
        raise DegenerateInput(f"{d.name}: only {len(model)} pair(s) in vocabulary")
    return EvalReport(d.name, spearman(model, human), len(model), skipped)


def nearest_neighbors(m: EmbeddingMatrix, token: str, k: int = 10) -> list[tuple[str, float]]:
    """Top-``k`` words by cosine similarity to ``token``, best first.

    The cue itself and zero vectors are excluded; ties keep vocabulary order.
    """
    if k < 1:
        raise ValueError("k must be >= 1")
    i = m.vocab.index.get(token)
    if i is None:
        raise UnknownToken(token)
    norms = np.linalg.norm(m.data, axis=1)
    if norms[i] == 0:
        raise DegenerateInput(f"{token!r} has a zero vector")
    zero = norms == 0
    if zero.any():
        logger.warning("ignoring %d zero-norm vector(s)", int(zero.sum()))
    safe = np.where(zero, 1.0, norms)
    scores = (m.data @ m.data[i]) / (safe * norms[i])
    scores[zero] = -np.inf
    scores[i] = -np.inf
    order = np.argsort(-scores, kind="stable")
    out = []
    for j in order[:k]:
        if not np.isfinite(scores[j]):
            break
        out.append((m.vocab[j], float(scores[j])))
    return out


def format_neighbors(neighbors: Sequence[tuple[str, float]]) -> str:
    return "".join(f"{r}\t{w}\t{s:.4f}\n" for r, (w, s) in enumerate(neighbors, start=1))


def format_reports(reports: Sequence[EvalReport], style: str = "tsv") -> str:
    if style == "tsv":
        return "".join(r.tsv() + "\n" for r in reports)
    rows = [("dataset", "spearman", "n_scored", "n_skipped")]
    for r in reports:
        rho = r.error or ("nan" if r.spearman is None else f"{r.spearman:.4f}")
        rows.append((r.dataset, rho, str(r.n_scored), str(r.n_skipped_oov)))
    widths = [max(len(row[c]) for row in rows) for c in range(4)]
    return "".join(
        "  ".join(cell.ljust(w) for cell, w in zip(row, widths)).rstrip() + "\n" for row in rows
    )
