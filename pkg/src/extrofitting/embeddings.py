"""Reading and writing word vectors in the whitespace-separated text format.

GloVe files have no header; Word2Vec and Fasttext ``.vec`` exports start with
a ``<count> <dim>`` line. Both are accepted by :func:`load_text_embeddings`.
"""
from __future__ import annotations

import gzip
import math
import logging
from dataclasses import dataclass, field
from pathlib import Path
from typing import BinaryIO, Iterable, Sequence

import numpy as np

from .errors import (
    DuplicateToken,
    EmptyInput,
    InconsistentDimension,
    ShapeMismatch,
    UnparseableNumber,
)

logger = logging.getLogger(__name__)

DEFAULT_PRECISION = 6
_BLOCK_ROWS = 1 << 14


class Vocabulary:
    """Ordered, duplicate-free list of tokens with a reverse index."""

    __slots__ = ("words", "index")

    def __init__(self, words: Iterable[str]):
        self.words: tuple[str, ...] = tuple(words)
        self.index: dict[str, int] = {w: i for i, w in enumerate(self.words)}
        if len(self.index) != len(self.words):
            seen: set[str] = set()
            for w in self.words:
                if w in seen:
                    raise DuplicateToken(w)
                seen.add(w)
        for w in self.words:
            if not w or any(c.isspace() for c in w):
                raise ValueError(f"token {w!r} is empty or contains whitespace")

    def __len__(self) -> int:
        return len(self.words)

    def __iter__(self):
        return iter(self.words)

    def __contains__(self, token: object) -> bool:
        return token in self.index

    def __getitem__(self, i: int) -> str:
        return self.words[i]

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Vocabulary):
            return NotImplemented
        return self is other or self.words == other.words

    def __hash__(self) -> int:
        return hash(self.words)

    def __repr__(self) -> str:
        return f"Vocabulary(<{len(self)} words>)"


@dataclass(frozen=True, eq=False)
class EmbeddingMatrix:
    """Dense ``len(vocab) x dim`` matrix of word vectors.

    ``data`` is stored read-only in float64; operations that change vectors
    return a new matrix.
    """

    vocab: Vocabulary
    data: np.ndarray
    n_duplicates_skipped: int = field(default=0, compare=False)

    def __post_init__(self) -> None:
        data = np.array(self.data, dtype=np.float64, copy=True, order="C")
        if data.ndim != 2:
            raise ShapeMismatch(f"expected a 2-d matrix, got shape {data.shape}")
        if data.shape[0] != len(self.vocab):
            raise ShapeMismatch(
                f"{data.shape[0]} rows for a vocabulary of {len(self.vocab)} words"
            )
        if data.shape[1] < 1:
            raise ShapeMismatch("embedding dimension must be at least 1")
        if not np.isfinite(data).all():
            raise ValueError("embedding matrix contains NaN or Inf")
        data.setflags(write=False)
        object.__setattr__(self, "data", data)

    @classmethod
    def from_rows(cls, words: Sequence[str], rows) -> "EmbeddingMatrix":
        return cls(Vocabulary(words), np.asarray(rows, dtype=np.float64).reshape(len(words), -1))

    @property
    def dim(self) -> int:
        return self.data.shape[1]

    def __len__(self) -> int:
        return len(self.vocab)

    def __contains__(self, token: object) -> bool:
        return token in self.vocab

    def lookup(self, token: str) -> np.ndarray | None:
        return lookup(self, token)

    def with_data(self, data: np.ndarray) -> "EmbeddingMatrix":
        """Same vocabulary, new vectors (any column count)."""
        return EmbeddingMatrix(self.vocab, data)


def lookup(m: EmbeddingMatrix, token: str) -> np.ndarray | None:
    """Row vector for ``token``, or ``None`` when it is not in the vocabulary."""
    i = m.vocab.index.get(token)
    return None if i is None else m.data[i]


def _is_header(fields: list[str]) -> bool:
    if len(fields) != 2:
        return False
    try:
        int(fields[0])
        int(fields[1])
    except ValueError:
        return False
    return True


def load_text_embeddings(
    source: BinaryIO | Iterable[bytes],
    lowercase: bool = False,
    on_duplicate: str = "keep-first",
) -> EmbeddingMatrix:
    """Parse ``token v_1 ... v_D`` lines from a UTF-8 byte stream.

    A first line made of exactly two integers is taken as a Word2Vec header
    and skipped. ``D`` is inferred from the first data line. With
    ``lowercase`` set, tokens are lowercased before duplicates are resolved;
    ``on_duplicate`` is ``"keep-first"`` (later copies dropped and counted) or
    ``"error"``.
    """
    if on_duplicate not in ("keep-first", "error"):
        raise ValueError(f"on_duplicate must be 'keep-first' or 'error', not {on_duplicate!r}")

    words: list[str] = []
    blocks: list[np.ndarray] = []
    block = np.empty((0, 0))
    index: dict[str, int] = {}
    dim = None
    n_dup = 0
    first = True

    for line_no, raw in enumerate(source, start=1):
        fields = raw.decode("utf-8").split()
        if not fields:
            continue
        if first:
            first = False
            if _is_header(fields):
                continue
        if dim is None:
            dim = len(fields) - 1
            if dim < 1:
                raise InconsistentDimension(line_no, 1, 0)
            block = np.empty((_BLOCK_ROWS, dim))
        if len(fields) != dim + 1:
            raise InconsistentDimension(line_no, dim, len(fields) - 1)
        token = fields[0].lower() if lowercase else fields[0]
        try:
            values = list(map(float, fields[1:]))
        except ValueError as exc:
            raise UnparseableNumber(line_no, str(exc)) from None
        if not all(map(math.isfinite, values)):
            raise UnparseableNumber(line_no, "non-finite value")
        if token in index:
            if on_duplicate == "error":
                raise DuplicateToken(token)
            n_dup += 1
            continue
        row = len(words) % _BLOCK_ROWS
        if row == 0 and words:
            blocks.append(block)
            block = np.empty((_BLOCK_ROWS, dim))
        block[row] = values
        index[token] = len(words)
        words.append(token)

    if not words:
        raise EmptyInput("no embedding rows found")
    if n_dup:
        logger.warning("skipped %d duplicate token(s), kept first occurrence", n_dup)
    blocks.append(block[: len(words) - _BLOCK_ROWS * len(blocks)])
    data = np.concatenate(blocks) if len(blocks) > 1 else blocks[0].copy()
    return EmbeddingMatrix(Vocabulary(words), data, n_dup)


def _format_row(token: str, row: np.ndarray, precision: int | None) -> str:
    if precision is None:
        values = " ".join(repr(float(v)) for v in row)
    else:
        values = " ".join(f"{v:.{precision}f}" for v in row.tolist())
    return f"{token} {values}\n"


def save_text_embeddings(
    m: EmbeddingMatrix, sink: BinaryIO, precision: int | None = DEFAULT_PRECISION
) -> None:
    """Write one ``token v_1 ... v_D`` line per word, in vocabulary order.

    Values are fixed-point with ``precision`` decimals. ``precision=None``
    writes the shortest representation that round-trips exactly.
    """
    if precision is not None and precision < 1:
        raise ValueError("precision must be >= 1")
    for token, row in zip(m.vocab.words, m.data):
        sink.write(_format_row(token, row, precision).encode("utf-8"))


def _open(path: str | Path, mode: str):
    path = Path(path)
    if path.suffix == ".gz":
        return gzip.open(path, mode)
    return open(path, mode)


def load_embeddings(
    path: str | Path, lowercase: bool = False, on_duplicate: str = "keep-first"
) -> EmbeddingMatrix:
    """File-path wrapper around :func:`load_text_embeddings` (``.gz`` aware)."""
    with _open(path, "rb") as fh:
        return load_text_embeddings(fh, lowercase=lowercase, on_duplicate=on_duplicate)


def save_embeddings(
    m: EmbeddingMatrix, path: str | Path, precision: int | None = DEFAULT_PRECISION
) -> None:
    with _open(path, "wb") as fh:
        save_text_embeddings(m, fh, precision)
