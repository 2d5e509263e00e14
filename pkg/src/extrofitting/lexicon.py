"""Semantic lexicons: synonym graphs and the synonym-class partition.

Lexicon files use the retrofitting distribution layout, one entry per line::

    headword synonym_1 synonym_2 ...

Every synonym on a line is linked to the headword. Classes are the connected
components of the resulting graph, so a word listed under several headwords
still gets a single label.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass, field
from functools import cached_property
from pathlib import Path
from typing import BinaryIO, Iterable

import numpy as np

from .embeddings import Vocabulary
from .errors import EmptyInput, UnknownToken

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class SynonymGraph:
    """Undirected synonym graph restricted to one vocabulary.

    ``edges`` holds each pair once, as a tuple sorted lexicographically.
    """

    edges: frozenset[tuple[str, str]]
    n_dropped_oov: int = field(default=0, compare=False)

    @cached_property
    def adjacency(self) -> dict[str, frozenset[str]]:
        adj: dict[str, set[str]] = {}
        for a, b in self.edges:
            adj.setdefault(a, set()).add(b)
            adj.setdefault(b, set()).add(a)
        return {k: frozenset(v) for k, v in adj.items()}

    def neighbors(self, token: str) -> frozenset[str]:
        return self.adjacency.get(token, frozenset())

    def degree(self, token: str) -> int:
        return len(self.neighbors(token))

    @property
    def tokens(self) -> frozenset[str]:
        return frozenset(self.adjacency)

    def __len__(self) -> int:
        return len(self.edges)

    @classmethod
    def from_pairs(cls, pairs: Iterable[tuple[str, str]]) -> "SynonymGraph":
        return cls(frozenset(_edge(a, b) for a, b in pairs if a != b))


def _edge(a: str, b: str) -> tuple[str, str]:
    return (a, b) if a <= b else (b, a)


def load_lexicon(
    source: BinaryIO | Iterable[bytes], vocab: Vocabulary, lowercase: bool = False
) -> SynonymGraph:
    """Read a lexicon and keep the edges whose endpoints are both in ``vocab``.

    Dropped edges are counted in ``n_dropped_oov``. An edge written twice
    (in either direction) is kept once; a dropped edge is counted every time
    it appears.
    """
    edges: set[tuple[str, str]] = set()
    dropped = 0
    saw_content = False
    for raw in source:
        fields = raw.decode("utf-8").split()
        if not fields:
            continue
        saw_content = True
        if lowercase:
            fields = [f.lower() for f in fields]
        head, synonyms = fields[0], fields[1:]
        for syn in synonyms:
            if syn == head:
                continue
            if head in vocab and syn in vocab:
                edges.add(_edge(head, syn))
            else:
                dropped += 1
    if not saw_content:
        raise EmptyInput("lexicon has no entries")
    return SynonymGraph(frozenset(edges), dropped)


def load_lexicon_file(path: str | Path, vocab: Vocabulary, lowercase: bool = False) -> SynonymGraph:
    with open(path, "rb") as fh:
        return load_lexicon(fh, vocab, lowercase=lowercase)


class _DisjointSet:
    def __init__(self, n: int):
        self.parent = list(range(n))

    def find(self, x: int) -> int:
        parent = self.parent
        root = x
        while parent[root] != root:
            root = parent[root]
        while parent[x] != root:
            parent[x], x = root, parent[x]
        return root

    def union(self, a: int, b: int) -> None:
        ra, rb = self.find(a), self.find(b)
        if ra != rb:
            # smaller index wins so roots are stable regardless of edge order
            if rb < ra:
                ra, rb = rb, ra
            self.parent[rb] = ra


@dataclass(frozen=True, eq=False)
class SynonymClasses:
    """Partition of a vocabulary into synonym classes.

    ``labels[i]`` is the class id of ``vocab[i]``; ids are ``0..n_classes-1``
    in order of first appearance in the vocabulary.
    """

    vocab: Vocabulary
    labels: np.ndarray

    def __post_init__(self) -> None:
        labels = np.asarray(self.labels, dtype=np.int64).copy()
        labels.setflags(write=False)
        object.__setattr__(self, "labels", labels)

    @property
    def n_classes(self) -> int:
        return int(self.labels.max()) + 1 if len(self.labels) else 0

    @cached_property
    def sizes(self) -> np.ndarray:
        return np.bincount(self.labels, minlength=self.n_classes)

    @cached_property
    def classes(self) -> list[list[str]]:
        out: list[list[str]] = [[] for _ in range(self.n_classes)]
        for word, c in zip(self.vocab.words, self.labels.tolist()):
            out[c].append(word)
        return out

    @property
    def n_nonsingleton_classes(self) -> int:
        return int((self.sizes > 1).sum())

    @property
    def n_covered_words(self) -> int:
        """Words sharing a class with at least one other word."""
        return int(self.sizes[self.sizes > 1].sum())

    def class_of(self, token: str) -> int:
        i = self.vocab.index.get(token)
        if i is None:
            raise UnknownToken(token)
        return int(self.labels[i])

    def as_sets(self) -> set[frozenset[str]]:
        return {frozenset(c) for c in self.classes}


def build_classes(g: SynonymGraph, vocab: Vocabulary) -> SynonymClasses:
    """Connected components of ``g``, plus a singleton for every other word."""
    index = vocab.index
    ds = _DisjointSet(len(vocab))
    for a, b in g.edges:
        ia = index.get(a)
        if ia is None:
            raise UnknownToken(a)
        ib = index.get(b)
        if ib is None:
            raise UnknownToken(b)
        ds.union(ia, ib)

    labels = np.empty(len(vocab), dtype=np.int64)
    ids: dict[int, int] = {}
    for i in range(len(vocab)):
        root = ds.find(i)
        labels[i] = ids.setdefault(root, len(ids))
    return SynonymClasses(vocab, labels)


def class_members(sc: SynonymClasses, token: str) -> list[str]:
    """All words in ``token``'s class, ``token`` included, in vocabulary order."""
    return list(sc.classes[sc.class_of(token)])
