"""Enrich pretrained word vectors with semantic lexicons (extrofitting and
retrofitting) and score them on word-similarity benchmarks."""

__version__ = "0.1.0"

from .embeddings import (
    EmbeddingMatrix,
    Vocabulary,
    load_embeddings,
    load_text_embeddings,
    lookup,
    save_embeddings,
    save_text_embeddings,
)
from .errors import ExtrofitError
from .evaluation import (
    EvalReport,
    SimilarityDataset,
    evaluate,
    load_dataset,
    load_dataset_files,
    nearest_neighbors,
    spearman,
)
from .extrofit import ExtrofitConfig, expand, extrofit, representative, transfer
from .lexicon import (
    SynonymClasses,
    SynonymGraph,
    build_classes,
    class_members,
    load_lexicon,
    load_lexicon_file,
)
from .linalg import (
    LdaModel,
    ScatterPair,
    accumulate_scatter,
    fisher_objective,
    lda_fit,
    lda_transform,
)
from .retrofit import RetrofitConfig, retrofit, retrofit_energy, retrofit_objective

__all__ = [name for name in dir() if not name.startswith("_")]
