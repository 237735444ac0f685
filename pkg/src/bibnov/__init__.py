"""Combinatorial novelty and disruption indicators for bibliographic corpora.

The functional core lives in the submodules (corpus, graphs, resampling,
cooc_novelty, semantic, disruption); scikit-learn style estimators wrapping
them are re-exported here for scripting use.
"""

__version__ = "0.1.0"

from .corpus import CorpusStore, DocumentRecord, ReferenceEntry, docs_in_year, load_corpus
from .records import ScoreRecord, read_score_file, write_score_file
from .semantic import EmbeddingStore, load_embeddings
from .synth import SynthParams, synth_corpus

_ESTIMATORS = (
    "Atypicality",
    "Bridging",
    "Commonness",
    "DisruptionScores",
    "ReuseNovelty",
    "SemanticNovelty",
)


def __getattr__(name):
    # Estimators pull in scikit-learn and pandas; import them on first use so
    # plain CLI runs stay light.
    if name in _ESTIMATORS:
        from . import estimators

        return getattr(estimators, name)
    raise AttributeError(f"module {__name__!r} has no attribute {name!r}")

__all__ = [
    "__version__",
    "Atypicality",
    "Bridging",
    "Commonness",
    "CorpusStore",
    "DisruptionScores",
    "DocumentRecord",
    "EmbeddingStore",
    "ReferenceEntry",
    "ReuseNovelty",
    "ScoreRecord",
    "SemanticNovelty",
    "SynthParams",
    "docs_in_year",
    "load_corpus",
    "load_embeddings",
    "read_score_file",
    "synth_corpus",
    "write_score_file",
]
