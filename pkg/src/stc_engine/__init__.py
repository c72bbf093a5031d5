"""Retrieval-based short-text-conversation engine.

Offline: ingest post-comment data, build title/body TF-IDF indexes and a
paragraph-vector model, persist everything as one bundle file. Online:
answer queries with the Retrieve -> Match -> Rank pipeline over CLI, REPL,
or HTTP.
"""

from .bundle import IndexBundle, build_bundle, load_bundle, save_bundle
from .config import EngineConfig
from .corpus import (
    Comment,
    Corpus,
    FilterConfig,
    IngestReport,
    Post,
    RawPost,
    filter_corpus,
    ingest_file,
    parse_post_record,
)
from .pipeline import (
    CandidateResponse,
    ChatResponse,
    PipelineConfig,
    ScoredPost,
    match,
    rank,
    respond,
    retrieve,
)
from .pv import PvConfig, PvModel, TrainingReport, cosine_dense, infer_vector, train
from .tfidf import (
    SparseVector,
    TfIdfIndex,
    Vocabulary,
    build_index,
    cosine_sparse,
    embed_query,
)
from .tokenizer import TokenizerConfig, normalize, tokenize

__version__ = "0.1.0"
