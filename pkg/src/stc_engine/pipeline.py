"""Retrieve -> Match -> Rank response pipeline.

Retrieve: paragraph-vector cosine between the query and every post title,
top-K. Match: TF-IDF cosine re-rank of the retrieved set, top-M. Rank:
pool the most popular comments (likes - dislikes) of the matched posts and
pick one uniformly at random. All orderings break ties by ascending
corpus ordinal / comment index, so everything up to the final pick is
deterministic.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field as _field

import numpy as np

from .corpus import Corpus
from .errors import EmptyCandidatePool, EmptyQuery, EmptyQueryAfterOov
from .tfidf import FIELDS, cosine_sparse, embed_query
from .tokenizer import tokenize
from . import pv as _pv

RETRIEVED = "retrieved"
MATCHED = "matched"


@dataclass(frozen=True)
class PipelineConfig:
    retrieve_k: int = 200
    match_m: int = 5
    comments_per_post: int = 2
    match_field: str = "body"
    response_seed: int | None = None

    def __post_init__(self):
        if self.retrieve_k < 1 or self.match_m < 1:
            raise ValueError("retrieve_k and match_m must be positive")
        if self.match_m > self.retrieve_k:
            raise ValueError("match_m must be <= retrieve_k")
        if self.comments_per_post < 1:
            raise ValueError("comments_per_post must be >= 1")
        if self.match_field not in FIELDS:
            raise ValueError(f"match_field must be one of {FIELDS}")

    def to_dict(self) -> dict:
        return {
            "retrieve_k": self.retrieve_k,
            "match_m": self.match_m,
            "comments_per_post": self.comments_per_post,
            "match_field": self.match_field,
            "response_seed": self.response_seed,
        }

    @classmethod
    def from_dict(cls, d: dict) -> "PipelineConfig":
        unknown = set(d) - set(cls().to_dict())
        if unknown:
            raise ValueError(f"unknown pipeline config keys: {sorted(unknown)}")
        return cls(**d)


@dataclass(frozen=True)
class ScoredPost:
    corpus_ordinal: int
    score: float
    stage: str


@dataclass(frozen=True)
class CandidateResponse:
    post_ordinal: int
    comment_index: int
    text: str
    popularity: int


@dataclass
class ChatResponse:
    text: str
    chosen: CandidateResponse
    retrieved: list[ScoredPost] = _field(default_factory=list)
    matched: list[ScoredPost] = _field(default_factory=list)
    pool: list[CandidateResponse] = _field(default_factory=list)
    low_confidence: bool = False


def retrieve(query: str, bundle, cfg: PipelineConfig) -> list[ScoredPost]:
    """Top-K posts by dense title similarity; all-OOV queries score 0."""
    tokens = tokenize(query, bundle.tokenizer_config)
    if not tokens:
        raise EmptyQuery("query is empty after tokenization")
    model = bundle.pv_title
    n = model.n_docs
    try:
        qv = _pv.infer_vector(tokens, model)
    except EmptyQueryAfterOov:
        scores = np.zeros(n)
    else:
        qnorm = np.linalg.norm(qv)
        if qnorm == 0.0:
            scores = np.zeros(n)
        else:
            dots = model.doc_matrix_f64() @ qv
            denom = model.doc_norms() * qnorm
            safe = np.where(denom > 0.0, denom, 1.0)
            scores = np.where(denom > 0.0, dots / safe, 0.0)
    k = min(cfg.retrieve_k, n)
    order = np.lexsort((np.arange(n), -scores))[:k]
    return [
        ScoredPost(corpus_ordinal=int(i), score=float(scores[i]), stage=RETRIEVED)
        for i in order
    ]


def match(
    query: str, retrieved_posts: list[ScoredPost], bundle, cfg: PipelineConfig
) -> list[ScoredPost]:
    """TF-IDF re-rank of the retrieved posts, top-M."""
    index = bundle.tfidf_body if cfg.match_field == "body" else bundle.tfidf_title
    tokens = tokenize(query, bundle.tokenizer_config)
    qv = embed_query(tokens, index)
    scored = [
        (cosine_sparse(qv, index.doc_vectors[sp.corpus_ordinal]), sp.corpus_ordinal)
        for sp in retrieved_posts
    ]
    scored.sort(key=lambda t: (-t[0], t[1]))
    m = min(cfg.match_m, len(scored))
    return [
        ScoredPost(corpus_ordinal=o, score=s, stage=MATCHED)
        for s, o in scored[:m]
    ]


def rank(
    matched: list[ScoredPost],
    corpus: Corpus,
    cfg: PipelineConfig,
    seed: int | None = None,
) -> ChatResponse:
    """Pool top comments by popularity and pick one uniformly at random."""
    pool: list[CandidateResponse] = []
    for sp in matched:
        post = corpus.posts[sp.corpus_ordinal]
        by_popularity = sorted(
            range(len(post.comments)),
            key=lambda i: (-post.comments[i].popularity, i),
        )
        for ci in by_popularity[: cfg.comments_per_post]:
            c = post.comments[ci]
            pool.append(
                CandidateResponse(
                    post_ordinal=sp.corpus_ordinal,
                    comment_index=ci,
                    text=c.text,
                    popularity=c.popularity,
                )
            )
    if not pool:
        raise EmptyCandidatePool("no candidate responses available")
    rng = random.Random(seed) if seed is not None else random.Random()
    chosen = pool[rng.randrange(len(pool))]
    return ChatResponse(
        text=chosen.text,
        chosen=chosen,
        matched=list(matched),
        pool=pool,
        low_confidence=all(sp.score == 0.0 for sp in matched),
    )


def respond(
    query: str, bundle, cfg: PipelineConfig, seed: int | None = None
) -> ChatResponse:
    """Full pipeline; `seed` (or cfg.response_seed) pins the final pick."""
    if seed is None:
        seed = cfg.response_seed
    retrieved_posts = retrieve(query, bundle, cfg)
    matched = match(query, retrieved_posts, bundle, cfg)
    resp = rank(matched, bundle.corpus, cfg, seed=seed)
    resp.retrieved = retrieved_posts
    return resp
