import random

import pytest

from stc_engine.bundle import build_bundle
from stc_engine.corpus import Comment, Corpus, Post, RawPost
from stc_engine.pipeline import PipelineConfig
from stc_engine.pv import PvConfig
from stc_engine.tokenizer import TokenizerConfig


def make_post(ordinal, title, body, comments, post_id=None, created_at=""):
    return Post(
        id=post_id or f"p{ordinal}",
        title=title,
        body=body,
        created_at=created_at,
        comments=tuple(Comment(*c) if isinstance(c, tuple) else c for c in comments),
        corpus_ordinal=ordinal,
    )


def make_raw(post_id, title, body, comments=(), created_at=""):
    return RawPost(
        id=post_id,
        title=title,
        body=body,
        created_at=created_at,
        comments=tuple(Comment(*c) if isinstance(c, tuple) else c for c in comments),
    )


_WORDS = [
    "coffee", "rain", "exam", "movie", "lunch", "train", "game", "music",
    "friend", "work", "sleep", "phone", "book", "beach", "dog", "cat",
    "pizza", "study", "party", "trip", "gym", "code", "paint", "song",
    "night", "morning", "winter", "summer", "city", "park", "river", "star",
    "letter", "photo", "dance", "smile", "dream", "story", "cloud", "road",
]


def synthetic_corpus(n_posts: int, seed: int = 0, max_comments: int = 4) -> Corpus:
    """Seeded random corpus of word-salad posts for oracle testing."""
    rng = random.Random(seed)
    posts = []
    for i in range(n_posts):
        title = " ".join(rng.choices(_WORDS, k=rng.randint(3, 8)))
        body = " ".join(rng.choices(_WORDS, k=rng.randint(5, 20)))
        comments = tuple(
            Comment(
                text=" ".join(rng.choices(_WORDS, k=rng.randint(2, 6))),
                likes=rng.randint(0, 20),
                dislikes=rng.randint(0, 20),
            )
            for _ in range(rng.randint(1, max_comments))
        )
        posts.append(
            Post(
                id=f"s{i}",
                title=title,
                body=body,
                created_at="2020-01-01T00:00:00",
                comments=comments,
                corpus_ordinal=i,
            )
        )
    return Corpus(posts=posts, source_label="synthetic", ingested_at="2020-01-01T00:00:00+00:00")


TOY_PV = PvConfig(dim=8, window=5, negative_samples=5, epochs=30,
                  initial_learning_rate=0.05, rng_seed=42)


@pytest.fixture(scope="session")
def toy_corpus():
    return Corpus(
        posts=[
            make_post(0, "broke up today", "we broke up after three years",
                      [("time heals everything", 5, 1),
                       ("why did you break up", 3, 0),
                       ("look in the mirror", 10, 9)]),
            make_post(1, "first date tips", "meeting someone at a cafe tomorrow",
                      [("just be yourself", 7, 2), ("wear something nice", 2, 1)]),
            make_post(2, "long distance is hard", "my partner moved to another city",
                      [("call every day", 4, 0), ("distance tests love", 1, 1)]),
            make_post(3, "anniversary gift ideas", "three year anniversary next week",
                      [("write a letter", 9, 3), ("plan a trip together", 6, 0)]),
        ],
        source_label="toy",
        ingested_at="2020-01-01T00:00:00+00:00",
    )


@pytest.fixture(scope="session")
def toy_bundle(toy_corpus):
    bundle, _report = build_bundle(
        toy_corpus,
        tok=TokenizerConfig(),
        pv_config=TOY_PV,
        pipeline_defaults=PipelineConfig(),
    )
    return bundle
