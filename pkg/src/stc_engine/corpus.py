"""Post-comment data model and corpus ingestion.

Raw community dumps arrive as newline-delimited JSON records (one post per
line, UTF-8). Ingestion parses each record, drops non-text posts, noise
(pattern-matched ads etc.), and posts without comments, then assigns dense
corpus ordinals in input order.
"""

from __future__ import annotations

import datetime as _dt
import json
import re
from dataclasses import dataclass

from .errors import EmptyCorpusAfterFiltering, MalformedRecord, MissingField
from .tokenizer import TokenizerConfig, tokenize


@dataclass(frozen=True)
class Comment:
    text: str
    likes: int = 0
    dislikes: int = 0

    @property
    def popularity(self) -> int:
        return self.likes - self.dislikes


@dataclass(frozen=True)
class RawPost:
    id: str
    title: str
    body: str
    created_at: str
    comments: tuple[Comment, ...]


@dataclass(frozen=True)
class Post:
    id: str
    title: str
    body: str
    created_at: str
    comments: tuple[Comment, ...]
    corpus_ordinal: int


@dataclass
class Corpus:
    posts: list[Post]
    source_label: str = ""
    ingested_at: str = ""


@dataclass
class IngestReport:
    raw_count: int = 0
    kept_count: int = 0
    dropped_non_text: int = 0
    dropped_noise: int = 0
    dropped_no_comments: int = 0

    def as_dict(self) -> dict:
        return {
            "raw_count": self.raw_count,
            "kept_count": self.kept_count,
            "dropped_non_text": self.dropped_non_text,
            "dropped_noise": self.dropped_noise,
            "dropped_no_comments": self.dropped_no_comments,
        }


@dataclass(frozen=True)
class FilterConfig:
    min_body_tokens: int = 1
    noise_patterns: tuple[str, ...] = ()

    def __post_init__(self):
        if self.min_body_tokens < 1:
            raise ValueError("min_body_tokens must be >= 1")
        object.__setattr__(self, "noise_patterns", tuple(self.noise_patterns))

    def to_dict(self) -> dict:
        return {
            "min_body_tokens": self.min_body_tokens,
            "noise_patterns": list(self.noise_patterns),
        }

    @classmethod
    def from_dict(cls, d: dict) -> "FilterConfig":
        unknown = set(d) - {"min_body_tokens", "noise_patterns"}
        if unknown:
            raise ValueError(f"unknown filter config keys: {sorted(unknown)}")
        kwargs = dict(d)
        if "noise_patterns" in kwargs:
            kwargs["noise_patterns"] = tuple(kwargs["noise_patterns"])
        return cls(**kwargs)


def parse_post_record(line: str) -> RawPost:
    """Parse one JSON record into a RawPost.

    Missing likes/dislikes default to 0. Comments with blank text are
    discarded here; they can never be served as a response.
    """
    try:
        obj = json.loads(line)
    except json.JSONDecodeError as e:
        raise MalformedRecord(f"invalid JSON: {e}") from e
    if not isinstance(obj, dict):
        raise MalformedRecord("record is not an object")
    for key in ("title", "body"):
        if key not in obj:
            raise MissingField(f"record missing required field '{key}'")
    if "id" not in obj:
        raise MissingField("record missing required field 'id'")

    rec_id = obj["id"]
    if not isinstance(rec_id, str) or not rec_id:
        raise MalformedRecord("field 'id' must be a non-empty string")
    title = obj["title"]
    body = obj["body"]
    if not isinstance(title, str) or not isinstance(body, str):
        raise MalformedRecord("fields 'title' and 'body' must be strings")

    created_at = obj.get("created_at", "")
    if created_at:
        try:
            _dt.datetime.fromisoformat(created_at)
        except (TypeError, ValueError) as e:
            raise MalformedRecord(f"bad created_at: {created_at!r}") from e

    comments = []
    raw_comments = obj.get("comments", [])
    if not isinstance(raw_comments, list):
        raise MalformedRecord("field 'comments' must be an array")
    for c in raw_comments:
        if not isinstance(c, dict) or "text" not in c:
            raise MalformedRecord("each comment needs a 'text' field")
        text = c["text"]
        if not isinstance(text, str):
            raise MalformedRecord("comment text must be a string")
        if not text.strip():
            continue
        likes = int(c.get("likes", 0))
        dislikes = int(c.get("dislikes", 0))
        if likes < 0 or dislikes < 0:
            raise MalformedRecord("likes/dislikes must be non-negative")
        comments.append(Comment(text=text, likes=likes, dislikes=dislikes))

    return RawPost(
        id=rec_id,
        title=title,
        body=body,
        created_at=created_at,
        comments=tuple(comments),
    )


def read_posts(path) -> list[RawPost]:
    """Read a newline-delimited corpus file; enforce unique ids."""
    posts: list[RawPost] = []
    seen: set[str] = set()
    with open(path, encoding="utf-8") as f:
        for lineno, line in enumerate(f, start=1):
            if not line.strip():
                continue
            try:
                post = parse_post_record(line)
            except MalformedRecord as e:
                raise MalformedRecord(f"line {lineno}: {e}") from e
            if post.id in seen:
                raise MalformedRecord(f"line {lineno}: duplicate id {post.id!r}")
            seen.add(post.id)
            posts.append(post)
    return posts


def filter_corpus(
    raw: list[RawPost],
    rules: FilterConfig = FilterConfig(),
    tok: TokenizerConfig = TokenizerConfig(),
    source_label: str = "",
) -> tuple[Corpus, IngestReport]:
    """Apply the keep/drop predicates and assign dense ordinals.

    Drop precedence when several predicates fire on one post:
    non-text, then noise, then no-comments.
    """
    noise_res = [re.compile(p) for p in rules.noise_patterns]
    report = IngestReport(raw_count=len(raw))
    kept: list[Post] = []
    for post in raw:
        if len(tokenize(post.body, tok)) < rules.min_body_tokens:
            report.dropped_non_text += 1
            continue
        if any(r.search(post.title) or r.search(post.body) for r in noise_res):
            report.dropped_noise += 1
            continue
        if not post.comments:
            report.dropped_no_comments += 1
            continue
        kept.append(
            Post(
                id=post.id,
                title=post.title,
                body=post.body,
                created_at=post.created_at,
                comments=post.comments,
                corpus_ordinal=len(kept),
            )
        )
    report.kept_count = len(kept)
    if not kept:
        raise EmptyCorpusAfterFiltering(
            "all posts were dropped during filtering"
        )
    corpus = Corpus(
        posts=kept,
        source_label=source_label,
        ingested_at=_dt.datetime.now(_dt.timezone.utc).isoformat(),
    )
    return corpus, report


def ingest_file(
    path,
    rules: FilterConfig = FilterConfig(),
    tok: TokenizerConfig = TokenizerConfig(),
    source_label: str = "",
) -> tuple[Corpus, IngestReport]:
    """read_posts + filter_corpus in one call."""
    raw = read_posts(path)
    return filter_corpus(raw, rules, tok, source_label=source_label)
