"""Single-file persistence of the offline build artifact.

Layout: magic "STCB", little-endian u32 format version, five
length-prefixed sections (manifest JSON, corpus JSON, title TF-IDF, body
TF-IDF, title PV model), then a trailing CRC32 of everything before it.
Serialization is deterministic, so save(load(f)) is byte-identical to f.
"""

from __future__ import annotations

import hashlib
import json
import struct
import zlib
from dataclasses import dataclass
from io import BytesIO

import numpy as np

from .corpus import Comment, Corpus, Post
from .errors import (
    ChecksumMismatch,
    CountMismatch,
    IoFailure,
    UnsupportedVersion,
)
from .pipeline import PipelineConfig
from .pv import PvConfig, PvModel, TrainingReport, train as pv_train
from .tfidf import SparseVector, TfIdfIndex, Vocabulary, build_index
from .tokenizer import TokenizerConfig

MAGIC = b"STCB"
FORMAT_VERSION = 1
PV_VARIANT = "pv-dbow-negative-sampling"


@dataclass
class ManifestHeader:
    format_version: int
    corpus_hash: str            # 16 hex chars, 64-bit content hash
    tokenizer_config: TokenizerConfig
    pv_config: PvConfig
    pipeline_defaults: PipelineConfig
    n_posts: int
    title_vocab: int
    body_vocab: int
    pv_dim: int
    pv_variant: str = PV_VARIANT
    tfidf_scheme: str = "raw-tf.ln-idf.l2"

    def to_dict(self) -> dict:
        return {
            "format_version": self.format_version,
            "corpus_hash": self.corpus_hash,
            "tokenizer_config": self.tokenizer_config.to_dict(),
            "pv_config": self.pv_config.to_dict(),
            "pipeline_defaults": self.pipeline_defaults.to_dict(),
            "n_posts": self.n_posts,
            "title_vocab": self.title_vocab,
            "body_vocab": self.body_vocab,
            "pv_dim": self.pv_dim,
            "pv_variant": self.pv_variant,
            "tfidf_scheme": self.tfidf_scheme,
        }

    @classmethod
    def from_dict(cls, d: dict) -> "ManifestHeader":
        return cls(
            format_version=d["format_version"],
            corpus_hash=d["corpus_hash"],
            tokenizer_config=TokenizerConfig.from_dict(d["tokenizer_config"]),
            pv_config=PvConfig.from_dict(d["pv_config"]),
            pipeline_defaults=PipelineConfig.from_dict(d["pipeline_defaults"]),
            n_posts=d["n_posts"],
            title_vocab=d["title_vocab"],
            body_vocab=d["body_vocab"],
            pv_dim=d["pv_dim"],
            pv_variant=d["pv_variant"],
            tfidf_scheme=d["tfidf_scheme"],
        )


@dataclass
class IndexBundle:
    manifest: ManifestHeader
    corpus: Corpus
    tfidf_title: TfIdfIndex
    tfidf_body: TfIdfIndex
    pv_title: PvModel

    @property
    def tokenizer_config(self) -> TokenizerConfig:
        return self.manifest.tokenizer_config


# --- low-level encoding helpers ---

def _json_bytes(obj) -> bytes:
    return json.dumps(
        obj, ensure_ascii=False, sort_keys=True, separators=(",", ":")
    ).encode("utf-8")


def _write_section(out: BytesIO, payload: bytes) -> None:
    out.write(struct.pack("<Q", len(payload)))
    out.write(payload)


def _read_section(buf: memoryview, off: int) -> tuple[bytes, int]:
    if off + 8 > len(buf):
        raise ChecksumMismatch("truncated section header")
    (length,) = struct.unpack_from("<Q", buf, off)
    off += 8
    if off + length > len(buf):
        raise ChecksumMismatch("truncated section payload")
    return bytes(buf[off : off + length]), off + length


def _encode_vocab(out: BytesIO, vocab: Vocabulary) -> None:
    out.write(struct.pack("<I", len(vocab)))
    for term, df in zip(vocab.terms, vocab.document_frequency):
        tb = term.encode("utf-8")
        out.write(struct.pack("<I", len(tb)))
        out.write(tb)
        out.write(struct.pack("<I", df))


def _decode_vocab(buf: memoryview, off: int) -> tuple[Vocabulary, int]:
    (v,) = struct.unpack_from("<I", buf, off)
    off += 4
    terms, dfs = [], []
    for _ in range(v):
        (tlen,) = struct.unpack_from("<I", buf, off)
        off += 4
        terms.append(bytes(buf[off : off + tlen]).decode("utf-8"))
        off += tlen
        (df,) = struct.unpack_from("<I", buf, off)
        off += 4
        dfs.append(df)
    return Vocabulary(terms=terms, document_frequency=dfs), off


def _encode_tfidf(index: TfIdfIndex) -> bytes:
    out = BytesIO()
    fb = index.field.encode("utf-8")
    out.write(struct.pack("<I", len(fb)))
    out.write(fb)
    _encode_vocab(out, index.vocabulary)
    out.write(struct.pack("<I", index.n_docs))
    for vec in index.doc_vectors:
        out.write(struct.pack("<I", len(vec.entries)))
        for tid, w in vec.entries:
            out.write(struct.pack("<Id", tid, w))
    return out.getvalue()


def _decode_tfidf(payload: bytes) -> TfIdfIndex:
    buf = memoryview(payload)
    off = 0
    (flen,) = struct.unpack_from("<I", buf, off)
    off += 4
    field = bytes(buf[off : off + flen]).decode("utf-8")
    off += flen
    vocab, off = _decode_vocab(buf, off)
    (n_docs,) = struct.unpack_from("<I", buf, off)
    off += 4
    vectors = []
    for _ in range(n_docs):
        (nnz,) = struct.unpack_from("<I", buf, off)
        off += 4
        entries = []
        for _ in range(nnz):
            tid, w = struct.unpack_from("<Id", buf, off)
            off += 12
            entries.append((tid, w))
        vectors.append(SparseVector(tuple(entries)))
    return TfIdfIndex(field=field, vocabulary=vocab, doc_vectors=vectors, n_docs=n_docs)


def _encode_pv(model: PvModel) -> bytes:
    out = BytesIO()
    _write_section(out, _json_bytes(model.config.to_dict()))
    _encode_vocab(out, model.vocab)
    n, dim = model.doc_vectors.shape
    out.write(struct.pack("<II", n, dim))
    out.write(np.ascontiguousarray(model.doc_vectors, dtype="<f4").tobytes())
    out.write(
        np.ascontiguousarray(model.word_output_vectors, dtype="<f4").tobytes()
    )
    out.write(np.ascontiguousarray(model.unigram_table, dtype="<f8").tobytes())
    return out.getvalue()


def _decode_pv(payload: bytes) -> PvModel:
    buf = memoryview(payload)
    cfg_bytes, off = _read_section(buf, 0)
    config = PvConfig.from_dict(json.loads(cfg_bytes.decode("utf-8")))
    vocab, off = _decode_vocab(buf, off)
    n, dim = struct.unpack_from("<II", buf, off)
    off += 8
    v = len(vocab)
    d_size = n * dim * 4
    w_size = v * dim * 4
    u_size = v * 8
    if off + d_size + w_size + u_size != len(buf):
        raise CountMismatch("paragraph-vector section size disagrees with counts")
    D = np.frombuffer(buf, dtype="<f4", count=n * dim, offset=off).reshape(n, dim)
    off += d_size
    W = np.frombuffer(buf, dtype="<f4", count=v * dim, offset=off).reshape(v, dim)
    off += w_size
    U = np.frombuffer(buf, dtype="<f8", count=v, offset=off)
    return PvModel(
        config=config,
        vocab=vocab,
        doc_vectors=D.copy(),
        word_output_vectors=W.copy(),
        unigram_table=U.copy(),
    )


def _corpus_to_dict(corpus: Corpus) -> dict:
    return {
        "source_label": corpus.source_label,
        "ingested_at": corpus.ingested_at,
        "posts": [
            {
                "id": p.id,
                "title": p.title,
                "body": p.body,
                "created_at": p.created_at,
                "comments": [
                    {"text": c.text, "likes": c.likes, "dislikes": c.dislikes}
                    for c in p.comments
                ],
            }
            for p in corpus.posts
        ],
    }


def _corpus_from_dict(d: dict) -> Corpus:
    posts = [
        Post(
            id=p["id"],
            title=p["title"],
            body=p["body"],
            created_at=p["created_at"],
            comments=tuple(
                Comment(text=c["text"], likes=c["likes"], dislikes=c["dislikes"])
                for c in p["comments"]
            ),
            corpus_ordinal=i,
        )
        for i, p in enumerate(d["posts"])
    ]
    return Corpus(
        posts=posts,
        source_label=d["source_label"],
        ingested_at=d["ingested_at"],
    )


def corpus_content_hash(corpus_payload: bytes) -> str:
    return hashlib.blake2b(corpus_payload, digest_size=8).hexdigest()


# --- public API ---

def save_bundle(bundle: IndexBundle, path) -> None:
    out = BytesIO()
    out.write(MAGIC)
    out.write(struct.pack("<I", bundle.manifest.format_version))
    _write_section(out, _json_bytes(bundle.manifest.to_dict()))
    _write_section(out, _json_bytes(_corpus_to_dict(bundle.corpus)))
    _write_section(out, _encode_tfidf(bundle.tfidf_title))
    _write_section(out, _encode_tfidf(bundle.tfidf_body))
    _write_section(out, _encode_pv(bundle.pv_title))
    body = out.getvalue()
    crc = zlib.crc32(body) & 0xFFFFFFFF
    try:
        with open(path, "wb") as f:
            f.write(body)
            f.write(struct.pack("<I", crc))
    except OSError as e:
        raise IoFailure(str(e)) from e


def load_bundle(path) -> IndexBundle:
    try:
        with open(path, "rb") as f:
            data = f.read()
    except OSError as e:
        raise IoFailure(str(e)) from e
    if len(data) < len(MAGIC) + 8:
        raise ChecksumMismatch("file too small to be a bundle")
    body, trailer = data[:-4], data[-4:]
    (stored_crc,) = struct.unpack("<I", trailer)
    if zlib.crc32(body) & 0xFFFFFFFF != stored_crc:
        raise ChecksumMismatch("CRC32 mismatch")
    if body[: len(MAGIC)] != MAGIC:
        raise UnsupportedVersion("bad magic bytes")
    (version,) = struct.unpack_from("<I", body, len(MAGIC))
    if version != FORMAT_VERSION:
        raise UnsupportedVersion(f"format version {version} not supported")

    buf = memoryview(body)
    off = len(MAGIC) + 4
    manifest_bytes, off = _read_section(buf, off)
    corpus_bytes, off = _read_section(buf, off)
    title_bytes, off = _read_section(buf, off)
    body_bytes, off = _read_section(buf, off)
    pv_bytes, off = _read_section(buf, off)
    if off != len(body):
        raise ChecksumMismatch("trailing garbage after last section")

    manifest = ManifestHeader.from_dict(json.loads(manifest_bytes.decode("utf-8")))
    corpus = _corpus_from_dict(json.loads(corpus_bytes.decode("utf-8")))
    tfidf_title = _decode_tfidf(title_bytes)
    tfidf_body = _decode_tfidf(body_bytes)
    pv_title = _decode_pv(pv_bytes)

    if manifest.corpus_hash != corpus_content_hash(corpus_bytes):
        raise ChecksumMismatch("corpus content hash mismatch")
    _check_counts(manifest, corpus, tfidf_title, tfidf_body, pv_title)
    return IndexBundle(
        manifest=manifest,
        corpus=corpus,
        tfidf_title=tfidf_title,
        tfidf_body=tfidf_body,
        pv_title=pv_title,
    )


def _check_counts(manifest, corpus, tfidf_title, tfidf_body, pv_title) -> None:
    checks = [
        ("n_posts vs corpus", manifest.n_posts, len(corpus.posts)),
        ("n_posts vs title index", manifest.n_posts, len(tfidf_title.doc_vectors)),
        ("n_posts vs body index", manifest.n_posts, len(tfidf_body.doc_vectors)),
        ("n_posts vs pv rows", manifest.n_posts, pv_title.n_docs),
        ("title_vocab", manifest.title_vocab, len(tfidf_title.vocabulary)),
        ("body_vocab", manifest.body_vocab, len(tfidf_body.vocabulary)),
        ("pv_dim vs matrix", manifest.pv_dim, pv_title.dim),
        ("pv_dim vs config", manifest.pv_dim, pv_title.config.dim),
    ]
    for name, want, got in checks:
        if want != got:
            raise CountMismatch(f"{name}: manifest says {want}, payload has {got}")


def build_bundle(
    corpus: Corpus,
    tok: TokenizerConfig = TokenizerConfig(),
    pv_config: PvConfig = PvConfig(),
    pipeline_defaults: PipelineConfig = PipelineConfig(),
) -> tuple[IndexBundle, TrainingReport]:
    """Offline build: both TF-IDF indexes plus the title PV model."""
    tfidf_title = build_index(corpus, "title", tok)
    tfidf_body = build_index(corpus, "body", tok)
    pv_title, report = pv_train(corpus, "title", pv_config, tok)
    corpus_payload = _json_bytes(_corpus_to_dict(corpus))
    manifest = ManifestHeader(
        format_version=FORMAT_VERSION,
        corpus_hash=corpus_content_hash(corpus_payload),
        tokenizer_config=tok,
        pv_config=pv_config,
        pipeline_defaults=pipeline_defaults,
        n_posts=len(corpus.posts),
        title_vocab=len(tfidf_title.vocabulary),
        body_vocab=len(tfidf_body.vocabulary),
        pv_dim=pv_config.dim,
    )
    bundle = IndexBundle(
        manifest=manifest,
        corpus=corpus,
        tfidf_title=tfidf_title,
        tfidf_body=tfidf_body,
        pv_title=pv_title,
    )
    return bundle, report
