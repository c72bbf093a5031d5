"""Paragraph vectors: PV-DBOW with negative sampling, from scratch.

Each document vector is trained to predict the document's own words
against noise words drawn from the unigram^0.75 distribution. Training is
single-threaded and bit-reproducible for a fixed seed. Query vectors are
inferred by running the same objective with the word output weights frozen.
"""

from __future__ import annotations

import hashlib
import time
from dataclasses import dataclass

import numpy as np

from .corpus import Corpus
from .errors import (
    DimensionMismatch,
    EmptyQueryAfterOov,
    EmptyTrainingCorpus,
    NonFiniteLoss,
)
from .tfidf import Vocabulary
from .tokenizer import TokenizerConfig, tokenize

_LR_FLOOR_RATIO = 0.01  # final learning rate = initial / 100


@dataclass(frozen=True)
class PvConfig:
    dim: int = 2000
    window: int = 5
    negative_samples: int = 5
    epochs: int = 20
    initial_learning_rate: float = 0.025
    min_token_count: int = 1
    infer_steps: int = 50
    rng_seed: int = 1

    def __post_init__(self):
        if self.dim < 2:
            raise ValueError("dim must be >= 2")
        for name in ("window", "negative_samples", "epochs", "min_token_count",
                     "infer_steps"):
            if getattr(self, name) < 1:
                raise ValueError(f"{name} must be positive")
        if self.initial_learning_rate <= 0.0:
            raise ValueError("initial_learning_rate must be positive")

    def to_dict(self) -> dict:
        return {
            "dim": self.dim,
            "window": self.window,
            "negative_samples": self.negative_samples,
            "epochs": self.epochs,
            "initial_learning_rate": self.initial_learning_rate,
            "min_token_count": self.min_token_count,
            "infer_steps": self.infer_steps,
            "rng_seed": self.rng_seed,
        }

    @classmethod
    def from_dict(cls, d: dict) -> "PvConfig":
        unknown = set(d) - set(cls().to_dict())
        if unknown:
            raise ValueError(f"unknown pv config keys: {sorted(unknown)}")
        return cls(**d)


@dataclass
class TrainingReport:
    per_epoch_mean_loss: list[float]
    total_examples: int
    wall_time_seconds: float


class PvModel:
    """Trained paragraph-vector model (immutable after training)."""

    def __init__(
        self,
        config: PvConfig,
        vocab: Vocabulary,
        doc_vectors: np.ndarray,
        word_output_vectors: np.ndarray,
        unigram_table: np.ndarray,
    ):
        self.config = config
        self.vocab = vocab
        self.doc_vectors = doc_vectors              # (N, dim) float32
        self.word_output_vectors = word_output_vectors  # (V, dim) float32
        self.unigram_table = unigram_table          # (V,) float64, sums to 1
        self._doc_f64: np.ndarray | None = None
        self._doc_norms: np.ndarray | None = None
        self._word_f64: np.ndarray | None = None
        self._unigram_cum: np.ndarray | None = None

    @property
    def n_docs(self) -> int:
        return self.doc_vectors.shape[0]

    @property
    def dim(self) -> int:
        return self.doc_vectors.shape[1]

    def doc_matrix_f64(self) -> np.ndarray:
        if self._doc_f64 is None:
            self._doc_f64 = self.doc_vectors.astype(np.float64)
        return self._doc_f64

    def doc_norms(self) -> np.ndarray:
        if self._doc_norms is None:
            self._doc_norms = np.linalg.norm(self.doc_matrix_f64(), axis=1)
        return self._doc_norms

    def word_matrix_f64(self) -> np.ndarray:
        if self._word_f64 is None:
            self._word_f64 = self.word_output_vectors.astype(np.float64)
        return self._word_f64

    def unigram_cumulative(self) -> np.ndarray:
        if self._unigram_cum is None:
            self._unigram_cum = np.cumsum(self.unigram_table)
        return self._unigram_cum


def _softplus(x: float) -> float:
    # -log sigmoid(x) == softplus(-x); stable for any x
    return float(np.logaddexp(0.0, x))


def _sigmoid(x):
    return 1.0 / (1.0 + np.exp(-x))


def negative_sampling_loss(
    doc_vec: np.ndarray, pos_vec: np.ndarray, neg_vecs: np.ndarray
) -> float:
    """Per-position loss: -log s(v.w+) - sum log s(-v.w-). Always >= 0."""
    loss = _softplus(-float(doc_vec @ pos_vec))
    for nv in neg_vecs:
        loss += _softplus(float(doc_vec @ nv))
    return loss


def negative_sampling_doc_grad(
    doc_vec: np.ndarray, pos_vec: np.ndarray, neg_vecs: np.ndarray
) -> np.ndarray:
    """Analytic gradient of negative_sampling_loss wrt the doc vector."""
    g = -_sigmoid(-float(doc_vec @ pos_vec)) * pos_vec
    for nv in neg_vecs:
        g = g + _sigmoid(float(doc_vec @ nv)) * nv
    return g


def _sample_negatives(
    rng: np.random.Generator, cum: np.ndarray, k: int, exclude: int
) -> np.ndarray:
    ids = np.searchsorted(cum, rng.random(k), side="right")
    return ids[ids != exclude]


def _sgd_position(
    v: np.ndarray,
    W: np.ndarray,
    wid: int,
    neg_ids: np.ndarray,
    lr: float,
    update_words: bool,
) -> float:
    """One positive + negatives update; mutates v (and W rows). Returns loss."""
    w_pos = W[wid]
    x = float(v @ w_pos)
    loss = _softplus(-x)
    g = _sigmoid(x) - 1.0          # d loss / d x
    grad_v = g * w_pos
    if update_words:
        W[wid] = w_pos - lr * g * v
    for nid in neg_ids:
        w_neg = W[nid]
        xn = float(v @ w_neg)
        loss += _softplus(xn)
        gn = _sigmoid(xn)          # d loss / d xn
        grad_v += gn * w_neg
        if update_words:
            W[nid] = w_neg - lr * gn * v
    v -= lr * grad_v
    return loss


def build_pv_vocab(doc_tokens: list[list[str]], min_count: int) -> Vocabulary:
    counts: dict[str, int] = {}
    df: dict[str, int] = {}
    for toks in doc_tokens:
        for t in toks:
            counts[t] = counts.get(t, 0) + 1
        for t in set(toks):
            df[t] = df.get(t, 0) + 1
    terms = sorted(t for t, c in counts.items() if c >= min_count)
    return Vocabulary(terms=terms, document_frequency=[df[t] for t in terms])


def train(
    corpus: Corpus,
    field: str,
    config: PvConfig,
    tok: TokenizerConfig = TokenizerConfig(),
) -> tuple[PvModel, TrainingReport]:
    """Train PV-DBOW doc vectors over one text field of the corpus."""
    start = time.monotonic()
    doc_tokens = [tokenize(getattr(p, field), tok) for p in corpus.posts]
    vocab = build_pv_vocab(doc_tokens, config.min_token_count)
    doc_ids = [
        [vocab.term_to_id[t] for t in toks if t in vocab.term_to_id]
        for toks in doc_tokens
    ]
    if not vocab.terms or all(not ids for ids in doc_ids):
        raise EmptyTrainingCorpus("no document yields trainable tokens")

    term_counts = np.zeros(len(vocab), dtype=np.float64)
    for ids in doc_ids:
        for tid in ids:
            term_counts[tid] += 1
    probs = term_counts ** 0.75
    probs /= probs.sum()
    cum = np.cumsum(probs)

    n = len(corpus.posts)
    dim = config.dim
    rng = np.random.default_rng(config.rng_seed)
    D = rng.uniform(-0.5 / dim, 0.5 / dim, size=(n, dim))
    W = rng.uniform(-0.5 / dim, 0.5 / dim, size=(len(vocab), dim))

    positions_per_epoch = sum(len(ids) for ids in doc_ids)
    total_updates = config.epochs * positions_per_epoch
    lr0 = config.initial_learning_rate
    lr_final = lr0 * _LR_FLOOR_RATIO

    per_epoch_loss = []
    done = 0
    for _epoch in range(config.epochs):
        epoch_loss = 0.0
        for d, ids in enumerate(doc_ids):
            v = D[d]
            for wid in ids:
                lr = lr0 + (lr_final - lr0) * (done / total_updates)
                neg = _sample_negatives(rng, cum, config.negative_samples, wid)
                epoch_loss += _sgd_position(v, W, wid, neg, lr, update_words=True)
                done += 1
        mean_loss = epoch_loss / positions_per_epoch
        if not np.isfinite(mean_loss):
            raise NonFiniteLoss(f"mean loss {mean_loss} at epoch {_epoch}")
        per_epoch_loss.append(mean_loss)

    model = PvModel(
        config=config,
        vocab=vocab,
        doc_vectors=D.astype(np.float32),
        word_output_vectors=W.astype(np.float32),
        unigram_table=probs,
    )
    report = TrainingReport(
        per_epoch_mean_loss=per_epoch_loss,
        total_examples=total_updates,
        wall_time_seconds=time.monotonic() - start,
    )
    return model, report


def _infer_seed(model_seed: int, token_ids: list[int]) -> int:
    payload = str(model_seed).encode() + b"\x00"
    payload += b",".join(str(i).encode() for i in token_ids)
    return int.from_bytes(hashlib.blake2b(payload, digest_size=8).digest(), "little")


def infer_vector(query_tokens: list[str], model: PvModel) -> np.ndarray:
    """Infer a doc vector for unseen text; deterministic per (model, tokens)."""
    ids = [
        model.vocab.term_to_id[t]
        for t in query_tokens
        if t in model.vocab.term_to_id
    ]
    if not ids:
        raise EmptyQueryAfterOov("no query token is in the model vocabulary")

    cfg = model.config
    rng = np.random.default_rng(_infer_seed(cfg.rng_seed, ids))
    v = rng.uniform(-0.5 / cfg.dim, 0.5 / cfg.dim, size=cfg.dim)
    W = model.word_matrix_f64()
    cum = model.unigram_cumulative()

    total = cfg.infer_steps * len(ids)
    lr0 = cfg.initial_learning_rate
    lr_final = lr0 * _LR_FLOOR_RATIO
    done = 0
    for _step in range(cfg.infer_steps):
        for wid in ids:
            lr = lr0 + (lr_final - lr0) * (done / total)
            neg = _sample_negatives(rng, cum, cfg.negative_samples, wid)
            _sgd_position(v, W, wid, neg, lr, update_words=False)
            done += 1
    return v


def cosine_dense(a: np.ndarray, b: np.ndarray) -> float:
    """Cosine of two dense vectors; 0 when either has zero norm."""
    a = np.asarray(a, dtype=np.float64)
    b = np.asarray(b, dtype=np.float64)
    if a.shape != b.shape:
        raise DimensionMismatch(f"{a.shape} vs {b.shape}")
    na = np.linalg.norm(a)
    nb = np.linalg.norm(b)
    if na == 0.0 or nb == 0.0:
        return 0.0
    return float(a @ b / (na * nb))
