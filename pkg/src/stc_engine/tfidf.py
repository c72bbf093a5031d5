"""Sparse TF-IDF indexing and cosine similarity.

Weighting is the textbook form: tf = raw term count, idf = ln(N/df), no
smoothing. Document vectors are L2-normalized at build time so query-time
cosine reduces to a sparse dot product.
"""

from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass, field as _field

from .corpus import Corpus
from .errors import EmptyFieldCorpus
from .tokenizer import TokenizerConfig, tokenize

TITLE = "title"
BODY = "body"
FIELDS = (TITLE, BODY)


@dataclass
class Vocabulary:
    terms: list[str]                  # id -> term, ids dense 0..V-1
    document_frequency: list[int]     # id -> df
    term_to_id: dict[str, int] = _field(default_factory=dict)

    def __post_init__(self):
        if not self.term_to_id:
            self.term_to_id = {t: i for i, t in enumerate(self.terms)}

    def __len__(self) -> int:
        return len(self.terms)

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, Vocabulary)
            and self.terms == other.terms
            and self.document_frequency == other.document_frequency
        )


@dataclass(frozen=True)
class SparseVector:
    """Sorted (term_id, weight) pairs; no zeros, no duplicates."""

    entries: tuple[tuple[int, float], ...] = ()

    def __post_init__(self):
        ids = [i for i, _ in self.entries]
        if ids != sorted(set(ids)):
            raise ValueError("entries must have strictly increasing term ids")
        if any(w == 0.0 for _, w in self.entries):
            raise ValueError("zero weights must not be stored")

    def __bool__(self) -> bool:
        return bool(self.entries)

    def norm(self) -> float:
        return math.sqrt(sum(w * w for _, w in self.entries))

    def scaled(self, k: float) -> "SparseVector":
        return SparseVector(tuple((i, w * k) for i, w in self.entries))


EMPTY_SPARSE = SparseVector()


@dataclass
class TfIdfIndex:
    field: str                        # "title" or "body"
    vocabulary: Vocabulary
    doc_vectors: list[SparseVector]   # by corpus_ordinal
    n_docs: int

    def idf(self, term_id: int) -> float:
        return math.log(self.n_docs / self.vocabulary.document_frequency[term_id])


def build_index(
    corpus: Corpus, field: str, tok: TokenizerConfig = TokenizerConfig()
) -> TfIdfIndex:
    """Build the TF-IDF index over one text field of the corpus."""
    if field not in FIELDS:
        raise ValueError(f"field must be one of {FIELDS}")
    doc_tokens = [tokenize(getattr(p, field), tok) for p in corpus.posts]
    if all(not toks for toks in doc_tokens):
        raise EmptyFieldCorpus(f"no document has tokens in field {field!r}")

    df: Counter[str] = Counter()
    for toks in doc_tokens:
        df.update(set(toks))
    terms = sorted(df)
    vocab = Vocabulary(terms=terms, document_frequency=[df[t] for t in terms])

    n = len(corpus.posts)
    idf = [math.log(n / d) for d in vocab.document_frequency]
    vectors = []
    for toks in doc_tokens:
        counts = Counter(toks)
        entries = []
        for term, tf in counts.items():
            tid = vocab.term_to_id[term]
            w = tf * idf[tid]
            if w != 0.0:
                entries.append((tid, w))
        entries.sort()
        vec = SparseVector(tuple(entries))
        nrm = vec.norm()
        if nrm > 0.0:
            vec = vec.scaled(1.0 / nrm)
        vectors.append(vec)
    return TfIdfIndex(field=field, vocabulary=vocab, doc_vectors=vectors, n_docs=n)


def embed_query(query_tokens: list[str], index: TfIdfIndex) -> SparseVector:
    """TF-IDF-embed query tokens in the index's space; OOV tokens ignored."""
    counts = Counter(query_tokens)
    entries = []
    for term, tf in counts.items():
        tid = index.vocabulary.term_to_id.get(term)
        if tid is None:
            continue
        w = tf * index.idf(tid)
        if w != 0.0:
            entries.append((tid, w))
    entries.sort()
    vec = SparseVector(tuple(entries))
    nrm = vec.norm()
    if nrm > 0.0:
        vec = vec.scaled(1.0 / nrm)
    return vec


def cosine_sparse(a: SparseVector, b: SparseVector) -> float:
    """Cosine of two sparse vectors; 0 when either is empty or zero-norm."""
    na, nb = a.norm(), b.norm()
    if na == 0.0 or nb == 0.0:
        return 0.0
    dot = 0.0
    i = j = 0
    ea, eb = a.entries, b.entries
    while i < len(ea) and j < len(eb):
        ia, wa = ea[i]
        ib, wb = eb[j]
        if ia == ib:
            dot += wa * wb
            i += 1
            j += 1
        elif ia < ib:
            i += 1
        else:
            j += 1
    return dot / (na * nb)
