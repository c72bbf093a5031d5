"""Exception hierarchy shared across the engine."""


class EngineError(Exception):
    """Base class for all engine errors."""


# --- ingestion ---

class MalformedRecord(EngineError):
    """Corpus input line is not a well-formed record."""


class MissingField(MalformedRecord):
    """Record lacks a required field (title or body)."""


class EmptyCorpusAfterFiltering(EngineError):
    """Every raw post was dropped by the filter rules."""


# --- indexing / training ---

class EmptyFieldCorpus(EngineError):
    """Every document tokenizes to zero tokens in the selected field."""


class EmptyTrainingCorpus(EngineError):
    """No document yields any trainable token."""


class NonFiniteLoss(EngineError):
    """Training loss diverged to NaN or infinity."""


class DimensionMismatch(EngineError):
    """Dense vectors of unequal dimension were compared."""


# --- query path ---

class EmptyQuery(EngineError):
    """Query is empty after tokenization."""


class EmptyQueryAfterOov(EngineError):
    """No query token is present in the model vocabulary."""


class EmptyCandidatePool(EngineError):
    """No candidate response could be pooled (should be unreachable)."""


# --- persistence ---

class IoFailure(EngineError):
    """Underlying file operation failed."""


class ChecksumMismatch(EngineError):
    """Stored checksum does not match the file contents."""


class UnsupportedVersion(EngineError):
    """File magic or format version is not recognized."""


class CountMismatch(EngineError):
    """Manifest counts disagree with the payload sections."""


# --- configuration ---

class ConfigError(EngineError):
    """Engine configuration file is invalid."""
