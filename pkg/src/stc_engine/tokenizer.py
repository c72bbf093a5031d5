"""Rule-based text normalization and tokenization.

Deterministic and language-agnostic: Unicode normalization, optional case
folding, optional emoji and punctuation handling, and configurable suffix
stripping (stands in for particle/postposition removal). A morphological
analyzer can replace `tokenize` wholesale as long as it honors the same
config-in, token-list-out contract.
"""

from __future__ import annotations

import re
import unicodedata
from dataclasses import dataclass

_VALID_UNICODE_FORMS = ("NFC", "NFKC")

# Major emoji blocks plus the joiner/variation codepoints that only occur
# inside emoji sequences.
_EMOJI_RANGES = [
    (0x1F000, 0x1F0FF),   # mahjong, dominoes, playing cards
    (0x1F1E6, 0x1F1FF),   # regional indicators (flags)
    (0x1F300, 0x1F5FF),   # misc symbols and pictographs
    (0x1F600, 0x1F64F),   # emoticons
    (0x1F680, 0x1F6FF),   # transport
    (0x1F700, 0x1F77F),   # alchemical
    (0x1F900, 0x1F9FF),   # supplemental symbols
    (0x1FA70, 0x1FAFF),   # symbols and pictographs extended-A
    (0x2600, 0x26FF),     # misc symbols
    (0x2700, 0x27BF),     # dingbats
    (0x200D, 0x200D),     # zero-width joiner
    (0xFE0E, 0xFE0F),     # variation selectors
]

_EMOJI_RE = re.compile(
    "[" + "".join(f"{chr(lo)}-{chr(hi)}" for lo, hi in _EMOJI_RANGES) + "]"
)


@dataclass(frozen=True)
class TokenizerConfig:
    lowercase: bool = True
    unicode_normalization: str = "NFC"
    strip_punctuation: bool = True
    strip_emoji: bool = True
    stopword_suffixes: tuple[str, ...] = ()

    def __post_init__(self):
        if self.unicode_normalization not in _VALID_UNICODE_FORMS:
            raise ValueError(
                f"unicode_normalization must be one of {_VALID_UNICODE_FORMS}"
            )
        object.__setattr__(
            self, "stopword_suffixes", tuple(self.stopword_suffixes)
        )

    def to_dict(self) -> dict:
        return {
            "lowercase": self.lowercase,
            "unicode_normalization": self.unicode_normalization,
            "strip_punctuation": self.strip_punctuation,
            "strip_emoji": self.strip_emoji,
            "stopword_suffixes": list(self.stopword_suffixes),
        }

    @classmethod
    def from_dict(cls, d: dict) -> "TokenizerConfig":
        unknown = set(d) - {
            "lowercase", "unicode_normalization", "strip_punctuation",
            "strip_emoji", "stopword_suffixes",
        }
        if unknown:
            raise ValueError(f"unknown tokenizer config keys: {sorted(unknown)}")
        kwargs = dict(d)
        if "stopword_suffixes" in kwargs:
            kwargs["stopword_suffixes"] = tuple(kwargs["stopword_suffixes"])
        return cls(**kwargs)


def normalize(text: str, config: TokenizerConfig = TokenizerConfig()) -> str:
    """Unicode-normalize, optionally lowercase, optionally drop emoji."""
    out = unicodedata.normalize(config.unicode_normalization, text)
    if config.lowercase:
        out = out.lower()
    if config.strip_emoji:
        out = _EMOJI_RE.sub("", out)
    return out


def _is_separator(ch: str, config: TokenizerConfig) -> bool:
    if ch.isspace():
        return True
    if config.strip_punctuation and unicodedata.category(ch).startswith("P"):
        return True
    return False


def _strip_suffix(token: str, suffixes: tuple[str, ...]) -> str:
    """Remove the longest configured suffix, once. May return ''."""
    best = ""
    for s in suffixes:
        if s and token.endswith(s) and len(s) > len(best):
            best = s
    if best:
        return token[: -len(best)]
    return token


def tokenize(text: str, config: TokenizerConfig = TokenizerConfig()) -> list[str]:
    """Split normalized text into tokens.

    Tokens are maximal runs of non-separator characters; whitespace always
    separates, punctuation separates when strip_punctuation is on. Suffix
    stripping runs last; a token consumed entirely by its suffix is dropped.
    """
    norm = normalize(text, config)
    tokens: list[str] = []
    current: list[str] = []
    for ch in norm:
        if _is_separator(ch, config):
            if current:
                tokens.append("".join(current))
                current = []
        else:
            current.append(ch)
    if current:
        tokens.append("".join(current))

    if config.stopword_suffixes:
        stripped = [_strip_suffix(t, config.stopword_suffixes) for t in tokens]
        tokens = [t for t in stripped if t]
    return tokens
