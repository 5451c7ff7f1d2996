"""Second-pass text cleaning and tokenization for the mining stages.

The cleaning order is fixed: HTML tags, then URLs, then lowercasing,
deaccenting, digit/punctuation stripping, and finally token-level removal of
junk terms, stopwords and repeated-character runs. Deaccenting happens before
stopword matching so accented stopword variants are caught by one list.
"""

from __future__ import annotations

import re
import unicodedata
from dataclasses import dataclass, replace
from importlib import resources
from pathlib import Path

_HTML_TAG = re.compile(r"<[^>]+>")
_URL = re.compile(r"(?:(?:https?|ftp)://|www\.)\S+", re.IGNORECASE)
_NON_ALPHA = re.compile(r"[^a-z\s]")
_WS = re.compile(r"\s+")


def deaccent(text: str) -> str:
    """Replace accented characters with their unaccented forms."""
    decomposed = unicodedata.normalize("NFKD", text)
    return "".join(ch for ch in decomposed if not unicodedata.combining(ch))


def normalize_word(word: str) -> str:
    return deaccent(word.strip().lower())


def load_wordlist(path: str | Path) -> frozenset[str]:
    """Read a one-word-per-line file; '#' starts a comment."""
    words = set()
    for line in Path(path).read_text(encoding="utf-8").splitlines():
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        words.add(normalize_word(line))
    return frozenset(words)


def _data_file(name: str) -> Path:
    return Path(str(resources.files("forumintel").joinpath(f"data/{name}")))


@dataclass(frozen=True)
class CleaningConfig:
    base_stopwords: frozenset[str]
    extra_stopwords: frozenset[str]
    junk_terms: frozenset[str]
    repeat_run_threshold: int = 4

    def __post_init__(self):
        if self.repeat_run_threshold < 3:
            raise ValueError("repeat_run_threshold must be >= 3")

    @property
    def all_stopwords(self) -> frozenset[str]:
        return self.base_stopwords | self.extra_stopwords

    @classmethod
    def default(
        cls,
        base_path: str | Path | None = None,
        extra_path: str | Path | None = None,
        junk_path: str | Path | None = None,
        repeat_run_threshold: int = 4,
    ) -> "CleaningConfig":
        return cls(
            base_stopwords=load_wordlist(base_path or _data_file("stopwords_pt.txt")),
            extra_stopwords=load_wordlist(extra_path or _data_file("stopwords_extra.txt")),
            junk_terms=load_wordlist(junk_path or _data_file("junk_terms.txt")),
            repeat_run_threshold=repeat_run_threshold,
        )


def extend_stopwords(config: CleaningConfig, new_words) -> CleaningConfig:
    """Return a config whose extra stopword set includes the new words."""
    normalized = {normalize_word(w) for w in new_words if w.strip()}
    return replace(config, extra_stopwords=config.extra_stopwords | normalized)


def _is_repeat_run(token: str, threshold: int) -> bool:
    return len(token) >= threshold and len(set(token)) == 1


def clean_text(text: str, config: CleaningConfig) -> str:
    text = _HTML_TAG.sub(" ", text)
    text = _URL.sub(" ", text)
    text = deaccent(text.lower())
    text = _NON_ALPHA.sub(" ", text)
    dropped = config.all_stopwords | config.junk_terms
    tokens = [
        tok for tok in text.split()
        if tok not in dropped and not _is_repeat_run(tok, config.repeat_run_threshold)
    ]
    return " ".join(tokens)


def tokenize(cleaned: str) -> list[str]:
    """Split cleaned text on whitespace, dropping single-character tokens."""
    return [tok for tok in cleaned.split() if len(tok) > 1]


def tokenize_corpus(corpus, config: CleaningConfig | None = None):
    """Fill ``cleaned_tokens`` on every post; returns the corpus."""
    if config is None:
        config = CleaningConfig.default()
    for post in corpus.posts:
        post.cleaned_tokens = tokenize(clean_text(post.full_text, config))
    return corpus
