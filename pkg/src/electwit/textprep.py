"""Deterministic tweet text normalization and tokenization.

Two tokenizers are exposed. ``preprocess`` is the aggressive cleanup used to
build classifier features (lowercase, drop URLs and non-ASCII, strip hashtag
and mention symbols, delete punctuation, drop stopwords). ``tokenize_raw`` is
the gentle split used wherever scores are normalized by the full word count
of a tweet: it keeps stopwords and URLs and only trims punctuation off token
edges.
"""

from __future__ import annotations

import re
import string
from importlib import resources

TokenList = list[str]
StopwordSet = frozenset[str]

# A whitespace-delimited chunk counts as a URL if it starts with http(s)://
# or a t.co shortlink; everything up to the next whitespace is removed.
_URL_RE = re.compile(r"(?:https?://\S+|\bt\.co/\S+)")

_PUNCT_DELETE = str.maketrans("", "", string.punctuation)
_EDGE_PUNCT = string.punctuation

_DEFAULT_STOPWORDS: StopwordSet | None = None


def load_stopwords(path) -> StopwordSet:
    """Load a stopword file: UTF-8, one lowercase word per line, '#' comments."""
    words = set()
    with open(path, encoding="utf-8") as fh:
        for line in fh:
            word = line.split("#", 1)[0].strip()
            if word:
                words.add(word.lower())
    return frozenset(words)


def default_stopwords() -> StopwordSet:
    """The English stopword list shipped with the package (~170 words)."""
    global _DEFAULT_STOPWORDS
    if _DEFAULT_STOPWORDS is None:
        ref = resources.files("electwit.data").joinpath("stopwords_en.txt")
        words = set()
        for line in ref.read_text(encoding="utf-8").splitlines():
            word = line.split("#", 1)[0].strip()
            if word:
                words.add(word.lower())
        _DEFAULT_STOPWORDS = frozenset(words)
    return _DEFAULT_STOPWORDS


def preprocess(text: str, stopwords: StopwordSet) -> TokenList:
    """Normalize tweet text into feature tokens.

    Steps, in order: lowercase, delete URLs, delete non-ASCII characters,
    delete '#'/'@' symbols (keeping the word that follows), delete
    punctuation, split on whitespace, drop stopwords. The result may be
    empty.
    """
    t = text.lower()
    t = _URL_RE.sub(" ", t)
    t = t.encode("ascii", "ignore").decode("ascii")
    t = t.translate(_PUNCT_DELETE)  # removes # and @ along with the rest
    return [tok for tok in t.split() if tok not in stopwords]


def tokenize_raw(text: str) -> TokenList:
    """Lowercase and split on whitespace, trimming punctuation at token edges.

    Stopwords and URLs are retained; interior punctuation (hyphens,
    apostrophes) survives. Used for whole-word-count normalization and for
    token-boundary alias matching.
    """
    tokens = []
    for chunk in text.lower().split():
        tok = chunk.strip(_EDGE_PUNCT)
        if tok:
            tokens.append(tok)
    return tokens
