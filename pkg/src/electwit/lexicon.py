"""Category-dictionary scoring: sentiment/linguistic proportions and moral scores.

Two lexicon flavors are supported:

* ``CategoryLexicon`` — a .dic-format dictionary mapping word patterns to
  named categories. Patterns are literal words or prefixes ending in ``*``.
  Scoring divides matched-token counts by the tweet's total word count
  (``tokenize_raw``), giving one proportion in [0, 1] per category.
* ``MoralLexicon`` — a CSV of word-level scores on a 1..9 scale across the
  five moral foundations (care, fairness, loyalty, authority, purity).
  Scoring averages the scores of matched tokens per foundation; foundations
  with no match report the neutral midpoint 5.0.

A small open stand-in sentiment dictionary and moral lexicon ship with the
package for tests and demos; commercially licensed dictionaries in the same
.dic layout load identically.
"""

from __future__ import annotations

import csv
from collections import defaultdict
from dataclasses import dataclass
from importlib import resources

from electwit.errors import LoadError
from electwit.textprep import tokenize_raw

FOUNDATIONS = ("care", "fairness", "loyalty", "authority", "purity")
NEUTRAL_MORAL_SCORE = 5.0


class CategoryLexicon:
    """Word-pattern dictionary with ordered categories.

    ``patterns`` maps each pattern (literal word, or prefix ending in '*')
    to the set of category names it feeds. Matching structures are built
    once at construction; instances are immutable in practice and safe to
    share across threads.
    """

    def __init__(self, categories, patterns):
        self.categories: tuple[str, ...] = tuple(categories)
        if len(set(self.categories)) != len(self.categories):
            raise ValueError("duplicate category names")
        self.patterns: dict[str, frozenset[str]] = {
            pat: frozenset(cats) for pat, cats in patterns.items()
        }
        known = set(self.categories)
        self._literals: dict[str, frozenset[str]] = {}
        prefix_buckets: dict[str, list[tuple[str, frozenset[str]]]] = defaultdict(list)
        for pat, cats in self.patterns.items():
            if not cats:
                raise ValueError(f"pattern {pat!r} maps to no category")
            unknown = cats - known
            if unknown:
                raise ValueError(f"pattern {pat!r} cites unknown categories {sorted(unknown)}")
            if pat.endswith("*"):
                stem = pat[:-1]
                prefix_buckets[stem[0]].append((stem, cats))
            else:
                self._literals[pat] = cats
        self._prefixes = {first: tuple(items) for first, items in prefix_buckets.items()}

    def categories_for(self, token: str) -> set[str]:
        """Category names matched by one token (literal equality or prefix)."""
        cats: set[str] = set()
        hit = self._literals.get(token)
        if hit:
            cats.update(hit)
        if token:
            for stem, stem_cats in self._prefixes.get(token[0], ()):
                if token.startswith(stem):
                    cats.update(stem_cats)
        return cats


@dataclass(frozen=True)
class CategoryProportions:
    proportions: dict[str, float]  # category -> share of tokens in [0, 1]
    token_count: int


@dataclass(frozen=True)
class MoralLexicon:
    entries: dict[str, tuple[str, float]]  # word -> (foundation, score in [1, 9])


@dataclass(frozen=True)
class MoralProfile:
    scores: dict[str, float]  # exactly the five foundations, each in [1, 9]


def load_category_lexicon(path) -> CategoryLexicon:
    """Parse a .dic category dictionary.

    Layout: a '%' line, numbered category declarations ("id<TAB>name"),
    a '%' line, then pattern lines ("pattern<TAB>id [id ...]"). Wildcards
    are trailing-asterisk prefixes only. Unknown category ids and misplaced
    asterisks are fatal, with the offending line number.
    """
    try:
        with open(path, encoding="utf-8") as fh:
            lines = fh.read().splitlines()
    except OSError as exc:
        raise LoadError(f"cannot read lexicon {path}: {exc}") from exc

    marks = [i for i, line in enumerate(lines) if line.strip() == "%"]
    if len(marks) < 2:
        raise LoadError(f"lexicon {path}: expected two '%' marker lines")
    cat_lines = lines[marks[0] + 1 : marks[1]]
    pattern_lines = lines[marks[1] + 1 :]

    id_to_name: dict[str, str] = {}
    names: list[str] = []
    for offset, line in enumerate(cat_lines):
        line_no = marks[0] + 2 + offset
        if not line.strip() or line.lstrip().startswith("//"):
            continue
        parts = line.split()
        if len(parts) != 2:
            raise LoadError(f"{path}:{line_no}: bad category line {line!r}")
        cid, name = parts
        if cid in id_to_name:
            raise LoadError(f"{path}:{line_no}: duplicate category id {cid}")
        if name in names:
            raise LoadError(f"{path}:{line_no}: duplicate category name {name!r}")
        id_to_name[cid] = name
        names.append(name)

    patterns: dict[str, set[str]] = defaultdict(set)
    for offset, line in enumerate(pattern_lines):
        line_no = marks[1] + 2 + offset
        if not line.strip() or line.lstrip().startswith("//"):
            continue
        parts = line.split()
        if len(parts) < 2:
            raise LoadError(f"{path}:{line_no}: pattern line needs at least one category id")
        pat = parts[0].lower()
        star = pat.find("*")
        if star != -1 and star != len(pat) - 1:
            raise LoadError(f"{path}:{line_no}: '*' only allowed at end of pattern {pat!r}")
        if pat == "*":
            raise LoadError(f"{path}:{line_no}: wildcard needs a nonempty stem")
        for cid in parts[1:]:
            if cid not in id_to_name:
                raise LoadError(f"{path}:{line_no}: unknown category id {cid}")
            patterns[pat].add(id_to_name[cid])

    return CategoryLexicon(names, patterns)


def default_sentiment_lexicon() -> CategoryLexicon:
    """The stand-in sentiment dictionary shipped with the package."""
    ref = resources.files("electwit.data").joinpath("sentiment.dic")
    with resources.as_file(ref) as path:
        return load_category_lexicon(path)


def category_proportions(tweet_text: str, lex: CategoryLexicon) -> CategoryProportions:
    """Per-category share of a tweet's tokens matching the lexicon.

    Tokens come from ``tokenize_raw`` so the denominator is the tweet's
    total word count. One token can feed several categories; within one
    category a token counts once no matter how many patterns it matches.
    An empty tweet scores 0 everywhere.
    """
    tokens = tokenize_raw(tweet_text)
    counts = dict.fromkeys(lex.categories, 0)
    for tok in tokens:
        for cat in lex.categories_for(tok):
            counts[cat] += 1
    n = len(tokens)
    if n == 0:
        props = {cat: 0.0 for cat in lex.categories}
    else:
        props = {cat: counts[cat] / n for cat in lex.categories}
    return CategoryProportions(proportions=props, token_count=n)


def load_moral_lexicon(path) -> MoralLexicon:
    """Load a moral lexicon CSV with columns word,foundation,score."""
    try:
        fh = open(path, encoding="utf-8", newline="")
    except OSError as exc:
        raise LoadError(f"cannot read moral lexicon {path}: {exc}") from exc
    entries: dict[str, tuple[str, float]] = {}
    with fh:
        reader = csv.DictReader(fh)
        for col in ("word", "foundation", "score"):
            if col not in (reader.fieldnames or []):
                raise LoadError(f"moral lexicon {path} missing column {col!r}")
        for row_no, row in enumerate(reader, start=2):
            word = (row["word"] or "").strip().lower()
            foundation = (row["foundation"] or "").strip().lower()
            if foundation not in FOUNDATIONS:
                raise LoadError(f"{path}:{row_no}: unknown foundation {row['foundation']!r}")
            try:
                score = float(row["score"])
            except (TypeError, ValueError):
                raise LoadError(f"{path}:{row_no}: bad score {row['score']!r}") from None
            if not 1.0 <= score <= 9.0:
                raise LoadError(f"{path}:{row_no}: score {score} outside [1, 9]")
            if not word:
                raise LoadError(f"{path}:{row_no}: empty word")
            entries[word] = (foundation, score)
    return MoralLexicon(entries=entries)


def default_moral_lexicon() -> MoralLexicon:
    ref = resources.files("electwit.data").joinpath("moral_lexicon.csv")
    with resources.as_file(ref) as path:
        return load_moral_lexicon(path)


def moral_scores(tweet_text: str, mlex: MoralLexicon) -> MoralProfile:
    """Mean expressed-moral score per foundation, neutral 5.0 when unmatched.

    Matching is literal, on ``tokenize_raw`` output; repeated tokens count
    each occurrence toward the mean.
    """
    sums = dict.fromkeys(FOUNDATIONS, 0.0)
    counts = dict.fromkeys(FOUNDATIONS, 0)
    for tok in tokenize_raw(tweet_text):
        entry = mlex.entries.get(tok)
        if entry is not None:
            foundation, score = entry
            sums[foundation] += score
            counts[foundation] += 1
    scores = {
        f: (sums[f] / counts[f] if counts[f] else NEUTRAL_MORAL_SCORE) for f in FOUNDATIONS
    }
    return MoralProfile(scores=scores)
