"""The five tweet feature families and feature-matrix assembly.

Families: bag-of-words counts and TF-IDF weights over capped vocabularies
(sparse), averaged pretrained word vectors, per-category lexicon proportions,
and moral-foundation scores (dense). Vocabularies and IDF weights are fitted
on the training partition only; transforms of unseen text ignore
out-of-vocabulary tokens.

The TF-IDF convention is smoothed: idf(t) = ln((1 + N) / (1 + df(t))) + 1
with N the number of training samples, and cell weight tf * idf.
"""

from __future__ import annotations

import logging
import math
from collections import Counter
from dataclasses import dataclass, field

import numpy as np
from scipy import sparse

from electwit.errors import LoadError, NoDataError
from electwit.lexicon import (
    FOUNDATIONS,
    CategoryLexicon,
    MoralLexicon,
    category_proportions,
    moral_scores,
)

log = logging.getLogger(__name__)

DEFAULT_VOCAB_CAP = 5000


@dataclass(frozen=True)
class LabeledSample:
    """One classification sample: a tweet's preprocessed tokens and label.

    ``raw_text`` is kept alongside the tokens because the lexicon-based
    families score the unfiltered text (their denominators are whole word
    counts).
    """

    tweet_id: str
    tokens: tuple[str, ...]
    label: int  # 1 = winning candidate's tweet
    raw_text: str = ""

    def __post_init__(self):
        if self.label not in (0, 1):
            raise ValueError(f"label must be 0 or 1, got {self.label!r}")


@dataclass(frozen=True)
class Vocabulary:
    terms: tuple[str, ...]
    index: dict[str, int] = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        if len(set(self.terms)) != len(self.terms):
            raise ValueError("vocabulary terms must be unique")
        object.__setattr__(self, "index", {t: i for i, t in enumerate(self.terms)})

    def __len__(self):
        return len(self.terms)


@dataclass
class FeatureMatrix:
    """Row-per-sample numeric matrix with named columns.

    ``values`` is scipy CSR for sparse count/weight families and a dense
    ndarray for embedding/proportion families.
    """

    values: object  # scipy.sparse.csr_matrix | np.ndarray
    column_names: list[str]
    family: str = ""

    @property
    def n_rows(self) -> int:
        return self.values.shape[0]

    @property
    def n_cols(self) -> int:
        return self.values.shape[1]

    @property
    def is_sparse(self) -> bool:
        return sparse.issparse(self.values)

    def validate(self) -> None:
        if self.n_cols != len(self.column_names):
            raise ValueError("column_names length does not match matrix width")
        data = self.values.data if self.is_sparse else self.values
        if not np.all(np.isfinite(data)):
            raise ValueError(f"feature matrix {self.family!r} contains NaN/Inf")

    def take_rows(self, rows) -> "FeatureMatrix":
        rows = np.asarray(rows, dtype=np.intp)
        return FeatureMatrix(self.values[rows], list(self.column_names), self.family)

    def to_dense(self) -> np.ndarray:
        if self.is_sparse:
            return np.asarray(self.values.todense(), dtype=np.float64)
        return np.asarray(self.values, dtype=np.float64)


@dataclass(frozen=True)
class TfidfModel:
    vocab: Vocabulary
    idf: np.ndarray  # aligned with vocab.terms


@dataclass(frozen=True)
class EmbeddingTable:
    dim: int
    vectors: dict[str, np.ndarray]


def fit_bow_vocab(samples: list[LabeledSample], cap: int = DEFAULT_VOCAB_CAP) -> Vocabulary:
    """Top-``cap`` terms by total occurrence count, ties broken term-ascending."""
    if not samples:
        raise NoDataError("cannot fit a vocabulary on zero samples")
    if cap < 1:
        raise ValueError("cap must be >= 1")
    counts: Counter[str] = Counter()
    for s in samples:
        counts.update(s.tokens)
    if not counts:
        raise NoDataError("samples contain no tokens; vocabulary would be empty")
    ranked = sorted(counts.items(), key=lambda item: (-item[1], item[0]))
    return Vocabulary(terms=tuple(term for term, _ in ranked[:cap]))


def _count_matrix(samples: list[LabeledSample], vocab: Vocabulary) -> sparse.csr_matrix:
    data: list[float] = []
    indices: list[int] = []
    indptr = [0]
    for s in samples:
        row = Counter(tok for tok in s.tokens if tok in vocab.index)
        for term in sorted(row):
            indices.append(vocab.index[term])
            data.append(float(row[term]))
        indptr.append(len(indices))
    mat = sparse.csr_matrix(
        (np.asarray(data), np.asarray(indices, dtype=np.int32), np.asarray(indptr, dtype=np.int32)),
        shape=(len(samples), len(vocab)),
        dtype=np.float64,
    )
    mat.sort_indices()
    return mat


def bow_transform(samples: list[LabeledSample], vocab: Vocabulary) -> FeatureMatrix:
    """Sparse term-count matrix; out-of-vocabulary tokens are ignored."""
    return FeatureMatrix(
        values=_count_matrix(samples, vocab),
        column_names=list(vocab.terms),
        family="bow",
    )


def fit_tfidf(samples: list[LabeledSample], cap: int = DEFAULT_VOCAB_CAP) -> TfidfModel:
    """Select the ``cap`` terms with the highest attained tf-idf weight.

    A term's selection score is the maximum tf(t, d) * idf(t) over training
    documents; ties break term-ascending. The stored idf applies at
    transform time.
    """
    if not samples:
        raise NoDataError("cannot fit tf-idf on zero samples")
    if cap < 1:
        raise ValueError("cap must be >= 1")
    n_docs = len(samples)
    df: Counter[str] = Counter()
    max_tf: dict[str, int] = {}
    for s in samples:
        counts = Counter(s.tokens)
        df.update(counts.keys())
        for term, tf in counts.items():
            if tf > max_tf.get(term, 0):
                max_tf[term] = tf
    if not df:
        raise NoDataError("samples contain no tokens; tf-idf vocabulary would be empty")
    idf_all = {t: math.log((1 + n_docs) / (1 + df[t])) + 1.0 for t in df}
    ranked = sorted(df, key=lambda t: (-(max_tf[t] * idf_all[t]), t))
    terms = tuple(ranked[:cap])
    vocab = Vocabulary(terms=terms)
    idf = np.asarray([idf_all[t] for t in terms], dtype=np.float64)
    return TfidfModel(vocab=vocab, idf=idf)


def tfidf_transform(samples: list[LabeledSample], model: TfidfModel) -> FeatureMatrix:
    """Sparse tf * idf matrix using the fitted vocabulary and idf weights."""
    mat = _count_matrix(samples, model.vocab)
    mat = mat @ sparse.diags(model.idf, format="csr")
    return FeatureMatrix(
        values=mat.tocsr(),
        column_names=list(model.vocab.terms),
        family="tfidf",
    )


def load_embeddings(path, dim: int = 200) -> EmbeddingTable:
    """Load a word-vector text file: per line, a word then ``dim`` reals.

    A line with the wrong number of values is fatal, naming the line.
    Duplicate words keep the last definition, with a warning.
    """
    vectors: dict[str, np.ndarray] = {}
    duplicates = 0
    try:
        fh = open(path, encoding="utf-8")
    except OSError as exc:
        raise LoadError(f"cannot read embeddings {path}: {exc}") from exc
    with fh:
        for line_no, line in enumerate(fh, start=1):
            parts = line.rstrip("\n").split(" ")
            if len(parts) < 2 and not line.strip():
                continue  # tolerate trailing blank line
            word = parts[0]
            if len(parts) - 1 != dim:
                raise LoadError(
                    f"{path}:{line_no}: expected {dim} values for {word!r}, got {len(parts) - 1}"
                )
            try:
                vec = np.asarray([float(v) for v in parts[1:]], dtype=np.float64)
            except ValueError:
                raise LoadError(f"{path}:{line_no}: non-numeric vector component") from None
            if word in vectors:
                duplicates += 1
            vectors[word] = vec
    if duplicates:
        log.warning("embeddings %s: %d duplicate words, last definition wins", path, duplicates)
    return EmbeddingTable(dim=dim, vectors=vectors)


def embed_average(sample: LabeledSample, table: EmbeddingTable) -> np.ndarray:
    """Mean vector of the sample's in-table tokens; zero vector if none.

    The matched tokens are summed in sorted order so the result is exactly
    invariant under token permutation.
    """
    matched = sorted(tok for tok in sample.tokens if tok in table.vectors)
    if not matched:
        return np.zeros(table.dim, dtype=np.float64)
    total = np.zeros(table.dim, dtype=np.float64)
    for tok in matched:
        total += table.vectors[tok]
    return total / len(matched)


def embedding_matrix(samples: list[LabeledSample], table: EmbeddingTable) -> FeatureMatrix:
    rows = np.vstack([embed_average(s, table) for s in samples]) if samples else np.zeros((0, table.dim))
    return FeatureMatrix(
        values=rows,
        column_names=[f"dim{i}" for i in range(table.dim)],
        family="word2vec",
    )


def linguistic_features(sample_raw_text: str, lex: CategoryLexicon) -> np.ndarray:
    """Category proportions of the raw text, in the lexicon's category order."""
    props = category_proportions(sample_raw_text, lex).proportions
    return np.asarray([props[c] for c in lex.categories], dtype=np.float64)


def moral_features(sample_raw_text: str, mlex: MoralLexicon) -> np.ndarray:
    """Moral-foundation scores of the raw text, in fixed foundation order."""
    profile = moral_scores(sample_raw_text, mlex).scores
    return np.asarray([profile[f] for f in FOUNDATIONS], dtype=np.float64)


def linguistic_matrix(samples: list[LabeledSample], lex: CategoryLexicon) -> FeatureMatrix:
    rows = (
        np.vstack([linguistic_features(s.raw_text, lex) for s in samples])
        if samples
        else np.zeros((0, len(lex.categories)))
    )
    return FeatureMatrix(values=rows, column_names=list(lex.categories), family="linguistic")


def moral_matrix(samples: list[LabeledSample], mlex: MoralLexicon) -> FeatureMatrix:
    rows = (
        np.vstack([moral_features(s.raw_text, mlex) for s in samples])
        if samples
        else np.zeros((0, len(FOUNDATIONS)))
    )
    return FeatureMatrix(values=rows, column_names=list(FOUNDATIONS), family="moral")


def concat_features(matrices: list[FeatureMatrix]) -> FeatureMatrix:
    """Horizontally concatenate feature families for one sample set.

    A single matrix passes through unchanged; with several, column names are
    prefixed by their family and the result is sparse if any input is.
    """
    if not matrices:
        raise ValueError("nothing to concatenate")
    if len(matrices) == 1:
        return matrices[0]
    n_rows = matrices[0].n_rows
    for m in matrices[1:]:
        if m.n_rows != n_rows:
            raise ValueError(
                f"row-count mismatch: {matrices[0].family}={n_rows}, {m.family}={m.n_rows}"
            )
    names = [f"{m.family}:{c}" for m in matrices for c in m.column_names]
    if any(m.is_sparse for m in matrices):
        values = sparse.hstack(
            [m.values if m.is_sparse else sparse.csr_matrix(m.values) for m in matrices],
            format="csr",
        )
    else:
        values = np.hstack([m.values for m in matrices])
    return FeatureMatrix(values=values, column_names=names, family="+".join(m.family for m in matrices))


def export_csv(matrix: FeatureMatrix, path) -> None:
    """Write a matrix as CSV: dense with a header, or sparse as row,col,value triples."""
    with open(path, "w", encoding="utf-8", newline="") as fh:
        if matrix.is_sparse:
            fh.write("row,col,value\n")
            coo = matrix.values.tocoo()
            for r, c, v in zip(coo.row, coo.col, coo.data):
                fh.write(f"{r},{c},{v:.12g}\n")
        else:
            fh.write(",".join(matrix.column_names) + "\n")
            for row in matrix.values:
                fh.write(",".join(f"{v:.12g}" for v in row) + "\n")
