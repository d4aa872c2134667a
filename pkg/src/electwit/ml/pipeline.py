"""Classification pipeline: sampling, splitting, cross-validation, reporting.

The benchmark pipeline runs in this order: oversample the labeled samples to
class balance, stratified-split 0.7:0.3, fit feature extractors on the
training partition, tune each model by 5-fold cross-validated F1 over its
documented grid, refit on the full training partition, score on the test
partition.

Because oversampling precedes the split, duplicated minority rows can land
on both sides of it, which makes test F1 optimistic; the report carries this
caveat so downstream readers see it.
"""

from __future__ import annotations

import json
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from electwit import rng
from electwit.errors import DataError
from electwit.features import (
    FeatureMatrix,
    LabeledSample,
    bow_transform,
    concat_features,
    embedding_matrix,
    fit_bow_vocab,
    fit_tfidf,
    linguistic_matrix,
    moral_matrix,
    tfidf_transform,
)
from electwit.lexicon import default_moral_lexicon, default_sentiment_lexicon
from electwit.ml.models import ModelSpec, default_grid, predict, train

FEATURE_FAMILIES = ("bow", "tfidf", "word2vec", "linguistic", "moral")
DEFAULT_FEATURE_SETS = (
    "bow",
    "tfidf",
    "word2vec",
    "linguistic",
    "moral",
    "bow+linguistic",
    "bow+moral",
    "linguistic+moral",
    "bow+linguistic+moral",
)

OVERSAMPLING_NOTE = (
    "note: minority oversampling happens before the train/test split, so "
    "duplicated rows can appear on both sides and test F1 is optimistic"
)

REPORT_CSV_HEADER = "feature_set,model,f1,params_json,seed,train_n,test_n"


def samples_from_corpus(tweets, candidates, stopwords) -> list[LabeledSample]:
    """Labeled samples from candidate originals: label 1 = winning candidate.

    Retweet/reply lines and tweets by unknown authors are skipped; tokens
    come from ``textprep.preprocess`` and the raw text rides along for the
    lexicon-based families.
    """
    from electwit.corpus import TweetKind
    from electwit.textprep import preprocess

    won_by_handle = {c.handle: c.won for c in candidates}
    samples = []
    for tw in tweets:
        if tw.kind is not TweetKind.ORIGINAL:
            continue
        won = won_by_handle.get(tw.author_id)
        if won is None:
            continue
        samples.append(
            LabeledSample(
                tweet_id=tw.id,
                tokens=tuple(preprocess(tw.text, stopwords)),
                label=1 if won else 0,
                raw_text=tw.text,
            )
        )
    return samples


@dataclass
class Dataset:
    features: FeatureMatrix
    labels: np.ndarray
    sample_ids: list[str]

    def __post_init__(self):
        self.labels = np.asarray(self.labels, dtype=np.int64)

    @property
    def n(self) -> int:
        return int(self.labels.size)

    def validate(self) -> None:
        if self.features.n_rows != self.labels.size or len(self.sample_ids) != self.labels.size:
            raise ValueError("features, labels and sample_ids disagree on length")
        if not np.all((self.labels == 0) | (self.labels == 1)):
            raise ValueError("labels must be binary")
        self.features.validate()

    def take(self, idx) -> "Dataset":
        idx = np.asarray(idx, dtype=np.intp)
        return Dataset(
            features=self.features.take_rows(idx),
            labels=self.labels[idx],
            sample_ids=[self.sample_ids[i] for i in idx],
        )


def oversample_indices(labels, seed: int) -> np.ndarray:
    """Row indices realizing seeded random oversampling to class balance.

    The result keeps every original row in order, then appends minority rows
    drawn with replacement until the class counts match.
    """
    labels = np.asarray(labels, dtype=np.int64)
    n_pos = int(np.sum(labels == 1))
    n_neg = int(np.sum(labels == 0))
    if n_pos == 0 or n_neg == 0:
        raise ValueError("oversampling requires both classes present")
    base = np.arange(labels.size, dtype=np.int64)
    if n_pos == n_neg:
        return base
    minority = 1 if n_pos < n_neg else 0
    need = abs(n_pos - n_neg)
    pool = np.nonzero(labels == minority)[0]
    extras = rng.generator(seed, "oversample").choice(pool, size=need, replace=True)
    return np.concatenate([base, extras])


def random_oversample(dataset: Dataset, seed: int) -> Dataset:
    """Duplicate minority rows (seeded, with replacement) until classes balance."""
    return dataset.take(oversample_indices(dataset.labels, seed))


def _apportion(class_sizes: list[int], fraction: float, total: int) -> list[int]:
    """Largest-remainder split of ``total`` across classes proportional to size."""
    quotas = [size * fraction for size in class_sizes]
    counts = [int(q) for q in quotas]
    leftover = total - sum(counts)
    order = sorted(range(len(quotas)), key=lambda i: (-(quotas[i] - counts[i]), i))
    for i in order[:leftover]:
        counts[i] += 1
    return counts


def stratified_split_indices(
    labels, test_fraction: float, seed: int
) -> tuple[np.ndarray, np.ndarray]:
    """Seeded stratified partition preserving class proportions within one sample.

    Returns (train_idx, test_idx), each sorted ascending; they are disjoint
    and their union is the full index range.
    """
    if not 0.0 < test_fraction < 1.0:
        raise ValueError("test_fraction must be in (0, 1)")
    labels = np.asarray(labels, dtype=np.int64)
    class_idx = [np.nonzero(labels == c)[0] for c in (0, 1)]
    for c, idx in zip((0, 1), class_idx):
        if idx.size < 2:
            raise ValueError(f"class {c} has fewer than 2 samples; cannot split")
    total_test = int(round(labels.size * test_fraction))
    per_class = _apportion([idx.size for idx in class_idx], test_fraction, total_test)
    gen = rng.generator(seed, "split")
    test_parts, train_parts = [], []
    for idx, k in zip(class_idx, per_class):
        k = min(max(k, 1), idx.size - 1)  # both partitions keep >=1 of each class
        shuffled = gen.permutation(idx)
        test_parts.append(shuffled[:k])
        train_parts.append(shuffled[k:])
    train_idx = np.sort(np.concatenate(train_parts))
    test_idx = np.sort(np.concatenate(test_parts))
    return train_idx, test_idx


def stratified_split(
    dataset: Dataset, test_fraction: float = 0.3, seed: int = 0
) -> tuple[Dataset, Dataset]:
    train_idx, test_idx = stratified_split_indices(dataset.labels, test_fraction, seed)
    return dataset.take(train_idx), dataset.take(test_idx)


def f1_score(y_true, y_pred, positive_class: int = 1) -> float:
    """Harmonic mean of precision and recall for the positive class.

    Defined as 0 when precision + recall is 0 (no true or predicted
    positives).
    """
    yt = np.asarray(y_true)
    yp = np.asarray(y_pred)
    if yt.size != yp.size:
        raise ValueError(f"length mismatch: {yt.size} true vs {yp.size} predicted")
    if yt.size == 0:
        raise ValueError("cannot score empty predictions")
    tp = int(np.sum((yp == positive_class) & (yt == positive_class)))
    fp = int(np.sum((yp == positive_class) & (yt != positive_class)))
    fn = int(np.sum((yp != positive_class) & (yt == positive_class)))
    denom = 2 * tp + fp + fn
    return 2 * tp / denom if denom else 0.0


def stratified_kfold_indices(labels, k: int, seed: int) -> list[tuple[np.ndarray, np.ndarray]]:
    """k stratified folds as (train_idx, val_idx) pairs.

    Each class must have at least k members so every fold sees both classes.
    """
    labels = np.asarray(labels, dtype=np.int64)
    if k < 2:
        raise ValueError("k must be >= 2")
    gen = rng.generator(seed, "kfold")
    fold_members: list[list[np.ndarray]] = [[] for _ in range(k)]
    for c in (0, 1):
        idx = np.nonzero(labels == c)[0]
        if idx.size < k:
            raise ValueError(
                f"class {c} has {idx.size} samples; stratified {k}-fold is infeasible"
            )
        shuffled = gen.permutation(idx)
        for f in range(k):
            fold_members[f].append(shuffled[f::k])
    folds = [np.sort(np.concatenate(parts)) for parts in fold_members]
    out = []
    all_idx = np.arange(labels.size)
    for f in range(k):
        val = folds[f]
        mask = np.ones(labels.size, dtype=bool)
        mask[val] = False
        out.append((all_idx[mask], val))
    return out


def cross_validate_grid(
    spec_grid: list[ModelSpec],
    train_data: Dataset,
    k: int = 5,
    seed: int = 0,
    threads: int = 1,
) -> ModelSpec:
    """Pick the grid point with the best mean F1 across k stratified folds.

    Ties break toward the earliest-declared spec. Fold membership comes from
    ``seed``; each (grid point, fold) fit is independent, so the grid can be
    evaluated concurrently without changing the result.
    """
    if not spec_grid:
        raise ValueError("empty specification grid")
    if train_data.n < k:
        raise ValueError(f"training set of {train_data.n} is smaller than k={k}")
    folds = stratified_kfold_indices(train_data.labels, k, seed)
    tasks = [(gi, fi) for gi in range(len(spec_grid)) for fi in range(k)]

    def run(task: tuple[int, int]) -> float:
        gi, fi = task
        tr_idx, va_idx = folds[fi]
        fold_train = train_data.take(tr_idx)
        model = train(spec_grid[gi], fold_train, threads=1)
        pred = predict(model, train_data.features.take_rows(va_idx))
        return f1_score(train_data.labels[va_idx], pred)

    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            scores = list(pool.map(run, tasks))
    else:
        scores = [run(t) for t in tasks]

    best_gi = 0
    best_mean = -1.0
    for gi in range(len(spec_grid)):
        mean = sum(scores[gi * k : (gi + 1) * k]) / k
        if mean > best_mean:
            best_mean = mean
            best_gi = gi
    return spec_grid[best_gi]


@dataclass(frozen=True)
class ReportRow:
    feature_set: str
    model: str
    f1: float
    hyperparameters: dict
    seed: int
    train_n: int
    test_n: int


@dataclass
class ModelReport:
    rows: list[ReportRow]
    seed: int
    note: str = OVERSAMPLING_NOTE

    def csv_lines(self) -> list[str]:
        lines = [REPORT_CSV_HEADER]
        for r in self.rows:
            params = json.dumps(r.hyperparameters, sort_keys=True, separators=(",", ":"))
            lines.append(
                f'{r.feature_set},{r.model},{r.f1:.6f},"{params}",{r.seed},{r.train_n},{r.test_n}'
            )
        return lines

    def write_csv(self, path) -> None:
        with open(path, "w", encoding="utf-8", newline="") as fh:
            fh.write("\n".join(self.csv_lines()) + "\n")


class _FeatureBuilder:
    """Fits each family once on the training samples, then transforms both sides."""

    def __init__(self, train_samples, lexicon, moral_lexicon, embeddings, bow_cap, tfidf_cap):
        self._train = train_samples
        self._lexicon = lexicon
        self._moral = moral_lexicon
        self._embeddings = embeddings
        self._caps = {"bow": bow_cap, "tfidf": tfidf_cap}
        self._fitted: dict[str, object] = {}

    def _fit(self, family: str):
        if family in self._fitted:
            return self._fitted[family]
        if family == "bow":
            fitted = fit_bow_vocab(self._train, self._caps["bow"])
        elif family == "tfidf":
            fitted = fit_tfidf(self._train, self._caps["tfidf"])
        elif family == "word2vec":
            if self._embeddings is None:
                raise DataError("feature family 'word2vec' requires an embeddings file")
            fitted = self._embeddings
        elif family == "linguistic":
            fitted = self._lexicon
        elif family == "moral":
            fitted = self._moral
        else:
            raise ValueError(
                f"unknown feature family {family!r}; expected one of {FEATURE_FAMILIES}"
            )
        self._fitted[family] = fitted
        return fitted

    def matrix(self, feature_set: str, samples) -> FeatureMatrix:
        mats = []
        for family in feature_set.split("+"):
            fitted = self._fit(family)
            if family == "bow":
                mats.append(bow_transform(samples, fitted))
            elif family == "tfidf":
                mats.append(tfidf_transform(samples, fitted))
            elif family == "word2vec":
                mats.append(embedding_matrix(samples, fitted))
            elif family == "linguistic":
                mats.append(linguistic_matrix(samples, fitted))
            else:
                mats.append(moral_matrix(samples, fitted))
        return concat_features(mats)


def run_benchmark(
    samples: list[LabeledSample],
    feature_sets: list[str],
    models: list[str],
    seed: int,
    *,
    lexicon=None,
    moral_lexicon=None,
    embeddings=None,
    bow_cap: int = 5000,
    tfidf_cap: int = 5000,
    test_fraction: float = 0.3,
    cv_folds: int = 5,
    threads: int = 1,
    trained_models: dict | None = None,
) -> ModelReport:
    """Full pipeline over every (feature set, model) pair; returns the report.

    Feature sets are family names from {bow, tfidf, word2vec, linguistic,
    moral}, optionally joined with '+'. ``models`` are ModelSpec kinds; each
    is tuned over its documented grid. ``lexicon``/``moral_lexicon`` default
    to the stand-ins shipped with the package. When ``trained_models`` is a
    dict, the refitted model and its spec are stored into it under
    (feature_set, kind).
    """
    if not samples:
        raise DataError("no labeled samples to benchmark")
    for fs in feature_sets:
        for family in fs.split("+"):
            if family not in FEATURE_FAMILIES:
                raise ValueError(f"unknown feature family {family!r} in {fs!r}")
    if lexicon is None:
        lexicon = default_sentiment_lexicon()
    if moral_lexicon is None:
        moral_lexicon = default_moral_lexicon()

    labels = np.asarray([s.label for s in samples], dtype=np.int64)
    os_idx = oversample_indices(labels, rng.child_seed(seed, "oversample"))
    balanced = [samples[i] for i in os_idx]
    bal_labels = labels[os_idx]

    train_idx, test_idx = stratified_split_indices(
        bal_labels, test_fraction, rng.child_seed(seed, "split")
    )
    train_samples = [balanced[i] for i in train_idx]
    test_samples = [balanced[i] for i in test_idx]
    train_labels = bal_labels[train_idx]
    test_labels = bal_labels[test_idx]

    builder = _FeatureBuilder(train_samples, lexicon, moral_lexicon, embeddings, bow_cap, tfidf_cap)

    rows: list[ReportRow] = []
    for feature_set in feature_sets:
        train_matrix = builder.matrix(feature_set, train_samples)
        test_matrix = builder.matrix(feature_set, test_samples)
        train_ds = Dataset(train_matrix, train_labels, [s.tweet_id for s in train_samples])
        test_ds = Dataset(test_matrix, test_labels, [s.tweet_id for s in test_samples])
        for kind in models:
            model_seed = rng.child_seed(seed, "model", feature_set, kind)
            grid = default_grid(kind, seed=model_seed)
            best = cross_validate_grid(
                grid,
                train_ds,
                k=cv_folds,
                seed=rng.child_seed(seed, "cv", feature_set, kind),
                threads=threads,
            )
            model = train(best, train_ds, threads=threads)
            if trained_models is not None:
                trained_models[(feature_set, kind)] = (model, best)
            pred = predict(model, test_ds.features)
            rows.append(
                ReportRow(
                    feature_set=feature_set,
                    model=kind,
                    f1=f1_score(test_labels, pred),
                    hyperparameters=best.hyperparameters,
                    seed=seed,
                    train_n=train_ds.n,
                    test_n=test_ds.n,
                )
            )
    return ModelReport(rows=rows, seed=seed)
