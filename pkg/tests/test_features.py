import logging
import math

import numpy as np
import pytest

from electwit.errors import LoadError, NoDataError
from electwit.features import (
    EmbeddingTable,
    FeatureMatrix,
    LabeledSample,
    bow_transform,
    concat_features,
    embed_average,
    embedding_matrix,
    fit_bow_vocab,
    fit_tfidf,
    linguistic_features,
    linguistic_matrix,
    load_embeddings,
    moral_features,
    tfidf_transform,
)
from electwit.lexicon import default_moral_lexicon, default_sentiment_lexicon


def _samples(*token_strings):
    return [
        LabeledSample(tweet_id=str(i), tokens=tuple(s.split()), label=i % 2, raw_text=s)
        for i, s in enumerate(token_strings)
    ]


class TestBowVocab:
    def test_counts_and_cap(self):
        vocab = fit_bow_vocab(_samples("a a b", "b c"), cap=2)
        assert vocab.terms == ("a", "b")  # a:2, b:2, c:1

    def test_cap_above_distinct_terms(self):
        vocab = fit_bow_vocab(_samples("x y", "z"), cap=100)
        assert set(vocab.terms) == {"x", "y", "z"}

    def test_full_tie_breaks_lexicographically(self):
        vocab = fit_bow_vocab(_samples("c b a"), cap=2)
        assert vocab.terms == ("a", "b")

    def test_empty_inputs_rejected(self):
        with pytest.raises(NoDataError):
            fit_bow_vocab([])
        with pytest.raises(NoDataError):
            fit_bow_vocab(_samples("", ""))


class TestBowTransform:
    def test_counts(self):
        vocab = fit_bow_vocab(_samples("a a b"))
        fm = bow_transform(_samples("a a b"), vocab)
        assert fm.is_sparse
        assert fm.to_dense().tolist() == [[2.0, 1.0]]

    def test_oov_ignored(self):
        vocab = fit_bow_vocab(_samples("a b"))
        fm = bow_transform(_samples("z z"), vocab)
        assert fm.to_dense().tolist() == [[0.0, 0.0]]

    def test_empty_token_list_zero_row(self):
        vocab = fit_bow_vocab(_samples("a b"))
        fm = bow_transform(_samples(""), vocab)
        assert fm.to_dense().tolist() == [[0.0, 0.0]]

    def test_training_transform_reproduces_fit_counts(self):
        samples = _samples("a a b c", "b b c", "a c c c")
        vocab = fit_bow_vocab(samples)
        dense = bow_transform(samples, vocab).to_dense()
        for j, term in enumerate(vocab.terms):
            for i, s in enumerate(samples):
                assert dense[i, j] == list(s.tokens).count(term)


class TestTfidf:
    def test_idf_values(self):
        model = fit_tfidf(_samples("a b", "a c"))
        idf = dict(zip(model.vocab.terms, model.idf))
        assert idf["a"] == pytest.approx(1.0)  # ln(3/3) + 1
        assert idf["b"] == pytest.approx(math.log(1.5) + 1)

    def test_single_doc_weight(self):
        model = fit_tfidf(_samples("a a"))
        fm = tfidf_transform(_samples("a a"), model)
        assert fm.to_dense().tolist() == [[2.0]]  # 2 * (ln(2/2) + 1)

    def test_unseen_term_has_no_column(self):
        model = fit_tfidf(_samples("a b", "a c"))
        assert "z" not in model.vocab.index
        fm = tfidf_transform(_samples("z a"), model)
        assert fm.n_cols == len(model.vocab)
        assert fm.to_dense()[0, model.vocab.index["a"]] == pytest.approx(1.0)

    def test_cap_keeps_best_by_attained_weight(self):
        # "rare" hits weight 3*[ln(3/2)+1] ~ 4.2; "common" only 1.0
        samples = _samples("rare rare rare common", "common x", "")
        model = fit_tfidf(samples, cap=1)
        assert model.vocab.terms == ("rare",)

    def test_matches_bruteforce_recomputation(self):
        rng = np.random.default_rng(4)
        terms = [f"w{i}" for i in range(12)]
        docs = [
            " ".join(rng.choice(terms, size=rng.integers(1, 9)))
            for _ in range(20)
        ]
        samples = _samples(*docs)
        model = fit_tfidf(samples, cap=30)
        dense = tfidf_transform(samples, model).to_dense()
        n = len(samples)
        for j, term in enumerate(model.vocab.terms):
            df = sum(1 for s in samples if term in s.tokens)
            idf = math.log((1 + n) / (1 + df)) + 1.0
            for i, s in enumerate(samples):
                expected = list(s.tokens).count(term) * idf
                assert abs(dense[i, j] - expected) <= 1e-9


class TestEmbeddings:
    def _write(self, tmp_path, lines):
        path = tmp_path / "vecs.txt"
        path.write_text("\n".join(lines) + "\n")
        return path

    def test_load_valid(self, tmp_path):
        path = self._write(tmp_path, ["w1 1.0 0.0", "w2 0.0 1.0", "w3 0.5 0.5"])
        table = load_embeddings(path, dim=2)
        assert len(table.vectors) == 3
        assert table.vectors["w1"].tolist() == [1.0, 0.0]

    def test_wrong_dimension_names_line(self, tmp_path):
        path = self._write(tmp_path, ["w1 1.0 0.0", "w2 0.25"])
        with pytest.raises(LoadError, match=":2:"):
            load_embeddings(path, dim=2)

    def test_duplicate_last_wins_with_warning(self, tmp_path, caplog):
        path = self._write(tmp_path, ["w 1.0 0.0", "w 0.0 2.0"])
        with caplog.at_level(logging.WARNING):
            table = load_embeddings(path, dim=2)
        assert table.vectors["w"].tolist() == [0.0, 2.0]
        assert any("duplicate" in rec.message for rec in caplog.records)

    def test_embed_average(self):
        table = EmbeddingTable(dim=2, vectors={"w1": np.array([1.0, 0.0]), "w2": np.array([0.0, 1.0])})
        s = LabeledSample("1", ("w1", "w2"), 0)
        assert embed_average(s, table).tolist() == [0.5, 0.5]

    def test_all_oov_zero_vector(self):
        table = EmbeddingTable(dim=3, vectors={"w": np.ones(3)})
        assert embed_average(LabeledSample("1", ("x", "y"), 0), table).tolist() == [0, 0, 0]

    def test_single_in_table_token(self):
        table = EmbeddingTable(dim=2, vectors={"w": np.array([2.0, 3.0])})
        assert embed_average(LabeledSample("1", ("w", "oov"), 0), table).tolist() == [2.0, 3.0]

    def test_permutation_invariant_exactly(self):
        rng = np.random.default_rng(8)
        words = [f"w{i}" for i in range(7)]
        table = EmbeddingTable(dim=5, vectors={w: rng.normal(size=5) for w in words})
        tokens = tuple(rng.choice(words, size=12).tolist())
        base = embed_average(LabeledSample("1", tokens, 0), table)
        for _ in range(5):
            shuffled = tuple(rng.permutation(list(tokens)).tolist())
            assert np.array_equal(embed_average(LabeledSample("1", shuffled, 0), table), base)


class TestLexiconFeatures:
    def test_linguistic_vector_covers_all_categories(self):
        lex = default_sentiment_lexicon()
        vec = linguistic_features("the happy crowd", lex)
        assert vec.shape == (len(lex.categories),)
        assert np.all((vec >= 0) & (vec <= 1))

    def test_moral_vector_always_length_five(self):
        mlex = default_moral_lexicon()
        for text in ("", "justice for all", "random words"):
            assert moral_features(text, mlex).shape == (5,)

    def test_empty_tweet_defaults(self):
        lex = default_sentiment_lexicon()
        mlex = default_moral_lexicon()
        assert np.all(linguistic_features("", lex) == 0.0)
        assert np.all(moral_features("", mlex) == 5.0)


class TestConcat:
    def test_shapes_and_prefixes(self):
        samples = _samples("a b", "b c", "a a")
        vocab = fit_bow_vocab(samples)
        bow = bow_transform(samples, vocab)
        lng = linguistic_matrix(samples, default_sentiment_lexicon())
        combined = concat_features([bow, lng])
        assert combined.n_rows == 3
        assert combined.n_cols == bow.n_cols + lng.n_cols
        assert combined.column_names[0].startswith("bow:")
        assert combined.column_names[-1].startswith("linguistic:")
        assert combined.family == "bow+linguistic"
        combined.validate()

    def test_single_matrix_identity(self):
        samples = _samples("a b")
        bow = bow_transform(samples, fit_bow_vocab(samples))
        assert concat_features([bow]) is bow

    def test_row_mismatch_fatal(self):
        a = FeatureMatrix(np.zeros((2, 1)), ["x"], "f1")
        b = FeatureMatrix(np.zeros((3, 1)), ["y"], "f2")
        with pytest.raises(ValueError):
            concat_features([a, b])

    def test_dense_only_concat_stays_dense(self):
        samples = _samples("a", "b")
        lng = linguistic_matrix(samples, default_sentiment_lexicon())
        emb = embedding_matrix(samples, EmbeddingTable(dim=2, vectors={"a": np.ones(2)}))
        combined = concat_features([lng, emb])
        assert not combined.is_sparse

    def test_validate_rejects_nan(self):
        fm = FeatureMatrix(np.array([[1.0, float("nan")]]), ["a", "b"], "f")
        with pytest.raises(ValueError):
            fm.validate()
