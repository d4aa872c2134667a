import pytest

from electwit.errors import LoadError
from electwit.lexicon import (
    FOUNDATIONS,
    CategoryLexicon,
    MoralLexicon,
    category_proportions,
    default_moral_lexicon,
    default_sentiment_lexicon,
    load_category_lexicon,
    load_moral_lexicon,
    moral_scores,
)

DIC = """%
1\tfunct
2\tposemo
3\tnegemo
%
happy\t2
win*\t2
sad\t3
the\t1
pity\t2\t3
"""


@pytest.fixture()
def small_lexicon(tmp_path):
    path = tmp_path / "small.dic"
    path.write_text(DIC)
    return load_category_lexicon(path)


class TestDicParsing:
    def test_pattern_and_category_counts(self, small_lexicon):
        assert small_lexicon.categories == ("funct", "posemo", "negemo")
        assert len(small_lexicon.patterns) == 5

    def test_wildcard_prefix_matches(self, small_lexicon):
        assert small_lexicon.categories_for("winning") == {"posemo"}
        assert small_lexicon.categories_for("win") == {"posemo"}
        assert small_lexicon.categories_for("wind") == {"posemo"}

    def test_unknown_category_id_fatal_with_line(self, tmp_path):
        path = tmp_path / "bad.dic"
        path.write_text("%\n1\tposemo\n%\nok\t1\nboom\t99\n")
        with pytest.raises(LoadError, match=r":5:"):
            load_category_lexicon(path)

    def test_interior_star_fatal(self, tmp_path):
        path = tmp_path / "bad.dic"
        path.write_text("%\n1\tposemo\n%\nwi*n\t1\n")
        with pytest.raises(LoadError, match=r"\*"):
            load_category_lexicon(path)

    def test_multi_category_pattern(self, small_lexicon):
        assert small_lexicon.categories_for("pity") == {"posemo", "negemo"}

    def test_missing_markers_fatal(self, tmp_path):
        path = tmp_path / "bad.dic"
        path.write_text("1\tposemo\nhappy\t1\n")
        with pytest.raises(LoadError):
            load_category_lexicon(path)


class TestCategoryProportions:
    def test_direct_counts(self, small_lexicon):
        result = category_proportions("happy happy sad", small_lexicon)
        assert result.token_count == 3
        assert result.proportions["posemo"] == pytest.approx(2 / 3)
        assert result.proportions["negemo"] == pytest.approx(1 / 3)

    def test_no_matches(self, small_lexicon):
        result = category_proportions("hello world", small_lexicon)
        assert result.proportions == {"funct": 0.0, "posemo": 0.0, "negemo": 0.0}

    def test_all_tokens_prefix_match(self, small_lexicon):
        result = category_proportions("winning wins", small_lexicon)
        assert result.proportions["posemo"] == 1.0

    def test_empty_tweet_all_zero(self, small_lexicon):
        result = category_proportions("", small_lexicon)
        assert result.token_count == 0
        assert all(v == 0.0 for v in result.proportions.values())

    def test_bounds_invariant(self, small_lexicon):
        texts = ["happy sad the win", "the the the", "winning happy happy pity", "x y z"]
        for text in texts:
            for v in category_proportions(text, small_lexicon).proportions.values():
                assert 0.0 <= v <= 1.0

    def test_adding_pattern_is_monotone(self, small_lexicon):
        text = "gleeful happy crowd"
        before = category_proportions(text, small_lexicon).proportions["posemo"]
        richer = CategoryLexicon(
            small_lexicon.categories,
            {**{p: set(c) for p, c in small_lexicon.patterns.items()}, "gleeful": {"posemo"}},
        )
        after = category_proportions(text, richer).proportions["posemo"]
        assert after >= before

    def test_denominator_is_raw_word_count(self, small_lexicon):
        # "the" is funct but still counts in the denominator of posemo
        result = category_proportions("the happy", small_lexicon)
        assert result.proportions["posemo"] == pytest.approx(1 / 2)


MORAL_CSV = """word,foundation,score
help,care,7.0
harm,care,2.0
justice,fairness,7.5
"""


class TestMoralScores:
    @pytest.fixture()
    def mlex(self, tmp_path):
        path = tmp_path / "m.csv"
        path.write_text(MORAL_CSV)
        return load_moral_lexicon(path)

    def test_single_match_others_neutral(self, mlex):
        profile = moral_scores("help me", mlex)
        assert profile.scores["care"] == 7.0
        for f in ("fairness", "loyalty", "authority", "purity"):
            assert profile.scores[f] == 5.0

    def test_empty_tweet_all_neutral(self, mlex):
        assert set(moral_scores("", mlex).scores.values()) == {5.0}

    def test_mean_of_two(self, mlex):
        assert moral_scores("help harm", mlex).scores["care"] == pytest.approx(4.5)

    def test_repeated_token_counts_per_occurrence(self, mlex):
        assert moral_scores("help help harm", mlex).scores["care"] == pytest.approx(16 / 3)

    def test_always_five_foundations_in_range(self, mlex):
        for text in ("", "help", "justice harm help", "nothing matches"):
            scores = moral_scores(text, mlex).scores
            assert tuple(scores) == FOUNDATIONS
            assert all(1.0 <= v <= 9.0 for v in scores.values())

    def test_score_out_of_range_fatal(self, tmp_path):
        path = tmp_path / "m.csv"
        path.write_text("word,foundation,score\nhelp,care,11\n")
        with pytest.raises(LoadError):
            load_moral_lexicon(path)

    def test_unknown_foundation_fatal(self, tmp_path):
        path = tmp_path / "m.csv"
        path.write_text("word,foundation,score\nhelp,bravery,5\n")
        with pytest.raises(LoadError, match="bravery"):
            load_moral_lexicon(path)


class TestShippedLexicons:
    def test_sentiment_standin_loads(self):
        lex = default_sentiment_lexicon()
        assert {"funct", "posemo", "negemo"} <= set(lex.categories)
        assert len(lex.patterns) >= 200
        assert category_proportions("happy happy sad", lex).proportions["posemo"] == pytest.approx(2 / 3)

    def test_moral_standin_loads(self):
        mlex = default_moral_lexicon()
        assert isinstance(mlex, MoralLexicon)
        foundations = {f for f, _ in mlex.entries.values()}
        assert foundations == set(FOUNDATIONS)
