from datetime import datetime, timezone

import pytest

from electwit.corpus import Party, PartyRecord, Tweet, TweetKind
from electwit.errors import NoDataError
from electwit.mentions import attribute_parties, mention_shares, single_party_tweets, top_tags

PARTIES = [
    PartyRecord(Party.AAP, "aap_hq", ("aap", "aam aadmi party")),
    PartyRecord(Party.BJP, "bjp_hq", ("bjp", "bharatiya janta party")),
    PartyRecord(Party.INC, "inc_hq", ("congress", "inc")),
]


def _tw(tid, text):
    return Tweet(
        id=tid,
        author_id="u",
        text=text,
        created_at=datetime(2020, 2, 1, tzinfo=timezone.utc),
        kind=TweetKind.ORIGINAL,
    )


class TestTopTags:
    def test_counted_once_per_tweet(self):
        tweets = [_tw("1", "#a #a"), _tw("2", "#a #b")]
        ranked = top_tags(tweets, "hashtag", 2)
        assert [(t.tag, t.count) for t in ranked] == [("a", 2), ("b", 1)]

    def test_no_tags(self):
        assert top_tags([_tw("1", "plain text")], "hashtag", 5) == []

    def test_tie_broken_lexicographically(self):
        tweets = [_tw(str(i), "#b #a") for i in range(3)]
        ranked = top_tags(tweets, "hashtag", 1)
        assert [(t.tag, t.count) for t in ranked] == [("a", 3)]

    def test_mentions_kind_and_case_folding(self):
        tweets = [_tw("1", "@Alice hi"), _tw("2", "hi @alice and @bob")]
        ranked = top_tags(tweets, "mention", 10)
        assert [(t.tag, t.count) for t in ranked] == [("alice", 2), ("bob", 1)]

    def test_counts_non_increasing(self):
        tweets = [_tw(str(i), f"#t{i % 3} #{'common'}") for i in range(10)]
        counts = [t.count for t in top_tags(tweets, "hashtag", 10)]
        assert counts == sorted(counts, reverse=True)

    def test_bad_kind_and_k(self):
        with pytest.raises(ValueError):
            top_tags([], "emoji", 5)
        with pytest.raises(ValueError):
            top_tags([], "hashtag", 0)


class TestAttributeParties:
    def test_single_alias_hit(self):
        assert attribute_parties(_tw("1", "aap will win delhi"), PARTIES).parties == {Party.AAP}

    def test_two_party_tweet(self):
        got = attribute_parties(_tw("1", "bjp vs congress debate"), PARTIES).parties
        assert got == {Party.BJP, Party.INC}

    def test_no_whole_token_match_inside_word(self):
        assert attribute_parties(_tw("1", "aapka vote"), PARTIES).parties == set()

    def test_multiword_alias_consecutive_tokens(self):
        assert attribute_parties(_tw("1", "the aam aadmi party rally"), PARTIES).parties == {
            Party.AAP
        }
        assert attribute_parties(_tw("1", "aam x aadmi party"), PARTIES).parties == set()

    def test_punctuation_boundaries(self):
        assert attribute_parties(_tw("1", "Vote AAP!"), PARTIES).parties == {Party.AAP}


class TestSinglePartyTweets:
    def test_cardinality_filter(self):
        tweets = [_tw("1", "aap"), _tw("2", "aap and bjp"), _tw("3", "nothing")]
        got = single_party_tweets(tweets, PARTIES)
        assert [(t.id, p) for t, p in got] == [("1", Party.AAP)]

    def test_all_two_party(self):
        tweets = [_tw(str(i), "aap bjp") for i in range(4)]
        assert single_party_tweets(tweets, PARTIES) == []

    def test_ten_inc_tweets(self):
        tweets = [_tw(str(i), "vote congress today") for i in range(10)]
        got = single_party_tweets(tweets, PARTIES)
        assert len(got) == 10 and all(p is Party.INC for _, p in got)

    def test_subset_of_input(self):
        tweets = [_tw(str(i), text) for i, text in enumerate(["aap", "bjp aap", "", "inc"])]
        got = [t for t, _ in single_party_tweets(tweets, PARTIES)]
        assert set(got) <= set(tweets)


class TestMentionShares:
    def test_single_mode_shares(self):
        tweets = (
            [_tw(f"a{i}", "aap rocks") for i in range(2)]
            + [_tw("b", "bjp rally")]
            + [_tw("c", "congress meet")]
        )
        shares = mention_shares(tweets, PARTIES, mode="single")
        assert shares[Party.AAP] == 0.5
        assert shares[Party.BJP] == 0.25
        assert shares[Party.INC] == 0.25

    def test_single_mode_sums_to_one(self):
        tweets = [_tw(str(i), t) for i, t in enumerate(["aap", "bjp", "inc", "aap", "aap bjp"])]
        shares = mention_shares(tweets, PARTIES, mode="single")
        assert abs(sum(shares.values()) - 1.0) <= 1e-12

    def test_any_mode_can_exceed_one_total(self):
        shares = mention_shares([_tw("1", "aap vs bjp")], PARTIES, mode="any")
        assert shares[Party.AAP] == 1.0 and shares[Party.BJP] == 1.0
        assert shares[Party.INC] == 0.0

    def test_no_mentions_is_no_data(self):
        with pytest.raises(NoDataError):
            mention_shares([_tw("1", "weather today")], PARTIES, mode="any")

    def test_bad_mode(self):
        with pytest.raises(ValueError):
            mention_shares([], PARTIES, mode="both")
