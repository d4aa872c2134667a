import json
from datetime import datetime, timezone

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from electwit.corpus import (
    EPOCH,
    CandidateRecord,
    Party,
    RegionSpec,
    Tweet,
    TweetKind,
    engagement_stats,
    filter_by_location,
    load_candidates,
    load_parties,
    load_profiles,
    load_tweets,
)
from electwit.errors import LoadError

from conftest import make_tweet_line


def _tw(tid, author="a", text="", kind=TweetKind.ORIGINAL, geo=None, loc=None, hour=12):
    return Tweet(
        id=tid,
        author_id=author,
        text=text,
        created_at=datetime(2020, 2, 1, hour, tzinfo=timezone.utc),
        kind=kind,
        geo=geo,
        user_location=loc,
    )


class TestLoadTweets:
    def test_all_lines_well_formed(self, tmp_path):
        path = tmp_path / "ok.jsonl"
        path.write_text("\n".join(make_tweet_line(i) for i in range(3)) + "\n")
        tweets, errors = load_tweets(path)
        assert len(tweets) == 3 and errors == []
        assert [t.id for t in tweets] == ["t0", "t1", "t2"]

    def test_truncated_line_reported_not_fatal(self, tmp_path):
        path = tmp_path / "bad.jsonl"
        lines = [make_tweet_line(0), make_tweet_line(1), '{"id": "t2", "author']
        path.write_text("\n".join(lines) + "\n")
        tweets, errors = load_tweets(path)
        assert len(tweets) == 2
        assert len(errors) == 1 and errors[0].line_no == 3

    def test_empty_file(self, tmp_path):
        path = tmp_path / "empty.jsonl"
        path.write_text("")
        assert load_tweets(path) == ([], [])

    def test_duplicate_id_becomes_line_error(self, tmp_path):
        path = tmp_path / "dup.jsonl"
        path.write_text(make_tweet_line(1) + "\n" + make_tweet_line(1) + "\n")
        tweets, errors = load_tweets(path)
        assert len(tweets) == 1
        assert len(errors) == 1 and "duplicate" in errors[0].reason

    @pytest.mark.parametrize(
        "mutation",
        [
            {"kind": "quote"},
            {"created_at": "not-a-date"},
            {"id": ""},
            {"lat": 28.6},  # lon missing
            {"user_location": 7},
        ],
    )
    def test_field_validation(self, tmp_path, mutation):
        path = tmp_path / "bad.jsonl"
        path.write_text(make_tweet_line(0, **mutation) + "\n")
        tweets, errors = load_tweets(path)
        assert tweets == [] and len(errors) == 1

    def test_timestamps_normalized_to_utc(self, tmp_path):
        path = tmp_path / "tz.jsonl"
        path.write_text(make_tweet_line(0, created_at="2020-02-01T10:00:00+05:30") + "\n")
        tweets, _ = load_tweets(path)
        assert tweets[0].created_at == datetime(2020, 2, 1, 4, 30, tzinfo=timezone.utc)

    def test_missing_file_is_fatal(self, tmp_path):
        with pytest.raises(LoadError):
            load_tweets(tmp_path / "nope.jsonl")

    def test_unknown_schema_rejected(self, tmp_path):
        path = tmp_path / "x.jsonl"
        path.write_text("")
        with pytest.raises(ValueError):
            load_tweets(path, schema="stream")

    @settings(max_examples=60, deadline=None)
    @given(st.binary(max_size=400))
    def test_ingestion_total_on_arbitrary_bytes(self, tmp_path_factory, payload):
        path = tmp_path_factory.mktemp("fuzz") / "fuzz.jsonl"
        path.write_bytes(payload)
        with open(path, encoding="utf-8", errors="replace") as fh:
            n_lines = sum(1 for _ in fh)
        tweets, errors = load_tweets(path)
        assert len(tweets) + len(errors) == n_lines


class TestFilterByLocation:
    DELHI = RegionSpec(28.40, 28.90, 76.80, 77.40, substrings=("delhi",))

    def test_substring_match_retains(self):
        tw = _tw("a", loc="New Delhi, India")
        assert filter_by_location([tw], self.DELHI) == [tw]

    def test_point_in_box_retains(self):
        # 28.40 <= 28.61 <= 28.90 and 76.80 <= 77.21 <= 77.40
        tw = _tw("a", geo=(28.61, 77.21))
        assert filter_by_location([tw], self.DELHI) == [tw]

    def test_no_rule_matches_excludes(self):
        assert filter_by_location([_tw("a", loc="Mumbai")], self.DELHI) == []

    def test_missing_both_fields_excludes(self):
        assert filter_by_location([_tw("a")], self.DELHI) == []

    def test_output_is_subsequence(self):
        tweets = [
            _tw("a", loc="delhi"),
            _tw("b", loc="pune"),
            _tw("c", geo=(28.5, 77.0)),
            _tw("d", geo=(10.0, 10.0)),
            _tw("e", loc="old delhi"),
        ]
        kept = filter_by_location(tweets, self.DELHI)
        assert [t.id for t in kept] == ["a", "c", "e"]
        it = iter(tweets)
        assert all(t in it for t in kept)


class TestLoadCandidates:
    HEADER = "handle,display_name,party,constituency,won"

    def _write(self, tmp_path, rows):
        path = tmp_path / "cands.csv"
        path.write_text("\n".join([self.HEADER, *rows]) + "\n")
        return path

    def test_two_rows(self, tmp_path):
        path = self._write(tmp_path, ["alpha,Alpha,AAP,AC-1,true", "beta,Beta,BJP,AC-2,false"])
        records = load_candidates(path)
        assert len(records) == 2
        assert records[0] == CandidateRecord("alpha", "Alpha", Party.AAP, "AC-1", True)

    def test_duplicate_handle_names_offender(self, tmp_path):
        path = self._write(tmp_path, ["alpha,A,AAP,AC-1,true", "alpha,B,BJP,AC-2,false"])
        with pytest.raises(LoadError, match="alpha"):
            load_candidates(path)

    def test_won_numeric_tokens(self, tmp_path):
        path = self._write(tmp_path, ["a,A,INC,AC-1,1", "b,B,INC,AC-2,0"])
        records = load_candidates(path)
        assert records[0].won is True and records[1].won is False

    def test_unknown_party_fatal(self, tmp_path):
        path = self._write(tmp_path, ["a,A,XYZ,AC-1,true"])
        with pytest.raises(LoadError, match="XYZ"):
            load_candidates(path)

    def test_leading_at_stripped(self, tmp_path):
        path = self._write(tmp_path, ["@alpha,A,AAP,AC-1,true"])
        assert load_candidates(path)[0].handle == "alpha"


class TestLoadParties:
    def test_round_trip(self, tmp_path):
        path = tmp_path / "parties.json"
        path.write_text(
            json.dumps(
                {
                    "AAP": {"handle": "@aap_hq", "aliases": ["AAP", "aam aadmi party", "aap"]},
                    "BJP": {"handle": "bjp_hq", "aliases": ["bjp"]},
                }
            )
        )
        records = load_parties(path)
        by_party = {r.party: r for r in records}
        assert by_party[Party.AAP].official_handle == "aap_hq"
        # lowercased and deduplicated, order preserved
        assert by_party[Party.AAP].name_aliases == ("aap", "aam aadmi party")

    def test_empty_alias_list_fatal(self, tmp_path):
        path = tmp_path / "parties.json"
        path.write_text(json.dumps({"INC": {"handle": "x", "aliases": []}}))
        with pytest.raises(LoadError):
            load_parties(path)


class TestLoadProfiles:
    def test_valid_and_invalid_lines(self, tmp_path):
        path = tmp_path / "profiles.jsonl"
        good = {
            "user_id": "u1",
            "account_created_at": "2015-06-01T00:00:00Z",
            "statuses_count": 10,
            "likes_count": 5,
            "followers_count": 100,
            "friends_count": 50,
        }
        bad = dict(good, user_id="u2", followers_count=-3)
        path.write_text(json.dumps(good) + "\n" + json.dumps(bad) + "\n")
        profiles, errors = load_profiles(path)
        assert len(profiles) == 1 and profiles[0].user_id == "u1"
        assert len(errors) == 1 and errors[0].line_no == 2


class TestEngagementStats:
    def test_counts_partition_author_tweets(self):
        tweets = (
            [_tw(f"o{i}", author="cand") for i in range(2)]
            + [_tw(f"r{i}", author="cand", kind=TweetKind.RETWEET) for i in range(3)]
            + [_tw("p0", author="cand", kind=TweetKind.REPLY)]
            + [_tw("x0", author="other")]
        )
        stats = engagement_stats("cand", tweets)
        assert (stats.tweets, stats.retweets_received, stats.replies_received) == (2, 3, 1)
        assert stats.tweets + stats.retweets_received + stats.replies_received == sum(
            1 for t in tweets if t.author_id == "cand"
        )

    def test_absent_author(self):
        assert engagement_stats("ghost", [_tw("a")]).tweets == 0

    def test_only_replies(self):
        tweets = [_tw(f"p{i}", author="c", kind=TweetKind.REPLY) for i in range(4)]
        stats = engagement_stats("c", tweets)
        assert stats.tweets == 0 and stats.replies_received == 4

    def test_empty_corpus_window(self):
        stats = engagement_stats("c", [])
        assert stats.window == (EPOCH, EPOCH)

    def test_window_spans_corpus(self):
        tweets = [_tw("a", hour=3), _tw("b", hour=20)]
        stats = engagement_stats("a", tweets)
        assert stats.window[0].hour == 3 and stats.window[1].hour == 20
