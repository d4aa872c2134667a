"""Data model and ingestion for archived tweet corpora.

Corpora are UTF-8 JSON Lines, one object per line:

    {"id": "...", "author_id": "...", "text": "...",
     "created_at": "2020-02-01T09:30:00+05:30", "kind": "original",
     "lat": 28.61, "lon": 77.21, "user_location": "New Delhi"}

``lat``/``lon``/``user_location`` are optional. ``author_id`` is the account
a line is attributed to: the author for ``original`` tweets, and the account
whose tweet was retweeted / replied to for ``retweet``/``reply`` lines (the
natural linkage for candidate-centric archives, where engagement is collected
per candidate handle).

Ingestion is total: malformed lines never abort a load, they are collected as
``LineError`` entries with the 1-based line number.
"""

from __future__ import annotations

import csv
import json
from dataclasses import dataclass, field
from datetime import datetime, timezone
from enum import Enum

from electwit.errors import LoadError

EPOCH = datetime(1970, 1, 1, tzinfo=timezone.utc)


class TweetKind(str, Enum):
    ORIGINAL = "original"
    RETWEET = "retweet"
    REPLY = "reply"


class Party(str, Enum):
    AAP = "AAP"
    BJP = "BJP"
    INC = "INC"


@dataclass(frozen=True)
class Tweet:
    id: str
    author_id: str
    text: str
    created_at: datetime  # timezone-aware, normalized to UTC
    kind: TweetKind
    geo: tuple[float, float] | None = None  # (lat, lon), degrees
    user_location: str | None = None


@dataclass(frozen=True)
class UserProfile:
    user_id: str
    account_created_at: datetime
    statuses_count: int
    likes_count: int
    followers_count: int
    friends_count: int


@dataclass(frozen=True)
class CandidateRecord:
    handle: str  # no leading '@'
    display_name: str
    party: Party
    constituency: str
    won: bool


@dataclass(frozen=True)
class PartyRecord:
    party: Party
    official_handle: str
    name_aliases: tuple[str, ...]  # lowercase, deduplicated, nonempty


@dataclass(frozen=True)
class EngagementStats:
    subject_id: str
    tweets: int
    retweets_received: int
    replies_received: int
    window: tuple[datetime, datetime]


@dataclass(frozen=True)
class LineError:
    line_no: int
    reason: str


@dataclass(frozen=True)
class RegionSpec:
    """Bounding box plus lowercase location substrings."""

    lat_min: float
    lat_max: float
    lon_min: float
    lon_max: float
    substrings: tuple[str, ...] = field(default=())

    def contains(self, lat: float, lon: float) -> bool:
        return self.lat_min <= lat <= self.lat_max and self.lon_min <= lon <= self.lon_max


def parse_timestamp(value: str) -> datetime:
    """Parse an ISO-8601 timestamp; naive values are taken as UTC."""
    ts = datetime.fromisoformat(value.replace("Z", "+00:00"))
    if ts.tzinfo is None:
        ts = ts.replace(tzinfo=timezone.utc)
    return ts.astimezone(timezone.utc)


def _parse_tweet_line(obj: dict) -> Tweet:
    if not isinstance(obj, dict):
        raise ValueError("line is not a JSON object")
    tid = obj.get("id")
    if not isinstance(tid, str) or not tid:
        raise ValueError("missing or empty 'id'")
    author = obj.get("author_id")
    if not isinstance(author, str) or not author:
        raise ValueError("missing or empty 'author_id'")
    text = obj.get("text")
    if not isinstance(text, str):
        raise ValueError("missing 'text'")
    raw_ts = obj.get("created_at")
    if not isinstance(raw_ts, str):
        raise ValueError("missing 'created_at'")
    try:
        created = parse_timestamp(raw_ts)
    except ValueError as exc:
        raise ValueError(f"bad 'created_at': {exc}") from None
    kind_raw = obj.get("kind")
    try:
        kind = TweetKind(kind_raw)
    except ValueError:
        raise ValueError(f"bad 'kind': {kind_raw!r}") from None

    lat, lon = obj.get("lat"), obj.get("lon")
    geo = None
    if lat is not None or lon is not None:
        if not isinstance(lat, (int, float)) or not isinstance(lon, (int, float)):
            raise ValueError("'lat'/'lon' must both be numbers when present")
        geo = (float(lat), float(lon))
    loc = obj.get("user_location")
    if loc is not None and not isinstance(loc, str):
        raise ValueError("'user_location' must be a string")
    return Tweet(tid, author, text, created, kind, geo, loc)


def load_tweets(path, schema: str = "generic") -> tuple[list[Tweet], list[LineError]]:
    """Load a JSON Lines tweet corpus.

    Every well-formed line yields one Tweet; malformed lines (bad JSON,
    missing fields, duplicate ids) become LineError entries. Output order
    equals file order; len(tweets) + len(errors) equals the line count.

    ``schema`` tags the corpus flavor (generic / candidate / party); all
    three share the same line format.
    """
    if schema not in ("generic", "candidate", "party"):
        raise ValueError(f"unknown corpus schema {schema!r}")
    tweets: list[Tweet] = []
    errors: list[LineError] = []
    seen_ids: set[str] = set()
    try:
        fh = open(path, encoding="utf-8", errors="replace")
    except OSError as exc:
        raise LoadError(f"cannot read tweet corpus {path}: {exc}") from exc
    with fh:
        for line_no, line in enumerate(fh, start=1):
            stripped = line.strip()
            if not stripped:
                errors.append(LineError(line_no, "empty line"))
                continue
            try:
                tweet = _parse_tweet_line(json.loads(stripped))
            except (json.JSONDecodeError, ValueError) as exc:
                errors.append(LineError(line_no, str(exc)))
                continue
            if tweet.id in seen_ids:
                errors.append(LineError(line_no, f"duplicate tweet id {tweet.id!r}"))
                continue
            seen_ids.add(tweet.id)
            tweets.append(tweet)
    return tweets, errors


def filter_by_location(tweets: list[Tweet], region: RegionSpec) -> list[Tweet]:
    """Keep tweets tied to the region by geo point or profile location text.

    A tweet is retained iff its geo point lies inside the bounding box, or
    its ``user_location``, lowercased, contains any of the region substrings.
    Order is preserved; tweets with neither field are excluded.
    """
    kept = []
    for tw in tweets:
        if tw.geo is not None and region.contains(*tw.geo):
            kept.append(tw)
            continue
        if tw.user_location is not None:
            loc = tw.user_location.lower()
            if any(sub in loc for sub in region.substrings):
                kept.append(tw)
    return kept


_WON_TOKENS = {"true": True, "1": True, "false": False, "0": False}
_CANDIDATE_COLUMNS = ("handle", "display_name", "party", "constituency", "won")


def load_candidates(path) -> list[CandidateRecord]:
    """Load the candidate ground-truth CSV (handle,display_name,party,constituency,won)."""
    try:
        fh = open(path, encoding="utf-8", newline="")
    except OSError as exc:
        raise LoadError(f"cannot read candidate file {path}: {exc}") from exc
    with fh:
        reader = csv.DictReader(fh)
        header = reader.fieldnames or []
        missing = [c for c in _CANDIDATE_COLUMNS if c not in header]
        if missing:
            raise LoadError(f"candidate CSV {path} missing columns: {', '.join(missing)}")
        records: list[CandidateRecord] = []
        seen: set[str] = set()
        for row_no, row in enumerate(reader, start=2):
            handle = (row["handle"] or "").strip().lstrip("@")
            if not handle:
                raise LoadError(f"{path}:{row_no}: empty handle")
            if handle in seen:
                raise LoadError(f"{path}:{row_no}: duplicate handle {handle!r}")
            seen.add(handle)
            try:
                party = Party(row["party"].strip())
            except (ValueError, AttributeError):
                raise LoadError(
                    f"{path}:{row_no}: unknown party {row.get('party')!r} "
                    f"(expected one of {', '.join(p.value for p in Party)})"
                ) from None
            won_raw = (row["won"] or "").strip().lower()
            if won_raw not in _WON_TOKENS:
                raise LoadError(f"{path}:{row_no}: bad won value {row.get('won')!r}")
            records.append(
                CandidateRecord(
                    handle=handle,
                    display_name=(row["display_name"] or "").strip(),
                    party=party,
                    constituency=(row["constituency"] or "").strip(),
                    won=_WON_TOKENS[won_raw],
                )
            )
    return records


def load_parties(path) -> list[PartyRecord]:
    """Load party metadata JSON: {"AAP": {"handle": ..., "aliases": [...]}, ...}."""
    try:
        with open(path, encoding="utf-8") as fh:
            data = json.load(fh)
    except OSError as exc:
        raise LoadError(f"cannot read party file {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise LoadError(f"party file {path} is not valid JSON: {exc}") from exc
    records = []
    for key, spec in data.items():
        try:
            party = Party(key)
        except ValueError:
            raise LoadError(f"party file {path}: unknown party key {key!r}") from None
        handle = str(spec.get("handle", "")).lstrip("@")
        aliases: list[str] = []
        for alias in spec.get("aliases", []):
            norm = str(alias).lower().strip()
            if norm and norm not in aliases:
                aliases.append(norm)
        if not aliases:
            raise LoadError(f"party file {path}: empty alias list for {key}")
        records.append(PartyRecord(party=party, official_handle=handle, name_aliases=tuple(aliases)))
    return records


def load_profiles(path) -> tuple[list[UserProfile], list[LineError]]:
    """Load profile JSONL; same totality contract as load_tweets."""
    profiles: list[UserProfile] = []
    errors: list[LineError] = []
    try:
        fh = open(path, encoding="utf-8", errors="replace")
    except OSError as exc:
        raise LoadError(f"cannot read profile file {path}: {exc}") from exc
    with fh:
        for line_no, line in enumerate(fh, start=1):
            stripped = line.strip()
            if not stripped:
                errors.append(LineError(line_no, "empty line"))
                continue
            try:
                obj = json.loads(stripped)
                uid = obj["user_id"]
                if not isinstance(uid, str) or not uid:
                    raise ValueError("missing or empty 'user_id'")
                created = parse_timestamp(obj["account_created_at"])
                counts = {}
                for key in ("statuses_count", "likes_count", "followers_count", "friends_count"):
                    val = obj[key]
                    if not isinstance(val, int) or isinstance(val, bool) or val < 0:
                        raise ValueError(f"'{key}' must be a nonnegative integer")
                    counts[key] = val
            except (json.JSONDecodeError, KeyError, ValueError, TypeError) as exc:
                errors.append(LineError(line_no, str(exc)))
                continue
            profiles.append(UserProfile(user_id=uid, account_created_at=created, **counts))
    return profiles, errors


def engagement_stats(author_id: str, tweets: list[Tweet]) -> EngagementStats:
    """Count an account's originals and the retweets/replies it received.

    Retweet and reply lines are attributed to the account they engage (see
    module docstring), so the three counts partition the author-related
    subset of the corpus.
    """
    n_orig = n_rt = n_rp = 0
    for tw in tweets:
        if tw.author_id != author_id:
            continue
        if tw.kind is TweetKind.ORIGINAL:
            n_orig += 1
        elif tw.kind is TweetKind.RETWEET:
            n_rt += 1
        else:
            n_rp += 1
    if tweets:
        start = min(tw.created_at for tw in tweets)
        end = max(tw.created_at for tw in tweets)
    else:
        start = end = EPOCH
    return EngagementStats(author_id, n_orig, n_rt, n_rp, (start, end))
