"""Time-window machinery: daily series, fixed multi-day frames, trailing spans.

All day boundaries fall at UTC midnight by default; pass ``utc_offset_hours``
(e.g. 5.5) to shift boundaries to a local calendar. Windows are half-open
[start, end).

Only ``original`` tweets count as candidate activity; retweet/reply lines are
engagement aimed at the candidate, not activity by them. Availability (one or
more originals anywhere in the period) fixes the denominator used by the
daily and frame series.
"""

from __future__ import annotations

from dataclasses import dataclass
from datetime import date, datetime, timedelta, timezone

from electwit.corpus import CandidateRecord, Party, Tweet, TweetKind


@dataclass(frozen=True)
class Window:
    start: datetime  # inclusive
    end: datetime  # exclusive

    def __post_init__(self):
        if self.start >= self.end:
            raise ValueError(f"window start {self.start} must precede end {self.end}")

    def contains(self, ts: datetime) -> bool:
        return self.start <= ts < self.end


@dataclass(frozen=True)
class ActivenessSeries:
    party: Party
    points: list[tuple[Window, float | None]]  # None = undefined (no available candidates)


@dataclass(frozen=True)
class FrameShare:
    window: Window
    share: float | None
    short: bool  # final frame shorter than the requested span


def day_start(day: date, utc_offset_hours: float = 0.0) -> datetime:
    """UTC instant at which the given local calendar day begins."""
    return datetime(day.year, day.month, day.day, tzinfo=timezone.utc) - timedelta(
        hours=utc_offset_hours
    )


def day_of(ts: datetime, utc_offset_hours: float = 0.0) -> date:
    """Local calendar day containing a UTC instant."""
    return (ts + timedelta(hours=utc_offset_hours)).date()


def day_window(day: date, utc_offset_hours: float = 0.0) -> Window:
    start = day_start(day, utc_offset_hours)
    return Window(start, start + timedelta(days=1))


def day_range(first: date, last: date) -> list[date]:
    """Consecutive days from first to last, inclusive."""
    if last < first:
        raise ValueError("last day precedes first day")
    return [first + timedelta(days=i) for i in range((last - first).days + 1)]


def corpus_day_span(tweets: list[Tweet], utc_offset_hours: float = 0.0) -> tuple[date, date]:
    """(first, last) calendar day touched by the corpus."""
    if not tweets:
        raise ValueError("empty corpus has no day span")
    days = [day_of(tw.created_at, utc_offset_hours) for tw in tweets]
    return min(days), max(days)


def frames(
    first_day: date,
    last_day: date,
    frame_days: int = 3,
    utc_offset_hours: float = 0.0,
) -> list[tuple[Window, bool]]:
    """Tile [first_day, last_day] with consecutive frames of ``frame_days``.

    The final frame may be shorter; it is flagged. Frames partition the
    period: every instant of every covered day falls in exactly one frame.
    """
    if frame_days < 1:
        raise ValueError("frame_days must be >= 1")
    period_end = day_start(last_day, utc_offset_hours) + timedelta(days=1)
    out = []
    cursor = day_start(first_day, utc_offset_hours)
    while cursor < period_end:
        end = min(cursor + timedelta(days=frame_days), period_end)
        out.append((Window(cursor, end), end - cursor < timedelta(days=frame_days)))
        cursor = end
    return out


def bucket_by_window(tweets: list[Tweet], windows: list[Window]) -> list[list[Tweet]]:
    """Assign tweets to windows; tweets outside every window are dropped."""
    buckets: list[list[Tweet]] = [[] for _ in windows]
    for tw in tweets:
        for i, win in enumerate(windows):
            if win.contains(tw.created_at):
                buckets[i].append(tw)
                break
    return buckets


def _originals_by_author(tweets: list[Tweet]) -> dict[str, list[Tweet]]:
    by_author: dict[str, list[Tweet]] = {}
    for tw in tweets:
        if tw.kind is TweetKind.ORIGINAL:
            by_author.setdefault(tw.author_id, []).append(tw)
    return by_author


def availability(
    candidates: list[CandidateRecord], tweets: list[Tweet]
) -> dict[Party, tuple[int, int]]:
    """Per party: (candidates with >=1 original in the corpus, total candidates)."""
    active_authors = set(_originals_by_author(tweets))
    result: dict[Party, tuple[int, int]] = {}
    for party in Party:
        members = [c for c in candidates if c.party is party]
        available = sum(1 for c in members if c.handle in active_authors)
        result[party] = (available, len(members))
    return result


def daily_activeness(
    candidates: list[CandidateRecord],
    tweets: list[Tweet],
    days: list[date],
    utc_offset_hours: float = 0.0,
) -> dict[Party, ActivenessSeries]:
    """Average originals per available candidate, per day and party.

    The denominator is each party's available-candidate count over the whole
    corpus, held fixed across days. Parties with zero available candidates
    report None for every day (missing, not 0).
    """
    avail = availability(candidates, tweets)
    handles_by_party = {
        party: {c.handle for c in candidates if c.party is party} for party in Party
    }
    windows = [day_window(d, utc_offset_hours) for d in days]
    out: dict[Party, ActivenessSeries] = {}
    for party in Party:
        denom = avail[party][0]
        handles = handles_by_party[party]
        points: list[tuple[Window, float | None]] = []
        for win in windows:
            if denom == 0:
                points.append((win, None))
                continue
            n = sum(
                1
                for tw in tweets
                if tw.kind is TweetKind.ORIGINAL
                and tw.author_id in handles
                and win.contains(tw.created_at)
            )
            points.append((win, n / denom))
        out[party] = ActivenessSeries(party=party, points=points)
    return out


def frame_participation(
    candidates: list[CandidateRecord],
    tweets: list[Tweet],
    frame_days: int = 3,
    period: tuple[date, date] | None = None,
    utc_offset_hours: float = 0.0,
) -> dict[Party, list[FrameShare]]:
    """Share of available candidates tweeting at least once per frame.

    ``period`` defaults to the corpus day span. Tweeting many times within
    one frame still counts once.
    """
    first, last = period if period is not None else corpus_day_span(tweets, utc_offset_hours)
    frame_list = frames(first, last, frame_days, utc_offset_hours)
    avail = availability(candidates, tweets)
    by_author = _originals_by_author(tweets)
    party_of = {c.handle: c.party for c in candidates}

    out: dict[Party, list[FrameShare]] = {party: [] for party in Party}
    for win, short in frame_list:
        participants = dict.fromkeys(Party, 0)
        for handle, originals in by_author.items():
            party = party_of.get(handle)
            if party is None:
                continue
            if any(win.contains(tw.created_at) for tw in originals):
                participants[party] += 1
        for party in Party:
            denom = avail[party][0]
            share = participants[party] / denom if denom else None
            out[party].append(FrameShare(window=win, share=share, short=short))
    return out


def trailing_window(
    tweets: list[Tweet],
    election_day: date,
    span_days: int,
    utc_offset_hours: float = 0.0,
) -> list[Tweet]:
    """Tweets in the span of ``span_days`` days ending the day before election day.

    The window is [election_day - span_days, election_day) at local-midnight
    boundaries; a tweet exactly at election-day midnight is excluded. Output
    order follows input order.
    """
    if span_days < 1:
        raise ValueError("span_days must be >= 1")
    end = day_start(election_day, utc_offset_hours)
    start = end - timedelta(days=span_days)
    return [tw for tw in tweets if start <= tw.created_at < end]
