"""Hashtag/mention extraction and keyword-based party attribution.

Tags are counted once per tweet containing them (not per occurrence). Party
attribution matches lowercase aliases at token boundaries: single-word
aliases must equal a whole token, multiword aliases must appear as
consecutive tokens. This keeps "aap" from matching inside "aapka".
"""

from __future__ import annotations

import re
from collections import Counter
from dataclasses import dataclass

from electwit.corpus import Party, PartyRecord, Tweet
from electwit.errors import NoDataError
from electwit.textprep import tokenize_raw

_TAG_RES = {
    "hashtag": re.compile(r"#(\w+)"),
    "mention": re.compile(r"@(\w+)"),
}


@dataclass(frozen=True)
class TagCount:
    tag: str  # no leading '#'/'@', case-folded
    count: int


@dataclass(frozen=True)
class PartyAttribution:
    tweet_id: str
    parties: frozenset[Party]


def top_tags(tweets: list[Tweet], kind: str, k: int) -> list[TagCount]:
    """Top-k hashtags or mentions by the number of tweets containing them.

    Sorted by count descending, ties broken by tag ascending.
    """
    if k < 1:
        raise ValueError("k must be >= 1")
    try:
        pattern = _TAG_RES[kind]
    except KeyError:
        raise ValueError(f"kind must be 'hashtag' or 'mention', got {kind!r}") from None
    counts: Counter[str] = Counter()
    for tw in tweets:
        counts.update({tag.lower() for tag in pattern.findall(tw.text)})
    ranked = sorted(counts.items(), key=lambda item: (-item[1], item[0]))
    return [TagCount(tag, n) for tag, n in ranked[:k]]


def _alias_token_lists(parties: list[PartyRecord]) -> list[tuple[Party, list[tuple[str, ...]]]]:
    return [
        (p.party, [tuple(alias.split()) for alias in p.name_aliases])
        for p in parties
    ]


def _contains_phrase(tokens: list[str], phrase: tuple[str, ...]) -> bool:
    if len(phrase) == 1:
        return phrase[0] in tokens
    n = len(phrase)
    for i in range(len(tokens) - n + 1):
        if tuple(tokens[i : i + n]) == phrase:
            return True
    return False


def attribute_parties(tweet: Tweet, parties: list[PartyRecord]) -> PartyAttribution:
    """Parties whose name or abbreviation occurs in the tweet text."""
    tokens = tokenize_raw(tweet.text)
    hit = set()
    for party, phrases in _alias_token_lists(parties):
        if any(_contains_phrase(tokens, phrase) for phrase in phrases):
            hit.add(party)
    return PartyAttribution(tweet_id=tweet.id, parties=frozenset(hit))


def single_party_tweets(
    tweets: list[Tweet], parties: list[PartyRecord]
) -> list[tuple[Tweet, Party]]:
    """Tweets whose attribution set has cardinality exactly one, in input order."""
    alias_lists = _alias_token_lists(parties)
    out = []
    for tw in tweets:
        tokens = tokenize_raw(tw.text)
        hit = [
            party
            for party, phrases in alias_lists
            if any(_contains_phrase(tokens, phrase) for phrase in phrases)
        ]
        if len(hit) == 1:
            out.append((tw, hit[0]))
    return out


def mention_shares(
    tweets: list[Tweet], parties: list[PartyRecord], mode: str = "any"
) -> dict[Party, float]:
    """Share of party mentions across the corpus.

    mode="any": share_p = tweets mentioning p / tweets mentioning at least
    one party (shares can sum past 1 because one tweet may mention several
    parties). mode="single": computed over single-party tweets only, so the
    shares sum to 1.
    """
    if mode not in ("any", "single"):
        raise ValueError(f"mode must be 'any' or 'single', got {mode!r}")
    party_list = [p.party for p in parties]
    counts = dict.fromkeys(party_list, 0)
    total = 0
    if mode == "single":
        for _, party in single_party_tweets(tweets, parties):
            counts[party] += 1
            total += 1
    else:
        for tw in tweets:
            attributed = attribute_parties(tw, parties).parties
            if attributed:
                total += 1
                for party in attributed:
                    counts[party] += 1
    if total == 0:
        raise NoDataError("no tweet mentions any party; cannot compute shares")
    return {party: counts[party] / total for party in party_list}
