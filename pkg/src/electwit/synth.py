"""Seeded synthetic corpus generator for desk-scale verification and demos.

Emits a complete, mutually consistent input set: a tweet JSONL corpus
(candidate originals, engagement retweets/replies, party-handle activity,
public tweets mentioning parties), the candidate ground-truth CSV, the party
alias JSON, account profiles, and a small random embedding table covering
the generated vocabulary.

Winning candidates' tweets carry a planted vocabulary: each token of a
winner tweet is drawn from ``plant_vocab`` with probability ``plant_rate``
(otherwise from the shared background vocabulary). At plant_rate 0 the two
classes are indistinguishable by text; at 1.0 every winner tweet is pure
planted vocabulary. Everything is driven by one seed; identical specs
produce byte-identical files.
"""

from __future__ import annotations

import csv
import json
from dataclasses import dataclass, field
from datetime import date, timedelta
from pathlib import Path

import numpy as np

from electwit import rng
from electwit.corpus import Party
from electwit.temporal import day_start

DEFAULT_PLANT_VOCAB = (
    "jansampark",
    "vikasyatra",
    "parivartan",
    "sankalpatra",
    "jeetpath",
    "vijaygatha",
    "lokshakti",
    "navnirman",
)

# Neutral campaign-flavored background vocabulary; includes words the
# stand-in sentiment lexicon scores, so lexicon features are non-trivial.
BACKGROUND_VOCAB = (
    "road water school hospital metro bus colony market power supply bill tax "
    "job jobs economy growth budget scheme yojana booth ward seat manifesto "
    "rally speech debate door campaign volunteer worker leader minister mla "
    "voter voting vote votes poll polls polling ballot evm result results "
    "morning evening today tomorrow city street park river yamuna pollution "
    "clean air electricity subsidy ration pension farmer trader student teacher "
    "clinic safety women youth senior family home rent slum flat sector lane "
    "meeting press media news channel paper survey crowd queue booth agent "
    "promise promises work works record report card plan plans project projects "
    "great good hope support win progress development strong better happy "
    "bad sad angry corrupt failure crisis problem scam weak poor protest "
    "delhi assembly election elections constituency candidate candidates party"
).split()

PARTY_DEFAULTS = {
    Party.AAP: {"handle": "aap_delhi_hq", "aliases": ("aap", "aam aadmi party")},
    Party.BJP: {
        "handle": "bjp_delhi_hq",
        "aliases": ("bjp", "bharatiya janta party", "bhartiya janta party"),
    },
    Party.INC: {
        "handle": "inc_delhi_hq",
        "aliases": ("congress", "inc", "indian national congress"),
    },
}

HASHTAG_POOL = (
    "delhivotes",
    "delhielections",
    "delhidecides",
    "mydelhi",
    "vote2020",
    "delhipolls",
)

DELHI_BOX = (28.40, 28.90, 76.80, 77.40)  # lat_min, lat_max, lon_min, lon_max

_LOCATION_CHOICES = ("New Delhi, India", "Delhi", "Mumbai", None)
_LOCATION_WEIGHTS = (0.55, 0.2, 0.1, 0.15)


@dataclass(frozen=True)
class SynthSpec:
    n_candidates_per_party: int = 20
    win_rates: dict = field(
        default_factory=lambda: {Party.AAP: 0.8, Party.BJP: 0.35, Party.INC: 0.1}
    )
    tweets_per_candidate: float = 100.0  # Poisson mean for originals
    plant_vocab: tuple[str, ...] = DEFAULT_PLANT_VOCAB
    plant_rate: float = 0.0
    n_public_tweets: int = 400
    start_day: date = date(2020, 1, 21)
    end_day: date = date(2020, 2, 7)
    seed: int = 0
    embedding_dim: int = 50

    def __post_init__(self):
        if not 0.0 <= self.plant_rate <= 1.0:
            raise ValueError("plant_rate must be in [0, 1]")
        if self.end_day < self.start_day:
            raise ValueError("date range is empty")
        if self.n_candidates_per_party < 1:
            raise ValueError("need at least one candidate per party")
        if self.embedding_dim < 1:
            raise ValueError("embedding_dim must be >= 1")
        if not self.plant_vocab:
            raise ValueError("plant_vocab must be nonempty")


def _timestamp(gen: np.random.Generator, spec: SynthSpec):
    start = day_start(spec.start_day)
    span = day_start(spec.end_day + timedelta(days=1)) - start
    return start + timedelta(seconds=float(gen.uniform(0, span.total_seconds())))


def _tweet_tokens(gen: np.random.Generator, spec: SynthSpec, planted: bool) -> list[str]:
    n_tokens = 4 + int(gen.poisson(8))
    tokens = []
    for _ in range(n_tokens):
        if planted and gen.uniform() < spec.plant_rate:
            tokens.append(spec.plant_vocab[int(gen.integers(len(spec.plant_vocab)))])
        else:
            tokens.append(BACKGROUND_VOCAB[int(gen.integers(len(BACKGROUND_VOCAB)))])
    return tokens


def _make_candidates(spec: SynthSpec) -> list[dict]:
    candidates = []
    seat = 0
    for party in Party:
        gen = rng.generator(spec.seed, "candidates", party.value)
        n = spec.n_candidates_per_party
        n_win = int(round(spec.win_rates.get(party, 0.0) * n))
        winners = set(gen.permutation(n)[:n_win].tolist())
        for i in range(n):
            seat += 1
            handle = f"{party.value.lower()}_cand_{i + 1:02d}"
            candidates.append(
                {
                    "handle": handle,
                    "display_name": f"{party.value} Candidate {i + 1:02d}",
                    "party": party.value,
                    "constituency": f"AC-{seat:03d}",
                    "won": i in winners,
                }
            )
    return candidates


def _location_fields(gen: np.random.Generator) -> dict:
    fields: dict = {}
    loc = _LOCATION_CHOICES[int(gen.choice(len(_LOCATION_CHOICES), p=_LOCATION_WEIGHTS))]
    if loc is not None:
        fields["user_location"] = loc
    u = gen.uniform()
    if u < 0.25:
        fields["lat"] = round(float(gen.uniform(DELHI_BOX[0], DELHI_BOX[1])), 5)
        fields["lon"] = round(float(gen.uniform(DELHI_BOX[2], DELHI_BOX[3])), 5)
    elif u < 0.30:
        fields["lat"] = round(float(gen.uniform(18.9, 19.3)), 5)  # far outside the box
        fields["lon"] = round(float(gen.uniform(72.7, 73.1)), 5)
    return fields


def _profile_row(gen: np.random.Generator, user_id: str, boost: float, spec: SynthSpec) -> dict:
    created = spec.start_day - timedelta(days=int(gen.integers(400, 3000)))
    return {
        "user_id": user_id,
        "account_created_at": day_start(created).isoformat(),
        "statuses_count": int(gen.lognormal(7.5, 0.8)),
        "likes_count": int(gen.lognormal(6.5, 0.9)),
        "followers_count": int(gen.lognormal(8.0 + boost, 0.7)),
        "friends_count": int(gen.lognormal(6.0, 0.7)),
    }


def generate(spec: SynthSpec, out_dir) -> dict[str, Path]:
    """Write the synthetic input set into ``out_dir``; returns the file paths."""
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    paths = {
        "tweets": out / "tweets.jsonl",
        "candidates": out / "candidates.csv",
        "parties": out / "parties.json",
        "profiles": out / "profiles.jsonl",
        "embeddings": out / "embeddings.txt",
    }

    candidates = _make_candidates(spec)

    records: list[tuple] = []  # (created_at, payload dict without id)

    # Candidate originals, with planted vocabulary for winners.
    for cand in candidates:
        gen = rng.generator(spec.seed, "cand_tweets", cand["handle"])
        n_orig = int(gen.poisson(spec.tweets_per_candidate))
        for _ in range(n_orig):
            tokens = _tweet_tokens(gen, spec, planted=cand["won"])
            if gen.uniform() < 0.25:
                tokens.append("#" + HASHTAG_POOL[int(gen.integers(len(HASHTAG_POOL)))])
            payload = {
                "author_id": cand["handle"],
                "text": " ".join(tokens),
                "kind": "original",
            }
            records.append((_timestamp(gen, spec), payload))
        # Engagement received: retweet/reply lines attributed to the candidate.
        n_rt = int(gen.poisson(3.0 + (7.0 if cand["won"] else 0.0)))
        n_rp = int(gen.poisson(1.5 + (4.0 if cand["won"] else 0.0)))
        for kind, count in (("retweet", n_rt), ("reply", n_rp)):
            for _ in range(count):
                payload = {
                    "author_id": cand["handle"],
                    "text": "rt " + " ".join(_tweet_tokens(gen, spec, planted=False)[:5]),
                    "kind": kind,
                }
                records.append((_timestamp(gen, spec), payload))

    # Party-handle activity and engagement.
    party_engagement = {Party.AAP: (25, 12), Party.BJP: (45, 15), Party.INC: (12, 5)}
    for party in Party:
        gen = rng.generator(spec.seed, "party_tweets", party.value)
        handle = PARTY_DEFAULTS[party]["handle"]
        for _ in range(int(gen.poisson(20.0))):
            tokens = _tweet_tokens(gen, spec, planted=False)
            tokens.append("#" + HASHTAG_POOL[int(gen.integers(len(HASHTAG_POOL)))])
            records.append(
                (
                    _timestamp(gen, spec),
                    {"author_id": handle, "text": " ".join(tokens), "kind": "original"},
                )
            )
        rt_mean, rp_mean = party_engagement[party]
        for kind, mean in (("retweet", rt_mean), ("reply", rp_mean)):
            for _ in range(int(gen.poisson(mean))):
                records.append(
                    (
                        _timestamp(gen, spec),
                        {"author_id": handle, "text": "rt", "kind": kind},
                    )
                )

    # Public tweets: party mentions plus sentiment words, for the
    # mentions/sentiment/location analyses.
    gen = rng.generator(spec.seed, "public")
    posemo_by_party = {Party.AAP: 0.45, Party.BJP: 0.50, Party.INC: 0.35}
    negemo_by_party = {Party.AAP: 0.25, Party.BJP: 0.45, Party.INC: 0.40}
    posemo_words = ("great", "good", "hope", "progress", "win", "happy", "strong")
    negemo_words = ("bad", "sad", "angry", "corrupt", "scam", "failure", "weak")
    for i in range(spec.n_public_tweets):
        tokens = _tweet_tokens(gen, spec, planted=False)
        u = gen.uniform()
        mentioned: list[Party] = []
        if u < 0.70:
            mentioned = [list(Party)[int(gen.integers(3))]]
        elif u < 0.85:
            pair = gen.choice(3, size=2, replace=False)
            mentioned = [list(Party)[int(j)] for j in pair]
        for party in mentioned:
            aliases = PARTY_DEFAULTS[party]["aliases"]
            alias = aliases[int(gen.integers(len(aliases)))]
            tokens.extend(alias.split())
            if gen.uniform() < posemo_by_party[party]:
                tokens.append(posemo_words[int(gen.integers(len(posemo_words)))])
            if gen.uniform() < negemo_by_party[party]:
                tokens.append(negemo_words[int(gen.integers(len(negemo_words)))])
        if gen.uniform() < 0.4:
            tokens.append("#" + HASHTAG_POOL[int(gen.integers(len(HASHTAG_POOL)))])
        if gen.uniform() < 0.3 and mentioned:
            handle = PARTY_DEFAULTS[mentioned[0]]["handle"]
            tokens.append(f"@{handle}")
        payload = {
            "author_id": f"voter_{i + 1:05d}",
            "text": " ".join(tokens),
            "kind": "original",
        }
        payload.update(_location_fields(gen))
        records.append((_timestamp(gen, spec), payload))

    # Stable ordering, then sequential ids.
    records.sort(key=lambda item: (item[0], item[1]["author_id"], item[1]["text"]))
    with open(paths["tweets"], "w", encoding="utf-8", newline="\n") as fh:
        for n, (ts, payload) in enumerate(records, start=1):
            line = {"id": f"t{n:06d}", **payload, "created_at": ts.isoformat()}
            fh.write(json.dumps(line, ensure_ascii=False) + "\n")

    with open(paths["candidates"], "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["handle", "display_name", "party", "constituency", "won"])
        for cand in candidates:
            writer.writerow(
                [
                    cand["handle"],
                    cand["display_name"],
                    cand["party"],
                    cand["constituency"],
                    "true" if cand["won"] else "false",
                ]
            )

    parties_payload = {
        party.value: {
            "handle": PARTY_DEFAULTS[party]["handle"],
            "aliases": list(PARTY_DEFAULTS[party]["aliases"]),
        }
        for party in Party
    }
    paths["parties"].write_text(json.dumps(parties_payload, indent=2) + "\n", encoding="utf-8")

    with open(paths["profiles"], "w", encoding="utf-8", newline="\n") as fh:
        for cand in candidates:
            gen = rng.generator(spec.seed, "profile", cand["handle"])
            row = _profile_row(gen, cand["handle"], boost=0.9 if cand["won"] else 0.0, spec=spec)
            fh.write(json.dumps(row) + "\n")
        party_boost = {Party.AAP: 1.6, Party.BJP: 2.4, Party.INC: 1.8}
        for party in Party:
            gen = rng.generator(spec.seed, "profile", party.value)
            handle = PARTY_DEFAULTS[party]["handle"]
            row = _profile_row(gen, handle, boost=party_boost[party], spec=spec)
            fh.write(json.dumps(row) + "\n")

    _write_embeddings(spec, paths["embeddings"])
    return paths


def _write_embeddings(spec: SynthSpec, path: Path) -> None:
    vocab = set(BACKGROUND_VOCAB) | set(spec.plant_vocab) | set(HASHTAG_POOL) | {"rt"}
    for party in Party:
        for alias in PARTY_DEFAULTS[party]["aliases"]:
            vocab.update(alias.split())
    gen = rng.generator(spec.seed, "embeddings")
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        for word in sorted(vocab):
            vec = gen.normal(0.0, 0.3, spec.embedding_dim)
            fh.write(word + " " + " ".join(f"{v:.5f}" for v in vec) + "\n")
