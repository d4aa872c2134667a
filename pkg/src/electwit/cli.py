"""Command-line surface emitting plot-ready CSV reports.

Subcommands: synth, mentions, sentiment, activity, profiles, train, report.
Settings resolve in the order flag > config file > default; the config file
is a flat ``key = value`` text document ('#' starts a comment) whose keys
match the long flag names with underscores.

Exit codes: 0 success, 1 usage error, 2 data/validation error. Commands
never mutate their input files, and identical inputs plus an identical seed
produce byte-identical outputs.
"""

from __future__ import annotations

import argparse
import sys
from datetime import date
from pathlib import Path

from electwit import corpus, mentions, stats, temporal
from electwit.errors import DataError, NoDataError
from electwit.features import load_embeddings
from electwit.lexicon import (
    default_moral_lexicon,
    default_sentiment_lexicon,
    load_category_lexicon,
    load_moral_lexicon,
)
from electwit.ml import pipeline
from electwit.ml.persist import save_model
from electwit.synth import SynthSpec, generate
from electwit.textprep import default_stopwords, load_stopwords

DEFAULT_TRAILING_SPANS = (3, 7, 14, 21, 48)
PROFILE_ATTRIBUTES = (
    "account_age_days",
    "statuses",
    "likes",
    "followers",
    "friends",
    "tweets_in_window",
    "avg_retweets",
    "avg_replies",
)
COMPARISON_HEADER = [
    "group_a",
    "group_b",
    "attribute",
    "mean_a",
    "mean_b",
    "u1",
    "p_value",
    "cles",
    "rank_biserial",
    "method",
]


class UsageError(Exception):
    """Bad flag/config combination; maps to exit code 1."""


class _Parser(argparse.ArgumentParser):
    def error(self, message):  # argparse default exits 2; this CLI reserves 2 for data errors
        self.exit(1, f"{self.prog}: error: {message}\n")


def _fmt(value) -> str:
    if value is None:
        return ""
    if isinstance(value, float):
        return f"{value:.10g}"
    return str(value)


def _write_csv(path: Path, header: list[str], rows: list[list]) -> None:
    with open(path, "w", encoding="utf-8", newline="") as fh:
        fh.write(",".join(header) + "\n")
        for row in rows:
            fh.write(",".join(_fmt(v) for v in row) + "\n")
    print(f"wrote {path}")


def load_config(path) -> dict[str, str]:
    cfg: dict[str, str] = {}
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise UsageError(f"cannot read config {path}: {exc}") from exc
    for line_no, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise UsageError(f"{path}:{line_no}: expected 'key = value', got {raw!r}")
        key, value = line.split("=", 1)
        cfg[key.strip()] = value.strip()
    return cfg


class Settings:
    """Flag > config > default resolution with typed casts."""

    def __init__(self, args: argparse.Namespace):
        self.args = args
        self.config = load_config(args.config) if getattr(args, "config", None) else {}

    def get(self, key: str, default=None, cast=str):
        flag = getattr(self.args, key, None)
        if flag is not None:
            return flag
        if key in self.config:
            raw = self.config[key]
            try:
                return cast(raw)
            except (TypeError, ValueError) as exc:
                raise UsageError(f"config key {key!r}: bad value {raw!r}: {exc}") from exc
        return default

    def require(self, key: str, cast=str):
        value = self.get(key, None, cast)
        if value is None:
            flag = "--" + key.replace("_", "-")
            raise UsageError(f"missing required setting {key!r} (pass {flag} or set it in the config)")
        return value


def _cast_date(raw) -> date:
    return raw if isinstance(raw, date) else date.fromisoformat(str(raw))


def _cast_int_list(raw) -> list[int]:
    if isinstance(raw, list):
        return [int(v) for v in raw]
    return [int(part) for part in str(raw).split(",") if part.strip()]


def _cast_str_list(raw) -> list[str]:
    if isinstance(raw, list):
        return [str(v) for v in raw]
    return [part.strip() for part in str(raw).split(",") if part.strip()]


def _cast_float_list(raw) -> list[float]:
    if isinstance(raw, list):
        return [float(v) for v in raw]
    return [float(part) for part in str(raw).split(",") if part.strip()]


def _out_dir(settings: Settings) -> Path:
    out = Path(settings.get("out_dir", "out"))
    out.mkdir(parents=True, exist_ok=True)
    return out


def _load_tweets(settings: Settings, schema: str = "generic"):
    path = settings.require("tweets")
    tweets, errors = corpus.load_tweets(path, schema=schema)
    if errors:
        print(f"warning: {len(errors)} malformed lines in {path}", file=sys.stderr)
    return tweets


def _region_spec(settings: Settings) -> corpus.RegionSpec | None:
    box = settings.get("region_box", None, _cast_float_list)
    subs = settings.get("region_substrings", None, _cast_str_list)
    if box is None and subs is None:
        return None
    if box is not None and len(box) != 4:
        raise UsageError("region_box needs four values: lat_min,lat_max,lon_min,lon_max")
    if box is None:
        box = [1.0, -1.0, 1.0, -1.0]  # empty box: substring matching only
    return corpus.RegionSpec(
        lat_min=box[0],
        lat_max=box[1],
        lon_min=box[2],
        lon_max=box[3],
        substrings=tuple(s.lower() for s in (subs or [])),
    )


def _maybe_filter_region(settings: Settings, tweets):
    region = _region_spec(settings)
    if region is None:
        return tweets
    kept = corpus.filter_by_location(tweets, region)
    print(f"region filter kept {len(kept)}/{len(tweets)} tweets")
    return kept


# ---------------------------------------------------------------------------
# synth


def cmd_synth(args) -> int:
    settings = Settings(args)
    out = _out_dir(settings)
    win_rate = settings.get("win_rate", None, float)
    kwargs = {}
    if win_rate is not None:
        kwargs["win_rates"] = {p: win_rate for p in corpus.Party}
    plant_vocab = settings.get("plant_vocab", None, _cast_str_list)
    if plant_vocab:
        kwargs["plant_vocab"] = tuple(plant_vocab)
    spec = SynthSpec(
        n_candidates_per_party=settings.get("candidates_per_party", 20, int),
        tweets_per_candidate=settings.get("tweets_per_candidate", 100.0, float),
        plant_rate=settings.get("plant_rate", 0.0, float),
        n_public_tweets=settings.get("public_tweets", 400, int),
        start_day=settings.get("start_day", date(2020, 1, 21), _cast_date),
        end_day=settings.get("end_day", date(2020, 2, 7), _cast_date),
        seed=settings.require("seed", int),
        embedding_dim=settings.get("embedding_dim", 50, int),
        **kwargs,
    )
    try:
        paths = generate(spec, out)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc
    for name, path in paths.items():
        print(f"wrote {path}")
    return 0


# ---------------------------------------------------------------------------
# mentions


def cmd_mentions(args) -> int:
    settings = Settings(args)
    out = _out_dir(settings)
    tweets = _maybe_filter_region(settings, _load_tweets(settings))
    party_records = corpus.load_parties(settings.require("parties"))
    top_k = settings.get("top_k", 20, int)

    for kind, filename in (("hashtag", "top_hashtags.csv"), ("mention", "top_mentions.csv")):
        ranked = mentions.top_tags(tweets, kind, top_k)
        _write_csv(out / filename, ["tag", "count"], [[t.tag, t.count] for t in ranked])

    for mode, filename in (("any", "shares_any.csv"), ("single", "shares_single.csv")):
        shares = mentions.mention_shares(tweets, party_records, mode=mode)
        _write_csv(
            out / filename,
            ["party", "share"],
            [[party.value, share] for party, share in shares.items()],
        )
    return 0


# ---------------------------------------------------------------------------
# sentiment


def _sentiment_lexicon(settings: Settings):
    path = settings.get("sentiment_lexicon")
    lex = load_category_lexicon(path) if path else default_sentiment_lexicon()
    for needed in ("posemo", "negemo"):
        if needed not in lex.categories:
            raise DataError(f"sentiment lexicon lacks required category {needed!r}")
    return lex


def cmd_sentiment(args) -> int:
    from electwit.lexicon import category_proportions

    settings = Settings(args)
    out = _out_dir(settings)
    tweets = _maybe_filter_region(settings, _load_tweets(settings))
    party_records = corpus.load_parties(settings.require("parties"))
    lex = _sentiment_lexicon(settings)
    election_day = settings.require("election_day", _cast_date)
    spans = settings.get("trailing_spans", list(DEFAULT_TRAILING_SPANS), _cast_int_list)
    utc_offset = settings.get("utc_offset", 0.0, float)

    single = mentions.single_party_tweets(tweets, party_records)
    if not single:
        raise NoDataError("no single-party tweets in the corpus")

    def proportions(pairs):
        by_party: dict[corpus.Party, list[tuple[float, float]]] = {}
        for tw, party in pairs:
            props = category_proportions(tw.text, lex).proportions
            by_party.setdefault(party, []).append((props["posemo"], props["negemo"]))
        return by_party

    windows: list[tuple[str, list]] = [("overall", single)]
    for span in spans:
        in_window = {
            tw.id for tw in temporal.trailing_window(
                [tw for tw, _ in single], election_day, span, utc_offset
            )
        }
        windows.append((f"last_{span}d", [(tw, p) for tw, p in single if tw.id in in_window]))

    mean_rows = []
    test_rows = []
    for label, pairs in windows:
        by_party = proportions(pairs)
        for party in corpus.Party:
            values = by_party.get(party)
            if not values:
                continue
            pos = [v[0] for v in values]
            neg = [v[1] for v in values]
            mean_rows.append(
                [label, party.value, len(values), stats.mean_proportion(pos), stats.mean_proportion(neg)]
            )
        present = [p for p in corpus.Party if by_party.get(p)]
        for i, pa in enumerate(present):
            for pb in present[i + 1 :]:
                for emo_idx, emotion in ((0, "posemo"), (1, "negemo")):
                    a = [v[emo_idx] for v in by_party[pa]]
                    b = [v[emo_idx] for v in by_party[pb]]
                    row = stats.compare_groups(a, b, pa.value, pb.value, attribute=emotion)
                    test_rows.append(
                        [
                            label,
                            emotion,
                            pa.value,
                            pb.value,
                            row.mean_a,
                            row.mean_b,
                            row.mwu.u1,
                            row.mwu.p_value,
                            row.mwu.effect_size_cles,
                            row.mwu.rank_biserial,
                            row.mwu.method,
                        ]
                    )

    _write_csv(
        out / "sentiment_means.csv",
        ["window", "party", "n_tweets", "posemo_mean", "negemo_mean"],
        mean_rows,
    )
    _write_csv(
        out / "sentiment_tests.csv",
        ["window", "emotion", "party_a", "party_b", "mean_a", "mean_b", "u1", "p_value", "cles", "rank_biserial", "method"],
        test_rows,
    )
    return 0


# ---------------------------------------------------------------------------
# activity


def cmd_activity(args) -> int:
    settings = Settings(args)
    out = _out_dir(settings)
    tweets = _load_tweets(settings, schema="candidate")
    candidates = corpus.load_candidates(settings.require("candidates"))
    frame_days = settings.get("frame_days", 3, int)
    utc_offset = settings.get("utc_offset", 0.0, float)
    period_start = settings.get("period_start", None, _cast_date)
    period_end = settings.get("period_end", None, _cast_date)

    if period_start is not None and period_end is not None:
        period = (period_start, period_end)
    elif tweets:
        period = temporal.corpus_day_span(tweets, utc_offset)
    else:
        raise NoDataError("empty corpus and no explicit period; nothing to analyze")

    avail = temporal.availability(candidates, tweets)
    _write_csv(
        out / "availability.csv",
        ["party", "available", "total", "share"],
        [
            [party.value, a, t, (a / t if t else None)]
            for party, (a, t) in avail.items()
        ],
    )

    days = temporal.day_range(period[0], period[1])
    daily = temporal.daily_activeness(candidates, tweets, days, utc_offset)
    daily_rows = []
    for party in corpus.Party:
        for window, value in daily[party].points:
            daily_rows.append(
                [party.value, window.start.isoformat(), window.end.isoformat(), value]
            )
    _write_csv(
        out / "daily_activeness.csv",
        ["party", "window_start", "window_end", "value"],
        daily_rows,
    )

    frames = temporal.frame_participation(candidates, tweets, frame_days, period, utc_offset)
    frame_rows = []
    for party in corpus.Party:
        for fs in frames[party]:
            frame_rows.append(
                [
                    party.value,
                    fs.window.start.isoformat(),
                    fs.window.end.isoformat(),
                    fs.share,
                    "true" if fs.short else "false",
                ]
            )
    _write_csv(
        out / "frame_participation.csv",
        ["party", "window_start", "window_end", "share", "short_frame"],
        frame_rows,
    )
    return 0


# ---------------------------------------------------------------------------
# profiles


def _candidate_attributes(candidates, profiles_by_id, tweets):
    """Per-candidate attribute map; candidates without a profile are skipped."""
    corpus_end = max((tw.created_at for tw in tweets), default=None)
    rows: dict[str, dict[str, float]] = {}
    skipped = 0
    for cand in candidates:
        profile = profiles_by_id.get(cand.handle)
        if profile is None or corpus_end is None:
            skipped += 1
            continue
        eng = corpus.engagement_stats(cand.handle, tweets)
        n_orig = eng.tweets
        age_days = max((corpus_end - profile.account_created_at).days, 0)
        rows[cand.handle] = {
            "account_age_days": float(age_days),
            "statuses": float(profile.statuses_count),
            "likes": float(profile.likes_count),
            "followers": float(profile.followers_count),
            "friends": float(profile.friends_count),
            "tweets_in_window": float(n_orig),
            "avg_retweets": eng.retweets_received / n_orig if n_orig else 0.0,
            "avg_replies": eng.replies_received / n_orig if n_orig else 0.0,
        }
    if skipped:
        print(f"warning: {skipped} candidates lack profile rows; excluded", file=sys.stderr)
    return rows


def _comparison_rows(attrs, group_a, group_b, label_a, label_b):
    rows = []
    for attribute in PROFILE_ATTRIBUTES:
        a = [attrs[h][attribute] for h in group_a]
        b = [attrs[h][attribute] for h in group_b]
        row = stats.compare_groups(a, b, label_a, label_b, attribute=attribute)
        rows.append(
            [
                label_a,
                label_b,
                attribute,
                row.mean_a,
                row.mean_b,
                row.mwu.u1,
                row.mwu.p_value,
                row.mwu.effect_size_cles,
                row.mwu.rank_biserial,
                row.mwu.method,
            ]
        )
    return rows


def cmd_profiles(args) -> int:
    settings = Settings(args)
    out = _out_dir(settings)
    tweets = _load_tweets(settings, schema="candidate")
    candidates = corpus.load_candidates(settings.require("candidates"))
    party_records = corpus.load_parties(settings.require("parties"))
    profiles, errors = corpus.load_profiles(settings.require("profiles"))
    if errors:
        print(f"warning: {len(errors)} malformed profile lines", file=sys.stderr)
    profiles_by_id = {p.user_id: p for p in profiles}

    attrs = _candidate_attributes(candidates, profiles_by_id, tweets)
    if not attrs:
        raise NoDataError("no candidate has both a profile and corpus coverage")

    winners = [c.handle for c in candidates if c.won and c.handle in attrs]
    losers = [c.handle for c in candidates if not c.won and c.handle in attrs]
    if not winners or not losers:
        raise NoDataError("need at least one winner and one loser with profiles")
    _write_csv(
        out / "winners_vs_losers.csv",
        COMPARISON_HEADER,
        _comparison_rows(attrs, winners, losers, "winners", "losers"),
    )

    by_party = {
        party: [c.handle for c in candidates if c.party is party and c.handle in attrs]
        for party in corpus.Party
    }
    pair_rows = []
    parties = list(corpus.Party)
    for i, pa in enumerate(parties):
        for pb in parties[i + 1 :]:
            if not by_party[pa] or not by_party[pb]:
                continue
            pair_rows.extend(
                _comparison_rows(attrs, by_party[pa], by_party[pb], pa.value, pb.value)
            )
    _write_csv(out / "party_candidate_comparison.csv", COMPARISON_HEADER, pair_rows)

    # Party official-handle profiles, min-max scaled for one-plot display.
    party_table: dict[str, dict[str, float]] = {}
    handle_to_party = {pr.official_handle: pr.party for pr in party_records}
    party_attrs = _candidate_attributes(
        [
            corpus.CandidateRecord(
                handle=pr.official_handle,
                display_name=pr.party.value,
                party=pr.party,
                constituency="",
                won=False,
            )
            for pr in party_records
        ],
        profiles_by_id,
        tweets,
    )
    for handle, row in party_attrs.items():
        party_table[handle_to_party[handle].value] = row
    if not party_table:
        raise NoDataError("no party official handle has a profile row")
    scaled = stats.scale_profiles(party_table)
    scaled_rows = []
    for party_name, attr_map in scaled.items():
        for attribute, sv in attr_map.items():
            scaled_rows.append([party_name, attribute, sv.raw, sv.scaled, sv.scale_factor])
    _write_csv(
        out / "party_profiles_scaled.csv",
        ["party", "attribute", "raw", "scaled", "scale_factor"],
        scaled_rows,
    )
    return 0


# ---------------------------------------------------------------------------
# train / report


def _run_ml(args, persist_models: bool) -> int:
    settings = Settings(args)
    out = _out_dir(settings)
    seed = settings.require("seed", int)
    tweets = _load_tweets(settings, schema="candidate")
    candidates = corpus.load_candidates(settings.require("candidates"))

    stopwords_path = settings.get("stopwords")
    stopwords = load_stopwords(stopwords_path) if stopwords_path else default_stopwords()
    lexicon = _sentiment_lexicon(settings)
    moral_path = settings.get("moral_lexicon")
    moral_lexicon = load_moral_lexicon(moral_path) if moral_path else default_moral_lexicon()

    from electwit.ml.models import KINDS

    feature_sets = settings.get("features", list(pipeline.DEFAULT_FEATURE_SETS), _cast_str_list)
    model_kinds = settings.get("models", list(KINDS), _cast_str_list)

    embeddings = None
    emb_path = settings.get("embeddings")
    if emb_path:
        embeddings = load_embeddings(emb_path, dim=settings.get("embedding_dim", 200, int))
    elif any("word2vec" in fs.split("+") for fs in feature_sets):
        raise DataError("feature set includes word2vec but no embeddings file was given")

    samples = pipeline.samples_from_corpus(tweets, candidates, stopwords)
    if not samples:
        raise NoDataError("no candidate originals found; nothing to train on")

    trained: dict = {}
    report = pipeline.run_benchmark(
        samples,
        feature_sets,
        model_kinds,
        seed,
        lexicon=lexicon,
        moral_lexicon=moral_lexicon,
        embeddings=embeddings,
        bow_cap=settings.get("bow_cap", 5000, int),
        tfidf_cap=settings.get("tfidf_cap", 5000, int),
        test_fraction=settings.get("test_fraction", 0.3, float),
        cv_folds=settings.get("cv_folds", 5, int),
        threads=settings.get("threads", 1, int),
        trained_models=trained if persist_models else None,
    )
    print(report.note)
    report.write_csv(out / "report.csv")
    print(f"wrote {out / 'report.csv'}")

    if persist_models:
        model_dir = out / "models"
        model_dir.mkdir(exist_ok=True)
        for (feature_set, kind), (model, spec) in trained.items():
            blob = model_dir / f"{feature_set.replace('+', '-')}__{kind}.bsm"
            save_model(model, spec, blob)
            print(f"wrote {blob}")
    return 0


def cmd_train(args) -> int:
    return _run_ml(args, persist_models=True)


def cmd_report(args) -> int:
    return _run_ml(args, persist_models=False)


# ---------------------------------------------------------------------------
# parser


def _add_common(sub: argparse.ArgumentParser) -> None:
    sub.add_argument("--config", help="flat key=value config file; flags win")
    sub.add_argument("--seed", type=int, help="root seed for all randomness")
    sub.add_argument("--out-dir", dest="out_dir", help="output directory (default: out)")
    sub.add_argument("--threads", type=int, help="worker threads for grid/forest fits")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="electwit", description=__doc__.splitlines()[0])
    subs = parser.add_subparsers(dest="command", required=True)

    p = subs.add_parser("synth", parents=[], help="generate a synthetic corpus")
    _add_common(p)
    p.add_argument("--candidates-per-party", dest="candidates_per_party", type=int)
    p.add_argument("--tweets-per-candidate", dest="tweets_per_candidate", type=float)
    p.add_argument("--plant-rate", dest="plant_rate", type=float)
    p.add_argument("--plant-vocab", dest="plant_vocab", type=_cast_str_list)
    p.add_argument("--public-tweets", dest="public_tweets", type=int)
    p.add_argument("--win-rate", dest="win_rate", type=float)
    p.add_argument("--start-day", dest="start_day", type=_cast_date)
    p.add_argument("--end-day", dest="end_day", type=_cast_date)
    p.add_argument("--embedding-dim", dest="embedding_dim", type=int)
    p.set_defaults(func=cmd_synth)

    p = subs.add_parser("mentions", help="top tags and party mention shares")
    _add_common(p)
    p.add_argument("--tweets")
    p.add_argument("--parties")
    p.add_argument("--top-k", dest="top_k", type=int)
    p.add_argument("--region-box", dest="region_box", type=_cast_float_list)
    p.add_argument("--region-substrings", dest="region_substrings", type=_cast_str_list)
    p.set_defaults(func=cmd_mentions)

    p = subs.add_parser("sentiment", help="per-party sentiment means and tests")
    _add_common(p)
    p.add_argument("--tweets")
    p.add_argument("--parties")
    p.add_argument("--sentiment-lexicon", dest="sentiment_lexicon")
    p.add_argument("--election-day", dest="election_day", type=_cast_date)
    p.add_argument("--trailing-spans", dest="trailing_spans", type=_cast_int_list)
    p.add_argument("--utc-offset", dest="utc_offset", type=float)
    p.add_argument("--region-box", dest="region_box", type=_cast_float_list)
    p.add_argument("--region-substrings", dest="region_substrings", type=_cast_str_list)
    p.set_defaults(func=cmd_sentiment)

    p = subs.add_parser("activity", help="availability, daily activeness, frames")
    _add_common(p)
    p.add_argument("--tweets")
    p.add_argument("--candidates")
    p.add_argument("--frame-days", dest="frame_days", type=int)
    p.add_argument("--period-start", dest="period_start", type=_cast_date)
    p.add_argument("--period-end", dest="period_end", type=_cast_date)
    p.add_argument("--utc-offset", dest="utc_offset", type=float)
    p.set_defaults(func=cmd_activity)

    p = subs.add_parser("profiles", help="profile comparisons and scaled party profiles")
    _add_common(p)
    p.add_argument("--tweets")
    p.add_argument("--candidates")
    p.add_argument("--parties")
    p.add_argument("--profiles")
    p.set_defaults(func=cmd_profiles)

    for name, func in (("train", cmd_train), ("report", cmd_report)):
        p = subs.add_parser(
            name,
            help="fit the classifier suite and write the F1 report"
            + (" + model blobs" if name == "train" else ""),
        )
        _add_common(p)
        p.add_argument("--tweets")
        p.add_argument("--candidates")
        p.add_argument("--features", type=_cast_str_list)
        p.add_argument("--models", type=_cast_str_list)
        p.add_argument("--embeddings")
        p.add_argument("--embedding-dim", dest="embedding_dim", type=int)
        p.add_argument("--sentiment-lexicon", dest="sentiment_lexicon")
        p.add_argument("--moral-lexicon", dest="moral_lexicon")
        p.add_argument("--stopwords")
        p.add_argument("--bow-cap", dest="bow_cap", type=int)
        p.add_argument("--tfidf-cap", dest="tfidf_cap", type=int)
        p.add_argument("--test-fraction", dest="test_fraction", type=float)
        p.add_argument("--cv-folds", dest="cv_folds", type=int)
        p.set_defaults(func=func)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"electwit: error: {exc}", file=sys.stderr)
        return 1
    except DataError as exc:
        print(f"electwit: data error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"electwit: data error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
