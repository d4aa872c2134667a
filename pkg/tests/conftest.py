import json

import pytest

from electwit.corpus import Party
from electwit.synth import SynthSpec, generate


@pytest.fixture(scope="session")
def synth_paths(tmp_path_factory):
    """Small deterministic corpus shared by CLI/pipeline tests."""
    spec = SynthSpec(
        n_candidates_per_party=4,
        win_rates={p: 0.5 for p in Party},
        tweets_per_candidate=9.0,
        plant_rate=0.7,
        n_public_tweets=70,
        seed=42,
    )
    return generate(spec, tmp_path_factory.mktemp("synthcorpus"))


def make_tweet_line(i, **overrides):
    obj = {
        "id": f"t{i}",
        "author_id": f"user{i}",
        "text": f"tweet number {i}",
        "created_at": "2020-02-01T10:00:00+00:00",
        "kind": "original",
    }
    obj.update(overrides)
    return json.dumps(obj)
