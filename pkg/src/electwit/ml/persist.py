"""Trained-model persistence: versioned self-describing binary blobs.

Layout: magic bytes ``BSM1``, a big-endian uint32 payload length, then the
payload: canonical JSON (sorted keys, no whitespace) holding the ModelSpec
and the learned parameters. ndarrays are encoded in place as
{"__ndarray__": {"dtype", "shape", "data"}} with base64 row-major bytes, so
a blob round-trips bit-exactly.
"""

from __future__ import annotations

import base64
import json
import struct

import numpy as np

from electwit.errors import LoadError
from electwit.ml.models import MODEL_CLASSES, ModelSpec

MAGIC = b"BSM1"


def _encode(obj):
    if isinstance(obj, np.ndarray):
        return {
            "__ndarray__": {
                "dtype": obj.dtype.str,
                "shape": list(obj.shape),
                "data": base64.b64encode(np.ascontiguousarray(obj).tobytes()).decode("ascii"),
            }
        }
    if isinstance(obj, dict):
        return {k: _encode(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_encode(v) for v in obj]
    if isinstance(obj, (np.integer,)):
        return int(obj)
    if isinstance(obj, (np.floating,)):
        return float(obj)
    return obj


def _decode(obj):
    if isinstance(obj, dict):
        if "__ndarray__" in obj:
            meta = obj["__ndarray__"]
            data = base64.b64decode(meta["data"])
            return np.frombuffer(data, dtype=np.dtype(meta["dtype"])).reshape(meta["shape"]).copy()
        return {k: _decode(v) for k, v in obj.items()}
    if isinstance(obj, list):
        return [_decode(v) for v in obj]
    return obj


def save_model(model, spec: ModelSpec, path) -> None:
    """Serialize a fitted model plus its spec to ``path``."""
    payload = {
        "spec": {
            "kind": spec.kind,
            "hyperparameters": _encode(spec.hyperparameters),
            "seed": spec.seed,
        },
        "params": _encode(model.get_state()),
    }
    blob = json.dumps(payload, sort_keys=True, separators=(",", ":")).encode("utf-8")
    with open(path, "wb") as fh:
        fh.write(MAGIC)
        fh.write(struct.pack(">I", len(blob)))
        fh.write(blob)


def load_model(path):
    """Load a model blob; returns (model, ModelSpec)."""
    try:
        with open(path, "rb") as fh:
            raw = fh.read()
    except OSError as exc:
        raise LoadError(f"cannot read model blob {path}: {exc}") from exc
    if len(raw) < 8 or raw[:4] != MAGIC:
        raise LoadError(f"{path} is not a model blob (bad magic)")
    (length,) = struct.unpack(">I", raw[4:8])
    if len(raw) != 8 + length:
        raise LoadError(f"{path}: payload length mismatch")
    try:
        payload = json.loads(raw[8:].decode("utf-8"))
        spec = ModelSpec(
            kind=payload["spec"]["kind"],
            hyperparameters=_decode(payload["spec"]["hyperparameters"]),
            seed=int(payload["spec"]["seed"]),
        )
        params = _decode(payload["params"])
        model = MODEL_CLASSES[spec.kind].from_state(params)
    except (KeyError, ValueError, TypeError) as exc:
        raise LoadError(f"{path}: corrupt model payload: {exc}") from exc
    return model, spec
