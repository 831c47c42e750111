"""JSON documents for traces, pairings, models, audits and estimates.

Every document carries ``"schema": SCHEMA``.  ``dumps`` is canonical (sorted
keys, fixed separators) so equal objects serialise to equal bytes.
"""

from __future__ import annotations

import json
import math
import subprocess
from dataclasses import asdict, is_dataclass
from datetime import datetime, timezone
from pathlib import Path
from typing import Any

import numpy as np

from . import SCHEMA, __version__
from .codecs import decode_graph6, encode_graph6
from .construction import ColoredGraph, ConstructionParams, ConstructionTrace
from .errors import InvalidPairing, MalformedInput
from .oddminor import MinorModel, Tree
from .pairing import Pairing, pairing_from_lists

TRACE_LAYERS = ("hstar_r", "hstar_b", "h_r", "h_b", "hprime_r", "hprime_b", "h0_red", "h0_blue", "h", "g")


def _plain(obj: Any) -> Any:
    if is_dataclass(obj) and not isinstance(obj, type):
        return _plain(asdict(obj))
    if isinstance(obj, dict):
        return {str(k): _plain(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple, frozenset, set)):
        items = [_plain(v) for v in obj]
        return sorted(items) if isinstance(obj, (set, frozenset)) else items
    if isinstance(obj, np.integer):
        return int(obj)
    if isinstance(obj, (np.floating, float)):
        value = float(obj)
        if math.isinf(value):
            return "inf" if value > 0 else "-inf"
        if math.isnan(value):
            return "nan"
        return value
    if isinstance(obj, np.bool_):
        return bool(obj)
    return obj


def dumps(obj: Any) -> str:
    return json.dumps(_plain(obj), sort_keys=True, separators=(",", ":"))


def document(kind: str, body: dict) -> dict:
    return {"schema": SCHEMA, "kind": kind, **body}


def _expect(doc: Any, kind: str) -> dict:
    if not isinstance(doc, dict):
        raise MalformedInput(f"expected a JSON object for {kind}")
    if doc.get("schema") != SCHEMA:
        raise MalformedInput(f"unsupported schema {doc.get('schema')!r}; expected {SCHEMA!r}")
    if doc.get("kind") != kind:
        raise MalformedInput(f"expected a {kind!r} document, got {doc.get('kind')!r}")
    return doc


def loads(text: str) -> Any:
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise MalformedInput(f"invalid JSON: {exc.msg}", exc.pos) from None


# ---------------------------------------------------------------------------
# traces


def trace_to_dict(trace: ConstructionTrace) -> dict:
    p = trace.params
    layers = trace.layers()
    return document(
        "trace",
        {
            "params": {"n": p.n, "m": p.m, "p": p.p, "seed": p.seed, "use_paper_defaults": p.use_paper_defaults},
            "layers": {name: encode_graph6(layers[name]) for name in TRACE_LAYERS},
            "pi_r": [int(x) for x in trace.pi_r],
            "pi_b": [int(x) for x in trace.pi_b],
        },
    )


def trace_from_dict(doc: dict) -> ConstructionTrace:
    doc = _expect(doc, "trace")
    try:
        pd = doc["params"]
        params = ConstructionParams(
            n=int(pd["n"]),
            m=int(pd["m"]),
            p=float(pd["p"]),
            seed=int(pd["seed"]),
            use_paper_defaults=bool(pd.get("use_paper_defaults", False)),
        )
        layers = {name: decode_graph6(doc["layers"][name]) for name in TRACE_LAYERS}
        pi_r = np.asarray(doc["pi_r"], dtype=np.int64)
        pi_b = np.asarray(doc["pi_b"], dtype=np.int64)
    except (KeyError, TypeError, ValueError) as exc:
        raise MalformedInput(f"trace document is incomplete: {exc}") from None
    pi_r.flags.writeable = False
    pi_b.flags.writeable = False
    return ConstructionTrace(
        params=params,
        hstar_r=layers["hstar_r"],
        hstar_b=layers["hstar_b"],
        h_r=layers["h_r"],
        h_b=layers["h_b"],
        hprime_r=layers["hprime_r"],
        hprime_b=layers["hprime_b"],
        pi_r=pi_r,
        pi_b=pi_b,
        h0=ColoredGraph(layers["h0_red"], layers["h0_blue"]),
        h=layers["h"],
        g=layers["g"],
    )


# ---------------------------------------------------------------------------
# pairings and models


def pairing_to_json(pairing: Pairing) -> list[list[int]]:
    return [[u, v] for u, v in pairing.pairs]


def pairing_from_json(data: Any) -> Pairing:
    if isinstance(data, dict):
        data = _expect(data, "pairing").get("pairs")
    if not isinstance(data, list):
        raise MalformedInput("pairing must be a JSON array of [u, v] pairs")
    try:
        return pairing_from_lists(data)
    except (TypeError, ValueError, InvalidPairing) as exc:
        raise MalformedInput(f"bad pairing entry: {exc}") from None


def model_to_dict(model: MinorModel) -> dict:
    return document(
        "model",
        {
            "trees": [
                {"vertices": list(t.vertices), "edges": [list(e) for e in t.edges], "colors": list(t.colors)}
                for t in model.trees
            ]
        },
    )


def model_from_dict(doc: dict) -> MinorModel:
    doc = _expect(doc, "model")
    try:
        trees = tuple(
            Tree(
                tuple(int(v) for v in t["vertices"]),
                tuple((int(a), int(b)) for a, b in t["edges"]),
                tuple(str(c) for c in t["colors"]),
            )
            for t in doc["trees"]
        )
    except (KeyError, TypeError, ValueError) as exc:
        raise MalformedInput(f"model document is incomplete: {exc}") from None
    return MinorModel(trees)


# ---------------------------------------------------------------------------
# results files


def artifact_version() -> str:
    """``git describe`` of the source checkout when available, else the package version."""
    try:
        out = subprocess.run(
            ["git", "describe", "--always", "--dirty"],
            cwd=Path(__file__).resolve().parent,
            capture_output=True,
            text=True,
            timeout=5,
        )
        if out.returncode == 0 and out.stdout.strip():
            return f"{__version__}+{out.stdout.strip()}"
    except (OSError, subprocess.SubprocessError):
        pass
    return __version__


def result_record(kind: str, body: dict, timestamp: bool = True) -> dict:
    """Record for a JSON-lines results file; only ``meta`` varies between identical runs."""
    meta = {"version": artifact_version()}
    if timestamp:
        meta["timestamp"] = datetime.now(timezone.utc).isoformat(timespec="seconds")
    return {**document(kind, body), "meta": meta}


def without_meta(record: dict) -> dict:
    return {k: v for k, v in record.items() if k != "meta"}


def append_jsonl(path: str | Path, record: dict) -> None:
    with open(path, "a", encoding="utf-8") as fh:
        fh.write(dumps(record) + "\n")
