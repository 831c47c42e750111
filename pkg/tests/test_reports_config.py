from __future__ import annotations

import json
import math

import numpy as np
import pytest

from oddminor_forge import SCHEMA
from oddminor_forge.config import DEFAULT_PRESETS, RunConfig, load_config, parse_config
from oddminor_forge.construction import ConstructionParams, build_counterexample, check_trace
from oddminor_forge.errors import ConfigError, MalformedInput
from oddminor_forge.oddminor import BLACK, WHITE, MinorModel, Tree
from oddminor_forge.pairing import Pairing
from oddminor_forge.reports import (
    append_jsonl,
    document,
    dumps,
    loads,
    model_from_dict,
    model_to_dict,
    pairing_from_json,
    pairing_to_json,
    result_record,
    trace_from_dict,
    trace_to_dict,
    without_meta,
)


class TestDumps:
    def test_canonical(self):
        assert dumps({"b": 1, "a": [np.int64(2), np.float64(0.5)]}) == '{"a":[2,0.5],"b":1}'

    def test_special_values(self):
        assert json.loads(dumps([math.inf, -math.inf, math.nan, np.bool_(True), frozenset({3, 1})])) == [
            "inf",
            "-inf",
            "nan",
            True,
            [1, 3],
        ]

    def test_bad_json(self):
        with pytest.raises(MalformedInput):
            loads("{")


class TestTrace:
    def test_roundtrip(self):
        trace = build_counterexample(ConstructionParams(200, 16, 0.1, 4))
        doc = json.loads(dumps(trace_to_dict(trace)))
        back = trace_from_dict(doc)
        assert back.g == trace.g and back.h == trace.h
        assert np.array_equal(back.pi_r, trace.pi_r)
        assert back.params == trace.params
        assert all(r.passed for r in check_trace(back))

    def test_wrong_kind_and_schema(self):
        with pytest.raises(MalformedInput):
            trace_from_dict(document("model", {}))
        with pytest.raises(MalformedInput):
            trace_from_dict({"schema": "other/0", "kind": "trace"})
        with pytest.raises(MalformedInput):
            trace_from_dict(document("trace", {"params": {}}))


class TestPairingAndModel:
    def test_pairing(self):
        p = Pairing(((0, 3), (1, 2)))
        assert pairing_from_json(pairing_to_json(p)) == p
        assert pairing_from_json(document("pairing", {"pairs": [[0, 3]]})) == Pairing(((0, 3),))
        with pytest.raises(MalformedInput):
            pairing_from_json("x")
        with pytest.raises(MalformedInput):
            pairing_from_json([[0, 1, 2]])

    def test_model(self):
        model = MinorModel((Tree((0, 1), ((0, 1),), (WHITE, BLACK)), Tree((2,), (), (WHITE,))))
        doc = json.loads(dumps(model_to_dict(model)))
        assert doc["schema"] == SCHEMA
        assert model_from_dict(doc) == model
        with pytest.raises(MalformedInput):
            model_from_dict(document("model", {"trees": [{"vertices": [0]}]}))


class TestRecords:
    def test_meta_is_the_only_varying_part(self, tmp_path):
        a = result_record("estimate", {"x": 1})
        b = result_record("estimate", {"x": 1}, timestamp=False)
        assert "version" in a["meta"] and "timestamp" in a["meta"]
        assert without_meta(a) == without_meta(b)
        path = tmp_path / "r.jsonl"
        append_jsonl(path, a)
        append_jsonl(path, b)
        lines = path.read_text().splitlines()
        assert len(lines) == 2 and json.loads(lines[0])["x"] == 1


class TestConfig:
    def test_defaults(self):
        cfg = RunConfig()
        assert cfg.preset("small") == DEFAULT_PRESETS["small"]
        assert load_config(None) == cfg

    def test_parse(self, tmp_path):
        text = "# comment\npairing_budget = 10\nresults_path = out.jsonl  # trailing\npreset.tiny = 64, 8, 0.1\n"
        path = tmp_path / "c.cfg"
        path.write_text(text)
        cfg = load_config(path)
        assert cfg.pairing_budget == 10 and cfg.results_path == "out.jsonl"
        assert cfg.preset("tiny") == (64, 8, 0.1)
        assert cfg.preset("large") == DEFAULT_PRESETS["large"]

    @pytest.mark.parametrize(
        "text",
        ["nonsense", "colour = red", "chi_limit = many", "chi_limit = 0", "preset.x = 1, 2", "preset.x = 10, 2, 1.5"],
    )
    def test_rejects(self, text):
        with pytest.raises(ConfigError):
            parse_config(text)

    def test_unknown_preset_and_missing_file(self, tmp_path):
        with pytest.raises(ConfigError):
            RunConfig().preset("huge")
        with pytest.raises(ConfigError):
            load_config(tmp_path / "missing.cfg")
