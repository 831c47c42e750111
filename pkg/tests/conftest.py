from __future__ import annotations

import json
from pathlib import Path

import numpy as np
import pytest
from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

from oddminor_forge.graph import Graph

DATA = Path(__file__).parent / "data"

settings.register_profile("default", max_examples=60, deadline=None, suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")


def graph_of(row: dict) -> Graph:
    return Graph.from_edges(row["n"], [tuple(e) for e in row["edges"]])


@pytest.fixture(scope="session")
def frozen() -> dict:
    return json.loads((DATA / "frozen_oracles.json").read_text())


@pytest.fixture(scope="session")
def frozen_rows(frozen) -> list[dict]:
    return frozen["classes"] + frozen["random"] + [r for r in frozen["named"].values() if "t_star" in r]


@st.composite
def graphs(draw, min_n: int = 0, max_n: int = 9) -> Graph:
    n = draw(st.integers(min_n, max_n))
    pairs = [(u, v) for u in range(n) for v in range(u + 1, n)]
    mask = draw(st.lists(st.booleans(), min_size=len(pairs), max_size=len(pairs)))
    return Graph.from_edges(n, [e for e, keep in zip(pairs, mask) if keep])


def rng(seed: int = 0) -> np.random.Generator:
    return np.random.default_rng(seed)


# one summary line per acceptance criterion, printed after the run
_ACCEPTANCE_LINES: list[str] = []


@pytest.fixture(scope="session")
def acceptance_log():
    return _ACCEPTANCE_LINES


def pytest_terminal_summary(terminalreporter):
    if _ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(_ACCEPTANCE_LINES, key=lambda s: int(s.split()[1].rstrip(":"))):
            terminalreporter.write_line(line)
