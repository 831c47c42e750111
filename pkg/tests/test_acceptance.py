"""Exit criteria, each at its stated scale and tolerance.

Every test prints one ``criterion k: PASS|FAIL`` line, echoed again in the
terminal summary.  Run with ``pytest -m acceptance -s``.
"""

from __future__ import annotations

import contextlib
import itertools
import json
import math
import time
from fractions import Fraction

import numpy as np
import pytest

from oddminor_forge.appendix import sweep_appendix
from oddminor_forge.audit import audit_instance
from oddminor_forge.codecs import decode_dimacs, decode_graph6, encode_dimacs, encode_graph6
from oddminor_forge.construction import ConstructionParams, build_counterexample
from oddminor_forge.graph import Graph, graph_from_bitmask, is_bipartite, random_graph
from oddminor_forge.montecarlo import probe_chernoff, probe_construction_events, probe_matching_lemma, probe_respectful
from oddminor_forge.oddminor import (
    brute_force_odd_clique_minor,
    max_odd_clique_minor,
    model_to_pairing,
    pairing_size,
    verify_model,
)
from oddminor_forge.pairing import (
    brute_force_max_pairing,
    build_pi_graph,
    degree_bound_violations,
    is_odd_connected_pairing,
    max_odd_connected_pairing,
    pi_graph_multiplicity,
    random_pairing,
    respectful_indices,
    restricted_fiber_sizes,
)
from oddminor_forge.reports import dumps, trace_to_dict

pytestmark = pytest.mark.acceptance


@contextlib.contextmanager
def criterion(log, k: int, title: str):
    start = time.perf_counter()
    try:
        yield
    except BaseException as exc:
        line = f"criterion {k}: FAIL {title} ({type(exc).__name__}: {str(exc)[:200]})"
        print(line)
        log.append(line)
        raise
    line = f"criterion {k}: PASS {title} [{time.perf_counter() - start:.1f}s]"
    print(line)
    log.append(line)


def labelled_graphs(n: int):
    for code in range(1 << (n * (n - 1) // 2)):
        yield graph_from_bitmask(n, code)


def random_corpus(ns, per_n: int, seed: int):
    rng = np.random.default_rng(seed)
    for n in ns:
        for _ in range(per_n):
            yield random_graph(n, float(rng.uniform(0.1, 0.9)), rng)


@pytest.fixture(scope="module")
def odd_minor_witnesses():
    return []


# ---------------------------------------------------------------------------


CONSTRUCTION_TIERS = [(512, 64, 0.05), (4096, 256, 0.02), (51200, 1024, 0.01)]


def test_construction_invariants(acceptance_log):
    with criterion(acceptance_log, 1, "construction invariants on 3 x 1000 seeds"):
        for n, m, p in CONSTRUCTION_TIERS:
            # every trial raises if check_trace reports any failed invariant
            out = probe_construction_events(ConstructionParams(n, m, p, 0), 1000, seed=1)
            assert out["all"].trials == 1000


def test_pairing_oracle_equivalence(acceptance_log):
    with criterion(acceptance_log, 2, "pairing search equals brute force"):
        mismatches = []
        corpus = itertools.chain((g for n in range(6) for g in labelled_graphs(n)), random_corpus(range(6, 11), 200, 2))
        count = 0
        for g in corpus:
            res = max_odd_connected_pairing(g)
            count += 1
            if res.size != brute_force_max_pairing(g) or not is_odd_connected_pairing(g, res.witness):
                mismatches.append(encode_graph6(g))
        assert count == sum(1 << (n * (n - 1) // 2) for n in range(6)) + 1000
        assert mismatches == []


def test_odd_minor_oracle_equivalence(acceptance_log, odd_minor_witnesses):
    with criterion(acceptance_log, 3, "odd-minor search equals brute force"):
        mismatches = []
        corpus = itertools.chain((g for n in range(6) for g in labelled_graphs(n)), random_corpus((6, 7), 100, 3))
        for g in corpus:
            res = max_odd_clique_minor(g)
            ok = (
                res.status == "exact"
                and res.t == brute_force_odd_clique_minor(g)
                and verify_model(g, res.witness).verdict
                and (res.t >= 3) == (not is_bipartite(g))
            )
            if not ok:
                mismatches.append(encode_graph6(g))
            odd_minor_witnesses.append((g, res.witness))
        assert mismatches == []


def test_appendix_sweep(acceptance_log):
    with criterion(acceptance_log, 4, "appendix sweep for alpha <= 2 and n <= 7"):
        records = sweep_appendix(range(1, 8))
        assert sum(r.labelled for r in records if r.n == 7) == 133501
        bad = [(r.n, r.code) for r in records if not (r.prop_verdict and r.ks_verdict)]
        assert bad == []


@pytest.mark.parametrize("eta", [Fraction(1, 12), Fraction(1, 6)])
def test_certificate_transform(acceptance_log, odd_minor_witnesses, eta):
    if not odd_minor_witnesses:
        pytest.skip("needs the odd-minor corpus from the previous criterion")
    with criterion(acceptance_log, 5, f"model to pairing for eta = {eta}"):
        used = 0
        failures = []
        for g, model in odd_minor_witnesses:
            if g.n == 0 or model.t < (Fraction(1, 3) + eta) * g.n:
                continue
            if g.n == 1:
                continue  # no pair fits on one vertex
            used += 1
            pairing = model_to_pairing(g, model, eta)
            if pairing.size != pairing_size(g.n, eta) or not is_odd_connected_pairing(g, pairing):
                failures.append(encode_graph6(g))
        assert used > 0
        assert failures == []


def test_matching_probe(acceptance_log):
    with criterion(acceptance_log, 6, "matching probe on C_8000"):
        est = probe_matching_lemma("cycle:8000", 0.5, 10_000, seed=6)
        assert est.failure_rate <= 1e-3


CHERNOFF_GRID = [(1000, 0.1, 200), (10, 0.5, 10), (100, 0.2, 40), (200, 0.05, 25), (50, 0.3, 30)]


@pytest.mark.parametrize("N, p, t", CHERNOFF_GRID)
def test_chernoff_grid(acceptance_log, N, p, t):
    with criterion(acceptance_log, 7, f"Chernoff cell N={N} p={p} t={t}"):
        est = probe_chernoff(N, p, t, 100_000, seed=7)
        bound = math.exp(-t / 6)
        sigma = math.sqrt(max(bound * (1 - bound), 0.0) / est.trials)
        assert est.estimate <= bound + 5 * sigma


@pytest.mark.parametrize("n, m", [(200, 20), (1000, 50)])
def test_pi_graph_claims(acceptance_log, n, m):
    with criterion(acceptance_log, 8, f"pair-graph claims at n={n} m={m}"):
        rng = np.random.default_rng(8 + n)
        violations = []
        for instance in range(100):
            s = int(rng.integers(2, n // 2 + 1))
            pairing = random_pairing(n, s, rng)
            pi = rng.integers(0, m, n)
            counts = pi_graph_multiplicity(pairing, pi, indices=respectful_indices(pairing, pi))
            if any(c > 2 for c in counts.values()):
                violations.append(("multiplicity", instance))
            pair_graph = build_pi_graph(pairing, pi, m=m)
            if degree_bound_violations(pair_graph, restricted_fiber_sizes(pairing, pi)):
                violations.append(("degree", instance))
        assert violations == []


@pytest.mark.parametrize("m", [2, 10, 100])
def test_respectful_single_pair(acceptance_log, m):
    with criterion(acceptance_log, 9, f"respectful probe s=1 m={m}"):
        est = probe_respectful(10, m, 0.1, 100_000, seed=9)
        p = 1 - 1 / m
        assert abs(est.estimate - p) <= 5 * math.sqrt(p * (1 - p) / est.trials)


def test_determinism_and_codecs(acceptance_log):
    with criterion(acceptance_log, 10, "determinism and codec round trip"):
        for params in (ConstructionParams(512, 64, 0.05, 11), ConstructionParams(4096, 256, 0.02, 12)):
            a, b = build_counterexample(params), build_counterexample(params)
            assert dumps(trace_to_dict(a)) == dumps(trace_to_dict(b))
            assert dumps(audit_instance(a).to_dict()) == dumps(audit_instance(b).to_dict())
        assert probe_chernoff(100, 0.2, 40, 5000, seed=3) == probe_chernoff(100, 0.2, 40, 5000, seed=3)

        rng = np.random.default_rng(10)
        diffs = 0
        for _ in range(1000):
            n = int(rng.integers(0, 101))
            g = random_graph(n, float(rng.uniform(0, 1)), rng)
            g6 = encode_graph6(g)
            dim = encode_dimacs(g)
            if decode_graph6(g6) != g or decode_dimacs(dim) != g:
                diffs += 1
            if encode_graph6(decode_graph6(g6)) != g6 or encode_dimacs(decode_dimacs(dim)) != dim:
                diffs += 1
            if json.loads(dumps({"g": g6}))["g"] != g6:
                diffs += 1
        assert diffs == 0
        assert decode_graph6(encode_graph6(Graph.empty(0))) == Graph.empty(0)
