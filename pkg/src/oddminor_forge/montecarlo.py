"""Seeded trial harness with Wilson intervals and a registry of named experiments.

Each trial is a pure function of (target parameters, per-trial seed), and
per-trial seeds are keyed hashes of (master seed, trial index), so results
do not depend on worker count or scheduling.
"""

from __future__ import annotations

import math
from collections import Counter
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Any, Callable

import numpy as np
from scipy.stats import binomtest

from .construction import (
    ConstructionParams,
    build_counterexample,
    check_trace,
    derive_seed,
)
from .audit import check_degree_event, check_fiber_event, check_triangle_count_event
from .errors import HypothesisViolated, UnknownTarget
from .graph import (
    Graph,
    complete_graph,
    cycle_graph,
    leaf_reduced_matching_number,
    max_degree,
    path_graph,
    star_graph,
)
from .pairing import Pairing, canonical_pairing, respectful_index


@dataclass(frozen=True)
class Outcome:
    success: bool
    value: float | None = None
    flags: tuple[tuple[str, bool], ...] = ()


@dataclass(frozen=True)
class TrialPlan:
    target: str
    trials: int
    seed: int = 0
    params: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.trials < 1:
            raise ValueError(f"trials must be >= 1, got {self.trials}")

    def trial_seed(self, index: int) -> int:
        return derive_seed(self.seed, "trial", index)


@dataclass(frozen=True)
class FrequencyEstimate:
    successes: int
    trials: int
    estimate: float
    low: float
    high: float
    bound: float | None = None
    bound_label: str = ""
    histogram: dict = field(default_factory=dict)
    flags: dict = field(default_factory=dict)

    def __post_init__(self):
        if not 0 <= self.successes <= self.trials:
            raise ValueError("successes must lie in [0, trials]")

    @property
    def failures(self) -> int:
        return self.trials - self.successes

    @property
    def failure_rate(self) -> float:
        return self.failures / self.trials

    @property
    def sigma(self) -> float:
        """Binomial standard error of the point estimate."""
        q = self.estimate
        return math.sqrt(q * (1 - q) / self.trials)


def wilson_interval(successes: int, trials: int) -> tuple[float, float]:
    ci = binomtest(successes, trials).proportion_ci(confidence_level=0.95, method="wilson")
    return max(0.0, float(ci.low)), min(1.0, float(ci.high))


def estimate_from_counts(
    successes: int,
    trials: int,
    bound: float | None = None,
    bound_label: str = "",
    histogram: dict | None = None,
    flags: dict | None = None,
) -> FrequencyEstimate:
    low, high = wilson_interval(successes, trials)
    point = successes / trials
    return FrequencyEstimate(
        successes=successes,
        trials=trials,
        estimate=point,
        low=min(low, point),
        high=max(high, point),
        bound=bound,
        bound_label=bound_label,
        histogram=dict(sorted((histogram or {}).items())),
        flags=dict(sorted((flags or {}).items())),
    )


# ---------------------------------------------------------------------------
# targets


@dataclass(frozen=True)
class Target:
    trial: Callable[[dict, np.random.Generator, int], Any]
    bound: Callable[[dict], tuple[float | None, str]] = lambda params: (None, "")
    validate: Callable[[dict], None] = lambda params: None


def _always_true(params, rng, seed):
    return True


def _fair_coin(params, rng, seed):
    return bool(rng.random() < 0.5)


# -- binomial tail


def _chernoff_validate(params):
    N, pr, t = int(params["N"]), float(params["p"]), float(params["t"])
    if not 0 <= pr <= 1 or N < 0:
        raise HypothesisViolated(f"need N >= 0 and p in [0, 1], got N = {N}, p = {pr}")
    if t < 2 * N * pr:
        raise HypothesisViolated(f"t = {t} is below 2 E[X] = {2 * N * pr}")


def _chernoff_trial(params, rng, seed):
    x = int(rng.binomial(int(params["N"]), float(params["p"])))
    return x >= float(params["t"])


def _chernoff_bound(params):
    return math.exp(-float(params["t"]) / 6), "success frequency <= exp(-t/6)"


# -- matching in a random vertex subset


def gamma_graph_from_spec(spec: str) -> Graph:
    """Named graph from ``family:n``, e.g. ``cycle:8000``."""
    family, _, size = spec.partition(":")
    builders = {
        "cycle": cycle_graph,
        "path": path_graph,
        "star": star_graph,
        "complete": complete_graph,
        "empty": Graph.empty,
    }
    if family not in builders or not size.isdigit():
        raise ValueError(f"unknown graph spec {spec!r}; use one of {sorted(builders)} as family:n")
    return builders[family](int(size))


@lru_cache(maxsize=8)
def _gamma(spec: str) -> tuple[int, tuple[tuple[int, ...], ...], int, int]:
    g = gamma_graph_from_spec(spec)
    return g.n, tuple(tuple(a) for a in g.adjacency), g.edge_count, max_degree(g)


def _matching_validate(params):
    _, _, _, delta = _gamma(params["graph"])
    q = float(params["q"])
    if not 0 <= q <= 1:
        raise HypothesisViolated(f"q must lie in [0, 1], got {q}")
    if delta and q > 1 / delta:
        raise HypothesisViolated(f"q = {q} exceeds 1 / max degree = {1 / delta}")


def matching_threshold(edges: int, q: float) -> float:
    return q * q * edges / 20


def _matching_trial(params, rng, seed):
    n, adj, edges, _ = _gamma(params["graph"])
    q = float(params["q"])
    keep = np.flatnonzero(rng.random(n) < q)
    index = np.full(n, -1, dtype=np.int64)
    index[keep] = np.arange(len(keep))
    sub = [[int(index[w]) for w in adj[v] if index[w] >= 0] for v in keep]
    nu = leaf_reduced_matching_number(len(keep), sub)
    return Outcome(nu >= matching_threshold(edges, q), float(nu))


def _matching_bound(params):
    _, _, edges, _ = _gamma(params["graph"])
    q = float(params["q"])
    return 1 - math.exp(-q * q * edges / 200), "success frequency >= 1 - exp(-q^2 e / 200)"


# -- respectful maps


def respectful_size(n: int, eps: float) -> int:
    return math.ceil(eps * n)


def _respectful_pairing(params) -> Pairing:
    n, s = int(params["n"]), respectful_size(int(params["n"]), float(params["eps"]))
    if params.get("pairing", "canonical") == "reversed":
        return Pairing(tuple((n - 1 - 2 * i, n - 2 - 2 * i) for i in range(s)))
    return canonical_pairing(s)


def _respectful_validate(params):
    n, m, eps = int(params["n"]), int(params["m"]), float(params["eps"])
    s = respectful_size(n, eps)
    if m < 1 or eps <= 0:
        raise HypothesisViolated(f"need m >= 1 and eps > 0, got m = {m}, eps = {eps}")
    if 2 * s > n:
        raise HypothesisViolated(f"an {s}-pairing does not fit in [{n}]")


def _respectful_trial(params, rng, seed):
    n, m, eps = int(params["n"]), int(params["m"]), float(params["eps"])
    pairing = _respectful_pairing(params)
    pi = rng.integers(0, m, size=n)
    return respectful_index(pairing, pi) >= eps * pairing.size


def _respectful_bound(params):
    n, eps = int(params["n"]), float(params["eps"])
    return float(n) ** (-(5 / 8) * eps * n), "failure frequency <= n^(-(5/8) eps n)"


# -- construction events


def _construction_params(params, seed: int) -> ConstructionParams:
    return ConstructionParams(n=int(params["n"]), m=int(params["m"]), p=float(params["p"]), seed=seed)


def _construction_validate(params):
    _construction_params(params, 0)


def _construction_trial(params, rng, seed):
    trace = build_counterexample(_construction_params(params, seed))
    failed = [r.name for r in check_trace(trace) if not r.passed]
    if failed:
        raise AssertionError(f"trace with seed {seed} breaks invariants {failed}")
    n, m, p = trace.n, trace.m, trace.params.p
    deg, fib, tri = 2 * p * m, 2 * n / m, 20 * math.log(m) if m > 1 else 0.0
    flags = (
        ("D_R", check_degree_event(trace.h_r, deg)[0]),
        ("D_B", check_degree_event(trace.h_b, deg)[0]),
        ("F_R", check_fiber_event(trace.pi_r, fib)[0]),
        ("F_B", check_fiber_event(trace.pi_b, fib)[0]),
        ("T_R", check_triangle_count_event(trace.hstar_r, tri)[0]),
        ("T_B", check_triangle_count_event(trace.hstar_b, tri)[0]),
    )
    return Outcome(all(v for _, v in flags), None, flags)


TARGETS: dict[str, Target] = {
    "always-true": Target(_always_true),
    "fair-coin": Target(_fair_coin, lambda params: (0.5, "fair coin")),
    "chernoff": Target(_chernoff_trial, _chernoff_bound, _chernoff_validate),
    "matching-lemma": Target(_matching_trial, _matching_bound, _matching_validate),
    "respectful": Target(_respectful_trial, _respectful_bound, _respectful_validate),
    "construction-events": Target(_construction_trial, validate=_construction_validate),
}


def get_target(name: str) -> Target:
    try:
        return TARGETS[name]
    except KeyError:
        raise UnknownTarget(f"no target named {name!r}; known: {sorted(TARGETS)}") from None


# ---------------------------------------------------------------------------
# execution


def _as_outcome(result) -> Outcome:
    return result if isinstance(result, Outcome) else Outcome(bool(result))


def _run_chunk(target_name: str, params: dict, seed: int, lo: int, hi: int):
    target = get_target(target_name)
    successes = 0
    histogram: Counter = Counter()
    flags: Counter = Counter()
    for i in range(lo, hi):
        trial_seed = derive_seed(seed, "trial", i)
        rng = np.random.Generator(np.random.PCG64(trial_seed))
        out = _as_outcome(target.trial(params, rng, trial_seed))
        successes += out.success
        if out.value is not None:
            histogram[out.value] += 1
        for name, ok in out.flags:
            flags[name] += bool(ok)
    return successes, histogram, flags


def run_trials(plan: TrialPlan, jobs: int = 1, chunk: int | None = None) -> FrequencyEstimate:
    target = get_target(plan.target)
    target.validate(plan.params)
    if chunk is None:
        chunk = max(1, math.ceil(plan.trials / (4 * max(1, jobs))))
    bounds = [(lo, min(plan.trials, lo + chunk)) for lo in range(0, plan.trials, chunk)]
    parts = []
    if jobs <= 1 or len(bounds) == 1:
        for lo, hi in bounds:
            parts.append(_run_chunk(plan.target, plan.params, plan.seed, lo, hi))
    else:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            futures = [pool.submit(_run_chunk, plan.target, plan.params, plan.seed, lo, hi) for lo, hi in bounds]
            parts = [f.result() for f in futures]
    successes = sum(p[0] for p in parts)
    histogram: Counter = Counter()
    flags: Counter = Counter()
    for _, h, f in parts:
        histogram.update(h)
        flags.update(f)
    bound, label = target.bound(plan.params)
    return estimate_from_counts(successes, plan.trials, bound, label, histogram, flags)


# ---------------------------------------------------------------------------
# convenience probes


def probe_matching_lemma(graph: str, q: float, trials: int, seed: int = 0, jobs: int = 1) -> FrequencyEstimate:
    return run_trials(TrialPlan("matching-lemma", trials, seed, {"graph": graph, "q": q}), jobs)


def probe_chernoff(N: int, pr: float, t: float, trials: int, seed: int = 0, jobs: int = 1) -> FrequencyEstimate:
    return run_trials(TrialPlan("chernoff", trials, seed, {"N": N, "p": pr, "t": t}), jobs)


def probe_respectful(
    n: int, m: int, eps: float, trials: int, seed: int = 0, jobs: int = 1, pairing: str = "canonical"
) -> FrequencyEstimate:
    params = {"n": n, "m": m, "eps": eps, "pairing": pairing}
    return run_trials(TrialPlan("respectful", trials, seed, params), jobs)


def probe_construction_events(
    params: ConstructionParams, trials: int, seed: int | None = None, jobs: int = 1
) -> dict[str, FrequencyEstimate]:
    """One estimate per event D/F/T (both colours) plus ``all``."""
    plan = TrialPlan(
        "construction-events",
        trials,
        params.seed if seed is None else seed,
        {"n": params.n, "m": params.m, "p": params.p},
    )
    joint = run_trials(plan, jobs)
    out = {name: estimate_from_counts(count, trials) for name, count in joint.flags.items()}
    out["all"] = joint
    return out
