"""Command-line entry point: ``oddforge <subcommand> ...``.

Exit codes: 0 success or verdict true, 1 verdict false, 2 usage or input error.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from fractions import Fraction
from pathlib import Path

from . import __version__
from .appendix import sweep_appendix
from .audit import audit_instance
from .codecs import decode_dimacs, decode_graph6, encode_dimacs, encode_graph6
from .config import load_config
from .construction import ConstructionParams, build_counterexample, check_trace, default_params
from .errors import ForgeError
from .graph import Graph
from .montecarlo import TrialPlan, run_trials
from .oddminor import max_odd_clique_minor, model_to_pairing, verify_model
from .pairing import max_odd_connected_pairing
from .reports import (
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
)

EXIT_OK, EXIT_FALSE, EXIT_ERROR = 0, 1, 2
FORMATS = {".g6": "graph6", ".graph6": "graph6", ".dimacs": "dimacs", ".col": "dimacs", ".dim": "dimacs"}


# ---------------------------------------------------------------------------
# helpers


def _read_text(path: str) -> str:
    if path == "-":
        return sys.stdin.read()
    return Path(path).read_text(encoding="utf-8")


def _write_text(path: str | None, text: str) -> None:
    if path is None or path == "-":
        sys.stdout.write(text)
    else:
        Path(path).write_text(text, encoding="utf-8")


def _format_of(path: str, explicit: str | None) -> str:
    if explicit:
        return explicit
    fmt = FORMATS.get(Path(path).suffix.lower())
    if fmt is None:
        raise ForgeError(f"cannot infer the graph format of {path!r}; pass --format")
    return fmt


def read_graph(path: str, fmt: str | None = None) -> Graph:
    text = _read_text(path)
    if _format_of(path, fmt) == "graph6":
        return decode_graph6(text.strip())
    return decode_dimacs(text)


def write_graph(g: Graph, path: str, fmt: str | None = None) -> None:
    if _format_of(path, fmt) == "graph6":
        _write_text(path, encode_graph6(g) + "\n")
    else:
        _write_text(path, encode_dimacs(g))


def _emit(obj) -> None:
    sys.stdout.write(dumps(obj) + "\n")


def _fraction(text: str) -> Fraction:
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"not a rational number: {text!r}") from None


# ---------------------------------------------------------------------------
# subcommands


def cmd_generate(args, config) -> int:
    if args.paper_defaults:
        if args.n is None:
            raise ForgeError("--paper-defaults needs --n")
        params = default_params(args.n, args.seed)
    else:
        if args.preset:
            n, m, p = config.preset(args.preset)
        else:
            n, m, p = args.n, args.m, args.p
        if n is None or m is None or p is None:
            raise ForgeError("give --preset, --paper-defaults, or all of --n --m --p")
        params = ConstructionParams(n=n, m=m, p=p, seed=args.seed)
    trace = build_counterexample(params)
    _write_text(args.out, dumps(trace_to_dict(trace)) + "\n")
    sys.stderr.write(f"n={params.n} m={params.m} p={params.p:.6g} seed={params.seed} digest={trace.digest()}\n")
    return EXIT_OK


def cmd_verify(args, config) -> int:
    trace = trace_from_dict(loads(_read_text(args.input)))
    results = check_trace(trace, generic_limit=args.generic_limit)
    for r in results:
        line = f"{'PASS' if r.passed else 'FAIL'} {r.name}"
        if not r.passed and r.detail:
            line += f": {r.detail}"
        print(line)
    return EXIT_OK if all(r.passed for r in results) else EXIT_FALSE


def cmd_audit(args, config) -> int:
    trace = trace_from_dict(loads(_read_text(args.input)))
    pairing = pairing_from_json(loads(_read_text(args.pairing))) if args.pairing else None
    report = audit_instance(trace, eps=args.eps, gamma=args.gamma, pairing=pairing)
    _emit(document("event-report", report.to_dict()))
    return EXIT_OK


def cmd_search_pairing(args, config) -> int:
    g = read_graph(args.input, args.format)
    budget = args.budget if args.budget is not None else config.pairing_budget
    result = max_odd_connected_pairing(g, budget=budget)
    print(result.size)
    _emit(document("pairing", {"size": result.size, "status": result.status, "pairs": pairing_to_json(result.witness)}))
    return EXIT_OK


def cmd_search_odd_minor(args, config) -> int:
    g = read_graph(args.input, args.format)
    budget = args.budget
    if budget is None and g.n > config.minor_limit:
        budget = config.minor_budget
    result = max_odd_clique_minor(g, budget=budget)
    print(result.t)
    doc = model_to_dict(result.witness)
    doc["status"] = result.status
    if args.out:
        _write_text(args.out, dumps(model_to_dict(result.witness)) + "\n")
    _emit(doc)
    return EXIT_OK


def cmd_certify(args, config) -> int:
    g = read_graph(args.input, args.format)
    model = model_from_dict(loads(_read_text(args.model)))
    report = verify_model(g, model)
    body = {"verdict": report.verdict, "reason": report.reason, "witness": list(report.witness), "t": model.t}
    if report.verdict and args.to_pairing:
        if args.eta is None:
            raise ForgeError("--to-pairing needs --eta")
        pairing = model_to_pairing(g, model, args.eta)
        body["pairing"] = pairing_to_json(pairing)
    _emit(document("certificate", body))
    return EXIT_OK if report.verdict else EXIT_FALSE


PROBE_KEYS = {
    "chernoff": ("N", "p", "t"),
    "matching-lemma": ("graph", "q"),
    "respectful": ("n", "m", "eps", "pairing"),
    "construction-events": ("n", "m", "p"),
    "always-true": (),
    "fair-coin": (),
}


def cmd_probe(args, config) -> int:
    keys = PROBE_KEYS.get(args.target)
    if keys is None:
        raise ForgeError(f"unknown probe target {args.target!r}; known: {sorted(PROBE_KEYS)}")
    params = {}
    for key in keys:
        value = getattr(args, f"probe_{key}")
        if value is not None:
            params[key] = value
    plan = TrialPlan(args.target, args.trials, args.seed, params)
    try:
        estimate = run_trials(plan, jobs=args.jobs)
    except KeyError as exc:
        raise ForgeError(f"probe {args.target!r} needs --{exc.args[0]}") from None
    body = {"target": args.target, "params": params, "trials": args.trials, "seed": args.seed, "estimate": estimate}
    _emit(document("estimate", body))
    if args.results:
        append_jsonl(args.results, result_record("estimate", body))
    return EXIT_OK


def cmd_sweep_appendix(args, config) -> int:
    records = sweep_appendix(range(args.n_min, args.n_max + 1), jobs=args.jobs, reduce_isomorphism=not args.labelled)
    lines = []
    ok = True
    for rec in records:
        row = rec.to_dict()
        row["graph6"] = encode_graph6(_graph_of(rec.n, rec.code))
        lines.append(dumps(row))
        ok &= rec.prop_verdict and rec.ks_verdict
    _write_text(args.out, "".join(line + "\n" for line in lines))
    return EXIT_OK if ok else EXIT_FALSE


def _graph_of(n: int, code: int) -> Graph:
    from .graph import graph_from_bitmask

    return graph_from_bitmask(n, code)


def cmd_convert(args, config) -> int:
    g = read_graph(args.input, args.from_format)
    write_graph(g, args.out, args.to_format)
    return EXIT_OK


# ---------------------------------------------------------------------------
# parser


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, default=0, help="master seed (default 0)")
    common.add_argument("--jobs", type=int, default=os.cpu_count() or 1, help="worker processes")
    common.add_argument("--config", default=None, help="key = value configuration file")

    parser = argparse.ArgumentParser(prog="oddforge", description="Odd-minor counterexample toolkit.")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("generate", parents=[common], help="build a construction trace")
    p.add_argument("--n", type=int)
    p.add_argument("--m", type=int)
    p.add_argument("--p", type=float)
    p.add_argument("--preset")
    p.add_argument("--paper-defaults", action="store_true")
    p.add_argument("--out", default="-")
    p.set_defaults(func=cmd_generate)

    p = sub.add_parser("verify", parents=[common], help="check every trace invariant")
    p.add_argument("--in", dest="input", required=True)
    p.add_argument("--generic-limit", type=int, default=8192)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("audit", parents=[common], help="evaluate events on a trace")
    p.add_argument("--in", dest="input", required=True)
    p.add_argument("--pairing")
    p.add_argument("--eps", type=float, default=0.1)
    p.add_argument("--gamma", type=float, default=0.01)
    p.set_defaults(func=cmd_audit)

    for name, func, help_text in (
        ("search-pairing", cmd_search_pairing, "maximum odd connected pairing"),
        ("search-odd-minor", cmd_search_odd_minor, "largest odd clique minor"),
    ):
        p = sub.add_parser(name, parents=[common], help=help_text)
        p.add_argument("--in", dest="input", required=True)
        p.add_argument("--format", choices=("graph6", "dimacs"))
        p.add_argument("--budget", type=int)
        if name == "search-odd-minor":
            p.add_argument("--out", help="write the witness model here")
        p.set_defaults(func=func)

    p = sub.add_parser("certify", parents=[common], help="verify an odd-minor model")
    p.add_argument("--in", dest="input", required=True)
    p.add_argument("--format", choices=("graph6", "dimacs"))
    p.add_argument("--model", required=True)
    p.add_argument("--to-pairing", action="store_true")
    p.add_argument("--eta", type=_fraction)
    p.set_defaults(func=cmd_certify)

    p = sub.add_parser("probe", parents=[common], help="Monte Carlo frequency estimate")
    p.add_argument("target")
    p.add_argument("--trials", type=int, default=1000)
    p.add_argument("--N", dest="probe_N", type=int)
    p.add_argument("--p", dest="probe_p", type=float)
    p.add_argument("--t", dest="probe_t", type=float)
    p.add_argument("--q", dest="probe_q", type=float)
    p.add_argument("--graph", dest="probe_graph", help="family:n, e.g. cycle:8000")
    p.add_argument("--n", dest="probe_n", type=int)
    p.add_argument("--m", dest="probe_m", type=int)
    p.add_argument("--eps", dest="probe_eps", type=float)
    p.add_argument("--pairing", dest="probe_pairing", choices=("canonical", "reversed"))
    p.add_argument("--results", help="append a JSON-lines record here")
    p.set_defaults(func=cmd_probe)

    p = sub.add_parser("sweep-appendix", parents=[common], help="exhaustive small-n sweep")
    p.add_argument("--n-min", type=int, default=1)
    p.add_argument("--n-max", type=int, default=7)
    p.add_argument("--labelled", action="store_true", help="check every labelled graph, not one per class")
    p.add_argument("--out", default="-")
    p.set_defaults(func=cmd_sweep_appendix)

    p = sub.add_parser("convert", parents=[common], help="transcode between graph6 and DIMACS")
    p.add_argument("--in", dest="input", required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--from", dest="from_format", choices=("graph6", "dimacs"))
    p.add_argument("--to", dest="to_format", choices=("graph6", "dimacs"))
    p.set_defaults(func=cmd_convert)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        config = load_config(args.config)
        if args.command == "sweep-appendix" and args.n_max > 7:
            raise ForgeError("sweep-appendix covers n <= 7")
        return args.func(args, config)
    except (ForgeError, OSError, ValueError) as exc:
        sys.stderr.write(f"oddforge: error: {exc}\n")
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
