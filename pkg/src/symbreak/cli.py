"""Experiment harness CLI.

    symbreak <algorithm> [--graph FILE | --gnp N P | --gadget N]
             [--stream FILE] [--k K] [--beta B] [--eps E] [--seed S]
             [--reps R] [--out PATH] [--trace]
    symbreak sweep <algorithm> --vary PARAM --values V1,V2,...  [...]

One JSON-lines record per repetition; repetition r runs with seed
base_seed + r, and --gnp/--gadget instances are regenerated per
repetition so repetitions are fully independent experiments.  The
`valid` field always comes from the verification oracles run on the
full (final) graph, never from the algorithm itself.  SYMBREAK_SEED
overrides --seed when set.

Exit codes: 0 ok, 2 config error, 3 input error, 4 validity failure.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import os
import sys
import time
from dataclasses import dataclass

import numpy as np

from .beeping import BeepingMIS, simulate_in_kmachine
from .graph import Graph, GraphError, from_edges, gen_gnp, gen_lower_bound_graph, load_edge_list
from .kmachine import default_budget
from .ruling import TwoPhaseConfig, beta_ruling_set_kmachine, msg_efficient_two_ruling, optimal_eps, two_phase_two_ruling
from .streaming import (
    StreamError,
    assign_levels,
    dynamic_events_from_graph,
    insertion_events_from_graph,
    process_dynamic_stream,
    read_stream,
    stream_ruling_set,
    validate_turnstile,
)
from .verify import is_beta_ruling_set

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_INPUT = 3
EXIT_INVALID = 4

KMACHINE_ALGORITHMS = ("mis-kmachine", "beta-ruling-kmachine", "two-phase", "msg-two-ruling")
STREAM_ALGORITHMS = ("stream-beta-ruling", "stream-dynamic")
ALGORITHMS = KMACHINE_ALGORITHMS + STREAM_ALGORITHMS


class ConfigError(ValueError):
    pass


@dataclass
class ExperimentConfig:
    algorithm: str
    graph_file: str | None = None
    gnp: tuple[int, float] | None = None
    gadget: int | None = None
    stream_file: str | None = None
    k: int | None = None
    beta: int | None = None
    eps: float | None = None
    seed: int = 0
    reps: int = 1
    out: str | None = None
    trace: bool = False
    churn: float = 0.2
    budget: int | None = None

    def validate(self) -> None:
        if self.algorithm not in ALGORITHMS:
            raise ConfigError(f"unknown algorithm {self.algorithm!r}; choose from {ALGORITHMS}")
        if self.reps < 1:
            raise ConfigError("--reps must be >= 1")
        sources = sum(x is not None for x in (self.graph_file, self.gnp, self.gadget))
        if self.algorithm in KMACHINE_ALGORITHMS:
            if sources != 1:
                raise ConfigError("exactly one of --graph/--gnp/--gadget is required")
            if self.k is None:
                raise ConfigError(f"--k is required for {self.algorithm}")
            if self.k < 2:
                raise ConfigError("--k must be >= 2")
        else:
            if self.stream_file is None and sources != 1:
                raise ConfigError("stream algorithms need --stream or a graph source to synthesize from")
        if self.algorithm == "beta-ruling-kmachine" and self.beta is None:
            raise ConfigError("--beta is required for beta-ruling-kmachine")
        if self.algorithm in STREAM_ALGORITHMS and self.stream_file is None and self.beta is None:
            raise ConfigError(f"--beta is required for {self.algorithm}")
        if self.eps is not None and not 0.0 <= self.eps <= 1.0:
            raise ConfigError("--eps must be in [0, 1]")


def _load_graph(cfg: ExperimentConfig, seed: int) -> Graph:
    if cfg.graph_file is not None:
        return load_edge_list(cfg.graph_file)
    if cfg.gnp is not None:
        return gen_gnp(cfg.gnp[0], cfg.gnp[1], seed)
    return gen_lower_bound_graph(cfg.gadget, seed)


def _echo(cfg: ExperimentConfig, seed: int, rep: int) -> dict:
    rec = {"algorithm": cfg.algorithm, "seed": seed, "rep": rep}
    if cfg.graph_file is not None:
        rec["graph"] = cfg.graph_file
    if cfg.gnp is not None:
        rec["gnp"] = list(cfg.gnp)
    if cfg.gadget is not None:
        rec["gadget"] = cfg.gadget
    if cfg.stream_file is not None:
        rec["stream"] = cfg.stream_file
    for name in ("k", "beta", "eps"):
        val = getattr(cfg, name)
        if val is not None:
            rec[name] = val
    return rec


def _run_one(cfg: ExperimentConfig, seed: int, rep: int) -> dict:
    rec = _echo(cfg, seed, rep)
    t0 = time.perf_counter()
    rounds = messages = stored = samplers = None
    extra: dict = {}
    if cfg.algorithm in KMACHINE_ALGORITHMS:
        g = _load_graph(cfg, seed)
        budget = cfg.budget if cfg.budget is not None else default_budget(g.n)
        if cfg.algorithm == "mis-kmachine":
            dec, trace, metrics = simulate_in_kmachine(
                BeepingMIS(), g, cfg.k, seed, budget=budget, record_rounds=cfg.trace
            )
            out = np.flatnonzero(dec == 1)
            target = 1
            if cfg.trace:
                extra["trace"] = trace.to_json(verbose=True)
            else:
                extra["trace"] = trace.to_json()
        elif cfg.algorithm == "beta-ruling-kmachine":
            out, metrics = beta_ruling_set_kmachine(g, cfg.beta, cfg.k, seed, budget=budget)
            target = cfg.beta
        elif cfg.algorithm == "two-phase":
            eps = cfg.eps if cfg.eps is not None else optimal_eps(g.n, cfg.k)
            rec["eps"] = eps
            out, metrics = two_phase_two_ruling(g, TwoPhaseConfig(eps=eps, k=cfg.k), seed, budget=budget)
            target = 2
        else:
            out, metrics, msg = msg_efficient_two_ruling(g, cfg.k, seed, budget=budget)
            extra["msg_complexity"] = msg
            target = 2
        rounds = metrics.rounds
        messages = metrics.total_messages
        final_graph = g
    else:
        if cfg.stream_file is not None:
            n, ops, us, vs = read_stream(cfg.stream_file)
            present = validate_turnstile(n, ops, us, vs)
            pairs = sorted(present)
            final_graph = from_edges(
                n, [a for a, _ in pairs], [b for _, b in pairs]
            )
            beta = cfg.beta if cfg.beta is not None else 2
        else:
            g = _load_graph(cfg, seed)
            n = g.n
            beta = cfg.beta
            if cfg.algorithm == "stream-dynamic":
                (ops, us, vs), final_graph = dynamic_events_from_graph(g, seed, churn=cfg.churn)
            else:
                ops, us, vs = insertion_events_from_graph(g, seed)
                final_graph = g
        rec["beta"] = beta
        levels = assign_levels(n, beta, seed)
        if cfg.algorithm == "stream-dynamic":
            res = process_dynamic_stream((ops, us, vs), levels, seed=seed, details=True)
            out = res.ruling_set
            stored = res.recovered_rows
            samplers = res.sketch_cells
        else:
            out, store = stream_ruling_set((ops, us, vs), levels)
            stored = store.total_stored
        target = beta
    verdict = is_beta_ruling_set(final_graph, out, target)
    rec.update(
        rounds=rounds,
        messages=messages,
        stored_edges=stored,
        sampler_count=samplers,
        output_size=int(len(out)),
        valid=bool(verdict.ok),
    )
    rec.update(extra)
    rec["wall_time_ms"] = round(1000.0 * (time.perf_counter() - t0), 3)
    return rec


def run(cfg: ExperimentConfig) -> list[dict]:
    """One record per repetition, seeds base_seed + rep index."""
    cfg.validate()
    records = []
    for rep in range(cfg.reps):
        records.append(_run_one(cfg, cfg.seed + rep, rep))
    return records


def _emit(records: list[dict], out: str | None) -> None:
    lines = [json.dumps(r) for r in records]
    if out:
        with open(out, "a", encoding="utf-8") as f:
            for line in lines:
                f.write(line + "\n")
    else:
        for line in lines:
            print(line)


SWEEP_PARAMETERS = ("k", "beta", "n", "eps")
_AGGREGATED = ("rounds", "messages", "stored_edges")


def sweep(cfg: ExperimentConfig, vary: str, values: list) -> list[dict]:
    """Run the config once per parameter value; aggregate over repetitions."""
    if vary not in SWEEP_PARAMETERS:
        raise ConfigError(f"--vary must be one of {SWEEP_PARAMETERS}")
    rows = []
    for value in values:
        sub = ExperimentConfig(**{**cfg.__dict__})
        if vary == "n":
            if sub.gnp is None:
                raise ConfigError("--vary n requires --gnp")
            sub.gnp = (int(value), sub.gnp[1])
        elif vary == "eps":
            sub.eps = float(value)
        else:
            setattr(sub, vary, int(value))
        records = run(sub)
        row = {"vary": vary, "value": value, "reps": len(records)}
        for name in _AGGREGATED:
            vals = [r[name] for r in records if r[name] is not None]
            if vals:
                row[f"{name}_mean"] = float(np.mean(vals))
                row[f"{name}_min"] = min(vals)
                row[f"{name}_max"] = max(vals)
        row["all_valid"] = all(r["valid"] for r in records)
        rows.append(row)
    return rows


def _emit_sweep(rows: list[dict], out: str | None) -> None:
    cols: list[str] = []
    for row in rows:
        for key in row:
            if key not in cols:
                cols.append(key)
    buf = io.StringIO()
    writer = csv.DictWriter(buf, fieldnames=cols)
    writer.writeheader()
    for row in rows:
        writer.writerow(row)
    if out:
        with open(out + ".csv", "w", encoding="utf-8") as f:
            f.write(buf.getvalue())
        with open(out + ".json", "w", encoding="utf-8") as f:
            json.dump(rows, f, indent=2)
            f.write("\n")
    else:
        sys.stdout.write(buf.getvalue())


def _add_common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--graph", metavar="FILE", help="edge-list file ('# n=N' header, 'u v' lines)")
    p.add_argument("--gnp", nargs=2, metavar=("N", "P"), help="Erdos-Renyi instance")
    p.add_argument("--gadget", type=int, metavar="N", help="disjoint 14-node gadgets instance (14 | N)")
    p.add_argument("--stream", metavar="FILE", help="event stream file ('(+|-) u v' lines)")
    p.add_argument("--k", type=int, help="machine count")
    p.add_argument("--beta", type=int, help="ruling-set hop parameter")
    p.add_argument("--eps", type=float, help="two-phase split parameter in [0,1]")
    p.add_argument("--seed", type=int, default=0, help="base seed (SYMBREAK_SEED overrides)")
    p.add_argument("--reps", type=int, default=1, help="repetitions, seeds base+0..base+R-1")
    p.add_argument("--out", help="append JSON-lines here instead of stdout")
    p.add_argument("--trace", action="store_true", help="include per-round beep detail where applicable")
    p.add_argument("--churn", type=float, default=0.2, help="deleted fraction for synthesized dynamic streams")
    p.add_argument("--budget", type=int, help="per-link messages per round (default ceil(log2 n))")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="symbreak", description=__doc__,
                                     formatter_class=argparse.RawDescriptionHelpFormatter)
    sub = parser.add_subparsers(dest="command", required=True, metavar="<algorithm>|sweep")
    for name in ALGORITHMS:
        p = sub.add_parser(name)
        _add_common(p)
    ps = sub.add_parser("sweep")
    ps.add_argument("algorithm", choices=ALGORITHMS)
    ps.add_argument("--vary", required=True, choices=SWEEP_PARAMETERS)
    ps.add_argument("--values", required=True, help="comma-separated values")
    _add_common(ps)
    return parser


def _config_from_args(args: argparse.Namespace, algorithm: str) -> ExperimentConfig:
    gnp = None
    if args.gnp is not None:
        gnp = (int(args.gnp[0]), float(args.gnp[1]))
    seed = args.seed
    env_seed = os.environ.get("SYMBREAK_SEED")
    if env_seed is not None:
        seed = int(env_seed)
    return ExperimentConfig(
        algorithm=algorithm,
        graph_file=args.graph,
        gnp=gnp,
        gadget=args.gadget,
        stream_file=args.stream,
        k=args.k,
        beta=args.beta,
        eps=args.eps,
        seed=seed,
        reps=args.reps,
        out=args.out,
        trace=args.trace,
        churn=args.churn,
        budget=args.budget,
    )


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        if args.command == "sweep":
            cfg = _config_from_args(args, args.algorithm)
            values = [v for v in args.values.split(",") if v]
            rows = sweep(cfg, args.vary, values)
            _emit_sweep(rows, cfg.out)
            return EXIT_OK if all(r["all_valid"] for r in rows) else EXIT_INVALID
        cfg = _config_from_args(args, args.command)
        records = run(cfg)
        _emit(records, cfg.out)
        return EXIT_OK if all(r["valid"] for r in records) else EXIT_INVALID
    except ConfigError as exc:
        print(f"symbreak: config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except (GraphError, StreamError, OSError) as exc:
        print(f"symbreak: input error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
