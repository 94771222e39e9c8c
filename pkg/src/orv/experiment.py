"""Batch experiment: generate accepted multi-traces, slices and mutants, analyze them all."""
from __future__ import annotations

import csv
import random
import statistics
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional

from .engine import AnalysisConfig, Verdict, analyze
from .ir import Interaction, Signature
from .semantics import generate_accepted
from .traces import (
    MultiTrace,
    MutationError,
    Partition,
    mutate_insert_action,
    mutate_swap_actions,
    mutate_swap_components,
    random_wide_slice,
    slices_of,
)

CSV_HEADER = ("set", "index", "length", "verdict", "median_seconds", "nodes", "re_steps", "rs_steps")
SET_NAMES = ("T", "S", "M_sa", "M_sc", "M_ia")


@dataclass
class ExperimentConfig:
    partition: Partition
    max_loop_instantiations: int = 2
    slices: str = "exhaustive"  # exhaustive | random
    slices_per_trace: int = 3
    mutants_per_trace: int = 1
    repetitions: int = 5
    seed: int = 0
    jobs: int = 1
    analysis: AnalysisConfig = field(default_factory=AnalysisConfig)

    def __post_init__(self):
        if self.slices not in ("exhaustive", "random"):
            raise ValueError(f"unknown slice mode {self.slices!r}")
        if self.repetitions < 1:
            raise ValueError("at least one repetition is needed")


@dataclass(frozen=True)
class Row:
    set: str
    index: int
    length: int
    verdict: Verdict
    median_seconds: float
    nodes: int
    re_steps: int
    rs_steps: int
    multitrace: MultiTrace
    cap_hit: bool = False


def _ordered(traces) -> list:
    return sorted(traces, key=lambda mu: (len(mu), str(mu)))


def build_sets(i: Interaction, sig: Signature, cfg: ExperimentConfig) -> dict:
    """The five multi-trace sets, each in a deterministic order."""
    rng = random.Random(cfg.seed)
    accepted = _ordered(generate_accepted(i, cfg.partition, max_loop_instantiations=cfg.max_loop_instantiations))
    accepted_set = set(accepted)
    if cfg.slices == "exhaustive":
        pool = set()
        for mu in accepted:
            pool |= slices_of(mu)
        slices = _ordered(pool - accepted_set)
    else:
        pool = set()
        for mu in accepted:
            for _ in range(cfg.slices_per_trace):
                pool.add(random_wide_slice(mu, rng))
        slices = _ordered(pool - accepted_set)

    def mutants(make) -> list:
        out = set()
        for mu in accepted:
            for _ in range(cfg.mutants_per_trace):
                try:
                    m = make(mu)
                except MutationError:
                    continue
                if m not in accepted_set:
                    out.add(m)
        return _ordered(out)

    def swap_components(mu):
        if len(accepted) < 2 or len(mu.partition.colocs) < 2:
            raise MutationError("component swap needs two traces and two co-localizations")
        other = rng.choice(accepted)
        coloc = rng.choice(mu.partition.colocs)
        return mutate_swap_components(mu, other, coloc)

    return {
        "T": accepted,
        "S": slices,
        "M_sa": mutants(lambda mu: mutate_swap_actions(mu, rng)),
        "M_sc": mutants(swap_components),
        "M_ia": mutants(lambda mu: mutate_insert_action(mu, rng, sig)),
    }


def _measure(args) -> tuple:
    i, mu, cfg, reps = args
    times = []
    report = None
    for _ in range(reps):
        t0 = time.perf_counter()
        report = analyze(i, mu, cfg)
        times.append(time.perf_counter() - t0)
    s = report.stats
    return report.verdict, statistics.median(times), s.nodes, s.re_steps, s.rs_steps, s.cap_hit


def run_experiment(i: Interaction, sig: Signature, cfg: ExperimentConfig, sets: Optional[dict] = None) -> list:
    sets = sets if sets is not None else build_sets(i, sig, cfg)
    jobs = [(name, k, mu) for name in SET_NAMES for k, mu in enumerate(sets.get(name, ()))]
    args = [(i, mu, cfg.analysis, cfg.repetitions) for _, _, mu in jobs]
    if cfg.jobs > 1:
        with ProcessPoolExecutor(max_workers=cfg.jobs) as pool:
            results = list(pool.map(_measure, args, chunksize=16))
    else:
        results = [_measure(a) for a in args]
    rows = [Row(name, k, len(mu), *res[:5], mu, res[5]) for (name, k, mu), res in zip(jobs, results)]
    # pool.map keeps submission order; sort anyway to make the contract explicit
    order = {n: k for k, n in enumerate(SET_NAMES)}
    rows.sort(key=lambda r: (order[r.set], r.index))
    return rows


def write_csv(rows: list, path) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with path.open("w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh)
        w.writerow(CSV_HEADER)
        for r in rows:
            w.writerow([r.set, r.index, r.length, r.verdict.value, f"{r.median_seconds:.6f}", r.nodes, r.re_steps, r.rs_steps])
    return path


def summarize(rows: list) -> dict:
    """Verdict counts per set."""
    out: dict = {}
    for r in rows:
        counts = out.setdefault(r.set, {v.value: 0 for v in Verdict})
        counts[r.verdict.value] += 1
    return out
