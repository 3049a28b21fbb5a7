"""Timing harness: brute force vs the enumerators vs AAS, against the Omega index."""

from __future__ import annotations

import random
import time
from dataclasses import asdict, dataclass

from .aas import aas_solve
from .enumerators import all_stable1, all_stable2
from .generators import RandomSpec, random_kb, stratified_kb
from .graphs import omega_index
from .kb import KnowledgeBase
from .semantics import brute_force_stable_models

ENGINES = ("brute", "as1", "as2", "aas")


@dataclass
class BenchRow:
    instance: int
    n: int
    rules: int
    length: int
    t_pi: int
    models: int
    brute: float | None
    as1: float
    as2: float
    aas: float

    def as_dict(self) -> dict:
        return asdict(self)


def _timed(fn, kb):
    t0 = time.perf_counter()
    out = fn(kb)
    return out, time.perf_counter() - t0


def bench_instance(i: int, kb: KnowledgeBase, brute_cap: int = 20) -> BenchRow:
    ms, t_aas = _timed(aas_solve, kb)
    _, t1 = _timed(all_stable1, kb)
    _, t2 = _timed(all_stable2, kb)
    tb = None
    if kb.n <= brute_cap:
        _, tb = _timed(lambda k: brute_force_stable_models(k, cap=brute_cap), kb)
    return BenchRow(i, kb.n, len(kb.rules), kb.length, omega_index(kb).t_pi, len(ms), tb, t1, t2, t_aas)


def generate(seed: int, n: int, count: int, stratified: bool = False, rules: int | None = None) -> list[KnowledgeBase]:
    rng = random.Random(seed)
    if n <= 0:
        return []
    rules = rules if rules is not None else 2 * n
    if stratified:
        return [stratified_kb(rng, n, rules) for _ in range(count)]
    return [random_kb(rng, RandomSpec(n=n, rules=rules)) for _ in range(count)]


def run_bench(seed: int = 1, n: int = 10, count: int = 50, stratified: bool = False,
              brute_cap: int = 20) -> list[BenchRow]:
    return [bench_instance(i, kb, brute_cap) for i, kb in enumerate(generate(seed, n, count, stratified))]


def format_table(rows: list[BenchRow]) -> str:
    head = f"{'#':>4} {'n':>3} {'rules':>5} {'len':>5} {'t_pi':>6} {'models':>6} " \
           f"{'brute_ms':>9} {'as1_ms':>8} {'as2_ms':>8} {'aas_ms':>8}"
    lines = [head]
    for r in rows:
        b = f"{r.brute * 1e3:9.3f}" if r.brute is not None else f"{'-':>9}"
        lines.append(
            f"{r.instance:>4} {r.n:>3} {r.rules:>5} {r.length:>5} {r.t_pi:>6} {r.models:>6} "
            f"{b} {r.as1 * 1e3:8.3f} {r.as2 * 1e3:8.3f} {r.aas * 1e3:8.3f}"
        )
    return "\n".join(lines) + "\n"


def summary(rows: list[BenchRow]) -> dict:
    timed = [r for r in rows if r.brute is not None]
    faster = sum(1 for r in timed if r.aas <= r.brute)
    return {
        "instances": len(rows),
        "aas_not_slower_than_brute": faster,
        "fraction": faster / len(timed) if timed else None,
    }
