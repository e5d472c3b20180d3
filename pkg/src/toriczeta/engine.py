"""The two-stage driver: partition into regular toric data, then evaluate and sum."""

from __future__ import annotations

import json
import os
import sys
import time
from collections import Counter
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Callable

from .euler import EulerCache, EulerFailure
from .toric import ReduceFailure, ToricDatum, balance, is_regular, reduce, simplify, weight
from .topeval import FIT_POINTS, ModularSum, VerificationMismatch, RationalFunction1V, evaluate_topologically


@dataclass
class RunConfig:
    depth_cap: int = 3
    jobs: int = 1
    trace: str | None = None
    euler_cache_path: str | None = None
    mode: str = "subalgebra"
    stage1_only: bool = False
    progress: bool = False
    progress_every: int = 200
    points: int = FIT_POINTS  # evaluation points per prime for the final reconstruction

    def __post_init__(self):
        if self.depth_cap < 1:
            raise ValueError("depth_cap must be at least 1")
        if self.jobs < 1:
            raise ValueError("jobs must be at least 1")
        if self.points < 2:
            raise ValueError("points must be at least 2")


@dataclass
class RunOutcome:
    status: str  # "ok" or "fail"
    result: RationalFunction1V | None = None
    phase: str | None = None  # "reduce" or "euler" on failure
    reason: str | None = None
    datum: dict | None = None
    regular: list = field(default_factory=list)
    stats: dict = field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return self.status == "ok"


class Tracer:
    """Line-delimited JSON records of Stage I decisions (no timings, so runs compare equal)."""

    def __init__(self, path: str | None):
        self.fh = open(path, "w") if path else None

    def __call__(self, event: str, **data):
        if self.fh:
            self.fh.write(json.dumps({"event": event, **data}, sort_keys=True) + "\n")

    def close(self):
        if self.fh:
            self.fh.close()
            self.fh = None


def _progress(msg: str):
    print(msg, file=sys.stderr, flush=True)


def stage1(T0: ToricDatum, cfg: RunConfig | None = None, trace: Callable | None = None) -> list[ToricDatum]:
    """Partition T0 into regular toric data (raises ReduceFailure).

    A LIFO work list: pop, simplify, drop trivial data, balance unbalanced
    ones, keep regular ones, reduce the rest.
    """
    cfg = cfg or RunConfig()
    todo = [T0]
    regular: list[ToricDatum] = []
    steps = 0
    while todo:
        T = simplify(todo.pop())
        steps += 1
        if cfg.progress and steps % cfg.progress_every == 0:
            hist = Counter(P.depth for P in todo)
            _progress(f"stage I: {len(todo)} unprocessed, {len(regular)} regular, "
                      f"depths {dict(sorted(hist.items()))}")
        if T.is_trivial():
            continue
        if not T.is_balanced():
            pieces = balance(T)
            if trace:
                trace("balance", pieces=len(pieces), depth=T.depth)
            todo.extend(reversed(pieces))
            continue
        if is_regular(T):
            regular.append(T)
            if trace:
                trace("regular", index=len(regular) - 1, weight=weight(T), depth=T.depth)
            continue
        if trace:
            trace("reduce", weight=weight(T), depth=T.depth, polys=[str(f) for f in T.polys])
        on_cand = (lambda c: trace("candidate", **c.describe())) if trace else None
        pieces = reduce(T, cfg.depth_cap, on_candidate=on_cand)
        todo.extend(reversed(pieces))
    return regular


# -- Stage II -----------------------------------------------------------------------------

_worker_cache: EulerCache | None = None


def _init_worker(cache_path):
    global _worker_cache
    _worker_cache = EulerCache(cache_path)


def _evaluate_task(args):
    datum, beta, shifts, modular = args
    T = ToricDatum.from_dict(datum)
    cache = _worker_cache if _worker_cache is not None else EulerCache()
    stats: dict = {}
    try:
        S = evaluate_topologically(T, beta, shifts, cache, stats=stats)
    except EulerFailure as exc:
        return ("fail", str(exc), datum, dict(cache.fresh))
    fresh = dict(cache.fresh)
    cache.fresh.clear()
    M = ModularSum(**modular)
    M.add(S)
    return ("ok", M.state(), stats, fresh)


def stage2(regular: list[ToricDatum], beta, shifts, cfg: RunConfig, cache: EulerCache) -> tuple[ModularSum, dict]:
    """Σ evaluate_topologically over the regular data, as residues (raises EulerFailure with .datum)."""
    modular = {"fit": cfg.points}
    total = ModularSum(**modular)
    stats = {"terms": 0, "subsets": 0}
    tasks = [(T.to_dict(), beta, shifts, modular) for T in regular]

    def absorb(i, res):
        if res[0] == "fail":
            cache.merge(res[3])
            exc = EulerFailure(res[1])
            exc.datum = res[2]
            raise exc
        _, data, st, fresh = res
        cache.merge(fresh)
        total.merge_state(data)
        for k, v in st.items():
            stats[k] = stats.get(k, 0) + v
        if cfg.progress and (i + 1) % max(1, cfg.progress_every // 10) == 0:
            _progress(f"stage II: {i + 1}/{len(tasks)} data evaluated, {total.terms} terms")

    if cfg.jobs == 1 or len(tasks) <= 1:
        global _worker_cache
        saved = _worker_cache
        _worker_cache = cache
        try:
            for i, t in enumerate(tasks):
                absorb(i, _evaluate_task(t))
        finally:
            _worker_cache = saved
    else:
        with ProcessPoolExecutor(max_workers=cfg.jobs, initializer=_init_worker,
                                 initargs=(cfg.euler_cache_path,)) as ex:
            for i, res in enumerate(ex.map(_evaluate_task, tasks, chunksize=max(1, len(tasks) // (8 * cfg.jobs)))):
                absorb(i, res)
    return total, stats


def topological_zeta_function(T0: ToricDatum, beta, shifts, cfg: RunConfig | None = None,
                              expected_degree: int | None = None) -> RunOutcome:
    cfg = cfg or RunConfig()
    tracer = Tracer(cfg.trace)
    stats: dict = {}
    t0 = time.perf_counter()
    try:
        try:
            regular = stage1(T0, cfg, tracer if cfg.trace else None)
        except ReduceFailure as exc:
            return RunOutcome("fail", phase="reduce", reason=exc.reason,
                              datum=exc.datum.to_dict() if exc.datum is not None else None, stats=stats)
        stats["regular"] = len(regular)
        stats["stage1_seconds"] = time.perf_counter() - t0
        if cfg.progress:
            _progress(f"stage I done: {len(regular)} regular data")
        if cfg.stage1_only:
            return RunOutcome("ok", regular=regular, stats=stats)
        cache = EulerCache(cfg.euler_cache_path)
        try:
            S, st2 = stage2(regular, beta, shifts, cfg, cache)
        except EulerFailure as exc:
            return RunOutcome("fail", phase="euler", reason=str(exc), datum=getattr(exc, "datum", None),
                              regular=regular, stats=stats)
        finally:
            cache.flush()
        stats.update(st2)
        try:
            R = S.reconstruct()
        except VerificationMismatch as exc:
            return RunOutcome("fail", phase="interpolation", reason=str(exc), regular=regular, stats=stats)
        if not R.is_zero() and R.degree > 0:
            raise AssertionError(f"result has positive degree {R.degree}")
        if expected_degree is not None and not R.is_zero() and R.degree != expected_degree:
            _progress(f"warning: degree {R.degree} differs from the expected {expected_degree}")
        stats["seconds"] = time.perf_counter() - t0
        return RunOutcome("ok", result=R, regular=regular, stats=stats)
    finally:
        tracer.close()


def default_jobs() -> int:
    try:
        return len(os.sched_getaffinity(0))
    except AttributeError:
        return os.cpu_count() or 1
