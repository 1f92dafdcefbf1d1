"""Suite orchestration and per-instance explanations."""
from __future__ import annotations

import time
from concurrent.futures import ProcessPoolExecutor

from .. import convspace as cs
from ..convvect import carrier_bound
from ..monadlab import commutative as com
from ..monadlab.monads import is_reflexive
from .checks import CheckResult, Context, run_check, suite_keys
from .config import SuiteConfig
from .report import FubiniReport

_WORKER: dict = {}


def _init_worker(config: SuiteConfig) -> None:
    from ..convvect import limits

    limits.carrier_bound = config.carrier_bound
    _WORKER["ctx"] = Context(config)


def _work(task: tuple) -> list[CheckResult]:
    suite, key = task
    return run_check(_WORKER["ctx"], suite, key)


def run_suite(config: SuiteConfig) -> FubiniReport:
    """Run every selected suite; the result does not depend on ``config.jobs``."""
    config.validate()
    timing: dict[str, float] = {}
    results: list[CheckResult] = []
    with carrier_bound(config.carrier_bound):
        ctx = Context(config)
        tasks = [(s, k) for s in config.selected for k in suite_keys(ctx, s)]
        start = time.perf_counter()
        if config.jobs > 1 and len(tasks) > 1:
            with ProcessPoolExecutor(config.jobs, initializer=_init_worker, initargs=(config,)) as pool:
                for chunk in pool.map(_work, tasks, chunksize=max(1, len(tasks) // (8 * config.jobs))):
                    results.extend(chunk)
        else:
            for suite in config.selected:
                t0 = time.perf_counter()
                for key in suite_keys(ctx, suite):
                    results.extend(run_check(ctx, suite, key))
                timing[suite] = round(time.perf_counter() - t0, 3)
        timing["total"] = round(time.perf_counter() - start, 3)
    return FubiniReport.from_results(config.echo(), results, timing)


def explain_instance(x: cs.ConvSpace, y: cs.ConvSpace, config: SuiteConfig) -> str:
    """A readable trace of the commutativity check at ``(x, y)``."""
    ctx = Context(config)
    d = ctx.d
    with carrier_bound(config.carrier_bound):
        xy = cs.product(x, y)
        otimes, tilde = com.fubini_pair(x, y, d)
        equal, witness = com.compare_pair(x, y, d, (otimes, tilde))
        head = f"X({x.n} points) x Y({y.n} points) over F{config.field}: {'equal' if equal else 'DIFFERENT'}"
        lines = [head]
        for label, z in (("X", x), ("Y", y), ("XY", xy)):
            cot = d.cot(z)
            v = is_reflexive(cot)
            lines.append(f"  cotensor[{label}, R]: {cot.size} points, reflexive={v.reflexive}"
                         + ("" if v.reflexive else f" witness={v.witness}"))
        lines.append(f"  D X: {d.obj(x).n} points, D Y: {d.obj(y).n} points, D(XxY): {d.obj(xy).n} points")
        lines.append(f"  otimes       = {list(otimes.table)}")
        lines.append(f"  otimes_tilde = {list(tilde.table)}")
        if witness:
            lines.append(f"  first difference: {witness}")
    return "\n".join(lines)
