"""Query-budget experiments on the planted-block hard instances.

Compares the score-driven pipeline against a non-adaptive control that
queries uniformly random off-diagonal cells, collects the 1-entries it
happens to see, and can only use a planted block once every one of its
members has shown up in some discovered entry. The lower-bound theory says
any algorithm needs ~ n k / eps reads here; the experiment is its
empirical companion, not a proof.
"""

from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from .core import (
    HardInstanceSpec,
    PlantedBlock,
    PsdMatrix,
    PsdOracle,
    ValidationError,
    hard_instance_best_rank_k_tail,
    gen_hard_instance,
    planted_subset_size,
    substream,
)
from .exact import frob_sq
from .lowrank import algorithm1_frobenius
from .sampling import AlgoConfig


@dataclass(frozen=True)
class BudgetedRun:
    """Outcome of one (algorithm, budget, repeat) cell."""

    algorithm: str
    budget: int
    repeat: int
    seed: int
    accesses_used: int
    ratio: float
    success: bool

    def csv_row(self) -> str:
        from .io import fmt_float

        return ",".join([
            self.algorithm, str(self.budget), str(self.repeat),
            str(self.seed), str(self.accesses_used), fmt_float(self.ratio),
            "true" if self.success else "false",
        ])


CSV_HEADER = "algorithm,budget,repeat,seed,accesses_used,ratio,success"


class _UnionFind:
    def __init__(self):
        self.parent: dict[int, int] = {}

    def find(self, x: int) -> int:
        p = self.parent.setdefault(x, x)
        while p != self.parent[p]:
            self.parent[p] = self.parent[self.parent[p]]
            p = self.parent[p]
        self.parent[x] = p
        return p

    def union(self, a: int, b: int) -> None:
        ra, rb = self.find(a), self.find(b)
        if ra != rb:
            self.parent[rb] = ra

    def components(self) -> list[list[int]]:
        groups: dict[int, list[int]] = {}
        for x in self.parent:
            groups.setdefault(self.find(x), []).append(x)
        return list(groups.values())


def _qualify_blocks(ones_i: np.ndarray, ones_j: np.ndarray, s_expected: int,
                    discovery: str) -> list[np.ndarray]:
    """Group discovered 1-entries and keep fully discovered blocks.

    "submatrix" requires every off-diagonal cell of an s x s block to have
    been observed; "vertices" accepts any connected set of observed
    1-entries touching exactly s indices.
    """
    uf = _UnionFind()
    for a, b in zip(ones_i, ones_j):
        uf.union(int(a), int(b))
    if discovery == "vertices":
        return [np.array(sorted(c)) for c in uf.components()
                if len(c) == s_expected]
    roots = {}
    for a in ones_i:
        roots.setdefault(uf.find(int(a)), 0)
    edge_count = dict.fromkeys(roots, 0)
    for a in ones_i:
        edge_count[uf.find(int(a))] += 1
    need = s_expected * (s_expected - 1) // 2
    found = []
    for comp in uf.components():
        if len(comp) == s_expected and edge_count[uf.find(comp[0])] == need:
            found.append(np.array(sorted(comp)))
    return found


def uniform_query_strawman(oracle: PsdOracle, spec: HardInstanceSpec,
                           budget: int, seed: int,
                           discovery: str = "submatrix"
                           ) -> tuple[list[np.ndarray], int]:
    """Non-adaptive control: read uniformly random off-diagonal cells up to
    ``budget`` distinct entries and return the planted blocks it fully
    discovered.

    The expected planted-set size is known from (n, k, eps). With the
    default ``discovery="submatrix"`` a block counts only once all of its
    off-diagonal cells have been observed; ``discovery="vertices"`` is the
    stronger inference that accepts a connected group of observed
    1-entries covering s indices.
    """
    if discovery not in ("submatrix", "vertices"):
        raise ValidationError(f"unknown discovery mode {discovery!r}")
    n = oracle.n
    m = spec.n // (2 * spec.k) if spec.variant == "gamma_b" else spec.n
    s_expected = planted_subset_size(m, spec.eps)
    gen = substream(seed, "strawman")
    start = oracle.access_count

    max_offdiag = n * (n - 1) // 2
    if budget >= max_offdiag:
        # Full information: read every off-diagonal cell outright.
        full = oracle.full()
        ones = np.argwhere(np.triu(full, 1) == 1.0)
        found = _qualify_blocks(ones[:, 0], ones[:, 1], s_expected, discovery)
        return found, oracle.access_count - start

    seen = np.zeros((n, n), dtype=bool)
    np.fill_diagonal(seen, True)
    used = 0
    ones_i: list[int] = []
    ones_j: list[int] = []
    while used < budget:
        batch = max(256, min(budget - used, 8192))
        i = gen.integers(0, n, size=4 * batch)
        j = gen.integers(0, n, size=4 * batch)
        lo, hi = np.minimum(i, j), np.maximum(i, j)
        fresh = ~seen[lo, hi] & (lo != hi)
        # dedup within the batch, keep first occurrences, respect budget
        lin = lo[fresh] * n + hi[fresh]
        _, first = np.unique(lin, return_index=True)
        order = np.sort(first)[: budget - used]
        lo, hi = lo[fresh][order], hi[fresh][order]
        if len(lo) == 0:
            continue
        seen[lo, hi] = True
        vals = oracle.pairs(lo, hi)
        used += len(lo)
        hit = vals == 1.0
        ones_i.extend(lo[hit].tolist())
        ones_j.extend(hi[hit].tolist())

    found = _qualify_blocks(np.array(ones_i, dtype=np.int64),
                            np.array(ones_j, dtype=np.int64),
                            s_expected, discovery)
    return found, oracle.access_count - start


def strawman_ratio(matrix: PsdMatrix, spec: HardInstanceSpec,
                   blocks: list[PlantedBlock],
                   found: list[np.ndarray]) -> float:
    """Exact error ratio of the indicator approximation built from fully
    discovered blocks, padded with unit directions up to rank k."""
    n = matrix.n
    approx = np.zeros((n, n))
    covered: set[int] = set()
    for p in found[: spec.k]:
        approx[np.ix_(p, p)] = 1.0
        covered.update(int(x) for x in p)
    spare = spec.k - min(len(found), spec.k)
    for idx in range(n):
        if spare == 0:
            break
        if idx not in covered:
            approx[idx, idx] = 1.0
            covered.add(idx)
            spare -= 1
    err = frob_sq(matrix.values - approx)
    opt = hard_instance_best_rank_k_tail(spec, blocks)
    return err / max(opt, 1e-30)


def _one_repeat(spec: HardInstanceSpec, algorithms, budgets, repeat: int,
                seed: int, config: AlgoConfig,
                discovery: str = "submatrix") -> list[BudgetedRun]:
    inst_seed = seed + 104729 * repeat
    inst_spec = HardInstanceSpec(spec.n, spec.k, spec.eps, spec.variant,
                                 inst_seed)
    matrix, blocks = gen_hard_instance(inst_spec)
    opt = hard_instance_best_rank_k_tail(inst_spec, blocks)
    rows: list[BudgetedRun] = []

    alg1_accesses = None
    if "algorithm1" in algorithms:
        oracle = matrix.oracle()
        factor, report = algorithm1_frobenius(oracle, spec.k, spec.eps,
                                              config, inst_seed)
        err = frob_sq(matrix.values - factor.apply())
        ratio = err / max(opt, 1e-30)
        alg1_accesses = report.accesses
        rows.append(BudgetedRun(
            algorithm="algorithm1", budget=report.accesses, repeat=repeat,
            seed=inst_seed, accesses_used=report.accesses, ratio=ratio,
            success=bool(ratio <= 1.0 + spec.eps),
        ))

    if "strawman" in algorithms:
        straw_budgets = budgets
        if straw_budgets == "matched":
            if alg1_accesses is None:
                raise ValidationError("matched budgets need algorithm1 runs")
            straw_budgets = [alg1_accesses]
        for budget in straw_budgets:
            oracle = matrix.oracle()
            found, used = uniform_query_strawman(oracle, inst_spec, budget,
                                                 inst_seed,
                                                 discovery=discovery)
            ratio = strawman_ratio(matrix, inst_spec, blocks, found)
            rows.append(BudgetedRun(
                algorithm="strawman", budget=budget, repeat=repeat,
                seed=inst_seed, accesses_used=used, ratio=ratio,
                success=bool(ratio <= 1.0 + spec.eps),
            ))
    return rows


def run_budget_experiment(spec: HardInstanceSpec, algorithms, budgets,
                          repeats: int, seed: int,
                          config: AlgoConfig | None = None,
                          discovery: str = "submatrix"
                          ) -> list[BudgetedRun]:
    """Run the (algorithm, budget, repeat) grid on fresh hard instances.

    ``budgets`` is a list of entry budgets for the strawman, or "matched"
    to hand each strawman run exactly the entry count the pipeline used on
    the same instance. Repeats run in a worker pool capped by the
    PSDSKETCH_THREADS environment variable; results merge in deterministic
    (algorithm, budget, repeat) order.
    """
    config = config or AlgoConfig()
    unknown = set(algorithms) - {"algorithm1", "strawman"}
    if unknown:
        raise ValidationError(f"unknown algorithms: {sorted(unknown)}")

    workers = int(os.environ.get("PSDSKETCH_THREADS", "1") or "1")
    results: list[BudgetedRun] = []
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            futures = [
                pool.submit(_one_repeat, spec, algorithms, budgets, r, seed,
                            config, discovery)
                for r in range(repeats)
            ]
            for fut in futures:
                results.extend(fut.result())
    else:
        for r in range(repeats):
            results.extend(_one_repeat(spec, algorithms, budgets, r, seed,
                                       config, discovery))
    results.sort(key=lambda b: (b.algorithm, b.budget, b.repeat))
    return results


def success_rate(runs: list[BudgetedRun], algorithm: str) -> float:
    rel = [r for r in runs if r.algorithm == algorithm]
    if not rel:
        return 0.0
    return sum(r.success for r in rel) / len(rel)
