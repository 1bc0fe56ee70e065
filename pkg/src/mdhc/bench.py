"""Point-query benchmark over store files and the table baseline.

Every representation answers the same random sample of existing cells.
Wall-clock times are informational; the stable metric is the probe
counters: key comparisons (each one a positioned read for the
disk-resident table search) and positioned payload reads.
"""

from __future__ import annotations

import time
from dataclasses import dataclass

import numpy as np

from .headers import ProbeStats
from .store import read_store, read_table

DEFAULT_SAMPLE_SIZES = (100, 500, 1000, 5000, 10000)

CSV_FIELDS = (
    "representation", "sample_size", "elapsed_s", "comparisons", "reads", "quotient"
)


@dataclass
class BenchResult:
    representation: str
    sample_size: int
    elapsed_s: float
    comparisons: int
    reads: int
    quotient: float  # table elapsed / this representation's elapsed

    def csv_row(self) -> list:
        return [
            self.representation, self.sample_size, f"{self.elapsed_s:.6f}",
            self.comparisons, self.reads, f"{self.quotient:.3f}",
        ]


def _timed(reader, coords, stats: ProbeStats) -> float:
    start = time.perf_counter()
    for c in coords:
        reader.point_query(c, stats)
    return time.perf_counter() - start


def run_bench(
    table_path: str,
    store_paths: list[str],
    sample_sizes=DEFAULT_SAMPLE_SIZES,
    seed: int = 0,
) -> list[BenchResult]:
    results: list[BenchResult] = []
    rng = np.random.default_rng(seed)
    readers = []
    with read_table(table_path) as table:
        try:
            readers = [read_store(p) for p in store_paths]
            names = []
            for reader, path in zip(readers, store_paths):
                name = reader.method
                if name in names:
                    name = f"{name}:{path}"
                names.append(name)
            for size in sample_sizes:
                picks = rng.integers(0, table.count, size=size)
                coords = [table.ordinals_at(int(i)) for i in picks]
                stats = ProbeStats()
                table_elapsed = _timed(table, coords, stats)
                results.append(BenchResult(
                    "table", size, table_elapsed,
                    stats.comparisons, stats.reads, 1.0,
                ))
                for name, reader in zip(names, readers):
                    stats = ProbeStats()
                    elapsed = _timed(reader, coords, stats)
                    results.append(BenchResult(
                        name, size, elapsed, stats.comparisons, stats.reads,
                        table_elapsed / max(elapsed, 1e-12),
                    ))
        finally:
            for reader in readers:
                reader.close()
    return results
