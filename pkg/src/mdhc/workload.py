"""Deterministic synthetic sparse relations for size and speed studies.

Three sparsity profiles control the run structure of the nonempty
cells:

* ``singleton`` -- no two nonempty cells adjacent, so every run has
  length 1 and the run count is maximal;
* ``longrun``   -- every run of consecutive nonempty cells is at least
  ``min_run`` long (time-series-like data);
* ``uniform``   -- positions drawn uniformly without any run constraint.

The nonempty count is round(density * logical space), so the achieved
density matches the request up to rounding.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import WorkloadError
from .relation import RelationSchema, schema_from_cardinalities

PROFILES = ("singleton", "longrun", "uniform")


@dataclass(frozen=True)
class WorkloadSpec:
    profile: str
    dims: tuple[int, ...]
    density: float
    min_run: int = 17
    seed: int = 0
    payload_len: int = 8


@dataclass
class Relation:
    """Schema plus the sorted nonempty cells and their packed payloads."""

    schema: RelationSchema
    positions: list[int]
    payloads: bytes

    @property
    def count(self) -> int:
        return len(self.positions)

    def payload_at(self, i: int) -> bytes:
        plen = self.schema.payload_len
        return self.payloads[i * plen : (i + 1) * plen]


def _distinct_sorted(rng: np.random.Generator, upper: int, k: int) -> np.ndarray:
    """k distinct sorted integers from [0, upper) without O(upper) memory."""
    if k > upper:
        raise WorkloadError(f"cannot draw {k} distinct values below {upper}")
    if k == upper:
        return np.arange(upper, dtype=np.int64)
    if upper <= 4 * k or upper <= 1 << 20:
        return np.sort(rng.choice(upper, size=k, replace=False)).astype(np.int64)
    out = np.unique(rng.integers(0, upper, size=k + k // 16 + 16, dtype=np.int64))
    while out.size < k:
        out = np.union1d(out, rng.integers(0, upper, size=k, dtype=np.int64))
    if out.size > k:
        out = np.sort(rng.choice(out, size=k, replace=False))
    return out


def _singleton_positions(rng, space: int, count: int) -> np.ndarray:
    if count > space - count + 1:
        raise WorkloadError(
            f"{count} pairwise non-adjacent cells do not fit in {space}"
        )
    picks = _distinct_sorted(rng, space - count + 1, count)
    return picks + np.arange(count, dtype=np.int64)


def _longrun_positions(rng, space: int, count: int, min_run: int) -> np.ndarray:
    if count < min_run:
        raise WorkloadError(
            f"density too low: {count} cells cannot form a run of {min_run}"
        )
    # run lengths: min_run plus a small geometric surplus, trimmed to count
    lengths: list[int] = []
    total = 0
    while total < count:
        draw = min_run + int(rng.geometric(0.25)) - 1
        lengths.append(draw)
        total += draw
    overshoot = total - count
    if overshoot:
        if lengths[-1] - overshoot >= min_run:
            lengths[-1] -= overshoot
        else:
            # drop the trimmed run; the one before absorbs what it owed
            lengths[-1] -= overshoot
            lengths[-2] += lengths.pop()
    # merge runs until the interior gaps (>= 1 each) fit in the space
    while space - count < len(lengths) - 1:
        lengths[-2] += lengths.pop()
    r = len(lengths)
    slack = space - count - (r - 1)
    weights = rng.random(r + 1)
    alloc = np.floor(weights / weights.sum() * slack).astype(np.int64)
    deltas = np.ones(count, dtype=np.int64)
    deltas[0] = int(alloc[0])
    boundaries = np.cumsum(lengths)[:-1]
    deltas[boundaries] = 2 + alloc[1:r]
    return np.cumsum(deltas)


def generate(spec: WorkloadSpec) -> Relation:
    """Produce a deterministic relation for the given workload spec."""
    if spec.profile not in PROFILES:
        raise WorkloadError(f"unknown profile {spec.profile!r}")
    if not spec.dims:
        raise WorkloadError("at least one dimension required")
    if not 0 < spec.density <= 1:
        raise WorkloadError("density must be in (0, 1]")
    if spec.min_run < 1:
        raise WorkloadError("min_run must be >= 1")
    schema = schema_from_cardinalities(spec.dims, spec.payload_len)
    space = schema.logical_space
    count = max(1, round(spec.density * space))
    rng = np.random.default_rng(spec.seed)
    if spec.profile == "singleton":
        if spec.density > 0.5:
            raise WorkloadError("singleton profile needs density <= 0.5")
        positions = _singleton_positions(rng, space, count)
    elif spec.profile == "longrun":
        positions = _longrun_positions(rng, space, count, spec.min_run)
    else:
        positions = _distinct_sorted(rng, space, count)
    payloads = rng.integers(
        0, 256, size=count * spec.payload_len, dtype=np.uint8
    ).tobytes()
    return Relation(schema, positions.tolist(), payloads)
