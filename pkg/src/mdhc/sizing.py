"""Exact header size models, the gap distribution, and width tuning.

All sizes are in bits. The tuning rule compares the benefit of
narrowing the difference width (fewer bits per element) against the
cost (gaps that stop fitting each add one full-width jump).
"""

from __future__ import annotations

from bisect import bisect_left
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import DegenerateDistributionError
from .headers import DIFF_WIDTHS, build_boc, build_dsc, min_width
from .relation import validate_positions

DEFAULT_BUCKET_SWEEP = (2, 4, 8, 16, 32, 64, 128, 256)

SHRINK = "shrink"
KEEP = "keep"


@dataclass(frozen=True)
class SizeReport:
    """One header configuration and its modeled / measured size."""

    method: str
    n: int
    nu: int | None = None
    m: int | None = None
    iota: int | None = None
    theta: int | None = None
    l: int | None = None
    s: int | None = None
    model_bits: int = 0
    measured_bits: int | None = None

    CSV_FIELDS = ("method", "N", "nu", "M", "iota", "theta", "l", "s",
                  "model_bits", "measured_bits")

    def csv_row(self) -> list:
        def blank(v):
            return "" if v is None else v

        return [self.method, self.n, blank(self.nu), blank(self.m),
                blank(self.iota), blank(self.theta), blank(self.l),
                blank(self.s), self.model_bits, blank(self.measured_bits)]


def model_size_bits(
    method: str,
    *,
    n: int,
    nu: int | None = None,
    m: int | None = None,
    iota: int | None = None,
    theta: int | None = None,
    l: int | None = None,
    s: int | None = None,
) -> int:
    """Closed-form header size in bits for one of schc/lpc/boc/dsc."""
    if method == "schc":
        if nu is None or nu > n:
            raise ValueError("schc needs a run count nu <= n")
        return 2 * nu * iota
    if method == "lpc":
        return n * iota
    if method == "boc":
        return ((n - 1) // l + 1) * iota + n * theta
    if method == "dsc":
        if m is None or m < 1:
            raise ValueError("dsc needs a jump count m >= 1")
        return m * iota + n * s
    raise ValueError(f"unknown method {method!r}")


class DifferenceDistribution:
    """Empirical distribution of the gaps between consecutive positions."""

    def __init__(self, gaps: Sequence[int]):
        if len(gaps) == 0:
            raise DegenerateDistributionError("no gaps: need at least 2 positions")
        self.gaps = sorted(gaps)

    def __len__(self) -> int:
        return len(self.gaps)

    def cdf(self, x: int) -> float:
        """Fraction of gaps strictly below x."""
        return bisect_left(self.gaps, x) / len(self.gaps)

    def overflow_count(self, width_bits: int) -> int:
        """Number of gaps that do not fit in `width_bits` bits."""
        return len(self.gaps) - bisect_left(self.gaps, 2**width_bits)

    def max_gap(self) -> int:
        return self.gaps[-1]


def empirical_cdf(positions: Sequence[int]) -> DifferenceDistribution:
    if len(positions) < 2:
        raise DegenerateDistributionError(
            "gap distribution needs at least 2 positions"
        )
    validate_positions(positions)
    return DifferenceDistribution(
        [positions[i] - positions[i - 1] for i in range(1, len(positions))]
    )


def exact_jump_count(dist: DifferenceDistribution, s: int) -> int:
    """Jumps a difference sequence of width s produces: 1 + overflows."""
    return 1 + dist.overflow_count(s)


def predict_jumps(dist: DifferenceDistribution, s: int, n: int) -> float:
    """Expected jump count for n elements, mandatory first jump included.

    Equals the exact count whenever `dist` holds the n-1 gaps of the
    sequence itself.
    """
    return 1 + dist.overflow_count(s) * (n - 1) / len(dist)


def modeled_jumps(dist: DifferenceDistribution, s: int, n: int) -> float:
    """First-order jump model (1 - F(2^s)) * n.

    Approximates by scaling the overflow fraction to all n elements and
    ignoring the mandatory first jump; kept for analysis output, the
    exact count is used everywhere sizes matter.
    """
    return (1 - dist.cdf(2**s)) * n


@dataclass(frozen=True)
class WidthVerdict:
    action: str  # SHRINK or KEEP
    benefit_bits: int
    cost_bits: int
    jumps_wide: int
    jumps_narrow: int
    slope: float
    slope_threshold: float


def width_change_verdict(
    dist: DifferenceDistribution, zeta1: int, zeta2: int, iota: int, n: int
) -> WidthVerdict:
    """Decide whether narrowing the difference width from zeta1 to zeta2 pays.

    Benefit: n * (zeta1 - zeta2) bits saved in the difference sequence.
    Cost: each newly overflowing gap adds one iota-bit jump. SHRINK iff
    benefit > cost, using exact jump counts. The slope of F(2^x) between
    the widths against 1/iota is reported alongside; a slope strictly
    below 1/iota is a sufficient condition to shrink.
    """
    if not zeta1 > zeta2 > 0:
        raise ValueError("need zeta1 > zeta2 > 0")
    m1 = exact_jump_count(dist, zeta1)
    m2 = exact_jump_count(dist, zeta2)
    benefit = n * (zeta1 - zeta2)
    cost = (m2 - m1) * iota
    slope = (dist.cdf(2**zeta1) - dist.cdf(2**zeta2)) / (zeta1 - zeta2)
    return WidthVerdict(
        action=SHRINK if benefit > cost else KEEP,
        benefit_bits=benefit,
        cost_bits=cost,
        jumps_wide=m1,
        jumps_narrow=m2,
        slope=slope,
        slope_threshold=1 / iota,
    )


def select_dsc_width(
    positions: Sequence[int], iota: int, candidates: Sequence[int] = DIFF_WIDTHS
) -> tuple[int, list[SizeReport]]:
    """Pick the difference width minimizing total size; ties favor smaller.

    Jump counts are exact per candidate, not modeled.
    """
    n = len(positions)
    if n >= 2:
        dist = empirical_cdf(positions)
        counts = {s: exact_jump_count(dist, s) for s in candidates}
    else:
        counts = {s: 1 for s in candidates}
    reports = [
        SizeReport(
            method="dsc", n=n, m=counts[s], iota=iota, s=s,
            model_bits=model_size_bits("dsc", n=n, m=counts[s], iota=iota, s=s),
        )
        for s in sorted(candidates)
    ]
    best = min(reports, key=lambda r: (r.model_bits, r.s))
    return best.s, reports


def lpc_vs_boc(iota: int, l: int, theta: int) -> str:
    """Asymptotically smaller header: "boc" iff iota/l + theta < iota."""
    return "boc" if iota + l * theta < l * iota else "lpc"


def max_bucket_offset(positions: Sequence[int], l: int) -> int:
    """Largest in-bucket offset a bucket length of l would produce."""
    arr = np.asarray(positions, dtype=np.uint64)
    bases = arr[::l]
    return int((arr - bases[np.arange(len(arr)) // l]).max())


def sweep_boc(
    positions: Sequence[int], iota: int, l_values: Sequence[int] = DEFAULT_BUCKET_SWEEP
) -> tuple[tuple[int, int], list[SizeReport]]:
    """Try bucket lengths with their minimal feasible offset widths.

    Returns ((l, theta), reports) with the smallest modeled size; ties
    favor the smaller bucket length.
    """
    n = len(positions)
    reports = []
    for l in l_values:
        theta = min_width(max_bucket_offset(positions, l))
        reports.append(SizeReport(
            method="boc", n=n, iota=iota, theta=theta, l=l,
            model_bits=model_size_bits("boc", n=n, iota=iota, theta=theta, l=l),
        ))
    best = min(reports, key=lambda r: (r.model_bits, r.l))
    return (best.l, best.theta), reports


def accel_overhead_ratio(m: int, n: int, alpha: int, iota: int) -> float:
    """Size of the stored accelerator relative to the jump sequence.

    Tends to alpha / (n * iota) as the jump count m grows.
    """
    if m < 1:
        raise ValueError("need at least one jump")
    return ((m - 1) // n + 1) * alpha / (m * iota)


@dataclass(frozen=True)
class Theorem1Result:
    jumps: int
    base_count: int
    holds: bool


def check_theorem1(
    positions: Sequence[int], l: int, theta: int, zeta: int
) -> Theorem1Result:
    """Verify jumps <= base elements when theta <= zeta.

    Builds both headers outright; raises OffsetOverflowError when the
    (l, theta) pair cannot represent the sequence.
    """
    if theta > zeta:
        raise ValueError("requires theta <= zeta")
    boc = build_boc(positions, l, theta, base_width=64)
    dsc = build_dsc(positions, zeta)
    return Theorem1Result(
        jumps=dsc.jump_count,
        base_count=len(boc.base),
        holds=dsc.jump_count <= len(boc.base),
    )
