"""The four logical<->physical position header codecs.

Every codec is built from the strictly increasing sequence of nonempty
logical positions and answers two questions:

* ``physical(L)`` -- index of the cell with logical position L in the
  packed array of nonempty cells, or ``None`` when that cell is empty;
* ``logical(P)`` -- logical position of the P-th nonempty cell.

Schemes:

* SCHC (single count header compression): one (last position, cumulated
  empty count) pair per run of consecutive nonempty cells.
* LPC (logical position compression): the plain position sequence,
  searched by bisection.
* BOC (base-offset compression): every l-th position stored wide, the
  rest as narrow offsets from their bucket's base.
* DSC (difference sequence compression): narrow gap elements with zeros
  marking gaps too large for the gap width; a wide "jump" sequence
  resolves the zeros, and an in-memory accelerator maps every n-th jump
  back to its zero element.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .errors import OffsetOverflowError, WidthOverflowError
from .relation import validate_positions

WIDTHS = (8, 16, 32, 64)
DIFF_WIDTHS = (8, 16, 32)
DEFAULT_STRIDE = 16
ACCEL_WIDTH = 32

_DTYPES = {8: "<u1", 16: "<u2", 32: "<u4", 64: "<u8"}


def min_width(value: int) -> int:
    """Smallest of the supported widths that holds `value`."""
    for w in WIDTHS:
        if value < 2**w:
            return w
    raise WidthOverflowError(f"{value} does not fit in 64 bits")


def pack_ints(values: Sequence[int], width: int) -> bytes:
    return np.asarray(values, dtype=_DTYPES[width]).tobytes()


def unpack_ints(data: bytes, width: int, count: int) -> list[int]:
    expected = count * (width // 8)
    if len(data) != expected:
        raise ValueError(f"expected {expected} bytes, got {len(data)}")
    return np.frombuffer(data, dtype=_DTYPES[width]).tolist()


@dataclass
class ProbeStats:
    """Hardware-independent work counters for one or more lookups."""

    comparisons: int = 0
    reads: int = 0

    def add(self, other: "ProbeStats") -> None:
        self.comparisons += other.comparisons
        self.reads += other.reads


def search_left(values, target, stats: ProbeStats | None = None, lo=0, hi=None):
    """Leftmost index in values[lo:hi] whose element is >= target."""
    if hi is None:
        hi = len(values)
    while lo < hi:
        mid = (lo + hi) // 2
        if stats is not None:
            stats.comparisons += 1
        if values[mid] < target:
            lo = mid + 1
        else:
            hi = mid
    return lo


def _check_width(positions: Sequence[int], width: int) -> None:
    if width not in WIDTHS:
        raise ValueError(f"width must be one of {WIDTHS}, got {width}")
    if positions[-1] >= 2**width:
        raise WidthOverflowError(
            f"position {positions[-1]} does not fit in {width} bits"
        )


def _checked(positions: Sequence[int]) -> Sequence[int]:
    if len(positions) == 0:
        raise ValueError("cannot build a header from an empty sequence")
    validate_positions(positions)
    return positions


@dataclass
class SchcHeader:
    """(L_j, V_j) pairs: run-end logical position and cumulated empties."""

    last_positions: list[int]
    cum_empties: list[int]
    width: int
    _cum_cells: list[int] = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        # nonempty count through run j = L_j + 1 - V_j
        self._cum_cells = [
            p + 1 - v for p, v in zip(self.last_positions, self.cum_empties)
        ]

    @property
    def nu(self) -> int:
        return len(self.last_positions)

    @property
    def count(self) -> int:
        return self._cum_cells[-1]

    @property
    def size_bits(self) -> int:
        return 2 * self.nu * self.width

    def physical(self, logical: int, stats: ProbeStats | None = None) -> int | None:
        j = search_left(self.last_positions, logical, stats)
        if j == self.nu:
            return None
        prev_last = self.last_positions[j - 1] if j else -1
        prev_empties = self.cum_empties[j - 1] if j else 0
        # run j covers (prev_last + empties added by run j's gap, L_j]
        if prev_last + self.cum_empties[j] - prev_empties < logical:
            return logical - self.cum_empties[j]
        return None

    def logical(self, physical: int, stats: ProbeStats | None = None) -> int:
        if not 0 <= physical < self.count:
            raise IndexError(f"physical position {physical} out of range")
        j = search_left(self._cum_cells, physical + 1, stats)
        return physical + self.cum_empties[j]

    def to_bytes(self) -> bytes:
        pairs = np.empty(2 * self.nu, dtype=_DTYPES[self.width])
        pairs[0::2] = self.last_positions
        pairs[1::2] = self.cum_empties
        return pairs.tobytes()

    @classmethod
    def from_bytes(cls, data: bytes, width: int, nu: int) -> "SchcHeader":
        flat = unpack_ints(data, width, 2 * nu)
        return cls(flat[0::2], flat[1::2], width)


def build_schc(positions: Sequence[int], width: int) -> SchcHeader:
    positions = _checked(positions)
    _check_width(positions, width)
    lasts: list[int] = []
    empties: list[int] = []
    n = len(positions)
    for i in range(1, n + 1):
        if i == n or positions[i] != positions[i - 1] + 1:
            lasts.append(positions[i - 1])
            empties.append(positions[i - 1] + 1 - i)
    return SchcHeader(lasts, empties, width)


@dataclass
class LpcHeader:
    """The full position sequence; lookups are plain bisection."""

    positions: list[int]
    width: int

    @property
    def count(self) -> int:
        return len(self.positions)

    @property
    def size_bits(self) -> int:
        return self.count * self.width

    def physical(self, logical: int, stats: ProbeStats | None = None) -> int | None:
        j = search_left(self.positions, logical, stats)
        if j < self.count:
            if stats is not None:
                stats.comparisons += 1
            if self.positions[j] == logical:
                return j
        return None

    def logical(self, physical: int, stats: ProbeStats | None = None) -> int:
        if not 0 <= physical < self.count:
            raise IndexError(f"physical position {physical} out of range")
        return self.positions[physical]

    def to_bytes(self) -> bytes:
        return pack_ints(self.positions, self.width)

    @classmethod
    def from_bytes(cls, data: bytes, width: int, count: int) -> "LpcHeader":
        return cls(unpack_ints(data, width, count), width)


def build_lpc(positions: Sequence[int], width: int) -> LpcHeader:
    positions = _checked(positions)
    _check_width(positions, width)
    return LpcHeader(list(positions), width)


@dataclass
class BocHeader:
    """Wide bases every `bucket_len` positions plus narrow offsets."""

    base: list[int]
    offsets: list[int]
    bucket_len: int
    base_width: int
    offset_width: int

    @property
    def count(self) -> int:
        return len(self.offsets)

    @property
    def size_bits(self) -> int:
        return len(self.base) * self.base_width + self.count * self.offset_width

    def physical(self, logical: int, stats: ProbeStats | None = None) -> int | None:
        # rightmost base <= logical owns the candidate bucket
        k = search_left(self.base, logical + 1, stats) - 1
        if k < 0:
            return None
        lo = k * self.bucket_len
        hi = min(lo + self.bucket_len, self.count)
        target = logical - self.base[k]
        j = search_left(self.offsets, target, stats, lo, hi)
        if j < hi:
            if stats is not None:
                stats.comparisons += 1
            if self.offsets[j] == target:
                return j
        return None

    def logical(self, physical: int, stats: ProbeStats | None = None) -> int:
        if not 0 <= physical < self.count:
            raise IndexError(f"physical position {physical} out of range")
        return self.base[physical // self.bucket_len] + self.offsets[physical]

    def to_bytes(self) -> bytes:
        return pack_ints(self.base, self.base_width) + pack_ints(
            self.offsets, self.offset_width
        )

    @classmethod
    def from_bytes(
        cls, data: bytes, base_width: int, offset_width: int, bucket_len: int, count: int
    ) -> "BocHeader":
        nbases = (count - 1) // bucket_len + 1
        split = nbases * (base_width // 8)
        base = unpack_ints(data[:split], base_width, nbases)
        offsets = unpack_ints(data[split:], offset_width, count)
        return cls(base, offsets, bucket_len, base_width, offset_width)


def build_boc(
    positions: Sequence[int], bucket_len: int, offset_width: int, base_width: int
) -> BocHeader:
    positions = _checked(positions)
    _check_width(positions, base_width)
    if bucket_len < 1:
        raise ValueError("bucket length must be >= 1")
    if offset_width not in WIDTHS:
        raise ValueError(f"offset width must be one of {WIDTHS}")
    limit = 2**offset_width
    base: list[int] = []
    offsets: list[int] = []
    for j, pos in enumerate(positions):
        if j % bucket_len == 0:
            base.append(pos)
        off = pos - base[-1]
        if off >= limit:
            raise OffsetOverflowError(
                f"offset {off} needs more than {offset_width} bits "
                f"(bucket length {bucket_len})"
            )
        offsets.append(off)
    return BocHeader(base, offsets, bucket_len, base_width, offset_width)


@dataclass
class DscHeader:
    """Gap sequence with overflow zeros, resolved by the jump sequence.

    ``difference[i]`` is the gap to the previous position when it fits in
    ``diff_width`` bits, else 0; ``jumps`` holds the full-width positions
    for element 0 and every overflowing gap, in order. ``accelerator``
    maps every ``stride``-th jump to the index of its zero in
    ``difference``; it is rebuilt from the difference sequence on load
    and never serialized.
    """

    difference: list[int]
    jumps: list[int]
    diff_width: int
    jump_width: int
    stride: int
    accelerator: list[int] = field(default=None, compare=False)  # type: ignore[assignment]
    _anchor_jumps: list[int] = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        if self.accelerator is None:
            self.accelerator = build_accelerator(self.difference, self.stride)
        self._anchor_jumps = self.jumps[0 :: self.stride]

    @property
    def count(self) -> int:
        return len(self.difference)

    @property
    def jump_count(self) -> int:
        return len(self.jumps)

    @property
    def size_bits(self) -> int:
        # persisted size only; the accelerator lives in memory
        return self.jump_count * self.jump_width + self.count * self.diff_width

    def physical(self, logical: int, stats: ProbeStats | None = None) -> int | None:
        """Search the anchored jumps, then walk the difference sequence.

        A bisection over jumps 0, n, 2n, ... finds the anchor preceding
        `logical` (an exact anchor hit answers immediately via the
        accelerator). The walk then accumulates difference elements,
        switching to the next jump at every zero, until the running
        position reaches or passes `logical`.
        """
        anchors = self._anchor_jumps
        m = search_left(anchors, logical, stats)
        if m < len(anchors):
            if stats is not None:
                stats.comparisons += 1
            if anchors[m] == logical:
                return self.accelerator[m]
            if m == 0:
                return None  # logical precedes the first stored position
            start = m - 1
        else:
            start = len(anchors) - 1
        k = start * self.stride
        j = self.accelerator[start]
        decomp = self.jumps[k]
        difference = self.difference
        jumps = self.jumps
        last = len(difference) - 1
        while decomp < logical and j < last:
            if stats is not None:
                stats.comparisons += 1
            j += 1
            d = difference[j]
            if d == 0:
                k += 1
                decomp = jumps[k]
            else:
                decomp += d
        return j if decomp == logical else None

    def logical(self, physical: int, stats: ProbeStats | None = None) -> int:
        if not 0 <= physical < self.count:
            raise IndexError(f"physical position {physical} out of range")
        # greatest stored anchor at or before the target element
        a = search_left(self.accelerator, physical + 1, stats) - 1
        k = a * self.stride
        decomp = self.jumps[k]
        for j in range(self.accelerator[a] + 1, physical + 1):
            d = self.difference[j]
            if d == 0:
                k += 1
                decomp = self.jumps[k]
            else:
                decomp += d
        return decomp

    def reconstruct(self) -> list[int]:
        """Decode the full position sequence (the codec is lossless)."""
        out = []
        k = -1
        decomp = 0
        for d in self.difference:
            if d == 0:
                k += 1
                decomp = self.jumps[k]
            else:
                decomp += d
            out.append(decomp)
        return out

    def to_bytes(self) -> bytes:
        return pack_ints(self.jumps, self.jump_width) + pack_ints(
            self.difference, self.diff_width
        )

    @classmethod
    def from_bytes(
        cls,
        data: bytes,
        diff_width: int,
        jump_width: int,
        stride: int,
        count: int,
        jump_count: int,
    ) -> "DscHeader":
        split = jump_count * (jump_width // 8)
        jumps = unpack_ints(data[:split], jump_width, jump_count)
        difference = unpack_ints(data[split:], diff_width, count)
        return cls(difference, jumps, diff_width, jump_width, stride)


def build_accelerator(difference: Sequence[int], stride: int) -> list[int]:
    """Indexes of every `stride`-th zero in the difference sequence."""
    if stride < 1:
        raise ValueError("stride must be >= 1")
    if not difference or difference[0] != 0:
        raise ValueError("difference sequence must start with a zero")
    zeros = [i for i, d in enumerate(difference) if d == 0]
    return zeros[::stride]


def build_dsc(
    positions: Sequence[int],
    diff_width: int,
    jump_width: int | None = None,
    stride: int = DEFAULT_STRIDE,
) -> DscHeader:
    positions = _checked(positions)
    if diff_width not in DIFF_WIDTHS:
        raise ValueError(f"difference width must be one of {DIFF_WIDTHS}")
    if jump_width is None:
        jump_width = min_width(positions[-1])
    _check_width(positions, jump_width)
    if stride < 1:
        raise ValueError("stride must be >= 1")
    cap = 2**diff_width - 1
    difference = [0] * len(positions)
    jumps = [positions[0]]
    prev = positions[0]
    for i in range(1, len(positions)):
        pos = positions[i]
        gap = pos - prev
        if gap <= cap:
            difference[i] = gap
        else:
            jumps.append(pos)
        prev = pos
    return DscHeader(difference, jumps, diff_width, jump_width, stride)


Header = SchcHeader | LpcHeader | BocHeader | DscHeader
