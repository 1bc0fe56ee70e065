"""Relation schema, coordinate linearization and run detection.

A relation is stored logically as an n-dimensional array. Cells are
addressed either by per-dimension ordinals or by a single logical
position obtained from a fixed row-major linearization (first declared
dimension slowest). Only nonempty cells are materialized; the sorted
sequence of their logical positions is the input to every header codec.
"""

from __future__ import annotations

from bisect import bisect_left
from dataclasses import dataclass, field
from typing import Iterable, Sequence

from .errors import CoordinateRangeError, SchemaMismatchError

MAX_LOGICAL_SPACE = 2**64 - 1


@dataclass(frozen=True)
class DimensionDecl:
    """One dimension: a name and its ordered, distinct value labels."""

    name: str
    values: tuple[str, ...]

    def __post_init__(self):
        object.__setattr__(self, "values", tuple(self.values))
        if not self.values:
            raise ValueError(f"dimension {self.name!r} has no values")
        if len(set(self.values)) != len(self.values):
            raise ValueError(f"dimension {self.name!r} has duplicate labels")

    @property
    def cardinality(self) -> int:
        return len(self.values)

    def ordinal(self, label: str) -> int:
        try:
            return self.values.index(label)
        except ValueError:
            raise CoordinateRangeError(
                f"label {label!r} not in dimension {self.name!r}"
            ) from None


@dataclass(frozen=True)
class RelationSchema:
    """Dimension declarations plus the derived row-major strides."""

    dimensions: tuple[DimensionDecl, ...]
    payload_len: int = 0
    strides: tuple[int, ...] = field(init=False)

    def __post_init__(self):
        object.__setattr__(self, "dimensions", tuple(self.dimensions))
        if not self.dimensions:
            raise ValueError("schema needs at least one dimension")
        if self.payload_len < 0:
            raise ValueError("payload_len must be >= 0")
        space = 1
        for dim in self.dimensions:
            space *= dim.cardinality
            if space > MAX_LOGICAL_SPACE:
                raise ValueError(
                    "cardinality product exceeds the 64-bit logical space"
                )
        strides = [1] * len(self.dimensions)
        for k in range(len(self.dimensions) - 2, -1, -1):
            strides[k] = strides[k + 1] * self.dimensions[k + 1].cardinality
        object.__setattr__(self, "strides", tuple(strides))

    @property
    def cardinalities(self) -> tuple[int, ...]:
        return tuple(d.cardinality for d in self.dimensions)

    @property
    def logical_space(self) -> int:
        space = 1
        for d in self.dimensions:
            space *= d.cardinality
        return space

    def ordinals_for(self, labels: Sequence[str]) -> tuple[int, ...]:
        if len(labels) != len(self.dimensions):
            raise SchemaMismatchError(
                f"expected {len(self.dimensions)} labels, got {len(labels)}"
            )
        return tuple(d.ordinal(lab) for d, lab in zip(self.dimensions, labels))

    def labels_for(self, coords: Sequence[int]) -> tuple[str, ...]:
        if len(coords) != len(self.dimensions):
            raise SchemaMismatchError(
                f"expected {len(self.dimensions)} ordinals, got {len(coords)}"
            )
        return tuple(d.values[c] for d, c in zip(self.dimensions, coords))


def schema_from_cardinalities(cards: Sequence[int], payload_len: int = 0) -> RelationSchema:
    """Build a schema with synthetic labels (d<k> / v<i>) for each dimension."""
    dims = tuple(
        DimensionDecl(f"d{k}", tuple(f"v{i}" for i in range(c)))
        for k, c in enumerate(cards)
    )
    return RelationSchema(dims, payload_len)


def linearize(coords: Sequence[int], schema: RelationSchema) -> int:
    """Map per-dimension ordinals to the row-major logical position."""
    if len(coords) != len(schema.dimensions):
        raise SchemaMismatchError(
            f"expected {len(schema.dimensions)} ordinals, got {len(coords)}"
        )
    pos = 0
    for ordinal, stride, dim in zip(coords, schema.strides, schema.dimensions):
        if not 0 <= ordinal < dim.cardinality:
            raise CoordinateRangeError(
                f"ordinal {ordinal} out of range for dimension {dim.name!r}"
            )
        pos += ordinal * stride
    return pos


def delinearize(position: int, schema: RelationSchema) -> tuple[int, ...]:
    """Inverse of linearize."""
    if not 0 <= position < schema.logical_space:
        raise CoordinateRangeError(f"logical position {position} out of range")
    coords = []
    rest = position
    for stride in schema.strides:
        ordinal, rest = divmod(rest, stride)
        coords.append(ordinal)
    return tuple(coords)


@dataclass(frozen=True)
class Run:
    """A maximal stretch of consecutive nonempty logical positions.

    ``cum_empties`` is the total number of empty cells at logical
    positions <= ``last``, i.e. last + 1 - (nonempty count through this
    run).
    """

    first: int
    last: int
    cum_empties: int

    def __len__(self) -> int:
        return self.last - self.first + 1


def validate_positions(positions: Sequence[int], space: int | None = None) -> None:
    """Check that positions are strictly increasing (and inside the space)."""
    prev = -1
    for p in positions:
        if p <= prev:
            raise ValueError("positions must be strictly increasing")
        prev = p
    if positions and positions[0] < 0:
        raise ValueError("positions must be non-negative")
    if space is not None and positions and positions[-1] >= space:
        raise CoordinateRangeError(
            f"position {positions[-1]} outside logical space of {space}"
        )


def detect_runs(positions: Sequence[int]) -> list[Run]:
    """Split a strictly increasing position sequence into maximal runs."""
    runs: list[Run] = []
    n = len(positions)
    if n == 0:
        return runs
    start = 0
    for i in range(1, n + 1):
        if i == n or positions[i] != positions[i - 1] + 1:
            last = positions[i - 1]
            runs.append(Run(positions[start], last, last + 1 - i))
            start = i
    return runs


def oracle_lookup(positions: Sequence[int], logical: int) -> int | None:
    """Ground-truth physical position of `logical`, or None when empty."""
    i = bisect_left(positions, logical)
    if i < len(positions) and positions[i] == logical:
        return i
    return None


# --- text interchange formats -------------------------------------------
#
# Schema file: one line per dimension, "name:label,label,...".
# Relation file: one nonempty cell per line, tab-separated label per
# dimension followed by the payload bytes hex-encoded. Both UTF-8.


def write_schema_text(schema: RelationSchema, path: str) -> None:
    with open(path, "w", encoding="utf-8") as f:
        for dim in schema.dimensions:
            f.write(f"{dim.name}:{','.join(dim.values)}\n")


def read_schema_text(path: str, payload_len: int = 0) -> RelationSchema:
    dims = []
    with open(path, encoding="utf-8") as f:
        for line in f:
            line = line.rstrip("\n")
            if not line:
                continue
            name, _, rest = line.partition(":")
            dims.append(DimensionDecl(name, tuple(rest.split(","))))
    return RelationSchema(tuple(dims), payload_len)


def write_relation_text(
    schema: RelationSchema,
    positions: Sequence[int],
    payloads: Iterable[bytes],
    path: str,
) -> None:
    with open(path, "w", encoding="utf-8") as f:
        for pos, payload in zip(positions, payloads):
            labels = schema.labels_for(delinearize(pos, schema))
            f.write("\t".join(labels) + "\t" + payload.hex() + "\n")


def read_relation_text(
    schema: RelationSchema, path: str
) -> tuple[list[int], list[bytes]]:
    """Parse cells, returning positions and payloads sorted by position."""
    cells: list[tuple[int, bytes]] = []
    with open(path, encoding="utf-8") as f:
        for lineno, line in enumerate(f, 1):
            line = line.rstrip("\n")
            if not line:
                continue
            fields = line.split("\t")
            if len(fields) != len(schema.dimensions) + 1:
                raise SchemaMismatchError(
                    f"{path}:{lineno}: expected "
                    f"{len(schema.dimensions) + 1} fields, got {len(fields)}"
                )
            coords = schema.ordinals_for(fields[:-1])
            cells.append((linearize(coords, schema), bytes.fromhex(fields[-1])))
    cells.sort(key=lambda c: c[0])
    positions = [c[0] for c in cells]
    for i in range(1, len(positions)):
        if positions[i] == positions[i - 1]:
            raise ValueError(f"duplicate cell at logical position {positions[i]}")
    return positions, [c[1] for c in cells]
