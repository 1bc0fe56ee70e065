"""Binary store files for the two physical representations.

Store file ("MDHC"): schema, one compressed header, then the nonempty
cell payloads packed in physical order, so a payload is fetched with a
single positioned read at ``physical * payload_len``. Layout, all
integers little-endian:

    magic "MDHC" | version u16 | dim count u16
    per dim: name len u16, name, value count u32,
             per value: len u16, bytes
    payload_len u32 | header tag u8 (1=SCHC 2=LPC 3=BOC 4=DSC)
    params: iota u8, theta u8, l u32, s u8, n u16 (unused fields zero)
    counts: N u64, nu u64, M u64
    header payload | cell payloads

Table file ("MDTB"): the baseline representation; records sorted by the
full coordinate tuple, looked up by binary search with one positioned
read per key comparison.

    magic "MDTB" | version u16 | schema block as above
    record count u64 | records (one u32 ordinal per dimension + payload)
"""

from __future__ import annotations

import io
import struct
from typing import BinaryIO, Sequence

from .errors import CorruptionError, FormatError
from .headers import (
    BocHeader,
    DscHeader,
    Header,
    LpcHeader,
    ProbeStats,
    SchcHeader,
)
from .relation import DimensionDecl, RelationSchema, delinearize, linearize

STORE_MAGIC = b"MDHC"
TABLE_MAGIC = b"MDTB"
VERSION = 1

TAGS = {"schc": 1, "lpc": 2, "boc": 3, "dsc": 4}
METHODS = {v: k for k, v in TAGS.items()}

_PARAMS = struct.Struct("<BBIBH")  # iota, theta, l, s, n
_COUNTS = struct.Struct("<QQQ")  # N, nu, M


def _header_fields(header: Header) -> tuple[int, tuple, tuple]:
    """(tag, params, counts) triples for the envelope."""
    if isinstance(header, SchcHeader):
        return TAGS["schc"], (header.width, 0, 0, 0, 0), (header.count, header.nu, 0)
    if isinstance(header, LpcHeader):
        return TAGS["lpc"], (header.width, 0, 0, 0, 0), (header.count, 0, 0)
    if isinstance(header, BocHeader):
        return (
            TAGS["boc"],
            (header.base_width, header.offset_width, header.bucket_len, 0, 0),
            (header.count, 0, 0),
        )
    if isinstance(header, DscHeader):
        return (
            TAGS["dsc"],
            (header.jump_width, 0, 0, header.diff_width, header.stride),
            (header.count, 0, header.jump_count),
        )
    raise TypeError(f"not a header: {header!r}")


def _encode_schema(schema: RelationSchema) -> bytes:
    out = io.BytesIO()
    out.write(struct.pack("<H", len(schema.dimensions)))
    for dim in schema.dimensions:
        name = dim.name.encode("utf-8")
        out.write(struct.pack("<H", len(name)))
        out.write(name)
        out.write(struct.pack("<I", dim.cardinality))
        for value in dim.values:
            raw = value.encode("utf-8")
            out.write(struct.pack("<H", len(raw)))
            out.write(raw)
    out.write(struct.pack("<I", schema.payload_len))
    return out.getvalue()


class _Cursor:
    """Sequential reader that fails loudly on short reads."""

    def __init__(self, f: BinaryIO):
        self.f = f

    def read(self, n: int) -> bytes:
        data = self.f.read(n)
        if len(data) != n:
            raise CorruptionError(f"file truncated: wanted {n} bytes, got {len(data)}")
        return data

    def unpack(self, fmt: struct.Struct) -> tuple:
        return fmt.unpack(self.read(fmt.size))


def _decode_schema(cur: _Cursor) -> RelationSchema:
    (ndims,) = struct.unpack("<H", cur.read(2))
    dims = []
    for _ in range(ndims):
        (name_len,) = struct.unpack("<H", cur.read(2))
        name = cur.read(name_len).decode("utf-8")
        (nvalues,) = struct.unpack("<I", cur.read(4))
        values = []
        for _ in range(nvalues):
            (vlen,) = struct.unpack("<H", cur.read(2))
            values.append(cur.read(vlen).decode("utf-8"))
        dims.append(DimensionDecl(name, tuple(values)))
    (payload_len,) = struct.unpack("<I", cur.read(4))
    return RelationSchema(tuple(dims), payload_len)


def write_store(
    schema: RelationSchema, header: Header, payloads: bytes, path: str
) -> int:
    """Serialize one store; returns the byte count written."""
    n = header.count
    if len(payloads) != n * schema.payload_len:
        raise ValueError(
            f"payload block is {len(payloads)} bytes, expected "
            f"{n} * {schema.payload_len}"
        )
    tag, params, counts = _header_fields(header)
    blob = header.to_bytes()
    with open(path, "wb") as f:
        f.write(STORE_MAGIC)
        f.write(struct.pack("<H", VERSION))
        f.write(_encode_schema(schema))
        f.write(struct.pack("<B", tag))
        f.write(_PARAMS.pack(*params))
        f.write(_COUNTS.pack(*counts))
        f.write(blob)
        f.write(payloads)
        return f.tell()


class StoreReader:
    """Open store: header fully in memory, payloads read on demand."""

    def __init__(self, path: str):
        self.f = open(path, "rb")
        try:
            cur = _Cursor(self.f)
            if cur.read(4) != STORE_MAGIC:
                raise FormatError(f"{path}: not a store file")
            (version,) = struct.unpack("<H", cur.read(2))
            if version != VERSION:
                raise FormatError(f"{path}: unsupported version {version}")
            self.schema = _decode_schema(cur)
            (tag,) = struct.unpack("<B", cur.read(1))
            if tag not in METHODS:
                raise FormatError(f"{path}: unknown header tag {tag}")
            self.method = METHODS[tag]
            iota, theta, l, s, stride = cur.unpack(_PARAMS)
            self.count, nu, m = cur.unpack(_COUNTS)
            if self.method == "schc":
                blob = cur.read(2 * nu * iota // 8)
                self.header: Header = SchcHeader.from_bytes(blob, iota, nu)
            elif self.method == "lpc":
                blob = cur.read(self.count * iota // 8)
                self.header = LpcHeader.from_bytes(blob, iota, self.count)
            elif self.method == "boc":
                nbases = (self.count - 1) // l + 1
                blob = cur.read(nbases * iota // 8 + self.count * theta // 8)
                self.header = BocHeader.from_bytes(blob, iota, theta, l, self.count)
            else:
                blob = cur.read(m * iota // 8 + self.count * s // 8)
                self.header = DscHeader.from_bytes(
                    blob, s, iota, stride, self.count, m
                )
            self.header_payload_bytes = len(blob)
            self.payload_offset = self.f.tell()
            self.f.seek(0, 2)
            end = self.f.tell()
            if end - self.payload_offset < self.count * self.schema.payload_len:
                raise CorruptionError(f"{path}: cell payload block truncated")
        except Exception:
            self.f.close()
            raise

    def get_payload(self, physical: int, stats: ProbeStats | None = None) -> bytes:
        if not 0 <= physical < self.count:
            raise IndexError(f"physical position {physical} out of range")
        self.f.seek(self.payload_offset + physical * self.schema.payload_len)
        if stats is not None:
            stats.reads += 1
        return self.f.read(self.schema.payload_len)

    def point_query(
        self, coords: Sequence[int], stats: ProbeStats | None = None
    ) -> bytes | None:
        logical = linearize(coords, self.schema)
        physical = self.header.physical(logical, stats)
        if physical is None:
            return None
        return self.get_payload(physical, stats)

    def close(self):
        self.f.close()

    def __enter__(self):
        return self

    def __exit__(self, *exc):
        self.close()


def read_store(path: str) -> StoreReader:
    return StoreReader(path)


def point_query(
    store: StoreReader, coords: Sequence[int], stats: ProbeStats | None = None
) -> bytes | None:
    return store.point_query(coords, stats)


def write_table(
    schema: RelationSchema,
    positions: Sequence[int],
    payloads: bytes,
    path: str,
) -> int:
    """Serialize the sorted-record baseline; one u32 ordinal per dimension."""
    if len(payloads) != len(positions) * schema.payload_len:
        raise ValueError("payload block does not match the position count")
    for dim in schema.dimensions:
        if dim.cardinality > 2**32:
            raise FormatError(
                f"dimension {dim.name!r} too large for u32 table ordinals"
            )
    plen = schema.payload_len
    with open(path, "wb") as f:
        f.write(TABLE_MAGIC)
        f.write(struct.pack("<H", VERSION))
        f.write(_encode_schema(schema))
        f.write(struct.pack("<Q", len(positions)))
        fmt = struct.Struct(f"<{len(schema.dimensions)}I")
        for i, pos in enumerate(positions):
            f.write(fmt.pack(*delinearize(pos, schema)))
            f.write(payloads[i * plen : (i + 1) * plen])
        return f.tell()


class TableReader:
    """Sorted-record baseline; binary search reads each probed key from disk."""

    def __init__(self, path: str):
        self.f = open(path, "rb")
        try:
            cur = _Cursor(self.f)
            if cur.read(4) != TABLE_MAGIC:
                raise FormatError(f"{path}: not a table file")
            (version,) = struct.unpack("<H", cur.read(2))
            if version != VERSION:
                raise FormatError(f"{path}: unsupported version {version}")
            self.schema = _decode_schema(cur)
            (self.count,) = struct.unpack("<Q", cur.read(8))
            self.records_offset = self.f.tell()
            self._key_fmt = struct.Struct(f"<{len(self.schema.dimensions)}I")
            self.record_size = self._key_fmt.size + self.schema.payload_len
            self.f.seek(0, 2)
            if self.f.tell() - self.records_offset < self.count * self.record_size:
                raise CorruptionError(f"{path}: record block truncated")
        except Exception:
            self.f.close()
            raise

    def ordinals_at(self, i: int, stats: ProbeStats | None = None) -> tuple[int, ...]:
        if not 0 <= i < self.count:
            raise IndexError(f"record {i} out of range")
        self.f.seek(self.records_offset + i * self.record_size)
        if stats is not None:
            stats.reads += 1
        return self._key_fmt.unpack(self.f.read(self._key_fmt.size))

    def payload_at(self, i: int, stats: ProbeStats | None = None) -> bytes:
        if not 0 <= i < self.count:
            raise IndexError(f"record {i} out of range")
        self.f.seek(self.records_offset + i * self.record_size + self._key_fmt.size)
        if stats is not None:
            stats.reads += 1
        return self.f.read(self.schema.payload_len)

    def point_query(
        self, coords: Sequence[int], stats: ProbeStats | None = None
    ) -> bytes | None:
        target = tuple(coords)
        linearize(target, self.schema)  # validates arity and ranges
        lo, hi = 0, self.count
        while lo < hi:
            mid = (lo + hi) // 2
            key = self.ordinals_at(mid, stats)
            if stats is not None:
                stats.comparisons += 1
            if key < target:
                lo = mid + 1
            else:
                hi = mid
        if lo < self.count:
            if stats is not None:
                stats.comparisons += 1
            if self.ordinals_at(lo, stats) == target:
                return self.payload_at(lo, stats)
        return None

    def close(self):
        self.f.close()

    def __enter__(self):
        return self

    def __exit__(self, *exc):
        self.close()


def read_table(path: str) -> TableReader:
    return TableReader(path)


def table_point_query(
    table: TableReader, coords: Sequence[int], stats: ProbeStats | None = None
) -> bytes | None:
    return table.point_query(coords, stats)
