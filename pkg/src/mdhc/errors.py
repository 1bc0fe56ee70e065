"""Exception types shared across the package."""


class StoreError(Exception):
    """Base class for all mdhc errors."""


class SchemaMismatchError(StoreError):
    """Coordinate tuple does not match the schema (wrong arity)."""


class CoordinateRangeError(StoreError):
    """Ordinal or logical position outside the schema's logical space."""


class WidthOverflowError(StoreError):
    """A value does not fit in the requested element width."""


class OffsetOverflowError(WidthOverflowError):
    """A base-offset in-bucket offset does not fit in the offset width."""


class FormatError(StoreError):
    """Bad magic, version or header tag in a store or table file."""


class CorruptionError(StoreError):
    """File shorter than its declared contents."""


class WorkloadError(StoreError):
    """Synthetic workload spec is infeasible or inconsistent."""


class DegenerateDistributionError(StoreError):
    """Gap distribution requested for a sequence with fewer than two elements."""
