"""Sparse multidimensional array storage with compressed position headers."""

from .errors import (
    CoordinateRangeError,
    CorruptionError,
    DegenerateDistributionError,
    FormatError,
    OffsetOverflowError,
    SchemaMismatchError,
    StoreError,
    WidthOverflowError,
    WorkloadError,
)
from .headers import (
    BocHeader,
    DscHeader,
    LpcHeader,
    ProbeStats,
    SchcHeader,
    build_accelerator,
    build_boc,
    build_dsc,
    build_lpc,
    build_schc,
    min_width,
)
from .relation import (
    DimensionDecl,
    RelationSchema,
    Run,
    delinearize,
    detect_runs,
    linearize,
    oracle_lookup,
    schema_from_cardinalities,
)
from .sizing import (
    KEEP,
    SHRINK,
    DifferenceDistribution,
    SizeReport,
    WidthVerdict,
    accel_overhead_ratio,
    check_theorem1,
    empirical_cdf,
    lpc_vs_boc,
    model_size_bits,
    predict_jumps,
    select_dsc_width,
    sweep_boc,
    width_change_verdict,
)
from .store import (
    StoreReader,
    TableReader,
    point_query,
    read_store,
    read_table,
    table_point_query,
    write_store,
    write_table,
)
from .workload import Relation, WorkloadSpec, generate

__version__ = "0.1.0"
