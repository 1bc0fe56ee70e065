"""Command line surface: gen, build, analyze, bench, tune, query."""

from __future__ import annotations

import argparse
import csv
import sys

from . import bench as bench_mod
from .errors import StoreError
from .headers import (
    DEFAULT_STRIDE,
    BocHeader,
    DscHeader,
    LpcHeader,
    SchcHeader,
    build_boc,
    build_dsc,
    build_lpc,
    build_schc,
    min_width,
)
from .relation import (
    RelationSchema,
    read_relation_text,
    read_schema_text,
    write_relation_text,
    write_schema_text,
)
from .sizing import (
    DIFF_WIDTHS,
    SizeReport,
    empirical_cdf,
    lpc_vs_boc,
    max_bucket_offset,
    model_size_bits,
    select_dsc_width,
    sweep_boc,
    width_change_verdict,
)
from .store import read_store, write_store, write_table
from .workload import PROFILES, Relation, WorkloadSpec, generate


class _Parser(argparse.ArgumentParser):
    """argparse, but usage problems exit 1 (2 is reserved for data errors)."""

    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(1, f"{self.prog}: error: {message}\n")


def _write_csv(fields, rows, path: str | None):
    if path:
        with open(path, "w", newline="") as f:
            writer = csv.writer(f)
            writer.writerow(fields)
            writer.writerows(rows)
    else:
        writer = csv.writer(sys.stdout)
        writer.writerow(fields)
        writer.writerows(rows)


def _load_relation(schema_path: str, relation_path: str) -> Relation:
    schema = read_schema_text(schema_path)
    positions, payload_list = read_relation_text(schema, relation_path)
    plen = len(payload_list[0]) if payload_list else 0
    for i, p in enumerate(payload_list):
        if len(p) != plen:
            raise ValueError(
                f"{relation_path}: payload length {len(p)} at cell {i}, expected {plen}"
            )
    return Relation(
        RelationSchema(schema.dimensions, plen), positions, b"".join(payload_list)
    )


def _build_header(positions, method, iota=None, theta=None, l=None, s=None, n=None):
    if iota is None:
        iota = min_width(positions[-1])
    if method == "schc":
        return build_schc(positions, iota)
    if method == "lpc":
        return build_lpc(positions, iota)
    if method == "boc":
        if l is None and theta is None:
            (l, theta), _ = sweep_boc(positions, iota)
        if l is None:
            l = 16
        if theta is None:
            theta = min_width(max_bucket_offset(positions, l))
        return build_boc(positions, l, theta, iota)
    if method == "dsc":
        if s is None:
            s, _ = select_dsc_width(positions, iota)
        return build_dsc(positions, s, iota, n or DEFAULT_STRIDE)
    raise ValueError(f"unknown method {method!r}")


def _header_report(header) -> SizeReport:
    measured = len(header.to_bytes()) * 8
    if isinstance(header, SchcHeader):
        return SizeReport(
            "schc", header.count, nu=header.nu, iota=header.width,
            model_bits=model_size_bits(
                "schc", n=header.count, nu=header.nu, iota=header.width
            ),
            measured_bits=measured,
        )
    if isinstance(header, LpcHeader):
        return SizeReport(
            "lpc", header.count, iota=header.width,
            model_bits=model_size_bits("lpc", n=header.count, iota=header.width),
            measured_bits=measured,
        )
    if isinstance(header, BocHeader):
        return SizeReport(
            "boc", header.count, iota=header.base_width,
            theta=header.offset_width, l=header.bucket_len,
            model_bits=model_size_bits(
                "boc", n=header.count, iota=header.base_width,
                theta=header.offset_width, l=header.bucket_len,
            ),
            measured_bits=measured,
        )
    return SizeReport(
        "dsc", header.count, m=header.jump_count, iota=header.jump_width,
        s=header.diff_width,
        model_bits=model_size_bits(
            "dsc", n=header.count, m=header.jump_count,
            iota=header.jump_width, s=header.diff_width,
        ),
        measured_bits=measured,
    )


def _cmd_gen(args) -> int:
    dims = tuple(int(x) for x in args.dims.lower().split("x"))
    spec = WorkloadSpec(
        args.profile, dims, args.density, args.min_run, args.seed, args.payload_len
    )
    relation = generate(spec)
    write_schema_text(relation.schema, f"{args.out}.schema")
    write_relation_text(
        relation.schema,
        relation.positions,
        (relation.payload_at(i) for i in range(relation.count)),
        f"{args.out}.rel",
    )
    print(
        f"{relation.count} cells in a space of {relation.schema.logical_space} "
        f"-> {args.out}.schema, {args.out}.rel"
    )
    return 0


def _cmd_build(args) -> int:
    relation = _load_relation(args.schema, args.relation)
    if args.method == "table":
        nbytes = write_table(
            relation.schema, relation.positions, relation.payloads, args.out
        )
        report = SizeReport("table", relation.count, model_bits=nbytes * 8,
                            measured_bits=nbytes * 8)
    else:
        header = _build_header(
            relation.positions, args.method,
            iota=args.iota, theta=args.theta, l=args.l, s=args.s, n=args.n,
        )
        write_store(relation.schema, header, relation.payloads, args.out)
        report = _header_report(header)
    _write_csv(SizeReport.CSV_FIELDS, [report.csv_row()], args.csv)
    return 0


def _cmd_analyze(args) -> int:
    relation = _load_relation(args.schema, args.relation)
    positions = relation.positions
    schema = relation.schema
    iota = args.iota or min_width(positions[-1])
    headers = [
        build_schc(positions, iota),
        build_lpc(positions, iota),
        _build_header(positions, "boc", iota=iota),
        _build_header(positions, "dsc", iota=iota, n=args.n),
    ]
    reports = [_header_report(h) for h in headers]
    ndims = len(schema.dimensions)
    table_bits = relation.count * (4 * ndims + schema.payload_len) * 8
    space_bits = schema.logical_space * schema.payload_len * 8
    rows = [r.csv_row() for r in reports]
    rows.append(SizeReport("table", relation.count, model_bits=table_bits).csv_row())
    rows.append(
        SizeReport("uncompressed", schema.logical_space,
                   model_bits=space_bits).csv_row()
    )
    _write_csv(SizeReport.CSV_FIELDS, rows, args.csv)

    out = sys.stdout if args.csv else sys.stderr
    cell_bits = relation.count * schema.payload_len * 8
    for r in reports:
        total = r.measured_bits + cell_bits
        pct = f" = {100 * total / space_bits:.1f}% of uncompressed" if space_bits else ""
        print(f"{r.method}: header {r.measured_bits} bits, "
              f"representation {total // 8} bytes{pct}", file=out)
    dsc_report = reports[3]
    boc_report = reports[2]
    print(f"tuner: dsc width s*={dsc_report.s} with {dsc_report.m} jumps; "
          f"boc sweep chose l={boc_report.l}, theta={boc_report.theta}; "
          f"asymptotic lpc-vs-boc at those parameters: "
          f"{lpc_vs_boc(iota, boc_report.l, boc_report.theta)}", file=out)
    if relation.count >= 2:
        dist = empirical_cdf(positions)
        for z1, z2 in ((32, 16), (16, 8)):
            v = width_change_verdict(dist, z1, z2, iota, relation.count)
            print(f"tuner: {z1}->{z2} bits: {v.action} "
                  f"(benefit {v.benefit_bits}, cost {v.cost_bits}, "
                  f"slope {v.slope:.6f} vs 1/iota {v.slope_threshold:.6f})", file=out)
    return 0


def _cmd_bench(args) -> int:
    sizes = [int(x) for x in args.samples.split(",")]
    results = bench_mod.run_bench(args.table, args.store or [], sizes, args.seed)
    _write_csv(bench_mod.CSV_FIELDS, [r.csv_row() for r in results], args.csv)
    return 0


def _cmd_tune(args) -> int:
    relation = _load_relation(args.schema, args.relation)
    positions = relation.positions
    iota = args.iota or min_width(positions[-1])
    dist = empirical_cdf(positions)
    n = relation.count
    print(f"{n} cells, {len(dist)} gaps, max gap {dist.max_gap()}")
    for w in DIFF_WIDTHS:
        print(f"F(2^{w}) = {dist.cdf(2 ** w):.6f}")
    s_star, reports = select_dsc_width(positions, iota)
    for r in reports:
        print(f"s={r.s}: {r.m} jumps, {r.model_bits} bits")
    for z1, z2 in ((32, 16), (16, 8)):
        v = width_change_verdict(dist, z1, z2, iota, n)
        print(f"{z1}->{z2}: {v.action} (benefit {v.benefit_bits}, cost {v.cost_bits}, "
              f"slope {v.slope:.6f}, threshold {v.slope_threshold:.6f})")
    print(f"selected s* = {s_star} at iota = {iota}")
    return 0


def _cmd_query(args) -> int:
    with read_store(args.store) as store:
        coords = store.schema.ordinals_for(args.labels)
        payload = store.point_query(coords)
    print("EMPTY" if payload is None else payload.hex())
    return 0


def _build_parser() -> _Parser:
    parser = _Parser(prog="mdhc", description=__doc__)
    sub = parser.add_subparsers(dest="command")

    p = sub.add_parser("gen", help="generate a synthetic relation")
    p.add_argument("--profile", required=True, choices=PROFILES)
    p.add_argument("--dims", required=True, help="cardinalities, e.g. 100x100x50")
    p.add_argument("--density", required=True, type=float)
    p.add_argument("--min-run", type=int, default=17)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--payload-len", type=int, default=8)
    p.add_argument("--out", required=True, help="output path prefix")
    p.set_defaults(func=_cmd_gen)

    p = sub.add_parser("build", help="build a store (or table) file")
    p.add_argument("--schema", required=True)
    p.add_argument("--relation", required=True)
    p.add_argument("--method", required=True,
                   choices=["schc", "lpc", "boc", "dsc", "table"])
    p.add_argument("--iota", type=int)
    p.add_argument("--theta", type=int)
    p.add_argument("--l", type=int)
    p.add_argument("--s", type=int)
    p.add_argument("--n", type=int)
    p.add_argument("--out", required=True)
    p.add_argument("--csv")
    p.set_defaults(func=_cmd_build)

    p = sub.add_parser("analyze", help="size all four headers on one relation")
    p.add_argument("--schema", required=True)
    p.add_argument("--relation", required=True)
    p.add_argument("--iota", type=int)
    p.add_argument("--n", type=int)
    p.add_argument("--csv")
    p.set_defaults(func=_cmd_analyze)

    p = sub.add_parser("bench", help="time point queries against stores")
    p.add_argument("--table", required=True)
    p.add_argument("--store", action="append", default=[])
    p.add_argument("--samples", default=",".join(map(str, bench_mod.DEFAULT_SAMPLE_SIZES)))
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--csv")
    p.set_defaults(func=_cmd_bench)

    p = sub.add_parser("tune", help="difference-width tuning report")
    p.add_argument("--schema", required=True)
    p.add_argument("--relation", required=True)
    p.add_argument("--iota", type=int)
    p.set_defaults(func=_cmd_tune)

    p = sub.add_parser("query", help="look up one cell by its labels")
    p.add_argument("--store", required=True)
    p.add_argument("labels", nargs="+")
    p.set_defaults(func=_cmd_query)

    return parser


def main(argv=None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    if not hasattr(args, "func"):
        parser.print_usage(sys.stderr)
        return 1
    try:
        return args.func(args)
    except (StoreError, ValueError, IndexError, OSError) as exc:
        print(f"mdhc: error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
