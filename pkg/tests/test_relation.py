import itertools

import pytest
from hypothesis import given
from hypothesis import strategies as st

from mdhc import (
    CoordinateRangeError,
    DimensionDecl,
    RelationSchema,
    SchemaMismatchError,
    delinearize,
    detect_runs,
    linearize,
    oracle_lookup,
    schema_from_cardinalities,
)
from mdhc.relation import (
    read_relation_text,
    read_schema_text,
    write_relation_text,
    write_schema_text,
)

from conftest import reference_runs

SCHEMA_345 = schema_from_cardinalities([3, 4, 5])


def test_strides_row_major():
    assert SCHEMA_345.strides == (20, 5, 1)
    assert schema_from_cardinalities([7]).strides == (1,)


def test_linearize_examples():
    assert linearize((0, 0, 0), SCHEMA_345) == 0
    assert linearize((2, 3, 4), SCHEMA_345) == 59
    assert linearize((1, 2, 3), SCHEMA_345) == 33


def test_linearize_matches_row_major_enumeration():
    # the enumeration order of itertools.product is the definition of
    # row-major, first dimension slowest
    cells = list(itertools.product(range(3), range(4), range(5)))
    for index, coords in enumerate(cells):
        assert linearize(coords, SCHEMA_345) == index
        assert delinearize(index, SCHEMA_345) == coords


def test_linearize_errors():
    with pytest.raises(SchemaMismatchError):
        linearize((0, 0), SCHEMA_345)
    with pytest.raises(CoordinateRangeError):
        linearize((0, 4, 0), SCHEMA_345)
    with pytest.raises(CoordinateRangeError):
        linearize((0, 0, -1), SCHEMA_345)
    with pytest.raises(CoordinateRangeError):
        delinearize(60, SCHEMA_345)


def test_delinearize_examples():
    assert delinearize(0, SCHEMA_345) == (0, 0, 0)
    assert delinearize(33, SCHEMA_345) == (1, 2, 3)
    assert delinearize(59, SCHEMA_345) == (2, 3, 4)


@given(st.lists(st.integers(1, 6), min_size=1, max_size=4))
def test_round_trip_exhaustive(cards):
    schema = schema_from_cardinalities(cards)
    previous = -1
    for coords in itertools.product(*(range(c) for c in cards)):
        pos = linearize(coords, schema)
        assert delinearize(pos, schema) == coords
        assert pos > previous  # strictly increasing in lexicographic order
        previous = pos


def test_schema_validation():
    with pytest.raises(ValueError):
        DimensionDecl("d", ())
    with pytest.raises(ValueError):
        DimensionDecl("d", ("a", "a"))
    with pytest.raises(ValueError):
        RelationSchema(())
    with pytest.raises(ValueError):
        schema_from_cardinalities([2**33, 2**33])  # product over 64 bits


def test_detect_runs_examples():
    runs = detect_runs([2, 3, 4, 10, 11])
    assert [(r.first, r.last, r.cum_empties) for r in runs] == [
        (2, 4, 2),
        (10, 11, 7),
    ]
    runs = detect_runs([0, 5, 9, 300, 305, 1000])
    assert all(len(r) == 1 for r in runs)
    assert [r.cum_empties for r in runs] == [0, 4, 7, 297, 301, 995]
    assert detect_runs([0, 1, 2]) == detect_runs([0, 1, 2])
    only = detect_runs([0, 1, 2])[0]
    assert (only.first, only.last, only.cum_empties) == (0, 2, 0)
    assert detect_runs([]) == []


@given(st.sets(st.integers(0, 400), min_size=1, max_size=60).map(sorted))
def test_detect_runs_against_enumeration(positions):
    got = [(r.first, r.last, r.cum_empties) for r in detect_runs(positions)]
    assert got == reference_runs(positions)


@given(st.sets(st.integers(0, 10**6), min_size=1, max_size=80).map(sorted))
def test_run_invariants(positions):
    runs = detect_runs(positions)
    # concatenating the runs reproduces the sequence
    rebuilt = [p for r in runs for p in range(r.first, r.last + 1)]
    assert rebuilt == positions
    assert sum(len(r) for r in runs) == len(positions)
    assert 1 <= len(runs) <= len(positions)
    for prev, cur in zip(runs, runs[1:]):
        gap = cur.first - prev.last - 1
        assert gap >= 1
        assert cur.cum_empties - prev.cum_empties == gap


def test_oracle_lookup():
    seq = [0, 5, 9, 300, 305, 1000]
    assert oracle_lookup(seq, 305) == 4
    assert oracle_lookup(seq, 7) is None
    assert oracle_lookup([0], 0) == 0
    assert oracle_lookup(seq, 1001) is None


def test_text_round_trip(tmp_path):
    schema = schema_from_cardinalities([3, 4], payload_len=2)
    positions = [0, 3, 7, 11]
    payloads = [b"\x00\x01", b"\xff\xfe", b"ab", b"\x10\x20"]
    spath = tmp_path / "r.schema"
    rpath = tmp_path / "r.rel"
    write_schema_text(schema, str(spath))
    write_relation_text(schema, positions, payloads, str(rpath))
    schema2 = read_schema_text(str(spath), payload_len=2)
    assert schema2 == schema
    positions2, payloads2 = read_relation_text(schema2, str(rpath))
    assert positions2 == positions
    assert payloads2 == payloads


def test_text_rejects_duplicates_and_bad_arity(tmp_path):
    schema = schema_from_cardinalities([2, 2])
    path = tmp_path / "bad.rel"
    path.write_text("v0\tv0\t\nv0\tv0\t\n")
    with pytest.raises(ValueError):
        read_relation_text(schema, str(path))
    path.write_text("v0\t\n")
    with pytest.raises(SchemaMismatchError):
        read_relation_text(schema, str(path))
