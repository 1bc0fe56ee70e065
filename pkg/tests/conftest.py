"""Shared strategies and brute-force reference implementations."""

from hypothesis import strategies as st


@st.composite
def position_lists(draw, max_value=5000, min_size=1, max_size=100):
    """Strictly increasing non-negative positions."""
    vals = draw(
        st.sets(st.integers(0, max_value), min_size=min_size, max_size=max_size)
    )
    return sorted(vals)


@st.composite
def gappy_position_lists(draw, min_size=1, max_size=60):
    """Positions whose gaps mix tiny and huge values (jump-heavy data)."""
    gaps = draw(
        st.lists(
            st.one_of(
                st.integers(1, 20),
                st.integers(200, 70000),
                st.integers(2**17, 2**34),
            ),
            min_size=min_size,
            max_size=max_size,
        )
    )
    start = draw(st.integers(0, 1000))
    out = []
    acc = start
    for g in gaps:
        out.append(acc)
        acc += g
    return out


def reference_empty_count(positions, through):
    """Empties at logical positions <= `through`, by full enumeration."""
    occupied = set(positions)
    return sum(1 for p in range(through + 1) if p not in occupied)


def reference_runs(positions):
    """Runs found by scanning every logical position up to the last."""
    if not positions:
        return []
    occupied = set(positions)
    runs = []
    start = None
    for p in range(positions[-1] + 2):
        if p in occupied:
            if start is None:
                start = p
        elif start is not None:
            runs.append((start, p - 1, reference_empty_count(positions, p - 1)))
            start = None
    return runs


def reference_physical(positions, logical):
    """Index of `logical` by linear scan, None when absent."""
    for i, p in enumerate(positions):
        if p == logical:
            return i
    return None
