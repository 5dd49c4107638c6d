"""The compiled lattice kernel and the pure-Python fallback must agree exactly."""

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from jacbound import _grid_py, grid

compiled = pytest.importorskip("jacbound._grid")


@st.composite
def kernel_inputs(draw):
    k = draw(st.integers(1, 5))
    pair = draw(st.lists(st.integers(0, k - 1), min_size=k, max_size=k))
    coef = draw(st.lists(st.sampled_from([0.0, 1.0, 3.0, 7.0]), min_size=k, max_size=k))
    total = draw(st.integers(1, 12))
    scale = draw(st.sampled_from([1.0 / total, 0.5 / total, 0.9 / total]))
    return pair, coef, scale, total


@given(kernel_inputs())
@settings(max_examples=150)
def test_backends_agree(args):
    a = compiled.grid_max(*args)
    b = _grid_py.grid_max(*args)
    assert list(a[0]) == list(b[0])
    assert a[1:] == tuple(b[1:])


def test_selected_backend_is_compiled():
    assert grid.BACKEND == "cython"


def test_counts_lattice_points():
    # points m in Z>=0^3 with sum <= 4: C(7, 3)
    _, _, n_points, _ = grid.grid_max([0, 1, 2], [0.0] * 3, 0.25, 4)
    assert n_points == 35


def test_poles_are_skipped():
    # x = 1 makes 1 - x vanish
    m, best, n, poles = grid.python_grid_max([0], [0.0], 1.0, 1)
    assert poles == 1 and m == [0] and best == 0.0


def test_fallback_selected_without_extension(monkeypatch):
    import importlib
    import sys

    import jacbound

    monkeypatch.setitem(sys.modules, "jacbound._grid", None)
    monkeypatch.delattr(jacbound, "_grid")
    try:
        fresh = importlib.reload(grid)
        assert fresh.BACKEND == "python"
        assert fresh.grid_max([0, 1], [0.0, 1.0], 0.1, 10)[2] == 66
    finally:
        monkeypatch.undo()
        importlib.reload(grid)
