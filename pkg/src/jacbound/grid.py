"""Backend selection for the lattice maximizer.

The compiled extension is used when it was built; otherwise the pure-Python
implementation is used.  ``python_grid_max`` always runs the fallback.
"""

from . import _grid_py

try:
    from . import _grid as _impl  # type: ignore[attr-defined]
    BACKEND = "cython"
except ImportError:
    _impl = _grid_py
    BACKEND = "python"

POLE_EPS = _grid_py.POLE_EPS


def grid_max(pair, coef, scale, total):
    """Maximize prod x / prod (1 - x_i + coef_i x_{pair_i})^2 over the scaled lattice."""
    return _impl.grid_max(list(pair), list(coef), float(scale), int(total))


def python_grid_max(pair, coef, scale, total):
    return _grid_py.grid_max(list(pair), list(coef), float(scale), int(total))
