"""Hot numeric kernels with a numba backend and a pure-numpy fallback.

``BACKEND`` names the active one; see ``entgeo._jit`` for the switch.
"""
from .. import _jit
from . import _numpy
from ._descent import descend

if _jit.USE_NUMBA:
    from . import _numba as _active

    BACKEND = "numba"
else:
    _active = _numpy
    BACKEND = "numpy"

jacobi_eigh = _active.jacobi_eigh
ensemble_objective = _active.ensemble_objective
w_grid_min = _active.w_grid_min


def backend_module(name):
    """Return the kernel module for ``name`` ('numba' or 'numpy'), for comparisons."""
    if name == "numpy":
        return _numpy
    if name == "numba":
        from . import _numba

        return _numba
    raise ValueError(f"unknown kernel backend {name!r}")


__all__ = ["BACKEND", "descend", "jacobi_eigh", "ensemble_objective", "w_grid_min", "backend_module"]
