"""Kernel dispatch: the compiled extension when importable, else numpy.

Set ``FFLSERIES_PURE_PYTHON=1`` to force the fallback.
"""

import os

from . import _pykernels

if os.environ.get("FFLSERIES_PURE_PYTHON"):
    _impl = _pykernels
    BACKEND = "python"
else:
    try:
        from . import _ckernels as _impl

        BACKEND = "cython"
    except ImportError:  # extension not built
        _impl = _pykernels
        BACKEND = "python"


def conv(a, b, n, field):
    """Coefficient-vector product over ``field`` truncated to length n (n<0: full)."""
    return _impl.conv(a, b, n, field.add_table, field.mul_table)


def monic_outer_sum(field, e, beta, j, start=0, stop=None):
    """Sum of a^j (x) a^beta over the monics of degree e with index in [start, stop)."""
    if stop is None:
        stop = field.q**e
    return _impl.monic_outer_sum(field.q, e, beta, j, start, stop, field.add_table, field.mul_table)
