"""Backend selection for the recurrence kernels.

Imports the compiled core when it is built, otherwise the numpy twin.
``SPHLS_FORCE_PY=1`` in the environment forces the numpy path (used by the
benchmark and by tests that compare the two).
"""

import os

if os.environ.get("SPHLS_FORCE_PY") == "1":
    from . import _core_py as _impl
else:
    try:
        from . import _core as _impl  # type: ignore[attr-defined]
    except ImportError:
        from . import _core_py as _impl

BACKEND = _impl.BACKEND

gegenbauer_table = _impl.gegenbauer_table
chebyshev_limit_table = _impl.chebyshev_limit_table
jacobi_nodes_weights = _impl.jacobi_nodes_weights
