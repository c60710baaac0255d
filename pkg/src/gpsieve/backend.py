"""Select the numerical backend at import time.

The compiled extension (``gpsieve._core``) is preferred; the NumPy twin
(``gpsieve._core_py``) is the fallback. ``GPSIEVE_BACKEND=python`` forces the
fallback, ``GPSIEVE_BACKEND=compiled`` makes a missing extension an error.
``benchmarks/backend_bench.py`` compares the two.
"""

import os

from gpsieve import _core_py
from gpsieve.errors import ConfigError

_requested = os.environ.get("GPSIEVE_BACKEND", "").strip().lower()
if _requested not in ("", "compiled", "python"):
    raise ConfigError(
        f"GPSIEVE_BACKEND must be 'compiled' or 'python', got {_requested!r}"
    )

if _requested == "python":
    _impl = _core_py
    BACKEND = "python"
else:
    try:
        from gpsieve import _core as _impl  # type: ignore[no-redef]

        BACKEND = "compiled"
    except ImportError:
        if _requested == "compiled":
            raise
        _impl = _core_py
        BACKEND = "python"

se_cross = _impl.se_cross
forward_solve = _impl.forward_solve
batch_posterior = _impl.batch_posterior


def available_backends():
    """Names of importable backends, compiled first when present."""
    names = []
    try:
        from gpsieve import _core  # noqa: F401

        names.append("compiled")
    except ImportError:
        pass
    names.append("python")
    return names
