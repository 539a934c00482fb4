"""Kernel backend selection.

The compiled extension (`canuq._ckernels`) is preferred when importable;
otherwise the vectorized NumPy fallback is used. Set the environment
variable CANUQ_NO_CEXT=1 to force the fallback (used by the benchmark and
the backend-agreement tests).
"""

import os

from . import _pykernels

if os.environ.get("CANUQ_NO_CEXT"):
    impl = _pykernels
else:
    try:
        from . import _ckernels as impl  # type: ignore[attr-defined]
    except ImportError:
        impl = _pykernels


def backend() -> str:
    """Name of the active kernel backend: 'c' or 'python'."""
    return impl.BACKEND_NAME
