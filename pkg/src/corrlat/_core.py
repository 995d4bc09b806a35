"""Import-time selection between the compiled and pure-Python kernels.

The compiled extension is preferred when present; set the environment
variable ``CORRLAT_PURE_PYTHON=1`` to force the fallback (used by the
benchmark and the cross-core equivalence tests).
"""

from __future__ import annotations

import os

if os.environ.get("CORRLAT_PURE_PYTHON"):
    from . import _pycore as _impl
else:
    try:
        from . import _speedups as _impl  # type: ignore[no-redef]
    except ImportError:
        from . import _pycore as _impl  # type: ignore[no-redef]

run_steps = _impl.run_steps
label_corrupt = _impl.label_corrupt
CORE_NAME = _impl.CORE_NAME

SCHEDULE_RANDOM = 0
SCHEDULE_SEQUENTIAL = 1


def active_core():
    """The kernel module currently in use."""
    return _impl
