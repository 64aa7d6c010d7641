"""Select the event-engine kernel at import time.

The compiled extension is preferred; set APDT_PURE_KERNEL=1 to force the
pure-Python fallback (the benchmark uses this to compare the two).
"""

from __future__ import annotations

import os

from . import _kernel_py

if os.environ.get("APDT_PURE_KERNEL"):
    _impl = _kernel_py
    KERNEL_KIND = "python"
else:
    try:
        from . import _kernel as _impl  # type: ignore[no-redef]

        KERNEL_KIND = "compiled"
    except ImportError:
        _impl = _kernel_py
        KERNEL_KIND = "python"

simulate_fifo = _impl.simulate_fifo
derive_seed = _kernel_py.derive_seed
