"""Kernel backend selection.

The compiled extension is preferred; ``POISKIT_PURE=1`` forces the Python
fallback (used by the backend-consistency tests and the benchmark).
"""

from __future__ import annotations

import os

from .rational import QQ, QQ_ONE, QQ_ZERO, qq_str, to_qq

if os.environ.get("POISKIT_PURE"):
    from . import _termops_py as termops
else:
    try:
        from . import _termops_cy as termops  # type: ignore[no-redef]
    except ImportError:
        from . import _termops_py as termops  # type: ignore[no-redef]

BACKEND = termops.BACKEND

__all__ = ["QQ", "QQ_ONE", "QQ_ZERO", "BACKEND", "termops", "to_qq", "qq_str"]
