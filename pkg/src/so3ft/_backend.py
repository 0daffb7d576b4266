"""Kernel backend selection.

The compiled ``so3ft._kernels`` extension is used when it can be imported;
otherwise the NumPy kernels are used.  Setting ``SO3FT_BACKEND=python``
forces the NumPy kernels.
"""
import logging
import os

from . import _kernels_py

log = logging.getLogger(__name__)

_compiled = None
if os.environ.get("SO3FT_BACKEND", "").lower() != "python":
    try:
        from . import _kernels as _compiled  # type: ignore[no-redef]
    except ImportError:  # extension not built
        log.debug("compiled kernels unavailable, using NumPy fallback")
        _compiled = None

BACKENDS = {"python": _kernels_py}
if _compiled is not None:
    BACKENDS["compiled"] = _compiled

DEFAULT = "compiled" if _compiled is not None else "python"


def get(name: str | None = None):
    """Kernel module by name; ``None`` selects the default."""
    name = name or DEFAULT
    try:
        return BACKENDS[name]
    except KeyError:
        raise ValueError(f"unknown or unavailable backend {name!r}; have {sorted(BACKENDS)}") from None


def default_threads() -> int:
    return os.cpu_count() or 1
