"""Kernel backend selection.

Prefers the compiled extension and falls back to the numpy implementation
when it is missing. Set ``QPOISSON_KERNELS=numpy`` or
``QPOISSON_KERNELS=cython`` to force one; forcing the compiled backend when
it is not built is an error rather than a silent downgrade.
"""

import os

_requested = os.environ.get("QPOISSON_KERNELS", "").strip().lower()

if _requested in ("", "cython"):
    try:
        from . import _kernels as impl
    except ImportError:
        if _requested == "cython":
            raise ImportError(
                "QPOISSON_KERNELS=cython but the compiled extension is not "
                "built; reinstall the package or unset the variable") from None
        from . import _kernels_np as impl
elif _requested == "numpy":
    from . import _kernels_np as impl
else:
    raise ImportError(
        f"unknown QPOISSON_KERNELS value {_requested!r}, expected 'cython' or 'numpy'")


def backend_name() -> str:
    """Name of the kernel implementation in use ('cython' or 'numpy')."""
    return impl.BACKEND_NAME
