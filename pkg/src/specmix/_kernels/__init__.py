"""Kernel backend selection for vertex hunting.

Prefers the compiled extension; falls back to the numpy implementation when
the extension is missing or SPECMIX_PURE_PYTHON is set to a non-empty value.
BACKEND records which one is active.
"""
import os

if os.environ.get("SPECMIX_PURE_PYTHON"):
    from ._vhcore_py import accumulate_clusters, assign_points

    BACKEND = "python"
else:
    try:
        from ._vhcore import accumulate_clusters, assign_points

        BACKEND = "cython"
    except ImportError:
        from ._vhcore_py import accumulate_clusters, assign_points

        BACKEND = "python"

__all__ = ["assign_points", "accumulate_clusters", "BACKEND"]
