"""Hot-loop kernels, compiled when available.

The Cython build is used unless it failed to compile or the environment
variable ``SC2TC_PURE_PYTHON`` is set to a non-empty value, in which case
the pure-Python twin is loaded. ``COMPILED`` tells which one is active.
"""
import os

if os.environ.get("SC2TC_PURE_PYTHON"):
    from ._editdist_py import edit_distance, total_edit_distance

    COMPILED = False
else:
    try:
        from ._editdist import edit_distance, total_edit_distance

        COMPILED = True
    except ImportError:
        from ._editdist_py import edit_distance, total_edit_distance

        COMPILED = False

__all__ = ["COMPILED", "edit_distance", "total_edit_distance"]
