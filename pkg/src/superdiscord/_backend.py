"""Kernel selection: compiled extension when importable, numpy otherwise."""
import os

if os.environ.get("SUPERDISCORD_PURE") == "1":
    from superdiscord import _fallback as kernels

    BACKEND = "python"
else:
    try:
        from superdiscord import _kernels as kernels

        BACKEND = "cython"
    except ImportError:  # extension not built
        from superdiscord import _fallback as kernels

        BACKEND = "python"

cond_entropy_batch = kernels.cond_entropy_batch
herm_eigvals = kernels.herm_eigvals
