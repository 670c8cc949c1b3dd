"""Select the compiled kernels when they were built, else the Python ones."""
try:
    from ._kernels import rank_mod_p, scan_subspaces
    BACKEND = "cython"
except ImportError:  # pragma: no cover - depends on the build
    from ._kernels_py import rank_mod_p, scan_subspaces
    BACKEND = "python"

__all__ = ["rank_mod_p", "scan_subspaces", "BACKEND"]
