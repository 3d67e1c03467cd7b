"""Backend selection for the batched resolvent kernels.

The compiled extension is used when it imports; otherwise (or when
``AIP_PURE_PYTHON=1`` is set) the numpy implementation is used.  Both
expose ``resolvent_solve(A, R, z)`` and ``transfer_eval(A, B, C, D, z)``.
Above ``COMPILED_MAX_STATE`` the per-point elimination loses to batched
LAPACK, so large state spaces always go to numpy (see benchmarks/).
"""
import os

from . import _kernels_py

BACKEND = "python"
COMPILED_MAX_STATE = 16
_impl = _kernels_py

if os.environ.get("AIP_PURE_PYTHON", "") not in ("1", "true", "yes"):
    try:
        from . import _kernels as _compiled
    except ImportError:  # pragma: no cover - depends on the build
        _compiled = None
    else:
        _impl = _compiled
        BACKEND = "compiled"
else:
    _compiled = None


def compiled_available():
    return _compiled is not None


def get_backend(name=None):
    """Return the kernel module for ``name`` ('compiled', 'python' or the active one)."""
    if name is None:
        return _impl
    if name == "python":
        return _kernels_py
    if name == "compiled":
        if _compiled is None:
            raise ImportError("compiled kernels are not built")
        return _compiled
    raise ValueError(f"unknown backend {name!r}")


def _pick(A):
    return _kernels_py if len(A) > COMPILED_MAX_STATE else _impl


def resolvent_solve(A, R, z):
    return _pick(A).resolvent_solve(A, R, z)


def transfer_eval(A, B, C, D, z):
    return _pick(A).transfer_eval(A, B, C, D, z)
