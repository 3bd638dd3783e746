"""Kernel selection.

The compiled kernel is used when it imports; otherwise the pure-Python one.
Set ``VALUEBISECT_KERNEL=python`` to force the fallback.
"""
import contextlib
import os

from . import _pykernel

try:
    from . import _ckernel
except ImportError:  # not built
    _ckernel = None

KERNELS = {"python": _pykernel}
if _ckernel is not None:
    KERNELS["compiled"] = _ckernel

_active = _ckernel if (_ckernel is not None and os.environ.get("VALUEBISECT_KERNEL", "") != "python") else _pykernel


def kernel():
    return _active


def available() -> list[str]:
    return sorted(KERNELS)


def set_kernel(name: str):
    global _active
    try:
        _active = KERNELS[name]
    except KeyError:
        raise ValueError(f"kernel {name!r} not available (have {available()})") from None


@contextlib.contextmanager
def using(name: str):
    global _active
    saved = _active
    set_kernel(name)
    try:
        yield
    finally:
        _active = saved
