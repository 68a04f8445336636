"""Kernel dispatch: compiled extension when importable, pure Python otherwise.

Set ``FLOWERCODE_PURE_PYTHON=1`` to force the fallback. Inputs wider than the
compiled kernels' 64-bit sets are routed to the fallback automatically.
"""

import os

from flowercode import _pykernels

BACKEND = "python"
_ext = None
if not os.environ.get("FLOWERCODE_PURE_PYTHON"):
    try:
        from flowercode import _ckernels as _ext
        BACKEND = "cython"
    except ImportError:
        _ext = None


def _fits(values, bits: int = 64) -> bool:
    return all(v >= 0 and v.bit_length() <= bits for v in values)


def minimal_covers(target, masks, backend=None):
    impl = _pick(backend)
    if impl is not _pykernels and not (len(masks) <= 64 and _fits([target, *masks])):
        impl = _pykernels
    return impl.minimal_covers(target, masks)


def min_union_degree(masks, need, backend=None):
    impl = _pick(backend)
    if impl is not _pykernels and not (len(masks) <= 62 and _fits(masks)):
        impl = _pykernels
    return impl.min_union_degree(masks, need)


def gf_matmul(a, x, mul_table, backend=None):
    return _pick(backend).gf_matmul(a, x, mul_table)


def _pick(backend):
    if backend is None:
        return _ext if _ext is not None else _pykernels
    if backend == "python":
        return _pykernels
    if backend == "cython":
        if _ext is None:
            raise ImportError("compiled kernels are not built")
        return _ext
    raise ValueError(f"unknown backend {backend!r}")


def available_backends():
    return ["python"] + (["cython"] if _ext is not None else [])
