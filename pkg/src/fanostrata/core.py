"""Kernel backend selection.

The compiled extension fanostrata._core carries the hot loops of the
finite-field Monte Carlo; when it is missing (no compiler at install
time) the pure-Python twin takes over with identical semantics. Callers
import the functions from here and never notice which one is active,
except in speed.
"""

from __future__ import annotations

from . import _core_py

try:
    from . import _core  # compiled

    BACKEND = "cython"
    _impl = _core
except ImportError:  # pragma: no cover - depends on build environment
    BACKEND = "python"
    _impl = _core_py

# largest modulus the compiled kernel can square without int64 overflow
KERNEL_PRIME_LIMIT = 2**31


def kernel_available(p: int) -> bool:
    return BACKEND == "cython" and p < KERNEL_PRIME_LIMIT


def batch_multiplicities(coeffs, n, d, p):
    if p >= KERNEL_PRIME_LIMIT:
        return _core_py.batch_multiplicities(coeffs, n, d, p)
    return _impl.batch_multiplicities(coeffs, n, d, p)


def h_profile(coeffs, n, d, p):
    if p >= KERNEL_PRIME_LIMIT:
        return _core_py.h_profile(coeffs, n, d, p)
    return _impl.h_profile(coeffs, n, d, p)


def backends():
    """Available (name, module) pairs, compiled first; used by the benchmark."""
    out = []
    if BACKEND == "cython":
        out.append(("cython", _impl))
    out.append(("python", _core_py))
    return out
