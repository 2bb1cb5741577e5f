"""Optional numba acceleration.

Set ``TOPRO_DISABLE_NUMBA=1`` to force the pure-numpy kernels. When numba is
missing or disabled, ``njit`` is an identity decorator so kernel modules import
unchanged.
"""

from __future__ import annotations

import os

_FALSY = {"", "0", "false", "no", "off"}


def _env_disabled() -> bool:
    return os.environ.get("TOPRO_DISABLE_NUMBA", "").strip().lower() not in _FALSY


try:
    from numba import njit as _numba_njit

    HAVE_NUMBA = True
except ImportError:  # pragma: no cover - numba is a declared dependency
    _numba_njit = None
    HAVE_NUMBA = False

USE_NUMBA = HAVE_NUMBA and not _env_disabled()


def njit(*args, **kwargs):
    """``numba.njit`` when available, otherwise a no-op decorator.

    Kernels are always compiled when numba is importable, so both paths stay
    callable for benchmarks and equivalence tests; ``USE_NUMBA`` only decides
    which one the public dispatchers pick.
    """
    if _numba_njit is not None:
        return _numba_njit(*args, **kwargs)
    if len(args) == 1 and callable(args[0]) and not kwargs:
        return args[0]

    def wrap(fn):
        return fn

    return wrap
