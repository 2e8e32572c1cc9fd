"""Kernel backend selection.

The hot numeric kernels exist twice: numba @njit loops and a pure-numpy
fallback.  The active backend is chosen at import time from the
``CASIMIR_PISTON_BACKEND`` environment variable (``numba`` or ``numpy``);
unset, numba is used when importable.  ``use()`` switches at runtime (used
by the tests and the benchmark).

Both backends are deterministic for identical inputs; they agree with each
other to rounding-level differences but are not bit-identical.
"""

import os

_ENV_VAR = "CASIMIR_PISTON_BACKEND"
_active = None


class BackendError(RuntimeError):
    pass


def _load(name):
    if name == "numpy":
        from . import _kernels_numpy as mod
        return mod
    if name == "numba":
        try:
            from . import _kernels_numba as mod
        except ImportError as exc:
            raise BackendError(f"numba backend requested but unavailable: {exc}") from exc
        return mod
    raise BackendError(f"unknown backend {name!r} (expected 'numba' or 'numpy')")


def _default_name():
    env = os.environ.get(_ENV_VAR, "").strip().lower()
    if env:
        return env
    try:
        import numba  # noqa: F401
    except ImportError:
        return "numpy"
    return "numba"


def use(name):
    """Activate a kernel backend by name ('numba' or 'numpy')."""
    global _active
    _active = _load(name)
    return _active


def active():
    """The currently active kernel module."""
    global _active
    if _active is None:
        _active = _load(_default_name())
    return _active


def active_name():
    return active().NAME


def available_backends():
    names = ["numpy"]
    try:
        import numba  # noqa: F401
        names.append("numba")
    except ImportError:
        pass
    return names


import numpy as _np


def _as1d(x):
    return _np.ascontiguousarray(x, dtype=_np.float64).ravel()


def bessel_j_many(nu, x):
    return active().bessel_j_many(int(nu), _as1d(x))


def k0_many(x):
    return active().k0_many(_as1d(x))


def k1_many(x):
    return active().k1_many(_as1d(x))


def k0k2_many(x):
    return active().k0k2_many(_as1d(x))


def normal_from_uniform(u):
    """Standard-normal deviates from uniforms in (0, 1) by the inverse CDF.

    Shared by both backends (scipy's ndtri, vectorized C): the conversion is
    not a hot loop, and sharing it makes the noise streams bit-identical
    across backends.
    """
    from scipy.special import ndtri

    return ndtri(_np.ascontiguousarray(u, dtype=_np.float64))


def ou_batch(phi, decay, sig, normals, sqw, w):
    return active().ou_batch(phi, decay, sig, normals, sqw, w)


def axial_partial_sum(q, length, n_terms):
    return active().axial_partial_sum(float(q), float(length), int(n_terms))
