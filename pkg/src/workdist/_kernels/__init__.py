"""Numerical kernel backends.

The compiled Cython core is preferred when it was built; otherwise the
pure-Python implementation is used.  Set ``WORKDIST_PURE_PYTHON=1`` to force
the fallback (useful for benchmarking and debugging).  Both backends expose
the same four functions: ``jacobi_eigh``, ``fft_radix2``, ``erf_complex``
(plus ``erf_complex_scalar``) and ``husimi_grid``.
"""

import os

from . import pykern

if os.environ.get("WORKDIST_PURE_PYTHON"):
    impl = pykern
else:
    try:
        from . import ckern as impl
    except ImportError:
        impl = pykern

BACKEND = impl.NAME


def available_backends():
    """Names and modules of every importable backend."""
    backends = {"python": pykern}
    try:
        from . import ckern
        backends["cython"] = ckern
    except ImportError:
        pass
    return backends
