"""Kernel backend selection.

Hot numeric loops exist twice: JIT-compiled scalar loops (numba) and
vectorized pure-numpy array code.  Both implement the same double-double
formulas; results agree to ~1 ulp but are not guaranteed bit-identical
across backends.  Within one backend every operation is deterministic.

The backend is chosen once per process:

  EXPSUM_BACKEND=numba   force the JIT path (error if numba is missing)
  EXPSUM_BACKEND=numpy   force the vectorized fallback
  EXPSUM_BACKEND=auto    numba when importable, else numpy (default)

``EXPSUM_THREADS`` (documented in the CLI) controls worker counts for
chunked sums, not the backend.
"""

import os

_VALID = ("auto", "numba", "numpy")


def _probe_numba() -> bool:
    try:
        import numba  # noqa: F401
        return True
    except ImportError:
        return False


def select_backend() -> str:
    """Return 'numba' or 'numpy' according to EXPSUM_BACKEND and availability."""
    req = os.environ.get("EXPSUM_BACKEND", "auto").strip().lower()
    if req not in _VALID:
        raise ValueError(
            f"EXPSUM_BACKEND must be one of {_VALID}, got {req!r}")
    if req == "numpy":
        return "numpy"
    have = _probe_numba()
    if req == "numba":
        if not have:
            raise ImportError("EXPSUM_BACKEND=numba but numba is not importable")
        return "numba"
    return "numba" if have else "numpy"


BACKEND = select_backend()


def resolve_workers(flag_value=None) -> int:
    """Worker count for chunked sums: EXPSUM_THREADS env overrides the flag."""
    env = os.environ.get("EXPSUM_THREADS")
    if env is not None and env.strip():
        n = int(env)
    elif flag_value is not None:
        n = int(flag_value)
    else:
        n = 1
    if n < 1:
        raise ValueError(f"worker count must be >= 1, got {n}")
    return n
