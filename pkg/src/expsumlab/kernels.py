"""Backend dispatch for the hot kernels.

Import this module, not ``kernels_numba``/``kernels_numpy`` directly:

    from expsumlab import kernels
    fr = kernels.pow_phase_frac(ns, gamma, k, m)

Every function takes/returns plain numpy arrays, so the two backends are
interchangeable.  ``kernels.BACKEND`` records which one is live.
"""

from .backend import BACKEND

if BACKEND == "numba":
    from . import kernels_numba as _impl
else:
    from . import kernels_numpy as _impl

pow_phase_frac = _impl.pow_phase_frac
log_phase_frac = _impl.log_phase_frac
minus_t_log_frac = _impl.minus_t_log_frac
g_phase_frac = _impl.g_phase_frac
pow_floor = _impl.pow_floor
eta_power_mod = _impl.eta_power_mod


def warm_up():
    """Trigger JIT compilation of all kernels (no-op on the numpy backend)."""
    import numpy as np
    ns = np.array([2, 3], dtype=np.int64)
    pow_phase_frac(ns, 0.5, 1.0, 1)
    log_phase_frac(ns, 1.0)
    minus_t_log_frac(ns, 1.0)
    g_phase_frac(ns, 1, 2, 1.0, 0.5, 0.0)
    pow_floor(ns, 1.5)
    eta_power_mod(4, np.array([0, 1], dtype=np.int64),
                  np.array([1, -1], dtype=np.int64), 2, 97)
