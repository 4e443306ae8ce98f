"""The phase family f(x) = k (m x)^gamma with exact derivative formulas,
numeric checks of the growth/comparability conditions the sum estimates
assume, and the second-order log-linear approximation g used on each arc.

g matches f, f', f'' at the arc center x0:

    g(x) = (l/q) x - x0^2 f''(x0) log x + C,
    C    = f(x0) - h(x0) x0 + x0^2 f''(x0) log x0,   h = f' + x f''.

The constant C is kept in double-double so that e(g(n)) stays accurate to
~1e-15 even when C is of order 1e9; phases of that size shed their
fractional part in plain float64.
"""

import math
from dataclasses import dataclass, field

import numpy as np

from . import kernels, kernels_numpy
from .exceptions import ConsistencyError, DomainError

TWO_PI = 2.0 * math.pi


@dataclass(frozen=True)
class PhaseFunction:
    """f(x) = k (m x)^gamma, the concrete phase family of the experiments.

    Any object with value/d1/d2/d3 methods can stand in for it where only
    closed-form derivatives are needed (the arc machinery is duck-typed);
    the fast fractional-part kernels are specific to this family.
    """
    k: float
    m: int
    gamma: float

    def __post_init__(self):
        if self.k <= 0 or self.m < 1 or not (0.0 < self.gamma < 1.0) \
                or self.m != int(self.m):
            raise DomainError(
                f"need k > 0, integer m >= 1, gamma in (0,1); got {self}")

    def value(self, x):
        return self.k * (self.m * x) ** self.gamma

    def d1(self, x):
        g = self.gamma
        return self.k * g * self.m ** g * x ** (g - 1.0)

    def d2(self, x):
        g = self.gamma
        return self.k * g * (g - 1.0) * self.m ** g * x ** (g - 2.0)

    def d3(self, x):
        g = self.gamma
        return self.k * g * (g - 1.0) * (g - 2.0) * self.m ** g * x ** (g - 3.0)

    def h(self, x):
        """h(x) = f'(x) + x f''(x) = gamma^2 k m^gamma x^(gamma-1)."""
        g = self.gamma
        return self.k * g * g * self.m ** g * x ** (g - 1.0)

    def hprime(self, x):
        """h'(x) = 2 f''(x) + x f'''(x)."""
        g = self.gamma
        return self.k * g * g * (g - 1.0) * self.m ** g * x ** (g - 2.0)

    def h_inverse_closed(self, y):
        """Closed-form h^{-1} for this family (strictly decreasing on x > 0)."""
        g = self.gamma
        return (y / (self.k * g * g * self.m ** g)) ** (1.0 / (g - 1.0))

    def fractions(self, ns: np.ndarray) -> np.ndarray:
        """frac(f(n)) for an int64 array, through the extended-precision kernel."""
        ns = np.ascontiguousarray(ns, dtype=np.int64)
        if ns.size and self.m * int(ns.max()) > 2 ** 53:
            raise DomainError("m*n exceeds 2^53; the phase kernel needs m*n exact in float64")
        return kernels.pow_phase_frac(ns, self.gamma, self.k, self.m)


@dataclass
class ConditionReport:
    """Outcome of the numeric condition checks; failures are reported, not raised."""
    monotone_increasing: bool
    doubling_ok: bool
    derivative_comparability_ok: bool
    h_sign_definite: bool
    hprime_sign_definite: bool
    window_ok: bool
    measured: dict = field(default_factory=dict)

    @property
    def all_ok(self) -> bool:
        return (self.monotone_increasing and self.doubling_ok
                and self.derivative_comparability_ok and self.h_sign_definite
                and self.hprime_sign_definite and self.window_ok)


def check_conditions(f, N: float, eta: float, seed: int = 0) -> ConditionReport:
    """Sample the growth conditions on [N, 2N] plus the window test
    N^(1/2+eta) <= f(N) <= N^(3/2-eta)."""
    if N < 2 or not (0.0 < eta < 0.5):
        raise DomainError(f"need N >= 2 and eta in (0, 1/2); got N={N}, eta={eta}")
    rng = np.random.default_rng(seed)
    base = np.geomspace(N, 2.0 * N, 64)
    jitter = N * (1.0 + rng.random(16))
    xs = np.sort(np.concatenate([base, jitter]))

    fx = f.value(xs)
    d1 = f.d1(xs)
    d2 = f.d2(xs)
    d3 = f.d3(xs)
    hx = d1 + xs * d2
    hpx = 2.0 * d2 + xs * d3

    mono = bool(np.all(d1 > 0.0))
    ratio2 = f.value(2.0 * xs) / fx
    gamma = getattr(f, "gamma", None)
    if gamma is not None:
        lo, hi = 2.0 ** gamma * 0.99, 2.0 ** gamma * 1.01
    else:
        lo, hi = ratio2.min() * 0.999, ratio2.max() * 1.001
    doubling = bool(np.all((ratio2 >= lo) & (ratio2 <= hi)))

    r1 = xs * d1 / fx
    r2 = xs ** 2 * d2 / fx
    r3 = xs ** 3 * d3 / fx
    comp = True
    for r in (r1, r2, r3):
        span = np.max(np.abs(r)) - np.min(np.abs(r))
        comp &= bool(span <= 1e-9 * max(1.0, np.max(np.abs(r))))

    h_def = bool(np.all(hx > 0.0) or np.all(hx < 0.0))
    hp_def = bool(np.all(hpx > 0.0) or np.all(hpx < 0.0))

    fN = f.value(N)
    window = N ** (0.5 + eta) <= fN <= N ** (1.5 - eta)

    return ConditionReport(
        monotone_increasing=mono,
        doubling_ok=doubling,
        derivative_comparability_ok=comp,
        h_sign_definite=h_def,
        hprime_sign_definite=hp_def,
        window_ok=bool(window),
        measured={
            "doubling_ratio": float(np.mean(ratio2)),
            "x_d1_over_f": float(np.mean(r1)),
            "x2_d2_over_f": float(np.mean(r2)),
            "x3_d3_over_f": float(np.mean(r3)),
            "h_over_f_per_x": float(np.mean(hx * xs / fx)),
            "hprime_over_f_per_x2": float(np.mean(hpx * xs ** 2 / fx)),
            "f_at_N": float(fN),
            "window_lo_exponent": 0.5 + eta,
            "window_hi_exponent": 1.5 - eta,
        },
    )


# -- the g approximation ------------------------------------------------------

def _dd1(x):
    return np.array([x], dtype=np.float64)


@dataclass(frozen=True)
class GApprox:
    """Second-order approximation around x0 = h^{-1}(l/q); see module docstring."""
    l: int
    q: int
    x0: float
    slope: float
    logcoef: float
    c_hi: float
    c_lo: float
    T: float

    @property
    def C(self) -> float:
        return self.c_hi + self.c_lo

    def g(self, x):
        return self.slope * x - self.logcoef * np.log(x) + self.C

    def gprime(self, x):
        return self.slope - self.logcoef / x

    def gsecond(self, x):
        return self.logcoef / x ** 2

    def gthird(self, x):
        return -2.0 * self.logcoef / x ** 3

    def fractions(self, ns: np.ndarray) -> np.ndarray:
        """frac(g(n)): rational part reduced exactly, log part in double-double."""
        ns = np.ascontiguousarray(ns, dtype=np.int64)
        return kernels.g_phase_frac(ns, self.l, self.q, self.logcoef,
                                    self.c_hi, self.c_lo)

    def unit_parts(self, ns: np.ndarray):
        """(e(n l/q), n^{-iT}, e(C)) per n -- the factored form of e(g(n)).

        n^{-iT} runs through e(-T log n / (2 pi)) with the same fractional
        reduction as everything else, so comparing the product against
        e(g(n)) checks the bridge identity and not two copies of one code path.
        """
        ns = np.ascontiguousarray(ns, dtype=np.int64)
        rat = ((self.l * ns) % self.q).astype(np.float64) / float(self.q)
        e_rat = np.exp(2j * math.pi * rat)
        tfrac = kernels.minus_t_log_frac(ns, self.T)
        n_mit = np.exp(2j * math.pi * tfrac)
        cfr = float(kernels_numpy.dd_frac(_dd1(self.c_hi), _dd1(self.c_lo))[0])
        e_c = np.exp(2j * math.pi * cfr)
        return e_rat, n_mit, e_c


def build_g(f, l: int, q: int, x0: float, tol: float = 1e-9) -> GApprox:
    """GApprox for the fraction l/q at center x0 (x0 must satisfy h(x0) = l/q)."""
    if x0 <= 0 or q < 1:
        raise DomainError(f"need x0 > 0 and q >= 1, got x0={x0}, q={q}")
    target = l / q
    hx0 = f.d1(x0) + x0 * f.d2(x0)
    if abs(hx0 - target) > tol * max(1.0, abs(target)):
        raise ConsistencyError(
            f"h(x0)={hx0!r} does not match l/q={target!r} (rel tol {tol})")
    logcoef = x0 * x0 * f.d2(x0)
    # C = f(x0) - h(x0) x0 + logcoef * log(x0), assembled in double-double
    lh, ll = kernels_numpy.dd_log(_dd1(x0))
    th, tl = kernels_numpy.dd_mul_d(lh, ll, logcoef)
    ph, pe = kernels_numpy._two_prod(_dd1(hx0), _dd1(x0))
    sh, sl = kernels_numpy.dd_add(th, tl, -ph, -pe)
    ch, cl = kernels_numpy.dd_add_d(sh, sl, f.value(x0))
    return GApprox(l=l, q=q, x0=float(x0), slope=target, logcoef=float(logcoef),
                   c_hi=float(ch[0]), c_lo=float(cl[0]),
                   T=float(TWO_PI * logcoef))


def gprime_error_bound_check(f, g: GApprox, Q: int, N: float,
                             x_lo: float, x_hi: float, samples: int = 33) -> float:
    """max over sampled x in (x_lo, x_hi] of |f'(x) - g'(x)| q^2 Q^2 f(N) / N.

    The interesting output is that this stays bounded by one constant across
    all arcs of a dissection; there is no closed-form constant to compare to.
    """
    xs = np.linspace(x_lo, x_hi, samples)
    dev = np.abs(f.d1(xs) - g.gprime(xs))
    scale = (g.q ** 2) * (Q ** 2) * f.value(N) / N
    return float(np.max(dev) * scale)
