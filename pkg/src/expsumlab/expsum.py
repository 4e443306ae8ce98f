"""Direct evaluation of the exponential sums, the arc-partition route, the
finite character-splitting identity, and bound-ratio sweeps.

Determinism: a sum over (N, N'] is evaluated in fixed-size index chunks;
chunks may be computed on a thread pool but their partial sums are merged
in index order with compensated accumulation, so the result is independent
of the worker count, and bit-identical for a fixed chunk size.
"""

import math
import sys
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from . import kernels
from .arith import divisors, factorize
from .backend import resolve_workers
from .characters import _character_basis
from .exceptions import DomainError, SizeError
from .farey import HMap, dissect
from .hecke import build_sym2_coeffs
from .phase import check_conditions

TWO_PI = 2.0 * math.pi
DEFAULT_CHUNK = 4096

BOUND_N_EXPONENT = 19.0 / 22.0
BOUND_F_EXPONENT = 1.0 / 11.0


def theorem_bound(N: float, f_at_N: float) -> float:
    """N^(19/22) f(N)^(1/11), the envelope the ratio column is measured against."""
    return N ** BOUND_N_EXPONENT * f_at_N ** BOUND_F_EXPONENT


@dataclass
class SumReport:
    """One exponential-sum experiment: parameters, value, bound ratio."""
    N: float
    Nprime: float
    k: float
    m: int
    gamma: float
    coeff_kind: str
    coprime_to: int
    Q: int | None
    value: complex
    bound: float
    arcs: list | None = field(default=None, repr=False)

    @property
    def abs(self) -> float:
        return abs(self.value)

    @property
    def ratio(self) -> float:
        return self.abs / self.bound

    @property
    def sqrtN_ratio(self) -> float:
        return self.abs / math.sqrt(self.N)

    def to_json_dict(self) -> dict:
        d = {
            "params": {
                "N": self.N, "Nprime": self.Nprime, "k": self.k, "m": self.m,
                "gamma": self.gamma, "coeffs": self.coeff_kind,
                "coprime_to": self.coprime_to, "Q": self.Q,
            },
            "value": {"re": self.value.real, "im": self.value.imag},
            "abs": self.abs,
            "bound": self.bound,
            "ratio": self.ratio,
            "sqrtN_ratio": self.sqrtN_ratio,
            "arcs": None,
        }
        if self.arcs is not None:
            d["arcs"] = [{"q": q, "l": l, "re": v.real, "im": v.imag}
                         for (q, l, v) in self.arcs]
        return d


# -- coefficients ---------------------------------------------------------------

def make_coeffs(kind: str, limit: int, table=None, coprime_to: int = 1) -> np.ndarray:
    """Coefficient array indexed by n (entry 0 unused): 'unit', 'a', or 'b',
    optionally zeroed on n sharing a factor with coprime_to."""
    if kind == "unit":
        c = np.ones(limit + 1, dtype=np.float64)
        c[0] = 0.0
    elif kind in ("a", "b"):
        if table is None:
            raise DomainError(f"coefficient kind {kind!r} needs a Hecke table")
        s2 = build_sym2_coeffs(table, limit)
        c = np.array(s2.a if kind == "a" else s2.b, dtype=np.float64)
    else:
        raise DomainError(f"unknown coefficient kind {kind!r}")
    if coprime_to > 1:
        n = np.arange(limit + 1)
        for p, _ in factorize(coprime_to):
            c[n % p == 0] = 0.0
        c[0] = 0.0
    return c


def _neumaier():
    """Running compensated sum as a closure pair (add, total)."""
    state = [0.0, 0.0]

    def add(x: float):
        s, comp = state
        t = s + x
        if abs(s) >= abs(x):
            comp += (s - t) + x
        else:
            comp += (x - t) + s
        state[0], state[1] = t, comp

    def total() -> float:
        return state[0] + state[1]

    return add, total


def _chunk_partial(coeffs, f, n0, n1, conjugate):
    ns = np.arange(n0, n1, dtype=np.int64)
    fr = f.fractions(ns)
    ang = TWO_PI * fr
    w = coeffs[ns]
    re = math.fsum(w * np.cos(ang))
    im = math.fsum(w * np.sin(ang))
    return (re, -im) if conjugate else (re, im)


def direct_sum(coeffs: np.ndarray, f, N: float, Nprime: float, *,
               chunk: int = DEFAULT_CHUNK, workers=None,
               conjugate: bool = False) -> complex:
    """sum over N < n <= N' of c_n e(f(n)) (or e(-f(n)) when conjugate)."""
    if Nprime > 2.0 * N + 1e-9:
        raise DomainError(f"need N' <= 2N, got N={N}, N'={Nprime}")
    n0 = math.floor(N) + 1
    n1 = math.floor(Nprime)
    if n1 < n0:
        return 0.0 + 0.0j
    if n1 >= len(coeffs):
        raise SizeError(f"coefficient table covers n < {len(coeffs)}, need {n1}")
    spans = [(a, min(a + chunk, n1 + 1)) for a in range(n0, n1 + 1, chunk)]
    nworkers = resolve_workers(workers)
    if nworkers > 1 and len(spans) > 1:
        with ThreadPoolExecutor(max_workers=nworkers) as pool:
            partials = list(pool.map(
                lambda ab: _chunk_partial(coeffs, f, ab[0], ab[1], conjugate), spans))
    else:
        partials = [_chunk_partial(coeffs, f, a, b, conjugate) for a, b in spans]
    add_re, tot_re = _neumaier()
    add_im, tot_im = _neumaier()
    for re, im in partials:
        add_re(re)
        add_im(im)
    return complex(tot_re(), tot_im())


def arc_partition_sum(coeffs: np.ndarray, f, N: float, Nprime: float, Q: int, *,
                      chunk: int = DEFAULT_CHUNK, workers=None) -> SumReport:
    """The same sum evaluated arc by arc over the level-Q dissection.

    The projected arc intervals tile (N, N'] exactly, so up to floating
    reassociation the total must equal direct_sum.
    """
    arcs = dissect(HMap(f), Q, N, Nprime)
    breakdown = []
    add_re, tot_re = _neumaier()
    add_im, tot_im = _neumaier()
    for a in arcs:
        v = direct_sum(coeffs, f, a.x_lo, a.x_hi, chunk=chunk, workers=workers)
        breakdown.append((a.q, a.l, v))
        add_re(v.real)
        add_im(v.imag)
    total = complex(tot_re(), tot_im())
    return SumReport(
        N=N, Nprime=Nprime, k=f.k, m=f.m, gamma=f.gamma,
        coeff_kind="custom", coprime_to=1, Q=Q,
        value=total, bound=theorem_bound(N, f.value(N)), arcs=breakdown)


# -- the finite splitting identity ----------------------------------------------

def _minus_t_log_unit(ns: np.ndarray, T: float) -> np.ndarray:
    """n^{-iT} as unit complex numbers, through the reduced-phase kernel."""
    fr = kernels.minus_t_log_frac(np.ascontiguousarray(ns, dtype=np.int64), T)
    return np.exp(2j * math.pi * fr)


def splitting_identity_check(coeffs: np.ndarray, q: int, l: int, T: float,
                             interval) -> float:
    """|LHS - RHS| of the exact finite identity

        sum_{lo<n<=u} c_n e(n l/q) n^{-iT}
          = sum_{d|q} d^{-iT} sum_{chi mod q/d} (1/phi(q/d)) chi(l)
                tau(conj chi) sum_{lo/d<n<=u/d} c_{dn} chi(n) n^{-iT}.

    Both sides are evaluated independently; the ranges are resolved in
    integer arithmetic so no float boundary can put one n on different
    sides of the two evaluations.
    """
    lo, u = float(interval[0]), float(interval[1])
    if math.gcd(l, q) != 1:
        raise DomainError(f"fraction {l}/{q} is not reduced")
    n0 = math.floor(lo) + 1
    n1 = math.floor(u)
    if n1 >= len(coeffs):
        raise SizeError(f"coefficient table covers n < {len(coeffs)}, need {n1}")
    if n1 < n0:
        return 0.0

    ns = np.arange(n0, n1 + 1, dtype=np.int64)
    rat = ((l % q) * ns % q).astype(np.float64) / q
    lhs_terms = coeffs[ns] * np.exp(2j * math.pi * rat) * _minus_t_log_unit(ns, T)
    lhs = complex(math.fsum(lhs_terms.real), math.fsum(lhs_terms.imag))

    rhs = 0.0 + 0.0j
    for d in divisors(q):
        q2 = q // d
        s = (n0 + d - 1) // d
        e = n1 // d
        if e < s:
            continue
        nprime = np.arange(s, e + 1, dtype=np.int64)
        d_unit = complex(_minus_t_log_unit(np.array([d], dtype=np.int64), T)[0])
        values, tau_bar = _character_basis(q2)
        phi = values.shape[0]
        w = coeffs[d * nprime] * _minus_t_log_unit(nprime, T)
        inner = values[:, nprime % q2] @ w
        chi_l = values[:, l % q2]
        rhs += d_unit / phi * np.sum(chi_l * tau_bar * inner)
    return abs(lhs - rhs)


# -- bound sweeps -----------------------------------------------------------------

def bound_sweep(gamma: float, k_policy, N_grid, coeff_kind: str, *,
                m: int = 1, table=None, coprime_to: int = 1, eta: float = 0.01,
                chunk: int = DEFAULT_CHUNK, workers=None) -> list[SumReport]:
    """Direct sums over (N, 2N] for each N in the grid, with the ratio
    |S| / (N^(19/22) f(N)^(1/11)) recorded.

    The theorem behind that envelope is conditional and asymptotic; the
    sweep emits data only.  Grid points whose phase violates the window
    N^(1/2+eta) <= f(N) <= N^(3/2-eta) are skipped with a warning.
    """
    from .phase import PhaseFunction

    reports = []
    for N in N_grid:
        N = float(N)
        k = k_policy(N) if callable(k_policy) else float(k_policy)
        f = PhaseFunction(k=k, m=m, gamma=gamma)
        rep = check_conditions(f, N, eta)
        if not rep.window_ok:
            print(f"warning: skipping N={N}: f(N)={f.value(N):.6g} outside "
                  f"[N^{0.5 + eta}, N^{1.5 - eta}]", file=sys.stderr)
            continue
        limit = math.floor(2.0 * N)
        coeffs = make_coeffs(coeff_kind, limit, table=table, coprime_to=coprime_to)
        value = direct_sum(coeffs, f, N, 2.0 * N, chunk=chunk, workers=workers)
        reports.append(SumReport(
            N=N, Nprime=2.0 * N, k=k, m=m, gamma=gamma,
            coeff_kind=coeff_kind, coprime_to=coprime_to, Q=None,
            value=value, bound=theorem_bound(N, f.value(N))))
    return reports


def ratio_loglog_slope(reports: list[SumReport]) -> float:
    """Fitted slope of log(ratio) against log(N) -- the heuristic trend statistic."""
    if len(reports) < 2:
        raise DomainError("need at least two reports to fit a slope")
    xs = np.log([r.N for r in reports])
    ys = np.log([max(r.ratio, 1e-300) for r in reports])
    return float(np.polyfit(xs, ys, 1)[0])
