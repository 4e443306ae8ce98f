"""Farey dissection of level Q of an interval, and projection of the arcs
back to x-space through the inverse of h(x) = f'(x) + x f''(x).

All fraction handling is exact integer arithmetic: consecutive level-Q
fractions are generated by the standard neighbor recurrence (so the
unimodular relation l'q - lq' = 1 holds by construction), arc endpoints
are mediants, and interval membership is decided by exact rational
comparison against the binary value of the float bounds.

The two arcs at the interval ends are clipped.  A fraction just outside
[lo, hi) still owns an arc when its mediant boundary intrudes into the
interval; its center x0 = h^{-1}(l/q) then falls outside (N, N'] and is
clamped to the nearest endpoint.
"""

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .exceptions import BracketError, DomainError, PreconditionError, SizeError

MAX_INTERVAL = 1e3


@dataclass(frozen=True)
class FareyArc:
    q: int
    l: int
    arc_lo: float
    arc_hi: float
    x_lo: float
    x_hi: float
    x0: float
    clipped: bool  # one of the two boundary arcs

    @property
    def m1(self) -> float:
        return self.x0 - self.x_lo

    @property
    def m2(self) -> float:
        return self.x_hi - self.x0


@dataclass(frozen=True)
class HMap:
    """h(x) = f'(x) + x f''(x) for a phase with closed-form derivatives."""
    phase: object

    def h(self, x):
        return self.phase.d1(x) + x * self.phase.d2(x)

    def hprime(self, x):
        return 2.0 * self.phase.d2(x) + x * self.phase.d3(x)

    def inverse(self, y: float, bracket) -> float:
        return h_inverse(self, y, bracket)


# -- exact Farey neighbor steps ----------------------------------------------

def _next_fraction(l: int, q: int, Q: int):
    """The level-Q fraction immediately after l/q (l/q reduced, q <= Q)."""
    if q == 1:
        return l * Q + 1, Q
    inv = pow(l % q, -1, q)
    d_base = (q - inv) % q  # d with l*d = -1 (mod q)
    d = Q - (Q - d_base) % q
    return (l * d + 1) // q, d


def _prev_fraction(l: int, q: int, Q: int):
    """The level-Q fraction immediately before l/q."""
    if q == 1:
        return l * Q - 1, Q
    inv = pow(l % q, -1, q)
    d = Q - (Q - inv) % q
    return (l * d - 1) // q, d


def _first_at_or_above(x: float, Q: int):
    """Minimal reduced fraction l/q >= x with q <= Q (exact comparisons)."""
    fx = Fraction(*float(x).as_integer_ratio())
    best = None
    for q in range(1, Q + 1):
        l = math.ceil(fx * q)  # Fraction ceil is exact
        if best is None or l * best[1] < best[0] * q:
            best = (l, q)
    g = math.gcd(best[0], best[1]) or 1
    return best[0] // g, best[1] // g


def farey_fractions(Q: int, lo: float, hi: float):
    """All reduced fractions l/q, q <= Q, lo <= l/q < hi, ascending."""
    if Q < 1:
        raise DomainError(f"need Q >= 1, got {Q}")
    if not (lo < hi):
        return []
    if hi - lo > MAX_INTERVAL:
        raise SizeError(f"interval length {hi - lo} exceeds {MAX_INTERVAL}")
    hi_frac = Fraction(*float(hi).as_integer_ratio())
    out = []
    l, q = _first_at_or_above(lo, Q)
    if Fraction(l, q) >= hi_frac:
        return []
    out.append((l, q))
    l2, q2 = _next_fraction(l, q, Q)
    while Fraction(l2, q2) < hi_frac:
        out.append((l2, q2))
        k = (Q + q) // q2
        l, q, l2, q2 = l2, q2, k * l2 - l, k * q2 - q
    return out


# -- root finding --------------------------------------------------------------

def h_inverse(hmap: HMap, y: float, bracket) -> float:
    """x in [bracket] with h(x) = y: 60 bisections, then <= 5 Newton polish steps."""
    a, b = float(bracket[0]), float(bracket[1])
    fa = hmap.h(a) - y
    fb = hmap.h(b) - y
    if fa == 0.0:
        return a
    if fb == 0.0:
        return b
    if (fa > 0) == (fb > 0):
        raise BracketError(f"y={y} not bracketed by h on [{a}, {b}]")
    lo_x, hi_x = a, b
    for _ in range(60):
        mid = 0.5 * (lo_x + hi_x)
        if mid == lo_x or mid == hi_x:
            break
        fm = hmap.h(mid) - y
        if fm == 0.0:
            return mid
        if (fm > 0) == (fa > 0):
            lo_x = mid
        else:
            hi_x = mid
    x = 0.5 * (lo_x + hi_x)
    best_x, best_err = x, abs(hmap.h(x) - y)
    for _ in range(5):
        hp = hmap.hprime(x)
        if hp == 0.0:
            break
        x = x - (hmap.h(x) - y) / hp
        if not (a <= x <= b):
            break
        err = abs(hmap.h(x) - y)
        if err < best_err:
            best_x, best_err = x, err
    return best_x


# -- dissection -----------------------------------------------------------------

def _check_monotone(hmap, N, Nprime):
    xs = np.geomspace(N, Nprime, 65)
    hp = hmap.hprime(xs)
    if np.all(hp < 0.0):
        return False  # decreasing -> h(N) > h(N')
    if np.all(hp > 0.0):
        return True
    raise PreconditionError(f"h is not monotone on [{N}, {Nprime}]")


def dissect(hmap: HMap, Q: int, N: float, Nprime: float):
    """Arcs of the level-Q Farey dissection of [min(h(N),h(N')), max(...)),
    projected back to x so the x-intervals (x_lo, x_hi] tile (N, N']."""
    if not (N < Nprime <= 2.0 * N):
        raise DomainError(f"need N < N' <= 2N, got N={N}, N'={Nprime}")
    if not (1 <= Q <= N):
        raise DomainError(f"need 1 <= Q <= N, got Q={Q}")
    increasing = _check_monotone(hmap, N, Nprime)
    hN = hmap.h(N)
    hNp = hmap.h(Nprime)
    lo, hi = (hN, hNp) if increasing else (hNp, hN)

    inner = farey_fractions(Q, lo, hi)
    if inner:
        fracs = [_prev_fraction(*inner[0], Q)] + inner + [_next_fraction(*inner[-1], Q)]
    else:
        above = _first_at_or_above(lo, Q)
        fracs = [_prev_fraction(*above, Q), above]

    # mediant boundaries between consecutive fractions, exact then floated
    mediants = []
    for (l1, q1), (l2, q2) in zip(fracs, fracs[1:]):
        assert l2 * q1 - l1 * q2 == 1, "non-consecutive Farey fractions"
        mediants.append((l1 + l2) / (q1 + q2))

    lo_f = Fraction(*float(lo).as_integer_ratio())
    hi_f = Fraction(*float(hi).as_integer_ratio())

    # seam list in h-space: lo, interior mediants, hi; arc i owned by fracs[i]
    arcs_h = []
    for i, (l, q) in enumerate(fracs):
        left = lo if i == 0 else mediants[i - 1]
        right = hi if i == len(fracs) - 1 else mediants[i]
        left = max(left, lo)
        right = min(right, hi)
        if left < right:
            arcs_h.append((l, q, left, right))

    # project seams once (shared floats guarantee exact tiling)
    seam_ys = [arcs_h[0][2]] + [a[3] for a in arcs_h]
    seam_xs = []
    for j, y in enumerate(seam_ys):
        if j == 0:
            seam_xs.append(N if increasing else Nprime)
        elif j == len(seam_ys) - 1:
            seam_xs.append(Nprime if increasing else N)
        else:
            seam_xs.append(h_inverse(hmap, y, (N, Nprime)))

    out = []
    for i, (l, q, a_lo, a_hi) in enumerate(arcs_h):
        xa, xb = seam_xs[i], seam_xs[i + 1]
        x_lo, x_hi = (xa, xb) if increasing else (xb, xa)
        y0 = Fraction(l, q)
        if y0 < lo_f:
            x0 = Nprime if not increasing else N
            clipped = True
        elif y0 >= hi_f:
            x0 = N if not increasing else Nprime
            clipped = True
        else:
            x0 = h_inverse(hmap, l / q, (N, Nprime))
            clipped = i == 0 or i == len(arcs_h) - 1
        out.append(FareyArc(q=q, l=l, arc_lo=float(a_lo), arc_hi=float(a_hi),
                            x_lo=float(x_lo), x_hi=float(x_hi), x0=float(x0),
                            clipped=clipped))
    return out
