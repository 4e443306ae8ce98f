"""JIT-compiled kernels (default backend when numba is available).

Scalar double-double helpers compiled with ``@njit`` and inlined into the
array loops.  Formulas mirror ``kernels_numpy``; see there for why the
extended precision is needed at all.
"""

import math

import numpy as np
from numba import njit, prange

LN2_HI = 0.6931471805599453
LN2_LO = 2.3190468138462996e-17
INV2PI_HI = 0.15915494309189535
INV2PI_LO = -9.839338337591243e-18

_SPLIT = 134217729.0

_JIT = dict(cache=True, nogil=True)


@njit(**_JIT)
def _two_sum(a, b):
    s = a + b
    bb = s - a
    return s, (a - (s - bb)) + (b - bb)


@njit(**_JIT)
def _quick_two_sum(a, b):
    s = a + b
    return s, b - (s - a)


@njit(**_JIT)
def _two_prod(a, b):
    p = a * b
    t = _SPLIT * a
    ahi = t - (t - a)
    alo = a - ahi
    t = _SPLIT * b
    bhi = t - (t - b)
    blo = b - bhi
    return p, ((ahi * bhi - p) + ahi * blo + alo * bhi) + alo * blo


@njit(**_JIT)
def _dd_add(ah, al, bh, bl):
    sh, se = _two_sum(ah, bh)
    th, te = _two_sum(al, bl)
    se = se + th
    sh, se = _quick_two_sum(sh, se)
    se = se + te
    return _quick_two_sum(sh, se)


@njit(**_JIT)
def _dd_add_d(ah, al, b):
    sh, se = _two_sum(ah, b)
    se = se + al
    return _quick_two_sum(sh, se)


@njit(**_JIT)
def _dd_mul(ah, al, bh, bl):
    p, e = _two_prod(ah, bh)
    e = e + (ah * bl + al * bh)
    return _quick_two_sum(p, e)


@njit(**_JIT)
def _dd_mul_d(ah, al, b):
    p, e = _two_prod(ah, b)
    e = e + al * b
    return _quick_two_sum(p, e)


@njit(**_JIT)
def _dd_div_d(ah, al, b):
    q1 = ah / b
    p, pe = _two_prod(q1, b)
    q2 = ((ah - p) + (al - pe)) / b
    return _quick_two_sum(q1, q2)


@njit(**_JIT)
def _dd_exp(ah, al):
    k = math.floor(ah / LN2_HI + 0.5)
    mh, ml = _dd_mul_d(LN2_HI, LN2_LO, k)
    rh, rl = _dd_add(ah, al, -mh, -ml)
    rh *= 1.0 / 512.0
    rl *= 1.0 / 512.0
    uh = 1.0
    ul = 0.0
    for j in range(9, 1, -1):
        th, tl = _dd_mul(rh, rl, uh, ul)
        th, tl = _dd_div_d(th, tl, float(j))
        uh, ul = _dd_add_d(th, tl, 1.0)
    sh, sl = _dd_mul(rh, rl, uh, ul)
    for _ in range(9):
        qh, ql = _dd_mul(sh, sl, sh, sl)
        sh, sl = _dd_add(qh, ql, 2.0 * sh, 2.0 * sl)
    eh, el = _dd_add_d(sh, sl, 1.0)
    ki = int(k)
    return math.ldexp(eh, ki), math.ldexp(el, ki)


@njit(**_JIT)
def _dd_log(a):
    l0 = math.log(a)
    eh, el = _dd_exp(-l0, 0.0)
    ph, pl = _dd_mul_d(eh, el, a)
    dh, dl = _dd_add_d(ph, pl, -1.0)
    return _dd_add_d(dh, dl, l0)


@njit(**_JIT)
def _dd_frac(ah, al):
    # ah % 1.0 is exact for any magnitude (fmod); math.floor would overflow
    # int64 once |ah| > 2^63.  |al| can exceed 1 for huge ah, so wrap again.
    f = ah % 1.0
    s, e = _two_sum(f, al)
    s = s + e
    s = s % 1.0
    if s < 0.0:
        s += 1.0
    return s


@njit(**_JIT)
def pow_phase_frac(ns, gamma, k, m):
    out = np.empty(ns.shape[0], dtype=np.float64)
    for i in range(ns.shape[0]):
        x = float(m * ns[i])
        lh, ll = _dd_log(x)
        th, tl = _dd_mul_d(lh, ll, gamma)
        eh, el = _dd_exp(th, tl)
        wh, wl = _dd_mul_d(eh, el, k)
        out[i] = _dd_frac(wh, wl)
    return out


@njit(**_JIT)
def log_phase_frac(ns, coef):
    out = np.empty(ns.shape[0], dtype=np.float64)
    for i in range(ns.shape[0]):
        lh, ll = _dd_log(float(ns[i]))
        th, tl = _dd_mul_d(lh, ll, coef)
        out[i] = _dd_frac(th, tl)
    return out


@njit(**_JIT)
def minus_t_log_frac(ns, t):
    # accurate to ~1e-9 while |t| log(n) stays below ~1e22 (double-double
    # carries ~32 digits; beyond that the fractional part is unrecoverable)
    out = np.empty(ns.shape[0], dtype=np.float64)
    for i in range(ns.shape[0]):
        lh, ll = _dd_log(float(ns[i]))
        uh, ul = _dd_mul_d(lh, ll, -t)
        vh, vl = _dd_mul(uh, ul, INV2PI_HI, INV2PI_LO)
        out[i] = _dd_frac(vh, vl)
    return out


@njit(**_JIT)
def g_phase_frac(ns, l, q, logcoef, c_hi, c_lo):
    out = np.empty(ns.shape[0], dtype=np.float64)
    for i in range(ns.shape[0]):
        n = ns[i]
        rat = float((l * n) % q) / float(q)
        lh, ll = _dd_log(float(n))
        th, tl = _dd_mul_d(lh, ll, -logcoef)
        th, tl = _dd_add(th, tl, c_hi, c_lo)
        th, tl = _dd_add_d(th, tl, rat)
        out[i] = _dd_frac(th, tl)
    return out


@njit(**_JIT)
def pow_floor(ns, c):
    floors = np.empty(ns.shape[0], dtype=np.int64)
    dist = np.empty(ns.shape[0], dtype=np.float64)
    for i in range(ns.shape[0]):
        lh, ll = _dd_log(float(ns[i]))
        th, tl = _dd_mul_d(lh, ll, c)
        eh, el = _dd_exp(th, tl)
        f = math.floor(eh)
        r = eh - f
        t, te = _two_sum(r, el)
        t = t + te
        if t >= 1.0:
            f += 1.0
            t -= 1.0
        elif t < 0.0:
            f -= 1.0
            t += 1.0
        floors[i] = int(f)
        dist[i] = min(t, 1.0 - t)
    return floors, dist


_ETA_BLOCK = 1 << 15


@njit(cache=True, nogil=True, parallel=True)
def _eta_mult_pass(cur, offs, signs, p, out):
    # blockwise scatter: for each sparse term shift-add cur into out; the
    # contiguous inner loops vectorize, blocks parallelize.  Sums stay exact
    # in int64 (< nterms * p < 2^42); one mod at the end of the pass.
    length = cur.shape[0]
    nj = offs.shape[0]
    nblocks = (length + _ETA_BLOCK - 1) // _ETA_BLOCK
    for b in prange(nblocks):
        i0 = b * _ETA_BLOCK
        i1 = min(length, i0 + _ETA_BLOCK)
        for i in range(i0, i1):
            out[i] = 0
        for j in range(nj):
            o = offs[j]
            if o >= i1:
                break
            lo = i0 if i0 > o else o
            if signs[j] > 0:
                for i in range(lo, i1):
                    out[i] += cur[i - o]
            else:
                for i in range(lo, i1):
                    out[i] -= cur[i - o]
        for i in range(i0, i1):
            out[i] = out[i] % p


def eta_power_mod(length, offs, signs, power, p):
    """Coefficients of (sum_j signs[j] q^offs[j])^power mod p, degrees < length."""
    offs = np.asarray(offs, dtype=np.int64)
    signs = np.asarray(signs, dtype=np.int64)
    cur = np.zeros(length, dtype=np.int64)
    keep = offs < length
    cur[offs[keep]] = signs[keep]
    cur %= p
    out = np.empty(length, dtype=np.int64)
    for _ in range(power - 1):
        _eta_mult_pass(cur, offs, signs, p, out)
        cur, out = out, cur
    return cur
