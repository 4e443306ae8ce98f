"""Vectorized pure-numpy kernels (fallback backend).

Same double-double (~31 significant digits) formulas as the numba backend,
expressed as whole-array operations.  A double-double value is a pair of
float64 arrays (hi, lo) with hi = fl(hi + lo).

The extended precision matters because the sums need frac(f(n)) where
f(n) can reach 1e12: plain float64 has already lost the fractional part
there, while a double-double carries it to ~1e-17 absolute.
"""

import numpy as np

LN2_HI = 0.6931471805599453
LN2_LO = 2.3190468138462996e-17
INV2PI_HI = 0.15915494309189535
INV2PI_LO = -9.839338337591243e-18

_SPLIT = 134217729.0  # 2^27 + 1 (Dekker)


# -- error-free transforms ------------------------------------------------

def _two_sum(a, b):
    s = a + b
    bb = s - a
    err = (a - (s - bb)) + (b - bb)
    return s, err


def _quick_two_sum(a, b):
    # requires |a| >= |b|
    s = a + b
    err = b - (s - a)
    return s, err


def _two_prod(a, b):
    p = a * b
    t = _SPLIT * a
    ahi = t - (t - a)
    alo = a - ahi
    t = _SPLIT * b
    bhi = t - (t - b)
    blo = b - bhi
    err = ((ahi * bhi - p) + ahi * blo + alo * bhi) + alo * blo
    return p, err


# -- double-double arithmetic ---------------------------------------------

def dd_add(ah, al, bh, bl):
    sh, se = _two_sum(ah, bh)
    th, te = _two_sum(al, bl)
    se = se + th
    sh, se = _quick_two_sum(sh, se)
    se = se + te
    return _quick_two_sum(sh, se)


def dd_add_d(ah, al, b):
    sh, se = _two_sum(ah, b)
    se = se + al
    return _quick_two_sum(sh, se)


def dd_mul(ah, al, bh, bl):
    p, e = _two_prod(ah, bh)
    e = e + (ah * bl + al * bh)
    return _quick_two_sum(p, e)


def dd_mul_d(ah, al, b):
    p, e = _two_prod(ah, b)
    e = e + al * b
    return _quick_two_sum(p, e)


def dd_div_d(ah, al, b):
    q1 = ah / b
    p, pe = _two_prod(q1, b)
    rh = ah - p
    rl = al - pe
    q2 = (rh + rl) / b
    return _quick_two_sum(q1, q2)


# -- exp / log -------------------------------------------------------------

def dd_exp(ah, al):
    """exp of a double-double array; |a| bounded by ~700 but intended for |a| <= 60."""
    k = np.floor(ah / LN2_HI + 0.5)
    mh, ml = dd_mul_d(LN2_HI, LN2_LO, k)
    rh, rl = dd_add(ah, al, -mh, -ml)
    # r in [-ln2/2, ln2/2]; scale to r/512 and run the expm1 Taylor series
    rh = rh * (1.0 / 512.0)
    rl = rl * (1.0 / 512.0)
    uh = np.ones_like(rh)
    ul = np.zeros_like(rh)
    for j in range(9, 1, -1):
        th, tl = dd_mul(rh, rl, uh, ul)
        th, tl = dd_div_d(th, tl, float(j))
        uh, ul = dd_add_d(th, tl, 1.0)
    sh, sl = dd_mul(rh, rl, uh, ul)  # expm1(r/512)
    for _ in range(9):  # expm1(2x) = expm1(x)^2 + 2 expm1(x)
        qh, ql = dd_mul(sh, sl, sh, sl)
        sh, sl = dd_add(qh, ql, 2.0 * sh, 2.0 * sl)
    eh, el = dd_add_d(sh, sl, 1.0)
    ki = k.astype(np.int32)
    return np.ldexp(eh, ki), np.ldexp(el, ki)


def dd_log(a):
    """log of a positive float64 array, to double-double accuracy."""
    l0 = np.log(a)
    eh, el = dd_exp(-l0, np.zeros_like(l0))
    ph, pl = dd_mul_d(eh, el, a)        # a * exp(-l0) = 1 + delta
    dh, dl = dd_add_d(ph, pl, -1.0)     # one Newton step: log a = l0 + delta + O(delta^2)
    return dd_add_d(dh, dl, l0)


def dd_frac(ah, al):
    """Fractional part in [0, 1) of a double-double array, as float64.

    |al| can exceed 1 when ah is huge (ulp(ah)/2 grows with ah), so the
    collapsed value is wrapped with an exact mod rather than one conditional.
    """
    f = np.mod(ah, 1.0)
    s, e = _two_sum(f, al)
    s = s + e
    s = np.mod(s, 1.0)
    s = np.where(s < 0.0, s + 1.0, s)
    return s


# -- phase kernels ----------------------------------------------------------

def pow_phase_frac(ns, gamma, k, m):
    """frac(k * (m*n)^gamma) for an int64 array of n."""
    x = (m * ns).astype(np.float64)
    lh, ll = dd_log(x)
    th, tl = dd_mul_d(lh, ll, gamma)
    eh, el = dd_exp(th, tl)
    wh, wl = dd_mul_d(eh, el, k)
    return dd_frac(wh, wl)


def log_phase_frac(ns, coef):
    """frac(coef * ln n)."""
    x = ns.astype(np.float64)
    lh, ll = dd_log(x)
    th, tl = dd_mul_d(lh, ll, coef)
    return dd_frac(th, tl)


def minus_t_log_frac(ns, t):
    """frac(-T ln n / (2 pi)); e(of this) is n^{-iT}."""
    x = ns.astype(np.float64)
    lh, ll = dd_log(x)
    uh, ul = dd_mul_d(lh, ll, -t)
    vh, vl = dd_mul(uh, ul, np.full_like(uh, INV2PI_HI), np.full_like(uh, INV2PI_LO))
    return dd_frac(vh, vl)


def g_phase_frac(ns, l, q, logcoef, c_hi, c_lo):
    """frac(g(n)) for g(x) = (l/q) x - logcoef * ln x + C.

    The rational part is reduced exactly in integer arithmetic; the log
    part and the constant run through the double-double pipeline.
    """
    rat = ((l * ns) % q).astype(np.float64) / float(q)
    x = ns.astype(np.float64)
    lh, ll = dd_log(x)
    th, tl = dd_mul_d(lh, ll, -logcoef)
    th, tl = dd_add(th, tl, np.full_like(th, c_hi), np.full_like(th, c_lo))
    th, tl = dd_add(th, tl, rat, np.zeros_like(rat))
    return dd_frac(th, tl)


def pow_floor(ns, c):
    """(floor(n^c), distance of n^c to the nearest integer) for int64 n."""
    x = ns.astype(np.float64)
    lh, ll = dd_log(x)
    th, tl = dd_mul_d(lh, ll, c)
    eh, el = dd_exp(th, tl)
    f = np.floor(eh)
    r = eh - f
    t, te = _two_sum(r, el)
    t = t + te
    up = t >= 1.0
    f = np.where(up, f + 1.0, f)
    t = np.where(up, t - 1.0, t)
    dn = t < 0.0
    f = np.where(dn, f - 1.0, f)
    t = np.where(dn, t + 1.0, t)
    return f.astype(np.int64), np.minimum(t, 1.0 - t)


# -- eta-product convolution -------------------------------------------------

def eta_power_mod(length, offs, signs, power, p):
    """Coefficients of (sum_j signs[j] q^offs[j])^power mod p, degrees < length.

    Sparse multiplication repeated power-1 times; the accumulator stays in
    int64 (|acc| < nterms * p < 2^42, exact) with a single mod per pass.
    """
    cur = np.zeros(length, dtype=np.int64)
    cur[offs[offs < length]] = np.asarray(signs)[offs < length]
    cur %= p
    for _ in range(power - 1):
        acc = np.zeros(length, dtype=np.int64)
        for o, s in zip(offs, signs):
            if o >= length:
                break
            if s > 0:
                acc[o:] += cur[:length - o]
            else:
                acc[o:] -= cur[:length - o]
        cur = acc % p
    return cur
