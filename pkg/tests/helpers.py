"""Independent brute-force oracles used only by the tests.

Everything here recomputes values through a route different from the
library's own (naive polynomial products, trial division, exhaustive
enumeration), so agreement is a real check and not a tautology.
"""

import math
from fractions import Fraction


def naive_delta_expansion(limit: int) -> list:
    """tau(1..limit) by direct repeated polynomial multiplication of
    q * prod_{n>=1} (1 - q^n)^24, exact Python integers."""
    L = limit  # degrees 0..L-1 of prod (1-q^n)^24
    poly = [1] + [0] * (L - 1)
    for n in range(1, L):
        for _ in range(24):
            new = list(poly)
            for i in range(L - n):
                new[i + n] -= poly[i]
            poly = new
    return [0] + poly[:limit]  # tau[n] = coeff of q^{n-1}, shifted by the q factor


def sigma(n: int, k: int = 1) -> int:
    return sum(d ** k for d in range(1, n + 1) if n % d == 0)


def tau_by_sigma_identity(n: int) -> int:
    """Niebur's identity: tau(n) = n^4 sigma(n)
    - 24 sum_{i<n} i^2 (35 i^2 - 52 i n + 18 n^2) sigma(i) sigma(n-i)."""
    s = 0
    for i in range(1, n):
        s += i ** 2 * (35 * i ** 2 - 52 * i * n + 18 * n ** 2) * sigma(i) * sigma(n - i)
    return n ** 4 * sigma(n) - 24 * s


def trial_division_prime(p: int) -> bool:
    if p < 2:
        return False
    i = 2
    while i * i <= p:
        if p % i == 0:
            return False
        i += 1
    return True


def brute_farey_fractions(Q: int, lo: float, hi: float) -> list:
    """All reduced l/q with q <= Q in [lo, hi) by exhaustive double loop."""
    lo_f = Fraction(*float(lo).as_integer_ratio())
    hi_f = Fraction(*float(hi).as_integer_ratio())
    seen = set()
    for q in range(1, Q + 1):
        l = math.ceil(lo_f * q)
        while Fraction(l, q) < hi_f:
            if math.gcd(l, q) == 1:
                seen.add((l, q))
            l += 1
    return sorted(seen, key=lambda t: Fraction(t[0], t[1]))
