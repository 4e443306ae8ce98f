"""Dirichlet characters mod q as explicit value tables, their Gauss sums,
and the expansion of additive characters over multiplicative ones.

Enumeration is by CRT: the unit group mod q is the product of the unit
groups of the prime-power factors, each of which is cyclic (odd p, via a
primitive root) or {-1, 5}-generated (2^k, k >= 3).  A character is an
exponent tuple against those generators; its values are exact roots of
unity e(a / L) with integer a, L = exponent of the group, so every table
entry is one complex exponential of an exact rational angle.
"""

import cmath
import math
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

from .arith import euler_phi, factorize
from .exceptions import DomainError, SizeError

MAX_MODULUS = 10 ** 5


@dataclass
class DirichletCharacter:
    modulus: int
    values: np.ndarray = field(repr=False)  # complex128, length q, 0 on non-units
    is_principal: bool
    index: int
    is_primitive: bool

    def __call__(self, n: int) -> complex:
        return complex(self.values[n % self.modulus])


def _primitive_root_mod_prime(p: int) -> int:
    if p == 2:
        return 1
    fac = [f for f, _ in factorize(p - 1)]
    g = 2
    while True:
        if all(pow(g, (p - 1) // f, p) != 1 for f in fac):
            return g
        g += 1


def _component_generators(p: int, a: int):
    """Generators and their orders for the unit group mod p^a."""
    pa = p ** a
    if p == 2:
        if a == 1:
            return [], []
        if a == 2:
            return [3], [2]
        return [pa - 1, 5], [2, pa // 4]
    g = _primitive_root_mod_prime(p)
    if a > 1 and pow(g, p - 1, p * p) == 1:
        g += p
    return [g], [(p - 1) * p ** (a - 1)]


def _component_dlogs(p: int, a: int, gens, orders):
    """dlog[x] = exponent tuple of x w.r.t. gens, or -1 on non-units (array per gen)."""
    pa = p ** a
    tables = [np.full(pa, -1, dtype=np.int64) for _ in gens]
    if not gens:  # trivial group: mod 1 or mod 2
        return tables
    if len(gens) == 1:
        g, d = gens[0], orders[0]
        x = 1
        for t in range(d):
            tables[0][x] = t
            x = x * g % pa
        return tables
    # 2^a, a >= 3: every unit is (-1)^s 5^t
    gm1, g5 = gens
    d5 = orders[1]
    x = 1
    for t in range(d5):
        tables[0][x] = 0
        tables[1][x] = t
        y = pa - x  # (-1) * 5^t
        tables[0][y] = 1
        tables[1][y] = t
        x = x * 5 % pa
    return tables


@lru_cache(maxsize=None)
def _group_structure(q: int):
    """(orders, scaled dlog arrays over residues mod q, L = lcm of orders)."""
    comps = factorize(q) if q > 1 else []
    gens_orders = []
    dlogs_mod_q = []
    res = np.arange(q if q > 1 else 1, dtype=np.int64)
    unit = np.ones(q if q > 1 else 1, dtype=bool)
    for p, a in comps:
        pa = p ** a
        gens, orders = _component_generators(p, a)
        tables = _component_dlogs(p, a, gens, orders)
        local = res % pa
        for tab, d in zip(tables, orders):
            dl = tab[local]
            unit &= dl >= 0
            gens_orders.append(d)
            dlogs_mod_q.append(dl)
        if not gens:  # p^a in {2}; units are odd residues
            unit &= local % 2 == 1 if p == 2 else unit
    if q == 1:
        unit[:] = True
    L = 1
    for d in gens_orders:
        L = L * d // math.gcd(L, d)
    return tuple(gens_orders), [np.where(unit, dl, 0) for dl in dlogs_mod_q], unit, L


def enumerate_characters(q: int) -> list[DirichletCharacter]:
    """All phi(q) Dirichlet characters mod q, principal first."""
    if not (1 <= q <= MAX_MODULUS):
        raise SizeError(f"modulus must be in [1, {MAX_MODULUS}], got {q}")
    orders, dlogs, unit, L = _group_structure(q)
    n_chars = 1
    for d in orders:
        n_chars *= d
    chars = []
    exps = [0] * len(orders)
    for idx in range(n_chars):
        ang = np.zeros(q if q > 1 else 1, dtype=np.int64)
        for c, d, dl in zip(exps, orders, dlogs):
            ang += (c * (L // d)) * dl
        values = np.where(unit, np.exp((2j * math.pi / L) * (ang % L)), 0.0 + 0.0j)
        chars.append(DirichletCharacter(
            modulus=q,
            values=values.astype(np.complex128),
            is_principal=all(c == 0 for c in exps),
            index=idx,
            is_primitive=False,
        ))
        # increment mixed-radix exponent tuple
        for j in range(len(exps) - 1, -1, -1):
            exps[j] += 1
            if exps[j] < orders[j]:
                break
            exps[j] = 0
    for chi in chars:
        chi.is_primitive = _is_primitive(chi)
    return chars


def _is_primitive(chi: DirichletCharacter) -> bool:
    """chi is primitive iff it is nontrivial on {a = 1 mod q/p} for every prime p | q."""
    q = chi.modulus
    if q == 1:
        return True
    for p, _ in factorize(q):
        step = q // p
        nontrivial = False
        for a in range(1 + step, q, step):
            if math.gcd(a, q) == 1 and abs(chi.values[a] - 1.0) > 1e-9:
                nontrivial = True
                break
        if not nontrivial:
            return False
    return True


def gauss_sum(chi: DirichletCharacter) -> complex:
    """tau(chi) = sum_{a mod q} chi(a) e(a/q)."""
    q = chi.modulus
    e = np.exp((2j * math.pi / q) * np.arange(q))
    return complex(np.dot(chi.values, e))


@lru_cache(maxsize=256)
def _character_basis(q: int):
    """(value matrix phi(q) x q, tau(conj chi) vector) -- cached, treat as read-only."""
    chars = enumerate_characters(q)
    values = np.vstack([c.values for c in chars])
    tau_bar = np.array([gauss_sum_conj(c) for c in chars])
    return values, tau_bar


def additive_expansion(q: int, l: int, n: int) -> complex:
    """e(n l / q) reconstructed from multiplicative characters:

        (1/phi(q)) * sum_chi chi(l) tau(conj chi) chi(n)

    (The expansion of an additive character in the character basis; requires
    gcd(l, q) = gcd(n, q) = 1.)
    """
    if math.gcd(l, q) != 1 or math.gcd(n, q) != 1:
        raise DomainError(f"need gcd(l,q)=gcd(n,q)=1, got l={l}, n={n}, q={q}")
    values, tau_bar = _character_basis(q)
    phi = values.shape[0]
    total = np.sum(values[:, l % q] * tau_bar * values[:, n % q])
    return complex(total) / phi


def gauss_sum_conj(chi: DirichletCharacter) -> complex:
    """tau(conj chi) = sum_a conj(chi(a)) e(a/q)."""
    q = chi.modulus
    e = np.exp((2j * math.pi / q) * np.arange(q))
    return complex(np.dot(np.conj(chi.values), e))


def phi_of(q: int) -> int:
    return euler_phi(q)
