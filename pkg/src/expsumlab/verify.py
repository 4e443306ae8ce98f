"""The `verify` battery: re-runs the exact identities and structural
invariants the library is built around, printing one deterministic status
line per check.  Used by the CLI; the test suite asserts the same facts
(and more) through pytest.

Output lines are free of timing and machine state on purpose: a verify run
with the same configuration must be byte-identical regardless of worker
count.
"""

import math
from dataclasses import dataclass

import numpy as np

from . import characters, expsum, farey, hecke, psprimes
from .arith import euler_phi, primes_up_to
from .backend import BACKEND
from .phase import PhaseFunction, build_g, check_conditions


@dataclass
class CheckResult:
    name: str
    ok: bool
    detail: str


def _hecke_checks(limit: int) -> list[CheckResult]:
    out = []
    table = hecke.build_tau_table(limit)
    prime_tau = {int(p): table.tau[int(p)] for p in primes_up_to(limit)}
    rec = hecke.tau_table_by_recursion(prime_tau, limit)
    out.append(CheckResult(
        "hecke.eta_vs_recursion", rec == table.tau, f"n<={limit}"))

    worst = 0.0
    for n in range(2, limit + 1):
        for m in range(2, n + 1):
            if m * n > limit:
                break
            if math.gcd(m, n) == 1:
                worst = max(worst, hecke.check_mult_identity(table, m, n))
    out.append(CheckResult(
        "hecke.mult_identity", worst < 1e-12, f"max_dev={worst:.3e}"))

    bad = hecke.deligne_violations(table)
    out.append(CheckResult(
        "hecke.deligne_bound", not bad, f"primes<={limit} violations={len(bad)}"))

    worst = 0.0
    for p in primes_up_to(math.isqrt(limit)):
        lam_p = table.lam[p]
        lam_p2 = table.lam[p * p]
        worst = max(worst, abs(lam_p * lam_p - 1.0 - lam_p2))
    out.append(CheckResult(
        "hecke.lambda_p_squared", worst < 1e-12,
        f"p<={math.isqrt(limit)} max_dev={worst:.3e}"))
    return out


def _character_checks(qmax: int) -> list[CheckResult]:
    out = []
    worst_count = True
    worst_orth = 0.0
    worst_gauss = 0.0
    worst_add = 0.0
    for q in range(1, qmax + 1):
        chars = characters.enumerate_characters(q)
        worst_count &= len(chars) == euler_phi(q)
        V = np.vstack([c.values for c in chars])
        gram = V @ V.conj().T
        worst_orth = max(worst_orth, float(np.max(np.abs(
            gram - euler_phi(q) * np.eye(len(chars))))))
        for c in chars:
            if c.is_primitive:
                worst_gauss = max(worst_gauss,
                                  abs(abs(characters.gauss_sum(c)) - math.sqrt(q)))
        for lv in range(1, q + 1):
            if math.gcd(lv, q) != 1:
                continue
            for nv in range(1, q + 1):
                if math.gcd(nv, q) != 1:
                    continue
                dev = abs(characters.additive_expansion(q, lv, nv)
                          - np.exp(2j * math.pi * nv * lv / q))
                worst_add = max(worst_add, dev)
    out.append(CheckResult("characters.count_phi", worst_count, f"q<={qmax}"))
    out.append(CheckResult("characters.orthogonality", worst_orth < 1e-9,
                           f"max_dev={worst_orth:.3e}"))
    out.append(CheckResult("characters.gauss_magnitude", worst_gauss < 1e-10,
                           f"max_dev={worst_gauss:.3e}"))
    out.append(CheckResult("characters.additive_expansion", worst_add < 1e-9,
                           f"max_dev={worst_add:.3e}"))
    return out


def _farey_checks(Qs, N: float = 1e4) -> list[CheckResult]:
    out = []
    f = PhaseFunction(k=1.0, m=1, gamma=1.0 / 1.03)
    hm = farey.HMap(f)
    Nprime = 2.0 * N
    uni_ok = True
    seam_worst = 0.0
    terms_ok = True
    g_worst = 0.0
    for Q in Qs:
        arcs = farey.dissect(hm, Q, N, Nprime)
        for a1, a2 in zip(arcs, arcs[1:]):
            uni_ok &= a2.l * a1.q - a1.l * a2.q == 1
            seam_worst = max(seam_worst, abs(a1.arc_hi - a2.arc_lo))
        lo, hi = min(hm.h(N), hm.h(Nprime)), max(hm.h(N), hm.h(Nprime))
        seam_worst = max(seam_worst, abs(arcs[0].arc_lo - lo), abs(arcs[-1].arc_hi - hi))
        total = sum(math.floor(a.x_hi) - math.floor(a.x_lo) for a in arcs)
        terms_ok &= total == math.floor(Nprime) - math.floor(N)
        for a in arcs:
            if not a.clipped or (min(hm.h(N), hm.h(Nprime)) <= a.l / a.q
                                 < max(hm.h(N), hm.h(Nprime))):
                g = build_g(f, a.l, a.q, a.x0)
                g_worst = max(
                    g_worst,
                    abs(g.g(a.x0) - f.value(a.x0)) / max(1.0, abs(f.value(a.x0))),
                    abs(g.gprime(a.x0) - f.d1(a.x0)) / max(1e-30, abs(f.d1(a.x0))),
                    abs(g.gsecond(a.x0) - f.d2(a.x0)) / max(1e-30, abs(f.d2(a.x0))))
    out.append(CheckResult("farey.unimodular", uni_ok, f"Q in {list(Qs)}"))
    out.append(CheckResult("farey.partition_seams", seam_worst < 1e-9,
                           f"max_seam_gap={seam_worst:.3e}"))
    out.append(CheckResult("farey.term_conservation", terms_ok, f"N={N:g}"))
    out.append(CheckResult("phase.g_matching", g_worst < 1e-10,
                           f"max_rel_dev={g_worst:.3e}"))
    return out


def _phase_condition_check(seed: int) -> CheckResult:
    f = PhaseFunction(k=1.0, m=1, gamma=1.0 / 1.03)
    rep = check_conditions(f, 1e4, 0.01, seed=seed)
    return CheckResult("phase.conditions", rep.all_ok,
                       f"doubling_ratio={rep.measured['doubling_ratio']:.6f}")


def _partition_vs_direct(workers, limit: int = 20000) -> CheckResult:
    table = hecke.build_tau_table(limit)
    coeffs = expsum.make_coeffs("b", limit, table=table)
    f = PhaseFunction(k=1.0, m=1, gamma=1.0 / 1.03)
    direct = expsum.direct_sum(coeffs, f, limit / 2.0, float(limit), workers=workers)
    rep = expsum.arc_partition_sum(coeffs, f, limit / 2.0, float(limit), 40,
                                   workers=workers)
    dev = abs(rep.value - direct)
    return CheckResult("expsum.partition_vs_direct", dev < 1e-6,
                       f"dev={dev:.3e} arcs={len(rep.arcs)}")


def _splitting_grid(qmax: int, table) -> CheckResult:
    limit = 600
    kinds = {
        "unit": expsum.make_coeffs("unit", limit),
        "a": expsum.make_coeffs("a", limit, table=table),
        "b": expsum.make_coeffs("b", limit, table=table),
    }
    f = PhaseFunction(k=1.0, m=1, gamma=1.0 / 1.03)
    # the arc-center T of an arc containing the test interval (the identity
    # holds for every real T; this is the canonical choice)
    x0 = 150.0
    t_arc = 2.0 * math.pi * x0 * x0 * f.d2(x0)
    worst = 0.0
    cases = 0
    for q in range(1, qmax + 1):
        for l in range(0 if q == 1 else 1, q + 1):
            if math.gcd(l, q) != 1:
                continue
            for T in (0.0, 17.3, t_arc):
                for coeffs in kinds.values():
                    dev = expsum.splitting_identity_check(coeffs, q, l, T, (50, 250))
                    worst = max(worst, dev)
                    cases += 1
    tol = 1e-7 * 200
    return CheckResult("expsum.splitting_identity", worst < tol,
                       f"q<={qmax} cases={cases} max_dev={worst:.3e}")


def _psprimes_check(table) -> CheckResult:
    run = psprimes.ps_enumerate(1.02, 2000)
    rep = psprimes.theorem3_report(run, table)
    sc = psprimes.sign_change_count(run, table)
    ok = rep.identity_dev < 1e-9 * rep.count and sc > 0
    return CheckResult("psprimes.identity_and_signs", ok,
                       f"count={rep.count} identity_dev={rep.identity_dev:.3e} "
                       f"sign_changes={sc}")


def run_verify(quick: bool = False, workers=None, seed: int = 0, out=None) -> int:
    """Run the battery; print one line per check; return 0 (all ok) or 1."""
    import sys
    if out is None:
        out = sys.stdout
    mode = "quick" if quick else "full"
    print(f"verify: mode={mode} backend={BACKEND} seed={seed}", file=out)

    hecke_limit = 2000 if quick else 10 ** 4
    char_qmax = 50 if quick else 200
    farey_Qs = (5, 20) if quick else (5, 20, 80)
    split_qmax = 6 if quick else 12

    results = []
    results += _hecke_checks(hecke_limit)
    results += _character_checks(char_qmax)
    results += _farey_checks(farey_Qs)
    results.append(_phase_condition_check(seed))
    results.append(_partition_vs_direct(workers))
    table = hecke.build_tau_table(8000)
    results.append(_splitting_grid(split_qmax, table))
    results.append(_psprimes_check(table))

    failures = [r for r in results if not r.ok]
    for r in results:
        status = "ok" if r.ok else "FAIL"
        print(f"{status} {r.name} {r.detail}", file=out)
    if failures:
        print(f"verify: FAIL ({len(failures)} of {len(results)}; "
              f"first: {failures[0].name})", file=out)
        return 1
    print(f"verify: PASS ({len(results)} checks)", file=out)
    return 0
