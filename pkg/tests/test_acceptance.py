"""Acceptance criteria, one test per criterion, each printing a PASS/FAIL line."""

from __future__ import annotations

import random
import time
from collections import Counter
from fractions import Fraction

import pytest

from conftest import ACCEPTANCE_LINES
from hilbert_padic import bk
from hilbert_padic.continuation import PrimeSlope, SlopeData, bound_ledger
from hilbert_padic.dieudonne import dmod_model, enumerate_cyclic_subgroups
from hilbert_padic.errors import UndeterminedDynamics
from hilbert_padic.field import Field
from hilbert_padic.hecke import (
    ValPoint,
    canonical_sums,
    in_tower,
    random_path,
    region_classify,
    s_branch_walk,
    sample_point,
    up_image,
    vcan_radius_holds,
    weighted_sums,
)
from hilbert_padic.newton import newton_slopes
from hilbert_padic.series import TruncSeries
from hilbert_padic.windows import report_passes, window_report

F = Fraction
_FIELDS: dict = {}


def field(p, g):
    if (p, g) not in _FIELDS:
        _FIELDS[(p, g)] = Field(p, g)
    return _FIELDS[(p, g)]


def report(n: int, title: str, ok: bool, detail: str = "") -> None:
    line = f"criterion {n} ({title}): {'PASS' if ok else 'FAIL'}" + (f" [{detail}]" if detail else "")
    print(line)
    ACCEPTANCE_LINES.append(line)


# ---------------------------------------------------------------- 1

def canonical_cases(rng, count):
    cases = []
    while len(cases) < count:
        p = rng.choice([2, 3, 5])
        g = rng.choice([1, 2, 3, 4])
        e = rng.randint(1, 6)
        ew = [rng.randint(0, e) for _ in range(g)]
        w = [F(x, e) for x in ew]
        if any(w[i] + p * w[i - 1] >= p for i in range(g)):
            continue
        cases.append((p, g, e, ew))
    return cases


def test_criterion_1_canonical_subgroups():
    rng = random.Random(2024)
    t0 = time.perf_counter()
    cases = canonical_cases(rng, 120)
    covered = {(p, g) for p, g, _, _ in cases}
    bad = []
    for p, g, e, ew in cases:
        M = bk.random_adapted_module(field(p, g), g, e, e * (p + 3), ew, rng)
        res = bk.canonical_subgroup(M)
        c = res.c_degrees
        ok = all(c[i] == 1 - F(ew[i], e) for i in range(g))
        ok = ok and all(c[i] + p * c[i - 1] > 1 for i in range(g))
        resid, _ = bk.line_residuals(M, res.line.gens, res.line.prec)
        ok = ok and all(r.is_zero() for r in resid)
        if not ok:
            bad.append((p, g, e, ew))
    dt = time.perf_counter() - t0
    ok = not bad and dt < 60 and {2, 3, 5} <= {p for p, _ in covered} and len(cases) >= 100
    report(1, "canonical-subgroup suite", ok, f"{len(cases)} instances, {len(bad)} failures, {dt:.1f}s")
    assert ok, bad


# ---------------------------------------------------------------- 2

def test_criterion_2_fiber_counts():
    t0 = time.perf_counter()
    F9 = field(3, 2)
    sg = enumerate_cyclic_subgroups(dmod_model("supersingular-a1", F9, 2))
    ss = enumerate_cyclic_subgroups(dmod_model("superspecial", F9, 2))
    dt = time.perf_counter() - t0
    sg_tags = Counter((w.group_type, w.omega) for w in sg)
    ss_tags = Counter((w.stratum, w.group_type) for w in ss)
    ok = len(sg) == 10 and len(ss) == 19 and dt < 5
    ok = ok and sg_tags == {("alpha", (0, 1)): 8, ("alpha_{p^2}", (0, 1)): 1, ("alpha_{p^2}^vee", (1, 1)): 1}
    ok = ok and ss_tags == {("W_{1,1}", "alpha"): 9, ("W_{2,2}", "alpha"): 9, ("W_{B,B}", "alpha_p x alpha_p"): 1}
    # on each of the two lines exactly one omega component is nonzero; both are at the crossing
    ok = ok and all(sum(w.omega) == 1 for w in ss if w.group_type == "alpha")
    ok = ok and all(w.omega == (1, 1) for w in ss if w.stratum == "W_{B,B}")
    report(2, "fiber-count oracle", ok, f"supersingular {len(sg)}, superspecial {len(ss)}, {dt:.2f}s")
    assert ok


# ---------------------------------------------------------------- 3

ALPHA_E = 30
ALPHA_GRID = list(range(10))  # v(a') = k gives alpha = p k / e = k / 10


def spectrum_for(k: int):
    p, e = 3, ALPHA_E
    F9 = field(3, 2)
    rng = random.Random(k)
    prec = e * (p + 3)
    unit = lambda: TruncSeries.random(F9, prec, rng, 0)  # noqa: E731
    a_prime = TruncSeries.random(F9, prec, rng, k)
    M = bk.spectrum_module(F9, e, prec, 1, TruncSeries.zero(F9, prec), a_prime, unit(), unit())
    return bk.subgroup_degree_spectrum_g2(M, 1)


def trinomial_degrees(p: int, e: int, alpha: Fraction) -> Counter:
    """Degrees at the second index read off the Newton polygon of z^(p^2+1) + C z - D."""
    roots = newton_slopes([(0, e * (1 - F(1, p))), (1, e * alpha), (p * p + 1, F(0))])
    out: Counter = Counter()
    for v, m in roots:
        out[min(F(1), F(1, p) + v / e)] += m
    return out


def test_criterion_3_spectrum_matches_newton():
    p, e = 3, ALPHA_E
    bad = []
    alphas = []
    for k in ALPHA_GRID:
        spectrum_obj = spectrum_for(k)
        alphas.append(spectrum_obj.alpha)
        got = Counter()
        for vec, m in spectrum_obj.entries:
            got[vec[1]] += m
        if spectrum_obj.alpha != F(p * k, e) or got != trinomial_degrees(p, e, spectrum_obj.alpha) or sum(got.values()) != p * p + 1:
            bad.append(k)
        if spectrum_obj.case == 1:
            # the distinguished subgroup H and the other p^2 satisfy deg(H') = (1 + p - deg(H)) / p^2
            (top, m1), (rest, m2) = sorted(got.items(), reverse=True)
            if (m1, m2) != (1, p * p) or rest != (1 + p - top) / (p * p):
                bad.append(k)
    cases = {1 if a < bk.spectrum_threshold(p) else 2 for a in alphas}
    ok = not bad and cases == {1, 2}
    report(3, "degree spectrum vs Newton polygon", ok, f"{len(ALPHA_GRID)} alpha values, mismatches {bad}")
    assert ok


@pytest.mark.xfail(strict=True, reason="the relation deg_i + p deg_{i+1} = 1 fails on the spectrum; see ledger")
def test_criterion_3_relation():
    p = 3
    failing = []
    for k in ALPHA_GRID:
        spectrum_obj = spectrum_for(k)
        for vec, _ in spectrum_obj.entries:
            if not bk.ss_relation_holds(p, vec[0], vec[1]):
                failing.append((str(spectrum_obj.alpha), str(vec[0]), str(vec[1])))
    ok = not failing
    report(3, "relation deg_i + p*deg_(i+1) = 1", ok,
           f"{len(failing)} violating pairs, first {failing[:1]}" if failing else "")
    assert ok


# ---------------------------------------------------------------- 4

SAMPLES = 10_000


def too_singular_point(p: int, rng: random.Random, denom: int = 997) -> ValPoint:
    """Random point of the too-singular locus where the image law is determined."""
    kind = rng.randrange(5)
    if kind == 0:
        return ValPoint.single((F(1, p + 1),))
    if kind == 1:
        return ValPoint.single((0, 1) if rng.random() < 0.5 else (1, 0), flag="supergeneral")
    if kind == 2:
        w = F(rng.randint(1, denom), denom)
        nu = (0, 1) if rng.random() < 0.5 else (1, 0)
        wv = (1, w) if nu == (0, 1) else (w, 1)
        return ValPoint.single(nu, flag="superspecial", w=wv)
    # open edges with nu_{i+1} in [1/p, 1)
    lo = F(1, p)
    y = lo + (1 - lo) * F(rng.randrange(denom), denom)
    return ValPoint.single((0, y) if kind == 3 else (y, 0))


def test_criterion_4_dynamics_invariants():
    rng = random.Random(4)
    t0 = time.perf_counter()
    stats = Counter()
    problems = []
    for region in ("canonical", "anti-canonical", "too-singular"):
        for _ in range(SAMPLES):
            p = rng.choice([2, 3, 5])
            f = rng.choice([1, 2])
            if region == "too-singular":
                Q = too_singular_point(p, rng)
                f = Q.at(0).f
            else:
                Q = sample_point(region, p, f, rng)
            if region_classify(Q, p)[0] != region:
                problems.append(("region", Q))
                continue
            img = up_image(Q, p)
            stats["points"] += 1
            if img.size() != p ** f:
                problems.append(("size", Q))
            if region == "canonical":
                if not all(region_classify(e.point, p)[0] == "canonical" for e in img.entries):
                    problems.append(("invariance", Q))
                nu = Q.at(0).nu
                r = p + 1 - min(canonical_sums(p, nu))
                if not all(vcan_radius_holds(p, e.point.at(0).nu, r / p) for e in img.entries):
                    problems.append(("contraction", Q))
                stats["contraction"] += 1
    for _ in range(1000):
        p = rng.choice([2, 3, 5])
        f = rng.choice([1, 2])
        region = rng.choice(["canonical", "anti-canonical"])
        Q = sample_point(region, p, f, rng) if rng.random() < 0.8 else too_singular_point(p, rng)
        path = random_path(Q, p, 6, rng)
        sums = [weighted_sums(p, x.at(0).nu) for x in path]
        if not all(all(b >= a for a, b in zip(s, t)) for s, t in zip(sums, sums[1:])):
            problems.append(("monotone", Q))
        stats["paths"] += 1
    dt = time.perf_counter() - t0
    ok = not problems and dt < 60
    report(4, "dynamics invariants", ok,
           f"{stats['points']} points, {stats['paths']} paths, {len(problems)} violations, {dt:.1f}s")
    assert ok, problems[:5]


def test_criterion_4_interior_is_undetermined():
    with pytest.raises(UndeterminedDynamics):
        up_image(ValPoint.single((F(1, 2), F(1, 20))), 3)


# ---------------------------------------------------------------- 5

def test_criterion_5_superspecial_tower():
    bad = []
    for p in (2, 3, 5):
        for n in range(1, 11):
            for m in (1, 2, 5):
                for frac in (F(0), F(1, 3), F(9, 10)):
                    nh = n + frac
                    Q = ValPoint.single((0, 1), flag="superspecial", coords=(m, nh))
                    if not (in_tower((m, nh), n) and not in_tower((m, nh), n + 1)):
                        bad.append(("membership", p, m, nh))
                    walk = s_branch_walk(Q, p, n + 3)
                    for k, x in enumerate(walk[1:], start=1):
                        c = x.at(0).coords
                        if c is None:
                            break
                        if c != (m + k, nh - k):
                            bad.append(("shift", p, m, nh, k))
                        if in_tower(c, n - k) != (nh - k >= n - k) or in_tower(c, n - k + 1):
                            bad.append(("tower", p, m, nh, k))
                    # the walk stays in the superspecial disc while the second coordinate exceeds 1
                    stays = sum(1 for x in walk[1:] if x.at(0).coords is not None)
                    if stays != (n - 1 if frac == 0 else n):
                        bad.append(("stay", p, m, nh, stays))
    ok = not bad
    report(5, "superspecial tower", ok, f"{len(bad)} violations for n <= 10")
    assert ok, bad[:5]


# ---------------------------------------------------------------- 6

def test_criterion_6_continuation_ledger():
    t0 = time.perf_counter()
    bad = []
    grid = 0
    for p in (2, 3, 5):
        epss = (F(p, p + 1) + F(1, 100), (F(p, p + 1) + 1) / 2, F(99, 100))
        for k2 in range(3, 13):
            for k1 in (k2, 12):
                for eps in epss:
                    for v in range(0, k2 - 2):
                        S = SlopeData(p, (PrimeSlope(2, (k1, k2), F(v), eps),))
                        led = bound_ledger(S)
                        grid += 1
                        if not led.all_pass():
                            bad.append(("pass", p, k1, k2, v, led.failures()))
                        for e in led.entries:
                            if e.symbolic is not None and e.required and e.symbolic.coef >= 0:
                                bad.append(("symbolic", p, k2, v, e.name))
                    S = SlopeData(p, (PrimeSlope(2, (k1, k2), F(k2 - 2), eps),))
                    led = bound_ledger(S)
                    if led.all_pass() or not led.failures():
                        bad.append(("boundary", p, k1, k2))
        for k in range(2, 13):
            for num in range(0, 12 * 4 + 1):
                v = F(num, 4)
                ok1 = bound_ledger(SlopeData(p, (PrimeSlope(1, (k,), v),))).all_pass()
                if ok1 != (v < k - 1):
                    bad.append(("deg1", p, k, v))
    dt = time.perf_counter() - t0
    ok = not bad and dt < 10
    report(6, "continuation ledger", ok, f"{grid} passing cases checked, {len(bad)} problems, {dt:.1f}s")
    assert ok, bad[:5]


# ---------------------------------------------------------------- 7

def test_criterion_7_windows():
    t0 = time.perf_counter()
    bad = []
    for p in (2, 3):
        for g in (2, 4):
            for m in (1, 2):
                for n in (1, 2):
                    if not report_passes(window_report(p, g, 3, 27, m, n)):
                        bad.append((p, g, m, n))
    dt = time.perf_counter() - t0
    ok = not bad and dt < 30
    report(7, "windows verification", ok, f"16 cases, failures {bad}, {dt:.1f}s")
    assert ok


# ---------------------------------------------------------------- 8

CASES = 10_000
FIELDS8 = [(2, 1), (2, 2), (3, 2), (5, 1), (2, 4)]


def naive_product(Fd, s, t, n):
    out = [0] * n
    for i, x in enumerate(s.coeffs):
        if x:
            for j, y in enumerate(t.coeffs):
                if i + j < n and y:
                    out[i + j] = Fd.add(out[i + j], Fd.mul(x, y))
    return out


def first_nonzero(coeffs):
    return next((i for i, c in enumerate(coeffs) if c), None)


def test_criterion_8_algebra_properties():
    rng = random.Random(8)
    counts = Counter()
    bad = []
    for _ in range(CASES):
        Fd = field(*rng.choice(FIELDS8))
        n = rng.randint(4, 14)
        vs, vt = rng.randint(0, n - 1), rng.randint(0, n - 1)
        s = TruncSeries.random(Fd, n, rng, vs)
        t = TruncSeries.random(Fd, n, rng, vt)
        prod = s * t
        if vs + vt < n:
            known = prod.coeffs[: vs + vt + 1]
            if prod.val() != vs + vt or first_nonzero(naive_product(Fd, s, t, vs + vt + 1)) != vs + vt \
                    or first_nonzero(known) != vs + vt:
                bad.append(("valuation", n, vs, vt))
        counts["valuation"] += 1

        u = TruncSeries.random(Fd, n, rng, rng.randint(0, 2))
        if not ((s * u).phi().agrees(s.phi() * u.phi()) and (s + u).phi().agrees(s.phi() + u.phi())):
            bad.append(("phi", n))
        counts["phi"] += 1

        w = TruncSeries.random(Fd, n, rng, 0)
        if not (w * w.inv_unit()).agrees(TruncSeries.one(Fd, n)):
            bad.append(("inverse", n))
        counts["inverse"] += 1

    while counts["smith"] < CASES:
        p = rng.choice([2, 3])
        g = rng.choice([1, 2])
        e = rng.randint(1, 3)
        ew = [rng.randint(0, e) for _ in range(g)]
        if any(F(ew[i], e) + p * F(ew[i - 1], e) >= p for i in range(g)):
            continue
        M = bk.random_adapted_module(field(p, 2), g, e, e * (p + 3), ew, rng)
        line = bk.canonical_subgroup(M).line
        total = bk.bk_degrees(M)
        for i, (a, b) in enumerate(zip(line.degrees(), line.quotient_degrees())):
            A, B, C, D = bk.block_matrix(M, i + 1)
            vdet = (A * D - B * C).val()
            if a + b != total[i] or total[i] != F(vdet, e):
                bad.append(("smith", p, g, e, ew))
        counts["smith"] += 1
    ok = not bad and all(counts[k] >= CASES for k in ("valuation", "phi", "inverse", "smith"))
    report(8, "algebra property tests", ok, ", ".join(f"{k} {v}" for k, v in sorted(counts.items())))
    assert ok, bad[:5]
