"""Acceptance criteria, one test per criterion; each prints a PASS/FAIL line."""

import math
import time
from fractions import Fraction

import pytest

from masterfield.exppoly import parse_exppoly
from masterfield.master_field import (
    boundary_residuals,
    clear_memo,
    crossings,
    finite_N_bound,
    loop_word,
    mm_residual,
    phi_finite_N,
    phi_symbolic,
)
from masterfield.planar_loops import (
    CROSSING,
    amperean_areas,
    crossing_skein,
    crossing_taxonomy,
    dual_tree,
    generic_form,
    ingest_polyline,
    int_det,
    kazakov_data,
    lasso_express,
    mat_mul,
    minimal_with_faces,
    mm_operator,
    rank,
    winding,
)
from masterfield.suites import brauer_suite, reps_suite
from masterfield.moment_systems import count_minimal_factorizations, finite_moments, mu_closed

from conftest import POLYLINES, read_points


@pytest.fixture
def report(capsys):
    def emit(number, ok, detail):
        with capsys.disabled():
            print(f"\n{'PASS' if ok else 'FAIL'} criterion {number}: {detail}")
        return ok
    return emit


def polyline_loops():
    """(name, loop, labels, areas by label) for every polyline fixture."""
    out = []
    for path in POLYLINES:
        ing = ingest_polyline(read_points(path))
        labels = {f: f"F{f}" for f in ing.loop.map.bounded_faces}
        out.append((path.stem, ing.loop, labels, {labels[f]: a for f, a in ing.areas.items()}))
    return out


def fixture_loops(golden):
    out = [(name, mf.loops[0], mf.labels) for name, mf, _ in golden]
    out += [(name, loop, labels) for name, loop, labels, _ in polyline_loops()]
    return out


def test_criterion_1_golden_table(golden, report):
    clear_memo()
    start = time.perf_counter()
    bad = [name for name, mf, expected in golden
           if phi_symbolic(mf.loops[0], mf.labels).expr != parse_exppoly(expected)]
    elapsed = time.perf_counter() - start
    ok = not bad and len(golden) == 28 and elapsed < 30
    assert report(1, ok, f"{28 - len(bad)}/28 exact matches in {elapsed:.2f}s {bad or ''}")


def test_criterion_2_limit_moments(report):
    start = time.perf_counter()
    worst = max(abs(finite_moments("limit", n, None, t) - mu_closed(n, t))
                for n in range(1, 7) for t in (0.5, 1.0, 2.0))
    elapsed = time.perf_counter() - start
    ok = worst <= 1e-10 and elapsed < 5
    assert report(2, ok, f"max |mu_n - closed form| = {worst:.2e} over n <= 6 in {elapsed:.2f}s")


def _figure_eight(golden):
    name, mf, _ = next(g for g in golden if g[0] == "c1_02")
    inv = {v: f for f, v in mf.labels.items()}
    return mf.loops[0], lambda s, t: {inv["s"]: s, inv["t"]: t}


POINTS = [(0.7, 0.3), (1.0, 1.0)]
SIZES = [2, 3, 4, 8]


def test_criterion_3_unitary_closed_form(golden, report):
    loop, areas = _figure_eight(golden)
    worst = 0.0
    for N in SIZES:
        for s, t in POINTS:
            want = math.exp(-s / 2 - t) * (math.cosh(t / N) - N * math.sinh(t / N))
            worst = max(worst, abs(phi_finite_N(loop, "C", N, areas(s, t)) - want))
    assert report(3, worst <= 1e-9, f"unitary figure-eight, max error {worst:.2e}")


def printed_orthogonal(N, s, t):
    return math.exp(-s / 2 - t) * (
        math.exp(t / N) * (math.cosh(t / N) - N * math.sinh(t / N))
        + 4 / (3 * N - 1) * math.exp((1 - 1 / (2 * N)) * s) * (1 - math.exp((1.5 - 1 / (2 * N)) * t)))


def derived_orthogonal(N, s, t):
    return math.exp(-(1 - 1 / N) * s / 2 - t) * (
        math.exp(t / N) * (math.cosh(t / N) - N * math.sinh(t / N)) + math.expm1(t) / N)


@pytest.mark.xfail(strict=True, reason="the printed orthogonal formula is not the solution of its own system")
def test_criterion_3_printed_orthogonal_formula(golden, report):
    loop, areas = _figure_eight(golden)
    worst = max(abs(phi_finite_N(loop, "R", N, areas(s, t)) - printed_orthogonal(N, s, t))
                for N in SIZES for s, t in POINTS)
    assert report(3, worst <= 1e-9, f"printed orthogonal figure-eight formula, max error {worst:.2e}")


def test_criterion_3_orthogonal_rederived(golden, report):
    loop, areas = _figure_eight(golden)
    worst = 0.0
    for N in SIZES:
        for s, t in POINTS:
            worst = max(worst, abs(phi_finite_N(loop, "R", N, areas(s, t)) - derived_orthogonal(N, s, t)))
            # quaternionic case at -2N
            worst = max(worst, abs(phi_finite_N(loop, "H", N, areas(s, t)) - derived_orthogonal(-2 * N, s, t)))
    assert report(3, worst <= 1e-9, f"re-derived orthogonal/symplectic figure-eight, max error {worst:.2e}")


def test_criterion_4_convergence_bound(golden, report):
    cases = []
    for name, mf, _ in golden:
        names = sorted(set(mf.labels.values()))
        cases.append((name, mf.loops[0], mf.labels, {v: 0.2 + 0.15 * k for k, v in enumerate(names)}))
    for name, loop, labels, areas in polyline_loops():
        total = sum(areas.values())
        cases.append((name, loop, labels, {v: float(a / total) for v, a in areas.items()}))
    checked, violations = 0, []
    for name, loop, labels, values in cases:
        word, _, _ = loop_word(loop)
        if len(word) > 4:
            continue
        exact = phi_symbolic(loop, labels).evaluate(values)
        by_face = {f: values[v] for f, v in labels.items()}
        for N in (2, 5, 10, 100):
            gap = abs(phi_finite_N(loop, "C", N, by_face) - exact)
            checked += 1
            if gap > finite_N_bound(loop, "C", N, by_face):
                violations.append((name, N))
    ok = checked > 0 and not violations
    assert report(4, ok, f"{checked} (loop, N) pairs checked, {len(violations)} violations {violations or ''}")


def test_criterion_5_makeenko_migdal(golden, report):
    crossing_checks = boundary_checks = 0
    bad = []
    for name, loop, labels in fixture_loops(golden):
        result = phi_symbolic(loop, labels)
        for v in crossings(result):
            crossing_checks += 1
            if not mm_residual(result, v).is_zero():
                bad.append((name, v))
        for f, res in boundary_residuals(result).items():
            boundary_checks += 1
            if not res.is_zero():
                bad.append((name, f"face {f}"))
    ok = not bad and crossing_checks > 0
    assert report(5, ok, f"{crossing_checks} crossing residuals and {boundary_checks} boundary identities, "
                         f"{len(bad)} nonzero {bad or ''}")


def test_criterion_6_brauer_suites(report):
    start = time.perf_counter()
    cases = brauer_suite() + reps_suite()
    elapsed = time.perf_counter() - start
    bad = [c.name for c in cases if not c.ok]
    ok = not bad and elapsed < 60
    assert report(6, ok, f"{len(cases) - len(bad)}/{len(cases)} Brauer and representation suites "
                         f"in {elapsed:.2f}s {bad or ''}")


def test_criterion_7_minimal_factorizations(report):
    bad = [(n, k) for n in range(1, 6) for k in range(n)
           if count_minimal_factorizations(n, k) != Fraction(n) ** (k - 1) * math.comb(n, k + 1)]
    assert report(7, not bad, f"brute-force counts for n <= 5, all k < n, {len(bad)} mismatches")


def test_criterion_8_kazakov_structure(golden, report):
    bad = []
    skeins = 0
    for name, loop, _ in fixture_loops(golden):
        g = generic_form(loop)[0]
        labels, _ = crossing_taxonomy([g])
        if any(lab == CROSSING for lab in labels.values()):
            kd = kazakov_data(g)
            q = len(kd.faces)
            if mat_mul(kd.nmat, kd.incmat) != tuple(tuple(int(i == j) for j in range(q)) for i in range(q)):
                bad.append((name, "Nmat IncMat"))
            if abs(int_det(kd.nmat)) != 1:
                bad.append((name, "det"))
        size = len(g.map.faces)
        for skein in [[g]] + [list(crossing_skein(g, v)) for v, lab in labels.items() if lab == CROSSING]:
            skeins += 1
            mat = mm_operator(skein)
            vectors = [[1] * size] + [[winding(l)[0][f] for f in range(size)] for l in skein]
            in_kernel = all(sum(r[j] * vec[j] for j in range(size)) == 0 for r in mat for vec in vectors)
            if not in_kernel or size - rank(mat) != len(skein) + 1 or rank(vectors) != len(skein) + 1:
                bad.append((name, "kernel"))
    assert report(8, not bad, f"Kazakov inverse pair and MM-operator kernel on {skeins} skeins, "
                              f"{len(bad)} failures {bad or ''}")


def test_criterion_9_geometry(report):
    bad = []
    for path in POLYLINES:
        ing = ingest_polyline(read_points(path))
        _, abar = amperean_areas(ing.loop, ing.areas)
        if not abar <= ing.polyline.length() ** 2 / (4 * math.pi):
            bad.append((path.stem, "isoperimetric"))
        g, _ = minimal_with_faces(ing.loop)
        lw = lasso_express(g.map, dual_tree(g.map), g)
        _, nbar = winding(g)
        if [lw.raw.count(k + 1) for k in range(len(lw.faces))] != [nbar[f] for f in lw.faces]:
            bad.append((path.stem, "lasso counts"))
    ok = len(POLYLINES) == 10 and not bad
    assert report(9, ok, f"{len(POLYLINES)} polylines, isoperimetric bound and lasso letter counts, "
                         f"{len(bad)} failures {bad or ''}")
