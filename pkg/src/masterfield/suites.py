"""Verification suites over the bundled fixtures, shared by the CLI and the tests."""

from __future__ import annotations

import itertools
import json
import math
from collections import deque
from dataclasses import dataclass
from fractions import Fraction
from importlib import resources
from pathlib import Path

import numpy as np

from .brauer import (
    BrauerDiagram,
    compose,
    distance,
    pairings,
    swap,
    weingarten,
)
from .exppoly import parse_exppoly
from .master_field import boundary_residuals, crossings, mm_residual, phi_symbolic
from .matrix_reps import eta, eta_sign, gamma, rho, rho_h_iota
from .moment_systems import count_minimal_factorizations, finite_moments, mu_closed
from .planar_loops import MapFile, load_map


@dataclass(frozen=True)
class Case:
    suite: str
    name: str
    ok: bool
    detail: str = ""


def fixture_dir() -> Path:
    return Path(str(resources.files("masterfield") / "fixtures"))


def load_fixture(path: Path | str) -> MapFile:
    return load_map(json.loads(Path(path).read_text()))


def golden_fixtures() -> list[tuple[str, MapFile, str]]:
    """(name, map file, expected formula) for every table row, in table order."""
    out = []
    for path in sorted((fixture_dir() / "golden").glob("c*_*.json")):
        data = json.loads(path.read_text())
        out.append((path.stem, load_map(data), data["expected"]))
    return out


def table_suite() -> list[Case]:
    cases = []
    for name, mf, expected in golden_fixtures():
        got = phi_symbolic(mf.loops[0], mf.labels).expr
        ok = got == parse_exppoly(expected)
        cases.append(Case("table", name, ok, str(got)))
    return cases


def mm_suite() -> list[Case]:
    cases = []
    for name, mf, _ in golden_fixtures():
        result = phi_symbolic(mf.loops[0], mf.labels)
        for v in crossings(result):
            res = mm_residual(result, v)
            cases.append(Case("mm", f"{name} crossing v{v}", res.is_zero(), str(res)))
        for f, res in boundary_residuals(result).items():
            cases.append(Case("mm", f"{name} boundary face {f}", res.is_zero(), str(res)))
    return cases


def swap_bfs_distances(start: BrauerDiagram) -> dict[BrauerDiagram, int]:
    """Distances from ``start`` in the graph whose edges are the moves S_{a,b}."""
    n = start.n
    dist = {start: 0}
    queue = deque([start])
    while queue:
        p = queue.popleft()
        for a, b in itertools.combinations(range(1, 2 * n + 1), 2):
            q = swap(p, a, b)
            if q not in dist:
                dist[q] = dist[p] + 1
                queue.append(q)
    return dist


def brauer_suite() -> list[Case]:
    cases = []
    basis = list(pairings(3))
    bad = 0
    for a, b, c in itertools.product(basis, repeat=3):
        k1, ab = compose(a, b)
        k2, abc = compose(ab, c)
        k3, bc = compose(b, c)
        k4, abc2 = compose(a, bc)
        bad += (k1 + k2, abc) != (k3 + k4, abc2)
    cases.append(Case("brauer", "associativity B3", bad == 0, f"{len(basis) ** 3} triples, {bad} failures"))
    bad = 0
    for p in basis:
        bfs = swap_bfs_distances(p)
        bad += sum(bfs[q] != distance(p, q) for q in basis)
    cases.append(Case("brauer", "distance vs swap BFS on B3", bad == 0, f"{len(basis) ** 2} pairs, {bad} failures"))
    for kind, n_max in (("unitary", 3), ("orthogonal", 3), ("symplectic", 3)):
        for n in range(1, n_max + 1):
            wg = weingarten(kind, n, 4)
            size = len(wg.basis)
            prod = [[sum(wg.entries[i][k] * wg.gram[k][j] for k in range(size)) for j in range(size)]
                    for i in range(size)]
            ok = all(prod[i][j] == (i == j) for i in range(size) for j in range(size))
            cases.append(Case("brauer", f"Weingarten x Gram = I ({kind}, n={n}, N=4)", ok))
    return cases


def reps_suite() -> list[Case]:
    cases = []
    N = 4
    basis = list(pairings(3))
    mats = {p: rho("R", p, N) for p in basis}
    bad = 0
    for a, b in itertools.product(basis, repeat=2):
        k, d = compose(a, b)
        bad += not np.array_equal(mats[a] @ mats[b], float(N) ** k * mats[d])
    cases.append(Case("reps", "rho_R homomorphism on B3, N=4", bad == 0, f"{bad} failures"))
    basis2 = list(pairings(2))
    bad = 0
    for a, b in itertools.product(basis2, repeat=2):
        k, d = compose(a, b)
        bad += gamma(a) * gamma(b) != gamma(d).scale(Fraction(-2) ** k)
    cases.append(Case("reps", "gamma homomorphism on B2, lambda=-2", bad == 0, f"{bad} failures"))
    for N in (1, 2):
        bad = sum(not np.array_equal(rho_h_iota(p, N), eta_sign(p) * eta(p, N)) for p in basis2)
        cases.append(Case("reps", f"iota rho_H = signed eta on B2, N={N}", bad == 0, f"{bad} failures"))
    return cases


def moments_suite() -> list[Case]:
    cases = []
    for n in range(1, 7):
        for t in (0.5, 1.0, 2.0):
            got = finite_moments("limit", n, None, t)
            want = mu_closed(n, t)
            cases.append(Case("moments", f"mu_{n}({t})", abs(got - want) <= 1e-10,
                              f"{got:.15g} vs {want:.15g}"))
    for n in range(1, 6):
        for k in range(n):
            got = count_minimal_factorizations(n, k)
            want = Fraction(n) ** (k - 1) * math.comb(n, k + 1)
            cases.append(Case("moments", f"factorizations n={n} k={k}", got == want, f"{got} vs {want}"))
    return cases


SUITES = {
    "table": table_suite,
    "brauer": brauer_suite,
    "reps": reps_suite,
    "moments": moments_suite,
    "mm": mm_suite,
}
