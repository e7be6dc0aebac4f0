"""The master field Phi on planar loops.

``phi_symbolic`` runs the Kazakov recursion exactly: a loop with no
self-crossing has ``Phi = exp(-1/2 * area enclosed)``; otherwise the
gradient of ``Phi`` in the Kazakov coordinates is known from smaller
loops, and ``Phi`` is recovered by integrating it from ``a = 0``.
``phi_finite_N`` evaluates the same loop in a finite-N group through its
lasso word, and ``mm_residual`` checks the Makeenko-Migdal identity at
any crossing independently of which crossings the recursion used.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping, Sequence

from .exppoly import ExpPoly
from .moment_systems import Word, build_word_system, word_expectation, word_bound
from .planar_loops import (
    CombinatorialMap,
    Loop,
    MapError,
    crossing_darts,
    crossing_skein,
    crossing_taxonomy,
    CROSSING,
    canonical_key,
    dual_tree,
    generic_form,
    kazakov_data,
    lasso_express,
    minimal_with_faces,
    winding,
)


class PhiError(RuntimeError):
    """An internal consistency check failed; no answer is returned."""


def _fvar(f: int) -> str:
    return f"f{f}"


def loop_degrees(loop: Loop) -> None:
    """Reject vertices the loop meets with degree other than 2 or 4 (degree counted on used edges)."""
    m = loop.map
    used = set(loop.darts) | {m.alpha[d] for d in loop.darts}
    for v, rot in enumerate(m.vertices):
        deg = sum(d in used for d in rot)
        if deg not in (0, 2, 4):
            raise MapError(f"vertex v{v}: degree {deg} unsupported")


def phi_base(skein: Sequence[Loop], labels: Mapping[int, str] | None = None) -> ExpPoly:
    """exp(-1/2 sum_i area enclosed by l_i) for a skein without self-crossing."""
    _, nc = crossing_taxonomy(skein)
    if nc:
        raise MapError(f"phi_base needs a skein without self-crossings, found {nc}")
    m = skein[0].map
    name = labels.get if labels is not None else None
    rates: dict[str, Fraction] = {}
    for loop in skein:
        n, _ = winding(loop)
        for f in m.bounded_faces:
            if n[f]:
                v = name(f) if name else _fvar(f)
                rates[v] = rates.get(v, Fraction(0)) - Fraction(1, 2)
    return ExpPoly.exp(rates)


_MEMO: dict[tuple, ExpPoly] = {}


def clear_memo() -> None:
    _MEMO.clear()


def _pullback(loop: Loop) -> ExpPoly:
    """Phi of a loop living on a bigger map, in the ``f<face>`` variables of that map."""
    g, fmap = generic_form(loop)
    inner = _phi_generic(g)
    m = loop.map
    inf = g.map.unbounded_face
    rules: dict[str, dict[str, int]] = {}
    for f in m.bounded_faces:
        target = fmap[f]
        if target != inf:
            rules.setdefault(_fvar(target), {})[_fvar(f)] = 1
    for target in g.map.bounded_faces:
        rules.setdefault(_fvar(target), {})
    return inner.substitute(rules)


def _phi_generic(loop: Loop) -> ExpPoly:
    """Phi of a loop in generic form, in the ``f<face>`` variables of its own map."""
    key = canonical_key(loop)
    if key in _MEMO:
        return _MEMO[key]
    _, nc = crossing_taxonomy([loop])
    if nc == 0:
        result = phi_base([loop])
    else:
        result = _kazakov_integrate(loop)
    _MEMO[key] = result
    return result


def _kazakov_integrate(loop: Loop) -> ExpPoly:
    kd = kazakov_data(loop)
    q = len(kd.faces)
    avar = [f"a{i}" for i in range(q)]
    t_in_a = {_fvar(f): {avar[j]: kd.incmat[i][j] for j in range(q) if kd.incmat[i][j]}
              for i, f in enumerate(kd.faces)}
    shift = ExpPoly.exp({"a0": Fraction(kd.eps[0], 2)})
    grads = []
    for i in range(1, q):
        product = _pullback(kd.subloops[i - 1]) * _pullback(kd.erased[i - 1]) * kd.eps[i]
        g = shift * product.substitute(t_in_a)
        if "a0" in g.variables:
            raise PhiError(f"gradient along a{i} depends on a0")
        grads.append(g)
    for i in range(1, q):
        for j in range(i + 1, q):
            if grads[i - 1].diff(avar[j]) != grads[j - 1].diff(avar[i]):
                raise PhiError(f"mixed partials along a{i}, a{j} disagree")
    total = ExpPoly.const(1)
    for i in range(1, q):
        later = {avar[j]: {} for j in range(i + 1, q)}
        total = total + grads[i - 1].substitute(later).antiderivative(avar[i])
    phi_a = ExpPoly.exp({"a0": Fraction(-kd.eps[0], 2)}) * total
    a_in_t = {avar[i]: {_fvar(f): kd.nmat[i][j] for j, f in enumerate(kd.faces) if kd.nmat[i][j]}
              for i in range(q)}
    return phi_a.substitute(a_in_t)


@dataclass(frozen=True)
class PhiResult:
    """Phi of ``loop`` as an exponential polynomial in the face labels."""

    loop: Loop
    expr: ExpPoly
    face_labels: dict[int, str]

    def evaluate(self, areas: Mapping[str, Fraction | float]) -> float:
        return self.expr.evaluate(areas)

    def __str__(self) -> str:
        return str(self.expr)


def default_labels(m: CombinatorialMap) -> dict[int, str]:
    return {f: f"F{f}" for f in m.bounded_faces}


def phi_symbolic(loop: Loop, labels: Mapping[int, str] | None = None) -> PhiResult:
    """Exact Phi_t(loop); areas of faces of ``loop.map`` are named by ``labels``."""
    loop_degrees(loop)
    if not loop.is_elementary():
        raise MapError("loop is not elementary")
    labels = dict(labels) if labels is not None else default_labels(loop.map)
    g, fmap = generic_form(loop)
    inner = _phi_generic(g)
    inf = g.map.unbounded_face
    rules: dict[str, dict[str, int]] = {_fvar(f): {} for f in g.map.bounded_faces}
    for f in loop.map.bounded_faces:
        if fmap[f] != inf:
            if f not in labels:
                raise MapError(f"face {f} has no label")
            rules[_fvar(fmap[f])][labels[f]] = 1
    return PhiResult(loop, inner.substitute(rules), labels)


# ---------------------------------------------------------------- finite N


def loop_word(loop: Loop) -> tuple[Word, tuple[int, ...], dict[int, int]]:
    """The reversed lasso word of ``loop``, the faces of G_l its letters stand for, and the face map into G_l."""
    g, fmap = minimal_with_faces(loop)
    tree = dual_tree(g.map)
    lw = lasso_express(g.map, tree, g)
    return lw.word.reverse(), lw.faces, fmap


def _letter_times(loop: Loop, faces: Sequence[int], fmap: Mapping[int, int],
                  areas: Mapping[int, float]) -> list[float]:
    times = {f: 0.0 for f in faces}
    for f, a in areas.items():
        if fmap.get(f) in times:
            times[fmap[f]] += float(a)
    return [times[f] for f in faces]


def phi_finite_N(loop: Loop, kind: str, N: int, areas: Mapping[int, float]) -> float:
    """E[tr(holonomy)] for the group of ``kind`` in dimension N, areas keyed by faces of ``loop.map``."""
    word, faces, fmap = loop_word(loop)
    if not word.letters:
        return 1.0
    t = _letter_times(loop, faces, fmap, areas)
    return word_expectation(build_word_system(kind, word, N), t)


def finite_N_bound(loop: Loop, kind: str, N: int, areas: Mapping[int, float]) -> float:
    """The convergence bound in terms of the Amperean area of the lasso word."""
    word, faces, fmap = loop_word(loop)
    if not word.letters:
        return 0.0
    return word_bound(kind, word, _letter_times(loop, faces, fmap, areas), N)


# ---------------------------------------------------------------- MM checks


def _in_graph_variables(result: PhiResult) -> tuple[Loop, ExpPoly]:
    """Re-express ``result.expr`` in the ``f<face>`` variables of the minimal graph."""
    loop = result.loop
    if not loop.covers():
        raise MapError("MM checks need a loop covering its map")
    g, fmap = minimal_with_faces(loop)
    rules = {result.face_labels[f]: {_fvar(fmap[f]): 1} for f in loop.map.bounded_faces}
    return g, result.expr.substitute(rules)


def _d(expr: ExpPoly, m: CombinatorialMap, f: int) -> ExpPoly:
    return ExpPoly() if f == m.unbounded_face else expr.diff(_fvar(f))


def mm_residual(result: PhiResult, v: int) -> ExpPoly:
    """(-d1 + d2 - d3 + d4) Phi - Phi(l_sub) Phi(l_rest) at crossing ``v`` of the minimal graph.

    Faces ``F1..F4`` go counterclockwise around ``v`` starting with the
    face on the right of ``e1``, where ``e2 = sigma(e1)`` are the two
    outgoing darts.  The result is zero when the identity holds.
    """
    g, expr = _in_graph_variables(result)
    m = g.map
    if crossing_taxonomy([g])[0].get(v) != CROSSING:
        raise MapError(f"vertex v{v} is not a crossing of the loop")
    e1, e2 = crossing_darts(m, g, v)
    faces = (m.right(e1), m.left(e1), m.left(e2), m.left(m.sigma[e2]))
    lhs = ExpPoly()
    for sign, f in zip((-1, 1, -1, 1), faces):
        lhs = lhs + _d(expr, m, f) * sign
    sub, rest = crossing_skein(g, v)
    return lhs - _pullback(sub) * _pullback(rest)


def crossings(result: PhiResult) -> list[int]:
    """Same-loop crossings of the minimal graph of ``result.loop``."""
    g, _ = minimal_with_faces(result.loop)
    labels, _ = crossing_taxonomy([g])
    return sorted(v for v, lab in labels.items() if lab == CROSSING)


def boundary_residuals(result: PhiResult) -> dict[int, ExpPoly]:
    """dPhi/d|F| + Phi/2 for each bounded face F sharing an edge with the unbounded face."""
    g, expr = _in_graph_variables(result)
    m = g.map
    inf = m.unbounded_face
    adjacent = sorted({m.left(d) for d in m.faces[inf]} - {inf})
    return {f: expr.diff(_fvar(f)) + expr * Fraction(1, 2) for f in adjacent}
