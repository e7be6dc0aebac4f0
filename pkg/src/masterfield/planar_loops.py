"""Planar maps, elementary loops and the combinatorics built on them.

A map is a rotation system on darts ``0..D-1``.  ``alpha`` pairs the two
darts of an edge and ``sigma`` rotates counterclockwise around a vertex.
The face permutation is ``phi = sigma o alpha``: the orbit of a dart ``d``
is the face lying on the right of ``d`` (``F^R(d)``), and the face on its
left is ``F^L(d) = F^R(alpha(d))``.  Bounded faces are therefore walked
clockwise, and the unbounded face is walked counterclockwise.

Worked example, the figure-eight with nested lobes.  One crossing ``c``
and a base ``b`` of degree 2; the loop runs ``0: b->c``, ``1: c->c`` (the
inner lobe) and ``2: c->b``.  Reverse darts are ``3, 4, 5``.  The rotation
at ``c`` is ``(1, 4, 3, 2)`` read counterclockwise and ``(0, 5)`` at
``b``.  The faces are ``{1, 3, 5}`` (outer ring, winding 1), ``{4}``
(inner disk, winding 2) and ``{0, 2}`` (unbounded, to the right of both
outer strands).

Vertices, faces and edges are numbered by their smallest dart.
"""

from __future__ import annotations

import functools
import math
from collections import deque
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from typing import Hashable, Iterable, Mapping, Sequence

from .moment_systems import Word


class MapError(ValueError):
    """Raised when a map, loop or polyline violates a precondition."""


def _orbits(perm: Sequence[int]) -> list[tuple[int, ...]]:
    seen = [False] * len(perm)
    out = []
    for start in range(len(perm)):
        if seen[start]:
            continue
        orbit = []
        d = start
        while not seen[d]:
            seen[d] = True
            orbit.append(d)
            d = perm[d]
        out.append(tuple(orbit))
    return out


def _index_of(orbits: list[tuple[int, ...]], size: int) -> tuple[int, ...]:
    idx = [0] * size
    for k, orbit in enumerate(orbits):
        for d in orbit:
            idx[d] = k
    return tuple(idx)


@dataclass(frozen=True)
class CombinatorialMap:
    """A rotation system.  ``unbounded`` is any dart whose phi-orbit is the unbounded face."""

    alpha: tuple[int, ...]
    sigma: tuple[int, ...]
    unbounded: int

    def __post_init__(self) -> None:
        object.__setattr__(self, "alpha", tuple(self.alpha))
        object.__setattr__(self, "sigma", tuple(self.sigma))
        size = len(self.alpha)
        if len(self.sigma) != size:
            raise MapError(f"alpha has {size} darts but sigma has {len(self.sigma)}")
        for name, perm in (("alpha", self.alpha), ("sigma", self.sigma)):
            if sorted(perm) != list(range(size)):
                raise MapError(f"{name} is not a permutation of 0..{size - 1}")

    @property
    def num_darts(self) -> int:
        return len(self.alpha)

    def phi(self, d: int) -> int:
        return self.sigma[self.alpha[d]]

    @cached_property
    def vertices(self) -> tuple[tuple[int, ...], ...]:
        """Counterclockwise rotations, one per vertex."""
        return tuple(_orbits(self.sigma))

    @cached_property
    def faces(self) -> tuple[tuple[int, ...], ...]:
        """Boundary walks (phi-orbits), face on the right."""
        return tuple(_orbits([self.phi(d) for d in range(self.num_darts)]))

    @cached_property
    def vertex_of(self) -> tuple[int, ...]:
        return _index_of(list(self.vertices), self.num_darts)

    @cached_property
    def face_of(self) -> tuple[int, ...]:
        return _index_of(list(self.faces), self.num_darts)

    @property
    def edges(self) -> list[tuple[int, int]]:
        return [(d, self.alpha[d]) for d in range(self.num_darts) if d < self.alpha[d]]

    def tail(self, d: int) -> int:
        return self.vertex_of[d]

    def head(self, d: int) -> int:
        return self.vertex_of[self.alpha[d]]

    def right(self, d: int) -> int:
        return self.face_of[d]

    def left(self, d: int) -> int:
        return self.face_of[self.alpha[d]]

    def degree(self, v: int) -> int:
        return len(self.vertices[v])

    @property
    def unbounded_face(self) -> int:
        return self.face_of[self.unbounded]

    @property
    def bounded_faces(self) -> tuple[int, ...]:
        return tuple(f for f in range(len(self.faces)) if f != self.unbounded_face)

    def euler(self) -> int:
        return len(self.vertices) - len(self.edges) + len(self.faces)


def validate_map(m: CombinatorialMap) -> list[str]:
    """Every violated map invariant, as human-readable lines (empty when valid)."""
    problems = []
    if m.num_darts == 0:
        return ["map has no darts"]
    for d in range(m.num_darts):
        if m.alpha[d] == d:
            problems.append(f"alpha fixes dart {d}")
        elif m.alpha[m.alpha[d]] != d:
            problems.append(f"alpha is not an involution at dart {d}")
    if not 0 <= m.unbounded < m.num_darts:
        problems.append(f"unbounded face representative {m.unbounded} is not a dart")
    if problems:
        return problems
    parent = list(range(len(m.vertices)))

    def find(x: int) -> int:
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for d, e in m.edges:
        parent[find(m.tail(d))] = find(m.tail(e))
    if len({find(v) for v in range(len(m.vertices))}) != 1:
        problems.append("map is not connected")
    if m.euler() != 2:
        v, e, f = len(m.vertices), len(m.edges), len(m.faces)
        problems.append(f"Euler relation fails: V - E + F = {v} - {e} + {f} != 2")
    return problems


def require_valid(m: CombinatorialMap) -> None:
    problems = validate_map(m)
    if problems:
        raise MapError("; ".join(problems))


@dataclass(frozen=True)
class Loop:
    """A closed walk on ``map``; ``darts[0]`` leaves the base point."""

    map: CombinatorialMap
    darts: tuple[int, ...]

    def __post_init__(self) -> None:
        darts = tuple(self.darts)
        object.__setattr__(self, "darts", darts)
        if not darts:
            raise MapError("a loop needs at least one dart")
        m = self.map
        for k, d in enumerate(darts):
            if not 0 <= d < m.num_darts:
                raise MapError(f"dart {d} is not in the map")
            nxt = darts[(k + 1) % len(darts)]
            if m.head(d) != m.tail(nxt):
                raise MapError(f"darts {d} and {nxt} are not consecutive")

    @property
    def base(self) -> int:
        return self.map.tail(self.darts[0])

    def is_elementary(self) -> bool:
        """No edge is used twice, in either direction."""
        edges = [min(d, self.map.alpha[d]) for d in self.darts]
        return len(set(edges)) == len(edges)

    def covers(self) -> bool:
        return self.is_elementary() and 2 * len(self.darts) == self.map.num_darts

    def inverse(self) -> Loop:
        return Loop(self.map, tuple(self.map.alpha[d] for d in reversed(self.darts)))

    def multiplicity(self) -> list[int]:
        mult = [0] * self.map.num_darts
        for d in self.darts:
            mult[d] += 1
        return mult


# ---------------------------------------------------------------- rebuilding


def _skip_sigma(sigma: Sequence[int], kept: set[int]) -> dict[int, int]:
    """Rotation restricted to ``kept`` darts."""
    out = {}
    for d in kept:
        nxt = sigma[d]
        while nxt not in kept:
            nxt = sigma[nxt]
        out[d] = nxt
    return out


def _assemble(
    edges: Sequence[tuple[Hashable, Hashable]],
    rotation: Mapping[Hashable, Hashable],
    unbounded: Hashable,
) -> tuple[Loop, dict[Hashable, int]]:
    """Canonical loop: edge ``j`` is the ``j``-th step, darts ``j`` and ``j + E``."""
    size = len(edges)
    number: dict[Hashable, int] = {}
    for j, (fwd, bwd) in enumerate(edges):
        number[fwd] = j
        number[bwd] = j + size
    alpha = [(d + size) % (2 * size) for d in range(2 * size)]
    sigma = [0] * (2 * size)
    for tok, nxt in rotation.items():
        sigma[number[tok]] = number[nxt]
    m = CombinatorialMap(tuple(alpha), tuple(sigma), number[unbounded])
    return Loop(m, tuple(range(size))), number


def _face_map(old: CombinatorialMap, new: CombinatorialMap, number: Mapping[Hashable, int],
              classes: Mapping[int, int] | None = None) -> dict[int, int]:
    """Old face -> new face, following surviving darts; merged classes share images."""
    out: dict[int, int] = {}
    by_class: dict[int, int] = {}
    for tok, d in number.items():
        if isinstance(tok, int) and 0 <= tok < old.num_darts:
            f = old.face_of[tok]
            key = classes[f] if classes is not None else f
            by_class[key] = new.face_of[d]
    for f in range(len(old.faces)):
        key = classes[f] if classes is not None else f
        if key in by_class:
            out[f] = by_class[key]
    return out


def restrict(loop: Loop) -> tuple[Loop, dict[int, int]]:
    """Drop the edges ``loop`` does not use; faces fuse across dropped edges."""
    m = loop.map
    if not loop.is_elementary():
        raise MapError("loop is not elementary")
    kept = set(loop.darts) | {m.alpha[d] for d in loop.darts}
    parent = list(range(len(m.faces)))

    def find(x: int) -> int:
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for d, e in m.edges:
        if d not in kept:
            parent[find(m.right(d))] = find(m.left(d))
    classes = {f: find(f) for f in range(len(m.faces))}
    target = classes[m.unbounded_face]
    unbounded = next(d for d in sorted(kept) if classes[m.face_of[d]] == target)
    edges = [(d, m.alpha[d]) for d in loop.darts]
    new, number = _assemble(edges, _skip_sigma(m.sigma, kept), unbounded)
    return new, _face_map(m, new.map, number, classes)


def smooth(loop: Loop) -> tuple[Loop, dict[int, int]]:
    """Concatenate edges through degree-2 vertices other than the base (loop must cover its map)."""
    m = loop.map
    if not loop.covers():
        raise MapError("smoothing needs a loop covering its map")
    darts = loop.darts
    keep = {v for v in range(len(m.vertices)) if m.degree(v) != 2} | {loop.base}
    groups: list[list[int]] = []
    for d in darts:
        if not groups or m.tail(d) in keep:
            groups.append([d])
        else:
            groups[-1].append(d)
    edges = [(g[0], m.alpha[g[-1]]) for g in groups]
    kept = {d for pair in edges for d in pair}
    unbounded = next(d for d in sorted(kept) if m.face_of[d] == m.unbounded_face)
    new, number = _assemble(edges, _skip_sigma(m.sigma, kept), unbounded)
    return new, _face_map(m, new.map, number)


def minimal_graph(loop: Loop) -> tuple[CombinatorialMap, Loop]:
    """The graph G_l: unused edges dropped, degree-2 vertices other than the base removed."""
    out, _ = minimal_with_faces(loop)
    return out.map, out


def minimal_with_faces(loop: Loop) -> tuple[Loop, dict[int, int]]:
    """``minimal_graph`` plus the old-face -> new-face map."""
    first, fmap1 = restrict(loop)
    second, fmap2 = smooth(first)
    return second, {f: fmap2[g] for f, g in fmap1.items()}


def reroot(loop: Loop) -> tuple[Loop, dict[int, int]]:
    """Move the base to a new degree-2 vertex on the unbounded face, then re-minimalize.

    The loop must cover its map.  Nothing changes if the base already has
    degree 2 and touches the unbounded face.
    """
    m = loop.map
    inf = m.unbounded_face
    d0 = loop.darts[0]
    if m.degree(loop.base) == 2 and inf in (m.right(d0), m.left(d0)):
        return loop, {f: f for f in range(len(m.faces))}
    j = next(k for k, d in enumerate(loop.darts) if inf in (m.right(d), m.left(d)))
    return rebase(loop, j)


def rebase(loop: Loop, j: int) -> tuple[Loop, dict[int, int]]:
    """Put a new degree-2 base in the middle of the ``j``-th step and smooth the old base."""
    m = loop.map
    darts = loop.darts
    cut = darts[j]
    mid_out, mid_back = ("mid", 0), ("mid", 1)
    rotation: dict[Hashable, Hashable] = {d: m.sigma[d] for d in range(m.num_darts)}
    rotation[mid_out] = mid_back
    rotation[mid_back] = mid_out
    edges: list[tuple[Hashable, Hashable]] = [(mid_out, m.alpha[cut])]
    edges += [(d, m.alpha[d]) for d in darts[j + 1:] + darts[:j]]
    edges.append((cut, mid_back))
    new, number = _assemble(edges, rotation, m.unbounded)
    fmap = _face_map(m, new.map, number)
    smoothed, fmap2 = smooth(new)
    return smoothed, {f: fmap2[g] for f, g in fmap.items()}


def generic_form(loop: Loop) -> tuple[Loop, dict[int, int]]:
    """Minimal graph with a degree-2 base on the unbounded face, plus the face map."""
    first, fmap1 = minimal_with_faces(loop)
    second, fmap2 = reroot(first)
    return second, {f: fmap2[g] for f, g in fmap1.items()}


def canonical_key(loop: Loop) -> tuple:
    """Hashable invariant of a canonical loop: equal keys mean equal rooted maps."""
    m = loop.map
    if loop.darts != tuple(range(len(loop.darts))) or not loop.covers():
        loop, _ = _assemble([(d, m.alpha[d]) for d in loop.darts],
                            _skip_sigma(m.sigma, set(range(m.num_darts))), m.unbounded)
        m = loop.map
    return (len(loop.darts), m.sigma, min(m.faces[m.unbounded_face]))


# ---------------------------------------------------------------- winding


def winding(loop: Loop) -> tuple[dict[int, int], dict[int, int]]:
    """Winding numbers n_l and dual distances nbar_l, both with value 0 on the unbounded face."""
    m = loop.map
    mult = loop.multiplicity()
    inf = m.unbounded_face
    n = {inf: 0}
    nbar = {inf: 0}
    queue = deque([inf])
    while queue:
        f = queue.popleft()
        for d in m.faces[f]:
            g = m.left(d)
            if g not in n:
                n[g] = n[f] + mult[d] - mult[m.alpha[d]]
                nbar[g] = nbar[f] + 1
                queue.append(g)
            elif n[g] != n[f] + mult[d] - mult[m.alpha[d]]:
                raise MapError("inconsistent winding numbers; the map is not planar")
    return n, nbar


def amperean_areas(loop: Loop, t: Mapping[int, Fraction | float]) -> tuple:
    """(A, Abar) = (sum t(F) n(F)^2, sum t(F) nbar(F)^2) over bounded faces."""
    n, nbar = winding(loop)
    faces = loop.map.bounded_faces
    return (sum(t[f] * n[f] ** 2 for f in faces), sum(t[f] * nbar[f] ** 2 for f in faces))


@dataclass(frozen=True)
class DualTree:
    """BFS tree of the dual graph rooted at the unbounded face.

    ``parent[F] = (P, d)`` where the dart ``d`` has ``F`` on its right and
    the parent ``P`` on its left.
    """

    root: int
    parent: dict[int, tuple[int, int]]
    depth: dict[int, int]

    def children(self, f: int) -> list[int]:
        return sorted(g for g, (p, _) in self.parent.items() if p == f)


def dual_tree(m: CombinatorialMap) -> DualTree:
    root = m.unbounded_face
    parent: dict[int, tuple[int, int]] = {}
    depth = {root: 0}
    queue = deque([root])
    while queue:
        f = queue.popleft()
        for d in sorted(m.faces[f]):
            g = m.left(d)
            if g not in depth:
                depth[g] = depth[f] + 1
                parent[g] = (f, m.alpha[d])
                queue.append(g)
    return DualTree(root, parent, depth)


# ---------------------------------------------------------------- lassos


def free_reduce(letters: Iterable[tuple[int, int]]) -> tuple[tuple[int, int], ...]:
    stack: list[tuple[int, int]] = []
    for k, s in letters:
        if stack and stack[-1] == (k, -s):
            stack.pop()
        else:
            stack.append((k, s))
    return tuple(stack)


@dataclass(frozen=True)
class LassoWord:
    """A loop written in the lasso basis.  Letter ``x_k`` is the lasso of ``faces[k-1]``."""

    faces: tuple[int, ...]
    raw: Word
    word: Word


def lasso_express(m: CombinatorialMap, tree: DualTree, loop: Loop, v0: int | None = None) -> LassoWord:
    """Write ``loop`` in the lasso basis of the dual tree ``tree``.

    Edges crossed by the dual tree index a basis ``beta_e`` of the free
    group of loops at the base point (the other edges form a primal
    spanning tree).  The lasso of a face ``F`` walks its boundary starting
    on its parent edge, so ``lambda_F = beta_F * (betas of its children)``
    and the triangular relation is inverted from the leaves up.  Letters
    denote the counterclockwise lassos, so a counterclockwise circle is
    ``x1``.  Before
    reduction the letter of ``F`` appears ``depth(F)`` times when the loop
    traverses every edge once.
    """
    if loop.map is not m:
        raise MapError("loop does not live on this map")
    if v0 is not None and loop.base != v0:
        raise MapError(f"base-point mismatch: loop starts at v{loop.base}, expected v{v0}")
    faces = m.bounded_faces
    letter = {f: k + 1 for k, f in enumerate(faces)}
    beta_of: dict[int, tuple[int, int]] = {}
    for f, (_, d) in tree.parent.items():
        beta_of[d] = (f, 1)
        beta_of[m.alpha[d]] = (f, -1)

    @functools.lru_cache(maxsize=None)
    def beta_word(f: int) -> tuple[tuple[int, int], ...]:
        # beta_F = lambda_F * (rest of the boundary of F)^-1
        start = tree.parent[f][1]
        rest = []
        d = m.phi(start)
        while d != start:
            if d in beta_of:
                rest.append(beta_of[d])
            d = m.phi(d)
        out = [(letter[f], 1)]
        for g, s in reversed(rest):
            out.extend(expand(g, -s))
        return tuple(out)

    def expand(f: int, s: int) -> tuple[tuple[int, int], ...]:
        w = beta_word(f)
        return w if s == 1 else tuple((k, -e) for k, e in reversed(w))

    raw = []
    for d in loop.darts:
        if d in beta_of:
            raw.extend(expand(*beta_of[d]))
    # letters stand for the counterclockwise lassos, inverse to the walks above
    raw = [(k, -s) for k, s in raw]
    return LassoWord(faces, Word(tuple(raw)), Word(free_reduce(raw)))


def word_to_walk(m: CombinatorialMap, tree: DualTree, lasso: LassoWord) -> tuple[tuple[int, int], ...]:
    """The beta-word of a lasso word, reduced: used to check ``lasso_express`` round-trips."""
    beta_of: dict[int, tuple[int, int]] = {}
    for f, (_, d) in tree.parent.items():
        beta_of[d] = (f, 1)
    out = []
    for k, s in lasso.word.letters:
        s = -s
        f = lasso.faces[k - 1]
        start = tree.parent[f][1]
        walk = [(f, 1)]
        d = m.phi(start)
        while d != start:
            if d in beta_of:
                walk.append(beta_of[d])
            elif m.alpha[d] in beta_of:
                g, _ = beta_of[m.alpha[d]]
                walk.append((g, -1))
            d = m.phi(d)
        out.extend(walk if s == 1 else [(g, -e) for g, e in reversed(walk)])
    return free_reduce(out)


def loop_beta_word(m: CombinatorialMap, tree: DualTree, loop: Loop) -> tuple[tuple[int, int], ...]:
    """The loop itself as a reduced word in the ``beta_e`` basis."""
    out = []
    for d in loop.darts:
        if d == tree.parent.get(m.right(d), (None, None))[1]:
            out.append((m.right(d), 1))
        elif m.alpha[d] == tree.parent.get(m.left(d), (None, None))[1]:
            out.append((m.left(d), -1))
    return free_reduce(out)


# ---------------------------------------------------------------- skeins


CROSSING = "crossing"
LATERAL = "lateral dodge"
FRONTAL = "frontal dodge"


def check_degrees(m: CombinatorialMap) -> None:
    """Reject vertices that are not of degree 2 or 4."""
    for v, rot in enumerate(m.vertices):
        if len(rot) not in (2, 4):
            raise MapError(f"vertex v{v}: degree {len(rot)} unsupported")


def crossing_taxonomy(skein: Sequence[Loop]) -> tuple[dict[int, str], int]:
    """Label each degree-4 vertex and count the same-loop crossings nc(S)."""
    if not skein:
        raise MapError("empty skein")
    m = skein[0].map
    check_degrees(m)
    owner: dict[int, int] = {}
    prev: dict[int, int] = {}
    for i, loop in enumerate(skein):
        if loop.map is not m:
            raise MapError("skein loops must share one map")
        for k, d in enumerate(loop.darts):
            if d in owner or m.alpha[d] in owner:
                raise MapError(f"edge of dart {d} is traversed twice")
            owner[d] = i
            prev[d] = loop.darts[k - 1]
    if 2 * len(owner) != m.num_darts:
        raise MapError("skein does not cover every edge")
    labels = {}
    nc = 0
    for v, rot in enumerate(m.vertices):
        if len(rot) != 4:
            continue
        e1, e2 = sorted(d for d in rot if d in owner)
        if m.sigma[e2] == e1:
            e1, e2 = e2, e1
        if m.sigma[e1] != e2:
            labels[v] = FRONTAL
            continue
        e3 = m.alpha[prev[e1]]
        labels[v] = CROSSING if m.sigma[e2] == e3 else LATERAL
        if labels[v] == CROSSING and owner[e1] == owner[e2]:
            nc += 1
    return labels, nc


def crossing_darts(m: CombinatorialMap, loop: Loop, v: int) -> tuple[int, int]:
    """The two outgoing darts ``(e1, e2)`` at a crossing, with ``e2 = sigma(e1)``."""
    out = [d for d in m.vertices[v] if d in set(loop.darts)]
    if len(out) != 2:
        raise MapError(f"vertex v{v} is not a crossing of the loop")
    e1, e2 = out
    if m.sigma[e2] == e1:
        e1, e2 = e2, e1
    if m.sigma[e1] != e2:
        raise MapError(f"vertex v{v} is not a crossing of the loop")
    return e1, e2


def crossing_skein(loop: Loop, v: int) -> tuple[Loop, Loop]:
    """The two loops obtained by reconnecting the strands at crossing ``v``, on the same map."""
    m = loop.map
    visits = [k for k, d in enumerate(loop.darts) if m.tail(d) == v]
    if len(visits) != 2:
        raise MapError(f"vertex v{v} is not a crossing of the loop")
    a, b = visits
    return Loop(m, loop.darts[a:b]), Loop(m, loop.darts[:a] + loop.darts[b:])


@dataclass(frozen=True)
class Split:
    """Pieces of a loop cut at a crossing, each minimalized, with face maps from the parent."""

    sub: Loop
    rest: Loop
    sub_faces: dict[int, int]
    rest_faces: dict[int, int]


def split_at_crossing(loop: Loop, v: int) -> Split:
    """``sub`` is the excursion between the two visits to ``v``; ``rest`` is the loop without it."""
    m = loop.map
    labels, _ = crossing_taxonomy([loop])
    if labels.get(v) != CROSSING:
        raise MapError(f"vertex v{v} is not a crossing of the loop")
    visits = [k for k, d in enumerate(loop.darts) if m.tail(d) == v]
    a, b = visits
    sub, sub_faces = minimal_with_faces(Loop(m, loop.darts[a:b]))
    rest, rest_faces = minimal_with_faces(Loop(m, loop.darts[:a] + loop.darts[b:]))
    return Split(sub, rest, sub_faces, rest_faces)


# ---------------------------------------------------------------- Kazakov


@dataclass(frozen=True)
class KazakovData:
    """Kazakov coordinates of a generic loop.

    Rows of ``nmat`` are the windings of ``l_0 = l, l_1, ..., l_{q-1}`` on
    the bounded faces ``faces``; ``incmat[i][j] = inc(faces[i], v_j)``.
    The coordinates are ``a = nmat t`` and ``t = incmat a``.
    """

    loop: Loop
    faces: tuple[int, ...]
    vertex_order: tuple[int, ...]
    subloops: tuple[Loop, ...]
    erased: tuple[Loop, ...]
    eps: tuple[int, ...]
    nmat: tuple[tuple[int, ...], ...]
    incmat: tuple[tuple[int, ...], ...]
    sub_faces: tuple[dict[int, int], ...] = field(default=(), compare=False)
    erased_faces: tuple[dict[int, int], ...] = field(default=(), compare=False)


def check_generic(loop: Loop) -> None:
    """Raise unless the loop covers its map, its base has degree 2 on the unbounded face, and every other vertex is a crossing."""
    m = loop.map
    check_degrees(m)
    if not loop.covers():
        raise MapError("loop must traverse every edge of its map exactly once")
    d0 = loop.darts[0]
    if m.degree(loop.base) != 2:
        raise MapError(f"vertex v{loop.base}: base point must have degree 2")
    if m.unbounded_face not in (m.right(d0), m.left(d0)):
        raise MapError(f"vertex v{loop.base}: base point is not on the unbounded face")
    labels, _ = crossing_taxonomy([loop])
    for v, rot in enumerate(m.vertices):
        if v == loop.base:
            continue
        if len(rot) != 4:
            raise MapError(f"vertex v{v}: degree-2 vertex away from the base")
        if labels[v] != CROSSING:
            raise MapError(f"vertex v{v}: {labels[v]} is not a transverse crossing")


def kazakov_data(loop: Loop) -> KazakovData:
    check_generic(loop)
    m = loop.map
    darts = loop.darts
    first: dict[int, int] = {}
    second: dict[int, int] = {}
    for k, d in enumerate(darts):
        v = m.tail(d)
        if v in first:
            second[v] = k
        else:
            first[v] = k
    order = tuple(sorted(first, key=first.get))
    faces = m.bounded_faces
    if len(faces) != len(order):
        raise MapError(f"expected {len(order)} bounded faces, found {len(faces)}")

    subloops, erased, eps = [], [], []
    d0 = darts[0]
    inf = m.unbounded_face
    eps.append(-((inf == m.left(d0)) - (inf == m.right(d0))))
    for v in order[1:]:
        a, b = first[v], second[v]
        subloops.append(Loop(m, darts[a:b]))
        erased.append(Loop(m, darts[:a] + darts[b:]))
        eps.append(1 if m.sigma[darts[a]] == darts[b] else -1)

    rows = []
    for l_i in [loop] + subloops:
        n, _ = winding(l_i)
        rows.append(tuple(n[f] for f in faces))

    def inc(f: int, v: int) -> int:
        e = darts[first[v]]
        value = (f == m.left(e)) - (f == m.right(e))
        if v != order[0]:
            e_in = darts[first[v] - 1]
            value += (f == m.right(e_in)) - (f == m.left(e_in))
        return value

    incmat = tuple(tuple(inc(f, v) for v in order) for f in faces)
    sub_faces = tuple(minimal_with_faces(s)[1] for s in subloops)
    erased_faces = tuple(minimal_with_faces(s)[1] for s in erased)
    return KazakovData(loop, faces, order, tuple(subloops), tuple(erased), tuple(eps),
                       tuple(rows), incmat, sub_faces, erased_faces)


def mat_mul(a: Sequence[Sequence[int]], b: Sequence[Sequence[int]]) -> tuple[tuple[int, ...], ...]:
    return tuple(tuple(sum(a[i][k] * b[k][j] for k in range(len(b))) for j in range(len(b[0])))
                 for i in range(len(a)))


def int_det(a: Sequence[Sequence[int]]) -> int:
    """Exact determinant by fraction-free elimination."""
    rows = [[Fraction(x) for x in r] for r in a]
    size = len(rows)
    det = Fraction(1)
    for c in range(size):
        p = next((r for r in range(c, size) if rows[r][c] != 0), None)
        if p is None:
            return 0
        if p != c:
            rows[c], rows[p] = rows[p], rows[c]
            det = -det
        det *= rows[c][c]
        for r in range(c + 1, size):
            f = rows[r][c] / rows[c][c]
            rows[r] = [x - f * y for x, y in zip(rows[r], rows[c])]
    return int(det)


# ---------------------------------------------------------------- MM operator


def mm_operator(skein: Sequence[Loop]) -> list[list[int]]:
    """Matrix of mu_S = d_S o d^: rows indexed by traversed darts (sorted), columns by faces."""
    m = skein[0].map
    prev: dict[int, int] = {}
    for loop in skein:
        for k, d in enumerate(loop.darts):
            prev[d] = loop.darts[k - 1]
    rows = []
    for e in sorted(prev):
        row = [0] * len(m.faces)
        for d, s in ((e, 1), (prev[e], -1)):
            row[m.right(d)] += s
            row[m.left(d)] -= s
        rows.append(row)
    return rows


def rank(matrix: Sequence[Sequence[int]]) -> int:
    rows = [[Fraction(x) for x in r] for r in matrix]
    if not rows:
        return 0
    r = 0
    for c in range(len(rows[0])):
        p = next((i for i in range(r, len(rows)) if rows[i][c] != 0), None)
        if p is None:
            continue
        rows[r], rows[p] = rows[p], rows[r]
        for i in range(len(rows)):
            if i != r and rows[i][c] != 0:
                f = rows[i][c] / rows[r][c]
                rows[i] = [x - f * y for x, y in zip(rows[i], rows[r])]
        r += 1
    return r


# ---------------------------------------------------------------- polylines


Point = tuple[Fraction, Fraction]


def _cross(o: Point, a: Point, b: Point) -> Fraction:
    return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])


def _on_segment(p: Point, a: Point, b: Point) -> bool:
    return (_cross(a, b, p) == 0 and min(a[0], b[0]) <= p[0] <= max(a[0], b[0])
            and min(a[1], b[1]) <= p[1] <= max(a[1], b[1]))


def _half(v: Point) -> int:
    return 0 if v[1] > 0 or (v[1] == 0 and v[0] > 0) else 1


def _angle_cmp(u: Point, v: Point) -> int:
    hu, hv = _half(u), _half(v)
    if hu != hv:
        return hu - hv
    c = u[0] * v[1] - u[1] * v[0]
    return -1 if c > 0 else (1 if c < 0 else 0)


@dataclass(frozen=True)
class Polyline:
    points: tuple[Point, ...]

    @classmethod
    def parse(cls, data: Sequence[Sequence[str | int | float]]) -> Polyline:
        pts = tuple((Fraction(str(x)), Fraction(str(y))) for x, y in data)
        return cls(pts)

    @property
    def segments(self) -> list[tuple[Point, Point]]:
        p = self.points
        return [(p[i], p[(i + 1) % len(p)]) for i in range(len(p))]

    def length(self) -> float:
        return sum(math.hypot(b[0] - a[0], b[1] - a[1]) for a, b in self.segments)


@dataclass(frozen=True)
class IngestedLoop:
    loop: Loop
    areas: dict[int, Fraction]
    polyline: Polyline


def ingest_polyline(points: Sequence[Sequence[str | int | float]] | Polyline) -> IngestedLoop:
    """Planar arrangement of a closed polyline with exact rational arithmetic.

    Crossings become degree-4 vertices, polyline corners degree-2 vertices,
    and the first point is the base.  Bounded face areas are exact.
    """
    poly = points if isinstance(points, Polyline) else Polyline.parse(points)
    segs = poly.segments
    count = len(segs)
    if count < 3:
        raise MapError("non-generic: a closed polyline needs at least 3 points")
    for i, (a, b) in enumerate(segs):
        if a == b:
            raise MapError(f"non-generic: segment {i} has zero length")
    cuts: list[list[tuple[Fraction, Point]]] = [[] for _ in segs]
    crossing_at: dict[Point, list[int]] = {}
    for i in range(count):
        for j in range(i + 1, count):
            a, b = segs[i]
            c, d = segs[j]
            adjacent = j == i + 1 or (i == 0 and j == count - 1)
            denom = (b[0] - a[0]) * (d[1] - c[1]) - (b[1] - a[1]) * (d[0] - c[0])
            if denom == 0:
                if _cross(a, b, c) == 0 and (
                        (not adjacent and (_on_segment(c, a, b) or _on_segment(d, a, b)
                                           or _on_segment(a, c, d) or _on_segment(b, c, d)))
                        or (adjacent and _overlap_collinear(a, b, c, d))):
                    raise MapError(f"non-generic: segments {i} and {j} overlap")
                continue
            s = ((c[0] - a[0]) * (d[1] - c[1]) - (c[1] - a[1]) * (d[0] - c[0])) / denom
            u = ((c[0] - a[0]) * (b[1] - a[1]) - (c[1] - a[1]) * (b[0] - a[0])) / denom
            if not (0 <= s <= 1 and 0 <= u <= 1):
                continue
            if adjacent:
                continue
            if s in (0, 1) or u in (0, 1):
                raise MapError(f"non-generic: segments {i} and {j} touch at an endpoint")
            p = (a[0] + s * (b[0] - a[0]), a[1] + s * (b[1] - a[1]))
            crossing_at.setdefault(p, []).extend([i, j])
            cuts[i].append((s, p))
            cuts[j].append((u, p))
    for p, segs_at in crossing_at.items():
        if len(segs_at) > 2:
            names = ", ".join(str(k) for k in sorted(set(segs_at)))
            raise MapError(f"non-generic: segments {names} meet at a single point")

    # walk: corners and crossing points in traversal order
    walk: list[Point] = []
    for i, (a, _) in enumerate(segs):
        walk.append(a)
        walk.extend(p for _, p in sorted(cuts[i]))
    size = len(walk)
    out_dirs: dict[Point, list[tuple[int, Point]]] = {}
    for j in range(size):
        a, b = walk[j], walk[(j + 1) % size]
        out_dirs.setdefault(a, []).append((j, (b[0] - a[0], b[1] - a[1])))
        out_dirs.setdefault(b, []).append((j + size, (a[0] - b[0], a[1] - b[1])))
    sigma = [0] * (2 * size)
    for darts in out_dirs.values():
        ordered = sorted(darts, key=functools.cmp_to_key(lambda x, y: _angle_cmp(x[1], y[1])))
        for k, (d, _) in enumerate(ordered):
            sigma[d] = ordered[(k + 1) % len(ordered)][0]
    alpha = [(d + size) % (2 * size) for d in range(2 * size)]

    def start(d: int) -> Point:
        return walk[d] if d < size else walk[(d - size + 1) % size]

    probe = CombinatorialMap(tuple(alpha), tuple(sigma), 0)
    signed = []
    for orbit in probe.faces:
        signed.append(sum(start(d)[0] * start(alpha[d])[1] - start(alpha[d])[0] * start(d)[1]
                          for d in orbit) / 2)
    positive = [k for k, s in enumerate(signed) if s > 0]
    if len(positive) != 1:
        raise MapError("non-generic: could not identify the unbounded face")
    m = CombinatorialMap(tuple(alpha), tuple(sigma), probe.faces[positive[0]][0])
    require_valid(m)
    loop = Loop(m, tuple(range(size)))
    areas = {f: -signed[f] for f in m.bounded_faces}
    return IngestedLoop(loop, areas, poly)


def _overlap_collinear(a: Point, b: Point, c: Point, d: Point) -> bool:
    """Adjacent collinear segments a->b, c->d with b == c overlap iff they fold back."""
    if b == c:
        u = (b[0] - a[0], b[1] - a[1])
        v = (d[0] - c[0], d[1] - c[1])
    else:  # wrap-around pair: segment j ends where segment i starts
        u = (b[0] - a[0], b[1] - a[1])
        v = (c[0] - d[0], c[1] - d[1])
    return u[0] * v[0] + u[1] * v[1] < 0


# ---------------------------------------------------------------- JSON


@dataclass
class MapFile:
    """Contents of a map/loop JSON file."""

    map: CombinatorialMap
    loops: list[Loop]
    areas: dict[int, Fraction]
    labels: dict[int, str]
    dart_labels: tuple[int, ...]


def load_map(data: Mapping) -> MapFile:
    """Parse the JSON map format; faces in ``areas`` and ``labels`` are given by representative darts."""
    try:
        labels = [int(d) for d in data["darts"]]
        pos = {d: k for k, d in enumerate(labels)}
        if len(pos) != len(labels):
            raise MapError("repeated dart label")
        alpha = [-1] * len(labels)
        for x, y in data["alpha"]:
            alpha[pos[int(x)]] = pos[int(y)]
            alpha[pos[int(y)]] = pos[int(x)]
        if -1 in alpha:
            raise MapError(f"dart {labels[alpha.index(-1)]} has no alpha partner")
        sigma = [pos[int(s)] for s in data["sigma"]]
        m = CombinatorialMap(tuple(alpha), tuple(sigma), pos[int(data["unbounded_face"])])
        loops = [Loop(m, tuple(pos[int(d)] for d in seq)) for seq in data.get("loops", [])]
        areas = {m.face_of[pos[int(k)]]: Fraction(str(v)) for k, v in data.get("areas", {}).items()}
        names = {m.face_of[pos[int(k)]]: str(v) for k, v in data.get("labels", {}).items()}
    except (KeyError, TypeError) as exc:
        raise MapError(f"malformed map file: {exc}") from exc
    require_valid(m)
    return MapFile(m, loops, areas, names, tuple(labels))


def dump_map(m: CombinatorialMap, loops: Sequence[Loop] = (), areas: Mapping[int, Fraction] | None = None,
             labels: Mapping[int, str] | None = None) -> dict:
    """Serialize with dart labels ``0..D-1``; faces are keyed by their smallest dart."""
    rep = lambda f: str(min(m.faces[f]))  # noqa: E731
    out: dict = {
        "darts": list(range(m.num_darts)),
        "alpha": [list(e) for e in m.edges],
        "sigma": list(m.sigma),
        "unbounded_face": min(m.faces[m.unbounded_face]),
        "loops": [list(loop.darts) for loop in loops],
    }
    if areas:
        out["areas"] = {rep(f): str(Fraction(a)) for f, a in sorted(areas.items())}
    if labels:
        out["labels"] = {rep(f): name for f, name in sorted(labels.items())}
    return out
