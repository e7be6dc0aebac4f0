import json
import math
from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from masterfield.planar_loops import (
    CROSSING,
    FRONTAL,
    LATERAL,
    CombinatorialMap,
    Loop,
    MapError,
    amperean_areas,
    canonical_key,
    crossing_skein,
    crossing_taxonomy,
    dual_tree,
    dump_map,
    generic_form,
    ingest_polyline,
    int_det,
    kazakov_data,
    lasso_express,
    load_map,
    loop_beta_word,
    mat_mul,
    minimal_with_faces,
    mm_operator,
    rank,
    rebase,
    split_at_crossing,
    validate_map,
    winding,
    word_to_walk,
)

from conftest import FIXTURES, POLYLINES, read_points


def load(name):
    return load_map(json.loads((FIXTURES / name).read_text()))


def shoelace(points):
    p = [(Fraction(x), Fraction(y)) for x, y in points]
    return sum(p[i][0] * p[i - 1][1] - p[i - 1][0] * p[i][1] for i in range(len(p))) / -2


def test_figure_eight_structure():
    mf = load("figure8.json")
    m, loop = mf.map, mf.loops[0]
    assert (len(m.vertices), len(m.edges), len(m.faces)) == (2, 3, 3)
    assert m.euler() == 2
    n, nbar = winding(loop)
    by_label = {mf.labels[f]: (n[f], nbar[f]) for f in m.bounded_faces}
    assert by_label == {"s": (1, 1), "t": (2, 2)}
    labels, nc = crossing_taxonomy([loop])
    assert nc == 1 and list(labels.values()) == [CROSSING]


def test_validate_map_reports_problems():
    assert validate_map(CombinatorialMap((1, 0), (0, 1), 0)) == []
    assert "alpha fixes dart 0" in validate_map(CombinatorialMap((0, 1), (0, 1), 0))
    torus = CombinatorialMap((1, 0, 3, 2), (2, 3, 1, 0), 0)
    assert any("Euler" in p for p in validate_map(torus))


def test_load_map_rejects_malformed():
    with pytest.raises(MapError, match="malformed"):
        load_map({"darts": [0, 1]})
    with pytest.raises(MapError, match="no alpha partner"):
        load_map({"darts": [0, 1, 2], "alpha": [[0, 1]], "sigma": [0, 1, 2], "unbounded_face": 0})


def test_loop_rejects_broken_walk():
    m = load("figure8.json").map
    with pytest.raises(MapError, match="not consecutive"):
        Loop(m, (0, 0))


def test_inverse_loop_negates_winding():
    mf = load("figure8.json")
    n, nbar = winding(mf.loops[0])
    n_inv, nbar_inv = winding(mf.loops[0].inverse())
    assert all(n_inv[f] == -n[f] for f in n)
    assert nbar_inv == nbar


def test_dump_load_round_trip(golden):
    for _, mf, _ in golden:
        again = load_map(json.loads(json.dumps(dump_map(mf.map, mf.loops, labels=mf.labels))))
        assert canonical_key(again.loops[0]) == canonical_key(mf.loops[0])
        assert sorted(again.labels.values()) == sorted(mf.labels.values())


def test_rebase_preserves_winding(golden):
    for _, mf, _ in golden:
        loop = mf.loops[0]
        n, _ = winding(loop)
        for j in range(len(loop.darts)):
            moved, fmap = rebase(loop, j)
            n_moved, _ = winding(moved)
            assert all(n_moved[fmap[f]] == n[f] for f in loop.map.bounded_faces)


def test_kazakov_matrices_are_inverse(golden):
    for name, mf, _ in golden:
        kd = kazakov_data(generic_form(mf.loops[0])[0])
        q = len(kd.faces)
        assert mat_mul(kd.nmat, kd.incmat) == tuple(tuple(int(i == j) for j in range(q)) for i in range(q)), name
        assert abs(int_det(kd.nmat)) == 1


def test_kazakov_rejects_non_generic():
    mf = load("figure8.json")
    loop = mf.loops[0]
    with pytest.raises(MapError):
        kazakov_data(Loop(loop.map, loop.darts[1:] + loop.darts[:1]))


def test_mm_operator_kernel(golden):
    for _, mf, _ in golden:
        loop = mf.loops[0]
        m = loop.map
        labels, _ = crossing_taxonomy([loop])
        skeins = [[loop]] + [list(crossing_skein(loop, v)) for v, lab in labels.items() if lab == CROSSING]
        for skein in skeins:
            mat = mm_operator(skein)
            size = len(m.faces)
            vectors = [[1] * size] + [[winding(l)[0][f] for f in range(size)] for l in skein]
            for vec in vectors:
                assert all(sum(r[j] * vec[j] for j in range(size)) == 0 for r in mat)
            assert size - rank(mat) == len(skein) + 1 == rank(vectors)


def test_split_at_crossing_becomes_dodge():
    mf = load("figure8.json")
    loop = mf.loops[0]
    v = next(v for v, lab in crossing_taxonomy([loop])[0].items() if lab == CROSSING)
    sub, rest = crossing_skein(loop, v)
    labels, nc = crossing_taxonomy([sub, rest])
    assert labels[v] in (LATERAL, FRONTAL) and nc == 0
    split = split_at_crossing(loop, v)
    assert winding(split.sub)[0] and winding(split.rest)[0]


def test_triple_point_is_rejected():
    mf = load("triple-point.json")
    with pytest.raises(MapError, match="vertex v3: degree 6 unsupported"):
        crossing_taxonomy(mf.loops)


@pytest.mark.parametrize("path", POLYLINES, ids=lambda p: p.stem)
def test_polyline_fixture(path):
    points = read_points(path)
    ing = ingest_polyline(points)
    loop, m = ing.loop, ing.loop.map
    assert validate_map(m) == []
    n, nbar = winding(loop)
    assert sum(n[f] * a for f, a in ing.areas.items()) == shoelace(points)
    assert all(a > 0 for a in ing.areas.values())
    a, abar = amperean_areas(loop, ing.areas)
    assert a <= abar <= ing.polyline.length() ** 2 / (4 * math.pi)
    g, fmap = minimal_with_faces(loop)
    lw = lasso_express(g.map, dual_tree(g.map), g)
    _, nbar_g = winding(g)
    assert [lw.raw.count(k + 1) for k in range(len(lw.faces))] == [nbar_g[f] for f in lw.faces]
    assert word_to_walk(g.map, dual_tree(g.map), lw) == loop_beta_word(g.map, dual_tree(g.map), g)


def test_counterclockwise_square_is_one_letter():
    ing = ingest_polyline([[0, 0], [1, 0], [1, 1], [0, 1]])
    g, _ = minimal_with_faces(ing.loop)
    assert str(lasso_express(g.map, dual_tree(g.map), g).word) == "x1"
    assert str(lasso_express(g.map, dual_tree(g.map), g.inverse()).word) == "x1^-1"


def test_lasso_base_point_mismatch():
    mf = load("figure8.json")
    m = mf.map
    with pytest.raises(MapError, match="base-point mismatch"):
        lasso_express(m, dual_tree(m), mf.loops[0], v0=mf.loops[0].base + 1)


@pytest.mark.parametrize("points,reason", [
    ([[0, 0], [0, 0], [1, 1]], "zero length"),
    ([[0, 0], [2, 0], [1, 0], [1, 1]], "overlap"),
    ([[0, 0], [2, 0], [2, 2], [1, 0], [0, 2]], "touch"),
    ([[0, 0], [2, 2], [2, 0], [0, 2], [1, 3], [1, -1]], "single point"),
])
def test_polyline_rejections(points, reason):
    with pytest.raises(MapError, match=reason):
        ingest_polyline(points)


coords = st.integers(-4, 4)


@given(st.lists(st.tuples(coords, coords), min_size=3, max_size=7, unique=True))
def test_random_polygons(points):
    try:
        ing = ingest_polyline(points)
    except MapError as exc:
        assert str(exc).startswith("non-generic") or "overlap" in str(exc) or "touch" in str(exc) \
            or "single point" in str(exc)
        return
    loop = ing.loop
    assert validate_map(loop.map) == []
    n, nbar = winding(loop)
    assert sum(n[f] * a for f, a in ing.areas.items()) == shoelace(points)
    assert all((n[f] - nbar[f]) % 2 == 0 and abs(n[f]) <= nbar[f] for f in n)
    _, abar = amperean_areas(loop, ing.areas)
    assert abar <= ing.polyline.length() ** 2 / (4 * math.pi) + 1e-9
    _, nc = crossing_taxonomy([loop])
    assert nc == sum(len(rot) == 4 for rot in loop.map.vertices)
