"""Regenerate the golden-table fixtures from scratch.

Every closed curve with at most three transverse self-crossings is
enumerated from its Gauss word and the rotation at each crossing, keeping
the planar ones and both choices of unbounded face next to the base.
Curves are grouped up to rerooting, orientation reversal and mirror
image, which gives 1, 2, 5 and 20 classes.  Each class is matched to the
table row whose formula it reproduces once faces are named by depth
(s, t, u, v for dual distance 1..4).  Rows that share a formula receive
distinct classes.  The matched maps are written as JSON fixtures.

Run from the repository root:  python tools/make_golden_fixtures.py
"""

from __future__ import annotations

import itertools
import json
import sys
from pathlib import Path

ROOT = Path(__file__).resolve().parent.parent
sys.path.insert(0, str(ROOT / "src"))
sys.path.insert(0, str(ROOT / "tools"))

from golden_table import ROWS  # noqa: E402
from masterfield.exppoly import parse_exppoly  # noqa: E402
from masterfield.master_field import phi_symbolic  # noqa: E402
from masterfield.planar_loops import (  # noqa: E402
    CombinatorialMap,
    Loop,
    canonical_key,
    dump_map,
    minimal_with_faces,
    rebase,
    restrict,
    winding,
)

OUT = ROOT / "src" / "masterfield" / "fixtures" / "golden"
LETTERS = "stuv"


def gauss_words(c: int):
    """Words of length 2c in which each of 0..c-1 occurs twice, labels in first-occurrence order."""
    def rec(word, used, counts):
        if len(word) == 2 * c:
            yield tuple(word)
            return
        for x in range(min(used + 1, c)):
            if counts[x] < 2:
                counts[x] += 1
                yield from rec(word + [x], max(used, x + 1), counts)
                counts[x] -= 1
    if c == 0:
        yield ()
    else:
        yield from rec([], 0, [0] * c)


def build(word, turns, side):
    """Loop b -> X_{w0} -> ... -> X_{w_last} -> b; ``turns[x]`` picks the rotation at crossing x."""
    c = len(word) // 2
    size = 2 * c + 1
    sigma = [0] * (2 * size)
    sigma[0], sigma[2 * c + size] = 2 * c + size, 0
    for x in range(c):
        p, q = [j for j, y in enumerate(word) if y == x]
        o1, i1, o2, i2 = p + 1, p + size, q + 1, q + size
        cyc = (o1, o2, i1, i2) if turns[x] else (o1, i2, i1, o2)
        for k in range(4):
            sigma[cyc[k]] = cyc[(k + 1) % 4]
    alpha = [(d + size) % (2 * size) for d in range(2 * size)]
    m = CombinatorialMap(alpha, sigma, 0 if side == 0 else size)
    if m.euler() != 2:
        return None
    return Loop(m, tuple(range(size)))


def mirror(loop: Loop) -> Loop:
    m = loop.map
    inv = [0] * m.num_darts
    for d, s in enumerate(m.sigma):
        inv[s] = d
    return Loop(CombinatorialMap(m.alpha, tuple(inv), m.alpha[m.unbounded]), loop.darts)


def class_key(loop: Loop):
    g, _ = minimal_with_faces(loop)
    variants = [g, restrict(g.inverse())[0]]
    variants += [restrict(mirror(v))[0] for v in list(variants)]
    return min(canonical_key(rebase(v, j)[0]) for v in variants for j in range(len(v.darts)))


def depth_labels(loop: Loop) -> dict[int, tuple[int, int]]:
    g, fmap = minimal_with_faces(loop)
    _, nbar = winding(g)
    return {f: nbar[fmap[f]] for f in loop.map.bounded_faces}


def match(expr, depth, formula):
    """Face labels under which ``expr`` equals ``formula``, or None."""
    target = parse_exppoly(formula)
    groups: dict[int, list[int]] = {}
    for f, d in sorted(depth.items()):
        groups.setdefault(d, []).append(f)
    if len(target.variables) != len(depth):
        return None
    keys = sorted(groups)
    for perms in itertools.product(*[itertools.permutations(range(1, len(groups[d]) + 1)) for d in keys]):
        lab = {}
        for d, perm in zip(keys, perms):
            fs = groups[d]
            for f, i in zip(fs, perm):
                lab[f] = LETTERS[d - 1] if len(fs) == 1 else f"{LETTERS[d - 1]}{i}"
        if set(lab.values()) == set(target.variables) and expr.rename({f"F{f}": n for f, n in lab.items()}) == target:
            return lab
    return None


def main() -> None:
    classes: dict = {}
    for c in range(4):
        for word in gauss_words(c):
            for turns in itertools.product((0, 1), repeat=c):
                for side in (0, 1):
                    loop = build(word, turns, side)
                    if loop is not None:
                        classes.setdefault((c, class_key(loop)), loop)
    counts = [sum(1 for k in classes if k[0] == c) for c in range(4)]
    print("classes per crossing number:", counts)
    rows_by_formula: dict = {}
    for c, idx, formula in ROWS:
        rows_by_formula.setdefault((c, formula), []).append(idx)
    assigned: dict = {}
    for (c, _), loop in sorted(classes.items(), key=lambda kv: (kv[0][0], repr(kv[0][1]))):
        expr = phi_symbolic(loop).expr
        depth = depth_labels(loop)
        for (rc, formula), idxs in rows_by_formula.items():
            if rc != c:
                continue
            lab = match(expr, depth, formula)
            if lab is None:
                continue
            free = [i for i in idxs if (c, i) not in assigned]
            if not free:
                raise SystemExit(f"more classes than rows for {formula}")
            assigned[(c, free[0])] = (loop, lab, formula)
            break
        else:
            raise SystemExit(f"class with {c} crossings matches no row: {expr}")
    if len(assigned) != len(ROWS):
        raise SystemExit(f"only {len(assigned)} of {len(ROWS)} rows matched")
    OUT.mkdir(parents=True, exist_ok=True)
    for (c, idx), (loop, lab, formula) in sorted(assigned.items()):
        data = dump_map(loop.map, [loop], labels=lab)
        data["crossings"] = c
        data["row"] = idx
        data["expected"] = formula
        write(OUT / f"c{c}_{idx:02d}.json", data)
    print(f"wrote {len(assigned)} fixtures to {OUT}")
    # the two named examples used by the command-line docs
    for name, key in (("circle", (0, 1)), ("figure8", (1, 2))):
        loop, lab, formula = assigned[key]
        data = dump_map(loop.map, [loop], labels=lab)
        data["expected"] = formula
        write(OUT.parent / f"{name}.json", data)


def write(path: Path, data: dict) -> None:
    """One top-level key per line keeps the fixtures reviewable in diffs."""
    body = ",\n".join(f" {json.dumps(k)}: {json.dumps(v)}" for k, v in data.items())
    path.write_text("{\n" + body + "\n}\n")


if __name__ == "__main__":
    main()
