"""
A naive cube-of-resolutions invariant for closed diagrams, used as an oracle.

This module deliberately avoids the matching/diagram machinery of the rest of
the package: circles of a resolution are computed as a partition of corner
tokens via a plain disjoint-set pass over the Morse word, edge maps are read
off by comparing partitions (two classes fuse, or one class splits), and the
labels transform by the usual rules (products for merges, the two-term rule
for splits).  Only the final homology computation is shared.

Gradings follow the chain-complex convention with the homological degree of a
vertex v equal to (negative crossings) - |v| and the quantum degree equal to
the label sum plus -|v| - N+ + 2N-.
"""

from __future__ import annotations

import itertools

from .homalg import FreeChainComplex, Generator, HomologyTable


def _components(t, v: tuple[int, ...]) -> list[frozenset]:
    """Circles of the v-resolution as a partition of cup/cap/corner tokens."""
    parent: dict = {}

    def find(x):
        parent.setdefault(x, x)
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    def union(x, y):
        rx, ry = find(x), find(y)
        if rx != ry:
            parent[rx] = ry

    cur: list = []
    ci = 0
    for idx, (kind, i) in enumerate(t.pieces):
        if kind == "cup":
            tok = ("cup", idx)
            find(tok)
            cur[i - 1:i - 1] = [tok, tok]
        elif kind == "cap":
            tok = ("cap", idx)
            union(tok, cur[i - 1])
            union(tok, cur[i])
            del cur[i - 1:i + 1]
        else:
            sw, nw, se, ne = ("c", ci, "SW"), ("c", ci, "NW"), ("c", ci, "SE"), ("c", ci, "NE")
            x, y = cur[i - 1], cur[i]
            parallel = (v[ci] == 0) == (kind == "xA")
            if parallel:
                union(x, sw), union(sw, se)
                union(y, nw), union(nw, ne)
                cur[i - 1], cur[i] = find(se), find(ne)
            else:
                union(x, y), union(x, sw), union(x, nw)
                union(se, ne)
                cur[i - 1] = cur[i] = find(se)
            ci += 1
    assert not cur, "oracle only handles closed diagrams"
    classes: dict = {}
    for tok in parent:
        classes.setdefault(find(tok), set()).add(tok)
    return sorted((frozenset(s) for s in classes.values()), key=lambda s: sorted(map(repr, s)))


def _writhe(t) -> tuple[int, int]:
    """Positive/negative crossing counts from a fresh orientation pass."""
    links: list[tuple] = []  # (wire_a, wire_b, same_direction)
    crossings: list[tuple] = []
    cups: list[tuple] = []
    cur: list = []
    serial = itertools.count()
    ci = 0
    for idx, (kind, i) in enumerate(t.pieces):
        if kind == "cup":
            w1, w2 = next(serial), next(serial)
            links.append((w1, w2, False))
            cups.append((idx, w1))
            cur[i - 1:i - 1] = [w1, w2]
        elif kind == "cap":
            links.append((cur[i - 1], cur[i], False))
            del cur[i - 1:i + 1]
        else:
            x, y = cur[i - 1], cur[i]
            p, q = next(serial), next(serial)
            links.append((x, q, True))
            links.append((y, p, True))
            crossings.append((kind, x, y))
            cur[i - 1], cur[i] = p, q
            ci += 1
    assert not cur
    adj: dict = {}
    for a, b, same in links:
        adj.setdefault(a, []).append((b, same))
        adj.setdefault(b, []).append((a, same))
    direction: dict = {}
    for _idx, seed in sorted(cups):
        if seed in direction:
            continue
        direction[seed] = 1
        stack = [seed]
        while stack:
            a = stack.pop()
            for b, same in adj[a]:
                d = direction[a] if same else -direction[a]
                if b in direction:
                    assert direction[b] == d, "closed curves always orient consistently"
                else:
                    direction[b] = d
                    stack.append(b)
    plus = minus = 0
    for kind, x, y in crossings:
        s = direction[x] * direction[y] * (1 if kind == "xA" else -1)
        if s > 0:
            plus += 1
        else:
            minus += 1
    return plus, minus


def khovanov_complex(t) -> FreeChainComplex:
    """Cube complex of a closed Morse-word diagram over the integers."""
    if t.m != 0 or t.n != 0:
        raise ValueError("oracle only handles (0,0)-diagrams")
    n = t.n_crossings
    n_plus, n_minus = _writhe(t)
    comps = {v: _components(t, v) for v in itertools.product((0, 1), repeat=n)}
    gens: list[Generator] = []
    index: dict = {}
    for v, circles in comps.items():
        w = sum(v)
        for labels in itertools.product((-1, 1), repeat=len(circles)):
            index[(v, labels)] = len(gens)
            gens.append(Generator(
                h=n_minus - w,
                q=sum(labels) - w - n_plus + 2 * n_minus,
                label=(v, labels),
            ))
    diff: dict[int, dict[int, int]] = {}
    for v, circles in comps.items():
        for ci in range(n):
            if v[ci] == 1:
                continue
            w_vertex = v[:ci] + (1,) + v[ci + 1:]
            circles_w = comps[w_vertex]
            sign = -1 if sum(v[:ci]) % 2 else 1
            common = set(circles) & set(circles_w)
            gone = [c for c in circles if c not in common]
            born = [c for c in circles_w if c not in common]
            for labels in itertools.product((-1, 1), repeat=len(circles)):
                src = index[(v, labels)]
                by_circle = dict(zip(circles, labels))
                targets: list[dict] = []
                if len(gone) == 2 and len(born) == 1:
                    a, b = by_circle[gone[0]], by_circle[gone[1]]
                    if a == -1 and b == -1:
                        targets = [{born[0]: -1}]
                    elif a == 1 and b == 1:
                        targets = []  # X.X = 0
                    else:
                        targets = [{born[0]: 1}]
                elif len(gone) == 1 and len(born) == 2:
                    a = by_circle[gone[0]]
                    if a == -1:
                        targets = [{born[0]: -1, born[1]: 1}, {born[0]: 1, born[1]: -1}]
                    else:
                        targets = [{born[0]: 1, born[1]: 1}]
                else:
                    raise AssertionError("an edge changes exactly one saddle's worth of circles")
                for tgt_extra in targets:
                    new_by_circle = {c: by_circle[c] for c in common}
                    new_by_circle.update(tgt_extra)
                    new_labels = tuple(new_by_circle[c] for c in circles_w)
                    tgt = index[(w_vertex, new_labels)]
                    row = diff.setdefault(src, {})
                    row[tgt] = row.get(tgt, 0) + sign
    return FreeChainComplex(gens, diff)


def khovanov_table(t) -> HomologyTable:
    return khovanov_complex(t).homology()
