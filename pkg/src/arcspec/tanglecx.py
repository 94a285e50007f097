"""
Tangle diagrams as Morse words, cubes of resolutions, and bimodule complexes.

A tangle diagram is read left to right as a word in elementary pieces: `cup i`
births an arc at heights (i, i+1), `cap i` joins the strands at heights i and
i+1, and `xA i` / `xB i` cross them (xA: the strand entering at height i
passes over the one at height i+1; xB: under).  Resolving every crossing (xA:
bit 0 keeps the two strands parallel, bit 1 rejoins them as a cap-cup pair;
xB mirrored) produces the cube of flat tangles, and gluing platform-admissible
matchings onto both ends produces, vertex by vertex, the generator sets of the
tangle's bimodule complex.  Edge maps are single surgeries at the crossing
sites with the usual alternating cube signs.

The same construction runs over a "family" abstraction so that the complex of
a composite tangle can be built on the disjoint union of the two factors'
resolved diagrams joined by explicit junction arcs; the gluing map then lands
in that complex on the nose.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Iterable, Optional, Sequence

from .frobenius import (
    SurgeryScript,
    SurgeryStep,
    all_labelings,
    label_qsum,
    match_circles,
    matching_arcs,
    pair_diagram_arcs,
    relabel_sum,
    script_trace,
    transport_labels,
    union_arcs,
    ArcDict,
    X,
)
from .homalg import FreeChainComplex, Generator, SparseMap, is_chain_map, invariant_factors, tensor_over_category
from .planarcurves import (
    CircleDecomposition,
    CrossinglessMatching,
    FlatTangle,
    PlatformSpec,
    circles_of_arcs,
    classify_circles,
    iota_power,
)
from .platformalg import PlatformAlgebra, iota_extend_labels

Piece = tuple[str, int]
Vertex = tuple[int, ...]

PIECE_KINDS = ("cup", "cap", "xA", "xB")


class TangleParseError(ValueError):
    pass


@dataclass(frozen=True)
class TangleDiagram:
    """An oriented tangle diagram in Morse-word form.

    `orient` holds boundary orientation overrides (side, point, direction)
    with direction +1 for rightward; unlisted strands default to rightward
    through-strands, same-side strands run lower-to-higher endpoint, and
    closed components are traversed with the lower branch of their first cup
    moving rightward (the counterclockwise convention).
    """

    m: int
    n: int
    pieces: tuple[Piece, ...] = ()
    orient: tuple[tuple[str, int, int], ...] = ()

    def __post_init__(self):
        if self.m < 0 or self.n < 0:
            raise ValueError("endpoint counts must be non-negative")
        count = self.m
        for kind, i in self.pieces:
            if kind not in PIECE_KINDS:
                raise ValueError(f"unknown piece {kind!r}")
            if kind == "cup":
                if not 1 <= i <= count + 1:
                    raise ValueError(f"cup {i} out of range with {count} strands")
                count += 2
            else:
                if not 1 <= i <= count - 1:
                    raise ValueError(f"{kind} {i} out of range with {count} strands")
                if kind == "cap":
                    count -= 2
        if count != self.n:
            raise ValueError(f"piece word ends with {count} strands, expected {self.n}")
        for side, p, d in self.orient:
            if side not in ("L", "R") or d not in (1, -1):
                raise ValueError(f"bad orientation entry {(side, p, d)}")
            limit = self.m if side == "L" else self.n
            if not 1 <= p <= limit:
                raise ValueError(f"orientation point {side}{p} out of range")

    @property
    def crossings(self) -> tuple[int, ...]:
        return tuple(idx for idx, (kind, _) in enumerate(self.pieces) if kind in ("xA", "xB"))

    @property
    def n_crossings(self) -> int:
        return len(self.crossings)

    def concat(self, other: "TangleDiagram") -> "TangleDiagram":
        if self.n != other.m:
            raise ValueError(f"cannot concatenate ({self.m},{self.n}) with ({other.m},{other.n})")
        orient = tuple(o for o in self.orient if o[0] == "L") + tuple(o for o in other.orient if o[0] == "R")
        return TangleDiagram(self.m, other.n, self.pieces + other.pieces, orient)

    def with_disjoint_circle(self) -> "TangleDiagram":
        """The same tangle with one unknotted circle above everything."""
        extra = (("cup", self.n + 1), ("cap", self.n + 1))
        return TangleDiagram(self.m, self.n, self.pieces + extra, self.orient)


def parse_diagram(text: str) -> TangleDiagram:
    """Parse the one-piece-per-line tangle DSL."""
    m = n = None
    pieces: list[Piece] = []
    orient: list[tuple[str, int, int]] = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        tokens = line.split()
        if m is None:
            if tokens[0] != "tangle" or len(tokens) != 3:
                raise TangleParseError(f"line {lineno}: expected 'tangle <m> <n>', got {line!r}")
            try:
                m, n = int(tokens[1]), int(tokens[2])
            except ValueError:
                raise TangleParseError(f"line {lineno}: endpoint counts must be integers") from None
            continue
        if tokens[0] in PIECE_KINDS:
            if len(tokens) != 2:
                raise TangleParseError(f"line {lineno}: expected '{tokens[0]} <i>'")
            try:
                pieces.append((tokens[0], int(tokens[1])))
            except ValueError:
                raise TangleParseError(f"line {lineno}: height must be an integer") from None
        elif tokens[0] == "orient":
            if len(tokens) != 3 or not tokens[1] or tokens[1][0] not in "LR" or tokens[2] not in ("right", "left"):
                raise TangleParseError(f"line {lineno}: expected 'orient <L|R><point> <right|left>'")
            try:
                point = int(tokens[1][1:])
            except ValueError:
                raise TangleParseError(f"line {lineno}: bad orientation point {tokens[1]!r}") from None
            orient.append((tokens[1][0], point, 1 if tokens[2] == "right" else -1))
        else:
            raise TangleParseError(f"line {lineno}: unparsable token {tokens[0]!r}")
    if m is None:
        raise TangleParseError("missing 'tangle <m> <n>' header")
    try:
        return TangleDiagram(m, n, tuple(pieces), tuple(orient))
    except ValueError as exc:
        raise TangleParseError(str(exc)) from None


def format_diagram(t: TangleDiagram) -> str:
    lines = [f"tangle {t.m} {t.n}"]
    lines += [f"{kind} {i}" for kind, i in t.pieces]
    lines += [f"orient {side}{p} {'right' if d == 1 else 'left'}" for side, p, d in t.orient]
    return "\n".join(lines) + "\n"


def add_horizontal_strands(t, k1: int, k2: int):
    """Add k1 straight strands below and k2 above (tangle diagrams or flat tangles)."""
    if isinstance(t, FlatTangle):
        from .planarcurves import add_horizontal_strands as flat_add

        return flat_add(t, k1, k2)
    pieces = tuple((kind, i + k1) for kind, i in t.pieces)
    orient = tuple((side, p + k1, d) for side, p, d in t.orient)
    return TangleDiagram(t.m + k1 + k2, t.n + k1 + k2, pieces, orient)


# ---------------------------------------------------------------------------
# Resolutions


def resolved_arcs(t: TangleDiagram, v: Vertex) -> ArcDict:
    """Arc multigraph of the v-resolution.

    Nodes are ("L", i), ("R", j), cup ends ("u", piece, 0|1) and crossing
    out-ports ("p", crossing, 0|1); the node set does not depend on v, only
    the two arcs at each crossing do, so cube edge maps are single surgeries
    on the arcs ("x", c, 0) and ("x", c, 1).
    """
    if len(v) != t.n_crossings:
        raise ValueError(f"vertex length {len(v)} != crossing count {t.n_crossings}")
    arcs: ArcDict = {}
    cur: list = [("L", i) for i in range(1, t.m + 1)]
    ci = 0
    for idx, (kind, i) in enumerate(t.pieces):
        if kind == "cup":
            u, w = ("u", idx, 0), ("u", idx, 1)
            arcs[("cup", idx)] = (u, w, 0)
            cur[i - 1:i - 1] = [u, w]
        elif kind == "cap":
            arcs[("cap", idx)] = (cur[i - 1], cur[i], 0)
            del cur[i - 1:i + 1]
        else:
            x, y = cur[i - 1], cur[i]
            p, q = ("p", ci, 0), ("p", ci, 1)
            identity_smoothing = (v[ci] == 0) == (kind == "xA")
            if identity_smoothing:
                arcs[("x", ci, 0)] = (x, p, 0)
                arcs[("x", ci, 1)] = (y, q, 0)
            else:
                arcs[("x", ci, 0)] = (x, y, 0)
                arcs[("x", ci, 1)] = (p, q, 0)
            cur[i - 1], cur[i] = p, q
            ci += 1
    for j, w in enumerate(cur, start=1):
        arcs[("end", j)] = (w, ("R", j), 0)
    return arcs


def resolve(t: TangleDiagram, v: Vertex) -> FlatTangle:
    """The v-resolution as a canonical flat tangle."""
    dec = circles_of_arcs(resolved_arcs(t, v))
    pairs = []
    closed = 0
    for c in dec.circles:
        boundary = sorted(
            (p if side == "L" else t.m + p)
            for node in c.nodes
            if isinstance(node, tuple) and len(node) == 2 and node[0] in ("L", "R")
            for side, p in [node]
        )
        if not boundary:
            closed += 1
        else:
            assert len(boundary) == 2, "an open component must have exactly two endpoints"
            pairs.append((boundary[0], boundary[1]))
    return FlatTangle(t.m, t.n, tuple(pairs), closed)


# ---------------------------------------------------------------------------
# Orientations and crossing signs


class _ParityUnionFind:
    """Union-find tracking a +-1 relation between each node and its root."""

    def __init__(self):
        self.parent: dict = {}
        self.rel: dict = {}

    def add(self, x) -> None:
        if x not in self.parent:
            self.parent[x] = x
            self.rel[x] = 1

    def find(self, x):
        self.add(x)
        path = []
        r = x
        while self.parent[r] != r:
            path.append(r)
            r = self.parent[r]
        sign = 1
        for y in reversed(path):
            sign *= self.rel[y]
            self.parent[y] = r
            self.rel[y] = sign
        return r

    def sign_to_root(self, x) -> int:
        self.find(x)
        return self.rel[x]

    def union(self, x, y, flip: int) -> None:
        """Impose dir(x) = flip * dir(y)."""
        rx, ry = self.find(x), self.find(y)
        if rx == ry:
            assert self.rel[x] == flip * self.rel[y], "orientation relations are inconsistent"
            return
        # dir(x) = rel[x] * dir(rx); want dir(rx) = rel[x]^-1 * flip * rel[y] * dir(ry).
        self.parent[rx] = ry
        self.rel[rx] = self.rel[x] * flip * self.rel[y]


def _orientation_scan(t: TangleDiagram):
    """Collect direction relations, crossing entry wires, and cup nodes."""
    uf = _ParityUnionFind()
    crossings: list[tuple[str, object, object]] = []
    cups: list[tuple[int, object]] = []
    cur: list = [("L", i) for i in range(1, t.m + 1)]
    for node in cur:
        uf.add(node)
    ci = 0
    for idx, (kind, i) in enumerate(t.pieces):
        if kind == "cup":
            u, w = ("u", idx, 0), ("u", idx, 1)
            uf.union(u, w, -1)
            cups.append((idx, u))
            cur[i - 1:i - 1] = [u, w]
        elif kind == "cap":
            uf.union(cur[i - 1], cur[i], -1)
            del cur[i - 1:i + 1]
        else:
            x, y = cur[i - 1], cur[i]
            p, q = ("p", ci, 0), ("p", ci, 1)
            # The strand entering at height i exits at height i+1 and vice versa.
            uf.union(x, q, 1)
            uf.union(y, p, 1)
            crossings.append((kind, x, y))
            cur[i - 1], cur[i] = p, q
            ci += 1
    for j, w in enumerate(cur, start=1):
        uf.union(w, ("R", j), 1)
    return uf, crossings, cups


def orientation_directions(t: TangleDiagram, closure: bool = False) -> dict:
    """Direction (+1 rightward) of the strand at every wire node.

    With closure=True the annular closure's seam arcs impose dir(L_i) =
    dir(R_i) before seeding, so the propagated orientation is one of the
    closed link diagram rather than of the open tangle.
    """
    uf, _crossings, cups = _orientation_scan(t)
    if closure:
        if t.m != t.n:
            raise ValueError("closure orientation needs m = n")
        for i in range(1, t.m + 1):
            uf.union(("L", i), ("R", i), 1)
    components: dict = {}
    for x in list(uf.parent):
        components.setdefault(uf.find(x), []).append(x)
    overrides = {(side, p): d for side, p, d in t.orient}
    seeds: dict = {}
    for root, nodes in components.items():
        over_here = sorted(
            ((node, overrides[(node[0], node[1])]) for node in nodes
             if isinstance(node, tuple) and len(node) == 2 and node[0] in ("L", "R")
             and (node[0], node[1]) in overrides),
            key=repr,
        )
        if over_here:
            seeds[root] = over_here[0]
            continue
        ls = sorted(p for node in nodes if isinstance(node, tuple) and len(node) == 2 and node[0] == "L" for p in [node[1]])
        rs = sorted(p for node in nodes if isinstance(node, tuple) and len(node) == 2 and node[0] == "R" for p in [node[1]])
        if ls and rs:
            seeds[root] = (("L", ls[0]), 1)
        elif len(ls) == 2:
            seeds[root] = (("L", ls[0]), 1)
        elif len(rs) == 2:
            seeds[root] = (("R", rs[1]), 1)
        else:
            cup_here = min(idx for idx, u in cups if uf.find(u) == root)
            seeds[root] = (("u", cup_here, 0), 1)
    dirs: dict = {}
    for root, nodes in components.items():
        seed_node, seed_dir = seeds[root]
        base = seed_dir * uf.sign_to_root(seed_node)
        for x in nodes:
            dirs[x] = base * uf.sign_to_root(x)
    for (side, p), d in overrides.items():
        if dirs.get((side, p), d) != d:
            raise ValueError(f"inconsistent orientation seeds at {side}{p}")
    return dirs


def crossing_signs(t: TangleDiagram, closure: bool = False) -> list[int]:
    """Sign of each crossing under the propagated orientation."""
    dirs = orientation_directions(t, closure=closure)
    _uf, crossings, _cups = _orientation_scan(t)
    signs = []
    for kind, x, y in crossings:
        s = dirs[x] * dirs[y]
        signs.append(s if kind == "xA" else -s)
    return signs


def orient_and_sign(t: TangleDiagram) -> tuple[int, int]:
    """(positive, negative) crossing counts."""
    signs = crossing_signs(t)
    return sum(1 for s in signs if s > 0), sum(1 for s in signs if s < 0)


# ---------------------------------------------------------------------------
# Cube bookkeeping


def cube_vertices(n: int) -> list[Vertex]:
    return list(itertools.product((0, 1), repeat=n))


def vertex_weight(v: Vertex) -> int:
    return sum(v)


def cube_sign(v: Vertex, i: int) -> int:
    return -1 if sum(v[:i]) % 2 else 1


# ---------------------------------------------------------------------------
# Resolved families (plain Morse words, or glued pairs)


class MorseFamily:
    """The cube of resolutions of a single Morse-word diagram."""

    def __init__(self, t: TangleDiagram):
        self.tangle = t
        signs = crossing_signs(t)
        self.n_plus = sum(1 for s in signs if s > 0)
        self.n_minus = sum(1 for s in signs if s < 0)
        self.m = t.m
        self.n = t.n
        self.n_crossings = t.n_crossings
        self._arcs_cache: dict[Vertex, ArcDict] = {}

    def arcs(self, v: Vertex) -> ArcDict:
        if v not in self._arcs_cache:
            self._arcs_cache[v] = resolved_arcs(self.tangle, v)
        return self._arcs_cache[v]

    def edge_step(self, ci: int) -> SurgeryStep:
        return SurgeryStep(("x", ci, 0), ("x", ci, 1))

    def left_node(self, i: int):
        return ("L", i)

    def right_node(self, j: int):
        return ("R", j)


class ConcatFamily:
    """Resolutions of a composite, as two factor diagrams joined by junction arcs."""

    def __init__(self, first, second):
        if first.n != second.m:
            raise ValueError(f"cannot glue families with {first.n} != {second.m} middle points")
        self.first = first
        self.second = second
        self.m = first.m
        self.n = second.n
        self.n_crossings = first.n_crossings + second.n_crossings
        self.n_plus = first.n_plus + second.n_plus
        self.n_minus = first.n_minus + second.n_minus
        self._arcs_cache: dict[Vertex, ArcDict] = {}

    def arcs(self, v: Vertex) -> ArcDict:
        if v in self._arcs_cache:
            return self._arcs_cache[v]
        n1 = self.first.n_crossings
        arcs = union_arcs(self.first.arcs(v[:n1]), self.second.arcs(v[n1:]))
        for i in range(1, self.first.n + 1):
            arcs[("junc", i)] = ((0, self.first.right_node(i)), (1, self.second.left_node(i)), 0)
        self._arcs_cache[v] = arcs
        return arcs

    def edge_step(self, ci: int) -> SurgeryStep:
        n1 = self.first.n_crossings
        if ci < n1:
            s = self.first.edge_step(ci)
            return SurgeryStep((0, s.arc1), (0, s.arc2), s.new_seams)
        s = self.second.edge_step(ci - n1)
        return SurgeryStep((1, s.arc1), (1, s.arc2), s.new_seams)

    def left_node(self, i: int):
        return (0, self.first.left_node(i))

    def right_node(self, j: int):
        return (1, self.second.right_node(j))


# ---------------------------------------------------------------------------
# The bimodule complex


@dataclass
class _VertexData:
    arcs: ArcDict
    dec: CircleDecomposition
    dropped: frozenset
    kept: list
    gen_index: dict


class BimoduleComplex:
    """Cube-of-resolutions complex of bimodules over two platform algebras.

    For each admissible pair (a, b) the cell is a free chain complex whose
    generators at vertex v are the surviving labelings of the closed diagram
    obtained by gluing the (nested) matchings onto the resolved family; with
    quotient=True the labelings in the platform submodule are deleted, which
    is well defined because cube maps send that submodule to itself.
    """

    def __init__(self, family, left_spec: PlatformSpec, right_spec: PlatformSpec,
                 quotient: bool = True, base_tangle: Optional[TangleDiagram] = None):
        if left_spec.k1 - left_spec.k2 != right_spec.k1 - right_spec.k2:
            raise ValueError("platform specs must satisfy h1 - h2 = k1 - k2")
        self.family = family
        self.left_spec = left_spec
        self.right_spec = right_spec
        self.quotient = quotient
        self.base_tangle = base_tangle
        self.K1 = max(left_spec.k1, right_spec.k1)
        self.K2 = max(left_spec.k2, right_spec.k2)
        self.left_power = self.K1 - left_spec.k1
        self.right_power = self.K1 - right_spec.k1
        if family.m != left_spec.n + self.K1 + self.K2:
            raise ValueError(f"family has {family.m} left points, specs demand {left_spec.n + self.K1 + self.K2}")
        if family.n != right_spec.n + self.K1 + self.K2:
            raise ValueError(f"family has {family.n} right points, specs demand {right_spec.n + self.K1 + self.K2}")
        self.left_algebra = PlatformAlgebra(left_spec, quotient=quotient)
        self.right_algebra = PlatformAlgebra(right_spec, quotient=quotient)
        self.shift = family.n // 2
        lower_l = frozenset(family.left_node(i) for i in range(1, self.K1 + 1))
        upper_l = frozenset(family.left_node(i) for i in range(family.m - self.K2 + 1, family.m + 1))
        lower_r = frozenset(family.right_node(i) for i in range(1, self.K1 + 1))
        upper_r = frozenset(family.right_node(i) for i in range(family.n - self.K2 + 1, family.n + 1))
        self.platform_sets = (lower_l, upper_l, lower_r, upper_r)
        self._pair_cache: dict = {}
        self._action_cache: dict = {}

    @classmethod
    def from_tangle(cls, t: TangleDiagram, left_spec: PlatformSpec, right_spec: PlatformSpec,
                    quotient: bool = True) -> "BimoduleComplex":
        if t.m != left_spec.n or t.n != right_spec.n:
            raise ValueError(f"({t.m},{t.n})-tangle does not fit specs {left_spec}, {right_spec}")
        if left_spec.k1 - left_spec.k2 != right_spec.k1 - right_spec.k2:
            raise ValueError("platform specs must satisfy h1 - h2 = k1 - k2")
        k1, k2 = max(left_spec.k1, right_spec.k1), max(left_spec.k2, right_spec.k2)
        family = MorseFamily(add_horizontal_strands(t, k1, k2))
        return cls(family, left_spec, right_spec, quotient=quotient, base_tangle=t)

    @property
    def left_objects(self):
        return self.left_algebra.objects

    @property
    def right_objects(self):
        return self.right_algebra.objects

    @property
    def n_plus(self) -> int:
        return self.family.n_plus

    @property
    def n_minus(self) -> int:
        return self.family.n_minus

    def vertices(self) -> list[Vertex]:
        return cube_vertices(self.family.n_crossings)

    def glued_matchings(self, a, b) -> tuple[CrossinglessMatching, CrossinglessMatching]:
        return iota_power(a, self.left_power), iota_power(b, self.right_power)

    def diagram_arcs(self, a, b, v: Vertex) -> ArcDict:
        big_a, big_b = self.glued_matchings(a, b)
        arcs = dict(self.family.arcs(v))
        for i, j in big_a.pairs:
            arcs[("La", i, j)] = (self.family.left_node(i), self.family.left_node(j), 0)
        for i, j in big_b.pairs:
            arcs[("Rb", i, j)] = (self.family.right_node(i), self.family.right_node(j), 0)
        return arcs

    def dropped_labelings(self, dec: CircleDecomposition) -> frozenset:
        """Labelings in the platform submodule of one vertex piece."""
        tags = classify_circles(dec, self.platform_sets)
        basis = all_labelings(len(dec))
        if "typeIII" in tags:
            return frozenset(basis)
        plat = [i for i, t in enumerate(tags) if t == "typeII"]
        return frozenset(l for l in basis if any(l[i] == X for i in plat))

    def _pair_data(self, a, b):
        key = (a, b)
        if key in self._pair_cache:
            return self._pair_cache[key]
        if a not in self.left_objects or b not in self.right_objects:
            raise ValueError(f"({a}, {b}) is not an admissible object pair")
        n_minus, n_plus = self.n_minus, self.n_plus
        gens: list[Generator] = []
        data: dict[Vertex, _VertexData] = {}
        for v in self.vertices():
            arcs = self.diagram_arcs(a, b, v)
            dec = circles_of_arcs(arcs)
            dropped = self.dropped_labelings(dec)
            basis = all_labelings(len(dec))
            kept = [l for l in basis if l not in dropped] if self.quotient else list(basis)
            w = vertex_weight(v)
            gen_index = {}
            for labels in kept:
                gen_index[labels] = len(gens)
                gens.append(Generator(
                    h=n_minus - w,
                    q=label_qsum(labels) + self.shift - w - n_plus + 2 * n_minus,
                    label=(v, labels),
                ))
            data[v] = _VertexData(arcs, dec, dropped, kept, gen_index)
        diff: SparseMap = {}
        for v in self.vertices():
            vd = data[v]
            for ci in range(self.family.n_crossings):
                if v[ci] == 1:
                    continue
                w_vertex = v[:ci] + (1,) + v[ci + 1:]
                wd = data[w_vertex]
                trace = script_trace(vd.arcs, SurgeryScript((self.family.edge_step(ci),)))
                assert [c.nodes for c in trace.final.circles] == [c.nodes for c in wd.dec.circles]
                sign = cube_sign(v, ci)
                for labels in vd.kept:
                    src = vd.gen_index[labels]
                    for out_labels, coeff in transport_labels(trace, labels).items():
                        tgt = wd.gen_index.get(out_labels)
                        if tgt is None:
                            continue  # image in the deleted submodule
                        row = diff.setdefault(src, {})
                        row[tgt] = row.get(tgt, 0) + sign * coeff
        cell = FreeChainComplex(gens, diff)
        self._pair_cache[key] = (cell, data)
        return self._pair_cache[key]

    def cell(self, a, b) -> FreeChainComplex:
        return self._pair_data(a, b)[0]

    def vertex_data(self, a, b) -> dict[Vertex, _VertexData]:
        return self._pair_data(a, b)[1]

    def j_basis(self, a, b) -> dict[Vertex, frozenset]:
        return {v: vd.dropped for v, vd in self.vertex_data(a, b).items()}

    # -- algebra actions ----------------------------------------------------

    def right_action(self, a, b, bp, j: int) -> SparseMap:
        """Action of the j-th basis element of hom(b, bp) on cell(a, b)."""
        key = ("R", a, b, bp, j)
        if key in self._action_cache:
            return self._action_cache[key]
        f_labels = self.right_algebra.hom_basis(b, bp)[j]
        big_b, big_bp, ext_labels = iota_extend_labels(b, bp, f_labels, self.right_power)
        src_data = self.vertex_data(a, b)
        tgt_data = self.vertex_data(a, bp)
        out: SparseMap = {}
        for v, vd in src_data.items():
            union = union_arcs(vd.arcs, pair_diagram_arcs(big_b, big_bp))
            steps = tuple(
                SurgeryStep((0, ("Rb", i, j2)), (1, ("a", i, j2)))
                for i, j2 in sorted(big_b.pairs)
            )
            trace = script_trace(union, SurgeryScript(steps))
            project = lambda node: node[1] if node[0] == 0 else self.family.right_node(node[1])
            matching = match_circles(trace.final, tgt_data[v].dec, project)
            n_tgt = len(tgt_data[v].dec)
            for labels in vd.kept:
                src = vd.gen_index[labels]
                total = transport_labels(trace, labels + ext_labels)
                for out_labels, coeff in relabel_sum(total, matching, n_tgt).items():
                    tgt = tgt_data[v].gen_index.get(out_labels)
                    if tgt is None:
                        continue
                    row = out.setdefault(src, {})
                    row[tgt] = row.get(tgt, 0) + coeff
        self._action_cache[key] = out
        return out

    def left_action(self, ap, a, b, j: int) -> SparseMap:
        """Action of the j-th basis element of hom(ap, a) on cell(a, b)."""
        key = ("L", ap, a, b, j)
        if key in self._action_cache:
            return self._action_cache[key]
        f_labels = self.left_algebra.hom_basis(ap, a)[j]
        big_ap, big_a, ext_labels = iota_extend_labels(ap, a, f_labels, self.left_power)
        src_data = self.vertex_data(a, b)
        tgt_data = self.vertex_data(ap, b)
        out: SparseMap = {}
        for v, vd in src_data.items():
            union = union_arcs(vd.arcs, pair_diagram_arcs(big_ap, big_a))
            steps = tuple(
                SurgeryStep((1, ("b", i, j2)), (0, ("La", i, j2)))
                for i, j2 in sorted(big_a.pairs)
            )
            trace = script_trace(union, SurgeryScript(steps))
            project = lambda node: node[1] if node[0] == 0 else self.family.left_node(node[1])
            matching = match_circles(trace.final, tgt_data[v].dec, project)
            n_tgt = len(tgt_data[v].dec)
            for labels in vd.kept:
                src = vd.gen_index[labels]
                total = transport_labels(trace, labels + ext_labels)
                for out_labels, coeff in relabel_sum(total, matching, n_tgt).items():
                    tgt = tgt_data[v].gen_index.get(out_labels)
                    if tgt is None:
                        continue
                    row = out.setdefault(src, {})
                    row[tgt] = row.get(tgt, 0) + coeff
        self._action_cache[key] = out
        return out

    # -- convenience --------------------------------------------------------

    def homology_tables(self) -> dict:
        return {(a, b): self.cell(a, b).homology() for a in self.left_objects for b in self.right_objects}

    def crt_decomposition(self, a):
        """For a flat family: a<T> as a matching plus unknots, or None if a
        same-platform arc is present.  Returns (matching, circle count)."""
        if self.family.n_crossings != 0:
            raise ValueError("only flat tangles decompose this way")
        big_a, _ = self.glued_matchings(a, self.right_objects[0])
        arcs = dict(self.family.arcs(()))
        for i, j in big_a.pairs:
            arcs[("La", i, j)] = (self.family.left_node(i), self.family.left_node(j), 0)
        dec = circles_of_arcs(arcs)
        right_nodes = {self.family.right_node(i): i for i in range(1, self.family.n + 1)}
        pairs = []
        closed = 0
        for c in dec.circles:
            ends = sorted(right_nodes[x] for x in c.nodes if x in right_nodes)
            if not ends:
                closed += 1
                continue
            assert len(ends) == 2
            pairs.append((ends[0], ends[1]))
        matching = CrossinglessMatching(self.family.n, tuple(pairs))
        lower = frozenset(range(1, self.K1 + 1))
        upper = frozenset(range(self.family.n - self.K2 + 1, self.family.n + 1))
        for i, j in pairs:
            if (i in lower and j in lower) or (i in upper and j in upper):
                return None
        return matching, closed


def build_bimodule_complex(t: TangleDiagram, left_spec: PlatformSpec, right_spec: PlatformSpec,
                           quotient: bool = True) -> BimoduleComplex:
    return BimoduleComplex.from_tangle(t, left_spec, right_spec, quotient=quotient)


# ---------------------------------------------------------------------------
# Tensor slices and the gluing map


class RightSlice:
    """One row M(a0, -) of a bimodule complex, as a right module."""

    def __init__(self, bim: BimoduleComplex, a0):
        self.bim = bim
        self.a0 = a0
        self.objects = bim.right_objects

    def cell(self, b):
        return self.bim.cell(self.a0, b)

    def right_action(self, b, bp, j):
        return self.bim.right_action(self.a0, b, bp, j)

    def block(self, b, i):
        return self.cell(b).generators[i].label[0]

    def koszul_sign(self, b, i):
        return -1 if vertex_weight(self.block(b, i)) % 2 else 1


class LeftSlice:
    """One column N(-, c0) of a bimodule complex, as a left module."""

    def __init__(self, bim: BimoduleComplex, c0):
        self.bim = bim
        self.c0 = c0
        self.objects = bim.left_objects

    def cell(self, b):
        return self.bim.cell(b, self.c0)

    def left_action(self, b, bp, j):
        return self.bim.left_action(b, bp, self.c0, j)

    def block(self, b, j):
        return self.cell(b).generators[j].label[0]


@dataclass
class PsiCell:
    """The gluing map on one (a, c) pair, with its verification data."""

    tensor: object
    glued_cell: FreeChainComplex
    psi: SparseMap
    chain_map: bool
    vertexwise_iso: bool


def glued_complex(bim1: BimoduleComplex, bim2: BimoduleComplex, quotient: Optional[bool] = None) -> BimoduleComplex:
    """The composite tangle's complex on the junction-arc family."""
    if bim1.right_spec != bim2.left_spec:
        raise ValueError("middle specs must agree")
    if quotient is None:
        quotient = bim1.quotient
    family = ConcatFamily(bim1.family, bim2.family)
    return BimoduleComplex(family, bim1.left_spec, bim2.right_spec, quotient=quotient)


def gluing_map_psi(bim1: BimoduleComplex, bim2: BimoduleComplex, a, c,
                   glued: Optional[BimoduleComplex] = None) -> PsiCell:
    """The canonical cobordism map (tensor over the middle algebra) -> glued cell.

    Requires all platform numbers equal across the three specs (the nesting
    isomorphisms reduce the general statement to this case), so no nesting
    powers appear and the middle matchings glue on directly.
    """
    specs = (bim1.left_spec, bim1.right_spec, bim2.left_spec, bim2.right_spec)
    if len({(s.k1, s.k2) for s in specs}) != 1:
        raise ValueError("gluing requires equal platform numbers on all three sides")
    if bim1.right_spec != bim2.left_spec:
        raise ValueError("middle specs must agree")
    if bim1.quotient != bim2.quotient:
        raise ValueError("factors must share the quotient mode")
    if glued is None:
        glued = glued_complex(bim1, bim2)
    middle = bim1.right_algebra
    tensor = tensor_over_category(RightSlice(bim1, a), LeftSlice(bim2, c), middle)
    glued_cell, glued_data = glued._pair_data(a, c)

    # Ambient gluing matrix: surger the middle matching's two copies.
    amb_psi: SparseMap = {}
    n1 = bim1.family.n_crossings
    for p, (b, i, j) in enumerate(tensor.ambient):
        vd1 = bim1.vertex_data(a, b)
        vd2 = bim2.vertex_data(b, c)
        gm = bim1.cell(a, b).generators[i]
        gn = bim2.cell(b, c).generators[j]
        v, labs_m = gm.label
        w, labs_n = gn.label
        union = union_arcs(vd1[v].arcs, vd2[w].arcs)
        steps = tuple(
            SurgeryStep((0, ("Rb", i2, j2)), (1, ("La", i2, j2)))
            for i2, j2 in sorted(b.pairs)
        )
        trace = script_trace(union, SurgeryScript(steps))
        uw = v + w
        wd = glued_data[uw]
        assert [cc.nodes for cc in trace.final.circles] == [cc.nodes for cc in wd.dec.circles]
        row: dict[int, int] = {}
        for out_labels, coeff in transport_labels(trace, labs_m + labs_n).items():
            tgt = wd.gen_index.get(out_labels)
            if tgt is None:
                continue
            row[tgt] = row.get(tgt, 0) + coeff
        if row:
            amb_psi[p] = row

    psi: SparseMap = {}
    for g in range(len(tensor.complex.generators)):
        image: dict[int, int] = {}
        for p, cf in tensor.lift(g).items():
            for tgt, cf2 in amb_psi.get(p, {}).items():
                image[tgt] = image.get(tgt, 0) + cf * cf2
        image = {k: v2 for k, v2 in image.items() if v2}
        if image:
            psi[g] = image

    chain_map = is_chain_map(tensor.complex, glued_cell, psi)

    # Vertex-wise isomorphism: per ((v, w), q) block, square and unimodular.
    src_blocks: dict = {}
    for g, gen in enumerate(tensor.complex.generators):
        (_, gkey, _) = gen.label
        (v, w, q) = gkey
        src_blocks.setdefault((v + w, q), []).append(g)
    tgt_blocks: dict = {}
    for g, gen in enumerate(glued_cell.generators):
        v, labels = gen.label
        tgt_blocks.setdefault((v, gen.q), []).append(g)
    vertexwise = set(src_blocks) == set(tgt_blocks)
    if vertexwise:
        for key, srcs in src_blocks.items():
            tgts = tgt_blocks[key]
            if len(srcs) != len(tgts):
                vertexwise = False
                break
            tpos = {g: r for r, g in enumerate(tgts)}
            mat = [[0] * len(srcs) for _ in tgts]
            for cidx, g in enumerate(srcs):
                for tgt, cf in psi.get(g, {}).items():
                    mat[tpos[tgt]][cidx] = cf
            facs = invariant_factors(mat)
            if len(facs) != len(srcs) or any(f != 1 for f in facs):
                vertexwise = False
                break

    return PsiCell(tensor, glued_cell, psi, chain_map, vertexwise)
