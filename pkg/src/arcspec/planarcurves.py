"""
Crossingless matchings, platform constraints, and flat 1-manifolds.

A crossingless matching of P points on a vertical line (numbered 1 at the
bottom to P at the top) is a fixed-point-free involution whose pairs never
interleave.  A matching drawn to the right of its line is the reflection W(b)
of the same matching drawn to the left; as pairing data the two agree, so
reflection is just a side flag and only gluing cares about it.

Closed diagrams such as aW(b) are modelled as multigraphs: nodes are points,
arcs join two nodes (possibly the same node twice, or two parallel arcs
between the same nodes), and circles are the connected components.  Arcs
carry a seam-crossing count so the same machinery can serve annular closures,
where a circle is essential exactly when its total seam count is odd.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Mapping, Optional, Sequence

Pair = tuple[int, int]
Node = object
ArcEnds = tuple[Node, Node]


def node_key(node: Node):
    """Total order on heterogeneous node names (ints, strings, nested tuples)."""
    if isinstance(node, bool):
        return (0, int(node))
    if isinstance(node, int):
        return (0, node)
    if isinstance(node, str):
        return (1, node)
    if isinstance(node, tuple):
        return (2, tuple(node_key(x) for x in node))
    raise TypeError(f"unsupported node type {type(node)!r}")


@dataclass(frozen=True)
class Circle:
    """One component of a closed 1-manifold: its nodes and seam parity."""

    nodes: frozenset
    seam_parity: int = 0

    @property
    def key(self):
        return min(node_key(x) for x in self.nodes)

    def hits(self, platform: frozenset) -> int:
        return len(self.nodes & platform)

    def essential(self) -> bool:
        return self.seam_parity == 1


@dataclass(frozen=True)
class CircleDecomposition:
    """Circles of a closed diagram, in canonical (minimal-node) order."""

    circles: tuple[Circle, ...]

    def __len__(self) -> int:
        return len(self.circles)

    def index_containing(self, node: Node) -> int:
        for i, c in enumerate(self.circles):
            if node in c.nodes:
                return i
        raise KeyError(f"no circle contains {node!r}")

    def to_json(self) -> list[list]:
        return [sorted((list(x) if isinstance(x, tuple) else x) for x in c.nodes) for c in self.circles]


def circles_of_arcs(arcs: Mapping[object, tuple[Node, Node, int]]) -> CircleDecomposition:
    """Connected components of the arc multigraph, with seam parity."""
    parent: dict[Node, Node] = {}

    def find(x):
        root = x
        while parent[root] != root:
            root = parent[root]
        while parent[x] != root:
            parent[x], x = root, parent[x]
        return root

    def union(x, y):
        rx, ry = find(x), find(y)
        if rx != ry:
            parent[rx] = ry

    for e0, e1, _ in arcs.values():
        parent.setdefault(e0, e0)
        parent.setdefault(e1, e1)
        union(e0, e1)

    groups: dict[Node, set] = {}
    for x in parent:
        groups.setdefault(find(x), set()).add(x)
    seam: dict[Node, int] = {root: 0 for root in groups}
    for e0, _e1, s in arcs.values():
        if s:
            seam[find(e0)] += s
    circles = [Circle(frozenset(nodes), seam[root] % 2) for root, nodes in groups.items()]
    circles.sort(key=lambda c: c.key)
    return CircleDecomposition(tuple(circles))


def _pairs_noncrossing(pairs: Sequence[Pair]) -> bool:
    for (i, j), (k, l) in itertools.combinations(pairs, 2):
        if i < k < j < l or k < i < l < j:
            return False
    return True


@dataclass(frozen=True, order=True)
class CrossinglessMatching:
    """A non-crossing fixed-point-free involution of {1..points}.

    The `side` flag records whether the matching is drawn to the left or the
    right of its line; `reflected()` flips it.  Pairing data is unaffected
    because points are numbered bottom-to-top on both vertical lines.
    """

    points: int
    pairs: tuple[Pair, ...]
    side: str = "left"

    def __post_init__(self):
        if self.points % 2 != 0 or self.points < 0:
            raise ValueError(f"point count must be even and non-negative, got {self.points}")
        if self.side not in ("left", "right"):
            raise ValueError(f"side must be 'left' or 'right', got {self.side!r}")
        pairs = tuple(sorted((min(i, j), max(i, j)) for i, j in self.pairs))
        object.__setattr__(self, "pairs", pairs)
        seen: set[int] = set()
        for i, j in pairs:
            if i == j or not (1 <= i <= self.points and 1 <= j <= self.points):
                raise ValueError(f"bad pair ({i},{j}) for {self.points} points")
            seen.update((i, j))
        if len(seen) != self.points or len(pairs) * 2 != self.points:
            raise ValueError("pairs must form a fixed-point-free involution of all points")
        if not _pairs_noncrossing(pairs):
            raise ValueError(f"pairs {pairs} cross")

    def partner(self, i: int) -> int:
        for a, b in self.pairs:
            if a == i:
                return b
            if b == i:
                return a
        raise KeyError(i)

    def reflected(self) -> "CrossinglessMatching":
        return CrossinglessMatching(self.points, self.pairs, "right" if self.side == "left" else "left")

    def to_json(self) -> list[list[int]]:
        return [list(p) for p in self.pairs]

    @classmethod
    def from_json(cls, data: Sequence[Sequence[int]], side: str = "left") -> "CrossinglessMatching":
        pairs = tuple((int(i), int(j)) for i, j in data)
        return cls(2 * len(pairs), pairs, side)

    def __repr__(self) -> str:
        return f"CM{list(self.pairs)}"


def enumerate_matchings(points: int) -> list[CrossinglessMatching]:
    """All non-crossing perfect matchings, lexicographic in their pair lists."""
    if points % 2 != 0 or points < 0:
        raise ValueError(f"point count must be even and non-negative, got {points}")

    def rec(pts: tuple[int, ...]):
        if not pts:
            yield ()
            return
        first = pts[0]
        for t in range(1, len(pts), 2):
            inside = pts[1:t]
            outside = pts[t + 1:]
            for left in rec(inside):
                for right in rec(outside):
                    yield ((first, pts[t]),) + left + right

    out = [CrossinglessMatching(points, pairs) for pairs in rec(tuple(range(1, points + 1)))]
    out.sort(key=lambda m: m.pairs)
    return out


@dataclass(frozen=True)
class PlatformSpec:
    """Free points plus a lower platform of k1 points and an upper one of k2.

    The lower platform is points 1..k1 and the upper platform is the last k2
    points; admissible matchings never pair two points of the same platform.
    """

    n: int
    k1: int
    k2: int

    def __post_init__(self):
        if self.n < 0 or self.k1 < 0 or self.k2 < 0:
            raise ValueError("platform parameters must be non-negative")
        if (self.k1 + self.k2 - self.n) % 2 != 0:
            raise ValueError(f"parity violation: k1+k2 = {self.k1 + self.k2} and n = {self.n} differ mod 2")

    @property
    def points(self) -> int:
        return self.n + self.k1 + self.k2

    def lower_platform(self) -> frozenset:
        return frozenset(range(1, self.k1 + 1))

    def upper_platform(self) -> frozenset:
        return frozenset(range(self.n + self.k1 + 1, self.points + 1))

    def platforms(self) -> tuple[frozenset, frozenset]:
        return (self.lower_platform(), self.upper_platform())

    def admits(self, m: CrossinglessMatching) -> bool:
        if m.points != self.points:
            return False
        lower, upper = self.platforms()
        return not any((i in lower and j in lower) or (i in upper and j in upper) for i, j in m.pairs)

    def to_json(self) -> dict:
        return {"n": self.n, "k1": self.k1, "k2": self.k2}

    def __repr__(self) -> str:
        return f"PlatformSpec({self.n};{self.k1},{self.k2})"


def enumerate_platform_matchings(spec: PlatformSpec) -> list[CrossinglessMatching]:
    """Matchings of spec.points points with no pair inside either platform."""
    return [m for m in enumerate_matchings(spec.points) if spec.admits(m)]


def iota(a: CrossinglessMatching, spec: Optional[PlatformSpec] = None) -> CrossinglessMatching:
    """Nest `a` inside a new outermost pair (1, points+2).

    Sends admissible matchings for (n; k1, k2) to admissible matchings for
    (n; k1+1, k2+1); for k1+k2 >= n this is onto.
    """
    if spec is not None and not spec.admits(a):
        raise ValueError(f"{a} is not admissible for {spec}")
    pairs = ((1, a.points + 2),) + tuple((i + 1, j + 1) for i, j in a.pairs)
    return CrossinglessMatching(a.points + 2, pairs, a.side)


def iota_power(a: CrossinglessMatching, d: int) -> CrossinglessMatching:
    for _ in range(d):
        a = iota(a)
    return a


@dataclass(frozen=True)
class FlatTangle:
    """A crossingless tangle in a strip, up to isotopy.

    Boundary points are numbered 1..m for the left side (bottom to top) and
    m+1..m+n for the right side (bottom to top); `boundary_matching` pairs
    them, and `closed_circles` counts the free circles.  This is a complete
    isotopy invariant, so no embedding data is stored.
    """

    left_points: int
    right_points: int
    boundary_matching: tuple[Pair, ...]
    closed_circles: int = 0

    def __post_init__(self):
        m, n = self.left_points, self.right_points
        if m < 0 or n < 0 or self.closed_circles < 0:
            raise ValueError("negative counts")
        if (m + n) % 2 != 0:
            raise ValueError("total boundary point count must be even")
        pairs = tuple(sorted((min(i, j), max(i, j)) for i, j in self.boundary_matching))
        object.__setattr__(self, "boundary_matching", pairs)
        seen: set[int] = set()
        for i, j in pairs:
            if not (1 <= i <= m + n and 1 <= j <= m + n) or i == j:
                raise ValueError(f"bad boundary pair ({i},{j})")
            seen.update((i, j))
        if len(seen) != m + n:
            raise ValueError("boundary matching must cover every boundary point once")
        # Strip non-crossing: renumber around the strip boundary (left side
        # bottom-to-top, then right side top-to-bottom) and check nesting.
        def around(p: int) -> int:
            return p if p <= m else m + (n - (p - m) + 1)
        cyclic = [tuple(sorted((around(i), around(j)))) for i, j in pairs]
        if not _pairs_noncrossing(cyclic):
            raise ValueError(f"boundary matching {pairs} crosses in the strip")

    def endpoint_node(self, p: int) -> Node:
        return ("L", p) if p <= self.left_points else ("R", p - self.left_points)

    def __repr__(self) -> str:
        return f"FlatTangle({self.left_points},{self.right_points},{list(self.boundary_matching)},O={self.closed_circles})"


def add_horizontal_strands(t: FlatTangle, k1: int, k2: int) -> FlatTangle:
    """Add k1 straight strands below and k2 above a flat tangle."""
    m, n = t.left_points, t.right_points
    m2, n2 = m + k1 + k2, n + k1 + k2

    def remap(p: int) -> int:
        return p + k1 if p <= m else m2 + k1 + (p - m)

    pairs = [(remap(i), remap(j)) for i, j in t.boundary_matching]
    pairs += [(i, m2 + i) for i in range(1, k1 + 1)]
    pairs += [(k1 + m + j, m2 + k1 + n + j) for j in range(1, k2 + 1)]
    return FlatTangle(m2, n2, tuple(pairs), t.closed_circles)


def glue(a: CrossinglessMatching, middle: Optional[FlatTangle], b: CrossinglessMatching) -> CircleDecomposition:
    """Close up a (left), an optional flat tangle, and W(b) (right).

    With no middle the circles live on the integer points 1..P shared by a
    and b; with a middle they live on ("L", i) / ("R", j) nodes plus one
    ("O", t) node per free circle of the middle.
    """
    arcs: dict[object, tuple[Node, Node, int]] = {}
    if middle is None:
        if a.points != b.points:
            raise ValueError(f"point counts differ: {a.points} vs {b.points}")
        for i, j in a.pairs:
            arcs[("a", i, j)] = (i, j, 0)
        for i, j in b.pairs:
            arcs[("b", i, j)] = (i, j, 0)
        return circles_of_arcs(arcs)
    if a.points != middle.left_points:
        raise ValueError(f"left point counts differ: {a.points} vs {middle.left_points}")
    if b.points != middle.right_points:
        raise ValueError(f"right point counts differ: {b.points} vs {middle.right_points}")
    for i, j in a.pairs:
        arcs[("a", i, j)] = (("L", i), ("L", j), 0)
    for i, j in b.pairs:
        arcs[("b", i, j)] = (("R", i), ("R", j), 0)
    for i, j in middle.boundary_matching:
        arcs[("t", i, j)] = (middle.endpoint_node(i), middle.endpoint_node(j), 0)
    for t in range(middle.closed_circles):
        arcs[("O", t)] = (("O", t), ("O", t), 0)
    return circles_of_arcs(arcs)


def classify_circles(dec: CircleDecomposition, platforms) -> tuple[str, ...]:
    """Tag each circle free / typeII / typeIII against a family of platforms.

    `platforms` is either a PlatformSpec (whose two integer-point platforms
    are used, for algebra diagrams glued without a middle) or an explicit
    iterable of node sets (e.g. the four platforms of a partial closure).
    A circle is typeIII when it meets some single platform at least twice,
    typeII when it meets each at most once and some at least once.
    """
    if isinstance(platforms, PlatformSpec):
        platform_sets = [frozenset(platforms.lower_platform()), frozenset(platforms.upper_platform())]
    else:
        platform_sets = [frozenset(p) for p in platforms]
    tags = []
    for c in dec.circles:
        counts = [c.hits(p) for p in platform_sets]
        if any(x >= 2 for x in counts):
            tags.append("typeIII")
        elif any(x >= 1 for x in counts):
            tags.append("typeII")
        else:
            tags.append("free")
    return tuple(tags)
