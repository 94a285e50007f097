"""
Independent oracles the tests check the library against.

Everything here is deliberately written from first principles: matchings are
enumerated as raw involutions and filtered by a bracket test, TQFT maps are
composed as explicit matrices of the elementary merge/split maps, and the
same-platform-arc condition is decided by walking the partial closure rather
than by counting platform hits on circles.
"""

from __future__ import annotations

import itertools

from arcspec.planarcurves import CrossinglessMatching


def all_involutions(points: int):
    """Every fixed-point-free involution of {1..points}, as pair tuples."""
    def rec(pts):
        if not pts:
            yield ()
            return
        first = pts[0]
        for j in range(1, len(pts)):
            rest = pts[1:j] + pts[j + 1:]
            for sub in rec(rest):
                yield ((first, pts[j]),) + sub
    yield from rec(tuple(range(1, points + 1)))


def noncrossing_by_brackets(pairs) -> bool:
    """A matching is non-crossing iff its bracket word is balanced."""
    opens = {min(p): max(p) for p in pairs}
    stack = []
    n = 2 * len(pairs)
    for i in range(1, n + 1):
        if i in opens:
            stack.append(opens[i])
        else:
            if not stack or stack.pop() != i:
                return False
    return True


def brute_force_matchings(points: int) -> list[tuple]:
    return sorted(
        tuple(sorted(tuple(sorted(p)) for p in pairs))
        for pairs in all_involutions(points)
        if noncrossing_by_brackets(pairs)
    )


# ---------------------------------------------------------------------------
# Matrix TQFT: compose elementary merge/split matrices along a script.

MERGE = {("1", "1"): {"1": 1}, ("1", "X"): {"X": 1}, ("X", "1"): {"X": 1}, ("X", "X"): {}}
SPLIT = {"1": {("1", "X"): 1, ("X", "1"): 1}, "X": {("X", "X"): 1}}


def labelings(n):
    return list(itertools.product(("1", "X"), repeat=n))


def step_matrix(before, after, kind, sources, targets, carry):
    """Matrix of one elementary saddle on full labeling bases."""
    rows = {lab: i for i, lab in enumerate(labelings(len(after)))}
    cols = labelings(len(before))
    mat = [[0] * len(cols) for _ in rows]
    for cidx, lab in enumerate(cols):
        base = [None] * len(after)
        for i, j in carry:
            base[j] = lab[i]
        if kind == "merge":
            for out, coeff in MERGE[(lab[sources[0]], lab[sources[1]])].items():
                full = list(base)
                full[targets[0]] = out
                mat[rows[tuple(full)]][cidx] += coeff
        else:
            for (l1, l2), coeff in SPLIT[lab[sources[0]]].items():
                full = list(base)
                full[targets[0]], full[targets[1]] = l1, l2
                mat[rows[tuple(full)]][cidx] += coeff
    return mat


def script_matrix(trace):
    """Compose the elementary matrices of a recorded surgery trace."""
    from arcspec.homalg import mat_identity, mat_mul

    mat = mat_identity(2 ** len(trace.initial.circles))
    for st in trace.steps:
        step = step_matrix(st.before.circles, st.after.circles, st.kind, st.sources, st.targets, st.carry)
        mat = mat_mul(step, mat)
    return mat


def transport_matrix(trace):
    """The same linear map computed through the library's label transport."""
    from arcspec.frobenius import transport_labels

    cols = labelings(len(trace.initial.circles))
    rows = {lab: i for i, lab in enumerate(labelings(len(trace.final.circles)))}
    mat = [[0] * len(cols) for _ in rows]
    for cidx, lab in enumerate(cols):
        for out, coeff in transport_labels(trace, lab).items():
            mat[rows[out]][cidx] += coeff
    return mat


# ---------------------------------------------------------------------------
# Arc-level same-platform test for partial closures.


def partial_closure_has_typeIII_arc(big_a: CrossinglessMatching, flat, big_b: CrossinglessMatching,
                                    k1: int, k2: int) -> bool:
    """Walk the partial closure (matchings plus the un-augmented flat tangle)
    and report whether some open component starts and ends on one platform.

    Platform points have one incident arc (their horizontal strand is not part
    of the partial closure), interior points have two, so open components are
    walked edge by edge from platform to platform.
    """
    m = big_a.points
    n = big_b.points
    edges: list[tuple] = []

    def flat_node(p):
        return ("L", p + k1) if p <= flat.left_points else ("R", p - flat.left_points + k1)

    for i, j in big_a.pairs:
        edges.append((("L", i), ("L", j)))
    for i, j in big_b.pairs:
        edges.append((("R", i), ("R", j)))
    for i, j in flat.boundary_matching:
        edges.append((flat_node(i), flat_node(j)))

    incidence: dict = {}
    for eid, (x, y) in enumerate(edges):
        incidence.setdefault(x, []).append(eid)
        incidence.setdefault(y, []).append(eid)

    platforms = [
        {("L", i) for i in range(1, k1 + 1)},
        {("L", i) for i in range(m - k2 + 1, m + 1)},
        {("R", i) for i in range(1, k1 + 1)},
        {("R", i) for i in range(n - k2 + 1, n + 1)},
    ]
    endpoints = set().union(*platforms)
    done: set = set()
    for start in endpoints:
        if start in done:
            continue
        assert len(incidence[start]) == 1, "platform points are loose ends of the partial closure"
        node, eid = start, incidence[start][0]
        while True:
            x, y = edges[eid]
            node = y if node == x else x
            if node in endpoints:
                break
            nxt = [e for e in incidence[node] if e != eid]
            assert len(nxt) == 1, "interior points have exactly two incident arcs"
            eid = nxt[0]
        done.update((start, node))
        for plat in platforms:
            if start in plat and node in plat:
                return True
    return False
