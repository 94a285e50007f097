"""
The rank-two Frobenius algebra and its label-transport engine.

Circles of a closed diagram carry labels from {1, X} with quantum degrees
-1 and +1.  A saddle move (surgery) either merges two circles, multiplying
their labels (1*1 = 1, 1*X = X*1 = X, X*X = 0), or splits one circle,
comultiplying (1 -> 1(x)X + X(x)1, X -> X(x)X).  A SurgeryScript executes an
ordered list of surgeries on an arc multigraph; the induced linear map on
labelings is a composition of these elementary maps, and never depends on
the step order (a property the test suite nails down by brute force).

Scripts are run in two phases: `script_trace` computes the label-independent
circle evolution once, and `transport_labels` pushes any number of labelings
through the trace cheaply.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Sequence

from .planarcurves import CircleDecomposition, CrossinglessMatching, circles_of_arcs

ONE = "1"
X = "X"
LABELS = (ONE, X)

QDEG = {ONE: -1, X: 1}

FormalSum = dict[tuple[str, ...], int]

ArcDict = dict[object, tuple[object, object, int]]


def merge(x: str, y: str) -> list[tuple[str, int]]:
    """Multiplication table of the Frobenius algebra."""
    if x == ONE:
        return [(y, 1)]
    if y == ONE:
        return [(x, 1)]
    return []  # X * X = 0


def split(x: str) -> list[tuple[tuple[str, str], int]]:
    """Comultiplication: 1 -> 1(x)X + X(x)1, X -> X(x)X."""
    if x == ONE:
        return [((ONE, X), 1), ((X, ONE), 1)]
    return [((X, X), 1)]


@dataclass(frozen=True)
class Labeling:
    """A basis generator: one label per circle of a decomposition."""

    circles: CircleDecomposition
    labels: tuple[str, ...]
    shift: int = 0

    def __post_init__(self):
        if len(self.labels) != len(self.circles.circles):
            raise ValueError("one label per circle required")
        if any(l not in LABELS for l in self.labels):
            raise ValueError(f"labels must be in {LABELS}")

    def q(self) -> int:
        return sum(QDEG[l] for l in self.labels) + self.shift

    def to_json(self) -> dict:
        return {"circles": self.circles.to_json(), "labels": list(self.labels)}


def all_labelings(n_circles: int) -> list[tuple[str, ...]]:
    """All {1,X}-labelings of n circles, ordered with 1 before X per circle."""
    out: list[tuple[str, ...]] = [()]
    for _ in range(n_circles):
        out = [labels + (l,) for labels in out for l in LABELS]
    return out


def label_qsum(labels: Sequence[str]) -> int:
    return sum(QDEG[l] for l in labels)


@dataclass(frozen=True)
class SurgeryStep:
    """Replace arcs (a0,a1), (b0,b1) by (a0,b0), (a1,b1).

    The stored end order of the two arcs determines the reconnection, so
    callers must store ends in matching order.  `new_seams` are the seam
    counts of the two new arcs; `new_keys` override their generated names.
    """

    arc1: object
    arc2: object
    new_seams: tuple[int, int] = (0, 0)
    new_keys: Optional[tuple[object, object]] = None


@dataclass(frozen=True)
class SurgeryScript:
    steps: tuple[SurgeryStep, ...]

    def __len__(self) -> int:
        return len(self.steps)

    def permuted(self, order: Sequence[int]) -> "SurgeryScript":
        return SurgeryScript(tuple(self.steps[i] for i in order))


@dataclass(frozen=True)
class StepTrace:
    """Circle bookkeeping for one surgery: which circles merge or split."""

    kind: str  # "merge" or "split"
    before: CircleDecomposition
    after: CircleDecomposition
    sources: tuple[int, ...]
    targets: tuple[int, ...]
    carry: tuple[tuple[int, int], ...]  # untouched before-index -> after-index


@dataclass(frozen=True)
class ScriptTrace:
    initial: CircleDecomposition
    final: CircleDecomposition
    final_arcs: tuple
    steps: tuple[StepTrace, ...]


def run_surgery(arcs: ArcDict, step: SurgeryStep) -> ArcDict:
    if step.arc1 not in arcs or step.arc2 not in arcs:
        raise ValueError(f"script references missing arcs {step.arc1!r}, {step.arc2!r}")
    a0, a1, _ = arcs[step.arc1]
    b0, b1, _ = arcs[step.arc2]
    out = dict(arcs)
    del out[step.arc1]
    del out[step.arc2]
    # Names derive from the consumed arcs, so they are collision-free no
    # matter in which order a script's steps run.
    k0, k1 = step.new_keys if step.new_keys is not None else (
        ("srg", step.arc1, step.arc2, 0), ("srg", step.arc1, step.arc2, 1))
    out[k0] = (a0, b0, step.new_seams[0])
    out[k1] = (a1, b1, step.new_seams[1])
    return out


def script_trace(arcs: ArcDict, script: SurgeryScript) -> ScriptTrace:
    """Execute the circle-level part of a script once."""
    current = dict(arcs)
    dec = circles_of_arcs(current)
    initial = dec
    steps: list[StepTrace] = []
    for step in script.steps:
        if step.arc1 not in current or step.arc2 not in current:
            raise ValueError(f"script references missing arcs {step.arc1!r}, {step.arc2!r}")
        a_ends = current[step.arc1]
        b_ends = current[step.arc2]
        ia = dec.index_containing(a_ends[0])
        ib = dec.index_containing(b_ends[0])
        nxt = run_surgery(current, step)
        dec2 = circles_of_arcs(nxt)
        by_nodes = {c.nodes: i for i, c in enumerate(dec2.circles)}
        if ia != ib:
            kind = "merge"
            sources = (ia, ib)
            merged_nodes = dec.circles[ia].nodes | dec.circles[ib].nodes
            targets = (by_nodes[merged_nodes],)
        else:
            kind = "split"
            sources = (ia,)
            targets = tuple(sorted(i for i, c in enumerate(dec2.circles) if c.nodes <= dec.circles[ia].nodes))
            assert len(targets) == 2, "a split must produce exactly two circles"
        carry = tuple(
            (i, by_nodes[c.nodes])
            for i, c in enumerate(dec.circles)
            if i not in sources
        )
        steps.append(StepTrace(kind, dec, dec2, sources, targets, carry))
        current, dec = nxt, dec2
    return ScriptTrace(initial, dec, tuple(sorted(current, key=repr)), steps)


def transport_labels(trace: ScriptTrace, labels: tuple[str, ...], coeff: int = 1) -> FormalSum:
    """Push one labeling of the initial circles through the trace."""
    terms: dict[tuple[str, ...], int] = {labels: coeff}
    for st in trace.steps:
        nxt: dict[tuple[str, ...], int] = {}
        n_after = len(st.after.circles)
        for labs, c in terms.items():
            base = [None] * n_after
            for i, j in st.carry:
                base[j] = labs[i]
            if st.kind == "merge":
                for prod, pc in merge(labs[st.sources[0]], labs[st.sources[1]]):
                    out = base[:]
                    out[st.targets[0]] = prod
                    key = tuple(out)
                    nxt[key] = nxt.get(key, 0) + c * pc
            else:
                for (l1, l2), pc in split(labs[st.sources[0]]):
                    out = base[:]
                    out[st.targets[0]] = l1
                    out[st.targets[1]] = l2
                    key = tuple(out)
                    nxt[key] = nxt.get(key, 0) + c * pc
        terms = {k: v for k, v in nxt.items() if v}
    return terms


def apply_script(arcs: ArcDict, script: SurgeryScript, gen: FormalSum | tuple[str, ...]) -> tuple[ScriptTrace, FormalSum]:
    """Run a script on a formal sum of labelings of the initial diagram.

    Each step is classified merge/split at execution time; the result is the
    composite linear map applied to `gen`, returned with the trace so callers
    can identify the final circles.
    """
    trace = script_trace(arcs, script)
    if isinstance(gen, tuple):
        gen = {gen: 1}
    n0 = len(trace.initial.circles)
    out: FormalSum = {}
    for labels, coeff in gen.items():
        if len(labels) != n0:
            raise ValueError(f"labeling has {len(labels)} labels for {n0} circles")
        for k, v in transport_labels(trace, labels, coeff).items():
            out[k] = out.get(k, 0) + v
    return trace, {k: v for k, v in out.items() if v}


def union_arcs(*parts: ArcDict) -> ArcDict:
    """Disjoint union, namespacing keys and nodes by the part index."""
    out: ArcDict = {}
    for ns, arcs in enumerate(parts):
        for key, (e0, e1, s) in arcs.items():
            out[(ns, key)] = ((ns, e0), (ns, e1), s)
    return out


def matching_arcs(m: CrossinglessMatching, tag: str, seam: int = 0) -> ArcDict:
    return {(tag, i, j): (i, j, seam) for i, j in m.pairs}


def pair_diagram_arcs(a: CrossinglessMatching, b: CrossinglessMatching) -> ArcDict:
    """Arcs of the closed diagram a W(b) on the shared points 1..P."""
    if a.points != b.points:
        raise ValueError(f"point counts differ: {a.points} vs {b.points}")
    arcs = matching_arcs(a, "a")
    arcs.update(matching_arcs(b, "b"))
    return arcs


def canonical_multiplication_script(
    a: CrossinglessMatching, b: CrossinglessMatching, c: CrossinglessMatching
) -> tuple[ArcDict, SurgeryScript]:
    """One surgery per arc of b, joining the W(b)-copy in aW(b) to the b-copy in bW(c).

    Steps are ordered by the minimal point of the arc, purely so that outputs
    are reproducible; the induced map is order-independent.  Executing the
    script turns aW(b) u bW(c) into aW(c), with the final circle through
    point i containing the nodes (0, i) and (1, i).
    """
    if a.points != b.points or b.points != c.points:
        raise ValueError("point counts must agree")
    arcs = union_arcs(pair_diagram_arcs(a, b), pair_diagram_arcs(b, c))
    steps = tuple(
        SurgeryStep(arc1=(0, ("b", i, j)), arc2=(1, ("a", i, j)))
        for i, j in sorted(b.pairs)
    )
    return arcs, SurgeryScript(steps)


def match_circles(final: CircleDecomposition, target: CircleDecomposition, project) -> tuple[int, ...]:
    """Identify final circles with target circles via a node projection.

    `project` maps final-diagram nodes to target-diagram nodes or None; every
    final circle must project onto exactly one target circle.  Returns, for
    each final circle index, the corresponding target index.
    """
    out = []
    for circ in final.circles:
        image = {x for x in (project(n) for n in circ.nodes) if x is not None}
        if not image:
            raise ValueError(f"final circle {set(circ.nodes)} projects to nothing")
        idx = {target.index_containing(x) for x in image}
        if len(idx) != 1:
            raise ValueError(f"final circle {set(circ.nodes)} projects onto several target circles")
        out.append(idx.pop())
    if sorted(out) != list(range(len(target.circles))):
        raise ValueError("circle matching is not a bijection")
    return tuple(out)


def relabel_sum(total: FormalSum, matching: tuple[int, ...], n_target: int) -> FormalSum:
    """Transport a formal sum along a circle matching (a bijection)."""
    out: FormalSum = {}
    for labels, coeff in total.items():
        new = [None] * n_target
        for i, l in enumerate(labels):
            new[matching[i]] = l
        key = tuple(new)
        out[key] = out.get(key, 0) + coeff
    return {k: v for k, v in out.items() if v}
