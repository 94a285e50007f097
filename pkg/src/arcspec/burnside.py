"""
Set-level refinement: graded sets and correspondences.

A correspondence (A, s, t) between finite graded sets records, element by
element, which source/target generator pairs a cobordism connects; composing
by fiber products and then counting recovers matrix multiplication, which is
the content of the forgetful functor.  Elementary saddle correspondences have
fibers of size at most one; multiplicities (like the factor 2 of a genus-one
composite) only ever arise through composition.

The same layer hosts the set-level ideal/submodule notions: a subfunctor is
absorbing when no correspondence element leads from a marked input tuple to
an unmarked output, and insular when that holds over a designated class of
objects admitting no outgoing multimorphisms.  Both admit honest quotient
functor data obtained by deleting marked generators.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Callable, Iterable, Optional, Sequence

from .frobenius import (
    ONE,
    X,
    ScriptTrace,
    StepTrace,
    label_qsum,
    merge as frob_merge,
    split as frob_split,
)

Matrix = list[list[int]]


@dataclass(frozen=True)
class GradedSet:
    elements: tuple
    grades: tuple[int, ...]

    def __post_init__(self):
        if len(self.elements) != len(self.grades):
            raise ValueError("one grade per element required")

    def __len__(self) -> int:
        return len(self.elements)

    def grade_of(self, x) -> int:
        return self.grades[self.elements.index(x)]

    @staticmethod
    def of_labelings(n_circles: int, shift: int = 0) -> "GradedSet":
        from .frobenius import all_labelings

        elems = tuple(all_labelings(n_circles))
        return GradedSet(elems, tuple(label_qsum(l) + shift for l in elems))


def product_set(sets: Sequence[GradedSet]) -> GradedSet:
    """Cartesian product with summed grades (the empty product is a point)."""
    elems = tuple(itertools.product(*(s.elements for s in sets)))
    grades = tuple(sum(s.grades[s.elements.index(x)] for s, x in zip(sets, e)) for e in elems)
    return GradedSet(elems, grades)


@dataclass(frozen=True)
class Correspondence:
    """A span (A, s: A -> source, t: A -> target) of graded sets.

    Elements are (payload, x, y) triples; the payload only disambiguates
    parallel elements (multiplicity), and the grading of every element must
    agree on both ends.
    """

    source: GradedSet
    target: GradedSet
    elements: tuple[tuple, ...]

    def __post_init__(self):
        src = dict(zip(self.source.elements, self.source.grades))
        tgt = dict(zip(self.target.elements, self.target.grades))
        for _payload, x, y in self.elements:
            if x not in src or y not in tgt:
                raise ValueError(f"correspondence element ({x!r}, {y!r}) is off its sets")
            if src[x] != tgt[y]:
                raise ValueError(f"grading mismatch on ({x!r}, {y!r}): {src[x]} vs {tgt[y]}")

    def fiber(self, x, y) -> int:
        return sum(1 for _p, a, b in self.elements if a == x and b == y)


def identity_correspondence(s: GradedSet) -> Correspondence:
    return Correspondence(s, s, tuple(((), x, x) for x in s.elements))


def compose(c1: Correspondence, c2: Correspondence) -> Correspondence:
    """Fiber product composition of c1: X -> Y with c2: Y -> Z."""
    if c1.target.elements != c2.source.elements:
        raise ValueError("middle graded sets differ")
    by_middle: dict = {}
    for p2, y, z in c2.elements:
        by_middle.setdefault(y, []).append((p2, z))
    elems = tuple(
        ((p2, p1), x, z)
        for p1, x, y in c1.elements
        for p2, z in by_middle.get(y, ())
    )
    return Correspondence(c1.source, c2.target, elems)


def forget(c: Correspondence) -> Matrix:
    """The target-by-source counting matrix of a correspondence."""
    rows = {y: i for i, y in enumerate(c.target.elements)}
    cols = {x: j for j, x in enumerate(c.source.elements)}
    mat = [[0] * len(cols) for _ in rows]
    for _p, x, y in c.elements:
        mat[rows[y]][cols[x]] += 1
    return mat


def elementary_correspondence(step: StepTrace, source_shift: int = 0) -> Correspondence:
    """The saddle correspondence of one merge or split.

    The target carries the shift dropped by one, so the saddle preserves the
    total grading; all fibers have size at most one.
    """
    n_before = len(step.before.circles)
    src = GradedSet.of_labelings(n_before, source_shift)
    tgt = GradedSet.of_labelings(len(step.after.circles), source_shift - 1)
    elems = []
    for labels in src.elements:
        base = [None] * len(step.after.circles)
        for i, j in step.carry:
            base[j] = labels[i]
        if step.kind == "merge":
            for prod, coeff in frob_merge(labels[step.sources[0]], labels[step.sources[1]]):
                assert coeff == 1
                out = list(base)
                out[step.targets[0]] = prod
                elems.append(((), labels, tuple(out)))
        else:
            for (l1, l2), coeff in frob_split(labels[step.sources[0]]):
                assert coeff == 1
                out = list(base)
                out[step.targets[0]] = l1
                out[step.targets[1]] = l2
                elems.append(((), labels, tuple(out)))
    return Correspondence(src, tgt, tuple(elems))


def script_correspondence(trace: ScriptTrace, source_shift: int = 0) -> Correspondence:
    """Composite of the elementary correspondences along a surgery script."""
    src = GradedSet.of_labelings(len(trace.initial.circles), source_shift)
    corr = identity_correspondence(src)
    shift = source_shift
    for step in trace.steps:
        corr = compose(corr, elementary_correspondence(step, shift))
        shift -= 1
    return corr


# ---------------------------------------------------------------------------
# Cobordism components and the vanishing constraints


@dataclass(frozen=True)
class CobordismComponent:
    genus: int
    incoming: tuple[int, ...]
    outgoing: tuple[int, ...]


def cobordism_components(trace: ScriptTrace) -> list[CobordismComponent]:
    """Connected components of a script's cobordism, with genus.

    The surface deformation-retracts to circles-times-intervals plus one band
    per surgery, so Euler characteristic is minus the saddle count and
    genus = (2 - boundary circles + saddles) / 2 componentwise.
    """
    layers = [trace.initial] + [st.after for st in trace.steps]
    parent: dict = {}

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    def union(x, y):
        rx, ry = find(x), find(y)
        if rx != ry:
            parent[rx] = ry

    for t, layer in enumerate(layers):
        for i in range(len(layer.circles)):
            parent[(t, i)] = (t, i)
    for t, st in enumerate(trace.steps):
        for i, j in st.carry:
            union((t, i), (t + 1, j))
        for i in st.sources:
            for j in st.targets:
                union((t, i), (t + 1, j))

    comp_saddles: dict = {}
    for t, st in enumerate(trace.steps):
        root = find((t, st.sources[0]))
        comp_saddles[root] = comp_saddles.get(root, 0) + 1
    comp_in: dict = {}
    comp_out: dict = {}
    last = len(layers) - 1
    for i in range(len(layers[0].circles)):
        comp_in.setdefault(find((0, i)), []).append(i)
    for i in range(len(layers[last].circles)):
        comp_out.setdefault(find((last, i)), []).append(i)

    out = []
    roots = sorted(set(find(x) for x in parent), key=repr)
    for root in roots:
        inc = tuple(comp_in.get(root, ()))
        outc = tuple(comp_out.get(root, ()))
        s = comp_saddles.get(root, 0)
        b = len(inc) + len(outc)
        assert b > 0, "every cobordism component touches the boundary"
        chi = -s
        genus2 = 2 - b - chi
        assert genus2 % 2 == 0 and genus2 >= 0, "component genus must be a non-negative integer"
        out.append(CobordismComponent(genus2 // 2, inc, outc))
    return out


def check_psi3(trace: ScriptTrace, corr: Optional[Correspondence] = None) -> dict:
    """Verify the genus/label constraints on every non-empty fiber.

    A fiber element may only connect (x, y) when every component has genus
    zero or one; a genus-zero component sees either all-1 inputs with exactly
    one 1 among its outputs, or exactly one X among its inputs with all-X
    outputs; a genus-one component sees all-1 inputs and all-X outputs.
    """
    if corr is None:
        corr = script_correspondence(trace)
    comps = cobordism_components(trace)
    violations = []
    for _payload, x, y in corr.elements:
        for comp in comps:
            ins = [x[i] for i in comp.incoming]
            outs = [y[j] for j in comp.outgoing]
            if comp.genus >= 2:
                ok = False
            elif comp.genus == 1:
                ok = all(l == ONE for l in ins) and all(l == X for l in outs)
            else:
                ok = (all(l == ONE for l in ins) and outs.count(ONE) == 1) or (
                    ins.count(X) == 1 and all(l == X for l in outs)
                )
            if not ok:
                violations.append({"source": x, "target": y, "component": comp})
    return {"ok": not violations, "violations": violations}


# ---------------------------------------------------------------------------
# Functor data, absorbing and insular subfunctors


@dataclass
class Multimorphism:
    inputs: tuple
    output: object
    corr: Correspondence  # source = product of the input sets


@dataclass
class FunctorData:
    """A finite fragment of a set-valued multifunctor: objects and morphisms."""

    objects: dict
    morphisms: list[Multimorphism]

    def validate(self) -> None:
        for mor in self.morphisms:
            expected = product_set([self.objects[i] for i in mor.inputs])
            if mor.corr.source.elements != expected.elements:
                raise ValueError(f"morphism {mor.inputs} -> {mor.output} has a mismatched source set")
            if mor.corr.target.elements != self.objects[mor.output].elements:
                raise ValueError(f"morphism {mor.inputs} -> {mor.output} has a mismatched target set")


def check_absorbing(functor: FunctorData, marked: dict) -> dict:
    """Empty-fiber condition: marked inputs never reach unmarked outputs."""
    functor.validate()
    violations = []
    for mor in functor.morphisms:
        marked_out = marked.get(mor.output, frozenset())
        for _payload, xs, y in mor.corr.elements:
            if y in marked_out:
                continue
            if any(x in marked.get(obj, frozenset()) for obj, x in zip(mor.inputs, xs)):
                violations.append({"morphism": (mor.inputs, mor.output), "inputs": xs, "output": y})
    return {"ok": not violations, "violations": violations}


def check_insular(functor: FunctorData, island: set, marked: dict) -> dict:
    """Absorbing condition restricted over an object class with no exits."""
    functor.validate()
    for mor in functor.morphisms:
        if any(i in island for i in mor.inputs) and mor.output not in island:
            raise ValueError(f"multimorphism {mor.inputs} -> {mor.output} leaves the island")
    violations = []
    for mor in functor.morphisms:
        if not any(i in island for i in mor.inputs):
            continue
        marked_out = marked.get(mor.output, frozenset())
        for _payload, xs, y in mor.corr.elements:
            if y in marked_out:
                continue
            if any(obj in island and x in marked.get(obj, frozenset()) for obj, x in zip(mor.inputs, xs)):
                violations.append({"morphism": (mor.inputs, mor.output), "inputs": xs, "output": y})
    return {"ok": not violations, "violations": violations}


def quotient_functor(functor: FunctorData, marked: dict, island: Optional[set] = None) -> FunctorData:
    """Delete marked generators and restrict every correspondence.

    With `island` given the subfunctor is treated as insular (objects off the
    island keep their full generator sets); otherwise as absorbing.  The
    relevant check must pass first.
    """
    report = check_absorbing(functor, marked) if island is None else check_insular(functor, island, marked)
    if not report["ok"]:
        raise ValueError(f"subfunctor check failed: {report['violations'][:3]}")

    def kept(obj) -> GradedSet:
        if island is not None and obj not in island:
            return functor.objects[obj]
        full = functor.objects[obj]
        gone = marked.get(obj, frozenset())
        pairs = [(x, g) for x, g in zip(full.elements, full.grades) if x not in gone]
        return GradedSet(tuple(x for x, _ in pairs), tuple(g for _, g in pairs))

    new_objects = {obj: kept(obj) for obj in functor.objects}
    new_morphisms = []
    for mor in functor.morphisms:
        src = product_set([new_objects[i] for i in mor.inputs])
        tgt = new_objects[mor.output]
        keep_in = [set(new_objects[i].elements) for i in mor.inputs]
        tgt_set = set(tgt.elements)
        elems = tuple(
            (p, xs, y)
            for p, xs, y in mor.corr.elements
            if y in tgt_set and all(x in ki for x, ki in zip(xs, keep_in))
        )
        new_morphisms.append(Multimorphism(mor.inputs, mor.output, Correspondence(src, tgt, elems)))
    return FunctorData(new_objects, new_morphisms)


# ---------------------------------------------------------------------------
# Builders bridging the linear world


def multiplication_trace(a, b, c) -> ScriptTrace:
    from .frobenius import canonical_multiplication_script, script_trace

    arcs, script = canonical_multiplication_script(a, b, c)
    return script_trace(arcs, script)


def _chunk_splitter(sizes: Sequence[int]) -> Callable:
    offsets = [0]
    for s in sizes:
        offsets.append(offsets[-1] + s)

    def split_labels(labels: tuple) -> tuple:
        return tuple(tuple(labels[offsets[i]:offsets[i + 1]]) for i in range(len(sizes)))

    return split_labels


def multiplication_correspondence(algebra, a, b, c) -> Correspondence:
    """Binary composition correspondence hom(a,b) x hom(b,c) -> hom(a,c)."""
    from .frobenius import canonical_multiplication_script, match_circles, script_trace

    arcs, script = canonical_multiplication_script(a, b, c)
    trace = script_trace(arcs, script)
    target_dec = algebra.decomposition(a, c)
    matching = match_circles(trace.final, target_dec, lambda node: node[1])
    shift = algebra.shift
    raw = script_correspondence(trace, 2 * shift)
    nab = len(algebra.decomposition(a, b).circles)
    nbc = len(algebra.decomposition(b, c).circles)
    splitter = _chunk_splitter([nab, nbc])
    src = product_set([
        GradedSet.of_labelings(nab, shift),
        GradedSet.of_labelings(nbc, shift),
    ])
    tgt = GradedSet.of_labelings(len(target_dec.circles), shift)
    inv = [None] * len(target_dec.circles)
    for i, j in enumerate(matching):
        inv[j] = i
    elems = tuple(
        (p, splitter(x), tuple(y[inv[r]] for r in range(len(inv))))
        for p, x, y in raw.elements
    )
    return Correspondence(src, tgt, elems)


def triple_multiplication_correspondence(algebra, a, b, c, d) -> Correspondence:
    """Ternary composition correspondence, built from one three-fold script."""
    from .frobenius import (
        SurgeryScript,
        SurgeryStep,
        match_circles,
        pair_diagram_arcs,
        script_trace,
        union_arcs,
    )

    arcs = union_arcs(pair_diagram_arcs(a, b), pair_diagram_arcs(b, c), pair_diagram_arcs(c, d))
    steps = tuple(
        SurgeryStep((0, ("b", i, j)), (1, ("a", i, j))) for i, j in sorted(b.pairs)
    ) + tuple(
        SurgeryStep((1, ("b", i, j)), (2, ("a", i, j))) for i, j in sorted(c.pairs)
    )
    trace = script_trace(arcs, SurgeryScript(steps))
    target_dec = algebra.decomposition(a, d)
    matching = match_circles(trace.final, target_dec, lambda node: node[1])
    shift = algebra.shift
    raw = script_correspondence(trace, 3 * shift)
    sizes = [len(algebra.decomposition(x, y).circles) for x, y in ((a, b), (b, c), (c, d))]
    splitter = _chunk_splitter(sizes)
    src = product_set([GradedSet.of_labelings(s, shift) for s in sizes])
    tgt = GradedSet.of_labelings(len(target_dec.circles), shift)
    inv = [None] * len(target_dec.circles)
    for i, j in enumerate(matching):
        inv[j] = i
    elems = tuple(
        (p, splitter(x), tuple(y[inv[r]] for r in range(len(inv))))
        for p, x, y in raw.elements
    )
    return Correspondence(src, tgt, elems)


def multiplication_functor(algebra, include_triples: bool = True) -> FunctorData:
    """The composition fragment of an arc/platform algebra's shape functor.

    Objects are pairs of matchings with their full labeling sets; morphisms
    are the 0-input unit picks, the binary compositions, and optionally the
    ternary ones.  (For platform algebras pass the underlying full algebra
    via `algebra.base` semantics: this builder always uses full labelings, so
    ideals can be tested as subfunctors.)
    """
    objs = {}
    shift = algebra.shift
    names = list(algebra.objects)
    for a in names:
        for b in names:
            objs[(a, b)] = GradedSet.of_labelings(len(algebra.decomposition(a, b).circles), shift)
    morphisms: list[Multimorphism] = []
    point = product_set([])
    for a in names:
        unit = (ONE,) * len(algebra.decomposition(a, a).circles)
        corr = Correspondence(point, objs[(a, a)], (((), (), unit),))
        morphisms.append(Multimorphism((), (a, a), corr))
    for a in names:
        for b in names:
            for c in names:
                morphisms.append(Multimorphism(((a, b), (b, c)), (a, c),
                                               multiplication_correspondence(algebra, a, b, c)))
    if include_triples:
        for a in names:
            for b in names:
                for c in names:
                    for d in names:
                        morphisms.append(Multimorphism(
                            ((a, b), (b, c), (c, d)), (a, d),
                            triple_multiplication_correspondence(algebra, a, b, c, d)))
    return FunctorData(objs, morphisms)
