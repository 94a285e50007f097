"""
Annular closures, the winding grading, and the trace comparison map.

Closing an (n,n)-tangle around an annulus joins right point i to left point i
through a seam; a circle of a resolved closure is essential exactly when it
crosses the seam an odd number of times.  Labelings are graded by the winding
number ell = (#essential circles labeled 1) - (#essential labeled X); saddle
maps never raise ell, and the homology of the associated graded complex at
fixed ell is the annular invariant of the closure.

The comparison map out of the cyclic bar complex of a platform algebra is
assembled from three pieces: A surgers the matching's two copies into the
closure's seam arcs (one saddle per arc, one seam crossing per new strand),
B projects to winding degree zero, and C projects each lower horizontal
circle to X and each upper one to 1, then forgets them.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

from .frobenius import (
    ONE,
    SurgeryScript,
    SurgeryStep,
    X,
    all_labelings,
    label_qsum,
    match_circles,
    relabel_sum,
    script_trace,
    transport_labels,
)
from .homalg import (
    FreeChainComplex,
    Generator,
    HochschildComplex,
    HomologyTable,
    SparseMap,
    hochschild_complex,
    induced_map_surjective,
    is_chain_map,
)
from .planarcurves import CircleDecomposition, PlatformSpec, circles_of_arcs
from .platformalg import PlatformAlgebra
from .tanglecx import (
    BimoduleComplex,
    TangleDiagram,
    Vertex,
    add_horizontal_strands,
    cube_sign,
    cube_vertices,
    orientation_directions,
    resolved_arcs,
    vertex_weight,
)

# One essential circle labeled 1 contributes +1 to the winding grading; this
# is the unique convention under which a closure labeling of the n-strand
# identity braid with exactly k X's sits in winding degree n - 2k.
WINDING_SIGN = {ONE: 1, X: -1}


@dataclass(frozen=True)
class AnnularDiagram:
    """An (n,n)-tangle together with its closure around the annulus.

    Crossing signs are those of the closed diagram: orientation propagates
    through the seam identifications, so a strand leaving on the right comes
    back in on the left with the same direction.
    """

    base: TangleDiagram

    def __post_init__(self):
        t = self.base
        if t.m != t.n:
            raise ValueError(f"annular closure needs m = n, got ({t.m},{t.n})")
        orientation_directions(t, closure=True)  # raises on inconsistent overrides

    @property
    def strands(self) -> int:
        return self.base.m


def annular_closure(t: TangleDiagram) -> AnnularDiagram:
    return AnnularDiagram(t)


def closure_arcs(t: TangleDiagram, v: Vertex):
    arcs = dict(resolved_arcs(t, v))
    for i in range(1, t.m + 1):
        arcs[("seam", i)] = (("R", i), ("L", i), 1)
    return arcs


def winding(dec: CircleDecomposition, labels) -> int:
    return sum(WINDING_SIGN[l] for c, l in zip(dec.circles, labels) if c.essential())


@dataclass
class _ClosureVertex:
    arcs: dict
    dec: CircleDecomposition
    gen_index: dict


class ClosureComplex:
    """Khovanov complex of an annular closure, with winding bookkeeping.

    `graded=False` keeps the full differential (winding can drop); with
    `graded=True` only the winding-preserving part survives and the complex
    restricts to the single winding degree `ell`.
    """

    def __init__(self, diagram: AnnularDiagram, ell: Optional[int] = None,
                 q_shift: int = 0, graded: bool = False):
        t = diagram.base
        self.diagram = diagram
        self.ell = ell
        self.q_shift = q_shift
        self.graded = graded
        from .tanglecx import crossing_signs

        signs = crossing_signs(t, closure=True)
        self.n_plus = sum(1 for s in signs if s > 0)
        self.n_minus = sum(1 for s in signs if s < 0)
        gens: list[Generator] = []
        data: dict[Vertex, _ClosureVertex] = {}
        for v in cube_vertices(t.n_crossings):
            arcs = closure_arcs(t, v)
            dec = circles_of_arcs(arcs)
            w = vertex_weight(v)
            gen_index = {}
            for labels in all_labelings(len(dec)):
                l_val = winding(dec, labels)
                if graded and ell is not None and l_val != ell:
                    continue
                gen_index[labels] = len(gens)
                gens.append(Generator(
                    h=self.n_minus - w,
                    q=label_qsum(labels) + q_shift - w - self.n_plus + 2 * self.n_minus,
                    label=(v, labels),
                    ell=l_val if graded else None,
                ))
            data[v] = _ClosureVertex(arcs, dec, gen_index)
        self.data = data
        diff: SparseMap = {}
        for v in cube_vertices(t.n_crossings):
            vd = data[v]
            for ci in range(t.n_crossings):
                if v[ci] == 1:
                    continue
                w_vertex = v[:ci] + (1,) + v[ci + 1:]
                wd = data[w_vertex]
                trace = script_trace(vd.arcs, SurgeryScript((SurgeryStep(("x", ci, 0), ("x", ci, 1)),)))
                assert [c.nodes for c in trace.final.circles] == [c.nodes for c in wd.dec.circles]
                sign = cube_sign(v, ci)
                for labels, src in vd.gen_index.items():
                    src_ell = winding(vd.dec, labels)
                    for out_labels, coeff in transport_labels(trace, labels).items():
                        tgt = wd.gen_index.get(out_labels)
                        if tgt is None:
                            continue
                        if graded and winding(wd.dec, out_labels) != src_ell:
                            continue
                        row = diff.setdefault(src, {})
                        row[tgt] = row.get(tgt, 0) + sign * coeff
        self.complex = FreeChainComplex(gens, diff)

    def winding_of(self, gen_index: int) -> int:
        v, labels = self.complex.generators[gen_index].label
        return winding(self.data[v].dec, labels)


def akh_complex(diagram: AnnularDiagram, ell: int, q_shift: int = 0) -> ClosureComplex:
    """Associated graded closure complex in a single winding degree."""
    return ClosureComplex(diagram, ell=ell, q_shift=q_shift, graded=True)


def filtration_check(diagram: AnnularDiagram) -> dict:
    """Verify that no differential term raises the winding grading."""
    t = diagram.base
    violations = []
    data: dict[Vertex, tuple] = {}
    for v in cube_vertices(t.n_crossings):
        arcs = closure_arcs(t, v)
        data[v] = (arcs, circles_of_arcs(arcs))
    for v in cube_vertices(t.n_crossings):
        arcs, dec = data[v]
        for ci in range(t.n_crossings):
            if v[ci] == 1:
                continue
            w_vertex = v[:ci] + (1,) + v[ci + 1:]
            _, dec_w = data[w_vertex]
            trace = script_trace(arcs, SurgeryScript((SurgeryStep(("x", ci, 0), ("x", ci, 1)),)))
            for labels in all_labelings(len(dec)):
                src_ell = winding(dec, labels)
                for out_labels, coeff in transport_labels(trace, labels).items():
                    if coeff and winding(dec_w, out_labels) > src_ell:
                        violations.append({"vertex": list(v), "crossing": ci,
                                           "labels": list(labels), "to": list(out_labels)})
    return {"ok": not violations, "violations": violations}


# ---------------------------------------------------------------------------
# The comparison map


def _closure_script(module: BimoduleComplex, a) -> tuple:
    """Surgery steps turning a<T_v>W(a) into the closure of <T_v>."""
    big_a, _ = module.glued_matchings(a, a)
    steps = tuple(
        SurgeryStep(("Rb", i, j), ("La", i, j), new_seams=(1, 1))
        for i, j in sorted(big_a.pairs)
    )
    return big_a, SurgeryScript(steps)


def map_A(module: BimoduleComplex, a, closure: Optional[ClosureComplex] = None):
    """Saddle map from the (a, a) cell into the closure complex of the
    strand-augmented tangle; one surgery per arc of the matching, each new
    strand crossing the seam once."""
    if module.left_spec != module.right_spec:
        raise ValueError("the trace map needs equal specs on both sides")
    ou_tangle = module.family.tangle
    if closure is None:
        closure = ClosureComplex(AnnularDiagram(ou_tangle))
    _, script = _closure_script(module, a)
    cell = module.cell(a, a)
    data = module.vertex_data(a, a)
    out: SparseMap = {}
    for src, gen in enumerate(cell.generators):
        v, labels = gen.label
        trace = script_trace(data[v].arcs, script)
        cd = closure.data[v]
        assert [c.nodes for c in trace.final.circles] == [c.nodes for c in cd.dec.circles]
        row: dict[int, int] = {}
        for out_labels, coeff in transport_labels(trace, labels).items():
            row[cd.gen_index[out_labels]] = coeff
        if row:
            out[src] = row
    return out, closure


def horizontal_circle_positions(closure: ClosureComplex, n: int, k1: int, k2: int, v: Vertex):
    """(lower, upper) circle indices of the added horizontal strands."""
    dec = closure.data[v].dec
    lower = [dec.index_containing(("L", i)) for i in range(1, k1 + 1)]
    total = n + k1 + k2
    upper = [dec.index_containing(("L", i)) for i in range(total - k2 + 1, total + 1)]
    return lower, upper


def map_B_and_C(module: BimoduleComplex, closure: ClosureComplex, target: ClosureComplex,
                v: Vertex, terms: dict) -> dict[int, int]:
    """Project a filtration-<=0 sum to winding zero, force the horizontal
    labels (lower X, upper 1), and forget the horizontal circles.

    `terms` maps closure labelings at vertex v to coefficients; the result is
    indexed by the target (stripped) complex's generators.
    """
    n = module.left_spec.n
    k1, k2 = module.K1, module.K2
    cd = closure.data[v]
    lower, upper = horizontal_circle_positions(closure, n, k1, k2, v)
    td = target.data[v]
    out: dict[int, int] = {}
    for labels, coeff in terms.items():
        l_val = winding(cd.dec, labels)
        if l_val > 0:
            raise ValueError("term above filtration level zero")
        if l_val != 0:
            continue  # killed by the associated-graded projection
        if any(labels[i] != X for i in lower) or any(labels[i] != ONE for i in upper):
            continue  # killed by the horizontal-label projection
        kept_positions = [i for i in range(len(labels)) if i not in lower + upper]

        def project(node):
            if isinstance(node, tuple) and len(node) == 2 and node[0] in ("L", "R"):
                if k1 < node[1] <= k1 + n:
                    return (node[0], node[1] - k1)
                return None
            return node

        kept_circles = CircleDecomposition(tuple(cd.dec.circles[i] for i in kept_positions))
        matching = match_circles(kept_circles, td.dec, project)
        new_labels = [None] * len(td.dec.circles)
        for pos, i in enumerate(kept_positions):
            new_labels[matching[pos]] = labels[i]
        tgt = td.gen_index.get(tuple(new_labels))
        assert tgt is not None, "stripped labeling must land in the fixed winding degree"
        out[tgt] = out.get(tgt, 0) + coeff
    return {k: c for k, c in out.items() if c}


@dataclass
class XiMap:
    """The comparison chain map, as a sparse matrix on basis indices."""

    matrix: SparseMap
    source: HochschildComplex
    target: ClosureComplex


@dataclass
class XiReport:
    vanishes_on_submodule: bool
    filtration_ok: bool
    chain_map: bool
    tables_match: bool
    induced_iso: bool
    window: int
    hh_table: HomologyTable
    akh_table: HomologyTable
    counterexample: Optional[str] = None

    @property
    def ok(self) -> bool:
        return (self.vanishes_on_submodule and self.filtration_ok and self.chain_map
                and self.tables_match and self.induced_iso)


def default_truncation(module: BimoduleComplex, target: ClosureComplex) -> int:
    h_max = max((g.h for g in target.complex.generators), default=0)
    h_min = 0
    for a in module.left_objects:
        for b in module.right_objects:
            for g in module.cell(a, b).generators:
                h_min = min(h_min, g.h)
    return h_max - h_min + 3


def xi(algebra: PlatformAlgebra, module: BimoduleComplex, truncation: Optional[int] = None,
       full_module: Optional[BimoduleComplex] = None) -> tuple[XiMap, XiReport]:
    """Assemble the comparison map and verify its contract.

    The verification report records: vanishing on the platform submodule,
    the filtration bound on the saddle map, the chain-map identity, and
    whether the induced map on homology is an isomorphism in the window where
    the truncated cyclic bar complex computes the true homology.
    """
    spec = algebra.spec
    if module.left_spec != spec or module.right_spec != spec:
        raise ValueError("module must be a bimodule over the given algebra on both sides")
    if module.base_tangle is None:
        raise ValueError("module must remember its underlying tangle to be closed up")
    t = module.base_tangle
    n, k = spec.n, spec.k2
    if spec.k1 != n - k:
        raise ValueError("closure comparison needs spec (n; n-k, k)")
    from .tanglecx import crossing_signs

    ou_tangle = module.family.tangle
    if crossing_signs(ou_tangle) != crossing_signs(ou_tangle, closure=True):
        raise ValueError("tangle orientation is not closure-consistent; add orient overrides")
    target = akh_complex(AnnularDiagram(t), ell=n - 2 * k, q_shift=n - 2 * k)
    ou_closure = ClosureComplex(AnnularDiagram(ou_tangle))
    if truncation is None:
        truncation = default_truncation(module, target)
    hc = hochschild_complex(algebra, module, truncation)

    filtration_ok = True
    counterexample = None

    def xi0(a, cell_gen_label) -> dict[int, int]:
        nonlocal filtration_ok, counterexample
        v, labels = cell_gen_label
        data = module.vertex_data(a, a)
        _, script = _closure_script(module, a)
        trace = script_trace(data[v].arcs, script)
        cd = ou_closure.data[v]
        assert [c.nodes for c in trace.final.circles] == [c.nodes for c in cd.dec.circles]
        terms = transport_labels(trace, labels)
        kept = {}
        for out_labels, coeff in terms.items():
            if coeff and winding(cd.dec, out_labels) > 0:
                filtration_ok = False
                counterexample = f"filtration violated at a={a}, v={v}, labels={labels}"
                continue
            kept[out_labels] = coeff
        return map_B_and_C(module, ou_closure, target, v, kept)

    matrix: SparseMap = {}
    for idx, gen in enumerate(hc.complex.generators):
        d, cyc, mi, _fs = gen.label
        if d != 0:
            continue
        a = cyc[0]
        cell = module.cell(a, a)
        row = xi0(a, cell.generators[mi].label)
        if row:
            matrix[idx] = row

    # Vanishing on the platform submodule (checked on the unquotiented cells).
    if full_module is None:
        full_module = BimoduleComplex.from_tangle(t, spec, spec, quotient=False)
    vanishes = True
    for a in full_module.left_objects:
        cell = full_module.cell(a, a)
        dropped = full_module.j_basis(a, a)
        for gen in cell.generators:
            v, labels = gen.label
            if labels not in dropped[v]:
                continue
            data = full_module.vertex_data(a, a)
            _, script = _closure_script(full_module, a)
            trace = script_trace(data[v].arcs, script)
            cd = ou_closure.data[v]
            terms = {l: c for l, c in transport_labels(trace, labels).items()
                     if winding(cd.dec, l) <= 0}
            image = map_B_and_C(full_module, ou_closure, target, v, terms)
            if image:
                vanishes = False
                counterexample = counterexample or f"submodule generator {labels} at {v} survives"

    chain_map = is_chain_map(hc.complex, target.complex, matrix)
    window = hc.valid_up_to
    hh_table = hc.homology()
    akh_table = target.complex.homology()
    hh_win = HomologyTable({key: val for key, val in hh_table.table.items() if key[0] <= window})
    akh_win = HomologyTable({(h, q, None): val for (h, q, _e), val in akh_table.table.items() if h <= window})
    tables_match = hh_win == akh_win
    induced_iso = tables_match and induced_map_surjective(
        hc.complex, target.complex, matrix, max_h=window
    )
    report = XiReport(
        vanishes_on_submodule=vanishes,
        filtration_ok=filtration_ok,
        chain_map=chain_map,
        tables_match=tables_match,
        induced_iso=induced_iso,
        window=window,
        hh_table=hh_win,
        akh_table=akh_win,
        counterexample=counterexample,
    )
    return XiMap(matrix, hc, target), report


def bpw_comparison(t: TangleDiagram, k: int, truncation: Optional[int] = None) -> tuple[XiMap, XiReport]:
    """Run the full comparison for the closure of t at weight-space index k."""
    n = t.m
    spec = PlatformSpec(n, n - k, k)
    algebra = PlatformAlgebra(spec)
    module = BimoduleComplex.from_tangle(t, spec, spec, quotient=True)
    return xi(algebra, module, truncation=truncation)


def matching_subset(a, spec: PlatformSpec) -> frozenset:
    """The set of free points matched upward, indexing admissible matchings.

    Free points are numbered 1..n bottom-to-top; for spec (n; n-k, k) the
    map a -> {i : a matches free point i to a higher point} is a bijection
    onto the k-element subsets of {1..n}.
    """
    k1 = spec.k1
    return frozenset(i for i in range(1, spec.n + 1) if a.partner(k1 + i) > k1 + i)
