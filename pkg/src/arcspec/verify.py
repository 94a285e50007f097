"""
The verification suite behind `arcspec verify`.

Each check exercises one structural statement (ideal absorption, invariance
under Reidemeister moves, the gluing isomorphism, the trace comparison, ...)
at desk scale and returns a certificate entry: what was checked, with which
parameters, pass/fail, a counterexample when one exists, and wall time.
"""

from __future__ import annotations

import os
import random
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Callable, Optional

from . import naivekh
from .arcalg import ArcAlgebra
from .annular import AnnularDiagram, ClosureComplex, bpw_comparison, filtration_check
from .burnside import (
    FunctorData,
    GradedSet,
    Multimorphism,
    check_absorbing,
    check_insular,
    check_psi3,
    compose,
    elementary_correspondence,
    forget,
    identity_correspondence,
    multiplication_correspondence,
    multiplication_functor,
    multiplication_trace,
    quotient_functor,
    script_correspondence,
)
from .corpus import CLOSURE_INVARIANCE_PAIRS, CORPUS, REIDEMEISTER_PAIRS, corpus_tangle
from .frobenius import ONE, X, all_labelings
from .homalg import mat_mul
from .planarcurves import PlatformSpec, enumerate_matchings, enumerate_platform_matchings
from .platformalg import PlatformAlgebra, iota_functor, total_object_count
from .tanglecx import BimoduleComplex, build_bimodule_complex, gluing_map_psi, glued_complex

CATALAN = [1, 1, 2, 5, 14, 42, 132, 429, 1430]


@dataclass
class CheckResult:
    name: str
    statement: str
    params: dict
    passed: bool
    counterexample: Optional[str]
    seconds: float

    def to_json(self) -> dict:
        return {
            "name": self.name,
            "statement": self.statement,
            "params": self.params,
            "passed": self.passed,
            "counterexample": self.counterexample,
            "seconds": round(self.seconds, 3),
        }


def _legal_specs(n: int, max_points: int):
    out = []
    for k1 in range(0, max_points - n + 1):
        for k2 in range(0, max_points - n - k1 + 1):
            if (k1 + k2 - n) % 2 == 0 and n + k1 + k2 <= max_points:
                out.append(PlatformSpec(n, k1, k2))
    return out


# ---------------------------------------------------------------------------
# Individual checks (each returns (passed, counterexample, params))


def check_catalan(max_points: int = 14):
    expected = CATALAN[: max_points // 2 + 1]
    for half, want in enumerate(expected):
        got = len(enumerate_matchings(2 * half))
        if got != want:
            return False, f"{2 * half} points: {got} matchings, expected {want}", {"max_points": max_points}
    return True, None, {"max_points": max_points}


def check_arc_algebra(sampled_points: int = 6, samples: int = 25):
    for points in (2, 4):
        alg = ArcAlgebra(points)
        objs = alg.objects
        for a in objs:
            for b in objs:
                unit_a, unit_b = alg.unit_at(a), alg.unit_at(b)
                for i in range(len(alg.hom_basis(a, b))):
                    f = {i: 1}
                    if alg.multiply(a, a, b, unit_a, f) != f:
                        return False, f"left unit fails at {a},{b} basis {i}", {}
                    if alg.multiply(a, b, b, f, unit_b) != f:
                        return False, f"right unit fails at {a},{b} basis {i}", {}
        for a in objs:
            for b in objs:
                for c in objs:
                    for d in objs:
                        nab, nbc, ncd = (len(alg.hom_basis(x, y)) for x, y in ((a, b), (b, c), (c, d)))
                        for i in range(nab):
                            for j in range(nbc):
                                for k in range(ncd):
                                    fg = alg.multiply_sparse(a, b, c, i, j)
                                    gh = alg.multiply_sparse(b, c, d, j, k)
                                    left = alg.multiply(a, c, d, fg, {k: 1})
                                    right = alg.multiply(a, b, d, {i: 1}, gh)
                                    if left != right:
                                        return False, f"associativity fails at {points} points", {}
    rng = random.Random(0)
    alg = ArcAlgebra(sampled_points)
    objs = alg.objects
    for _ in range(samples):
        a, b, c, d = (rng.choice(objs) for _ in range(4))
        nab, nbc, ncd = (len(alg.hom_basis(x, y)) for x, y in ((a, b), (b, c), (c, d)))
        for _ in range(12):
            i, j, k = rng.randrange(nab), rng.randrange(nbc), rng.randrange(ncd)
            fg = alg.multiply_sparse(a, b, c, i, j)
            gh = alg.multiply_sparse(b, c, d, j, k)
            if alg.multiply(a, c, d, fg, {k: 1}) != alg.multiply(a, b, d, {i: 1}, gh):
                return False, f"sampled associativity fails at {sampled_points} points", {}
    return True, None, {"exhaustive_points": [2, 4], "sampled_points": sampled_points, "samples": samples}


def check_ideal_absorption(max_n: int = 3, max_points: int = 8):
    for n in range(max_n + 1):
        for spec in _legal_specs(n, max_points):
            alg = PlatformAlgebra(spec, quotient=False)
            base = alg.base
            objs = alg.objects
            ideals = {(a, b): alg.ideal_basis(a, b) for a in objs for b in objs}
            for a in objs:
                for b in objs:
                    basis_ab = base.hom_basis(a, b)
                    idx_ab = base.basis_index(a, b)
                    for c in objs:
                        basis_bc = base.hom_basis(b, c)
                        idx_bc = base.basis_index(b, c)
                        basis_ac = base.hom_basis(a, c)
                        ideal_ac = ideals[(a, c)]
                        for x in ideals[(a, b)]:
                            xi_ = idx_ab[x]
                            for j in range(len(basis_bc)):
                                prod = base.multiply_sparse(a, b, c, xi_, j)
                                bad = [k for k in prod if basis_ac[k] not in ideal_ac]
                                if bad:
                                    return False, f"{spec}: ideal({a},{b}) . hom({b},{c}) escapes", {"max_n": max_n}
                        for y in ideals[(b, c)]:
                            yj = idx_bc[y]
                            for i in range(len(basis_ab)):
                                prod = base.multiply_sparse(a, b, c, i, yj)
                                bad = [k for k in prod if basis_ac[k] not in ideal_ac]
                                if bad:
                                    return False, f"{spec}: hom({a},{b}) . ideal({b},{c}) escapes", {"max_n": max_n}
    return True, None, {"max_n": max_n, "max_points": max_points}


def check_iota(max_n: int = 3, max_points: int = 8):
    params = {"max_n": max_n, "max_points": max_points}
    for n in range(max_n + 1):
        for spec in _legal_specs(n, max_points):
            target = PlatformSpec(spec.n, spec.k1 + 1, spec.k2 + 1)
            fun = iota_functor(spec, target)
            src, tgt = fun.source, fun.target
            # The ideal of the image is exactly the image of the ideal.
            for a in src.objects:
                for b in src.objects:
                    ia, ib = fun.object_map(a), fun.object_map(b)
                    tgt_ideal = tgt.ideal_basis(ia, ib)
                    for labels in src.base.hom_basis(a, b):
                        in_src = labels in src.ideal_basis(a, b)
                        in_tgt = fun.map_labels(a, b, labels) in tgt_ideal
                        if in_src != in_tgt:
                            return False, f"{spec}: ideal preimage fails at ({a},{b},{labels})", params
            if spec.k1 + spec.k2 < spec.n:
                continue
            images = {fun.object_map(a) for a in src.objects}
            if images != set(tgt.objects):
                return False, f"{spec}: object map is not onto", params
            for a in src.objects:
                for b in src.objects:
                    ia, ib = fun.object_map(a), fun.object_map(b)
                    hmap = fun.hom_matrix(a, b)
                    if sorted(hmap.values()) != list(range(len(tgt.hom_basis(ia, ib)))):
                        return False, f"{spec}: hom map not bijective at ({a},{b})", params
            for a in src.objects:
                for b in src.objects:
                    for c in src.objects:
                        ia, ib, ic = (fun.object_map(x) for x in (a, b, c))
                        hab, hbc, hac = fun.hom_matrix(a, b), fun.hom_matrix(b, c), fun.hom_matrix(a, c)
                        for i in range(len(src.hom_basis(a, b))):
                            for j in range(len(src.hom_basis(b, c))):
                                down = src.multiply_sparse(a, b, c, i, j)
                                up = tgt.multiply_sparse(ia, ib, ic, hab[i], hbc[j])
                                if {hac[k]: v for k, v in down.items()} != up:
                                    return False, f"{spec}: structure constants differ", params
    return True, None, params


def check_object_count(max_n: int = 5):
    for n in range(max_n + 1):
        if total_object_count(n) != 2 ** n:
            return False, f"object count at n={n} is not 2^n", {"max_n": max_n}
    return True, None, {"max_n": max_n}


def _spec_pairs(m: int, n: int, max_total: int):
    for h1 in range(max_total):
        for h2 in range(max_total):
            if (h1 + h2 - m) % 2 or m + h1 + h2 > max_total:
                continue
            for k1 in range(max_total):
                for k2 in range(max_total):
                    if (k1 + k2 - n) % 2 or n + k1 + k2 > max_total:
                        continue
                    if h1 - h2 != k1 - k2:
                        continue
                    yield PlatformSpec(m, h1, h2), PlatformSpec(n, k1, k2)


def check_reidemeister(max_total: int = 6):
    params = {"max_total": max_total, "pairs": [p[0] for p in REIDEMEISTER_PAIRS]}
    for move, name1, name2 in REIDEMEISTER_PAIRS:
        t1, t2 = corpus_tangle(name1), corpus_tangle(name2)
        for left, right in _spec_pairs(t1.m, t1.n, max_total):
            bim1 = build_bimodule_complex(t1, left, right)
            bim2 = build_bimodule_complex(t2, left, right)
            for a in bim1.left_objects:
                for b in bim1.right_objects:
                    if bim1.cell(a, b).homology() != bim2.cell(a, b).homology():
                        return False, f"{move}: {name1} vs {name2} differ at {left},{right},({a},{b})", params
    return True, None, params


PAIRING_CASES = [
    ("capcup", "capcup"),
    ("identity_2", "capcup"),
    ("capcup", "identity_2"),
    ("cup", "cap"),
    ("sigma1", "sigma1_inv"),
    ("sigma1", "sigma1"),
    ("sigma1", "sigma1_2"),
    ("sigma1", "capcup"),
    ("capcup", "sigma1"),
]


def check_pairing():
    params = {"cases": PAIRING_CASES}
    for name1, name2 in PAIRING_CASES:
        t1, t2 = corpus_tangle(name1), corpus_tangle(name2)
        for (k1, k2) in ((1, 1), (2, 0), (0, 2)):
            if (k1 + k2 - t1.m) % 2 or (k1 + k2 - t1.n) % 2 or (k1 + k2 - t2.n) % 2:
                continue
            if k1 + k2 < max(t1.m, t1.n, t2.n):
                continue
            s1 = PlatformSpec(t1.m, k1, k2)
            s2 = PlatformSpec(t1.n, k1, k2)
            s3 = PlatformSpec(t2.n, k1, k2)
            bim1 = build_bimodule_complex(t1, s1, s2)
            bim2 = build_bimodule_complex(t2, s2, s3)
            glued = glued_complex(bim1, bim2)
            flat = t1.n_crossings + t2.n_crossings == 0
            for a in bim1.left_objects:
                for c in bim2.right_objects:
                    cellmap = gluing_map_psi(bim1, bim2, a, c, glued=glued)
                    if not cellmap.chain_map:
                        return False, f"{name1}*{name2} ({k1},{k2}): not a chain map at ({a},{c})", params
                    if not cellmap.vertexwise_iso:
                        return False, f"{name1}*{name2} ({k1},{k2}): not a vertexwise isomorphism at ({a},{c})", params
                    if not flat:
                        if cellmap.tensor.complex.homology() != cellmap.glued_cell.homology():
                            return False, f"{name1}*{name2} ({k1},{k2}): homology differs at ({a},{c})", params
    return True, None, params


def check_khovanov_oracle():
    spec0 = PlatformSpec(0, 0, 0)
    names = ["unknot_0", "unknot_1", "unknot_1b", "unknot_2", "hopf", "trefoil"]
    params = {"diagrams": names}
    empty = enumerate_matchings(0)[0]
    for name in names:
        t = corpus_tangle(name)
        bim = build_bimodule_complex(t, spec0, spec0)
        ours = bim.cell(empty, empty).homology()
        oracle = naivekh.khovanov_table(t)
        if ours != oracle:
            return False, f"{name}: arc-algebra route disagrees with the direct cube", params
        if name == "unknot_0":
            want = {(0, -1, None): (1, ()), (0, 1, None): (1, ())}
            if ours.table != want:
                return False, f"unknot normalization differs: {ours.table}", params
    return True, None, params


def check_burnside_functoriality(max_points: int = 6):
    params = {"max_points": max_points}
    for points in range(2, max_points + 1, 2):
        alg = ArcAlgebra(points)
        for a in alg.objects:
            for b in alg.objects:
                for c in alg.objects:
                    trace = multiplication_trace(a, b, c)
                    corr = script_correspondence(trace)
                    mat = forget(corr)
                    shift = 0
                    step_mats = []
                    for st in trace.steps:
                        step_mats.append(forget(elementary_correspondence(st, shift)))
                        shift -= 1
                    prod = None
                    for m2 in step_mats:
                        prod = m2 if prod is None else mat_mul(m2, prod)
                    if prod is None:
                        src = GradedSet.of_labelings(len(trace.initial.circles))
                        prod = forget(identity_correspondence(src))
                    if mat != prod:
                        return False, f"forget does not intertwine composition at ({a},{b},{c})", params
                    psi3 = check_psi3(trace, corr)
                    if not psi3["ok"]:
                        return False, f"genus/label constraints fail at ({a},{b},{c})", params
                    # Counting matrix reproduces the linear composition map.
                    full = multiplication_correspondence(alg, a, b, c)
                    counting = forget(full)
                    nab = len(alg.hom_basis(a, b))
                    nbc = len(alg.hom_basis(b, c))
                    for i in range(nab):
                        for j in range(nbc):
                            col = full.source.elements.index(
                                (alg.hom_basis(a, b)[i], alg.hom_basis(b, c)[j]))
                            want = alg.multiply_sparse(a, b, c, i, j)
                            got = {k: counting[k][col] for k in range(len(counting)) if counting[k][col]}
                            if got != want:
                                return False, f"counting matrix differs from composition at ({a},{b},{c})", params
    return True, None, params


def check_burnside_absorbing(max_n: int = 2, max_points: int = 6):
    params = {"max_n": max_n, "max_points": max_points}
    for n in range(max_n + 1):
        for spec in _legal_specs(n, max_points):
            alg = PlatformAlgebra(spec, quotient=False)
            if not alg.objects:
                continue
            functor = multiplication_functor(alg, include_triples=len(alg.objects) <= 3)
            marked = {(a, b): alg.ideal_basis(a, b) for a in alg.objects for b in alg.objects}
            report = check_absorbing(functor, marked)
            if not report["ok"]:
                return False, f"{spec}: ideal is not absorbing: {report['violations'][:1]}", params
            quotient = quotient_functor(functor, marked)
            plat = PlatformAlgebra(spec, quotient=True)
            for mor in quotient.morphisms:
                if len(mor.inputs) != 2:
                    continue
                (a, b), (b2, c) = mor.inputs
                counting = forget(mor.corr)
                basis_ab = plat.hom_basis(a, b)
                basis_bc = plat.hom_basis(b2, c)
                basis_ac = plat.hom_basis(a, c)
                src_elements = mor.corr.source.elements
                tgt_elements = mor.corr.target.elements
                for i, fi in enumerate(basis_ab):
                    for j, gj in enumerate(basis_bc):
                        col = src_elements.index((fi, gj))
                        got = {basis_ac.index(tgt_elements[r]): counting[r][col]
                               for r in range(len(tgt_elements)) if counting[r][col]}
                        if got != plat.multiply_sparse(a, b2, c, i, j):
                            return False, f"{spec}: quotient functor disagrees with platform constants", params
    return True, None, params


def _rii_insular_instance():
    """The acyclic-piece subfunctor of the two-crossing RII cube."""
    t = corpus_tangle("r2_pair")
    spec = PlatformSpec(2, 1, 1)
    bim = build_bimodule_complex(t, spec, spec, quotient=False)
    alg = bim.right_algebra  # full restriction, shared on both sides
    objs = list(alg.objects)
    shift = alg.base.shift

    objects: dict = {}
    for a in objs:
        for b in objs:
            objects[("alg", a, b)] = GradedSet.of_labelings(
                len(alg.base.decomposition(a, b).circles), shift)
    mod_sets: dict = {}
    for a in objs:
        for b in objs:
            data = bim.vertex_data(a, b)
            for v, vd in data.items():
                w = sum(v)
                mod_sets[("mod", v, a, b)] = GradedSet.of_labelings(
                    len(vd.dec.circles), bim.shift - w - bim.n_plus + 2 * bim.n_minus)
    objects.update(mod_sets)

    morphisms: list[Multimorphism] = []
    from .frobenius import SurgeryScript, script_trace as run_trace

    # Cube edge morphisms (1-input, so source elements are 1-tuples).
    from .burnside import Correspondence, product_set

    for a in objs:
        for b in objs:
            data = bim.vertex_data(a, b)
            for v, vd in data.items():
                for ci in range(bim.family.n_crossings):
                    if v[ci] == 1:
                        continue
                    w_vertex = v[:ci] + (1,) + v[ci + 1:]
                    trace = run_trace(vd.arcs, SurgeryScript((bim.family.edge_step(ci),)))
                    src_set = product_set([mod_sets[("mod", v, a, b)]])
                    tgt_set = mod_sets[("mod", w_vertex, a, b)]
                    raw = script_correspondence(trace)
                    elems = tuple((p, (x,), y) for p, x, y in raw.elements)
                    corr = Correspondence(src_set, tgt_set, elems)
                    morphisms.append(Multimorphism((("mod", v, a, b),), ("mod", w_vertex, a, b), corr))
    # Right action morphisms at fixed vertices.
    from .frobenius import pair_diagram_arcs, union_arcs, SurgeryStep, match_circles

    for a in objs:
        for b in objs:
            for bp in objs:
                data = bim.vertex_data(a, b)
                tgt_data = bim.vertex_data(a, bp)
                for v, vd in data.items():
                    union = union_arcs(vd.arcs, pair_diagram_arcs(b, bp))
                    steps = tuple(SurgeryStep((0, ("Rb", i, j)), (1, ("a", i, j)))
                                  for i, j in sorted(b.pairs))
                    trace = run_trace(union, SurgeryScript(steps))
                    matching = match_circles(
                        trace.final, tgt_data[v].dec,
                        lambda node: node[1] if node[0] == 0 else bim.family.right_node(node[1]))
                    n_cell = len(vd.dec.circles)
                    raw = script_correspondence(trace)
                    src_set = product_set([mod_sets[("mod", v, a, b)], objects[("alg", b, bp)]])
                    tgt_set = mod_sets[("mod", v, a, bp)]
                    inv = [None] * len(tgt_data[v].dec.circles)
                    for i2, j2 in enumerate(matching):
                        inv[j2] = i2
                    elems = tuple(
                        (p, (x[:n_cell], x[n_cell:]), tuple(y[inv[r]] for r in range(len(inv))))
                        for p, x, y in raw.elements
                    )
                    corr = Correspondence(src_set, tgt_set, elems)
                    morphisms.append(Multimorphism(
                        (("mod", v, a, b), ("alg", b, bp)), ("mod", v, a, bp), corr))

    functor = FunctorData(objects, morphisms)
    island = {name for name in objects if name[0] == "mod"}

    # The acyclic subcomplex: at the vertex whose resolution has a closed
    # middle circle, the labelings with that circle labeled 1; everything at
    # the terminal vertex.
    middle_vertex = None
    closed_circle_pos = None
    for v in bim.vertices():
        dec_nodes = bim.vertex_data(objs[0], objs[0])[v].dec
        for pos, circ in enumerate(dec_nodes.circles):
            if all(isinstance(x, tuple) and x[0] in ("u", "p") for x in circ.nodes):
                middle_vertex = v
                closed_circle_pos = pos
        if middle_vertex is not None:
            break
    assert middle_vertex is not None, "the RII square contains a closed-circle vertex"

    marked: dict = {}
    for a in objs:
        for b in objs:
            data = bim.vertex_data(a, b)
            dec = data[middle_vertex].dec
            pos = next(p for p, circ in enumerate(dec.circles)
                       if all(isinstance(x, tuple) and x[0] in ("u", "p") for x in circ.nodes))
            marked[("mod", middle_vertex, a, b)] = frozenset(
                lab for lab in all_labelings(len(dec.circles)) if lab[pos] == ONE)
            top = (1, 1)
            marked[("mod", top, a, b)] = frozenset(
                all_labelings(len(data[top].dec.circles)))
    j_marked: dict = {}
    for a in objs:
        for b in objs:
            j_marked[("alg", a, b)] = alg.ideal_basis(a, b)
            for v, dropped in bim.j_basis(a, b).items():
                j_marked[("mod", v, a, b)] = dropped
    return functor, island, marked, j_marked


def check_burnside_insular():
    params = {"instance": "RII square over (2;1,1)"}
    functor, island, marked, j_marked = _rii_insular_instance()
    report = check_insular(functor, island, marked)
    if not report["ok"]:
        return False, f"acyclic piece is not insular: {report['violations'][:1]}", params
    absorbing = check_absorbing(functor, j_marked)
    if not absorbing["ok"]:
        return False, f"platform submodule is not absorbing on the cube: {absorbing['violations'][:1]}", params
    quotient = quotient_functor(functor, j_marked)
    reduced = {
        name: frozenset(x for x in marked.get(name, frozenset()) if x not in j_marked.get(name, frozenset()))
        for name in marked
    }
    report2 = check_insular(quotient, island, reduced)
    if not report2["ok"]:
        return False, f"induced subfunctor is not insular on the quotient: {report2['violations'][:1]}", params
    return True, None, params


def check_bpw(max_n: int = 3, sigma_powers=(1, 2), truncate: Optional[int] = None):
    params = {"max_n": max_n, "sigma_powers": list(sigma_powers), "truncate": truncate}
    for n in range(1, max_n + 1):
        t = corpus_tangle(f"identity_{n}")
        for k in range(n + 1):
            _xi, report = bpw_comparison(t, k, truncation=truncate)
            if not report.ok:
                return False, f"identity braid n={n}, k={k}: {report}", params
    for c in sigma_powers:
        t = corpus_tangle("sigma1" if c == 1 else f"sigma1_{c}")
        for k in range(3):
            _xi, report = bpw_comparison(t, k, truncation=truncate)
            if not report.ok:
                return False, f"sigma1^{c}, k={k}: {report}", params
    return True, None, params


CLOSABLE = ["identity_1", "identity_2", "identity_3", "identity_4", "sigma1", "sigma1_2",
            "sigma1_3", "sigma1_inv", "capcup", "identity_1_circle", "r1_twist",
            "r1_twist_2strand", "r2_pair", "r3_left", "r3_right"]


def check_annular_filtration():
    params = {"closures": CLOSABLE, "invariance_pairs": [p[0] for p in CLOSURE_INVARIANCE_PAIRS]}
    for name in CLOSABLE:
        report = filtration_check(AnnularDiagram(corpus_tangle(name)))
        if not report["ok"]:
            return False, f"{name}: a differential raises the winding grading", params
    for move, name1, name2 in CLOSURE_INVARIANCE_PAIRS:
        c1 = ClosureComplex(AnnularDiagram(corpus_tangle(name1)), graded=True)
        c2 = ClosureComplex(AnnularDiagram(corpus_tangle(name2)), graded=True)
        if c1.complex.homology() != c2.complex.homology():
            return False, f"{move}: annular tables differ for {name1} vs {name2}", params
    return True, None, params


# ---------------------------------------------------------------------------
# Registry and runner


CHECKS: dict[str, tuple[str, Callable]] = {
    "catalan": ("matching counts are Catalan numbers", check_catalan),
    "arc_algebra": ("arc algebra composition is associative and unital", check_arc_algebra),
    "ideal_absorption": ("the platform ideal is a two-sided ideal", check_ideal_absorption),
    "nesting_iso": ("the nesting map is full, faithful, and an isomorphism once platforms dominate", check_iota),
    "object_count": ("total platform algebra has 2^n objects", check_object_count),
    "reidemeister": ("bimodule homology is invariant under Reidemeister moves", check_reidemeister),
    "pairing": ("gluing tangles tensors their bimodules", check_pairing),
    "khovanov": ("closed diagrams reproduce the direct cube invariant", check_khovanov_oracle),
    "burnside_functor": ("counting fibers intertwines composition and the genus rules", check_burnside_functoriality),
    "burnside_absorbing": ("the ideal is absorbing at the set level and quotients match", check_burnside_absorbing),
    "burnside_insular": ("the acyclic RII piece is insular, also after the platform quotient", check_burnside_insular),
    "bpw": ("the cyclic bar complex of the platform bimodule computes the annular invariant", check_bpw),
    "annular_filtration": ("saddles never raise the winding grading; closures are move-invariant", check_annular_filtration),
}


def run_checks(names: Optional[list[str]] = None, max_n: int = 3,
               truncate: Optional[int] = None) -> list[CheckResult]:
    selected = list(CHECKS) if names is None else names
    for name in selected:
        if name not in CHECKS:
            raise KeyError(f"unknown check {name!r}")

    def run_one(name: str) -> CheckResult:
        statement, fn = CHECKS[name]
        kwargs = {}
        if name in ("ideal_absorption", "nesting_iso", "bpw"):
            kwargs["max_n"] = max_n
        if name == "bpw" and truncate is not None:
            kwargs["truncate"] = truncate
        start = time.perf_counter()
        passed, counterexample, params = fn(**kwargs)
        return CheckResult(name, statement, params, passed, counterexample,
                           time.perf_counter() - start)

    workers = max(1, int(os.environ.get("ARCSPEC_THREADS", "1")))
    if workers == 1:
        results = [run_one(name) for name in selected]
    else:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(run_one, selected))
    return results
