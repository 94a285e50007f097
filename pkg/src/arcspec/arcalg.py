"""
The arc algebra on crossingless matchings, as a linear category.

Objects are the crossingless matchings of an even number of points; the
morphism group from a to b is free on the {1,X}-labelings of the circles of
the glued diagram aW(b), with quantum degrees shifted up by half the point
count.  Composition glues aW(b) to bW(c) by one saddle per arc of b and
transports labels through the resulting merges and splits.
"""

from __future__ import annotations

from typing import Mapping

from .frobenius import (
    all_labelings,
    apply_script,
    canonical_multiplication_script,
    label_qsum,
    match_circles,
    relabel_sum,
    script_trace,
    transport_labels,
    ONE,
)
from .planarcurves import CircleDecomposition, CrossinglessMatching, enumerate_matchings, glue

SparseVec = dict[int, int]


class ArcAlgebra:
    """The linear category on crossingless matchings of `points` points."""

    def __init__(self, points: int):
        if points % 2 != 0 or points < 0:
            raise ValueError(f"point count must be even and non-negative, got {points}")
        self.points = points
        self.shift = points // 2
        self.objects: tuple[CrossinglessMatching, ...] = tuple(enumerate_matchings(points))
        self._dec: dict = {}
        self._envs: dict = {}
        self._products: dict = {}

    def decomposition(self, a: CrossinglessMatching, b: CrossinglessMatching) -> CircleDecomposition:
        key = (a, b)
        if key not in self._dec:
            self._dec[key] = glue(a, None, b)
        return self._dec[key]

    def hom_basis(self, a, b) -> list[tuple[str, ...]]:
        return all_labelings(len(self.decomposition(a, b)))

    def hom_basis_q(self, a, b) -> list[int]:
        return [label_qsum(labels) + self.shift for labels in self.hom_basis(a, b)]

    def basis_index(self, a, b) -> dict[tuple[str, ...], int]:
        return {labels: i for i, labels in enumerate(self.hom_basis(a, b))}

    def graded_ranks(self, a, b) -> dict[int, int]:
        out: dict[int, int] = {}
        for q in self.hom_basis_q(a, b):
            out[q] = out.get(q, 0) + 1
        return out

    def unit_at(self, a) -> SparseVec:
        """The all-1 labeling of aW(a); a two-sided identity in degree 0."""
        labels = (ONE,) * len(self.decomposition(a, a))
        return {self.basis_index(a, a)[labels]: 1}

    def _mult_env(self, a, b, c):
        key = (a, b, c)
        if key not in self._envs:
            arcs, script = canonical_multiplication_script(a, b, c)
            trace = script_trace(arcs, script)
            target = self.decomposition(a, c)
            matching = match_circles(trace.final, target, lambda node: node[1])
            self._envs[key] = (trace, matching, len(target), self.basis_index(a, c))
        return self._envs[key]

    def multiply_sparse(self, a, b, c, i: int, j: int) -> SparseVec:
        key = (a, b, c, i, j)
        if key in self._products:
            return self._products[key]
        trace, matching, n_target, index = self._mult_env(a, b, c)
        f = self.hom_basis(a, b)[i]
        g = self.hom_basis(b, c)[j]
        out = relabel_sum(transport_labels(trace, f + g), matching, n_target)
        result = {index[labels]: coeff for labels, coeff in out.items()}
        self._products[key] = result
        return result

    def multiply_table(self, a, b, c) -> dict[tuple[int, int], SparseVec]:
        return {
            (i, j): self.multiply_sparse(a, b, c, i, j)
            for i in range(len(self.hom_basis(a, b)))
            for j in range(len(self.hom_basis(b, c)))
        }

    def multiply(self, a, b, c, f: Mapping[int, int], g: Mapping[int, int]) -> SparseVec:
        """Bilinear extension of basis composition hom(a,b) x hom(b,c) -> hom(a,c)."""
        table = self.multiply_table(a, b, c)
        out: SparseVec = {}
        for i, ci in f.items():
            if not ci:
                continue
            for j, cj in g.items():
                if not cj:
                    continue
                for k, ck in table[(i, j)].items():
                    out[k] = out.get(k, 0) + ci * cj * ck
        return {k: v for k, v in out.items() if v}

    def total_rank(self) -> int:
        return sum(len(self.hom_basis(a, b)) for a in self.objects for b in self.objects)


def build_arc_algebra(points: int) -> ArcAlgebra:
    """All objects and hom bases of the arc algebra on `points` points."""
    alg = ArcAlgebra(points)
    for a in alg.objects:
        for b in alg.objects:
            alg.hom_basis(a, b)
    return alg


def multiply(algebra: ArcAlgebra, a, b, c, f: Mapping[int, int], g: Mapping[int, int]) -> SparseVec:
    return algebra.multiply(a, b, c, f, g)


def unit_at(algebra: ArcAlgebra, a) -> SparseVec:
    return algebra.unit_at(a)
