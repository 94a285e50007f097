"""
Platform algebras: subquotients of arc algebras by platform constraints.

Restricting an arc algebra to the matchings admissible for a platform
specification gives a subcategory; the ideal spanned by every generator on a
pair with a typeIII circle, together with all generators labeling a
platform-meeting circle by X, is a two-sided ideal, and the platform algebra
is the quotient.  Because the ideal is spanned by basis elements, quotient
multiplication is literally "multiply upstairs, delete ideal terms".

The nesting map iota wraps a matching in one outermost arc, turning the
(n; k1, k2) world into the (n; k1+1, k2+1) world; on morphisms it labels the
new circle by 1.  It is always full and faithful and is an isomorphism once
k1 + k2 >= n.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping, Optional

from .arcalg import ArcAlgebra, SparseVec
from .frobenius import ONE, X
from .planarcurves import (
    CircleDecomposition,
    CrossinglessMatching,
    PlatformSpec,
    classify_circles,
    enumerate_platform_matchings,
    glue,
    iota,
)


def ideal_labels(spec: PlatformSpec, dec: CircleDecomposition, basis: list[tuple[str, ...]]) -> frozenset:
    """The ideal's basis inside one hom group, from the circle classification."""
    tags = classify_circles(dec, spec)
    if "typeIII" in tags:
        return frozenset(basis)
    platform_positions = [i for i, t in enumerate(tags) if t == "typeII"]
    return frozenset(labels for labels in basis if any(labels[i] == X for i in platform_positions))


class PlatformAlgebra:
    """Quotient (or, with quotient=False, restriction) of an arc algebra.

    With quotient=True this is the platform algebra over `spec`; with
    quotient=False it is the full subcategory of the arc algebra spanned by
    the admissible matchings, which is what tangle bimodules restrict along.
    """

    def __init__(self, spec: PlatformSpec, quotient: bool = True):
        self.spec = spec
        self.quotient = quotient
        self.base = ArcAlgebra(spec.points)
        self.objects: tuple[CrossinglessMatching, ...] = tuple(enumerate_platform_matchings(spec))
        self._hom: dict = {}
        # An admissible matching never has a typeIII circle on its own pair
        # (its pairs avoid same-platform arcs), so units survive the quotient.
        for a in self.objects:
            tags = classify_circles(self.base.decomposition(a, a), spec)
            assert "typeIII" not in tags, f"admissible object {a} has a typeIII self-circle"

    @property
    def shift(self) -> int:
        return self.base.shift

    def decomposition(self, a, b):
        return self.base.decomposition(a, b)

    def _require(self, *objs) -> None:
        for o in objs:
            if o not in self.objects:
                raise ValueError(f"{o} is not an admissible matching for {self.spec}")

    def ideal_basis(self, a, b) -> frozenset:
        self._require(a, b)
        return ideal_labels(self.spec, self.base.decomposition(a, b), self.base.hom_basis(a, b))

    def hom_basis(self, a, b) -> list[tuple[str, ...]]:
        key = (a, b)
        if key not in self._hom:
            self._require(a, b)
            full = self.base.hom_basis(a, b)
            if self.quotient:
                ideal = self.ideal_basis(a, b)
                self._hom[key] = [labels for labels in full if labels not in ideal]
            else:
                self._hom[key] = list(full)
        return self._hom[key]

    def hom_basis_q(self, a, b) -> list[int]:
        from .frobenius import label_qsum

        return [label_qsum(labels) + self.base.shift for labels in self.hom_basis(a, b)]

    def basis_index(self, a, b) -> dict[tuple[str, ...], int]:
        return {labels: i for i, labels in enumerate(self.hom_basis(a, b))}

    def graded_ranks(self, a, b) -> dict[int, int]:
        out: dict[int, int] = {}
        for q in self.hom_basis_q(a, b):
            out[q] = out.get(q, 0) + 1
        return out

    def unit_at(self, a) -> SparseVec:
        labels = (ONE,) * len(self.base.decomposition(a, a))
        return {self.basis_index(a, a)[labels]: 1}

    def multiply_sparse(self, a, b, c, i: int, j: int) -> SparseVec:
        """Compose quotient basis elements: multiply upstairs, delete ideal terms."""
        basis_ab = self.hom_basis(a, b)
        basis_bc = self.hom_basis(b, c)
        up = self.base.basis_index(a, b)[basis_ab[i]]
        vp = self.base.basis_index(b, c)[basis_bc[j]]
        prod = self.base.multiply_sparse(a, b, c, up, vp)
        full_ac = self.base.hom_basis(a, c)
        index_ac = self.basis_index(a, c)
        out: SparseVec = {}
        for k, coeff in prod.items():
            labels = full_ac[k]
            kq = index_ac.get(labels)
            if kq is not None:
                out[kq] = out.get(kq, 0) + coeff
        return out

    def multiply(self, a, b, c, f: Mapping[int, int], g: Mapping[int, int]) -> SparseVec:
        out: SparseVec = {}
        for i, ci in f.items():
            for j, cj in g.items():
                if not ci * cj:
                    continue
                for k, ck in self.multiply_sparse(a, b, c, i, j).items():
                    out[k] = out.get(k, 0) + ci * cj * ck
        return {k: v for k, v in out.items() if v}

    def total_rank(self) -> int:
        return sum(len(self.hom_basis(a, b)) for a in self.objects for b in self.objects)


def build_platform_algebra(spec: PlatformSpec) -> PlatformAlgebra:
    alg = PlatformAlgebra(spec)
    for a in alg.objects:
        for b in alg.objects:
            alg.hom_basis(a, b)
    return alg


def ideal_basis(spec: PlatformSpec, a: CrossinglessMatching, b: CrossinglessMatching) -> frozenset:
    """Basis of the ideal inside hom(a, b) of the arc algebra on spec.points points."""
    base = ArcAlgebra(spec.points)
    return ideal_labels(spec, base.decomposition(a, b), base.hom_basis(a, b))


def iota_extend_labels(
    a: CrossinglessMatching, b: CrossinglessMatching, labels: tuple[str, ...], power: int
) -> tuple[CrossinglessMatching, CrossinglessMatching, tuple[str, ...]]:
    """Push a labeling of aW(b) through `power` nesting steps.

    Each step shifts every circle up by one point and labels the new outermost
    circle (through the lowest and highest points) by 1.
    """
    for _ in range(power):
        dec = glue(a, None, b)
        a2, b2 = iota(a), iota(b)
        dec2 = glue(a2, None, b2)
        new_labels = []
        for c in dec2.circles:
            pts = set(c.nodes)
            if 1 in pts:
                assert pts == {1, a2.points}, "outermost circle must be the new nested pair"
                new_labels.append(ONE)
            else:
                src = dec.index_containing(min(pts) - 1)
                new_labels.append(labels[src])
        a, b, labels = a2, b2, tuple(new_labels)
    return a, b, labels


@dataclass
class IotaFunctor:
    """Object bijection plus hom-group maps induced by one nesting step."""

    source: PlatformAlgebra
    target: PlatformAlgebra

    def object_map(self, a: CrossinglessMatching) -> CrossinglessMatching:
        return iota(a, self.source.spec)

    def map_labels(self, a, b, labels: tuple[str, ...]) -> tuple[str, ...]:
        _, _, out = iota_extend_labels(a, b, labels, 1)
        return out

    def hom_matrix(self, a, b) -> dict[int, int]:
        """Quotient-basis map as {source index: target index}; injective always."""
        ia, ib = self.object_map(a), self.object_map(b)
        tgt_index = self.target.basis_index(ia, ib)
        out: dict[int, int] = {}
        for i, labels in enumerate(self.source.hom_basis(a, b)):
            image = self.map_labels(a, b, labels)
            if image not in tgt_index:
                raise ValueError(f"nesting map leaves the quotient basis at {labels}")
            out[i] = tgt_index[image]
        return out


def iota_functor(spec: PlatformSpec, target_spec: PlatformSpec) -> IotaFunctor:
    if (target_spec.n, target_spec.k1, target_spec.k2) != (spec.n, spec.k1 + 1, spec.k2 + 1):
        raise ValueError(f"target {target_spec} is not {spec} with both platforms grown by one")
    return IotaFunctor(PlatformAlgebra(spec), PlatformAlgebra(target_spec))


def total_object_count(n: int) -> int:
    """Number of objects of the total platform algebra, summed over k."""
    return sum(len(enumerate_platform_matchings(PlatformSpec(n, n - k, k))) for k in range(n + 1))
