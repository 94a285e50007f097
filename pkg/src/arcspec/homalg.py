"""
Exact homological algebra over the integers.

Matrices are lists of rows of Python ints (arbitrary precision; coefficient
swell in Smith reduction is real even for small homological computations, so
nothing here ever touches floats or fixed-width ints).  Chain complexes are
finitely generated free Z-complexes whose generators carry a homological
grading h, a quantum grading q, and optionally a winding grading ell; the
differential lowers h by 1 and preserves q (and ell when present), so all
computations factor through (q, ell)-blocks.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Hashable, Iterable, Mapping, Optional, Sequence

Matrix = list[list[int]]
SparseMap = dict[int, dict[int, int]]


def xgcd(a: int, b: int) -> tuple[int, int, int]:
    """Return (g, x, y) with g = gcd(a, b) >= 0 and x*a + y*b = g."""
    x, next_x = 1, 0
    y, next_y = 0, 1
    g, next_g = a, b
    while next_g:
        q = g // next_g
        x, next_x = next_x, x - q * next_x
        y, next_y = next_y, y - q * next_y
        g, next_g = next_g, g - q * next_g
    if g < 0:
        x, y, g = -x, -y, -g
    return g, x, y


def mat_identity(n: int) -> Matrix:
    return [[1 if i == j else 0 for j in range(n)] for i in range(n)]


def mat_mul(a: Matrix, b: Matrix) -> Matrix:
    if a and b:
        assert len(a[0]) == len(b), "inner dimensions must agree"
    cols = len(b[0]) if b else 0
    out = [[0] * cols for _ in range(len(a))]
    for i, row in enumerate(a):
        out_i = out[i]
        for k, aik in enumerate(row):
            if aik:
                brow = b[k]
                for j in range(cols):
                    if brow[j]:
                        out_i[j] += aik * brow[j]
    return out


def mat_transpose(a: Matrix) -> Matrix:
    if not a:
        return []
    return [list(col) for col in zip(*a)]


def mat_eq(a: Matrix, b: Matrix) -> bool:
    return a == b


def mat_is_zero(a: Matrix) -> bool:
    return all(all(x == 0 for x in row) for row in a)


def determinant(a: Matrix) -> int:
    """Determinant by fraction-free (Bareiss) elimination."""
    n = len(a)
    if n == 0:
        return 1
    assert all(len(row) == n for row in a), "determinant needs a square matrix"
    m = [row[:] for row in a]
    sign = 1
    prev = 1
    for k in range(n - 1):
        if m[k][k] == 0:
            for i in range(k + 1, n):
                if m[i][k] != 0:
                    m[k], m[i] = m[i], m[k]
                    sign = -sign
                    break
            else:
                return 0
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                m[i][j] = (m[i][j] * m[k][k] - m[i][k] * m[k][j]) // prev
            m[i][k] = 0
        prev = m[k][k]
    return sign * m[n - 1][n - 1]


@dataclass
class SNFResult:
    """Smith decomposition D = U * M * V with U, V unimodular.

    `uinv` is the inverse of U, maintained alongside the reduction; it is what
    lets quotient bases be lifted back to representatives.
    """

    d: Matrix
    u: Matrix
    v: Matrix
    uinv: Matrix

    def invariant_factors(self) -> list[int]:
        return [self.d[i][i] for i in range(min(len(self.d), len(self.d[0]) if self.d else 0)) if self.d[i][i] != 0]

    @property
    def rank(self) -> int:
        return len(self.invariant_factors())


def smith_normal_form(m: Matrix) -> SNFResult:
    """Smith normal form over Z.

    Returns D = U*M*V diagonal with d_i >= 0 and d_i | d_{i+1}.  Pivots prefer
    entries of absolute value 1, which keeps coefficient growth tame on the
    unit-coefficient matrices that dominate these computations.
    """
    rows = len(m)
    cols = len(m[0]) if rows else 0
    a = [row[:] for row in m]
    u = mat_identity(rows)
    uinv = mat_identity(rows)
    v = mat_identity(cols)

    def swap_rows(i, j):
        if i == j:
            return
        a[i], a[j] = a[j], a[i]
        u[i], u[j] = u[j], u[i]
        for row in uinv:
            row[i], row[j] = row[j], row[i]

    def swap_cols(i, j):
        if i == j:
            return
        for row in a:
            row[i], row[j] = row[j], row[i]
        for row in v:
            row[i], row[j] = row[j], row[i]

    def negate_row(i):
        a[i] = [-x for x in a[i]]
        u[i] = [-x for x in u[i]]
        for row in uinv:
            row[i] = -row[i]

    def add_row(src, dst, c):
        # row_dst += c * row_src; inverse op on uinv acts on columns.
        asrc, adst = a[src], a[dst]
        for j in range(cols):
            if asrc[j]:
                adst[j] += c * asrc[j]
        usrc, udst = u[src], u[dst]
        for j in range(rows):
            if usrc[j]:
                udst[j] += c * usrc[j]
        for row in uinv:
            row[src] -= c * row[dst]

    def add_col(src, dst, c):
        for row in a:
            if row[src]:
                row[dst] += c * row[src]
        for row in v:
            if row[src]:
                row[dst] += c * row[src]

    def combine_rows(i1, i2, t):
        # Make a[i2][t] zero using a gcd combination; det of the 2x2 block is 1.
        p, q = a[i1][t], a[i2][t]
        if q == 0:
            return
        if p != 0 and q % p == 0:
            add_row(i1, i2, -(q // p))
            return
        g, x, y = xgcd(p, q)
        pg, qg = p // g, q // g
        r1a, r2a = a[i1], a[i2]
        a[i1] = [x * r1a[j] + y * r2a[j] for j in range(cols)]
        a[i2] = [-qg * r1a[j] + pg * r2a[j] for j in range(cols)]
        r1u, r2u = u[i1], u[i2]
        u[i1] = [x * r1u[j] + y * r2u[j] for j in range(rows)]
        u[i2] = [-qg * r1u[j] + pg * r2u[j] for j in range(rows)]
        # Inverse of [[x, y], [-qg, pg]] is [[pg, -y], [qg, x]]; apply as column ops.
        for row in uinv:
            c1, c2 = row[i1], row[i2]
            row[i1] = c1 * pg + c2 * qg
            row[i2] = -c1 * y + c2 * x

    def combine_cols(j1, j2, t):
        p, q = a[t][j1], a[t][j2]
        if q == 0:
            return
        if p != 0 and q % p == 0:
            add_col(j1, j2, -(q // p))
            return
        g, x, y = xgcd(p, q)
        pg, qg = p // g, q // g
        for row in (a, v):
            for r in row:
                c1, c2 = r[j1], r[j2]
                r[j1] = x * c1 + y * c2
                r[j2] = -qg * c1 + pg * c2

    t = 0
    while True:
        # Locate a pivot in the lower-right block, preferring units.
        pivot = None
        for i in range(t, rows):
            arow = a[i]
            for j in range(t, cols):
                x = arow[j]
                if x:
                    if pivot is None or abs(x) < abs(a[pivot[0]][pivot[1]]):
                        pivot = (i, j)
                        if abs(x) == 1:
                            break
            if pivot is not None and abs(a[pivot[0]][pivot[1]]) == 1:
                break
        if pivot is None:
            break
        swap_rows(t, pivot[0])
        swap_cols(t, pivot[1])
        while True:
            for i in range(t + 1, rows):
                if a[i][t]:
                    combine_rows(t, i, t)
            if any(a[t][j] for j in range(t + 1, cols)):
                for j in range(t + 1, cols):
                    if a[t][j]:
                        combine_cols(t, j, t)
                if any(a[i][t] for i in range(t + 1, rows)):
                    continue
            break
        if a[t][t] < 0:
            negate_row(t)
        t += 1

    # Enforce the divisibility chain d_i | d_{i+1}.
    changed = True
    while changed:
        changed = False
        for i in range(t - 1):
            di, dj = a[i][i], a[i + 1][i + 1]
            if di and dj % di != 0:
                changed = True
                add_col(i + 1, i, 1)
                combine_rows(i, i + 1, i)
                combine_cols(i, i + 1, i)
                if a[i][i] < 0:
                    negate_row(i)
                if a[i + 1][i + 1] < 0:
                    negate_row(i + 1)
    return SNFResult(a, u, v, uinv)


def invariant_factors(m: Matrix) -> list[int]:
    return smith_normal_form(m).invariant_factors()


def matrix_rank(m: Matrix) -> int:
    return smith_normal_form(m).rank


def kernel_basis(m: Matrix) -> list[list[int]]:
    """Basis (as column vectors) of the lattice of integer solutions of M x = 0."""
    if not m or not m[0]:
        n = len(m[0]) if m else 0
        return [[1 if i == j else 0 for i in range(n)] for j in range(n)]
    snf = smith_normal_form(m)
    n = len(m[0])
    return [[snf.v[i][j] for i in range(n)] for j in range(snf.rank, n)]


def solve_matrix(m: Matrix, b: list[int]) -> Optional[list[int]]:
    """One integer solution x of M x = b, or None if none exists."""
    rows = len(m)
    cols = len(m[0]) if rows else 0
    if rows == 0:
        return [0] * cols
    snf = smith_normal_form(m)
    ub = [sum(snf.u[i][k] * b[k] for k in range(rows)) for i in range(rows)]
    z = [0] * cols
    for i in range(rows):
        d = snf.d[i][i] if i < cols else 0
        if d == 0:
            if ub[i] != 0:
                return None
        else:
            if ub[i] % d != 0:
                return None
            if i < cols:
                z[i] = ub[i] // d
    return [sum(snf.v[i][k] * z[k] for k in range(cols)) for i in range(cols)]


@dataclass
class FreeQuotient:
    """Basis data for Z^n modulo the lattice spanned by `relations`.

    Only torsion-free quotients are produced (the construction raises
    otherwise); `project` maps ambient coordinates to quotient coordinates and
    `section` picks representatives, with project @ section = identity.
    """

    dim: int
    project: Matrix  # dim x n
    section: Matrix  # n x dim


def free_quotient(n: int, relations: Sequence[Sequence[int]]) -> FreeQuotient:
    rels = [list(r) for r in relations if any(r)]
    if not rels:
        return FreeQuotient(n, mat_identity(n), mat_identity(n))
    m = mat_transpose(rels)  # n x (#rels); image = relation lattice
    assert len(m) == n
    snf = smith_normal_form(m)
    facs = snf.invariant_factors()
    if any(f != 1 for f in facs):
        raise ValueError(f"quotient has torsion (invariant factors {facs})")
    r = len(facs)
    project = [snf.u[i][:] for i in range(r, n)]
    section = [[snf.uinv[i][j] for j in range(r, n)] for i in range(n)]
    return FreeQuotient(n - r, project, section)


@dataclass(frozen=True)
class Generator:
    """A free basis element with its gradings and an opaque identifying label."""

    h: int
    q: int
    label: Hashable
    ell: Optional[int] = None


class FreeChainComplex:
    """Finitely generated free chain complex over Z.

    `diff` maps a generator index to a sparse row {target index: coefficient};
    the differential lowers h by 1 and preserves q and (when present) ell.
    """

    def __init__(self, generators: Sequence[Generator], diff: SparseMap, check: bool = True):
        self.generators = tuple(generators)
        self.diff = {i: {j: c for j, c in row.items() if c} for i, row in diff.items() if row}
        self.diff = {i: row for i, row in self.diff.items() if row}
        if check:
            self._check_gradings()
            if not self.d_squared_is_zero():
                raise ValueError("differential does not square to zero")

    def _check_gradings(self) -> None:
        gens = self.generators
        for i, row in self.diff.items():
            gi = gens[i]
            for j in row:
                gj = gens[j]
                if gj.h != gi.h - 1:
                    raise ValueError(f"differential entry {i}->{j} changes h by {gj.h - gi.h}")
                if gj.q != gi.q:
                    raise ValueError(f"differential entry {i}->{j} changes q")
                if gi.ell is not None and gj.ell is not None and gi.ell != gj.ell:
                    raise ValueError(f"differential entry {i}->{j} changes ell")

    def d_squared_is_zero(self) -> bool:
        for i, row in self.diff.items():
            acc: dict[int, int] = {}
            for j, c in row.items():
                for k, c2 in self.diff.get(j, {}).items():
                    acc[k] = acc.get(k, 0) + c * c2
            if any(acc.values()):
                return False
        return True

    def apply_diff(self, vec: Mapping[int, int]) -> dict[int, int]:
        out: dict[int, int] = {}
        for i, c in vec.items():
            for j, c2 in self.diff.get(i, {}).items():
                out[j] = out.get(j, 0) + c * c2
        return {j: c for j, c in out.items() if c}

    def blocks(self) -> dict[tuple, dict[int, list[int]]]:
        """Indices grouped by (q, ell) and then by h."""
        out: dict[tuple, dict[int, list[int]]] = {}
        for i, g in enumerate(self.generators):
            out.setdefault((g.q, g.ell), {}).setdefault(g.h, []).append(i)
        return out

    def diff_matrix(self, sources: list[int], targets: list[int]) -> Matrix:
        pos = {j: r for r, j in enumerate(targets)}
        mat = [[0] * len(sources) for _ in targets]
        for c, i in enumerate(sources):
            for j, coeff in self.diff.get(i, {}).items():
                mat[pos[j]][c] = coeff
        return mat

    def homology(self) -> "HomologyTable":
        """Homology ranks and torsion per (h, q[, ell])."""
        table: dict[tuple, tuple[int, tuple[int, ...]]] = {}
        for (q, ell), by_h in self.blocks().items():
            ranks: dict[int, int] = {}
            torsion_in: dict[int, list[int]] = {}
            hs = sorted(by_h)
            for h in hs:
                sources = by_h[h]
                targets = by_h.get(h - 1, [])
                mat = self.diff_matrix(sources, targets)
                facs = invariant_factors(mat) if targets else []
                ranks[h] = len(facs)
                torsion_in[h - 1] = [f for f in facs if f != 1]
            for h in hs:
                free_rank = len(by_h[h]) - ranks.get(h, 0) - ranks.get(h + 1, 0)
                tors = tuple(sorted(torsion_in.get(h, [])))
                if free_rank or tors:
                    table[(h, q, ell)] = (free_rank, tors)
        return HomologyTable(table)


class HomologyTable:
    """Free rank plus torsion orders per (h, q[, ell]) triple."""

    def __init__(self, table: dict[tuple, tuple[int, tuple[int, ...]]]):
        self.table = dict(table)

    def __eq__(self, other) -> bool:
        return isinstance(other, HomologyTable) and self.table == other.table

    def __bool__(self) -> bool:
        return bool(self.table)

    def __iter__(self):
        return iter(sorted(self.table.items()))

    def rank(self, h: int, q: int, ell: Optional[int] = None) -> int:
        return self.table.get((h, q, ell), (0, ()))[0]

    def torsion(self, h: int, q: int, ell: Optional[int] = None) -> tuple[int, ...]:
        return self.table.get((h, q, ell), (0, ()))[1]

    def total_rank(self) -> int:
        return sum(r for r, _ in self.table.values())

    def to_json(self) -> list[dict]:
        out = []
        for (h, q, ell), (rank, tors) in sorted(self.table.items(), key=lambda kv: (kv[0][0], kv[0][1], kv[0][2] if kv[0][2] is not None else 0)):
            entry = {"h": h, "q": q, "rank": rank, "torsion": list(tors)}
            if ell is not None:
                entry["ell"] = ell
            out.append(entry)
        return out

    def __repr__(self) -> str:
        return f"HomologyTable({self.table!r})"


def is_chain_map(source: FreeChainComplex, target: FreeChainComplex, f: SparseMap) -> bool:
    """Check F d = d F where F maps source generators to target combinations."""
    for i in range(len(source.generators)):
        lhs: dict[int, int] = {}
        for j, c in source.diff.get(i, {}).items():
            for k, c2 in f.get(j, {}).items():
                lhs[k] = lhs.get(k, 0) + c * c2
        rhs: dict[int, int] = {}
        for j, c in f.get(i, {}).items():
            for k, c2 in target.diff.get(j, {}).items():
                rhs[k] = rhs.get(k, 0) + c * c2
        keys = set(lhs) | set(rhs)
        if any(lhs.get(k, 0) != rhs.get(k, 0) for k in keys):
            return False
    return True


def induced_map_surjective(source: FreeChainComplex, target: FreeChainComplex, f: SparseMap,
                           max_h: Optional[int] = None) -> bool:
    """Whether the induced map on homology is surjective in every degree.

    Together with equality of the homology tables this certifies an
    isomorphism (finitely generated abelian groups are Hopfian, so a
    surjection between isomorphic groups is an isomorphism).  With `max_h`
    only degrees h <= max_h are inspected.  Source and target pieces are
    matched on (h, q), ignoring any winding grading on either side.
    """
    def pieces(cx: FreeChainComplex) -> dict[tuple, list[int]]:
        out: dict[tuple, list[int]] = {}
        for i, g in enumerate(cx.generators):
            out.setdefault((g.h, g.q), []).append(i)
        return out

    src_pieces = pieces(source)
    tgt_pieces = pieces(target)
    for key, tgt_idx in tgt_pieces.items():
        h, q = key
        if max_h is not None and h > max_h:
            continue
        tgt_below = tgt_pieces.get((h - 1, q), [])
        tgt_above = tgt_pieces.get((h + 1, q), [])
        kt = kernel_basis(target.diff_matrix(tgt_idx, tgt_below))
        if not kt:
            continue
        # Boundaries from above, in kernel coordinates.
        bnd = target.diff_matrix(tgt_above, tgt_idx)
        kmat = [[kt[j][r] for j in range(len(kt))] for r in range(len(tgt_idx))]
        y_cols: list[list[int]] = []
        for c in range(len(tgt_above)):
            col = [bnd[r][c] for r in range(len(tgt_idx))]
            sol = solve_matrix(kmat, col)
            assert sol is not None, "boundary not in kernel lattice"
            y_cols.append(sol)
        # Cycle images under f, in kernel coordinates.
        src_idx = src_pieces.get(key, [])
        src_below = src_pieces.get((h - 1, q), [])
        ks = kernel_basis(source.diff_matrix(src_idx, src_below))
        z_cols: list[list[int]] = []
        for vec in ks:
            img: dict[int, int] = {}
            for r, i in enumerate(src_idx):
                if vec[r]:
                    for j, c in f.get(i, {}).items():
                        img[j] = img.get(j, 0) + vec[r] * c
            col = [img.get(i, 0) for i in tgt_idx]
            sol = solve_matrix(kmat, col)
            if sol is None:
                return False  # image of a cycle is not a cycle: not even a chain map
            z_cols.append(sol)
        stacked = [[(z_cols[c][r]) for c in range(len(z_cols))] + [(y_cols[c][r]) for c in range(len(y_cols))]
                   for r in range(len(kt))]
        facs = invariant_factors(stacked)
        if len(facs) != len(kt) or any(abs(x) != 1 for x in facs):
            return False
    return True


def induces_homology_iso(source: FreeChainComplex, target: FreeChainComplex, f: SparseMap) -> bool:
    return source.homology() == target.homology() and induced_map_surjective(source, target, f)


@dataclass
class TensorComplex:
    """M (x)_A N presented on a free basis.

    The ambient group is the direct sum over objects b of M(b) (x) N(b); the
    bimodule relations (m.f) (x) n - m (x) (f.n) span a primitive sublattice
    (that is the content of sweetness here, asserted during construction), so
    the coequalizer is free and carries an induced differential.
    """

    complex: FreeChainComplex
    ambient: list[tuple]  # (b, i, j)
    ambient_pos: dict[tuple, int]
    groups: dict  # group key -> (ambient positions, FreeQuotient)
    gen_locator: list[tuple]  # per quotient generator: (group key, row)

    def project_ambient(self, vec: Mapping[int, int]) -> dict[int, int]:
        """Quotient coordinates of an ambient vector."""
        by_group: dict = {}
        for p, c in vec.items():
            if c:
                by_group.setdefault(self._group_of[p], {})[p] = c
        out: dict[int, int] = {}
        for gkey, sub in by_group.items():
            positions, quot = self.groups[gkey]
            local = [sub.get(p, 0) for p in positions]
            for r in range(quot.dim):
                val = sum(quot.project[r][t] * local[t] for t in range(len(positions)))
                if val:
                    out[self._gen_index[(gkey, r)]] = out.get(self._gen_index[(gkey, r)], 0) + val
        return out

    def lift(self, gen: int) -> dict[int, int]:
        """An ambient representative of a quotient basis element."""
        gkey, row = self.gen_locator[gen]
        positions, quot = self.groups[gkey]
        return {positions[t]: quot.section[t][row] for t in range(len(positions)) if quot.section[t][row]}


def tensor_over_category(M, N, algebra) -> TensorComplex:
    """Coequalizer tensor product of a right module and a left module.

    `M` provides cell(b), right_action(b, bp, j) and block(b, i) plus
    koszul_sign(b, i); `N` provides cell(b), left_action(b, bp, j) (mapping
    cell(bp) to cell(b) for j in hom(b, bp)) and block(b, j).  The quotient is
    computed blockwise over (block_M, block_N, q), which keeps the Smith
    reductions small and makes vertex-wise statements directly checkable.
    """
    objects = list(algebra.objects)
    ambient: list[tuple] = []
    pos: dict[tuple, int] = {}
    amb_h: list[int] = []
    amb_q: list[int] = []
    amb_group: list[tuple] = []
    for b in objects:
        cm, cn = M.cell(b), N.cell(b)
        for i, gm in enumerate(cm.generators):
            for j, gn in enumerate(cn.generators):
                pos[(b, i, j)] = len(ambient)
                ambient.append((b, i, j))
                amb_h.append(gm.h + gn.h)
                amb_q.append(gm.q + gn.q)
                amb_group.append((M.block(b, i), N.block(b, j), gm.q + gn.q))

    relations: list[dict[int, int]] = []
    for b in objects:
        for bp in objects:
            nf = len(algebra.hom_basis_q(b, bp))
            for fj in range(nf):
                ra = M.right_action(b, bp, fj)
                la = N.left_action(b, bp, fj)
                cm_b = M.cell(b)
                cn_bp = N.cell(bp)
                for i in range(len(cm_b.generators)):
                    ra_i = ra.get(i, {})
                    for l in range(len(cn_bp.generators)):
                        la_l = la.get(l, {})
                        rel: dict[int, int] = {}
                        for k, cf in ra_i.items():
                            p = pos[(bp, k, l)]
                            rel[p] = rel.get(p, 0) + cf
                        for k2, cf in la_l.items():
                            p = pos[(b, i, k2)]
                            rel[p] = rel.get(p, 0) - cf
                        rel = {p: c for p, c in rel.items() if c}
                        if rel:
                            gkeys = {amb_group[p] for p in rel}
                            assert len(gkeys) == 1, "bimodule relation is not homogeneous"
                            relations.append(rel)

    group_positions: dict[tuple, list[int]] = {}
    for p, gkey in enumerate(amb_group):
        group_positions.setdefault(gkey, []).append(p)
    rels_by_group: dict[tuple, list[dict[int, int]]] = {}
    for rel in relations:
        gkey = amb_group[next(iter(rel))]
        rels_by_group.setdefault(gkey, []).append(rel)

    groups: dict = {}
    gens: list[Generator] = []
    gen_locator: list[tuple] = []
    gen_index: dict[tuple, int] = {}
    for gkey in sorted(group_positions, key=repr):
        positions = group_positions[gkey]
        local_pos = {p: t for t, p in enumerate(positions)}
        rel_rows = [[0] * len(positions) for _ in rels_by_group.get(gkey, [])]
        for r, rel in enumerate(rels_by_group.get(gkey, [])):
            for p, c in rel.items():
                rel_rows[r][local_pos[p]] = c
        quot = free_quotient(len(positions), rel_rows)
        groups[gkey] = (positions, quot)
        hs = {amb_h[p] for p in positions}
        assert len(hs) == 1, "tensor block mixes homological degrees"
        h = hs.pop()
        q = gkey[2]
        for r in range(quot.dim):
            gen_index[(gkey, r)] = len(gens)
            gen_locator.append((gkey, r))
            gens.append(Generator(h=h, q=q, label=("tensor", gkey, r)))

    # Ambient differential: d(m (x) n) = dm (x) n + koszul(m) m (x) dn.
    amb_diff: dict[int, dict[int, int]] = {}
    for p, (b, i, j) in enumerate(ambient):
        cm, cn = M.cell(b), N.cell(b)
        row: dict[int, int] = {}
        for i2, c in cm.diff.get(i, {}).items():
            t = pos[(b, i2, j)]
            row[t] = row.get(t, 0) + c
        sgn = M.koszul_sign(b, i)
        for j2, c in cn.diff.get(j, {}).items():
            t = pos[(b, i, j2)]
            row[t] = row.get(t, 0) + sgn * c
        if row:
            amb_diff[p] = row

    result = TensorComplex(None, ambient, pos, groups, gen_locator)  # type: ignore[arg-type]
    result._group_of = amb_group
    result._gen_index = gen_index

    diff: SparseMap = {}
    for g in range(len(gens)):
        lifted = result.lift(g)
        image: dict[int, int] = {}
        for p, c in lifted.items():
            for t, c2 in amb_diff.get(p, {}).items():
                image[t] = image.get(t, 0) + c * c2
        row = result.project_ambient(image)
        if row:
            diff[g] = row
    result.complex = FreeChainComplex(gens, diff)
    return result


@dataclass
class HochschildComplex:
    """Truncated cyclic bar complex of an algebra with bimodule coefficients.

    Generators in bar degree d are tuples m (x) f_1 (x) ... (x) f_d running
    around a cycle of objects; the differential adds the d+1 multiplication
    collapses (alternating signs, the last one wrapping around to act on the
    left of m) to the internal differential of the coefficients.  Homology is
    trustworthy only for total degree <= valid_up_to.
    """

    complex: FreeChainComplex
    truncation: int
    valid_up_to: int

    def homology(self) -> HomologyTable:
        return self.complex.homology()

    def homology_in_window(self) -> HomologyTable:
        full = self.complex.homology()
        return HomologyTable({k: v for k, v in full.table.items() if k[0] <= self.valid_up_to})


def hochschild_complex(algebra, module, truncation: int) -> HochschildComplex:
    """Cyclic bar complex of `algebra` with coefficients in `module`.

    `algebra` provides objects / hom_basis_q(a, b) / multiply_sparse(a, b, c, i, j);
    `module` provides cell(a, b) -> FreeChainComplex and sparse actions
    right_action(a, b, bp, j) and left_action(ap, a, b, j).  Both sides of the
    contract are satisfied by the platform algebra and bimodule classes.
    """
    if truncation < 0:
        raise ValueError("truncation must be >= 0")
    objects = list(algebra.objects)

    gens: list[Generator] = []
    index: dict[tuple, int] = {}

    # Enumerate generators: bar degree d uses object cycles (b_0, ..., b_d),
    # coefficients in module.cell(b_0, b_1) for d >= 1 and module.cell(b_0, b_0)
    # for d = 0, algebra factors hom(b_1, b_2), ..., hom(b_d, b_0).
    def cycles(d: int):
        def rec(prefix):
            if len(prefix) == d + 1:
                yield tuple(prefix)
                return
            for b in objects:
                yield from rec(prefix + [b])
        yield from rec([])

    for d in range(truncation + 1):
        for cyc in cycles(d):
            b0 = cyc[0]
            b1 = cyc[1] if d >= 1 else b0
            mcell = module.cell(b0, b1)
            alg_ranges = []
            ok = True
            for t in range(1, d + 1):
                src = cyc[t]
                dst = cyc[t + 1] if t < d else cyc[0]
                qs = algebra.hom_basis_q(src, dst)
                if not qs:
                    ok = False
                    break
                alg_ranges.append(qs)
            if not ok:
                continue
            def fill(t: int, f_idxs: tuple[int, ...], qsum: int):
                if t == len(alg_ranges):
                    for mi, mg in enumerate(mcell.generators):
                        key = (d, cyc, mi, f_idxs)
                        index[key] = len(gens)
                        gens.append(Generator(h=d + mg.h, q=mg.q + qsum, label=key))
                    return
                for fi, fq in enumerate(alg_ranges[t]):
                    fill(t + 1, f_idxs + (fi,), qsum + fq)
            fill(0, (), 0)

    diff: SparseMap = {}

    def emit(src_key: tuple, dst_key: tuple, coeff: int) -> None:
        if coeff == 0:
            return
        j = index.get(dst_key)
        assert j is not None, f"Hochschild differential left the generator set at {dst_key}"
        row = diff.setdefault(index[src_key], {})
        row[j] = row.get(j, 0) + coeff

    for key, i in list(index.items()):
        d, cyc, mi, f_idxs = key
        b0 = cyc[0]
        b1 = cyc[1] if d >= 1 else b0
        mcell = module.cell(b0, b1)
        # Internal differential of the coefficient complex, Koszul sign (-1)^d.
        sgn_int = -1 if d % 2 else 1
        for j, c in mcell.diff.get(mi, {}).items():
            emit(key, (d, cyc, j, f_idxs), sgn_int * c)
        if d == 0:
            continue
        # Bar face 0: right action of f_1 on m.
        new_cyc = (cyc[0],) + cyc[2:]
        act = module.right_action(b0, b1, cyc[2] if d >= 2 else cyc[0], f_idxs[0])
        for j, c in act.get(mi, {}).items():
            emit(key, (d - 1, new_cyc, j, f_idxs[1:]), c)
        # Bar faces 1..d-1: multiply adjacent algebra factors.
        for t in range(1, d):
            src = cyc[t]
            mid = cyc[t + 1]
            dst = cyc[t + 2] if t + 1 < d else cyc[0]
            prod = algebra.multiply_sparse(src, mid, dst, f_idxs[t - 1], f_idxs[t])
            sgn = -1 if t % 2 else 1
            new_cyc2 = cyc[: t + 1] + cyc[t + 2:]
            for k, c in prod.items():
                emit(key, (d - 1, new_cyc2, mi, f_idxs[: t - 1] + (k,) + f_idxs[t + 1:]), sgn * c)
        # Bar face d: wrap-around left action of f_d.
        bd = cyc[d]
        act = module.left_action(bd, b0, b1, f_idxs[d - 1])
        sgn = -1 if d % 2 else 1
        new_cyc3 = (bd,) + cyc[1:d]
        for j, c in act.get(mi, {}).items():
            emit(key, (d - 1, new_cyc3, j, f_idxs[:-1]), sgn * c)

    cx = FreeChainComplex(gens, diff)
    h_min = min((g.h for a in objects for b in objects for g in module.cell(a, b).generators), default=0)
    return HochschildComplex(cx, truncation, truncation + h_min - 1)
