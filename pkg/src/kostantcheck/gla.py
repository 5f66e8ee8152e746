"""Block-graded special linear algebras sl(m) with exact structure constants.

A composition (c_1, …, c_r) of m partitions the index range and induces the
parabolic |k|-grading of sl(m): an elementary matrix E_ab sits in degree
blockindex(b) − blockindex(a), so the strictly lower block triangle is the
negative part, the block diagonal is degree 0, and the parabolic p is the
non-negative part (block upper triangular).

Elements are stored sparsely as ``{(row, col): value}`` with exact entries
and zero values never kept; this keeps brackets of (near-)elementary
matrices O(1) instead of O(m³), which is what makes the exhaustive
differential sweeps cheap.

Fixed ordered basis of sl(m) (this order is a package-wide convention —
serialized coordinates and chain-space coordinates all refer to it):

1. strictly-lower block positions, row-major — so the first dim(g/p)
   coordinates of an element are literally the coordinates of its class in
   g/p with respect to the quotient basis {X^i};
2. strictly-upper block positions, row-major;
3. off-diagonal positions inside a diagonal block, row-major;
4. H_k = E_kk − E_{k+1,k+1} for k = 0..m−2.

The quotient basis X^i is the class of the elementary matrix at the i-th
strictly-lower position; its dual under the trace pairing tr(xy) is
Z_i = the transposed elementary matrix, and span{Z_i} = p_+.  We use the
trace form rather than the Killing form: they differ by the scalar 2m,
which cancels in every kernel/image/decomposition computed here, and the
trace form makes the dual-basis correspondence hold simultaneously in two
algebras of different size, which the cross-algebra identities need.
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache, cached_property
from typing import Iterable, Sequence

from .ratlin import frac

# A g-element: sparse matrix {(row, col): nonzero exact value}.
SparseMat = dict

Weight = tuple


def smat_copy(x: SparseMat) -> SparseMat:
    return dict(x)


def smat_scale(x: SparseMat, c) -> SparseMat:
    return {pos: c * v for pos, v in x.items()} if c else {}


def smat_add_into(acc: SparseMat, x: SparseMat, coeff=1) -> None:
    """acc += coeff·x, dropping entries that cancel to zero."""
    if not coeff:
        return
    for pos, v in x.items():
        new = acc.get(pos, 0) + coeff * v
        if new:
            acc[pos] = new
        else:
            acc.pop(pos, None)


def smat_sub(x: SparseMat, y: SparseMat) -> SparseMat:
    out = dict(x)
    smat_add_into(out, y, -1)
    return out


def smat_bracket(x: SparseMat, y: SparseMat) -> SparseMat:
    """Matrix commutator xy − yx on sparse matrices."""
    out: SparseMat = {}
    for (a, b), xv in x.items():
        for (c, d), yv in y.items():
            if b == c:
                pos = (a, d)
                new = out.get(pos, 0) + xv * yv
                if new:
                    out[pos] = new
                else:
                    out.pop(pos, None)
            if d == a:
                pos = (c, b)
                new = out.get(pos, 0) - yv * xv
                if new:
                    out[pos] = new
                else:
                    out.pop(pos, None)
    return out


def smat_trace_pair(x: SparseMat, y: SparseMat) -> Fraction:
    """tr(xy) = Σ x_ab · y_ba."""
    total = Fraction(0)
    for (a, b), xv in x.items():
        yv = y.get((b, a))
        if yv:
            total += xv * yv
    return total


def smat_trace(x: SparseMat) -> Fraction:
    return sum((v for (a, b), v in x.items() if a == b), Fraction(0))


def smat_from_dense(mat: Sequence[Sequence]) -> SparseMat:
    return {(i, j): frac(v) for i, row in enumerate(mat) for j, v in enumerate(row) if v}


def smat_to_dense(x: SparseMat, m: int) -> list[list[Fraction]]:
    out = [[Fraction(0)] * m for _ in range(m)]
    for (a, b), v in x.items():
        out[a][b] = frac(v)
    return out


def elementary(a: int, b: int) -> SparseMat:
    return {(a, b): Fraction(1)}


class GradedSL:
    """sl(m) with the block grading induced by a composition of m.

    Instances are immutable; obtain them through :func:`graded_sl`, which
    caches per composition so derived tables (pair-bracket lookups, the
    Jacobi certificate) are shared.
    """

    def __init__(self, blocks: tuple[int, ...]) -> None:
        if any(c <= 0 for c in blocks):
            raise ValueError("composition entries must be positive")
        self.blocks = tuple(blocks)
        self.m = sum(blocks)
        self.block_of: list[int] = []
        for bi, size in enumerate(blocks):
            self.block_of.extend([bi] * size)

        m, block_of = self.m, self.block_of
        self.neg_positions = [(a, b) for a in range(m) for b in range(m)
                              if block_of[a] > block_of[b]]
        self.pos_positions = [(a, b) for a in range(m) for b in range(m)
                              if block_of[a] < block_of[b]]
        inblock = [(a, b) for a in range(m) for b in range(m)
                   if a != b and block_of[a] == block_of[b]]

        self.basis_labels: list[tuple] = (
            [("E", a, b) for a, b in self.neg_positions]
            + [("E", a, b) for a, b in self.pos_positions]
            + [("E", a, b) for a, b in inblock]
            + [("H", k) for k in range(m - 1)]
        )
        self.dim = m * m - 1
        assert len(self.basis_labels) == self.dim
        self.dim_neg = len(self.neg_positions)
        self.index_of_position: dict[tuple[int, int], int] = {}
        for i, lab in enumerate(self.basis_labels):
            if lab[0] == "E":
                self.index_of_position[(lab[1], lab[2])] = i
        self.index_of_neg = {pos: i for i, pos in enumerate(self.neg_positions)}
        self.depth = block_of[-1] - block_of[0]

    # --- basis elements -------------------------------------------------

    def basis_mat(self, idx: int) -> SparseMat:
        lab = self.basis_labels[idx]
        if lab[0] == "E":
            return elementary(lab[1], lab[2])
        k = lab[1]
        return {(k, k): Fraction(1), (k + 1, k + 1): Fraction(-1)}

    def x_mat(self, i: int) -> SparseMat:
        """The chosen lift of the quotient basis vector X^i."""
        a, b = self.neg_positions[i]
        return elementary(a, b)

    def z_mat(self, i: int) -> SparseMat:
        """Dual basis vector Z_i ∈ p_+ of X^i under the trace pairing."""
        a, b = self.neg_positions[i]
        return elementary(b, a)

    def dual_basis(self) -> tuple[list[SparseMat], list[SparseMat]]:
        xs = [self.x_mat(i) for i in range(self.dim_neg)]
        zs = [self.z_mat(i) for i in range(self.dim_neg)]
        return xs, zs

    # --- grading ----------------------------------------------------------

    def degree_of_position(self, a: int, b: int) -> int:
        return self.block_of[b] - self.block_of[a]

    def grading_component(self, x: SparseMat, k: int) -> SparseMat:
        return {(a, b): v for (a, b), v in x.items()
                if self.degree_of_position(a, b) == k}

    def degrees_present(self, x: SparseMat) -> list[int]:
        return sorted({self.degree_of_position(a, b) for (a, b) in x})

    def min_degree(self, x: SparseMat) -> int | None:
        """Smallest grading degree present, or None for the zero element."""
        degs = self.degrees_present(x)
        return degs[0] if degs else None

    def positive_part(self, x: SparseMat) -> SparseMat:
        return {pos: v for pos, v in x.items() if self.degree_of_position(*pos) > 0}

    # --- coordinates ------------------------------------------------------

    def coords(self, x: SparseMat) -> list[Fraction]:
        """Coordinates in the fixed basis; requires trace zero."""
        if smat_trace(x) != 0:
            raise ValueError("element has nonzero trace")
        out = [Fraction(0)] * self.dim
        diag = [Fraction(0)] * self.m
        for (a, b), v in x.items():
            if a == b:
                diag[a] = frac(v)
            else:
                out[self.index_of_position[(a, b)]] = frac(v)
        # H_k-coordinates are the partial sums of the diagonal.
        base = self.dim - (self.m - 1)
        running = Fraction(0)
        for k in range(self.m - 1):
            running += diag[k]
            out[base + k] = running
        return out

    def from_coords(self, vec: Sequence) -> SparseMat:
        if len(vec) != self.dim:
            raise ValueError("coordinate vector has wrong length")
        out: SparseMat = {}
        for idx, v in enumerate(vec):
            if v:
                smat_add_into(out, self.basis_mat(idx), frac(v))
        return out

    def class_mod_p(self, x: SparseMat) -> list[Fraction]:
        """Coordinates of x + p in the quotient basis {X^i}."""
        return [frac(x.get(pos, 0)) for pos in self.neg_positions]

    def lift_from_class(self, coeffs: Sequence) -> SparseMat:
        out: SparseMat = {}
        for i, c in enumerate(coeffs):
            if c:
                out[self.neg_positions[i]] = frac(c)
        return out

    # --- weights (for block-diagonalizing all linear algebra) -------------

    def weight_of_position(self, a: int, b: int) -> Weight:
        w = [0] * self.m
        w[a] += 1
        w[b] -= 1
        return tuple(w)

    def weight_split(self, x: SparseMat) -> dict[Weight, SparseMat]:
        """Split into torus-weight components (diagonal part has weight 0)."""
        out: dict[Weight, SparseMat] = {}
        zero = (0,) * self.m
        for (a, b), v in x.items():
            w = zero if a == b else self.weight_of_position(a, b)
            out.setdefault(w, {})[(a, b)] = v
        return out

    # --- brackets -----------------------------------------------------------

    @staticmethod
    def bracket(x: SparseMat, y: SparseMat) -> SparseMat:
        return smat_bracket(x, y)

    @cached_property
    def neg_pair_coords(self) -> dict[int, list[tuple[int, int, Fraction]]]:
        """s ↦ [(a, b, c)] with a < b and c = coefficient of X^s in the
        class of [X^a, X^b] mod p.  Drives the second sum of ∂."""
        table: dict[int, list[tuple[int, int, Fraction]]] = {}
        for a in range(self.dim_neg):
            xa = self.x_mat(a)
            for b in range(a + 1, self.dim_neg):
                w = smat_bracket(xa, self.x_mat(b))
                for s, pos in enumerate(self.neg_positions):
                    c = w.get(pos)
                    if c:
                        table.setdefault(s, []).append((a, b, frac(c)))
        return table

    @cached_property
    def pos_pair_coords(self) -> dict[tuple[int, int], list[tuple[int, Fraction]]]:
        """(i, j) with i < j ↦ [(t, c)] expanding [Z_i, Z_j] = Σ c·Z_t.
        Drives the second sum of the codifferential."""
        table: dict[tuple[int, int], list[tuple[int, Fraction]]] = {}
        for i in range(self.dim_neg):
            zi = self.z_mat(i)
            for j in range(i + 1, self.dim_neg):
                w = smat_bracket(zi, self.z_mat(j))
                hits = [(t, frac(w[(b, a)])) for t, (a, b) in enumerate(self.neg_positions)
                        if (b, a) in w]
                if hits:
                    table[(i, j)] = hits
        return table

    def __repr__(self) -> str:
        return f"GradedSL(blocks={self.blocks})"


@lru_cache(maxsize=None)
def graded_sl(blocks: tuple[int, ...]) -> GradedSL:
    return GradedSL(blocks)


@lru_cache(maxsize=None)
def jacobi_holds(m: int) -> bool:
    """Exhaustive Jacobi identity over all basis triples of sl(m).

    The bracket does not depend on a grading, so one certificate per m
    covers every composition.  Triples with i < j < k suffice because the
    Jacobi expression is alternating in its three slots.
    """
    alg = graded_sl((1, m - 1))  # any composition; basis spans sl(m)
    basis = [alg.basis_mat(i) for i in range(alg.dim)]
    dim = alg.dim
    pair: dict[tuple[int, int], SparseMat] = {}
    for i in range(dim):
        for j in range(i + 1, dim):
            br = smat_bracket(basis[i], basis[j])
            if br:
                pair[(i, j)] = br

    def pair_bracket(i: int, j: int) -> SparseMat:
        if i < j:
            return pair.get((i, j), {})
        if i > j:
            return smat_scale(pair.get((j, i), {}), -1)
        return {}

    for i in range(dim):
        bi = basis[i]
        for j in range(i + 1, dim):
            bj = basis[j]
            for k in range(j + 1, dim):
                acc = smat_bracket(bi, pair_bracket(j, k))
                smat_add_into(acc, smat_bracket(bj, pair_bracket(k, i)))
                smat_add_into(acc, smat_bracket(basis[k], pair_bracket(i, j)))
                if acc:
                    return False
    return True


def grading_axiom_holds(alg: GradedSL) -> bool:
    """[g_i, g_j] ⊆ g_{i+j}, exhaustively on homogeneous basis pairs."""
    labels = alg.basis_labels
    degs = []
    for lab in labels:
        degs.append(alg.degree_of_position(lab[1], lab[2]) if lab[0] == "E" else 0)
    for i in range(alg.dim):
        bi = alg.basis_mat(i)
        for j in range(alg.dim):
            br = smat_bracket(bi, alg.basis_mat(j))
            if any(d != degs[i] + degs[j] for d in alg.degrees_present(br)):
                return False
    return True


def negative_part_generated_by_deg_minus_one(alg: GradedSL) -> bool:
    """g_- is generated by g_{−1} as a Lie algebra (bracket-generating)."""
    from .ratlin import Subspace

    deg_minus_one = [alg.x_mat(i) for i in range(alg.dim_neg)
                     if alg.degree_of_position(*alg.neg_positions[i]) == -1]
    total_neg = alg.dim_neg
    span = Subspace(alg.dim)
    layer = list(deg_minus_one)
    for x in layer:
        span.insert(alg.coords(x))
    while layer:
        new_layer = []
        for x in layer:
            for y in deg_minus_one:
                br = smat_bracket(y, x)
                if br and span.insert(alg.coords(br)):
                    new_layer.append(br)
        layer = new_layer
    return span.dim == total_neg
