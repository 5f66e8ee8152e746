"""Chain spaces L(Λ^k g/p, g) with the differential pair (∂, ∂*).

A degree-k cochain is stored as its values on strictly increasing index
tuples over the quotient basis {X^i} of g/p; the alternating multilinear
extension is implicit.  Under the trace-form identification (g/p)* ≅ p_+
the same data is the chain Σ_{T} Z_{t_1}∧…∧Z_{t_k} ⊗ φ(T), and both
operators below are written on that representation:

* ``partial`` (∂) is the Lie-algebra homology differential of g_- with
  coefficients in g,

      (∂φ)(X^0,…,X^k) = Σ_i (−1)^i [X^i, φ(…X̂^i…)]
                        + Σ_{i<j} (−1)^{i+j} φ([X^i,X^j] mod p, …),

  where bracket arguments are taken mod p (the chosen lifts span g_-, so
  nothing is lost);

* ``costar`` (∂*) is the boundary operator of p_+ with coefficients in g,

      ∂*(Z_0∧…∧Z_k ⊗ A) = Σ_i (−1)^{i+1} (…Ẑ_i…) ⊗ [Z_i, A]
                          + Σ_{i<j} (−1)^{i+j} [Z_i,Z_j]∧(…Ẑ_iẐ_j…) ⊗ A,

  normalized so that wedge coefficients on increasing tuples equal cochain
  values.  With this normalization the degree-2 evaluation form reads
  (∂*φ)(X) = Σ_i [Z_i, φ(X, X^i)] − ½ Σ_i φ([Z_i, X̃] mod p, X^i) for any
  lift X̃ (half the scale of the unnormalized evaluation formula; the
  choice cancels in every kernel, image, and decomposition).

Both operators commute with the torus of diagonal matrices, so every
linear-algebra question is solved block-per-weight; chain spaces of a few
thousand dimensions then decompose into blocks of at most a few dozen.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from itertools import combinations
from typing import Callable, Iterable, Sequence

from .gla import (
    GradedSL,
    SparseMat,
    Weight,
    graded_sl,
    smat_add_into,
    smat_bracket,
    smat_scale,
)
from .ratlin import Subspace, frac, kernel_basis, zero_vector


def _sort_with_sign(indices: Sequence[int]) -> tuple[tuple[int, ...], int] | None:
    """Sorted tuple and permutation sign; None if an index repeats."""
    if len(set(indices)) != len(indices):
        return None
    sign = 1
    for i in range(len(indices)):
        for j in range(i + 1, len(indices)):
            if indices[i] > indices[j]:
                sign = -sign
    return tuple(sorted(indices)), sign


class Cochain:
    """Alternating multilinear map (g/p)^k → g on a fixed graded algebra."""

    __slots__ = ("alg", "deg", "data")

    def __init__(self, alg: GradedSL, deg: int,
                 data: dict[tuple[int, ...], SparseMat] | None = None) -> None:
        self.alg = alg
        self.deg = deg
        self.data: dict[tuple[int, ...], SparseMat] = {}
        if data:
            for T, mat in data.items():
                self.add_term(T, mat)

    def add_term(self, indices: Sequence[int], mat: SparseMat, coeff=1) -> None:
        """Accumulate coeff·(value at indices); indices may be unsorted."""
        if len(indices) != self.deg:
            raise ValueError("index tuple has wrong length for this degree")
        if not mat or not coeff:
            return
        if any(t < 0 or t >= self.alg.dim_neg for t in indices):
            raise ValueError("index outside the g/p basis range")
        normalized = _sort_with_sign(tuple(indices))
        if normalized is None:
            return
        T, sign = normalized
        target = self.data.setdefault(T, {})
        smat_add_into(target, mat, sign * coeff)
        if not target:
            del self.data[T]

    def value(self, indices: Sequence[int]) -> SparseMat:
        """φ(X^{i_1},…,X^{i_k}) for an arbitrary (possibly unsorted) tuple."""
        normalized = _sort_with_sign(tuple(indices))
        if normalized is None:
            return {}
        T, sign = normalized
        stored = self.data.get(T)
        if not stored:
            return {}
        return dict(stored) if sign == 1 else smat_scale(stored, -1)

    def add(self, other: "Cochain", coeff=1) -> "Cochain":
        if other.alg.blocks != self.alg.blocks or other.deg != self.deg:
            raise ValueError("cochain context mismatch")
        out = Cochain(self.alg, self.deg, self.data)
        for T, mat in other.data.items():
            out.add_term(T, mat, coeff)
        return out

    def scale(self, coeff) -> "Cochain":
        out = Cochain(self.alg, self.deg)
        if coeff:
            out.data = {T: smat_scale(mat, coeff) for T, mat in self.data.items()}
        return out

    def is_zero(self) -> bool:
        return not self.data

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Cochain):
            return NotImplemented
        return (self.alg.blocks == other.alg.blocks and self.deg == other.deg
                and self.data == other.data)

    def __repr__(self) -> str:
        return f"Cochain(deg={self.deg}, terms={len(self.data)})"


def zero_cochain(alg: GradedSL, deg: int) -> Cochain:
    return Cochain(alg, deg)


def basis_cochain(alg: GradedSL, deg: int, indices: tuple[int, ...], v_idx: int) -> Cochain:
    return Cochain(alg, deg, {indices: alg.basis_mat(v_idx)})


def partial(c: Cochain) -> Cochain:
    """The homology differential ∂: degree k → k+1."""
    alg = c.alg
    out = Cochain(alg, c.deg + 1)
    neg_pairs = alg.neg_pair_coords
    for S, u in c.data.items():
        in_S = set(S)
        # first sum: insert a new argument and bracket it onto the value
        for x in range(alg.dim_neg):
            if x in in_S:
                continue
            pos = sum(1 for s in S if s < x)
            out.add_term(tuple(sorted(S + (x,))),
                         smat_bracket(alg.x_mat(x), u),
                         -1 if pos % 2 else 1)
        # second sum: un-bracket one stored argument into a pair
        for q, s in enumerate(S):
            rest = S[:q] + S[q + 1:]
            rest_set = set(rest)
            for a, b, cf in neg_pairs.get(s, ()):
                if a in rest_set or b in rest_set:
                    continue
                T = tuple(sorted(rest + (a, b)))
                i, j = T.index(a), T.index(b)
                sign = -1 if (i + j + q) % 2 else 1
                out.add_term(T, u, sign * cf)
    return out


def costar(c: Cochain) -> Cochain:
    """The Kostant codifferential ∂*: degree k → k−1 (wedge normalization)."""
    if c.deg < 1:
        raise ValueError("costar needs degree ≥ 1")
    alg = c.alg
    out = Cochain(alg, c.deg - 1)
    pos_pairs = alg.pos_pair_coords
    for T, u in c.data.items():
        for i, t in enumerate(T):
            out.add_term(T[:i] + T[i + 1:],
                         smat_bracket(alg.z_mat(t), u),
                         -1 if i % 2 == 0 else 1)
        for i in range(len(T)):
            for j in range(i + 1, len(T)):
                rest = T[:i] + T[i + 1:j] + T[j + 1:]
                rest_set = set(rest)
                for s, cf in pos_pairs.get((T[i], T[j]), ()):
                    if s in rest_set:
                        continue
                    sign = -1 if (i + j) % 2 else 1
                    out.add_term(tuple(sorted(rest + (s,))), u,
                                 sign * cf * _insertion_sign(rest, s))
    return out


def _insertion_sign(rest: tuple[int, ...], s: int) -> int:
    """Sign of moving s from the front of (s, rest) into sorted position."""
    crossings = sum(1 for r in rest if r < s)
    return -1 if crossings % 2 else 1


def costar_two_form(c: Cochain, lift_extras: Sequence[SparseMat] | None = None) -> Cochain:
    """Degree-2 evaluation form of ∂*, usable as an independent oracle:

        (∂*φ)(X) = Σ_i [Z_i, φ(X, X^i)] − ½ Σ_i φ([Z_i, X̃] mod p, X^i).

    ``lift_extras`` optionally adds an element of p to each lift X̃^x to
    demonstrate independence of the choice of lift.
    """
    if c.deg != 2:
        raise ValueError("evaluation form is for degree 2")
    alg = c.alg
    out = Cochain(alg, 1)
    for x in range(alg.dim_neg):
        lift = dict(alg.x_mat(x))
        if lift_extras is not None:
            extra = lift_extras[x]
            if any(alg.degree_of_position(a, b) < 0 for (a, b) in extra):
                raise ValueError("lift modification must lie in p")
            smat_add_into(lift, extra)
        acc: SparseMat = {}
        for i in range(alg.dim_neg):
            smat_add_into(acc, smat_bracket(alg.z_mat(i), c.value((x, i))))
            cls = alg.class_mod_p(smat_bracket(alg.z_mat(i), lift))
            for a, cf in enumerate(cls):
                if cf:
                    smat_add_into(acc, c.value((a, i)), -Fraction(cf) / 2)
        out.add_term((x,), acc)
    return out


def laplacian(c: Cochain) -> Cochain:
    """Kostant Laplacian □ = ∂∘∂* + ∂*∘∂."""
    return partial(costar(c)).add(costar(partial(c)))


def insertion(phi: Cochain, psi: Cochain) -> Cochain:
    """Cyclic insertion (ι_φψ)(X,Y,Z) = ψ(φ(X,Y) mod p, Z) + cyclic."""
    if phi.deg != 2 or psi.deg != 2:
        raise ValueError("insertion is defined for two degree-2 cochains")
    alg = phi.alg
    out = Cochain(alg, 3)
    candidates: set[tuple[int, ...]] = set()
    for (a, b) in phi.data:
        for w in range(alg.dim_neg):
            if w != a and w != b:
                candidates.add(tuple(sorted((a, b, w))))
    for x, y, z in sorted(candidates):
        acc: SparseMat = {}
        for first, second, third in ((x, y, z), (y, z, x), (z, x, y)):
            cls = alg.class_mod_p(phi.value((first, second)))
            for s, cf in enumerate(cls):
                if cf:
                    smat_add_into(acc, psi.value((s, third)), cf)
        if acc:
            out.add_term((x, y, z), acc)
    return out


def homogeneity_split(c: Cochain) -> dict[int, Cochain]:
    """Split into components of fixed homogeneity.

    An elementary term Z_{t_1}∧…∧Z_{t_k} ⊗ u with u of grading degree d is
    homogeneous of homogeneity d − Σ_i deg(X^{t_i}); a cochain of
    homogeneity l maps g^{i_1}×…×g^{i_k} into g^{i_1+…+i_k+l}.
    """
    alg = c.alg
    out: dict[int, Cochain] = {}
    for T, u in c.data.items():
        arg_deg = sum(alg.degree_of_position(*alg.neg_positions[t]) for t in T)
        for d in alg.degrees_present(u):
            comp = alg.grading_component(u, d)
            h = d - arg_deg
            out.setdefault(h, Cochain(alg, c.deg)).add_term(T, comp)
    return {h: comp for h, comp in out.items() if not comp.is_zero()}


def homogeneity(c: Cochain) -> int | None:
    """Largest l with c(g^{i_1},…) ⊆ g^{i_1+…+l}; None for the zero cochain
    (every homogeneity holds vacuously — reported as the sentinel "all")."""
    split = homogeneity_split(c)
    return min(split) if split else None


# ---------------------------------------------------------------------------
# Chain-space coordinates, weight blocks, and submodules
# ---------------------------------------------------------------------------


def chain_tuples(alg: GradedSL, deg: int) -> list[tuple[int, ...]]:
    return list(combinations(range(alg.dim_neg), deg))


def chain_total_dim(alg: GradedSL, deg: int) -> int:
    count = 1
    for i in range(deg):
        count = count * (alg.dim_neg - i) // (i + 1)
    return count * alg.dim


class BlockStructure:
    """Weight-block layout of the degree-k chain space.

    Coordinates are labeled (T, v) with T an increasing tuple and v an index
    into the fixed sl(m) basis; the weight of the label is the weight of
    Z_{t_1}∧…∧Z_{t_k} ⊗ basis_v.  Both ∂ and ∂* preserve this grading.
    """

    def __init__(self, alg: GradedSL, deg: int) -> None:
        self.alg = alg
        self.deg = deg
        labels: dict[Weight, list[tuple[tuple[int, ...], int]]] = {}
        for T in chain_tuples(alg, deg):
            base = [0] * alg.m
            for t in T:
                a, b = alg.neg_positions[t]
                base[b] += 1          # weight of Z_t = e_b − e_a
                base[a] -= 1
            for v, lab in enumerate(alg.basis_labels):
                w = list(base)
                if lab[0] == "E":
                    w[lab[1]] += 1
                    w[lab[2]] -= 1
                labels.setdefault(tuple(w), []).append((T, v))
        self.labels = labels
        self.pos_of: dict[tuple[tuple[int, ...], int], tuple[Weight, int]] = {}
        for w, labs in labels.items():
            for i, tv in enumerate(labs):
                self.pos_of[tv] = (w, i)

    def block_dim(self, w: Weight) -> int:
        return len(self.labels.get(w, ()))


@lru_cache(maxsize=None)
def block_structure(blocks: tuple[int, ...], deg: int) -> BlockStructure:
    return BlockStructure(graded_sl(blocks), deg)


def blocked_coords(c: Cochain) -> dict[Weight, list[Fraction]]:
    """Coordinates of a cochain, one dense vector per weight block."""
    structure = block_structure(c.alg.blocks, c.deg)
    out: dict[Weight, list[Fraction]] = {}
    for T, u in c.data.items():
        for v, cf in enumerate(c.alg.coords(u)):
            if cf:
                w, i = structure.pos_of[(T, v)]
                out.setdefault(w, zero_vector(structure.block_dim(w)))[i] = cf
    return out


def cochain_from_block(alg: GradedSL, deg: int, w: Weight, vec: Sequence) -> Cochain:
    structure = block_structure(alg.blocks, deg)
    out = Cochain(alg, deg)
    for cf, (T, v) in zip(vec, structure.labels[w]):
        if cf:
            out.add_term(T, alg.basis_mat(v), frac(cf))
    return out


class ChainModule:
    """A submodule of a chain space, stored as one Subspace per weight block.

    The per-block reduced echelon bases make equality, membership, sums and
    intersections exact and cheap even when the ambient chain space has
    thousands of coordinates.
    """

    def __init__(self, name: str, alg: GradedSL, deg: int,
                 spaces: dict[Weight, Subspace] | None = None) -> None:
        self.name = name
        self.alg = alg
        self.deg = deg
        self.spaces: dict[Weight, Subspace] = {
            w: s for w, s in (spaces or {}).items() if s.dim > 0}

    @classmethod
    def from_cochains(cls, name: str, alg: GradedSL, deg: int,
                      cochains: Iterable[Cochain]) -> "ChainModule":
        structure = block_structure(alg.blocks, deg)
        spaces: dict[Weight, Subspace] = {}
        for c in cochains:
            for w, vec in blocked_coords(c).items():
                spaces.setdefault(w, Subspace(structure.block_dim(w))).insert(vec)
        return cls(name, alg, deg, spaces)

    @classmethod
    def from_labels(cls, name: str, alg: GradedSL, deg: int,
                    labels: Iterable[tuple[tuple[int, ...], int]]) -> "ChainModule":
        """Coordinate submodule spanned by chain-basis labels (T, v)."""
        structure = block_structure(alg.blocks, deg)
        spaces: dict[Weight, Subspace] = {}
        for tv in labels:
            w, i = structure.pos_of[tv]
            vec = zero_vector(structure.block_dim(w))
            vec[i] = Fraction(1)
            spaces.setdefault(w, Subspace(structure.block_dim(w))).insert(vec)
        return cls(name, alg, deg, spaces)

    @property
    def dim(self) -> int:
        return sum(s.dim for s in self.spaces.values())

    def contains(self, c: Cochain) -> bool:
        if c.alg.blocks != self.alg.blocks or c.deg != self.deg:
            return False
        for w, vec in blocked_coords(c).items():
            space = self.spaces.get(w)
            if space is None or not space.contains(vec):
                return False
        return True

    def is_contained_in(self, other: "ChainModule") -> bool:
        for w, space in self.spaces.items():
            other_space = other.spaces.get(w)
            if other_space is None:
                if space.dim:
                    return False
            elif not all(other_space.contains(row) for row in space.rows):
                return False
        return True

    def sum_with(self, other: "ChainModule", name: str | None = None) -> "ChainModule":
        spaces = dict(self.spaces)
        for w, space in other.spaces.items():
            spaces[w] = spaces[w].sum_with(space) if w in spaces else space
        return ChainModule(name or f"{self.name}+{other.name}", self.alg, self.deg, spaces)

    def intersect(self, other: "ChainModule", name: str | None = None) -> "ChainModule":
        spaces = {}
        for w, space in self.spaces.items():
            if w in other.spaces:
                spaces[w] = space.intersect(other.spaces[w])
        return ChainModule(name or f"{self.name}∩{other.name}", self.alg, self.deg, spaces)

    def basis_cochains(self) -> list[Cochain]:
        out = []
        for w in sorted(self.spaces):
            for row in self.spaces[w].rows:
                out.append(cochain_from_block(self.alg, self.deg, w, row))
        return out

    def same_space(self, other: "ChainModule") -> bool:
        return (self.alg.blocks == other.alg.blocks and self.deg == other.deg
                and self.spaces == other.spaces)

    def __repr__(self) -> str:
        return f"ChainModule({self.name!r}, deg={self.deg}, dim={self.dim})"


def operator_block(structure_in: BlockStructure, structure_out: BlockStructure,
                   op: Callable[[Cochain], Cochain], w: Weight) -> list[list[Fraction]]:
    """Matrix of a weight-preserving operator on one weight block.

    Rows index the target block, columns the source block; an empty source
    or target block yields a matrix with zero columns or rows.
    """
    alg = structure_in.alg
    nrows = structure_out.block_dim(w)
    cols = structure_in.labels.get(w, [])
    mat = [[Fraction(0)] * len(cols) for _ in range(nrows)]
    for col, (T, v) in enumerate(cols):
        image = op(Cochain(alg, structure_in.deg, {T: alg.basis_mat(v)}))
        for wv, vec in blocked_coords(image).items():
            if wv != w:
                raise AssertionError("operator did not preserve the weight")
            for i, cf in enumerate(vec):
                if cf:
                    mat[i][col] = cf
    return mat


def _kernel_space(mat: list[list[Fraction]], ncols: int) -> Subspace:
    if not mat or not ncols:
        basis = [[Fraction(1) if i == j else Fraction(0) for j in range(ncols)]
                 for i in range(ncols)]
        return Subspace(ncols, basis)
    return Subspace(ncols, kernel_basis(mat))


def _column_space(mat: list[list[Fraction]]) -> Subspace:
    if not mat:
        return Subspace(0)
    return Subspace(len(mat), [list(col) for col in zip(*mat)])


@dataclass(frozen=True)
class HodgeData:
    """The Hodge decomposition of one chain degree."""

    im_costar: ChainModule
    ker_box: ChainModule
    im_partial: ChainModule
    ker_costar: ChainModule
    ker_partial: ChainModule
    total_dim: int


@lru_cache(maxsize=None)
def hodge(blocks: tuple[int, ...], deg: int = 2) -> HodgeData:
    """im∂* ⊕ ker□ ⊕ im∂ at the given degree, one weight block at a time."""
    alg = graded_sl(blocks)
    below = block_structure(blocks, deg - 1)
    here = block_structure(blocks, deg)
    above = block_structure(blocks, deg + 1)

    im_costar: dict[Weight, Subspace] = {}
    ker_box: dict[Weight, Subspace] = {}
    im_partial: dict[Weight, Subspace] = {}
    ker_costar: dict[Weight, Subspace] = {}
    ker_partial: dict[Weight, Subspace] = {}

    for w, labs in here.labels.items():
        dim_here = len(labs)
        d_up = operator_block(here, above, partial, w)
        s_down = operator_block(here, below, costar, w)
        d_in = operator_block(below, here, partial, w)
        s_in = operator_block(above, here, costar, w)

        im_costar[w] = _column_space(s_in) if above.block_dim(w) else Subspace(dim_here)
        im_partial[w] = _column_space(d_in) if below.block_dim(w) else Subspace(dim_here)
        ker_costar[w] = _kernel_space(s_down, dim_here)
        ker_partial[w] = _kernel_space(d_up, dim_here)

        box = [[Fraction(0)] * dim_here for _ in range(dim_here)]
        for src in range(dim_here):
            mid_down = [row[src] for row in s_down]
            back_up = _apply(d_in, mid_down)
            mid_up = [row[src] for row in d_up]
            back_down = _apply(s_in, mid_up)
            for i in range(dim_here):
                val = back_up[i] + back_down[i]
                if val:
                    box[i][src] = val
        ker_box[w] = _kernel_space(box, dim_here)

    total = chain_total_dim(alg, deg)
    return HodgeData(
        im_costar=ChainModule("im costar", alg, deg, im_costar),
        ker_box=ChainModule("ker box", alg, deg, ker_box),
        im_partial=ChainModule("im partial", alg, deg, im_partial),
        ker_costar=ChainModule("ker costar", alg, deg, ker_costar),
        ker_partial=ChainModule("ker partial", alg, deg, ker_partial),
        total_dim=total,
    )


def _apply(mat: list[list[Fraction]], vec: list[Fraction]) -> list[Fraction]:
    if not mat:
        return []
    return [sum((row[j] * vec[j] for j in range(len(vec)) if vec[j]), Fraction(0))
            for row in mat]
