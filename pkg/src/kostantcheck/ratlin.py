"""Exact linear algebra over the rationals.

Everything in this package ultimately reduces to row operations on matrices
of ``fractions.Fraction`` entries, so this module keeps the conventions in
one place:

* matrices are dense lists of row lists; plain ``int`` entries are accepted
  everywhere and coerced on the fly (ints and Fractions mix exactly);
* the canonical witness for a subspace is its reduced row-echelon basis, so
  subspace equality is literal equality of bases;
* there are no tolerances anywhere — a residual either is zero or is not.

``solve`` returns ``None`` for an inconsistent system; callers that need to
signal infeasibility (the normalization solver) propagate that ``None``.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Sequence

Vector = list[Fraction]
Matrix = list[list[Fraction]]


def frac(x: int | str | Fraction) -> Fraction:
    """Coerce an exact value (int, Fraction, or 'p/q' string) to Fraction."""
    return x if isinstance(x, Fraction) else Fraction(x)


def copy_matrix(mat: Sequence[Sequence[Fraction]]) -> Matrix:
    return [[frac(x) for x in row] for row in mat]


def zero_vector(n: int) -> Vector:
    return [Fraction(0)] * n


def identity_matrix(n: int) -> Matrix:
    return [[Fraction(1) if i == j else Fraction(0) for j in range(n)] for i in range(n)]


def mat_vec(mat: Sequence[Sequence[Fraction]], vec: Sequence[Fraction]) -> Vector:
    return [sum((row[j] * vec[j] for j in range(len(vec)) if vec[j]), Fraction(0)) for row in mat]


def mat_mul(a: Sequence[Sequence[Fraction]], b: Sequence[Sequence[Fraction]]) -> Matrix:
    cols = len(b[0]) if b else 0
    out = [[Fraction(0)] * cols for _ in range(len(a))]
    for i, row in enumerate(a):
        for k, x in enumerate(row):
            if x:
                brow = b[k]
                orow = out[i]
                for j in range(cols):
                    if brow[j]:
                        orow[j] += x * brow[j]
    return out


def mat_add(a: Sequence[Sequence[Fraction]], b: Sequence[Sequence[Fraction]]) -> Matrix:
    return [[x + y for x, y in zip(ra, rb)] for ra, rb in zip(a, b)]


def rref(mat: Sequence[Sequence[Fraction]]) -> tuple[Matrix, int]:
    """Reduced row-echelon form.

    Returns ``(R, rank)`` where ``R`` has the same shape as ``mat``.  The
    input is not mutated.
    """
    rows = copy_matrix(mat)
    nrows = len(rows)
    ncols = len(rows[0]) if nrows else 0
    lead = 0
    for col in range(ncols):
        pivot = next((r for r in range(lead, nrows) if rows[r][col]), None)
        if pivot is None:
            continue
        rows[lead], rows[pivot] = rows[pivot], rows[lead]
        inv = Fraction(1) / rows[lead][col]
        if inv != 1:
            rows[lead] = [x * inv for x in rows[lead]]
        prow = rows[lead]
        for r in range(nrows):
            if r != lead and rows[r][col]:
                f = rows[r][col]
                rows[r] = [x - f * y for x, y in zip(rows[r], prow)]
        lead += 1
        if lead == nrows:
            break
    return rows, lead


def rank(mat: Sequence[Sequence[Fraction]]) -> int:
    return rref(mat)[1]


def kernel_basis(mat: Sequence[Sequence[Fraction]]) -> list[Vector]:
    """Canonical basis of the right null space {x : mat·x = 0}.

    One basis vector per free column, with a 1 in that column; this is the
    standard back-substituted basis, hence deterministic.
    """
    if not mat:
        return []
    ncols = len(mat[0])
    reduced, rk = rref(mat)
    pivot_cols: list[int] = []
    for r in range(rk):
        pivot_cols.append(next(c for c in range(ncols) if reduced[r][c]))
    pivot_set = set(pivot_cols)
    basis: list[Vector] = []
    for free in range(ncols):
        if free in pivot_set:
            continue
        vec = zero_vector(ncols)
        vec[free] = Fraction(1)
        for r, pc in enumerate(pivot_cols):
            vec[pc] = -reduced[r][free]
        basis.append(vec)
    return basis


def solve(mat: Sequence[Sequence[Fraction]], rhs: Sequence[Fraction]) -> Vector | None:
    """One exact solution of mat·x = rhs, or ``None`` if the system is
    inconsistent (free variables are set to zero)."""
    if len(mat) != len(rhs):
        raise ValueError("matrix/right-hand-side size mismatch")
    if not mat:
        return []
    ncols = len(mat[0])
    augmented = [list(row) + [frac(b)] for row, b in zip(mat, rhs)]
    reduced, rk = rref(augmented)
    sol = zero_vector(ncols)
    for r in range(rk):
        pc = next(c for c in range(ncols + 1) if reduced[r][c])
        if pc == ncols:
            return None
        sol[pc] = reduced[r][ncols]
    return sol


class Subspace:
    """A linear subspace of Q^ambient, held in reduced row-echelon form.

    The echelon basis is the canonical witness: two Subspaces are equal as
    objects iff they are equal as subspaces.  Construction row-reduces
    incrementally, so feeding redundant spanning vectors is cheap.
    """

    __slots__ = ("ambient", "rows", "pivots")

    def __init__(self, ambient: int, vectors: Iterable[Sequence[Fraction]] = ()) -> None:
        self.ambient = ambient
        self.rows: list[Vector] = []
        self.pivots: list[int] = []
        for v in vectors:
            self.insert(v)

    @property
    def dim(self) -> int:
        return len(self.rows)

    def reduce(self, vec: Sequence[Fraction]) -> Vector:
        """Residual of ``vec`` after eliminating all basis pivots."""
        if len(vec) != self.ambient:
            raise ValueError("vector has wrong ambient dimension")
        out = [frac(x) for x in vec]
        for row, pc in zip(self.rows, self.pivots):
            f = out[pc]
            if f:
                for j in range(pc, self.ambient):
                    if row[j]:
                        out[j] -= f * row[j]
        return out

    def insert(self, vec: Sequence[Fraction]) -> bool:
        """Add ``vec`` to the span; returns True if the dimension grew."""
        res = self.reduce(vec)
        pc = next((j for j, x in enumerate(res) if x), None)
        if pc is None:
            return False
        inv = Fraction(1) / res[pc]
        if inv != 1:
            res = [x * inv for x in res]
        for row in self.rows:
            f = row[pc]
            if f:
                for j in range(pc, self.ambient):
                    if res[j]:
                        row[j] -= f * res[j]
        at = next((k for k, q in enumerate(self.pivots) if q > pc), len(self.pivots))
        self.rows.insert(at, res)
        self.pivots.insert(at, pc)
        return True

    def contains(self, vec: Sequence[Fraction]) -> bool:
        return not any(self.reduce(vec))

    def contains_subspace(self, other: "Subspace") -> bool:
        return all(self.contains(row) for row in other.rows)

    def sum_with(self, other: "Subspace") -> "Subspace":
        if self.ambient != other.ambient:
            raise ValueError("ambient dimension mismatch")
        out = Subspace(self.ambient, self.rows)
        for row in other.rows:
            out.insert(row)
        return out

    def intersect(self, other: "Subspace") -> "Subspace":
        """U ∩ V via the kernel of the column-stacked bases."""
        if self.ambient != other.ambient:
            raise ValueError("ambient dimension mismatch")
        a, b = self.rows, other.rows
        if not a or not b:
            return Subspace(self.ambient)
        stacked = [[a[i][r] for i in range(len(a))] + [b[j][r] for j in range(len(b))]
                   for r in range(self.ambient)]
        vectors = []
        for k in kernel_basis(stacked):
            vec = zero_vector(self.ambient)
            for i, c in enumerate(k[: len(a)]):
                if c:
                    for j in range(self.ambient):
                        if a[i][j]:
                            vec[j] += c * a[i][j]
            vectors.append(vec)
        return Subspace(self.ambient, vectors)

    def basis(self) -> list[Vector]:
        return [list(row) for row in self.rows]

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Subspace):
            return NotImplemented
        return self.ambient == other.ambient and self.rows == other.rows

    def __hash__(self) -> int:
        return hash((self.ambient, tuple(tuple(r) for r in self.rows)))

    def __repr__(self) -> str:
        return f"Subspace(dim={self.dim}, ambient={self.ambient})"
