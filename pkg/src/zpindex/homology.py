"""Reduced Betti numbers over a prime field by exact boundary-matrix ranks.

Boundary matrices are assembled sparsely (each cell has few faces) and the
composition of consecutive boundaries is verified to vanish at
construction.  Ranks come from a left-to-right column reduction over F_ell
that keeps one normalized pivot column per pivot row: each incoming column
is reduced against existing pivots at its largest remaining row until it
either dies (a cycle) or claims a new pivot.  With boundary columns
ordered lexicographically this stays near the input sparsity on the join
and grid complexes this library produces, which is what makes the
million-column cases tractable.  No floating point, no randomization.

The augmentation to the ground field is the implicit dimension-0 boundary,
so all Betti numbers are reduced.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .complexes import CubicalComplex, SimplicialComplex
from .errors import ShapeError

__all__ = [
    "BettiVector",
    "ChainComplexFp",
    "boundary_matrices",
    "betti",
    "betti_numbers",
    "connectivity",
    "connectivity_from_betti",
]


def _is_prime(n: int) -> bool:
    if n < 2:
        return False
    d = 2
    while d * d <= n:
        if n % d == 0:
            return False
        d += 1
    return True


@dataclass(frozen=True)
class BettiVector:
    """Reduced Betti numbers b~_k, k = 0..dim, over F_field."""

    field: int
    reduced: tuple[int, ...]

    def to_json(self) -> dict:
        conn = connectivity_from_betti(self.reduced, len(self.reduced) - 1)
        return {
            "field": self.field,
            "reduced_betti": list(self.reduced),
            "connectivity": conn,
        }


@dataclass
class _Csc:
    n_rows: int
    n_cols: int
    indptr: np.ndarray
    indices: np.ndarray
    data: np.ndarray  # already reduced mod ell, nonzero


class ChainComplexFp:
    """Boundary matrices of one complex over F_ell, composition-checked."""

    def __init__(self, ell: int, n_cells: tuple[int, ...], boundaries: list[_Csc]):
        if not _is_prime(ell):
            raise ShapeError(f"homology field order must be prime, got {ell}")
        self.ell = ell
        self.n_cells = n_cells
        self.boundaries = boundaries  # index d-1 holds the boundary C_d -> C_{d-1}
        self._check_compositions()

    @property
    def top_dim(self) -> int:
        return len(self.n_cells) - 1

    def _check_compositions(self):
        ell = self.ell
        # augmentation after the edge boundary: column sums of the d=1 matrix
        if self.boundaries:
            b1 = self.boundaries[0]
            sums = np.zeros(b1.n_cols, dtype=np.int64)
            np.add.at(sums, np.repeat(np.arange(b1.n_cols), np.diff(b1.indptr)), b1.data)
            if np.any(sums % ell):
                raise ShapeError("augmentation composed with the edge boundary is nonzero")
        for d in range(1, len(self.boundaries)):
            lo, hi = self.boundaries[d - 1], self.boundaries[d]
            if not _composition_vanishes(lo, hi, ell):
                raise ShapeError(
                    f"boundary composition does not vanish between dimensions {d + 1} and {d - 1}"
                )

    def rank(self, d: int) -> int:
        """Rank of the boundary leaving dimension d (d = 0 is the augmentation)."""
        if d == 0:
            return 1 if self.n_cells and self.n_cells[0] > 0 else 0
        if d > self.top_dim:
            return 0
        b = self.boundaries[d - 1]
        return _rank_from_csc(b.n_cols, b.indptr, b.indices, b.data, self.ell)


def _composition_vanishes(lo: _Csc, hi: _Csc, ell: int) -> bool:
    """Does lo @ hi vanish mod ell?  Entries are expanded, grouped, summed."""
    if hi.n_cols == 0 or lo.n_cols == 0:
        return True
    per_col = np.diff(lo.indptr)
    if len(set(per_col.tolist())) > 1:
        # general path: expand via gather of variable-length columns
        lo_rows = [lo.indices[s:e] for s, e in zip(lo.indptr[:-1], lo.indptr[1:])]
        lo_vals = [lo.data[s:e] for s, e in zip(lo.indptr[:-1], lo.indptr[1:])]
        keys = []
        vals = []
        cols = np.repeat(np.arange(hi.n_cols, dtype=np.int64), np.diff(hi.indptr))
        for t in range(len(hi.indices)):
            mid = hi.indices[t]
            keys.append(cols[t] * lo.n_rows + lo_rows[mid].astype(np.int64))
            vals.append(int(hi.data[t]) * lo_vals[mid].astype(np.int64))
        key = np.concatenate(keys)
        val = np.concatenate(vals)
    else:
        c1 = int(per_col[0])
        rows_mat = lo.indices.reshape(lo.n_cols, c1).astype(np.int64)
        vals_mat = lo.data.reshape(lo.n_cols, c1).astype(np.int64)
        cols = np.repeat(np.arange(hi.n_cols, dtype=np.int64), np.diff(hi.indptr))
        mids = hi.indices.astype(np.int64)
        key = (cols[:, None] * lo.n_rows + rows_mat[mids]).reshape(-1)
        val = (hi.data.astype(np.int64)[:, None] * vals_mat[mids]).reshape(-1)
    order = np.argsort(key, kind="stable")
    key = key[order]
    val = val[order]
    starts = np.concatenate([[0], np.nonzero(key[1:] != key[:-1])[0] + 1])
    sums = np.add.reduceat(val, starts)
    return not np.any(sums % ell)


def _rank_from_csc(n_cols, indptr, indices, data, ell) -> int:
    """Column reduction over F_ell; returns the number of pivot columns."""
    pivots: dict[int, list[tuple[int, int]]] = {}
    rank = 0
    ptr = indptr.tolist()
    idx = indices.tolist()
    dat = data.tolist()
    get_piv = pivots.get
    for j in range(n_cols):
        s, e = ptr[j], ptr[j + 1]
        if s == e:
            continue
        work: dict[int, int] = {}
        for t in range(s, e):
            v = dat[t] % ell
            if v:
                work[idx[t]] = v
        while work:
            low = max(work)
            piv = get_piv(low)
            if piv is None:
                f = work.pop(low)
                if f != 1:
                    inv = pow(f, ell - 2, ell)
                    piv_col = [(r, v * inv % ell) for r, v in work.items()]
                else:
                    piv_col = list(work.items())
                pivots[low] = piv_col
                rank += 1
                break
            f = work.pop(low)
            for r, v in piv:
                nv = (work.get(r, 0) - f * v) % ell
                if nv:
                    work[r] = nv
                else:
                    work.pop(r, None)
    return rank


def _simplicial_boundaries(c: SimplicialComplex, ell: int) -> list[_Csc]:
    out = []
    for d in range(1, c.dim + 1):
        arr = c.cells[d]
        below = c.cells[d - 1]
        n = len(arr)
        rows_mat = np.empty((n, d + 1), dtype=np.int64)
        for i in range(d + 1):
            faces = np.delete(arr, i, axis=1)
            from .complexes import _member_indices

            rows_mat[:, i] = _member_indices(below, faces)
        if np.any(rows_mat < 0):
            raise ShapeError("face closure violation while assembling boundaries")
        signs = np.array([(-1) ** i % ell for i in range(d + 1)], dtype=np.int64)
        vals_mat = np.tile(signs, (n, 1))
        out.append(
            _Csc(
                n_rows=len(below),
                n_cols=n,
                indptr=np.arange(n + 1, dtype=np.int64) * (d + 1),
                indices=rows_mat.reshape(-1),
                data=vals_mat.reshape(-1),
            )
        )
    return out


def _cubical_boundaries(c: CubicalComplex, ell: int) -> list[_Csc]:
    from .complexes import _member_indices

    out = []
    for d in range(1, c.dim + 1):
        arr = c.cells[d]
        below = c.cells[d - 1]
        n = len(arr)
        rows_mat = np.empty((n, 2 * d), dtype=np.int64)
        vals_mat = np.empty((n, 2 * d), dtype=np.int64)
        for slot in range(d):
            lower, upper = c._faces_of(arr, slot)
            li = _member_indices(below, lower)
            ui = _member_indices(below, upper)
            if np.any(li < 0) or np.any(ui < 0):
                raise ShapeError("cubical face closure violation while assembling boundaries")
            sgn = (-1) ** slot
            rows_mat[:, 2 * slot] = ui
            vals_mat[:, 2 * slot] = sgn % ell
            rows_mat[:, 2 * slot + 1] = li
            vals_mat[:, 2 * slot + 1] = -sgn % ell
        out.append(
            _Csc(
                n_rows=len(below),
                n_cols=n,
                indptr=np.arange(n + 1, dtype=np.int64) * (2 * d),
                indices=rows_mat.reshape(-1),
                data=vals_mat.reshape(-1),
            )
        )
    return out


def boundary_matrices(c, ell: int) -> ChainComplexFp:
    """Assemble and composition-check all boundary matrices of a complex."""
    if not _is_prime(ell):
        raise ShapeError(f"homology field order must be prime, got {ell}")
    if isinstance(c, SimplicialComplex):
        bnds = _simplicial_boundaries(c, ell)
    elif isinstance(c, CubicalComplex):
        bnds = _cubical_boundaries(c, ell)
    else:
        raise ShapeError(f"cannot assemble boundaries for {type(c).__name__}")
    counts = tuple(c.n_cells(d) for d in range(c.dim + 1))
    return ChainComplexFp(ell, counts, bnds)


def betti(cc: ChainComplexFp) -> BettiVector:
    """b~_k = dim ker(boundary_k) - rank(boundary_{k+1}), with the augmentation
    standing in for the dimension-0 boundary."""
    if not cc.n_cells:
        return BettiVector(cc.ell, ())
    ranks = [cc.rank(d) for d in range(cc.top_dim + 2)]
    reduced = []
    for d in range(cc.top_dim + 1):
        b = cc.n_cells[d] - ranks[d] - ranks[d + 1]
        if b < 0:
            raise ShapeError(f"negative Betti number computed in dimension {d}")
        reduced.append(b)
    euler_cells = sum((-1) ** d * cc.n_cells[d] for d in range(cc.top_dim + 1))
    euler_betti = sum((-1) ** d * reduced[d] for d in range(len(reduced)))
    if euler_betti != euler_cells - 1:
        raise ShapeError("reduced Euler identity violated; rank computation inconsistent")
    return BettiVector(cc.ell, tuple(reduced))


def betti_numbers(c, ell: int | None = None) -> BettiVector:
    """Reduced Betti numbers of a complex; the field defaults to the acting prime."""
    field = ell if ell is not None else c.p
    if getattr(c, "is_empty", False) or c.dim < 0:
        return BettiVector(field, ())
    return betti(boundary_matrices(c, field))


def connectivity_from_betti(reduced: tuple[int, ...], dim: int) -> int:
    """Largest k with b~_i = 0 for all i <= k; -1 when b~_0 != 0 or the
    complex is empty; dim when everything vanishes."""
    if dim < 0:
        return -1
    k = -1
    for i, b in enumerate(reduced):
        if b != 0:
            return i - 1
        k = i
    return dim if k == len(reduced) - 1 else k


def connectivity(c, ell: int | None = None) -> int:
    bv = betti_numbers(c, ell)
    return connectivity_from_betti(bv.reduced, c.dim)
