"""Finite complexes with a prime-order action by cell permutations.

Simplicial complexes store their k-cells as lex-sorted numpy integer
arrays of vertex ids; cubical complexes store (base corner, extent mask)
rows on a periodic grid.  Both validate face closure, that the action is a
permutation of exact order p mapping cells to cells, and both can report a
setwise-invariant cell as a freeness counterexample.

Joins are implemented for simplicial complexes: vertex sets are disjoint
unions and cells are unions of one cell (or nothing) from each side.  A
join of discrete complexes remembers its factor sizes, which is the one
structural situation where high connectivity is a theorem rather than
homological evidence.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Any, Callable, Iterable, Sequence

import numpy as np

from .errors import ShapeError

__all__ = [
    "SimplicialComplex",
    "CubicalComplex",
    "join_complex",
    "standard_join_model",
    "cycle_complex",
    "verify_free_action",
    "EnReport",
    "is_EnZp",
    "JoinPoint",
    "apply_join_of_maps",
]


def _row_view(arr: np.ndarray) -> np.ndarray:
    """1-D structured view so rows compare lexicographically."""
    a = np.ascontiguousarray(arr)
    if a.ndim != 2:
        raise ShapeError("expected a 2-D cell array")
    return a.view([("", a.dtype)] * a.shape[1]).reshape(-1)

def _lexsort_rows(arr: np.ndarray) -> np.ndarray:
    view = _row_view(arr)
    return arr[np.argsort(view, kind="stable")]


def _rows_unique(arr: np.ndarray) -> bool:
    if len(arr) < 2:
        return True
    v = _row_view(arr)
    return bool(np.all(v[1:] != v[:-1]))


def _member_indices(haystack_sorted: np.ndarray, needles: np.ndarray) -> np.ndarray:
    """Index of each needle row in the lex-sorted haystack; -1 when absent."""
    hv = _row_view(haystack_sorted)
    nv = _row_view(needles)
    pos = np.searchsorted(hv, nv)
    pos_clipped = np.minimum(pos, len(hv) - 1) if len(hv) else np.zeros_like(pos)
    found = np.zeros(len(nv), dtype=bool) if not len(hv) else hv[pos_clipped] == nv
    out = np.where(found, pos_clipped, -1)
    return out.astype(np.int64)


class SimplicialComplex:
    """A finite simplicial complex plus a vertex permutation of order p."""

    def __init__(
        self,
        n_vertices: int,
        cells: dict[int, np.ndarray],
        action: Sequence[int] | np.ndarray | None,
        p: int,
        labels: list[str] | None = None,
        join_factors: tuple[int, ...] | None = None,
    ):
        self.p = int(p)
        if self.p < 2:
            raise ShapeError(f"the acting group order must be a prime >= 2, got {p}")
        self.n_vertices = int(n_vertices)
        self.labels = list(labels) if labels is not None else None
        if self.labels is not None and len(self.labels) != self.n_vertices:
            raise ShapeError("label count does not match vertex count")
        self.join_factors = join_factors

        norm: dict[int, np.ndarray] = {}
        if self.n_vertices:
            norm[0] = np.arange(self.n_vertices, dtype=np.int32).reshape(-1, 1)
        for d, arr in cells.items():
            if d == 0:
                continue
            a = np.asarray(arr, dtype=np.int32).reshape(-1, d + 1)
            if len(a) == 0:
                continue
            if a.min() < 0 or a.max() >= self.n_vertices:
                raise ShapeError(f"cell of dimension {d} uses an unknown vertex id")
            a = np.sort(a, axis=1)
            if np.any(a[:, 1:] == a[:, :-1]):
                raise ShapeError(f"degenerate cell with a repeated vertex in dimension {d}")
            a = _lexsort_rows(a)
            if not _rows_unique(a):
                raise ShapeError(f"duplicate cells in dimension {d}")
            norm[d] = a
        self.cells = norm

        if action is None:
            # a plain complex: joins and homology work, freeness queries do not
            self.action = None
        else:
            self.action = np.asarray(action, dtype=np.int64).reshape(-1)
            if len(self.action) != self.n_vertices:
                raise ShapeError("action length does not match vertex count")
            self._validate_action()
        self._validate_closure()
        for a in self.cells.values():
            a.setflags(write=False)
        if self.action is not None:
            self.action.setflags(write=False)
        self._free_witness_cache: tuple[bool, tuple | None] | None = None

    # -- validation -------------------------------------------------------------

    def _validate_action(self):
        n = self.n_vertices
        if n == 0:
            return
        if sorted(self.action.tolist()) != list(range(n)):
            raise ShapeError("action is not a permutation of the vertices")
        cur = self.action.copy()
        for _ in range(self.p - 1):
            cur = self.action[cur]
        if not np.array_equal(cur, np.arange(n)):
            raise ShapeError(f"action does not satisfy perm^{self.p} = id")
        if np.array_equal(self.action, np.arange(n)):
            raise ShapeError(
                f"action must have exact order {self.p} on a nonempty complex, got the identity"
            )
        # permutation must map cells to cells
        for d, arr in self.cells.items():
            if d == 0:
                continue
            img = np.sort(self.action[arr], axis=1).astype(np.int32)
            if np.any(_member_indices(arr, img) < 0):
                raise ShapeError(f"action does not map dimension-{d} cells to cells")

    def _validate_closure(self):
        for d in sorted(self.cells):
            if d == 0:
                continue
            arr = self.cells[d]
            below = self.cells.get(d - 1)
            if below is None:
                raise ShapeError(f"dimension {d} cells present but no {d - 1} cells")
            for i in range(d + 1):
                faces = np.delete(arr, i, axis=1)
                if np.any(_member_indices(below, faces) < 0):
                    raise ShapeError(f"face closure fails between dimensions {d} and {d - 1}")

    # -- basic queries ------------------------------------------------------------

    @property
    def dim(self) -> int:
        return max(self.cells) if self.cells else -1

    @property
    def is_empty(self) -> bool:
        return self.n_vertices == 0

    def n_cells(self, d: int) -> int:
        return len(self.cells.get(d, ()))

    def cell_counts(self) -> dict[int, int]:
        return {d: len(a) for d, a in sorted(self.cells.items())}

    def total_cells(self) -> int:
        return sum(len(a) for a in self.cells.values())

    def free_witness(self) -> tuple[int, tuple[int, ...]] | None:
        """A setwise-invariant cell (dimension, vertex tuple), or None if free."""
        if self.action is None:
            raise ShapeError("freeness is undefined: this complex carries no action")
        if self._free_witness_cache is None:
            witness = None
            for d, arr in sorted(self.cells.items()):
                img = np.sort(self.action[arr], axis=1).astype(np.int32)
                hits = np.nonzero(np.all(img == arr, axis=1))[0]
                if len(hits):
                    witness = (d, tuple(int(v) for v in arr[hits[0]]))
                    break
            self._free_witness_cache = (witness is None, witness)
        return self._free_witness_cache[1]

    @property
    def is_free(self) -> bool:
        self.free_witness()
        return self._free_witness_cache[0]

    def carrier_cell(self, vertex_ids: Iterable[int]) -> tuple[int, ...] | None:
        """The cell spanned by the given vertices, if it is in the complex."""
        tup = np.array(sorted(set(int(v) for v in vertex_ids)), dtype=np.int32)
        arr = self.cells.get(len(tup) - 1)
        if arr is None:
            return None
        idx = _member_indices(arr, tup.reshape(1, -1))[0]
        return tuple(int(v) for v in tup) if idx >= 0 else None

    def vertex_label(self, v: int) -> str:
        return self.labels[v] if self.labels is not None else str(v)

    # -- constructors ------------------------------------------------------------

    @classmethod
    def empty(cls, p: int) -> SimplicialComplex:
        return cls(0, {}, [], p)

    @classmethod
    def discrete(
        cls,
        n_points: int,
        action: Sequence[int] | None,
        p: int,
        labels: list[str] | None = None,
    ) -> SimplicialComplex:
        """A 0-dimensional complex; remembers itself as a 1-factor join."""
        jf = (n_points,) if n_points else None
        return cls(n_points, {}, action, p, labels=labels, join_factors=jf)

    @classmethod
    def from_maximal(
        cls,
        n_vertices: int,
        maximal_cells: Iterable[Sequence[int]],
        action: Sequence[int],
        p: int,
        labels: list[str] | None = None,
    ) -> SimplicialComplex:
        """Close the given cells under taking faces."""
        by_dim: dict[int, set[tuple[int, ...]]] = {}
        stack = [tuple(sorted(set(int(v) for v in c))) for c in maximal_cells]
        seen = set(stack)
        while stack:
            c = stack.pop()
            by_dim.setdefault(len(c) - 1, set()).add(c)
            if len(c) > 1:
                for i in range(len(c)):
                    f = c[:i] + c[i + 1 :]
                    if f not in seen:
                        seen.add(f)
                        stack.append(f)
        cells = {
            d: np.array(sorted(cs), dtype=np.int32)
            for d, cs in by_dim.items()
            if d > 0
        }
        return cls(n_vertices, cells, action, p, labels=labels)

    # -- exchange format -----------------------------------------------------------

    def maximal_cells(self) -> list[list[int]]:
        out: list[list[int]] = []
        marked: set[tuple[int, ...]] = set()
        for d in sorted(self.cells, reverse=True):
            for row in self.cells[d]:
                c = tuple(int(v) for v in row)
                if c in marked:
                    continue
                out.append(list(c))
                stack = [c]
                while stack:
                    t = stack.pop()
                    if len(t) > 1:
                        for i in range(len(t)):
                            f = t[:i] + t[i + 1 :]
                            if f not in marked:
                                marked.add(f)
                                stack.append(f)
                marked.add(c)
        return sorted(out, key=lambda c: (len(c), c))

    def to_json(self) -> dict:
        return {
            "kind": "simplicial",
            "p": self.p,
            "vertices": [self.vertex_label(v) for v in range(self.n_vertices)],
            "action": None if self.action is None else [int(v) for v in self.action],
            "maximal_cells": self.maximal_cells(),
        }

    @classmethod
    def from_json(cls, doc: dict) -> SimplicialComplex:
        if doc.get("kind", "simplicial") != "simplicial":
            raise ShapeError("not a simplicial complex document")
        labels = [str(x) for x in doc["vertices"]]
        return cls.from_maximal(
            len(labels), doc["maximal_cells"], doc["action"], int(doc["p"]), labels=labels
        )


def join_complex(a: SimplicialComplex, b: SimplicialComplex) -> SimplicialComplex:
    """The join: disjoint vertices, cells are unions of one side's cell or nothing.

    The empty complex is the join identity.  dim(A*B) = dim A + dim B + 1
    and the nonempty-cell counts satisfy (cA+1)(cB+1)-1.
    """
    if a.p != b.p:
        raise ShapeError(f"cannot join complexes over different primes {a.p} and {b.p}")
    if a.is_empty:
        return b
    if b.is_empty:
        return a
    na = a.n_vertices
    cells: dict[int, list[np.ndarray]] = {}
    for d, arr in a.cells.items():
        cells.setdefault(d, []).append(arr)
    for d, arr in b.cells.items():
        cells.setdefault(d, []).append(arr + na)
    for da, arra in a.cells.items():
        for db, arrb in b.cells.items():
            d = da + db + 1
            left = np.repeat(arra, len(arrb), axis=0)
            right = np.tile(arrb + na, (len(arra), 1))
            cells.setdefault(d, []).append(np.hstack([left, right]))
    merged = {
        d: np.vstack(parts) if len(parts) > 1 else parts[0] for d, parts in cells.items()
    }
    if a.action is None or b.action is None:
        action = None
    else:
        action = np.concatenate([a.action, b.action + na])
    labels = None
    if a.labels is not None and b.labels is not None:
        labels = a.labels + b.labels
    jf = None
    if a.join_factors is not None and b.join_factors is not None:
        jf = a.join_factors + b.join_factors
    return SimplicialComplex(
        na + b.n_vertices, merged, action, a.p, labels=labels, join_factors=jf
    )


def standard_join_model(p: int, copies: int) -> SimplicialComplex:
    """The (copies)-fold join of the p-point free orbit; the reference model
    of maximal-connectivity free complexes in each dimension."""
    if copies < 1:
        raise ShapeError(f"need at least one copy, got {copies}")
    cyc = [(i + 1) % p for i in range(p)]
    one = SimplicialComplex.discrete(p, cyc, p, labels=[f"g{i}" for i in range(p)])
    out = one
    for _ in range(copies - 1):
        out = join_complex(out, one)
    if out.labels is not None:
        out.labels = [f"{i // p}:{i % p}" for i in range(out.n_vertices)]
    return out


def cycle_complex(q: int, action: Sequence[int], p: int) -> SimplicialComplex:
    """The q-cycle graph (vertices 0..q-1, edges {j, j+1 mod q}) with an action."""
    if q < 3:
        raise ShapeError(f"cycle complex needs q >= 3, got {q}")
    edges = np.array(
        sorted(tuple(sorted((j, (j + 1) % q))) for j in range(q)), dtype=np.int32
    )
    return SimplicialComplex(q, {1: edges}, action, p)


def verify_free_action(c) -> tuple[bool, tuple | None]:
    """(True, None) when no cell is setwise invariant, else (False, witness)."""
    w = c.free_witness()
    return (w is None, w)


# -- cubical complexes -----------------------------------------------------------


def _popcount(x: np.ndarray) -> np.ndarray:
    out = np.zeros_like(x)
    v = x.copy()
    while np.any(v):
        out += v & 1
        v >>= 1
    return out


class CubicalComplex:
    """Cells (base corner, extent mask) on a periodic grid, q points per axis.

    A mask bit set at axis t extends the cell one grid step along t; a
    k-cell has k bits set.  The action is an axis permutation: image base
    coordinate t is drawn from source axis axis_map[t].
    """

    def __init__(
        self,
        q: int,
        n_axes: int,
        cells: dict[int, np.ndarray],
        axis_map: Sequence[int],
        p: int,
    ):
        self.q = int(q)
        self.n_axes = int(n_axes)
        self.p = int(p)
        if self.p < 2:
            raise ShapeError(f"the acting group order must be a prime >= 2, got {p}")
        if self.q < 3:
            raise ShapeError("grid needs q >= 3 so cell corners stay distinct")
        self.axis_map = np.asarray(axis_map, dtype=np.int64).reshape(-1)
        if len(self.axis_map) != self.n_axes or sorted(self.axis_map.tolist()) != list(
            range(self.n_axes)
        ):
            raise ShapeError("axis_map is not a permutation of the axes")

        D = self.n_axes
        norm: dict[int, np.ndarray] = {}
        for d, arr in cells.items():
            a = np.asarray(arr, dtype=np.int32).reshape(-1, D + 1)
            if len(a) == 0:
                continue
            base, mask = a[:, :D], a[:, D]
            if base.min() < 0 or base.max() >= self.q:
                raise ShapeError("cell base corner outside the grid")
            if np.any(_popcount(mask.astype(np.int64)) != d):
                raise ShapeError(f"mask popcount does not match dimension {d}")
            a = _lexsort_rows(a)
            if not _rows_unique(a):
                raise ShapeError(f"duplicate cubical cells in dimension {d}")
            norm[d] = a
        self.cells = norm
        self._validate_action()
        self._validate_closure()
        for a in self.cells.values():
            a.setflags(write=False)
        self._free_witness_cache: tuple[bool, tuple | None] | None = None

    # -- action ---------------------------------------------------------------

    def _apply_action_rows(self, arr: np.ndarray) -> np.ndarray:
        D = self.n_axes
        base, mask = arr[:, :D], arr[:, D].astype(np.int64)
        new_base = base[:, self.axis_map]
        new_mask = np.zeros_like(mask)
        for t in range(D):
            new_mask |= ((mask >> int(self.axis_map[t])) & 1) << t
        out = np.empty_like(arr)
        out[:, :D] = new_base
        out[:, D] = new_mask.astype(np.int32)
        return out

    def _validate_action(self):
        cur = self.axis_map.copy()
        for _ in range(self.p - 1):
            cur = self.axis_map[cur]
        if not np.array_equal(cur, np.arange(self.n_axes)):
            raise ShapeError(f"axis permutation does not satisfy perm^{self.p} = id")
        if self.cells and np.array_equal(self.axis_map, np.arange(self.n_axes)):
            raise ShapeError(
                f"axis permutation must have exact order {self.p} on a nonempty complex"
            )
        for d, arr in self.cells.items():
            img = self._apply_action_rows(arr)
            if np.any(_member_indices(arr, img) < 0):
                raise ShapeError(f"action does not map dimension-{d} cells to cells")

    def _faces_of(self, arr: np.ndarray, slot: int) -> tuple[np.ndarray, np.ndarray]:
        """(lower, upper) faces dropping the slot-th set mask bit of each row."""
        D = self.n_axes
        mask = arr[:, D].astype(np.int64)
        bits = ((mask[:, None] >> np.arange(D)) & 1).astype(bool)
        order = np.cumsum(bits, axis=1)  # 1-based rank of each set bit
        axis = np.argmax(bits & (order == slot + 1), axis=1)
        lower = arr.copy()
        lower[:, D] = (mask & ~(1 << axis)).astype(np.int32)
        upper = lower.copy()
        rows = np.arange(len(arr))
        upper[rows, axis] = (upper[rows, axis] + 1) % self.q
        return lower, upper

    def _validate_closure(self):
        for d in sorted(self.cells):
            if d == 0:
                continue
            arr = self.cells[d]
            below = self.cells.get(d - 1)
            if below is None:
                raise ShapeError(f"dimension {d} cells present but no {d - 1} cells")
            for slot in range(d):
                lower, upper = self._faces_of(arr, slot)
                if np.any(_member_indices(below, lower) < 0) or np.any(
                    _member_indices(below, upper) < 0
                ):
                    raise ShapeError(
                        f"cubical face closure fails between dimensions {d} and {d - 1}"
                    )

    # -- queries ---------------------------------------------------------------

    @property
    def dim(self) -> int:
        return max(self.cells) if self.cells else -1

    @property
    def is_empty(self) -> bool:
        return not self.cells

    @property
    def n_vertices(self) -> int:
        return self.n_cells(0)

    @property
    def join_factors(self):
        return None  # cubical complexes are never structural joins

    def n_cells(self, d: int) -> int:
        return len(self.cells.get(d, ()))

    def cell_counts(self) -> dict[int, int]:
        return {d: len(a) for d, a in sorted(self.cells.items())}

    def total_cells(self) -> int:
        return sum(len(a) for a in self.cells.values())

    def vertex_bases(self) -> np.ndarray:
        return self.cells[0][:, : self.n_axes] if 0 in self.cells else np.zeros((0, self.n_axes), np.int32)

    def vertex_index(self, coords: Sequence[int]) -> int:
        row = np.array(
            [list(coords) + [0]], dtype=np.int32
        )
        idx = _member_indices(self.cells[0], row)[0]
        if idx < 0:
            raise ShapeError(f"grid point {tuple(coords)} is not a vertex of the complex")
        return int(idx)

    @property
    def action(self) -> np.ndarray:
        """The vertex permutation induced by the axis permutation."""
        verts = self.cells[0]
        img = self._apply_action_rows(verts)
        return _member_indices(verts, img)

    def vertex_label(self, v: int) -> str:
        return ",".join(str(int(x)) for x in self.cells[0][v, : self.n_axes])

    def free_witness(self) -> tuple[int, tuple[int, ...]] | None:
        if self._free_witness_cache is None:
            witness = None
            for d, arr in sorted(self.cells.items()):
                img = self._apply_action_rows(arr)
                hits = np.nonzero(np.all(img == arr, axis=1))[0]
                if len(hits):
                    witness = (d, tuple(int(v) for v in arr[hits[0]]))
                    break
            self._free_witness_cache = (witness is None, witness)
        return self._free_witness_cache[1]

    @property
    def is_free(self) -> bool:
        self.free_witness()
        return self._free_witness_cache[0]

    def carrier_cell(self, vertex_ids: Iterable[int]) -> tuple[int, ...] | None:
        """Smallest grid cell whose corner set contains the given vertices."""
        ids = sorted(set(int(v) for v in vertex_ids))
        if not ids:
            return None
        D = self.n_axes
        coords = self.cells[0][ids, :D]
        base = np.zeros(D, dtype=np.int32)
        mask = 0
        for t in range(D):
            vals = sorted(set(int(x) for x in coords[:, t]))
            if len(vals) == 1:
                base[t] = vals[0]
            elif len(vals) == 2:
                a, b = vals
                if (a + 1) % self.q == b:
                    base[t] = a
                elif (b + 1) % self.q == a:
                    base[t] = b
                else:
                    return None
                mask |= 1 << t
            else:
                return None
        d = bin(mask).count("1")
        arr = self.cells.get(d)
        if arr is None:
            return None
        row = np.concatenate([base, [mask]]).astype(np.int32).reshape(1, -1)
        idx = _member_indices(arr, row)[0]
        return tuple(int(v) for v in row[0]) if idx >= 0 else None


# -- model recognition ------------------------------------------------------------


@dataclass(frozen=True)
class EnReport:
    """Evidence that a complex is a free, n-dimensional, (n-1)-connected model.

    ``certified`` is True only in the structural case (a join of n+1
    nonempty discrete free factors), where the connectivity is a theorem.
    Otherwise the homological connectivity over F_ell is evidence, with the
    explicit caveat that vanishing reduced homology does not decide
    higher homotopy connectivity.
    """

    n: int
    free: bool
    dimension: int
    connectivity: int
    certified: bool
    is_model: bool
    betti: tuple[int, ...]
    field: int
    witness: tuple | None


def is_EnZp(c, n: int, ell: int | None = None, betti=None) -> EnReport:
    """Check freeness, dimension n, and vanishing reduced homology below n."""
    from .homology import betti_numbers, connectivity_from_betti

    free, witness = verify_free_action(c)
    field = ell if ell is not None else c.p
    if betti is None:
        betti = betti_numbers(c, field)
    bt = tuple(betti.reduced)
    conn = connectivity_from_betti(bt, c.dim)
    certified = (
        free
        and c.join_factors is not None
        and len(c.join_factors) == n + 1
        and all(s >= 1 for s in c.join_factors)
        and c.dim == n
    )
    is_model = free and c.dim == n and conn >= n - 1
    return EnReport(
        n=n,
        free=free,
        dimension=c.dim,
        connectivity=conn,
        certified=certified,
        is_model=is_model,
        betti=bt,
        field=field,
        witness=witness,
    )


# -- join points and joins of maps ---------------------------------------------------


@dataclass(frozen=True)
class JoinPoint:
    """A formal convex point of a join: weights sum to 1, coordinates with
    weight zero are ignored by equality (the collapse rule)."""

    weights: tuple[Fraction, ...]
    points: tuple[Any, ...]

    def __post_init__(self):
        if len(self.weights) != len(self.points):
            raise ShapeError("weights and points have different arities")
        if not self.weights:
            raise ShapeError("join point needs at least one factor")
        w = tuple(Fraction(x) for x in self.weights)
        object.__setattr__(self, "weights", w)
        if any(x < 0 for x in w) or sum(w) != 1:
            raise ShapeError("weights must be nonnegative rationals summing to 1")
        for t, pt in zip(w, self.points):
            if t > 0 and pt is None:
                raise ShapeError("a factor with positive weight needs a point")

    def support(self) -> tuple[tuple[int, Fraction, Any], ...]:
        return tuple(
            (i, t, pt) for i, (t, pt) in enumerate(zip(self.weights, self.points)) if t > 0
        )

    def __eq__(self, other) -> bool:
        if not isinstance(other, JoinPoint):
            return NotImplemented
        return len(self.weights) == len(other.weights) and self.support() == other.support()

    def __hash__(self):
        return hash((len(self.weights), self.support()))


def apply_join_of_maps(maps: Sequence[Callable[[Any], Any]], x: JoinPoint) -> JoinPoint:
    """Apply one map per factor, keeping weights; zero-weight factors stay opaque."""
    if len(maps) != len(x.points):
        raise ShapeError(
            f"got {len(maps)} maps for a join point with {len(x.points)} factors"
        )
    new_points = tuple(
        maps[i](pt) if t > 0 else None for i, (t, pt) in enumerate(zip(x.weights, x.points))
    )
    return JoinPoint(x.weights, new_points)
