from itertools import product

import numpy as np
import pytest

from conftest import csc_to_dense, dense_betti, dense_rank_mod
from zpindex.complexes import CubicalComplex, SimplicialComplex, join_complex
from zpindex.errors import ShapeError
from zpindex.homology import (
    BettiVector,
    ChainComplexFp,
    _Csc,
    betti_numbers,
    boundary_matrices,
    connectivity,
    connectivity_from_betti,
)


def discrete(n, p=2):
    return SimplicialComplex.discrete(n, None, p)


def join_of(*sizes, p=2):
    out = discrete(sizes[0], p)
    for s in sizes[1:]:
        out = join_complex(out, discrete(s, p))
    return out


def triangle_boundary_complex():
    cells = {1: np.array([[0, 1], [0, 2], [1, 2]])}
    return SimplicialComplex(3, cells, [1, 2, 0], 3)


def test_triangle_edge_boundary_rank():
    c = triangle_boundary_complex()
    for ell in (2, 3, 5):
        cc = boundary_matrices(c, ell)
        b1 = cc.boundaries[0]
        assert (b1.n_rows, b1.n_cols) == (3, 3)
        assert cc.rank(1) == 2 == dense_rank_mod(csc_to_dense(b1), ell)


def test_cycle_betti():
    c = triangle_boundary_complex()
    assert betti_numbers(c, 5).reduced == (0, 1)
    assert betti_numbers(c, 2).reduced == (0, 1)


def test_k33_rank_and_betti():
    k33 = join_of(3, 3)
    cc = boundary_matrices(k33, 5)
    b1 = cc.boundaries[0]
    assert (b1.n_rows, b1.n_cols) == (6, 9)
    assert cc.rank(1) == 5 == dense_rank_mod(csc_to_dense(b1), 5)
    assert betti_numbers(k33, 5).reduced == (0, 4)


def test_single_vertex_trivial():
    c = discrete(1)
    assert betti_numbers(c, 2).reduced == (0,)
    assert connectivity(c, 2) == 0  # everything vanishes: report the dimension


def test_six_points_squared():
    assert betti_numbers(join_of(6, 6), 3).reduced == (0, 25)


@pytest.mark.parametrize(
    "sizes",
    [(2,), (5,), (1, 3), (2, 2), (2, 3), (3, 3), (4, 6), (2, 2, 2), (2, 2, 3),
     (2, 3, 5), (3, 3, 3), (1, 2, 2), (2, 2, 2, 2)],
)
def test_join_of_discrete_homology_law(sizes):
    total = 1
    for s in sizes:
        total *= s
    assert total <= 30 or sum(sizes) <= 30
    c = join_of(*sizes)
    k = len(sizes) - 1
    expected_top = 1
    for s in sizes:
        expected_top *= s - 1
    for ell in (2, 3, 5):
        bv = betti_numbers(c, ell)
        expected = tuple([0] * k + [expected_top])
        assert bv.reduced == expected
        # independent dense elimination on the same matrices
        assert dense_betti(c, ell) == expected


def test_field_independence_on_join_corpus():
    for sizes in [(2, 2), (3, 3), (2, 3, 5)]:
        profiles = {ell: betti_numbers(join_of(*sizes), ell).reduced for ell in (2, 3, 5)}
        assert len(set(profiles.values())) == 1


def test_connectivity_examples():
    assert connectivity(join_of(3, 3), 3) == 0
    pt = discrete(1, 3)
    cone = join_complex(pt, join_of(3, 3, p=3))
    assert connectivity(cone, 3) == cone.dim == 2
    assert connectivity(SimplicialComplex.empty(3), 3) == -1


def test_connectivity_from_betti_conventions():
    assert connectivity_from_betti((), -1) == -1
    assert connectivity_from_betti((1,), 0) == -1
    assert connectivity_from_betti((0, 4), 1) == 0
    assert connectivity_from_betti((0, 0, 0), 2) == 2


def test_full_torus_homology():
    # every cubical cell of the 2-torus at q = 4, with the axis swap action
    q, D = 4, 2
    cells = {}
    for base in product(range(q), repeat=D):
        for mask in range(1 << D):
            d = bin(mask).count("1")
            cells.setdefault(d, []).append(list(base) + [mask])
    cells = {d: np.array(v, dtype=np.int32) for d, v in cells.items()}
    torus = CubicalComplex(q, D, cells, [1, 0], 2)
    assert not torus.is_free  # diagonal squares are swap-invariant
    for ell in (2, 3):
        bv = betti_numbers(torus, ell)
        assert bv.reduced == (0, 2, 1)
        assert dense_betti(torus, ell) == (0, 2, 1)


def test_betti_vector_json():
    bv = BettiVector(5, (0, 4))
    doc = bv.to_json()
    assert doc == {"field": 5, "reduced_betti": [0, 4], "connectivity": 0}


def test_composition_check_rejects_bad_chain():
    # d1 maps the single edge to one endpoint only: augmentation test fails
    bad = _Csc(n_rows=2, n_cols=1, indptr=np.array([0, 1]), indices=np.array([0]),
               data=np.array([1]))
    with pytest.raises(ShapeError):
        ChainComplexFp(2, (2, 1), [bad])


def test_nonprime_field_rejected():
    with pytest.raises(ShapeError):
        betti_numbers(join_of(2, 2), 6)


def test_euler_identity_holds_on_corpus():
    for sizes in [(2, 2), (3, 3), (2, 3, 5)]:
        c = join_of(*sizes)
        bv = betti_numbers(c, 3)
        counts = c.cell_counts()
        euler_cells = sum((-1) ** d * n for d, n in counts.items())
        euler_betti = sum((-1) ** d * b for d, b in enumerate(bv.reduced))
        assert euler_betti == euler_cells - 1
