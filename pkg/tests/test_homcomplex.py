from fractions import Fraction

import numpy as np
import pytest

from chainmap.core.errors import InvalidInputError
from chainmap.core.models import BPolicy, HomotopyMode
from chainmap.services.algebra import GF2, QQ, RR, Matrix, rank
from chainmap.services.complexes import betti_numbers, model_complex
from chainmap.services.homcomplex import (
    ChainMapMatrix, HomBasisIndex, chain_map_generators, coefficients_for_map, evaluate_map,
    hom_boundary, hom_h0_rank, identity_map, induced_homology_map, is_chain_map, kunneth_rank,
    select_b_coefficients, simplicial_chain_map,
)


@pytest.mark.parametrize("n", [1, 2])
def test_hom_differential_squares_to_zero(triangle, filled_triangle, n):
    d_n = hom_boundary(filled_triangle, triangle, n)
    d_prev = hom_boundary(filled_triangle, triangle, n - 1)
    assert (d_prev @ d_n).is_zero()


@pytest.mark.parametrize("seed", range(20))
def test_hom_differential_squares_to_zero_on_random_pairs(complex_factory, seed):
    rng = np.random.default_rng(seed)
    X, Y = complex_factory(rng, max_simplices=8), complex_factory(rng, max_simplices=8)
    for n in (0, 1):
        assert (hom_boundary(X, Y, n) @ hom_boundary(X, Y, n + 1)).is_zero()


@pytest.mark.parametrize("pair,expected", [
    (("triangle", "square"), 2),
    (("filled_triangle", "square"), 1),
    (("square", "point"), 1),
])
def test_hom_h0_rank_matches_kunneth(pair, expected):
    X, Y = (model_complex(name) for name in pair)
    assert hom_h0_rank(X, Y) == expected == kunneth_rank(X, Y)


def test_hom_basis_index_order(triangle, point):
    index = HomBasisIndex(triangle, point, 0)
    assert len(index) == 3
    assert index.global_pairs() == [(0, 0), (1, 0), (2, 0)]


def test_triangle_self_map_generators(triangle):
    p = chain_map_generators(triangle, triangle, QQ)
    assert p.generator_degrees == [0, 1]
    assert len(p.raw_homotopies) == 9
    assert p.kunneth == 2
    assert p.hom_rank == 2

    f0, f1 = (m.to_dense() for m in p.generators)
    assert [(r, c, v) for r, c, v in p.generators[0].items()] == [(0, 0, 1), (0, 1, 1), (0, 2, 1)]
    assert [f1[r][3] for r in (3, 4, 5)] == [1, -1, 1]
    assert sum(1 for row in f0 for v in row if v) == 3
    for gen in p.generators:
        assert is_chain_map(gen, triangle, triangle)


def test_point_to_point(point):
    p = chain_map_generators(point, point, QQ)
    assert len(p.generators) == 1
    assert p.raw_homotopies == []
    assert evaluate_map(p, []).g.to_dense() == [[1]]


def test_square_over_z2_has_sixteen_homotopies(square):
    p = chain_map_generators(square, square, GF2)
    assert len(p.raw_homotopies) == 16
    assert len(p.generators) == 2


@pytest.mark.parametrize("seed", range(50))
def test_generator_count_matches_kunneth(complex_factory, seed):
    rng = np.random.default_rng(200 + seed)
    X, Y = complex_factory(rng, max_simplices=12), complex_factory(rng, max_simplices=12)
    p = chain_map_generators(X, Y, QQ)
    bx, by = betti_numbers(X), betti_numbers(Y)
    expected = sum(bx[k] * by[k] for k in range(min(len(bx), len(by))))
    assert len(p.generators) == expected == kunneth_rank(X, Y)
    assert p.hom_rank == expected


@pytest.mark.parametrize("mode", [HomotopyMode.RAW, HomotopyMode.REDUCED])
def test_evaluated_maps_are_chain_maps(triangle, square, mode):
    p = chain_map_generators(triangle, square, QQ, homotopy_mode=mode)
    rng = np.random.default_rng(1)
    c = [Fraction(int(x), 3) for x in rng.integers(-3, 4, size=len(p.homotopies))]
    g = evaluate_map(p, c)
    assert g.field is QQ
    assert is_chain_map(g.g, triangle, square)


def test_reduced_homotopies_are_independent(square):
    p = chain_map_generators(square, square, QQ)
    d1 = hom_boundary(square, square, 1)
    assert len(p.reduced_indices) == rank(d1)
    reduced = p.with_mode(HomotopyMode.REDUCED)
    assert len(reduced.homotopies) == len(p.reduced_indices)


def test_float_coefficients_promote_to_reals(triangle):
    p = chain_map_generators(triangle, triangle, QQ)
    g = evaluate_map(p, [0.5] + [0] * 8)
    assert g.field is RR
    assert is_chain_map(g.g, triangle, triangle)


def test_evaluate_map_checks_length(triangle):
    p = chain_map_generators(triangle, triangle, QQ)
    with pytest.raises(InvalidInputError):
        evaluate_map(p, [0, 1])


def test_by_dimension_b_policy(triangle):
    p = chain_map_generators(triangle, triangle, QQ, b_policy=BPolicy.BY_DIMENSION, b_dims=[1])
    assert p.b == [0, 1]
    assert select_b_coefficients(p, BPolicy.ALL_ONES) == [1, 1]
    with pytest.raises(InvalidInputError):
        select_b_coefficients(p, BPolicy.BY_DIMENSION)


def test_simplicial_maps(square, triangle):
    rotation = simplicial_chain_map(square, square, [1, 2, 3, 0])
    assert rotation.is_chain_map
    collapse = simplicial_chain_map(square, triangle, [0, 1, 2, 2])
    assert collapse.is_chain_map
    with pytest.raises(InvalidInputError):
        simplicial_chain_map(square, square, [0, 2, 1, 3])


def test_reflection_carries_orientation_sign(square):
    reflection = simplicial_chain_map(square, square, [0, 3, 2, 1])
    # [0,1] -> [0,3] con segno +, [1,2] -> [3,2] = −[2,3]
    assert reflection.g.entry(5, 4) == 1
    assert reflection.g.entry(7, 6) == -1


def test_non_chain_map_is_flagged(triangle):
    g = Matrix.from_entries(6, 6, [(0, 0, 1)], QQ)
    assert not ChainMapMatrix.checked(g, triangle, triangle).is_chain_map
    with pytest.raises(InvalidInputError):
        induced_homology_map(ChainMapMatrix.checked(g, triangle, triangle), 0)


@pytest.mark.parametrize("pair,degrees", [
    (("triangle", "square"), [0, 1]),
    (("square", "triangle"), [0, 1]),
    (("filled_triangle", "square"), [0]),
    (("octahedron", "triangle"), [0]),
])
def test_induced_map_is_homotopy_invariant(pair, degrees):
    X, Y = (model_complex(name) for name in pair)
    p = chain_map_generators(X, Y, QQ)
    rng = np.random.default_rng(5)
    n = len(p.homotopies)
    base = evaluate_map(p, [0] * n)
    expected = {d: induced_homology_map(base, d) for d in degrees}
    for _ in range(20):
        c = [Fraction(int(a), int(b)) for a, b in zip(rng.integers(-3, 4, size=n), rng.integers(1, 4, size=n))]
        g = evaluate_map(p, c)
        assert is_chain_map(g.g, X, Y)
        for d in degrees:
            assert induced_homology_map(g, d).equals(expected[d])


def test_identity_induces_identity(square):
    g = identity_map(square)
    for d in (0, 1):
        assert induced_homology_map(g, d).equals(Matrix.identity(1, QQ))


def test_coefficients_for_map_recovers_coordinates(triangle, square):
    p = chain_map_generators(triangle, square, QQ, homotopy_mode=HomotopyMode.REDUCED)
    c = [Fraction(k % 3 - 1) for k in range(len(p.homotopies))]
    g = evaluate_map(p, c)
    assert coefficients_for_map(p, g) == c


def test_coefficients_for_map_in_float_mode(triangle, square):
    p = chain_map_generators(triangle, square, QQ, homotopy_mode=HomotopyMode.REDUCED)
    c = np.linspace(-1, 1, len(p.homotopies))
    found = coefficients_for_map(p, evaluate_map(p, c.tolist()), exact=False)
    assert np.allclose(found, c, atol=1e-8)


def test_map_outside_the_class(square):
    p = chain_map_generators(square, square, QQ)
    constant = simplicial_chain_map(square, square, [0, 0, 0, 0])
    # la mappa costante induce 0 su H_1, la classe di p una mappa non nulla
    assert coefficients_for_map(p, constant) is None


@pytest.mark.slow
def test_icosahedron_to_octahedron_sizes():
    X, Y = model_complex("icosahedron"), model_complex("octahedron")
    p = chain_map_generators(X, Y, QQ)
    assert len(HomBasisIndex(X, Y, 0)) == 592
    assert len(p.raw_homotopies) == 384
    assert len(p.reduced_indices) == 289
    assert len(p.generators) == 2
    assert p.hom_rank == 2
