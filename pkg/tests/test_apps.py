import networkx as nx
import numpy as np
import pytest

from chainmap.core.errors import InputDataError, InvalidInputError
from chainmap.core.models import CircleStart, CircleVariant
from chainmap.services.algebra import QQ, Matrix, SparseVector
from chainmap.services.apps import (
    TWO_PI, CircleModel, DensityEstimate, MapperGraph, MapperNode, circle_distortion,
    coordinate_filter, cycle_vertex_order, hue_palette, kde_evaluate, kde_gradient, localize,
    mapper_1d, mapper_match, maximize_density, minimize_circle_distortion, pushforward_coloring,
    quotient_local_maxima, winding_number, wrap_angle,
)
from chainmap.services.complexes import (
    PointCloud, SimplicialComplex, betti_numbers, model_complex, vietoris_rips,
)
from chainmap.services.homcomplex import (
    ChainMapMatrix, chain_map_generators, identity_map, is_chain_map,
)


def y_shape(offset=0.0):
    stem = [(x, 0.0) for x in np.linspace(0.0, 1.0, 51)]
    upper = [(x, 0.5 * (x - 1.0)) for x in np.linspace(1.02, 2.0, 50)]
    lower = [(x, -0.5 * (x - 1.0)) for x in np.linspace(1.02, 2.0, 50)]
    return PointCloud(np.array(stem + upper + lower) + offset)


def path_graph(values):
    nodes = [MapperNode(i, (i,), float(v), i) for i, v in enumerate(values)]
    edges = [(i, i + 1) for i in range(len(values) - 1)]
    return MapperGraph(nodes, edges)


# ============================================================================
# CERCHIO
# ============================================================================

def test_wrap_angle():
    assert wrap_angle(np.array([0.0, np.pi / 2, 3 * np.pi / 2, -3 * np.pi / 2])) == pytest.approx(
        [0.0, np.pi / 2, -np.pi / 2, np.pi / 2]
    )


def test_winding_number_of_a_loop():
    angles = TWO_PI * np.arange(8) / 8
    assert winding_number(angles, list(range(8))) == 1
    assert winding_number(angles[::-1], list(range(8))) == -1
    assert winding_number(np.zeros(8), list(range(8))) == 0


def test_circle_model_for_complex(square, triangle, filled_triangle):
    assert CircleModel.for_complex(square).n == 4
    assert CircleModel.for_complex(triangle).angles == pytest.approx([0, TWO_PI / 3, 2 * TWO_PI / 3])
    with pytest.raises(InvalidInputError):
        CircleModel.for_complex(filled_triangle)


def test_localize_weighted_sum():
    chain = SparseVector.from_dict(6, {0: 1, 2: "1/2"}, QQ)
    phi = np.array([[1.0, 0.0], [0.0, 1.0], [2.0, 2.0]])
    assert localize(chain, phi) == pytest.approx([2.0, 1.0])
    with pytest.raises(InvalidInputError):
        localize(SparseVector.from_dict(6, {4: 1}, QQ), phi)


def test_cycle_vertex_order(octagon):
    assert sorted(cycle_vertex_order(octagon)) == list(range(8))
    assert cycle_vertex_order(model_complex("point")) is None


def test_octagon_circle_coordinates(octagon, square):
    p = chain_map_generators(octagon, square, QQ)
    result = minimize_circle_distortion(p, seed=0, start=CircleStart.NEAREST)
    assert result.initial_distortion == pytest.approx(np.pi ** 2)
    assert result.final_distortion < result.initial_distortion
    assert abs(result.winding_number) == 1
    assert len(result.angles) == 8
    assert all(0 <= a <= TWO_PI for a in result.angles)
    value = circle_distortion(result.parameterization, CircleModel(4), result.coefficients)
    assert value == pytest.approx(result.final_distortion)
    assert is_chain_map(result.map.g, octagon, square)


def test_chord_variant_keeps_winding(octagon, square):
    p = chain_map_generators(octagon, square, QQ)
    result = minimize_circle_distortion(p, start="nearest", variant=CircleVariant.CHORD, max_iter=50)
    assert result.final_distortion <= result.initial_distortion
    assert abs(result.winding_number) == 1


def test_zero_start_without_geometry(square):
    X = SimplicialComplex(square.all_simplices())
    p = chain_map_generators(X, square, QQ)
    result = minimize_circle_distortion(p, start=CircleStart.NEAREST, max_iter=20)
    # senza geometria si parte da c = 0
    assert result.final_distortion <= result.initial_distortion


@pytest.mark.slow
def test_circle_coordinates_on_a_noisy_sample(noisy_circle):
    cloud = PointCloud(noisy_circle(60, noise=0.01))
    X = vietoris_rips(cloud, 0.15, 2)
    assert betti_numbers(X) == [1, 1]
    p = chain_map_generators(X, model_complex("n_gon", 16), QQ)
    result = minimize_circle_distortion(p, seed=0, start=CircleStart.NEAREST)
    assert abs(result.winding_number) == 1
    assert result.final_distortion <= result.initial_distortion


# ============================================================================
# DENSITÀ
# ============================================================================

def test_kde_value_in_one_dimension():
    d = DensityEstimate(PointCloud(np.array([[0.0]])), 1.0)
    assert kde_evaluate(d, np.array([0.0])) == pytest.approx(1 / np.sqrt(2 * np.pi))
    assert kde_gradient(d, np.array([0.0])) == pytest.approx([0.0])


def test_kde_gradient_matches_finite_differences():
    rng = np.random.default_rng(0)
    d = DensityEstimate(PointCloud(rng.normal(size=(20, 2))), 0.5)
    y = np.array([0.3, -0.2])
    grad = kde_gradient(d, y)
    h = 1e-6
    for i in range(2):
        step = np.zeros(2)
        step[i] = h
        numeric = (kde_evaluate(d, y + step) - kde_evaluate(d, y - step)) / (2 * h)
        assert grad[i] == pytest.approx(numeric, rel=1e-5, abs=1e-9)


def test_kde_rows():
    d = DensityEstimate(PointCloud(np.array([[0.0, 0.0], [1.0, 1.0]])), 0.3)
    values = kde_evaluate(d, np.array([[0.0, 0.0], [5.0, 5.0]]))
    assert values.shape == (2,)
    assert values[0] > values[1]


def test_bandwidth_must_be_positive():
    with pytest.raises(InvalidInputError):
        DensityEstimate(PointCloud(np.zeros((1, 2))), 0.0)


def test_density_maximization_improves(noisy_circle):
    Y = vietoris_rips(PointCloud(noisy_circle(30, noise=0.01)), 0.5, 2)
    X = model_complex("n_gon", 10)
    p = chain_map_generators(X, Y, QQ)
    d = DensityEstimate(PointCloud(Y.coordinates()), 0.25)
    result = maximize_density(p, d, seed=0, restarts=0, max_iter=30)
    assert result.final_objective >= result.initial_objective
    assert result.image.shape == (10, 2)


def test_density_needs_codomain_geometry(point):
    Y = SimplicialComplex([(0,), (1,), (0, 1)])
    p = chain_map_generators(point, Y, QQ)
    d = DensityEstimate(PointCloud(np.zeros((2, 2))), 1.0)
    with pytest.raises(InputDataError):
        maximize_density(p, d)


# ============================================================================
# MAPPER
# ============================================================================

def test_mapper_of_a_y_shape():
    cloud = y_shape()
    graph = mapper_1d(cloud, coordinate_filter(cloud, 0), intervals=4, overlap=0.2, link_threshold=0.15)
    degrees = dict(graph.to_networkx().degree())
    assert len(graph.nodes) == 5
    assert len(graph.edges) == 4
    assert max(degrees.values()) == 3
    assert sorted({node.interval for node in graph.nodes}) == [0, 1, 2, 3]


def test_mapper_rejects_bad_cover():
    cloud = y_shape()
    with pytest.raises(InvalidInputError):
        mapper_1d(cloud, coordinate_filter(cloud), intervals=0, overlap=0.2, link_threshold=0.1)
    with pytest.raises(InvalidInputError):
        mapper_1d(cloud, coordinate_filter(cloud), intervals=3, overlap=1.0, link_threshold=0.1)
    with pytest.raises(InvalidInputError):
        coordinate_filter(cloud, axis=2)


def test_quotient_of_a_path_closes_a_loop():
    quotient = quotient_local_maxima(path_graph([5, 1, 2, 6]))
    assert quotient.count(0) == 3
    assert betti_numbers(quotient) == [1, 1]
    assert min(quotient.filtration.values()) == 0


def test_strict_maxima():
    graph = path_graph([1, 3, 3, 0])
    assert quotient_local_maxima(graph).count(0) == 3
    assert quotient_local_maxima(graph, strict=True).count(0) == 4


@pytest.mark.parametrize("k", [2, 3, 5])
def test_quotient_of_a_star(k):
    nodes = [MapperNode(0, (0,), 0.0, 0)] + [MapperNode(i, (i,), 1.0, 1) for i in range(1, k + 1)]
    graph = MapperGraph(nodes, [(0, i) for i in range(1, k + 1)])
    assert betti_numbers(quotient_local_maxima(graph))[1] == k - 1
    merged = quotient_local_maxima(graph, merge_parallel=True)
    assert betti_numbers(merged) == [1, 0]


def test_quotient_of_the_y_shape_is_a_circle():
    cloud = y_shape()
    graph = mapper_1d(cloud, coordinate_filter(cloud, 0), 4, 0.2, 0.15)
    assert betti_numbers(quotient_local_maxima(graph)) == [1, 1]


def test_mapper_match():
    a, b = y_shape(), y_shape(offset=0.05)
    match = mapper_match(a, b, coordinate_filter(a), coordinate_filter(b), 4, 0.2, 0.15, seed=0)
    assert len(match.parameterization.generators) == 2
    assert is_chain_map(match.solution.map.g, match.quotient_a, match.quotient_b)
    assert nx.is_connected(match.graph_b.to_networkx())


# ============================================================================
# COLORAZIONE
# ============================================================================

def test_hue_palette_is_equispaced():
    palette = hue_palette([2, 0, 1])
    assert palette[0] == pytest.approx((1.0, 0.0, 0.0))
    assert palette[1] == pytest.approx((0.0, 1.0, 0.0))
    assert palette[2] == pytest.approx((0.0, 0.0, 1.0))


def test_identity_coloring(triangle):
    result = pushforward_coloring(identity_map(triangle), hue_palette(triangle.vertices))
    assert result.raw.keys() == result.domain.keys()
    for key, color in result.domain.items():
        assert result.raw[key] == pytest.approx(color)
    assert result.raw["0,1"] == pytest.approx([0.5, 0.5, 0.0])
    assert result.intense == []


def test_zero_map_is_black(square):
    zero = ChainMapMatrix(Matrix.zeros(8, 8, QQ), square, square, True)
    result = pushforward_coloring(zero, hue_palette(square.vertices))
    assert all(color == [0.0, 0.0, 0.0] for color in result.raw.values())


def test_intense_colors_are_reported_and_rescaled(triangle):
    doubled = ChainMapMatrix(identity_map(triangle).g.scale(2), triangle, triangle, True)
    palette = hue_palette(triangle.vertices)
    plain = pushforward_coloring(doubled, palette)
    assert set(plain.intense) == {"0", "1", "2", "0,1", "0,2", "1,2"}
    assert max(max(c) for c in plain.clamped.values()) == 1.0
    rescaled = pushforward_coloring(doubled, palette, rescale=True)
    assert rescaled.rescaled
    assert rescaled.clamped["0"] == pytest.approx([1.0, 0.0, 0.0])


def test_palette_must_cover_the_domain(triangle):
    with pytest.raises(InputDataError):
        pushforward_coloring(identity_map(triangle), {0: (1.0, 0.0, 0.0)})
