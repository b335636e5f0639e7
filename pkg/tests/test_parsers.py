import json
from fractions import Fraction

import numpy as np
import pandas as pd
import pytest

from chainmap.core.errors import (
    ConsistencyError, EnumerationLimitError, InputDataError, OptimizationError, UsageError,
    exit_code_for,
)
from chainmap.core.models import ComplexDocument
from chainmap.services.algebra import QQ, Matrix
from chainmap.services.complexes import betti_numbers
from chainmap.services.exporters import (
    build_manifest, canonical_json, complex_to_document, format_scalar, manifest_path,
    map_to_document, parameterization_to_document, write_json, write_map_csv,
)
from chainmap.services.homcomplex import (
    ChainMapMatrix, chain_map_generators, evaluate_map, identity_map,
)
from chainmap.services.parsers import (
    complex_from_document, read_coefficients, read_complex, read_map, read_palette,
    read_parameterization, read_point_cloud,
)


# ============================================================================
# CSV
# ============================================================================

def test_point_cloud_with_header(tmp_path):
    path = tmp_path / "points.csv"
    path.write_text("x,y\n0.0,1.0\n2.5, 3\n")
    cloud = read_point_cloud(path)
    assert len(cloud) == 2
    assert cloud.dim == 2
    assert cloud.points[1].tolist() == [2.5, 3.0]


def test_point_cloud_without_header(tmp_path):
    path = tmp_path / "points.csv"
    path.write_text("# campione\n1,2,3\n4,5,6\n7,8,9\n")
    assert read_point_cloud(path).points.shape == (3, 3)


@pytest.mark.parametrize("content", ["", "x,y\n", "0,1\n2,abc\n"])
def test_bad_point_clouds(tmp_path, content):
    path = tmp_path / "points.csv"
    path.write_text(content)
    with pytest.raises(InputDataError):
        read_point_cloud(path)


def test_missing_file(tmp_path):
    with pytest.raises(InputDataError):
        read_point_cloud(tmp_path / "nope.csv")


def test_hue_palette_builtin():
    palette = read_palette("hue", [0, 1, 2, 3])
    assert sorted(palette) == [0, 1, 2, 3]
    assert palette[0] == pytest.approx((1.0, 0.0, 0.0))


def test_csv_palette(tmp_path):
    path = tmp_path / "palette.csv"
    pd.DataFrame({"vertex": [0, 1], "r": [1.0, 0.0], "g": [0.0, 0.5], "b": [0.0, 1.0]}).to_csv(path, index=False)
    palette = read_palette(str(path), [0, 1])
    assert palette == {0: (1.0, 0.0, 0.0), 1: (0.0, 0.5, 1.0)}
    with pytest.raises(InputDataError):
        read_palette(str(path), [0, 1, 2])


@pytest.mark.parametrize("content", ["vertex,r,g\n0,1,0\n", "vertex,r,g,b\n0,1,0,0\n0,0,1,0\n", "vertex,r,g,b\n0,red,0,0\n"])
def test_malformed_palettes(tmp_path, content):
    path = tmp_path / "palette.csv"
    path.write_text(content)
    with pytest.raises(InputDataError):
        read_palette(str(path), [0])


# ============================================================================
# JSON
# ============================================================================

def test_complex_round_trip(tmp_path, square):
    path = write_json(tmp_path / "square.json", complex_to_document(square))
    loaded = read_complex(path)
    assert loaded.all_simplices() == square.all_simplices()
    assert loaded.name == square.name
    assert np.allclose(loaded.coordinates(), square.coordinates())
    assert betti_numbers(loaded) == [1, 1]


def test_complex_document_adds_isolated_vertices():
    doc = ComplexDocument(vertices=[0, 1, 2], simplices=[{"v": [0]}, {"v": [1]}, {"v": [0, 1]}])
    k = complex_from_document(doc)
    assert k.count(0) == 3
    assert betti_numbers(k) == [2, 0]


def test_unclosed_complex_is_an_input_error(tmp_path):
    path = tmp_path / "bad.json"
    path.write_text(json.dumps({"vertices": [0], "simplices": [{"v": [0]}, {"v": [0, 1]}]}))
    with pytest.raises(InputDataError):
        read_complex(path)


def test_malformed_json(tmp_path):
    path = tmp_path / "broken.json"
    path.write_text("{\"vertices\": [0,")
    with pytest.raises(InputDataError):
        read_complex(path)
    path.write_text(json.dumps({"vertices": "all"}))
    with pytest.raises(InputDataError):
        read_complex(path)


def test_parameterization_round_trip(tmp_path, triangle, square):
    p = chain_map_generators(triangle, square, QQ)
    path = write_json(tmp_path / "hom.json", parameterization_to_document(p))
    loaded = read_parameterization(path)
    assert all(a.equals(b) for a, b in zip(loaded.generators, p.generators))
    assert len(loaded.raw_homotopies) == len(p.raw_homotopies)
    assert loaded.reduced_indices == p.reduced_indices
    assert loaded.b == p.b
    c = [Fraction(1, 2)] * len(p.homotopies)
    assert evaluate_map(loaded, c).g.equals(evaluate_map(p, c).g)


def test_parameterization_with_wrong_basis_index(tmp_path, triangle, square):
    doc = parameterization_to_document(chain_map_generators(triangle, square, QQ))
    doc.basis_index = list(reversed(doc.basis_index))
    path = write_json(tmp_path / "hom.json", doc)
    with pytest.raises(InputDataError):
        read_parameterization(path)


def test_map_round_trip(tmp_path, square):
    g = identity_map(square)
    path = write_json(tmp_path / "map.json", map_to_document(g, method="identity", coefficients=[Fraction(1, 3)]))
    loaded, doc = read_map(path)
    assert loaded.is_chain_map
    assert loaded.g.equals(g.g)
    assert doc.method == "identity"
    assert doc.coefficients == ["1/3"]


def test_map_claiming_to_be_a_chain_map_is_rechecked(tmp_path, triangle):
    fake = ChainMapMatrix(Matrix.from_entries(6, 6, [(0, 0, 1)], QQ), triangle, triangle, True)
    path = write_json(tmp_path / "map.json", map_to_document(fake))
    loaded, doc = read_map(path)
    assert doc.is_chain_map
    assert not loaded.is_chain_map


# ============================================================================
# COEFFICIENTI
# ============================================================================

def test_read_coefficients_from_a_list():
    assert read_coefficients("1, 0,1/2,0.25", 4) == [1, 0, Fraction(1, 2), Fraction(1, 4)]
    assert read_coefficients(None, 3) is None
    with pytest.raises(InputDataError):
        read_coefficients("1,0", 3)
    with pytest.raises(InputDataError):
        read_coefficients("1,x", 2)
    with pytest.raises(InputDataError):
        read_coefficients("1/0,0", 2)


def test_read_coefficients_from_a_file(tmp_path):
    path = tmp_path / "c.csv"
    path.write_text("1\n-2\n3/4\n")
    assert read_coefficients(str(path), 3) == [1, -2, Fraction(3, 4)]


# ============================================================================
# ESPORTAZIONE
# ============================================================================

@pytest.mark.parametrize("value,expected", [
    (Fraction(1, 2), "1/2"),
    (Fraction(4, 2), 2),
    (np.int64(3), 3),
    (True, 1),
    (-0.0, 0.0),
    (1 / 3, 0.3333333333),
])
def test_format_scalar(value, expected):
    assert format_scalar(value) == expected


def test_canonical_json_sorts_keys():
    text = canonical_json({"b": [Fraction(1, 3)], "a": np.array([1.0, 2.0])})
    assert text == '{\n  "a": [\n    1.0,\n    2.0\n  ],\n  "b": [\n    "1/3"\n  ]\n}\n'


def test_map_csv_has_a_manifest(tmp_path, triangle):
    source = tmp_path / "input.json"
    source.write_text("{}")
    manifest = build_manifest(["map", "--method", "aw"], seed=7, field="R", inputs=[source, "hue"])
    path = write_map_csv(tmp_path / "out" / "map.csv", identity_map(triangle), manifest)
    rows = pd.read_csv(path, header=None)
    assert rows.shape == (6, 6)
    sidecar = json.loads(manifest_path(path).read_text())
    assert sidecar["seed"] == 7
    assert list(sidecar["input_hashes"]) == [str(source)]


def test_write_json_embeds_the_manifest(tmp_path):
    manifest = build_manifest(["hom"], seed=0)
    path = write_json(tmp_path / "doc.json", {"value": 1}, manifest)
    data = json.loads(path.read_text())
    assert data["value"] == 1
    assert data["manifest"]["command"] == ["hom"]


@pytest.mark.parametrize("error,code", [
    (UsageError("x"), 2),
    (InputDataError("x"), 3),
    (EnumerationLimitError("x"), 3),
    (ConsistencyError("x"), 4),
    (OptimizationError("x", iterate=[0.0]), 4),
])
def test_exit_codes(error, code):
    assert exit_code_for(error) == code
