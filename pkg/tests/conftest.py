"""
Fixture condivise: complessi modello, generatore di complessi casuali, oracoli indipendenti
"""
import itertools
from fractions import Fraction
from typing import List, Sequence

import numpy as np
import pytest

from chainmap.services.complexes import SimplicialComplex, model_complex


@pytest.fixture
def point():
    return model_complex("point")


@pytest.fixture
def triangle():
    return model_complex("triangle")


@pytest.fixture
def square():
    return model_complex("square")


@pytest.fixture
def filled_triangle():
    return model_complex("filled_triangle")


@pytest.fixture
def octagon():
    return model_complex("n_gon", 8)


def random_complex(rng: np.random.Generator, max_simplices: int = 12, n_vertices: int = 5) -> SimplicialComplex:
    """Chiusura per facce di simplessi casuali, troncata a max_simplices"""
    simplices = set()
    vertices = list(range(n_vertices))
    for v in vertices[: rng.integers(1, n_vertices + 1)]:
        simplices.add((v,))
    for _ in range(int(rng.integers(1, 6))):
        size = int(rng.integers(1, 4))
        chosen = tuple(sorted(rng.choice(n_vertices, size=size, replace=False).tolist()))
        closure = {
            face
            for k in range(1, len(chosen) + 1)
            for face in itertools.combinations(chosen, k)
        }
        if len(simplices | closure) <= max_simplices:
            simplices |= closure
    return SimplicialComplex(simplices)


@pytest.fixture
def complex_factory():
    return random_complex


def bareiss_rank(rows: Sequence[Sequence[Fraction]]) -> int:
    """Rango con eliminazione fraction-free di Bareiss (oracolo indipendente)"""
    a = [[Fraction(x) for x in row] for row in rows]
    if not a or not a[0]:
        return 0
    m, n = len(a), len(a[0])
    rank, prev = 0, Fraction(1)
    for col in range(n):
        pivot = next((r for r in range(rank, m) if a[r][col] != 0), None)
        if pivot is None:
            continue
        a[rank], a[pivot] = a[pivot], a[rank]
        for r in range(rank + 1, m):
            for c in range(col + 1, n):
                a[r][c] = (a[r][c] * a[rank][col] - a[r][col] * a[rank][c]) / prev
            a[r][col] = Fraction(0)
        prev = a[rank][col]
        rank += 1
        if rank == m:
            break
    return rank


def betti_oracle(k: SimplicialComplex) -> List[int]:
    """β_d = n_d − rank ∂_d − rank ∂_{d+1} con il rango di Bareiss"""
    from chainmap.services.complexes import boundary_matrix

    ranks = [bareiss_rank(boundary_matrix(k, d).to_dense()) for d in range(k.dimension + 2)]
    return [k.count(d) - ranks[d] - ranks[d + 1] for d in range(k.dimension + 1)]


@pytest.fixture
def homology_oracle():
    return betti_oracle


@pytest.fixture
def noisy_circle():
    def make(n: int, noise: float = 0.01, seed: int = 0, radius: float = 1.0) -> np.ndarray:
        rng = np.random.default_rng(seed)
        theta = 2 * np.pi * np.arange(n) / n
        points = radius * np.column_stack([np.cos(theta), np.sin(theta)])
        return points + rng.uniform(-noise, noise, size=points.shape)
    return make
