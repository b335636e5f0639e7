"""
Complesso Hom(C*(X), C*(Y)) e parametrizzazione affine delle classi di omotopia [X, Y]

Un elemento di grado n è una combinazione di σ*⊗τ con dim τ − dim σ = n. Il bordo è
    d^H_n(f)(a) = d'(f(a)) + (−1)^{n+1} f(d a)
e i cicli di grado 0 sono esattamente le mappe di catene. Una mappa concreta è la matrice
G di forma |Y| x |X| nelle basi globali (dimensione, lessicografico) dei due complessi:
l'elemento σ*⊗τ corrisponde all'entrata G[τ, σ].

Si materializzano solo i gradi 0 e 1 (e il bordo d^H_0 verso il grado −1).
"""
import logging
from dataclasses import dataclass, field, replace
from typing import Any, Dict, Iterable, List, Optional, Sequence, Tuple, Union

import numpy as np
from scipy import sparse
from scipy.sparse.linalg import lsqr

from chainmap.core.config import settings
from chainmap.core.errors import ConsistencyError, InvalidInputError
from chainmap.core.models import BPolicy, HomotopyMode
from chainmap.services.algebra import (
    QQ, RR, Field, Matrix, SparseVector, linear_combination, row_reduce, solve_membership,
)
from chainmap.services.complexes import (
    Simplex, SimplicialComplex, betti_numbers, boundary_matrix,
    cohomology_representatives, homology_representatives,
)

logger = logging.getLogger(__name__)


# ============================================================================
# BASE E BORDO DEL COMPLESSO HOM
# ============================================================================

class HomBasisIndex:
    """Biiezione indice piatto <-> (σ, τ) per il termine di grado n, in ordine (dim σ, idx σ, idx τ)"""

    def __init__(self, X: SimplicialComplex, Y: SimplicialComplex, degree: int):
        self.degree = degree
        self.pairs: List[Tuple[Simplex, Simplex]] = [
            (sigma, tau)
            for p in range(X.dimension + 1)
            for sigma in X.simplices(p)
            for tau in Y.simplices(p + degree)
        ]
        self._flat = {pair: i for i, pair in enumerate(self.pairs)}
        self._X = X
        self._Y = Y

    def __len__(self) -> int:
        return len(self.pairs)

    def flat(self, sigma: Simplex, tau: Simplex) -> int:
        return self._flat[(sigma, tau)]

    def pair(self, i: int) -> Tuple[Simplex, Simplex]:
        return self.pairs[i]

    def global_pairs(self) -> List[Tuple[int, int]]:
        """Coppie (indice globale di σ in X, indice globale di τ in Y)"""
        return [(self._X.global_index(s), self._Y.global_index(t)) for s, t in self.pairs]


def hom_boundary(X: SimplicialComplex, Y: SimplicialComplex, n: int, field: Field = QQ) -> Matrix:
    """
    Matrice di d^H_n dal grado n al grado n−1 nell'ordine di HomBasisIndex.

    La colonna di σ*⊗τ ha +[τ:τ'] in (σ, τ') per ogni faccia τ' di τ e (−1)^{n+1}[ρ:σ] in
    (ρ, τ) per ogni cofaccia ρ di σ.
    """
    source = HomBasisIndex(X, Y, n)
    target = HomBasisIndex(X, Y, n - 1)
    sign = 1 if (n + 1) % 2 == 0 else -1
    columns = []
    for sigma, tau in source.pairs:
        col: Dict[int, int] = {}
        for s, face in tau.boundary():
            row = target.flat(sigma, face)
            col[row] = col.get(row, 0) + s
        for s, rho in X.cofaces(sigma):
            row = target.flat(rho, tau)
            col[row] = col.get(row, 0) + sign * s
        columns.append(col)
    return Matrix.from_columns(len(target), columns, field)


def hom_vector_to_matrix(values: Dict[int, Any], index: HomBasisIndex, X: SimplicialComplex, Y: SimplicialComplex, field: Field) -> Matrix:
    """Converte un vettore del grado 0 (o 1) nella matrice |Y| x |X| corrispondente"""
    entries = []
    for flat, value in values.items():
        sigma, tau = index.pair(flat)
        entries.append((Y.global_index(tau), X.global_index(sigma), value))
    return Matrix.from_entries(len(Y), len(X), entries, field)


def full_boundary(k: SimplicialComplex, field: Field = QQ) -> Matrix:
    """Bordo totale |K| x |K| (somma diretta dei ∂_d nelle basi globali)"""
    entries = []
    for s in k.all_simplices():
        col = k.global_index(s)
        for sign, face in s.boundary():
            entries.append((k.global_index(face), col, sign))
    return Matrix.from_entries(len(k), len(k), entries, field)


# ============================================================================
# MAPPE DI CATENE
# ============================================================================

def _is_degree_zero(g: Matrix, X: SimplicialComplex, Y: SimplicialComplex) -> bool:
    for r, c, _ in g.items():
        if Y.dim_of(r) != X.dim_of(c):
            return False
    return True


def is_chain_map(g: Matrix, X: SimplicialComplex, Y: SimplicialComplex) -> bool:
    """True se g preserva la dimensione e ∂_Y g = g ∂_X (esatto, o entro soglia sui reali)"""
    if g.shape != (len(Y), len(X)):
        raise InvalidInputError(f"Map shape {g.shape} does not match |Y| x |X| = {(len(Y), len(X))}")
    if not _is_degree_zero(g, X, Y):
        return False
    dy = full_boundary(Y, g.field)
    dx = full_boundary(X, g.field)
    return (dy @ g).equals(g @ dx)


@dataclass(frozen=True)
class ChainMapMatrix:
    """Matrice G (|Y| x |X|) di una mappa concreta, diagonale a blocchi per dimensione"""

    g: Matrix
    domain: SimplicialComplex
    codomain: SimplicialComplex
    is_chain_map: bool = True

    @classmethod
    def checked(cls, g: Matrix, domain: SimplicialComplex, codomain: SimplicialComplex) -> "ChainMapMatrix":
        return cls(g, domain, codomain, is_chain_map(g, domain, codomain))

    @property
    def field(self) -> Field:
        return self.g.field

    @property
    def shape(self) -> Tuple[int, int]:
        return self.g.shape

    def block(self, p: int) -> Matrix:
        """Blocco C_p(X) -> C_p(Y)"""
        return self.g.block(
            self.codomain.offset(p), self.codomain.offset(p + 1),
            self.domain.offset(p), self.domain.offset(p + 1),
        )

    def adjoint(self) -> "ChainMapMatrix":
        """Trasposta G^T vista come mappa Y -> X"""
        gt = self.g.transpose()
        return ChainMapMatrix(gt, self.codomain, self.domain, is_chain_map(gt, self.codomain, self.domain))

    def dense(self) -> np.ndarray:
        return self.g.to_numpy(dtype=float)


def _permutation_sign(values: Sequence[int]) -> int:
    inversions = sum(1 for i in range(len(values)) for j in range(i + 1, len(values)) if values[i] > values[j])
    return -1 if inversions % 2 else 1


def simplicial_chain_map(
    X: SimplicialComplex,
    Y: SimplicialComplex,
    vertex_map: Union[Dict[int, int], Sequence[int]],
    field: Field = QQ,
) -> ChainMapMatrix:
    """
    Mappa di catene indotta da una mappa simpliciale sui vertici.

    Un simplesso degenere (vertici immagine ripetuti) va a 0; altrimenti va al simplesso
    immagine con il segno della permutazione che ne ordina i vertici.
    """
    if not isinstance(vertex_map, dict):
        vertex_map = dict(zip(X.vertices, vertex_map))
    missing = [v for v in X.vertices if v not in vertex_map]
    if missing:
        raise InvalidInputError(f"Vertex map undefined on {missing[:5]}")
    entries = []
    for sigma in X.all_simplices():
        image = [vertex_map[v] for v in sigma.vertices]
        if len(set(image)) < len(image):
            continue
        tau = Simplex.of(image)
        if tau not in Y:
            raise InvalidInputError(f"Vertex map is not simplicial: {sigma} -> {tau} not in codomain")
        entries.append((Y.global_index(tau), X.global_index(sigma), _permutation_sign(image)))
    return ChainMapMatrix.checked(Matrix.from_entries(len(Y), len(X), entries, field), X, Y)


def identity_map(X: SimplicialComplex, field: Field = QQ) -> ChainMapMatrix:
    return ChainMapMatrix(Matrix.identity(len(X), field), X, X, True)


# ============================================================================
# PARAMETRIZZAZIONE
# ============================================================================

@dataclass
class MapParameterization:
    """
    Carta affine di [X, Y]: G = Σ b_m F_m + Σ c_n H_n.

    I generatori F_m sono rappresentanti di H_0(Hom); le omotopie H_n sono le colonne di
    d^H_1 (tutte, in modalità raw) oppure il sottoinsieme delle colonne pivot (reduced).
    """

    domain: SimplicialComplex
    codomain: SimplicialComplex
    field: Field
    generators: List[Matrix]
    generator_degrees: List[int]
    raw_homotopies: List[Matrix]
    reduced_indices: List[int]
    homotopy_mode: HomotopyMode = HomotopyMode.RAW
    b: List[Any] = field(default_factory=list)
    kunneth: int = 0
    hom_rank: Optional[int] = None
    basis_index: Optional[HomBasisIndex] = field(default=None, repr=False)
    _cache: Dict[str, Any] = field(default_factory=dict, init=False, repr=False, compare=False)

    def __post_init__(self):
        if not self.b:
            self.b = [self.field.one()] * len(self.generators)
        if len(self.b) != len(self.generators):
            raise InvalidInputError(f"b has {len(self.b)} entries for {len(self.generators)} generators")
        self.b = [self.field.convert(x) for x in self.b]
        self.homotopy_mode = HomotopyMode(self.homotopy_mode)

    @property
    def homotopies(self) -> List[Matrix]:
        if self.homotopy_mode == HomotopyMode.REDUCED:
            return [self.raw_homotopies[i] for i in self.reduced_indices]
        return list(self.raw_homotopies)

    @property
    def shape(self) -> Tuple[int, int]:
        return len(self.codomain), len(self.domain)

    def with_mode(self, mode: Union[HomotopyMode, str]) -> "MapParameterization":
        return replace(self, homotopy_mode=HomotopyMode(mode))

    def with_b(self, b: Sequence[Any]) -> "MapParameterization":
        return replace(self, b=list(b))

    def base_map(self) -> Matrix:
        """Σ b_m F_m"""
        rows, cols = self.shape
        return linear_combination(self.generators, self.b, rows, cols, self.field)

    # ------------------------------------------------------------------
    # Viste numpy per l'ottimizzazione
    # ------------------------------------------------------------------

    def base_array(self) -> np.ndarray:
        if "base" not in self._cache:
            self._cache["base"] = self.base_map().to_numpy(dtype=float)
        return self._cache["base"]

    def homotopy_operator(self) -> sparse.csr_matrix:
        """Operatore (J*I) x n_h le cui colonne sono le H_n appiattite per righe"""
        if "homotopies" not in self._cache:
            rows, cols = self.shape
            data, r_idx, c_idx = [], [], []
            for n, h in enumerate(self.homotopies):
                for r, c, value in h.items():
                    data.append(float(value))
                    r_idx.append(r * cols + c)
                    c_idx.append(n)
            self._cache["homotopies"] = sparse.csr_matrix(
                (data, (r_idx, c_idx)), shape=(rows * cols, len(self.homotopies))
            )
        return self._cache["homotopies"]

    def evaluate_array(self, c: np.ndarray) -> np.ndarray:
        """G in virgola mobile per coefficienti c"""
        c = np.asarray(c, dtype=float)
        if c.shape != (len(self.homotopies),):
            raise InvalidInputError(f"Expected {len(self.homotopies)} coefficients, got shape {c.shape}")
        if c.size == 0:
            return self.base_array().copy()
        return self.base_array() + (self.homotopy_operator() @ c).reshape(self.shape)


def kunneth_rank(X: SimplicialComplex, Y: SimplicialComplex, n: int = 0, field: Field = QQ) -> int:
    """Σ_k β^k(X)·β_{k+n}(Y) dalle omologie dei singoli complessi (su un campo β^k = β_k)"""
    bx = betti_numbers(X, field)
    by = betti_numbers(Y, field)
    return sum(bx[k] * by[k + n] for k in range(len(bx)) if 0 <= k + n < len(by))


def hom_h0_rank(X: SimplicialComplex, Y: SimplicialComplex, field: Field = QQ, d1_rank: Optional[int] = None) -> int:
    """|Hom_0| − rank d^H_0 − rank d^H_1 per eliminazione sul complesso Hom"""
    if d1_rank is None:
        d1_rank = row_reduce(hom_boundary(X, Y, 1, field), with_kernel=False).rank
    d0 = hom_boundary(X, Y, 0, field)
    return len(HomBasisIndex(X, Y, 0)) - row_reduce(d0, with_kernel=False).rank - d1_rank


def chain_map_generators(
    X: SimplicialComplex,
    Y: SimplicialComplex,
    field: Field = QQ,
    b_policy: BPolicy = BPolicy.ALL_ONES,
    b_dims: Optional[Iterable[int]] = None,
    homotopy_mode: HomotopyMode = HomotopyMode.RAW,
    rank_check_limit: Optional[int] = None,
) -> MapParameterization:
    """
    Costruisce la parametrizzazione di [X, Y].

    Generatori: per ogni dimensione k, i tensori φ⊗z con φ rappresentante di H^k(X) e z
    rappresentante di H_k(Y). Ogni generatore è verificato come ciclo di d^H_0 e il loro
    numero è confrontato con il rango di Künneth e, se |Hom_0| non supera il limite, con
    il rango di H_0(Hom) calcolato per eliminazione.

    Args:
        X: Complesso dominio
        Y: Complesso codominio
        field: Campo dei coefficienti
        b_policy: Politica di scelta dei b
        b_dims: Dimensioni omologiche mantenute con by_dimension
        homotopy_mode: Lista delle omotopie raw o reduced
        rank_check_limit: Massima |Hom_0| per il controllo di rango (default da settings)

    Returns:
        MapParameterization

    Raises:
        ConsistencyError: se un generatore non è una mappa di catene o i ranghi non coincidono
    """
    limit = settings.hom_rank_check_limit if rank_check_limit is None else rank_check_limit
    index0 = HomBasisIndex(X, Y, 0)
    rows, cols = len(Y), len(X)

    generators: List[Matrix] = []
    degrees: List[int] = []
    for k in range(min(X.dimension, Y.dimension) + 1):
        cocycles = cohomology_representatives(X, k, field)
        cycles = homology_representatives(Y, k, field)
        off_x, off_y = X.offset(k), Y.offset(k)
        for phi in cocycles:
            for z in cycles:
                entries = [
                    (off_y + t, off_x + s, field.mul(a, b))
                    for s, a in phi.entries
                    for t, b in z.entries
                ]
                generators.append(Matrix.from_entries(rows, cols, entries, field))
                degrees.append(k)

    for m, gen in enumerate(generators):
        if not is_chain_map(gen, X, Y):
            raise ConsistencyError(f"Generator {m} (degree {degrees[m]}) is not a cycle of d^H_0")

    d1 = hom_boundary(X, Y, 1, field)
    raw = [hom_vector_to_matrix(d1.column_dict(j), index0, X, Y, field) for j in range(d1.cols)]
    red1 = row_reduce(d1, with_kernel=False)

    expected = kunneth_rank(X, Y, 0, field)
    if len(generators) != expected:
        raise ConsistencyError(f"Generator count {len(generators)} differs from Kunneth rank {expected}")

    hom_rank = None
    if len(index0) <= limit:
        hom_rank = hom_h0_rank(X, Y, field, red1.rank)
        if hom_rank != expected:
            raise ConsistencyError(f"H_0(Hom) rank {hom_rank} differs from Kunneth rank {expected}")
    else:
        logger.warning(f"|Hom_0| = {len(index0)} above {limit}: H_0(Hom) rank check skipped")

    p = MapParameterization(
        domain=X,
        codomain=Y,
        field=field,
        generators=generators,
        generator_degrees=degrees,
        raw_homotopies=raw,
        reduced_indices=list(red1.pivots),
        homotopy_mode=homotopy_mode,
        kunneth=expected,
        hom_rank=hom_rank,
        basis_index=index0,
    )
    p = p.with_b(select_b_coefficients(p, b_policy, b_dims))
    logger.info(
        f"Parameterization {X.name or 'X'} -> {Y.name or 'Y'} over {field.name.value}: "
        f"{len(generators)} generators, {len(raw)} raw homotopies, {red1.rank} independent"
    )
    return p


def select_b_coefficients(
    p: MapParameterization,
    policy: Union[BPolicy, str] = BPolicy.ALL_ONES,
    dims: Optional[Iterable[int]] = None,
) -> List[Any]:
    """
    Sceglie i coefficienti b dei generatori.

    all_ones: tutti 1. by_dimension: 1 per i generatori di grado in dims, 0 altrimenti.
    """
    policy = BPolicy(policy)
    one, zero = p.field.one(), p.field.zero()
    if policy == BPolicy.ALL_ONES:
        return [one] * len(p.generators)
    if dims is None:
        raise InvalidInputError("by_dimension policy needs the list of kept dimensions")
    kept = set(dims)
    return [one if d in kept else zero for d in p.generator_degrees]


def evaluate_map(p: MapParameterization, c: Sequence[Any]) -> ChainMapMatrix:
    """
    G = Σ b_m F_m + Σ c_n H_n.

    Coefficienti in virgola mobile su una parametrizzazione esatta portano il calcolo
    sui reali.
    """
    homotopies = p.homotopies
    if len(c) != len(homotopies):
        raise InvalidInputError(f"Expected {len(homotopies)} coefficients, got {len(c)}")
    target = p.field
    if target.exact and any(isinstance(x, (float, np.floating)) for x in c):
        target = RR
    rows, cols = p.shape
    g = linear_combination(
        list(p.generators) + homotopies,
        [target.convert(x) for x in list(p.b) + list(c)],
        rows, cols, target,
    )
    return ChainMapMatrix(g, p.domain, p.codomain, True)


def induced_homology_map(g: ChainMapMatrix, dim: int) -> Matrix:
    """
    Matrice della mappa indotta H_dim(X) -> H_dim(Y) nelle basi dei rappresentanti.

    Raises:
        InvalidInputError: se g non è una mappa di catene
    """
    X, Y, f = g.domain, g.codomain, g.field
    if not is_chain_map(g.g, X, Y):
        raise InvalidInputError("induced_homology_map needs a chain map")
    reps_x = homology_representatives(X, dim, f)
    reps_y = homology_representatives(Y, dim, f)
    boundaries = row_reduce(boundary_matrix(Y, dim + 1, f), with_kernel=False).image_basis
    block = g.block(dim)
    columns = []
    for z in reps_x:
        coeffs = solve_membership(list(reps_y) + list(boundaries), block @ z)
        if coeffs is None:
            raise ConsistencyError(f"Image of a {dim}-cycle is not a cycle")
        columns.append({i: coeffs[i] for i in range(len(reps_y))})
    return Matrix.from_columns(len(reps_y), columns, f)


def coefficients_for_map(p: MapParameterization, g: ChainMapMatrix, exact: Optional[bool] = None) -> Optional[List[Any]]:
    """
    Coordinate omotopiche c di una mappa g della classe di p (G − Σ b F = Σ c H).

    In modalità esatta usa solve_membership; altrimenti minimi quadrati sparsi con controllo
    del residuo. Restituisce None se g non appartiene alla classe.
    """
    if exact is None:
        exact = p.field.exact and g.field.exact
    rows, cols = p.shape
    if g.shape != (rows, cols):
        raise InvalidInputError(f"Map shape {g.shape} does not match parameterization {(rows, cols)}")

    if exact:
        f = p.field
        size = rows * cols
        diff = g.g.convert(f) - p.base_map()
        target = SparseVector.from_dict(size, {r * cols + c: v for r, c, v in diff.items()}, f)
        basis = [
            SparseVector.from_dict(size, {r * cols + c: v for r, c, v in h.items()}, f)
            for h in p.homotopies
        ]
        return solve_membership(basis, target)

    target = (g.dense() - p.base_array()).ravel()
    if not p.homotopies:
        return [] if np.linalg.norm(target) <= settings.float_tolerance else None
    solution = lsqr(p.homotopy_operator(), target, atol=1e-14, btol=1e-14)[0]
    residual = np.linalg.norm(p.homotopy_operator() @ solution - target)
    if residual > 1e-6 * max(1.0, np.linalg.norm(target)):
        logger.debug(f"Map outside the class: least-squares residual {residual:.3e}")
        return None
    return [float(x) for x in solution]
