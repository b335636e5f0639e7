"""
Selezione di rappresentanti in [X, Y]

1. Penalità bisimpliciale ed enumerazione esaustiva su Z/2
2. Ricerche euristiche su Z/2 (simulated annealing, greedy, random walk)
3. Programma lineare ||G||_1 + ||G^T||_1, vertice casuale dell'insieme ammissibile, sparsità
4. Loss quadratica di Alexander-Whitney con gradiente analitico e discesa con backtracking
"""
import logging
import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import permutations
from typing import Any, Callable, Dict, List, Optional, Sequence, Tuple, Union

import numpy as np
from scipy import sparse

from chainmap.core.config import settings
from chainmap.core.errors import EnumerationLimitError, InvalidInputError, OptimizationError
from chainmap.core.models import ConstraintSense, HomotopyMode, LPStatus
from chainmap.services.algebra import GF2, QQ, Matrix
from chainmap.services.complexes import Simplex, SimplicialComplex
from chainmap.services.homcomplex import (
    ChainMapMatrix, MapParameterization, evaluate_map, is_chain_map,
)
from chainmap.services.lp_solver import LinearProgram, LPResult, solve_lp

logger = logging.getLogger(__name__)

MapLike = Union[ChainMapMatrix, Matrix, np.ndarray]


def _dense(g: MapLike) -> np.ndarray:
    if isinstance(g, ChainMapMatrix):
        return g.dense()
    if isinstance(g, Matrix):
        return g.to_numpy(dtype=float)
    return np.asarray(g, dtype=float)


# ============================================================================
# PENALITÀ BISIMPLICIALE
# ============================================================================

@dataclass(frozen=True)
class PenaltyReport:
    """max ||f(σ)||_0 + max ||f*(τ)||_0 con i conteggi per colonna (immagini) e per riga (preimmagini)"""
    value: int
    image_counts: List[int]
    preimage_counts: List[int]


def bisimplicial_penalty(g: MapLike) -> PenaltyReport:
    nonzero = np.abs(_dense(g)) > settings.float_tolerance
    images = nonzero.sum(axis=0).astype(int).tolist()
    preimages = nonzero.sum(axis=1).astype(int).tolist()
    return PenaltyReport(max(images, default=0) + max(preimages, default=0), images, preimages)


def penalty_value(g: np.ndarray) -> float:
    """Penalità su una matrice densa 0/1 (ciclo interno delle ricerche su Z/2)"""
    if g.size == 0:
        return 0.0
    return float(g.sum(axis=0).max() + g.sum(axis=1).max())


def _z2_arrays(p: MapParameterization) -> Tuple[np.ndarray, np.ndarray]:
    if p.field is not GF2:
        raise InvalidInputError(f"Z/2 search needs a z2 parameterization, got {p.field.name.value}")
    base = p.base_array().astype(np.uint8)
    rows, cols = p.shape
    stack = np.zeros((len(p.homotopies), rows, cols), dtype=np.uint8)
    for n, h in enumerate(p.homotopies):
        for r, c, _ in h.items():
            stack[n, r, c] = 1
    return base, stack


# ============================================================================
# ENUMERAZIONE SU Z/2
# ============================================================================

@dataclass
class EnumerationResult:
    total: int
    histogram: Dict[int, int]
    min_value: int
    minimizers: List[str]
    distinct_minimizing_maps: int


def _bitstring(k: int, n: int) -> str:
    return format(k, f"0{n}b") if n else ""


def _enumerate_chunk(base: np.ndarray, stack: np.ndarray, start: int, stop: int) -> Tuple[Dict[int, int], int, List[int], set]:
    n = stack.shape[0]
    g = base.copy()
    for i in range(n):
        # c_0 è il bit più significativo
        if (start >> (n - 1 - i)) & 1:
            g ^= stack[i]
    histogram: Dict[int, int] = {}
    best, minimizers, maps = None, [], set()
    for k in range(start, stop):
        if k > start:
            flipped = k ^ (k - 1)
            bit = 0
            while flipped:
                if flipped & 1:
                    g ^= stack[n - 1 - bit]
                flipped >>= 1
                bit += 1
        value = int(penalty_value(g))
        histogram[value] = histogram.get(value, 0) + 1
        if best is None or value < best:
            best, minimizers, maps = value, [k], {g.tobytes()}
        elif value == best:
            minimizers.append(k)
            maps.add(g.tobytes())
    return histogram, best, minimizers, maps


def enumerate_z2(p: MapParameterization, cap: Optional[int] = None, threads: Optional[int] = None) -> EnumerationResult:
    """
    Visita tutti i 2^n vettori di coefficienti in ordine di conteggio binario.

    I blocchi contigui sono distribuiti su thread; la fusione dei risultati coincide con
    l'esecuzione seriale.

    Raises:
        EnumerationLimitError: se il numero di omotopie supera il limite configurato
    """
    cap = settings.enumeration_cap if cap is None else cap
    base, stack = _z2_arrays(p)
    n = stack.shape[0]
    if n > cap:
        raise EnumerationLimitError(
            f"Enumeration over {n} homotopies means 2^{n} assignments, above the cap of {cap}; "
            f"use a heuristic search or raise CHAINMAP_ENUMERATION_CAP"
        )
    total = 1 << n
    workers = threads if threads is not None else (settings.threads or os.cpu_count() or 1)
    workers = max(1, min(workers, total // 4096 or 1))
    bounds = [total * w // workers for w in range(workers + 1)]
    logger.info(f"Enumerating {total} Z/2 coefficient vectors on {workers} thread(s)")

    with ThreadPoolExecutor(max_workers=workers) as pool:
        parts = list(pool.map(lambda w: _enumerate_chunk(base, stack, bounds[w], bounds[w + 1]), range(workers)))

    histogram: Dict[int, int] = {}
    for part_hist, _, _, _ in parts:
        for value, count in part_hist.items():
            histogram[value] = histogram.get(value, 0) + count
    min_value = min(histogram)
    minimizers: List[int] = []
    maps: set = set()
    for _, best, part_min, part_maps in parts:
        if best == min_value:
            minimizers.extend(part_min)
            maps |= part_maps

    result = EnumerationResult(
        total=total,
        histogram=dict(sorted(histogram.items())),
        min_value=min_value,
        minimizers=[_bitstring(k, n) for k in sorted(minimizers)],
        distinct_minimizing_maps=len(maps),
    )
    logger.info(f"Enumeration done: min penalty {min_value} reached by {len(minimizers)} vectors ({len(maps)} maps)")
    return result


# ============================================================================
# RICERCHE EURISTICHE SU Z/2
# ============================================================================

@dataclass
class SearchTrace:
    method: str
    iterations: int
    best_value: float
    best_coefficients: List[int]
    seed: int
    schedule: Dict[str, float] = field(default_factory=dict)
    history: List[Tuple[int, float]] = field(default_factory=list)


def _start_state(base: np.ndarray, stack: np.ndarray, start: Optional[Sequence[Any]]) -> Tuple[np.ndarray, np.ndarray]:
    n = stack.shape[0]
    if start is None:
        c = np.zeros(n, dtype=np.uint8)
    else:
        entries = [Fraction(x) for x in start]
        if any(x.denominator != 1 for x in entries):
            raise InvalidInputError(f"Z/2 start vector must be integral, got {[str(x) for x in entries]}")
        c = np.array([int(x) % 2 for x in entries], dtype=np.uint8)
    if c.shape != (n,):
        raise InvalidInputError(f"Start vector has {c.size} entries for {n} homotopies")
    g = base.copy()
    for i in np.nonzero(c)[0]:
        g ^= stack[i]
    return c, g


def simulated_annealing(
    p: MapParameterization,
    objective: Callable[[np.ndarray], float] = penalty_value,
    iterations: Optional[int] = None,
    t0: Optional[float] = None,
    cooling: Optional[float] = None,
    seed: int = 0,
    start: Optional[Sequence[int]] = None,
) -> SearchTrace:
    """Simulated annealing a flip singoli con raffreddamento geometrico T_k = T0 * cooling^k"""
    iterations = settings.anneal_iterations if iterations is None else iterations
    t0 = settings.anneal_t0 if t0 is None else t0
    cooling = settings.anneal_cooling if cooling is None else cooling
    base, stack = _z2_arrays(p)
    n = stack.shape[0]
    rng = np.random.default_rng(seed)
    c, g = _start_state(base, stack, start)
    value = objective(g)
    best_value, best_c = value, c.copy()
    history = [(0, best_value)]
    if n == 0:
        iterations = 0

    for k in range(iterations):
        temperature = t0 * cooling ** k
        i = int(rng.integers(n))
        g ^= stack[i]
        candidate = objective(g)
        delta = candidate - value
        if delta <= 0 or (temperature > 0 and rng.random() < math.exp(-delta / temperature)):
            c[i] ^= 1
            value = candidate
            if value < best_value:
                best_value, best_c = value, c.copy()
                history.append((k + 1, best_value))
        else:
            g ^= stack[i]

    logger.info(f"Annealing: best value {best_value} after {iterations} iterations (seed {seed})")
    return SearchTrace(
        method="anneal", iterations=iterations, best_value=best_value,
        best_coefficients=best_c.astype(int).tolist(), seed=seed,
        schedule={"t0": t0, "cooling": cooling}, history=history,
    )


def greedy_search(
    p: MapParameterization,
    objective: Callable[[np.ndarray], float] = penalty_value,
    seed: int = 0,
    restarts: Optional[int] = None,
    start: Optional[Sequence[int]] = None,
) -> SearchTrace:
    """
    Discesa greedy: a ogni passo applica il flip che riduce di più l'obiettivo (a parità
    l'indice minore) fino a un minimo locale. I riavvii partono da vettori casuali.
    """
    restarts = settings.greedy_restarts if restarts is None else restarts
    base, stack = _z2_arrays(p)
    n = stack.shape[0]
    rng = np.random.default_rng(seed)
    best_value, best_c = None, None
    history: List[Tuple[int, float]] = []
    moves = 0

    for attempt in range(restarts + 1):
        initial = start if attempt == 0 else rng.integers(0, 2, size=n)
        c, g = _start_state(base, stack, initial)
        value = objective(g)
        while n:
            scores = []
            for i in range(n):
                g ^= stack[i]
                scores.append(objective(g))
                g ^= stack[i]
            i = int(np.argmin(scores))
            if scores[i] >= value:
                break
            g ^= stack[i]
            c[i] ^= 1
            value = scores[i]
            moves += 1
        if best_value is None or value < best_value:
            best_value, best_c = value, c.copy()
            history.append((moves, best_value))

    logger.info(f"Greedy search: best value {best_value} after {moves} moves, {restarts} restarts")
    return SearchTrace(
        method="greedy", iterations=moves, best_value=best_value,
        best_coefficients=best_c.astype(int).tolist(), seed=seed,
        schedule={"restarts": float(restarts)}, history=history,
    )


def random_walk(
    p: MapParameterization,
    objective: Callable[[np.ndarray], float] = penalty_value,
    steps: Optional[int] = None,
    seed: int = 0,
    start: Optional[Sequence[int]] = None,
) -> SearchTrace:
    """Passeggiata casuale a flip singoli, tutti accettati; registra il migliore visitato"""
    steps = settings.random_walk_steps if steps is None else steps
    base, stack = _z2_arrays(p)
    n = stack.shape[0]
    rng = np.random.default_rng(seed)
    c, g = _start_state(base, stack, start)
    best_value, best_c = objective(g), c.copy()
    history = [(0, best_value)]
    if n == 0:
        steps = 0
    for k in range(steps):
        i = int(rng.integers(n))
        g ^= stack[i]
        c[i] ^= 1
        value = objective(g)
        if value < best_value:
            best_value, best_c = value, c.copy()
            history.append((k + 1, best_value))
    return SearchTrace(
        method="random-walk", iterations=steps, best_value=best_value,
        best_coefficients=best_c.astype(int).tolist(), seed=seed,
        schedule={"steps": float(steps)}, history=history,
    )


# ============================================================================
# PROGRAMMA LINEARE ||G||_1 + ||G^T||_1
# ============================================================================

@dataclass
class NormLP:
    """
    Programma lineare con variabili [c (libere), (p_e, q_e) per entrata del supporto, t1, t2].

    G_e = F_e + Σ H_n[e] c_n = p_e − q_e; t1 limita le somme per colonna di |G|, t2 quelle per riga.
    """
    lp: LinearProgram
    parameterization: MapParameterization
    support: List[Tuple[int, int]]

    @property
    def n_coefficients(self) -> int:
        return len(self.parameterization.homotopies)

    @property
    def t_indices(self) -> Tuple[int, int]:
        base = self.n_coefficients + 2 * len(self.support)
        return base, base + 1

    def coefficients(self, x: Sequence[Any]) -> List[Any]:
        return list(x[: self.n_coefficients])


def build_norm_lp(p: MapParameterization) -> NormLP:
    if p.field is GF2:
        raise InvalidInputError("The norm LP needs rational or real coefficients")
    f = p.field
    homotopies = p.homotopies
    base = p.base_map()
    entries: Dict[Tuple[int, int], Dict[int, Any]] = {}
    for r, c, _ in base.items():
        entries.setdefault((r, c), {})
    for n, h in enumerate(homotopies):
        for r, c, value in h.items():
            entries.setdefault((r, c), {})[n] = value
    support = sorted(entries)
    constant = {(r, c): v for r, c, v in base.items()}

    n_c = len(homotopies)
    t1, t2 = n_c + 2 * len(support), n_c + 2 * len(support) + 1
    n_vars = t2 + 1
    rows: List[Tuple[int, int, Any]] = []
    senses: List[ConstraintSense] = []
    rhs: List[Any] = []
    column_groups: Dict[int, List[int]] = {}
    row_groups: Dict[int, List[int]] = {}

    for e, (r, c) in enumerate(support):
        i = len(rhs)
        for n, value in entries[(r, c)].items():
            rows.append((i, n, value))
        rows.append((i, n_c + 2 * e, -1))
        rows.append((i, n_c + 2 * e + 1, 1))
        senses.append(ConstraintSense.EQ)
        rhs.append(f.neg(constant.get((r, c), f.zero())))
        column_groups.setdefault(c, []).append(e)
        row_groups.setdefault(r, []).append(e)

    for groups, t in ((column_groups, t1), (row_groups, t2)):
        for key in sorted(groups):
            i = len(rhs)
            for e in groups[key]:
                rows.append((i, n_c + 2 * e, 1))
                rows.append((i, n_c + 2 * e + 1, 1))
            rows.append((i, t, -1))
            senses.append(ConstraintSense.LE)
            rhs.append(f.zero())

    objective = [f.zero()] * n_vars
    objective[t1] = objective[t2] = f.one()
    bounds = [(None, None)] * n_c + [(0, None)] * (2 * len(support) + 2)
    labels = [f"c{n}" for n in range(n_c)]
    for r, c in support:
        labels += [f"p[{r},{c}]", f"q[{r},{c}]"]
    labels += ["t1", "t2"]

    lp = LinearProgram(
        objective=tuple(objective),
        constraints=Matrix.from_entries(len(rhs), n_vars, rows, f),
        senses=tuple(senses),
        rhs=tuple(rhs),
        bounds=tuple(bounds),
        labels=tuple(labels),
    )
    logger.debug(f"Norm LP: {lp.n_vars} variables, {lp.n_constraints} constraints")
    return NormLP(lp=lp, parameterization=p, support=support)


def norm_objective(g: MapLike) -> float:
    """||G||_1 + ||G^T||_1 (massima somma assoluta per colonna + per riga)"""
    a = np.abs(_dense(g))
    if a.size == 0:
        return 0.0
    return float(a.sum(axis=0).max() + a.sum(axis=1).max())


@dataclass
class NormSolution:
    result: LPResult
    coefficients: Optional[List[Any]]
    map: Optional[ChainMapMatrix]
    direction: Optional[List[float]] = None


def solve_norm_lp(p: MapParameterization, exact: bool = False, backend: Optional[str] = None) -> NormSolution:
    """Risolve il programma ||G||_1 + ||G^T||_1 e restituisce la mappa ottima"""
    if exact and not p.field.exact:
        raise InvalidInputError("Exact LP solving needs a rational parameterization")
    norm = build_norm_lp(p)
    result = solve_lp(norm.lp, exact=exact, backend=backend)
    if result.status != LPStatus.OPTIMAL:
        raise OptimizationError(f"Norm LP ended with unexpected status {result.status.value}")
    coefficients = norm.coefficients(result.x)
    logger.info(f"Norm LP optimum {float(result.value):.6f} via {result.backend}")
    return NormSolution(result, coefficients, evaluate_map(p, coefficients))


def random_vertex(
    p: MapParameterization,
    seed: int = 0,
    exact: bool = False,
    backend: Optional[str] = None,
    optimum: Optional[Any] = None,
) -> NormSolution:
    """
    Vertice casuale dell'insieme ammissibile (ottimi del programma della norma).

    Prima fase: valore ottimo. Seconda fase: con t1 + t2 <= ottimo, minimizza v·c per una
    direzione gaussiana v estratta dal seme. Lavora sulla base ridotta delle omotopie, dove
    c -> G è iniettiva e la faccia ottima è limitata.
    """
    reduced = p.with_mode(HomotopyMode.REDUCED)
    norm = build_norm_lp(reduced)
    if optimum is None:
        first = solve_lp(norm.lp, exact=exact, backend=backend)
        if first.status != LPStatus.OPTIMAL:
            raise OptimizationError(f"Norm LP ended with unexpected status {first.status.value}")
        optimum = first.value
    t1, t2 = norm.t_indices
    bound = optimum if exact else float(optimum) + settings.lp_optimum_slack
    face = norm.lp.with_constraint({t1: 1, t2: 1}, ConstraintSense.LE, bound)

    rng = np.random.default_rng(seed)
    direction = rng.standard_normal(norm.n_coefficients)
    objective = [0.0] * face.n_vars
    objective[: norm.n_coefficients] = direction.tolist()
    if exact:
        objective = [Fraction(v) for v in objective]
    result = solve_lp(face.with_objective(objective), exact=exact, backend=backend)
    if result.status != LPStatus.OPTIMAL:
        raise OptimizationError(f"Optimal-face LP ended with unexpected status {result.status.value}")
    coefficients = norm.coefficients(result.x)
    g = evaluate_map(reduced, coefficients)
    logger.debug(f"Random vertex (seed {seed}): objective {norm_objective(g):.6f}")
    return NormSolution(result, coefficients, g, direction.tolist())


def sparsity_score(g: MapLike) -> float:
    """Rapporto tra norma 2 e norma 1 delle entrate appiattite"""
    values = _dense(g).ravel()
    l1 = np.abs(values).sum()
    if l1 <= settings.float_tolerance:
        raise InvalidInputError("Sparsity score of the zero map is undefined")
    return float(np.linalg.norm(values) / l1)


@dataclass
class VertexSearchResult:
    best: NormSolution
    best_score: float
    scores: List[float]
    optimum: float


def sparse_vertex_search(
    p: MapParameterization,
    max_restarts: Optional[int] = None,
    target_score: Optional[float] = None,
    seed: int = 0,
    backend: Optional[str] = None,
) -> VertexSearchResult:
    """Ripete random_vertex tenendo il vertice con sparsity_score massimo; si ferma al raggiungimento del target"""
    max_restarts = settings.vertex_search_restarts if max_restarts is None else max_restarts
    first = solve_norm_lp(p.with_mode(HomotopyMode.REDUCED), backend=backend)
    optimum = first.result.value
    best, best_score, scores = None, -1.0, []
    for attempt in range(max(1, max_restarts)):
        candidate = random_vertex(p, seed=seed + attempt, backend=backend, optimum=optimum)
        score = sparsity_score(candidate.map)
        scores.append(score)
        if score > best_score:
            best, best_score = candidate, score
        if target_score is not None and score >= target_score:
            logger.info(f"Target sparsity {target_score} reached after {attempt + 1} vertices")
            break
    return VertexSearchResult(best=best, best_score=best_score, scores=scores, optimum=float(optimum))


# ============================================================================
# ALEXANDER-WHITNEY
# ============================================================================

def aw_diagonal(sigma: Simplex) -> List[Tuple[Simplex, Simplex]]:
    """Diagonale ordinata: coppie (σ|_{0..i}, σ|_{i..n})"""
    return [(sigma.front(i), sigma.back(i)) for i in range(sigma.dim + 1)]


def _sign_of(order: Sequence[int]) -> int:
    inversions = sum(1 for i in range(len(order)) for j in range(i + 1, len(order)) if order[i] > order[j])
    return -1 if inversions % 2 else 1


def symmetric_aw_diagonal(sigma: Simplex) -> List[Tuple[Fraction, Simplex, Simplex]]:
    """
    Diagonale mediata su tutti gli ordinamenti dei vertici, con i segni di orientazione.

    Commuta con ogni mappa simpliciale, anche quelle che invertono l'ordine dei vertici.
    """
    acc: Dict[Tuple[Simplex, Simplex], Fraction] = {}
    orderings = list(permutations(sigma.vertices))
    weight = Fraction(1, len(orderings))
    for order in orderings:
        s = _sign_of(order)
        for i in range(len(order)):
            front, back = order[: i + 1], order[i:]
            coef = s * _sign_of(front) * _sign_of(back)
            key = (Simplex.of(front), Simplex.of(back))
            acc[key] = acc.get(key, Fraction(0)) + coef * weight
    return [(coef, a, b) for (a, b), coef in sorted(acc.items(), key=lambda kv: (kv[0][0].vertices, kv[0][1].vertices)) if coef != 0]


def diagonal_matrix(k: SimplicialComplex, symmetric: Optional[bool] = None) -> sparse.csr_matrix:
    """Matrice sparsa |K| x |K|^2: la riga s è vec(Δ(s)) per righe, D[s, a·|K| + b] = coefficiente di a⊗b"""
    symmetric = settings.aw_symmetric if symmetric is None else symmetric
    size = len(k)
    rows, cols, data = [], [], []
    for s in k.all_simplices():
        i = k.global_index(s)
        terms = symmetric_aw_diagonal(s) if symmetric else [(1, a, b) for a, b in aw_diagonal(s)]
        for coef, a, b in terms:
            rows.append(i)
            cols.append(k.global_index(a) * size + k.global_index(b))
            data.append(float(coef))
    # i duplicati si sommano
    return sparse.csr_matrix((data, (rows, cols)), shape=(size, size * size))


def _compact(v: sparse.spmatrix, cols: int) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Blocco denso di V = v rimodellato cols x cols, ristretto a righe e colonne non nulle"""
    coo = v.tocoo()
    a, b = np.divmod(coo.row * v.shape[1] + coo.col, cols)
    ra, ia = np.unique(a, return_inverse=True)
    rb, ib = np.unique(b, return_inverse=True)
    block = np.zeros((ra.size, rb.size))
    np.add.at(block, (ia, ib), coo.data)
    return ra, rb, block


def kron_apply(F: Union[Matrix, np.ndarray], v: Union[Sequence[Any], sparse.spmatrix]) -> np.ndarray:
    """
    (F⊗F) v calcolato come F V F^T con V = v rimodellato per righe, senza materializzare F⊗F.

    Matrici esatte restano esatte (array di oggetti). Con v sparso (float) il prodotto usa solo
    le colonne di F che toccano i non nulli di V.
    """
    if isinstance(F, Matrix):
        F = F.to_numpy(dtype=object if F.field.exact else float)
    F = np.asarray(F)
    rows, cols = F.shape
    if sparse.issparse(v):
        if v.shape[0] * v.shape[1] != cols * cols:
            raise InvalidInputError(f"kron_apply expects a vector of length {cols * cols}, got shape {v.shape}")
        ra, rb, block = _compact(v, cols)
        return (F[:, ra] @ block @ F[:, rb].T).reshape(rows * rows)
    v = np.asarray(v, dtype=F.dtype if F.dtype == object else None)
    if v.shape != (cols * cols,):
        raise InvalidInputError(f"kron_apply expects a vector of length {cols * cols}, got shape {v.shape}")
    V = v.reshape(cols, cols)
    return F.dot(V).dot(F.T).reshape(rows * rows)


class DiagonalOperator:
    """Diagonale di un complesso: matrice sparsa, sua trasposta e blocchi compatti per simplesso"""

    def __init__(self, k: SimplicialComplex, symmetric: Optional[bool] = None):
        self.size = len(k)
        self.matrix = diagonal_matrix(k, symmetric)
        self.transposed = self.matrix.T.tocsr()
        self.blocks = [_compact(self.matrix.getrow(s), self.size) for s in range(self.size)]


class AWProblem:
    """
    Loss L(G) + L(G^T) e gradiente rispetto a G per una coppia di complessi.

    Il residuo R_s = G Δ(s) G^T − Σ_τ G[τ, s] Δ(τ) è accumulato un simplesso s alla volta:
    la memoria resta O(|Y|^2) oltre alle diagonali sparse.
    """

    def __init__(self, X: SimplicialComplex, Y: SimplicialComplex, symmetric: Optional[bool] = None):
        self.dx = DiagonalOperator(X, symmetric)
        self.dy = DiagonalOperator(Y, symmetric)

    @staticmethod
    def _one_sided(G: np.ndarray, dx: DiagonalOperator, dy: DiagonalOperator, with_grad: bool = True) -> Tuple[float, Optional[np.ndarray]]:
        rows = G.shape[0]
        loss = 0.0
        grad = np.zeros(G.shape) if with_grad else None
        for s, (a, b, block) in enumerate(dx.blocks):
            residual = kron_apply(G, dx.matrix.getrow(s)) - dy.transposed @ G[:, s]
            loss += float(residual @ residual)
            if not with_grad:
                continue
            R = residual.reshape(rows, rows)
            # d/dG ||R_s||^2 = 2 (R G Δ^T + R^T G Δ) − 2 <R_s, Δ(τ)> sulla colonna s
            grad[:, a] += R @ G[:, b] @ block.T
            grad[:, b] += R.T @ G[:, a] @ block
            grad[:, s] -= dy.matrix @ residual
        return loss, None if grad is None else 2 * grad

    def loss(self, G: np.ndarray) -> float:
        return self._one_sided(G, self.dx, self.dy, with_grad=False)[0]

    def value_and_grad(self, G: np.ndarray) -> Tuple[float, np.ndarray]:
        forward, g_forward = self._one_sided(G, self.dx, self.dy)
        backward, g_backward = self._one_sided(G.T, self.dy, self.dx)
        return forward + backward, g_forward + g_backward.T


def aw_loss(g: ChainMapMatrix, symmetric: Optional[bool] = None) -> float:
    """Σ_σ ||(g⊗g)Δ(σ) − Δ(g(σ))||²"""
    return AWProblem(g.domain, g.codomain, symmetric).loss(g.dense())


def descend(
    fun: Callable[[np.ndarray], Tuple[float, np.ndarray]],
    x0: np.ndarray,
    max_iter: Optional[int] = None,
    tolerance: Optional[float] = None,
    admissible: Optional[Callable[[np.ndarray, np.ndarray], bool]] = None,
) -> Tuple[np.ndarray, float, List[float]]:
    """
    Discesa del gradiente con ricerca lineare di Armijo a backtracking.

    Args:
        fun: Restituisce (valore, gradiente)
        x0: Punto iniziale
        max_iter: Massimo numero di passi (default da settings)
        tolerance: Soglia su ||grad||^2 (default da settings)
        admissible: Predicato (x, x_nuovo) che può rifiutare un passo

    Returns:
        (punto finale, valore, traccia dei valori)

    Raises:
        OptimizationError: se la loss non è finita
    """
    max_iter = settings.descent_max_iter if max_iter is None else max_iter
    tolerance = settings.descent_tolerance if tolerance is None else tolerance
    x = np.asarray(x0, dtype=float).copy()
    value, grad = fun(x)
    if not np.isfinite(value):
        raise OptimizationError(f"Non-finite loss {value} at the starting point", iterate=x.tolist())
    trace = [value]
    for _ in range(max_iter):
        slope = float(grad @ grad)
        if slope <= tolerance:
            break
        step = settings.initial_step
        accepted = False
        while step > 1e-16:
            candidate = x - step * grad
            if admissible is None or admissible(x, candidate):
                new_value, new_grad = fun(candidate)
                if not np.isfinite(new_value):
                    raise OptimizationError(f"Non-finite loss {new_value} during line search", iterate=candidate.tolist())
                if new_value <= value - settings.armijo * step * slope:
                    accepted = True
                    break
            step *= settings.backtrack
        if not accepted:
            break
        x, value, grad = candidate, new_value, new_grad
        trace.append(value)
    return x, value, trace


@dataclass
class AWResult:
    coefficients: List[float]
    loss: float
    initial_loss: float
    trace: List[float]
    restarts: int


def aw_objective(p: MapParameterization, symmetric: Optional[bool] = None) -> Callable[[np.ndarray], Tuple[float, np.ndarray]]:
    """L_AW(G) + L_AW(G^T) e gradiente rispetto alle coordinate omotopiche c, con G = Σ b F + Σ c H"""
    problem = AWProblem(p.domain, p.codomain, symmetric)
    operator = p.homotopy_operator()
    n = len(p.homotopies)

    def fun(c: np.ndarray) -> Tuple[float, np.ndarray]:
        value, grad = problem.value_and_grad(p.evaluate_array(c))
        return value, operator.T @ grad.ravel() if n else np.zeros(0)

    return fun


def minimize_aw(
    p: MapParameterization,
    start: Optional[Sequence[float]] = None,
    seed: int = 0,
    restarts: Optional[int] = None,
    symmetric: Optional[bool] = None,
    max_iter: Optional[int] = None,
) -> AWResult:
    """
    Minimizza L_AW(G) + L_AW(G^T) su c con G = Σ b F + Σ c H.

    Il primo tentativo parte da start (default c = 0); i riavvii perturbano start con rumore
    gaussiano di scala aw_restart_scale. Restituisce il migliore.
    """
    if p.field is GF2:
        raise InvalidInputError("Alexander-Whitney optimization needs real or rational coefficients")
    restarts = settings.aw_restarts if restarts is None else restarts
    fun = aw_objective(p, symmetric)
    n = len(p.homotopies)
    x0 = np.zeros(n) if start is None else np.asarray(start, dtype=float)
    if x0.shape != (n,):
        raise InvalidInputError(f"Start vector has {x0.size} entries for {n} homotopies")

    initial_loss = fun(x0)[0]
    rng = np.random.default_rng(seed)
    best: Optional[Tuple[np.ndarray, float, List[float]]] = None
    for attempt in range(restarts + 1):
        begin = x0 if attempt == 0 else x0 + settings.aw_restart_scale * rng.standard_normal(n)
        x, value, trace = descend(fun, begin, max_iter=max_iter)
        logger.debug(f"AW restart {attempt}: loss {value:.6e} after {len(trace) - 1} steps")
        if best is None or value < best[1]:
            best = (x, value, trace)
    logger.info(f"AW optimization: loss {initial_loss:.6e} -> {best[1]:.6e}")
    return AWResult(best[0].tolist(), best[1], initial_loss, best[2], restarts)


def round_map(g: ChainMapMatrix, threshold: Optional[float] = None) -> ChainMapMatrix:
    """
    Arrotondamento esplicito a matrice intera: |x| < threshold -> 0, altrimenti l'intero non
    nullo più vicino. Il flag di mappa di catene è ricalcolato.
    """
    threshold = settings.round_threshold if threshold is None else threshold
    entries = []
    for r, c, value in g.g.items():
        x = float(value)
        if abs(x) < threshold:
            continue
        entries.append((r, c, int(math.copysign(max(1, round(abs(x))), x))))
    rounded = Matrix.from_entries(g.g.rows, g.g.cols, entries, QQ)
    return ChainMapMatrix(rounded, g.domain, g.codomain, is_chain_map(rounded, g.domain, g.codomain))
