"""Similarity-preserving 2-D layout.

Positions minimize the weighted sum of squared Euclidean distances

    V(x_1..x_n) = sum_{i<j} s_ij * ||x_i - x_j||^2

subject to the constraint that the mean pairwise distance equals 1. The
constrained problem is handled in two steps: minimize the unconstrained
objective

    U(x) = sum_{i<j} s_ij * ||x_i - x_j||^2  -  sum_{i<j} ||x_i - x_j||

by iterative majorization, then rescale uniformly so the mean pairwise
distance is 1. Each majorization step solves a linear system against the
similarity Laplacian, which guarantees the unconstrained objective never
increases; a numerical safeguard discards any step that would break that
monotonicity and stops instead.

Multiple seeded random restarts are run and the result with the lowest
constrained stress is returned; translation, PCA rotation, and the two
median-based reflections make the final orientation canonical.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from scipy.linalg import cho_factor, cho_solve

from .errors import DegenerateSimilarity, TooFewNodes
from .similarity import SimilarityMatrix

__all__ = [
    "Layout",
    "LayoutConfig",
    "stress",
    "mean_pairwise_distance",
    "optimize_layout",
    "canonical_transform",
]


@dataclass(frozen=True)
class LayoutConfig:
    seed: int = 42
    restarts: int = 10
    max_iterations: int = 1000
    rel_tolerance: float = 1e-6
    jitter_epsilon: float = 1e-9

    def __post_init__(self):
        if self.restarts < 1:
            raise ValueError("restarts must be >= 1")
        if self.max_iterations < 1:
            raise ValueError("max_iterations must be >= 1")
        if self.rel_tolerance <= 0 or self.jitter_epsilon <= 0:
            raise ValueError("tolerances must be positive")


@dataclass(frozen=True)
class Layout:
    """Optimized positions plus run metadata.

    ``objective_traces`` holds the per-restart unconstrained objective
    after every accepted step (audit trail for descent monotonicity);
    ``restart_stresses`` the constrained stress each restart achieved.
    """

    positions: np.ndarray
    stress: float
    converged: bool
    iterations: int
    seed: int
    objective_traces: tuple[tuple[float, ...], ...] = field(default=(), repr=False)
    restart_stresses: tuple[float, ...] = field(default=(), repr=False)


def stress(positions, sims: SimilarityMatrix) -> float:
    """Weighted sum of squared distances over the sparse similarity entries."""
    pos = np.asarray(positions, dtype=float)
    total = 0.0
    for (i, j), s in sorted(sims.entries.items()):
        diff = pos[i] - pos[j]
        total += s * (diff[0] * diff[0] + diff[1] * diff[1])
    return total


def mean_pairwise_distance(positions) -> float:
    pos = np.asarray(positions, dtype=float)
    n = pos.shape[0]
    if n < 2:
        raise TooFewNodes("mean pairwise distance needs at least 2 points")
    diff = pos[:, None, :] - pos[None, :, :]
    dist = np.sqrt((diff * diff).sum(axis=-1))
    iu = np.triu_indices(n, k=1)
    return float(dist[iu].sum() * (2.0 / (n * (n - 1))))


def _check_connected(sims: SimilarityMatrix) -> None:
    parent = list(range(sims.n))

    def find(a):
        while parent[a] != a:
            parent[a] = parent[parent[a]]
            a = parent[a]
        return a

    for (i, j), s in sims.entries.items():
        if s > 0:
            parent[find(i)] = find(j)
    roots = {find(i) for i in range(sims.n)}
    if len(roots) > 1:
        raise ValueError("similarity graph is disconnected; restrict to one component first")


def _dense_similarity(sims: SimilarityMatrix) -> np.ndarray:
    S = np.zeros((sims.n, sims.n))
    for (i, j), s in sims.entries.items():
        S[i, j] = s
        S[j, i] = s
    return S


def _distances(pos: np.ndarray) -> np.ndarray:
    diff = pos[:, None, :] - pos[None, :, :]
    return np.sqrt((diff * diff).sum(axis=-1))


def _objective_at(S: np.ndarray, dist: np.ndarray) -> float:
    attraction = 0.5 * float((S * dist * dist).sum())
    repulsion = 0.5 * float(dist.sum())
    return attraction - repulsion


def _majorization_run(
    S: np.ndarray, factor, rng: np.random.Generator, config: LayoutConfig
) -> tuple[np.ndarray, list[float], bool]:
    n = S.shape[0]
    pos = rng.uniform(-0.5, 0.5, size=(n, 2))

    # Coincident starting points would zero out their repulsive pull.
    for i in range(n):
        for j in range(i + 1, n):
            if pos[i, 0] == pos[j, 0] and pos[i, 1] == pos[j, 1]:
                pos[j] += config.jitter_epsilon * rng.standard_normal(2)

    dist = _distances(pos)
    trace = [_objective_at(S, dist)]
    converged = False
    for _ in range(config.max_iterations):
        with np.errstate(divide="ignore"):
            inv = np.where(dist > 0.0, 1.0 / dist, 0.0)
        pull = pos * inv.sum(axis=1)[:, None] - inv @ pos
        candidate = cho_solve(factor, 0.5 * pull)
        candidate_dist = _distances(candidate)
        value = _objective_at(S, candidate_dist)
        if value > trace[-1]:
            # Rounding noise at the optimum; keep the last monotone state.
            converged = True
            break
        improved = trace[-1] - value
        pos = candidate
        dist = candidate_dist
        trace.append(value)
        if improved <= config.rel_tolerance * abs(trace[-1]):
            converged = True
            break
    return pos, trace, converged


def optimize_layout(sims: SimilarityMatrix, config: LayoutConfig = LayoutConfig()) -> Layout:
    """Best-of-restarts descent on the unconstrained objective, then rescale.

    Deterministic for fixed (sims, config): restart r uses the generator
    seeded with (config.seed, r), and ties in final stress go to the lowest
    restart index.
    """
    n = sims.n
    if n < 2:
        raise TooFewNodes("layout needs at least 2 nodes")
    if sims.max_entry() <= 0.0:
        raise DegenerateSimilarity("all similarities are zero")
    _check_connected(sims)

    S = _dense_similarity(sims)
    laplacian = np.diag(S.sum(axis=1)) - S
    # Rank-one shift removes the translation nullspace; scaling the shift
    # with the Laplacian keeps the solve exactly scale-equivariant.
    shift = np.trace(laplacian) / (n * n)
    factor = cho_factor(laplacian + shift * np.ones((n, n)))

    best_positions = None
    best_stress = np.inf
    best_trace: list[float] = []
    best_converged = False
    traces: list[tuple[float, ...]] = []
    stresses: list[float] = []

    for restart in range(config.restarts):
        rng = np.random.default_rng([config.seed, restart])
        pos, trace, converged = _majorization_run(S, factor, rng, config)
        if n == 2:
            # Eq. 5 on a single pair forces unit distance; return the exact
            # canonical geometry rather than a rounded rescale.
            scaled = np.array([[-0.5, 0.0], [0.5, 0.0]])
        else:
            scaled = pos / mean_pairwise_distance(pos)
        run_stress = stress(scaled, sims)
        traces.append(tuple(trace))
        stresses.append(run_stress)
        if run_stress < best_stress:
            best_positions = scaled
            best_stress = run_stress
            best_trace = trace
            best_converged = converged

    return Layout(
        positions=best_positions,
        stress=best_stress,
        converged=best_converged,
        iterations=len(best_trace) - 1,
        seed=config.seed,
        objective_traces=tuple(traces),
        restart_stresses=tuple(stresses),
    )


def canonical_transform(positions) -> np.ndarray:
    """Center at the origin, rotate to principal axes, reflect by medians.

    Rigid motions and reflections only, so all pairwise distances are
    preserved. After the transform the horizontal variance dominates and
    both coordinate medians are <= 0.
    """
    pos = np.array(positions, dtype=float)
    if pos.ndim != 2 or pos.shape[1] != 2:
        raise ValueError("positions must be an (n, 2) array")
    n = pos.shape[0]
    if n == 0:
        return pos

    pos = pos - pos.mean(axis=0)
    cov = pos.T @ pos / n
    eigenvalues, eigenvectors = np.linalg.eigh(cov)
    pos = pos @ eigenvectors[:, ::-1]

    # eigh ordering can be blurred by rounding when the variances tie;
    # a quarter-turn (exact coordinate swap) restores the guarantee.
    if np.var(pos[:, 0]) < np.var(pos[:, 1]):
        pos = np.column_stack([pos[:, 1], -pos[:, 0]])

    if np.median(pos[:, 0]) > 0:
        pos[:, 0] = -pos[:, 0]
    if np.median(pos[:, 1]) > 0:
        pos[:, 1] = -pos[:, 1]
    return pos


def write_iteration_log(layout: Layout, stream) -> None:
    """Dump per-restart objective traces as CSV for descent audits."""
    stream.write("restart,iteration,objective\n")
    for restart, trace in enumerate(layout.objective_traces):
        for iteration, value in enumerate(trace):
            stream.write(f"{restart},{iteration},{value!r}\n")
