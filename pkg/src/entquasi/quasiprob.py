"""Gram inversion of SE solutions into entanglement quasiprobabilities.

Given SE solutions |a_k, a_k> with SE values g_k, the weights p solve

    G p = g,   G[k, l] = |<a_k, a_k | a_l, a_l>|^2 = |<a_k|a_l>|^4,

and rho = sum_k p_k |a_k, a_k><a_k, a_k|.  A negative weight certifies
entanglement.  A partial-transpose check is provided as an independent test.

G is the Hilbert-Schmidt Gram matrix of the projectors, so every null vector
y of G satisfies sum_k y_k |a_k, a_k><a_k, a_k| = 0.  When G is singular all
exact solutions therefore describe the same operator with the same total
weight, and differ only in how that weight is spread over the projectors.
The default selection removes as much negativity as the null space allows,
so that negativity is never an artifact of the linear-algebra convention.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import linprog, minimize

from .errors import UndefinedErrorMetric
from .solver import DEFAULT_MAX_DIM, enumerate_solutions, max_se_value

RANK_CUTOFF = 1e-10
EXACT_TOL = 1e-9
PPT_TOL = 1e-12
DUPLICATE_OVERLAP = 1 - 1e-12
SELECTIONS = ("least_negative", "min_norm")


@dataclass(frozen=True, eq=False)
class GramSystem:
    G: np.ndarray
    g_vec: np.ndarray

    @property
    def K(self):
        return self.g_vec.shape[0]


@dataclass(frozen=True, eq=False)
class QuasiprobDistribution:
    weights: np.ndarray
    residual: float
    rank_used: int
    exact: bool
    selection: str = "min_norm"

    @property
    def min_weight(self):
        return float(self.weights.min())

    @property
    def negative_indices(self):
        return [int(i) for i in np.flatnonzero(self.weights < 0)]

    @property
    def negativity(self):
        """Total negative mass, sum of max(-p_k, 0)."""
        return float(np.maximum(-self.weights, 0).sum())

    @property
    def sum_weights(self):
        return float(self.weights.sum())

    @property
    def threshold(self):
        """Negativity needed before a weight counts as evidence of entanglement."""
        return max(EXACT_TOL, 10 * self.residual)

    @property
    def entangled(self):
        return self.min_weight < -self.threshold


@dataclass(frozen=True)
class ReconstructionReport:
    epsilon: float
    trace_original: float
    trace_reconstructed: float
    ls_residual: float
    rank_used: int
    off_support_max: float


def build_gram(solutions):
    if not solutions:
        raise ValueError("no solutions given")
    dims = {s.dim for s in solutions}
    if len(dims) != 1:
        raise ValueError(f"solutions have mixed dimensions {sorted(dims)}")
    A = np.array([s.amplitudes for s in solutions])
    overlaps = np.abs(A.conj() @ A.T) ** 2
    G = overlaps**2
    G = 0.5 * (G + G.T)
    np.fill_diagonal(G, 1.0)
    g_vec = np.array([s.g for s in solutions])
    return GramSystem(G, g_vec)


def _least_negative(p0, null):
    """Exact solution p0 + null @ y with the least total negative weight.

    Stage one is a linear program for the optimal negativity; stage two picks
    the smallest-norm point among the optima so the answer does not depend on
    the order of the solutions.
    """
    K, r = null.shape
    cost = np.r_[np.zeros(r), np.ones(K)]
    # t_k >= -p_k, t_k >= 0
    A_ub = np.hstack([-null, -np.eye(K)])
    bounds = [(None, None)] * r + [(0, None)] * K
    lp = linprog(cost, A_ub=A_ub, b_ub=p0, bounds=bounds, method="highs")
    if lp.status != 0:
        return p0
    best = lp.x
    budget = lp.fun * (1 + 1e-9) + 1e-15
    qp = minimize(
        lambda x: x[:r] @ x[:r],
        lp.x,
        jac=lambda x: np.r_[2 * x[:r], np.zeros(K)],
        bounds=bounds,
        constraints=[
            {"type": "ineq", "fun": lambda x: budget - x[r:].sum(), "jac": lambda x: -cost},
            {"type": "ineq", "fun": lambda x: p0 + null @ x[:r] + x[r:], "jac": lambda x: -A_ub},
        ],
        method="SLSQP",
        options={"ftol": 1e-15, "maxiter": 500},
    )
    if np.all(np.isfinite(qp.x)):
        cand = p0 + null @ qp.x[:r]
        if np.maximum(-cand, 0).sum() <= budget:
            best = qp.x
    return p0 + null @ best[:r]


def solve_quasiprob(system, rank_cutoff=RANK_CUTOFF, exact_tol=EXACT_TOL, selection="least_negative"):
    """Solve G p = g for the quasiprobability weights.

    The minimum-norm least-squares solution is computed first, discarding
    singular values below ``rank_cutoff`` times the largest.  With
    ``selection="least_negative"`` (default) and a rank-deficient G, the
    null space of G is then used to remove avoidable negativity.
    """
    if system.K == 0:
        raise ValueError("empty Gram system")
    if selection not in SELECTIONS:
        raise ValueError(f"selection must be one of {SELECTIONS}, got {selection!r}")
    p, _, rank, _ = np.linalg.lstsq(system.G, system.g_vec, rcond=rank_cutoff)
    if selection == "least_negative" and rank < system.K and p.min() < 0:
        _, sv, vt = np.linalg.svd(system.G)
        null = vt[sv <= rank_cutoff * sv[0]].T
        p = _least_negative(p, null)
    residual = float(np.max(np.abs(system.G @ p - system.g_vec)))
    return QuasiprobDistribution(p, residual, int(rank), residual <= exact_tol, selection)


def reconstruct_state(solutions, weights):
    """sum_k p_k |a_k, a_k><a_k, a_k| on the d^2 product basis.

    Real when the imaginary parts cancel (they do for +- root pairs with
    equal weights); complex otherwise.
    """
    weights = np.asarray(weights, dtype=float)
    if len(solutions) != weights.shape[0]:
        raise ValueError(f"{len(solutions)} solutions but {weights.shape[0]} weights")
    if not solutions:
        raise ValueError("no solutions given")
    V = np.array([s.product_vector() for s in solutions])
    rec = (V.T * weights) @ V.conj()
    if np.max(np.abs(rec.imag), initial=0.0) <= 1e-12 * max(1.0, np.max(np.abs(rec.real))):
        return rec.real.copy()
    return rec


def reconstruction_error(original, reconstructed, ls_residual=0.0, rank_used=0):
    """Relative Hilbert-Schmidt distance [Tr(rec - rho)^2 / Tr rho^2]^(1/2)."""
    rho = original.embed()
    rec = np.asarray(reconstructed)
    if rec.shape != rho.shape:
        raise ValueError(f"operator shape {rec.shape} does not match {rho.shape}")
    norm2 = float(np.sum(rho * rho))
    if norm2 == 0:
        raise UndefinedErrorMetric("original operator is zero")
    diff = rec - rho
    eps = float(np.sqrt(np.sum(np.abs(diff) ** 2) / norm2))
    d = original.dim
    off = np.ones(rho.shape, dtype=bool)
    diag_idx = np.arange(d) * (d + 1)
    off[np.ix_(diag_idx, diag_idx)] = False
    return ReconstructionReport(
        epsilon=eps,
        trace_original=original.trace,
        trace_reconstructed=float(np.real(np.trace(rec))),
        ls_residual=float(ls_residual),
        rank_used=int(rank_used),
        off_support_max=float(np.max(np.abs(rec[off]), initial=0.0)),
    )


def partial_transpose_b(op, dim):
    """Swap the B indices: <m,n|X^T_B|p,q> = <m,q|X|p,n>."""
    return op.reshape(dim, dim, dim, dim).transpose(0, 3, 2, 1).reshape(dim * dim, dim * dim)


def ppt_check(state):
    pt = partial_transpose_b(state.embed(), state.dim)
    lam = float(np.linalg.eigvalsh(pt)[0])
    return {"min_eigenvalue": lam, "entangled": lam < -PPT_TOL}


def duplicate_pairs(system):
    """Index pairs (k, l), k < l, whose product vectors coincide as projectors."""
    k, l = np.nonzero(np.triu(system.G, 1) > DUPLICATE_OVERLAP)
    return [(int(i), int(j)) for i, j in zip(k, l)]


@dataclass(frozen=True, eq=False)
class AnalysisReport:
    state: object
    solutions: list
    gram: GramSystem
    quasiprob: QuasiprobDistribution
    reconstruction: ReconstructionReport
    ppt: dict
    diagnostics: list = field(default_factory=list)
    duplicates: list = field(default_factory=list)

    @property
    def weights(self):
        return self.quasiprob.weights

    @property
    def max_se_value(self):
        return max_se_value(self.solutions)

    @property
    def inexact(self):
        """Gram residual too large, or the weights fail to rebuild the state."""
        return not self.quasiprob.exact or self.reconstruction.epsilon > EXACT_TOL


def analyze(state, max_dim=DEFAULT_MAX_DIM, rank_cutoff=RANK_CUTOFF, exact_tol=EXACT_TOL,
            selection="least_negative"):
    diagnostics = []
    solutions = enumerate_solutions(state, max_dim=max_dim, diagnostics=diagnostics)
    gram = build_gram(solutions)
    qp = solve_quasiprob(gram, rank_cutoff=rank_cutoff, exact_tol=exact_tol, selection=selection)
    rec = reconstruct_state(solutions, qp.weights)
    report = reconstruction_error(state, rec, qp.residual, qp.rank_used)
    return AnalysisReport(
        state=state,
        solutions=solutions,
        gram=gram,
        quasiprob=qp,
        reconstruction=report,
        ppt=ppt_check(state),
        diagnostics=diagnostics,
        duplicates=duplicate_pairs(gram),
    )
