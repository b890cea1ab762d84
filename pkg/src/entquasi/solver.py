"""Principal solutions of the separability eigenvalue equations

    rho_b |a> = g |a>,    rho_a |b> = g |b>

for coefficient matrices of the |m,m><n,n| family, restricted to symmetric
product vectors |a, a> and real sign vectors.

For a support set S (the Fock indices where ``a`` is non-zero) and a sign
vector e in {+1, -1}^|S|, the products c_m = a_m^2 solve rho_S c = g e.
Solving rho_S c_hat = e and rescaling by alpha = 1 / sum|c_hat| gives the
normalized amplitudes a_m = +-sqrt(alpha c_hat_m) and the SE value g = alpha.
"""

from __future__ import annotations

import itertools
import logging
from dataclasses import dataclass

import numpy as np
import scipy.linalg

from .errors import ConsistencyError, ResourceLimitError

log = logging.getLogger(__name__)

DEFAULT_MAX_DIM = 8
COND_LIMIT = 1e12
RESIDUAL_LIMIT = 1e-9


@dataclass(frozen=True, eq=False)
class SESolution:
    support: tuple
    e: tuple
    root_signs: tuple
    amplitudes: np.ndarray
    g: float
    residual: float
    c_raw: np.ndarray

    @property
    def dim(self):
        return self.amplitudes.shape[0]

    def product_vector(self):
        """|a, a> on the d^2 product basis (index m * d + n)."""
        return np.kron(self.amplitudes, self.amplitudes)


@dataclass(frozen=True)
class Diagnostic:
    support: tuple
    e: tuple
    reason: str
    detail: str = ""


def max_solution_count(dim):
    """(5^d - 1) / 4: every support of size N contributes 4^(N-1) solutions."""
    return (5**dim - 1) // 4


def supports(dim):
    """All non-empty supports ordered by size, then lexicographically."""
    for n in range(1, dim + 1):
        yield from itertools.combinations(range(dim), n)


def sign_vectors(n):
    """Canonical sign vectors of length n (leading +1), with +1 before -1."""
    for tail in itertools.product((1, -1), repeat=n - 1):
        yield (1,) + tail


def reduced_operator_a(state, a):
    """Reduced operator rho_a with entries conj(a_m) rho[m, n] a_n."""
    rho = getattr(state, "entries", state)
    a = np.asarray(a, dtype=complex)
    if a.shape != (rho.shape[0],):
        raise ValueError(f"vector of length {a.shape} does not match dimension {rho.shape[0]}")
    return a.conj()[:, None] * rho * a[None, :]


def se_residual(state, a, g):
    """max over both SE equations of ||rho_b a - g a|| with b = a."""
    a = np.asarray(a, dtype=complex)
    ra = reduced_operator_a(state, a)
    # with b = a the two equations coincide
    return float(np.linalg.norm(ra @ a - g * a))


def expectation(state, a):
    """<a, a| rho |a, a> = sum conj(a_m^2) rho[m, n] a_n^2."""
    rho = getattr(state, "entries", state)
    c = np.asarray(a, dtype=complex) ** 2
    return float(np.real(c.conj() @ rho @ c))


def solve_support(state, support, e, diagnostics=None):
    """All principal SE solutions with the given support and sign vector.

    Returns an empty list when the block is numerically singular or when the
    signs of rho_S^-1 e disagree with ``e`` (no solution with g >= 0 exists
    for that pair).  The reason is appended to ``diagnostics`` if given.
    """
    support = tuple(int(i) for i in support)
    e = tuple(int(s) for s in e)
    d = state.dim
    if not support or len(e) != len(support):
        raise ValueError("support and sign vector must be non-empty and of equal length")
    if list(support) != sorted(set(support)) or support[0] < 0 or support[-1] >= d:
        raise ValueError(f"support {support} is not a strictly increasing subset of range({d})")
    if any(s not in (1, -1) for s in e):
        raise ValueError(f"sign vector entries must be +1 or -1, got {e}")

    block = state.entries[np.ix_(support, support)]
    cond = np.linalg.cond(block)
    if not cond <= COND_LIMIT:
        if diagnostics is not None:
            diagnostics.append(Diagnostic(support, e, "degenerate-support", f"cond={cond:.3g}"))
        log.debug("skipping support %s: condition number %.3g", support, cond)
        return []

    ev = np.array(e, dtype=float)
    c_hat = scipy.linalg.lu_solve(scipy.linalg.lu_factor(block), ev)
    if np.any(np.sign(c_hat) != ev):
        if diagnostics is not None:
            diagnostics.append(Diagnostic(support, e, "sign-mismatch", f"c_hat={c_hat.tolist()}"))
        return []

    alpha = 1.0 / np.abs(c_hat).sum()
    # principal root: sqrt of a negative real is +i sqrt|.|
    roots = np.sqrt((alpha * c_hat).astype(complex))
    out = []
    idx = list(support)
    for rs in sign_vectors(len(support)):
        a = np.zeros(d, dtype=complex)
        a[idx] = np.array(rs) * roots
        a.setflags(write=False)
        res = se_residual(state, a, alpha)
        if res > RESIDUAL_LIMIT:
            raise ConsistencyError(
                f"solution for support={support}, e={e}, roots={rs} has residual {res:.3g}"
            )
        c_raw = c_hat.copy()
        c_raw.setflags(write=False)
        out.append(SESolution(support, e, rs, a, float(alpha), res, c_raw))
    return out


def enumerate_solutions(state, max_dim=DEFAULT_MAX_DIM, diagnostics=None):
    """Every principal SE solution with g > 0, in deterministic order.

    Order: support size, support indices, sign vector, root signs, with +1
    sorting before -1.  Solutions with g = 0 carry no weight and are omitted.
    """
    d = state.dim
    if d > max_dim:
        raise ResourceLimitError(
            f"dimension {d} exceeds the cap of {max_dim}; enumeration may produce up to "
            f"(5^{d}-1)/4 = {max_solution_count(d)} solutions"
        )
    out = []
    for sup in supports(d):
        for e in sign_vectors(len(sup)):
            out.extend(solve_support(state, sup, e, diagnostics))
    return out


def max_se_value(solutions):
    if not solutions:
        raise ValueError("no solutions given")
    return max(s.g for s in solutions)
