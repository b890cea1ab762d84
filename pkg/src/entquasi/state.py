"""Truncated coefficient matrices for states of the form

    rho = sum_{m,n} rho[m, n] |m, m><n, n|

with real symmetric ``rho``.  Covers the two-mode squeezed vacuum, its
one-sided Gaussian dephasing, the wrapped-Gaussian phase distribution behind
that dephasing, and CSV/JSON persistence.
"""

from __future__ import annotations

import io
import json
import math
import os
from dataclasses import dataclass, field, replace

import numpy as np

from .errors import (
    DegenerateDeltaError,
    MatrixParseError,
    ParameterDomainError,
    ValidationError,
)

SYMMETRY_TOL = 1e-12
SOURCES = ("tmsv", "dephased_tmsv", "file")


@dataclass(frozen=True)
class StateMeta:
    zeta: float | None = None
    sigma: float | None = None
    source: str = "file"

    def __post_init__(self):
        if self.source not in SOURCES:
            raise ValidationError(f"unknown source {self.source!r}")

    def as_dict(self):
        return {"zeta": self.zeta, "sigma": self.sigma, "source": self.source}


@dataclass(frozen=True, eq=False)
class CoefficientMatrix:
    """Real symmetric d x d coefficient matrix over photon numbers 0..d-1.

    The matrix is the truncation of a unit-trace state and is never
    renormalized, so ``trace`` is generally below one.
    """

    entries: np.ndarray
    meta: StateMeta = field(default_factory=StateMeta)

    def __post_init__(self):
        arr = np.array(self.entries, dtype=float)
        if arr.ndim != 2 or arr.shape[0] != arr.shape[1] or arr.shape[0] == 0:
            raise ValidationError(f"entries must be a non-empty square matrix, got shape {arr.shape}")
        if not np.all(np.isfinite(arr)):
            raise ValidationError("entries contain non-finite values")
        asym = np.max(np.abs(arr - arr.T))
        if asym > SYMMETRY_TOL:
            i, j = np.unravel_index(np.argmax(np.abs(arr - arr.T)), arr.shape)
            raise ValidationError(
                f"matrix is not symmetric: entries[{i}][{j}]={arr[i, j]!r} vs "
                f"entries[{j}][{i}]={arr[j, i]!r}"
            )
        if np.any(np.diag(arr) < 0):
            raise ValidationError("diagonal entries must be non-negative")
        if np.trace(arr) > 1 + SYMMETRY_TOL:
            raise ValidationError(f"trace {np.trace(arr)!r} exceeds 1")
        arr.setflags(write=False)
        object.__setattr__(self, "entries", arr)

    @property
    def dim(self):
        return self.entries.shape[0]

    @property
    def trace(self):
        return float(np.trace(self.entries))

    def embed(self):
        """Two-mode operator on the d^2-dimensional product Fock basis.

        Row/column index of |m, n> is ``m * d + n``; only the (m,m),(n,n)
        slots are populated.
        """
        d = self.dim
        out = np.zeros((d * d, d * d))
        diag_idx = np.arange(d) * (d + 1)
        out[np.ix_(diag_idx, diag_idx)] = self.entries
        return out

    def truncate(self, dim):
        if not 1 <= dim <= self.dim:
            raise ParameterDomainError(f"cannot truncate dimension {self.dim} matrix to {dim}")
        return replace(self, entries=self.entries[:dim, :dim])


def build_tmsv(zeta, dim):
    """Truncated two-mode squeezed vacuum: (1 - zeta^2) zeta^(m+n)."""
    if not 0 < zeta < 1:
        raise ParameterDomainError(f"zeta must lie in (0, 1), got {zeta!r}")
    if int(dim) != dim or dim < 1:
        raise ParameterDomainError(f"dim must be a positive integer, got {dim!r}")
    m = np.arange(int(dim))
    entries = (1.0 - zeta * zeta) * zeta ** (m[:, None] + m[None, :])
    return CoefficientMatrix(entries, StateMeta(zeta=float(zeta), sigma=0.0, source="tmsv"))


def dephasing_factor(sigma, k):
    """Suppression exp(-sigma^2 k^2 / 2) of a coherence with photon-number gap k.

    Equal to the k-th circular moment of the wrapped Gaussian,
    ``integral_0^{2pi} phase_pdf(phi) cos(k phi) dphi``.
    """
    if sigma < 0:
        raise ParameterDomainError(f"sigma must be non-negative, got {sigma!r}")
    return math.exp(-0.5 * (sigma * k) ** 2)


def apply_dephasing(state, sigma):
    if sigma < 0:
        raise ParameterDomainError(f"sigma must be non-negative, got {sigma!r}")
    if sigma == 0:
        return state
    d = state.dim
    gap = np.arange(d)[:, None] - np.arange(d)[None, :]
    entries = state.entries * np.exp(-0.5 * sigma**2 * gap**2)
    prev = state.meta.sigma or 0.0
    meta = StateMeta(
        zeta=state.meta.zeta,
        sigma=float(math.hypot(prev, sigma)),
        source="dephased_tmsv",
    )
    return CoefficientMatrix(entries, meta)


def dephased_tmsv(zeta, sigma, dim):
    return apply_dephasing(build_tmsv(zeta, dim), sigma)


def diagonal_part(state):
    """Fully dephased limit: coherences between different photon numbers removed."""
    return CoefficientMatrix(np.diag(np.diag(state.entries)), state.meta)


def zeta_from_db(noise_db):
    """Squeezing parameter tanh(r) for a quadrature noise reduction of ``noise_db`` dB."""
    if not noise_db > 0:
        raise ParameterDomainError(f"noise reduction must be positive (in dB), got {noise_db!r}")
    return math.tanh(noise_db * math.log(10.0) / 20.0)


# --- wrapped Gaussian phase distribution -------------------------------------


class _DeltaMarker:
    """Stands in for the density of a zero-width phase distribution."""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self):
        return "DELTA"

    def __bool__(self):
        return False


DELTA = _DeltaMarker()


def default_wrap_terms(sigma):
    # images up to ~10 sigma beyond the fundamental window are kept
    return int(math.ceil(10.0 * sigma / (2 * math.pi))) + 1


@dataclass(frozen=True)
class PhaseDistribution:
    sigma: float
    wrap_terms: int | None = None

    def __post_init__(self):
        if self.sigma < 0:
            raise ParameterDomainError(f"sigma must be non-negative, got {self.sigma!r}")
        if self.wrap_terms is None:
            object.__setattr__(self, "wrap_terms", default_wrap_terms(self.sigma))
        elif self.wrap_terms < 1:
            raise ParameterDomainError("wrap_terms must be a positive integer")

    @property
    def is_delta(self):
        return self.sigma == 0


def phase_pdf(dist, phi):
    """Wrapped-Gaussian density at ``phi`` (scalar or array).

    Returns ``DELTA`` instead of a number when ``dist.sigma == 0``.
    """
    if dist.is_delta:
        return DELTA
    s = dist.sigma
    phi = np.asarray(phi, dtype=float)
    p = np.arange(-dist.wrap_terms, dist.wrap_terms + 1)
    x = phi[..., None] + 2 * np.pi * p
    val = np.exp(-(x**2) / (2 * s * s)).sum(axis=-1) / math.sqrt(2 * math.pi * s * s)
    return float(val) if val.ndim == 0 else val


def phase_grid(sigma, samples):
    """Uniform grid over [0, 2pi) and the density on it."""
    dist = PhaseDistribution(sigma)
    if dist.is_delta:
        raise DegenerateDeltaError(
            "sigma=0 is a delta distribution at phi=0 and has no plottable density"
        )
    if samples < 2:
        raise ParameterDomainError("need at least 2 samples")
    phi = 2 * np.pi * np.arange(samples) / samples
    return phi, phase_pdf(dist, phi)


# --- persistence --------------------------------------------------------------


def _fmt(x):
    return format(float(x), ".17g")


def _write_text(target, text):
    if hasattr(target, "write"):
        target.write(text)
    else:
        with open(target, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)


def _read_text(source):
    if hasattr(source, "read"):
        return source.read()
    with open(source, encoding="utf-8") as fh:
        return fh.read()


def _guess_format(target, fmt):
    if fmt is not None:
        return fmt
    name = target if isinstance(target, (str, os.PathLike)) else getattr(target, "name", "")
    return "json" if str(name).lower().endswith(".json") else "csv"


def matrix_to_csv(state):
    lines = [f"dim,{state.dim}"]
    lines += [",".join(_fmt(x) for x in row) for row in state.entries]
    return "\n".join(lines) + "\n"


def matrix_to_json(state):
    doc = {
        "dim": state.dim,
        "entries": [[float(x) for x in row] for row in state.entries],
        "meta": state.meta.as_dict(),
    }
    return json.dumps(doc, indent=2) + "\n"


def save_matrix(state, target, fmt=None):
    """Write ``state`` as CSV or JSON.  ``fmt`` defaults from the file suffix."""
    fmt = _guess_format(target, fmt)
    text = matrix_to_json(state) if fmt == "json" else matrix_to_csv(state)
    _write_text(target, text)


def _parse_float(tok, row, col):
    try:
        return float(tok)
    except ValueError:
        raise MatrixParseError(f"not a number: {tok.strip()!r}", row, col) from None


def matrix_from_csv(text):
    lines = [ln for ln in io.StringIO(text).read().splitlines()]
    if not lines:
        raise MatrixParseError("empty file", 1)
    head = [t.strip() for t in lines[0].split(",")]
    if len(head) != 2 or head[0] != "dim":
        raise MatrixParseError("first line must be 'dim,<d>'", 1)
    try:
        d = int(head[1])
    except ValueError:
        raise MatrixParseError(f"bad dimension {head[1]!r}", 1, 2) from None
    if d < 1:
        raise MatrixParseError("dimension must be positive", 1, 2)
    body = [ln for ln in lines[1:]]
    while body and not body[-1].strip():
        body.pop()
    if len(body) != d:
        raise MatrixParseError(f"expected {d} matrix rows, found {len(body)}", len(body) + 2)
    entries = np.empty((d, d))
    for i, ln in enumerate(body):
        toks = ln.split(",")
        if len(toks) != d:
            raise MatrixParseError(f"expected {d} columns, found {len(toks)}", i + 2)
        for j, tok in enumerate(toks):
            entries[i, j] = _parse_float(tok, i + 2, j + 1)
    return CoefficientMatrix(entries, StateMeta(source="file"))


def matrix_from_json(text):
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise MatrixParseError(f"invalid JSON: {exc.msg}", exc.lineno, exc.colno) from None
    if not isinstance(doc, dict) or "dim" not in doc or "entries" not in doc:
        raise MatrixParseError("JSON matrix needs 'dim' and 'entries'")
    d = doc["dim"]
    rows = doc["entries"]
    if not isinstance(d, int) or d < 1:
        raise MatrixParseError(f"bad dimension {d!r}")
    if not isinstance(rows, list) or len(rows) != d:
        raise MatrixParseError(f"expected {d} rows in 'entries'")
    entries = np.empty((d, d))
    for i, row in enumerate(rows):
        if not isinstance(row, list) or len(row) != d:
            raise MatrixParseError(f"entries row {i} must have {d} values")
        for j, x in enumerate(row):
            if isinstance(x, bool) or not isinstance(x, (int, float)):
                raise MatrixParseError(f"entries[{i}][{j}] is not a number: {x!r}")
            entries[i, j] = x
    meta = doc.get("meta") or {}
    meta = StateMeta(zeta=meta.get("zeta"), sigma=meta.get("sigma"), source=meta.get("source", "file"))
    return CoefficientMatrix(entries, meta)


def load_matrix(source, fmt=None):
    """Read a matrix written by :func:`save_matrix` (CSV or JSON)."""
    fmt = _guess_format(source, fmt)
    text = _read_text(source)
    return matrix_from_json(text) if fmt == "json" else matrix_from_csv(text)
