"""Designs, moment and information matrices, and the spectral kernel.

A design is a strictly positive weight vector on the treatments summing to
one. Its moment matrix is diag(w); the covariance matrix of a contrast
system under the design is q^T diag(w)^{-1} q, and the information matrix is
its inverse (Moore-Penrose pseudo-inverse in the rank-deficient case).

For pairwise systems the same spectral information lives in the
vertex-weighted Laplacian of the comparison graph with vertex weights 1/w_i:
its positive eigenvalues coincide with those of the covariance matrix, which
is what makes eigenvalue-only criteria computable on the graph side.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ._config import WEIGHT_SUM_TOL, default_rank_tol
from ._kernels import eigh_sym
from .contrasts import ComparisonGraph, ContrastSystem, rank_of
from .errors import (
    InfeasibleDesign,
    NonPositiveEigenvalue,
    NotSymmetric,
    PreconditionViolated,
    RankDeficient,
)

_SYM_TOL = 1e-10


@dataclass(frozen=True, eq=False)
class Design:
    """Strictly positive treatment proportions summing to one."""

    w: np.ndarray

    def __post_init__(self):
        w = np.array(self.w, dtype=np.float64).reshape(-1)
        if w.size < 2:
            raise InfeasibleDesign("design needs at least 2 weights")
        if not np.all(np.isfinite(w)) or np.any(w <= 0.0):
            raise InfeasibleDesign("all weights must be strictly positive")
        total = float(w.sum())
        if abs(total - 1.0) > WEIGHT_SUM_TOL:
            raise InfeasibleDesign(f"weights sum to {total!r}, not 1")
        w.flags.writeable = False
        object.__setattr__(self, "w", w)

    @property
    def v(self) -> int:
        return self.w.size

    @classmethod
    def uniform(cls, v: int) -> "Design":
        return cls(np.full(v, 1.0 / v))

    @classmethod
    def normalized(cls, w) -> "Design":
        """Rescale a positive vector to sum to one."""
        w = np.asarray(w, dtype=np.float64).reshape(-1)
        if not np.all(np.isfinite(w)) or np.any(w <= 0.0):
            raise InfeasibleDesign("all weights must be strictly positive")
        return cls(w / w.sum())


@dataclass(frozen=True, eq=False)
class Spectrum:
    """Eigenvalues in descending order plus the positivity threshold used."""

    values: np.ndarray
    tol: float

    def __post_init__(self):
        values = np.array(self.values, dtype=np.float64).reshape(-1)
        if np.any(np.diff(values) > 0):
            raise ValueError("spectrum values must be nonincreasing")
        values.flags.writeable = False
        object.__setattr__(self, "values", values)

    @property
    def positive_count(self) -> int:
        return int(np.count_nonzero(self.values > self.tol))

    def top(self, r: int) -> np.ndarray:
        return self.values[:r]


def moment_matrix(design: Design) -> np.ndarray:
    return np.diag(design.w)


def covariance_matrix(system: ContrastSystem, design: Design) -> np.ndarray:
    """q^T diag(w)^{-1} q: covariance kernel of the contrast estimators."""
    return (system.q.T / design.w) @ system.q


def eigensystem_sym(m: np.ndarray, rank_tol: float | None = None):
    """Full descending eigen-decomposition of a symmetric matrix.

    Returns (Spectrum, vectors) with eigenvectors as columns. The spectrum's
    positivity threshold is ``rank_tol`` times the largest eigenvalue.
    """
    m = np.asarray(m, dtype=np.float64)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise NotSymmetric(f"expected a square matrix, got shape {m.shape}")
    scale = max(1.0, float(np.abs(m).max()) if m.size else 0.0)
    if float(np.abs(m - m.T).max()) > _SYM_TOL * scale:
        raise NotSymmetric("matrix is not symmetric within tolerance")
    if rank_tol is None:
        rank_tol = default_rank_tol()
    vals, vecs = eigh_sym(m)
    tol = rank_tol * max(float(vals[0]), 0.0)
    return Spectrum(vals, tol), vecs


def eigenvalues_sym(m: np.ndarray, rank_tol: float | None = None) -> Spectrum:
    spectrum, _ = eigensystem_sym(m, rank_tol)
    return spectrum


def information_matrix(system: ContrastSystem, design: Design, rank_tol: float | None = None) -> np.ndarray:
    """Inverse of the covariance matrix; defined for full-rank systems only."""
    r = rank_of(system, rank_tol)
    if r < system.s:
        raise RankDeficient(f"system has rank {r} < s={system.s}; use pseudo_information_matrix")
    spectrum, vecs = eigensystem_sym(covariance_matrix(system, design), rank_tol)
    return (vecs / spectrum.values) @ vecs.T


def pseudo_information_matrix(system: ContrastSystem, design: Design, rank_tol: float | None = None) -> np.ndarray:
    """Moore-Penrose analogue of the information matrix for any rank.

    Eigenvalues above the positivity threshold are inverted; the rest are
    zeroed.
    """
    spectrum, vecs = eigensystem_sym(covariance_matrix(system, design), rank_tol)
    inv = np.zeros_like(spectrum.values)
    positive = spectrum.values > spectrum.tol
    inv[positive] = 1.0 / spectrum.values[positive]
    return (vecs * inv) @ vecs.T


def vertex_weighted_laplacian(graph: ComparisonGraph, design: Design) -> np.ndarray:
    """Laplacian with vertex weights 1/w_i.

    Diagonal entries are degree_i / w_i; adjacent pairs get
    -(w_i w_j)^{-1/2}; everything else is zero.
    """
    w = design.w
    if w.size != graph.v:
        raise InfeasibleDesign(f"design has {w.size} weights for a graph on {graph.v} vertices")
    lap = np.zeros((graph.v, graph.v))
    np.fill_diagonal(lap, np.asarray(graph.degrees) / w)
    for a, b in graph.edges:
        lap[a, b] = lap[b, a] = -1.0 / np.sqrt(w[a] * w[b])
    return lap


def pseudo_det(spectrum: Spectrum, r: int) -> float:
    """Product of the r largest eigenvalues; they must all be positive."""
    if not 0 <= r <= spectrum.values.size:
        raise ValueError(f"r={r} out of range for spectrum of length {spectrum.values.size}")
    top = spectrum.top(r)
    if np.any(top <= spectrum.tol):
        raise NonPositiveEigenvalue(
            f"eigenvalue {top.min()!r} among the {r} largest is not above {spectrum.tol!r}"
        )
    return float(np.prod(top))


def cofactor_minor(m: np.ndarray, i: int, j: int) -> float:
    """Determinant of ``m`` with row i and column j removed (0-indexed).

    Requires a symmetric matrix with zero row sums; for such matrices all
    first minors agree up to the (-1)^{i+j} sign.
    """
    m = np.asarray(m, dtype=np.float64)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise PreconditionViolated(f"expected a square matrix, got shape {m.shape}")
    scale = max(1.0, float(np.abs(m).max()))
    if float(np.abs(m - m.T).max()) > _SYM_TOL * scale:
        raise PreconditionViolated("matrix is not symmetric within tolerance")
    if float(np.abs(m.sum(axis=1)).max()) > _SYM_TOL * scale:
        raise PreconditionViolated("matrix row sums are not zero within tolerance")
    sub = np.delete(np.delete(m, i, axis=0), j, axis=1)
    return float(np.linalg.det(sub))
