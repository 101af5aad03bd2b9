"""Structured constants and numerical kernels.

Builders for the fixed matrices every quadrature-paired computation uses
(the block commutation matrix built from J = [[0, 1], [-1, 0]], the
odd/even interleaving permutation, the quadrature-to-ladder map Gamma) and
the small set of numeric kernels the analysis and synthesis layers share:
Hermitian eigendecomposition with a deterministic ordering, numerical rank
with a relative cutoff, low-rank factorization of a PSD matrix, and the
real-embedding rank of a complex matrix.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ContractError, DimensionError, FactorizationError

__all__ = [
    "J_BLOCK",
    "M_BLOCK",
    "TolerancePolicy",
    "DEFAULT_POLICY",
    "CanonicalStructure",
    "build_theta",
    "build_p",
    "build_gamma",
    "build_sigma",
    "canonical_structure",
    "is_symmetric",
    "is_skew_symmetric",
    "is_hermitian",
    "is_psd",
    "hermitian_eig",
    "numerical_rank",
    "psd_low_rank_factor",
    "complex_rank_via_real_embedding",
]

J_BLOCK = np.array([[0.0, 1.0], [-1.0, 0.0]])
M_BLOCK = 0.5 * np.array([[1.0, 1.0j], [1.0, -1.0j]])


@dataclass(frozen=True)
class TolerancePolicy:
    """Numeric cutoffs used throughout the pipeline.

    rank_rel_tol   : singular values below rank_rel_tol * sigma_max count as zero
    residual_tol   : relative Frobenius threshold for identity checks
    symmetry_tol   : relative threshold for symmetry/Hermiticity preconditions
    """

    rank_rel_tol: float = 1e-9
    residual_tol: float = 1e-8
    symmetry_tol: float = 1e-12

    def __post_init__(self):
        for name in ("rank_rel_tol", "residual_tol", "symmetry_tol"):
            if not getattr(self, name) > 0.0:
                raise ValueError(f"{name} must be strictly positive")


DEFAULT_POLICY = TolerancePolicy()


def _require_even(value: int, what: str) -> int:
    value = int(value)
    if value < 0 or value % 2 != 0:
        raise DimensionError(f"{what} must be a nonnegative even integer, got {value}")
    return value


def _fro(a) -> float:
    return float(np.linalg.norm(a)) if np.size(a) else 0.0


def build_theta(k: int) -> np.ndarray:
    """k x k block diagonal matrix with J = [[0, 1], [-1, 0]] blocks (k even, >= 2)."""
    k = int(k)
    if k < 2 or k % 2 != 0:
        raise DimensionError(f"theta requires an even size >= 2, got {k}")
    return np.kron(np.eye(k // 2), J_BLOCK)


def build_p(size: int) -> np.ndarray:
    """Interleaving permutation: maps (a1, a2, ..., a2m) to (a1, a3, ..., a2m-1, a2, a4, ..., a2m).

    Acts on column vectors; build_p(size) @ x gathers the odd-position entries
    of x first, then the even-position ones.
    """
    size = _require_even(size, "permutation size")
    p = np.zeros((size, size))
    source = np.concatenate([np.arange(0, size, 2), np.arange(1, size, 2)])
    p[np.arange(size), source] = 1.0
    return p


def build_gamma(size: int) -> np.ndarray:
    """Quadrature-to-ladder map: build_p(size) @ blockdiag(M, ..., M)."""
    size = _require_even(size, "gamma size")
    if size == 0:
        return np.zeros((0, 0), dtype=complex)
    return build_p(size) @ np.kron(np.eye(size // 2), M_BLOCK)


def build_sigma(n_y: int, pairs: int) -> np.ndarray:
    """Row selector [I 0] of shape (n_y/2) x pairs picking the leading output pairs."""
    n_y = _require_even(n_y, "n_y")
    half = n_y // 2
    if pairs < half:
        raise DimensionError(f"selector needs at least {half} columns, got {pairs}")
    return np.hstack([np.eye(half), np.zeros((half, pairs - half))])


@dataclass(frozen=True, eq=False)
class CanonicalStructure:
    """Fixed matrices for a system with n states, n_u inputs, and n_v noises."""

    theta_n: np.ndarray
    theta_nu: np.ndarray
    theta_ny: np.ndarray
    P: np.ndarray
    M: np.ndarray
    Gamma: np.ndarray
    Sigma_ny: np.ndarray


def canonical_structure(n: int, n_u: int, n_v: int) -> CanonicalStructure:
    """Bundle the constant matrices for the given dimensions (n_y = n_u)."""
    total = _require_even(n_v, "n_v") + _require_even(n_u, "n_u")
    return CanonicalStructure(
        theta_n=build_theta(n),
        theta_nu=build_theta(n_u),
        theta_ny=build_theta(n_u),
        P=build_p(total),
        M=M_BLOCK.copy(),
        Gamma=build_gamma(total),
        Sigma_ny=build_sigma(n_u, total // 2),
    )


def is_symmetric(m, tol: float = 1e-12) -> bool:
    m = np.asarray(m)
    scale = _fro(m)
    return _fro(m - m.T) <= tol * scale if scale > 0 else True


def is_skew_symmetric(m, tol: float = 1e-12) -> bool:
    m = np.asarray(m)
    scale = _fro(m)
    return _fro(m + m.T) <= tol * scale if scale > 0 else True


def is_hermitian(m, tol: float = 1e-12) -> bool:
    m = np.asarray(m)
    scale = _fro(m)
    return _fro(m - m.conj().T) <= tol * scale if scale > 0 else True


def is_psd(m, tol: float = 1e-9) -> bool:
    """Hermitian with eigenvalues >= -tol * max|eigenvalue|."""
    m = np.asarray(m)
    if not is_hermitian(m, max(tol, 1e-12)):
        return False
    if m.size == 0:
        return True
    w = np.linalg.eigvalsh(m)
    bound = tol * max(float(np.abs(w).max()), 0.0)
    return bool(w.min() >= -bound)


def _fix_phases(vectors: np.ndarray) -> np.ndarray:
    """Scale each column so its largest-magnitude entry is real and positive.

    Ties pick the first index, so the convention is deterministic.
    """
    if vectors.shape[1] == 0:
        return vectors
    lead_rows = np.argmax(np.abs(vectors), axis=0)
    lead = vectors[lead_rows, np.arange(vectors.shape[1])]
    mags = np.abs(lead)
    phases = np.where(mags > 0, lead / np.where(mags > 0, mags, 1.0), 1.0)
    return vectors / phases


def hermitian_eig(h, policy: TolerancePolicy = DEFAULT_POLICY):
    """Eigendecomposition H = U^dag diag(d) U of a Hermitian matrix.

    Parameters
    ----------
    h : array_like
        Square matrix, Hermitian within ``policy.symmetry_tol`` (relative).
    policy : TolerancePolicy

    Returns
    -------
    U : ndarray
        Matrix with H = U.conj().T @ diag(d) @ U; its rows are the
        conjugated eigenvectors, phase-fixed for determinism.
    d : ndarray
        Real eigenvalues, sorted descending.
    """
    h = np.asarray(h)
    if h.ndim != 2 or h.shape[0] != h.shape[1]:
        raise DimensionError(f"hermitian_eig requires a square matrix, got shape {h.shape}")
    scale = _fro(h)
    if scale > 0 and _fro(h - h.conj().T) > policy.symmetry_tol * scale:
        raise ContractError("matrix is not Hermitian within the symmetry tolerance")
    d, v = np.linalg.eigh(h)
    order = np.argsort(-d, kind="stable")
    d = d[order]
    v = _fix_phases(v[:, order])
    return v.conj().T, d


def numerical_rank(m, policy: TolerancePolicy = DEFAULT_POLICY) -> int:
    """Count of singular values above rank_rel_tol times the largest one."""
    m = np.asarray(m)
    if m.size == 0:
        return 0
    s = np.linalg.svd(m, compute_uv=False)
    if s.size == 0 or s[0] <= 0.0:
        return 0
    return int(np.count_nonzero(s > policy.rank_rel_tol * s[0]))


def psd_low_rank_factor(xi2, k: int, policy: TolerancePolicy = DEFAULT_POLICY) -> np.ndarray:
    """Factor a PSD matrix of numerical rank k as F^dag F with F of k rows.

    Keeps the top-k eigenpairs: F = sqrt(d_k) * U_k for the k largest
    eigenvalues. Raises FactorizationError when k disagrees with the
    numerical rank, when a negative eigenvalue exceeds the rank cutoff, or
    when the round-trip F^dag F misses xi2 beyond the residual tolerance.
    """
    xi2 = np.asarray(xi2)
    k = int(k)
    got = numerical_rank(xi2, policy)
    if got != k:
        raise FactorizationError(f"requested {k} rows but the numerical rank is {got}")
    u, d = hermitian_eig(xi2, policy)
    if d.size:
        floor = policy.rank_rel_tol * float(np.abs(d).max())
        if d[-1] < -floor:
            raise FactorizationError(f"matrix is not PSD: eigenvalue {d[-1]:.3e} below -{floor:.3e}")
    factor = np.sqrt(np.clip(d[:k], 0.0, None))[:, None] * u[:k, :]
    residual = _fro(factor.conj().T @ factor - xi2)
    scale = _fro(xi2)
    if residual > policy.residual_tol * scale:
        raise FactorizationError(
            f"round-trip residual {residual:.3e} exceeds {policy.residual_tol:.1e} * {scale:.3e}"
        )
    return factor


def complex_rank_via_real_embedding(
    are, aim, policy: TolerancePolicy = DEFAULT_POLICY
) -> int:
    """Rank of (are + i*aim) computed as half the rank of [[are, aim], [-aim, are]].

    An independent route to numerical_rank(are + 1j * aim): the embedding
    repeats every singular value of the complex matrix exactly twice.
    """
    are = np.asarray(are, dtype=float)
    aim = np.asarray(aim, dtype=float)
    if are.shape != aim.shape:
        raise DimensionError(f"real and imaginary parts differ in shape: {are.shape} vs {aim.shape}")
    embedding = np.block([[are, aim], [-aim, are]])
    return numerical_rank(embedding, policy) // 2
