"""Analysis layer for quantum realizability of LTI triples.

Given a real state-space triple (A, B, C) on quadrature-paired dimensions,
this module computes the skew-symmetric invariant S_tilde whose rank fixes
the minimal number of additional vacuum noise channels, the companion
Hermitian matrix S = (i/4) S_tilde, two noise counts (the exact rank-based
one and the coarser multiplicity-based bound), and the residual check that
decides whether a candidate (B1, D1) completion is physically realizable.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DimensionError, NumericalError, ValidationError
from .linalg import (
    DEFAULT_POLICY,
    J_BLOCK,
    TolerancePolicy,
    build_theta,
    hermitian_eig,
    numerical_rank,
)

__all__ = [
    "LtiSystem",
    "SkewReport",
    "NoiseItoStructure",
    "ResidualEntry",
    "ResidualReport",
    "MULTIPLICITY_CLUSTER_REL",
    "validate_system",
    "compute_s_tilde",
    "minimal_noise_count",
    "multiplicity_noise_count",
    "noise_ito_structure",
    "residual_entry",
    "check_physical_realizability",
]

# Relative gap under which eigenvalues count as one cluster when the
# multiplicity of the least eigenvalue is needed. Multiplicity is ill posed
# in floating point, so the cluster rule is explicit.
MULTIPLICITY_CLUSTER_REL = 1e-7


@dataclass(frozen=True, eq=False)
class LtiSystem:
    """Real triple (A, B, C) with even state/input/output dimensions.

    The dimensions pair into conjugate quadratures, so n, n_u, and n_y must
    all be even, and the theory handled here additionally requires as many
    outputs as inputs (n_y = n_u).
    """

    A: np.ndarray
    B: np.ndarray
    C: np.ndarray
    n: int
    n_u: int
    n_y: int

    @classmethod
    def from_matrices(cls, A, B, C) -> "LtiSystem":
        """Build and validate a system directly from array-likes."""
        A = np.atleast_2d(np.asarray(A, dtype=float))
        B = np.atleast_2d(np.asarray(B, dtype=float))
        C = np.atleast_2d(np.asarray(C, dtype=float))
        sys = cls(A=A, B=B, C=C, n=A.shape[0], n_u=B.shape[1], n_y=C.shape[0])
        return validate_system(sys)


def validate_system(sys: LtiSystem) -> LtiSystem:
    """Return the system unchanged iff every structural invariant holds.

    Raises ValidationError naming the violated invariant: odd or
    nonpositive dimensions, n_y != n_u, inconsistent matrix shapes, or
    non-finite entries.
    """
    A, B, C = np.asarray(sys.A), np.asarray(sys.B), np.asarray(sys.C)
    if A.ndim != 2 or A.shape[0] != A.shape[1]:
        raise ValidationError(f"A must be square, got shape {A.shape}")
    for name, count in (("n", sys.n), ("n_u", sys.n_u), ("n_y", sys.n_y)):
        if count <= 0 or count % 2 != 0:
            raise ValidationError(
                f"{name} must be a positive even integer (quadrature pairing), got {count}"
            )
    if sys.n_y != sys.n_u:
        raise ValidationError(
            f"outputs must match inputs (n_y = n_u), got n_y={sys.n_y}, n_u={sys.n_u}"
        )
    if A.shape != (sys.n, sys.n):
        raise ValidationError(f"A must be {sys.n}x{sys.n}, got shape {A.shape}")
    if B.shape != (sys.n, sys.n_u):
        raise ValidationError(f"B must be {sys.n}x{sys.n_u}, got shape {B.shape}")
    if C.shape != (sys.n_y, sys.n):
        raise ValidationError(f"C must be {sys.n_y}x{sys.n}, got shape {C.shape}")
    for name, m in (("A", A), ("B", B), ("C", C)):
        if not np.isfinite(m).all():
            raise ValidationError(f"{name} contains non-finite entries")
    return sys


@dataclass(frozen=True, eq=False)
class SkewReport:
    """The skew invariant S_tilde, its Hermitian companion, and eigen data.

    S = (i/4) S_tilde is Hermitian because S_tilde is real skew-symmetric;
    ``eigenvalues`` holds the spectrum of S sorted descending, and
    ``rank_r`` the numerical rank of S_tilde under ``tol``.
    """

    S_tilde: np.ndarray
    S: np.ndarray
    eigenvalues: np.ndarray
    rank_r: int
    tol: TolerancePolicy


def compute_s_tilde(
    sys: LtiSystem, policy: TolerancePolicy = DEFAULT_POLICY
) -> SkewReport:
    """Skew invariant of a validated system.

    S_tilde = Theta B Theta_u B^T Theta - A^T Theta - Theta A - C^T Theta_y C,
    with the outer commutation matrices of size n and the middle one of
    size n_u. The result must be skew-symmetric up to roundoff; a residual
    above symmetry_tol raises NumericalError since it signals a bug, not
    bad input.
    """
    sys = validate_system(sys)
    theta = build_theta(sys.n)
    theta_u = build_theta(sys.n_u)
    theta_y = build_theta(sys.n_y)
    s_tilde = (
        theta @ sys.B @ theta_u @ sys.B.T @ theta
        - sys.A.T @ theta
        - theta @ sys.A
        - sys.C.T @ theta_y @ sys.C
    )
    scale = float(np.linalg.norm(s_tilde))
    if scale > 0:
        skewness = float(np.linalg.norm(s_tilde + s_tilde.T))
        if skewness > policy.symmetry_tol * scale:
            raise NumericalError(
                f"skew invariant lost antisymmetry: residual {skewness:.3e} "
                f"exceeds {policy.symmetry_tol:.1e} * {scale:.3e}"
            )
    s = 0.25j * s_tilde
    _, eigenvalues = hermitian_eig(s, policy)
    return SkewReport(
        S_tilde=s_tilde,
        S=s,
        eigenvalues=eigenvalues,
        rank_r=numerical_rank(s_tilde, policy),
        tol=policy,
    )


def minimal_noise_count(sys: LtiSystem, policy: TolerancePolicy = DEFAULT_POLICY):
    """Exact minimum number of additional noise channels.

    Returns (r, n_v) with r = rank(S_tilde) and n_v = n_u + r. The rank of
    a real skew-symmetric matrix is even; an odd computed value means the
    rank cutoff sits inside an eigenvalue pair and raises NumericalError.
    """
    skew = compute_s_tilde(sys, policy)
    if skew.rank_r % 2 != 0:
        raise NumericalError(
            f"numerical rank {skew.rank_r} of the skew invariant is odd; "
            "adjust rank_rel_tol away from the singular-value cluster"
        )
    return skew.rank_r, sys.n_u + skew.rank_r


def multiplicity_noise_count(
    sys: LtiSystem, policy: TolerancePolicy = DEFAULT_POLICY
) -> int:
    """Multiplicity-based noise count n_u + 2(n - n_lambda).

    n_lambda is the multiplicity of the least eigenvalue of i*S_tilde,
    clustered with a relative gap of MULTIPLICITY_CLUSTER_REL. Multiplicity
    does not change under positive scaling, so the stored spectrum of
    S = (i/4) S_tilde is used directly. Never smaller than the rank-based
    count, and it degenerates to n_u exactly when S_tilde = 0.
    """
    skew = compute_s_tilde(sys, policy)
    w = skew.eigenvalues
    gap = MULTIPLICITY_CLUSTER_REL * float(np.abs(w).max()) if w.size else 0.0
    n_lambda = int(np.count_nonzero(w <= w.min() + gap))
    return sys.n_u + 2 * (sys.n - n_lambda)


@dataclass(frozen=True, eq=False)
class NoiseItoStructure:
    """Vacuum Ito matrices of the noise fields and their skew part T_w.

    F = I + i*Theta for each field; T_w = (1/2) blockdiag(F_v - F_v^T,
    F_u - F_u^T), which reduces to i*blockdiag(Theta_nv, Theta_nu).
    """

    F_v: np.ndarray
    F_u: np.ndarray
    T_w: np.ndarray


def noise_ito_structure(n_v: int, n_u: int) -> NoiseItoStructure:
    """Ito structure for n_v additional noises and n_u inputs, both even."""
    theta_v = build_theta(n_v)
    theta_u = build_theta(n_u)
    f_v = np.eye(n_v) + 1j * theta_v
    f_u = np.eye(n_u) + 1j * theta_u
    t_w = 0.5 * np.block(
        [
            [f_v - f_v.T, np.zeros((n_v, n_u))],
            [np.zeros((n_u, n_v)), f_u - f_u.T],
        ]
    )
    return NoiseItoStructure(F_v=f_v, F_u=f_u, T_w=t_w)


@dataclass(frozen=True)
class ResidualEntry:
    """One named identity check: norms, the relative residual, and verdict."""

    name: str
    absolute: float
    scale: float
    relative: float
    tol: float
    passed: bool


@dataclass(frozen=True)
class ResidualReport:
    """Ordered collection of residual entries from one check run."""

    entries: tuple

    @property
    def all_passed(self) -> bool:
        return all(e.passed for e in self.entries)

    def entry(self, name: str) -> ResidualEntry:
        for e in self.entries:
            if e.name == name:
                return e
        raise KeyError(f"no residual named {name!r}")

    def __iter__(self):
        return iter(self.entries)


def residual_entry(name: str, delta, terms, tol: float) -> ResidualEntry:
    """Measure a residual against the largest term that produced it.

    ``terms`` are the matrices whose (near-)cancellation the identity
    claims; the relative residual is ||delta|| over the largest term norm.
    A zero scale with a zero residual is a clean pass, a zero scale with a
    nonzero residual can never pass.
    """
    absolute = float(np.linalg.norm(delta)) if np.size(delta) else 0.0
    scale = max((float(np.linalg.norm(t)) for t in terms), default=0.0)
    if scale > 0.0:
        relative = absolute / scale
    else:
        relative = 0.0 if absolute == 0.0 else math.inf
    return ResidualEntry(
        name=name,
        absolute=absolute,
        scale=scale,
        relative=relative,
        tol=float(tol),
        passed=relative <= tol,
    )


def check_physical_realizability(
    sys: LtiSystem, B1, D1, policy: TolerancePolicy = DEFAULT_POLICY
) -> ResidualReport:
    """Residuals of the three realizability conditions for a candidate (B1, D1).

    Parameters
    ----------
    sys : LtiSystem
        Validated system supplying A, B, C.
    B1 : array_like
        Real n x n_v noise input matrix; n_v is inferred from its width.
    D1 : array_like
        Real n_y x n_v output feedthrough matrix.
    policy : TolerancePolicy

    Returns
    -------
    ResidualReport
        Entries named "commutation" (the quantum commutation preservation
        identity i A Theta + i Theta A^T + [B1 B] T_w [B1 B]^T = 0),
        "output_coupling" (first n_y columns of [B1 B] must equal
        Theta C^T diag(J)), and "feedthrough" (D1 = [I 0]), each compared
        to residual_tol.
    """
    sys = validate_system(sys)
    b1 = np.atleast_2d(np.asarray(B1, dtype=float))
    d1 = np.atleast_2d(np.asarray(D1, dtype=float))
    n_v = b1.shape[1]
    if b1.shape[0] != sys.n:
        raise DimensionError(f"B1 must have {sys.n} rows, got shape {b1.shape}")
    if n_v % 2 != 0 or n_v < max(sys.n_y, 2):
        raise DimensionError(
            f"B1 must supply an even number of noise quadratures >= n_y={sys.n_y}, "
            f"got {n_v} columns"
        )
    if d1.shape != (sys.n_y, n_v):
        raise DimensionError(f"D1 must be {sys.n_y}x{n_v}, got shape {d1.shape}")

    theta = build_theta(sys.n)
    ito = noise_ito_structure(n_v, sys.n_u)
    bb = np.hstack([b1, sys.B])

    term_a = 1j * sys.A @ theta
    term_at = 1j * theta @ sys.A.T
    term_bb = bb @ ito.T_w @ bb.T
    # T_w is i*blockdiag(J, ..., J), so the quadratic term sums one
    # contribution per quadrature pair; the pairs can cancel each other,
    # so they set the scale individually, not through their sum.
    pair_terms = [
        bb[:, k : k + 2] @ J_BLOCK @ bb[:, k : k + 2].T
        for k in range(0, n_v + sys.n_u, 2)
    ]
    commutation = residual_entry(
        "commutation",
        term_a + term_at + term_bb,
        [term_a, term_at] + pair_terms,
        policy.residual_tol,
    )

    got = bb[:, : sys.n_y]
    target = theta @ sys.C.T @ build_theta(sys.n_y)
    output_coupling = residual_entry(
        "output_coupling", got - target, [got, target], policy.residual_tol
    )

    d_target = np.eye(sys.n_y, n_v)
    feedthrough = residual_entry(
        "feedthrough", d1 - d_target, [d1, d_target], policy.residual_tol
    )

    return ResidualReport(entries=(commutation, output_coupling, feedthrough))
