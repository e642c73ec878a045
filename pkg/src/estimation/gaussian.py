"""Gaussian conditioning, PSD factorization and correlated noise sampling.

The filter updates are all instances of one result: conditioning a jointly
Gaussian pair on an observed value of its second block.  This module holds
that operation plus the numerical helpers the rest of the package shares
(symmetrization, PSD checks, guarded factorized solves, seeded streams).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import List, Tuple

import numpy as np
from scipy.linalg import cho_factor, cho_solve

PSD_TOLERANCE = -1e-10
CONDITION_GUARD = 1e-12


class NotPositiveSemidefinite(ValueError):
    """Raised when a covariance is indefinite beyond tolerance."""


class SingularInnovation(np.linalg.LinAlgError):
    """Raised when a block we must condition on is (numerically) singular."""

    def __init__(self, block: str, detail: str) -> None:
        super().__init__(f"{block} is singular: {detail}")
        self.block = block


# -----------------------------
# Matrix helpers
# -----------------------------

def symmetrize(matrix: np.ndarray) -> np.ndarray:
    return 0.5 * (matrix + matrix.T)


def min_eigenvalue(matrix: np.ndarray) -> float:
    """Smallest eigenvalue of the symmetric part of ``matrix``."""
    matrix = np.asarray(matrix, dtype=float)
    if matrix.size == 0:
        return 0.0
    return float(np.linalg.eigvalsh(symmetrize(matrix))[0])


def is_psd(matrix: np.ndarray, tol: float = PSD_TOLERANCE) -> bool:
    matrix = np.asarray(matrix, dtype=float)
    if not np.all(np.isfinite(matrix)):
        return False
    return min_eigenvalue(matrix) >= tol


def psd_factor(matrix: np.ndarray) -> np.ndarray:
    """Return ``L`` with ``L @ L.T == matrix`` for a symmetric PSD matrix.

    Cholesky is tried first.  Singular PSD matrices fall back to a symmetric
    eigendecomposition with negative eigenvalues clamped to zero, so the
    factor is square but possibly rank deficient.
    """
    sym = symmetrize(np.asarray(matrix, dtype=float))
    if sym.size == 0:
        return sym.copy()
    try:
        return np.linalg.cholesky(sym)
    except np.linalg.LinAlgError:
        pass

    eigvals, eigvecs = np.linalg.eigh(sym)
    if eigvals[0] < PSD_TOLERANCE:
        raise NotPositiveSemidefinite(f"matrix is indefinite (min eigenvalue {eigvals[0]:.3e})")
    return eigvecs * np.sqrt(np.clip(eigvals, 0.0, None))


@dataclass(frozen=True)
class Factorization:
    """Cholesky factor of a conditioning block, checked against the guard."""

    block: str
    factor: Tuple[np.ndarray, bool]
    size: int


def factorize(matrix: np.ndarray, block: str = "P22") -> Factorization:
    """Factorize ``matrix`` for repeated solves.

    The block is rejected when its smallest singular value is not larger
    than ``CONDITION_GUARD`` times its largest one.
    """
    matrix = symmetrize(np.asarray(matrix, dtype=float))
    if not np.all(np.isfinite(matrix)):
        raise SingularInnovation(block, "contains non-finite entries")
    size = matrix.shape[0]
    if size == 0:
        return Factorization(block=block, factor=(matrix, True), size=0)

    singular_values = np.linalg.svd(matrix, compute_uv=False)
    s_max = singular_values[0]
    s_min = singular_values[-1]
    if s_max == 0.0 or s_min <= CONDITION_GUARD * s_max:
        raise SingularInnovation(block, f"singular values span [{s_min:.3e}, {s_max:.3e}]")

    try:
        factor = cho_factor(matrix, lower=True, check_finite=False)
    except np.linalg.LinAlgError as exc:
        raise SingularInnovation(block, "not positive definite") from exc
    return Factorization(block=block, factor=factor, size=size)


def solve_right(fact: Factorization, rhs: np.ndarray) -> np.ndarray:
    """Return ``rhs @ inv(M)`` for the factorized symmetric matrix ``M``."""
    rhs = np.asarray(rhs, dtype=float)
    if fact.size == 0:
        return np.zeros(rhs.shape[:-1] + (0,))
    if rhs.ndim == 1:
        return cho_solve(fact.factor, rhs, check_finite=False)
    return cho_solve(fact.factor, rhs.T, check_finite=False).T


# -----------------------------
# Gaussian values
# -----------------------------

def _as_vector(value, name: str) -> np.ndarray:
    vector = np.atleast_1d(np.asarray(value, dtype=float))
    if vector.ndim != 1:
        raise ValueError(f"{name} must be a vector, got shape {vector.shape}")
    return vector


def _as_matrix(value, name: str, shape: Tuple[int, int]) -> np.ndarray:
    matrix = np.asarray(value, dtype=float)
    if matrix.ndim == 0:
        matrix = matrix.reshape(1, 1)
    if matrix.shape != shape:
        raise ValueError(f"{name} must have shape {shape}, got {matrix.shape}")
    return matrix


@dataclass(frozen=True)
class Gaussian:
    mean: np.ndarray
    cov: np.ndarray

    def __post_init__(self) -> None:
        mean = _as_vector(self.mean, "mean")
        object.__setattr__(self, "mean", mean)
        object.__setattr__(self, "cov", _as_matrix(self.cov, "cov", (mean.size, mean.size)))


@dataclass(frozen=True)
class JointPartition:
    """Joint Gaussian over (x1, x2) split into its blocks."""

    mean1: np.ndarray
    mean2: np.ndarray
    P11: np.ndarray
    P12: np.ndarray
    P22: np.ndarray

    def __post_init__(self) -> None:
        mean1 = _as_vector(self.mean1, "mean1")
        mean2 = _as_vector(self.mean2, "mean2")
        n1, n2 = mean1.size, mean2.size
        object.__setattr__(self, "mean1", mean1)
        object.__setattr__(self, "mean2", mean2)
        object.__setattr__(self, "P11", _as_matrix(self.P11, "P11", (n1, n1)))
        object.__setattr__(self, "P12", _as_matrix(self.P12, "P12", (n1, n2)))
        object.__setattr__(self, "P22", _as_matrix(self.P22, "P22", (n2, n2)))

    @classmethod
    def from_joint(cls, mean: np.ndarray, cov: np.ndarray, n1: int) -> "JointPartition":
        mean = _as_vector(mean, "mean")
        cov = _as_matrix(cov, "cov", (mean.size, mean.size))
        return cls(
            mean1=mean[:n1],
            mean2=mean[n1:],
            P11=cov[:n1, :n1],
            P12=cov[:n1, n1:],
            P22=cov[n1:, n1:],
        )

    def joint_cov(self) -> np.ndarray:
        return np.block([[self.P11, self.P12], [self.P12.T, self.P22]])

    def is_valid(self) -> bool:
        return is_psd(self.joint_cov())


def condition(jp: JointPartition, z2: np.ndarray) -> Gaussian:
    """Distribution of x1 given x2 = z2.

    mean = m1 + P12 P22^-1 (z2 - m2),  cov = P11 - P12 P22^-1 P12^T
    """
    z2 = _as_vector(z2, "z2")
    if z2.size != jp.mean2.size:
        raise ValueError(f"z2 has {z2.size} entries, expected {jp.mean2.size}")

    fact = factorize(jp.P22, block="P22")
    gain = solve_right(fact, jp.P12)
    mean = jp.mean1 + gain @ (z2 - jp.mean2)
    cov = symmetrize(jp.P11 - gain @ jp.P12.T)
    return Gaussian(mean=mean, cov=cov)


# -----------------------------
# Seeded sampling
# -----------------------------

def derive_seeds(seed: int, count: int) -> List[int]:
    """Split ``seed`` into ``count`` independent child seeds.

    Child ``i`` is the first 64-bit word of ``SeedSequence(seed).spawn(count)[i]``,
    so stream ``i`` of a given seed is stable no matter how many siblings
    are requested later as long as ``count`` is unchanged.
    """
    children = np.random.SeedSequence(seed).spawn(count)
    return [int(child.generate_state(1, dtype=np.uint64)[0]) for child in children]


def sample_joint_noise(
    Q: np.ndarray,
    R: np.ndarray,
    N: np.ndarray,
    count: int,
    seed: int,
) -> Tuple[np.ndarray, np.ndarray]:
    """Draw ``count`` i.i.d. rows of (w, v) with covariance [[Q, N], [N^T, R]]."""
    Q = np.atleast_2d(np.asarray(Q, dtype=float))
    R = np.atleast_2d(np.asarray(R, dtype=float))
    nw, nz = Q.shape[0], R.shape[0]
    N = _as_matrix(N, "N", (nw, nz))
    if count < 0:
        raise ValueError(f"count must be nonnegative, got {count}")

    joint = np.block([[Q, N], [N.T, R]])
    if not is_psd(joint):
        raise NotPositiveSemidefinite("joint noise covariance [[Q, N], [N^T, R]] is not PSD")

    factor = psd_factor(joint)
    rng = np.random.default_rng(seed)
    samples = rng.standard_normal((count, nw + nz)) @ factor.T
    return samples[:, :nw], samples[:, nw:]


__all__ = [
    "CONDITION_GUARD",
    "Factorization",
    "Gaussian",
    "JointPartition",
    "NotPositiveSemidefinite",
    "PSD_TOLERANCE",
    "SingularInnovation",
    "condition",
    "derive_seeds",
    "factorize",
    "is_psd",
    "min_eigenvalue",
    "psd_factor",
    "sample_joint_noise",
    "solve_right",
    "symmetrize",
]
