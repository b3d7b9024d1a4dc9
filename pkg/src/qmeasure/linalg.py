"""Dense complex linear algebra kernel for small Hilbert spaces.

Pure functions over immutable numpy arrays; every returned array is marked
read-only. Intended scale is dim <= ~64, where LAPACK's dense symmetric
solver is accurate to a few ulps and all tolerances below are loose by
several orders of magnitude.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import NotHermitian, NotSquare, ValidationError

TOL_HERMITIAN = 1e-10
TOL_ORTHO = 1e-10
# default eigenvalue cluster width, relative to the largest |eigenvalue|
CLUSTER_RTOL = 1e-8

_RECONSTRUCT_RTOL = 1e-10


def readonly(a: np.ndarray) -> np.ndarray:
    a.setflags(write=False)
    return a


def as_vector(v) -> np.ndarray:
    a = np.array(v, dtype=complex)
    if a.ndim != 1 or a.shape[0] == 0:
        raise ValidationError(f"expected a nonempty vector, got shape {a.shape}")
    if not np.all(np.isfinite(a)):
        raise ValidationError("vector has non-finite entries")
    return a


def as_matrix(m) -> np.ndarray:
    a = np.array(m, dtype=complex)
    if a.ndim != 2 or 0 in a.shape:
        raise ValidationError(f"expected a nonempty matrix, got shape {a.shape}")
    if not np.all(np.isfinite(a)):
        raise ValidationError("matrix has non-finite entries")
    return a


def require_square(m) -> np.ndarray:
    a = as_matrix(m)
    if a.shape[0] != a.shape[1]:
        raise NotSquare(f"matrix is {a.shape[0]}x{a.shape[1]}")
    return a


def hermiticity_defect(m: np.ndarray) -> float:
    return float(np.max(np.abs(m - m.conj().T)))


def require_hermitian(m, tol: float = TOL_HERMITIAN) -> np.ndarray:
    a = require_square(m)
    defect = hermiticity_defect(a)
    if defect > tol:
        raise NotHermitian(
            f"max |M - M^dagger| entry is {defect:.3e}, tolerance {tol:.3e}"
        )
    return a


@dataclass(frozen=True, eq=False)
class EigenSystem:
    """Ascending real eigenvalues and the unitary matrix of column eigenvectors."""

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray


def hermitian_eigendecompose(m, tol: float = TOL_HERMITIAN) -> EigenSystem:
    """Full eigendecomposition of a Hermitian matrix, eigenvalues ascending.

    The decomposition is verified before returning: columns must be
    orthonormal and sum_k w_k v_k v_k^dagger must reproduce the input to
    relative Frobenius accuracy 1e-10.
    """
    a = require_hermitian(m, tol)
    w, v = np.linalg.eigh(a)
    ortho = float(np.max(np.abs(v.conj().T @ v - np.eye(a.shape[0]))))
    scale = max(float(np.linalg.norm(a)), 1e-300)
    resid = float(np.linalg.norm((v * w) @ v.conj().T - a)) / scale
    if ortho > TOL_ORTHO or resid > _RECONSTRUCT_RTOL:
        raise ArithmeticError(
            f"eigendecomposition failed verification (ortho {ortho:.3e}, resid {resid:.3e})"
        )
    return EigenSystem(readonly(w), readonly(v))


def kronecker(a, b) -> np.ndarray:
    """Kronecker product with the left factor on the slow index."""
    return readonly(np.kron(as_matrix(a), as_matrix(b)))


def unitary_exp(h, t: float, tol: float = TOL_HERMITIAN) -> np.ndarray:
    """exp(-i t H) for Hermitian H, computed through the eigenbasis."""
    eig = hermitian_eigendecompose(h, tol)
    phases = np.exp(-1j * float(t) * eig.eigenvalues)
    return readonly((eig.eigenvectors * phases) @ eig.eigenvectors.conj().T)


def default_cluster_tol(values) -> float:
    vals = np.asarray(values, dtype=float)
    return CLUSTER_RTOL * (float(np.max(np.abs(vals))) if vals.size else 0.0)


def cluster_eigenvalues(values, tol_cluster: float) -> tuple[tuple[int, ...], ...]:
    """Group indices of ascending values into gap-separated clusters.

    A new group starts exactly where the gap to the previous value exceeds
    tol_cluster. The groups partition range(len(values)) in order.
    """
    vals = np.asarray(values, dtype=float)
    if vals.ndim != 1:
        raise ValidationError("cluster_eigenvalues expects a 1-d value sequence")
    if vals.size == 0:
        return ()
    if np.any(np.diff(vals) < 0):
        raise ValidationError("values must be ascending")
    groups: list[list[int]] = [[0]]
    for i in range(1, vals.size):
        if vals[i] - vals[i - 1] > tol_cluster:
            groups.append([i])
        else:
            groups[-1].append(i)
    return tuple(tuple(g) for g in groups)


@dataclass(frozen=True)
class StructuralFlags:
    hermitian: bool
    unitary: bool
    projector: bool
    positive_semidefinite: bool


def structural_checks(m, tol: float = TOL_HERMITIAN) -> StructuralFlags:
    """Independent structural flags for a square matrix.

    positive_semidefinite implies the Hermitian check here; eigenvalues of a
    non-Hermitian matrix are not compared against the threshold.
    """
    a = require_square(m)
    eye = np.eye(a.shape[0])
    herm = hermiticity_defect(a) <= tol
    unitary = float(np.max(np.abs(a.conj().T @ a - eye))) <= tol
    projector = herm and float(np.max(np.abs(a @ a - a))) <= tol
    psd = herm and float(np.min(np.linalg.eigvalsh((a + a.conj().T) / 2))) >= -tol
    return StructuralFlags(herm, unitary, projector, psd)
