"""Quantum states: unit vectors, density matrices, composition, reduction.

Composite index convention used by the whole package: a joint basis label is

    i = i_system * dim_apparatus + i_apparatus

so the system is the slow (left) Kronecker factor. Every tensor product and
partial trace below relies on that one line.

States are immutable after validation; constructors re-check their
invariants instead of trusting the caller.
"""

from __future__ import annotations

from dataclasses import InitVar, dataclass
from typing import Sequence

import numpy as np

from . import linalg
from .errors import (
    BadWeights,
    DimMismatch,
    NotHermitian,
    NotNormalized,
    NotPositive,
    TraceNotOne,
    ValidationError,
)

TOL_STATE = 1e-10
_WEIGHT_FLOOR = -1e-12


@dataclass(frozen=True, eq=False)
class StateVector:
    """A normalized pure state."""

    amplitudes: np.ndarray
    tol: InitVar[float] = TOL_STATE

    def __post_init__(self, tol: float) -> None:
        amp = linalg.as_vector(self.amplitudes)
        nrm = float(np.linalg.norm(amp))
        if abs(nrm - 1.0) > tol:
            raise NotNormalized(f"norm is {nrm!r}, expected 1 within {tol:g}")
        object.__setattr__(self, "amplitudes", linalg.readonly(amp))

    @property
    def dim(self) -> int:
        return self.amplitudes.shape[0]

    @classmethod
    def normalized(cls, amplitudes) -> "StateVector":
        """Scale an arbitrary nonzero vector onto the unit sphere."""
        amp = linalg.as_vector(amplitudes)
        nrm = float(np.linalg.norm(amp))
        if nrm == 0.0:
            raise NotNormalized("cannot normalize the zero vector")
        return cls(amp / nrm)


@dataclass(frozen=True, eq=False)
class DensityMatrix:
    """Hermitian, positive semidefinite, unit-trace matrix."""

    matrix: np.ndarray
    tol: InitVar[float] = TOL_STATE

    def __post_init__(self, tol: float) -> None:
        m = linalg.require_square(self.matrix)
        defect = linalg.hermiticity_defect(m)
        if defect > tol:
            raise NotHermitian(f"max |M - M^dagger| entry is {defect:.3e}")
        low = float(np.min(np.linalg.eigvalsh(m)))
        if low < -tol:
            raise NotPositive(f"lowest eigenvalue is {low:.3e}")
        tr = complex(np.trace(m))
        if abs(tr - 1.0) > tol:
            raise TraceNotOne(f"trace is {tr:.12g}")
        object.__setattr__(self, "matrix", linalg.readonly(m))

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]


@dataclass(frozen=True)
class CompositeDims:
    """Factor dimensions of a system (x) apparatus product space."""

    dim_system: int
    dim_apparatus: int

    def __post_init__(self) -> None:
        if self.dim_system < 1 or self.dim_apparatus < 1:
            raise ValidationError("factor dimensions must be positive")

    @property
    def total(self) -> int:
        return self.dim_system * self.dim_apparatus


def as_state(psi) -> StateVector:
    return psi if isinstance(psi, StateVector) else StateVector(psi)


def as_density(rho) -> DensityMatrix:
    return rho if isinstance(rho, DensityMatrix) else DensityMatrix(rho)


def projector_of(psi) -> DensityMatrix:
    """Rank-1 density matrix |psi><psi|; global phase drops out."""
    amp = as_state(psi).amplitudes
    return DensityMatrix(np.outer(amp, amp.conj()))


def mix(weights, states: Sequence[DensityMatrix]) -> DensityMatrix:
    """Convex combination sum_k w_k rho_k of density matrices."""
    w = np.asarray(weights, dtype=float)
    if w.ndim != 1 or w.size == 0:
        raise BadWeights("weights must be a nonempty 1-d sequence")
    if w.size != len(states):
        raise BadWeights(f"{w.size} weights for {len(states)} states")
    if float(w.min()) < _WEIGHT_FLOOR:
        raise BadWeights(f"negative weight {w.min():.3e}")
    if abs(float(w.sum()) - 1.0) > TOL_STATE:
        raise BadWeights(f"weights sum to {w.sum()!r}")
    rhos = [as_density(s) for s in states]
    dim = rhos[0].dim
    if any(r.dim != dim for r in rhos):
        raise DimMismatch("mixture components live on different spaces")
    acc = np.zeros((dim, dim), dtype=complex)
    for wk, rk in zip(w, rhos):
        acc += wk * rk.matrix
    return DensityMatrix(acc)


def tensor_state(psi, phi) -> StateVector:
    """Product state psi (x) phi under the package index convention."""
    return StateVector(np.kron(as_state(psi).amplitudes, as_state(phi).amplitudes))


def partial_trace(rho, dims: CompositeDims, keep: str) -> DensityMatrix:
    """Trace out one tensor factor of a composite density matrix.

    keep selects the surviving factor, "system" or "apparatus".
    """
    r = as_density(rho)
    if r.dim != dims.total:
        raise DimMismatch(
            f"state dim {r.dim} != {dims.dim_system} x {dims.dim_apparatus}"
        )
    t = r.matrix.reshape(
        dims.dim_system, dims.dim_apparatus, dims.dim_system, dims.dim_apparatus
    )
    if keep == "system":
        out = np.trace(t, axis1=1, axis2=3)
    elif keep == "apparatus":
        out = np.trace(t, axis1=0, axis2=2)
    else:
        raise ValidationError(f"keep must be 'system' or 'apparatus', got {keep!r}")
    return DensityMatrix(out)


def validate_density(matrix, tol: float = TOL_STATE) -> DensityMatrix:
    """Check Hermiticity, positivity and unit trace, in that order."""
    return DensityMatrix(matrix, tol)
