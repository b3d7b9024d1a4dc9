"""Hermitian observables, spectral measures, joint diagonalization, statistics.

The spectral side works with point spectra only: a projection valued measure
here is a finite list of ascending outcomes with orthogonal projectors that
resolve the identity. Subsets of the line are finite unions of half-open
intervals, which is all a point spectrum can distinguish.
"""

from __future__ import annotations

import math
from dataclasses import InitVar, dataclass

import numpy as np

from . import linalg
from .errors import (
    DimMismatch,
    NonRealExpectation,
    NotCommuting,
    ValidationError,
)
from .linalg import (
    cluster_eigenvalues,
    default_cluster_tol,
    hermitian_eigendecompose,
    unitary_exp,
)
from .states import StateVector, as_density, as_state

TOL_PROJECTOR = 1e-10
_PROB_FLOOR = -1e-12
_PROB_SUM_TOL = 1e-10


@dataclass(frozen=True, eq=False)
class Observable:
    """A Hermitian matrix. Any Hermitian matrix is accepted."""

    matrix: np.ndarray
    tol: InitVar[float] = linalg.TOL_HERMITIAN

    def __post_init__(self, tol: float) -> None:
        m = linalg.require_hermitian(self.matrix, tol)
        object.__setattr__(self, "matrix", linalg.readonly(m))

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]


def as_observable(a) -> Observable:
    return a if isinstance(a, Observable) else Observable(a)


@dataclass(frozen=True, eq=False)
class ProjectionValuedMeasure:
    """Ascending distinct outcomes paired with an orthogonal resolution of
    the identity. Construction re-checks every axiom."""

    outcomes: np.ndarray
    projectors: tuple[np.ndarray, ...]
    tol: InitVar[float] = TOL_PROJECTOR

    def __post_init__(self, tol: float) -> None:
        out = np.asarray(self.outcomes, dtype=float)
        projs = tuple(linalg.require_square(p) for p in self.projectors)
        if out.ndim != 1 or out.size == 0:
            raise ValidationError("outcomes must be a nonempty 1-d sequence")
        if out.size != len(projs):
            raise ValidationError(f"{out.size} outcomes for {len(projs)} projectors")
        if np.any(np.diff(out) <= 0):
            raise ValidationError("outcomes must be strictly ascending")
        dim = projs[0].shape[0]
        if any(p.shape[0] != dim for p in projs):
            raise DimMismatch("projectors live on different spaces")
        for k, p in enumerate(projs):
            if linalg.hermiticity_defect(p) > tol:
                raise ValidationError(f"projector {k} is not Hermitian")
            if float(np.max(np.abs(p @ p - p))) > tol:
                raise ValidationError(f"projector {k} is not idempotent")
        for j in range(len(projs)):
            for k in range(j + 1, len(projs)):
                if float(np.max(np.abs(projs[j] @ projs[k]))) > tol:
                    raise ValidationError(f"projectors {j} and {k} are not orthogonal")
        total = sum(projs)
        if float(np.max(np.abs(total - np.eye(dim)))) > tol:
            raise ValidationError("projectors do not resolve the identity")
        object.__setattr__(self, "outcomes", linalg.readonly(out))
        object.__setattr__(self, "projectors", tuple(linalg.readonly(p.copy()) for p in projs))

    @property
    def dim(self) -> int:
        return self.projectors[0].shape[0]

    @property
    def n_outcomes(self) -> int:
        return self.outcomes.size


@dataclass(frozen=True, eq=False)
class JointEigenbasis:
    """Orthonormal columns diagonalizing a commuting family, with one row of
    eigenvalues per column (one entry per input observable)."""

    basis: np.ndarray
    value_tuples: np.ndarray

    def __post_init__(self) -> None:
        b = linalg.require_square(self.basis)
        vt = np.asarray(self.value_tuples, dtype=float)
        if vt.ndim != 2 or vt.shape[0] != b.shape[0]:
            raise ValidationError("need one value tuple per basis column")
        defect = float(np.max(np.abs(b.conj().T @ b - np.eye(b.shape[0]))))
        if defect > linalg.TOL_ORTHO:
            raise ValidationError(f"joint basis is not unitary (defect {defect:.3e})")
        object.__setattr__(self, "basis", linalg.readonly(b))
        object.__setattr__(self, "value_tuples", linalg.readonly(vt))

    @property
    def dim(self) -> int:
        return self.basis.shape[0]


@dataclass(frozen=True, eq=False)
class OutcomeDistribution:
    """Outcome values with their probabilities."""

    outcomes: np.ndarray
    probabilities: np.ndarray

    def __post_init__(self) -> None:
        out = np.asarray(self.outcomes, dtype=float)
        p = np.asarray(self.probabilities, dtype=float)
        if out.ndim != 1 or p.ndim != 1 or out.size != p.size or out.size == 0:
            raise ValidationError("outcomes and probabilities must match in length")
        if float(p.min()) < _PROB_FLOOR:
            raise ValidationError(f"probability {p.min():.3e} below the roundoff floor")
        if abs(float(p.sum()) - 1.0) > _PROB_SUM_TOL:
            raise ValidationError(f"probabilities sum to {p.sum()!r}")
        object.__setattr__(self, "outcomes", linalg.readonly(out))
        object.__setattr__(self, "probabilities", linalg.readonly(p))


@dataclass(frozen=True)
class IntervalUnion:
    """Finite union of half-open intervals [lo, hi). Enough structure to
    carve up a point spectrum."""

    intervals: tuple[tuple[float, float], ...]

    def __post_init__(self) -> None:
        cleaned = []
        for pair in self.intervals:
            lo, hi = (float(x) for x in pair)
            if math.isnan(lo) or math.isnan(hi):
                raise ValidationError("interval endpoints must not be NaN")
            cleaned.append((lo, hi))
        object.__setattr__(self, "intervals", tuple(cleaned))

    def contains(self, x: float) -> bool:
        return any(lo <= x < hi for lo, hi in self.intervals)


FULL_LINE = IntervalUnion(((-math.inf, math.inf),))
EMPTY_SET = IntervalUnion(())


def spectral_decomposition(a, tol_cluster: float | None = None) -> ProjectionValuedMeasure:
    """Projection valued measure of a Hermitian matrix.

    Eigenvalues closer than tol_cluster (default 1e-8 relative to the
    spectral radius) are treated as one outcome; the outcome value is the
    cluster mean and the projector spans the whole cluster.
    """
    obs = as_observable(a)
    eig = hermitian_eigendecompose(obs.matrix)
    tol_c = default_cluster_tol(eig.eigenvalues) if tol_cluster is None else tol_cluster
    groups = cluster_eigenvalues(eig.eigenvalues, tol_c)
    outcomes = [float(np.mean(eig.eigenvalues[list(g)])) for g in groups]
    projectors = []
    for g in groups:
        cols = eig.eigenvectors[:, list(g)]
        projectors.append(cols @ cols.conj().T)
    return ProjectionValuedMeasure(np.asarray(outcomes), tuple(projectors))


def pvm_restrict(pvm: ProjectionValuedMeasure, region: IntervalUnion) -> np.ndarray:
    """Spectral projector E(region) = sum of projectors with outcome inside."""
    acc = np.zeros((pvm.dim, pvm.dim), dtype=complex)
    for outcome, proj in zip(pvm.outcomes, pvm.projectors):
        if region.contains(float(outcome)):
            acc += proj
    return linalg.readonly(acc)


def commutes(a, b, tol: float = 1e-10) -> bool:
    """Commutator check scaled by the product of the max-entry norms."""
    oa, ob = as_observable(a), as_observable(b)
    if oa.dim != ob.dim:
        raise DimMismatch(f"dims {oa.dim} and {ob.dim}")
    defect = float(np.max(np.abs(oa.matrix @ ob.matrix - ob.matrix @ oa.matrix)))
    scale = float(np.max(np.abs(oa.matrix))) * float(np.max(np.abs(ob.matrix)))
    return defect <= tol * scale


def joint_eigenblocks(
    observables, tol: float = 1e-10, tol_cluster: float | None = None
) -> list[tuple[np.ndarray, tuple[float, ...]]]:
    """Common eigenspace blocks of a commuting Hermitian family.

    Diagonalizes the first observable, then recursively refines each
    degenerate cluster by the next observable projected into it. Returns
    (column block, eigenvalue tuple) leaves in lexicographic tuple order;
    cluster means are the representative eigenvalues, so the tuples of one
    leaf are exact duplicates across its columns.
    """
    obs = [as_observable(o) for o in observables]
    if not obs:
        raise ValidationError("need at least one observable")
    dim = obs[0].dim
    for o in obs[1:]:
        if o.dim != dim:
            raise DimMismatch("observables live on different spaces")
    for i in range(len(obs)):
        for j in range(i + 1, len(obs)):
            if not commutes(obs[i], obs[j], tol):
                raise NotCommuting(f"observables {i} and {j} do not commute")
    if tol_cluster is None:
        ctols = [default_cluster_tol(np.linalg.eigvalsh(o.matrix)) for o in obs]
    else:
        ctols = [float(tol_cluster)] * len(obs)

    def refine(cols: np.ndarray, k: int) -> list[tuple[np.ndarray, tuple[float, ...]]]:
        if k == len(obs):
            return [(cols, ())]
        block = cols.conj().T @ obs[k].matrix @ cols
        block = (block + block.conj().T) / 2
        w, u = np.linalg.eigh(block)
        leaves = []
        for g in cluster_eigenvalues(w, ctols[k]):
            rep = float(np.mean(w[list(g)]))
            for sub, tail in refine(cols @ u[:, list(g)], k + 1):
                leaves.append((sub, (rep, *tail)))
        return leaves

    return refine(np.eye(dim, dtype=complex), 0)


def joint_eigenbasis(
    observables, tol: float = 1e-10, tol_cluster: float | None = None
) -> JointEigenbasis:
    """Joint eigenbasis of a commuting family, columns in lexicographic
    order of their eigenvalue tuples."""
    leaves = joint_eigenblocks(observables, tol, tol_cluster)
    basis = np.hstack([block for block, _ in leaves])
    tuples = np.array([ch for block, ch in leaves for _ in range(block.shape[1])])
    return JointEigenbasis(basis, tuples)


def born_distribution(rho, pvm: ProjectionValuedMeasure) -> OutcomeDistribution:
    """Outcome probabilities p_k = Tr(rho E_k)."""
    r = as_density(rho)
    if r.dim != pvm.dim:
        raise DimMismatch(f"state dim {r.dim}, measure dim {pvm.dim}")
    p = np.array([float(np.trace(r.matrix @ e).real) for e in pvm.projectors])
    return OutcomeDistribution(pvm.outcomes, p)


def expectation(rho, a) -> float:
    """Tr(rho A). The imaginary part must vanish to 1e-10 and is dropped."""
    r = as_density(rho)
    obs = as_observable(a)
    if r.dim != obs.dim:
        raise DimMismatch(f"state dim {r.dim}, observable dim {obs.dim}")
    val = complex(np.trace(r.matrix @ obs.matrix))
    if abs(val.imag) > 1e-10:
        raise NonRealExpectation(f"Tr(rho A) = {val!r}")
    return float(val.real)


def evolve(psi, h, t: float) -> StateVector:
    """Apply exp(-i t H) to a pure state."""
    p = as_state(psi)
    obs = as_observable(h)
    if p.dim != obs.dim:
        raise DimMismatch(f"state dim {p.dim}, generator dim {obs.dim}")
    return StateVector(unitary_exp(obs.matrix, t) @ p.amplitudes)
