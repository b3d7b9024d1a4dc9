"""The measurement chain: pointer apparatus, coupling unitary, collapse map.

The coupling follows a controlled-shift convention. With measured basis
columns b_j and pointer columns F_k,

    U (b_j (x) F_k) = b_j (x) F_{(k + j) mod dim_apparatus}

which on the ready column realizes the one-to-one correlation
b_j (x) F_ready -> b_j (x) F_{ready + j}. Off the ready column the cyclic
extension keeps U a permutation of the product basis, hence exactly unitary;
any other unitary extension acts identically on physical inputs, which
always start in the ready state.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import linalg
from .errors import (
    DegenerateSpectrum,
    DimMismatch,
    NotOrthonormal,
    TooSmall,
    ValidationError,
)
from .linalg import cluster_eigenvalues, default_cluster_tol, hermitian_eigendecompose
from .observables import Observable, ProjectionValuedMeasure, as_observable
from .states import (
    CompositeDims,
    DensityMatrix,
    StateVector,
    as_density,
    as_state,
    partial_trace,
    projector_of,
)

_TOL = 1e-10


def _require_unitary_columns(m, what: str) -> np.ndarray:
    a = linalg.require_square(m)
    defect = float(np.max(np.abs(a.conj().T @ a - np.eye(a.shape[0]))))
    if defect > _TOL:
        raise NotOrthonormal(f"{what} columns are not orthonormal (defect {defect:.3e})")
    return a


@dataclass(frozen=True, eq=False)
class ApparatusModel:
    """Pointer degrees of freedom: an orthonormal pointer basis, the ready
    column, and one real pointer value per registrable outcome."""

    dim_apparatus: int
    pointer_basis: np.ndarray
    ready_index: int
    pointer_values: np.ndarray

    def __post_init__(self) -> None:
        basis = _require_unitary_columns(self.pointer_basis, "pointer basis")
        if basis.shape[0] != self.dim_apparatus:
            raise DimMismatch(
                f"pointer basis is {basis.shape[0]}-dim, apparatus claims {self.dim_apparatus}"
            )
        vals = np.asarray(self.pointer_values, dtype=float)
        if vals.ndim != 1 or vals.size == 0:
            raise ValidationError("pointer_values must be a nonempty 1-d sequence")
        if vals.size > self.dim_apparatus:
            raise TooSmall(
                f"apparatus dim {self.dim_apparatus} cannot register {vals.size} outcomes"
            )
        if np.unique(vals).size != vals.size:
            raise ValidationError("pointer values must be distinct")
        if not 0 <= self.ready_index < self.dim_apparatus:
            raise ValidationError(f"ready_index {self.ready_index} out of range")
        object.__setattr__(self, "pointer_basis", linalg.readonly(basis))
        object.__setattr__(self, "pointer_values", linalg.readonly(vals))

    @property
    def n_outcomes(self) -> int:
        return self.pointer_values.size

    def ready_state(self) -> np.ndarray:
        return self.pointer_basis[:, self.ready_index]

    def pointer_state(self, j: int) -> np.ndarray:
        """Pointer column registering outcome j, cyclically off the ready column."""
        if not 0 <= j < self.n_outcomes:
            raise ValidationError(f"outcome index {j} out of range")
        return self.pointer_basis[:, (self.ready_index + j) % self.dim_apparatus]


def build_apparatus(
    n_outcomes: int,
    dim_apparatus: int | None = None,
    pointer_values=None,
) -> ApparatusModel:
    """Standard-basis apparatus with ready column 0.

    pointer_values defaults to 0..n_outcomes-1; models built from an
    observable override it with the measured eigenvalues.
    """
    if n_outcomes < 1:
        raise ValidationError("need at least one outcome")
    dim = n_outcomes if dim_apparatus is None else int(dim_apparatus)
    if dim < n_outcomes:
        raise TooSmall(f"apparatus dim {dim} cannot register {n_outcomes} outcomes")
    if pointer_values is None:
        vals = np.arange(n_outcomes, dtype=float)
    else:
        vals = np.asarray(pointer_values, dtype=float)
        if vals.ndim != 1 or vals.size != n_outcomes:
            raise ValidationError(
                f"expected {n_outcomes} pointer values, got shape {vals.shape}"
            )
    return ApparatusModel(dim, np.eye(dim, dtype=complex), 0, vals)


@dataclass(frozen=True, eq=False)
class MeasurementModel:
    """A nondegenerate measured basis, its outcome values, the apparatus,
    and the premeasurement coupling between them."""

    measured_pvm: ProjectionValuedMeasure
    measured_basis: np.ndarray
    apparatus: ApparatusModel
    coupling: np.ndarray

    def __post_init__(self) -> None:
        basis = _require_unitary_columns(self.measured_basis, "measured basis")
        d = basis.shape[0]
        if self.measured_pvm.dim != d:
            raise DimMismatch("measured basis and spectral measure disagree on dim")
        if self.apparatus.n_outcomes != d:
            raise DimMismatch(
                f"apparatus registers {self.apparatus.n_outcomes} outcomes, system dim is {d}"
            )
        for k, p in enumerate(self.measured_pvm.projectors):
            if abs(float(np.trace(p).real) - 1.0) > 1e-8:
                raise DegenerateSpectrum(
                    f"outcome {self.measured_pvm.outcomes[k]!r} has rank > 1"
                )
        u = linalg.require_square(self.coupling)
        if u.shape[0] != d * self.apparatus.dim_apparatus:
            raise DimMismatch("coupling does not act on the product space")
        defect = float(np.max(np.abs(u.conj().T @ u - np.eye(u.shape[0]))))
        if defect > _TOL:
            raise ValidationError(f"coupling is not unitary (defect {defect:.3e})")
        ready = self.apparatus.ready_state()
        for j in range(d):
            want = np.kron(basis[:, j], self.apparatus.pointer_state(j))
            got = u @ np.kron(basis[:, j], ready)
            if float(np.linalg.norm(got - want)) > _TOL:
                raise ValidationError(f"coupling does not register outcome {j}")
        object.__setattr__(self, "measured_basis", linalg.readonly(basis))
        object.__setattr__(self, "coupling", linalg.readonly(u))

    @property
    def dim_system(self) -> int:
        return self.measured_basis.shape[0]

    @property
    def dims(self) -> CompositeDims:
        return CompositeDims(self.dim_system, self.apparatus.dim_apparatus)


def build_coupling(
    measured_basis, apparatus: ApparatusModel, measured_values=None
) -> MeasurementModel:
    """Assemble the controlled-shift coupling for an orthonormal measured basis.

    measured_values are the outcome values attached to the basis columns,
    strictly ascending; they default to the apparatus pointer values.
    """
    basis = _require_unitary_columns(measured_basis, "measured basis")
    d = basis.shape[0]
    if apparatus.n_outcomes != d:
        raise DimMismatch(
            f"apparatus registers {apparatus.n_outcomes} outcomes, system dim is {d}"
        )
    if measured_values is None:
        vals = np.asarray(apparatus.pointer_values, dtype=float)
    else:
        vals = np.asarray(measured_values, dtype=float)
    if vals.ndim != 1 or vals.size != d:
        raise ValidationError(f"expected {d} measured values, got shape {vals.shape}")
    if np.any(np.diff(vals) <= 0):
        raise ValidationError("measured values must be strictly ascending")
    projectors = tuple(
        np.outer(basis[:, j], basis[:, j].conj()) for j in range(d)
    )
    pvm = ProjectionValuedMeasure(vals, projectors)

    dm = apparatus.dim_apparatus
    p = apparatus.pointer_basis
    cycle = np.roll(np.eye(dm), 1, axis=0)  # cycle e_k -> e_{k+1 mod dm}
    shift = np.eye(dm, dtype=complex)
    u = np.zeros((d * dm, d * dm), dtype=complex)
    for j in range(d):
        u += np.kron(projectors[j], p @ shift @ p.conj().T)
        shift = cycle @ shift
    return MeasurementModel(pvm, basis, apparatus, u)


def model_for_observable(
    a,
    dim_apparatus: int | None = None,
    pointer_values=None,
    tol_cluster: float | None = None,
) -> MeasurementModel:
    """Measurement model for a nondegenerate Hermitian observable.

    The measured basis is the eigenbasis in ascending eigenvalue order, and
    the pointer values default to copies of the measured eigenvalues. A
    repeated eigenvalue (within the cluster tolerance) raises
    DegenerateSpectrum.
    """
    obs = as_observable(a)
    eig = hermitian_eigendecompose(obs.matrix)
    tol_c = default_cluster_tol(eig.eigenvalues) if tol_cluster is None else tol_cluster
    groups = cluster_eigenvalues(eig.eigenvalues, tol_c)
    if len(groups) != obs.dim:
        sizes = [len(g) for g in groups]
        raise DegenerateSpectrum(
            f"spectrum splits into clusters of sizes {sizes}; need all distinct"
        )
    vals = eig.eigenvalues
    apparatus = build_apparatus(
        obs.dim, dim_apparatus, vals if pointer_values is None else pointer_values
    )
    return build_coupling(eig.eigenvectors, apparatus, measured_values=vals)


def pointer_observable(apparatus: ApparatusModel) -> Observable:
    """The pointer readout: pointer value j on the column registering
    outcome j. Pointer columns never reached from the ready state share one
    idle eigenvalue below the real values, so the readout stays a single
    observable on the full apparatus space."""
    vals = apparatus.pointer_values
    w = np.full(apparatus.dim_apparatus, float(vals.min()) - 1.0)
    for j in range(apparatus.n_outcomes):
        w[(apparatus.ready_index + j) % apparatus.dim_apparatus] = vals[j]
    p = apparatus.pointer_basis
    return Observable((p * w) @ p.conj().T)


def premeasure(psi, model: MeasurementModel) -> StateVector:
    """Couple a pure system state to the ready apparatus.

    The output is sum_j c_j b_j (x) F_j with c_j the overlap of psi with
    measured basis column j. Nothing is discarded and no outcome is chosen.
    """
    p = as_state(psi)
    if p.dim != model.dim_system:
        raise DimMismatch(f"state dim {p.dim}, system dim {model.dim_system}")
    composite = np.kron(p.amplitudes, model.apparatus.ready_state())
    return StateVector(model.coupling @ composite)


def premeasure_density(rho, model: MeasurementModel) -> DensityMatrix:
    """Mixed-state version of premeasure: U (rho (x) |ready><ready|) U^dagger."""
    r = as_density(rho)
    if r.dim != model.dim_system:
        raise DimMismatch(f"state dim {r.dim}, system dim {model.dim_system}")
    ready = model.apparatus.ready_state()
    total = np.kron(r.matrix, np.outer(ready, ready.conj()))
    u = model.coupling
    return DensityMatrix(u @ total @ u.conj().T)


def collapse(rho, measured_basis) -> DensityMatrix:
    """Projective collapse: keep the diagonal of rho in the measured basis.

    Returns sum_n <b_n|rho|b_n> |b_n><b_n|, the post-measurement mixture
    when the outcome is not recorded.
    """
    basis = _require_unitary_columns(measured_basis, "measured basis")
    r = as_density(rho)
    if r.dim != basis.shape[0]:
        raise DimMismatch(f"state dim {r.dim}, basis dim {basis.shape[0]}")
    probs = np.real(np.diag(basis.conj().T @ r.matrix @ basis))
    return DensityMatrix((basis * probs) @ basis.conj().T)


def apparatus_reduced_state(composite, dims: CompositeDims) -> DensityMatrix:
    """Reduced apparatus state of a composite pure state."""
    return partial_trace(projector_of(as_state(composite)), dims, keep="apparatus")


def sample_outcome(
    psi, model: MeasurementModel, rng: np.random.Generator
) -> tuple[float, StateVector]:
    """Draw one outcome with probability |<b_j|psi>|^2.

    Consumes exactly one uniform variate from rng via the inverse CDF over
    outcomes in ascending order. The returned post-state is measured basis
    column j; reporting it is a labeling convention for the run record, not
    a claim about dynamics.
    """
    p = as_state(psi)
    if p.dim != model.dim_system:
        raise DimMismatch(f"state dim {p.dim}, system dim {model.dim_system}")
    amps = model.measured_basis.conj().T @ p.amplitudes
    cum = np.cumsum(np.abs(amps) ** 2)
    j = int(np.searchsorted(cum, rng.random() * cum[-1], side="right"))
    j = min(j, amps.size - 1)
    return float(model.measured_pvm.outcomes[j]), StateVector(model.measured_basis[:, j])
