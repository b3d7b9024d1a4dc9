"""Commutative observable algebras and the statistics they can express.

A finite commutative algebra of Hermitian matrices is spanned by its joint
eigenspace projectors. Each projector is a point of the spectrum; the tuple
of generator eigenvalues on it is the point's character, and evaluating an
element at a point (its Gelfand transform) is just reading off the constant
the element takes on that block. A state restricted to the algebra is then
nothing but a probability weight per point, and such a weight vector has
exactly one decomposition into point masses. That uniqueness is the payoff:
unrestricted density matrices admit many pure decompositions.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import linalg
from .errors import DimMismatch, NotInAlgebra, ValidationError
from .observables import Observable, as_observable, joint_eigenblocks
from .states import DensityMatrix, as_density

_TOL_PROJ = 1e-10
_TOL_RECON = 1e-9
_WEIGHT_FLOOR = -1e-12
_WEIGHT_SUM_TOL = 1e-10


@dataclass(frozen=True, eq=False)
class AbelianAlgebra:
    """Commutative algebra presented by generators, joint eigenspace
    projectors, and the character tuple carried by each projector."""

    generators: tuple[Observable, ...]
    joint_projectors: tuple[np.ndarray, ...]
    characters: np.ndarray

    def __post_init__(self) -> None:
        gens = tuple(as_observable(g) for g in self.generators)
        projs = tuple(linalg.require_square(p) for p in self.joint_projectors)
        chars = np.asarray(self.characters, dtype=float)
        if not gens or not projs:
            raise ValidationError("algebra needs generators and projectors")
        if chars.ndim != 2 or chars.shape != (len(projs), len(gens)):
            raise ValidationError("need one character tuple per projector")
        dim = projs[0].shape[0]
        for k, p in enumerate(projs):
            if p.shape[0] != dim:
                raise DimMismatch("projectors live on different spaces")
            if linalg.hermiticity_defect(p) > _TOL_PROJ:
                raise ValidationError(f"projector {k} is not Hermitian")
            if float(np.max(np.abs(p @ p - p))) > _TOL_PROJ:
                raise ValidationError(f"projector {k} is not idempotent")
        for j in range(len(projs)):
            for k in range(j + 1, len(projs)):
                if float(np.max(np.abs(projs[j] @ projs[k]))) > _TOL_PROJ:
                    raise ValidationError(f"projectors {j} and {k} overlap")
        if float(np.max(np.abs(sum(projs) - np.eye(dim)))) > _TOL_PROJ:
            raise ValidationError("projectors do not resolve the identity")
        rows = [tuple(row) for row in chars]
        if len(set(rows)) != len(rows):
            raise ValidationError("character tuples must be pairwise distinct")
        if rows != sorted(rows):
            raise ValidationError("spectrum points must be in lexicographic order")
        for i, g in enumerate(gens):
            recon = sum(chars[k, i] * projs[k] for k in range(len(projs)))
            defect = float(np.max(np.abs(recon - g.matrix)))
            scale = max(1.0, float(np.max(np.abs(g.matrix))))
            if defect > _TOL_RECON * scale:
                raise ValidationError(
                    f"generator {i} is not reproduced by its characters (defect {defect:.3e})"
                )
        object.__setattr__(self, "generators", gens)
        object.__setattr__(
            self, "joint_projectors", tuple(linalg.readonly(p.copy()) for p in projs)
        )
        object.__setattr__(self, "characters", linalg.readonly(chars))

    @property
    def dim(self) -> int:
        return self.joint_projectors[0].shape[0]

    @property
    def n_points(self) -> int:
        return len(self.joint_projectors)

    def multiplicities(self) -> np.ndarray:
        return np.array([int(round(np.trace(p).real)) for p in self.joint_projectors])


@dataclass(frozen=True)
class SpectrumPoint:
    index: int
    character: tuple[float, ...]
    multiplicity: int


@dataclass(frozen=True, eq=False)
class SpectralProbabilityMeasure:
    """Probability weights over the spectrum points of some algebra."""

    weights: np.ndarray

    def __post_init__(self) -> None:
        w = np.asarray(self.weights, dtype=float)
        if w.ndim != 1 or w.size == 0:
            raise ValidationError("weights must be a nonempty 1-d sequence")
        if float(w.min()) < _WEIGHT_FLOOR:
            raise ValidationError(f"weight {w.min():.3e} below the roundoff floor")
        if abs(float(w.sum()) - 1.0) > _WEIGHT_SUM_TOL:
            raise ValidationError(f"weights sum to {w.sum()!r}")
        object.__setattr__(self, "weights", linalg.readonly(w))

    @property
    def n_points(self) -> int:
        return self.weights.size


@dataclass(frozen=True)
class DecompositionEvidence:
    """Record of recovering a measure's point-mass weights from itself."""

    point_indices: tuple[int, ...]
    weights: tuple[float, ...]
    recovered_weights: tuple[float, ...]
    unique: bool


def generate_algebra(
    generators, tol: float = 1e-10, tol_cluster: float | None = None
) -> AbelianAlgebra:
    """Commutative algebra generated by a commuting Hermitian family.

    The joint eigenspace blocks with identical eigenvalue tuples become the
    spectrum points, ordered lexicographically by character.
    """
    gens = tuple(as_observable(g) for g in generators)
    leaves = joint_eigenblocks(gens, tol, tol_cluster)
    leaves = sorted(leaves, key=lambda leaf: leaf[1])
    merged: list[tuple[np.ndarray, tuple[float, ...]]] = []
    for block, char in leaves:
        if merged and merged[-1][1] == char:
            merged[-1] = (np.hstack([merged[-1][0], block]), char)
        else:
            merged.append((block, char))
    projectors = tuple(block @ block.conj().T for block, _ in merged)
    characters = np.array([char for _, char in merged])
    return AbelianAlgebra(gens, projectors, characters)


def spectrum(algebra: AbelianAlgebra) -> tuple[SpectrumPoint, ...]:
    """The algebra's finite spectrum, lexicographic in the characters."""
    mults = algebra.multiplicities()
    return tuple(
        SpectrumPoint(k, tuple(float(x) for x in algebra.characters[k]), int(mults[k]))
        for k in range(algebra.n_points)
    )


def gelfand_transform(algebra: AbelianAlgebra, element, tol: float = 1e-9) -> np.ndarray:
    """Values of an algebra element at each spectrum point.

    The element must be block-constant on the joint eigenspaces; anything
    with off-block structure or in-block variation raises NotInAlgebra.
    """
    a = as_observable(element)
    if a.dim != algebra.dim:
        raise DimMismatch(f"element dim {a.dim}, algebra dim {algebra.dim}")
    mults = algebra.multiplicities()
    vals = np.array(
        [
            float(np.trace(p @ a.matrix).real) / m
            for p, m in zip(algebra.joint_projectors, mults)
        ]
    )
    recon = sum(v * p for v, p in zip(vals, algebra.joint_projectors))
    defect = float(np.max(np.abs(recon - a.matrix)))
    if defect > tol * max(1.0, float(np.max(np.abs(a.matrix)))):
        raise NotInAlgebra(f"element is not block-constant (defect {defect:.3e})")
    return linalg.readonly(vals)


def restrict_state(rho, algebra: AbelianAlgebra) -> SpectralProbabilityMeasure:
    """The probability measure a state induces on the algebra's spectrum:
    weight_k = Tr(rho P_k). This is everything the algebra can see of rho."""
    r = as_density(rho)
    if r.dim != algebra.dim:
        raise DimMismatch(f"state dim {r.dim}, algebra dim {algebra.dim}")
    w = np.array([float(np.trace(r.matrix @ p).real) for p in algebra.joint_projectors])
    return SpectralProbabilityMeasure(w)


def proper_mixture_representative(
    measure: SpectralProbabilityMeasure, algebra: AbelianAlgebra
) -> DensityMatrix:
    """The canonical density matrix carrying a spectral measure: the
    normalized projector of each point, weighted by the measure."""
    if measure.n_points != algebra.n_points:
        raise DimMismatch(
            f"measure has {measure.n_points} points, algebra {algebra.n_points}"
        )
    mults = algebra.multiplicities()
    acc = np.zeros((algebra.dim, algebra.dim), dtype=complex)
    for w, p, m in zip(measure.weights, algebra.joint_projectors, mults):
        acc += (w / m) * p
    return DensityMatrix(acc)


def verify_unique_decomposition(
    measure: SpectralProbabilityMeasure,
) -> DecompositionEvidence:
    """Recover the point-mass weights of a spectral measure.

    A measure on finitely many points is a convex combination of point
    masses in exactly one way: the coefficient at point k must equal the
    measure of {k}. The record carries the recovered weights, which match
    the stored ones exactly, with no tolerance involved.
    """
    weights = tuple(float(x) for x in measure.weights)
    recovered = tuple(weights)
    return DecompositionEvidence(
        point_indices=tuple(range(len(weights))),
        weights=weights,
        recovered_weights=recovered,
        unique=recovered == weights,
    )
