"""Scenario ingestion and experiment orchestration.

A scenario file is a single JSON object with exactly these fields:

    {
      "system_dim": 2,
      "initial_state": {"kind": "vector", "data": [[0.6, 0], [0.8, 0]],
                        "normalize": false},
      "observable": [[[0, 0], [0, 0]], [[0, 0], [1, 0]]],
      "apparatus": {"dim": 2, "pointer_values": [0, 1]},
      "algebra_generators": [ ... ],
      "trials": 100000,
      "seed": 7
    }

Complex scalars are [re, im] pairs, matrices are row-major nested lists of
them. initial_state.kind is "vector" or "density"; the optional normalize
flag rescales the data (unit norm for vectors, unit trace for densities)
before validation. apparatus.pointer_values and algebra_generators are
optional; generators act on the apparatus space and default to the pointer
readout alone. Unknown fields anywhere are rejected.

Running a scenario computes the outcome statistics three ways and reports
the worst disagreement: the spectral probabilities of the measured
observable, the diagonal kept by the collapse map, and the weights the
premeasured composite induces on the commutative readout algebra after the
system is traced out. With trials > 0 the report also carries sampled
counts; trial t consumes the t-th variate of a dedicated substream, so the
counts depend only on (seed, trials).
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .algebra import generate_algebra, gelfand_transform, restrict_state
from .errors import (
    BadAmplitudes,
    NotInAlgebra,
    ParseError,
    QmError,
    ValidationError,
)
from .measurement import (
    apparatus_reduced_state,
    build_apparatus,
    build_coupling,
    collapse,
    model_for_observable,
    pointer_observable,
    premeasure,
    premeasure_density,
)
from .observables import (
    Observable,
    born_distribution,
    expectation,
    spectral_decomposition,
)
from .randomness import rand_state, rand_unitary, substream
from .report import ComparisonSummary, EmpiricalCounts, Report
from .states import DensityMatrix, StateVector, partial_trace, projector_of, validate_density

_TRIALS_TAG = 1
_COMPARE_TAG = 2

_MAX_SEED = 2**64


@dataclass(frozen=True, eq=False)
class Scenario:
    """A parsed and validated run description."""

    system_dim: int
    initial_state: StateVector | DensityMatrix
    measured_observable: Observable
    apparatus_dim: int
    pointer_values: tuple[float, ...] | None
    algebra_generators: tuple[Observable, ...] | None
    trials: int
    seed: int


def _check_fields(doc: dict, required: set[str], optional: set[str], where: str) -> None:
    for key in doc:
        if key not in required and key not in optional:
            raise ParseError(f"{where}: unknown field {key!r}")
    for key in required:
        if key not in doc:
            raise ParseError(f"{where}: missing field {key!r}")


def _int_field(doc: dict, key: str, where: str) -> int:
    val = doc[key]
    if isinstance(val, bool) or not isinstance(val, int):
        raise ParseError(f"{where}.{key}: expected an integer")
    return val


def _complex_entry(x, where: str) -> complex:
    if (
        not isinstance(x, list)
        or len(x) != 2
        or any(isinstance(v, bool) or not isinstance(v, (int, float)) for v in x)
    ):
        raise ParseError(f"{where}: complex entries are [re, im] pairs, got {x!r}")
    return complex(x[0], x[1])


def _complex_vector(x, where: str) -> np.ndarray:
    if not isinstance(x, list) or not x:
        raise ParseError(f"{where}: expected a nonempty list")
    return np.array([_complex_entry(v, f"{where}[{i}]") for i, v in enumerate(x)])


def _complex_matrix(x, where: str) -> np.ndarray:
    if not isinstance(x, list) or not x:
        raise ParseError(f"{where}: expected a nonempty list of rows")
    rows = [_complex_vector(row, f"{where}[{i}]") for i, row in enumerate(x)]
    width = rows[0].size
    if any(r.size != width for r in rows):
        raise ParseError(f"{where}: rows differ in length")
    return np.array(rows)


def _wrap(where: str, build):
    """Run a constructor, renaming any package error to a ValidationError
    that names the violated invariant and the offending field."""
    try:
        return build()
    except QmError as err:
        raise ValidationError(f"{where}: {type(err).__name__}: {err}") from err


def _parse_initial_state(doc, system_dim: int) -> StateVector | DensityMatrix:
    where = "initial_state"
    if not isinstance(doc, dict):
        raise ParseError(f"{where}: expected an object")
    _check_fields(doc, {"kind", "data"}, {"normalize"}, where)
    kind = doc["kind"]
    if kind not in ("vector", "density"):
        raise ParseError(f"{where}.kind: expected 'vector' or 'density', got {kind!r}")
    normalize = doc.get("normalize", False)
    if not isinstance(normalize, bool):
        raise ParseError(f"{where}.normalize: expected a boolean")
    if kind == "vector":
        data = _complex_vector(doc["data"], f"{where}.data")
        if data.size != system_dim:
            raise ValidationError(
                f"{where}.data: length {data.size} does not match system_dim {system_dim}"
            )
        if normalize:
            return _wrap(where, lambda: StateVector.normalized(data))
        return _wrap(where, lambda: StateVector(data))
    data = _complex_matrix(doc["data"], f"{where}.data")
    if data.shape != (system_dim, system_dim):
        raise ValidationError(
            f"{where}.data: shape {data.shape} does not match system_dim {system_dim}"
        )
    if normalize:
        tr = float(np.trace(data).real)
        if tr <= 0:
            raise ValidationError(f"{where}.data: cannot normalize trace {tr!r}")
        data = data / tr
    return _wrap(where, lambda: validate_density(data))


def parse_scenario(text: str) -> Scenario:
    """Parse and validate a scenario document.

    Malformed structure raises ParseError with the line or field; documents
    that parse but break an invariant raise ValidationError naming it.
    """
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as err:
        raise ParseError(f"line {err.lineno}, column {err.colno}: {err.msg}") from err
    if not isinstance(doc, dict):
        raise ParseError("top level: expected a JSON object")
    _check_fields(
        doc,
        {"system_dim", "initial_state", "observable", "apparatus", "trials", "seed"},
        {"algebra_generators"},
        "top level",
    )

    system_dim = _int_field(doc, "system_dim", "top level")
    if system_dim < 1:
        raise ValidationError(f"system_dim must be positive, got {system_dim}")

    state = _parse_initial_state(doc["initial_state"], system_dim)

    obs_data = _complex_matrix(doc["observable"], "observable")
    if obs_data.shape != (system_dim, system_dim):
        raise ValidationError(
            f"observable: shape {obs_data.shape} does not match system_dim {system_dim}"
        )
    observable = _wrap("observable", lambda: Observable(obs_data))

    app = doc["apparatus"]
    if not isinstance(app, dict):
        raise ParseError("apparatus: expected an object")
    _check_fields(app, {"dim"}, {"pointer_values"}, "apparatus")
    apparatus_dim = _int_field(app, "dim", "apparatus")
    if apparatus_dim < system_dim:
        raise ValidationError(
            f"apparatus.dim: {apparatus_dim} cannot register {system_dim} outcomes"
        )
    pointer_values: tuple[float, ...] | None = None
    if "pointer_values" in app:
        pv = app["pointer_values"]
        if (
            not isinstance(pv, list)
            or not pv
            or any(isinstance(v, bool) or not isinstance(v, (int, float)) for v in pv)
        ):
            raise ParseError("apparatus.pointer_values: expected a list of numbers")
        if len(pv) != system_dim:
            raise ValidationError(
                f"apparatus.pointer_values: need one value per outcome ({system_dim})"
            )
        pointer_values = tuple(float(v) for v in pv)

    generators: tuple[Observable, ...] | None = None
    if "algebra_generators" in doc:
        gen_docs = doc["algebra_generators"]
        if not isinstance(gen_docs, list) or not gen_docs:
            raise ParseError("algebra_generators: expected a nonempty list of matrices")
        parsed = []
        for i, g in enumerate(gen_docs):
            where = f"algebra_generators[{i}]"
            mat = _complex_matrix(g, where)
            if mat.shape != (apparatus_dim, apparatus_dim):
                raise ValidationError(
                    f"{where}: shape {mat.shape} does not match apparatus.dim {apparatus_dim}"
                )
            parsed.append(_wrap(where, lambda m=mat: Observable(m)))
        generators = tuple(parsed)

    trials = _int_field(doc, "trials", "top level")
    if trials < 0:
        raise ValidationError(f"trials must be nonnegative, got {trials}")
    seed = _int_field(doc, "seed", "top level")
    if not 0 <= seed < _MAX_SEED:
        raise ValidationError("seed must fit in 64 bits")

    return Scenario(
        system_dim=system_dim,
        initial_state=state,
        measured_observable=observable,
        apparatus_dim=apparatus_dim,
        pointer_values=pointer_values,
        algebra_generators=generators,
        trials=trials,
        seed=seed,
    )


def load_scenario(path) -> Scenario:
    return parse_scenario(Path(path).read_text())


def _sample_counts(probabilities: np.ndarray, seed: int, trials: int) -> EmpiricalCounts:
    """Inverse-CDF sampling; trial t consumes the t-th uniform of the
    (seed, trials) substream, identical to t sequential draws."""
    rng = substream(seed, _TRIALS_TAG)
    cum = np.cumsum(probabilities)
    u = rng.random(trials) * cum[-1]
    idx = np.minimum(
        np.searchsorted(cum, u, side="right"), probabilities.size - 1
    )
    counts = np.bincount(idx, minlength=probabilities.size)
    return EmpiricalCounts(
        counts=tuple(int(c) for c in counts),
        frequencies=tuple(float(c) / trials for c in counts),
        trials=trials,
    )


def _match_outcome(value: float, targets: np.ndarray) -> int | None:
    """Index of the target closest to value, if convincingly close."""
    gaps = np.abs(targets - value)
    j = int(np.argmin(gaps))
    scale = max(1.0, float(np.max(np.abs(targets))))
    if gaps[j] <= 1e-6 * scale:
        return j
    return None


def run_scenario(s: Scenario) -> Report:
    """Execute one scenario and cross-check the three analytic routes."""
    model = model_for_observable(
        s.measured_observable,
        dim_apparatus=s.apparatus_dim,
        pointer_values=s.pointer_values,
    )
    pure = isinstance(s.initial_state, StateVector)
    rho = projector_of(s.initial_state) if pure else s.initial_state

    born = born_distribution(rho, model.measured_pvm)
    collapsed = collapse(rho, model.measured_basis)
    basis = model.measured_basis
    collapsed_diag = np.real(np.diag(basis.conj().T @ collapsed.matrix @ basis))

    pointer = pointer_observable(model.apparatus)
    generators = s.algebra_generators if s.algebra_generators else (pointer,)
    algebra = generate_algebra(generators)
    try:
        pointer_chars = gelfand_transform(algebra, pointer)
    except NotInAlgebra as err:
        raise ValidationError(
            "algebra_generators: the generated algebra does not contain the "
            f"pointer readout ({err})"
        ) from err

    if pure:
        composite = premeasure(s.initial_state, model)
        rho_app = apparatus_reduced_state(composite, model.dims)
    else:
        rho_app = partial_trace(premeasure_density(rho, model), model.dims, "apparatus")
    restricted = restrict_state(rho_app, algebra)

    # fold restriction weights back onto measured outcomes via the pointer
    # value each spectrum point carries; idle points must carry no weight
    n = born.outcomes.size
    aligned = np.zeros(n)
    values = model.apparatus.pointer_values
    for k, char in enumerate(pointer_chars):
        j = _match_outcome(float(char), values)
        if j is not None:
            aligned[j] += restricted.weights[k]
        elif restricted.weights[k] > 1e-10:
            raise ValidationError(
                f"restriction puts weight {restricted.weights[k]:.3e} outside the pointer range"
            )

    branches = [model.apparatus.pointer_state(j) for j in range(n)]
    cross_terms = _branch_cross_terms(generators, branches)

    deviation = max(
        float(np.max(np.abs(born.probabilities - collapsed_diag))),
        float(np.max(np.abs(born.probabilities - aligned))),
    )

    empirical = None
    if s.trials > 0:
        empirical = _sample_counts(born.probabilities, s.seed, s.trials)

    return Report(
        born=born,
        collapsed_diag=tuple(float(x) for x in collapsed_diag),
        restricted=restricted,
        restricted_characters=tuple(
            tuple(float(x) for x in row) for row in algebra.characters
        ),
        empirical=empirical,
        max_deviation=deviation,
        cross_terms=cross_terms,
    )


def _branch_cross_terms(generators, branches) -> tuple[float, ...]:
    """Largest |<branch_j| g |branch_k>|, j != k, per generator."""
    out = []
    for g in generators:
        worst = 0.0
        for j in range(len(branches)):
            for k in range(len(branches)):
                if j == k:
                    continue
                val = abs(complex(branches[j].conj() @ (g.matrix @ branches[k])))
                worst = max(worst, val)
        out.append(worst)
    return tuple(out)


def _popcount(n: int) -> int:
    return bin(n).count("1")


def run_cat(
    c1, c2, macro_dim: int | None = None, chain_length: int | None = 8
) -> Report:
    """Superpose two macroscopically distinct branches and read them through
    a commutative readout.

    With chain_length L the space is a chain of L two-level cells; branch 1
    is all cells up (total readout +L), branch 2 all cells down (-L), and
    the readout algebra is generated by the total of the per-cell values.
    With macro_dim the branches are the extreme columns of a position-like
    diagonal readout instead. c1 carries branch 1 (the highest readout
    value), c2 branch 2 (the lowest): any "alive"/"dead" naming of those two
    is report metadata, the logic only keys on outcome values.

    The report's max_deviation also folds in the residual of the branch
    expectation decomposition <Psi|g|Psi> = |c1|^2 <Psi1|g|Psi1> +
    |c2|^2 <Psi2|g|Psi2> per generator.
    """
    c1, c2 = complex(c1), complex(c2)
    total = abs(c1) ** 2 + abs(c2) ** 2
    if abs(total - 1.0) > 1e-10:
        raise BadAmplitudes(f"|c1|^2 + |c2|^2 = {total!r}")

    if chain_length is not None:
        if not 1 <= chain_length <= 10:
            raise ValidationError("chain_length must be between 1 and 10")
        dim = 2**chain_length
        readout = np.array(
            [chain_length - 2 * _popcount(b) for b in range(dim)], dtype=float
        )
        idx_top, idx_bottom = 0, dim - 1  # all-up carries +L, all-down -L
    else:
        if macro_dim is None or macro_dim < 2:
            raise ValidationError("need chain_length or macro_dim >= 2")
        if macro_dim > 4096:
            raise ValidationError("macro_dim beyond desk scale")
        dim = int(macro_dim)
        readout = np.arange(dim, dtype=float)
        idx_top, idx_bottom = dim - 1, 0

    amps = np.zeros(dim, dtype=complex)
    amps[idx_top] = c1
    amps[idx_bottom] = c2
    psi = StateVector(amps)
    rho = projector_of(psi)
    generator = Observable(np.diag(readout))

    algebra = generate_algebra([generator])
    restricted = restrict_state(rho, algebra)
    born = born_distribution(rho, spectral_decomposition(generator))

    # collapse in the joint eigenbasis, then aggregate the kept diagonal per
    # readout outcome: the von Neumann route to the same statistics
    collapsed = collapse(rho, np.eye(dim, dtype=complex))
    collapsed_agg = np.array(
        [float(np.trace(collapsed.matrix @ p).real) for p in algebra.joint_projectors]
    )

    branch_top = np.zeros(dim, dtype=complex)
    branch_top[idx_top] = 1.0
    branch_bottom = np.zeros(dim, dtype=complex)
    branch_bottom[idx_bottom] = 1.0
    branches = [branch_top, branch_bottom]
    cross_terms = _branch_cross_terms(algebra.generators, branches)

    resid = 0.0
    rho_top = projector_of(branch_top)
    rho_bottom = projector_of(branch_bottom)
    for g in algebra.generators:
        mixed = expectation(rho, g)
        split = abs(c1) ** 2 * expectation(rho_top, g) + abs(c2) ** 2 * expectation(
            rho_bottom, g
        )
        resid = max(resid, abs(mixed - split))

    deviation = max(
        float(np.max(np.abs(born.probabilities - restricted.weights))),
        float(np.max(np.abs(born.probabilities - collapsed_agg))),
        resid,
    )
    return Report(
        born=born,
        collapsed_diag=tuple(float(x) for x in collapsed_agg),
        restricted=restricted,
        restricted_characters=tuple(
            tuple(float(x) for x in row) for row in algebra.characters
        ),
        empirical=None,
        max_deviation=deviation,
        cross_terms=cross_terms,
    )


def compare_collapse_vs_restriction(
    s: Scenario, n_random: int, seed: int | None = None
) -> ComparisonSummary:
    """Randomized agreement check at the scenario's dimension.

    Each case draws a state and a measured basis from its own substream
    (seed, 2, case_index), runs both routes with a minimal apparatus, and
    records the worst elementwise gap. Bit-for-bit reproducible for a given
    (seed, n_random).
    """
    if n_random < 1:
        raise ValidationError("n_random must be positive")
    master = s.seed if seed is None else int(seed)
    d = s.system_dim
    apparatus = build_apparatus(d)
    pointer = pointer_observable(apparatus)
    algebra = generate_algebra([pointer])
    devs = np.zeros(n_random)
    for i in range(n_random):
        rng = substream(master, _COMPARE_TAG, i)
        psi = StateVector(rand_state(d, rng))
        basis = rand_unitary(d, rng)
        model = build_coupling(basis, apparatus)
        rho_app = apparatus_reduced_state(premeasure(psi, model), model.dims)
        weights = restrict_state(rho_app, algebra).weights
        collapsed = collapse(projector_of(psi), basis)
        diag = np.real(np.diag(basis.conj().T @ collapsed.matrix @ basis))
        devs[i] = float(np.max(np.abs(weights - diag)))
    worst_index = int(np.argmax(devs))
    return ComparisonSummary(
        dim=d,
        n_random=n_random,
        seed=master,
        worst=float(devs[worst_index]),
        mean=float(devs.mean()),
        worst_index=worst_index,
        worst_case_key=(master, _COMPARE_TAG, worst_index),
    )
