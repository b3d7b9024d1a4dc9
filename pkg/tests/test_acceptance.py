"""Acceptance suite: the nine contract-level checks, full sizes, stated
tolerances. Each test prints one ACCEPTANCE line, bypassing capture so the
verdicts always land in the run log."""

import json
import sys
import time
from pathlib import Path

import numpy as np

from qmeasure.algebra import generate_algebra, restrict_state
from qmeasure.linalg import kronecker
from qmeasure.measurement import (
    apparatus_reduced_state,
    build_apparatus,
    build_coupling,
    collapse,
    pointer_observable,
    premeasure,
)
from qmeasure.observables import evolve, joint_eigenbasis, spectral_decomposition
from qmeasure.randomness import rand_hermitian, rand_state, rand_unitary, substream
from qmeasure.report import emit_report
from qmeasure.scenario import load_scenario, run_cat, run_scenario
from qmeasure.states import CompositeDims, StateVector, partial_trace, projector_of
from qmeasure.verification import check_simplex_contrast

_SEED = 20260819
_SCENARIO_DIR = Path(__file__).resolve().parent.parent / "scenarios"


def _announce(capsys, num: int, name: str, passed: bool, detail: str) -> None:
    verdict = "PASS" if passed else "FAIL"
    with capsys.disabled():
        print(f"ACCEPTANCE {num} {verdict} {name}: {detail}", flush=True)


def test_acceptance_1_collapse_restriction_equivalence(capsys):
    tol = 1e-9
    t0 = time.perf_counter()
    worst = 0.0
    cases = 0
    for d in range(2, 11):
        apparatus = build_apparatus(d)
        algebra = generate_algebra([pointer_observable(apparatus)])
        for i in range(200):
            rng = substream(_SEED, 1, d, i)
            psi = StateVector(rand_state(d, rng))
            basis = rand_unitary(d, rng)
            model = build_coupling(basis, apparatus)
            rho_app = apparatus_reduced_state(premeasure(psi, model), model.dims)
            weights = restrict_state(rho_app, algebra).weights
            diag = np.real(
                np.diag(basis.conj().T @ collapse(projector_of(psi), basis).matrix @ basis)
            )
            worst = max(worst, float(np.max(np.abs(diag - weights))))
            cases += 1
    elapsed = time.perf_counter() - t0
    passed = worst <= tol
    _announce(
        capsys,
        1,
        "collapse vs restriction",
        passed,
        f"worst {worst:.3e} (tol {tol:g}, {cases} cases dims 2..10, {elapsed:.2f}s)",
    )
    assert passed, f"worst deviation {worst:.3e} exceeds {tol:g}"


def test_acceptance_2_coupling_fidelity(capsys):
    tol = 1e-10
    t0 = time.perf_counter()
    worst_amp = 0.0
    worst_unitary = 0.0
    for i in range(100):
        rng = substream(_SEED, 2, i)
        d = 2 + i % 7  # dims 2..8
        basis = rand_unitary(d, rng)
        apparatus = build_apparatus(d)
        model = build_coupling(basis, apparatus)
        u = model.coupling
        worst_unitary = max(
            worst_unitary,
            float(np.max(np.abs(u.conj().T @ u - np.eye(d * d)))),
        )
        psi = rand_state(d, rng)
        out = premeasure(StateVector(psi), model).amplitudes
        c = basis.conj().T @ psi
        want = np.zeros(d * d, dtype=complex)
        for j in range(d):
            want += c[j] * np.kron(basis[:, j], np.eye(d)[:, j])
        worst_amp = max(worst_amp, float(np.max(np.abs(out - want))))
    elapsed = time.perf_counter() - t0
    worst = max(worst_amp, worst_unitary)
    passed = worst <= tol
    _announce(
        capsys,
        2,
        "coupling fidelity",
        passed,
        f"amplitudes {worst_amp:.3e}, unitarity {worst_unitary:.3e} "
        f"(tol {tol:g}, 100 states dims 2..8, {elapsed:.2f}s)",
    )
    assert passed, f"worst defect {worst:.3e} exceeds {tol:g}"


def test_acceptance_3_born_rule_statistics(capsys):
    t0 = time.perf_counter()
    scenario = load_scenario(_SCENARIO_DIR / "qubit_0608.json")
    assert scenario.trials == 100_000
    first = run_scenario(scenario)
    second = run_scenario(scenario)
    identical = emit_report(first, "json") == emit_report(second, "json")

    probs = np.array([0.36, 0.64])
    freqs = np.array(first.empirical.frequencies)
    sigma = np.sqrt(probs * (1 - probs) / scenario.trials)
    worst_sigmas = float(np.max(np.abs(freqs - probs) / sigma))
    elapsed = time.perf_counter() - t0
    passed = worst_sigmas <= 4.0 and identical
    _announce(
        capsys,
        3,
        "Born statistics",
        passed,
        f"worst {worst_sigmas:.2f} sigma of 4, rerun identical: {identical} "
        f"(T=100000, seed {scenario.seed}, {elapsed:.2f}s)",
    )
    assert worst_sigmas <= 4.0, f"frequencies off by {worst_sigmas:.2f} sigma"
    assert identical, "rerun report is not byte-identical"


def test_acceptance_4_spectral_measure_axioms(capsys):
    tol = 1e-9
    t0 = time.perf_counter()
    worst = 0.0
    for i in range(100):
        rng = substream(_SEED, 4, i)
        d = 2 + i % 11  # dims 2..12
        a = rand_hermitian(d, rng)
        pvm = spectral_decomposition(a)
        projs = pvm.projectors
        for j in range(len(projs)):
            for k in range(j + 1, len(projs)):
                worst = max(worst, float(np.max(np.abs(projs[j] @ projs[k]))))
        worst = max(worst, float(np.max(np.abs(sum(projs) - np.eye(d)))))
        recon = sum(lam * p for lam, p in zip(pvm.outcomes, projs))
        worst = max(worst, float(np.max(np.abs(recon - a))))
    elapsed = time.perf_counter() - t0
    passed = worst <= tol
    _announce(
        capsys,
        4,
        "spectral measure axioms",
        passed,
        f"worst {worst:.3e} (tol {tol:g}, 100 matrices dims 2..12, {elapsed:.2f}s)",
    )
    assert passed, f"worst axiom defect {worst:.3e} exceeds {tol:g}"


def test_acceptance_5_joint_diagonalization(capsys):
    tol = 1e-8
    t0 = time.perf_counter()
    worst = 0.0
    all_distinct = True
    for i in range(100):
        rng = substream(_SEED, 5, i)
        d = 2 + i % 11  # dims 2..12
        h = rand_hermitian(d, rng)
        h = h / max(1.0, float(np.max(np.abs(np.linalg.eigvalsh(h)))))
        family = [h]
        for row in rng.standard_normal((2, 4)):
            family.append(row[0] * np.eye(d) + row[1] * h + row[2] * h @ h + row[3] * h @ h @ h)
        jb = joint_eigenbasis(family)
        for a in family:
            rotated = jb.basis.conj().T @ a @ jb.basis
            off = rotated - np.diag(np.diag(rotated))
            worst = max(worst, float(np.max(np.abs(off))))
        alg = generate_algebra(family)
        chars = {tuple(row) for row in alg.characters}
        all_distinct = all_distinct and len(chars) == alg.n_points
    elapsed = time.perf_counter() - t0
    passed = worst <= tol and all_distinct
    _announce(
        capsys,
        5,
        "joint diagonalization",
        passed,
        f"worst off-diagonal {worst:.3e} (tol {tol:g}), tuples distinct: {all_distinct} "
        f"(100 families, {elapsed:.2f}s)",
    )
    assert worst <= tol, f"off-diagonal {worst:.3e} exceeds {tol:g}"
    assert all_distinct, "spectrum characters collide"


def test_acceptance_6_cat_scenario(capsys):
    tol_cross = 1e-12
    tol_weights = 1e-10
    t0 = time.perf_counter()
    length = 8
    report = run_cat(0.6, 0.8j, chain_length=length)
    weight_err = max(
        abs(float(report.restricted.weights[-1]) - 0.36),
        abs(float(report.restricted.weights[0]) - 0.64),
    )

    dim = 2**length
    readout = np.array([length - 2 * bin(b).count("1") for b in range(dim)], dtype=float)
    algebra = generate_algebra([np.diag(readout)])
    top = np.zeros(dim, dtype=complex)
    top[0] = 1.0  # all cells up, readout +length
    bottom = np.zeros(dim, dtype=complex)
    bottom[-1] = 1.0  # all cells down, readout -length
    psi = 0.6 * top + 0.8j * bottom

    rng = substream(_SEED, 6)
    worst_cross = 0.0
    worst_expect = 0.0
    for _ in range(50):
        coeffs = rng.standard_normal(algebra.n_points)
        a = sum(c * p for c, p in zip(coeffs, algebra.joint_projectors))
        worst_cross = max(worst_cross, abs(complex(top.conj() @ a @ bottom)))
        mixed = float((psi.conj() @ a @ psi).real)
        split = 0.36 * float((top.conj() @ a @ top).real) + 0.64 * float(
            (bottom.conj() @ a @ bottom).real
        )
        worst_expect = max(worst_expect, abs(mixed - split))
    elapsed = time.perf_counter() - t0
    passed = (
        worst_cross <= tol_cross
        and weight_err <= tol_weights
        and worst_expect <= tol_weights
        and report.max_deviation <= tol_weights
    )
    _announce(
        capsys,
        6,
        "cat chain",
        passed,
        f"cross {worst_cross:.3e} (tol {tol_cross:g}), weights off {weight_err:.3e}, "
        f"expectation split {worst_expect:.3e} (tol {tol_weights:g}, "
        f"50 algebra elements, {elapsed:.2f}s)",
    )
    assert worst_cross <= tol_cross
    assert weight_err <= tol_weights
    assert worst_expect <= tol_weights
    assert report.max_deviation <= tol_weights


def test_acceptance_7_simplex_contrast(capsys):
    t0 = time.perf_counter()
    result = check_simplex_contrast()
    elapsed = time.perf_counter() - t0
    passed = result.passed and result.worst <= 1e-12
    _announce(
        capsys,
        7,
        "simplex contrast",
        passed,
        f"worst {result.worst:.3e} (tol {result.tolerance:g}, {result.detail}, {elapsed:.2f}s)",
    )
    assert passed, f"simplex contrast check failed: {result}"


def test_acceptance_8_dynamics_group_law(capsys):
    tol_group = 1e-9
    tol_norm = 1e-10
    t0 = time.perf_counter()
    worst_group = 0.0
    worst_norm = 0.0
    for i in range(50):
        rng = substream(_SEED, 8, i)
        d = 2 + i % 7
        h = rand_hermitian(d, rng)
        s, t = rng.uniform(-2.0, 2.0, size=2)
        psi = StateVector(rand_state(d, rng))
        stepwise = evolve(evolve(psi, h, t), h, s)
        direct = evolve(psi, h, s + t)
        worst_group = max(
            worst_group, float(np.max(np.abs(stepwise.amplitudes - direct.amplitudes)))
        )
        for state in (stepwise, direct):
            worst_norm = max(
                worst_norm, abs(float(np.linalg.norm(state.amplitudes)) - 1.0)
            )
    elapsed = time.perf_counter() - t0
    passed = worst_group <= tol_group and worst_norm <= tol_norm
    _announce(
        capsys,
        8,
        "dynamics group law",
        passed,
        f"composition {worst_group:.3e} (tol {tol_group:g}), norm {worst_norm:.3e} "
        f"(tol {tol_norm:g}, 50 cases, {elapsed:.2f}s)",
    )
    assert worst_group <= tol_group
    assert worst_norm <= tol_norm


def test_acceptance_9_chain_reduction(capsys):
    tol = 1e-10
    t0 = time.perf_counter()
    d = 4
    apparatus = build_apparatus(d)
    algebra = generate_algebra([pointer_observable(apparatus)])
    copier = build_coupling(np.eye(d, dtype=complex), apparatus)
    worst = 0.0
    for i in range(50):
        rng = substream(_SEED, 9, i)
        psi = StateVector(rand_state(d, rng))
        basis = rand_unitary(d, rng)
        model = build_coupling(basis, apparatus)
        single = restrict_state(
            apparatus_reduced_state(premeasure(psi, model), model.dims), algebra
        ).weights

        u_total = kronecker(np.eye(d), copier.coupling) @ kronecker(
            model.coupling, np.eye(d)
        )
        start = np.kron(
            np.kron(psi.amplitudes, apparatus.ready_state()), apparatus.ready_state()
        )
        rho_last = partial_trace(
            projector_of(StateVector(u_total @ start)), CompositeDims(d * d, d), "apparatus"
        )
        two_stage = restrict_state(rho_last, algebra).weights
        worst = max(worst, float(np.max(np.abs(single - two_stage))))
    elapsed = time.perf_counter() - t0
    passed = worst <= tol
    _announce(
        capsys,
        9,
        "chain reduction",
        passed,
        f"worst {worst:.3e} (tol {tol:g}, 50 states dim 4, {elapsed:.2f}s)",
    )
    assert passed, f"pointer distributions differ by {worst:.3e}"
