"""Gate suite: one test per shipped guarantee, one printed verdict each.

Run with ``pytest tests/test_acceptance.py -s`` to see the verdict lines.
The 25-qubit stretch case needs about half a gigabyte and a few minutes;
it only runs when QPOISSON_STRETCH is set.
"""
import math
import os

import numpy as np
import pytest
import scipy.linalg

from qpoisson import PoissonProblem, Statevector, run_pipeline
from qpoisson.circuits import (PhaseSchedule, RegisterLayout,
                               hamiltonian_sim_1d, hamiltonian_sim_nd)
from qpoisson.classical import eigenvalue_1d, poisson_matrix_1d
from qpoisson.newton import newton_x1, x0_exponent
from qpoisson.pipeline import (inv_circuit, pea_histogram, resource_estimate,
                               rot_circuit, success_probability_curve)

from conftest import dense_unitary

LAM1 = eigenvalue_1d(4, 1)
E1_REFERENCE = np.array([3.0, 2.0, 1.0]) / math.sqrt(14.0)


def _verdict(num, name, failures):
    ok = not failures
    print(f"[{'PASS' if ok else 'FAIL'}] criterion {num}: {name}", flush=True)
    assert ok, f"criterion {num} ({name}): " + "; ".join(failures)


def _e1_problem(alpha, **kw):
    return PoissonProblem(M=4, d=1, rhs=(1.0, 0.0, 0.0), alpha=alpha, **kw)


def test_criterion_1_eigenvalue_formula():
    failures = []
    for j, target in ((1, 9.37), (2, 32.0), (3, 54.63)):
        got = eigenvalue_1d(4, j)
        if abs(got - target) > 0.01:
            failures.append(f"mode {j}: {got} vs {target}")
    for m in (2, 4, 8):
        lam = np.sort([eigenvalue_1d(m, j) for j in range(1, m)])
        dense = np.linalg.eigvalsh(poisson_matrix_1d(m))
        err = np.abs(lam - dense).max()
        if err > 1e-8:
            failures.append(f"M={m} dense mismatch {err:.2e}")
    _verdict(1, "closed-form eigenvalues", failures)


def test_criterion_2_hamiltonian_simulation():
    failures = []
    for m in (4, 8):
        bits = int(math.log2(m))
        sched = PhaseSchedule.build(m, 6)
        full = np.zeros((m, m))
        full[1:, 1:] = poisson_matrix_1d(m)
        for k in (0, 1, 2):
            circ = hamiltonian_sim_1d(m, k, tuple(range(bits)), sched)
            u = dense_unitary(circ, bits)
            expect = scipy.linalg.expm(1j * full * sched.t_unit * 2 ** k)
            err = np.abs(u - expect).max()
            if err > 1e-10:
                failures.append(f"M={m} k={k}: {err:.2e}")
    lay = RegisterLayout.build(4, 2, 1)
    sched = PhaseSchedule.build(4, 6)
    circ = hamiltonian_sim_nd(4, 2, 0, lay, sched)
    u = dense_unitary(circ, 4)
    h1 = np.zeros((4, 4))
    h1[1:, 1:] = poisson_matrix_1d(4)
    h2 = np.kron(h1, np.eye(4)) + np.kron(np.eye(4), h1)
    err = np.abs(u - scipy.linalg.expm(1j * h2 * sched.t_unit)).max()
    if err > 1e-9:
        failures.append(f"d=2 Kronecker sum: {err:.2e}")
    _verdict(2, "simulation step equals matrix exponential", failures)


def test_criterion_3_phase_register_distribution():
    failures = []
    prob = _e1_problem(LAM1 / 2, seed=0)
    shots = 2000

    hist6 = pea_histogram(prob, n_override=6, shots=shots)
    f32 = hist6.get(32, 0) / shots
    f9 = hist6.get(9, 0) / shots
    if not 0.46 <= f32 <= 0.54:
        failures.append(f"n=6 freq(32) = {f32}")
    if f9 < 0.09:
        failures.append(f"n=6 freq(9) = {f9}")

    hist5 = pea_histogram(prob, n_override=5, shots=shots)
    if sum(hist5.values()) != shots or not all(0 <= y < 32 for y in hist5):
        failures.append("n=5 histogram malformed")

    hist7 = pea_histogram(prob, n_override=7, shots=shots)
    lams = [eigenvalue_1d(4, j) for j in (1, 2, 3)]
    near = sum(c for y, c in hist7.items()
               if any(abs(y - lam) <= 2 for lam in lams))
    mass = near / shots
    if mass < 0.9:
        failures.append(f"n=7 mass near eigenvalues = {mass}")
    _verdict(3, "eigenvalue estimates concentrate correctly", failures)


def test_criterion_4_reciprocal_correctness():
    failures = []
    bad = [k for k in range(2, 1 << 10)
           if not 0.75 <= k * newton_x1(k, x0_exponent(k)) <= 1.0]
    if bad:
        failures.append(f"{len(bad)} register values leave [0.75, 1]: {bad[:5]}")

    lay = RegisterLayout.build(4, 1, 6)
    inv = inv_circuit(lay)
    worst = 0.0
    for alpha in (1.0, 4.0):
        rot = rot_circuit(lay, alpha)
        for k in range(2, 64):
            amps = np.zeros(1 << lay.total_qubits, complex)
            amps[k << 2] = 1.0
            sv = Statevector(amps, cap=None)
            sv.apply_circuit(inv)
            sv.apply_circuit(rot)
            p = x0_exponent(k)
            idx = (k << 2) | (1 << lay.reg_a[p - 1]) | (1 << lay.rot_ancilla)
            got = sv.vector[idx]
            expect = math.sin(alpha * newton_x1(k, p))
            worst = max(worst, abs(got - expect))
    if worst > 1e-10:
        failures.append(f"ancilla amplitude off by {worst:.2e}")
    _verdict(4, "one-step Newton reciprocal and rotation", failures)


def test_criterion_5_end_to_end_solve():
    failures = []
    rep = run_pipeline(_e1_problem(LAM1 / 2))
    linf = np.abs(rep.solution - E1_REFERENCE).max()
    if linf > 0.1:
        failures.append(f"full pipeline linf {linf}")

    rep_ideal = run_pipeline(_e1_problem(LAM1 / 2), mode="ideal-inversion")
    linf_ideal = np.abs(rep_ideal.solution - E1_REFERENCE).max()
    if linf_ideal > 0.05:
        failures.append(f"ideal inversion linf {linf_ideal}")

    l2s = [run_pipeline(_e1_problem(LAM1 / 2, n_b=n)).l2_error
           for n in (5, 6, 7)]
    if not (l2s[0] >= l2s[1] >= l2s[2]):
        failures.append(f"l2 not non-increasing across registers: {l2s}")
    _verdict(5, "post-selected solution matches direct solve", failures)


def test_criterion_6_success_probability_quadrupling():
    failures = []
    a = LAM1 / 8
    omega_a = run_pipeline(_e1_problem(a)).success_probability
    omega_2a = run_pipeline(_e1_problem(2 * a)).success_probability
    ratio = omega_2a / omega_a
    if not 3.8 <= ratio <= 4.0:
        failures.append(f"doubling alpha scaled success by {ratio}")

    for alpha in (a, LAM1 / 2):
        rep = run_pipeline(_e1_problem(alpha))
        gap = abs(rep.success_probability - rep.expected_success["rounded"])
        if gap > 1e-6:
            failures.append(f"alpha={alpha}: closed form off by {gap:.2e}")
    _verdict(6, "success probability scaling and closed form", failures)


def test_criterion_7_two_dimensional_solve():
    failures = []
    rhs = tuple(1.0 if i == 0 else 0.0 for i in range(9))
    alpha = 2 * LAM1 / 2
    prob = PoissonProblem(M=4, d=2, rhs=rhs, alpha=alpha)
    rep = run_pipeline(prob)
    if rep.linf_error > 0.1:
        failures.append(f"d=2 linf {rep.linf_error}")

    curve = success_probability_curve(prob, [alpha / 4, alpha / 2, alpha])
    omegas = [om for _, om in curve]
    if not (omegas[0] < omegas[1] < omegas[2]):
        failures.append(f"success not increasing with alpha: {omegas}")
    _verdict(7, "two-dimensional solve", failures)


@pytest.mark.skipif(not os.environ.get("QPOISSON_STRETCH"),
                    reason="set QPOISSON_STRETCH=1 to run the 25-qubit case")
def test_criterion_7_stretch_25_qubits():
    failures = []
    est = resource_estimate(8, 2)
    if est["algorithm_qubits"] != 27:
        failures.append(f"algorithm qubits {est['algorithm_qubits']}")
    if est["simulator_qubits"] != 25:
        failures.append(f"simulator qubits {est['simulator_qubits']}")

    lam1_8 = eigenvalue_1d(8, 1)
    rhs = tuple(1.0 if i == 0 else 0.0 for i in range(49))
    prob = PoissonProblem(M=8, d=2, rhs=rhs, alpha=2 * lam1_8 / 2)
    rep = run_pipeline(prob)
    if rep.config["total_qubits"] != 25:
        failures.append(f"allocated {rep.config['total_qubits']} qubits")
    if rep.linf_error > 0.15:
        failures.append(f"stretch linf {rep.linf_error}")
    _verdict("7-stretch", "25-qubit two-dimensional solve", failures)


def test_criterion_8_resource_formulas():
    failures = []
    est = resource_estimate(8, 2)
    if est["algorithm_qubits"] != 27:
        failures.append(f"algorithm_qubits(8,2) = {est['algorithm_qubits']}")
    for m, d in ((2, 1), (4, 1), (4, 2), (8, 2), (16, 3)):
        est = resource_estimate(m, d)
        n = est["n"]
        if est["rotation_gates"] != n + n * n:
            failures.append(f"rotation gates M={m} d={d}")
        if est["phase_gates"] != n * d * (m - 1):
            failures.append(f"phase gates M={m} d={d}")
    _verdict(8, "closed-form resource counts", failures)
