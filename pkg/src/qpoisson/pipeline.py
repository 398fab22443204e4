"""End-to-end solver pipeline.

Stages, on the registers laid out in `circuits`:

  encode   amplitude-encode the normalized right-hand side into reg_c
  PEA      phase estimation writes eigenvalue estimates y into reg_b
  INV      table lookup sets reg_a to the one-hot seed exponent p(y)
  ROT      controlled rotations put sin(alpha * x1(y)) on the ancilla
  uncompute  INV then PEA are reversed to disentangle the work registers
  post-select  keep the ancilla |1> branch, then read reg_c

The kept branch carries amplitudes proportional to sin(alpha * x1(y))
~ alpha / lambda per eigencomponent, i.e. the normalized solution of
A u = b. Phase-estimation rounding leaves a small residual outside
reg_b = 0 after uncompute; the pipeline projects it away and reports its
mass as a diagnostic (it is zero only when every eigenvalue is exactly
representable in the register).
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np

from . import classical as cl
from ._backend import backend_name, impl
from .circuits import PhaseSchedule, RegisterLayout, pea_circuit
from .errors import CapacityError, InvalidEncodingError, NoSuccessError
from .newton import InvSpec, newton_x1, x0_exponent
from .ops import Circuit, ControlledGate, pauli_x, rotation_matrix
from .statevector import Statevector, as_generator, resolve_qubit_cap

__all__ = [
    "SolveReport", "InvSpec", "newton_x1", "x0_exponent",
    "grid_to_basis_index", "basis_index_to_grid", "encode_rhs",
    "inv_circuit", "rot_circuit", "run_pipeline", "pea_histogram",
    "success_probability_curve", "resource_estimate",
]

NO_SUCCESS_TOL = 1e-12


def grid_to_basis_index(multi: Sequence[int], M: int, d: int) -> int:
    """Basis index of interior grid point (i_1 .. i_d): sum i_k * M^(d-k)."""
    if len(multi) != d:
        raise ValueError(f"expected {d} coordinates, got {len(multi)}")
    out = 0
    for i in multi:
        if not 1 <= i <= M - 1:
            raise ValueError(f"coordinate {i} outside interior range 1..{M - 1}")
        out = out * M + int(i)
    return out


def basis_index_to_grid(index: int, M: int, d: int) -> tuple:
    """Inverse of `grid_to_basis_index`; rejects indices touching a boundary."""
    if not 0 <= index < M ** d:
        raise ValueError(f"index {index} out of range for M={M}, d={d}")
    out = []
    for _ in range(d):
        index, r = divmod(index, M)
        if r == 0:
            raise InvalidEncodingError(
                f"index has a zero digit base {M}: not an interior point")
        out.append(r)
    return tuple(reversed(out))


def _grid_points(M: int, d: int):
    """Interior points in row-major order, matching rhs layout."""
    return itertools.product(range(1, M), repeat=d)


def encode_rhs(problem: cl.PoissonProblem, layout: RegisterLayout,
               cap: Optional[int] = None) -> Statevector:
    """Prepare |b>: normalized rhs amplitudes on reg_c, all other qubits |0>.

    Grid point (i_1 .. i_d) lands on basis state sum i_k * M^(d-k), so
    states with any zero digit (boundary slots) keep amplitude zero.
    """
    total = layout.total_qubits
    limit = resolve_qubit_cap(cap)
    if total > limit:
        raise CapacityError(
            f"pipeline needs {total} qubits, cap is {limit} "
            f"(raise with cap= or QPOISSON_QUBIT_CAP)")
    amps = np.zeros(1 << total, dtype=np.complex128)
    b = problem.b_normalized
    for pos, point in enumerate(_grid_points(problem.M, problem.d)):
        amps[grid_to_basis_index(point, problem.M, problem.d)] = b[pos]
    return Statevector(amps, cap=limit, copy=False)


def inv_circuit(layout: RegisterLayout) -> Circuit:
    """Reciprocal-exponent lookup: reg_b = k flips reg_a bit p(k) - 1.

    One open/closed multi-controlled X per register value k >= 2, read off
    the InvSpec table. Involutory, so the same circuit uncomputes reg_a.
    """
    spec = InvSpec.build(layout.n)
    circ = Circuit(label="inv")
    x = pauli_x()
    for k in range(2, 1 << layout.n):
        p = spec.exponents[k]
        polarities = tuple((k >> i) & 1 for i in range(layout.n))
        circ.append(ControlledGate(layout.reg_b, polarities,
                                   layout.reg_a[p - 1], x))
    return circ


def rot_circuit(layout: RegisterLayout, alpha: float) -> Circuit:
    """Ancilla rotation by alpha * x1(k), assembled from the Newton form.

    x1(k) = 2^(1-p) - k 2^(-2p) splits into one term per exponent bit and
    one per register bit, so n singly controlled and n^2 doubly controlled
    rotations compose the full angle. All rotations share an axis, so the
    angles add and gate order does not matter.
    """
    n = layout.n
    circ = Circuit(label="rot")
    anc = layout.rot_ancilla
    for p in range(1, n + 1):
        a_bit = layout.reg_a[p - 1]
        circ.append(ControlledGate((a_bit,), (1,), anc,
                                   rotation_matrix(alpha * 2.0 ** (1 - p))))
        for mbit in range(n):
            circ.append(ControlledGate((a_bit, layout.reg_b[mbit]), (1, 1), anc,
                                       rotation_matrix(-alpha * 2.0 ** (mbit - 2 * p))))
    return circ


@dataclass
class SolveReport:
    """Everything one pipeline run produced, JSON-serializable via to_dict."""

    config: dict
    solution: np.ndarray
    classical: np.ndarray
    l2_error: float
    linf_error: float
    success_probability: float
    expected_success: dict
    empirical_success: Optional[float]
    histograms: dict
    diagnostics: dict
    resources: dict
    warnings: list = field(default_factory=list)

    def to_dict(self) -> dict:
        return {
            "config": self.config,
            "solution": [float(x) for x in self.solution],
            "classical": [float(x) for x in self.classical],
            "l2_error": float(self.l2_error),
            "linf_error": float(self.linf_error),
            "success_probability": float(self.success_probability),
            "expected_success": {k: float(v) for k, v in self.expected_success.items()},
            "empirical_success": (None if self.empirical_success is None
                                  else float(self.empirical_success)),
            "histograms": {name: {str(k): int(v) for k, v in sorted(h.items())}
                           for name, h in self.histograms.items()},
            "diagnostics": {k: float(v) for k, v in self.diagnostics.items()},
            "resources": self.resources,
            "warnings": list(self.warnings),
        }


def _resolve_sizes(problem: cl.PoissonProblem, resolution_shift: int,
                   n_override: Optional[int] = None):
    if n_override is not None:
        n_eff = int(n_override)
    elif problem.n_b is not None:
        n_eff = problem.n_b
    else:
        n_eff = cl.default_register_size(problem.M, problem.d)
    n_reg = n_eff - int(resolution_shift)
    if n_reg < 1:
        raise ValueError(
            f"resolution shift {resolution_shift} leaves no register bits "
            f"(n = {n_eff})")
    return n_eff, n_reg


def _rotation_factors(n_reg: int, alpha_eff: float) -> np.ndarray:
    """sin(alpha * x1(y)) per register value; zero for y < 2 (no branch)."""
    out = np.zeros(1 << n_reg)
    for y in range(2, 1 << n_reg):
        out[y] = math.sin(alpha_eff * newton_x1(y, x0_exponent(y)))
    return out


def _ideal_factors(n_reg: int, alpha_eff: float) -> np.ndarray:
    """Perfect reciprocal amplitudes alpha / y; zero for y = 0."""
    out = np.zeros(1 << n_reg)
    y = np.arange(1, 1 << n_reg, dtype=np.float64)
    out[1:] = alpha_eff / y
    return out


def run_pipeline(problem: cl.PoissonProblem, mode: str = "full",
                 resolution_shift: int = 0,
                 cap: Optional[int] = None) -> SolveReport:
    """Simulate the solver and compare against the classical reference.

    mode="full" runs encode / PEA / INV / ROT / uncompute / post-select.
    mode="ideal-inversion" replaces INV and ROT with a direct per-branch
    scaling by alpha / y, isolating phase-estimation error from the
    register-level reciprocal's.

    Raises NoSuccessError when the post-selected branch has probability
    below 1e-12 and CapacityError when the layout exceeds the qubit cap.
    """
    if mode not in ("full", "ideal-inversion"):
        raise ValueError(f"unknown mode {mode!r}")
    M, d = problem.M, problem.d
    warnings: list = []
    n_eff, n_reg = _resolve_sizes(problem, resolution_shift)
    n_default = cl.default_register_size(M, d)
    if n_eff != n_default:
        warnings.append(
            f"register override n={n_eff} deviates from the default {n_default}; "
            f"eigenvalues may alias")
    alpha_bound = cl.default_alpha(M, d)
    if problem.alpha > alpha_bound * (1 + 1e-12):
        warnings.append(
            f"alpha={problem.alpha:g} exceeds the small-angle bound "
            f"{alpha_bound:g}; solution fidelity degrades")

    layout = RegisterLayout.build(M, d, n_reg)
    schedule = PhaseSchedule.build(M, n_reg, resolution_shift)
    alpha_eff = problem.alpha * 2.0 ** (-resolution_shift)

    psi = encode_rhs(problem, layout, cap=cap)
    pea = pea_circuit(problem, layout, schedule)
    psi.apply_circuit(pea)

    rng = as_generator(problem.seed)
    histograms: dict = {}
    inv = rot = None
    if mode == "full":
        inv = inv_circuit(layout)
        rot = rot_circuit(layout, alpha_eff)
        psi.apply_circuit(inv)
        psi.apply_circuit(rot)
        psi.apply_inverse(inv)
        psi.apply_inverse(pea)
        if problem.shots:
            histograms["rot_ancilla"] = psi.sample_counts(
                (layout.rot_ancilla,), problem.shots, rng)
        omega = float(psi.subset_probabilities((layout.rot_ancilla,))[1])
        if omega < NO_SUCCESS_TOL:
            raise NoSuccessError(
                f"post-selection probability {omega:.3e} below {NO_SUCCESS_TOL:.0e}")
        psi.project_and_renormalize(layout.rot_ancilla, 1)
    else:
        factors = _ideal_factors(n_reg, alpha_eff)
        impl.scale_subset(psi.vector, np.asarray(layout.reg_b, dtype=np.int64),
                          factors)
        omega = float(impl.norm_sq(psi.vector))
        if omega < NO_SUCCESS_TOL:
            raise NoSuccessError(
                f"ideal branch probability {omega:.3e} below {NO_SUCCESS_TOL:.0e}")
        amps = psi.vector
        amps *= 1.0 / math.sqrt(omega)
        psi.apply_inverse(pea)

    kept = 1.0
    for qb in layout.reg_b + layout.reg_a:
        kept *= psi.project_and_renormalize(qb, 0)
    uncompute_residual = 1.0 - kept

    if problem.shots:
        histograms["solution"] = psi.sample_counts(layout.reg_c, problem.shots, rng)
    probs_c = psi.subset_probabilities(layout.reg_c)
    valid = np.zeros(len(probs_c), dtype=bool)
    for point in _grid_points(M, d):
        valid[grid_to_basis_index(point, M, d)] = True
    invalid_mass = float(probs_c[~valid].sum())

    pairs = psi.dump_amplitudes(layout.reg_c)
    dumped = np.array([a for _, a in pairs])
    sol_c = np.array([dumped[grid_to_basis_index(point, M, d)]
                      for point in _grid_points(M, d)])
    imag_residual = float(np.abs(sol_c.imag).max())
    sol = sol_c.real / np.linalg.norm(sol_c.real)

    u_hat, _, kappa = cl.solve_classical(problem)
    if float(sol @ u_hat) < 0:  # overall sign is unphysical
        sol = -sol
    diff = sol - u_hat
    empirical = None
    if problem.shots and mode == "full":
        empirical = histograms["rot_ancilla"].get(1, 0) / problem.shots

    expected = {
        "exact": cl.expected_success_probability(problem, "exact"),
        "rounded": cl.expected_success_probability(
            problem, "rounded", n=n_eff, resolution_shift=resolution_shift),
    }
    resources = resource_estimate(M, d)
    resources = dict(resources)
    resources["circuit_ops"] = {
        "pea": len(pea),
        "inv": len(inv) if inv is not None else 0,
        "rot": len(rot) if rot is not None else 0,
    }

    config = {
        "M": M, "d": d,
        "rhs": [float(x) for x in problem.rhs],
        "alpha": problem.alpha,
        "alpha_effective": alpha_eff,
        "n": n_eff,
        "n_register": n_reg,
        "resolution_shift": int(resolution_shift),
        "shots": problem.shots,
        "seed": problem.seed,
        "mode": mode,
        "backend": backend_name(),
        "total_qubits": layout.total_qubits,
        "qubit_cap": resolve_qubit_cap(cap),
    }
    diagnostics = {
        "uncompute_residual": uncompute_residual,
        "invalid_state_mass": invalid_mass,
        "imag_residual": imag_residual,
        "norm_error": psi.norm_error(),
        "kappa": kappa,
    }
    return SolveReport(
        config=config,
        solution=sol,
        classical=u_hat,
        l2_error=float(np.linalg.norm(diff)),
        linf_error=float(np.abs(diff).max()),
        success_probability=omega,
        expected_success=expected,
        empirical_success=empirical,
        histograms=histograms,
        diagnostics=diagnostics,
        resources=resources,
        warnings=warnings,
    )


def pea_histogram(problem: cl.PoissonProblem, n_override: Optional[int] = None,
                  shots: Optional[int] = None, resolution_shift: int = 0,
                  cap: Optional[int] = None) -> dict[int, int]:
    """Sampled phase-register distribution right after phase estimation.

    Returns nonzero shot counts keyed by register value y (the eigenvalue
    estimate lambda / 2**shift). ``n_override`` supersedes the problem's
    register size for side-by-side resolution comparisons. Shot count
    defaults to the problem's, or 2000 when unset; sampling is seeded by
    the problem's seed.
    """
    if shots is None:
        shots = problem.shots if problem.shots else 2000
    _, n_reg = _resolve_sizes(problem, resolution_shift, n_override)
    layout = RegisterLayout.build(problem.M, problem.d, n_reg)
    schedule = PhaseSchedule.build(problem.M, n_reg, resolution_shift)
    psi = encode_rhs(problem, layout, cap=cap)
    psi.apply_circuit(pea_circuit(problem, layout, schedule))
    return psi.sample_counts(layout.reg_b, shots, as_generator(problem.seed))


def success_probability_curve(problem: cl.PoissonProblem, alphas,
                              mode: str = "full", resolution_shift: int = 0,
                              cap: Optional[int] = None) -> list:
    """(alpha, success probability) pairs sharing one phase-estimation run.

    The branch probability depends on the state only through the reg_b
    marginal after PEA, so one simulation serves every alpha; the numbers
    match a full per-alpha run to float precision.
    """
    if mode not in ("full", "ideal-inversion"):
        raise ValueError(f"unknown mode {mode!r}")
    _, n_reg = _resolve_sizes(problem, resolution_shift)
    layout = RegisterLayout.build(problem.M, problem.d, n_reg)
    schedule = PhaseSchedule.build(problem.M, n_reg, resolution_shift)
    psi = encode_rhs(problem, layout, cap=cap)
    psi.apply_circuit(pea_circuit(problem, layout, schedule))
    weights = psi.subset_probabilities(layout.reg_b)
    out = []
    for alpha in alphas:
        alpha = float(alpha)
        if not alpha > 0:
            raise ValueError(f"alpha must be positive, got {alpha}")
        alpha_eff = alpha * 2.0 ** (-resolution_shift)
        if mode == "full":
            amp = _rotation_factors(n_reg, alpha_eff)
            omega = float(weights @ (amp * amp))
        else:
            amp = _ideal_factors(n_reg, alpha_eff)
            omega = float(weights @ (amp * amp))
        out.append((alpha, omega))
    return out


def resource_estimate(M: int, d: int) -> dict:
    """Closed-form resource counts at the default register size.

    algorithm_qubits counts the full reference construction including its
    reciprocal workspace; simulator_qubits is what this pipeline actually
    allocates (the lookup INV needs no workspace). rotation_gates counts
    the ROT stage's controlled rotations, phase_gates the controlled
    selective phases across all powered Hamiltonian steps.
    """
    M, d = cl._check_dims(M, d)
    m = int(math.log2(M))
    n = cl.default_register_size(M, d)
    return {
        "n": n,
        "algorithm_qubits": 7 + 2 * math.ceil(math.log2(d)) + (4 + d) * m,
        "simulator_qubits": d * m + 2 * n + 1,
        "rotation_gates": n + n * n,
        "phase_gates": n * d * (M - 1),
    }
