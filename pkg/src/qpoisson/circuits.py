"""Circuit blocks for the phase-estimation solver.

Register layout on the simulator, low bits first:

  reg_c  (d * log2 M qubits)  solution register, holds the grid index
  reg_b  (n qubits)           phase register, reads eigenvalue estimates
  reg_a  (n qubits)           reciprocal register, one-hot exponent
  rot ancilla (1 qubit)       rotation target, post-selected on |1>

Axis 1 of the grid is the most significant block of reg_c, and the basis
index of a grid point (i_1 .. i_d) is sum i_k * M^(d-k), so dumping reg_c
reads amplitudes in row-major grid order.

Hamiltonian simulation uses the sine-basis diagonalization: conjugating by
the uncontrolled DST block turns exp(i A t) into M-1 selective phases per
axis, and only those phases need the phase-register control.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .classical import default_register_size, dst_matrix, eigenvalue_1d
from .ops import (BlockUnitary, Circuit, SelectivePhase, SingleQubitGate,
                  hadamard, swap_matrix)

__all__ = [
    "RegisterLayout", "PhaseSchedule", "default_register_size",
    "qft_circuit", "dst_block_op", "hamiltonian_sim_1d", "hamiltonian_sim_nd",
    "pea_circuit",
]


@dataclass(frozen=True)
class RegisterLayout:
    """Qubit assignment for one solver instance."""

    M: int
    d: int
    n: int
    reg_c: tuple
    reg_b: tuple
    reg_a: tuple
    rot_ancilla: int

    @classmethod
    def build(cls, M: int, d: int, n: int) -> "RegisterLayout":
        m = int(math.log2(M))
        if (1 << m) != M or M < 2:
            raise ValueError(f"M must be a power of two >= 2, got {M}")
        if d < 1 or n < 1:
            raise ValueError(f"need d >= 1 and n >= 1, got d={d}, n={n}")
        c = d * m
        return cls(M=M, d=d, n=n,
                   reg_c=tuple(range(c)),
                   reg_b=tuple(range(c, c + n)),
                   reg_a=tuple(range(c + n, c + 2 * n)),
                   rot_ancilla=c + 2 * n)

    @property
    def bits_per_axis(self) -> int:
        return int(math.log2(self.M))

    @property
    def total_qubits(self) -> int:
        return self.rot_ancilla + 1

    def block(self, axis: int) -> tuple:
        """reg_c qubits of grid axis ``axis`` (1-based, axis 1 most significant)."""
        if not 1 <= axis <= self.d:
            raise ValueError(f"axis must be in 1..{self.d}, got {axis}")
        m = self.bits_per_axis
        lo = (self.d - axis) * m
        return self.reg_c[lo:lo + m]


@dataclass(frozen=True, eq=False)
class PhaseSchedule:
    """Controlled-phase angles for the powered Hamiltonian steps.

    ``angles[j-1, k]`` is the phase picked up by sine mode j under the
    2**k-th power step: lambda_j * t_unit * 2**k. The unit time
    2 pi / 2**(n + shift) makes an n-bit register read the estimate
    lambda / 2**shift directly.
    """

    M: int
    n: int
    shift: int
    t_unit: float
    angles: np.ndarray

    @classmethod
    def build(cls, M: int, n: int, shift: int = 0) -> "PhaseSchedule":
        if n < 1:
            raise ValueError("need at least one register bit")
        t_unit = 2.0 * math.pi / (1 << (n + shift))
        lams = np.array([eigenvalue_1d(M, j) for j in range(1, M)])
        powers = np.array([1 << k for k in range(n)], dtype=np.float64)
        angles = lams[:, None] * t_unit * powers[None, :]
        angles.setflags(write=False)
        return cls(M=M, n=n, shift=int(shift), t_unit=t_unit, angles=angles)


def qft_circuit(qubits) -> Circuit:
    """Fourier transform |x> -> sum_y exp(2 pi i x y / N) |y> / sqrt(N).

    Little endian: qubits[0] is the least significant bit of x and y.
    """
    qs = tuple(qubits)
    n = len(qs)
    if n < 1:
        raise ValueError("QFT needs at least one qubit")
    circ = Circuit(label="qft")
    for t in reversed(range(n)):
        circ.append(SingleQubitGate(qs[t], hadamard()))
        for s in reversed(range(t)):
            angle = math.pi / (1 << (t - s))
            circ.append(SelectivePhase((qs[s], qs[t]), 3, angle))
    for i in range(n // 2):
        circ.append(BlockUnitary((qs[i], qs[n - 1 - i]), swap_matrix()))
    return circ


def dst_block_op(M: int, block_qubits) -> BlockUnitary:
    """DST on the nonzero states of one axis block, identity on |0>.

    The block matrix is 1 (+) S with S the orthonormal DST, so it is its
    own inverse and never mixes valid grid states with the unused |0>.
    """
    qs = tuple(block_qubits)
    if (1 << len(qs)) != M:
        raise ValueError(f"block has {len(qs)} qubits, expected log2({M})")
    b = np.eye(M, dtype=np.complex128)
    b[1:, 1:] = dst_matrix(M)
    return BlockUnitary(qs, b)


def hamiltonian_sim_1d(M: int, k: int, block_qubits, schedule: PhaseSchedule,
                       control: Optional[int] = None) -> Circuit:
    """exp(i A1 t_unit 2**k) on one axis block, optionally controlled.

    DST conjugation keeps the heavy blocks uncontrolled: only the M-1
    selective mode phases carry the control qubit.
    """
    qs = tuple(block_qubits)
    m = len(qs)
    circ = Circuit(label=f"ham1d[2^{k}]")
    dst = dst_block_op(M, qs)
    circ.append(dst)
    for j in range(1, M):
        angle = float(schedule.angles[j - 1, k])
        if control is None:
            circ.append(SelectivePhase(qs, j, angle))
        else:
            circ.append(SelectivePhase(qs + (control,), j | (1 << m), angle))
    circ.append(dst)
    return circ


def hamiltonian_sim_nd(M: int, d: int, k: int, layout: RegisterLayout,
                       schedule: PhaseSchedule,
                       control: Optional[int] = None) -> Circuit:
    """exp(i A_d t_unit 2**k): axis factors commute, so just concatenate."""
    circ = Circuit(label=f"ham{d}d[2^{k}]")
    for axis in range(1, d + 1):
        circ.extend(hamiltonian_sim_1d(M, k, layout.block(axis), schedule, control))
    return circ


def pea_circuit(problem, layout: RegisterLayout,
                schedule: Optional[PhaseSchedule] = None) -> Circuit:
    """Phase estimation: Hadamards, powered controlled steps, inverse QFT.

    Leaves reg_b holding y with y approximately lambda / 2**shift for each
    eigencomponent of reg_c. ``schedule`` defaults to the unshifted one for
    the layout's register size.
    """
    if schedule is None:
        schedule = PhaseSchedule.build(problem.M, layout.n)
    if (layout.n, layout.M, layout.d) != (schedule.n, schedule.M, problem.d) \
            or problem.M != layout.M:
        raise ValueError("layout and schedule disagree")
    circ = Circuit(label="pea")
    for qb in layout.reg_b:
        circ.append(SingleQubitGate(qb, hadamard()))
    for k in range(layout.n):
        circ.extend(hamiltonian_sim_nd(problem.M, problem.d, k, layout, schedule,
                                       control=layout.reg_b[k]))
    circ.extend(qft_circuit(layout.reg_b).inverse())
    return circ
