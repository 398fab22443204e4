"""Gate vocabulary and circuit container.

Four primitive operations cover everything the solver needs: a single-qubit
unitary, a multiply-controlled single-qubit unitary with per-control
polarities, a phase applied to one selected basis state of a qubit subset,
and a dense unitary acting on a small qubit subset. Matrices are validated
for unitarity at construction time and every op knows its own inverse, so a
`Circuit` can be inverted exactly without resynthesis.

Qubit indices are little endian with respect to basis-state integers: qubit
``t`` is bit ``t`` of the basis index.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Iterator, Union

import numpy as np

UNITARITY_TOL = 1e-10
MAX_BLOCK_QUBITS = 12


def _as_unitary(matrix, dim: int) -> np.ndarray:
    u = np.array(matrix, dtype=np.complex128)
    if u.shape != (dim, dim):
        raise ValueError(f"expected a {dim}x{dim} matrix, got shape {u.shape}")
    err = np.abs(u.conj().T @ u - np.eye(dim)).max()
    if err > UNITARITY_TOL:
        raise ValueError(f"matrix is not unitary (deviation {err:.3e})")
    u.setflags(write=False)
    return u


def _check_distinct(qubits: Iterable[int], what: str) -> tuple[int, ...]:
    qs = tuple(int(q) for q in qubits)
    if len(set(qs)) != len(qs):
        raise ValueError(f"{what} contains repeated qubits: {qs}")
    if any(q < 0 for q in qs):
        raise ValueError(f"{what} contains negative qubit indices: {qs}")
    return qs


@dataclass(frozen=True, eq=False)
class SingleQubitGate:
    """Apply a 2x2 unitary to one qubit."""

    target: int
    matrix: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "target", int(self.target))
        object.__setattr__(self, "matrix", _as_unitary(self.matrix, 2))
        if self.target < 0:
            raise ValueError("target must be non-negative")

    @property
    def qubits(self) -> tuple[int, ...]:
        return (self.target,)

    def inverse(self) -> "SingleQubitGate":
        return SingleQubitGate(self.target, self.matrix.conj().T)


@dataclass(frozen=True, eq=False)
class ControlledGate:
    """Apply a 2x2 unitary to ``target`` when every control matches its polarity.

    ``polarities[i]`` is the bit value control ``controls[i]`` must hold (1 for
    an ordinary control, 0 for an open one).
    """

    controls: tuple[int, ...]
    polarities: tuple[int, ...]
    target: int
    matrix: np.ndarray

    def __post_init__(self):
        controls = _check_distinct(self.controls, "controls")
        polarities = tuple(int(p) for p in self.polarities)
        target = int(self.target)
        object.__setattr__(self, "controls", controls)
        object.__setattr__(self, "polarities", polarities)
        object.__setattr__(self, "target", target)
        object.__setattr__(self, "matrix", _as_unitary(self.matrix, 2))
        if not controls:
            raise ValueError("use SingleQubitGate for an uncontrolled unitary")
        if len(polarities) != len(controls):
            raise ValueError("polarities and controls must have equal length")
        if any(p not in (0, 1) for p in polarities):
            raise ValueError(f"polarities must be 0 or 1, got {polarities}")
        if target in controls or target < 0:
            raise ValueError(f"invalid target {target} for controls {controls}")

    @property
    def qubits(self) -> tuple[int, ...]:
        return self.controls + (self.target,)

    def inverse(self) -> "ControlledGate":
        return ControlledGate(self.controls, self.polarities, self.target,
                              self.matrix.conj().T)


@dataclass(frozen=True, eq=False)
class SelectivePhase:
    """Multiply one basis state of a qubit subset by exp(i * angle).

    ``basis_index`` is read against ``qubits`` little endian: bit ``i`` of the
    index is the required value of ``qubits[i]``. All other basis states of
    the subset are untouched, so the op is diagonal.
    """

    qubits: tuple[int, ...]
    basis_index: int
    angle: float

    def __post_init__(self):
        qubits = _check_distinct(self.qubits, "qubits")
        object.__setattr__(self, "qubits", qubits)
        object.__setattr__(self, "basis_index", int(self.basis_index))
        object.__setattr__(self, "angle", float(self.angle))
        if not qubits:
            raise ValueError("phase needs at least one qubit")
        if not 0 <= self.basis_index < (1 << len(qubits)):
            raise ValueError(
                f"basis_index {self.basis_index} out of range for {len(qubits)} qubits")

    def inverse(self) -> "SelectivePhase":
        return SelectivePhase(self.qubits, self.basis_index, -self.angle)


@dataclass(frozen=True, eq=False)
class BlockUnitary:
    """Apply a dense unitary to a small qubit subset.

    The matrix is indexed little endian against ``qubits``: row/column bit
    ``i`` corresponds to ``qubits[i]``. The subset is capped at
    ``MAX_BLOCK_QUBITS`` qubits to keep the dense matrix small.
    """

    qubits: tuple[int, ...]
    matrix: np.ndarray

    def __post_init__(self):
        qubits = _check_distinct(self.qubits, "qubits")
        object.__setattr__(self, "qubits", qubits)
        if not 1 <= len(qubits) <= MAX_BLOCK_QUBITS:
            raise ValueError(
                f"block acts on {len(qubits)} qubits, limit is {MAX_BLOCK_QUBITS}")
        object.__setattr__(self, "matrix", _as_unitary(self.matrix, 1 << len(qubits)))

    def inverse(self) -> "BlockUnitary":
        return BlockUnitary(self.qubits, self.matrix.conj().T)


GateOp = Union[SingleQubitGate, ControlledGate, SelectivePhase, BlockUnitary]


@dataclass
class Circuit:
    """Ordered list of gate ops with exact inversion."""

    ops: list = field(default_factory=list)
    label: str = ""

    def append(self, op: GateOp) -> "Circuit":
        self.ops.append(op)
        return self

    def extend(self, ops: Iterable[GateOp]) -> "Circuit":
        self.ops.extend(ops)
        return self

    def inverse(self) -> "Circuit":
        inv = [op.inverse() for op in reversed(self.ops)]
        label = f"{self.label}^-1" if self.label else ""
        return Circuit(inv, label)

    def __len__(self) -> int:
        return len(self.ops)

    def __iter__(self) -> Iterator[GateOp]:
        return iter(self.ops)

    def __add__(self, other: "Circuit") -> "Circuit":
        return Circuit(self.ops + other.ops, self.label or other.label)


def hadamard() -> np.ndarray:
    return np.array([[1, 1], [1, -1]], dtype=np.complex128) / np.sqrt(2.0)


def pauli_x() -> np.ndarray:
    return np.array([[0, 1], [1, 0]], dtype=np.complex128)


def phase_matrix(angle: float) -> np.ndarray:
    return np.array([[1, 0], [0, np.exp(1j * angle)]], dtype=np.complex128)


def rotation_matrix(angle: float) -> np.ndarray:
    """Real rotation by ``angle``: |0> -> cos|0> + sin|1>."""
    c, s = np.cos(angle), np.sin(angle)
    return np.array([[c, -s], [s, c]], dtype=np.complex128)


def swap_matrix() -> np.ndarray:
    m = np.eye(4, dtype=np.complex128)
    m[[1, 2]] = m[[2, 1]]
    return m
