import numpy as np
import pytest

from qpoisson import (BlockUnitary, Circuit, ControlledGate, SelectivePhase,
                      SingleQubitGate)
from qpoisson.ops import (hadamard, pauli_x, phase_matrix, rotation_matrix,
                          swap_matrix)


def test_matrix_helpers_are_unitary():
    for m in (hadamard(), pauli_x(), phase_matrix(0.7), rotation_matrix(1.3)):
        assert np.abs(m.conj().T @ m - np.eye(2)).max() < 1e-12
    s = swap_matrix()
    assert np.abs(s.conj().T @ s - np.eye(4)).max() < 1e-12


def test_non_unitary_matrix_rejected():
    with pytest.raises(ValueError, match="unitary"):
        SingleQubitGate(0, [[1, 0], [0, 2]])
    with pytest.raises(ValueError, match="unitary"):
        BlockUnitary((0, 1), np.ones((4, 4)))


def test_wrong_shape_rejected():
    with pytest.raises(ValueError, match="shape"):
        SingleQubitGate(0, np.eye(3))
    with pytest.raises(ValueError, match="shape"):
        BlockUnitary((0, 1), np.eye(2))


def test_controlled_gate_validation():
    x = pauli_x()
    with pytest.raises(ValueError, match="repeated"):
        ControlledGate((1, 1), (1, 1), 0, x)
    with pytest.raises(ValueError, match="polarities"):
        ControlledGate((1, 2), (1,), 0, x)
    with pytest.raises(ValueError, match="polarities"):
        ControlledGate((1,), (2,), 0, x)
    with pytest.raises(ValueError, match="target"):
        ControlledGate((1,), (1,), 1, x)
    with pytest.raises(ValueError, match="SingleQubitGate"):
        ControlledGate((), (), 0, x)


def test_selective_phase_validation():
    with pytest.raises(ValueError, match="basis_index"):
        SelectivePhase((0, 1), 4, 0.1)
    with pytest.raises(ValueError, match="at least one"):
        SelectivePhase((), 0, 0.1)
    op = SelectivePhase((3, 5), 2, 0.25)
    assert op.inverse().angle == -0.25


def test_block_size_limit():
    with pytest.raises(ValueError, match="limit"):
        BlockUnitary(tuple(range(13)), np.eye(1 << 13))


def test_op_inverses_cancel():
    ops = [
        SingleQubitGate(0, rotation_matrix(0.3)),
        ControlledGate((1,), (0,), 0, phase_matrix(0.9)),
        SelectivePhase((0, 1), 3, 1.1),
        BlockUnitary((0, 1), swap_matrix()),
    ]
    for op in ops:
        a = op.matrix if hasattr(op, "matrix") else None
        inv = op.inverse()
        if a is not None:
            assert np.abs(a @ inv.matrix - np.eye(len(a))).max() < 1e-12


def test_circuit_inverse_reverses_and_inverts():
    circ = Circuit(label="demo")
    circ.append(SingleQubitGate(0, hadamard()))
    circ.append(SelectivePhase((0,), 1, 0.5))
    inv = circ.inverse()
    assert len(inv) == 2
    assert isinstance(inv.ops[0], SelectivePhase)
    assert inv.ops[0].angle == -0.5
    assert inv.label == "demo^-1"


def test_circuit_concatenation():
    a = Circuit([SingleQubitGate(0, hadamard())])
    b = Circuit([SingleQubitGate(1, hadamard())])
    assert len(a + b) == 2
