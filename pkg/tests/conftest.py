import numpy as np
import pytest

from qpoisson import Circuit, Statevector


def dense_unitary(circ: Circuit, num_qubits: int) -> np.ndarray:
    """Full matrix of a circuit, built column by column on basis states."""
    dim = 1 << num_qubits
    out = np.zeros((dim, dim), dtype=np.complex128)
    for col in range(dim):
        amps = np.zeros(dim, dtype=np.complex128)
        amps[col] = 1.0
        sv = Statevector(amps, copy=False)
        sv.apply_circuit(circ)
        out[:, col] = sv.vector
    return out


def random_state(num_qubits: int, rng: np.random.Generator) -> Statevector:
    amps = rng.standard_normal(1 << num_qubits) + 1j * rng.standard_normal(1 << num_qubits)
    amps /= np.linalg.norm(amps)
    return Statevector(amps)


@pytest.fixture
def rng():
    return np.random.default_rng(1234)
