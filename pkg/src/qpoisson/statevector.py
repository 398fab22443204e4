"""Dense statevector simulator.

States are C-contiguous complex128 arrays of length 2**q, little endian:
qubit ``t`` is bit ``t`` of the basis index. All gate application is in
place; methods mutate the state and return ``self`` so stages chain.

A qubit cap guards against accidentally allocating huge vectors. The
default is 26 qubits (1 GiB of amplitudes); override per call with the
``cap`` argument or globally with the ``QPOISSON_QUBIT_CAP`` environment
variable.

The arithmetic behind apply/measure/project lives in the kernel backend
(compiled extension when built, numpy otherwise, see `_backend`).
"""

from __future__ import annotations

import os
from typing import Iterable, Optional, Sequence, Union

import numpy as np

from ._backend import impl
from .errors import CapacityError, DegenerateBranchError, EntangledCutError
from .ops import (BlockUnitary, Circuit, ControlledGate, GateOp,
                  SelectivePhase, SingleQubitGate)

DEFAULT_QUBIT_CAP = 26
PURITY_TOL = 1e-8
BRANCH_TOL = 1e-14

RngLike = Union[None, int, np.random.Generator]


def resolve_qubit_cap(cap: Optional[int] = None) -> int:
    """Effective qubit cap: explicit argument, else env var, else default."""
    if cap is not None:
        return int(cap)
    env = os.environ.get("QPOISSON_QUBIT_CAP")
    if env is not None:
        try:
            return int(env)
        except ValueError:
            raise ValueError(f"QPOISSON_QUBIT_CAP must be an integer, got {env!r}")
    return DEFAULT_QUBIT_CAP


def as_generator(rng: RngLike) -> np.random.Generator:
    """Coerce None, an integer seed, or a Generator into a Generator.

    Integer seeds give reproducible streams via numpy's default PCG64.
    """
    if isinstance(rng, np.random.Generator):
        return rng
    return np.random.default_rng(rng)


class Statevector:
    """Mutable q-qubit state with in-place gate application."""

    __slots__ = ("num_qubits", "_amps")

    def __init__(self, amplitudes, *, cap: Optional[int] = None, copy: bool = True):
        amps = np.array(amplitudes, dtype=np.complex128, copy=copy, order="C")
        if amps.ndim != 1 or len(amps) == 0 or len(amps) & (len(amps) - 1):
            raise ValueError(f"amplitude count must be a power of two, got {amps.shape}")
        q = len(amps).bit_length() - 1
        limit = resolve_qubit_cap(cap)
        if q > limit:
            raise CapacityError(
                f"state needs {q} qubits, cap is {limit} "
                f"(raise with cap= or QPOISSON_QUBIT_CAP)")
        norm = impl.norm_sq(amps)
        if abs(norm - 1.0) > 1e-8:
            raise ValueError(f"amplitudes are not normalized (norm^2 = {norm!r})")
        self.num_qubits = q
        self._amps = amps

    @classmethod
    def zero(cls, num_qubits: int, *, cap: Optional[int] = None) -> "Statevector":
        """The all-zeros computational basis state on ``num_qubits`` qubits."""
        q = int(num_qubits)
        if q < 1:
            raise ValueError("need at least one qubit")
        limit = resolve_qubit_cap(cap)
        if q > limit:
            raise CapacityError(
                f"state needs {q} qubits, cap is {limit} "
                f"(raise with cap= or QPOISSON_QUBIT_CAP)")
        amps = np.zeros(1 << q, dtype=np.complex128)
        amps[0] = 1.0
        sv = cls.__new__(cls)
        sv.num_qubits = q
        sv._amps = amps
        return sv

    @property
    def vector(self) -> np.ndarray:
        """The live amplitude array (not a copy)."""
        return self._amps

    def copy(self) -> "Statevector":
        sv = Statevector.__new__(Statevector)
        sv.num_qubits = self.num_qubits
        sv._amps = self._amps.copy()
        return sv

    def norm_error(self) -> float:
        """|1 - ||psi||^2|, drift away from unit norm."""
        return abs(1.0 - impl.norm_sq(self._amps))

    def _check_qubits(self, qubits: Iterable[int]):
        for qb in qubits:
            if not 0 <= qb < self.num_qubits:
                raise ValueError(f"qubit {qb} out of range for {self.num_qubits} qubits")

    # -- gates ---------------------------------------------------------

    def apply(self, op: GateOp) -> "Statevector":
        if isinstance(op, SingleQubitGate):
            self._check_qubits(op.qubits)
            u = op.matrix
            impl.apply_ctrl_1q(self._amps, 1 << op.target, 0, 0,
                               u[0, 0], u[0, 1], u[1, 0], u[1, 1])
        elif isinstance(op, ControlledGate):
            self._check_qubits(op.qubits)
            ctrl_mask = 0
            ctrl_value = 0
            for c, p in zip(op.controls, op.polarities):
                ctrl_mask |= 1 << c
                ctrl_value |= p << c
            u = op.matrix
            impl.apply_ctrl_1q(self._amps, 1 << op.target, ctrl_mask, ctrl_value,
                               u[0, 0], u[0, 1], u[1, 0], u[1, 1])
        elif isinstance(op, SelectivePhase):
            self._check_qubits(op.qubits)
            mask = 0
            value = 0
            for i, qb in enumerate(op.qubits):
                mask |= 1 << qb
                value |= ((op.basis_index >> i) & 1) << qb
            impl.apply_phase_mask(self._amps, mask, value, np.exp(1j * op.angle))
        elif isinstance(op, BlockUnitary):
            self._check_qubits(op.qubits)
            k = len(op.qubits)
            v = np.arange(1 << k, dtype=np.int64)
            offsets = np.zeros(1 << k, dtype=np.int64)
            for i, qb in enumerate(op.qubits):
                offsets |= ((v >> i) & 1) << qb
            block_mask = int(offsets[-1])
            impl.apply_block(self._amps, offsets, block_mask,
                             np.ascontiguousarray(op.matrix))
        else:
            raise TypeError(f"not a gate op: {op!r}")
        return self

    def apply_circuit(self, circuit: Circuit) -> "Statevector":
        for op in circuit:
            self.apply(op)
        return self

    def apply_inverse(self, circuit: Circuit) -> "Statevector":
        """Apply the exact inverse of ``circuit`` (reversed, op-wise inverses)."""
        for op in reversed(circuit.ops):
            self.apply(op.inverse())
        return self

    # -- measurement ---------------------------------------------------

    def measure_qubit(self, qubit: int, rng: RngLike = None) -> tuple[int, float]:
        """Sample one qubit, collapse the state, return (outcome, probability)."""
        self._check_qubits((qubit,))
        bit = 1 << qubit
        p1 = impl.prob_mask(self._amps, bit, bit)
        outcome = 1 if as_generator(rng).random() < p1 else 0
        prob = p1 if outcome else 1.0 - p1
        self._collapse(bit, bit if outcome else 0, prob)
        return outcome, prob

    def project_and_renormalize(self, qubit: int, outcome: int) -> float:
        """Force one qubit to ``outcome``, renormalize, return the branch probability."""
        self._check_qubits((qubit,))
        if outcome not in (0, 1):
            raise ValueError(f"outcome must be 0 or 1, got {outcome}")
        bit = 1 << qubit
        prob = impl.prob_mask(self._amps, bit, bit if outcome else 0)
        self._collapse(bit, bit if outcome else 0, prob)
        return prob

    def _collapse(self, mask: int, value: int, prob: float):
        if prob < BRANCH_TOL:
            raise DegenerateBranchError(
                f"branch probability {prob:.3e} is below {BRANCH_TOL:.0e}")
        impl.collapse_mask(self._amps, mask, value, 1.0 / np.sqrt(prob))

    def subset_probabilities(self, qubits: Sequence[int]) -> np.ndarray:
        """Marginal distribution over a qubit subset.

        Bit i of the returned array's index is the value of ``qubits[i]``.
        """
        qs = tuple(int(q) for q in qubits)
        self._check_qubits(qs)
        if len(set(qs)) != len(qs):
            raise ValueError(f"repeated qubits: {qs}")
        return impl.marginal_probs(self._amps, np.asarray(qs, dtype=np.int64))

    def sample_counts(self, qubits: Sequence[int], shots: int,
                      rng: RngLike = None) -> dict[int, int]:
        """Multinomial shot counts over a qubit subset, empty bins omitted."""
        if shots < 0:
            raise ValueError("shots must be non-negative")
        if not len(qubits):
            raise ValueError("sample_counts needs a non-empty qubit subset")
        probs = self.subset_probabilities(qubits)
        probs = np.clip(probs, 0.0, None)
        probs /= probs.sum()
        counts = as_generator(rng).multinomial(int(shots), probs)
        return {int(v): int(c) for v, c in enumerate(counts) if c}

    # -- inspection ----------------------------------------------------

    def dump_amplitudes(self, qubits: Optional[Sequence[int]] = None):
        """Amplitudes as (basis_index, amplitude) pairs.

        With ``qubits=None`` this is the full state. With a qubit subset the
        state must be a product across that cut (marginal purity within
        PURITY_TOL, else EntangledCutError); the returned pairs are the
        subset factor with its largest entry made real non-negative, and
        ``basis_index`` bit i is the value of ``qubits[i]``.
        """
        if qubits is None:
            return [(i, complex(a)) for i, a in enumerate(self._amps)]
        qs = tuple(int(q) for q in qubits)
        self._check_qubits(qs)
        if len(set(qs)) != len(qs):
            raise ValueError(f"repeated qubits: {qs}")
        q = self.num_qubits
        k = len(qs)
        # axes of the reshaped tensor run from qubit q-1 down to qubit 0
        arr = self._amps.reshape([2] * q)
        perm = [q - 1 - qs[k - 1 - j] for j in range(k)]
        perm += [a for a in range(q) if a not in set(perm)]
        mat = arr.transpose(perm).reshape(1 << k, -1)
        if k == q:
            factor = mat[:, 0].copy()
        else:
            rho = mat @ mat.conj().T
            purity = float(np.einsum("ij,ji->", rho, rho).real)
            if abs(1.0 - purity) > PURITY_TOL:
                raise EntangledCutError(
                    f"subset {qs} is entangled with its complement "
                    f"(purity deficit {abs(1.0 - purity):.3e})")
            w, v = np.linalg.eigh(rho)
            factor = v[:, -1] * np.sqrt(max(float(w[-1]), 0.0))
        top = int(np.argmax(np.abs(factor)))
        ph = factor[top]
        if abs(ph) > 0:
            factor = factor * (ph.conjugate() / abs(ph))
        return [(i, complex(a)) for i, a in enumerate(factor)]
