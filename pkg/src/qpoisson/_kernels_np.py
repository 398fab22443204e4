"""Pure-numpy amplitude-update kernels.

Fallback implementation of the hot loops, selected at import time when the
compiled extension is unavailable (see `_backend`). Every function mutates
``psi`` (a C-contiguous complex128 array of length 2**q) in place and is
signature-compatible with the compiled module.

Index convention: qubit ``t`` is bit ``t`` of the basis index. Masks and
values are plain integers over those bits. Functions that enumerate a mask's
complement build int64 index arrays of length 2**(q - popcount(mask)), so
peak transient memory is a few times the statevector itself in the worst
case. The compiled backend streams the same loops without temporaries.
"""

import numpy as np

BACKEND_NAME = "numpy"


def _num_qubits(psi) -> int:
    return int(len(psi)).bit_length() - 1


def _submasks(mask: int) -> np.ndarray:
    """All integers whose set bits lie inside ``mask``, as int64."""
    positions = [p for p in range(int(mask).bit_length()) if (mask >> p) & 1]
    j = np.arange(1 << len(positions), dtype=np.int64)
    out = np.zeros_like(j)
    for b, pos in enumerate(positions):
        out |= ((j >> b) & 1) << pos
    return out


def _matched_indices(psi, mask: int, value: int) -> np.ndarray:
    full = (1 << _num_qubits(psi)) - 1
    return _submasks(full & ~mask) | value


def apply_ctrl_1q(psi, target_bit, ctrl_mask, ctrl_value, u00, u01, u10, u11):
    """2x2 update on the target bit, restricted to (i & ctrl_mask) == ctrl_value."""
    if ctrl_mask == 0:
        stride = int(target_bit).bit_length() - 1
        view = psi.reshape(-1, 2, 1 << stride)
        a = view[:, 0, :].copy()
        b = view[:, 1, :]
        view[:, 0, :] = u00 * a + u01 * b
        view[:, 1, :] = u10 * a + u11 * b
        return
    full = (1 << _num_qubits(psi)) - 1
    free = full & ~ctrl_mask & ~target_bit
    i0 = _submasks(free) | ctrl_value
    i1 = i0 | target_bit
    a = psi[i0]
    b = psi[i1]
    psi[i0] = u00 * a + u01 * b
    psi[i1] = u10 * a + u11 * b


def apply_phase_mask(psi, mask, value, phase):
    """Multiply amplitudes with (i & mask) == value by ``phase``."""
    psi[_matched_indices(psi, mask, value)] *= phase


def apply_block(psi, offsets, block_mask, u):
    """Dense update over the subset encoded by ``offsets``.

    ``offsets[v]`` is the basis-index contribution of subset value ``v``;
    ``block_mask`` is the union of the subset's bits.
    """
    full = (1 << _num_qubits(psi)) - 1
    bases = _submasks(full & ~block_mask)
    ut = np.ascontiguousarray(u.T)
    step = max(1, (1 << 16) // len(offsets))
    for lo in range(0, len(bases), step):
        idx = bases[lo:lo + step, None] | offsets[None, :]
        psi[idx] = psi[idx] @ ut


def prob_mask(psi, mask, value) -> float:
    """Total probability of (i & mask) == value."""
    v = psi[_matched_indices(psi, mask, value)]
    return float((v.real ** 2 + v.imag ** 2).sum())


def collapse_mask(psi, mask, value, scale):
    """Zero every amplitude with (i & mask) != value, scale the rest."""
    idx = _matched_indices(psi, mask, value)
    kept = psi[idx] * scale
    psi[:] = 0
    psi[idx] = kept


def scale_subset(psi, positions, factors):
    """Multiply by factors[v] where bit i of v is the value of qubit positions[i]."""
    q = _num_qubits(psi)
    k = len(positions)
    fac = np.asarray(factors, dtype=np.float64).reshape([2] * k)
    # axis j of fac corresponds to qubit positions[k-1-j]; move each to its
    # statevector axis (axis of qubit p is q-1-p) in ascending order
    target_axes = [q - 1 - int(positions[k - 1 - j]) for j in range(k)]
    order = np.argsort(target_axes)
    shape = [1] * q
    for axis in sorted(target_axes):
        shape[axis] = 2
    psi.reshape([2] * q)[...] *= fac.transpose(order).reshape(shape)


def marginal_probs(psi, positions) -> np.ndarray:
    """Probability of each value of the qubit subset, marginalizing the rest.

    Bit i of the returned array's index is the value of qubit positions[i].
    """
    q = _num_qubits(psi)
    k = len(positions)
    probs = (psi.real ** 2 + psi.imag ** 2).reshape([2] * q)
    keep = [q - 1 - int(p) for p in positions]
    other = tuple(a for a in range(q) if a not in set(keep))
    reduced = probs.sum(axis=other)
    remaining = sorted(keep)
    order = [remaining.index(q - 1 - int(positions[k - 1 - j])) for j in range(k)]
    return np.ascontiguousarray(reduced.transpose(order).reshape(-1))


def norm_sq(psi) -> float:
    return float((psi.real ** 2 + psi.imag ** 2).sum())
