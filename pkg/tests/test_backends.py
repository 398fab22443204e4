"""Cross-checks between the compiled kernels and the numpy fallback.

Every public kernel is driven with identical random inputs through both
implementations; results must agree to near machine precision.
"""
import numpy as np
import pytest

from qpoisson import _kernels_np as knp

kc = pytest.importorskip("qpoisson._kernels")

from conftest import random_state


def _pair_states(q, rng):
    base = random_state(q, rng).vector
    return base.copy(), base.copy()


def test_backend_names():
    assert knp.BACKEND_NAME == "numpy"
    assert kc.BACKEND_NAME == "cython"


def test_apply_ctrl_1q(rng):
    for _ in range(20):
        q = int(rng.integers(2, 8))
        a, b = _pair_states(q, rng)
        target = int(rng.integers(q))
        others = [t for t in range(q) if t != target]
        rng.shuffle(others)
        n_ctrl = int(rng.integers(0, min(3, len(others)) + 1))
        ctrl_mask = 0
        ctrl_value = 0
        for c in others[:n_ctrl]:
            ctrl_mask |= 1 << c
            if rng.integers(2):
                ctrl_value |= 1 << c
        th = rng.uniform(0, 2 * np.pi)
        u = np.array([[np.cos(th), -np.sin(th)], [np.sin(th), np.cos(th)]],
                     dtype=complex) * np.exp(1j * rng.uniform(0, 2 * np.pi))
        kc.apply_ctrl_1q(a, 1 << target, ctrl_mask, ctrl_value,
                         u[0, 0], u[0, 1], u[1, 0], u[1, 1])
        knp.apply_ctrl_1q(b, 1 << target, ctrl_mask, ctrl_value,
                          u[0, 0], u[0, 1], u[1, 0], u[1, 1])
        assert np.abs(a - b).max() < 1e-12


def test_apply_phase_mask(rng):
    for _ in range(20):
        q = int(rng.integers(1, 8))
        a, b = _pair_states(q, rng)
        mask = int(rng.integers(1, 1 << q))
        value = int(rng.integers(1 << q)) & mask
        phase = np.exp(1j * rng.uniform(0, 2 * np.pi))
        kc.apply_phase_mask(a, mask, value, phase)
        knp.apply_phase_mask(b, mask, value, phase)
        assert np.abs(a - b).max() < 1e-12


def test_apply_block(rng):
    for _ in range(20):
        q = int(rng.integers(2, 8))
        k = int(rng.integers(1, min(q, 4) + 1))
        qubits = rng.permutation(q)[:k]
        offsets = np.zeros(1 << k, dtype=np.int64)
        for v in range(1 << k):
            acc = 0
            for i, qb in enumerate(qubits):
                acc |= ((v >> i) & 1) << qb
            offsets[v] = acc
        block_mask = 0
        for qb in qubits:
            block_mask |= 1 << int(qb)
        raw = rng.normal(size=(1 << k, 1 << k)) + 1j * rng.normal(size=(1 << k, 1 << k))
        u, _ = np.linalg.qr(raw)
        u = np.ascontiguousarray(u)
        a, b = _pair_states(q, rng)
        kc.apply_block(a, offsets, block_mask, u)
        knp.apply_block(b, offsets, block_mask, u)
        assert np.abs(a - b).max() < 1e-12


def test_prob_mask(rng):
    for _ in range(20):
        q = int(rng.integers(1, 8))
        a, _ = _pair_states(q, rng)
        mask = int(rng.integers(1, 1 << q))
        value = int(rng.integers(1 << q)) & mask
        pa = kc.prob_mask(a, mask, value)
        pb = knp.prob_mask(a, mask, value)
        assert abs(pa - pb) < 1e-14


def test_collapse_mask(rng):
    for _ in range(20):
        q = int(rng.integers(1, 8))
        a, b = _pair_states(q, rng)
        mask = int(rng.integers(1, 1 << q))
        value = int(rng.integers(1 << q)) & mask
        p = knp.prob_mask(a, mask, value)
        if p < 1e-12:
            continue
        inv = 1.0 / np.sqrt(p)
        kc.collapse_mask(a, mask, value, inv)
        knp.collapse_mask(b, mask, value, inv)
        assert np.abs(a - b).max() < 1e-12


def test_scale_subset(rng):
    for _ in range(20):
        q = int(rng.integers(2, 8))
        k = int(rng.integers(1, min(q, 4) + 1))
        positions = np.sort(rng.permutation(q)[:k]).astype(np.int64)
        factors = rng.uniform(0.1, 1.0, size=1 << k)
        a, b = _pair_states(q, rng)
        kc.scale_subset(a, positions, factors)
        knp.scale_subset(b, positions, factors)
        assert np.abs(a - b).max() < 1e-12


def test_marginal_probs(rng):
    for _ in range(20):
        q = int(rng.integers(2, 8))
        k = int(rng.integers(1, q + 1))
        positions = np.sort(rng.permutation(q)[:k]).astype(np.int64)
        a, _ = _pair_states(q, rng)
        pa = np.asarray(kc.marginal_probs(a, positions))
        pb = np.asarray(knp.marginal_probs(a, positions))
        assert np.abs(pa - pb).max() < 1e-13
        assert abs(pa.sum() - 1.0) < 1e-10


def test_norm_sq(rng):
    for _ in range(10):
        q = int(rng.integers(1, 8))
        a, _ = _pair_states(q, rng)
        assert abs(kc.norm_sq(a) - knp.norm_sq(a)) < 1e-14


def test_backend_env_selection():
    from qpoisson._backend import backend_name
    assert backend_name() in ("cython", "numpy")
