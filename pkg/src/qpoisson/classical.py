"""Classical reference for the discretized Poisson problem.

The 1d operator on M-1 interior points of a unit interval split into M
pieces is A1 = M^2 * tridiag(-1, 2, -1). Its eigenpairs are closed form:
lambda_j = 4 M^2 sin^2(j pi / (2 M)) with sine eigenvectors, i.e. the
orthonormal discrete sine transform diagonalizes it. In d dimensions the
operator is the Kronecker sum of 1d copies, eigenvalues add across axes,
and grid points are indexed row major (first axis most significant).

Everything here is the oracle the quantum pipeline is judged against:
dense matrices, a direct LU solve, and the analytic success probability
of the post-selected rotation branch.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .newton import newton_x1, x0_exponent

MAX_DENSE_POINTS = 4096


def _check_M(M: int) -> int:
    M = int(M)
    if M < 2 or M & (M - 1):
        raise ValueError(f"M must be a power of two >= 2, got {M}")
    return M


def _check_dims(M: int, d: int) -> tuple[int, int]:
    M = _check_M(M)
    d = int(d)
    if d < 1:
        raise ValueError(f"d must be >= 1, got {d}")
    if (M - 1) ** d > MAX_DENSE_POINTS:
        raise ValueError(
            f"(M-1)^d = {(M - 1) ** d} interior points exceeds the dense "
            f"limit {MAX_DENSE_POINTS}")
    return M, d


@dataclass(frozen=True, eq=False)
class PoissonProblem:
    """One solver instance: grid, right-hand side, rotation angle, sampling.

    ``rhs`` holds the (M-1)^d interior values in row-major grid order and
    need not be normalized. ``n_b`` optionally overrides the phase-register
    size; None selects the default for (M, d). ``shots``/``seed`` control
    optional sampling on top of the exact amplitudes.
    """

    M: int
    d: int
    rhs: np.ndarray
    alpha: float
    n_b: Optional[int] = None
    shots: int = 0
    seed: int = 0

    def __post_init__(self):
        M, d = _check_dims(self.M, self.d)
        object.__setattr__(self, "M", M)
        object.__setattr__(self, "d", d)
        rhs = np.array(self.rhs, dtype=np.float64)
        if rhs.shape != ((M - 1) ** d,):
            raise ValueError(
                f"rhs must have (M-1)^d = {(M - 1) ** d} entries, got {rhs.shape}")
        if not np.all(np.isfinite(rhs)):
            raise ValueError("rhs contains non-finite values")
        if np.linalg.norm(rhs) == 0.0:
            raise ValueError("rhs is identically zero")
        rhs.setflags(write=False)
        object.__setattr__(self, "rhs", rhs)
        object.__setattr__(self, "alpha", float(self.alpha))
        if not self.alpha > 0:
            raise ValueError(f"alpha must be positive, got {self.alpha}")
        if self.n_b is not None:
            object.__setattr__(self, "n_b", int(self.n_b))
            if self.n_b < 1:
                raise ValueError("n_b must be >= 1")
        object.__setattr__(self, "shots", int(self.shots))
        if self.shots < 0:
            raise ValueError("shots must be non-negative")
        object.__setattr__(self, "seed", int(self.seed))

    @property
    def b_normalized(self) -> np.ndarray:
        return self.rhs / np.linalg.norm(self.rhs)


def poisson_matrix_1d(M: int) -> np.ndarray:
    """M^2 * tridiag(-1, 2, -1) on the M-1 interior points."""
    M = _check_M(M)
    size = M - 1
    a = 2.0 * np.eye(size) - np.eye(size, k=1) - np.eye(size, k=-1)
    return (M * M) * a


def poisson_matrix_nd(M: int, d: int) -> np.ndarray:
    """Kronecker sum of d copies of the 1d operator, row-major grid order."""
    M, d = _check_dims(M, d)
    a1 = poisson_matrix_1d(M)
    size = M - 1
    out = np.zeros((size ** d, size ** d))
    for axis in range(d):
        term = np.eye(size ** axis)
        term = np.kron(term, a1)
        term = np.kron(term, np.eye(size ** (d - 1 - axis)))
        out += term
    return out


def eigenvalue_1d(M: int, j: int) -> float:
    """lambda_j = 4 M^2 sin^2(j pi / (2 M)) for j in 1..M-1."""
    M = _check_M(M)
    if not 1 <= j <= M - 1:
        raise ValueError(f"j must be in 1..{M - 1}, got {j}")
    s = math.sin(j * math.pi / (2 * M))
    return 4.0 * M * M * s * s


def eigenvector_1d(M: int, j: int) -> np.ndarray:
    """Orthonormal sine mode: sqrt(2/M) sin(j k pi / M), k = 1..M-1."""
    M = _check_M(M)
    if not 1 <= j <= M - 1:
        raise ValueError(f"j must be in 1..{M - 1}, got {j}")
    k = np.arange(1, M)
    return np.sqrt(2.0 / M) * np.sin(j * k * np.pi / M)


def dst_matrix(M: int) -> np.ndarray:
    """Orthonormal DST on M-1 points; symmetric and involutory (S @ S = I)."""
    M = _check_M(M)
    jk = np.outer(np.arange(1, M), np.arange(1, M))
    return np.sqrt(2.0 / M) * np.sin(jk * np.pi / M)


@dataclass(frozen=True, eq=False)
class EigenSystem:
    """Spectrum of the d-dimensional operator over row-major mode indices.

    ``eigenvalues[i]`` belongs to the mode multi-index (j_1 .. j_d) with
    i = sum (j_k - 1) * (M-1)^(d-k); each j_k runs 1..M-1. Eigenvectors are
    products of 1d sine modes and are generated on demand.
    """

    M: int
    d: int
    eigenvalues: np.ndarray

    @property
    def kappa(self) -> float:
        """Condition number: largest over smallest eigenvalue."""
        return float(self.eigenvalues.max() / self.eigenvalues.min())

    @property
    def sorted_eigenvalues(self) -> np.ndarray:
        return np.sort(self.eigenvalues)

    def multi_index(self, i: int) -> tuple:
        size = self.M - 1
        out = []
        for _ in range(self.d):
            i, r = divmod(i, size)
            out.append(r + 1)
        return tuple(reversed(out))

    def eigenvector(self, modes) -> np.ndarray:
        """Product sine mode for the multi-index ``modes`` (length d)."""
        if len(modes) != self.d:
            raise ValueError(f"expected {self.d} mode indices, got {len(modes)}")
        vec = np.array([1.0])
        for j in modes:
            vec = np.kron(vec, eigenvector_1d(self.M, j))
        return vec


def eigen_nd(M: int, d: int) -> EigenSystem:
    """All (M-1)^d eigenvalues of the d-dimensional operator."""
    M, d = _check_dims(M, d)
    lam1 = np.array([eigenvalue_1d(M, j) for j in range(1, M)])
    lams = np.zeros(1)
    for _ in range(d):
        lams = (lams[:, None] + lam1[None, :]).reshape(-1)
    lams.setflags(write=False)
    return EigenSystem(M, d, lams)


def solve_classical(problem: PoissonProblem) -> tuple[np.ndarray, np.ndarray, float]:
    """Direct LU solve of A u = b with b normalized.

    Returns (u_hat, u_raw, kappa): the unit-norm solution direction the
    quantum pipeline should reproduce, the unnormalized solve, and the
    operator's condition number.
    """
    a = poisson_matrix_nd(problem.M, problem.d)
    raw = np.linalg.solve(a, problem.b_normalized)
    u_hat = raw / np.linalg.norm(raw)
    return u_hat, raw, eigen_nd(problem.M, problem.d).kappa


def default_register_size(M: int, d: int) -> int:
    """Phase-register size n with 2**n >= 4 d M^2, the spectral upper bound.

    n = 2 + ceil(log2 d) + 2 log2 M, so every eigenvalue fits in n bits.
    """
    M, d = _check_dims(M, d)
    return 2 + math.ceil(math.log2(d)) + 2 * int(math.log2(M))


def default_alpha(M: int, d: int) -> float:
    """Default rotation angle: d * lambda_1(1d) / 2, half the smallest scale."""
    M, d = _check_dims(M, d)
    return d * eigenvalue_1d(M, 1) / 2.0


def pea_kernel_weights(lam: float, n: int) -> np.ndarray:
    """Phase-estimation outcome distribution for a mode at ``lam``.

    Probability of reading integer y from an n-bit register when the true
    phase corresponds to lam: the squared Dirichlet kernel
    sin^2(pi delta) / (N sin(pi delta / N))^2 with delta = lam - y, N = 2**n.
    Exact integers collapse to a single outcome; the weights sum to one.
    """
    if n < 1:
        raise ValueError("register needs at least one bit")
    N = 1 << n
    y = np.arange(N, dtype=np.float64)
    delta = lam - y
    # reduce mod N to keep both sines well conditioned near the peak
    r = delta - N * np.round(delta / N)
    with np.errstate(divide="ignore", invalid="ignore"):
        w = np.sin(np.pi * r) ** 2 / (N * np.sin(np.pi * r / N)) ** 2
    return np.where(r == 0.0, 1.0, w)


def to_eigenbasis(vec: np.ndarray, M: int, d: int) -> np.ndarray:
    """Coefficients of ``vec`` in the product sine basis (DST along each axis)."""
    M, d = _check_dims(M, d)
    s = dst_matrix(M)
    arr = np.asarray(vec, dtype=np.float64).reshape([M - 1] * d)
    for axis in range(d):
        arr = np.moveaxis(np.tensordot(s, arr, axes=(1, axis)), 0, axis)
    return arr.reshape(-1)


def expected_success_probability(problem: PoissonProblem, mode: str = "rounded",
                                 n: Optional[int] = None,
                                 resolution_shift: int = 0) -> float:
    """Analytic probability of the rotation ancilla landing in |1>.

    mode="exact" ignores the register: sum_J b_J^2 sin^2(alpha / lambda_J).
    mode="rounded" folds in phase-estimation rounding: each mode spreads
    over register values y with the kernel weights, and the rotation uses
    the register-level reciprocal x1(y), so the result matches the
    simulated branch probability to float precision.
    """
    bhat = to_eigenbasis(problem.b_normalized, problem.M, problem.d)
    lams = eigen_nd(problem.M, problem.d).eigenvalues
    if mode == "exact":
        return float(np.sum(bhat ** 2 * np.sin(problem.alpha / lams) ** 2))
    if mode != "rounded":
        raise ValueError(f"unknown mode {mode!r}, expected 'exact' or 'rounded'")
    n_eff = n if n is not None else (
        problem.n_b if problem.n_b is not None
        else default_register_size(problem.M, problem.d))
    n_reg = n_eff - resolution_shift
    if n_reg < 1:
        raise ValueError(f"resolution shift {resolution_shift} leaves no register bits")
    scale = 2.0 ** (-resolution_shift)
    alpha_eff = problem.alpha * scale
    sin2 = np.zeros(1 << n_reg)
    for y in range(2, 1 << n_reg):
        p = x0_exponent(y)
        sin2[y] = math.sin(alpha_eff * newton_x1(y, p)) ** 2
    total = 0.0
    for bj, lam in zip(bhat, lams):
        w = pea_kernel_weights(lam * scale, n_reg)
        total += bj * bj * float(w @ sin2)
    return float(total)
