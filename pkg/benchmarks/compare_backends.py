"""Time the compiled kernels against the numpy fallback.

Runs each kernel on identical random states at realistic simulator sizes
and prints a table of per-call times and the speedup. Also times one full
solve per backend through the public pipeline (selected via
QPOISSON_KERNELS in a subprocess, since the backend binds at import).

Usage: python3 benchmarks/compare_backends.py [--qubits 20] [--repeat 5]
"""
import argparse
import os
import subprocess
import sys
import time

import numpy as np


def _load_backends():
    from qpoisson import _kernels_np
    backends = [("numpy", _kernels_np)]
    try:
        from qpoisson import _kernels
        backends.insert(0, ("cython", _kernels))
    except ImportError:
        print("compiled kernels not installed; timing numpy only")
    return backends


def _random_state(q, rng):
    amps = rng.normal(size=1 << q) + 1j * rng.normal(size=1 << q)
    amps /= np.linalg.norm(amps)
    return amps


def _time(fn, repeat):
    best = float("inf")
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t0)
    return best


def bench_kernels(q, repeat):
    rng = np.random.default_rng(0)
    state = _random_state(q, rng)
    u = np.array([[0.6, -0.8], [0.8, 0.6]], dtype=complex)

    block_qubits = (0, 1, 2)
    offsets = np.array([sum(((v >> i) & 1) << qb
                            for i, qb in enumerate(block_qubits))
                        for v in range(8)], dtype=np.int64)
    block_mask = sum(1 << qb for qb in block_qubits)
    raw = rng.normal(size=(8, 8)) + 1j * rng.normal(size=(8, 8))
    bu, _ = np.linalg.qr(raw)
    bu = np.ascontiguousarray(bu)

    positions = np.arange(6, dtype=np.int64)
    factors = rng.uniform(0.2, 1.0, size=64)

    cases = {
        "apply_ctrl_1q (2 ctrl)": lambda k, psi: k.apply_ctrl_1q(
            psi, 1 << (q - 1), 0b11, 0b01, u[0, 0], u[0, 1], u[1, 0], u[1, 1]),
        "apply_phase_mask": lambda k, psi: k.apply_phase_mask(
            psi, 0b111, 0b101, np.exp(0.3j)),
        "apply_block (3 qubits)": lambda k, psi: k.apply_block(
            psi, offsets, block_mask, bu),
        "prob_mask": lambda k, psi: k.prob_mask(psi, 0b11, 0b01),
        "scale_subset (6 qubits)": lambda k, psi: k.scale_subset(
            psi, positions, factors),
        "marginal_probs (6 qubits)": lambda k, psi: k.marginal_probs(
            psi, positions),
    }

    backends = _load_backends()
    print(f"\nkernel timings at {q} qubits ({1 << q:,} amplitudes), "
          f"best of {repeat}")
    header = f"{'kernel':28s}" + "".join(f"{name:>12s}" for name, _ in backends)
    if len(backends) == 2:
        header += f"{'speedup':>10s}"
    print(header)
    print("-" * len(header))
    for label, call in cases.items():
        times = []
        for _, mod in backends:
            psi = state.copy()
            times.append(_time(lambda: call(mod, psi), repeat))
        row = f"{label:28s}" + "".join(f"{t * 1e3:10.2f}ms" for t in times)
        if len(times) == 2:
            row += f"{times[1] / times[0]:9.1f}x"
        print(row)


def bench_solve(repeat):
    print(f"\nfull pipeline solve (M=4, d=2, 19 qubits), best of {repeat}")
    script = (
        "import time, numpy as np\n"
        "from qpoisson import PoissonProblem, run_pipeline, backend_name\n"
        "prob = PoissonProblem(M=4, d=2, rhs=tuple(float(i == 0) for i in range(9)),\n"
        "                      alpha=9.37)\n"
        f"best = min((lambda t0=time.perf_counter(): (run_pipeline(prob), time.perf_counter() - t0)[1])() for _ in range({repeat}))\n"
        "print(backend_name(), best)\n"
    )
    results = {}
    for backend in ("cython", "numpy"):
        env = dict(os.environ, QPOISSON_KERNELS=backend)
        proc = subprocess.run([sys.executable, "-c", script], env=env,
                              capture_output=True, text=True)
        if proc.returncode != 0:
            print(f"  {backend:8s} unavailable")
            continue
        name, seconds = proc.stdout.split()
        results[name] = float(seconds)
        print(f"  {name:8s} {float(seconds) * 1e3:10.1f}ms")
    if len(results) == 2:
        print(f"  speedup  {results['numpy'] / results['cython']:9.1f}x")


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--qubits", type=int, default=20)
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args()
    bench_kernels(args.qubits, args.repeat)
    bench_solve(args.repeat)


if __name__ == "__main__":
    main()
