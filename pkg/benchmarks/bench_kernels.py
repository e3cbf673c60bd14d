"""Compare the compiled kernel backend against the pure-numpy fallback.

Workloads:
  * sweep statevector: exact simulation of the compiled three-qubit
    optimized scheme for lengths 0..22 (the ideal-probability column)
  * density: noisy density-matrix simulation of the longest such circuit
    (depolarizing + thermal relaxation)
  * wide statevector: a synthetic random 1q/2q chain at 12 qubits, where
    BLAS-backed numpy catches up on raw bandwidth

Usage: python benchmarks/bench_kernels.py [--reps N]
"""
from __future__ import annotations

import argparse
import time

import numpy as np

from modfa import kernels
from modfa.compiler import LoweringRequest, compile_request
from modfa.noise import NoiseModel, ThermalRelaxation
from modfa.sim import simulate_density, simulate_state


def _random_unitary(rng, dim):
    a = rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))
    q, r = np.linalg.qr(a)
    return q * (np.diag(r) / np.abs(np.diag(r)))


def bench_statevector(n_qubits=12, n_gates=200, seed=0):
    rng = np.random.default_rng(seed)
    ops = []
    for _ in range(n_gates):
        if rng.random() < 0.3:
            q0, q1 = (int(q) for q in rng.choice(n_qubits, size=2, replace=False))
            ops.append((_random_unitary(rng, 4), q0, q1))
        else:
            ops.append((_random_unitary(rng, 2), int(rng.integers(n_qubits)), None))
    state = np.zeros(1 << n_qubits, dtype=complex)
    state[0] = 1.0

    def run():
        s = state
        for u, q0, q1 in ops:
            if q1 is None:
                s = kernels.apply_1q_sv(s, u, q0)
            else:
                s = kernels.apply_2q_sv(s, u, q0, q1)
        return s

    return run


def bench_sweep_states(max_length=22):
    circuits = [
        compile_request(LoweringRequest(11, (3, 5, 7), n, "opt-rz"))
        for n in range(max_length + 1)
    ]

    def run():
        for circ in circuits:
            simulate_state(circ)

    return run


def bench_density(length=22, seed=0):
    noise = NoiseModel(
        depol_1q=0.001, depol_2q=0.01,
        thermal=ThermalRelaxation(t1=100_000, t2=150_000, gate_time_1q=35, gate_time_2q=300),
    )
    circ = compile_request(LoweringRequest(11, (3, 5, 7), length, "opt-rz"))

    def run():
        return simulate_density(circ, noise)

    return run


def _time(fn, reps):
    best = float("inf")
    for _ in range(reps):
        t0 = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t0)
    return best


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--reps", type=int, default=5, help="repetitions, best time kept")
    args = parser.parse_args()

    workloads = {
        "sweep states opt-rz 0..22": bench_sweep_states(),
        "density opt-rz n=22 noisy": bench_density(),
        "statevector 12q x200 gates": bench_statevector(),
    }
    results: dict[str, dict[str, float]] = {}
    for backend in kernels.available_backends():
        kernels.set_backend(backend)
        for name, fn in workloads.items():
            fn()  # warm up
            results.setdefault(name, {})[backend] = _time(fn, args.reps)

    print(f"{'workload':<32} " + "".join(f"{b:>12} " for b in kernels.available_backends())
          + f"{'speedup':>9}")
    for name, times in results.items():
        row = f"{name:<32} " + "".join(f"{times[b] * 1e3:>10.2f}ms " for b in times)
        if "cython" in times and "numpy" in times:
            row += f"{times['numpy'] / times['cython']:>8.2f}x"
        print(row)


if __name__ == "__main__":
    main()
