"""Exact and noisy circuit execution, shot sampling, fidelity, sweeps.

Statevector simulation is exact and returns pre-measurement amplitudes.
Density-matrix simulation applies each gate as rho -> U rho U^dag followed
by that gate's noise channels (depolarizing, then thermal relaxation); rz
gates are noiseless and take no time while the model's rz_virtual flag is
set. Readout errors act on sampled bits only.

Outcome bitstrings list classical bit 0 first: key[i] is the value read
from classical bit i (or from qubit i when the circuit has no measurements).

Randomness comes from numpy's seeded PCG64 generator, which is stable
across platforms; a sweep derives the seed for length l as seed + l, so
rows are reproducible regardless of evaluation order.
"""
from __future__ import annotations

import json
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from . import kernels
from .circuit import Circuit, CircuitError, gate_matrix, measured_qubits
from .compiler import CostReport, LoweringRequest, compile_request, cost_report
from .noise import (
    NoiseModel,
    depolarizing_1q_kraus,
    depolarizing_2q_kraus,
    thermal_kraus_sets,
)

MAX_STATE_QUBITS = 12
MAX_DENSITY_QUBITS = 8

CSV_HEADER = "length,scheme,p,k_set,ideal_prob,noisy_prob,fidelity,sx,rz,cx,depth"


def simulate_state(c: Circuit) -> tuple[np.ndarray, dict[str, float]]:
    """Pre-measurement statevector and outcome probabilities.

    Probabilities are marginalized onto the measured qubits in classical-bit
    order; an unmeasured circuit reports the distribution over all qubits.
    """
    n = c.num_qubits
    if n > MAX_STATE_QUBITS:
        raise CircuitError(f"statevector width is capped at {MAX_STATE_QUBITS} qubits")
    state = np.zeros(1 << n, dtype=complex)
    state[0] = 1.0
    for g in c.gates:
        if g.name == "measure":
            continue
        if len(g.qubits) == 1:
            state = kernels.apply_1q_sv(state, gate_matrix(g), g.qubits[0])
        else:
            state = kernels.apply_2q_sv(state, gate_matrix(g), g.qubits[0], g.qubits[1])
    if c.global_phase:
        state = state * np.exp(1j * c.global_phase)
    probs = np.abs(state) ** 2
    wires = list(measured_qubits(c.gates).values()) or list(range(n))
    return state, _marginal_probs(probs, n, wires)


def _marginal_probs(probs: np.ndarray, n: int, wires: list[int]) -> dict[str, float]:
    """Marginal distribution over `wires`, keyed c0 c1 ... (wires[i] -> char i)."""
    t = probs.reshape((2,) * n)
    axes = [n - 1 - q for q in wires]
    keep = t.transpose(axes + [a for a in range(n) if a not in axes])
    if len(wires) < n:
        keep = keep.sum(axis=tuple(range(len(wires), n)))
    flat = keep.reshape(-1)
    m = len(wires)
    return {format(i, f"0{m}b"): float(flat[i]) for i in range(1 << m)}


def _gate_duration(g, thermal, rz_virtual) -> float:
    if thermal is None:
        return 0.0
    if g.name == "rz" and rz_virtual:
        return 0.0
    return thermal.gate_time_2q if len(g.qubits) == 2 else thermal.gate_time_1q


def simulate_density(c: Circuit, noise: NoiseModel) -> np.ndarray:
    """Pre-measurement density matrix under the given noise model."""
    n = c.num_qubits
    if n > MAX_DENSITY_QUBITS:
        raise CircuitError(f"density-matrix width is capped at {MAX_DENSITY_QUBITS} qubits")
    rho = np.zeros((1 << n, 1 << n), dtype=complex)
    rho[0, 0] = 1.0
    for g in c.gates:
        if g.name == "measure":
            continue
        u = gate_matrix(g)
        virtual = g.name == "rz" and noise.rz_virtual
        if len(g.qubits) == 1:
            q = g.qubits[0]
            rho = kernels.evolve_1q_dm(rho, u, q)
            if virtual:
                continue
            if noise.depol_1q > 0:
                rho = kernels.kraus_1q_dm(rho, depolarizing_1q_kraus(noise.depol_1q), q)
            for ks in _thermal_sets(noise, _gate_duration(g, noise.thermal, noise.rz_virtual)):
                rho = kernels.kraus_1q_dm(rho, ks, q)
        else:
            q0, q1 = g.qubits
            rho = kernels.evolve_2q_dm(rho, u, q0, q1)
            if noise.depol_2q > 0:
                rho = kernels.kraus_2q_dm(rho, depolarizing_2q_kraus(noise.depol_2q), q0, q1)
            for ks in _thermal_sets(noise, noise.thermal.gate_time_2q if noise.thermal else 0.0):
                rho = kernels.kraus_1q_dm(rho, ks, q0)
                rho = kernels.kraus_1q_dm(rho, ks, q1)
    return rho


def _thermal_sets(noise: NoiseModel, duration: float):
    if noise.thermal is None or duration == 0:
        return []
    return thermal_kraus_sets(noise.thermal, duration)


def physical_gate_count(c: Circuit, noise: NoiseModel) -> int:
    """Gates that incur noise: everything but measurements and virtual rz."""
    return sum(
        1
        for g in c.gates
        if g.name != "measure" and not (g.name == "rz" and noise.rz_virtual)
    )


def density_outcome_probs(rho: np.ndarray, c: Circuit) -> dict[str, float]:
    """Computational-basis distribution of rho on the circuit's measured qubits."""
    n = c.num_qubits
    probs = np.real(np.diag(rho)).clip(min=0.0)
    wires = list(measured_qubits(c.gates).values()) or list(range(n))
    return _marginal_probs(probs, n, wires)


@dataclass(frozen=True)
class Counts:
    counts: dict[str, int]
    shots: int
    seed: int

    def fraction(self, bitstring: str) -> float:
        return self.counts.get(bitstring, 0) / self.shots


def _probs_to_array(outcome_probs) -> tuple[np.ndarray, int]:
    if isinstance(outcome_probs, np.ndarray):
        if outcome_probs.ndim == 2:  # density matrix: sample its diagonal
            outcome_probs = np.real(np.diag(outcome_probs)).clip(min=0.0)
        arr = np.asarray(outcome_probs, dtype=float)
        m = arr.size.bit_length() - 1
        return arr, m
    m = len(next(iter(outcome_probs)))
    arr = np.zeros(1 << m, dtype=float)
    for key, val in outcome_probs.items():
        arr[int(key, 2)] = val
    return arr, m


def sample_counts(outcome_probs, noise: NoiseModel, shots: int, seed: int) -> Counts:
    """Draw shots from a distribution, then flip each bit per the readout model.

    `outcome_probs` is a bitstring->probability map (as produced by
    simulate_state / density_outcome_probs) or a density matrix, whose
    diagonal is sampled over all of its qubits.
    """
    if shots < 1:
        raise ValueError(f"shots must be >= 1, got {shots}")
    arr, m = _probs_to_array(outcome_probs)
    arr = arr / arr.sum()
    rng = np.random.default_rng(seed)
    outcomes = rng.choice(arr.size, size=shots, p=arr)
    # key char i is classical bit i = index bit (m-1-i)
    bits = (outcomes[:, None] >> np.arange(m - 1, -1, -1)[None, :]) & 1
    if noise.has_readout_error:
        flips = rng.random(size=bits.shape)
        p = np.where(bits == 0, noise.readout_p01, noise.readout_p10)
        bits = bits ^ (flips < p)
    weights = 1 << np.arange(m - 1, -1, -1)
    packed = (bits * weights).sum(axis=1)
    values, freq = np.unique(packed, return_counts=True)
    counts = {format(int(v), f"0{m}b"): int(f) for v, f in zip(values, freq)}
    return Counts(counts, shots, seed)


def readout_adjusted_probs(outcome_probs, noise: NoiseModel) -> dict[str, float]:
    """Exact post-readout distribution (what sampling converges to)."""
    arr, m = _probs_to_array(outcome_probs)
    flip0, flip1 = noise.readout_p01, noise.readout_p10
    out = np.zeros_like(arr)
    for src in range(arr.size):
        if arr[src] == 0:
            continue
        for dst in range(arr.size):
            w = 1.0
            for b in range(m):
                sb, db = (src >> b) & 1, (dst >> b) & 1
                if sb == 0:
                    w *= flip0 if db else 1 - flip0
                else:
                    w *= 1 - flip1 if db else flip1
            out[dst] += arr[src] * w
    return {format(i, f"0{m}b"): float(out[i]) for i in range(arr.size)}


def fidelity(ideal: np.ndarray, noisy: np.ndarray) -> float:
    """<psi| sigma |psi> for a pure reference state and a density matrix."""
    if noisy.shape != (ideal.size, ideal.size):
        raise ValueError(f"dimension mismatch: state {ideal.size}, matrix {noisy.shape}")
    val = complex(np.vdot(ideal, noisy @ ideal))
    if abs(val.imag) > 1e-10:
        raise ValueError(f"fidelity came out non-real ({val}); inputs are inconsistent")
    return val.real


def _psd_sqrt(rho: np.ndarray) -> np.ndarray:
    vals, vecs = np.linalg.eigh(rho)
    # eigenvalues below eigh's resolution are noise; their square roots are not
    vals[vals < vals.max() * rho.shape[0] * np.finfo(float).eps] = 0.0
    return (vecs * np.sqrt(vals)) @ vecs.conj().T


def fidelity_general(rho: np.ndarray, sigma: np.ndarray) -> float:
    """Mixed-state fidelity (tr sqrt(sqrt(rho) sigma sqrt(rho)))^2.

    Evaluated as the squared trace norm of sqrt(sigma) sqrt(rho), which is
    the same quantity but avoids square roots of near-zero eigenvalues.
    """
    if rho.shape != sigma.shape:
        raise ValueError(f"dimension mismatch: {rho.shape} vs {sigma.shape}")
    cross = _psd_sqrt(sigma) @ _psd_sqrt(rho)
    return float(np.linalg.svd(cross, compute_uv=False).sum() ** 2)


# ---------------------------------------------------------------------------
# sweeps

@dataclass(frozen=True)
class SweepRow:
    length: int
    scheme: str
    p: int
    k_set: tuple[int, ...]
    ideal_prob: float
    noisy_prob: float | None
    fid: float | None
    cost: CostReport


def _sweep_row(p, multipliers, scheme, length, noise, shots, seed, run_optimize) -> SweepRow:
    req = LoweringRequest(p=p, multipliers=tuple(multipliers), n=length, scheme=scheme)
    circ = compile_request(req, run_optimize=run_optimize)
    m = circ.num_measured
    state, probs = simulate_state(circ)
    ideal = probs["0" * m]
    noisy_prob = fid = None
    if noise is not None:
        rho = simulate_density(circ, noise)
        counts = sample_counts(density_outcome_probs(rho, circ), noise, shots, seed + length)
        noisy_prob = counts.fraction("0" * m)
        fid = fidelity(state, rho)
    return SweepRow(length, scheme, p, tuple(multipliers), ideal, noisy_prob, fid,
                    cost_report(circ))


def sweep(
    p: int,
    multipliers,
    scheme: str,
    max_length: int,
    *,
    noise: NoiseModel | None = None,
    shots: int | None = None,
    seed: int | None = None,
    run_optimize: bool = True,
) -> list[SweepRow]:
    """Compile and evaluate word lengths 0..max_length.

    With a noise model, shots and seed are required; the sampling seed for
    length l is seed + l. Rows are independent; MODFA_THREADS > 1 evaluates
    them in a thread pool (output order is always by length).
    """
    if max_length < 0:
        raise ValueError(f"max length must be >= 0, got {max_length}")
    if noise is not None and (shots is None or seed is None):
        raise ValueError("a noisy sweep requires both shots and seed")
    lengths = range(max_length + 1)

    def one(length: int) -> SweepRow:
        return _sweep_row(p, multipliers, scheme, length, noise, shots, seed, run_optimize)

    workers = int(os.environ.get("MODFA_THREADS", "1"))
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            return list(pool.map(one, lengths))
    return [one(length) for length in lengths]


def _fmt(x: float | None) -> str:
    return "" if x is None else f"{x:.12g}"


def rows_to_csv(rows: list[SweepRow]) -> str:
    lines = [CSV_HEADER]
    for r in rows:
        k = ";".join(map(str, r.k_set))
        c = r.cost
        lines.append(
            f"{r.length},{r.scheme},{r.p},{k},{_fmt(r.ideal_prob)},"
            f"{_fmt(r.noisy_prob)},{_fmt(r.fid)},{c.sx},{c.rz},{c.cx},{c.depth}"
        )
    return "\n".join(lines) + "\n"


def rows_to_jsonl(rows: list[SweepRow]) -> str:
    lines = []
    for r in rows:
        c = r.cost
        lines.append(json.dumps({
            "length": r.length, "scheme": r.scheme, "p": r.p, "k_set": list(r.k_set),
            "ideal_prob": r.ideal_prob, "noisy_prob": r.noisy_prob, "fidelity": r.fid,
            "sx": c.sx, "rz": c.rz, "cx": c.cx, "depth": c.depth,
        }))
    return "\n".join(lines) + "\n"
