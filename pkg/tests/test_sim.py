import math

import numpy as np
import pytest

from modfa.circuit import Circuit, CircuitError, Gate
from modfa.compiler import LoweringRequest, compile_request, lower
from modfa.noise import NoiseModel, ThermalRelaxation, ZERO_NOISE
from modfa.qfa import mean_square_closed_form, two_state_closed_form
from modfa.sim import (
    density_outcome_probs,
    fidelity,
    fidelity_general,
    physical_gate_count,
    readout_adjusted_probs,
    rows_to_csv,
    rows_to_jsonl,
    sample_counts,
    simulate_density,
    simulate_state,
    sweep,
)


def _random_density(rng, dim):
    a = rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))
    rho = a @ a.conj().T
    return rho / np.trace(rho).real


# -- statevector -----------------------------------------------------------------

def test_simulate_member_word_rz_single():
    c = compile_request(LoweringRequest(11, (1,), 11, "rz-single"))
    _, probs = simulate_state(c)
    assert probs["0"] == pytest.approx(1.0, abs=1e-9)


def test_simulate_matches_closed_form():
    # independent oracle: the printed cosine expression
    c = compile_request(LoweringRequest(11, (1,), 4, "ry-single"))
    _, probs = simulate_state(c)
    assert probs["0"] == pytest.approx(math.cos(8 * math.pi / 11) ** 2, abs=1e-12)
    assert probs["0"] == pytest.approx(two_state_closed_form(11, 1, 4), abs=1e-12)


def test_simulate_empty_circuit():
    _, probs = simulate_state(Circuit(2))
    assert probs["00"] == 1.0
    assert sum(probs.values()) == pytest.approx(1.0)


def test_simulate_marginalizes_on_measured_bits():
    # only q1 measured; q0 is rotated but must be traced out
    c = Circuit(2, (Gate("ry", (0,), 1.0), Gate("x", (1,)),
                    Gate("measure", (1,), cbit=0)))
    _, probs = simulate_state(c)
    assert probs == {"0": pytest.approx(0.0, abs=1e-12), "1": pytest.approx(1.0)}


def test_simulate_width_cap():
    with pytest.raises(CircuitError):
        simulate_state(Circuit(13))


def test_statevector_norm_preserved():
    c = compile_request(LoweringRequest(11, (3, 5, 7), 9, "opt-ry"))
    state, _ = simulate_state(c)
    assert np.linalg.norm(state) == pytest.approx(1.0, abs=1e-9)


# -- density matrix -----------------------------------------------------------------

def test_zero_noise_density_equals_pure_projector():
    c = compile_request(LoweringRequest(11, (3, 5, 7), 5, "opt-rz"))
    state, probs = simulate_state(c)
    rho = simulate_density(c, ZERO_NOISE)
    assert np.max(np.abs(rho - np.outer(state, state.conj()))) < 1e-12
    diag = density_outcome_probs(rho, c)
    for key, val in probs.items():
        assert diag[key] == pytest.approx(val, abs=1e-10)


def test_full_depolarization_gives_maximally_mixed():
    c = lower(LoweringRequest(11, (1,), 1, "ry-single", include_measure=False))
    rho = simulate_density(c, NoiseModel(depol_1q=1.0))
    assert np.max(np.abs(rho - np.eye(2) / 2)) < 1e-12


def test_depolarizing_closed_form_fidelity():
    # F = (1 + (1-q)^g) / 2 with g the number of noisy gates
    for q in (0.001, 0.01, 0.1):
        noise = NoiseModel(depol_1q=q)
        for n in (1, 3, 10, 22):
            c = lower(LoweringRequest(11, (1,), n, "ry-single", include_measure=False))
            g = physical_gate_count(c, noise)
            assert g == n
            state, _ = simulate_state(c)
            rho = simulate_density(c, noise)
            assert fidelity(state, rho) == pytest.approx((1 + (1 - q) ** g) / 2, abs=1e-10)


def test_virtual_rz_carries_no_noise():
    noise = NoiseModel(depol_1q=0.05)
    c = lower(LoweringRequest(11, (1,), 9, "rz-single", include_measure=False))
    assert physical_gate_count(c, noise) == 2
    state, _ = simulate_state(c)
    assert fidelity(state, simulate_density(c, noise)) == pytest.approx(
        (1 + 0.95**2) / 2, abs=1e-10)
    # with the flag off every rz counts
    loud = NoiseModel(depol_1q=0.05, rz_virtual=False)
    assert physical_gate_count(c, loud) == 11
    assert fidelity(state, simulate_density(c, loud)) == pytest.approx(
        (1 + 0.95**11) / 2, abs=1e-10)


def test_density_invariants_under_random_noise():
    rng = np.random.default_rng(51)
    for scheme, ks in (("rz-single", (1,)), ("opt-ry", (3, 5, 7)), ("opt-rz", (3, 5, 7))):
        for _ in range(3):
            noise = NoiseModel(
                depol_1q=float(rng.uniform(0, 0.2)),
                depol_2q=float(rng.uniform(0, 0.2)),
                thermal=ThermalRelaxation(100_000, float(rng.uniform(50_000, 200_000)),
                                          35, 300),
            )
            n = int(rng.integers(0, 23))
            c = compile_request(LoweringRequest(11, ks, n, scheme))
            rho = simulate_density(c, noise)
            assert np.trace(rho).real == pytest.approx(1.0, abs=1e-10)
            assert np.max(np.abs(rho - rho.conj().T)) < 1e-10
            assert np.linalg.eigvalsh(rho).min() > -1e-9


def test_density_width_cap():
    with pytest.raises(CircuitError):
        simulate_density(Circuit(9), ZERO_NOISE)


# -- sampling -----------------------------------------------------------------------

def test_sample_deterministic_distribution():
    counts = sample_counts({"0": 1.0}, ZERO_NOISE, 100, seed=0)
    assert counts.counts == {"0": 100}
    assert counts.shots == 100


def test_sample_readout_flip_concentration():
    noise = NoiseModel(readout_p01=0.1)
    shots = 10**6
    counts = sample_counts({"0": 1.0}, noise, shots, seed=9)
    frac = counts.counts.get("1", 0) / shots
    sigma = math.sqrt(0.1 * 0.9 / shots)
    assert abs(frac - 0.1) <= 3 * sigma


def test_sample_seed_reproducibility():
    nm = NoiseModel(readout_p01=0.03, readout_p10=0.05)
    probs = {"00": 0.4, "01": 0.1, "10": 0.2, "11": 0.3}
    a = sample_counts(probs, nm, 4096, seed=77)
    b = sample_counts(probs, nm, 4096, seed=77)
    assert a == b


def test_sample_accepts_density_matrix():
    rho = np.diag([0.25, 0.75]).astype(complex)
    counts = sample_counts(rho, ZERO_NOISE, 8192, seed=3)
    frac = counts.counts["1"] / 8192
    assert abs(frac - 0.75) <= 3 * math.sqrt(0.75 * 0.25 / 8192)


def test_readout_adjusted_probs_match_sampling():
    nm = NoiseModel(readout_p01=0.04, readout_p10=0.07)
    probs = {"00": 0.5, "11": 0.5}
    exact = readout_adjusted_probs(probs, nm)
    assert sum(exact.values()) == pytest.approx(1.0, abs=1e-12)
    shots = 200_000
    counts = sample_counts(probs, nm, shots, seed=15)
    for key, want in exact.items():
        frac = counts.counts.get(key, 0) / shots
        sigma = math.sqrt(want * (1 - want) / shots)
        assert abs(frac - want) <= 4 * sigma + 1e-9


# -- fidelity ----------------------------------------------------------------------

def test_fidelity_pure_projector_is_one():
    rng = np.random.default_rng(52)
    psi = rng.normal(size=8) + 1j * rng.normal(size=8)
    psi /= np.linalg.norm(psi)
    assert fidelity(psi, np.outer(psi, psi.conj())) == pytest.approx(1.0, abs=1e-12)


def test_fidelity_maximally_mixed():
    for n in (1, 2, 3):
        psi = np.zeros(1 << n, dtype=complex)
        psi[0] = 1.0
        assert fidelity(psi, np.eye(1 << n, dtype=complex) / (1 << n)) == pytest.approx(
            2.0**-n, abs=1e-15)


def test_fidelity_general_agrees_with_reduction():
    rng = np.random.default_rng(53)
    for _ in range(100):
        dim = int(rng.choice([2, 4, 8]))
        psi = rng.normal(size=dim) + 1j * rng.normal(size=dim)
        psi /= np.linalg.norm(psi)
        sigma = _random_density(rng, dim)
        pure = np.outer(psi, psi.conj())
        assert fidelity_general(pure, sigma) == pytest.approx(
            fidelity(psi, sigma), abs=1e-8)
        assert fidelity_general(sigma, pure) == pytest.approx(
            fidelity(psi, sigma), abs=1e-8)


def test_fidelity_range_and_identity_case():
    rng = np.random.default_rng(54)
    for _ in range(30):
        rho = _random_density(rng, 4)
        assert -1e-12 <= fidelity_general(rho, rho) <= 1 + 1e-12
        assert fidelity_general(rho, rho) == pytest.approx(1.0, abs=1e-9)


def test_fidelity_dimension_mismatch():
    with pytest.raises(ValueError):
        fidelity(np.array([1, 0], dtype=complex), np.eye(4, dtype=complex) / 4)


# -- sweeps ------------------------------------------------------------------------

def test_sweep_member_lengths_accept():
    rows = sweep(11, (3, 5, 7), "opt-rz", 22)
    assert len(rows) == 23
    for length in (0, 11, 22):
        assert rows[length].ideal_prob == pytest.approx(1.0, abs=1e-9)
    for row in rows:
        if row.length % 11:
            assert mean_square_closed_form(11, (3, 5, 7), row.length) <= 0.22


def test_sweep_noise_requires_shots_and_seed():
    with pytest.raises(ValueError):
        sweep(11, (1,), "rz-single", 3, noise=ZERO_NOISE)


def test_sweep_noisy_columns_filled():
    noise = NoiseModel(depol_1q=0.001, depol_2q=0.01, readout_p01=0.02, readout_p10=0.02)
    rows = sweep(11, (3, 5, 7), "opt-rz", 4, noise=noise, shots=2048, seed=5)
    for row in rows:
        assert row.noisy_prob is not None and 0 <= row.noisy_prob <= 1
        assert row.fid is not None and 0 <= row.fid <= 1 + 1e-12


def test_sweep_fidelity_strictly_decreasing_for_physical_rz():
    # every rz is physical here and the chain is kept unmerged, so the noisy
    # gate count grows with the length and fidelity must fall
    noise = NoiseModel(depol_1q=0.01, rz_virtual=False)
    rows = sweep(11, (1,), "rz-single", 12, noise=noise, shots=16, seed=1,
                 run_optimize=False)
    fids = [row.fid for row in rows]
    assert all(b < a for a, b in zip(fids, fids[1:]))


def test_sweep_csv_shape():
    rows = sweep(5, (1,), "ry-single", 3)
    csv = rows_to_csv(rows)
    lines = csv.splitlines()
    assert lines[0] == "length,scheme,p,k_set,ideal_prob,noisy_prob,fidelity,sx,rz,cx,depth"
    assert len(lines) == 5
    assert lines[1].startswith("0,ry-single,5,1,1,")
    # empty noisy columns without a noise model
    assert lines[1].split(",")[5] == "" and lines[1].split(",")[6] == ""


def test_sweep_jsonl_round_trips():
    import json

    rows = sweep(5, (1, 2, 3), "opt-ry", 2)
    parsed = [json.loads(line) for line in rows_to_jsonl(rows).splitlines()]
    assert [r["length"] for r in parsed] == [0, 1, 2]
    assert parsed[0]["k_set"] == [1, 2, 3]
    assert parsed[0]["noisy_prob"] is None


def test_sweep_deterministic_csv():
    noise = NoiseModel(depol_1q=0.001, readout_p01=0.02, readout_p10=0.02)
    a = rows_to_csv(sweep(11, (1,), "rz-single", 8, noise=noise, shots=1024, seed=3))
    b = rows_to_csv(sweep(11, (1,), "rz-single", 8, noise=noise, shots=1024, seed=3))
    assert a == b


def test_sweep_thread_pool_matches_serial(monkeypatch):
    noise = NoiseModel(depol_1q=0.002, readout_p01=0.01, readout_p10=0.01)
    serial = rows_to_csv(sweep(11, (3, 5, 7), "opt-rz", 6, noise=noise, shots=512, seed=2))
    monkeypatch.setenv("MODFA_THREADS", "4")
    threaded = rows_to_csv(sweep(11, (3, 5, 7), "opt-rz", 6, noise=noise, shots=512, seed=2))
    assert serial == threaded
