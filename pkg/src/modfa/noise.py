"""Noise model: per-gate depolarizing, thermal relaxation, readout flips.

Channels are represented by Kraus sets. The single-qubit depolarizing
channel with probability q maps rho to (1-q) rho + q I/2 on the gate's
qubit; the two-qubit variant maps the gate's pair to (1-q) rho + q I/4.
Thermal relaxation is amplitude damping with gamma = 1 - e^{-t/T1}
followed by extra phase damping sized so the total off-diagonal decay is
e^{-t/T2} (requires T2 <= 2*T1). Readout errors are classical bit flips
applied at sampling time only, never to the simulated state.

Config files are flat `key = value` lines ('#' starts a comment):

    depol_1q = 0.001
    depol_2q = 0.01
    readout_p01 = 0.02
    readout_p10 = 0.02
    rz_virtual = true
    # optional thermal block (all four keys required together, times in ns)
    t1 = 100000
    t2 = 150000
    gate_time_1q = 35
    gate_time_2q = 300
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import gates as gm


class NoiseConfigError(ValueError):
    """Invalid noise parameters or config file."""


@dataclass(frozen=True)
class ThermalRelaxation:
    t1: float
    t2: float
    gate_time_1q: float
    gate_time_2q: float

    def __post_init__(self):
        if self.t1 <= 0 or self.t2 <= 0:
            raise NoiseConfigError("t1 and t2 must be positive")
        if self.t2 > 2 * self.t1:
            raise NoiseConfigError(f"t2 must be <= 2*t1, got t1={self.t1}, t2={self.t2}")
        if self.gate_time_1q < 0 or self.gate_time_2q < 0:
            raise NoiseConfigError("gate times must be >= 0")


@dataclass(frozen=True)
class NoiseModel:
    depol_1q: float = 0.0
    depol_2q: float = 0.0
    readout_p01: float = 0.0
    readout_p10: float = 0.0
    thermal: ThermalRelaxation | None = None
    rz_virtual: bool = True

    def __post_init__(self):
        for name in ("depol_1q", "depol_2q", "readout_p01", "readout_p10"):
            v = getattr(self, name)
            if not 0.0 <= v <= 1.0:
                raise NoiseConfigError(f"{name} must lie in [0, 1], got {v}")

    @property
    def has_readout_error(self) -> bool:
        return self.readout_p01 > 0 or self.readout_p10 > 0


ZERO_NOISE = NoiseModel()


def depolarizing_1q_kraus(q: float) -> list[np.ndarray]:
    """Kraus set for rho -> (1-q) rho + q I/2 on one qubit."""
    return [
        math.sqrt(1 - 3 * q / 4) * gm.I2,
        math.sqrt(q / 4) * gm.X,
        math.sqrt(q / 4) * gm.Y,
        math.sqrt(q / 4) * gm.Z,
    ]


def depolarizing_2q_kraus(q: float) -> list[np.ndarray]:
    """16-element Pauli set for rho -> (1-q) rho + q I/4 on a qubit pair."""
    paulis = [gm.I2, gm.X, gm.Y, gm.Z]
    out = [math.sqrt(1 - 15 * q / 16) * np.eye(4, dtype=complex)]
    for i, a in enumerate(paulis):
        for j, b in enumerate(paulis):
            if i == j == 0:
                continue
            out.append(math.sqrt(q / 16) * np.kron(a, b))
    return out


def amplitude_damping_kraus(gamma: float) -> list[np.ndarray]:
    k0 = np.array([[1, 0], [0, math.sqrt(1 - gamma)]], dtype=complex)
    k1 = np.array([[0, math.sqrt(gamma)], [0, 0]], dtype=complex)
    return [k0, k1]


def phase_damping_kraus(lam: float) -> list[np.ndarray]:
    k0 = np.array([[1, 0], [0, math.sqrt(1 - lam)]], dtype=complex)
    k1 = np.array([[0, 0], [0, math.sqrt(lam)]], dtype=complex)
    return [k0, k1]


def thermal_kraus_sets(thermal: ThermalRelaxation, duration: float) -> list[list[np.ndarray]]:
    """Amplitude-damping then phase-damping Kraus sets for one gate duration.

    gamma = 1 - e^{-t/T1}; the residual dephasing lambda is sized so that
    sqrt(1-gamma) * sqrt(1-lambda) = e^{-t/T2}.
    """
    if duration == 0:
        return []
    gamma = 1.0 - math.exp(-duration / thermal.t1)
    lam = 1.0 - math.exp(-duration * (2.0 / thermal.t2 - 1.0 / thermal.t1))
    sets = [amplitude_damping_kraus(gamma)]
    if lam > 0:
        sets.append(phase_damping_kraus(lam))
    return sets


def kraus_is_complete(kraus: list[np.ndarray], tol: float = 1e-12) -> bool:
    """Trace preservation check: sum K^dag K = I."""
    dim = kraus[0].shape[0]
    acc = sum(k.conj().T @ k for k in kraus)
    return gm.max_abs(acc - np.eye(dim)) < tol


_BOOL_WORDS = {"true": True, "false": False, "1": True, "0": False}

_FLOAT_KEYS = ("depol_1q", "depol_2q", "readout_p01", "readout_p10")
_THERMAL_KEYS = ("t1", "t2", "gate_time_1q", "gate_time_2q")


def parse_noise_config(text: str) -> NoiseModel:
    values: dict[str, str] = {}
    for line_no, raw in enumerate(text.split("\n"), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise NoiseConfigError(f"line {line_no}: expected 'key = value', got {raw!r}")
        key, _, value = line.partition("=")
        key, value = key.strip(), value.strip()
        if key in values:
            raise NoiseConfigError(f"line {line_no}: duplicate key {key!r}")
        values[key] = value

    known = set(_FLOAT_KEYS) | set(_THERMAL_KEYS) | {"rz_virtual"}
    unknown = set(values) - known
    if unknown:
        raise NoiseConfigError(f"unknown noise config keys: {sorted(unknown)}")

    kwargs: dict = {}
    for key in _FLOAT_KEYS:
        if key in values:
            try:
                kwargs[key] = float(values[key])
            except ValueError:
                raise NoiseConfigError(f"{key} must be a number, got {values[key]!r}") from None
    if "rz_virtual" in values:
        word = values["rz_virtual"].lower()
        if word not in _BOOL_WORDS:
            raise NoiseConfigError(f"rz_virtual must be true or false, got {values['rz_virtual']!r}")
        kwargs["rz_virtual"] = _BOOL_WORDS[word]

    present = [k for k in _THERMAL_KEYS if k in values]
    if present:
        if len(present) != len(_THERMAL_KEYS):
            missing = sorted(set(_THERMAL_KEYS) - set(present))
            raise NoiseConfigError(f"thermal relaxation needs all of {_THERMAL_KEYS}, missing {missing}")
        try:
            kwargs["thermal"] = ThermalRelaxation(*(float(values[k]) for k in _THERMAL_KEYS))
        except ValueError:
            raise NoiseConfigError("thermal parameters must be numbers") from None

    return NoiseModel(**kwargs)


def load_noise_config(path) -> NoiseModel:
    with open(path, "r", encoding="utf-8") as fh:
        return parse_noise_config(fh.read())
