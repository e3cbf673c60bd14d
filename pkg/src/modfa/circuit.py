"""Gate-list circuit IR: validation, costs, full unitaries, text serialization.

A circuit is an ordered list of gates over a fixed number of qubits plus a
tracked global phase. Supported gate names:

    x sx sxdg h          one qubit, no angle
    ry rz                one qubit, one angle (radians, half-angle convention)
    cx cry crz           two qubits (control first), cry/crz take an angle
    measure              one qubit plus a classical bit index; terminal per qubit

The text format is one gate per line with single-space separated tokens, a
mandatory `qubits N` header, and an optional `phase F` header:

    qubits 2
    sx 0
    rz 0 1.7135963526921508
    cx 1 0
    measure 0 0

Angles serialize with 17 significant digits and round-trip exactly.
"""
from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
import cmath
import math

import numpy as np

from . import gates as gm
from .gates import equiv_global_phase  # noqa: F401  (part of this module's API)

NO_PARAM_1Q = ("x", "sx", "sxdg", "h")
PARAM_1Q = ("ry", "rz")
NO_PARAM_2Q = ("cx",)
PARAM_2Q = ("cry", "crz")
GATE_NAMES = NO_PARAM_1Q + PARAM_1Q + NO_PARAM_2Q + PARAM_2Q + ("measure",)

BASIS_NAMES = ("x", "sx", "rz", "cx")

MAX_UNITARY_QUBITS = 12


class CircuitError(ValueError):
    """Malformed gate or circuit."""


class CircuitParseError(CircuitError):
    """Malformed circuit text; carries the line number and offending token."""

    def __init__(self, line_no: int, token: str, message: str):
        super().__init__(f"line {line_no}: {message} (token {token!r})")
        self.line_no = line_no
        self.token = token


@dataclass(frozen=True)
class Gate:
    name: str
    qubits: tuple[int, ...]
    angle: float | None = None
    cbit: int | None = None

    def __post_init__(self):
        if self.name not in GATE_NAMES:
            raise CircuitError(f"unknown gate name {self.name!r}")
        arity = 2 if self.name in NO_PARAM_2Q + PARAM_2Q else 1
        if len(self.qubits) != arity:
            raise CircuitError(f"{self.name} takes {arity} qubit(s), got {self.qubits}")
        if len(set(self.qubits)) != len(self.qubits):
            raise CircuitError(f"{self.name} qubits must be distinct, got {self.qubits}")
        takes_angle = self.name in PARAM_1Q + PARAM_2Q
        if takes_angle:
            if self.angle is None or not math.isfinite(self.angle):
                raise CircuitError(f"{self.name} needs a finite angle")
        elif self.angle is not None:
            raise CircuitError(f"{self.name} takes no angle")
        if (self.cbit is not None) != (self.name == "measure"):
            raise CircuitError("only measure carries a classical bit")
        if self.name == "measure" and self.cbit < 0:
            raise CircuitError(f"classical bit must be >= 0, got {self.cbit}")


def measured_qubits(gates: tuple[Gate, ...]) -> dict[int, int]:
    """Map classical bit -> measured qubit, in classical-bit order."""
    out = {g.cbit: g.qubits[0] for g in gates if g.name == "measure"}
    return {c: out[c] for c in sorted(out)}


@dataclass(frozen=True)
class Circuit:
    num_qubits: int
    gates: tuple[Gate, ...] = ()
    global_phase: float = 0.0

    def __post_init__(self):
        if self.num_qubits < 1:
            raise CircuitError(f"need at least one qubit, got {self.num_qubits}")
        object.__setattr__(self, "gates", tuple(self.gates))
        measured: set[int] = set()
        cbits: set[int] = set()
        for g in self.gates:
            for q in g.qubits:
                if not 0 <= q < self.num_qubits:
                    raise CircuitError(f"qubit index {q} out of range for width {self.num_qubits}")
                if q in measured:
                    raise CircuitError(f"gate {g.name} on qubit {q} after its measurement")
            if g.name == "measure":
                if g.cbit in cbits:
                    raise CircuitError(f"classical bit {g.cbit} written twice")
                cbits.add(g.cbit)
                measured.add(g.qubits[0])
        if cbits and cbits != set(range(len(cbits))):
            raise CircuitError(f"classical bits must be 0..{len(cbits) - 1}, got {sorted(cbits)}")

    @property
    def num_measured(self) -> int:
        return sum(1 for g in self.gates if g.name == "measure")

    def without_measurements(self) -> "Circuit":
        kept = tuple(g for g in self.gates if g.name != "measure")
        return Circuit(self.num_qubits, kept, self.global_phase)


def gate_matrix(g: Gate) -> np.ndarray:
    """2x2 or 4x4 matrix of a non-measure gate (control on the high index bit)."""
    if g.name == "x":
        return gm.X
    if g.name == "sx":
        return gm.SX
    if g.name == "sxdg":
        return gm.SXDG
    if g.name == "h":
        return gm.H
    if g.name == "ry":
        return gm.ry(g.angle)
    if g.name == "rz":
        return gm.rz(g.angle)
    if g.name == "cx":
        return gm.CX
    if g.name == "cry":
        return gm.controlled(gm.ry(g.angle))
    if g.name == "crz":
        return gm.controlled(gm.rz(g.angle))
    raise CircuitError(f"{g.name} has no matrix")


def _apply_left_1q(mat: np.ndarray, u: np.ndarray, q: int, n: int) -> np.ndarray:
    """mat -> (u on qubit q) @ mat for a 2^n x 2^n matrix."""
    dim = 1 << n
    ax = n - 1 - q
    t = np.moveaxis(mat.reshape((2,) * n + (dim,)), ax, 0)
    t = np.tensordot(u, t, axes=(1, 0))
    return np.moveaxis(t, 0, ax).reshape(dim, dim)


def _apply_left_2q(mat: np.ndarray, u: np.ndarray, q0: int, q1: int, n: int) -> np.ndarray:
    dim = 1 << n
    a0, a1 = n - 1 - q0, n - 1 - q1
    t = mat.reshape((2,) * n + (dim,))
    t = np.tensordot(u.reshape(2, 2, 2, 2), t, axes=([2, 3], [a0, a1]))
    t = np.moveaxis(t, (0, 1), (a0, a1))
    return t.reshape(dim, dim)


def unitary_of(c: Circuit, ignore_measurements: bool = False) -> np.ndarray:
    """Full matrix of the circuit including its global phase.

    Qubit q is index bit q (bit 0 least significant). Width is capped at
    MAX_UNITARY_QUBITS; measure gates are rejected unless explicitly ignored.
    """
    if c.num_qubits > MAX_UNITARY_QUBITS:
        raise CircuitError(
            f"unitary extraction is capped at {MAX_UNITARY_QUBITS} qubits, got {c.num_qubits}"
        )
    n = c.num_qubits
    u = np.eye(1 << n, dtype=complex)
    for g in c.gates:
        if g.name == "measure":
            if ignore_measurements:
                continue
            raise CircuitError("circuit contains measurements; pass ignore_measurements=True")
        if len(g.qubits) == 1:
            u = _apply_left_1q(u, gate_matrix(g), g.qubits[0], n)
        else:
            u = _apply_left_2q(u, gate_matrix(g), g.qubits[0], g.qubits[1], n)
    return u * cmath.exp(1j * c.global_phase)


def depth(c: Circuit) -> int:
    """Longest chain of gates sharing qubits; measurements count."""
    level = [0] * c.num_qubits
    for g in c.gates:
        d = 1 + max(level[q] for q in g.qubits)
        for q in g.qubits:
            level[q] = d
    return max(level, default=0)


def gate_counts(c: Circuit) -> dict[str, int]:
    """Histogram of gate names (angle-insensitive)."""
    return dict(Counter(g.name for g in c.gates))


def serialize(c: Circuit) -> str:
    lines = [f"qubits {c.num_qubits}"]
    if c.global_phase != 0.0:
        lines.append(f"phase {c.global_phase:.17g}")
    for g in c.gates:
        parts = [g.name, *map(str, g.qubits)]
        if g.angle is not None:
            parts.append(f"{g.angle:.17g}")
        if g.cbit is not None:
            parts.append(str(g.cbit))
        lines.append(" ".join(parts))
    return "\n".join(lines) + "\n"


def _parse_int(tok: str, line_no: int, what: str) -> int:
    try:
        return int(tok)
    except ValueError:
        raise CircuitParseError(line_no, tok, f"expected an integer {what}") from None


def _parse_float(tok: str, line_no: int, what: str) -> float:
    try:
        return float(tok)
    except ValueError:
        raise CircuitParseError(line_no, tok, f"expected a number for the {what}") from None


def parse(text: str) -> Circuit:
    """Parse the text format back into a Circuit (inverse of serialize)."""
    lines = text.split("\n")
    if lines and lines[-1] == "":
        lines.pop()
    if not lines:
        raise CircuitParseError(1, "", "empty input, expected a 'qubits N' header")

    head = lines[0].split(" ")
    if head[0] != "qubits":
        raise CircuitParseError(1, head[0], "first line must be 'qubits N'")
    if len(head) != 2:
        raise CircuitParseError(1, head[min(2, len(head) - 1)], "header takes one count")
    num_qubits = _parse_int(head[1], 1, "qubit count")
    if num_qubits < 1:
        raise CircuitParseError(1, head[1], "qubit count must be >= 1")

    phase = 0.0
    body_start = 1
    if len(lines) > 1 and lines[1].split(" ")[0] == "phase":
        ptoks = lines[1].split(" ")
        if len(ptoks) != 2:
            raise CircuitParseError(2, ptoks[min(2, len(ptoks) - 1)], "phase takes one value")
        phase = _parse_float(ptoks[1], 2, "global phase")
        body_start = 2

    out: list[Gate] = []
    measured: set[int] = set()
    for i, line in enumerate(lines[body_start:], start=body_start + 1):
        toks = line.split(" ")
        if toks == [""]:
            raise CircuitParseError(i, "", "blank line")
        name = toks[0]
        if name not in GATE_NAMES:
            raise CircuitParseError(i, name, "unknown gate")
        n_qubits = 2 if name in NO_PARAM_2Q + PARAM_2Q else 1
        n_extra = 1 if name in PARAM_1Q + PARAM_2Q or name == "measure" else 0
        want = 1 + n_qubits + n_extra
        if len(toks) > want:
            raise CircuitParseError(i, toks[want], "unexpected trailing token")
        if len(toks) < want:
            raise CircuitParseError(i, toks[-1], f"{name} needs {want - 1} arguments")
        qubits = tuple(_parse_int(t, i, "qubit index") for t in toks[1:1 + n_qubits])
        for j, q in enumerate(qubits):
            if not 0 <= q < num_qubits:
                raise CircuitParseError(i, toks[1 + j], "qubit index out of range")
            if q in measured:
                raise CircuitParseError(i, toks[1 + j], "gate after measurement on this qubit")
        angle = None
        cbit = None
        if name == "measure":
            cbit = _parse_int(toks[2], i, "classical bit")
            measured.add(qubits[0])
        elif n_extra:
            angle = _parse_float(toks[1 + n_qubits], i, "angle")
        try:
            out.append(Gate(name, qubits, angle, cbit))
        except CircuitError as exc:
            raise CircuitParseError(i, name, str(exc)) from None
    try:
        return Circuit(num_qubits, tuple(out), phase)
    except CircuitError as exc:
        raise CircuitParseError(len(lines), "", str(exc)) from None
