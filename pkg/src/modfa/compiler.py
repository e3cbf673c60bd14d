"""Lowering of mod-p acceptors to circuits over {cx, rz, sx, x}.

Four schemes are supported:

* ry-single: one qubit, one ry(4*pi*k/p) per symbol.
* rz-single: one qubit, sx up front, one rz(4*pi*k/p) per symbol, sxdg at
  the end. The rotation happens in phase, so per-symbol gates are virtual
  on hardware that implements rz as a frame change.
* opt-ry / opt-rz: three qubits running four rotation branches at once.
  q1 and q2 are put into superposition by Hadamards and control the second
  and third per-symbol rotation on the target q0; branch |q2 q1> therefore
  accumulates multiplier k1 + b1*k2 + b2*k3 (mod p). The rz flavor wraps
  q0 in sx/sxdg exactly like the single-qubit case.

The acceptance convention for compiled circuits is: accept iff every
measured bit reads 0.

`transpile` rewrites a circuit into the basis set; every rewrite rule is
checked for unitary equivalence when the module loads. `optimize` is a
peephole pass over the basis set (rotation merging plus three deletion
rules); it never reorders or resynthesizes gates.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .circuit import (
    BASIS_NAMES,
    Circuit,
    CircuitError,
    Gate,
    depth,
    gate_counts,
    gate_matrix,
    unitary_of,
)
from .gates import equiv_global_phase, max_abs, phase_between
from .qfa import ConstructionError, check_multiplier, check_odd_prime

SCHEMES = ("ry-single", "rz-single", "opt-ry", "opt-rz")

TWO_PI = 2 * math.pi


@dataclass(frozen=True)
class LoweringRequest:
    p: int
    multipliers: tuple[int, ...]
    n: int
    scheme: str
    include_measure: bool = True

    def __post_init__(self):
        check_odd_prime(self.p)
        if self.scheme not in SCHEMES:
            raise ConstructionError(f"scheme must be one of {SCHEMES}, got {self.scheme!r}")
        want = 3 if self.scheme.startswith("opt") else 1
        if len(self.multipliers) != want:
            raise ConstructionError(
                f"scheme {self.scheme} takes exactly {want} multiplier(s), "
                f"got {len(self.multipliers)}"
            )
        for k in self.multipliers:
            check_multiplier(k, self.p)
        if self.n < 0:
            raise ConstructionError(f"word length must be >= 0, got {self.n}")


def effective_multipliers(multipliers, p: int) -> tuple[int, int, int, int]:
    """Multipliers realized by the four branches |q2 q1> = 00, 01, 10, 11.

    Branch (b2, b1) accumulates k1 + b1*k2 + b2*k3 per symbol; sums are
    reduced mod p (a sum can hit 0, which freezes that branch).
    """
    if len(multipliers) != 3:
        raise ConstructionError(f"need exactly 3 multipliers, got {len(multipliers)}")
    check_odd_prime(p)
    for k in multipliers:
        check_multiplier(k, p)
    k1, k2, k3 = multipliers
    return (k1 % p, (k1 + k2) % p, (k1 + k3) % p, (k1 + k2 + k3) % p)


def lower(req: LoweringRequest) -> Circuit:
    """Circuit for a word of length req.n under the requested scheme."""
    angles = [2 * TWO_PI * k / req.p for k in req.multipliers]
    out: list[Gate] = []
    if req.scheme == "ry-single":
        out += [Gate("ry", (0,), angles[0]) for _ in range(req.n)]
        if req.include_measure:
            out.append(Gate("measure", (0,), cbit=0))
        return Circuit(1, tuple(out))
    if req.scheme == "rz-single":
        out.append(Gate("sx", (0,)))
        out += [Gate("rz", (0,), angles[0]) for _ in range(req.n)]
        out.append(Gate("sxdg", (0,)))
        if req.include_measure:
            out.append(Gate("measure", (0,), cbit=0))
        return Circuit(1, tuple(out))

    rot, crot = ("ry", "cry") if req.scheme == "opt-ry" else ("rz", "crz")
    out += [Gate("h", (1,)), Gate("h", (2,))]
    if req.scheme == "opt-rz":
        out.append(Gate("sx", (0,)))
    for _ in range(req.n):
        out.append(Gate(rot, (0,), angles[0]))
        out.append(Gate(crot, (1, 0), angles[1]))
        out.append(Gate(crot, (2, 0), angles[2]))
    if req.scheme == "opt-rz":
        out.append(Gate("sxdg", (0,)))
    out += [Gate("h", (1,)), Gate("h", (2,))]
    if req.include_measure:
        out += [Gate("measure", (q,), cbit=q) for q in range(3)]
    return Circuit(3, tuple(out))


# ---------------------------------------------------------------------------
# transpilation

def _expand_ry(g: Gate) -> list[Gate]:
    q = g.qubits[0]
    return [Gate("sx", (q,)), Gate("rz", (q,), g.angle + math.pi),
            Gate("sx", (q,)), Gate("rz", (q,), math.pi)]


def _expand_sxdg(g: Gate) -> list[Gate]:
    q = g.qubits[0]
    return [Gate("rz", (q,), math.pi), Gate("sx", (q,)), Gate("rz", (q,), math.pi)]


def _expand_h(g: Gate) -> list[Gate]:
    q = g.qubits[0]
    return [Gate("rz", (q,), math.pi / 2), Gate("sx", (q,)), Gate("rz", (q,), math.pi / 2)]


def _expand_crz(g: Gate) -> list[Gate]:
    ctrl, tgt = g.qubits
    return [Gate("rz", (tgt,), g.angle / 2), Gate("cx", (ctrl, tgt)),
            Gate("rz", (tgt,), -g.angle / 2), Gate("cx", (ctrl, tgt))]


def _expand_cry(g: Gate) -> list[Gate]:
    ctrl, tgt = g.qubits
    return [Gate("ry", (tgt,), g.angle / 2), Gate("cx", (ctrl, tgt)),
            Gate("ry", (tgt,), -g.angle / 2), Gate("cx", (ctrl, tgt))]


REWRITE_RULES = {
    "ry": _expand_ry,
    "sxdg": _expand_sxdg,
    "h": _expand_h,
    "crz": _expand_crz,
    "cry": _expand_cry,
}


def _replacement_product(seq: list[Gate], width: int) -> np.ndarray:
    return unitary_of(Circuit(width, tuple(seq)))


def _rule_phase(g: Gate) -> float:
    """Phase f with matrix(g) = e^{if} * product(replacement).

    Independent of wire placement, so the gate is canonicalized to the low
    wires before the matrices are compared.
    """
    width = len(g.qubits)
    canon = Gate(g.name, (0,) if width == 1 else (1, 0), g.angle)
    seq = REWRITE_RULES[canon.name](canon)
    return phase_between(gate_matrix(canon), _replacement_product(seq, width))


def verify_rewrite_rules(n_angles: int = 100, tol: float = 1e-10, seed: int = 0) -> None:
    """Check every rewrite rule against its target matrix on random angles."""
    rng = np.random.default_rng(seed)
    for name, expand in REWRITE_RULES.items():
        needs_angle = name in ("ry", "cry", "crz")
        angles = rng.uniform(-2 * TWO_PI, 2 * TWO_PI, size=n_angles) if needs_angle else [None]
        qubits = (1, 0) if name in ("cry", "crz") else (0,)
        for angle in angles:
            g = Gate(name, qubits, angle)
            seq = expand(g)
            width = len(qubits)
            target = gate_matrix(g)
            got = _replacement_product(seq, width)
            if not equiv_global_phase(target, got, tol):
                raise AssertionError(f"rewrite rule for {name} fails at angle {angle}")
            phi = phase_between(target, got)
            if max_abs(target - np.exp(1j * phi) * got) > tol:
                raise AssertionError(f"phase tracking for {name} fails at angle {angle}")


# cheap self-check at import; the test suite runs the full 100-angle sweep
verify_rewrite_rules(n_angles=3, tol=1e-10, seed=12345)


def transpile(c: Circuit) -> Circuit:
    """Rewrite into {cx, rz, sx, x} (+ measure), tracking the global phase."""
    gates = list(c.gates)
    phase = c.global_phase
    while True:
        out: list[Gate] = []
        changed = False
        for g in gates:
            if g.name in BASIS_NAMES or g.name == "measure":
                out.append(g)
            elif g.name in REWRITE_RULES:
                phase += _rule_phase(g)
                out.extend(REWRITE_RULES[g.name](g))
                changed = True
            else:
                raise CircuitError(f"no rewrite rule for gate {g.name!r}")
        gates = out
        if not changed:
            return Circuit(c.num_qubits, tuple(gates), phase)


# ---------------------------------------------------------------------------
# peephole optimization

def _angle_is_multiple_of_4pi(theta: float, tol: float = 1e-12) -> bool:
    return abs(theta - 4 * math.pi * round(theta / (4 * math.pi))) < tol


def _merge_adjacent_rz(gates: list[Gate]) -> tuple[list[Gate], bool]:
    out: list[Gate] = []
    last_on: dict[int, int] = {}
    changed = False
    for g in gates:
        if g.name == "rz":
            q = g.qubits[0]
            j = last_on.get(q)
            if j is not None and out[j].name == "rz":
                out[j] = Gate("rz", (q,), out[j].angle + g.angle)
                changed = True
                continue
        out.append(g)
        for q in g.qubits:
            last_on[q] = len(out) - 1
    return out, changed


def _drop_zero_rz(gates: list[Gate]) -> tuple[list[Gate], bool]:
    out = [g for g in gates
           if not (g.name == "rz" and _angle_is_multiple_of_4pi(g.angle))]
    return out, len(out) != len(gates)


def _drop_rz_before_measure(gates: list[Gate]) -> tuple[list[Gate], bool]:
    # a phase right before measurement cannot change the outcome distribution
    next_on: dict[int, str] = {}
    drop: set[int] = set()
    for i in range(len(gates) - 1, -1, -1):
        g = gates[i]
        if g.name == "rz" and next_on.get(g.qubits[0]) == "measure":
            drop.add(i)
            continue
        for q in g.qubits:
            next_on[q] = g.name
    return [g for i, g in enumerate(gates) if i not in drop], bool(drop)


def _drop_leading_rz(gates: list[Gate]) -> tuple[list[Gate], bool, float]:
    # rz on a fresh qubit only phases |0>; fold it into the global phase
    seen: set[int] = set()
    out: list[Gate] = []
    phase = 0.0
    changed = False
    for g in gates:
        if g.name == "rz" and g.qubits[0] not in seen:
            phase -= g.angle / 2
            changed = True
            continue
        out.append(g)
        seen.update(g.qubits)
    return out, changed, phase


def optimize(c: Circuit, *, preserve_unitary: bool = False) -> Circuit:
    """Peephole pass to fixpoint: merge rz chains, drop removable rz gates.

    Rules 1 and 2 (merge, drop multiples of 4*pi) preserve the unitary
    exactly. Rules 3 and 4 (rz before a measurement, leading rz on a fresh
    qubit) preserve the outcome distribution from |0...0> but not the full
    unitary; pass preserve_unitary=True to restrict to rules 1 and 2.
    """
    gates = list(c.gates)
    phase = c.global_phase
    while True:
        changed = False
        gates, ch = _merge_adjacent_rz(gates)
        changed |= ch
        gates, ch = _drop_zero_rz(gates)
        changed |= ch
        if not preserve_unitary:
            gates, ch = _drop_rz_before_measure(gates)
            changed |= ch
            gates, ch, dphase = _drop_leading_rz(gates)
            changed |= ch
            phase += dphase
        if not changed:
            return Circuit(c.num_qubits, tuple(gates), phase)


# ---------------------------------------------------------------------------
# cost reports

@dataclass(frozen=True)
class CostReport:
    sx: int
    rz: int
    cx: int
    x: int
    depth: int
    num_qubits: int

    def to_dict(self) -> dict[str, int]:
        return {"sx": self.sx, "rz": self.rz, "cx": self.cx, "x": self.x,
                "depth": self.depth, "qubits": self.num_qubits}


def cost_report(c: Circuit) -> CostReport:
    """Basis-gate histogram plus depth for a transpiled circuit."""
    counts = gate_counts(c)
    extra = set(counts) - set(BASIS_NAMES) - {"measure"}
    if extra:
        raise CircuitError(f"cost report needs a basis-set circuit, found {sorted(extra)}")
    return CostReport(
        sx=counts.get("sx", 0),
        rz=counts.get("rz", 0),
        cx=counts.get("cx", 0),
        x=counts.get("x", 0),
        depth=depth(c),
        num_qubits=c.num_qubits,
    )


def compile_request(req: LoweringRequest, *, run_optimize: bool = True) -> Circuit:
    """lower + transpile (+ optimize), the standard pipeline."""
    c = transpile(lower(req))
    return optimize(c) if run_optimize else c
