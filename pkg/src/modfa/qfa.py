"""Unitary finite automata for the unary counting language {a^j : j = 0 mod p}.

Two families are provided, both parameterized by an odd prime p and a
rotation multiplier k:

* plane-rotation: the symbol operator rotates the real plane spanned by the
  two states by 2*pi*k/p; both end-marker operators are the identity.
* phase-rotation: the symbol operator is diag(e^{-2*pi*i*k/p}, e^{2*pi*i*k/p});
  the left end-marker applies SX and the right one SX^dag. Conjugating the
  diagonal rotation by SX reproduces the plane rotation, so both variants
  accept with identical probabilities.

`build_parallel` runs several multipliers side by side in one machine with
2d states (d a power of two): the left end-marker fans the start state out
into an equal superposition of d two-state blocks, the symbol operator acts
block-diagonally, and the right end-marker is the inverse fan-out.

Exact closed forms for the acceptance probabilities are exposed alongside
the machine semantics so each can be checked against the other.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import gates

VARIANTS = ("plane-rotation", "phase-rotation")

LABELS = ("ry2", "rz2", "parallel-ry", "parallel-rz")


class ConstructionError(ValueError):
    """Automaton parameters violate a documented bound."""


def is_odd_prime(p: int) -> bool:
    if p < 3 or p % 2 == 0:
        return False
    return all(p % d for d in range(3, math.isqrt(p) + 1, 2))


def check_odd_prime(p: int) -> None:
    if not isinstance(p, int) or not is_odd_prime(p):
        raise ConstructionError(f"p must be an odd prime, got {p}")


def check_multiplier(k: int, p: int) -> None:
    if not isinstance(k, int) or not 1 <= k <= p - 1:
        raise ConstructionError(f"multiplier must be in 1..{p - 1}, got {k}")


def check_variant(variant: str) -> None:
    if variant not in VARIANTS:
        raise ConstructionError(f"variant must be one of {VARIANTS}, got {variant!r}")


def _check_power_of_two(d: int, what: str) -> None:
    if not isinstance(d, int) or d < 1 or d & (d - 1):
        raise ConstructionError(f"{what} must be a power of two, got {d}")


@dataclass(frozen=True)
class Mcqfa:
    """Measure-once automaton: one unitary per symbol of {left-marker, a, right-marker}.

    States are basis vectors 0..num_states-1; a run applies u_left, then
    u_symbol once per input symbol, then u_right, and measures.
    """

    num_states: int
    u_left: np.ndarray
    u_symbol: np.ndarray
    u_right: np.ndarray
    start_index: int
    accept_set: frozenset[int]
    label: str

    def __post_init__(self):
        d = self.num_states
        for name, u in (("u_left", self.u_left), ("u_symbol", self.u_symbol),
                        ("u_right", self.u_right)):
            if u.shape != (d, d):
                raise ConstructionError(f"{name} must be {d}x{d}, got {u.shape}")
            if not gates.is_unitary(u, 1e-12):
                raise ConstructionError(f"{name} is not unitary within 1e-12")
        if not 0 <= self.start_index < d:
            raise ConstructionError(f"start_index {self.start_index} out of range")
        if not self.accept_set or not all(0 <= q < d for q in self.accept_set):
            raise ConstructionError("accept_set must be a nonempty subset of the states")
        if self.label not in LABELS:
            raise ConstructionError(f"unknown label {self.label!r}")


@dataclass(frozen=True)
class ParallelSpec:
    """Configuration for a bank of two-state machines run in superposition."""

    p: int
    multipliers: tuple[int, ...]
    variant: str

    def __post_init__(self):
        check_odd_prime(self.p)
        check_variant(self.variant)
        _check_power_of_two(len(self.multipliers), "number of multipliers")
        for k in self.multipliers:
            check_multiplier(k, self.p)


def build_two_state(p: int, k: int, variant: str) -> Mcqfa:
    """Two-state acceptor rotating by 2*pi*k/p per symbol."""
    check_odd_prime(p)
    check_multiplier(k, p)
    check_variant(variant)
    angle = 2 * math.pi * k / p
    if variant == "plane-rotation":
        return Mcqfa(2, gates.I2, gates.plane_rotation(angle), gates.I2,
                     0, frozenset({0}), "ry2")
    return Mcqfa(2, gates.SX, gates.phase_rotation(angle), gates.SXDG,
                 0, frozenset({0}), "rz2")


def _hadamard_fanout(num_blocks: int) -> np.ndarray:
    """H tensored log2(num_blocks) times (the 1x1 identity for one block)."""
    out = np.eye(1, dtype=complex)
    while out.shape[0] < num_blocks:
        out = np.kron(out, gates.H)
    return out


def build_parallel(spec: ParallelSpec) -> Mcqfa:
    """2d-state machine running one two-state block per multiplier."""
    d = len(spec.multipliers)
    angles = [2 * math.pi * k / spec.p for k in spec.multipliers]
    plane = spec.variant == "plane-rotation"
    block = gates.plane_rotation if plane else gates.phase_rotation
    u_symbol = np.zeros((2 * d, 2 * d), dtype=complex)
    for j, a in enumerate(angles):
        u_symbol[2 * j:2 * j + 2, 2 * j:2 * j + 2] = block(a)
    u_left = np.kron(_hadamard_fanout(d), gates.I2 if plane else gates.SX)
    u_right = u_left.conj().T
    label = "parallel-ry" if plane else "parallel-rz"
    return Mcqfa(2 * d, u_left, u_symbol, u_right, 0, frozenset({0}), label)


def run_word(m: Mcqfa, n: int) -> np.ndarray:
    """Final state vector after reading a word of length n.

    Computed symbol by symbol with matrix-vector products; no matrix powers.
    """
    if n < 0:
        raise ValueError(f"word length must be >= 0, got {n}")
    v = np.zeros(m.num_states, dtype=complex)
    v[m.start_index] = 1.0
    v = m.u_left @ v
    for _ in range(n):
        v = m.u_symbol @ v
    return m.u_right @ v


def trace_states(m: Mcqfa, n: int) -> list[np.ndarray]:
    """State after the left marker, after each symbol, and after the right marker."""
    if n < 0:
        raise ValueError(f"word length must be >= 0, got {n}")
    v = np.zeros(m.num_states, dtype=complex)
    v[m.start_index] = 1.0
    out = [m.u_left @ v]
    for _ in range(n):
        out.append(m.u_symbol @ out[-1])
    out.append(m.u_right @ out[-1])
    return out


def acceptance_probability(m: Mcqfa, n: int) -> float:
    v = run_word(m, n)
    return float(sum(abs(v[q]) ** 2 for q in m.accept_set))


def _check_formula_multipliers(multipliers, p) -> None:
    # folded multiplier sums may hit 0 mod p, so 0 is allowed here
    for k in multipliers:
        if not isinstance(k, int) or not 0 <= k <= p - 1:
            raise ConstructionError(f"multiplier must be in 0..{p - 1}, got {k}")


def two_state_closed_form(p: int, k: int, length: int) -> float:
    """cos^2(2*pi*k*length/p), the exact two-state acceptance probability."""
    check_odd_prime(p)
    check_multiplier(k, p)
    return math.cos(2 * math.pi * k * length / p) ** 2


def parallel_interference_form(p: int, multipliers, length: int) -> float:
    """Exact acceptance of the parallel machine: the squared cosine average.

    The right end-marker recombines the branches coherently, so the
    amplitude on the accept state is the mean of the branch cosines and the
    probability is ((1/d) sum_j cos(2 pi k_j length / p))^2.
    """
    check_odd_prime(p)
    d = len(multipliers)
    _check_power_of_two(d, "number of multipliers")
    _check_formula_multipliers(multipliers, p)
    s = sum(math.cos(2 * math.pi * k * length / p) for k in multipliers) / d
    return s * s


def mean_square_closed_form(p: int, multipliers, length: int) -> float:
    """Mean of squared branch cosines over d^2: (1/d^2) sum_j cos^2(2 pi k_j length / p).

    This is the non-member bound usually quoted for the parallel
    construction. It is not the member-case value (at length = 0 mod p it
    yields 1/d, not 1); callers handle members separately. It also differs
    from `parallel_interference_form` for generic multiplier sets; the
    machine semantics side with the interference form.
    """
    check_odd_prime(p)
    if not multipliers:
        raise ConstructionError("multiplier set must be nonempty")
    _check_formula_multipliers(multipliers, p)
    d = len(multipliers)
    return sum(math.cos(2 * math.pi * k * length / p) ** 2 for k in multipliers) / d**2


def _next_power_of_two(n: int) -> int:
    out = 1
    while out < n:
        out <<= 1
    return out


def states_for_error(p: int, eps: float) -> tuple[int, int]:
    """Sub-automata count and state bound for worst-case error at most eps.

    Returns (d, state_bound): d = ceil(2*log2(p)/eps) rounded up to a power
    of two (the fan-out needs a power of two), and the independent bound
    state_bound = ceil((4/eps)*log2(2p)).
    """
    check_odd_prime(p)
    if not 0 < eps < 0.5:
        raise ConstructionError(f"error bound must lie in (0, 1/2), got {eps}")
    d = _next_power_of_two(math.ceil(2 * math.log2(p) / eps))
    state_bound = math.ceil((4 / eps) * math.log2(2 * p))
    return d, state_bound
