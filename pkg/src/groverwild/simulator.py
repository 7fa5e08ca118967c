"""Dense statevector engine with seeded sampling and trajectory noise.

Basis convention: amplitude index x carries qubit 0 (``x0``) in its most
significant bit, matching truth-table row order, so the bit string for index
x is simply its n-digit binary form. Measured bit strings are therefore in
encoding order; any hardware-style bit reversal is applied downstream.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Mapping, Sequence

import numpy as np

from .boolexpr import TruthTable
from .errors import InputError
from .synthesis import Circuit, Gate

__all__ = [
    "MAX_QUBITS",
    "Statevector",
    "NoiseModel",
    "Histogram",
    "init_state",
    "apply_gate",
    "simulate",
    "apply_diagonal_oracle",
    "probabilities",
    "measure",
    "run_noisy",
    "circuit_unitary",
    "statevector_to_json_list",
]

MAX_QUBITS = 24
_SQRT_HALF = 1.0 / math.sqrt(2.0)

Seed = int | Sequence[int] | np.random.SeedSequence


@dataclass(frozen=True, eq=False)
class Statevector:
    """2^n complex amplitudes with unit L2 norm (within 1e-10)."""

    qubit_count: int
    amplitudes: np.ndarray

    def __post_init__(self):
        if not 1 <= self.qubit_count <= MAX_QUBITS:
            raise InputError(
                f"qubit count must be in 1..{MAX_QUBITS}, got {self.qubit_count}"
            )
        amps = np.array(self.amplitudes, dtype=np.complex128, copy=True)
        if amps.shape != (1 << self.qubit_count,):
            raise InputError(
                f"expected {1 << self.qubit_count} amplitudes, got shape {amps.shape}"
            )
        norm = float(np.linalg.norm(amps))
        if abs(norm - 1.0) > 1e-10:
            raise InputError(f"statevector norm {norm} deviates from 1 by more than 1e-10")
        amps.flags.writeable = False
        object.__setattr__(self, "amplitudes", amps)


@dataclass(frozen=True)
class NoiseModel:
    """Depolarizing probabilities per gate plus classical readout flips.

    ``p1`` applies per qubit after each single-qubit gate, ``p2`` per qubit
    after each multi-qubit gate; a suffering qubit gets X, Y or Z with equal
    probability p/3. ``readout`` independently flips each measured bit.
    """

    p1: float = 0.0
    p2: float = 0.0
    readout: float = 0.0

    def __post_init__(self):
        for name in ("p1", "p2", "readout"):
            v = getattr(self, name)
            if not 0.0 <= v <= 1.0:
                raise InputError(f"noise probability {name}={v} outside [0, 1]")

    @classmethod
    def ideal(cls) -> "NoiseModel":
        return cls(0.0, 0.0, 0.0)

    @property
    def is_ideal(self) -> bool:
        return self.p1 == 0.0 and self.p2 == 0.0 and self.readout == 0.0


@dataclass(frozen=True)
class Histogram:
    """Shot counts keyed by measured bit string."""

    shots: int
    counts: Mapping[str, int]

    def __post_init__(self):
        if self.shots < 1:
            raise InputError(f"shots must be >= 1, got {self.shots}")
        counts = dict(self.counts)
        if not counts:
            raise InputError("histogram must contain at least one outcome")
        lengths = {len(k) for k in counts}
        if len(lengths) != 1:
            raise InputError(f"bit strings must share one length, got {sorted(lengths)}")
        for bits, c in counts.items():
            if not bits or any(b not in "01" for b in bits):
                raise InputError(f"bad bit string key {bits!r}")
            if not isinstance(c, int) or c < 1:
                raise InputError(f"count for {bits!r} must be a positive int, got {c!r}")
        if sum(counts.values()) != self.shots:
            raise InputError("histogram counts must sum to the shot count")
        object.__setattr__(self, "counts", counts)

    @property
    def bit_length(self) -> int:
        return len(next(iter(self.counts)))

    def to_json_dict(self) -> dict:
        return {"shots": self.shots, "counts": dict(sorted(self.counts.items()))}

    @classmethod
    def from_json_dict(cls, data: Mapping) -> "Histogram":
        try:
            return cls(int(data["shots"]), {str(k): int(v) for k, v in data["counts"].items()})
        except (KeyError, TypeError, AttributeError):
            raise InputError('histogram JSON must be {"shots": int, "counts": {...}}') from None


# --- gate kernels (in place, on arrays whose first n axes are the qubits) ------

def _tensor(a: np.ndarray, n: int) -> np.ndarray:
    return a.reshape((2,) * n + a.shape[1:])


def _axis_ix(n: int, q: int, v: int) -> tuple:
    return tuple(v if i == q else slice(None) for i in range(n))


def _apply_h(a: np.ndarray, n: int, q: int) -> None:
    t = _tensor(a, n)
    lo = t[_axis_ix(n, q, 0)]
    hi = t[_axis_ix(n, q, 1)]
    new_lo = (lo + hi) * _SQRT_HALF
    new_hi = (lo - hi) * _SQRT_HALF
    t[_axis_ix(n, q, 0)] = new_lo
    t[_axis_ix(n, q, 1)] = new_hi


def _apply_x(a: np.ndarray, n: int, q: int) -> None:
    t = _tensor(a, n)
    lo = t[_axis_ix(n, q, 0)].copy()
    t[_axis_ix(n, q, 0)] = t[_axis_ix(n, q, 1)]
    t[_axis_ix(n, q, 1)] = lo


def _apply_y(a: np.ndarray, n: int, q: int) -> None:
    t = _tensor(a, n)
    lo = t[_axis_ix(n, q, 0)].copy()
    t[_axis_ix(n, q, 0)] = -1j * t[_axis_ix(n, q, 1)]
    t[_axis_ix(n, q, 1)] = 1j * lo


def _apply_z(a: np.ndarray, n: int, q: int) -> None:
    t = _tensor(a, n)
    t[_axis_ix(n, q, 1)] *= -1.0


def _apply_mcz(a: np.ndarray, n: int, qubits: tuple[int, ...]) -> None:
    t = _tensor(a, n)
    qs = set(qubits)
    t[tuple(1 if i in qs else slice(None) for i in range(n))] *= -1.0


def _apply_gate_kernel(a: np.ndarray, n: int, gate: Gate) -> None:
    if gate.kind == "h":
        _apply_h(a, n, gate.qubits[0])
    elif gate.kind == "x":
        _apply_x(a, n, gate.qubits[0])
    elif gate.kind == "z":
        _apply_z(a, n, gate.qubits[0])
    elif gate.kind == "mcz":
        _apply_mcz(a, n, gate.qubits)
    else:
        a *= -1.0


_PAULI_KERNELS = (_apply_x, _apply_y, _apply_z)


# --- public operations ----------------------------------------------------------

def init_state(qubit_count: int) -> Statevector:
    """|0...0> on ``qubit_count`` qubits."""
    if not 1 <= qubit_count <= MAX_QUBITS:
        raise InputError(f"qubit count must be in 1..{MAX_QUBITS}, got {qubit_count}")
    amps = np.zeros(1 << qubit_count, dtype=np.complex128)
    amps[0] = 1.0
    return Statevector(qubit_count, amps)


def apply_gate(state: Statevector, gate: Gate) -> Statevector:
    """Apply one gate, returning a new statevector."""
    n = state.qubit_count
    if gate.qubits and max(gate.qubits) >= n:
        raise InputError(f"gate {gate.kind} on {gate.qubits} exceeds {n} qubits")
    amps = state.amplitudes.copy()
    _apply_gate_kernel(amps, n, gate)
    return Statevector(n, amps)


def simulate(circuit: Circuit, initial: Statevector | None = None) -> Statevector:
    """Run all gates noiselessly from |0..0> (or from ``initial``)."""
    n = circuit.qubit_count
    if initial is None:
        amps = np.zeros(1 << n, dtype=np.complex128)
        amps[0] = 1.0
    else:
        if initial.qubit_count != n:
            raise InputError(
                f"initial state has {initial.qubit_count} qubits, circuit has {n}"
            )
        amps = initial.amplitudes.copy()
    for gate in circuit.gates:
        _apply_gate_kernel(amps, n, gate)
    return Statevector(n, amps)


def apply_diagonal_oracle(state: Statevector, table: TruthTable) -> Statevector:
    """Multiply amplitude x by (-1)^f(x); the fast path matching the circuit."""
    if table.var_count != state.qubit_count:
        raise InputError(
            f"table has {table.var_count} variables, state has {state.qubit_count} qubits"
        )
    signs = 1.0 - 2.0 * table.rows.astype(np.float64)
    return Statevector(state.qubit_count, state.amplitudes * signs)


def probabilities(state: Statevector) -> np.ndarray:
    """Born-rule probabilities per basis state."""
    p = np.abs(state.amplitudes) ** 2
    p.flags.writeable = False
    return p


def measure(state: Statevector, shots: int, seed: Seed) -> Histogram:
    """Multinomial sampling; identical seeds give bit-identical histograms."""
    if shots < 1:
        raise InputError(f"shots must be >= 1, got {shots}")
    rng = np.random.default_rng(seed)
    p = np.abs(state.amplitudes) ** 2
    draws = rng.multinomial(shots, p / p.sum())
    n = state.qubit_count
    counts = {format(i, f"0{n}b"): int(c) for i, c in enumerate(draws) if c}
    return Histogram(shots, counts)


def run_noisy(circuit: Circuit, noise: NoiseModel, shots: int, seed: Seed) -> Histogram:
    """Monte Carlo trajectories: one statevector pass per shot.

    After each gate, every touched qubit independently suffers X, Y or Z
    (probability p/3 each; p is ``p1`` for single-qubit gates, ``p2`` for
    MCZ; the global phase flip touches nothing). The sampled bit string then
    has each bit flipped with probability ``readout``. Each trajectory uses
    its own substream spawned from the master seed, so results are
    deterministic per seed. An all-zero model short-circuits to the
    noiseless path and is bit-exact with ``measure`` at the same seed.
    """
    if shots < 1:
        raise InputError(f"shots must be >= 1, got {shots}")
    if noise.is_ideal:
        return measure(simulate(circuit), shots, seed)
    n = circuit.qubit_count
    dim = 1 << n
    master = seed if isinstance(seed, np.random.SeedSequence) else np.random.SeedSequence(seed)
    counts: dict[str, int] = {}
    for child in master.spawn(shots):
        rng = np.random.default_rng(child)
        amps = np.zeros(dim, dtype=np.complex128)
        amps[0] = 1.0
        for gate in circuit.gates:
            _apply_gate_kernel(amps, n, gate)
            p = noise.p1 if gate.kind in ("h", "x", "z") else noise.p2 if gate.kind == "mcz" else 0.0
            if p:
                for q in gate.qubits:
                    if rng.random() < p:
                        _PAULI_KERNELS[rng.integers(3)](amps, n, q)
        prob = np.abs(amps) ** 2
        outcome = int(rng.choice(dim, p=prob / prob.sum()))
        if noise.readout:
            for b in range(n):
                if rng.random() < noise.readout:
                    outcome ^= 1 << (n - 1 - b)
        key = format(outcome, f"0{n}b")
        counts[key] = counts.get(key, 0) + 1
    return Histogram(shots, dict(sorted(counts.items())))


def circuit_unitary(circuit: Circuit) -> np.ndarray:
    """Full 2^n x 2^n matrix, built by evolving all basis columns at once.

    Dense in both dimensions; intended for verification at small n.
    """
    n = circuit.qubit_count
    mat = np.eye(1 << n, dtype=np.complex128)
    for gate in circuit.gates:
        _apply_gate_kernel(mat, n, gate)
    return mat


def statevector_to_json_list(state: Statevector) -> list[list[float]]:
    """Amplitudes as [re, im] pairs, basis order."""
    return [[float(a.real), float(a.imag)] for a in state.amplitudes]
