"""Gate-level circuits: phase oracles from truth tables, diffusion, Grover assembly.

The gate basis is {H, X, Z, multi-controlled Z, global phase flip}. MCZ stays
abstract (the simulator applies it natively) and the global phase flip is
tracked explicitly so oracle and diffusion constructions are exact matrix
identities, not identities up to phase.
"""

from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass
from typing import Iterable, Mapping

from .boolexpr import TruthTable, anf
from .errors import InputError

__all__ = [
    "Gate",
    "Circuit",
    "GateStats",
    "synthesize_phase_oracle",
    "build_diffusion",
    "iteration_count",
    "build_grover_circuit",
    "gate_stats",
    "circuit_to_json_dict",
    "circuit_from_json_dict",
    "circuit_to_qasm",
]

GATE_KINDS = ("h", "x", "z", "mcz", "gphase")
_SINGLE_QUBIT = ("h", "x", "z")


@dataclass(frozen=True)
class Gate:
    """One gate: kind plus the qubits it acts on (sorted, duplicate-free)."""

    kind: str
    qubits: tuple[int, ...] = ()

    def __post_init__(self):
        if self.kind not in GATE_KINDS:
            raise InputError(f"unknown gate kind {self.kind!r}")
        qubits = tuple(int(q) for q in self.qubits)
        if any(q < 0 for q in qubits):
            raise InputError(f"negative qubit index in {self.kind} gate: {qubits}")
        if self.kind in _SINGLE_QUBIT and len(qubits) != 1:
            raise InputError(f"{self.kind} acts on exactly one qubit, got {qubits}")
        if self.kind == "mcz":
            if len(qubits) < 2:
                raise InputError(f"mcz needs at least 2 qubits, got {qubits}")
            if len(set(qubits)) != len(qubits):
                raise InputError(f"mcz qubits must be distinct, got {qubits}")
            qubits = tuple(sorted(qubits))
        if self.kind == "gphase" and qubits:
            raise InputError("gphase acts on no qubits")
        object.__setattr__(self, "qubits", qubits)

    @staticmethod
    def h(q: int) -> "Gate":
        return Gate("h", (q,))

    @staticmethod
    def x(q: int) -> "Gate":
        return Gate("x", (q,))

    @staticmethod
    def z(q: int) -> "Gate":
        return Gate("z", (q,))

    @staticmethod
    def mcz(qubits: Iterable[int]) -> "Gate":
        return Gate("mcz", tuple(qubits))

    @staticmethod
    def gphase() -> "Gate":
        return Gate("gphase")


@dataclass(frozen=True)
class Circuit:
    """Ordered gate list over a fixed qubit count."""

    qubit_count: int
    gates: tuple[Gate, ...] = ()

    def __post_init__(self):
        if self.qubit_count < 1:
            raise InputError(f"qubit count must be >= 1, got {self.qubit_count}")
        gates = tuple(self.gates)
        for g in gates:
            if not isinstance(g, Gate):
                raise InputError(f"not a Gate: {g!r}")
            if g.qubits and max(g.qubits) >= self.qubit_count:
                raise InputError(
                    f"gate {g.kind} on {g.qubits} exceeds qubit count {self.qubit_count}"
                )
        object.__setattr__(self, "gates", gates)


def synthesize_phase_oracle(table: TruthTable) -> Circuit:
    """Phase-polynomial circuit acting as |x> -> (-1)^f(x) |x>, exactly.

    Each monomial of the positive-polarity normal form contributes one gate:
    the empty monomial a global phase flip, a singleton a Z, larger sets an
    MCZ. Gate order is deterministic (monomial size, then indices).
    """
    gates: list[Gate] = []
    for mono in sorted(anf(table).monomials, key=lambda m: (len(m), tuple(sorted(m)))):
        if not mono:
            gates.append(Gate.gphase())
        elif len(mono) == 1:
            gates.append(Gate.z(next(iter(mono))))
        else:
            gates.append(Gate.mcz(sorted(mono)))
    return Circuit(table.var_count, tuple(gates))


def build_diffusion(qubit_count: int) -> Circuit:
    """The reflection 2|s><s| - I as gates, exact including global phase."""
    n = qubit_count
    if n < 1:
        raise InputError(f"qubit count must be >= 1, got {n}")
    gates: list[Gate] = [Gate.h(q) for q in range(n)]
    gates += [Gate.x(q) for q in range(n)]
    gates.append(Gate.z(0) if n == 1 else Gate.mcz(range(n)))
    gates += [Gate.x(q) for q in range(n)]
    gates += [Gate.h(q) for q in range(n)]
    gates.append(Gate.gphase())
    return Circuit(n, tuple(gates))


def iteration_count(qubit_count: int, marked_count: int) -> int:
    """Grover rounds: max(1, floor((pi/4) * sqrt(2^n / m))); m = 0 runs 1 round.

    A zero-marked (control) circuit still runs one round so its output stays
    uniform rather than skipping the pipeline.
    """
    if qubit_count < 1:
        raise InputError(f"qubit count must be >= 1, got {qubit_count}")
    dim = 1 << qubit_count
    if not 0 <= marked_count <= dim:
        raise InputError(f"marked count {marked_count} outside 0..{dim}")
    if marked_count == 0:
        return 1
    return max(1, math.floor((math.pi / 4) * math.sqrt(dim / marked_count)))


def build_grover_circuit(oracle: Circuit, iterations: int) -> Circuit:
    """H layer, then ``iterations`` repetitions of (oracle, diffusion)."""
    if iterations < 0:
        raise InputError(f"iteration count must be >= 0, got {iterations}")
    n = oracle.qubit_count
    gates: list[Gate] = [Gate.h(q) for q in range(n)]
    diffusion = build_diffusion(n)
    for _ in range(iterations):
        gates.extend(oracle.gates)
        gates.extend(diffusion.gates)
    return Circuit(n, tuple(gates))


@dataclass(frozen=True)
class GateStats:
    counts: Mapping[str, int]
    mcz_arities: Mapping[int, int]
    depth: int


def gate_stats(circuit: Circuit) -> GateStats:
    """Per-kind counts, MCZ arity histogram, and greedy-layered depth.

    A gate's layer is one past the deepest layer currently touching any of
    its qubits; the global phase flip occupies no qubits and adds no depth.
    """
    counts: Counter[str] = Counter()
    arities: Counter[int] = Counter()
    level: dict[int, int] = {}
    depth = 0
    for g in circuit.gates:
        counts[g.kind] += 1
        if g.kind == "mcz":
            arities[len(g.qubits)] += 1
        if g.kind == "gphase":
            continue
        layer = 1 + max((level.get(q, 0) for q in g.qubits), default=0)
        for q in g.qubits:
            level[q] = layer
        depth = max(depth, layer)
    return GateStats(dict(counts), dict(arities), depth)


# --- serialization -------------------------------------------------------------

def circuit_to_json_dict(circuit: Circuit) -> dict:
    gates = []
    for g in circuit.gates:
        if g.kind == "gphase":
            gates.append({"g": "gphase"})
        else:
            gates.append({"g": g.kind, "q": list(g.qubits)})
    return {"qubits": circuit.qubit_count, "gates": gates}


def circuit_from_json_dict(data: Mapping) -> Circuit:
    try:
        qubits = int(data["qubits"])
        raw_gates = list(data["gates"])
    except (KeyError, TypeError):
        raise InputError('circuit JSON must have "qubits" and "gates"') from None
    gates = []
    for entry in raw_gates:
        try:
            kind = entry["g"]
        except (KeyError, TypeError):
            raise InputError(f"bad gate entry {entry!r}") from None
        gates.append(Gate(kind, tuple(entry.get("q", ()))))
    return Circuit(qubits, tuple(gates))


def circuit_to_qasm(circuit: Circuit) -> str:
    """OpenQASM 2.0 text; h/x/z/cz are native.

    MCZ of arity >= 3 has no QASM 2.0 primitive and is declared ``opaque``
    (a bodyless ``gate`` is not legal), and a global phase flip is not
    expressible at all; both carry explanatory comments.
    """
    lines = ["OPENQASM 2.0;", 'include "qelib1.inc";']
    arities = sorted(
        {len(g.qubits) for g in circuit.gates if g.kind == "mcz" and len(g.qubits) > 2}
    )
    for a in arities:
        params = ",".join(f"q{i}" for i in range(a))
        lines.append(f"// mcz{a}: phase flip on the all-ones subspace of {a} qubits")
        lines.append(f"opaque mcz{a} {params};")
    lines.append(f"qreg q[{circuit.qubit_count}];")
    for g in circuit.gates:
        if g.kind in _SINGLE_QUBIT:
            lines.append(f"{g.kind} q[{g.qubits[0]}];")
        elif g.kind == "mcz" and len(g.qubits) == 2:
            lines.append(f"cz q[{g.qubits[0]}],q[{g.qubits[1]}];")
        elif g.kind == "mcz":
            args = ",".join(f"q[{q}]" for q in g.qubits)
            lines.append(f"mcz{len(g.qubits)} {args};")
        else:
            lines.append("// global phase flip (-1), not expressible in OPENQASM 2.0")
    return "\n".join(lines) + "\n"
