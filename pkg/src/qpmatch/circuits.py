"""Reversible-circuit synthesis and dense verification.

Circuits are gate lists over {H, X, MCX-with-polarities}.  Qubit 0 is the
most significant bit of a basis index, so the bit of qubit q in a width-w
circuit is ``(index >> (w - 1 - q)) & 1``.  Boolean-function oracles are
compiled by lifting the function to a bijection on one extra bit, splitting
the bijection into transpositions via cycle decomposition, and realizing
each transposition as a ladder of multi-controlled X gates along a Gray-code
path between the two transposed words.

Composition convention: a sequence of permutations or transpositions is read
as an operator product, i.e. the LAST element of the sequence acts first on
a basis index.  A circuit's gate list, in contrast, is temporal: the FIRST
gate acts first.  Concatenating synthesized transposition circuits therefore
reverses the transposition sequence.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import DomainError, ResourceError

HADAMARD = "H"
PAULI_X = "X"
MCX = "MCX"

UNITARY_QUBIT_LIMIT = 12
STATEVECTOR_QUBIT_LIMIT = 20

_SQRT_HALF = 1.0 / np.sqrt(2.0)


@dataclass(frozen=True)
class Gate:
    """A single gate; ``controls`` is a tuple of (qubit, positive-polarity)."""

    kind: str
    target: int
    controls: tuple = ()

    def __post_init__(self):
        if self.kind not in (HADAMARD, PAULI_X, MCX):
            raise DomainError(f"unknown gate kind {self.kind!r}")
        if self.kind != MCX and self.controls:
            raise DomainError(f"{self.kind} takes no controls")
        qubits = [q for q, _ in self.controls]
        if len(set(qubits)) != len(qubits) or self.target in qubits:
            raise DomainError("control qubits must be distinct from each other and the target")


@dataclass(frozen=True)
class Circuit:
    n_qubits: int
    gates: tuple = ()

    def __post_init__(self):
        object.__setattr__(self, "gates", tuple(self.gates))
        for g in self.gates:
            used = [g.target] + [q for q, _ in g.controls]
            if any(not 0 <= q < self.n_qubits for q in used):
                raise DomainError("gate addresses qubit outside the circuit")


@dataclass(frozen=True)
class GrayCodePath:
    """Words r_0 ... r_k of equal width; neighbors differ in exactly one bit."""

    words: tuple
    width: int


@dataclass(frozen=True)
class Permutation:
    """A bijection over [0, 2^width) given by its image table."""

    images: tuple

    def __post_init__(self):
        object.__setattr__(self, "images", tuple(int(v) for v in self.images))
        if sorted(self.images) != list(range(len(self.images))):
            raise DomainError("image table is not a bijection")

    @property
    def size(self) -> int:
        return len(self.images)

    def __call__(self, x: int) -> int:
        return self.images[x]


@dataclass(frozen=True)
class Transposition:
    a: int
    b: int

    def __post_init__(self):
        if self.a == self.b:
            raise DomainError("transposition endpoints must differ")


@dataclass(frozen=True)
class GateCountReport:
    """Per-kind gate counts and a two-qubit-equivalent cost estimate.

    An MCX with c >= 2 controls is charged 2c - 1 basic units (the linear
    ancilla-free decomposition); everything else costs one unit.
    """

    counts: dict = field(default_factory=dict)
    basic_gate_total: int = 0


# --- text format ---


def _format_gate(gate: Gate) -> str:
    if gate.kind == MCX:
        ctrls = " ".join(f"{'+' if pos else '-'}q{q}" for q, pos in gate.controls)
        return f"MCX {ctrls} -> q{gate.target}".replace("  ", " ")
    return f"{gate.kind} q{gate.target}"


def emit_circuit(circuit: Circuit) -> str:
    """Serialize to the one-gate-per-line text format (lossless round trip)."""
    lines = [f"QUBITS {circuit.n_qubits}"]
    lines.extend(_format_gate(g) for g in circuit.gates)
    return "\n".join(lines) + "\n"


def parse_circuit(document: str) -> Circuit:
    lines = [ln.strip() for ln in document.splitlines() if ln.strip()]
    if not lines or not lines[0].startswith("QUBITS "):
        raise DomainError("circuit document must start with a QUBITS header")
    n_qubits = int(lines[0].split()[1])
    gates = []
    for ln in lines[1:]:
        parts = ln.split()
        kind = parts[0]
        if kind in (HADAMARD, PAULI_X):
            if len(parts) != 2 or not parts[1].startswith("q"):
                raise DomainError(f"malformed gate line: {ln!r}")
            gates.append(Gate(kind, int(parts[1][1:])))
        elif kind == MCX:
            if "->" not in parts:
                raise DomainError(f"malformed MCX line: {ln!r}")
            arrow = parts.index("->")
            controls = []
            for tok in parts[1:arrow]:
                if tok[0] not in "+-" or not tok[1:].startswith("q"):
                    raise DomainError(f"malformed control token {tok!r}")
                controls.append((int(tok[2:]), tok[0] == "+"))
            gates.append(Gate(MCX, int(parts[arrow + 1][1:]), tuple(controls)))
        else:
            raise DomainError(f"unknown gate kind in line: {ln!r}")
    return Circuit(n_qubits, tuple(gates))


# --- permutations, transpositions and Gray codes ---


def lift_boolean(f, n: int) -> Permutation:
    """Lift a Boolean function on n bits to the bijection (b, x) -> (b ^ f(x), x).

    ``f`` is indexed by the n data bits; the extra bit b is the most
    significant position of the lifted words.
    """
    if n < 1:
        raise DomainError("need at least one data bit")
    table = np.asarray([int(f[x]) for x in range(2**n)])
    if not np.isin(table, (0, 1)).all():
        raise DomainError("function values must be bits")
    images = list(range(2 ** (n + 1)))
    for x in range(2**n):
        if table[x]:
            images[x] = 2**n + x
            images[2**n + x] = x
    return Permutation(tuple(images))


def apply_transpositions(transpositions, size: int) -> Permutation:
    """Operator-product composition: the last transposition acts first."""
    images = list(range(size))
    for t in reversed(transpositions):
        for x in range(size):
            if images[x] == t.a:
                images[x] = t.b
            elif images[x] == t.b:
                images[x] = t.a
    return Permutation(tuple(images))


def permutation_to_transpositions(p: Permutation):
    """Split a permutation into at most 2^w - 1 transpositions.

    Each cycle (c0 c1 ... cm) is emitted as (c0 cm)(c0 c(m-1)) ... (c0 c1),
    read as an operator product.
    """
    seen = [False] * p.size
    out = []
    for start in range(p.size):
        if seen[start] or p(start) == start:
            seen[start] = True
            continue
        cycle = [start]
        seen[start] = True
        cur = p(start)
        while cur != start:
            cycle.append(cur)
            seen[cur] = True
            cur = p(cur)
        for elem in reversed(cycle[1:]):
            out.append(Transposition(cycle[0], elem))
    return out


def gray_code(l: int, l_prime: int, width: int) -> GrayCodePath:
    """Gray-code path from l to l_prime flipping differing bits MSB-first."""
    if l == l_prime:
        raise DomainError("endpoints of a Gray-code path must differ")
    if not (0 <= l < 2**width and 0 <= l_prime < 2**width):
        raise DomainError("word out of range for the given width")
    words = [l]
    cur = l
    for bit in range(width - 1, -1, -1):
        mask = 1 << bit
        if (cur ^ l_prime) & mask:
            cur ^= mask
            words.append(cur)
    return GrayCodePath(tuple(words), width)


# --- synthesis ---


def _step_gate(word_a: int, word_b: int, width: int) -> Gate:
    """MCX transposing two words at Hamming distance 1, fixing everything else."""
    diff = word_a ^ word_b
    bit = diff.bit_length() - 1
    target = width - 1 - bit
    controls = []
    for q in range(width):
        if q == target:
            continue
        positive = bool((word_a >> (width - 1 - q)) & 1)
        controls.append((q, positive))
    if not controls:
        return Gate(PAULI_X, target)
    return Gate(MCX, target, tuple(controls))


def synth_transposition(t: Transposition, width: int) -> Circuit:
    """Synthesize the transposition |a> <-> |b> as 2k - 1 multi-controlled X gates.

    k is the Hamming distance between the endpoints.  A forward sweep along
    the Gray-code path shifts a to b (cyclically displacing the interior
    words); the backward sweep restores the interior, leaving the pure
    transposition.
    """
    if not (0 <= t.a < 2**width and 0 <= t.b < 2**width):
        raise DomainError("transposition endpoints out of range for the given width")
    path = gray_code(t.a, t.b, width).words
    k = len(path) - 1
    gates = [_step_gate(path[i - 1], path[i], width) for i in range(1, k + 1)]
    gates.extend(_step_gate(path[i - 1], path[i], width) for i in range(k - 1, 0, -1))
    return Circuit(width, tuple(gates))


def synth_permutation(p: Permutation, width: int) -> Circuit:
    """Compile a permutation by concatenating its transposition circuits.

    The transposition sequence is an operator product, so the circuits are
    laid down in reverse sequence order.
    """
    gates = []
    for t in reversed(permutation_to_transpositions(p)):
        gates.extend(synth_transposition(t, width).gates)
    return Circuit(width, tuple(gates))


def synth_boolean_oracle(f, n: int) -> Circuit:
    """Bit oracle on n + 1 qubits computing b ^= f(x); ancilla b is qubit 0."""
    return synth_permutation(lift_boolean(f, n), n + 1)


def synth_phase_oracle(f, n: int) -> Circuit:
    """Phase oracle: the data register picks up (-1)^f(x), ancilla returns to |0>.

    Standard kickback arrangement: the ancilla (qubit 0) is rotated into the
    |0> - |1> difference state, the bit oracle is applied, and the rotation
    is undone.  Preparation gates are part of the emitted circuit.
    """
    oracle = synth_boolean_oracle(f, n)
    prep = (Gate(PAULI_X, 0), Gate(HADAMARD, 0))
    unprep = (Gate(HADAMARD, 0), Gate(PAULI_X, 0))
    return Circuit(n + 1, prep + oracle.gates + unprep)


def _increment_gates(offset: int, s: int):
    """Increment an s-qubit register mod 2^s: descending multi-controlled cascade."""
    gates = []
    for u in range(s):  # u = 0 is the register's most significant qubit
        controls = tuple((offset + v, True) for v in range(u + 1, s))
        if controls:
            gates.append(Gate(MCX, offset + u, controls))
        else:
            gates.append(Gate(PAULI_X, offset + u))
    return gates


def synth_init_state_circuit(s: int, m: int) -> Circuit:
    """Prepare sum_k 2^(-s/2) |k>|k+1 mod 2^s> ... |k+m-1 mod 2^s> from |0...0>.

    Register t (1-based) occupies qubits [(t-1)s, ts).  Hadamards put
    register 1 into uniform superposition; each later register is fanned out
    from its predecessor with CNOTs and then incremented mod 2^s.
    """
    if s < 1 or m < 2:
        raise DomainError("require s >= 1 and M >= 2")
    gates = [Gate(HADAMARD, q) for q in range(s)]
    for t in range(2, m + 1):
        src = (t - 2) * s
        dst = (t - 1) * s
        gates.extend(Gate(MCX, dst + u, ((src + u, True),)) for u in range(s))
        gates.extend(_increment_gates(dst, s))
    return Circuit(s * m, tuple(gates))


def init_state_target(s: int, m: int) -> np.ndarray:
    """The target superposition of :func:`synth_init_state_circuit`, built directly."""
    dim = 2 ** (s * m)
    vec = np.zeros(dim, dtype=np.complex128)
    for k in range(2**s):
        idx = 0
        for t in range(m):
            idx = (idx << s) | ((k + t) % 2**s)
        vec[idx] = 2 ** (-s / 2)
    return vec


# --- dense simulation ---


def _gate_masks(gate: Gate, n: int):
    tbit = 1 << (n - 1 - gate.target)
    cmask = 0
    cval = 0
    for q, positive in gate.controls:
        bit = 1 << (n - 1 - q)
        cmask |= bit
        if positive:
            cval |= bit
    return tbit, cmask, cval


def _apply_gate(state: np.ndarray, gate: Gate, n: int) -> None:
    """In-place gate application; ``state`` has shape (2^n,) or (2^n, batch)."""
    tbit, cmask, cval = _gate_masks(gate, n)
    idx = np.arange(len(state))
    low = idx[(idx & tbit == 0) & (idx & cmask == cval)]
    high = low | tbit
    if gate.kind == HADAMARD:
        a = state[low].copy()
        b = state[high].copy()
        state[low] = (a + b) * _SQRT_HALF
        state[high] = (a - b) * _SQRT_HALF
    else:
        tmp = state[low].copy()
        state[low] = state[high]
        state[high] = tmp


def simulate_statevector(circuit: Circuit, basis_input: int = 0) -> np.ndarray:
    """Exact output statevector for a computational basis input."""
    n = circuit.n_qubits
    if n > STATEVECTOR_QUBIT_LIMIT:
        raise ResourceError(f"{n} qubits exceeds the statevector limit of {STATEVECTOR_QUBIT_LIMIT}")
    if not 0 <= basis_input < 2**n:
        raise DomainError("basis input out of range")
    state = np.zeros(2**n, dtype=np.complex128)
    state[basis_input] = 1.0
    for gate in circuit.gates:
        _apply_gate(state, gate, n)
    return state


def simulate_unitary(circuit: Circuit) -> np.ndarray:
    """Exact dense unitary of the circuit (column i = image of basis state i)."""
    n = circuit.n_qubits
    if n > UNITARY_QUBIT_LIMIT:
        raise ResourceError(f"{n} qubits exceeds the unitary limit of {UNITARY_QUBIT_LIMIT}")
    mat = np.eye(2**n, dtype=np.complex128)
    for gate in circuit.gates:
        _apply_gate(mat, gate, n)
    return mat


def simulate_dense(circuit: Circuit, basis_input: int | None = None) -> np.ndarray:
    """Dense verifier: full unitary, or one statevector when an input is given."""
    if basis_input is None:
        return simulate_unitary(circuit)
    return simulate_statevector(circuit, basis_input)


def permutation_action(circuit: Circuit) -> Permutation:
    """Exact basis-state action of an {X, MCX}-only circuit, as integers."""
    n = circuit.n_qubits
    idx = np.arange(2**n)
    for gate in circuit.gates:
        if gate.kind == HADAMARD:
            raise DomainError("circuit is not a basis permutation: contains Hadamard")
        tbit, cmask, cval = _gate_masks(gate, n)
        idx = np.where(idx & cmask == cval, idx ^ tbit, idx)
    # idx[x] is the image of basis state x
    return Permutation(tuple(int(v) for v in idx))


# --- cost accounting and MCX expansion ---


def gate_count(circuit: Circuit) -> GateCountReport:
    counts = {HADAMARD: 0, PAULI_X: 0, MCX: 0}
    total = 0
    for gate in circuit.gates:
        counts[gate.kind] += 1
        c = len(gate.controls)
        total += 1 if c <= 1 else 2 * c - 1
    return GateCountReport(counts, total)


def expand_mcx(circuit: Circuit) -> Circuit:
    """Rewrite to {X, CNOT, CCX} with positive controls, using one work register.

    Negative controls are absorbed by conjugating X gates.  An MCX with
    c >= 3 controls becomes the standard AND-ladder: c - 2 Toffolis compute
    the conjunction into work qubits, one Toffoli hits the target, and the
    ladder is uncomputed.  Work qubits are appended after the data qubits
    and are returned to |0>.
    """
    extra = max((len(g.controls) - 2 for g in circuit.gates), default=0)
    extra = max(extra, 0)
    n = circuit.n_qubits
    gates = []
    for gate in circuit.gates:
        if gate.kind == HADAMARD or not gate.controls:
            gates.append(gate)
            continue
        flips = [Gate(PAULI_X, q) for q, positive in gate.controls if not positive]
        ctrls = [q for q, _ in gate.controls]
        gates.extend(flips)
        if len(ctrls) <= 2:
            gates.append(Gate(MCX, gate.target, tuple((q, True) for q in ctrls)))
        else:
            ladder = [Gate(MCX, n, ((ctrls[0], True), (ctrls[1], True)))]
            for i, q in enumerate(ctrls[2:-1]):
                ladder.append(Gate(MCX, n + i + 1, ((q, True), (n + i, True))))
            top = n + len(ctrls) - 3
            gates.extend(ladder)
            gates.append(Gate(MCX, gate.target, ((ctrls[-1], True), (top, True))))
            gates.extend(reversed(ladder))
        gates.extend(flips)
    return Circuit(n + extra, tuple(gates))
