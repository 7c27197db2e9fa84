"""Monte Carlo state-vector trajectories with depolarizing gate errors.

The error-correction round is realized as the simplest unflagged circuit:
one ancilla per stabilizer generator, prepared in |+>, entangled with a
controlled Pauli per factor of the generator, and measured in the X basis.
Encoding reuses the same machinery: starting from a product eigenstate of
the chosen logical basis, one (noisy) extraction round plus table-decoded
corrections projects into the code space with a tracked logical sign.

Corrections are classically controlled Pauli gates and are applied
noiselessly ("Pauli frame" convention); depolarizing faults are injected
after every Hadamard, controlled Pauli and conjugation gate.  Ancillas are
simulated on a single reused wire since each one is unentangled outside its
extraction block.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .channel import channel_fidelity
from .codes import StabilizerCode, build_decoder
from .pauli import PauliOp, commutes


@dataclass(frozen=True)
class Gate:
    kind: str  # "h" | "cpauli" | "measure" | "recover" | "pauli" | "global_z"
    qubits: tuple[int, ...] = ()  # 0-based wire indices; ancilla wire = n
    letter: str = ""  # Pauli letter for cpauli/pauli
    noisy: bool = False  # depolarizing error location
    tag: str = ""  # block label for bookkeeping


@dataclass(frozen=True)
class Circuit:
    n_data: int
    n_ancilla: int
    gates: tuple[Gate, ...]

    def error_locations(self) -> int:
        return sum(1 for g in self.gates if g.noisy)

    def depth_signature(self) -> tuple:
        return tuple((g.kind, g.qubits, g.letter, g.noisy) for g in self.gates)


@dataclass(frozen=True)
class DepolarizingModel:
    p1: float
    p2: float

    def __post_init__(self):
        for p in (self.p1, self.p2):
            if not 0.0 <= p <= 1.0:
                raise ValueError("depolarizing probabilities must lie in [0, 1]")


def _extraction_block(code: StabilizerCode, tag: str) -> list[Gate]:
    gates = []
    anc = code.n  # reused ancilla wire
    for g in code.stabilizer_gens:
        gates.append(Gate("h", (anc,), noisy=True, tag=tag))
        for q in g.support():
            bit = 1 << (q - 1)
            x = bool(g.x_bits & bit)
            z = bool(g.z_bits & bit)
            letter = "Y" if x and z else "X" if x else "Z"
            gates.append(Gate("cpauli", (anc, q - 1), letter, noisy=True, tag=tag))
        gates.append(Gate("h", (anc,), noisy=True, tag=tag))
        gates.append(Gate("measure", (anc,), tag=tag))
    gates.append(Gate("recover", (), tag=tag))
    return gates


def build_qec_circuit(code: StabilizerCode, conj: PauliOp | None = None) -> Circuit:
    """Encode, conjugate, expose to noise, conjugate back, extract, recover.

    The global Z rotation itself is environmental and carries no gate error;
    its angle is supplied at simulation time.
    """
    gates = _extraction_block(code, "encode")
    if conj is not None and not conj.is_identity():
        gates += _conj_block(code, conj, "conj-pre")
    gates.append(Gate("global_z", tuple(range(code.n)), tag="noise"))
    if conj is not None and not conj.is_identity():
        gates += _conj_block(code, conj, "conj-post")
    gates += _extraction_block(code, "correct")
    return Circuit(n_data=code.n, n_ancilla=code.num_checks, gates=tuple(gates))


def _conj_block(code: StabilizerCode, conj: PauliOp, tag: str) -> list[Gate]:
    gates = []
    for q in conj.support():
        bit = 1 << (q - 1)
        x = bool(conj.x_bits & bit)
        z = bool(conj.z_bits & bit)
        letter = "Y" if x and z else "X" if x else "Z"
        gates.append(Gate("pauli", (q - 1,), letter, noisy=True, tag=tag))
    return gates


# ---------------------------------------------------------------------------
# batched state-vector simulation
# ---------------------------------------------------------------------------

_PAULI_1Q = "XYZ"
_PAULI_2Q = [a + b for a in "IXYZ" for b in "IXYZ"][1:]  # 15 non-identity pairs


class _Batch:
    """A batch of trajectories on n_data + 1 wires (last wire = ancilla)."""

    def __init__(self, n_wires: int, trials: int, init: np.ndarray):
        self.n = n_wires
        self.dim = 1 << n_wires
        self.vec = np.tile(init, (trials, 1)).astype(np.complex128)
        self.trials = trials
        self.idx = np.arange(self.dim)

    def apply_pauli_rows(self, rows: np.ndarray, wire: int, letter: str):
        """Apply a single-qubit Pauli to selected trajectories."""
        if len(rows) == 0:
            return
        bit = 1 << wire
        sub = self.vec[rows]
        if letter in ("Z", "Y"):
            sign = np.where(self.idx & bit, -1.0, 1.0)
            sub = sub * sign
        if letter in ("X", "Y"):
            sub = sub[:, self.idx ^ bit]
        if letter == "Y":
            sub = 1j * sub
        self.vec[rows] = sub

    def apply_h(self, wire: int):
        bit = 1 << wire
        lo = (self.idx & bit) == 0
        v = self.vec
        a = v[:, lo]
        b = v[:, ~lo]
        s = 1.0 / math.sqrt(2.0)
        v[:, lo], v[:, ~lo] = s * (a + b), s * (a - b)

    def apply_cpauli(self, control: int, target: int, letter: str):
        bit_c = 1 << control
        bit_t = 1 << target
        cols = self.idx[(self.idx & bit_c) != 0]
        if letter == "X":
            self.vec[:, cols] = self.vec[:, cols ^ bit_t]
        elif letter == "Y":
            # Y|0> = i|1>, Y|1> = -i|0>: amplitude at t-bit b comes from b^1
            phase = np.where(cols & bit_t, 1j, -1j)
            self.vec[:, cols] = phase * self.vec[:, cols ^ bit_t]
        else:
            sign = np.where(cols & bit_t, -1.0, 1.0)
            self.vec[:, cols] = self.vec[:, cols] * sign

    def apply_global_z(self, theta: float, n_data: int):
        popc = np.zeros(self.dim, dtype=np.int64)
        v = self.idx & ((1 << n_data) - 1)
        while v.any():
            popc += v & 1
            v = v >> 1
        phase = np.exp(-1j * theta * (n_data - 2 * popc))
        self.vec *= phase

    def measure_ancilla(self, wire: int, rng) -> np.ndarray:
        bit = 1 << wire
        hi = (self.idx & bit) != 0
        p1 = np.sum(np.abs(self.vec[:, hi]) ** 2, axis=1)
        outcomes = rng.random(self.trials) < p1
        keep_hi = outcomes[:, None] & hi[None, :]
        keep = np.where(outcomes[:, None], hi[None, :], ~hi[None, :])
        self.vec = np.where(keep, self.vec, 0.0)
        norms = np.sqrt(np.sum(np.abs(self.vec) ** 2, axis=1))
        self.vec /= norms[:, None]
        # reset ancilla to |0>: move population from |1> rows if outcome was 1
        flipped = self.vec[:, self.idx ^ bit]
        self.vec = np.where(outcomes[:, None], flipped, self.vec)
        return outcomes

    def expectation_pauli(self, p: PauliOp) -> np.ndarray:
        """<P> per trajectory for a data-register Pauli (ancilla untouched)."""
        from .channel import pauli_phases

        xmask, phase = pauli_phases(p)
        # extend diag phase to the ancilla wire (acts as identity there)
        full_phase = np.tile(phase, self.dim >> p.n)
        transformed = full_phase * self.vec
        if xmask:
            transformed = transformed[:, self.idx ^ xmask]
        return np.real(np.sum(self.vec.conj() * transformed, axis=1))


def sample_pauli_fault(model: DepolarizingModel, gate: Gate, rng) -> PauliOp | None:
    """Reference single-shot fault sampler (the batched path inlines this).

    With the gate's depolarizing probability, draws a uniform non-identity
    Pauli on the gate's support.
    """
    if not gate.noisy:
        return None
    wires = gate.qubits
    p = model.p1 if len(wires) == 1 else model.p2
    if rng.random() >= p:
        return None
    if len(wires) == 1:
        letter = _PAULI_1Q[rng.integers(0, 3)]
        return PauliOp.single(max(wires) + 1, letter, wires[0] + 1)
    pair = _PAULI_2Q[rng.integers(0, 15)]
    n = max(wires) + 1
    out = PauliOp.identity(n)
    from .pauli import compose

    for letter, wire in zip(pair, wires):
        if letter != "I":
            out = compose(out, PauliOp.single(n, letter, wire + 1))
    return out


def _inject_faults(batch: _Batch, wires: tuple[int, ...], p: float, rng):
    if p <= 0.0:
        return
    hit = rng.random(batch.trials) < p
    rows = np.nonzero(hit)[0]
    if len(rows) == 0:
        return
    if len(wires) == 1:
        choice = rng.integers(0, 3, size=len(rows))
        for k, letter in enumerate(_PAULI_1Q):
            batch.apply_pauli_rows(rows[choice == k], wires[0], letter)
    else:
        choice = rng.integers(0, 15, size=len(rows))
        for k, pair in enumerate(_PAULI_2Q):
            sel = rows[choice == k]
            if len(sel) == 0:
                continue
            for letter, wire in zip(pair, wires):
                if letter != "I":
                    batch.apply_pauli_rows(sel, wire, letter)


_BASIS_SETUP = {
    # basis -> (single-qubit eigenstate amplitudes, logical-operator attr)
    "Z": (np.array([1.0, 0.0], dtype=np.complex128), "logical_z"),
    "X": (np.array([1.0, 1.0], dtype=np.complex128) / math.sqrt(2), "logical_x"),
    "Y": (np.array([1.0, 1.0j], dtype=np.complex128) / math.sqrt(2), "logical_y"),
}


def _logical_for_basis(code: StabilizerCode, basis: str) -> PauliOp:
    if basis == "Z":
        return code.logical_z
    if basis == "X":
        return code.logical_x
    return code.logical_y()


def _run_basis(
    code: StabilizerCode,
    circuit: Circuit,
    theta: float,
    model: DepolarizingModel,
    basis: str,
    trials: int,
    rng,
) -> np.ndarray:
    """Per-trajectory values of s * <L_B> for one logical basis direction."""
    n = code.n
    amp, _ = _BASIS_SETUP[basis]
    single = amp
    init = np.array([1.0], dtype=np.complex128)
    for _ in range(n):
        init = np.kron(single, init)  # qubit 1 = LSB
    init = np.kron(np.array([1.0, 0.0], dtype=np.complex128), init)  # ancilla |0>

    batch = _Batch(n + 1, trials, init)
    logical = _logical_for_basis(code, basis)
    decoder = build_decoder(code)
    gens = list(code.stabilizer_gens)

    signs = np.ones(trials)
    outcomes = np.zeros((trials, len(gens)), dtype=np.int64)
    meas_count = 0

    for gate in circuit.gates:
        if gate.kind == "h":
            batch.apply_h(gate.qubits[0])
            if gate.noisy:
                _inject_faults(batch, gate.qubits, model.p1, rng)
        elif gate.kind == "cpauli":
            batch.apply_cpauli(gate.qubits[0], gate.qubits[1], gate.letter)
            if gate.noisy:
                _inject_faults(batch, gate.qubits, model.p2, rng)
        elif gate.kind == "pauli":
            rows = np.arange(trials)
            batch.apply_pauli_rows(rows, gate.qubits[0], gate.letter)
            if gate.noisy:
                _inject_faults(batch, gate.qubits, model.p1, rng)
        elif gate.kind == "global_z":
            batch.apply_global_z(theta, n)
        elif gate.kind == "measure":
            out = batch.measure_ancilla(n, rng)
            outcomes[:, meas_count % len(gens)] = out
            meas_count += 1
        elif gate.kind == "recover":
            syndromes = np.zeros(trials, dtype=np.int64)
            for i in range(len(gens)):
                syndromes |= outcomes[:, i] << i
            for s in np.unique(syndromes):
                rows = np.nonzero(syndromes == s)[0]
                rec = decoder[int(s)]
                if rec.is_identity():
                    continue
                _apply_recovery(batch, rows, rec)
                # during encoding the recovery fixes which logical eigenstate
                # was prepared; inside the cycle it is part of the channel
                if gate.tag == "encode" and commutes(rec, logical) == -1:
                    signs[rows] *= -1.0
            outcomes[:] = 0
        else:  # pragma: no cover
            raise ValueError(f"unknown gate kind {gate.kind}")

    return signs * batch.expectation_pauli(logical)


def _apply_recovery(batch: _Batch, rows: np.ndarray, rec: PauliOp):
    for q in rec.support():
        bit = 1 << (q - 1)
        x = bool(rec.x_bits & bit)
        z = bool(rec.z_bits & bit)
        letter = "Y" if x and z else "X" if x else "Z"
        batch.apply_pauli_rows(rows, q - 1, letter)


def noisy_fidelity(
    code: StabilizerCode,
    theta: float,
    conj: PauliOp | None,
    model: DepolarizingModel,
    trials: int,
    seed: int,
) -> tuple[float, float]:
    """Average-fidelity estimate of the noisy error-correction round.

    Runs ``trials`` trajectories for each logical basis direction; the PTM
    diagonal is estimated from prepared-eigenstate survival and converted via
    F = (1 + sum_B M_BB + 2) / 6.  Returns (estimate, standard error).
    """
    if trials < 1:
        raise ValueError("need a positive trial count")
    circuit = build_qec_circuit(code, conj)
    rng = np.random.Generator(np.random.Philox(key=seed))
    total = 3.0
    var = 0.0
    for basis in ("X", "Y", "Z"):
        vals = _run_basis(code, circuit, theta, model, basis, trials, rng)
        total += float(vals.mean())
        var += float(vals.var(ddof=1) / trials) if trials > 1 else 0.0
    return total / 6.0, math.sqrt(var) / 6.0


def exact_fidelity(code: StabilizerCode, theta: float, conj: PauliOp | None) -> float:
    """Zero-gate-noise reference value for the same round."""
    return channel_fidelity(code, theta, conj)
