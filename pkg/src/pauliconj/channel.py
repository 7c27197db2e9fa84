"""Exact effective logical channels under coherent Z-rotation noise.

The noise studied here is the global rotation ``prod_j exp(-i theta Z_j)``,
possibly sandwiched between a pair of identical Pauli gates (conjugation).
Both the noise and its conjugated variants are diagonal in the computational
basis, so an error-correction round decomposes exactly into one Kraus branch
per syndrome:

    K_m[i, j] = <i_L| R_m D |j_L>

with ``D`` the diagonal noise unitary and ``R_m`` the lookup recovery.  The
identity ``R_m Pi_m = Pi_0 R_m`` removes the syndrome projectors from the
matrix element, which makes the branch sum exact and cheap (no 4^n objects).

All channels are reported as 4x4 Pauli transfer matrices (PTMs) in the
logical basis (I, X, Y, Z); average fidelity is ``(trace + 2) / 6``.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .codes import StabilizerCode, CodeError, build_decoder
from .pauli import PauliOp, PauliError

TOL_POSITIVITY = 1e-10
TOL_ROTATION = 1e-8


class ToleranceError(RuntimeError):
    """Numerical drift beyond the module's guarantees."""


class StructureError(RuntimeError):
    """A channel fell outside the structural family the caller assumed."""


# ---------------------------------------------------------------------------
# state-vector primitives
# ---------------------------------------------------------------------------

def pauli_phases(p: PauliOp) -> tuple[int, np.ndarray]:
    """Concrete unitary action of a Pauli: ``P|b> = phase[b] |b ^ xmask>``.

    Uses the standard matrices (Y = i X Z), so the returned operator is
    Hermitian and squares to the identity.
    """
    n = p.n
    b = np.arange(1 << n, dtype=np.uint64)
    zmask = np.uint64(p.z_bits)
    signs = np.where(_popcount(b & zmask) & 1, -1.0, 1.0)
    y_count = (p.x_bits & p.z_bits).bit_count()
    phase = (1j ** (y_count % 4)) * signs
    return p.x_bits, phase.astype(np.complex128)


def apply_pauli(p: PauliOp, vec: np.ndarray) -> np.ndarray:
    """Apply a Pauli to a state vector."""
    xmask, phase = pauli_phases(p)
    out = phase * vec
    if xmask:
        idx = np.arange(len(vec)) ^ xmask
        out = out[idx]
    return out


def _popcount(arr: np.ndarray) -> np.ndarray:
    # vectorized popcount for uint64 arrays
    v = arr.copy()
    count = np.zeros_like(v)
    while v.any():
        count += v & np.uint64(1)
        v >>= np.uint64(1)
    return count.astype(np.int64)


def z_rotation_diag(n: int, theta: float, flip_x_mask: int = 0) -> np.ndarray:
    """Diagonal of ``prod_j exp(-i s_j theta Z_j)`` over computational states.

    ``flip_x_mask`` marks qubits whose rotation sign is flipped, which is
    exactly the effect of conjugating the rotation by X on those qubits.
    """
    b = np.arange(1 << n, dtype=np.uint64)
    ones = _popcount(b)  # total set bits
    flipped_ones = _popcount(b & np.uint64(flip_x_mask))
    k = flip_x_mask.bit_count()
    # sum_j s_j (1 - 2 b_j) = (n - k) - 2(ones - flipped_ones) - (k - 2*flipped_ones)
    exponent = (n - 2 * k) - 2 * (ones.astype(np.int64) - 2 * flipped_ones.astype(np.int64))
    return np.exp(-1j * theta * exponent)


def global_z_unitary(n: int, theta: float) -> np.ndarray:
    """Dense matrix of the global Z rotation (diagonal)."""
    return np.diag(z_rotation_diag(n, theta))


def z_component_amplitude(theta: float, z_weight: int, n: int) -> complex:
    """Amplitude of a weight-``z_weight`` Z product in the noise expansion."""
    return (-1j * math.sin(theta)) ** z_weight * math.cos(theta) ** (n - z_weight)


# ---------------------------------------------------------------------------
# per-code simulation cache
# ---------------------------------------------------------------------------

@lru_cache(maxsize=32)
def _sim(code: StabilizerCode) -> "_CodeSim":
    return _CodeSim(code)


class _CodeSim:
    """Cached logical basis states and projected-recovery frame for a code."""

    def __init__(self, code: StabilizerCode):
        self.code = code
        n = code.n
        dim = 1 << n

        # |0_L>: project |0...0> into the code space and normalize
        vec = np.zeros(dim, dtype=np.complex128)
        vec[0] = 1.0
        for g in code.stabilizer_gens:
            vec = 0.5 * (vec + apply_pauli(g, vec))
        norm = np.linalg.norm(vec)
        if norm < 1e-12:
            raise CodeError(f"{code.name}: |0..0> has no component in the code space")
        zero = vec / norm
        # phase/sign convention: |1_L> = X_L |0_L>
        one = apply_pauli(code.logical_x, zero)

        zval = np.vdot(zero, apply_pauli(code.logical_z, zero)).real
        if abs(zval - 1.0) > 1e-9:
            raise CodeError(f"{code.name}: |0_L> is not the +1 eigenvector of logical Z")

        self.zero = zero
        self.one = one

        decoder = build_decoder(code)
        self.syndromes = sorted(decoder)
        rows0 = np.empty((len(self.syndromes), dim), dtype=np.complex128)
        rows1 = np.empty_like(rows0)
        for k, s in enumerate(self.syndromes):
            r = decoder[s]
            rows0[k] = apply_pauli(r, zero).conj()
            rows1[k] = apply_pauli(r, one).conj()
        self.bra0 = rows0  # <0_L| R_m
        self.bra1 = rows1

    def branch_kraus(self, diag: np.ndarray) -> np.ndarray:
        """One 2x2 Kraus operator per syndrome for a diagonal noise unitary."""
        v0 = diag * self.zero
        v1 = diag * self.one
        K = np.empty((len(self.syndromes), 2, 2), dtype=np.complex128)
        K[:, 0, 0] = self.bra0 @ v0
        K[:, 0, 1] = self.bra0 @ v1
        K[:, 1, 0] = self.bra1 @ v0
        K[:, 1, 1] = self.bra1 @ v1
        return K

    def logical_state(self, label: str) -> np.ndarray:
        if label == "0":
            return self.zero
        if label == "1":
            return self.one
        if label == "+":
            return (self.zero + self.one) / math.sqrt(2)
        if label == "+i":
            return (self.zero + 1j * self.one) / math.sqrt(2)
        raise ValueError(f"unknown logical state {label!r}")


def logical_basis_states(code: StabilizerCode) -> dict[str, np.ndarray]:
    """The four tomography inputs |0_L>, |1_L>, |+_L>, |+i_L> as vectors."""
    sim = _sim(code)
    return {lbl: sim.logical_state(lbl) for lbl in ("0", "1", "+", "+i")}


# ---------------------------------------------------------------------------
# PTMs and fidelity
# ---------------------------------------------------------------------------

_SIGMA = np.array(
    [
        [[1, 0], [0, 1]],
        [[0, 1], [1, 0]],
        [[0, -1j], [1j, 0]],
        [[1, 0], [0, -1]],
    ],
    dtype=np.complex128,
)


def ptm_from_kraus(kraus: np.ndarray) -> np.ndarray:
    """PTM of a qubit channel given its Kraus operators, shape (m, 2, 2)."""
    out = np.empty((4, 4))
    for b in range(4):
        transported = np.einsum("mij,jk,mlk->il", kraus, _SIGMA[b], kraus.conj())
        for a in range(4):
            out[a, b] = 0.5 * np.trace(_SIGMA[a] @ transported).real
    return out


def check_trace_preserving(ptm: np.ndarray, tol: float = 1e-12) -> None:
    if np.max(np.abs(ptm[0] - np.array([1.0, 0, 0, 0]))) > tol:
        raise ToleranceError(f"PTM first row deviates from (1,0,0,0) beyond {tol}")


def avg_fidelity(ptm: np.ndarray) -> float:
    """Average (Haar) fidelity of a qubit channel: (trace + 2) / 6."""
    return (np.trace(ptm) + 2.0) / 6.0


def rotation_ptm(phi: float) -> np.ndarray:
    """PTM of the logical rotation exp(-i (phi/2) Z): X/Y block rotated by phi."""
    c, s = math.cos(phi), math.sin(phi)
    return np.array(
        [
            [1.0, 0, 0, 0],
            [0, c, -s, 0],
            [0, s, c, 0],
            [0, 0, 0, 1.0],
        ]
    )


def dephasing_ptm(p_d: float) -> np.ndarray:
    lam = 1.0 - 2.0 * p_d
    return np.diag([1.0, lam, lam, 1.0])


# ---------------------------------------------------------------------------
# effective logical channels
# ---------------------------------------------------------------------------

def noise_diag(code: StabilizerCode, theta: float, conj: PauliOp | None = None) -> np.ndarray:
    """Diagonal of the (optionally conjugated) global-Z noise unitary.

    Conjugating ``exp(-i theta Z_j)`` with a Pauli flips the rotation sign on
    every qubit where the gate has an X or Y component; Z components act
    trivially on the noise.
    """
    flip = 0
    if conj is not None:
        if conj.n != code.n:
            raise PauliError(f"conjugation gate on {conj.n} qubits for {code.n}-qubit code")
        flip = conj.x_bits
    return z_rotation_diag(code.n, theta, flip_x_mask=flip)


def branch_kraus_ops(code: StabilizerCode, diag: np.ndarray) -> tuple[list[int], np.ndarray]:
    """Syndrome list and per-syndrome logical Kraus operators for diagonal noise."""
    sim = _sim(code)
    return sim.syndromes, sim.branch_kraus(diag)


def effective_logical_channel(
    code: StabilizerCode, theta: float, conj: PauliOp | None = None
) -> np.ndarray:
    """PTM of one round of noise + syndrome measurement + lookup recovery.

    ``conj`` applies the same Pauli before and after the noise (trivial gate
    pair when ``None``).
    """
    sim = _sim(code)
    kraus = sim.branch_kraus(noise_diag(code, theta, conj))
    ptm = ptm_from_kraus(kraus)
    check_trace_preserving(ptm)
    return ptm


def effective_channel_from_diag(code: StabilizerCode, diag: np.ndarray) -> np.ndarray:
    """PTM of an error-correction round for an arbitrary diagonal noise unitary."""
    sim = _sim(code)
    ptm = ptm_from_kraus(sim.branch_kraus(diag))
    check_trace_preserving(ptm)
    return ptm


def channel_fidelity(code: StabilizerCode, theta: float, conj: PauliOp | None = None) -> float:
    """Average logical fidelity; trace computed from the branch Kraus sum."""
    sim = _sim(code)
    kraus = sim.branch_kraus(noise_diag(code, theta, conj))
    traces = kraus[:, 0, 0] + kraus[:, 1, 1]
    return float((np.sum(np.abs(traces) ** 2) + 2.0) / 6.0)


def twirled_channel(
    code: StabilizerCode, theta: float, twirl_members: list[PauliOp]
) -> np.ndarray:
    """Uniform average of the conjugated channels over a twirl set."""
    if not twirl_members:
        raise ValueError("twirl set must be nonempty")
    acc = np.zeros((4, 4))
    for w in twirl_members:
        acc += effective_logical_channel(code, theta, w)
    return acc / len(twirl_members)


# ---------------------------------------------------------------------------
# syndrome-conditioned rotation decomposition
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class SyndromeBranch:
    syndrome: int
    probability: float
    angle: float  # full rotation angle of the logical X/Y block


@dataclass(frozen=True)
class SyndromeDecomposition:
    code_name: str
    theta: float
    branches: tuple[SyndromeBranch, ...]

    def probabilities(self) -> np.ndarray:
        return np.array([b.probability for b in self.branches])

    def angles(self) -> np.ndarray:
        return np.array([b.angle for b in self.branches])

    def ptm(self) -> np.ndarray:
        """Reconstruction sum_m p_m * PTM(rotation(phi_m))."""
        acc = np.zeros((4, 4))
        for b in self.branches:
            acc += b.probability * rotation_ptm(b.angle)
        return acc

    def coherent_sum(self) -> complex:
        """sum_m p_m exp(-i phi_m), the decaying eigenvalue of the channel."""
        return complex(np.sum(self.probabilities() * np.exp(-1j * self.angles())))

    def dephasing_probability(self) -> float:
        """p_d of the direction-averaged (logically dephased) channel."""
        lam = float(np.sum(self.probabilities() * np.cos(self.angles())))
        return (1.0 - lam) / 2.0


def syndrome_decomposition(
    code: StabilizerCode, theta: float, conj: PauliOp | None = None
) -> SyndromeDecomposition:
    """Split the corrected channel into per-syndrome logical Z rotations.

    Every Kraus branch must be proportional to ``exp(-i (phi/2) Z_L)``; codes
    whose recoveries land outside the I/Z logical classes fail structurally.
    The rotation sign convention follows from ``|1_L> = X_L |0_L>``:
    ``phi = arg(K_11) - arg(K_00)``.
    """
    sim = _sim(code)
    syndromes = sim.syndromes
    kraus = sim.branch_kraus(noise_diag(code, theta, conj))
    branches = []
    total = 0.0
    for k, s in enumerate(syndromes):
        K = kraus[k]
        p = 0.5 * float(np.sum(np.abs(K) ** 2))
        if p < 1e-13:
            continue
        off = max(abs(K[0, 1]), abs(K[1, 0]))
        imbalance = abs(abs(K[0, 0]) - abs(K[1, 1]))
        if off > TOL_ROTATION or imbalance > TOL_ROTATION:
            raise StructureError(
                f"{code.name}: syndrome {s:0{code.num_checks}b} branch is not a pure "
                f"logical Z rotation (off-diagonal {off:.2e}, imbalance {imbalance:.2e})"
            )
        phi = math.atan2((K[1, 1] * K[0, 0].conjugate()).imag, (K[1, 1] * K[0, 0].conjugate()).real)
        branches.append(SyndromeBranch(syndrome=s, probability=p, angle=phi))
        total += p
    if abs(total - 1.0) > TOL_POSITIVITY:
        raise ToleranceError(f"syndrome probabilities sum to {total}, expected 1")
    return SyndromeDecomposition(code_name=code.name, theta=theta, branches=tuple(branches))


# ---------------------------------------------------------------------------
# density-matrix utilities (used by the concatenation map)
# ---------------------------------------------------------------------------

def pauli_matrix(p: PauliOp) -> np.ndarray:
    """Dense matrix of a Pauli operator (standard Y = iXZ convention)."""
    xmask, phase = pauli_phases(p)
    dim = 1 << p.n
    m = np.zeros((dim, dim), dtype=np.complex128)
    rows = np.arange(dim) ^ xmask
    m[rows, np.arange(dim)] = phase
    return m


def check_density_matrix(rho: np.ndarray, tol: float = TOL_POSITIVITY) -> None:
    """Hermiticity / trace / positivity guard; raises instead of renormalizing."""
    if np.max(np.abs(rho - rho.conj().T)) > tol:
        raise ToleranceError("density matrix lost Hermiticity")
    if abs(np.trace(rho).real - 1.0) > tol:
        raise ToleranceError("density matrix trace drifted from 1")
    eigs = np.linalg.eigvalsh(rho)
    if eigs.min() < -tol:
        raise ToleranceError(f"density matrix has negative eigenvalue {eigs.min():.2e}")


def logical_ptm_of_map(code: StabilizerCode, apply_map) -> np.ndarray:
    """Tomography of an arbitrary physical map followed by error correction.

    ``apply_map`` takes and returns a density matrix on the code's qubits.
    The four informationally complete logical inputs are propagated, every
    syndrome is projected and recovered, and the logical PTM is read out.
    """
    sim = _sim(code)
    dim = 1 << code.n
    msize = len(sim.syndromes)
    # recovery frame: rows (m, i) of <i_L| R_m  (already conjugated)
    frame = np.empty((2 * msize, dim), dtype=np.complex128)
    frame[0::2] = sim.bra0
    frame[1::2] = sim.bra1

    bloch = {}
    for label in ("0", "1", "+", "+i"):
        psi = sim.logical_state(label)
        rho = np.outer(psi, psi.conj())
        out = apply_map(rho)
        # corrected logical density matrix: sum_m <i|R_m out R_m|j>
        transformed = frame @ out @ frame.conj().T  # (2M, 2M)
        blocks = transformed.reshape(msize, 2, msize, 2)
        rho_l = np.einsum("mimj->ij", blocks)
        tr = np.trace(rho_l).real
        if abs(tr - 1.0) > 1e-9:
            raise ToleranceError(f"corrected state trace {tr} != 1")
        bloch[label] = np.array(
            [
                np.trace(_SIGMA[1] @ rho_l).real,
                np.trace(_SIGMA[2] @ rho_l).real,
                np.trace(_SIGMA[3] @ rho_l).real,
            ]
        )
    shift = 0.5 * (bloch["0"] + bloch["1"])
    ptm = np.zeros((4, 4))
    ptm[0, 0] = 1.0
    ptm[1:, 0] = shift
    ptm[1:, 1] = bloch["+"] - shift
    ptm[1:, 2] = bloch["+i"] - shift
    ptm[1:, 3] = 0.5 * (bloch["0"] - bloch["1"])
    return ptm


# ---------------------------------------------------------------------------
# serialization
# ---------------------------------------------------------------------------

def format_float(x: float) -> str:
    """17-significant-digit rendering for lossless round trips."""
    return format(float(x), ".17g")


def ptm_to_json(ptm: np.ndarray) -> str:
    rows = [[format_float(x) for x in row] for row in np.asarray(ptm)]
    return json.dumps({"basis": ["I", "X", "Y", "Z"], "rows": rows}, indent=2)


def decomposition_to_json(decomp: SyndromeDecomposition) -> str:
    return json.dumps(
        {
            "code": decomp.code_name,
            "theta": format_float(decomp.theta),
            "branches": [
                {
                    "syndrome": format(b.syndrome, "b").zfill(1),
                    "probability": format_float(b.probability),
                    "angle": format_float(b.angle),
                }
                for b in decomp.branches
            ],
        },
        indent=2,
    )
