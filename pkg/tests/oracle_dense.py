"""Independent dense density-matrix oracle for the effective logical channel.

Everything here is built from scratch with Kronecker products and explicit
syndrome projectors (1 +/- S)/2, deliberately avoiding the fast branch-Kraus
path in the package, so the two routes check each other.
"""

import numpy as np

from pauliconj.codes import build_decoder

I2 = np.eye(2, dtype=complex)
PAULI = {
    "I": I2,
    "X": np.array([[0, 1], [1, 0]], dtype=complex),
    "Y": np.array([[0, -1j], [1j, 0]], dtype=complex),
    "Z": np.array([[1, 0], [0, -1]], dtype=complex),
}


def dense_pauli(pauli_string: str) -> np.ndarray:
    """Matrix of a dense Pauli string, qubit 1 leftmost and least significant."""
    m = np.array([[1.0]], dtype=complex)
    for ch in pauli_string:  # qubit 1 first => innermost (LSB) factor
        m = np.kron(PAULI[ch], m)
    return m


def dense_global_z(n: int, theta: float) -> np.ndarray:
    g = np.array([[1.0]], dtype=complex)
    rot = np.cos(theta) * I2 - 1j * np.sin(theta) * PAULI["Z"]
    for _ in range(n):
        g = np.kron(rot, g)
    return g


def codespace_projector(code) -> np.ndarray:
    dim = 1 << code.n
    proj = np.eye(dim, dtype=complex)
    for g in code.stabilizer_gens:
        proj = proj @ (np.eye(dim) + dense_pauli(g.to_string())) / 2.0
    return proj


def logical_states(code):
    dim = 1 << code.n
    v = np.zeros(dim, dtype=complex)
    v[0] = 1.0
    zero = codespace_projector(code) @ v
    zero /= np.linalg.norm(zero)
    one = dense_pauli(code.logical_x.to_string()) @ zero
    plus = (zero + one) / np.sqrt(2)
    plus_i = (zero + 1j * one) / np.sqrt(2)
    return {"0": zero, "1": one, "+": plus, "+i": plus_i}


def correct(code, rho: np.ndarray) -> np.ndarray:
    """Sum over syndromes of recovery . projector . rho . projector . recovery."""
    n_checks = code.num_checks
    dim = rho.shape[0]
    decoder = build_decoder(code)
    stab_mats = [dense_pauli(g.to_string()) for g in code.stabilizer_gens]
    out = np.zeros_like(rho)
    for syn in range(1 << n_checks):
        branch = rho
        for i, s in enumerate(stab_mats):
            sign = -1.0 if syn & (1 << i) else 1.0
            p = (np.eye(dim) + sign * s) / 2.0
            branch = p @ branch @ p
        r = dense_pauli(decoder[syn].to_string())
        out += r @ branch @ r.conj().T
    return out


def oracle_ptm(code, theta: float, conj=None, channel_kraus=None) -> np.ndarray:
    """Logical PTM via the literal pipeline and four-state tomography.

    ``conj`` is an optional Pauli gate applied before and after the noise;
    ``channel_kraus`` replaces the unitary noise with a per-qubit Kraus
    channel (list of 2x2 arrays) when given.
    """
    states = logical_states(code)
    xbar = dense_pauli(code.logical_x.to_string())
    zbar = dense_pauli(code.logical_z.to_string())
    ybar = 1j * xbar @ zbar
    w = dense_pauli(conj.to_string()) if conj is not None else None
    noise = dense_global_z(code.n, theta) if channel_kraus is None else None

    bloch = {}
    for label, psi in states.items():
        rho = np.outer(psi, psi.conj())
        if w is not None:
            rho = w @ rho @ w.conj().T
        if noise is not None:
            rho = noise @ rho @ noise.conj().T
        else:
            rho = apply_product_channel(channel_kraus, code.n, rho)
        if w is not None:
            rho = w @ rho @ w.conj().T
        rho = correct(code, rho)
        bloch[label] = np.array(
            [np.trace(m @ rho).real for m in (xbar, ybar, zbar)]
        )
    shift = 0.5 * (bloch["0"] + bloch["1"])
    ptm = np.zeros((4, 4))
    ptm[0, 0] = 1.0
    ptm[1:, 0] = shift
    ptm[1:, 1] = bloch["+"] - shift
    ptm[1:, 2] = bloch["+i"] - shift
    ptm[1:, 3] = 0.5 * (bloch["0"] - bloch["1"])
    return ptm


def apply_product_channel(kraus, n, rho):
    dim = 1 << n
    for q in range(n):
        acc = np.zeros_like(rho)
        for k in kraus:
            full = np.array([[1.0]], dtype=complex)
            for j in range(n):
                full = np.kron(k if j == q else I2, full)
            acc += full @ rho @ full.conj().T
        rho = acc
    return rho
