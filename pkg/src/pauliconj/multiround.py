"""Fidelity over many error-correction cycles.

Each cycle is one exposure to the coherent Z rotation followed by a perfect
correction round, so the k-cycle channel is the k-th power of the one-cycle
logical channel.  Three noise direction models are covered:

* random walk: the rotation sign is resampled each cycle, the logical
  channel dephases, and ``F_k = ((1 - 2 p_d)^k + 2) / 3``;
* fixed direction: coherent accumulation,
  ``F_k = (Re[(sum_m p_m e^{-i phi_m})^k] + 2) / 3``;
* logical twirling: the conjugation gate is drawn uniformly from
  {W, W X_L} each cycle, restoring the dephasing law around the conjugated
  channel.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .channel import (
    SyndromeDecomposition,
    avg_fidelity,
    dephasing_ptm,
    effective_logical_channel,
    syndrome_decomposition,
)
from .codes import StabilizerCode
from .pauli import PauliOp, compose


def dephasing_fidelity_k(p_d: float, k: int) -> float:
    """k-cycle fidelity of a logical dephasing channel.

    ``p_d`` up to 1 is allowed: beyond 1/2 the X/Y contraction merely turns
    negative (average rotation past a quarter turn), which is still a
    completely positive channel.
    """
    if not 0.0 <= p_d <= 1.0:
        raise ValueError("dephasing probability must lie in [0, 1]")
    if k < 1:
        raise ValueError("cycle count must be >= 1")
    return ((1.0 - 2.0 * p_d) ** k + 2.0) / 3.0


def coherent_fidelity_k(decomp: SyndromeDecomposition, k: int) -> float:
    """k-cycle fidelity when every cycle rotates in the same direction."""
    if k < 1:
        raise ValueError("cycle count must be >= 1")
    return (np.real(decomp.coherent_sum() ** k) + 2.0) / 3.0


def random_walk_channel(decomp: SyndromeDecomposition) -> np.ndarray:
    """One-cycle channel with equiprobable rotation signs: pure dephasing.

    Averaging ``exp(-i(phi/2)Z)`` with its inverse keeps the PTM diagonal,
    and the single-cycle fidelity matches the fixed-direction value.
    """
    lam = float(np.sum(decomp.probabilities() * np.cos(decomp.angles())))
    return dephasing_ptm((1.0 - lam) / 2.0)


def fixed_direction_fidelity(decomp: SyndromeDecomposition, k: int, hahn_echo: bool = False) -> float:
    """Fixed-direction k-cycle fidelity, optionally flipping all qubits midway.

    The echo flips the rotation direction for the second half of the cycles,
    which conjugates the per-syndrome angles and cancels coherent buildup;
    ``k`` must be even when it is enabled.
    """
    if not hahn_echo:
        return coherent_fidelity_k(decomp, k)
    if k % 2:
        raise ValueError("the mid-sequence flip needs an even cycle count")
    lam = decomp.coherent_sum()
    value = (lam ** (k // 2)) * (np.conj(lam) ** (k // 2))
    return (np.real(value) + 2.0) / 3.0


@dataclass(frozen=True)
class RoundSpec:
    """Multi-cycle scenario: cycle count, per-cycle angle, direction model, scheme.

    ``scheme`` is one of ``"none"``, ``"twirl"``, ``"conj"`` or ``"conj-lt"``
    (conjugation with per-cycle logical twirling).  ``direction`` is
    ``"walk"`` or ``"fixed"``; ``hahn_echo`` only applies to fixed direction.
    """

    k: int
    theta: float
    direction: str = "walk"
    scheme: str = "none"
    conj: PauliOp | None = None
    hahn_echo: bool = False

    def __post_init__(self):
        if self.k < 1:
            raise ValueError("cycle count must be >= 1")
        if not 0.0 <= self.theta <= math.pi / 2:
            raise ValueError("per-cycle angle must lie in [0, pi/2]")
        if self.direction not in ("walk", "fixed"):
            raise ValueError(f"unknown direction model {self.direction!r}")
        if self.scheme not in ("none", "twirl", "conj", "conj-lt"):
            raise ValueError(f"unknown scheme {self.scheme!r}")


def logical_twirl_sim(
    code: StabilizerCode,
    theta: float,
    conj: PauliOp,
    k: int,
    trials: int,
    seed: int,
) -> tuple[float, float]:
    """Monte Carlo estimate of the k-cycle fidelity under logical twirling.

    Each cycle independently conjugates with ``W`` or ``W X_L``; the trial
    fidelity is read from the product of the two precomputed cycle PTMs.
    Returns (estimate, standard error).  Trials are driven by a counter-based
    generator, so results are reproducible for a given seed.
    """
    if trials < 1:
        raise ValueError("need at least one trial")
    ptm_w = effective_logical_channel(code, theta, conj)
    ptm_wx = effective_logical_channel(code, theta, compose(conj, code.logical_x))
    rng = np.random.Generator(np.random.Philox(key=seed))
    choices = rng.integers(0, 2, size=(trials, k))
    values = np.empty(trials)
    for t in range(trials):
        acc = np.eye(4)
        for flip in choices[t]:
            acc = (ptm_wx if flip else ptm_w) @ acc
        values[t] = avg_fidelity(acc)
    est = float(values.mean())
    stderr = float(values.std(ddof=1) / math.sqrt(trials)) if trials > 1 else 0.0
    return est, stderr


def scenario_fidelity(
    code: StabilizerCode,
    spec: RoundSpec,
    trials: int = 0,
    seed: int = 0,
) -> tuple[float, float]:
    """Fidelity (and stderr, zero for closed forms) of a multi-cycle scenario."""
    from .tailoring import default_twirl_set

    if spec.scheme == "conj-lt":
        if spec.conj is None:
            raise ValueError("conj-lt needs a conjugation gate")
        if trials < 1:
            raise ValueError("conj-lt is sampled; pass a positive trial count")
        return logical_twirl_sim(code, spec.theta, spec.conj, spec.k, trials, seed)

    if spec.scheme == "twirl":
        members = default_twirl_set(code).members
        decomps = [syndrome_decomposition(code, spec.theta, w) for w in members]
        lam = float(np.mean([
            np.sum(d.probabilities() * np.cos(d.angles())) for d in decomps
        ]))
        # twirling dephases regardless of the direction model
        return dephasing_fidelity_k((1.0 - lam) / 2.0, spec.k), 0.0

    conj = spec.conj if spec.scheme == "conj" else None
    decomp = syndrome_decomposition(code, spec.theta, conj)
    if spec.direction == "walk":
        return dephasing_fidelity_k(decomp.dephasing_probability(), spec.k), 0.0
    return fixed_direction_fidelity(decomp, spec.k, hahn_echo=spec.hahn_echo), 0.0
