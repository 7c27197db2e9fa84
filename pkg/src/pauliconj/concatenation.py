"""Level-to-level logical noise maps and concatenated thresholds.

The single-qubit channels closed under the hard-decoded logical map form a
three-parameter Z-axis family: PTM ``diag-block [[a, -b], [b, a]]`` on X/Y
and ``c`` on Z.  One concatenation level applies the channel to every
physical qubit, runs one round of syndrome measurement + lookup recovery,
and fits the logical PTM back into the family.  Thresholds are the noise
angles where adding a level stops helping.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass

import numpy as np

from .channel import (
    StructureError,
    ToleranceError,
    avg_fidelity,
    effective_logical_channel,
    format_float,
    logical_ptm_of_map,
    twirled_channel,
)
from .codes import StabilizerCode
from .pauli import PauliOp

FAMILY_TOL = 1e-9
CP_TOL = 1e-10


@dataclass(frozen=True)
class ZChannel:
    """Z-axis-symmetric qubit channel: X->aX+bY, Y->-bX+aY, Z->cZ."""

    a: float
    b: float
    c: float

    def ptm(self) -> np.ndarray:
        return np.array(
            [
                [1.0, 0.0, 0.0, 0.0],
                [0.0, self.a, -self.b, 0.0],
                [0.0, self.b, self.a, 0.0],
                [0.0, 0.0, 0.0, self.c],
            ]
        )

    def fidelity(self) -> float:
        return (1.0 + 2.0 * self.a + self.c + 2.0) / 6.0

    def choi(self) -> np.ndarray:
        """Choi matrix (unnormalized, trace 2) in the |00>,|01>,|10>,|11> basis."""
        a, b, c = self.a, self.b, self.c
        return 0.5 * np.array(
            [
                [1 + c, 0, 0, 2 * (a - 1j * b)],
                [0, 1 - c, 0, 0],
                [0, 0, 1 - c, 0],
                [2 * (a + 1j * b), 0, 0, 1 + c],
            ],
            dtype=np.complex128,
        )

    def is_completely_positive(self, tol: float = CP_TOL) -> bool:
        return bool(np.linalg.eigvalsh(self.choi()).min() >= -tol)

    def kraus(self, tol: float = CP_TOL) -> list[np.ndarray]:
        """Kraus operators from the spectral decomposition of the Choi matrix."""
        vals, vecs = np.linalg.eigh(self.choi())
        if vals.min() < -tol:
            raise ToleranceError(f"channel is not completely positive (Choi eig {vals.min():.2e})")
        ops = []
        for lam, v in zip(vals, vecs.T):
            if lam <= tol:
                continue
            ops.append(math.sqrt(lam) * v.reshape(2, 2))
        return ops

    @staticmethod
    def identity() -> "ZChannel":
        return ZChannel(1.0, 0.0, 1.0)

    @staticmethod
    def rotation(theta: float) -> "ZChannel":
        """Pure coherent rotation exp(-i theta Z) (full PTM angle 2 theta)."""
        return ZChannel(math.cos(2 * theta), math.sin(2 * theta), 1.0)


def fit_z_channel(ptm: np.ndarray) -> tuple[ZChannel, float]:
    """Least-squares fit of a PTM into the Z-axis family; returns the residual."""
    a = 0.5 * (ptm[1, 1] + ptm[2, 2])
    b = 0.5 * (ptm[2, 1] - ptm[1, 2])
    c = ptm[3, 3]
    ch = ZChannel(a, b, c)
    residual = float(np.max(np.abs(ptm - ch.ptm())))
    return ch, residual


def _fit_or_raise(code_name: str, ptm: np.ndarray, context: str) -> ZChannel:
    ch, residual = fit_z_channel(ptm)
    if residual > FAMILY_TOL:
        raise StructureError(
            f"{code_name}: {context} left the Z-axis channel family "
            f"(residual {residual:.3e})"
        )
    return ch


# ---------------------------------------------------------------------------
# the physical -> logical map
# ---------------------------------------------------------------------------

def _apply_tensor_channel(kraus: list[np.ndarray], n: int):
    """Map rho -> (E tensor ... tensor E)(rho) applied qubit by qubit.

    Kraus operators of the Z-axis family are diagonal or X times diagonal,
    which lets every application run as elementwise scaling plus an index
    flip instead of dense contractions.
    """
    dim = 1 << n
    idx = np.arange(dim)
    split: list[tuple[np.ndarray, np.ndarray, bool]] = []
    for K in kraus:
        if abs(K[0, 1]) < 1e-15 and abs(K[1, 0]) < 1e-15:
            split.append((K[0, 0], K[1, 1], False))
        elif abs(K[0, 0]) < 1e-15 and abs(K[1, 1]) < 1e-15:
            # K = X . diag(K[1,0], K[0,1]); flip after scaling
            split.append((K[1, 0], K[0, 1], True))
        else:
            return _apply_general_tensor_channel(kraus, n)

    def apply(rho: np.ndarray) -> np.ndarray:
        for q in range(n):
            bit = idx & (1 << q)
            acc = np.zeros_like(rho)
            for lo, hi, flips in split:
                scale = np.where(bit, hi, lo)
                term = (scale[:, None] * rho) * scale.conj()[None, :]
                if flips:
                    flip = idx ^ (1 << q)
                    term = term[np.ix_(flip, flip)]
                acc += term
            rho = acc
        return rho

    return apply


def _apply_general_tensor_channel(kraus: list[np.ndarray], n: int):
    def apply(rho: np.ndarray) -> np.ndarray:
        dim = 1 << n
        for q in range(n):
            lower, upper = 1 << q, dim >> (q + 1)
            t = rho.reshape(upper, 2, lower, upper, 2, lower)
            acc = np.zeros_like(t)
            for K in kraus:
                acc += np.einsum("ab,ublvcr,dc->ualvdr", K, t, K.conj(), optimize=True)
            rho = acc.reshape(dim, dim)
        return rho

    return apply


def logical_map(code: StabilizerCode, ch: ZChannel) -> ZChannel:
    """One concatenation level: per-qubit channel, then correction, then refit."""
    if not ch.is_completely_positive():
        raise ToleranceError("input channel is not completely positive")
    kraus = ch.kraus()
    ptm = logical_ptm_of_map(code, _apply_tensor_channel(kraus, code.n))
    return _fit_or_raise(code.name, ptm, "logical map")


def scheme_level1_map(code: StabilizerCode, theta: float, scheme: str,
                      conj: PauliOp | None = None) -> ZChannel:
    """Level-1 channel with a noise-tailoring scheme applied at the physical level.

    ``scheme``: ``"none"``, ``"twirl"`` or ``"conj"`` (the latter requires the
    conjugation gate).  Levels beyond the first use :func:`logical_map` with
    no tailoring.
    """
    if scheme == "none":
        ptm = effective_logical_channel(code, theta, None)
    elif scheme == "conj":
        if conj is None:
            raise ValueError("conjugation scheme needs a gate")
        ptm = effective_logical_channel(code, theta, conj)
    elif scheme == "twirl":
        from .tailoring import default_twirl_set, full_twirl_channel

        ptm = full_twirl_channel(code, theta, default_twirl_set(code))
    else:
        raise ValueError(f"unknown scheme {scheme!r}")
    return _fit_or_raise(code.name, ptm, f"level-1 {scheme} channel")


def iterate_levels(
    code: StabilizerCode,
    theta: float,
    scheme: str,
    levels: int,
    conj: PauliOp | None = None,
) -> list[tuple[int, float]]:
    """Fidelity after 1..levels concatenation levels."""
    if levels < 1:
        raise ValueError("need at least one level")
    ch = scheme_level1_map(code, theta, scheme, conj)
    out = [(1, ch.fidelity())]
    for level in range(2, levels + 1):
        ch = logical_map(code, ch)
        out.append((level, ch.fidelity()))
    return out


# ---------------------------------------------------------------------------
# threshold extraction
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class ThresholdReport:
    code_name: str
    scheme: str
    conj: str | None
    theta_star: float | None
    fidelity_at_crossing: float | None
    levels: tuple[int, int]
    no_crossing: bool = False

    def to_json_dict(self) -> dict:
        return {
            "code": self.code_name,
            "scheme": self.scheme,
            "conj": self.conj,
            "theta_star": None if self.theta_star is None else format_float(self.theta_star),
            "f_star": None
            if self.fidelity_at_crossing is None
            else format_float(self.fidelity_at_crossing),
            "levels": list(self.levels),
            "no_crossing": self.no_crossing,
        }


def _level_gap(code, theta, scheme, conj, levels_pair):
    lo, hi = levels_pair
    vals = dict(iterate_levels(code, theta, scheme, hi, conj))
    return vals[hi] - vals[lo], vals[lo]


def find_threshold(
    code: StabilizerCode,
    scheme: str,
    conj: PauliOp | None = None,
    levels_pair: tuple[int, int] = (1, 2),
    bracket: tuple[float, float] = (0.02, math.pi / 4 - 0.02),
    tol: float = 1e-5,
    scan_points: int = 24,
) -> ThresholdReport:
    """Locate the first angle where the deeper level stops improving fidelity.

    The fidelity map has a trivial fixed point at 2/3, so the level gap turns
    positive again deep in the noisy regime; the threshold is the first
    positive-to-negative sign change, found by a coarse scan and then
    bisection.  No sign change on the bracket yields a no-crossing report.
    """
    label = conj.to_index_string() if conj is not None else None
    grid = np.linspace(bracket[0], bracket[1], scan_points)
    gaps = [_level_gap(code, t, scheme, conj, levels_pair)[0] for t in grid]
    lo = hi = None
    for i in range(len(grid) - 1):
        if gaps[i] > 0 and gaps[i + 1] <= 0:
            lo, hi = grid[i], grid[i + 1]
            break
    if lo is None:
        return ThresholdReport(
            code_name=code.name,
            scheme=scheme,
            conj=label,
            theta_star=None,
            fidelity_at_crossing=None,
            levels=levels_pair,
            no_crossing=True,
        )
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        g_mid, _ = _level_gap(code, mid, scheme, conj, levels_pair)
        if g_mid > 0:
            lo = mid
        else:
            hi = mid
    theta_star = 0.5 * (lo + hi)
    _, f_low = _level_gap(code, theta_star, scheme, conj, levels_pair)
    return ThresholdReport(
        code_name=code.name,
        scheme=scheme,
        conj=label,
        theta_star=theta_star,
        fidelity_at_crossing=f_low,
        levels=levels_pair,
    )


def threshold_reports_to_json(reports: list[ThresholdReport]) -> str:
    return json.dumps([r.to_json_dict() for r in reports], indent=2)
