"""Conjugation-gate search: twirl sets, search-space reductions, symmetry classes.

The full conjugation search space (all Paulis) is cut down in three steps:

1. stabilizers and logical operators conjugate trivially, leaving only the
   single-qubit error generators;
2. generators commuting with every noise element (pure-Z gates against Z-axis
   noise) act trivially on the noise and are dropped;
3. qubit permutations preserving both the relevant checks and the noise split
   the remaining set into equivalence classes with identical logical channels.

The search then evaluates one representative per class.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from itertools import product as iter_product

import numpy as np

from .channel import (
    channel_fidelity,
    effective_channel_from_diag,
    effective_logical_channel,
    format_float,
    z_rotation_diag,
)
from .codes import StabilizerCode, build_error_generators, coset_table, syndrome
from .pauli import PauliOp, compose, is_independent, span_of, weight

GROUP_ORDER_CAP = 10**6


# ---------------------------------------------------------------------------
# noise descriptors
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class ZNoiseSupport:
    """Pure-Z noise on every qubit (the global coherent rotation model).

    A gate acts trivially on such noise exactly when it carries no X or Y
    component anywhere.
    """

    n: int

    def acts_trivially(self, p: PauliOp) -> bool:
        return p.x_bits == 0


# ---------------------------------------------------------------------------
# reductions
# ---------------------------------------------------------------------------

def reduce_generators(code: StabilizerCode, noise: ZNoiseSupport) -> list[PauliOp]:
    """Error generators that act nontrivially on the declared noise."""
    return [g for g in build_error_generators(code) if not noise.acts_trivially(g)]


@dataclass(frozen=True)
class TwirlSet:
    generators: tuple[PauliOp, ...]
    members: tuple[PauliOp, ...]  # lowest-weight representatives, one per syndrome

    def __len__(self) -> int:
        return len(self.members)


def build_twirl_set(code: StabilizerCode, gens: list[PauliOp]) -> TwirlSet:
    """Span of the generators with every element replaced by its lowest-weight
    same-syndrome representative (the coset leader)."""
    if gens and not is_independent(list(gens)):
        raise ValueError("twirl generators must be independent")
    reps = coset_table(code)
    members = sorted(
        {reps[syndrome(code, p)] for p in span_of(code.n, list(gens))},
        key=lambda p: (weight(p), p.key()),
    )
    return TwirlSet(generators=tuple(gens), members=tuple(members))


# ---------------------------------------------------------------------------
# permutation-symmetry equivalence classes
# ---------------------------------------------------------------------------

def _compose_perm(g: tuple[int, ...], h: tuple[int, ...]) -> tuple[int, ...]:
    # apply g first, then h
    return tuple(h[g[i] - 1] for i in range(len(g)))


def symmetry_group(code: StabilizerCode) -> list[tuple[int, ...]]:
    """Closure of the code's symmetry generators, capped at 10**6 elements."""
    identity = tuple(range(1, code.n + 1))
    seen = {identity}
    frontier = [identity]
    while frontier:
        nxt = []
        for g in frontier:
            for h in code.symmetry_gens:
                c = _compose_perm(g, h)
                if c not in seen:
                    if len(seen) >= GROUP_ORDER_CAP:
                        raise RuntimeError("symmetry group exceeds the supported order")
                    seen.add(c)
                    nxt.append(c)
        frontier = nxt
    return sorted(seen)


def _x_coset_key(code: StabilizerCode, x_bits: int, stab_x_span: frozenset[int]) -> int:
    """Canonical X-part modulo the stabilizers' X parts.

    For pure-Z noise the conjugated channel depends on the gate only through
    its X part, and X parts differing by a stabilizer's X part give the same
    channel; the minimum over the coset is a stable class key.
    """
    return min(x_bits ^ s for s in stab_x_span)


def _stab_x_span(code: StabilizerCode) -> frozenset[int]:
    masks = {0}
    for g in code.stabilizer_gens:
        masks |= {m ^ g.x_bits for m in masks}
    return frozenset(masks)


@dataclass(frozen=True)
class EquivClass:
    representative: PauliOp
    members: tuple[PauliOp, ...]
    witnesses: dict  # member -> permutation carrying the representative to it

    @property
    def size(self) -> int:
        return len(self.members)


def equivalence_classes(code: StabilizerCode, twirl: TwirlSet) -> list[EquivClass]:
    """Partition twirl members into classes with identical conjugated channels.

    Members are first identified when their gates differ by something trivial
    for the noise (equal X part modulo stabilizer X parts), then orbits are
    taken under the code's permutation-symmetry group, applied to the X-part
    cosets.  Classes are returned sorted by (weight, order) of their
    representative.
    """
    group = symmetry_group(code)
    xspan = _stab_x_span(code)

    key_of = {m: _x_coset_key(code, m.x_bits, xspan) for m in twirl.members}
    members_by_key: dict[int, list[PauliOp]] = {}
    for m in twirl.members:
        members_by_key.setdefault(key_of[m], []).append(m)

    keys = set(members_by_key)
    parent = {k: k for k in keys}

    def find(k):
        while parent[k] != k:
            parent[k] = parent[parent[k]]
            k = parent[k]
        return k

    witness_perm: dict[int, tuple] = {}
    identity = tuple(range(1, code.n + 1))
    for k in keys:
        witness_perm[k] = identity
    for perm in group:
        for k in keys:
            image = _x_coset_key(code, _permute_mask(k, perm, code.n), xspan)
            if image in keys:
                ra, rb = find(k), find(image)
                if ra != rb:
                    parent[rb] = ra
                    witness_perm[image] = perm

    orbits: dict[int, list[int]] = {}
    for k in keys:
        orbits.setdefault(find(k), []).append(k)

    classes = []
    for ks in orbits.values():
        members = sorted(
            (m for k in ks for m in members_by_key[k]), key=lambda p: (weight(p), p.key())
        )
        rep = members[0]
        witnesses = {}
        for m in members:
            witnesses[m] = _find_witness(code, rep, m, group, xspan)
        classes.append(EquivClass(representative=rep, members=tuple(members), witnesses=witnesses))
    classes.sort(key=lambda c: (weight(c.representative), c.representative.key()))
    return classes


def _permute_mask(mask: int, perm: tuple[int, ...], n: int) -> int:
    out = 0
    for i in range(n):
        if mask & (1 << i):
            out |= 1 << (perm[i] - 1)
    return out


def _find_witness(code, rep, member, group, xspan):
    target = _x_coset_key(code, member.x_bits, xspan)
    for perm in group:
        if _x_coset_key(code, _permute_mask(rep.x_bits, perm, code.n), xspan) == target:
            return perm
    return None


# ---------------------------------------------------------------------------
# optimal-conjugation search
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class ClassReport:
    representative: str
    size: int
    fidelity: float


@dataclass(frozen=True)
class SearchReport:
    code_name: str
    theta: float
    classes: tuple[ClassReport, ...]
    fidelity_original: float
    fidelity_twirled: float
    w_max: str
    fidelity_max: float
    all_equal: bool

    def to_json(self) -> str:
        return json.dumps(
            {
                "code": self.code_name,
                "theta": format_float(self.theta),
                "classes": [
                    {
                        "rep": c.representative,
                        "size": c.size,
                        "fidelity": format_float(c.fidelity),
                    }
                    for c in self.classes
                ],
                "F_0": format_float(self.fidelity_original),
                "F_T": format_float(self.fidelity_twirled),
                "W_max": self.w_max,
                "F_max": format_float(self.fidelity_max),
                "all_equal": self.all_equal,
            },
            indent=2,
        )


def search_optimal(
    code: StabilizerCode, theta: float, classes: list[EquivClass], tol: float = 1e-12
) -> SearchReport:
    """Evaluate one representative per class; report the best conjugation.

    The twirled fidelity is the class-size-weighted mean, which equals the
    uniform average over the whole twirl set because class members share one
    channel.  Ties within ``tol`` resolve toward the lightest gate, so a code
    where conjugation is useless reports the identity.
    """
    reports = []
    fidelities = []
    for cls in classes:
        f = channel_fidelity(code, theta, cls.representative)
        reports.append(
            ClassReport(
                representative=cls.representative.to_index_string(), size=cls.size, fidelity=f
            )
        )
        fidelities.append(f)
    sizes = np.array([c.size for c in classes], dtype=float)
    f_arr = np.array(fidelities)
    f_twirl = float(np.sum(sizes * f_arr) / np.sum(sizes))
    f_orig = channel_fidelity(code, theta, None)

    best = max(fidelities)
    candidates = [i for i, f in enumerate(fidelities) if best - f <= tol]
    # prefer the lightest representative among numerically tied classes
    pick = min(candidates, key=lambda i: (weight(classes[i].representative), classes[i].representative.key()))
    all_equal = (best - min(fidelities)) <= tol
    return SearchReport(
        code_name=code.name,
        theta=theta,
        classes=tuple(reports),
        fidelity_original=f_orig,
        fidelity_twirled=f_twirl,
        w_max=classes[pick].representative.to_index_string(),
        fidelity_max=fidelities[pick],
        all_equal=all_equal,
    )


def default_classes(code: StabilizerCode) -> list[EquivClass]:
    """Reduction pipeline for the global Z-rotation model."""
    noise = ZNoiseSupport(code.n)
    gens = reduce_generators(code, noise)
    twirl = build_twirl_set(code, gens)
    return equivalence_classes(code, twirl)


def default_twirl_set(code: StabilizerCode) -> TwirlSet:
    noise = ZNoiseSupport(code.n)
    return build_twirl_set(code, reduce_generators(code, noise))


def full_twirl_channel(code: StabilizerCode, theta: float, twirl: TwirlSet) -> np.ndarray:
    """Logical channel of the complete twirl, reduced generators or not.

    The complete twirl runs over every Pauli; its generator-product form
    factorizes into (i) the reduced generators, which act on the noise, and
    (ii) stabilizer and logical generators, which commute out to the logical
    level where they are an exact one-qubit Pauli twirl.  Step (ii) is the
    diagonal projection of the PTM, so the result equals averaging the raw
    generator span and dropping the off-diagonal remnants.  Verified against
    a brute-force average over all 4**n conjugations in the tests.

    Fidelities are unchanged by (ii); gate sets actually applied in hardware
    are the lowest-weight members, whose uniform average shares this
    channel's diagonal.
    """
    span = sorted(span_of(code.n, list(twirl.generators)), key=lambda p: p.key())
    acc = np.zeros((4, 4))
    for w in span:
        acc += effective_logical_channel(code, theta, w)
    return np.diag(np.diag(acc / len(span)))


# ---------------------------------------------------------------------------
# multi-round conjugation plans
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class ConjugationPlan:
    """Per-round conjugation gates for K noise slices, corrected once at the end."""

    gates: tuple[PauliOp, ...]

    def __len__(self) -> int:
        return len(self.gates)

    def labels(self) -> list[str]:
        return [g.to_index_string() for g in self.gates]


def _inner_round_set(code: StabilizerCode, noise: ZNoiseSupport) -> list[PauliOp]:
    """Per-round conjugation set: span of all Pauli generators that act
    nontrivially on the noise (stabilizer/logical removal is only valid for
    the outermost round)."""
    gens = [
        g
        for g in (
            list(code.stabilizer_gens)
            + [code.logical_x, code.logical_z]
            + build_error_generators(code)
        )
        if not noise.acts_trivially(g)
    ]
    # an independent generating subset is enough for the span
    basis: list[PauliOp] = []
    for g in gens:
        if is_independent(basis + [g]):
            basis.append(g)
    return sorted(span_of(code.n, basis), key=lambda p: (weight(p), p.key()))


def multiround_reduce(
    code: StabilizerCode,
    noise: ZNoiseSupport,
    k: int,
    sample_budget: int,
    seed: int = 0,
) -> list[ConjugationPlan]:
    """Deduplicated conjugation plans for ``k`` rounds of noise tailoring.

    The outermost round ranges over the one-round twirl set; inner rounds
    over the per-round set.  Plans related by a single qubit permutation
    applied to every round simultaneously are merged.  If more than
    ``sample_budget`` canonical plans survive, a seeded uniform sample is
    returned.
    """
    if k < 1:
        raise ValueError("round count must be >= 1")
    if sample_budget == 0:
        return []
    outer = list(default_twirl_set(code).members)
    inner = _inner_round_set(code, noise) if k > 1 else []
    group = symmetry_group(code)
    xspan = _stab_x_span(code)

    seen: dict[tuple, tuple] = {}
    for combo in iter_product(outer, *([inner] * (k - 1))):
        key = _plan_canonical_key(code, combo, group, xspan)
        if key not in seen:
            seen[key] = combo
    plans = [ConjugationPlan(gates=tuple(c)) for c in seen.values()]
    plans.sort(key=lambda pl: tuple(g.key() for g in pl.gates))
    if len(plans) > sample_budget:
        rng = np.random.Generator(np.random.Philox(key=seed))
        idx = rng.choice(len(plans), size=sample_budget, replace=False)
        plans = [plans[i] for i in sorted(idx)]
    return plans


def _plan_canonical_key(code, gates, group, xspan):
    best = None
    n = code.n
    for perm in group:
        outer_key = _x_coset_key(code, _permute_mask(gates[0].x_bits, perm, n), xspan)
        key = (outer_key,) + tuple(_permute_mask(g.x_bits, perm, n) for g in gates[1:])
        if best is None or key < best:
            best = key
    return best


def plan_channel(code: StabilizerCode, theta: float, plan: ConjugationPlan) -> np.ndarray:
    """Exact PTM of K noise slices with per-round conjugation and one final
    correction round.

    The composite unitary is diagonal because every conjugation gate appears
    twice (once in place, once in the closing inverse chain), cancelling all
    X action.
    """
    n = code.n
    dim = 1 << n
    idx = np.arange(dim)
    phase = np.ones(dim, dtype=np.complex128)
    offset = 0
    slice_diag = z_rotation_diag(n, theta)
    for g in plan.gates:
        # apply W_k to the running basis state |b ^ offset|
        zmask = g.z_bits
        signs = np.where(_parity(idx ^ offset, zmask), -1.0, 1.0)
        phase = phase * signs
        offset ^= g.x_bits
        phase = phase * slice_diag[idx ^ offset]
    # closing chain: product of all W_k, phase-free
    closer = PauliOp.identity(n)
    for g in plan.gates:
        closer = compose(closer, g)
    signs = np.where(_parity(idx ^ offset, closer.z_bits), -1.0, 1.0)
    phase = phase * signs
    offset ^= closer.x_bits
    assert offset == 0, "conjugation chain failed to close"
    return effective_channel_from_diag(code, phase)


def _parity(values: np.ndarray, mask: int) -> np.ndarray:
    if mask == 0:
        return np.zeros(len(values), dtype=bool)
    v = values & mask
    out = np.zeros(len(values), dtype=np.int64)
    while v.any():
        out ^= v & 1
        v >>= 1
    return out.astype(bool)
