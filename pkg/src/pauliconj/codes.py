"""Stabilizer code registry, syndromes, error generators and lookup decoding.

Five codes are built in: the five-qubit perfect code, the Steane code, both
nine-qubit Shor variants and the distance-3 rotated surface code on a 3x3
grid.  Generator ordering is fixed (X-type checks first, then Z-type,
row-major within a type) so syndrome bit patterns are reproducible.

Surface-code layout (qubits numbered row-major on the 3x3 grid)::

    1 2 3        X checks: (1,2,4,5) (3,6) (4,7) (5,6,8,9)
    4 5 6        Z checks: (1,2) (2,3,5,6) (4,5,7,8) (8,9)
    7 8 9

This assignment makes the low-weight coset representatives of the X-error
syndrome classes avoid the mid-row qubits 4 and 6, gives the 180-degree
rotation (1 9)(2 8)(3 7)(4 6) as a full code symmetry, and leaves the X-check
set invariant under exchanging qubits (1,2) and (8,9).
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from itertools import combinations

from .pauli import (
    PauliOp,
    PauliError,
    commutes,
    compose,
    enumerate_paulis,
    is_independent,
    span_of,
    weight,
)


class CodeError(ValueError):
    """Raised for invalid code definitions or construction failures."""


Permutation = tuple[int, ...]  # perm[i-1] = image of qubit i, 1-based


@dataclass(frozen=True)
class StabilizerCode:
    """A one-logical-qubit stabilizer code with its qubit-permutation symmetries."""

    name: str
    n: int
    stabilizer_gens: tuple[PauliOp, ...]
    logical_x: PauliOp
    logical_z: PauliOp
    symmetry_gens: tuple[Permutation, ...] = field(default_factory=tuple)

    def __post_init__(self):
        validate_code(self)

    @property
    def num_checks(self) -> int:
        return len(self.stabilizer_gens)

    def stabilizer_span(self) -> frozenset[PauliOp]:
        return _stab_span(self)

    def logical_y(self) -> PauliOp:
        return compose(self.logical_x, self.logical_z)


def validate_code(code: StabilizerCode) -> None:
    gens = list(code.stabilizer_gens)
    if len(gens) != code.n - 1:
        raise CodeError(f"{code.name}: expected {code.n - 1} stabilizer generators, got {len(gens)}")
    for g in gens:
        if g.n != code.n:
            raise CodeError(f"{code.name}: generator size mismatch")
    for a, b in combinations(gens, 2):
        if commutes(a, b) != 1:
            raise CodeError(f"{code.name}: stabilizer generators {a} and {b} anticommute")
    if not is_independent(gens):
        raise CodeError(f"{code.name}: stabilizer generators are dependent")
    for log in (code.logical_x, code.logical_z):
        for g in gens:
            if commutes(log, g) != 1:
                raise CodeError(f"{code.name}: logical {log} anticommutes with stabilizer {g}")
    if commutes(code.logical_x, code.logical_z) != -1:
        raise CodeError(f"{code.name}: logical X and Z must anticommute")
    stab_set = span_of(code.n, gens)
    if code.logical_x in stab_set or code.logical_z in stab_set:
        raise CodeError(f"{code.name}: logical operator lies in the stabilizer span")
    for perm in code.symmetry_gens:
        if sorted(perm) != list(range(1, code.n + 1)):
            raise CodeError(f"{code.name}: {perm} is not a permutation of 1..{code.n}")


# ---------------------------------------------------------------------------
# syndromes
# ---------------------------------------------------------------------------

def syndrome(code: StabilizerCode, p: PauliOp) -> int:
    """Syndrome bitmask: bit i set iff ``p`` anticommutes with generator i."""
    if p.n != code.n:
        raise CodeError(f"operator on {p.n} qubits given to {code.n}-qubit code")
    bits = 0
    for i, g in enumerate(code.stabilizer_gens):
        if commutes(p, g) == -1:
            bits |= 1 << i
    return bits


def syndrome_bits(code: StabilizerCode, p: PauliOp) -> str:
    """Syndrome as a bit string, generator 1 leftmost."""
    s = syndrome(code, p)
    return "".join("1" if s & (1 << i) else "0" for i in range(code.num_checks))


def classify(code: StabilizerCode, p: PauliOp) -> str:
    """Sort ``p`` into ``"stabilizer"``, ``"logical"`` or ``"error"``."""
    if syndrome(code, p):
        return "error"
    return "stabilizer" if p in code.stabilizer_span() else "logical"


# ---------------------------------------------------------------------------
# error generators (single-qubit X/Z set completing the Pauli generators)
# ---------------------------------------------------------------------------

def build_error_generators(code: StabilizerCode) -> list[PauliOp]:
    """Single-qubit X/Z operators completing stabilizers+logicals to a full
    generating set, one per stabilizer check.

    Grown iteratively: first the single-qubit errors violating exactly one
    check, then at stage k the errors violating k checks of which exactly one
    is new.  Candidates are scanned in qubit order, X before Z, and skipped
    when they add no new check.  The result is returned sorted (X's first,
    then Z's, by qubit) for stable reporting.
    """
    checks = list(code.stabilizer_gens)
    covered: set[int] = set()  # indices of checks already reachable
    chosen: list[PauliOp] = []

    def violated(p: PauliOp) -> list[int]:
        return [i for i, g in enumerate(checks) if commutes(p, g) == -1]

    stage = 1
    while len(covered) < len(checks):
        progress = False
        for qubit in range(1, code.n + 1):
            for kind in ("X", "Z"):
                p = PauliOp.single(code.n, kind, qubit)
                v = violated(p)
                if len(v) != stage:
                    continue
                new = [i for i in v if i not in covered]
                if len(new) != 1:
                    continue
                chosen.append(p)
                covered.add(new[0])
                progress = True
        if not progress:
            stalled = [checks[i].to_index_string() for i in range(len(checks)) if i not in covered]
            if stage > len(checks):
                raise CodeError(
                    f"{code.name}: error-generator construction stalled; "
                    f"unreached checks: {stalled}"
                )
            stage += 1
            continue
        stage += 1

    chosen.sort(key=lambda p: (p.x_bits == 0, p.support()[0]))
    assert len(chosen) == len(checks)
    return chosen


# ---------------------------------------------------------------------------
# lookup decoding
# ---------------------------------------------------------------------------

def qubit_check_degrees(code: StabilizerCode) -> list[int]:
    """Number of stabilizer generators touching each qubit (1-based list)."""
    degs = [0] * (code.n + 1)
    for g in code.stabilizer_gens:
        for q in g.support():
            degs[q] += 1
    return degs


def _rep_key(code: StabilizerCode, p: PauliOp, degs: list[int]) -> tuple:
    return (weight(p), sum(degs[q] for q in p.support()), p.x_bits, p.z_bits)


def coset_table(code: StabilizerCode) -> dict[int, PauliOp]:
    """Minimum-weight coset representative for every syndrome.

    Equal-weight candidates are broken first by the total check degree of
    their support (operators on fewer-checked qubits win), then by the
    (x_bits, z_bits) integer pair, qubit 1 least significant.  Cached per code.
    """
    cached = _COSET_CACHE.get(code.name) if code.name in _REGISTRY_NAMES else None
    if cached is not None:
        return cached
    degs = qubit_check_degrees(code)
    table: dict[int, tuple] = {}
    reps: dict[int, PauliOp] = {}
    total = 1 << code.num_checks
    for max_w in range(code.n + 1):
        for p in enumerate_paulis(code.n, max_w):
            if weight(p) != max_w:
                continue
            s = syndrome(code, p)
            k = _rep_key(code, p, degs)
            if s not in table or k < table[s]:
                table[s] = k
                reps[s] = p
        if len(reps) == total:
            break
    if len(reps) != total:
        raise CodeError(f"{code.name}: could not reach all {total} syndromes")
    if code.name in _REGISTRY_NAMES:
        _COSET_CACHE[code.name] = reps
    return reps


def build_decoder(code: StabilizerCode) -> dict[int, PauliOp]:
    """Recovery table keyed by syndrome.

    Recoveries are the most likely residual error under the Z-axis noise this
    package studies: among candidates with the right syndrome, pure-Z
    operators are preferred (they are the only ones the noise produces), then
    lowest weight with the same deterministic tie-break as
    :func:`coset_table`.  Syndromes no Z-type error can produce fall back to
    the plain minimum-weight representative.  For CSS codes the two rules
    agree on every syndrome.
    """
    cached = _DECODER_CACHE.get(code.name) if code.name in _REGISTRY_NAMES else None
    if cached is not None:
        return cached
    degs = qubit_check_degrees(code)
    table: dict[int, tuple] = {}
    reps: dict[int, PauliOp] = dict(coset_table(code))
    # overlay pure-Z preference where a Z-type candidate exists
    zreps: dict[int, tuple] = {}
    zops: dict[int, PauliOp] = {}
    for zmask in range(1 << code.n):
        p = PauliOp(code.n, 0, zmask)
        s = syndrome(code, p)
        k = _rep_key(code, p, degs)
        if s not in zreps or k < zreps[s]:
            zreps[s] = k
            zops[s] = p
    for s, p in zops.items():
        reps[s] = p
    if code.name in _REGISTRY_NAMES:
        _DECODER_CACHE[code.name] = reps
    return reps


_COSET_CACHE: dict[str, dict[int, PauliOp]] = {}
_DECODER_CACHE: dict[str, dict[int, PauliOp]] = {}
_SPAN_CACHE: dict[str, frozenset[PauliOp]] = {}


def _stab_span(code: StabilizerCode) -> frozenset[PauliOp]:
    if code.name in _REGISTRY_NAMES and code.name in _SPAN_CACHE:
        return _SPAN_CACHE[code.name]
    s = frozenset(span_of(code.n, list(code.stabilizer_gens)))
    if code.name in _REGISTRY_NAMES:
        _SPAN_CACHE[code.name] = s
    return s


# ---------------------------------------------------------------------------
# registry
# ---------------------------------------------------------------------------

def _p(text: str, n: int) -> PauliOp:
    return PauliOp.from_string(text, n)


def _xs(n: int, qubits) -> PauliOp:
    x = 0
    for q in qubits:
        x |= 1 << (q - 1)
    return PauliOp(n, x, 0)


def _zs(n: int, qubits) -> PauliOp:
    z = 0
    for q in qubits:
        z |= 1 << (q - 1)
    return PauliOp(n, 0, z)


def _build_five_qubit() -> StabilizerCode:
    n = 5
    gens = tuple(_p(s, n) for s in ("XZZXI", "IXZZX", "XIXZZ", "ZXIXZ"))
    return StabilizerCode(
        name="five_qubit",
        n=n,
        stabilizer_gens=gens,
        logical_x=_xs(n, range(1, 6)),
        logical_z=_zs(n, range(1, 6)),
        symmetry_gens=((2, 3, 4, 5, 1),),  # cyclic shift
    )


def _build_steane() -> StabilizerCode:
    n = 7
    plaquettes = ((1, 4, 6, 7), (2, 4, 5, 7), (3, 5, 6, 7))
    gens = tuple([_xs(n, p) for p in plaquettes] + [_zs(n, p) for p in plaquettes])
    return StabilizerCode(
        name="steane",
        n=n,
        stabilizer_gens=gens,
        logical_x=_xs(n, range(1, 8)),
        logical_z=_zs(n, range(1, 8)),
        # generators of the plaquette-preserving (Fano) permutation group,
        # order 168 under closure
        symmetry_gens=((1, 2, 5, 4, 3, 7, 6), (2, 3, 1, 5, 6, 4, 7)),
    )


_SHOR_SYMMETRY = (
    (2, 1, 3, 4, 5, 6, 7, 8, 9),  # swap within row 1
    (2, 3, 1, 4, 5, 6, 7, 8, 9),  # cycle within row 1
    (4, 5, 6, 1, 2, 3, 7, 8, 9),  # swap rows 1,2
    (4, 5, 6, 7, 8, 9, 1, 2, 3),  # cycle rows
)


def _build_shor_z() -> StabilizerCode:
    n = 9
    xrows = (range(1, 7), range(4, 10))
    zpairs = ((1, 2), (2, 3), (4, 5), (5, 6), (7, 8), (8, 9))
    gens = tuple([_xs(n, r) for r in xrows] + [_zs(n, p) for p in zpairs])
    return StabilizerCode(
        name="shor_z",
        n=n,
        stabilizer_gens=gens,
        logical_x=_xs(n, range(1, 10)),
        logical_z=_zs(n, range(1, 10)),
        symmetry_gens=_SHOR_SYMMETRY,
    )


def _build_shor_x() -> StabilizerCode:
    n = 9
    xpairs = ((1, 2), (2, 3), (4, 5), (5, 6), (7, 8), (8, 9))
    zrows = (range(1, 7), range(4, 10))
    gens = tuple([_xs(n, p) for p in xpairs] + [_zs(n, r) for r in zrows])
    return StabilizerCode(
        name="shor_x",
        n=n,
        stabilizer_gens=gens,
        logical_x=_xs(n, range(1, 10)),
        logical_z=_zs(n, range(1, 10)),
        symmetry_gens=_SHOR_SYMMETRY,
    )


def _build_surface3() -> StabilizerCode:
    n = 9
    xchecks = ((1, 2, 4, 5), (3, 6), (4, 7), (5, 6, 8, 9))
    zchecks = ((1, 2), (2, 3, 5, 6), (4, 5, 7, 8), (8, 9))
    gens = tuple([_xs(n, c) for c in xchecks] + [_zs(n, c) for c in zchecks])
    return StabilizerCode(
        name="surface3",
        n=n,
        stabilizer_gens=gens,
        logical_x=_xs(n, range(1, 10)),
        logical_z=_zs(n, range(1, 10)),
        symmetry_gens=(
            (9, 8, 7, 6, 5, 4, 3, 2, 1),  # 180-degree rotation of the grid
            (2, 1, 3, 4, 5, 6, 7, 8, 9),  # exchange (1,2): X-check symmetry
            (1, 2, 3, 4, 5, 6, 7, 9, 8),  # exchange (8,9): X-check symmetry
        ),
    )


_BUILDERS = {
    "five_qubit": _build_five_qubit,
    "steane": _build_steane,
    "shor_z": _build_shor_z,
    "shor_x": _build_shor_x,
    "surface3": _build_surface3,
}
_REGISTRY_NAMES = frozenset(_BUILDERS)
_CODE_CACHE: dict[str, StabilizerCode] = {}


def registry_names() -> list[str]:
    return sorted(_BUILDERS)


def registry(name: str) -> StabilizerCode:
    try:
        builder = _BUILDERS[name]
    except KeyError:
        raise CodeError(f"unknown code {name!r}; known: {', '.join(registry_names())}") from None
    if name not in _CODE_CACHE:
        _CODE_CACHE[name] = builder()
    return _CODE_CACHE[name]


# ---------------------------------------------------------------------------
# JSON interchange
# ---------------------------------------------------------------------------

def code_to_json(code: StabilizerCode) -> dict:
    return {
        "name": code.name,
        "n": code.n,
        "stabilizers": [g.to_string() for g in code.stabilizer_gens],
        "logical_x": code.logical_x.to_string(),
        "logical_z": code.logical_z.to_string(),
        "symmetries": [list(p) for p in code.symmetry_gens],
    }


def code_from_json(data: dict) -> StabilizerCode:
    try:
        n = int(data["n"])
        code = StabilizerCode(
            name=str(data["name"]),
            n=n,
            stabilizer_gens=tuple(PauliOp.from_string(s, n) for s in data["stabilizers"]),
            logical_x=PauliOp.from_string(data["logical_x"], n),
            logical_z=PauliOp.from_string(data["logical_z"], n),
            symmetry_gens=tuple(tuple(int(q) for q in perm) for perm in data.get("symmetries", [])),
        )
    except (KeyError, TypeError, PauliError) as exc:
        raise CodeError(f"malformed code definition: {exc}") from exc
    # permutations must map the stabilizer set onto itself
    stab_set = code.stabilizer_span()
    for perm in code.symmetry_gens:
        mapped = {p.permuted(perm) for p in stab_set}
        if mapped != set(stab_set):
            raise CodeError(f"{code.name}: permutation {perm} does not preserve the stabilizer set")
    return code


def dump_code(code: StabilizerCode) -> str:
    return json.dumps(code_to_json(code), indent=2)


def load_code(text: str) -> StabilizerCode:
    return code_from_json(json.loads(text))
