"""Phase-free n-qubit Pauli operators in symplectic (bit-vector) form.

A Pauli operator is stored as a pair of integer bitmasks ``(x_bits, z_bits)``
with qubit 1 on the least-significant bit.  Composition XORs the masks and
drops the overall phase; signs that matter (commutators) are recomputed from
the symplectic form on demand.  Supports up to 64 qubits.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from itertools import combinations

_MAX_QUBITS = 64

_TOKEN_RE = re.compile(r"([XYZ])(\d+)")


class PauliError(ValueError):
    """Raised for malformed Pauli operators or size mismatches."""


@dataclass(frozen=True)
class PauliOp:
    """Phase-free Pauli operator on ``n`` qubits.

    ``x_bits`` / ``z_bits`` hold the X and Z parts; a qubit with both bits
    set carries Y.  Instances are immutable and hashable.
    """

    n: int
    x_bits: int
    z_bits: int

    def __post_init__(self):
        if not 1 <= self.n <= _MAX_QUBITS:
            raise PauliError(f"qubit count {self.n} outside supported range 1..{_MAX_QUBITS}")
        mask = (1 << self.n) - 1
        if self.x_bits & ~mask or self.z_bits & ~mask:
            raise PauliError("bit-vector extends beyond the declared qubit count")

    # -- constructors ------------------------------------------------------

    @staticmethod
    def identity(n: int) -> "PauliOp":
        return PauliOp(n, 0, 0)

    @staticmethod
    def single(n: int, kind: str, qubit: int) -> "PauliOp":
        """Single-qubit X/Y/Z on ``qubit`` (1-based)."""
        if not 1 <= qubit <= n:
            raise PauliError(f"qubit {qubit} outside register of size {n}")
        bit = 1 << (qubit - 1)
        if kind == "X":
            return PauliOp(n, bit, 0)
        if kind == "Z":
            return PauliOp(n, 0, bit)
        if kind == "Y":
            return PauliOp(n, bit, bit)
        raise PauliError(f"unknown Pauli letter {kind!r}")

    @staticmethod
    def from_string(text: str, n: int | None = None) -> "PauliOp":
        """Parse either dense form ``"XZZXI"`` or index form ``"X1X4X7"``.

        Dense strings list qubit 1 leftmost.  Index form uses 1-based qubit
        numbers and needs ``n``; ``"I"`` denotes the identity in both forms.
        """
        text = text.strip().upper()
        if text and any(ch.isdigit() for ch in text):
            if n is None:
                raise PauliError("index-form Pauli string needs an explicit qubit count")
            pos = 0
            x = z = 0
            for m in _TOKEN_RE.finditer(text):
                if m.start() != pos:
                    raise PauliError(f"cannot parse Pauli string {text!r}")
                pos = m.end()
                kind, qubit = m.group(1), int(m.group(2))
                if not 1 <= qubit <= n:
                    raise PauliError(f"qubit {qubit} outside register of size {n}")
                bit = 1 << (qubit - 1)
                if kind in ("X", "Y"):
                    x ^= bit
                if kind in ("Z", "Y"):
                    z ^= bit
            if pos != len(text):
                raise PauliError(f"cannot parse Pauli string {text!r}")
            return PauliOp(n, x, z)
        if text == "I":
            if n is None:
                raise PauliError("identity string needs an explicit qubit count")
            return PauliOp(n, 0, 0)
        if n is not None and len(text) != n:
            raise PauliError(f"dense string length {len(text)} != qubit count {n}")
        x = z = 0
        for i, ch in enumerate(text):
            bit = 1 << i
            if ch in ("X", "Y"):
                x |= bit
            if ch in ("Z", "Y"):
                z |= bit
            if ch not in "IXYZ":
                raise PauliError(f"unknown Pauli letter {ch!r}")
        return PauliOp(len(text), x, z)

    # -- rendering ---------------------------------------------------------

    def to_string(self) -> str:
        """Dense rendering, qubit 1 leftmost (e.g. ``XZZXI``)."""
        letters = []
        for i in range(self.n):
            bit = 1 << i
            x, z = bool(self.x_bits & bit), bool(self.z_bits & bit)
            letters.append("Y" if x and z else "X" if x else "Z" if z else "I")
        return "".join(letters)

    def to_index_string(self) -> str:
        """Sparse rendering like ``X1X4X7``; identity renders as ``I``."""
        parts = []
        for i in range(self.n):
            bit = 1 << i
            x, z = bool(self.x_bits & bit), bool(self.z_bits & bit)
            if x or z:
                parts.append(("Y" if x and z else "X" if x else "Z") + str(i + 1))
        return "".join(parts) or "I"

    def __str__(self) -> str:
        return self.to_index_string()

    # -- queries -----------------------------------------------------------

    def support(self) -> tuple[int, ...]:
        """1-based qubits on which the operator acts nontrivially."""
        bits = self.x_bits | self.z_bits
        return tuple(i + 1 for i in range(self.n) if bits & (1 << i))

    def is_identity(self) -> bool:
        return not (self.x_bits | self.z_bits)

    def permuted(self, perm: tuple[int, ...]) -> "PauliOp":
        """Relabel qubits: qubit ``i`` (1-based) moves to ``perm[i-1]``."""
        x = z = 0
        for i in range(self.n):
            bit = 1 << i
            target = 1 << (perm[i] - 1)
            if self.x_bits & bit:
                x |= target
            if self.z_bits & bit:
                z |= target
        return PauliOp(self.n, x, z)

    def key(self) -> tuple[int, int]:
        """Total order used for deterministic tie-breaking."""
        return (self.x_bits, self.z_bits)


def compose(a: PauliOp, b: PauliOp) -> PauliOp:
    """Phase-free product: XOR of the X parts and of the Z parts."""
    if a.n != b.n:
        raise PauliError(f"size mismatch: {a.n} vs {b.n} qubits")
    return PauliOp(a.n, a.x_bits ^ b.x_bits, a.z_bits ^ b.z_bits)


def commutes(a: PauliOp, b: PauliOp) -> int:
    """Commutation sign: +1 if ``a`` and ``b`` commute, -1 otherwise."""
    if a.n != b.n:
        raise PauliError(f"size mismatch: {a.n} vs {b.n} qubits")
    parity = (a.x_bits & b.z_bits).bit_count() + (a.z_bits & b.x_bits).bit_count()
    return -1 if parity & 1 else 1


def weight(p: PauliOp) -> int:
    """Number of qubits acted on nontrivially."""
    return (p.x_bits | p.z_bits).bit_count()


def span(gens: list[PauliOp]) -> set[PauliOp]:
    """All phase-free products of subsets of ``gens`` (contains identity).

    Dependent generators simply produce a smaller set; use
    :func:`is_independent` to check for 2**len(gens) elements.
    """
    if gens:
        n = gens[0].n
        for g in gens:
            if g.n != n:
                raise PauliError("span over mixed qubit counts")
    out = {PauliOp.identity(gens[0].n)} if gens else set()
    if not gens:
        raise PauliError("span of an empty list has no qubit count; pass [identity(n)]")
    for g in gens:
        out |= {compose(g, p) for p in out}
    return out


def span_of(n: int, gens: list[PauliOp]) -> set[PauliOp]:
    """Like :func:`span` but well-defined for an empty generator list."""
    out = {PauliOp.identity(n)}
    for g in gens:
        if g.n != n:
            raise PauliError("span over mixed qubit counts")
        out |= {compose(g, p) for p in out}
    return out


def gf2_rank(rows: list[int]) -> int:
    """Rank of a list of bitmask rows over GF(2)."""
    rank = 0
    pivots: list[int] = []
    for row in rows:
        for p in pivots:
            row = min(row, row ^ p)
        if row:
            pivots.append(row)
            pivots.sort(reverse=True)
            rank += 1
    return rank


def is_independent(ops: list[PauliOp]) -> bool:
    """True iff the (x|z) rows of ``ops`` are linearly independent over GF(2)."""
    if not ops:
        return True
    n = ops[0].n
    for p in ops:
        if p.n != n:
            raise PauliError("independence check over mixed qubit counts")
    rows = [(p.x_bits << n) | p.z_bits for p in ops]
    return gf2_rank(rows) == len(ops)


def enumerate_paulis(n: int, max_weight: int):
    """Yield all Paulis on ``n`` qubits with weight <= max_weight, weight-ordered.

    Within a weight class the order is (x_bits, z_bits) lexicographic, which
    keeps downstream searches reproducible.
    """
    yield PauliOp.identity(n)
    for w in range(1, max_weight + 1):
        batch = []
        for qubits in combinations(range(n), w):
            for letters in _letter_products(w):
                x = z = 0
                for q, letter in zip(qubits, letters):
                    bit = 1 << q
                    if letter in ("X", "Y"):
                        x |= bit
                    if letter in ("Z", "Y"):
                        z |= bit
                batch.append(PauliOp(n, x, z))
        batch.sort(key=PauliOp.key)
        yield from batch


def _letter_products(w: int):
    if w == 0:
        yield ()
        return
    for rest in _letter_products(w - 1):
        for letter in "XYZ":
            yield rest + (letter,)
