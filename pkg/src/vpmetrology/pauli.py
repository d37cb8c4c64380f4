"""Symplectic Pauli-string algebra and stabilizer groups.

An N-qubit Pauli operator is stored as a pair of N-bit integers plus a
phase from {+1, +i, -1, -i}:

    P = phase * W_0 (x) W_1 (x) ... (x) W_{N-1}

where qubit j carries W_j = I/X/Y/Z according to (x_j, z_j) =
(0,0)/(1,0)/(1,1)/(0,1) and Y is the standard Pauli Y (not iXZ).  Bit j
of the masks corresponds to qubit j counted from the left of the label,
i.e. bit position (n_qubits - 1 - j) of the integer, so masks live
directly in computational-basis index space: qubit 0 is the most
significant bit of a basis index.
"""

from __future__ import annotations

import itertools

import numpy as np

PHASE_VALUES = (1, 1j, -1, -1j)  # i**k for k = 0..3

SINGLE_QUBIT = {
    "I": np.eye(2, dtype=complex),
    "X": np.array([[0, 1], [1, 0]], dtype=complex),
    "Y": np.array([[0, -1j], [1j, 0]], dtype=complex),
    "Z": np.array([[1, 0], [0, -1]], dtype=complex),
}

_LETTER_TO_BITS = {"I": (0, 0), "X": (1, 0), "Y": (1, 1), "Z": (0, 1)}
_BITS_TO_LETTER = {v: k for k, v in _LETTER_TO_BITS.items()}


def _build_mul_table() -> dict[tuple[tuple[int, int], tuple[int, int]], int]:
    """Phase exponents for single-qubit products, derived from the 2x2 matrices.

    Returns exponent k such that W_a @ W_b == i**k * W_{a xor b}.
    """
    table = {}
    for la, lb in itertools.product("IXYZ", repeat=2):
        a, b = _LETTER_TO_BITS[la], _LETTER_TO_BITS[lb]
        c = (a[0] ^ b[0], a[1] ^ b[1])
        prod = SINGLE_QUBIT[la] @ SINGLE_QUBIT[lb]
        target = SINGLE_QUBIT[_BITS_TO_LETTER[c]]
        for k in range(4):
            if np.allclose(prod, PHASE_VALUES[k] * target):
                table[(a, b)] = k
                break
        else:  # pragma: no cover - table is exact by construction
            raise RuntimeError(f"no phase found for {la}{lb}")
    return table


_MUL_PHASE = _build_mul_table()


class PauliString:
    """An N-qubit Pauli operator in signed symplectic representation."""

    __slots__ = ("n_qubits", "x_bits", "z_bits", "phase_power")

    def __init__(self, n_qubits: int, x_bits: int, z_bits: int, phase_power: int = 0):
        if n_qubits < 1:
            raise ValueError("n_qubits must be positive")
        mask = (1 << n_qubits) - 1
        if x_bits & ~mask or z_bits & ~mask:
            raise ValueError("bitmask exceeds qubit count")
        self.n_qubits = n_qubits
        self.x_bits = x_bits
        self.z_bits = z_bits
        self.phase_power = phase_power % 4

    # -- constructors ---------------------------------------------------

    @classmethod
    def from_label(cls, label: str) -> "PauliString":
        """Parse '+XYZII' / '-ZZIII' (sign optional, defaults to '+')."""
        body = label
        sign_power = 0
        if label and label[0] in "+-":
            sign_power = 0 if label[0] == "+" else 2
            body = label[1:]
        if not body or any(c not in "IXYZ" for c in body):
            raise ValueError(f"invalid Pauli label {label!r}")
        n = len(body)
        x = z = 0
        for j, c in enumerate(body):
            xb, zb = _LETTER_TO_BITS[c]
            pos = n - 1 - j
            x |= xb << pos
            z |= zb << pos
        return cls(n, x, z, sign_power)

    @classmethod
    def identity(cls, n_qubits: int) -> "PauliString":
        return cls(n_qubits, 0, 0, 0)

    @classmethod
    def single(cls, n_qubits: int, qubit: int, letter: str) -> "PauliString":
        """Single-qubit operator `letter` on `qubit` (0-based, leftmost = 0)."""
        if not 0 <= qubit < n_qubits:
            raise ValueError("qubit index out of range")
        xb, zb = _LETTER_TO_BITS[letter]
        pos = n_qubits - 1 - qubit
        return cls(n_qubits, xb << pos, zb << pos, 0)

    # -- basic queries ---------------------------------------------------

    @property
    def phase(self) -> complex:
        return PHASE_VALUES[self.phase_power]

    @property
    def is_hermitian(self) -> bool:
        return self.phase_power in (0, 2)

    @property
    def weight(self) -> int:
        return (self.x_bits | self.z_bits).bit_count()

    def qubit_bits(self, qubit: int) -> tuple[int, int]:
        """(x, z) bits of a given qubit."""
        pos = self.n_qubits - 1 - qubit
        return (self.x_bits >> pos) & 1, (self.z_bits >> pos) & 1

    def label(self) -> str:
        sign = {0: "+", 1: "+i", 2: "-", 3: "-i"}[self.phase_power]
        letters = []
        for j in range(self.n_qubits):
            letters.append(_BITS_TO_LETTER[self.qubit_bits(j)])
        return sign + "".join(letters)

    def __repr__(self) -> str:
        return f"PauliString({self.label()!r})"

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, PauliString)
            and self.n_qubits == other.n_qubits
            and self.x_bits == other.x_bits
            and self.z_bits == other.z_bits
            and self.phase_power == other.phase_power
        )

    def __hash__(self) -> int:
        return hash((self.n_qubits, self.x_bits, self.z_bits, self.phase_power))

    # -- algebra ----------------------------------------------------------

    def commutes(self, other: "PauliString") -> bool:
        """Symplectic commutation test: true iff [P, Q] = 0."""
        if self.n_qubits != other.n_qubits:
            raise ValueError("qubit count mismatch")
        anti = (self.x_bits & other.z_bits).bit_count() + (self.z_bits & other.x_bits).bit_count()
        return anti % 2 == 0

    def multiply(self, other: "PauliString") -> "PauliString":
        """Exact operator product self @ other with phase tracking."""
        if self.n_qubits != other.n_qubits:
            raise ValueError("qubit count mismatch")
        k = self.phase_power + other.phase_power
        for j in range(self.n_qubits):
            k += _MUL_PHASE[(self.qubit_bits(j), other.qubit_bits(j))]
        return PauliString(
            self.n_qubits, self.x_bits ^ other.x_bits, self.z_bits ^ other.z_bits, k % 4
        )

    def __matmul__(self, other: "PauliString") -> "PauliString":
        return self.multiply(other)

    def adjoint(self) -> "PauliString":
        return PauliString(self.n_qubits, self.x_bits, self.z_bits, -self.phase_power % 4)

    def to_matrix(self) -> np.ndarray:
        """Dense 2^N x 2^N matrix (kron build; for tests and small paths)."""
        m = np.array([[self.phase]], dtype=complex)
        for j in range(self.n_qubits):
            m = np.kron(m, SINGLE_QUBIT[_BITS_TO_LETTER[self.qubit_bits(j)]])
        return m


def commutes(p: PauliString, q: PauliString) -> bool:
    return p.commutes(q)


def multiply(p: PauliString, q: PauliString) -> PauliString:
    return p.multiply(q)


# -- GF(2) reduction ------------------------------------------------------


def reduce_to_independent(paulis: list[PauliString]) -> list[PauliString]:
    """Gaussian elimination over GF(2) on symplectic rows, with sign tracking.

    Returns a canonical independent generating set for the group generated
    by `paulis` (identity elements dropped).  Elimination multiplies rows
    by pivot rows, so phases stay exact.
    """
    if not paulis:
        return []
    n = paulis[0].n_qubits
    rows = [p for p in paulis if (p.x_bits | p.z_bits) != 0]
    pivots: list[PauliString] = []
    for col in range(2 * n):  # columns: x bits then z bits, MSB first
        def bit(p: PauliString) -> int:
            if col < n:
                return (p.x_bits >> (n - 1 - col)) & 1
            return (p.z_bits >> (2 * n - 1 - col)) & 1

        pivot = next((r for r in rows if bit(r)), None)
        if pivot is None:
            continue
        rows.remove(pivot)
        rows = [r.multiply(pivot) if bit(r) else r for r in rows]
        kept = []
        for r in rows:
            if (r.x_bits | r.z_bits) == 0:
                # scalar row: +I is redundant, anything else means an inconsistent set
                if r.phase_power != 0:
                    raise ValueError("set generates -I (or an anti-Hermitian scalar)")
            else:
                kept.append(r)
        rows = kept
        pivots.append(pivot)
    return pivots


def symplectic_rank(paulis: list[PauliString]) -> int:
    if not paulis:
        return 0
    n = paulis[0].n_qubits
    vecs = [(p.x_bits << n) | p.z_bits for p in paulis]
    rank = 0
    for col in reversed(range(2 * n)):
        idx = next((i for i, v in enumerate(vecs) if (v >> col) & 1), None)
        if idx is None:
            continue
        pivot = vecs.pop(idx)
        vecs = [v ^ pivot if (v >> col) & 1 else v for v in vecs]
        rank += 1
    return rank


class StabilizerGroup:
    """An independent, commuting, sign-definite set of Pauli generators.

    Validates on construction: equal qubit counts, Hermitian +/-1 phases,
    pairwise commutation, GF(2) independence, and (exhaustively, for up to
    7 generators) that -I is not generated.
    """

    def __init__(self, generators: list[PauliString]):
        if not generators:
            raise ValueError("need at least one generator")
        n = generators[0].n_qubits
        if any(g.n_qubits != n for g in generators):
            raise ValueError("generators act on different qubit counts")
        if any(not g.is_hermitian for g in generators):
            raise ValueError("generators must have phase +1 or -1")
        for i, g in enumerate(generators):
            for h in generators[i + 1 :]:
                if not g.commutes(h):
                    raise ValueError(f"generators {g.label()} and {h.label()} anticommute")
        if symplectic_rank(list(generators)) != len(generators):
            raise ValueError("generators are not independent")
        self.n_qubits = n
        self.generators = tuple(generators)
        if len(generators) <= 7:
            for el in self.elements():
                if (el.x_bits | el.z_bits) == 0 and el.phase_power != 0:
                    raise ValueError("-I is generated")  # unreachable given independence

    def __len__(self) -> int:
        return len(self.generators)

    def elements(self) -> list[PauliString]:
        """All 2^k group elements (k = generator count; k <= 7 in practice)."""
        els = [PauliString.identity(self.n_qubits)]
        for g in self.generators:
            els += [e.multiply(g) for e in els]
        return els

    @classmethod
    def from_labels(cls, labels: list[str]) -> "StabilizerGroup":
        return cls([PauliString.from_label(s) for s in labels])

    def labels(self) -> list[str]:
        return [g.label() for g in self.generators]
