"""Independent brute-force oracles used to pin expected values.

Everything here is deliberately slow and written against the definitions,
not against the library code paths it checks.
"""

from __future__ import annotations

import itertools

import numpy as np

PAULI_1Q = {
    "I": np.eye(2, dtype=complex),
    "X": np.array([[0, 1], [1, 0]], dtype=complex),
    "Y": np.array([[0, -1j], [1j, 0]], dtype=complex),
    "Z": np.array([[1, 0], [0, -1]], dtype=complex),
}


def schoolbook_matmul(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """O(n^3) triple loop with column-major outer index ordering."""
    n = a.shape[0]
    out = np.zeros((n, n), dtype=complex)
    for j in range(n):          # independent index ordering: columns first
        for k in range(n):
            for i in range(n):
                out[i, j] += a[i, k] * b[k, j]
    return out


def label_to_matrix(label: str) -> np.ndarray:
    """Dense matrix from a (sign-prefixed) Pauli label."""
    sign = 1.0
    if label[0] in "+-":
        sign = 1.0 if label[0] == "+" else -1.0
        label = label[1:]
    m = np.array([[sign]], dtype=complex)
    for c in label:
        m = np.kron(m, PAULI_1Q[c])
    return m


def all_labels(n_qubits: int):
    for letters in itertools.product("IXYZ", repeat=n_qubits):
        yield "".join(letters)


def signal_unitary_dense(n_qubits: int, phi: float) -> np.ndarray:
    """exp(-i phi/2 sum_j Z_j) built from the dense Hamiltonian."""
    h = np.zeros((2**n_qubits, 2**n_qubits), dtype=complex)
    for j in range(n_qubits):
        label = "I" * j + "Z" + "I" * (n_qubits - 1 - j)
        h += label_to_matrix(label)
    w, v = np.linalg.eigh(h)
    return (v * np.exp(-1j * phi / 2 * w)) @ v.conj().T


def kraus_noisy_state(psi0: np.ndarray, phi: float, probs: tuple[float, float, float, float]) -> np.ndarray:
    """Full 4^(2N)-term two-sided Kraus expansion of the noisy signal state.

    probs = (pI, px, py, pz), identical per qubit, applied before and after
    the signal unitary.
    """
    n = int(np.log2(len(psi0)))
    u = signal_unitary_dense(n, phi)
    rho0 = np.outer(psi0, psi0.conj())
    weights = dict(zip("IXYZ", probs))
    rho = np.zeros_like(rho0)
    for pre in all_labels(n):
        wp = np.prod([weights[c] for c in pre])
        kp = label_to_matrix(pre)
        inner = u @ (kp @ rho0 @ kp.conj().T) @ u.conj().T
        for post in all_labels(n):
            wq = np.prod([weights[c] for c in post])
            kq = label_to_matrix(post)
            rho = rho + wp * wq * (kq @ inner @ kq.conj().T)
    return rho


def projector_state(generator_labels: list[str]) -> np.ndarray:
    """Stabilizer state by explicit dense projector product, phase-fixed."""
    n = len(generator_labels[0].lstrip("+-"))
    dim = 2**n
    proj = np.eye(dim, dtype=complex)
    for lab in generator_labels:
        proj = proj @ (np.eye(dim) + label_to_matrix(lab)) / 2
    for ref in range(dim):
        v = proj[:, ref]
        if np.linalg.norm(v) > 1e-9:
            v = v / np.linalg.norm(v)
            pivot = v[np.flatnonzero(np.abs(v) > 1e-12)[0]]
            return v * (abs(pivot) / pivot)
    raise ValueError("projector annihilates every basis state")


def spectral_mitigated_expectation(rho: np.ndarray, a: np.ndarray, n: int) -> float:
    """Tr[A rho^n]/Tr[rho^n] through the eigenbasis: sum l_i^n <v|A|v> / sum l_i^n."""
    w, v = np.linalg.eigh(rho)
    num = 0.0
    den = 0.0
    for i in range(len(w)):
        vi = v[:, i]
        num += w[i] ** n * np.real(vi.conj() @ a @ vi)
        den += w[i] ** n
    return num / den


def five_point_derivative(f, x: float, h: float) -> float:
    return (-f(x + 2 * h) + 8 * f(x + h) - 8 * f(x - h) + f(x - 2 * h)) / (12 * h)
