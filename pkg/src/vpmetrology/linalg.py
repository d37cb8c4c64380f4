"""Dense complex-matrix kernels for few-qubit simulation.

Matrices are plain complex128 numpy arrays in row-major layout; Hilbert
dimensions are powers of two up to 2**10.  Pauli application bypasses
matmul entirely: an N-qubit Pauli is a signed index permutation, so
left/right/conjugate application costs O(dim^2) gathers.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .pauli import PauliString

MAX_DIM = 1 << 10

HERMITICITY_TOL = 1e-10
TRACE_TOL = 1e-10
PSD_TOL = 1e-9
EIG_INPUT_TOL = 1e-8


class LinalgError(ValueError):
    pass


def as_matrix(m: np.ndarray) -> np.ndarray:
    m = np.asarray(m, dtype=complex)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise LinalgError(f"expected a square matrix, got shape {m.shape}")
    d = m.shape[0]
    if d < 1 or d > MAX_DIM or (d & (d - 1)) != 0:
        raise LinalgError(f"dimension {d} is not a power of 2 up to {MAX_DIM}")
    if not np.all(np.isfinite(m.view(float))):
        raise LinalgError("matrix contains non-finite entries")
    return m


def matmul(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    a, b = as_matrix(a), as_matrix(b)
    if a.shape != b.shape:
        raise LinalgError(f"dimension mismatch: {a.shape} vs {b.shape}")
    return a @ b


def dagger(m: np.ndarray) -> np.ndarray:
    return m.conj().T


def assert_density_matrix(rho: np.ndarray, name: str = "rho", check_psd: bool = True) -> None:
    """Hermitian within 1e-10, trace 1 within 1e-10, min eigenvalue >= -1e-9."""
    rho = as_matrix(rho)
    herm = np.abs(rho - rho.conj().T).max()
    if herm > HERMITICITY_TOL:
        raise LinalgError(f"{name}: not Hermitian (max dev {herm:.2e})")
    tr = np.trace(rho)
    if abs(tr - 1.0) > TRACE_TOL:
        raise LinalgError(f"{name}: trace {tr} differs from 1")
    if check_psd:
        lo = float(np.linalg.eigvalsh(rho)[0])
        if lo < -PSD_TOL:
            raise LinalgError(f"{name}: negative eigenvalue {lo:.2e}")


# -- eigendecomposition ----------------------------------------------------


@dataclass(frozen=True)
class EigenDecomposition:
    """Spectrum sorted descending; eigenvectors as orthonormal columns."""

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray


def _fix_vector_phase(v: np.ndarray) -> np.ndarray:
    """Rotate global phase so the first non-negligible component is real positive."""
    idx = np.flatnonzero(np.abs(v) > 1e-12 * max(np.abs(v).max(), 1e-300))
    if idx.size == 0:
        return v
    pivot = v[idx[0]]
    return v * (abs(pivot) / pivot)


def hermitian_eig(h: np.ndarray) -> EigenDecomposition:
    """Full spectrum of a Hermitian matrix, eigenvalues descending.

    Eigenvector phases are fixed (first nonzero component real positive);
    eigenvalue ties within 1e-12 are ordered by lexicographic comparison of
    the phase-normalized vectors so repeated runs agree.
    """
    h = as_matrix(h)
    dev = np.abs(h - h.conj().T).max()
    if dev > EIG_INPUT_TOL:
        raise LinalgError(f"matrix is not Hermitian (max dev {dev:.2e})")
    try:
        w, v = np.linalg.eigh(h)
    except np.linalg.LinAlgError as exc:
        residual = float(np.abs(h - h.conj().T).max())
        raise LinalgError(f"eigensolver did not converge (residual {residual:.2e})") from exc
    w = w[::-1].copy()
    v = v[:, ::-1].copy()
    for j in range(v.shape[1]):
        v[:, j] = _fix_vector_phase(v[:, j])
    # stable tie ordering inside degenerate clusters
    j = 0
    d = len(w)
    while j < d - 1:
        k = j + 1
        while k < d and abs(w[k] - w[j]) <= 1e-12:
            k += 1
        if k - j > 1:
            block = sorted(
                range(j, k),
                key=lambda c: tuple(np.round(np.ascontiguousarray(v[:, c]).view(float), 12)),
            )
            w[j:k] = w[block]
            v[:, j:k] = v[:, block]
        j = k
    return EigenDecomposition(eigenvalues=w, eigenvectors=v)


def matrix_power(rho: np.ndarray, n: int) -> np.ndarray:
    """rho^n for n in {1,2,3,4} by repeated products."""
    if n not in (1, 2, 3, 4):
        raise LinalgError(f"power n={n} outside supported range 1..4")
    rho = as_matrix(rho)
    out = rho
    for _ in range(n - 1):
        out = out @ rho
    return out


# -- fast Pauli application -------------------------------------------------


def pauli_coefficients(p: PauliString, dim: int) -> np.ndarray:
    """c[b] such that P|b> = c[b] |b xor x_bits>."""
    idx = np.arange(dim)
    parity = np.zeros(dim, dtype=np.int64)
    z = p.z_bits
    while z:
        low = z & -z
        parity ^= (idx & low) != 0
        z ^= low
    base = p.phase * (1j) ** ((p.x_bits & p.z_bits).bit_count())
    return base * np.where(parity, -1.0, 1.0)


def apply_pauli(p: PauliString, m: np.ndarray, side: str = "conjugate") -> np.ndarray:
    """Apply P to a matrix as a signed index permutation.

    side='left'      -> P @ M
    side='right'     -> M @ P
    side='conjugate' -> P @ M @ P^dagger
    """
    m = as_matrix(m)
    dim = m.shape[0]
    if dim != 1 << p.n_qubits:
        raise LinalgError(f"Pauli on {p.n_qubits} qubits vs matrix dim {dim}")
    perm = np.arange(dim) ^ p.x_bits
    c = pauli_coefficients(p, dim)
    s = c[perm]  # s[r] = c(r xor x): row r of P@M picks row (r xor x) of M
    if side == "left":
        return s[:, None] * m[perm, :]
    if side == "right":
        # (M P)[r, c] = M[r, c xor x] * c(c)
        return m[:, perm] * c[None, :]
    if side == "conjugate":
        return (s[:, None] * np.conj(s)[None, :]) * m[np.ix_(perm, perm)]
    raise LinalgError(f"unknown side {side!r}")


def apply_pauli_vec(p: PauliString, v: np.ndarray) -> np.ndarray:
    """P|v> on a state vector."""
    v = np.asarray(v, dtype=complex)
    dim = v.shape[0]
    if dim != 1 << p.n_qubits:
        raise LinalgError(f"Pauli on {p.n_qubits} qubits vs vector dim {dim}")
    perm = np.arange(dim) ^ p.x_bits
    c = pauli_coefficients(p, dim)
    return (c * v)[perm]


def pauli_trace_product(p: PauliString, rho: np.ndarray) -> complex:
    """Tr[P rho] via an O(dim) gather along the permutation diagonal."""
    rho = as_matrix(rho)
    dim = rho.shape[0]
    if dim != 1 << p.n_qubits:
        raise LinalgError(f"Pauli on {p.n_qubits} qubits vs matrix dim {dim}")
    idx = np.arange(dim)
    c = pauli_coefficients(p, dim)
    # P[b xor x, b] = c[b]  =>  Tr[P rho] = sum_b c[b] rho[b, b xor x]
    return complex(np.sum(c * rho[idx, idx ^ p.x_bits]))


def partial_trace_last(rho: np.ndarray, n_keep_dim: int, n_drop_dim: int) -> np.ndarray:
    """Trace out the trailing subsystem of dimension n_drop_dim."""
    rho = as_matrix(rho)
    if rho.shape[0] != n_keep_dim * n_drop_dim:
        raise LinalgError("dimension factorization mismatch")
    r = rho.reshape(n_keep_dim, n_drop_dim, n_keep_dim, n_drop_dim)
    return np.einsum("iaja->ij", r)
