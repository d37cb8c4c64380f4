"""Signal unitary, per-qubit Pauli channels and noise-strength calibration.

The signal imprints phi on every qubit through exp(-i phi/2 sum_i Z^(i)).
Noise is an independent, identically distributed per-qubit Pauli channel

    E(rho) = pI rho + px X rho X + py Y rho Y + pz Z rho Z

applied qubit by qubit on both sides of the signal.  Presets: local
depolarizing px=py=pz=delta/4 and local dephasing px=py=0, pz=delta/2.
"""

from __future__ import annotations

import threading
import warnings
from dataclasses import dataclass

import numpy as np

from .linalg import as_matrix
from .probes import Probe

PROB_SUM_TOL = 1e-12

_CAL_TOL = 1e-8
_CAL_MAX_DELTA = 0.5
_CAL_ITERS = 60


class NoiseError(ValueError):
    pass


@dataclass(frozen=True)
class NoiseSpec:
    """Per-qubit Pauli probabilities (p_I, p_x, p_y, p_z) at strength delta."""

    kind: str
    delta: float
    probs: tuple[float, float, float, float]

    def __post_init__(self):
        if any(p < 0 for p in self.probs):
            raise NoiseError(f"negative probability in {self.probs}")
        if abs(sum(self.probs) - 1.0) > PROB_SUM_TOL:
            raise NoiseError(f"probabilities sum to {sum(self.probs)}, not 1")
        if not 0 <= self.delta < 1:
            raise NoiseError(f"strength delta={self.delta} outside [0, 1)")

    @property
    def p_identity(self) -> float:
        return self.probs[0]


def depolarizing(delta: float) -> NoiseSpec:
    p = delta / 4
    return NoiseSpec("depolarizing", delta, (1 - 3 * p, p, p, p))


def dephasing(delta: float) -> NoiseSpec:
    return NoiseSpec("dephasing", delta, (1 - delta / 2, 0.0, 0.0, delta / 2))


def custom_noise(p_i: float, p_x: float, p_y: float, p_z: float) -> NoiseSpec:
    """Arbitrary per-qubit Pauli probabilities; delta = 1 - p_I.

    The closed-form bias results assume the mild-noise regime; strong noise
    is allowed but flagged with a warning.
    """
    spec = NoiseSpec("custom", 1 - p_i, (p_i, p_x, p_y, p_z))
    if p_i < 0.5:
        warnings.warn(
            f"custom noise with p_I={p_i} is outside the mild-noise regime; "
            "asymptotic bias orders may not apply",
            stacklevel=2,
        )
    return spec


_NOISE_BUILDERS = {"depolarizing": depolarizing, "dephasing": dephasing}


def noise_from_config(doc: dict) -> NoiseSpec:
    """{"kind":"depolarizing","delta":0.05} or {"kind":"custom","pI":..,...}."""
    kind = doc.get("kind")
    if kind in _NOISE_BUILDERS:
        return _NOISE_BUILDERS[kind](float(doc["delta"]))
    if kind == "custom":
        return custom_noise(
            float(doc["pI"]), float(doc["px"]), float(doc["py"]), float(doc["pz"])
        )
    raise NoiseError(f"unknown noise kind {kind!r}")


def noise_of_kind(kind: str, delta: float) -> NoiseSpec:
    if kind not in _NOISE_BUILDERS:
        raise NoiseError(f"unknown noise kind {kind!r}")
    return _NOISE_BUILDERS[kind](delta)


# -- signal -------------------------------------------------------------------


_H_DIAG: dict[int, np.ndarray] = {}


def hamiltonian_diagonal(n_qubits: int) -> np.ndarray:
    """Eigenvalues n - 2 popcount(b) of sum_i Z^(i) over the basis."""
    if n_qubits not in _H_DIAG:
        _H_DIAG[n_qubits] = n_qubits - 2 * np.array(
            [int(b).bit_count() for b in range(1 << n_qubits)]
        )
    return _H_DIAG[n_qubits]


def signal_phases(n_qubits: int, phi: float) -> np.ndarray:
    """Diagonal of U(phi): exp(-i phi/2 (n - 2 popcount(b))) per basis state b."""
    return np.exp(-1j * phi / 2 * hamiltonian_diagonal(n_qubits))


def signal_unitary(n_qubits: int, phi: float) -> np.ndarray:
    return np.diag(signal_phases(n_qubits, phi))


def evolve_vector(v: np.ndarray, phi: float) -> np.ndarray:
    n = int(np.log2(len(v)))
    return signal_phases(n, phi) * v


def evolve_density(rho: np.ndarray, phi: float) -> np.ndarray:
    n = int(np.log2(rho.shape[0]))
    d = signal_phases(n, phi)
    return d[:, None] * rho * d.conj()[None, :]


# -- channels -----------------------------------------------------------------


def apply_channel(rho: np.ndarray, noise: NoiseSpec, qubits: list[int] | None = None) -> np.ndarray:
    """Sequential per-qubit application of the 4-term Pauli channel.

    `qubits` restricts the channel to a subset (used for data-only noise on
    encoded registers); default is all qubits.

    Per qubit the four conjugations collapse to two elementwise passes:
    with s(a,b) = (-1)^(a+b) on the qubit's bra/ket bits and F the bit-flip
    view, E(rho) = (pI + pz s) rho + (px + py s) F(rho).
    """
    rho = as_matrix(rho)
    dim = rho.shape[0]
    n = int(np.log2(dim))
    p_i, p_x, p_y, p_z = noise.probs
    targets = range(n) if qubits is None else qubits
    sgn = np.array([1.0, -1.0])
    for q in targets:
        a = 1 << q
        b = dim >> (q + 1)
        r = rho.reshape(a, 2, b, a, 2, b)
        s = sgn[None, :, None, None, None, None] * sgn[None, None, None, None, :, None]
        flipped = r[:, ::-1, :, :, ::-1, :]
        out = (p_i + p_z * s) * r + (p_x + p_y * s) * flipped
        rho = np.ascontiguousarray(out.reshape(dim, dim))
    return rho


def noisy_state(probe: Probe, phi: float, noise: NoiseSpec) -> np.ndarray:
    """E o U_phi o E applied to the probe state (noise on both signal sides)."""
    rho = np.outer(probe.state, probe.state.conj())
    rho = apply_channel(rho, noise)
    rho = evolve_density(rho, phi)
    return apply_channel(rho, noise)


# -- calibration --------------------------------------------------------------

_cal_lock = threading.Lock()
_cal_cache: dict[tuple, float] = {}


def dominant_eigenvalue(rho: np.ndarray) -> float:
    return float(np.linalg.eigvalsh(rho)[-1])


def calibrate_strength(
    probe: Probe,
    noise_kind: str,
    target_lambda: float,
    phi_ref: float = 0.01,
) -> float:
    """Bisect delta in [0, 0.5] until lambda_max(rho_e(phi_ref, delta)) hits target.

    lambda is monotone decreasing in delta on this bracket (checked at the
    endpoints); for the built-in probes it is also phi-independent, so the
    phi_ref default is inconsequential there.
    """
    if not 0.5 < target_lambda <= 1.0:
        raise NoiseError(f"target eigenvalue {target_lambda} outside (0.5, 1]")
    key = (probe.name, noise_kind, round(target_lambda, 12), round(phi_ref, 12))
    with _cal_lock:
        if key in _cal_cache:
            return _cal_cache[key]

    def lam(delta: float) -> float:
        return dominant_eigenvalue(noisy_state(probe, phi_ref, noise_of_kind(noise_kind, delta)))

    if target_lambda == 1.0:
        delta = 0.0
    else:
        lo, hi = 0.0, _CAL_MAX_DELTA
        lam_lo, lam_hi = lam(lo), lam(hi)
        if not (lam_hi < target_lambda < lam_lo + _CAL_TOL):
            raise NoiseError(
                f"target {target_lambda} unreachable in delta bracket "
                f"[{lo}, {hi}]: lambda range [{lam_hi:.4f}, {lam_lo:.4f}]"
            )
        for _ in range(_CAL_ITERS):
            mid = (lo + hi) / 2
            if lam(mid) > target_lambda:
                lo = mid
            else:
                hi = mid
        delta = (lo + hi) / 2
        achieved = lam(delta)
        if abs(achieved - target_lambda) > _CAL_TOL:
            raise NoiseError(
                f"calibration stalled: |lambda({delta}) - {target_lambda}| = "
                f"{abs(achieved - target_lambda):.2e}"
            )
    with _cal_lock:
        _cal_cache[key] = delta
    return delta
