"""Closed-form estimation quantities.

The estimator is the maximum-likelihood inversion phi_est = mu^{-1}(Abar)
of the *ideal* response curve mu(phi) = <psi(phi)|A|psi(phi)>, applied to
outcome means produced by three pipelines:

    noisy  A measured on the uncorrected noisy state
    qec    A measured after syndrome recovery and decoding
    vp     the purified ratio Tr[A rho^n] / Tr[rho^n]

Biases are computed exactly as mu^{-1}(mu_scheme) - mu^{-1}(mu); no series
truncation anywhere.  Statistical errors follow the delta method around
the scheme mean, with the variance of the purified ratio carrying the
2n/M copies-accounting prefactor.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.interpolate import PchipInterpolator

from . import qec as _qec
from .linalg import (
    apply_pauli_vec,
    as_matrix,
    hermitian_eig,
    matrix_power,
    pauli_trace_product,
)
from .noise import NoiseSpec, dominant_eigenvalue, evolve_vector, noisy_state
from .pauli import PauliString
from .probes import Probe

IMAG_TOL = 1e-10
DERIV_FLOOR = 1e-12
BIAS_FLOOR = 1e-13


class EstimationError(ValueError):
    pass


class DegenerateEigenvalueError(EstimationError):
    """Dominant eigenvalue within 1e-12 of the next one; dominance undefined."""


# -- schemes -------------------------------------------------------------------


@dataclass(frozen=True)
class Scheme:
    kind: str  # noisy | qec | vp
    n: int = 1  # purification order; 1 for noisy/qec

    def __post_init__(self):
        if self.kind not in ("noisy", "qec", "vp"):
            raise EstimationError(f"unknown scheme kind {self.kind!r}")
        if self.kind == "vp" and self.n not in (2, 3):
            raise EstimationError(f"vp order must be 2 or 3, got {self.n}")
        if self.kind != "vp" and self.n != 1:
            raise EstimationError(f"{self.kind} scheme has no purification order")

    @classmethod
    def parse(cls, label: str) -> "Scheme":
        if label in ("noisy", "error"):
            return cls("noisy")
        if label == "qec":
            return cls("qec")
        if label.startswith("vp") and label[2:].isdigit():
            return cls("vp", int(label[2:]))
        raise EstimationError(f"cannot parse scheme {label!r}")

    @property
    def label(self) -> str:
        return f"vp{self.n}" if self.kind == "vp" else self.kind


NOISY = Scheme("noisy")
QEC = Scheme("qec")
VP2 = Scheme("vp", 2)
VP3 = Scheme("vp", 3)


# -- expectations ---------------------------------------------------------------


def expectation(rho: np.ndarray, a: PauliString) -> float:
    """Tr[A rho] for a Hermitian Pauli observable."""
    if not a.is_hermitian:
        raise EstimationError(f"observable {a.label()} is not Hermitian")
    val = pauli_trace_product(a, as_matrix(rho))
    if abs(val.imag) > IMAG_TOL:
        raise EstimationError(f"expectation has imaginary residue {val.imag:.2e}")
    return float(val.real)


def expectation_vec(psi: np.ndarray, a: PauliString) -> float:
    if not a.is_hermitian:
        raise EstimationError(f"observable {a.label()} is not Hermitian")
    val = np.vdot(psi, apply_pauli_vec(a, psi))
    if abs(val.imag) > IMAG_TOL:
        raise EstimationError(f"expectation has imaginary residue {val.imag:.2e}")
    return float(val.real)


def ideal_mu(probe: Probe, phi: float) -> float:
    """mu(phi) on the noise-free signal state."""
    return expectation_vec(evolve_vector(probe.state, phi), probe.observable)


def mitigated_expectation(rho: np.ndarray, a: PauliString, n: int) -> float:
    """Tr[A rho^n] / Tr[rho^n]."""
    if n not in (1, 2, 3):
        raise EstimationError(f"purification order n={n} outside 1..3")
    tA, tD = purified_traces(rho, a, n)
    return tA / tD


def purified_traces(rho: np.ndarray, a: PauliString, n: int) -> tuple[float, float]:
    """(Tr[A rho^n], Tr[rho^n]) with contract checks."""
    rho_n = matrix_power(rho, n)
    tD = np.trace(rho_n)
    if abs(tD.imag) > IMAG_TOL:
        raise EstimationError(f"Tr[rho^n] has imaginary residue {tD.imag:.2e}")
    tD = float(tD.real)
    if tD < 1e-15:
        raise EstimationError(f"Tr[rho^n] = {tD} too small to normalize")
    tA = pauli_trace_product(a, rho_n)
    if abs(tA.imag) > IMAG_TOL:
        raise EstimationError(f"Tr[A rho^n] has imaginary residue {tA.imag:.2e}")
    tA = float(tA.real)
    if abs(tA) > tD * (1 + 1e-9) + 1e-12:
        raise EstimationError(f"|Tr[A rho^n]| = {abs(tA)} exceeds Tr[rho^n] = {tD}")
    return tA, tD


def dominant_eigpair(rho: np.ndarray) -> tuple[float, np.ndarray]:
    """Largest eigenvalue and its (phase-fixed) eigenvector."""
    dec = hermitian_eig(rho)
    w = dec.eigenvalues
    if len(w) > 1 and w[0] - w[1] <= 1e-12:
        raise DegenerateEigenvalueError(
            f"top eigenvalues {w[0]} and {w[1]} are degenerate within 1e-12"
        )
    return float(w[0]), dec.eigenvectors[:, 0]


# -- response curve -------------------------------------------------------------


class ResponseCurve:
    """mu(phi) on a uniform grid over the probe's inversion domain.

    Carries centered finite-difference derivative values at the grid nodes
    and shape-preserving (monotone cubic) interpolants for mu, its inverse
    and the derivative.  Out-of-range means are clamped to the branch
    endpoints before inversion: finite-sample means can legitimately fall
    outside the range of mu, and the MLE on a bounded domain sits at the
    boundary there.
    """

    def __init__(self, probe: Probe, grid_size: int = 4001):
        if grid_size < 101:
            raise EstimationError("grid_size must be at least 101")
        lo, hi = probe.inversion_domain
        phis = np.linspace(lo, hi, grid_size)
        mus = np.array([ideal_mu(probe, p) for p in phis])
        diffs = np.diff(mus)
        if np.all(diffs > 0):
            increasing = True
        elif np.all(diffs < 0):
            increasing = False
        else:
            raise EstimationError(
                f"mu is not strictly monotone on the domain of {probe.name}"
            )
        h = phis[1] - phis[0]
        dmus = np.gradient(mus, h, edge_order=2)  # centered interior
        self.probe = probe
        self.phis = phis
        self.mus = mus
        self.dmus = dmus
        self.increasing = increasing
        self._mu = PchipInterpolator(phis, mus)
        self._dmu = PchipInterpolator(phis, dmus)
        if increasing:
            self._inv = PchipInterpolator(mus, phis)
        else:
            self._inv = PchipInterpolator(mus[::-1], phis[::-1])
        self.mu_min = float(mus.min())
        self.mu_max = float(mus.max())

    def mu(self, phi: float) -> float:
        return float(self._mu(phi))

    def dmu(self, phi: float) -> float:
        return float(self._dmu(phi))

    def invert(self, abar: float) -> float:
        clamped = min(max(abar, self.mu_min), self.mu_max)
        return float(self._inv(clamped))

    def contains(self, phi: float) -> bool:
        lo, hi = self.probe.inversion_domain
        return lo - 1e-12 <= phi <= hi + 1e-12


def build_response_curve(probe: Probe, grid_size: int = 4001) -> ResponseCurve:
    return ResponseCurve(probe, grid_size)


def invert_mu(curve: ResponseCurve, abar: float) -> float:
    return curve.invert(abar)


# -- scheme evaluation -----------------------------------------------------------


@dataclass(frozen=True)
class SchemeEvaluation:
    """Exact mean of the scheme's outcome estimator at one (phi, noise) point."""

    scheme: Scheme
    mu: float
    trace_num: float | None = None  # Tr[A rho^n], vp only
    trace_den: float | None = None  # Tr[rho^n], vp only


def evaluate_scheme(
    probe: Probe, phi: float, noise: NoiseSpec, scheme: Scheme
) -> SchemeEvaluation:
    if scheme.kind == "noisy":
        rho = noisy_state(probe, phi, noise)
        return SchemeEvaluation(scheme, expectation(rho, probe.observable))
    if scheme.kind == "vp":
        rho = noisy_state(probe, phi, noise)
        tA, tD = purified_traces(rho, probe.observable, scheme.n)
        return SchemeEvaluation(scheme, tA / tD, trace_num=tA, trace_den=tD)
    if scheme.kind == "qec":
        return SchemeEvaluation(scheme, _qec.qec_expectation(probe, phi, noise))
    raise EstimationError(f"unknown scheme {scheme}")


# -- bias and statistical error ---------------------------------------------------


@dataclass(frozen=True)
class BiasReport:
    phi: float
    delta: float
    scheme: Scheme
    mu_ideal: float
    mu_scheme: float
    bias: float
    stat_error_per_m: float  # (radians^2) * M; divide by the sample budget
    lam: float  # dominant eigenvalue of the bare noisy state


def theoretical_bias(
    curve: ResponseCurve,
    phi: float,
    noise: NoiseSpec,
    scheme: Scheme,
    evaluation: SchemeEvaluation | None = None,
    lam: float | None = None,
) -> BiasReport:
    """Exact large-sample bias mu^{-1}(mu_scheme) - mu^{-1}(mu(phi)).

    Both terms go through the same inverse interpolant, so its (tiny)
    round-trip error cancels and sub-1e-12 biases survive for the
    scaling-exponent fits.
    """
    probe = curve.probe
    if not curve.contains(phi):
        raise EstimationError(f"phi={phi} outside inversion domain of {probe.name}")
    if evaluation is None:
        evaluation = evaluate_scheme(probe, phi, noise, scheme)
    mu0 = ideal_mu(probe, phi)
    bias = curve.invert(evaluation.mu) - curve.invert(mu0)
    if lam is None:
        lam = dominant_eigenvalue(noisy_state(probe, phi, noise))
    if not np.isfinite(bias) or abs(evaluation.mu) > 1 + 1e-9:
        raise EstimationError(f"invalid scheme mean {evaluation.mu}")
    return BiasReport(
        phi=phi,
        delta=noise.delta,
        scheme=scheme,
        mu_ideal=mu0,
        mu_scheme=evaluation.mu,
        bias=bias,
        stat_error_per_m=theoretical_stat_error(
            curve, phi, noise, scheme, m_samples=1, evaluation=evaluation
        ),
        lam=lam,
    )


def theoretical_stat_error(
    curve: ResponseCurve,
    phi: float,
    noise: NoiseSpec,
    scheme: Scheme,
    m_samples: int,
    evaluation: SchemeEvaluation | None = None,
    accounting: str = "copies",
) -> float:
    """Variance of phi_est in the large-sample limit.

    noisy/qec:  (1 / mu'(phi_e))^2 (1 - mu_scheme^2) / M
    vp:         (1 / mu'(phi_mit))^2 * sigma_mit^2 with the ratio-estimator
                variance carrying a 2n/M prefactor under copies accounting
                (1/M under shots accounting).
    """
    if m_samples < 1:
        raise EstimationError("sample budget must be at least 1")
    probe = curve.probe
    if evaluation is None:
        evaluation = evaluate_scheme(probe, phi, noise, scheme)
    phi_eval = curve.invert(evaluation.mu)
    slope = curve.dmu(phi_eval)
    if abs(slope) < DERIV_FLOOR:
        raise EstimationError(
            f"response derivative {slope:.2e} at phi={phi_eval} is below {DERIV_FLOOR}; "
            "parameter not identifiable here"
        )
    if scheme.kind in ("noisy", "qec"):
        return (1 - evaluation.mu**2) / (slope**2 * m_samples)
    tA, tD = evaluation.trace_num, evaluation.trace_den
    bracket = (1 - tA**2) / tD**2 + tA**2 * (1 - tD**2) / tD**4
    if accounting == "copies":
        sigma2 = 2 * scheme.n / m_samples * bracket
    elif accounting == "shots":
        sigma2 = bracket / m_samples
    else:
        raise EstimationError(f"unknown accounting {accounting!r}")
    return sigma2 / slope**2


# -- scaling fits -------------------------------------------------------------------


@dataclass(frozen=True)
class ScalingFit:
    deltas: tuple[float, ...]
    values: tuple[float, ...]
    slope: float
    intercept: float
    r_squared: float


def scaling_exponent(points: list[tuple[float, float]]) -> ScalingFit:
    """Least-squares line through (log delta, log |bias|).

    Points with |bias| <= 1e-13 are dropped (double-precision floor); at
    least five must remain.
    """
    if len(points) < 6:
        raise EstimationError(f"need at least 6 points, got {len(points)}")
    kept = [(d, abs(v)) for d, v in points if abs(v) > BIAS_FLOOR]
    if len(kept) < 5:
        raise EstimationError(f"only {len(kept)} usable points after floor at {BIAS_FLOOR}")
    x = np.log(np.array([d for d, _ in kept]))
    y = np.log(np.array([v for _, v in kept]))
    slope, intercept = np.polyfit(x, y, 1)
    resid = y - (slope * x + intercept)
    ss_res = float(np.sum(resid**2))
    ss_tot = float(np.sum((y - y.mean()) ** 2))
    r2 = 1.0 if ss_tot == 0 else 1.0 - ss_res / ss_tot
    return ScalingFit(
        deltas=tuple(d for d, _ in kept),
        values=tuple(v for _, v in kept),
        slope=float(slope),
        intercept=float(intercept),
        r_squared=r2,
    )


def bias_scaling_points(
    curve: ResponseCurve,
    noise_builder,
    scheme: Scheme,
    phi: float,
    deltas,
) -> list[tuple[float, float]]:
    """[(delta, |bias|)] along a strength grid, for scaling-exponent fits."""
    out = []
    for d in deltas:
        rep = theoretical_bias(curve, phi, noise_builder(d), scheme)
        out.append((float(d), abs(rep.bias)))
    return out
