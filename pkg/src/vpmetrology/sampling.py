"""Monte Carlo shot sampling and experiment records.

Outcomes are +/-1 Bernoulli draws with P(+1) = (1 + mu)/2; the mean of M
draws is simulated through a binomial count (exact mode) or its normal
limit (gaussian mode, the default above 1e7 shots).  Purified-ratio means
use two independent draws, one for each trace estimator, with the copies
accounting giving each floor(M / 2n) shots so that 2n copies are consumed
per shot pair.

Determinism: every record draws from a fresh substream seeded by
(seed, record_index), so sweep results do not depend on worker count or
execution order.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .estimation import (
    ResponseCurve,
    Scheme,
    SchemeEvaluation,
    build_response_curve,
    evaluate_scheme,
    theoretical_bias,
    theoretical_stat_error,
)
from .noise import NoiseSpec, dominant_eigenvalue, noisy_state
from .pauli import PauliString
from .probes import Probe

GAUSSIAN_CUTOFF = 10**7


class SamplingError(ValueError):
    pass


@dataclass(frozen=True)
class ShotPlan:
    """Sample budget and accounting for one experiment cell."""

    total: int  # M
    scheme: Scheme
    accounting: str = "copies"  # copies | shots
    seed: int = 0
    mode: str = "auto"  # auto | exact | gaussian

    def __post_init__(self):
        if self.total < 1:
            raise SamplingError("sample budget must be at least 1")
        if self.accounting not in ("copies", "shots"):
            raise SamplingError(f"unknown accounting {self.accounting!r}")
        if self.mode not in ("auto", "exact", "gaussian"):
            raise SamplingError(f"unknown sampling mode {self.mode!r}")

    def shots_per_estimator(self) -> int:
        if self.scheme.kind == "vp" and self.accounting == "copies":
            shots = self.total // (2 * self.scheme.n)
            if shots < 1:
                raise SamplingError(
                    f"budget {self.total} too small for {self.scheme.label} under copies accounting"
                )
            return shots
        return self.total


def rng_for(seed: int, record_index: int = 0) -> np.random.Generator:
    """Substream generator for one record; splittable and order-independent."""
    return np.random.default_rng(np.random.SeedSequence(entropy=seed, spawn_key=(record_index,)))


def sample_mean(mu: float, shots: int, rng: np.random.Generator, mode: str = "auto") -> float:
    """Empirical mean of `shots` +/-1 outcomes with expectation mu."""
    if shots < 1:
        raise SamplingError("shots must be at least 1")
    if abs(mu) > 1 + 1e-12:
        raise SamplingError(f"|mu| = {abs(mu)} exceeds 1")
    mu = min(1.0, max(-1.0, mu))
    if mode == "auto":
        mode = "gaussian" if shots >= GAUSSIAN_CUTOFF else "exact"
    if mode == "exact":
        ones = rng.binomial(shots, (1 + mu) / 2)
        return (2 * ones - shots) / shots
    sigma = math.sqrt(max(0.0, 1 - mu * mu) / shots)
    return float(rng.normal(mu, sigma))


def vp_sample(
    rho: np.ndarray,
    a: PauliString,
    n: int,
    plan: ShotPlan,
    rng: np.random.Generator,
) -> float:
    """One purified-ratio estimate from two trace estimators.

    Numerator shots have mean Tr[A rho^n], denominator shots Tr[rho^n];
    the denominator mean is clamped below at 1e-9 before dividing.
    """
    from .estimation import purified_traces

    t_num, t_den = purified_traces(rho, a, n)
    return _vp_draw(t_num, t_den, plan.shots_per_estimator(), rng, plan.mode)


def _vp_draw(t_num: float, t_den: float, shots: int, rng: np.random.Generator, mode: str) -> float:
    num = sample_mean(t_num, shots, rng, mode)
    den = sample_mean(t_den, shots, rng, mode)
    return num / max(den, 1e-9)


@dataclass(frozen=True)
class ExperimentRecord:
    """One (probe, scheme, phi, delta, M, seed) cell with theory attached."""

    probe: str
    scheme: Scheme
    phi_true: float
    delta: float
    lam: float
    m_total: int
    accounting: str
    seed: int
    record_index: int
    repeats: int
    mu_ideal: float
    mu_scheme: float
    abar: float  # mean outcome average over repeats
    phi_est: float  # mean estimate over repeats
    bias_theory: float
    bias_emp: float
    stat_theory: float  # variance of phi_est at budget M
    stat_emp: float  # population variance over repeats
    mse: float

    def check_identity(self, rel: float = 1e-12) -> None:
        lhs = self.mse
        rhs = self.bias_emp**2 + self.stat_emp
        scale = max(abs(lhs), abs(rhs), 1e-30)
        if abs(lhs - rhs) > rel * scale + 1e-300:
            raise SamplingError(f"mse identity violated: {lhs} vs {rhs}")


def run_experiment(
    probe: Probe,
    scheme: Scheme,
    phi: float,
    noise: NoiseSpec,
    plan: ShotPlan,
    repeats: int = 1,
    curve: ResponseCurve | None = None,
    record_index: int = 0,
    evaluation: SchemeEvaluation | None = None,
    lam: float | None = None,
) -> ExperimentRecord:
    """Sample -> invert -> aggregate, with theoretical values attached."""
    if repeats < 1:
        raise SamplingError("repeats must be at least 1")
    if curve is None:
        curve = build_response_curve(probe)
    lo, hi = probe.inversion_domain
    if not (lo - 1e-12 <= phi <= hi + 1e-12):
        raise SamplingError(f"phi={phi} outside inversion domain of {probe.name}")
    if evaluation is None:
        evaluation = evaluate_scheme(probe, phi, noise, scheme)
    if lam is None:
        lam = dominant_eigenvalue(noisy_state(probe, phi, noise))
    report = theoretical_bias(curve, phi, noise, scheme, evaluation=evaluation, lam=lam)
    try:
        stat_theory = theoretical_stat_error(
            curve, phi, noise, scheme, plan.total, evaluation=evaluation,
            accounting=plan.accounting,
        )
    except Exception:
        stat_theory = math.inf  # non-identifiable point; sampling still defined
    rng = rng_for(plan.seed, record_index)
    shots = plan.shots_per_estimator()
    abars = []
    estimates = []
    for _ in range(repeats):
        if scheme.kind == "vp":
            abar = _vp_draw(
                evaluation.trace_num, evaluation.trace_den, shots, rng, plan.mode
            )
        else:
            abar = sample_mean(evaluation.mu, shots, rng, plan.mode)
        abars.append(abar)
        estimates.append(curve.invert(abar))
    mean_est = math.fsum(estimates) / repeats
    bias_emp = mean_est - phi
    stat_emp = math.fsum((x - mean_est) ** 2 for x in estimates) / repeats
    mse = math.fsum((x - phi) ** 2 for x in estimates) / repeats
    record = ExperimentRecord(
        probe=probe.name,
        scheme=scheme,
        phi_true=phi,
        delta=noise.delta,
        lam=lam,
        m_total=plan.total,
        accounting=plan.accounting,
        seed=plan.seed,
        record_index=record_index,
        repeats=repeats,
        mu_ideal=report.mu_ideal,
        mu_scheme=evaluation.mu,
        abar=math.fsum(abars) / repeats,
        phi_est=mean_est,
        bias_theory=report.bias,
        bias_emp=bias_emp,
        stat_theory=stat_theory,
        stat_emp=stat_emp,
        mse=mse,
    )
    record.check_identity()
    return record
