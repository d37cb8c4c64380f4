import math

import numpy as np
import pytest

from vpmetrology.linalg import assert_density_matrix
from vpmetrology.noise import (
    NoiseError,
    apply_channel,
    calibrate_strength,
    custom_noise,
    dephasing,
    depolarizing,
    dominant_eigenvalue,
    noise_from_config,
    noisy_state,
    signal_phases,
    signal_unitary,
)
from vpmetrology.pauli import StabilizerGroup, PauliString
from vpmetrology.probes import Probe, builtin_probe

from oracles import kraus_noisy_state, signal_unitary_dense


GHZ3 = Probe(
    name="ghz3",
    group=StabilizerGroup.from_labels(["+ZZI", "+IZZ", "+XXX"]),
    observable=PauliString.from_label("+YYY"),
    inversion_domain=(-math.pi / 6, math.pi / 6),
)


def test_presets():
    d = depolarizing(0.2)
    assert d.probs == pytest.approx((0.85, 0.05, 0.05, 0.05))
    z = dephasing(0.2)
    assert z.probs == pytest.approx((0.9, 0.0, 0.0, 0.1))
    for spec in (d, z):
        assert abs(sum(spec.probs) - 1) < 1e-12


def test_invalid_probabilities():
    with pytest.raises(NoiseError):
        custom_noise(0.5, 0.5, 0.5, -0.5)
    with pytest.raises(NoiseError):
        noise_from_config({"kind": "custom", "pI": 0.9, "px": 0.2, "py": 0.0, "pz": 0.0})


def test_custom_strong_noise_warns():
    with pytest.warns(UserWarning):
        custom_noise(0.4, 0.2, 0.2, 0.2)


def test_noise_from_config():
    spec = noise_from_config({"kind": "depolarizing", "delta": 0.05})
    assert spec.kind == "depolarizing"
    assert spec.delta == 0.05
    with pytest.raises(NoiseError):
        noise_from_config({"kind": "thermal", "delta": 0.1})


def test_signal_unitary_identity_at_zero():
    assert np.allclose(signal_unitary(3, 0.0), np.eye(8))


def test_signal_unitary_single_qubit():
    u = signal_unitary(1, math.pi)
    assert np.allclose(np.diag(u), [-1j, 1j])


def test_signal_unitary_all_ones_phase():
    phi = 0.37
    d = signal_phases(5, phi)
    assert abs(d[0b11111] - np.exp(1j * 5 * phi / 2)) < 1e-12
    assert abs(d[0] - np.exp(-1j * 5 * phi / 2)) < 1e-12


def test_signal_unitary_matches_dense_exponential():
    phi = 0.23
    assert np.abs(signal_unitary(3, phi) - signal_unitary_dense(3, phi)).max() < 1e-12


def test_channel_identity_at_zero_strength():
    rho = np.outer(GHZ3.state, GHZ3.state.conj())
    out = apply_channel(rho, depolarizing(0.0))
    assert np.array_equal(out, rho)


def test_full_dephasing_kills_plus_state():
    plus = np.ones(2) / np.sqrt(2)
    rho = np.outer(plus, plus)
    spec = custom_noise(0.5, 0.0, 0.0, 0.5)
    assert np.allclose(apply_channel(rho, spec), np.eye(2) / 2, atol=1e-14)


def test_depolarizing_fixed_point():
    rho = np.eye(8) / 8
    out = apply_channel(rho, depolarizing(0.3))
    assert np.allclose(out, rho, atol=1e-14)


def test_channel_trace_and_psd_preserved():
    rng = np.random.default_rng(7)
    a = rng.normal(size=(8, 8)) + 1j * rng.normal(size=(8, 8))
    rho = a @ a.conj().T
    rho /= np.trace(rho)
    out = apply_channel(rho, depolarizing(0.17))
    assert_density_matrix(out, "channel output")


def test_channel_cptp_choi():
    # Choi matrix of the single-qubit channel is PSD for random specs
    rng = np.random.default_rng(19)
    for _ in range(20):
        p = rng.dirichlet(np.ones(4))
        spec = custom_noise(*p) if p[0] >= 0.5 else depolarizing(rng.uniform(0, 0.9))
        choi = np.zeros((4, 4), dtype=complex)
        for i in range(2):
            for j in range(2):
                e = np.zeros((2, 2), dtype=complex)
                e[i, j] = 1.0
                choi[2 * i : 2 * i + 2, 2 * j : 2 * j + 2] = apply_channel(e, spec)
        w = np.linalg.eigvalsh((choi + choi.conj().T) / 2)
        assert w.min() > -1e-12
        assert abs(np.trace(choi) - 2) < 1e-10


def test_qubit_order_irrelevant():
    probe = GHZ3
    rho = np.outer(probe.state, probe.state.conj())
    spec = depolarizing(0.21)
    forward = apply_channel(rho, spec, qubits=[0, 1, 2])
    backward = apply_channel(rho, spec, qubits=[2, 1, 0])
    assert np.abs(forward - backward).max() < 1e-12


def test_noisy_state_pure_at_zero_delta():
    phi = 0.11
    rho = noisy_state(GHZ3, phi, depolarizing(0.0))
    psi = signal_phases(3, phi) * GHZ3.state
    assert np.abs(rho - np.outer(psi, psi.conj())).max() < 1e-12


def test_noisy_state_matches_kraus_expansion_oracle():
    # brute force over all 4^(2N) two-sided Kraus terms at N=3
    phi, delta = 0.1, 0.05
    spec = depolarizing(delta)
    got = noisy_state(GHZ3, phi, spec)
    ref = kraus_noisy_state(GHZ3.state, phi, spec.probs)
    assert np.abs(got - ref).max() < 1e-12
    assert_density_matrix(got, "noisy state")
    assert dominant_eigenvalue(got) < 1.0


def test_noisy_state_dephasing_matches_kraus_expansion_oracle():
    phi, delta = 0.07, 0.12
    spec = dephasing(delta)
    got = noisy_state(GHZ3, phi, spec)
    ref = kraus_noisy_state(GHZ3.state, phi, spec.probs)
    assert np.abs(got - ref).max() < 1e-12


def test_ghz5_dephasing_dominant_eigvec_is_signal_state():
    probe = builtin_probe("ghz5")
    phi = 0.0
    rho = noisy_state(probe, phi, dephasing(0.2))
    w, v = np.linalg.eigh(rho)
    top = v[:, -1]
    overlap = abs(np.vdot(top, probe.state))
    assert abs(overlap - 1) < 1e-10


@pytest.mark.parametrize("name", ["ghz5", "twin5", "steane7"])
def test_lambda_monotone_in_delta(name):
    probe = builtin_probe(name)
    deltas = np.linspace(0.0, 0.3, 20)
    lams = [dominant_eigenvalue(noisy_state(probe, 0.01, depolarizing(d))) for d in deltas]
    assert all(lams[i] >= lams[i + 1] - 1e-10 for i in range(len(lams) - 1))


@pytest.mark.parametrize("name", ["ghz5", "twin5", "steane7"])
def test_lambda_phi_independent(name):
    probe = builtin_probe(name)
    spec = depolarizing(0.08)
    lams = [dominant_eigenvalue(noisy_state(probe, phi, spec)) for phi in (0.0, 0.05, 0.2)]
    assert max(lams) - min(lams) < 1e-10


def test_one_minus_lambda_linear_in_delta():
    probe = builtin_probe("ghz5")
    deltas = np.logspace(-4, -2, 8)
    vals = [1 - dominant_eigenvalue(noisy_state(probe, 0.01, depolarizing(d))) for d in deltas]
    slope = np.polyfit(np.log(deltas), np.log(vals), 1)[0]
    assert abs(slope - 1.0) < 0.05


def test_calibrate_trivial_target():
    assert calibrate_strength(builtin_probe("ghz5"), "depolarizing", 1.0) == 0.0


@pytest.mark.parametrize("name", ["ghz5", "steane7"])
def test_calibrate_self_consistent(name):
    probe = builtin_probe(name)
    delta = calibrate_strength(probe, "depolarizing", 0.7)
    lam = dominant_eigenvalue(noisy_state(probe, 0.01, depolarizing(delta)))
    assert abs(lam - 0.7) < 1e-8
    assert 0 < delta < 0.5


def test_calibrate_target_outside_precondition():
    with pytest.raises(NoiseError):
        calibrate_strength(builtin_probe("ghz5"), "depolarizing", 0.4)
    with pytest.raises(NoiseError):
        calibrate_strength(builtin_probe("ghz5"), "depolarizing", 1.2)
