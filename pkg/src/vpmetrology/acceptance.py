"""Release acceptance criteria, runnable via `vpmetrology verify`.

Every criterion is a function returning a CriterionResult with the
pass/fail verdict, the elapsed time (checked against a budget) and a short
detail string.  tests/test_acceptance.py asserts each one individually.
"""

from __future__ import annotations

import math
import shutil
import subprocess
import sys
import tempfile
import time
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .estimation import (
    NOISY,
    QEC,
    VP2,
    VP3,
    bias_scaling_points,
    build_response_curve,
    dominant_eigpair,
    ideal_mu,
    scaling_exponent,
    theoretical_bias,
    theoretical_stat_error,
)
from .linalg import apply_pauli_vec
from .noise import calibrate_strength, dephasing, depolarizing, evolve_vector, noisy_state
from .pauli import PauliString
from .probes import BUILTIN_PROBE_NAMES, builtin_probe, variance_of_hamiltonian
from .qec import (
    build_code,
    build_decoder,
    check_c2_c3_tradeoff,
    encode_logical,
    first_order_qec_state,
    qec_expectation,
    qec_recovered_state,
    recover,
    tradeoff_report,
    z_erasing_demo_basis,
)
from .sampling import ShotPlan, rng_for, run_experiment

SQ8 = 1 / (2 * math.sqrt(2))

TWIN_REFERENCE = {
    0b00000: SQ8,
    0b00110: -SQ8,
    0b01001: 1j * SQ8,
    0b01111: 1j * SQ8,
    0b10000: -1j * SQ8,
    0b10110: -1j * SQ8,
    0b11001: -SQ8,
    0b11111: SQ8,
}


@dataclass(frozen=True)
class CriterionResult:
    name: str
    passed: bool
    primary: bool
    runtime_s: float
    detail: str


class _Checks:
    def __init__(self):
        self.failures: list[str] = []
        self.count = 0

    def expect(self, ok: bool, label: str):
        self.count += 1
        if not ok:
            self.failures.append(label)

    def result(self, name: str, started: float, budget_s: float, primary=True, note=""):
        elapsed = time.time() - started
        ok = not self.failures and elapsed < budget_s
        if self.failures:
            detail = f"{len(self.failures)}/{self.count} checks failed: " + "; ".join(
                self.failures[:4]
            )
        elif elapsed >= budget_s:
            detail = f"over budget: {elapsed:.1f}s >= {budget_s}s"
        else:
            detail = f"{self.count} checks in {elapsed:.1f}s" + (f"; {note}" if note else "")
        return CriterionResult(name, ok, primary, elapsed, detail)


def criterion_ghz_response() -> CriterionResult:
    """mu(phi) computed densely equals sin(5 phi) on 101 grid points."""
    t0 = time.time()
    c = _Checks()
    probe = builtin_probe("ghz5")
    lo, hi = probe.inversion_domain
    for phi in np.linspace(lo, hi, 101):
        c.expect(
            abs(ideal_mu(probe, phi) - math.sin(5 * phi)) < 1e-10,
            f"mu({phi:.4f}) != sin(5 phi)",
        )
    return c.result("ghz-response", t0, budget_s=1.0)


def criterion_twin_state() -> CriterionResult:
    """Twin-graph amplitudes match the reference vector; H-variance is 9."""
    t0 = time.time()
    c = _Checks()
    probe = builtin_probe("twin5")
    ref = np.zeros(32, dtype=complex)
    for idx, amp in TWIN_REFERENCE.items():
        ref[idx] = amp
    c.expect(np.abs(probe.state - ref).max() < 1e-10, "amplitude mismatch")
    var = variance_of_hamiltonian(probe)
    c.expect(abs(var - 9.0) < 1e-9, f"H-variance {var} != 9")
    return c.result("twin-state", t0, budget_s=1.0)


def criterion_orthogonality() -> CriterionResult:
    """All five first-order error vectors orthogonal to the signal state."""
    t0 = time.time()
    c = _Checks()
    for name in BUILTIN_PROBE_NAMES:
        probe = builtin_probe(name)
        n = probe.n_qubits
        for phi in (0.0, 0.05, 0.1, math.pi / 10):
            psi_phi = evolve_vector(probe.state, phi)
            for q in range(n):
                vecs = {
                    "X": apply_pauli_vec(PauliString.single(n, q, "X"), psi_phi),
                    "Y": apply_pauli_vec(PauliString.single(n, q, "Y"), psi_phi),
                    "Z": apply_pauli_vec(PauliString.single(n, q, "Z"), psi_phi),
                    "UX": evolve_vector(
                        apply_pauli_vec(PauliString.single(n, q, "X"), probe.state), phi
                    ),
                    "UY": evolve_vector(
                        apply_pauli_vec(PauliString.single(n, q, "Y"), probe.state), phi
                    ),
                }
                for kind, v in vecs.items():
                    c.expect(
                        abs(np.vdot(psi_phi, v)) < 1e-10,
                        f"{name} q{q} {kind} at phi={phi:.3f}",
                    )
    return c.result("orthogonality", t0, budget_s=5.0)


def _fit(curve, builder, scheme, phi, deltas):
    return scaling_exponent(bias_scaling_points(curve, builder, scheme, phi, deltas))


def criterion_bias_order() -> CriterionResult:
    """Scaling-exponent suite on the pinned strength grid at phi = 0.05.

    First-order (noisy/QEC) slopes are asserted on ghz5 at the pinned grid;
    twin5 and steane7 carry bias prefactors above 10 rad per unit strength,
    so their top-of-grid points leave the linear regime and their
    first-order fits run one decade lower.  All purification cells use the
    pinned grid.
    """
    t0 = time.time()
    c = _Checks()
    phi = 0.05
    pinned = np.logspace(-4, -2, 8)
    lower = np.logspace(-5, -3, 8)
    curves = {n: build_response_curve(builtin_probe(n)) for n in BUILTIN_PROBE_NAMES}

    def check_range(fit, target, tol, label):
        c.expect(fit.r_squared >= 0.99, f"{label} r2={fit.r_squared:.4f}")
        c.expect(abs(fit.slope - target) <= tol, f"{label} slope={fit.slope:.3f}")

    def check_min(fit, target, label):
        c.expect(fit.r_squared >= 0.99, f"{label} r2={fit.r_squared:.4f}")
        c.expect(fit.slope >= target, f"{label} slope={fit.slope:.3f} < {target}")

    for scheme in (NOISY, QEC):
        check_range(
            _fit(curves["ghz5"], depolarizing, scheme, phi, pinned),
            1.0, 0.1, f"ghz5/{scheme.label}",
        )
        for name in ("twin5", "steane7"):
            check_range(
                _fit(curves[name], depolarizing, scheme, phi, lower),
                1.0, 0.1, f"{name}/{scheme.label}(low grid)",
            )
    for name in BUILTIN_PROBE_NAMES:
        check_range(
            _fit(curves[name], depolarizing, VP2, phi, pinned), 2.0, 0.15, f"{name}/vp2/depol"
        )
        for scheme in (VP2, VP3):
            check_min(
                _fit(curves[name], dephasing, scheme, phi, pinned),
                scheme.n - 0.15,
                f"{name}/{scheme.label}/deph",
            )
    for name in ("steane7", "twin5"):
        check_min(
            _fit(curves[name], depolarizing, VP3, phi, pinned), 2.85, f"{name}/vp3/depol"
        )
    return c.result("bias-order", t0, budget_s=600.0)


def criterion_qec_contracts() -> CriterionResult:
    """Noiseless equality, single-X recovery, first-order residuals, C2/C3."""
    t0 = time.time()
    c = _Checks()
    for name in BUILTIN_PROBE_NAMES:
        probe = builtin_probe(name)
        lo, hi = probe.inversion_domain
        for phi in np.linspace(lo, hi, 5):
            dev = abs(qec_expectation(probe, phi, depolarizing(0.0)) - ideal_mu(probe, phi))
            c.expect(dev < 1e-9, f"{name} noiseless pipeline dev={dev:.2e}")

    # injected single-X errors on the ghz5 logical state recover exactly
    probe = builtin_probe("ghz5")
    lp = encode_logical(probe)
    decoder = build_decoder(lp.code, depolarizing(0.1))
    from .qec import _embed_on_data, _signal_logical

    psi = _signal_logical(lp, 0.07)
    rho = np.outer(psi, psi.conj())
    for q in range(5):
        err = _embed_on_data(PauliString.single(5, q, "X"), lp.n_ancilla)
        bad = apply_pauli_vec(err, psi)
        out = recover(np.outer(bad, bad.conj()), lp.code, decoder, lp.n_ancilla)
        c.expect(np.abs(out - rho).max() < 1e-10, f"X on qubit {q} not recovered")

    # exact recovery output approaches the first-order analytic state at
    # second order in the strength wherever every single X/Y error is
    # syndrome-visible.  The twin code carries a weight-1 logical X (qubit 1
    # commutes with both code generators), so under depolarizing noise the
    # invisible X/Y errors leak at first order and the residual is Theta(delta).
    deltas = np.logspace(-3, -1.5, 6)

    def residual_slope(p, builder):
        resid = []
        for d in deltas:
            noise = builder(d)
            exact = qec_recovered_state(p, 0.05, noise)
            approx = first_order_qec_state(p, 0.05, noise)
            resid.append(np.abs(exact - approx).max())
        return np.polyfit(np.log(deltas), np.log(resid), 1)[0]

    for name, kind, builder in (
        ("ghz5", "depol", depolarizing),
        ("ghz5", "deph", dephasing),
        ("steane7", "depol", depolarizing),
        ("steane7", "deph", dephasing),
        ("twin5", "deph", dephasing),
    ):
        slope = residual_slope(builtin_probe(name), builder)
        c.expect(slope >= 2.0 - 0.1, f"{name}/{kind} residual slope {slope:.2f}")
    slope = residual_slope(builtin_probe("twin5"), depolarizing)
    c.expect(0.85 <= slope <= 1.15, f"twin5/depol leak slope {slope:.2f} not Theta(delta)")

    for name in BUILTIN_PROBE_NAMES:
        rep = check_c2_c3_tradeoff(build_code(builtin_probe(name)))
        c.expect(rep.n_z_correctable == 0, f"{name}: Z-correctable qubits present")
        c.expect(rep.h_spread > 1e-9, f"{name}: signal spread vanished")
    rep = tradeoff_report(z_erasing_demo_basis(), 2)
    c.expect(rep.all_z_correctable, "demo code misses a Z condition")
    c.expect(abs(rep.h_spread) < 1e-9, f"demo code spread {rep.h_spread}")
    return c.result("qec-contracts", t0, budget_s=300.0)


def criterion_stat_error() -> CriterionResult:
    """Empirical estimator variance matches the closed forms at lambda=0.7.

    Cells are chosen where the scheme mean sits well inside the response
    range: at this noise level the uncorrected steane estimator is pinned
    at the branch endpoint for every phi (its mean falls below min mu), so
    the steane cells use the recovery and purification pipelines, at a phi
    away from the flat top of the even response.
    """
    t0 = time.time()
    c = _Checks()
    cells = [
        ("ghz5", NOISY, 0.05, 10**5),
        ("ghz5", QEC, 0.05, 10**5),
        ("ghz5", VP2, 0.05, 4 * 10**5),
        ("steane7", QEC, 0.12, 10**5),
        ("steane7", VP2, 0.12, 4 * 10**5),
    ]
    curves = {}
    for name, scheme, phi, m_total in cells:
        probe = builtin_probe(name)
        if name not in curves:
            curves[name] = build_response_curve(probe)
        delta = calibrate_strength(probe, "depolarizing", 0.7)
        noise = depolarizing(delta)
        plan = ShotPlan(total=m_total, scheme=scheme, seed=2026)
        rec = run_experiment(
            probe, scheme, phi, noise, plan, repeats=500, curve=curves[name]
        )
        rel = abs(rec.stat_emp / rec.stat_theory - 1)
        c.expect(rel < 0.15, f"{name}/{scheme.label}: variance off by {rel:.1%}")

    # n=3 vs n=2 variance ratio approaches (3/2) lambda^-2 in the small-
    # strength limit (the regime needs 1 - lambda << 1 - mu^2)
    for name in ("ghz5", "steane7"):
        probe = builtin_probe(name)
        curve = curves[name]
        noise = depolarizing(1e-5)
        lam = dominant_eigpair(noisy_state(probe, 0.05, noise))[0]
        v2 = theoretical_stat_error(curve, 0.05, noise, VP2, 10**6)
        v3 = theoretical_stat_error(curve, 0.05, noise, VP3, 10**6)
        rel = abs(v3 / v2 / (1.5 * lam**-2) - 1)
        c.expect(rel < 0.10, f"{name}: ratio off by {rel:.1%}")
    return c.result("stat-error", t0, budget_s=600.0)


def criterion_fig4() -> CriterionResult:
    """Headline three-pipeline comparison at lambda = 0.7 with M = 1e9."""
    t0 = time.time()
    c = _Checks()
    repeats = 32
    m_total = 10**9
    grids = {
        "ghz5": np.linspace(-math.pi / 20, math.pi / 20, 21),
        "steane7": np.linspace(0.0, math.pi / 20, 21),
    }
    record_index = 0
    for name, phis in grids.items():
        probe = builtin_probe(name)
        curve = build_response_curve(probe)
        delta = calibrate_strength(probe, "depolarizing", 0.7)
        noise = depolarizing(delta)
        for phi in phis:
            reports = {
                s.label: theoretical_bias(curve, phi, noise, s) for s in (NOISY, QEC, VP2)
            }
            if abs(phi) >= 0.02:
                b = {lbl: r.bias**2 for lbl, r in reports.items()}
                c.expect(
                    b["vp2"] < b["qec"] < b["noisy"],
                    f"{name} phi={phi:.3f}: ordering {b}",
                )
                for lbl, scheme in (("noisy", NOISY), ("qec", QEC), ("vp2", VP2)):
                    plan = ShotPlan(
                        total=m_total, scheme=scheme, seed=7, mode="gaussian"
                    )
                    record_index += 1
                    rec = run_experiment(
                        probe, scheme, phi, noise, plan, repeats=repeats, curve=curve,
                        record_index=record_index,
                    )
                    theory = rec.bias_theory**2 + rec.stat_theory
                    var_marker = (
                        4 * rec.bias_theory**2 * rec.stat_theory + 2 * rec.stat_theory**2
                    )
                    se = math.sqrt(var_marker / repeats)
                    c.expect(
                        abs(rec.mse - theory) <= 3 * se,
                        f"{name}/{lbl} phi={phi:.3f}: z="
                        f"{abs(rec.mse - theory) / se:.2f}",
                    )
            if name == "ghz5" and abs(phi) < 1e-12:
                for lbl, rep in reports.items():
                    c.expect(abs(rep.bias) < 1e-9, f"ghz5 {lbl} bias at 0: {rep.bias:.1e}")
    return c.result("fig4", t0, budget_s=900.0)


def criterion_dephasing_eigvec() -> CriterionResult:
    """Dominant eigenvector exactness under dephasing at three strengths."""
    t0 = time.time()
    c = _Checks()
    for name in BUILTIN_PROBE_NAMES:
        probe = builtin_probe(name)
        psi = evolve_vector(probe.state, 0.1)
        for delta in (0.05, 0.1, 0.2):
            _, vec = dominant_eigpair(noisy_state(probe, 0.1, dephasing(delta)))
            overlap = abs(np.vdot(vec, psi))
            c.expect(abs(overlap - 1) < 1e-10, f"{name} delta={delta}: {1 - overlap:.1e}")
    return c.result("dephasing-eigvec", t0, budget_s=60.0)


def criterion_plots() -> CriterionResult:
    """[secondary] Panel counts and manifest determinism of the plot tool."""
    t0 = time.time()
    c = _Checks()
    root = Path(__file__).resolve().parents[2]
    cli_js = root / "frontend" / "dist" / "cli.js"
    node = shutil.which("node")
    if not cli_js.exists() or node is None:
        return CriterionResult(
            "plots", False, False, time.time() - t0,
            "frontend not built (cd frontend && npm install && npm run build)",
        )
    import json as _json

    with tempfile.TemporaryDirectory() as tmp:
        tmp = Path(tmp)
        jobs = [
            ("fig4", ["fig4.csv"], 2),
            ("sm-figs", ["sm-figs-depolarizing.csv", "sm-figs-dephasing.csv"], 18),
        ]
        for preset, csv_names, expected_panels in jobs:
            proc = subprocess.run(
                [sys.executable, "-m", "vpmetrology.cli", "sweep", "--preset", preset,
                 "--out", str(tmp / f"{preset}.csv")],
                capture_output=True, text=True,
            )
            c.expect(proc.returncode == 0, f"{preset} sweep rc={proc.returncode}")
            panels = 0
            for csv_name in csv_names:
                texts = []
                for run in (1, 2):
                    out_dir = tmp / f"{csv_name}-render{run}"
                    proc = subprocess.run(
                        [node, str(cli_js), "plot", "--csv", str(tmp / csv_name),
                         "--out", str(out_dir)],
                        capture_output=True, text=True,
                    )
                    c.expect(
                        proc.returncode == 0,
                        f"{preset}/{csv_name} plot rc={proc.returncode}: {proc.stderr[:120]}",
                    )
                    manifest = out_dir / "manifest.json"
                    c.expect(manifest.exists(), f"{preset}/{csv_name} missing manifest")
                    texts.append(manifest.read_text() if manifest.exists() else f"run{run}")
                c.expect(texts[0] == texts[1], f"{preset}/{csv_name} manifest differs on re-render")
                try:
                    panels += len(_json.loads(texts[0])["panels"])
                except (ValueError, KeyError):
                    c.expect(False, f"{preset}/{csv_name} manifest unreadable")
            c.expect(
                panels == expected_panels,
                f"{preset}: {panels} panels, expected {expected_panels}",
            )
    return c.result("plots", t0, budget_s=1800.0, primary=False)


CRITERIA = {
    "ghz-response": (criterion_ghz_response, True),
    "twin-state": (criterion_twin_state, True),
    "orthogonality": (criterion_orthogonality, True),
    "bias-order": (criterion_bias_order, True),
    "qec-contracts": (criterion_qec_contracts, True),
    "stat-error": (criterion_stat_error, True),
    "fig4": (criterion_fig4, True),
    "dephasing-eigvec": (criterion_dephasing_eigvec, True),
    "plots": (criterion_plots, False),
}


def run_all(names: list[str] | None = None) -> list[CriterionResult]:
    selected = names or list(CRITERIA)
    results = []
    for name in selected:
        if name not in CRITERIA:
            raise ValueError(f"unknown criterion {name!r}; choose from {list(CRITERIA)}")
        func, _ = CRITERIA[name]
        results.append(func())
    return results
