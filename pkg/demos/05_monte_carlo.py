"""Seeded shot sampling and the bias/variance split of the total error.

Records are fully deterministic for a fixed (seed, record index), and the
mean squared error decomposes exactly into squared empirical bias plus
estimator variance.  As the budget M grows the variance drains away and
the bias floor is what separates the three pipelines.
"""

from vpmetrology import NOISY, QEC, VP2, build_response_curve, builtin_probe, run_experiment
from vpmetrology.noise import calibrate_strength, depolarizing
from vpmetrology.sampling import ShotPlan

probe = builtin_probe("ghz5")
curve = build_response_curve(probe)
delta = calibrate_strength(probe, "depolarizing", 0.7)
noise = depolarizing(delta)
phi = 0.05

print("ghz5, lambda = 0.7, phi = 0.05, 64 repeats per cell\n")
print(f"{'scheme':6} {'M':>12} {'bias_emp':>12} {'stat_emp':>12} {'mse':>12} {'mse_theory':>12}")
for scheme in (NOISY, QEC, VP2):
    for m in (10**5, 10**7, 10**9):
        plan = ShotPlan(total=m, scheme=scheme, seed=17)
        rec = run_experiment(probe, scheme, phi, noise, plan, repeats=64, curve=curve)
        theory = rec.bias_theory**2 + rec.stat_theory
        print(
            f"{scheme.label:6} {m:>12.0e} {rec.bias_emp:+12.2e} {rec.stat_emp:12.2e} "
            f"{rec.mse:12.2e} {theory:12.2e}"
        )
    print()

rec1 = run_experiment(probe, VP2, phi, noise, ShotPlan(total=10**6, scheme=VP2, seed=5),
                      repeats=10, curve=curve, record_index=3)
rec2 = run_experiment(probe, VP2, phi, noise, ShotPlan(total=10**6, scheme=VP2, seed=5),
                      repeats=10, curve=curve, record_index=3)
print("same seed and record index reproduce bit-identical records:", rec1 == rec2)
