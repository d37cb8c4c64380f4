"""Built-in stabilizer probes and their ideal response curves.

Each probe fixes a unique stabilizer state, a Pauli observable and the
phase branch on which the response mu(phi) = <A>(phi) is inverted.
"""

import numpy as np

from vpmetrology import build_response_curve, builtin_probe, ideal_mu, variance_of_hamiltonian
from vpmetrology.probes import BUILTIN_PROBE_NAMES, commuting_subgroup

for name in BUILTIN_PROBE_NAMES:
    probe = builtin_probe(name)
    sub = commuting_subgroup(probe.group)
    print(f"== {name}: {probe.n_qubits} qubits")
    print("   generators:", ", ".join(g.label() for g in probe.group.generators))
    print("   observable:", probe.observable.label())
    print("   signal-commuting subgroup:", ", ".join(g.label() for g in sub.generators))
    print(f"   H variance (QFI of the noiseless probe): {variance_of_hamiltonian(probe):.1f}")

    # nonzero amplitudes of the probe state
    amps = [(i, a) for i, a in enumerate(probe.state) if abs(a) > 1e-12]
    terms = " + ".join(f"({a:.3f})|{i:0{probe.n_qubits}b}>" for i, a in amps[:4])
    more = "" if len(amps) <= 4 else f" + {len(amps) - 4} more terms"
    print("   state:", terms + more)

    curve = build_response_curve(probe)
    lo, hi = probe.inversion_domain
    print(f"   response over [{lo:+.4f}, {hi:+.4f}]:")
    for phi in np.linspace(lo, hi, 5):
        print(f"     mu({phi:+.4f}) = {ideal_mu(probe, phi):+.6f}   mu'={curve.dmu(phi):+.4f}")
    print()

# the GHZ response is exactly sin(5 phi)
probe = builtin_probe("ghz5")
worst = max(
    abs(ideal_mu(probe, phi) - np.sin(5 * phi)) for phi in np.linspace(-0.3, 0.3, 101)
)
print(f"ghz5 response vs sin(5 phi): max deviation {worst:.2e}")
