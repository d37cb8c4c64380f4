"""Syndrome recovery on encoded probes, and what it cannot fix.

The code space is cut out by the probe's Z-type stabilizer subgroup, which
commutes with the signal.  Single X errors flip syndromes and are
corrected; single Z errors are syndrome-invisible logical operations, so
the recovered state keeps a first-order Z-error mixture and the estimator
stays biased at first order.
"""

import numpy as np

from vpmetrology import (
    QEC,
    build_code,
    build_decoder,
    builtin_probe,
    build_response_curve,
    check_c2_c3_tradeoff,
    depolarizing,
    encode_logical,
    qec_expectation,
    syndrome,
    theoretical_bias,
)
from vpmetrology.pauli import PauliString
from vpmetrology.qec import tradeoff_report, z_erasing_demo_basis

probe = builtin_probe("ghz5")
code = build_code(probe)
print(f"ghz5 code: {code.code_dim}-dimensional, codewords "
      + ", ".join(f"|{b:05b}>" for b in code.basis))

print("\nsyndromes of single-qubit errors (bit g = anticommutes with generator g):")
for letter in "XZ":
    syns = [syndrome(PauliString.single(5, q, letter), code) for q in range(5)]
    print(f"  {letter} errors: " + "  ".join(f"q{q}:{s:04b}" for q, s in enumerate(syns)))

decoder = build_decoder(code, depolarizing(0.1))
print("\ndecoder corrections:",
      {f"{s:04b}": c.label() for s, c in sorted(decoder.corrections.items())})

lp = encode_logical(probe)
print(f"\nlogical probe uses {lp.n_ancilla} ancilla qubit(s); "
      f"joint register = {lp.joint_qubits} qubits")

curve = build_response_curve(probe)
noise = depolarizing(0.05)
phi = 0.05
mu_qec = qec_expectation(probe, phi, noise)
rep_qec = theoretical_bias(curve, phi, noise, QEC)
print(f"\nat phi={phi}, delta=0.05: mu_qec={mu_qec:+.5f}, residual bias {rep_qec.bias:+.5f} rad")

print("\ncorrect-all-Z versus keep-the-signal trade-off:")
for name in ("ghz5", "twin5", "steane7"):
    rep = check_c2_c3_tradeoff(build_code(builtin_probe(name)))
    print(f"  {name:8} Z-correctable qubits: {rep.n_z_correctable}   "
          f"signal spread on code space: {rep.h_spread:.2f}")
rep = tradeoff_report(z_erasing_demo_basis(), 2)
print(f"  span{{|++>,|-->}} corrects every single Z ({rep.n_z_correctable}/2) "
      f"but its signal spread is {rep.h_spread:.1e}: nothing left to estimate")
