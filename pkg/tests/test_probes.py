import json
import math

import numpy as np
import pytest

from vpmetrology.linalg import apply_pauli_vec
from vpmetrology.noise import evolve_vector
from vpmetrology.pauli import PauliString, StabilizerGroup
from vpmetrology.probes import (
    BUILTIN_PROBE_NAMES,
    Probe,
    builtin_probe,
    commuting_subgroup,
    hamiltonian_variance_vec,
    load_probe,
    probe_from_dict,
    stabilizer_state_vector,
    variance_of_hamiltonian,
)

from oracles import projector_state

SQ8 = 1 / (2 * np.sqrt(2))

# reference twin-graph amplitudes, |00000> ... |11111> index order
TWIN_AMPLITUDES = np.zeros(32, dtype=complex)
TWIN_AMPLITUDES[0b00000] = SQ8
TWIN_AMPLITUDES[0b00110] = -SQ8
TWIN_AMPLITUDES[0b01001] = 1j * SQ8
TWIN_AMPLITUDES[0b01111] = 1j * SQ8
TWIN_AMPLITUDES[0b10000] = -1j * SQ8
TWIN_AMPLITUDES[0b10110] = -1j * SQ8
TWIN_AMPLITUDES[0b11001] = -SQ8
TWIN_AMPLITUDES[0b11111] = SQ8


def test_bell_state():
    g = StabilizerGroup.from_labels(["+ZZ", "+XX"])
    v = stabilizer_state_vector(g)
    expect = np.zeros(4)
    expect[0b00] = expect[0b11] = 1 / np.sqrt(2)
    assert np.abs(v - expect).max() < 1e-12


def test_ghz5_state_matches_projector_oracle():
    labels = ["+ZZIII", "+IZZII", "+IIZZI", "+IIIZZ", "+XXXXX"]
    v = stabilizer_state_vector(StabilizerGroup.from_labels(labels))
    assert np.abs(v - projector_state(labels)).max() < 1e-12
    expect = np.zeros(32)
    expect[0] = expect[31] = 1 / np.sqrt(2)
    assert np.abs(v - expect).max() < 1e-12


def test_twin_state_matches_reference_amplitudes():
    v = builtin_probe("twin5").state
    assert np.abs(v - TWIN_AMPLITUDES).max() < 1e-10


def test_minus_identity_group_raises():
    g = StabilizerGroup.from_labels(["-ZZ", "+XX"])
    # stabilizes the odd Bell pair instead; fine.  A true -I group cannot be
    # constructed (constructor rejects it), so force the projector failure:
    v = stabilizer_state_vector(g)
    assert np.abs(np.linalg.norm(v) - 1) < 1e-12
    with pytest.raises(ValueError):
        stabilizer_state_vector(StabilizerGroup.from_labels(["+ZZ"]))  # not N generators


@pytest.mark.parametrize(
    "name,expected",
    [
        ("ghz5", {"+ZZIII", "+IZZII", "+IIZZI", "+IIIZZ"}),
        ("twin5", {"+IZIIZ", "+IIZZI"}),
    ],
)
def test_commuting_subgroup_known_generators(name, expected):
    probe = builtin_probe(name)
    sub = commuting_subgroup(probe.group)
    # same group: element sets agree
    got = {e.label() for e in sub.elements()}
    want = {e.label() for e in StabilizerGroup.from_labels(sorted(expected)).elements()}
    assert got == want


def test_ghz5_commuting_subgroup_order_16():
    sub = commuting_subgroup(builtin_probe("ghz5").group)
    assert len(sub.generators) == 4
    assert len(sub.elements()) == 16


def test_steane_commuting_subgroup():
    sub = commuting_subgroup(builtin_probe("steane7").group)
    assert len(sub.generators) == 4
    labels = {e.label() for e in sub.elements()}
    assert "+ZZZZZZZ" in labels
    assert all(e.x_bits == 0 for e in sub.elements())


def test_commuting_subgroup_commutes_with_all_z_and_excludes_single_z():
    for name in BUILTIN_PROBE_NAMES:
        probe = builtin_probe(name)
        sub = commuting_subgroup(probe.group)
        n = probe.n_qubits
        for el in sub.elements():
            for q in range(n):
                assert el.commutes(PauliString.single(n, q, "Z"))
            assert el.weight != 1


@pytest.mark.parametrize(
    "name,observable,domain",
    [
        ("ghz5", "+YYYYY", (-math.pi / 10, math.pi / 10)),
        ("twin5", "+YYYYX", (0.0, math.pi / 10)),
        ("steane7", "+IIIXXXX", (0.0, math.pi / 10)),
    ],
)
def test_builtin_probe_configuration(name, observable, domain):
    p = builtin_probe(name)
    assert p.observable == PauliString.from_label(observable)
    assert p.inversion_domain == pytest.approx(domain)


def test_unknown_probe_name():
    with pytest.raises(ValueError):
        builtin_probe("ghz9")


def test_builtin_states_stabilized_by_group():
    # exhaustive over all 2^N elements for N=5; generators + 200 random
    # products for the 7-qubit probe
    rng = np.random.default_rng(41)
    for name in BUILTIN_PROBE_NAMES:
        probe = builtin_probe(name)
        psi = probe.state
        if probe.n_qubits <= 5:
            elements = probe.group.elements()
        else:
            elements = list(probe.group.generators)
            gens = probe.group.generators
            for _ in range(200):
                el = PauliString.identity(probe.n_qubits)
                for g in gens:
                    if rng.integers(2):
                        el = el.multiply(g)
                elements.append(el)
        for el in elements:
            assert np.linalg.norm(apply_pauli_vec(el, psi) - psi) < 1e-10, el.label()


@pytest.mark.parametrize("name", BUILTIN_PROBE_NAMES)
def test_single_pauli_expectations_vanish(name):
    probe = builtin_probe(name)
    psi = probe.state
    for q in range(probe.n_qubits):
        for letter in "XYZ":
            p = PauliString.single(probe.n_qubits, q, letter)
            val = np.vdot(psi, apply_pauli_vec(p, psi))
            assert abs(val) < 1e-10


@pytest.mark.parametrize("name", BUILTIN_PROBE_NAMES)
@pytest.mark.parametrize("phi", [0.0, 0.05, 0.1, math.pi / 10])
def test_first_order_error_vectors_orthogonal(name, phi):
    probe = builtin_probe(name)
    n = probe.n_qubits
    psi0 = probe.state
    psi_phi = evolve_vector(psi0, phi)
    for q in range(n):
        vecs = [
            apply_pauli_vec(PauliString.single(n, q, "X"), psi_phi),
            apply_pauli_vec(PauliString.single(n, q, "Y"), psi_phi),
            apply_pauli_vec(PauliString.single(n, q, "Z"), psi_phi),
            evolve_vector(apply_pauli_vec(PauliString.single(n, q, "X"), psi0), phi),
            evolve_vector(apply_pauli_vec(PauliString.single(n, q, "Y"), psi0), phi),
        ]
        for v in vecs:
            assert abs(np.vdot(psi_phi, v)) < 1e-10


def test_variance_twin_is_nine():
    assert abs(variance_of_hamiltonian(builtin_probe("twin5")) - 9.0) < 1e-9


def test_variance_ghz_is_25():
    # dense evaluation on (|00000>+|11111>)/sqrt(2): <H>=0, <H^2>=25
    assert abs(variance_of_hamiltonian(builtin_probe("ghz5")) - 25.0) < 1e-9


def test_variance_product_state_zero():
    v = np.zeros(8)
    v[0] = 1.0
    assert hamiltonian_variance_vec(v) == 0.0


def test_probe_rejects_single_qubit_stabilizer():
    with pytest.raises(ValueError):
        Probe(
            name="bad",
            group=StabilizerGroup.from_labels(["+ZI", "+IZ"]),
            observable=PauliString.from_label("+XX"),
            inversion_domain=(0.0, 0.1),
        )


def test_probe_rejects_z_only_observable():
    with pytest.raises(ValueError):
        Probe(
            name="bad",
            group=StabilizerGroup.from_labels(["+ZZ", "+XX"]),
            observable=PauliString.from_label("+ZZ"),
            inversion_domain=(0.0, 0.1),
        )


def test_probe_json_round_trip(tmp_path):
    doc = {
        "name": "ghz3",
        "generators": ["+ZZI", "+IZZ", "+XXX"],
        "observable": "+YYY",
        "domain": [-math.pi / 6, math.pi / 6],
    }
    path = tmp_path / "ghz3.json"
    path.write_text(json.dumps(doc))
    probe = load_probe(str(path))
    assert probe.name == "ghz3"
    assert probe.n_qubits == 3
    expect = np.zeros(8)
    expect[0] = expect[7] = 1 / np.sqrt(2)
    assert np.abs(probe.state - expect).max() < 1e-12


def test_probe_json_grammar_enforced():
    doc = {
        "name": "bad",
        "generators": ["ZZI", "+IZZ", "+XXX"],  # missing sign
        "observable": "+YYY",
        "domain": [0, 0.1],
    }
    with pytest.raises(ValueError):
        probe_from_dict(doc)


def test_probe_ancilla_counts():
    assert builtin_probe("ghz5").n_ancilla == 1
    assert builtin_probe("twin5").n_ancilla == 3
    assert builtin_probe("steane7").n_ancilla == 3
