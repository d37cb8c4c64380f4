"""Stabilizer-state probes and their measurement setup.

A probe bundles a full N-generator stabilizer group (fixing a unique pure
state), a Hermitian Pauli observable and the closed phase interval on
which the response mu(phi) is inverted.  Three named probes are built in:

    ghz5    5-qubit GHZ state, observable YYYYY, domain [-pi/10, pi/10]
    twin5   5-qubit twin-graph state (two true-twin pairs), observable
            YYYYX, domain [0, pi/10]
    steane7 logical |0> of the 7-qubit Steane code, observable X on
            qubits 4..7, domain [0, pi/10]

Custom probes load from JSON documents: generator and observable strings
use the exact grammar sign '+'/'-' followed by N characters from
{I,X,Y,Z}.
"""

from __future__ import annotations

import json
import math
import re
from dataclasses import dataclass, field

import numpy as np

from .linalg import apply_pauli_vec
from .pauli import PauliString, StabilizerGroup, reduce_to_independent

STATE_TOL = 1e-10

_LABEL_RE = re.compile(r"^[+-][IXYZ]+$")


def stabilizer_state_vector(group: StabilizerGroup) -> np.ndarray:
    """The unique state vector with S|psi> = |psi> for every generator.

    Built by applying the commuting projectors prod (I+S)/2 to computational
    reference states, scanning |0...0>, |0...1>, ... until the projection is
    nonzero.  Global phase is fixed: first nonzero amplitude real positive.
    """
    if len(group.generators) != group.n_qubits:
        raise ValueError("state construction needs exactly N independent generators")
    dim = 1 << group.n_qubits
    for ref in range(dim):
        v = np.zeros(dim, dtype=complex)
        v[ref] = 1.0
        for g in group.generators:
            v = (v + apply_pauli_vec(g, v)) / 2
        nrm = np.linalg.norm(v)
        if nrm > 1e-12:
            v = v / nrm
            pivot = v[np.flatnonzero(np.abs(v) > 1e-12)[0]]
            return v * (abs(pivot) / pivot)
    raise ValueError("projector product annihilates every basis state (-I in group?)")


def commuting_subgroup(group: StabilizerGroup) -> StabilizerGroup:
    """Generators for the subgroup commuting with every single-qubit Z.

    A Pauli commutes with all Z^(i) iff its X-support is empty, so this is
    the Z-type subset of the group, re-reduced to independent generators.
    """
    z_type = [el for el in group.elements() if el.x_bits == 0 and (el.z_bits != 0)]
    if not z_type:
        raise ValueError("group has no nontrivial Z-type elements")
    return StabilizerGroup(reduce_to_independent(z_type))


@dataclass(frozen=True)
class Probe:
    """A named stabilizer probe with observable and inversion branch."""

    name: str
    group: StabilizerGroup
    observable: PauliString
    inversion_domain: tuple[float, float]
    state: np.ndarray = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        n = self.group.n_qubits
        if self.observable.n_qubits != n:
            raise ValueError("observable qubit count differs from group")
        if not self.observable.is_hermitian:
            raise ValueError("observable must be Hermitian (phase +1/-1)")
        if self.observable.x_bits == 0:
            raise ValueError("observable commutes with every Z^(i); phase is invisible")
        lo, hi = self.inversion_domain
        if not (math.isfinite(lo) and math.isfinite(hi) and lo < hi):
            raise ValueError("inversion domain must be a nonempty finite interval")
        if len(self.group.generators) != n:
            raise ValueError(f"probe needs {n} generators, got {len(self.group.generators)}")
        for el in self.group.elements():
            if el.weight == 1:
                raise ValueError(f"group contains single-qubit Pauli {el.label()}")
        psi = stabilizer_state_vector(self.group)
        for g in self.group.generators:
            if np.linalg.norm(apply_pauli_vec(g, psi) - psi) > STATE_TOL:
                raise ValueError(f"state not stabilized by {g.label()}")
        object.__setattr__(self, "state", psi)

    @property
    def n_qubits(self) -> int:
        return self.group.n_qubits

    @property
    def n_ancilla(self) -> int:
        """Ancilla register size for the encoded logical probe."""
        return self.n_qubits - len(commuting_subgroup(self.group).generators)


def hamiltonian_variance_vec(state: np.ndarray) -> float:
    """<H^2> - <H>^2 on a state vector, H = sum_i Z^(i) (diagonal)."""
    n = int(math.log2(len(state)))
    idx = np.arange(1 << n)
    h = n - 2 * np.array([int(b).bit_count() for b in idx])
    w = np.abs(state) ** 2
    mean = float(w @ h)
    return float(w @ (h.astype(float) ** 2) - mean**2)


def variance_of_hamiltonian(probe: Probe) -> float:
    return hamiltonian_variance_vec(probe.state)


# -- built-in probes ---------------------------------------------------------

_BUILTIN_SPECS = {
    "ghz5": {
        "generators": ["+ZZIII", "+IZZII", "+IIZZI", "+IIIZZ", "+XXXXX"],
        "observable": "+YYYYY",
        "domain": (-math.pi / 10, math.pi / 10),
    },
    "twin5": {
        "generators": ["+IZIIZ", "+IIZZI", "+IXXYX", "+XYIIY", "+YYYYX"],
        "observable": "+YYYYX",
        "domain": (0.0, math.pi / 10),
    },
    "steane7": {
        "generators": [
            "+IZZZZII",
            "+IIIZZZZ",
            "+ZIZIZIZ",
            "+ZZZZZZZ",
            "+IXXXXII",
            "+IIIXXXX",
            "+XIXIXIX",
        ],
        "observable": "+IIIXXXX",
        "domain": (0.0, math.pi / 10),
    },
}

BUILTIN_PROBE_NAMES = tuple(_BUILTIN_SPECS)

_probe_cache: dict[str, Probe] = {}


def builtin_probe(name: str) -> Probe:
    try:
        spec = _BUILTIN_SPECS[name]
    except KeyError:
        raise ValueError(f"unknown probe {name!r}; choose from {BUILTIN_PROBE_NAMES}") from None
    if name not in _probe_cache:
        _probe_cache[name] = Probe(
            name=name,
            group=StabilizerGroup.from_labels(spec["generators"]),
            observable=PauliString.from_label(spec["observable"]),
            inversion_domain=tuple(spec["domain"]),
        )
    return _probe_cache[name]


# -- JSON loading -------------------------------------------------------------


def _parse_signed_label(s: str, what: str) -> PauliString:
    if not isinstance(s, str) or not _LABEL_RE.match(s):
        raise ValueError(f"{what} {s!r} must match sign '+'/'-' followed by I/X/Y/Z characters")
    return PauliString.from_label(s)


def probe_from_dict(doc: dict) -> Probe:
    """Build a probe from a JSON document.

    Expected keys: name (str), generators (list of signed labels),
    observable (signed label), domain ([lo, hi] in radians).
    """
    try:
        name = doc["name"]
        gens = [_parse_signed_label(s, "generator") for s in doc["generators"]]
        obs = _parse_signed_label(doc["observable"], "observable")
        lo, hi = doc["domain"]
    except (KeyError, TypeError, ValueError) as exc:
        raise ValueError(f"invalid probe document: {exc}") from exc
    return Probe(
        name=str(name),
        group=StabilizerGroup(gens),
        observable=obs,
        inversion_domain=(float(lo), float(hi)),
    )


def load_probe(path: str) -> Probe:
    with open(path, encoding="utf-8") as fh:
        return probe_from_dict(json.load(fh))
