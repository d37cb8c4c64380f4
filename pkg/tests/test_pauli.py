import itertools

import numpy as np
import pytest

from vpmetrology.pauli import PauliString, StabilizerGroup, reduce_to_independent

from oracles import all_labels, label_to_matrix


def test_label_round_trip():
    for lab in ["+XYZII", "-ZZIII", "+IIIII", "-Y"]:
        assert PauliString.from_label(lab).label() == lab


def test_invalid_labels_rejected():
    for lab in ["", "+", "XQZ", "+XY Z"]:
        with pytest.raises(ValueError):
            PauliString.from_label(lab)


def test_to_matrix_matches_kron_oracle():
    for lab in all_labels(2):
        p = PauliString.from_label("+" + lab)
        assert np.allclose(p.to_matrix(), label_to_matrix(lab), atol=1e-15)


def test_single_qubit_products():
    x = PauliString.from_label("X")
    z = PauliString.from_label("Z")
    xz = x.multiply(z)
    # X Z = -i Y
    assert xz.label() == "-iY"
    s = PauliString.from_label("-ZY")
    assert s.multiply(s).label() == "+II"


def test_hermitian_involution():
    for lab in ["+XYZII", "-ZZIII", "+YYYYX"]:
        s = PauliString.from_label(lab)
        assert s.multiply(s) == PauliString.identity(s.n_qubits)


@pytest.mark.parametrize("pair", list(itertools.product(all_labels(2), repeat=2)))
def test_commutes_matches_dense_commutator_all_2q(pair):
    la, lb = pair
    p, q = PauliString.from_label("+" + la), PauliString.from_label("+" + lb)
    ma, mb = label_to_matrix(la), label_to_matrix(lb)
    dense = np.allclose(ma @ mb - mb @ ma, 0, atol=1e-14)
    assert p.commutes(q) == dense


def test_commutes_basic_cases():
    zz = PauliString.from_label("+ZZ")
    xx = PauliString.from_label("+XX")
    assert zz.commutes(xx)
    z1 = PauliString.from_label("+ZI")
    x1 = PauliString.from_label("+XI")
    assert not z1.commutes(x1)


def test_multiply_matches_dense_oracle_random_5q():
    rng = np.random.default_rng(12)
    letters = np.array(list("IXYZ"))
    for _ in range(1000):
        la = "".join(rng.choice(letters, 5))
        lb = "".join(rng.choice(letters, 5))
        p, q = PauliString.from_label("+" + la), PauliString.from_label("+" + lb)
        prod = p.multiply(q)
        assert np.allclose(prod.to_matrix(), label_to_matrix(la) @ label_to_matrix(lb), atol=1e-14)
        # commutation agrees with the dense commutator as well
        ma, mb = label_to_matrix(la), label_to_matrix(lb)
        assert p.commutes(q) == np.allclose(ma @ mb, mb @ ma, atol=1e-14)


def test_size_mismatch_errors():
    p = PauliString.from_label("+XX")
    q = PauliString.from_label("+X")
    with pytest.raises(ValueError):
        p.multiply(q)
    with pytest.raises(ValueError):
        p.commutes(q)


def test_group_rejects_anticommuting():
    with pytest.raises(ValueError):
        StabilizerGroup.from_labels(["+ZI", "+XI"])


def test_group_rejects_dependent():
    with pytest.raises(ValueError):
        StabilizerGroup.from_labels(["+ZZ", "+ZI", "+IZ"])


def test_group_rejects_imaginary_phase():
    p = PauliString.from_label("+X").multiply(PauliString.from_label("+Z"))
    with pytest.raises(ValueError):
        StabilizerGroup([p])


def test_group_elements_count_and_membership():
    g = StabilizerGroup.from_labels(["+ZZI", "+IZZ", "+XXX"])
    els = g.elements()
    assert len(els) == 8
    labels = {e.label() for e in els}
    assert "+III" in labels
    assert "+ZIZ" in labels


def test_reduce_to_independent_recovers_rank():
    gens = [PauliString.from_label(s) for s in ["+ZZI", "+IZZ", "+ZIZ"]]
    red = reduce_to_independent(gens)
    assert len(red) == 2
    # the reduced set generates the same group
    grp = StabilizerGroup(red)
    labels = {e.label() for e in grp.elements()}
    assert labels == {"+III", "+ZZI", "+IZZ", "+ZIZ"}


def test_reduce_detects_minus_identity():
    # XX * YY * ZZ = -II
    gens = [PauliString.from_label(s) for s in ["+XX", "+YY", "+ZZ"]]
    with pytest.raises(ValueError):
        reduce_to_independent(gens)
