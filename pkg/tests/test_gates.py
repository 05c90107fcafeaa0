import math

import numpy as np
import pytest

from ewlgames import gates
from ewlgames.gates import GateLabel, Su2Params, named_gate, su2
from ewlgames.qmat import is_density_matrix, is_unitary, pure_density


def test_su2_examples():
    assert np.allclose(su2((0, 0, 0)), np.eye(2), atol=0)
    assert np.allclose(su2((math.pi, 0, 0)), [[0, 1], [-1, 0]], atol=1e-15)
    # the matrix [[0,1],[-1,0]] is i*sigma_y
    assert np.allclose(su2((math.pi, 0, 0)), 1j * gates.PAULI_Y, atol=1e-15)


def test_su2_determinant_and_unitarity(rng):
    for _ in range(100):
        p = Su2Params(rng.uniform(0, math.pi), rng.uniform(0, 2 * math.pi), rng.uniform(0, 2 * math.pi))
        u = su2(p)
        assert abs(np.linalg.det(u) - 1) <= 1e-12
        assert is_unitary(u, 1e-12)


@pytest.mark.parametrize("bad", [(-0.1, 0, 0), (4.0, 0, 0), (0, 2 * math.pi, 0), (0, 0, -1)])
def test_su2_range_errors(bad):
    with pytest.raises(ValueError):
        su2(bad)


def test_named_gates():
    assert np.array_equal(named_gate("identity"), np.eye(2))
    assert np.array_equal(named_gate("pauli_x"), [[0, 1], [1, 0]])
    assert np.array_equal(named_gate(GateLabel("ewl_J", gamma=0.0)), np.eye(4))
    h = named_gate("hadamard")
    assert np.allclose(h, np.array([[1, 1], [1, -1]]) / math.sqrt(2))
    assert np.allclose(named_gate("s_dagger_hadamard"), h @ np.diag([1, -1j]))
    for name in gates.FIXED_GATE_NAMES:
        assert is_unitary(named_gate(name), 1e-12)
    assert is_unitary(named_gate(GateLabel("ewl_J", gamma=0.7)), 1e-12)


def test_gate_label_validation():
    with pytest.raises(ValueError):
        GateLabel("toffoli")
    with pytest.raises(ValueError):
        GateLabel("ewl_J", gamma=2.0)
    with pytest.raises(ValueError):
        GateLabel("su2")
    assert str(GateLabel("su2", params=Su2Params(1.0, 0.5, 0))) == "su2(1,0.5,0)"


def test_ghz_state():
    v = gates.ghz_state(3)
    assert np.flatnonzero(v).tolist() == [0, 7]
    assert v[0] == pytest.approx(1 / math.sqrt(2))
    assert np.linalg.norm(gates.ghz_state(4)) == pytest.approx(1.0, abs=1e-15)
    # oracle: the Bell density matrix written out entry by entry
    bell = np.zeros((4, 4))
    bell[np.ix_([0, 3], [0, 3])] = 0.5
    assert np.allclose(pure_density(gates.ghz_state(2)), bell, atol=1e-15)
    for bad in (1, 6):
        with pytest.raises(ValueError):
            gates.ghz_state(bad)


def test_minority_rho_in():
    rho = gates.minority_rho_in()
    assert rho[1, 1] == 1 / 8
    assert rho[3, 3] == 0
    assert np.trace(rho) == pytest.approx(1.0)
    assert is_density_matrix(rho, 1e-12)
    odd = [i for i in range(16) if bin(i).count("1") % 2]
    assert np.flatnonzero(np.diag(rho)).tolist() == odd


def test_fsslh_psi_in():
    v = gates.fsslh_psi_in(1.0)
    assert np.flatnonzero(v).tolist() == [0, 15]
    assert v[0] == pytest.approx(1 / math.sqrt(2))
    v = gates.fsslh_psi_in(0.0)
    assert np.flatnonzero(v).tolist() == [5, 6, 9, 10]
    assert np.allclose(v[[5, 6, 9, 10]], 0.5)
    for alpha in np.linspace(0, 1, 21):
        assert abs(np.linalg.norm(gates.fsslh_psi_in(alpha)) - 1) <= 1e-12
    with pytest.raises(ValueError):
        gates.fsslh_psi_in(1.1)


def test_fsslh_psi_in_matches_tensor_expansion():
    alpha = 0.6
    ket = {b: np.eye(2)[b] for b in (0, 1)}
    pair = np.kron(ket[0], ket[1]) + np.kron(ket[1], ket[0])
    ghz4 = np.zeros(16)
    ghz4[[0, 15]] = 1
    oracle = alpha / math.sqrt(2) * ghz4 + math.sqrt(1 - alpha**2) / 2 * np.kron(pair, pair)
    assert np.allclose(gates.fsslh_psi_in(alpha), oracle, atol=1e-15)


def test_f09_rho():
    rho = gates.f09_rho(0.1, 0.3)
    assert np.allclose(np.diag(rho), [0.3, 0.1, 0.3, 0.3])
    assert np.trace(rho) == pytest.approx(1.0)
    assert is_density_matrix(rho, 1e-12)
    with pytest.raises(ValueError):
        gates.f09_rho(0.2, 0.2)
    with pytest.raises(ValueError):
        gates.f09_rho(0.8, 0.3)


def test_state_constructors_are_density_matrices():
    for rho in (
        pure_density(gates.ghz_state(3)),
        pure_density(gates.fsslh_psi_in(0.3)),
        gates.bell_density(),
        gates.ket_zero_density(5),
        gates.f09_rho(),
        gates.minority_rho_in(),
    ):
        assert is_density_matrix(rho, 1e-12)


def test_ewl_j_closed_form_matches_expm():
    import scipy.linalg

    for gamma in (0.0, 0.3, math.pi / 4, math.pi / 2):
        oracle = scipy.linalg.expm(1j * gamma * np.kron(gates.PAULI_Y, gates.PAULI_Y))
        assert np.allclose(gates.ewl_j(gamma), oracle, atol=1e-13)
