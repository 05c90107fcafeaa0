import itertools
import math

import numpy as np
import pytest

from ewlgames import gates
from ewlgames.ewl import (
    CATALOG_NAMES,
    BudgetError,
    CatalogParams,
    EwlProcedure,
    FiniteSpace,
    GridSpace,
    ProfileError,
    catalog,
    classical_procedure,
    induced_game,
    outcome_distribution,
    payoff,
    payoff_no_input,
    payoff_with_input,
)
from ewlgames.qmat import NumericalConsistencyError
from ewlgames.scenario import (
    PayoffTable2x2,
    battle_sexes_scenario,
    minority_scenario,
    prisoners_dilemma_scenario,
)

from conftest import random_su2

ODD = [y for y in itertools.product((0, 1), repeat=4) if sum(y) % 2]


def test_bos_p1_identity_distribution():
    p, _ = catalog("bos_p1")
    dist = outcome_distribution(p, ["identity", "identity"])
    assert dist[(0, 0)] == 1.0
    assert dist.probs.sum() == 1.0
    assert dist.support() == [(0, 0)]


def test_minority_p2_identity_distribution():
    p, _ = catalog("minority_p2")
    dist = outcome_distribution(p, ["identity"] * 4)
    for y, m in dist.mass.items():
        assert m == pytest.approx(1 / 8 if y in ODD else 0.0, abs=1e-12)


def test_bos_p2_bell_diagonal():
    p, _ = catalog("bos_p2")
    dist = outcome_distribution(p, ["identity"] * 2)
    assert np.allclose(dist.probs, [0.5, 0, 0, 0.5], atol=1e-12)


def test_payoff_examples():
    p, s = catalog("minority_p2")
    assert np.allclose(payoff_no_input(p, s, ["identity"] * 4), 0.25, atol=1e-12)
    p, s = catalog("bos_p1")
    assert np.array_equal(payoff_no_input(p, s, ["identity"] * 2), [2, 1])


def test_minority_p1_all_sixteen_profiles():
    p, s = catalog("minority_p1")
    for flips in itertools.product((0, 1), repeat=4):
        prof = ["pauli_x" if f else "identity" for f in flips]
        pay = payoff_no_input(p, s, prof)
        # oracle: outputs are the flip pattern; only a lone deviator is paid
        expected = [0.0] * 4
        for side in (0, 1):
            who = [i for i, f in enumerate(flips) if f == side]
            if len(who) == 1:
                expected[who[0]] = 1.0
        assert np.array_equal(pay, expected), flips


def ghz_statevector_win_probs(u0, u1):
    """Oracle: pure-state simulation, independent of the density-matrix path."""
    psi = gates.ghz_state(3)
    wins = []
    for x in [(0, 0, 0), (0, 1, 1), (1, 0, 1), (1, 1, 0)]:
        local = np.kron(np.kron((u0, u1)[x[0]], (u0, u1)[x[1]]), (u0, u1)[x[2]])
        amp = local @ psi
        prob = 0.0
        for idx in range(8):
            y = [(idx >> 2) & 1, (idx >> 1) & 1, idx & 1]
            if (2 * sum(y)) % 4 == sum(x) % 4:
                prob += abs(amp[idx]) ** 2
        wins.append(prob)
    return np.array(wins)


def test_ghz_eigen_relations():
    psi = gates.ghz_state(3)
    X, Y = gates.PAULI_X, gates.PAULI_Y
    xxx = np.kron(np.kron(X, X), X)
    assert (psi.conj() @ xxx @ psi).real == pytest.approx(1.0, abs=1e-12)
    for ops in [(X, Y, Y), (Y, X, Y), (Y, Y, X)]:
        op = np.kron(np.kron(*ops[:2]), ops[2])
        assert (psi.conj() @ op @ psi).real == pytest.approx(-1.0, abs=1e-12)


def test_mod4_winning_profile():
    p, s = catalog("mod4_ghz")
    prof = [("hadamard", "s_dagger_hadamard")] * 3
    oracle = ghz_statevector_win_probs(gates.HADAMARD, gates.S_DAGGER_HADAMARD)
    assert np.allclose(oracle, 1.0, atol=1e-12)
    assert np.allclose(payoff_with_input(p, s, prof), [1, 1, 1], atol=1e-9)


def test_mod4_identity_profile():
    p, s = catalog("mod4_ghz")
    oracle = ghz_statevector_win_probs(np.eye(2), np.eye(2)).mean()
    assert oracle == pytest.approx(0.5)
    assert np.allclose(payoff_with_input(p, s, [("identity", "identity")] * 3), oracle, atol=1e-12)


def test_mod4_payoffs_bounded(rng):
    p, s = catalog("mod4_ghz")
    for _ in range(20):
        prof = [(random_su2(rng), random_su2(rng)) for _ in range(3)]
        pay = payoff_with_input(p, s, prof)
        assert np.all(pay >= -1e-12) and np.all(pay <= 1 + 1e-12)
        assert np.ptp(pay) <= 1e-12  # common-interest game


def test_mod4_random_profiles_match_statevector_oracle(rng):
    p, s = catalog("mod4_ghz")
    for _ in range(10):
        u0, u1 = random_su2(rng), random_su2(rng)
        pay = payoff_with_input(p, s, [(u0, u1)] * 3)
        assert pay[0] == pytest.approx(ghz_statevector_win_probs(u0, u1).mean(), abs=1e-12)


def test_profile_errors():
    p, s = catalog("bos_p1")
    with pytest.raises(ProfileError):
        outcome_distribution(p, ["identity"])
    with pytest.raises(ProfileError):
        outcome_distribution(p, ["identity", "hadamard"])  # not in {1, sigma_x}
    with pytest.raises(ProfileError):
        payoff_with_input(p, s, ["identity"] * 2)
    q, t = catalog("mod4_ghz")
    with pytest.raises(ProfileError):
        payoff_with_input(q, t, ["hadamard"] * 3)  # missing input branch
    with pytest.raises(ProfileError):
        payoff_no_input(p, minority_scenario(4), ["identity"] * 2)


def test_two_parameter_family_membership():
    space = GridSpace(5, 5, 0)
    assert space.contains(gates.su2((1.0, 2.0, 0.0)))
    assert space.contains(1j * gates.su2((1.0, 2.0, 0.0)))
    assert not space.contains(gates.su2((1.0, 2.0, 1.0)))
    assert GridSpace().contains(gates.HADAMARD)


def test_grid_axes():
    theta, phi, chi = GridSpace(13, 13, 13).axes()
    assert theta[0] == 0 and theta[-1] == math.pi and len(theta) == 13
    assert phi[0] == 0 and phi[-1] < 2 * math.pi and len(phi) == 13
    theta, phi, chi = GridSpace(3, 4, 0).axes()
    assert list(chi) == [0.0]
    with pytest.raises(ValueError):
        GridSpace(1, 2, 2)
    with pytest.raises(ValueError):
        GridSpace(3, 1, 0)


def test_procedure_validation():
    eye = np.eye(4)
    with pytest.raises(NumericalConsistencyError):
        EwlProcedure(2, eye * 2, eye, gates.bell_density(), FiniteSpace(("identity",)))
    with pytest.raises(NumericalConsistencyError):
        EwlProcedure(2, eye, eye, np.diag([0.5, 0.6, 0, -0.1]), FiniteSpace(("identity",)))
    with pytest.raises(ValueError):
        EwlProcedure(2, np.eye(8), eye, gates.bell_density(), FiniteSpace(("identity",)))
    with pytest.raises(ValueError):
        FiniteSpace(())


def test_normalization_and_phase_invariance(rng):
    names = ("bos_p4", "bos_p5", "minority_p3", "mod4_ghz")
    for k in range(100):
        p, s = catalog(names[k % 4])
        x = s.inputs[k % len(s.inputs)] if s.has_input else None
        if s.has_input:
            prof = [(random_su2(rng), random_su2(rng)) for _ in range(p.n)]
        elif isinstance(p.strategy_space, GridSpace) and p.strategy_space.chi_points == 0:
            prof = [gates.su2((rng.uniform(0, math.pi), rng.uniform(0, 2 * math.pi), 0)) for _ in range(p.n)]
        else:
            prof = [random_su2(rng) for _ in range(p.n)]
        dist = outcome_distribution(p, prof, x)
        assert abs(dist.probs.sum() - 1) <= 1e-9
        who = int(rng.integers(p.n))
        phase = np.exp(1j * rng.uniform(0, 2 * math.pi))
        shifted = list(prof)
        shifted[who] = tuple(phase * u for u in prof[who]) if s.has_input else phase * prof[who]
        assert np.max(np.abs(outcome_distribution(p, shifted, x).probs - dist.probs)) <= 1e-12


def test_finite_space_admits_phase_shifted_members():
    p, _ = catalog("bos_p1")
    d = outcome_distribution(p, [np.exp(0.3j) * gates.PAULI_X, "identity"])
    assert d[(1, 0)] == pytest.approx(1.0)


@pytest.mark.parametrize("n", [2, 3, 4])
def test_classical_embedding(n):
    proc = classical_procedure(n)
    s = minority_scenario(n)
    g = induced_game(proc, s)
    tensor = g.payoff_tensor()
    for flips in itertools.product((0, 1), repeat=n):
        prof = ["pauli_x" if f else "identity" for f in flips]
        dist = outcome_distribution(proc, prof)
        assert dist[flips] == 1.0
        assert np.array_equal(tensor[flips], s.payoff(None, flips))


def test_diagonal_mixture_reproduces_distribution(rng):
    eye = np.eye(16)
    for _ in range(100):
        prob = rng.dirichlet(np.ones(16))
        proc = EwlProcedure(4, eye, eye, gates.diagonal_mixture(prob), FiniteSpace(("identity", "pauli_x")))
        assert np.max(np.abs(outcome_distribution(proc, ["identity"] * 4).probs - prob)) <= 1e-12


def test_bos_p4_mixing_reduction(rng):
    p, s = catalog("bos_p4", CatalogParams(gamma=0.0))
    table = PayoffTable2x2.battle_sexes()
    for _ in range(50):
        t1, t2 = rng.uniform(0, math.pi, 2)
        f1, f2 = rng.uniform(0, 2 * math.pi, 2)
        pay = payoff_no_input(p, s, [gates.su2((t1, f1, 0)), gates.su2((t2, f2, 0))])
        q1, q2 = math.sin(t1 / 2) ** 2, math.sin(t2 / 2) ** 2
        expected = sum(
            (q1 if a else 1 - q1) * (q2 if b else 1 - q2) * np.array(table((a, b)))
            for a in (0, 1) for b in (0, 1)
        )
        assert np.max(np.abs(pay - expected)) <= 1e-12


def test_catalog_entries():
    p, s = catalog("bos_p4")
    j = gates.ewl_j(math.pi / 2)
    assert np.array_equal(p.j_op, j)
    assert np.array_equal(p.h_op, j.conj().T)
    assert np.array_equal(p.initial_state, gates.ket_zero_density(2))
    assert p.strategy_space == GridSpace(13, 13, 0)
    p, s = catalog("minority_p3", CatalogParams(alpha=0.4))
    assert np.allclose(p.initial_state, np.outer(gates.fsslh_psi_in(0.4), gates.fsslh_psi_in(0.4).conj()))
    p, s = catalog("mod4_ghz")
    assert p.n == 3 and s.name == "modulo4" and p.strategy_space == GridSpace()
    assert len(CATALOG_NAMES) == 9
    for name in CATALOG_NAMES:
        proc, scen = catalog(name)
        assert proc.n == scen.n and proc.name == name
    with pytest.raises(KeyError):
        catalog("bos_p6")


def test_induced_game_bos():
    p1, s = catalog("bos_p1")
    p2, _ = catalog("bos_p2")
    g1, g2 = induced_game(p1, s), induced_game(p2, s)
    assert g1.sizes == g2.sizes == (2, 2)
    assert [g1.label(0, i) for i in range(2)] == [g2.label(0, i) for i in range(2)]
    assert not np.allclose(g1.payoff((0, 0)), g2.payoff((0, 0)))
    t = PayoffTable2x2.battle_sexes()
    for a, b in itertools.product((0, 1), repeat=2):
        assert np.array_equal(g1.payoff_tensor()[a, b], t((a, b)))


def test_induced_game_bounds_and_kernel_agreement(rng):
    for name in ("bos_p5", "minority_p3", "mod4_ghz"):
        p, s = catalog(name, CatalogParams(theta_points=3, phi_points=2, chi_points=2))
        g = induced_game(p, s)
        lo, hi = s.payoff_range()
        profiles = np.stack([rng.integers(0, m, size=20) for m in g.sizes], axis=1)
        fast = g.payoffs(profiles)
        assert np.all(fast >= lo - 1e-12) and np.all(fast <= hi + 1e-12)
        for prof, row in zip(profiles, fast):
            assert np.max(np.abs(g.payoff(tuple(prof)) - row)) <= 1e-12


def test_payoff_tensor_budget():
    p, s = catalog("mod4_ghz")
    g = induced_game(p, s)
    with pytest.raises(BudgetError, match="profiles"):
        g.payoff_tensor()


def test_pd_classical_game():
    g = induced_game(classical_procedure(2), prisoners_dilemma_scenario())
    assert np.array_equal(g.payoff((1, 0)), [5, 0])


def test_scenario_procedure_mismatch():
    with pytest.raises(ProfileError):
        induced_game(classical_procedure(3), battle_sexes_scenario())
    p, s = catalog("bos_p1")
    with pytest.raises(ProfileError):
        payoff(p, minority_scenario(3), ["identity"] * 2)
