"""Machine checks of the framework's quantitative claims.

Each check returns a :class:`ClaimResult`. Equality claims pass when the
max-norm distance between computed and expected values is within the
tolerance; threshold claims (``comparison=">="``) pass when the computed
value is at least the expected bound.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass

import numpy as np

from . import equilibrium as eq
from . import gates
from .ewl import (
    CatalogParams,
    EwlProcedure,
    FiniteSpace,
    catalog,
    induced_game,
    outcome_distribution,
    payoff,
)
from .qmat import kron_all, evolve
from .scenario import PayoffTable2x2, minority_scenario, modulo4_scenario

SEED = 20100217
RANDOM_CASES = 100


@dataclass(frozen=True)
class ClaimResult:
    claim: str
    expected: object
    computed: object
    tolerance: float
    passed: bool
    note: str = ""
    comparison: str = "=="

    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        return f"[{status}] {self.claim}: computed={_short(self.computed)} {self.comparison} expected={_short(self.expected)} (tol {self.tolerance:g})"


def _short(v) -> str:
    if isinstance(v, list) and v and isinstance(v[0], tuple):
        return str(v)
    if isinstance(v, (list, tuple, np.ndarray)):
        arr = np.asarray(v, dtype=float).ravel()
        if len(arr) > 6:
            return f"[{len(arr)} values, max {arr.max():.12g}]"
        return "[" + ", ".join(f"{x:.12g}" for x in arr) + "]"
    if isinstance(v, bool):
        return str(v).lower()
    if isinstance(v, (float, int, np.floating)):
        return f"{float(v):.12g}"
    return str(v)


def equal_claim(claim, expected, computed, tol, note="") -> ClaimResult:
    e = np.atleast_1d(np.asarray(expected, dtype=float))
    c = np.atleast_1d(np.asarray(computed, dtype=float))
    passed = e.shape == c.shape and bool(np.max(np.abs(e - c)) <= tol)
    return ClaimResult(claim, _plain(expected), _plain(computed), tol, passed, note)


def at_least_claim(claim, bound, computed, note="") -> ClaimResult:
    return ClaimResult(claim, float(bound), float(computed), 0.0, bool(computed >= bound), note, ">=")


def _plain(v):
    if isinstance(v, np.ndarray):
        return [float(x) for x in v.ravel()]
    if isinstance(v, (np.floating, np.integer)):
        return float(v)
    return v


ODD_PARITY = np.array([bin(i).count("1") % 2 / 8.0 for i in range(16)])


def check_minority_p2_distribution() -> list[ClaimResult]:
    p, _ = catalog("minority_p2")
    dist = outcome_distribution(p, ["identity"] * 4)
    return [equal_claim("minority_p2_distribution", ODD_PARITY, dist.probs, 1e-12,
                        "1/8 on each odd-parity output, 0 elsewhere")]


def check_minority_p2_equilibrium() -> list[ClaimResult]:
    p, s = catalog("minority_p2")
    g = induced_game(p, s)
    ident = (0, 0, 0, 0)
    pay = payoff(p, s, ["identity"] * 4)
    deviator = []
    for i in range(4):
        prof = ["identity"] * 4
        prof[i] = "pauli_x"
        deviator.append(payoff(p, s, prof)[i])
    pareto = eq.is_pareto_optimal(g, ident)
    return [
        equal_claim("minority_p2_payoff", [0.25] * 4, pay, 1e-12),
        equal_claim("minority_p2_deviation_payoff", [0.0] * 4, deviator, 1e-12,
                    "a lone sigma_x deviator earns 0, so the identity profile is an exact Nash equilibrium"),
        equal_claim("minority_p2_pareto_optimal", 1.0, float(pareto), 0.0, "against all 16 profiles"),
    ]


MOD4_WINNING = [("hadamard", "s_dagger_hadamard")] * 3


def mod4_win_probabilities() -> np.ndarray:
    p, s = catalog("mod4_ghz")
    table = s.payoff_array()
    return np.array([outcome_distribution(p, MOD4_WINNING, x).probs @ table[i][:, 0]
                     for i, x in enumerate(s.inputs)])


def check_mod4() -> list[ClaimResult]:
    wins = mod4_win_probabilities()
    bound = eq.classical_deterministic_bound(modulo4_scenario())
    p, s = catalog("mod4_ghz")
    quantum = payoff(p, s, MOD4_WINNING)
    return [
        equal_claim("mod4_quantum_value", [1.0] * 4, wins, 1e-9, "win probability per input, GHZ procedure"),
        equal_claim("mod4_quantum_payoff", [1.0] * 3, quantum, 1e-9),
        equal_claim("mod4_classical_bound", 0.75, float(bound.exact), 0.0, f"exact value {bound.exact}"),
        ClaimResult("mod4_quantum_gap", 0.75, float(quantum.min()), 0.0,
                    bool(quantum.min() > float(bound.exact)), "quantum value strictly exceeds classical bound", ">"),
    ]


def check_bos_p1() -> list[ClaimResult]:
    table = PayoffTable2x2.battle_sexes()
    p, s = catalog("bos_p1", CatalogParams(bos_table=table))
    g = induced_game(p, s)
    tensor = g.payoff_tensor()
    expected = np.array([[table((a, b)) for b in (0, 1)] for a in (0, 1)])
    nash = [r.profile for r in eq.find_pure_nash(g, 0.0)]
    return [
        equal_claim("bos_p1_payoff_table", expected, tensor, 0.0, "induced game equals the classical table exactly"),
        ClaimResult("bos_p1_nash", [(0, 0), (1, 1)], nash, 0.0, nash == [(0, 0), (1, 1)],
                    "exactly the two coordination profiles"),
    ]


def check_bos_inequivalence() -> list[ClaimResult]:
    table = PayoffTable2x2.battle_sexes()
    tensors = {}
    for name in ("bos_p1", "bos_p2", "bos_p3"):
        p, s = catalog(name, CatalogParams(bos_table=table))
        tensors[name] = induced_game(p, s).payoff_tensor()
    gaps = [float(np.max(np.abs(tensors[a] - tensors[b]))) for a, b in itertools.combinations(tensors, 2)]
    p, s = catalog("bos_p2", CatalogParams(bos_table=table))
    bell = payoff(p, s, ["identity"] * 2)
    expected = [(table.p1((0, 0)) + table.p1((1, 1))) / 2, (table.p2((0, 0)) + table.p2((1, 1))) / 2]
    return [
        ClaimResult("bos_procedures_differ", 1e-9, min(gaps), 0.0, min(gaps) > 1e-9,
                    "smallest pairwise max payoff difference among P1, P2, P3", ">"),
        equal_claim("bos_p2_identity_payoff", expected, bell, 1e-12),
    ]


def check_separability(cases: int = RANDOM_CASES) -> list[ClaimResult]:
    rng = np.random.default_rng(SEED)
    worst = 0.0
    space = FiniteSpace(("identity", "pauli_x"))
    eye = np.eye(16, dtype=np.complex128)
    for _ in range(cases):
        prob = rng.dirichlet(np.ones(16))
        proc = EwlProcedure(4, eye, eye, gates.diagonal_mixture(prob), space)
        dist = outcome_distribution(proc, ["identity"] * 4)
        worst = max(worst, float(np.max(np.abs(dist.probs - prob))))
    return [equal_claim("separable_mixture_reproduces_distribution", 0.0, worst, 1e-12,
                        f"worst entry error over {cases} random distributions")]


def check_card_deck(samples: int = 1_000_000, seed: int = SEED) -> list[ClaimResult]:
    dist = eq.card_deck_sampler(samples, seed)
    pay = eq.expected_payoffs(dist, minority_scenario(4))
    outside = float(dist.probs[ODD_PARITY == 0].sum())
    return [
        equal_claim("card_deck_payoff", [0.25] * 4, pay, 0.005, f"{samples} seeded samples"),
        equal_claim("card_deck_support_odd_parity", 0.0, outside, 0.0, "mass outside odd-parity outputs"),
    ]


def check_minority_p3() -> list[ClaimResult]:
    out = []
    for points, bound in ((13, 0.23), (25, 0.245)):
        p, s = catalog("minority_p3", CatalogParams(alpha=1.0, theta_points=points, phi_points=points, chi_points=points))
        _, value = eq.grid_search_symmetric_max(induced_game(p, s))
        out.append(at_least_claim(f"minority_p3_symmetric_max_{points}", bound, value, f"{points}^3 grid, alpha=1"))
    return out


def _random_su2(rng) -> np.ndarray:
    return gates.su2((rng.uniform(0, math.pi), rng.uniform(0, 2 * math.pi), rng.uniform(0, 2 * math.pi)))


def _random_density(rng, d) -> np.ndarray:
    a = rng.normal(size=(d, d)) + 1j * rng.normal(size=(d, d))
    rho = a @ a.conj().T
    return rho / np.trace(rho).real


def check_structural(cases: int = RANDOM_CASES) -> list[ClaimResult]:
    rng = np.random.default_rng(SEED + 1)
    norm_err = phase_err = det_err = trace_err = 0.0
    names = ("bos_p5", "minority_p3", "mod4_ghz")
    procs = {name: catalog(name) for name in names}
    for k in range(cases):
        p, s = procs[names[k % len(names)]]
        if s.has_input:
            prof = [(_random_su2(rng), _random_su2(rng)) for _ in range(p.n)]
            x = s.inputs[k % len(s.inputs)]
        else:
            prof = [_random_su2(rng) for _ in range(p.n)]
            x = None
        dist = outcome_distribution(p, prof, x)
        norm_err = max(norm_err, abs(dist.probs.sum() - 1.0))
        who = int(rng.integers(p.n))
        shifted = list(prof)
        phase = np.exp(1j * rng.uniform(0, 2 * math.pi))
        shifted[who] = tuple(phase * u for u in prof[who]) if s.has_input else phase * prof[who]
        phase_err = max(phase_err, float(np.max(np.abs(outcome_distribution(p, shifted, x).probs - dist.probs))))

        u = _random_su2(rng)
        det_err = max(det_err, abs(np.linalg.det(u) - 1.0))

        n = int(rng.integers(1, 6))
        rho = _random_density(rng, 2**n)
        big_u = kron_all([_random_su2(rng) for _ in range(n)])
        trace_err = max(trace_err, abs(np.trace(evolve(rho, big_u)) - np.trace(rho)))
    return [
        equal_claim("normalization", 0.0, norm_err, 1e-9, f"{cases} random profiles"),
        equal_claim("global_phase_invariance", 0.0, phase_err, 1e-12, f"{cases} random phases"),
        equal_claim("su2_determinant", 0.0, det_err, 1e-12, f"{cases} random parameter triples"),
        equal_claim("evolve_trace_preservation", 0.0, trace_err, 1e-12, f"{cases} random states"),
    ]


CHECKS = (
    check_minority_p2_distribution,
    check_minority_p2_equilibrium,
    check_mod4,
    check_bos_p1,
    check_bos_inequivalence,
    check_separability,
    check_card_deck,
    check_minority_p3,
    check_structural,
)


def verify_claims(samples: int = 1_000_000, seed: int = SEED) -> list[ClaimResult]:
    """Run every check; ``samples`` and ``seed`` drive the card-deck sampler."""
    results = []
    for check in CHECKS:
        results.extend(check(samples, seed) if check is check_card_deck else check())
    return results


def claims_report(results: list[ClaimResult] | None = None):
    from .runner import Report, fmt

    results = verify_claims() if results is None else results
    rows = [[r.claim, _short(r.expected), r.comparison, _short(r.computed), fmt(r.tolerance),
             "pass" if r.passed else "fail", r.note] for r in results]
    data = {
        "analysis": "verify_claims",
        "all_passed": all(r.passed for r in results),
        "claims": [
            {"claim": r.claim, "expected": r.expected, "computed": r.computed, "comparison": r.comparison,
             "tolerance": r.tolerance, "passed": r.passed, "note": r.note}
            for r in results
        ],
    }
    return Report(["claim", "expected", "comparison", "computed", "tolerance", "status", "note"], rows, data)
