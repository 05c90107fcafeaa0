"""Equilibrium analysis over induced games.

Profiles are tuples of strategy indices into an :class:`InducedGame`. All
searches are exhaustive over the (finite or grid-discretised) strategy sets
and report results in canonical lexicographic order. Payoff comparisons use
an absolute slack of ``EXACT_TOL`` so float noise never creates or hides an
improvement.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .ewl import DEFAULT_BUDGET, BudgetError, InducedGame, OutcomeDistribution
from .qmat import EXACT_TOL
from .scenario import Scenario


@dataclass(frozen=True)
class NashReport:
    profile: tuple[int, ...]
    labels: tuple[str, ...]
    payoffs: tuple[float, ...]
    epsilon: float


@dataclass(frozen=True)
class ClassicalBoundReport:
    # best_profile[i][b] is player i's output on input bit b
    best_profile: tuple[tuple[int, ...], ...]
    value: float
    exact: Fraction
    payoffs: tuple[float, ...]


def _first_max(values: np.ndarray, tol: float = EXACT_TOL) -> int:
    return int(np.flatnonzero(values >= values.max() - tol)[0])


def best_response(g: InducedGame, player: int, profile) -> tuple[int, float]:
    """Index of ``player``'s best strategy against ``profile`` and its payoff."""
    if not 0 <= player < g.n:
        raise IndexError(f"player {player} out of range for {g.n} players")
    values = g.deviation_payoffs(player, profile)
    best = _first_max(values)
    return best, float(values[best])


def deviation_gap(g: InducedGame, profile) -> float:
    """Largest unilateral improvement any player can make from ``profile``."""
    current = g.payoffs([profile])[0]
    gap = 0.0
    for i in range(g.n):
        gap = max(gap, float(g.deviation_payoffs(i, profile).max() - current[i]))
    return gap


def find_pure_nash(g: InducedGame, epsilon: float = 0.0, budget: int = DEFAULT_BUDGET) -> list[NashReport]:
    """Every profile from which no player gains more than ``epsilon`` by deviating."""
    if epsilon < 0:
        raise ValueError("epsilon must be non-negative")
    table = g.payoff_tensor(budget)
    gap = np.zeros(g.sizes)
    for i in range(g.n):
        own = table[..., i]
        gap = np.maximum(gap, own.max(axis=i, keepdims=True) - own)
    reports = []
    for idx in np.argwhere(gap <= epsilon + EXACT_TOL):
        prof = tuple(int(v) for v in idx)
        reports.append(
            NashReport(
                profile=prof,
                labels=g.profile_labels(prof),
                payoffs=tuple(float(v) for v in table[prof]),
                epsilon=float(gap[prof]),
            )
        )
    return reports


def all_profiles(g: InducedGame, budget: int = DEFAULT_BUDGET) -> np.ndarray:
    if g.num_profiles > budget:
        raise BudgetError(f"profile space has {g.num_profiles} profiles, budget is {budget}")
    return np.stack(np.unravel_index(np.arange(g.num_profiles), g.sizes), axis=1)


def is_pareto_optimal(g: InducedGame, profile, candidates=None, budget: int = DEFAULT_BUDGET) -> bool:
    """True iff no candidate weakly improves everyone and strictly improves someone.

    ``candidates`` defaults to the whole profile space.
    """
    if candidates is None:
        candidates = all_profiles(g, budget)
    candidates = np.asarray(candidates, dtype=np.int64).reshape(-1, g.n)
    own = g.payoffs([profile])[0]
    others = g.payoffs(candidates)
    weakly = np.all(others >= own - EXACT_TOL, axis=1)
    strictly = np.any(others > own + EXACT_TOL, axis=1)
    return not bool(np.any(weakly & strictly))


def classical_deterministic_bound(s: Scenario, budget: int = DEFAULT_BUDGET) -> ClassicalBoundReport:
    """Best uniform-average payoff of player 1 over deterministic local response functions.

    Each player maps their own input symbol to an output symbol with no
    shared resource. Randomised local strategies cannot do better: the
    averaged payoff is linear in each player's mixing weights, so a
    deterministic vertex attains the maximum. Averages are accumulated as
    exact fractions.
    """
    if not s.has_input:
        raise ValueError(f"scenario {s.name} has no inputs")
    funcs = list(itertools.product(range(s.k), repeat=s.k))
    count = len(funcs) ** s.n
    if count * len(s.inputs) > budget:
        raise BudgetError(f"{count} deterministic profiles exceed budget {budget}")
    table = {(x, y): [Fraction(float(v)) for v in s.payoff(x, y)] for x in s.inputs for y in s.outputs}
    outputs = set(s.outputs)
    best, best_value, best_payoffs = None, None, None
    for prof in itertools.product(funcs, repeat=s.n):
        totals = [Fraction(0)] * s.n
        for x in s.inputs:
            y = tuple(f[b] for f, b in zip(prof, x))
            if y not in outputs:
                break
            totals = [t + v for t, v in zip(totals, table[(x, y)])]
        else:
            avg = [t / len(s.inputs) for t in totals]
            if best_value is None or avg[0] > best_value:
                best, best_value, best_payoffs = prof, avg[0], avg
    return ClassicalBoundReport(
        best_profile=best,
        value=float(best_value),
        exact=best_value,
        payoffs=tuple(float(v) for v in best_payoffs),
    )


DECKS = np.array([[0, 0, 0, 1], [1, 1, 1, 0]])


def card_deck_sampler(num_samples: int, seed: int) -> OutcomeDistribution:
    """Empirical distribution of dealt hands in the two-deck card process.

    A helper picks one of the decks {0,0,0,1} and {1,1,1,0} uniformly,
    shuffles it and deals one card to each of four players.
    """
    if num_samples < 1:
        raise ValueError("num_samples must be positive")
    rng = np.random.default_rng(seed)
    hands = DECKS[rng.integers(0, 2, size=num_samples)]
    hands = rng.permuted(hands, axis=1)
    index = hands @ np.array([8, 4, 2, 1])
    counts = np.bincount(index, minlength=16)
    return OutcomeDistribution(4, counts / num_samples)


def expected_payoffs(dist: OutcomeDistribution, s: Scenario) -> np.ndarray:
    """Payoff vector when each player outputs what the distribution deals them."""
    if s.has_input:
        raise ValueError("expected_payoffs needs an input-free scenario")
    return dist.probs @ s.payoff_array()[0]


def grid_search_symmetric_max(g: InducedGame, budget: int = DEFAULT_BUDGET) -> tuple[int, float]:
    """Best strategy when every player must use the same one.

    The objective is the mean payoff across players, which is the common
    payoff whenever the game is symmetric. This restriction is a search aid,
    never part of an equilibrium check.
    """
    m = g.sizes[0]
    if m > budget:
        raise BudgetError(f"{m} symmetric profiles exceed budget {budget}")
    profiles = np.repeat(np.arange(m)[:, None], g.n, axis=1)
    values = g.payoffs(profiles).mean(axis=1)
    best = _first_max(values)
    return best, float(values[best])
