"""Simulate EWL-type quantum procedures and analyse the static games they induce."""
from .equilibrium import (
    ClassicalBoundReport,
    NashReport,
    best_response,
    card_deck_sampler,
    classical_deterministic_bound,
    deviation_gap,
    find_pure_nash,
    grid_search_symmetric_max,
    is_pareto_optimal,
)
from .ewl import (
    CATALOG_NAMES,
    BudgetError,
    CatalogParams,
    EwlProcedure,
    FiniteSpace,
    GridSpace,
    InducedGame,
    OutcomeDistribution,
    ProfileError,
    catalog,
    classical_procedure,
    induced_game,
    outcome_distribution,
    payoff,
    payoff_no_input,
    payoff_with_input,
)
from .kernels import BACKEND
from .scenario import (
    PayoffTable2x2,
    Scenario,
    battle_sexes_scenario,
    minority_scenario,
    modulo4_scenario,
    prisoners_dilemma_scenario,
)

__version__ = "0.1.0"

__all__ = [
    "BACKEND", "CATALOG_NAMES", "BudgetError", "CatalogParams", "ClassicalBoundReport",
    "EwlProcedure", "FiniteSpace", "GridSpace", "InducedGame", "NashReport",
    "OutcomeDistribution", "PayoffTable2x2", "ProfileError", "Scenario",
    "battle_sexes_scenario", "best_response", "card_deck_sampler", "catalog",
    "classical_deterministic_bound", "classical_procedure", "deviation_gap",
    "find_pure_nash", "grid_search_symmetric_max", "induced_game", "is_pareto_optimal",
    "minority_scenario", "modulo4_scenario", "outcome_distribution", "payoff", "payoff_no_input",
    "payoff_with_input", "prisoners_dilemma_scenario",
]
