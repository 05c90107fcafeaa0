"""EWL-type procedures, their outcome statistics, and the games they induce.

A procedure is the five-tuple ``(n, H, J, rho, U)``: the initial state
``rho`` is evolved by ``J``, then by the tensor product of the players'
local unitaries, then by ``H``, and measured in the computational basis.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import cached_property

import numpy as np

from . import gates, kernels
from .gates import GateLabel, Su2Params
from .qmat import (
    STRUCTURAL_TOL,
    DimensionError,
    NumericalConsistencyError,
    bits_to_index,
    evolve,
    expectation,
    index_to_bits,
    is_density_matrix,
    is_unitary,
    kron_all,
    projector,
    pure_density,
)
from .scenario import (
    NO_INPUT,
    PayoffTable2x2,
    Scenario,
    battle_sexes_scenario,
    minority_scenario,
    modulo4_scenario,
)

DEFAULT_GRID_POINTS = 13
DEFAULT_BUDGET = 10**7
TWO_PI = 2.0 * math.pi


class ProfileError(ValueError):
    """A strategy profile does not fit the procedure or scenario."""


class BudgetError(RuntimeError):
    """An exhaustive search would exceed the configured evaluation budget."""


def _same_up_to_phase(u, v, tol=STRUCTURAL_TOL) -> bool:
    # |Tr(u^dagger v)| = 2 iff v = e^{i delta} u, for 2x2 unitaries
    return abs(abs(np.trace(u.conj().T @ v)) - 2.0) <= tol


@dataclass(frozen=True)
class FiniteSpace:
    labels: tuple[GateLabel, ...]

    def __post_init__(self):
        if not self.labels:
            raise ValueError("finite strategy space must be non-empty")
        object.__setattr__(
            self, "labels", tuple(GateLabel(l) if isinstance(l, str) else l for l in self.labels)
        )

    def members(self) -> tuple[list[str], np.ndarray]:
        return [str(l) for l in self.labels], np.array([gates.named_gate(l) for l in self.labels])

    def contains(self, u) -> bool:
        """Membership up to a global phase, which no outcome can detect."""
        return any(_same_up_to_phase(gates.named_gate(l), u) for l in self.labels)


@dataclass(frozen=True)
class GridSpace:
    """Discretised SU(2) family; an axis with 0 points is held at 0.

    ``theta`` samples a closed range; the periodic ``phi`` and ``chi`` axes
    sample ``points`` equally spaced values from ``lo`` without the end point.
    """

    theta_points: int = DEFAULT_GRID_POINTS
    phi_points: int = DEFAULT_GRID_POINTS
    chi_points: int = DEFAULT_GRID_POINTS
    theta_range: tuple[float, float] = (0.0, math.pi)
    phi_range: tuple[float, float] = (0.0, TWO_PI)
    chi_range: tuple[float, float] = (0.0, TWO_PI)

    def __post_init__(self):
        if self.theta_points < 2:
            raise ValueError("theta axis needs at least 2 points")
        for axis in ("phi", "chi"):
            pts = getattr(self, f"{axis}_points")
            if pts == 1 or pts < 0:
                raise ValueError(f"{axis} axis needs 0 (inactive) or at least 2 points")
        lo, hi = self.theta_range
        if not 0.0 <= lo < hi <= math.pi:
            raise ValueError(f"theta_range {self.theta_range} outside [0, pi]")
        for axis in ("phi", "chi"):
            lo, hi = getattr(self, f"{axis}_range")
            if not 0.0 <= lo < hi <= TWO_PI:
                raise ValueError(f"{axis}_range outside [0, 2pi]")

    def axes(self):
        theta = np.linspace(*self.theta_range, self.theta_points)
        phi = np.linspace(*self.phi_range, self.phi_points, endpoint=False) if self.phi_points else [0.0]
        chi = np.linspace(*self.chi_range, self.chi_points, endpoint=False) if self.chi_points else [0.0]
        return theta, phi, chi

    def params(self) -> list[Su2Params]:
        theta, phi, chi = self.axes()
        return [Su2Params(float(t), float(p), float(c)) for t in theta for p in phi for c in chi]

    def members(self) -> tuple[list[str], np.ndarray]:
        ps = self.params()
        return [str(GateLabel("su2", params=p)) for p in ps], np.array([gates.su2(p) for p in ps])

    def contains(self, u) -> bool:
        """Membership in the continuous family the grid discretises, up to phase.

        Full SU(2) (both phase axes active) admits every unitary. A held axis
        constrains the matching entry of the SU(2) representative to carry
        that phase, up to the sign ambiguity of the representative.
        """
        if not is_unitary(u):
            return False
        w = u / np.sqrt(np.linalg.det(u))
        for points, entry in ((self.phi_points, w[0, 0]), (self.chi_points, w[0, 1])):
            if points or abs(entry) <= STRUCTURAL_TOL:
                continue
            if abs(entry.imag) > STRUCTURAL_TOL * max(1.0, abs(entry)):
                return False
        return True


StrategySpace = FiniteSpace | GridSpace


@dataclass(frozen=True, eq=False)
class EwlProcedure:
    n: int
    h_op: np.ndarray
    j_op: np.ndarray
    initial_state: np.ndarray
    strategy_space: FiniteSpace | GridSpace
    name: str = "custom"

    def __post_init__(self):
        d = 2**self.n
        for attr in ("h_op", "j_op", "initial_state"):
            m = np.asarray(getattr(self, attr), dtype=np.complex128)
            if m.shape != (d, d):
                raise DimensionError(f"{attr} has shape {m.shape}, expected {(d, d)}")
            object.__setattr__(self, attr, m)
        if not is_unitary(self.h_op):
            raise NumericalConsistencyError("H is not unitary")
        if not is_unitary(self.j_op):
            raise NumericalConsistencyError("J is not unitary")
        if not is_density_matrix(self.initial_state):
            raise NumericalConsistencyError("initial state is not a density matrix")

    @cached_property
    def rho_j(self) -> np.ndarray:
        """``J rho J^dagger``; profile independent, so computed once."""
        return self.j_op @ self.initial_state @ self.j_op.conj().T

    @cached_property
    def h_is_identity(self) -> bool:
        return bool(np.array_equal(self.h_op, np.eye(2**self.n)))


@dataclass(frozen=True, eq=False)
class OutcomeDistribution:
    n: int
    probs: np.ndarray  # indexed by big-endian output index

    @property
    def mass(self) -> dict[tuple[int, ...], float]:
        return {index_to_bits(i, self.n): float(p) for i, p in enumerate(self.probs)}

    def __getitem__(self, bits) -> float:
        return float(self.probs[bits_to_index(bits)])

    def support(self, tol: float = 0.0) -> list[tuple[int, ...]]:
        return [index_to_bits(i, self.n) for i, p in enumerate(self.probs) if p > tol]


def _as_unitary(s) -> np.ndarray:
    if isinstance(s, (str, GateLabel)):
        return gates.named_gate(s)
    return np.asarray(s, dtype=np.complex128)


def normalize_profile(p: EwlProcedure, prof, paired: bool) -> list:
    """Coerce a profile to per-player unitaries (or unitary pairs) and check membership."""
    prof = list(prof)
    if len(prof) != p.n:
        raise ProfileError(f"profile has {len(prof)} strategies for {p.n} players")
    out = []
    for i, s in enumerate(prof):
        if paired:
            if isinstance(s, (str, GateLabel)) or np.ndim(s) == 2:
                raise ProfileError(f"player {i + 1} needs a pair (U_0, U_1) for an input scenario")
            us = tuple(_as_unitary(u) for u in s)
            if len(us) != 2:
                raise ProfileError(f"player {i + 1} needs exactly two unitaries")
        else:
            us = (_as_unitary(s),)
        for u in us:
            if u.shape != (2, 2):
                raise ProfileError(f"player {i + 1} strategy has shape {u.shape}")
            if not p.strategy_space.contains(u):
                raise ProfileError(f"player {i + 1} strategy is not in the procedure's strategy space")
        out.append(us if paired else us[0])
    return out


def outcome_distribution(p: EwlProcedure, prof, x=NO_INPUT) -> OutcomeDistribution:
    """Measurement statistics for one profile and one input.

    ``prof`` holds one unitary per player, or one ``(U_0, U_1)`` pair per
    player when ``x`` is an input vector; player ``i`` then uses ``U_{x_i}``.
    """
    paired = x is not NO_INPUT
    units = normalize_profile(p, prof, paired)
    if paired:
        if len(x) != p.n:
            raise ProfileError(f"input {x!r} has wrong length for {p.n} players")
        units = [pair[int(b)] for pair, b in zip(units, x)]
    local = kron_all(units)
    rho = evolve(p.initial_state, p.j_op)
    rho = evolve(rho, local)
    rho = evolve(rho, p.h_op)
    probs = np.array([expectation(rho, projector(index_to_bits(i, p.n))) for i in range(2**p.n)])
    total = probs.sum()
    if abs(total - 1.0) > STRUCTURAL_TOL:
        raise NumericalConsistencyError(f"outcome masses sum to {total!r}")
    return OutcomeDistribution(p.n, probs)


def _check_match(p: EwlProcedure, s: Scenario):
    if p.n != s.n:
        raise ProfileError(f"procedure has {p.n} players, scenario {s.name} has {s.n}")


def payoff_no_input(p: EwlProcedure, s: Scenario, prof) -> np.ndarray:
    _check_match(p, s)
    if s.has_input:
        raise ProfileError(f"scenario {s.name} has inputs; use payoff_with_input")
    dist = outcome_distribution(p, prof)
    return dist.probs @ s.payoff_array()[0]


def payoff_with_input(p: EwlProcedure, s: Scenario, prof) -> np.ndarray:
    _check_match(p, s)
    if not s.has_input:
        raise ProfileError(f"scenario {s.name} has no inputs; use payoff_no_input")
    table = s.payoff_array()
    total = np.zeros(s.n)
    for i, x in enumerate(s.inputs):
        total += outcome_distribution(p, prof, x).probs @ table[i]
    return total / len(s.inputs)


def payoff(p: EwlProcedure, s: Scenario, prof) -> np.ndarray:
    return payoff_with_input(p, s, prof) if s.has_input else payoff_no_input(p, s, prof)


class InducedGame:
    """The static game a procedure implements within a scenario.

    Player ``i`` chooses among the members of the procedure's strategy space
    (or ordered pairs of members when the scenario has inputs). Profiles are
    tuples of strategy indices; their canonical order is lexicographic with
    player 1 most significant.
    """

    def __init__(self, procedure: EwlProcedure, scenario: Scenario):
        _check_match(procedure, scenario)
        self.procedure = procedure
        self.scenario = scenario
        self.n = procedure.n
        self.paired = scenario.has_input
        self._base_labels, self._base = procedure.strategy_space.members()
        m = len(self._base_labels)
        self.sizes = tuple([m * m if self.paired else m] * self.n)
        self._table = scenario.payoff_array()

    def __repr__(self):
        return f"InducedGame({self.procedure.name!r}, {self.scenario.name!r}, sizes={self.sizes})"

    @property
    def num_profiles(self) -> int:
        return math.prod(self.sizes)

    def label(self, player: int, index: int) -> str:
        m = len(self._base_labels)
        if self.paired:
            return f"({self._base_labels[index // m]}|{self._base_labels[index % m]})"
        return self._base_labels[index]

    def strategy(self, player: int, index: int):
        m = len(self._base_labels)
        if self.paired:
            return (self._base[index // m], self._base[index % m])
        return self._base[index]

    def profile_labels(self, profile) -> tuple[str, ...]:
        return tuple(self.label(i, s) for i, s in enumerate(profile))

    def payoff(self, profile) -> np.ndarray:
        """Payoff vector at an index profile, through the reference density-matrix path."""
        strategies = [self.strategy(i, s) for i, s in enumerate(profile)]
        return payoff(self.procedure, self.scenario, strategies)

    def payoffs(self, profiles, chunk: int = 1 << 15) -> np.ndarray:
        """Payoff vectors for an integer array of profiles, shape ``(B, n)``, via the kernel."""
        profiles = np.asarray(profiles, dtype=np.int64).reshape(-1, self.n)
        if np.any(profiles < 0) or np.any(profiles >= np.array(self.sizes)):
            raise ProfileError("strategy index out of range")
        if len(profiles) <= chunk:
            return self._payoffs(profiles)
        return np.concatenate(
            [self._payoffs(profiles[i : i + chunk]) for i in range(0, len(profiles), chunk)]
        )

    def _payoffs(self, profiles) -> np.ndarray:
        m = len(self._base_labels)
        p = self.procedure
        h = None if p.h_is_identity else p.h_op
        if not self.paired:
            units = self._base[profiles]
            probs = kernels.outcome_probs_batch(p.rho_j, h, np.ascontiguousarray(units))
            return probs @ self._table[0]
        first, second = self._base[profiles // m], self._base[profiles % m]
        total = np.zeros((len(profiles), self.n))
        for i, x in enumerate(self.scenario.inputs):
            sel = np.array(x, dtype=bool)
            units = np.where(sel[None, :, None, None], second, first)
            probs = kernels.outcome_probs_batch(p.rho_j, h, np.ascontiguousarray(units))
            total += probs @ self._table[i]
        return total / len(self.scenario.inputs)

    def payoff_tensor(self, budget: int = DEFAULT_BUDGET, chunk: int = 1 << 15) -> np.ndarray:
        """All payoff vectors, shape ``sizes + (n,)``."""
        total = self.num_profiles
        if total > budget:
            raise BudgetError(f"profile space has {total} profiles, budget is {budget}")
        out = np.empty((total, self.n))
        for start in range(0, total, chunk):
            flat = np.arange(start, min(start + chunk, total))
            profiles = np.stack(np.unravel_index(flat, self.sizes), axis=1)
            out[start : start + len(flat)] = self._payoffs(profiles)
        return out.reshape(self.sizes + (self.n,))

    def deviation_payoffs(self, player: int, profile, budget: int = DEFAULT_BUDGET) -> np.ndarray:
        """Player's payoff for every own strategy, others held at ``profile``."""
        m = self.sizes[player]
        if m > budget:
            raise BudgetError(f"player {player + 1} has {m} strategies, budget is {budget}")
        profiles = np.tile(np.asarray(profile, dtype=np.int64), (m, 1))
        profiles[:, player] = np.arange(m)
        return self.payoffs(profiles)[:, player]


def induced_game(p: EwlProcedure, s: Scenario) -> InducedGame:
    return InducedGame(p, s)


def classical_procedure(n: int) -> EwlProcedure:
    """``J = H = 1``, ``rho = |0...0><0...0|``, strategies ``{1, sigma_x}``."""
    eye = np.eye(2**n, dtype=np.complex128)
    return EwlProcedure(
        n, eye, eye, gates.ket_zero_density(n), FiniteSpace(("identity", "pauli_x")), name=f"classical_{n}"
    )


@dataclass(frozen=True)
class CatalogParams:
    gamma: float = gates.DEFAULT_GAMMA
    alpha: float = 1.0
    eps1: float = gates.DEFAULT_EPS[0]
    eps2: float = gates.DEFAULT_EPS[1]
    theta_points: int = DEFAULT_GRID_POINTS
    phi_points: int = DEFAULT_GRID_POINTS
    chi_points: int = DEFAULT_GRID_POINTS
    bos_table: PayoffTable2x2 = field(default_factory=PayoffTable2x2.battle_sexes)


CLASSICAL_SPACE = FiniteSpace(("identity", "pauli_x"))


def _bos(name, rho, c: CatalogParams, j=None, space=CLASSICAL_SPACE):
    j = np.eye(4, dtype=np.complex128) if j is None else j
    proc = EwlProcedure(2, j.conj().T, j, rho, space, name=name)
    return proc, battle_sexes_scenario(c.bos_table)


def _minority(name, rho, space=CLASSICAL_SPACE):
    eye = np.eye(16, dtype=np.complex128)
    return EwlProcedure(4, eye, eye, rho, space, name=name), minority_scenario(4)


def _full_grid(c: CatalogParams) -> GridSpace:
    return GridSpace(c.theta_points, c.phi_points, c.chi_points)


def _build(name: str, c: CatalogParams):
    if name == "bos_p1":
        return _bos(name, gates.ket_zero_density(2), c)
    if name == "bos_p2":
        return _bos(name, gates.bell_density(), c)
    if name == "bos_p3":
        return _bos(name, gates.f09_rho(c.eps1, c.eps2), c)
    if name == "bos_p4":
        space = GridSpace(c.theta_points, c.phi_points, 0)
        return _bos(name, gates.ket_zero_density(2), c, j=gates.ewl_j(c.gamma), space=space)
    if name == "bos_p5":
        return _bos(name, gates.ket_zero_density(2), c, j=gates.ewl_j(c.gamma), space=_full_grid(c))
    if name == "minority_p1":
        return _minority(name, gates.ket_zero_density(4))
    if name == "minority_p2":
        return _minority(name, gates.minority_rho_in())
    if name == "minority_p3":
        return _minority(name, pure_density(gates.fsslh_psi_in(c.alpha)), _full_grid(c))
    if name == "mod4_ghz":
        eye = np.eye(8, dtype=np.complex128)
        proc = EwlProcedure(3, eye, eye, pure_density(gates.ghz_state(3)), _full_grid(c), name=name)
        return proc, modulo4_scenario()
    raise KeyError(f"unknown catalog procedure {name!r}; known: {', '.join(CATALOG_NAMES)}")


CATALOG_NAMES = (
    "bos_p1", "bos_p2", "bos_p3", "bos_p4", "bos_p5",
    "minority_p1", "minority_p2", "minority_p3", "mod4_ghz",
)


def catalog(name: str, params: CatalogParams | None = None) -> tuple[EwlProcedure, Scenario]:
    return _build(name, params or CatalogParams())


__all__ = [
    "EwlProcedure", "FiniteSpace", "GridSpace", "OutcomeDistribution", "InducedGame",
    "CatalogParams", "ProfileError", "BudgetError", "outcome_distribution",
    "payoff_no_input", "payoff_with_input", "payoff", "induced_game", "catalog",
    "classical_procedure", "CATALOG_NAMES", "DEFAULT_BUDGET",
]
