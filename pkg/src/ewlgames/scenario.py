"""Scenarios: valid inputs, valid outputs and an evaluating function per player."""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .qmat import MAX_QUBITS, bits_to_index

Bits = tuple[int, ...]

# Stands in for the empty input set so that input-free and input scenarios
# share one payoff path with |inputs| == 1.
NO_INPUT = None


class ConstraintError(ValueError):
    """A payoff table violates the ordering its scenario requires."""


@dataclass(frozen=True)
class Scenario:
    name: str
    n: int
    inputs: tuple  # tuple of bit tuples, or (NO_INPUT,)
    outputs: tuple[Bits, ...]
    evaluate: Callable = field(repr=False, compare=False)
    k: int = 2

    def __post_init__(self):
        if not 1 <= self.n <= MAX_QUBITS:
            raise ValueError(f"n={self.n} outside 1..{MAX_QUBITS}")
        for y in self.outputs:
            _check_bits(y, self.n, self.k, "output")
        if self.has_input:
            for x in self.inputs:
                _check_bits(x, self.n, self.k, "input")
        elif self.inputs != (NO_INPUT,):
            raise ValueError("inputs must be non-empty bit vectors or (NO_INPUT,)")

    @property
    def has_input(self) -> bool:
        return self.inputs != (NO_INPUT,)

    def payoff(self, x, y) -> np.ndarray:
        return np.asarray(self.evaluate(x, tuple(y)), dtype=float)

    def payoff_array(self) -> np.ndarray:
        """Payoffs as an array of shape ``(len(inputs), 2**n, n)``.

        The middle axis is the big-endian output index; outputs outside the
        scenario's output set carry payoff zero (they never arise when the
        output set is all of ``{0,1}^n``).
        """
        arr = np.zeros((len(self.inputs), 2**self.n, self.n))
        for i, x in enumerate(self.inputs):
            for y in self.outputs:
                arr[i, bits_to_index(y)] = self.payoff(x, y)
        return arr

    def payoff_range(self) -> tuple[float, float]:
        arr = np.array([self.payoff(x, y) for x in self.inputs for y in self.outputs])
        return float(arr.min()), float(arr.max())


def _check_bits(v, n, k, what):
    if len(v) != n or any(not 0 <= int(b) < k for b in v):
        raise ValueError(f"invalid {what} vector {v!r} for n={n}, k={k}")


def all_bits(n: int) -> tuple[Bits, ...]:
    return tuple(itertools.product((0, 1), repeat=n))


def minority_payoff(y: Bits) -> tuple[int, ...]:
    n = len(y)
    return tuple(int(2 * sum(1 for yj in y if yj == yi) < n) for yi in y)


def minority_scenario(n: int = 4) -> Scenario:
    if not 2 <= n <= MAX_QUBITS:
        raise ValueError(f"minority scenario needs 2 <= n <= {MAX_QUBITS}, got {n}")
    return Scenario(
        name=f"minority_{n}",
        n=n,
        inputs=(NO_INPUT,),
        outputs=all_bits(n),
        evaluate=lambda x, y: minority_payoff(y),
    )


@dataclass(frozen=True)
class PayoffTable2x2:
    """Two-player payoffs keyed by output pair ``(y1, y2)``."""

    values: dict

    def __post_init__(self):
        keys = set(all_bits(2))
        if set(self.values) != keys:
            raise ValueError(f"table needs exactly the outputs {sorted(keys)}")
        for k, v in self.values.items():
            if len(v) != 2 or not all(np.isfinite(v)):
                raise ValueError(f"table entry {k} must be two finite reals")

    def p1(self, y) -> float:
        return float(self.values[tuple(y)][0])

    def p2(self, y) -> float:
        return float(self.values[tuple(y)][1])

    def __call__(self, y):
        return tuple(float(v) for v in self.values[tuple(y)])

    def to_dict(self) -> dict:
        return {f"{a}{b}": [float(v) for v in self.values[(a, b)]] for a, b in all_bits(2)}

    @classmethod
    def from_dict(cls, d: dict) -> "PayoffTable2x2":
        values = {}
        for key, v in d.items():
            bits = tuple(int(c) for c in str(key))
            values[bits] = tuple(float(x) for x in v)
        return cls(values)

    @classmethod
    def prisoners_dilemma(cls, t=5.0, r=3.0, p=1.0, s=0.0) -> "PayoffTable2x2":
        """Symmetric PD table; output 1 is defection, 0 cooperation."""
        return cls({(0, 0): (r, r), (0, 1): (s, t), (1, 0): (t, s), (1, 1): (p, p)})

    @classmethod
    def battle_sexes(cls, high=2.0, low=1.0, miss=0.0) -> "PayoffTable2x2":
        return cls({(0, 0): (high, low), (0, 1): (miss, miss), (1, 0): (miss, miss), (1, 1): (low, high)})


def _require(cond: bool, message: str):
    if not cond:
        raise ConstraintError(message)


def check_prisoners_dilemma(t: PayoffTable2x2):
    _require(t.p1((1, 0)) == t.p2((0, 1)), "$1(1,0) = $2(0,1)")
    _require(t.p1((0, 0)) == t.p2((0, 0)), "$1(0,0) = $2(0,0)")
    _require(t.p1((1, 1)) == t.p2((1, 1)), "$1(1,1) = $2(1,1)")
    _require(t.p1((0, 1)) == t.p2((1, 0)), "$1(0,1) = $2(1,0)")
    _require(t.p1((1, 0)) > t.p1((0, 0)), "$1(1,0) > $1(0,0)")
    _require(t.p1((0, 0)) > t.p1((1, 1)), "$1(0,0) > $1(1,1)")
    _require(t.p1((1, 1)) > t.p1((0, 1)), "$1(1,1) > $1(0,1)")
    _require(
        t.p1((0, 0)) >= (t.p1((1, 0)) + t.p1((0, 1))) / 2,
        "$1(0,0) >= ($1(1,0) + $1(0,1)) / 2",
    )


def check_battle_sexes(t: PayoffTable2x2):
    _require(t.p1((0, 0)) == t.p2((1, 1)), "$1(0,0) = $2(1,1)")
    _require(t.p1((1, 1)) == t.p2((0, 0)), "$1(1,1) = $2(0,0)")
    miss = [t.p1((0, 1)), t.p2((0, 1)), t.p1((1, 0)), t.p2((1, 0))]
    _require(len(set(miss)) == 1, "$1(0,1) = $2(0,1) = $1(1,0) = $2(1,0)")
    _require(t.p1((0, 0)) > t.p1((1, 1)), "$1(0,0) > $1(1,1)")
    _require(t.p1((1, 1)) > t.p1((0, 1)), "$1(1,1) > $1(0,1)")


def prisoners_dilemma_scenario(t: PayoffTable2x2 | None = None) -> Scenario:
    t = PayoffTable2x2.prisoners_dilemma() if t is None else t
    check_prisoners_dilemma(t)
    return Scenario("prisoners_dilemma", 2, (NO_INPUT,), all_bits(2), lambda x, y: t(y))


def battle_sexes_scenario(t: PayoffTable2x2 | None = None) -> Scenario:
    t = PayoffTable2x2.battle_sexes() if t is None else t
    check_battle_sexes(t)
    return Scenario("battle_sexes", 2, (NO_INPUT,), all_bits(2), lambda x, y: t(y))


MOD4_INPUTS = ((0, 0, 0), (0, 1, 1), (1, 0, 1), (1, 1, 0))


def modulo4_payoff(x: Bits, y: Bits) -> tuple[int, int, int]:
    win = (2 * sum(y)) % 4 == sum(x) % 4
    return (1, 1, 1) if win else (0, 0, 0)


def modulo4_scenario() -> Scenario:
    return Scenario("modulo4", 3, MOD4_INPUTS, all_bits(3), modulo4_payoff)


def constant_scenario(n: int, value: float, inputs=None) -> Scenario:
    """Scenario paying ``value`` to everyone on every outcome; a sanity fixture."""
    inputs = all_bits(n) if inputs is None else tuple(inputs)
    return Scenario(f"constant_{value:g}", n, inputs, all_bits(n), lambda x, y: (value,) * n)


BUILTIN = {
    "minority": minority_scenario,
    "prisoners_dilemma": prisoners_dilemma_scenario,
    "battle_sexes": battle_sexes_scenario,
    "modulo4": modulo4_scenario,
}
