"""Named states, gates and the SU(2) strategy parametrization."""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .qmat import MAX_QUBITS, pure_density

TWO_PI = 2.0 * math.pi

I2 = np.eye(2, dtype=np.complex128)
PAULI_X = np.array([[0, 1], [1, 0]], dtype=np.complex128)
PAULI_Y = np.array([[0, -1j], [1j, 0]], dtype=np.complex128)
PAULI_Z = np.array([[1, 0], [0, -1]], dtype=np.complex128)
HADAMARD = np.array([[1, 1], [1, -1]], dtype=np.complex128) / math.sqrt(2.0)
S_DAGGER_HADAMARD = HADAMARD @ np.diag([1.0, -1j])
Q0 = np.array([[1, 0], [0, 0]], dtype=np.complex128)
Q1 = np.array([[0, 0], [0, 1]], dtype=np.complex128)

DEFAULT_GAMMA = math.pi / 2
DEFAULT_EPS = (0.1, 0.3)


@dataclass(frozen=True)
class Su2Params:
    theta: float
    phi: float = 0.0
    chi: float = 0.0

    def __post_init__(self):
        if not 0.0 <= self.theta <= math.pi:
            raise ValueError(f"theta={self.theta} outside [0, pi]")
        for name in ("phi", "chi"):
            v = getattr(self, name)
            if not 0.0 <= v < TWO_PI:
                raise ValueError(f"{name}={v} outside [0, 2pi)")


def su2(p: Su2Params | tuple) -> np.ndarray:
    if not isinstance(p, Su2Params):
        p = Su2Params(*p)
    c, s = math.cos(p.theta / 2), math.sin(p.theta / 2)
    return np.array(
        [
            [np.exp(1j * p.phi) * c, np.exp(1j * p.chi) * s],
            [-np.exp(-1j * p.chi) * s, np.exp(-1j * p.phi) * c],
        ],
        dtype=np.complex128,
    )


def ewl_j(gamma: float = DEFAULT_GAMMA) -> np.ndarray:
    """``exp(i gamma sigma_y ⊗ sigma_y)``, using ``(sigma_y ⊗ sigma_y)^2 = I``."""
    if not 0.0 <= gamma <= math.pi / 2:
        raise ValueError(f"gamma={gamma} outside [0, pi/2]")
    yy = np.kron(PAULI_Y, PAULI_Y)
    return math.cos(gamma) * np.eye(4, dtype=np.complex128) + 1j * math.sin(gamma) * yy


_FIXED = {
    "identity": I2,
    "pauli_x": PAULI_X,
    "pauli_y": PAULI_Y,
    "pauli_z": PAULI_Z,
    "hadamard": HADAMARD,
    "s_dagger_hadamard": S_DAGGER_HADAMARD,
}
FIXED_GATE_NAMES = tuple(_FIXED)


@dataclass(frozen=True)
class GateLabel:
    """Symbolic gate name, optionally carrying su2 parameters or an entangling angle."""

    name: str
    params: Su2Params | None = None
    gamma: float | None = None

    def __post_init__(self):
        if self.name in _FIXED:
            return
        if self.name == "su2":
            if not isinstance(self.params, Su2Params):
                raise ValueError("su2 label needs Su2Params")
        elif self.name == "ewl_J":
            if self.gamma is None or not 0.0 <= self.gamma <= math.pi / 2:
                raise ValueError(f"ewl_J needs gamma in [0, pi/2], got {self.gamma}")
        else:
            raise ValueError(f"unknown gate label {self.name!r}")

    def __str__(self):
        if self.name == "su2":
            p = self.params
            return f"su2({p.theta:.6g},{p.phi:.6g},{p.chi:.6g})"
        if self.name == "ewl_J":
            return f"ewl_J({self.gamma:.6g})"
        return self.name


def named_gate(g: GateLabel | str) -> np.ndarray:
    if isinstance(g, str):
        g = GateLabel(g)
    if g.name in _FIXED:
        return _FIXED[g.name].copy()
    if g.name == "su2":
        return su2(g.params)
    return ewl_j(g.gamma)


def basis_state(bits) -> np.ndarray:
    n = len(bits)
    v = np.zeros(2**n, dtype=np.complex128)
    idx = 0
    for b in bits:
        idx = (idx << 1) | int(b)
    v[idx] = 1.0
    return v


def ghz_state(n: int) -> np.ndarray:
    if not 2 <= n <= MAX_QUBITS:
        raise ValueError(f"GHZ state needs 2 <= n <= {MAX_QUBITS}, got {n}")
    v = np.zeros(2**n, dtype=np.complex128)
    v[0] = v[-1] = 1.0 / math.sqrt(2.0)
    return v


def minority_rho_in() -> np.ndarray:
    """Uniform mixture of the eight odd-parity 4-bit basis projectors."""
    diag = np.array([bin(i).count("1") % 2 / 8.0 for i in range(16)])
    return np.diag(diag).astype(np.complex128)


def fsslh_psi_in(alpha: float) -> np.ndarray:
    if not 0.0 <= alpha <= 1.0:
        raise ValueError(f"alpha={alpha} outside [0, 1]")
    v = np.zeros(16, dtype=np.complex128)
    v[0] = v[15] = alpha / math.sqrt(2.0)
    # (|01> + |10>)^{⊗2} expands to 0101, 0110, 1001, 1010
    for idx in (5, 6, 9, 10):
        v[idx] = math.sqrt(1.0 - alpha * alpha) / 2.0
    return v


def f09_rho(eps1: float = DEFAULT_EPS[0], eps2: float = DEFAULT_EPS[1]) -> np.ndarray:
    if eps1 < 0 or eps2 < 0:
        raise ValueError("eps1 and eps2 must be non-negative")
    if eps1 + eps2 > 1:
        raise ValueError("eps1 + eps2 must not exceed 1")
    if not abs(eps1 - eps2) > 0:
        raise ValueError("eps1 and eps2 must differ")
    w = 0.5 * (1.0 - (eps1 + eps2))
    return np.diag([w, eps1, eps2, w]).astype(np.complex128)


def diagonal_mixture(p) -> np.ndarray:
    """``sum_Y p(Y) Q_{y1} ⊗ ... ⊗ Q_{yn}`` for a probability vector indexed by Y."""
    p = np.asarray(p, dtype=float)
    if p.ndim != 1 or p.size & (p.size - 1) or p.size < 2:
        raise ValueError("p must have length 2**n")
    if np.any(p < 0) or abs(p.sum() - 1.0) > 1e-9:
        raise ValueError("p is not a probability vector")
    return np.diag(p).astype(np.complex128)


def bell_density() -> np.ndarray:
    return pure_density(ghz_state(2))


def ket_zero_density(n: int) -> np.ndarray:
    return pure_density(basis_state((0,) * n))


__all__ = [
    "Su2Params", "GateLabel", "su2", "named_gate", "ewl_j",
    "ghz_state", "minority_rho_in", "fsslh_psi_in", "f09_rho", "diagonal_mixture",
    "basis_state", "bell_density", "ket_zero_density",
    "I2", "PAULI_X", "PAULI_Y", "PAULI_Z", "HADAMARD", "S_DAGGER_HADAMARD", "Q0", "Q1",
    "FIXED_GATE_NAMES", "DEFAULT_GAMMA", "DEFAULT_EPS",
]
