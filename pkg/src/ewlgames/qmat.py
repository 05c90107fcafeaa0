"""Dense complex matrix algebra for systems of at most five qubits.

Matrices are plain ``numpy`` arrays of dtype ``complex128``. Basis index
``i`` of an n-qubit space is the big-endian reading of the bit string, so
player 1 owns the most significant bit.
"""
from __future__ import annotations

import numpy as np

MAX_QUBITS = 5
MAX_DIM = 2**MAX_QUBITS

STRUCTURAL_TOL = 1e-9
EXACT_TOL = 1e-12


class DimensionError(ValueError):
    """Shapes do not match, or exceed the supported state-space size."""


class NumericalConsistencyError(ArithmeticError):
    """A quantity that must be real (or unitary, or a probability) is not."""


def as_cmatrix(a, name: str = "matrix") -> np.ndarray:
    m = np.asarray(a, dtype=np.complex128)
    if m.ndim != 2:
        raise DimensionError(f"{name} must be 2-dimensional, got shape {m.shape}")
    if m.size == 0:
        raise DimensionError(f"{name} is empty")
    if not np.all(np.isfinite(m)):
        raise NumericalConsistencyError(f"{name} has non-finite entries")
    return m


def as_cvector(v, name: str = "vector") -> np.ndarray:
    x = np.asarray(v, dtype=np.complex128)
    if x.ndim != 1 or x.size == 0:
        raise DimensionError(f"{name} must be a non-empty 1-d array, got shape {x.shape}")
    if not np.all(np.isfinite(x)):
        raise NumericalConsistencyError(f"{name} has non-finite entries")
    return x


def kron(a, b, max_dim: int = MAX_DIM) -> np.ndarray:
    a = as_cmatrix(a, "a")
    b = as_cmatrix(b, "b")
    rows, cols = a.shape[0] * b.shape[0], a.shape[1] * b.shape[1]
    if max(rows, cols) > max_dim:
        raise DimensionError(f"kron result {rows}x{cols} exceeds maximum dimension {max_dim}")
    return np.kron(a, b)


def kron_all(mats, max_dim: int = MAX_DIM) -> np.ndarray:
    mats = list(mats)
    if not mats:
        raise DimensionError("kron_all needs at least one factor")
    out = as_cmatrix(mats[0])
    for m in mats[1:]:
        out = kron(out, m, max_dim=max_dim)
    return out


def conjugate_transpose(a) -> np.ndarray:
    return as_cmatrix(a).conj().T


def is_unitary(u, tol: float = STRUCTURAL_TOL) -> bool:
    u = np.asarray(u, dtype=np.complex128)
    if u.ndim != 2 or u.shape[0] != u.shape[1]:
        return False
    return bool(np.max(np.abs(u @ u.conj().T - np.eye(u.shape[0]))) <= tol)


def evolve(rho, u, tol: float = STRUCTURAL_TOL) -> np.ndarray:
    """Return ``u @ rho @ u^dagger``; ``u`` must be unitary within ``tol``."""
    rho = as_cmatrix(rho, "rho")
    u = as_cmatrix(u, "u")
    if rho.shape[0] != rho.shape[1] or u.shape[0] != u.shape[1]:
        raise DimensionError("evolve requires square matrices")
    if rho.shape != u.shape:
        raise DimensionError(f"rho {rho.shape} and u {u.shape} differ in dimension")
    if rho.shape[0] > MAX_DIM:
        raise DimensionError(f"dimension {rho.shape[0]} exceeds {MAX_DIM}")
    if not is_unitary(u, tol):
        raise NumericalConsistencyError("evolution operator is not unitary")
    return u @ rho @ u.conj().T


def expectation(rho, proj, tol: float = 1e-10) -> float:
    """``Tr(proj @ rho)`` as a probability clamped to [0, 1]."""
    rho = as_cmatrix(rho, "rho")
    proj = as_cmatrix(proj, "proj")
    if rho.shape != proj.shape or rho.shape[0] != rho.shape[1]:
        raise DimensionError(f"shape mismatch: rho {rho.shape}, proj {proj.shape}")
    # Tr(AB) = sum_ij A_ij B_ji, no full product needed
    value = complex(np.sum(proj * rho.T))
    if abs(value.imag) > tol:
        raise NumericalConsistencyError(f"expectation has imaginary part {value.imag:.3e}")
    re = value.real
    if re < -tol or re > 1.0 + tol:
        raise NumericalConsistencyError(f"expectation {re!r} is not a probability")
    return min(1.0, max(0.0, re))


def is_density_matrix(rho, tol: float = STRUCTURAL_TOL) -> bool:
    rho = np.asarray(rho, dtype=np.complex128)
    if rho.ndim != 2 or rho.shape[0] != rho.shape[1]:
        return False
    if not np.all(np.isfinite(rho)):
        return False
    if np.max(np.abs(rho - rho.conj().T)) > tol:
        return False
    if abs(np.trace(rho) - 1.0) > tol:
        return False
    herm = (rho + rho.conj().T) / 2
    return bool(np.linalg.eigvalsh(herm).min() >= -tol)


def projector(bits) -> np.ndarray:
    """``Q_{y1} ⊗ ... ⊗ Q_{yn}`` for an output bit string."""
    bits = tuple(int(b) for b in bits)
    if any(b not in (0, 1) for b in bits):
        raise ValueError(f"not a bit string: {bits}")
    dim = 2 ** len(bits)
    if dim > MAX_DIM:
        raise DimensionError(f"{len(bits)} qubits exceeds {MAX_QUBITS}")
    p = np.zeros((dim, dim), dtype=np.complex128)
    idx = bits_to_index(bits)
    p[idx, idx] = 1.0
    return p


def bits_to_index(bits) -> int:
    idx = 0
    for b in bits:
        idx = (idx << 1) | int(b)
    return idx


def index_to_bits(index: int, n: int) -> tuple[int, ...]:
    return tuple((index >> (n - 1 - k)) & 1 for k in range(n))


def pure_density(psi) -> np.ndarray:
    psi = as_cvector(psi, "psi")
    return np.outer(psi, psi.conj())
