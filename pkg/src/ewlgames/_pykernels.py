"""Vectorised numpy version of the batch outcome kernel."""
import numpy as np


def outcome_probs_batch(rho, h, units):
    """Diagonal of ``M rho M^dagger`` for ``M = h (u_1 ⊗ ... ⊗ u_n)``, per batch row."""
    rho = np.ascontiguousarray(rho, dtype=np.complex128)
    units = np.ascontiguousarray(units, dtype=np.complex128)
    nb, n = units.shape[:2]
    d = rho.shape[0]
    if d != 2**n or rho.shape != (d, d):
        raise ValueError("rho dimension does not match the number of players")
    if units.shape[2:] != (2, 2):
        raise ValueError("player unitaries must be 2x2")
    k = units[:, 0]
    for q in range(1, n):
        side = k.shape[1]
        k = np.einsum("bij,bkl->bikjl", k, units[:, q]).reshape(nb, 2 * side, 2 * side)
    if h is not None:
        h = np.asarray(h, dtype=np.complex128)
        if h.shape != (d, d):
            raise ValueError("h dimension does not match rho")
        k = h @ k
    t = k @ rho
    return np.einsum("bya,bya->by", t, k.conj()).real.copy()
