# cython: boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled batch kernel for measurement statistics of local-unitary profiles.

The state is factored once as rho = sum_k w_k |v_k><v_k| (exactly, by basis
vectors, when rho is diagonal) so each profile costs O(rank * n * 2^n)
instead of a dense triple product.
"""
import numpy as np
cimport numpy as cnp

cnp.import_array()

RANK_TOL = 1e-15


def factor_state(rho):
    """Weights and vectors with rho = sum_k w[k] v[k] v[k]^dagger; zero weights dropped."""
    rho = np.asarray(rho, dtype=np.complex128)
    d = rho.shape[0]
    if not np.any(rho - np.diag(np.diag(rho))):
        w = np.diag(rho).real
        keep = np.flatnonzero(w != 0)
        return np.ascontiguousarray(w[keep]), np.ascontiguousarray(np.eye(d, dtype=np.complex128)[keep])
    w, v = np.linalg.eigh(rho)
    keep = np.flatnonzero(np.abs(w) > RANK_TOL * max(1.0, np.abs(w).max()))
    return np.ascontiguousarray(w[keep]), np.ascontiguousarray(v[:, keep].T)


cdef inline double _abs2(double complex z) noexcept nogil:
    return z.real * z.real + z.imag * z.imag


def outcome_probs_batch(rho, h, const double complex[:, :, :, ::1] units):
    """Diagonal of ``M rho M^dagger`` for ``M = h (u_1 ⊗ ... ⊗ u_n)``, per batch row.

    ``h`` is a square matrix or ``None`` for the identity. Returns a float
    array of shape ``(batch, 2**n)``.
    """
    rho = np.ascontiguousarray(rho, dtype=np.complex128)
    cdef Py_ssize_t nb = units.shape[0]
    cdef Py_ssize_t n = units.shape[1]
    cdef Py_ssize_t d = rho.shape[0]
    if d != (1 << n) or rho.shape != (d, d):
        raise ValueError("rho dimension does not match the number of players")
    if units.shape[2] != 2 or units.shape[3] != 2:
        raise ValueError("player unitaries must be 2x2")

    cdef bint use_h = h is not None
    cdef const double complex[:, ::1] hv
    if use_h:
        hv = np.ascontiguousarray(h, dtype=np.complex128)
        if hv.shape[0] != d or hv.shape[1] != d:
            raise ValueError("h dimension does not match rho")

    w_arr, v_arr = factor_state(rho)
    cdef const double[::1] w = w_arr
    cdef const double complex[:, ::1] vecs = v_arr
    cdef Py_ssize_t rank = w.shape[0]

    out_arr = np.zeros((nb, d), dtype=np.float64)
    cdef double[:, ::1] out = out_arr
    cdef double complex[::1] amp = np.empty(d, dtype=np.complex128)
    cdef double complex[::1] tmp = np.empty(d, dtype=np.complex128)

    cdef Py_ssize_t b, k, q, i, i1, y, a, bit
    cdef double complex u00, u01, u10, u11, x0, x1, acc

    with nogil:
        for b in range(nb):
            for k in range(rank):
                for i in range(d):
                    amp[i] = vecs[k, i]
                for q in range(n):
                    bit = 1 << (n - 1 - q)
                    u00 = units[b, q, 0, 0]
                    u01 = units[b, q, 0, 1]
                    u10 = units[b, q, 1, 0]
                    u11 = units[b, q, 1, 1]
                    for i in range(d):
                        if i & bit:
                            continue
                        i1 = i | bit
                        x0 = amp[i]
                        x1 = amp[i1]
                        amp[i] = u00 * x0 + u01 * x1
                        amp[i1] = u10 * x0 + u11 * x1
                if use_h:
                    for y in range(d):
                        acc = 0.0
                        for a in range(d):
                            acc = acc + hv[y, a] * amp[a]
                        tmp[y] = acc
                    for y in range(d):
                        out[b, y] += w[k] * _abs2(tmp[y])
                else:
                    for y in range(d):
                        out[b, y] += w[k] * _abs2(amp[y])
    return out_arr
