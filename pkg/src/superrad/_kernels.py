"""Compiled in-place statevector kernels."""
import numba
import numpy as np


@numba.njit(inline="always")
def _parity(v):
    v ^= v >> 32
    v ^= v >> 16
    v ^= v >> 8
    v ^= v >> 4
    v ^= v >> 2
    v ^= v >> 1
    return v & 1


@numba.njit(cache=True, nogil=True)
def exp_pauli_inplace(psi, x_mask, z_mask, cos_t, coef):
    """``psi <- (cos_t + coef * P) psi`` for the Pauli string with the given masks.

    ``coef`` already contains ``-i sin(theta) * i**n_y``. Amplitude pairs
    ``(b, b ^ x_mask)`` are disjoint, so each is read and written once.
    """
    n = psi.size
    if x_mask == 0:
        for b in range(n):
            if _parity(b & z_mask):
                psi[b] *= cos_t - coef
            else:
                psi[b] *= cos_t + coef
        return
    pivot = np.int64(1)
    while pivot * 2 <= x_mask:
        pivot *= 2
    low = pivot - 1
    for j in range(n >> 1):
        b = ((j & ~low) << 1) | (j & low)
        c = b ^ x_mask
        vb = psi[b]
        vc = psi[c]
        # (P psi)[b] = i**n_y (-1)**parity(c & z) psi[c]
        if _parity(c & z_mask):
            psi[b] = cos_t * vb - coef * vc
        else:
            psi[b] = cos_t * vb + coef * vc
        if _parity(b & z_mask):
            psi[c] = cos_t * vc - coef * vb
        else:
            psi[c] = cos_t * vc + coef * vb
