"""Hot loop of the discord optimizer: average conditional entropy of qubit A
after a two-outcome measurement on qubit B, for many measurement axes.

For an axis ``n`` and ``t = tanh(x)`` the two measurement effects on B are
``E(+) = (1 - t n.sigma)/2`` and ``E(-) = (1 + t n.sigma)/2``, i.e.
``P(+-x)^H P(+-x)``. The unnormalized conditional state of A is
``Tr_B[(1 x E) rho]``. With ``t = 1`` the effects are the projectors.

Two implementations with the same signature are provided:

* ``conditional_entropy_numba`` - explicit loops compiled with numba
* ``conditional_entropy_numpy`` - batched einsum

``conditional_entropy`` dispatches according to ``_accel.USE_NUMBA``.
"""
import math

import numpy as np

from . import _accel

_CUTOFF = 1e-14
_INV_LN2 = 1.0 / math.log(2.0)


def _conditional_entropy_loops(rho, thetas, phis, t):
    n_dir = thetas.shape[0]
    out = np.empty(n_dir)
    for d in range(n_dir):
        st = math.sin(thetas[d])
        nx = st * math.cos(phis[d])
        ny = st * math.sin(phis[d])
        nz = math.cos(thetas[d])
        # n.sigma = [[nz, nx - i ny], [nx + i ny, -nz]]
        ns00 = nz + 0j
        ns01 = nx - 1j * ny
        ns10 = nx + 1j * ny
        ns11 = -nz + 0j
        total = 0.0
        for s in (-1.0, 1.0):
            # s = -1 is outcome P(+x), s = +1 is outcome P(-x)
            e00 = 0.5 * (1.0 + s * t * ns00)
            e01 = 0.5 * s * t * ns01
            e10 = 0.5 * s * t * ns10
            e11 = 0.5 * (1.0 + s * t * ns11)
            # sigma_A[i, k] = sum_{j, m} E[j, m] rho[2i + m, 2k + j]
            a00 = (e00 * rho[0, 0] + e01 * rho[1, 0] + e10 * rho[0, 1] + e11 * rho[1, 1]).real
            a11 = (e00 * rho[2, 2] + e01 * rho[3, 2] + e10 * rho[2, 3] + e11 * rho[3, 3]).real
            a01 = e00 * rho[0, 2] + e01 * rho[1, 2] + e10 * rho[0, 3] + e11 * rho[1, 3]
            p = a00 + a11
            if p < _CUTOFF:
                continue
            half_gap = math.sqrt(0.25 * (a00 - a11) ** 2 + (a01.real ** 2 + a01.imag ** 2))
            lam1 = 0.5 + half_gap / p
            lam2 = 0.5 - half_gap / p
            h = 0.0
            if lam1 > _CUTOFF:
                h -= lam1 * math.log(lam1)
            if lam2 > _CUTOFF:
                h -= lam2 * math.log(lam2)
            total += p * h * _INV_LN2
        out[d] = total
    return out


conditional_entropy_numba = _accel.njit(_conditional_entropy_loops)


def conditional_entropy_numpy(rho, thetas, phis, t):
    rho = np.asarray(rho, dtype=np.complex128)
    thetas = np.asarray(thetas, dtype=float)
    phis = np.asarray(phis, dtype=float)
    st = np.sin(thetas)
    n = np.stack([st * np.cos(phis), st * np.sin(phis), np.cos(thetas)], axis=-1)
    n_sigma = np.empty(thetas.shape + (2, 2), dtype=np.complex128)
    n_sigma[..., 0, 0] = n[..., 2]
    n_sigma[..., 0, 1] = n[..., 0] - 1j * n[..., 1]
    n_sigma[..., 1, 0] = n[..., 0] + 1j * n[..., 1]
    n_sigma[..., 1, 1] = -n[..., 2]
    r4 = rho.reshape(2, 2, 2, 2)
    eye = np.eye(2)
    total = np.zeros(thetas.shape)
    for s in (-1.0, 1.0):
        effect = 0.5 * (eye + s * t * n_sigma)
        sig = np.einsum("...jm,imkj->...ik", effect, r4)
        p = (sig[..., 0, 0] + sig[..., 1, 1]).real
        safe_p = np.where(p < _CUTOFF, 1.0, p)
        half_gap = np.sqrt(0.25 * (sig[..., 0, 0] - sig[..., 1, 1]).real ** 2
                           + np.abs(sig[..., 0, 1]) ** 2)
        lam = np.stack([0.5 + half_gap / safe_p, 0.5 - half_gap / safe_p])
        keep = lam > _CUTOFF
        logs = np.log2(np.where(keep, lam, 1.0))
        h = -np.sum(np.where(keep, lam * logs, 0.0), axis=0)
        total += np.where(p < _CUTOFF, 0.0, p * h)
    return total


def conditional_entropy(rho, thetas, phis, t):
    """Average conditional entropy (bits) for each axis ``(thetas[i], phis[i])``."""
    rho = np.ascontiguousarray(rho, dtype=np.complex128)
    thetas = np.ascontiguousarray(thetas, dtype=np.float64)
    phis = np.ascontiguousarray(phis, dtype=np.float64)
    if _accel.USE_NUMBA:
        return conditional_entropy_numba(rho, thetas, phis, float(t))
    return conditional_entropy_numpy(rho, thetas, phis, float(t))
