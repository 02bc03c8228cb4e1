"""Small dense linear algebra for one- and two-qubit density matrices."""
from __future__ import annotations

import numpy as np

from .errors import NotHermitian, NotPositiveSemidefinite, TraceNotOne

HERMITIAN_TOL = 1e-12
TRACE_TOL = 1e-12
PSD_TOL = 1e-10
ENTROPY_CUTOFF = 1e-14

_SUBSYSTEMS = ("A", "B")


def _as_square(m, dim):
    arr = np.asarray(m, dtype=np.complex128)
    if arr.shape != (dim, dim):
        raise ValueError(f"expected a {dim}x{dim} matrix, got shape {arr.shape}")
    return arr


def _validate(m, dim):
    arr = _as_square(m, dim)
    herm = float(np.max(np.abs(arr - arr.conj().T)))
    if herm > HERMITIAN_TOL:
        raise NotHermitian(herm)
    tr_err = abs(np.trace(arr) - 1.0)
    if tr_err > TRACE_TOL:
        raise TraceNotOne(tr_err)
    # symmetrize so eigh sees an exactly Hermitian matrix
    arr = 0.5 * (arr + arr.conj().T)
    w, v = np.linalg.eigh(arr)
    if w[0] < -PSD_TOL:
        raise NotPositiveSemidefinite(-w[0])
    if w[0] < 0.0:
        w = np.clip(w, 0.0, None)
        arr = (v * w) @ v.conj().T
    arr.setflags(write=False)
    return arr


def validate_state(m):
    """Validate a 4x4 two-qubit density matrix.

    Checks are run in the order Hermiticity, trace, positivity and the first
    failure is raised. Slightly negative eigenvalues (down to ``-1e-10``) are
    clamped to zero without renormalizing.

    Returns
    -------
    ndarray
        Read-only complex128 copy of the validated state.
    """
    return _validate(m, 4)


def validate_qubit(m):
    """Same as :func:`validate_state` for a single-qubit 2x2 matrix."""
    return _validate(m, 2)


def partial_trace(rho, keep="A"):
    """Reduced state of one qubit of a two-qubit state.

    ``keep`` names the subsystem that survives; the other one is traced out.
    Basis ordering is ``|a b>`` with A the left tensor factor.
    """
    if keep not in _SUBSYSTEMS:
        raise ValueError(f"keep must be 'A' or 'B', got {keep!r}")
    r = validate_state(rho).reshape(2, 2, 2, 2)
    if keep == "A":
        out = np.einsum("ijkj->ik", r)
    else:
        out = np.einsum("ijil->jl", r)
    return validate_qubit(out)


def eigenvalues(rho):
    """Eigenvalues of a Hermitian matrix, in descending order."""
    arr = np.asarray(rho, dtype=np.complex128)
    return np.linalg.eigvalsh(arr)[::-1]


def entropy_from_spectrum(w):
    """Shannon entropy in bits of a probability vector, ignoring tiny entries."""
    w = np.asarray(w, dtype=float)
    w = w[w > ENTROPY_CUTOFF]
    return float(max(-np.sum(w * np.log2(w)), 0.0))


def von_neumann_entropy(rho):
    """Von Neumann entropy in bits of a one- or two-qubit state."""
    arr = np.asarray(rho)
    if arr.shape == (2, 2):
        arr = validate_qubit(arr)
    else:
        arr = validate_state(arr)
    return entropy_from_spectrum(eigenvalues(arr))


def kron(a, b):
    return np.kron(np.asarray(a, dtype=np.complex128), np.asarray(b, dtype=np.complex128))


def dagger(m):
    return np.asarray(m).conj().T


IDENTITY2 = np.eye(2, dtype=np.complex128)
SIGMA_X = np.array([[0, 1], [1, 0]], dtype=np.complex128)
SIGMA_Y = np.array([[0, -1j], [1j, 0]], dtype=np.complex128)
SIGMA_Z = np.array([[1, 0], [0, -1]], dtype=np.complex128)
PAULI = (SIGMA_X, SIGMA_Y, SIGMA_Z)

#: sigma_1 . sigma_2 on two qubits
SPIN_DOT = sum(np.kron(s, s) for s in PAULI)

for _m in (IDENTITY2, SIGMA_X, SIGMA_Y, SIGMA_Z, SPIN_DOT):
    _m.setflags(write=False)
del _m
