"""Dense complex linear algebra for one- and two-qubit objects.

Matrices and states are plain ``numpy`` arrays of dtype ``complex128``.
Basis order for two qubits is ``|00>, |01>, |10>, |11>`` with the first
factor belonging to player A (the hydrogen spin in the NMR emulator).
"""
from __future__ import annotations

import numpy as np

DEFAULT_TOL = 1e-10

I2 = np.eye(2, dtype=complex)
I4 = np.eye(4, dtype=complex)

# Opera and Television strategy matrices.
O_GATE = I2.copy()
T_GATE = np.array([[0, 1], [-1, 0]], dtype=complex)

KET_00 = np.array([1, 0, 0, 0], dtype=complex)


class DomainError(ValueError):
    """An input lies outside the domain an operation is defined on."""


def as_matrix(m, shape=None) -> np.ndarray:
    arr = np.asarray(m, dtype=complex)
    if arr.ndim != 2:
        raise DomainError(f"expected a matrix, got array of shape {arr.shape}")
    if shape is not None and arr.shape != shape:
        raise DomainError(f"expected shape {shape}, got {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise DomainError("matrix has non-finite entries")
    return arr


def as_state(s, tol: float = DEFAULT_TOL) -> np.ndarray:
    arr = np.asarray(s, dtype=complex)
    if arr.shape != (4,):
        raise DomainError(f"expected a 4-amplitude state, got shape {arr.shape}")
    norm = np.vdot(arr, arr).real
    if abs(norm - 1.0) > tol:
        raise DomainError(f"state is not normalized (norm^2 = {norm!r})")
    return arr


def kron(a, b) -> np.ndarray:
    """Kronecker product of two 2x2 matrices: ``out[2i+k, 2j+l] = a[i,j] b[k,l]``."""
    a = as_matrix(a, (2, 2))
    b = as_matrix(b, (2, 2))
    return np.kron(a, b)


def dagger(m: np.ndarray) -> np.ndarray:
    return np.conj(np.transpose(m))


def is_unitary(m, tol: float = DEFAULT_TOL) -> bool:
    m = as_matrix(m)
    if m.shape[0] != m.shape[1]:
        raise DomainError(f"is_unitary needs a square matrix, got {m.shape}")
    return bool(np.max(np.abs(m @ dagger(m) - np.eye(m.shape[0]))) <= tol)


def apply(u, s, tol: float = DEFAULT_TOL) -> np.ndarray:
    """Apply a 4x4 unitary to a normalized two-qubit state."""
    u = as_matrix(u, (4, 4))
    if not is_unitary(u, tol):
        raise DomainError("apply() requires a unitary operator")
    return u @ as_state(s, tol)


def equal_up_to_global_phase(a, b, tol: float = DEFAULT_TOL) -> bool:
    """True iff ``a = e^{i chi} b`` for some real ``chi``, per-entry within ``tol``."""
    a = np.asarray(a, dtype=complex).ravel()
    b = np.asarray(b, dtype=complex).ravel()
    k = int(np.argmax(np.abs(b)))
    if abs(b[k]) <= tol:
        return bool(np.max(np.abs(a)) <= tol)
    phase = a[k] / b[k]
    phase /= abs(phase) if abs(phase) > 0 else 1.0
    return bool(np.max(np.abs(a - phase * b)) <= tol)


def reduced_density_matrix_a(s) -> np.ndarray:
    """Partial trace over player B of ``|s><s|``."""
    psi = np.asarray(s, dtype=complex).reshape(2, 2)
    return psi @ dagger(psi)


def von_neumann_entropy(rho, cutoff: float = 1e-15) -> float:
    evals = np.linalg.eigvalsh(np.asarray(rho, dtype=complex))
    evals = evals[evals > cutoff]
    return float(-np.sum(evals * np.log2(evals)))


def entanglement_entropy(s, tol: float = DEFAULT_TOL) -> float:
    """Entanglement entropy of a two-qubit pure state, in bits."""
    s = as_state(s, tol)
    return min(max(von_neumann_entropy(reduced_density_matrix_a(s)), 0.0), 1.0)


def check_density_matrix(rho, tol: float = DEFAULT_TOL) -> np.ndarray:
    """Validate a 4x4 density matrix and return it as a complex array.

    Raises DomainError unless ``rho`` is Hermitian, has unit trace and is
    positive semidefinite, each to within ``tol``.
    """
    rho = as_matrix(rho, (4, 4))
    if np.max(np.abs(rho - dagger(rho))) > tol:
        raise DomainError("density matrix is not Hermitian")
    if abs(np.trace(rho) - 1.0) > tol:
        raise DomainError(f"density matrix trace is {np.trace(rho).real!r}, expected 1")
    if np.min(np.linalg.eigvalsh(rho)) < -tol:
        raise DomainError("density matrix has a negative eigenvalue")
    return rho


def projector(s) -> np.ndarray:
    s = np.asarray(s, dtype=complex)
    return np.outer(s, np.conj(s))


def state_fidelity(rho, psi, tol: float = DEFAULT_TOL) -> float:
    """Pure-target fidelity ``<psi|rho|psi>``."""
    rho = check_density_matrix(rho, tol)
    psi = as_state(psi, tol)
    return float(np.clip(np.vdot(psi, rho @ psi).real, 0.0, 1.0))
