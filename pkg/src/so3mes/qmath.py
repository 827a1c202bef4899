"""Small complex linear algebra for one and two qubits.

Single-qubit operators are plain ``(2, 2)`` complex numpy arrays and
two-qubit states are ``(4,)`` complex arrays in the product basis
``|00>, |01>, |10>, |11>``.
"""
from __future__ import annotations

import numpy as np

from .errors import InvalidOperatorError

TOL = 1e-12

I2 = np.eye(2, dtype=complex)
SIGMA_X = np.array([[0, 1], [1, 0]], dtype=complex)
SIGMA_Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
SIGMA_Z = np.array([[1, 0], [0, -1]], dtype=complex)

# |(1,0)> = (|00> + |11>)/sqrt(2)
PHI_PLUS = np.array([1, 0, 0, 1], dtype=complex) / np.sqrt(2)


def c2(m00, m01, m10, m11) -> np.ndarray:
    """Build a 2x2 complex matrix from its four entries."""
    m = np.array([[m00, m01], [m10, m11]], dtype=complex)
    m.setflags(write=False)
    return m


def two_qubit(c00, c01, c10, c11, tol: float = TOL) -> np.ndarray:
    s = np.array([c00, c01, c10, c11], dtype=complex)
    if abs(np.vdot(s, s).real - 1.0) > tol:
        raise ValueError(f"two-qubit state not normalized: |s|^2 = {np.vdot(s, s).real!r}")
    s.setflags(write=False)
    return s


def unitarity_error(u: np.ndarray) -> float:
    """Largest entry of |U U^dagger - I| combined with |det U - 1|."""
    u = np.asarray(u, dtype=complex)
    return float(max(np.max(np.abs(u @ u.conj().T - I2)), abs(np.linalg.det(u) - 1.0)))


def is_special_unitary(u: np.ndarray, tol: float = TOL) -> bool:
    u = np.asarray(u)
    return u.shape == (2, 2) and unitarity_error(u) <= tol


def apply_local(u_first: np.ndarray, u_second: np.ndarray, s: np.ndarray,
                tol: float = TOL) -> np.ndarray:
    """Return ``(u_first (x) u_second) s``."""
    for name, u in (("u_first", u_first), ("u_second", u_second)):
        if not is_special_unitary(u, tol):
            raise InvalidOperatorError(
                f"{name} is not special-unitary (error {unitarity_error(u):.3e})")
    return np.kron(u_first, u_second) @ np.asarray(s, dtype=complex)


def overlap(s1: np.ndarray, s2: np.ndarray) -> complex:
    """Inner product <s1|s2>."""
    return complex(np.vdot(s1, s2))


def concurrence(s: np.ndarray) -> float:
    c00, c01, c10, c11 = np.asarray(s, dtype=complex)
    return float(2.0 * abs(c00 * c11 - c01 * c10))


def concurrence_spin_flip(s: np.ndarray) -> float:
    """Concurrence from the spin-flip definition |<s*| sy(x)sy |s>|."""
    s = np.asarray(s, dtype=complex)
    return float(abs(s @ (np.kron(SIGMA_Y, SIGMA_Y) @ s)))
