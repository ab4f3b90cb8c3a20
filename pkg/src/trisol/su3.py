"""Dense complex 3x3 linear algebra for a driven three-level system.

Provides the eight traceless Hermitian generators (half the Gell-Mann
matrices), the static level Hamiltonian with its vee / ladder / Lambda
classification, the free propagator, and interaction-picture conjugation.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np

from .errors import DomainError

__all__ = [
    "Configuration",
    "H0Params",
    "anticommutator",
    "commutator",
    "dagger",
    "free_propagator",
    "generator",
    "generators",
    "h0_matrix",
    "hermitian_eigensystem",
    "interaction_picture",
    "is_hermitian",
    "is_trace_one",
    "is_unitary",
    "propagator",
]


def _mat(rows) -> np.ndarray:
    m = 0.5 * np.array(rows, dtype=complex)
    m.flags.writeable = False
    return m


_GENERATORS = (
    _mat([[0, 1, 0], [1, 0, 0], [0, 0, 0]]),
    _mat([[0, -1j, 0], [1j, 0, 0], [0, 0, 0]]),
    _mat([[1, 0, 0], [0, -1, 0], [0, 0, 0]]),
    _mat([[0, 0, 1], [0, 0, 0], [1, 0, 0]]),
    _mat([[0, 0, -1j], [0, 0, 0], [1j, 0, 0]]),
    _mat([[0, 0, 0], [0, 0, 1], [0, 1, 0]]),
    _mat([[0, 0, 0], [0, 0, -1j], [0, 1j, 0]]),
    (1.0 / math.sqrt(3.0)) * _mat([[1, 0, 0], [0, 1, 0], [0, 0, -2]]),
)
_GENERATORS[7].flags.writeable = False


def generator(j: int) -> np.ndarray:
    """j-th generator, j in 1..8; Hermitian, traceless, tr(Sj Sk) = delta/2."""
    if not isinstance(j, (int, np.integer)) or not 1 <= j <= 8:
        raise DomainError(f"generator index must be an integer in 1..8, got {j!r}")
    return _GENERATORS[j - 1]


def generators() -> tuple[np.ndarray, ...]:
    """All eight generators as an immutable tuple (index 0 is S1)."""
    return _GENERATORS


def dagger(m: np.ndarray) -> np.ndarray:
    return np.asarray(m).conj().T


def commutator(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    return a @ b - b @ a


def anticommutator(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    return a @ b + b @ a


def is_hermitian(m: np.ndarray, tol: float = 1e-12) -> bool:
    m = np.asarray(m)
    return bool(np.linalg.norm(m - m.conj().T) <= tol)


def is_unitary(m: np.ndarray, tol: float = 1e-12) -> bool:
    m = np.asarray(m)
    return bool(np.linalg.norm(m @ m.conj().T - np.eye(m.shape[0])) <= tol)


def is_trace_one(m: np.ndarray, tol: float = 1e-12) -> bool:
    return bool(abs(np.trace(np.asarray(m)) - 1.0) <= tol)


class Configuration(enum.Enum):
    """Level-coupling topology selected by the ordering of mu and lam."""

    VEE = "vee"
    LADDER = "ladder"
    LAMBDA = "lambda"


@dataclass(frozen=True)
class H0Params:
    """Static Hamiltonian (2/3) diag(-mu, mu, lam); energies in ħω units."""

    mu: float
    lam: float
    hbar: float = 1.0

    def __post_init__(self):
        for name in ("mu", "lam", "hbar"):
            if not math.isfinite(getattr(self, name)):
                raise DomainError(f"{name} must be finite")
        if self.hbar <= 0.0:
            raise DomainError("hbar must be positive")

    def classify(self) -> Configuration:
        """vee iff lam < -mu < 0, ladder iff |lam| < mu, Lambda iff lam > mu > 0.

        Boundary orderings (|lam| = mu, or mu <= 0 without lam < -mu < 0)
        are rejected: the classification is only total for mu > 0.
        """
        mu, lam = self.mu, self.lam
        if lam < -mu < 0.0:
            return Configuration.VEE
        if abs(lam) < mu:
            return Configuration.LADDER
        if lam > mu > 0.0:
            return Configuration.LAMBDA
        raise DomainError(
            f"no configuration for mu={mu}, lam={lam}: boundary or mu <= 0"
        )


def h0_matrix(p: H0Params) -> np.ndarray:
    """(2/3) diag(-mu, mu, lam) as a complex matrix."""
    return (2.0 / 3.0) * np.diag([-p.mu, p.mu, p.lam]).astype(complex)


def free_propagator(p: H0Params, t: float) -> np.ndarray:
    """exp(-i t H0 / hbar) in closed form from the diagonal of H0."""
    if not math.isfinite(t):
        raise DomainError("time must be finite")
    d = (2.0 / 3.0) * np.array([-p.mu, p.mu, p.lam])
    return np.diag(np.exp(-1j * t * d / p.hbar))


def propagator(h0, t: float, hbar: float | None = None) -> np.ndarray:
    """exp(-i t H0 / hbar) for H0Params or any Hermitian matrix.

    A matrix argument routes through the eigensystem; hbar must then be
    supplied (H0Params carries its own).
    """
    if isinstance(h0, H0Params):
        return free_propagator(h0, t)
    h0 = np.asarray(h0, dtype=complex)
    if hbar is None:
        raise DomainError("hbar is required for a matrix-valued H0")
    w, q = hermitian_eigensystem(h0)
    return (q * np.exp(-1j * t * w / hbar)) @ q.conj().T


def interaction_picture(s: np.ndarray, p: H0Params, t: float) -> np.ndarray:
    """Conjugate s by the free propagator: exp(-itH0/ħ) s exp(+itH0/ħ)."""
    u = free_propagator(p, t)
    return u @ np.asarray(s, dtype=complex) @ u.conj().T


def hermitian_eigensystem(m: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Eigenvalues (ascending) and eigenvector unitary of a Hermitian matrix.

    The phase of each eigenvector is fixed deterministically: its
    largest-magnitude component is made real and positive.
    """
    m = np.asarray(m, dtype=complex)
    if np.linalg.norm(m - m.conj().T) > 1e-10:
        raise DomainError("matrix is not Hermitian to 1e-10")
    w, q = np.linalg.eigh(m)
    q = q.copy()
    for i in range(q.shape[1]):
        pivot = q[np.argmax(np.abs(q[:, i])), i]
        if pivot != 0.0:
            q[:, i] *= abs(pivot) / pivot
    return w, q
