"""Elliptic density-matrix family and its nonlinear evolution equations.

The trace-one matrix family

    rho(t) = (1/3) I + A cn [S4]_t + B sn [S1]_t + C dn [S7]_t

has a time-independent spectrum {1/3 - T/2, 1/3, 1/3 + T/2} with
T = sqrt(A^2 + C^2) whenever B^2 = A^2 + k^2 C^2, and is transported by the
unitary V(t) built from the eigenvector frame G(t).  Two candidate
right-hand sides for its nonlinear evolution are provided: the "plain"
commutator with the squared state and the "scaled" 3/2 anticommutator form;
they differ exactly by the factor 3/2 since [{H0, r}, r] = [H0, r^2].
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np

from .elliptic import jacobi
from .errors import DomainError, NonPhysicalWarning, SingularityError
from .su3 import H0Params, anticommutator, generator, h0_matrix, propagator

__all__ = [
    "DensityCoeffs",
    "VARIANTS",
    "condition_residuals",
    "effective_hamiltonian",
    "eigenvalues",
    "g_matrix",
    "nonlinear_rhs",
    "rho",
    "solve_coeffs",
    "v_matrix",
]

# "plain":  i hbar drho/dt = [H0, rho^2]
# "scaled": i hbar drho/dt = (3/2) [{H0, rho}, rho]
VARIANTS = ("plain", "scaled")


@dataclass(frozen=True)
class DensityCoeffs:
    """Real coefficients of the density family plus its drive constants.

    The three coupling conditions tying (A, B, C) to (mu, lam) must hold at
    construction; ``solve_coeffs`` produces a conforming set in closed form.
    """

    A: float
    B: float
    C: float
    k: float
    omega: float
    hbar: float
    mu: float
    lam: float

    def __post_init__(self):
        for name in ("A", "B", "C", "k", "omega", "hbar", "mu", "lam"):
            if not math.isfinite(getattr(self, name)):
                raise DomainError(f"{name} must be finite")
        if self.omega <= 0.0 or self.hbar <= 0.0:
            raise DomainError("omega and hbar must be positive")
        if not 0.0 < self.k <= 1.0:
            raise DomainError("modulus k must lie in (0, 1]")
        if self.T == 0.0:
            raise DomainError("degenerate coefficients: A = C = 0")
        if self.A == 0.0 and self.k < 1.0:
            raise DomainError("A = 0 with k < 1 is rejected (singular frame)")
        for i, r in enumerate(condition_residuals(self), start=1):
            if abs(r[0]) > 1e-12 * r[1]:
                raise DomainError(
                    f"coupling condition {i} violated: residual {r[0]:.3g}"
                )

    @property
    def T(self) -> float:
        return math.hypot(self.A, self.C)


def condition_residuals(c: DensityCoeffs) -> list[tuple[float, float]]:
    """(residual, scale) for the three coupling conditions.

    Line 1: hbar omega B = mu A C
    Line 2: 2 hbar omega k^2 C = (lam + mu) A B
    Line 3: -2 hbar omega A = (lam - mu) B C
    """
    e = c.hbar * c.omega
    pairs = [
        (e * c.B, c.mu * c.A * c.C),
        (2.0 * e * c.k**2 * c.C, (c.lam + c.mu) * c.A * c.B),
        (-2.0 * e * c.A, (c.lam - c.mu) * c.B * c.C),
    ]
    return [(l - r, max(1.0, abs(l), abs(r))) for l, r in pairs]


def solve_coeffs(
    mu: float, lam: float, omega: float, k: float, hbar: float = 1.0
) -> DensityCoeffs:
    """Closed-form coefficient branch for 0 < |lam| < mu (ladder ordering).

    A and C are taken positive and B = mu A C / (hbar omega).  Other sign
    patterns (flipping any two of A, B, C) satisfy the same conditions.
    Emits NonPhysicalWarning when 1/3 - T/2 < 0, i.e. when the family is
    algebraically valid but not positive semidefinite.
    """
    if not 0.0 < abs(lam) < mu:
        raise DomainError(f"solvability requires 0 < |lam| < mu, got mu={mu}, lam={lam}")
    e = hbar * omega
    a = math.sqrt(2.0 * e**2 * k**2 / (mu * (lam + mu)))
    c = math.sqrt(2.0 * e**2 / (mu * (mu - lam)))
    b = mu * a * c / e
    coeffs = DensityCoeffs(A=a, B=b, C=c, k=k, omega=omega, hbar=hbar, mu=mu, lam=lam)
    if 1.0 / 3.0 - coeffs.T / 2.0 < 0.0:
        warnings.warn(
            f"smallest eigenvalue 1/3 - T/2 = {1/3 - coeffs.T/2:.6g} < 0:"
            " not a physical state, algebra remains valid",
            NonPhysicalWarning,
            stacklevel=2,
        )
    return coeffs


def eigenvalues(c: DensityCoeffs) -> np.ndarray:
    """Time-independent spectrum, ascending."""
    t = c.T
    return np.array([1.0 / 3.0 - t / 2.0, 1.0 / 3.0, 1.0 / 3.0 + t / 2.0])


def _h0_of(c: DensityCoeffs, h0):
    if h0 is None:
        return H0Params(mu=c.mu, lam=c.lam, hbar=c.hbar)
    return h0


def rho(c: DensityCoeffs, h0, t: float) -> np.ndarray:
    """Density matrix at time t: the coefficient matrix conjugated into the
    interaction picture.  ``h0`` may be None (built from the coefficients),
    an H0Params, or any Hermitian matrix."""
    h0 = _h0_of(c, h0)
    sn, cn, dn = jacobi(c.omega * t, c.k)
    inner = (
        np.eye(3, dtype=complex) / 3.0
        + c.A * cn * generator(4)
        + c.B * sn * generator(1)
        + c.C * dn * generator(7)
    )
    u = propagator(h0, t, hbar=c.hbar)
    return u @ inner @ u.conj().T


def g_matrix(c: DensityCoeffs, t: float) -> np.ndarray:
    """Unitary eigenvector frame of the coefficient matrix at time t.

    Columns are the eigenvectors for eigenvalues (1/3, 1/3 - T/2, 1/3 + T/2)
    in that order.  Raises SingularityError where the internal normalization
    R(t) = sqrt(A^2 cn^2 + C^2 dn^2) vanishes.
    """
    sn, cn, dn = jacobi(c.omega * t, c.k)
    a, b, cc, bigt = c.A, c.B, c.C, c.T
    r = math.hypot(a * cn, cc * dn)
    if r <= 0.0 or not math.isfinite(1.0 / r):
        raise SingularityError(f"frame normalization vanished at t = {t}")
    rt2 = math.sqrt(2.0)
    m = np.array(
        [
            [1j * rt2 * cc * r * dn, -a * bigt * cn - 1j * b * cc * sn * dn,
             a * bigt * cn - 1j * b * cc * sn * dn],
            [-rt2 * a * r * cn, a * b * sn * cn + 1j * cc * bigt * dn,
             a * b * sn * cn - 1j * cc * bigt * dn],
            [rt2 * b * r * sn, r * r, r * r],
        ],
        dtype=complex,
    )
    return m / (rt2 * bigt * r)


def v_matrix(c: DensityCoeffs, h0, t: float) -> np.ndarray:
    """Transport unitary: rho(t) = V(t) rho(0) V(t)^dagger."""
    h0 = _h0_of(c, h0)
    u = propagator(h0, t, hbar=c.hbar)
    return u @ g_matrix(c, t) @ g_matrix(c, 0.0).conj().T


def _h0_matrix_and_hbar(h0, hbar):
    if isinstance(h0, H0Params):
        return h0_matrix(h0), h0.hbar
    if hbar is None:
        raise DomainError("hbar is required for a matrix-valued H0")
    return np.asarray(h0, dtype=complex), hbar


def nonlinear_rhs(rho_mat, h0, variant: str, hbar: float | None = None) -> np.ndarray:
    """d(rho)/dt for one of the two nonlinear right-hand-side variants.

    "plain" is [H0, rho^2] / (i hbar); "scaled" is
    (3/2) [{H0, rho}, rho] / (i hbar) = (3/2) x the plain form.
    """
    if variant not in VARIANTS:
        raise DomainError(f"variant must be one of {VARIANTS}, got {variant!r}")
    h0m, hb = _h0_matrix_and_hbar(h0, hbar)
    r = np.asarray(rho_mat, dtype=complex)
    if variant == "plain":
        sq = r @ r
        num = h0m @ sq - sq @ h0m
    else:
        anti = h0m @ r + r @ h0m
        num = 1.5 * (anti @ r - r @ anti)
    return num / (1j * hb)


def effective_hamiltonian(rho_mat, h0, hbar: float | None = None) -> np.ndarray:
    """(3/2) {H0, rho}: the Hermitian generator of the linearized evolution."""
    h0m, _ = _h0_matrix_and_hbar(h0, hbar)
    return 1.5 * anticommutator(h0m, np.asarray(rho_mat, dtype=complex))
