"""Closed-form solution basis of the elliptically driven three-level system.

The drive couples levels (1)-(3) with amplitude ``a`` times cn and levels
(2)-(3) with amplitude ``x`` times dn.  When the amplitudes satisfy

    4 k^2 (hbar omega)^2 = a^2 + k^2 x^2

the Schrodinger equation has three orthonormal solutions in closed form,
built from the Jacobi functions, a normalization R(t) and a slowly
accumulating phase phi(t) evaluated here by adaptive quadrature.  Arbitrary
initial states evolve as superpositions of the three.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np

from .elliptic import JacobiTriple, jacobi, quarter_period
from .errors import DomainError, DriveConditionError
from .su3 import H0Params, generator, h0_matrix, propagator

__all__ = [
    "BasisLabel",
    "DerivedConstants",
    "DriveParams",
    "TrajectorySample",
    "amplitude_R",
    "basis_state",
    "complete_a",
    "complete_x",
    "decompose",
    "drive_period",
    "evolve",
    "hamiltonian_at",
    "occupations",
    "phase_on_grid",
    "phase_phi",
    "phase_rate",
    "trajectory",
    "validate",
]


class BasisLabel(enum.Enum):
    ZERO = "zero"
    PLUS = "plus"
    MINUS = "minus"


@dataclass(frozen=True)
class DriveParams:
    """Drive amplitudes and frequency: a (cn channel), x (dn channel)."""

    a: float
    x: float
    omega: float
    k: float
    hbar: float = 1.0

    def __post_init__(self):
        for name in ("a", "x", "omega", "k", "hbar"):
            v = getattr(self, name)
            if not math.isfinite(v):
                raise DomainError(f"{name} must be finite")
        if self.omega <= 0.0 or self.hbar <= 0.0:
            raise DomainError("omega and hbar must be positive")
        if not 0.0 < self.k <= 1.0:
            raise DomainError(
                "modulus k must lie in (0, 1]; k = 0 forces a = 0 and a"
                " vanishing normalization, so the solution basis degenerates"
            )
        if self.a < 0.0 or self.x < 0.0:
            raise DomainError("amplitudes a, x must be non-negative")
        if self.a == 0.0 and self.k < 1.0:
            raise DomainError(
                "a = 0 with k < 1 makes R(t) vanish at quarter periods;"
                " the plus/minus solutions would be singular"
            )


@dataclass(frozen=True)
class DerivedConstants:
    """B = 2 k^2 hbar omega and T = sqrt(a^2 + k^4 x^2)."""

    B: float
    T: float


def validate(p: DriveParams) -> DerivedConstants:
    """Gate the matching condition and derive (B, T).

    Raises DriveConditionError carrying the absolute residual of
    4 k^2 (hbar omega)^2 - a^2 - k^2 x^2 when it exceeds 1e-10 (hbar omega)^2.
    """
    e = p.hbar * p.omega
    residual = 4.0 * p.k**2 * e**2 - p.a**2 - p.k**2 * p.x**2
    if abs(residual) > 1e-10 * e**2:
        raise DriveConditionError(
            f"drive condition violated: 4 k^2 (hbar omega)^2 = {4 * p.k**2 * e**2!r}"
            f" but a^2 + k^2 x^2 = {p.a**2 + p.k**2 * p.x**2!r}"
            f" (residual {abs(residual):.6g})",
            abs(residual),
        )
    b = 2.0 * p.k**2 * e
    t = math.sqrt(p.a**2 + p.k**4 * p.x**2)
    cross = t**2 - (b**2 + p.a**2 * (1.0 - p.k**2))
    if abs(cross) > 1e-12 * t**2:
        raise DriveConditionError(
            f"derived-constant cross-check failed: T^2 - B^2 - a^2(1-k^2)"
            f" = {cross!r}",
            abs(cross),
        )
    return DerivedConstants(B=b, T=t)


def complete_x(a: float, k: float, omega: float, hbar: float = 1.0) -> float:
    """Positive x completing the matching condition for a given a."""
    if k <= 0.0:
        raise DomainError("k must be positive")
    e = hbar * omega
    disc = 4.0 * k**2 * e**2 - a**2
    if disc < 0.0:
        raise DomainError(
            f"no real x: a = {a} exceeds 2 k hbar omega = {2 * k * e}"
        )
    return math.sqrt(disc) / k


def complete_a(x: float, k: float, omega: float, hbar: float = 1.0) -> float:
    """Positive a completing the matching condition for a given x."""
    if k <= 0.0:
        raise DomainError("k must be positive")
    e = hbar * omega
    disc = 4.0 * e**2 - x**2
    if disc < 0.0:
        raise DomainError(f"no real a: x = {x} exceeds 2 hbar omega = {2 * e}")
    return k * math.sqrt(disc)


def drive_period(p: DriveParams) -> float:
    """Full period 4 K(k) / omega of the sn and cn drive envelopes."""
    return 4.0 * quarter_period(p.k) / p.omega


def amplitude_R(p: DriveParams, c: DerivedConstants, t: float) -> float:
    """Normalization R(t) = sqrt(2) T sqrt(a^2 (1-k^2) + B^2 cn^2).

    This form is used instead of the equivalent sqrt(T^2 - B^2 sn^2)
    because it stays well conditioned at k = 1 where sn -> 1.
    """
    cn = jacobi(p.omega * t, p.k).cn
    return math.sqrt(2.0) * c.T * math.sqrt(
        p.a**2 * (1.0 - p.k**2) + (c.B * cn) ** 2
    )


def phase_rate(p: DriveParams, c: DerivedConstants, t: float) -> float:
    """Instantaneous d(phi)/dt; identically zero at k = 1."""
    if p.k == 1.0:
        return 0.0
    cn = jacobi(p.omega * t, p.k).cn
    kp2 = 1.0 - p.k**2
    return (p.a * p.x / 2.0) * c.T * kp2 / (
        p.hbar * (p.a**2 * kp2 + (c.B * cn) ** 2)
    )


def _simpson_panel(f, a, fa, b, fb, m, fm, whole, tol, depth):
    lm = 0.5 * (a + m)
    rm = 0.5 * (m + b)
    flm = f(lm)
    frm = f(rm)
    left = (m - a) / 6.0 * (fa + 4.0 * flm + fm)
    right = (b - m) / 6.0 * (fm + 4.0 * frm + fb)
    diff = left + right - whole
    if depth <= 0 or abs(diff) <= 15.0 * tol:
        return left + right + diff / 15.0
    half = 0.5 * tol
    return _simpson_panel(
        f, a, fa, m, fm, lm, flm, left, half, depth - 1
    ) + _simpson_panel(f, m, fm, b, fb, rm, frm, right, half, depth - 1)


def _adaptive_simpson(f, a, b, tol):
    if a == b:
        return 0.0
    m = 0.5 * (a + b)
    fa, fm, fb = f(a), f(m), f(b)
    whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb)
    return _simpson_panel(f, a, fa, b, fb, m, fm, whole, tol, 48)


def _integrate_rate(p, c, t0, t1, tol=1e-13):
    # panels no longer than a quarter period keep the recursion shallow
    rate = lambda s: phase_rate(p, c, s)
    span = t1 - t0
    if span == 0.0:
        return 0.0
    quarter = quarter_period(p.k) / p.omega
    n = max(1, math.ceil(abs(span) / quarter))
    edges = np.linspace(t0, t1, n + 1)
    return sum(
        _adaptive_simpson(rate, edges[i], edges[i + 1], tol) for i in range(n)
    )


def phase_phi(p: DriveParams, c: DerivedConstants, t: float) -> float:
    """Accumulated phase phi(t); phi(0) = 0, strictly increasing for k < 1."""
    if not math.isfinite(t):
        raise DomainError("time must be finite")
    if p.k == 1.0:
        return 0.0
    return _integrate_rate(p, c, 0.0, t)


def phase_on_grid(p: DriveParams, c: DerivedConstants, ts) -> np.ndarray:
    """phi at each grid time, accumulating panel integrals between samples."""
    ts = np.asarray(ts, dtype=float)
    out = np.empty(ts.shape[0])
    if ts.shape[0] == 0:
        return out
    if p.k == 1.0:
        out[:] = 0.0
        return out
    acc = _integrate_rate(p, c, 0.0, ts[0])
    out[0] = acc
    for i in range(1, ts.shape[0]):
        acc += _integrate_rate(p, c, ts[i - 1], ts[i])
        out[i] = acc
    return out


def _basis_columns(p: DriveParams, c: DerivedConstants, t: float, phi: float):
    """The three solution columns before the free-propagator prefactor."""
    sn, cn, dn = jacobi(p.omega * t, p.k)
    a, x, k = p.a, p.x, p.k
    b, bigt = c.B, c.T
    v0 = np.array([1j * a * dn, k**2 * x * cn, b * sn], dtype=complex) / bigt
    r = math.sqrt(2.0) * bigt * math.sqrt(a**2 * (1 - k**2) + (b * cn) ** 2)
    shared = k**2 * x * bigt * cn
    cross = a * b * sn * dn
    mid = k**2 * x * b * sn * cn
    diag = 1j * a * bigt * dn
    last = k**4 * x**2 * cn**2 + a**2 * dn**2
    wp = np.array([shared + 1j * cross, mid + diag, -last], dtype=complex)
    wm = np.array([shared - 1j * cross, -mid + diag, last], dtype=complex)
    vp = np.exp(-1j * phi) / r * wp
    vm = np.exp(+1j * phi) / r * wm
    return v0, vp, vm


def _prefactor(p: DriveParams, h0, t: float) -> np.ndarray:
    return propagator(h0, t, hbar=p.hbar)


def basis_state(
    label: BasisLabel,
    p: DriveParams,
    c: DerivedConstants,
    h0,
    t: float,
    *,
    phase: float | None = None,
) -> np.ndarray:
    """One of the three orthonormal solutions at time t.

    ``h0`` is an H0Params or any Hermitian matrix.  ``phase`` overrides the
    quadrature value of phi(t) when the caller has it precomputed.
    """
    if phase is None:
        phase = phase_phi(p, c, t)
    v0, vp, vm = _basis_columns(p, c, t, phase)
    col = {BasisLabel.ZERO: v0, BasisLabel.PLUS: vp, BasisLabel.MINUS: vm}[label]
    return _prefactor(p, h0, t) @ col


def decompose(initial, p: DriveParams, c: DerivedConstants) -> np.ndarray:
    """Coefficients <psi_j(0), initial> of a normalized initial state."""
    initial = np.asarray(initial, dtype=complex)
    norm = np.linalg.norm(initial)
    if abs(norm - 1.0) > 1e-8:
        raise DomainError(f"initial state norm deviates from 1 by {abs(norm - 1):.3g}")
    v0, vp, vm = _basis_columns(p, c, 0.0, 0.0)
    return np.array(
        [v0.conj() @ initial, vp.conj() @ initial, vm.conj() @ initial]
    )


def evolve(
    initial,
    p: DriveParams,
    c: DerivedConstants,
    h0,
    t: float,
    *,
    phase: float | None = None,
) -> np.ndarray:
    """Evolve a normalized initial state: sum of the three basis solutions."""
    coeff = decompose(initial, p, c)
    if phase is None:
        phase = phase_phi(p, c, t)
    v0, vp, vm = _basis_columns(p, c, t, phase)
    return _prefactor(p, h0, t) @ (coeff[0] * v0 + coeff[1] * vp + coeff[2] * vm)


def hamiltonian_at(p: DriveParams, h0, t: float) -> np.ndarray:
    """Full Hamiltonian: H0 plus the two interaction-picture drive terms."""
    sn, cn, dn = jacobi(p.omega * t, p.k)
    if isinstance(h0, H0Params):
        h0m = h0_matrix(h0)
    else:
        h0m = np.asarray(h0, dtype=complex)
    u = _prefactor(p, h0, t)
    ud = u.conj().T
    s4t = u @ generator(4) @ ud
    s7t = u @ generator(7) @ ud
    return h0m + p.a * cn * s4t + p.x * dn * s7t


def occupations(psi) -> np.ndarray:
    """Squared magnitudes of the three components."""
    psi = np.asarray(psi)
    return np.abs(psi) ** 2


@dataclass(frozen=True)
class TrajectorySample:
    t: float
    psi: np.ndarray
    occupations: np.ndarray
    phi: float
    jacobi: JacobiTriple


def trajectory(
    p: DriveParams,
    c: DerivedConstants,
    h0,
    initial,
    ts,
    *,
    force_zero_phase: bool = False,
) -> list[TrajectorySample]:
    """Evolve ``initial`` across a time grid, reusing cumulative phase sums.

    ``force_zero_phase`` is a diagnostic switch that evaluates the basis with
    phi forced to zero; with k < 1 the result is no longer a solution.
    """
    ts = np.asarray(ts, dtype=float)
    coeff = decompose(initial, p, c)
    if force_zero_phase:
        phis = np.zeros(ts.shape[0])
    else:
        phis = phase_on_grid(p, c, ts)
    out = []
    for t, phi in zip(ts, phis):
        v0, vp, vm = _basis_columns(p, c, t, phi)
        psi = _prefactor(p, h0, t) @ (coeff[0] * v0 + coeff[1] * vp + coeff[2] * vm)
        out.append(
            TrajectorySample(
                t=float(t),
                psi=psi,
                occupations=np.abs(psi) ** 2,
                phi=float(phi),
                jacobi=jacobi(p.omega * t, p.k),
            )
        )
    return out
