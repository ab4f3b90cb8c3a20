"""Jacobi elliptic functions sn, cn, dn and the complete integral K(k).

The functions are evaluated with the descending Landen / arithmetic-geometric
mean recurrence.  This keeps the identities sn^2 + cn^2 = 1 and
dn^2 + k^2 sn^2 = 1 satisfied to machine precision by construction:
sn and cn come from the sine and cosine of one amplitude angle, and dn is
assembled from the stable radical sqrt(k'^2 + k^2 cn^2).

Arguments are the bare phase u; callers that drive a system at angular
frequency omega pass u = omega * t themselves.
"""

from __future__ import annotations

import math
from typing import NamedTuple

from .errors import DivergenceError, DomainError

__all__ = ["JacobiTriple", "jacobi", "quarter_period"]

# Below this squared complementary modulus the AGM gains nothing over the
# hyperbolic limit: the first-order correction in k'^2 is already < 1e-12
# and the second-order error term is O(k'^4) < 1e-24.
_HYPERBOLIC_KP2 = 1e-12

_MAX_AGM_ITERATIONS = 64


class JacobiTriple(NamedTuple):
    """Values of the three Jacobi elliptic functions at one phase."""

    sn: float
    cn: float
    dn: float


def _check_modulus(k: float) -> float:
    k = float(k)
    if not math.isfinite(k) or not 0.0 <= k <= 1.0:
        raise DomainError(f"elliptic modulus must lie in [0, 1], got {k!r}")
    return k


def quarter_period(k: float) -> float:
    """Complete elliptic integral of the first kind, K(k).

    sn and cn have period 4*K(k); dn has period 2*K(k).  Strictly
    increasing in k, from K(0) = pi/2, and divergent at k = 1.
    """
    k = _check_modulus(k)
    if k == 1.0:
        raise DivergenceError("K(k) diverges at k = 1")
    a, b = 1.0, math.sqrt((1.0 - k) * (1.0 + k))
    for _ in range(_MAX_AGM_ITERATIONS):
        if abs(a - b) <= 4e-16 * a:
            break
        a, b = 0.5 * (a + b), math.sqrt(a * b)
    else:
        raise ArithmeticError("AGM failed to converge")
    return math.pi / (2.0 * a)


def _jacobi_hyperbolic(u: float, kp2: float) -> JacobiTriple:
    # k -> 1 limit with the first-order correction in k'^2.  The correction
    # expansion holds for |u| well inside the quarter period ~ln(4/k'); past
    # that (and for huge |u| where cosh overflows) the solitary limit values
    # are returned as-is.
    if abs(u) > 700.0:
        sign = 1.0 if u >= 0.0 else -1.0
        return JacobiTriple(sign, 0.0, 0.0)
    t = math.tanh(u)
    s = 1.0 / math.cosh(u)
    if kp2 <= 0.0 or abs(u) > 10.0:
        return JacobiTriple(t, s, s)
    q = 0.25 * kp2
    shch = t / (s * s)  # sinh cosh
    sn = t + q * (t - u * s * s)  # (sinh cosh - u) sech^2 = tanh - u sech^2
    cn = s - q * (shch - u) * t * s
    dn = s + q * (shch + u) * t * s
    return JacobiTriple(sn, cn, dn)


def jacobi(u: float, k: float) -> JacobiTriple:
    """Evaluate (sn(u, k), cn(u, k), dn(u, k)) for real phase u.

    At k = 0 this is (sin u, cos u, 1); at k = 1 it is
    (tanh u, sech u, sech u).
    """
    u = float(u)
    if not math.isfinite(u):
        raise DomainError(f"phase must be finite, got {u!r}")
    k = _check_modulus(k)

    if u == 0.0:
        return JacobiTriple(0.0, 1.0, 1.0)
    if k == 0.0:
        return JacobiTriple(math.sin(u), math.cos(u), 1.0)
    kp2 = (1.0 - k) * (1.0 + k)
    if kp2 < _HYPERBOLIC_KP2:
        return _jacobi_hyperbolic(u, kp2)

    # Reduce the phase into one period so the scaled angle 2^n a_n u stays
    # small; K is a free by-product of the same mean.
    a_seq = [1.0]
    b = math.sqrt(kp2)
    c_seq = [k]
    n = 0
    while abs(c_seq[n]) > 4e-16 * a_seq[n]:
        if n >= _MAX_AGM_ITERATIONS:
            raise ArithmeticError("AGM failed to converge")
        c_seq.append(0.5 * (a_seq[n] - b))
        a_next = 0.5 * (a_seq[n] + b)
        b = math.sqrt(a_seq[n] * b)
        a_seq.append(a_next)
        n += 1

    period = 2.0 * math.pi / a_seq[n]  # 4 K(k)
    u -= period * math.floor(u / period)

    phi = (2.0**n) * a_seq[n] * u
    for i in range(n, 0, -1):
        s = (c_seq[i] / a_seq[i]) * math.sin(phi)
        phi = 0.5 * (phi + math.asin(max(-1.0, min(1.0, s))))

    sn = math.sin(phi)
    cn = math.cos(phi)
    dn = math.sqrt(kp2 + (k * cn) * (k * cn))
    return JacobiTriple(sn, cn, dn)
