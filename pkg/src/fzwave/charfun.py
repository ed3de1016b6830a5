"""Characteristic function of the memory wave model and its ingredients.

All complex powers use the principal branch, so every function here is
analytic on the cut plane C minus (-inf, 0]. Points on the cut itself are
rejected; the two one-sided limits onto the cut are provided separately by
:func:`branch_values`, which is what the branch-cut quadrature consumes.

Functions accept scalars or numpy arrays and broadcast in the usual way.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ValidationError

__all__ = [
    "CharParams",
    "zener_ratio",
    "psi",
    "psi_prime",
    "branch_values",
    "theta_of_rho",
]


def _check_orders(alpha: float, tau: float) -> None:
    if not (0.0 <= alpha < 1.0):
        raise ValidationError("alpha", alpha, "[0, 1)")
    if not (0.0 < tau < 1.0):
        raise ValidationError("tau", tau, "(0, 1)")


@dataclass(frozen=True)
class CharParams:
    """Parameter triple (alpha, tau, theta) of the characteristic function.

    theta is carried as a free positive parameter: the kernel layer composes
    it from a wave number via :func:`theta_of_rho`, but nothing here depends
    on that origin.
    """

    alpha: float
    tau: float
    theta: float

    def __post_init__(self) -> None:
        _check_orders(self.alpha, self.tau)
        th = self.theta
        if not (isinstance(th, (int, float)) and th > 0.0 and np.isfinite(th)):
            raise ValidationError("theta", th, "(0, inf)")


def _check_off_cut(s) -> np.ndarray:
    s = np.asarray(s, dtype=complex)
    on_cut = (s.imag == 0.0) & (s.real <= 0.0)
    if np.any(on_cut):
        raise ValidationError("s", s[on_cut].flat[0], "complex plane minus (-inf, 0]")
    return s


def zener_ratio(s, alpha: float, tau: float):
    """Ratio (1 + s**alpha) / (1 + tau * s**alpha) on the principal branch.

    This is the Laplace-domain factor converting strain history to stress for
    the fractional standard linear solid; for ``Re s > 0`` it avoids the
    negative real axis, which keeps the wave problem's inversion contour
    honest. Arguments on (-inf, 0] are rejected.
    """
    _check_orders(alpha, tau)
    s = _check_off_cut(s)
    sa = s**alpha
    out = (1.0 + sa) / (1.0 + tau * sa)
    return out if out.ndim else complex(out)


def _psi(s, alpha: float, tau: float, theta):
    """Array-friendly characteristic function; validation at the edges only."""
    sa = s**alpha
    return s * s + theta * (1.0 + sa) / (1.0 + tau * sa)


def _psi_prime(s, alpha: float, tau: float, theta):
    sa = s**alpha
    return 2.0 * s + theta * alpha * (1.0 - tau) * s ** (alpha - 1.0) / (1.0 + tau * sa) ** 2


def psi(s, p: CharParams):
    """Characteristic function s**2 + theta * zener_ratio(s).

    Its zeros are the poles of the Laplace-transformed spectral kernel; for
    theta > 0 there are exactly two, a complex-conjugate pair off the right
    half plane.
    """
    s = _check_off_cut(s)
    out = _psi(s, p.alpha, p.tau, p.theta)
    return out if out.ndim else complex(out)


def psi_prime(s, p: CharParams):
    """Derivative of :func:`psi` with respect to s.

    d/ds [ (1+s^a)/(1+tau s^a) ] collapses to a(1-tau) s^(a-1) / (1+tau s^a)^2,
    so psi'(s) = 2 s + theta * alpha * (1 - tau) * s^(alpha-1) / (1 + tau s^alpha)^2.
    """
    s = _check_off_cut(s)
    out = _psi_prime(s, p.alpha, p.tau, p.theta)
    return out if out.ndim else complex(out)


def branch_values(q, alpha: float, tau: float):
    """One-sided limits of :func:`zener_ratio` onto the negative real axis.

    For q > 0, returns ``(F_plus, F_minus)`` — the values approached from
    above and below the cut at s = -q. They are complex conjugates; the minus
    value is produced by conjugation so the pair is conjugate-exact in
    floating point.
    """
    _check_orders(alpha, tau)
    q = np.asarray(q, dtype=float)
    if np.any(q <= 0.0):
        raise ValidationError("q", float(np.min(q)), "(0, inf)")
    w = q**alpha * np.exp(1j * np.pi * alpha)
    f_plus = (1.0 + w) / (1.0 + tau * w)
    f_minus = np.conj(f_plus)
    if f_plus.ndim:
        return f_plus, f_minus
    return complex(f_plus), complex(f_minus)


def theta_of_rho(rho, beta: float):
    """Spatial spectral weight rho**(1+beta) * sin(beta*pi/2) for rho >= 0.

    This is the symbol of minus the regularizing spatial operator at wave
    number rho; it vanishes identically at beta = 0 and reduces to rho**2 at
    beta = 1.
    """
    if not (0.0 <= beta <= 1.0):
        raise ValidationError("beta", beta, "[0, 1]")
    rho = np.asarray(rho, dtype=float)
    if np.any(rho < 0.0):
        raise ValidationError("rho", float(np.min(rho)), "[0, inf)")
    out = rho ** (1.0 + beta) * np.sin(beta * np.pi / 2.0)
    return out if out.ndim else float(out)
