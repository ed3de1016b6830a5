"""Locating and certifying the conjugate zero pair of the characteristic function.

The dispersion function has exactly two zeros off the branch cut: a
complex-conjugate pair in the closed left half-plane, both simple. The
representative with positive imaginary part drives the oscillatory part of
every kernel, so we locate it by damped Newton iteration from the elastic
(``alpha = 0``) root and certify the count with an argument-principle winding
integral over a rectangle. A quadtree bisection on winding counts serves as a
derivative-free fallback when Newton stalls.
"""

from __future__ import annotations

import cmath
import math
import warnings
from dataclasses import dataclass

import numpy as np

from .charfun import CharParams, _psi, _psi_prime
from .errors import NumericsError, ValidationError

_NODE_BUDGET = 200_000
_CUT_CLEARANCE = 1e-9
_NEWTON_MAX_ITER = 100


@dataclass(frozen=True)
class ZeroPair:
    """Upper-half-plane zero of the characteristic function.

    The conjugate partner is implied (available as :attr:`conjugate`), never
    stored. ``winding_checked`` records whether the argument principle
    confirmed a count of exactly one around ``s_z``.
    """

    s_z: complex
    residual: float
    winding_checked: bool
    iterations: int

    def __post_init__(self) -> None:
        if not self.s_z.imag > 0.0:
            raise ValidationError("s_z", self.s_z, "Im(s_z) > 0")
        if self.s_z.real > _CUT_CLEARANCE:
            raise ValidationError("s_z", self.s_z, "Re(s_z) <= 0 (left half-plane)")
        if not 0.0 <= self.residual <= 1e-10 * max(1.0, abs(self.s_z) ** 2):
            raise ValidationError(
                "residual", self.residual, "<= 1e-10 * max(1, |s_z|^2)"
            )

    @property
    def conjugate(self) -> complex:
        return self.s_z.conjugate()


def _arg_sweep(f, za: complex, zb: complex, budget: list[int]) -> float:
    """Accumulated continuous argument change of f along the segment [za, zb].

    Subdivides until consecutive samples differ in argument by less than
    pi/2, which pins the branch of the logarithm for an analytic, zero-free
    integrand.
    """
    stack = [(za, f(za), zb, f(zb))]
    total = 0.0
    while stack:
        a, fa, b, fb = stack.pop()
        d = cmath.phase(fb / fa)
        if abs(d) < 0.5 * math.pi and abs(b - a) < 0.2 * (abs(a) + 1.0):
            total += d
            continue
        budget[0] -= 1
        if budget[0] <= 0:
            raise NumericsError("zero too close to contour (node budget exhausted)")
        mid = 0.5 * (a + b)
        fm = f(mid)
        stack.append((mid, fm, b, fb))
        stack.append((a, fa, mid, fm))
    return total


def _rect_path(re_lo, re_hi, im_lo, im_hi) -> list[complex]:
    """Counterclockwise boundary, indented around the branch cut if straddled."""
    eta = _CUT_CLEARANCE
    sw = complex(re_lo, im_lo)
    se = complex(re_hi, im_lo)
    ne = complex(re_hi, im_hi)
    nw = complex(re_lo, im_hi)
    if re_lo < 0.0 and im_lo < 0.0 < im_hi:
        if re_hi <= 0.0:
            raise ValidationError(
                "rect",
                (re_lo, re_hi, im_lo, im_hi),
                "a rectangle crossing the negative real axis must extend past zero",
            )
        # Keyhole: descend the left edge to just above the cut, pass around
        # the origin on the right, and return just below the cut.
        return [
            sw, se, ne, nw,
            complex(re_lo, eta), complex(eta, eta),
            complex(eta, -eta), complex(re_lo, -eta),
            sw,
        ]
    return [sw, se, ne, nw, sw]


def winding_number(rect, p: CharParams, node_budget: int = _NODE_BUDGET) -> int:
    """Number of zeros of the characteristic function inside a rectangle.

    ``rect`` is ``(re_lo, re_hi, im_lo, im_hi)``, traversed counterclockwise;
    rectangles straddling the negative real axis are indented around the cut
    with a keyhole of half-width 1e-9. A coarse minimum-modulus scan guards
    the precondition that no zero sits within ~1e-8 of the boundary; if one
    does, the rectangle is nudged outward a few times before giving up.
    """
    re_lo, re_hi, im_lo, im_hi = (float(v) for v in rect)
    if not (re_lo < re_hi and im_lo < im_hi):
        raise ValidationError(
            "rect", (re_lo, re_hi, im_lo, im_hi), "re_lo < re_hi and im_lo < im_hi"
        )

    def f(s: complex) -> complex:
        return complex(_psi(complex(s), p.alpha, p.tau, p.theta))

    for attempt in range(6):
        path = _rect_path(re_lo, re_hi, im_lo, im_hi)
        # Minimum-modulus scan along the boundary.
        too_close = False
        for a, b in zip(path[:-1], path[1:]):
            ts = np.linspace(0.0, 1.0, 65)
            pts = a + (b - a) * ts
            vals = _psi(pts.astype(complex), p.alpha, p.tau, p.theta)
            scale = 1.0 + np.abs(pts) ** 2
            if (np.abs(vals) / scale < 1e-8).any():
                too_close = True
                break
        if not too_close:
            break
        pad = 10.0 ** (-6 + attempt)  # grow the window until the zero is interior
        re_lo -= pad
        re_hi += pad
        im_lo -= pad if im_lo > _CUT_CLEARANCE or im_lo < 0 else 0.0
        im_hi += pad
    else:
        raise NumericsError("zero too close to contour (perturbation failed)")

    budget = [node_budget]
    total = 0.0
    for a, b in zip(path[:-1], path[1:]):
        total += _arg_sweep(f, a, b, budget)
    w = total / (2.0 * math.pi)
    n = round(w)
    if abs(w - n) > 0.1:
        raise NumericsError(
            "winding number did not converge to an integer", achieved=abs(w - n)
        )
    return int(n)


def _elastic_root(tau: float, theta: float) -> complex:
    return 1j * math.sqrt(2.0 * theta / (1.0 + tau))


def _newton_polish(
    s: complex, alpha: float, tau: float, theta: float
) -> tuple[complex, bool, int]:
    """Damped Newton; returns (s, converged, iterations)."""
    fs = complex(_psi(s, alpha, tau, theta))
    for it in range(1, _NEWTON_MAX_ITER + 1):
        if abs(fs) <= 1e-14 * max(1.0, abs(s) ** 2):
            return s, True, it  # residual at the rounding floor; no descent possible
        d = complex(_psi_prime(s, alpha, tau, theta))
        if d == 0:
            return s, False, it
        step = fs / d
        lam = 1.0
        for _ in range(20):
            cand = s - lam * step
            if cand.imag <= _CUT_CLEARANCE and cand.real <= 0.0:
                lam *= 0.5  # keep clear of the branch cut
                continue
            f_cand = complex(_psi(cand, alpha, tau, theta))
            if abs(f_cand) < abs(fs):
                break
            lam *= 0.5
        else:
            return s, False, it
        s, fs = cand, f_cand
        if abs(lam * step) <= 1e-13 * max(1.0, abs(s)):
            return s, True, it
    return s, abs(fs) <= 1e-10 * max(1.0, abs(s) ** 2), _NEWTON_MAX_ITER


def _bisection_fallback(p: CharParams) -> complex:
    """Quadtree descent on winding counts over the upper-left search window."""
    m = max(1.0, math.sqrt(2.0 * p.theta))
    re_lo, re_hi = -4.0 * m, _CUT_CLEARANCE
    im_lo, im_hi = _CUT_CLEARANCE, 4.0 * m
    if winding_number((re_lo, re_hi, im_lo, im_hi), p) < 1:
        raise NumericsError("no zero of the characteristic function in the search window")
    for _ in range(60):
        if max(re_hi - re_lo, im_hi - im_lo) < 1e-12 * max(
            1.0, abs(complex(re_lo, im_lo))
        ):
            break
        rm = 0.5 * (re_lo + re_hi)
        im = 0.5 * (im_lo + im_hi)
        for a, b, c, d in (
            (re_lo, rm, im_lo, im),
            (rm, re_hi, im_lo, im),
            (re_lo, rm, im, im_hi),
            (rm, re_hi, im, im_hi),
        ):
            if winding_number((a, b, c, d), p) >= 1:
                re_lo, re_hi, im_lo, im_hi = a, b, c, d
                break
        else:
            raise NumericsError("winding bisection lost the zero between subdivisions")
    return complex(0.5 * (re_lo + re_hi), 0.5 * (im_lo + im_hi))


def find_zero_pair(p: CharParams) -> ZeroPair:
    """Locate the upper-half-plane characteristic zero and certify it.

    Newton iteration starts from the exact order-zero root
    i*sqrt(2*theta/(1+tau)) and falls back to winding-count bisection if it
    fails to converge. Certification re-runs the argument principle on a
    small rectangle around the located zero and requires a count of exactly
    one, which also confirms simplicity.
    """
    alpha, tau, theta = p.alpha, p.tau, p.theta
    s0 = _elastic_root(tau, theta)
    iterations = 0
    if alpha == 0.0:
        s = s0  # characteristic function is exactly quadratic here
    else:
        s, ok, iterations = _newton_polish(s0, alpha, tau, theta)
        if not ok:
            s, ok, more = _newton_polish(_bisection_fallback(p), alpha, tau, theta)
            iterations += more
            if not ok:
                raise NumericsError(
                    "Newton iteration failed to converge to a characteristic zero",
                    achieved=abs(complex(_psi(s, alpha, tau, theta))),
                )
    if s.imag < 0.0:
        s = s.conjugate()
    residual = abs(complex(_psi(s, alpha, tau, theta)))
    if residual > 1e-10 * max(1.0, abs(s) ** 2):
        raise NumericsError("characteristic-zero residual too large", achieved=residual)
    if s.real > _CUT_CLEARANCE:
        raise NumericsError(
            f"located zero {s} lies in the open right half-plane, contradicting passivity"
        )
    if alpha > 0.0 and abs(s.real) < _CUT_CLEARANCE:
        warnings.warn(
            "characteristic zero hugs the imaginary axis; damping may be under-resolved",
            stacklevel=2,
        )
        s = complex(min(s.real, 0.0), s.imag)

    d = max(1e-6, 1e-3 * max(1.0, abs(s)))
    im_lo = s.imag - d
    if im_lo <= 0.0:
        im_lo = 0.5 * s.imag
    count = winding_number(
        (s.real - d, max(s.real + d, _CUT_CLEARANCE), im_lo, s.imag + d), p
    )
    if count != 1:
        raise NumericsError(
            f"certification rectangle around {s} contains {count} zeros instead of 1"
        )
    return ZeroPair(
        s_z=complex(s), residual=residual, winding_checked=True, iterations=iterations
    )


def _zero_pair_batch(
    alpha: float, tau: float, theta: np.ndarray
) -> tuple[np.ndarray, np.ndarray]:
    """Vectorized Newton for many theta values at fixed (alpha, tau).

    Returns arrays (s, psi_prime_at_s). Used by the kernel assembly where
    thousands of wave numbers need their zero pair at once; entries that fail
    the vectorized sweep are recomputed through find_zero_pair.
    """
    theta = np.asarray(theta, dtype=float)
    s = 1j * np.sqrt(2.0 * theta / (1.0 + tau))
    if alpha == 0.0:
        return s, 2.0 * s
    fs = _psi(s, alpha, tau, theta)
    active = np.ones(s.shape, dtype=bool)
    for _ in range(_NEWTON_MAX_ITER):
        if not active.any():
            break
        d = _psi_prime(s[active], alpha, tau, theta[active])
        nonzero = d != 0
        step = np.where(nonzero, fs[active] / np.where(nonzero, d, 1.0), 0.0)
        lam = np.ones(step.shape)
        cur = np.abs(fs[active])
        cand = s[active] - step
        f_cand = _psi(cand, alpha, tau, theta[active])
        for _ in range(20):
            bad = ((cand.imag <= _CUT_CLEARANCE) & (cand.real <= 0.0)) | (
                np.abs(f_cand) >= cur
            )
            if not bad.any():
                break
            lam[bad] *= 0.5
            cand = s[active] - lam * step
            f_cand = np.where(bad, _psi(cand, alpha, tau, theta[active]), f_cand)
        s[active] = cand
        fs[active] = f_cand
        done = (np.abs(lam * step) <= 1e-13 * np.maximum(1.0, np.abs(cand))) | (
            np.abs(f_cand) <= 1e-14 * np.maximum(1.0, np.abs(cand) ** 2)
        )
        idx = np.flatnonzero(active)
        active[idx[done]] = False
    s = np.where(s.imag < 0.0, np.conj(s), s)
    resid = np.abs(_psi(s, alpha, tau, theta))
    bad = resid > 1e-10 * np.maximum(1.0, np.abs(s) ** 2)
    for i in np.flatnonzero(bad):
        pair = find_zero_pair(CharParams(alpha, tau, float(theta[i])))
        s[i] = pair.s_z
    return s, _psi_prime(s, alpha, tau, theta)
