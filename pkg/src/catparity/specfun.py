"""Special-function kernels: Laguerre polynomials and Bessel functions.

Every closed-form expression in the package reduces to the plain or
generalized Laguerre polynomials and to J0/I0 Bessel evaluations.  The
Laguerre values come from the upward three-term recurrence, which is stable
in the alternating-sign regime used here (tested envelope: order up to four
times the Fock truncation, argument up to (2*alpha_max)^2).  The scaled
modified Bessel function exp(-x)*I0(x) is the primitive; the unscaled value
is derived from it and guarded against overflow.
"""

from __future__ import annotations

import math

import numpy as np
from scipy import special as _sp

from .errors import ConvergenceError, DomainError, RangeError

# exp overflows just above this; unscaled I0(x) ~ e^x / sqrt(2 pi x)
_I0_OVERFLOW_ARG = 700.0


def laguerre_all(n_max: int, x: float) -> np.ndarray:
    """All Laguerre polynomials L_0(x)..L_n_max(x) in one recurrence pass.

    Parameters
    ----------
    n_max : int
        highest order, >= 0
    x : float
        evaluation point; must be finite

    Returns
    -------
    numpy.ndarray
        shape (n_max + 1,), entry n is L_n(x)
    """
    if n_max < 0:
        raise DomainError(f"n_max must be >= 0, got {n_max}")
    if not math.isfinite(x):
        raise DomainError(f"x must be finite, got {x}")
    out = np.empty(n_max + 1)
    out[0] = 1.0
    if n_max == 0:
        return out
    out[1] = 1.0 - x
    for n in range(1, n_max):
        # (n+1) L_{n+1} = (2n + 1 - x) L_n - n L_{n-1}
        out[n + 1] = ((2 * n + 1 - x) * out[n] - n * out[n - 1]) / (n + 1)
    return out


def laguerre_generalized_all(n_max: int, l: int, x: float) -> np.ndarray:
    """All generalized Laguerre polynomials L_n^{(l)}(x) for n = 0..n_max."""
    if n_max < 0 or l < 0:
        raise DomainError(f"n_max and l must be >= 0, got n_max={n_max}, l={l}")
    if not math.isfinite(x):
        raise DomainError(f"x must be finite, got {x}")
    out = np.empty(n_max + 1)
    out[0] = 1.0
    if n_max == 0:
        return out
    out[1] = l + 1.0 - x
    for n in range(1, n_max):
        # (n+1) L_{n+1}^{(l)} = (2n + l + 1 - x) L_n^{(l)} - (n + l) L_{n-1}^{(l)}
        out[n + 1] = ((2 * n + l + 1 - x) * out[n] - (n + l) * out[n - 1]) / (n + 1)
    return out


def laguerre_generalized(n: int, l: int, x: float) -> float:
    """Generalized Laguerre polynomial L_n^{(l)}(x); equals laguerre_all for l = 0."""
    if n < 0 or l < 0:
        raise DomainError(f"n and l must be >= 0, got n={n}, l={l}")
    return float(laguerre_generalized_all(n, l, x)[n])


def bessel_j0(x: float) -> float:
    """Bessel function of the first kind, J_0(x)."""
    return float(_sp.j0(x))


def bessel_i0_scaled(x: float) -> float:
    """Exponentially scaled modified Bessel function, exp(-|x|) * I_0(x).

    This is the primitive used throughout: the formulas all pair I_0 with
    Gaussian factors, so the scaled value never overflows.
    """
    return float(_sp.i0e(x))


def bessel_i0(x: float) -> float:
    """Modified Bessel function of the first kind, I_0(x).

    Raises RangeError above the double-precision overflow threshold; use
    bessel_i0_scaled there instead.
    """
    if abs(x) > _I0_OVERFLOW_ARG:
        raise RangeError(
            f"I0({x:g}) overflows double precision; use bessel_i0_scaled"
        )
    return float(_sp.i0e(x) * math.exp(abs(x)))


def _i0_series(z: complex) -> complex:
    """Ascending series sum_k (z^2/4)^k / (k!)^2, for small |z| only."""
    w = 0.25 * z * z
    term = 1.0 + 0.0j
    total = term
    for k in range(1, 400):
        term *= w / (k * k)
        total += term
        if abs(term) <= 1e-17 * abs(total):
            return total
    raise ConvergenceError(  # pragma: no cover - series terminates within guard
        f"I0 series did not converge for |z| = {abs(z):g}"
    )


def bessel_i0e_complex(z: complex) -> complex:
    """Exponentially scaled I_0 for complex argument, exp(-|Re z|) * I_0(z).

    The ascending series cancels catastrophically in double precision once
    |z| grows beyond a few tens off the real axis, so above a small-|z|
    window this evaluates the integral representation
    (1/pi) int_0^pi exp(z cos t - |Re z|) dt by the trapezoidal rule.  All
    odd derivatives of the integrand vanish at both endpoints, so the rule
    converges spectrally; the point count scales with |z|.
    """
    z = complex(z)
    az = abs(z)
    if az <= 8.0:
        return _i0_series(z) * math.exp(-abs(z.real))
    n = int(6 * az) + 200
    t = np.linspace(0.0, math.pi, n + 1)
    vals = np.exp(z * np.cos(t) - abs(z.real))
    vals[0] *= 0.5
    vals[-1] *= 0.5
    return complex(np.sum(vals) / n)


def bessel_i0_complex(z: complex) -> complex:
    """Modified Bessel function I_0(z) for complex z.

    Unscaled value; raises RangeError where exp(|Re z|) would overflow.
    Use :func:`bessel_i0e_complex` there instead.
    """
    z = complex(z)
    if abs(z.real) > _I0_OVERFLOW_ARG:
        raise RangeError(
            f"I0(z) overflows double precision for Re z = {z.real:g}"
        )
    return bessel_i0e_complex(z) * math.exp(abs(z.real))


def i0_asymptotic_remainder(y: float) -> float:
    """Relative remainder F(y) = sqrt(2 pi y) exp(-y) I_0(y) - 1.

    F captures how far I_0 is from its leading asymptotic form.  For y >= 8
    the bound |F(y)| < 1/(4 y) is asserted; the leading behaviour is
    F ~ 1/(8 y), so the factor-two margin is tight but safe.
    """
    if y <= 0:
        raise DomainError(f"y must be > 0, got {y}")
    f = math.sqrt(2.0 * math.pi * y) * bessel_i0_scaled(y) - 1.0
    if y >= 8.0 and not abs(f) < 1.0 / (4.0 * y):
        raise AssertionError(
            f"remainder bound violated: |F({y:g})| = {abs(f):.3e} >= {1.0 / (4.0 * y):.3e}"
        )
    return f
