"""Rotating-wave-approximation Hamiltonians for junction-coupled cavity modes.

All Hamiltonians are stored divided by hbar, i.e. in angular-frequency units,
and every one of them is diagonal in the Fock basis.  The Josephson energy
``E_J`` is therefore also an angular frequency (use :func:`angular` to convert
a value given in Hz at the boundary once).

The first-order Hamiltonian of a single mode has diagonal entries
``-E_J exp(-phi^2/2) L_n(phi^2)``; two modes multiply their Laguerre factors.
The second-order correction is a double sum over photon-exchange orders
(l_a, l_b) of products of dressing operators, with frequency denominators
``l_a w_a + l_b w_b`` and ``l_a w_a - l_b w_b``.  Difference denominators are
checked against a configurable resonance floor.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np
from scipy.special import gammaln

from . import specfun
from .errors import NearResonanceError
from .fock import FockOperator, FockSpace, diagonal_op

TWO_PI = 2.0 * math.pi

#: default floor for |l_a w_a - l_b w_b|, an angular 10 MHz
DEFAULT_RESONANCE_FLOOR = TWO_PI * 10e6


def angular(frequency_hz: float) -> float:
    """Convert an ordinary frequency in Hz to angular units (rad/s)."""
    return TWO_PI * frequency_hz


@dataclass(frozen=True)
class JunctionParams:
    """Junction energy and mode participations (phi values are dimensionless)."""

    e_j: float
    phi_a: float
    phi_b: float = 0.0
    phi_c: float = 0.0

    def __post_init__(self):
        if self.e_j <= 0:
            raise ValueError(f"E_J must be > 0, got {self.e_j}")
        if min(self.phi_a, self.phi_b, self.phi_c) < 0:
            raise ValueError("phi values must be >= 0")


@dataclass(frozen=True)
class ModeFrequencies:
    """Angular frequencies of the two cavity modes."""

    omega_a: float
    omega_b: float

    def __post_init__(self):
        if self.omega_a <= 0 or self.omega_b <= 0:
            raise ValueError("mode frequencies must be > 0")


def _single_mode_diag(e_j: float, phi: float, dim: int) -> np.ndarray:
    lag = specfun.laguerre_all(dim - 1, phi * phi)
    return -e_j * math.exp(-0.5 * phi * phi) * lag


def h_rwa_single(params: JunctionParams, space: FockSpace) -> FockOperator:
    """First-order single-mode Hamiltonian, diagonal in the Fock basis."""
    return diagonal_op(space, _single_mode_diag(params.e_j, params.phi_a, space.dim))


def h_rwa_two_mode(
    params: JunctionParams, space_a: FockSpace, space_b: FockSpace
) -> FockOperator:
    """First-order two-mode Hamiltonian with separable Laguerre weights."""
    la = specfun.laguerre_all(space_a.dim - 1, params.phi_a ** 2)
    lb = specfun.laguerre_all(space_b.dim - 1, params.phi_b ** 2)
    pref = -params.e_j * math.exp(-0.5 * (params.phi_a ** 2 + params.phi_b ** 2))
    diag = pref * np.outer(la, lb).reshape(-1)
    return diagonal_op(space_a * space_b, diag)


def scaled_ladder_overlaps(l: int, phi: float, n_max: int) -> np.ndarray:
    """Signed ladder elements of the displacement, +-|<n| D(i phi) |n+l>|.

    These combine the generalized Laguerre polynomial with the square-rooted
    factorial ratio; up to phases they are unitary matrix elements and hence
    bounded by one, which makes them the numerically safe building block for
    the dressing operators and the second-order sums.
    """
    if l < 0:
        raise ValueError(f"l must be >= 0, got {l}")
    if phi == 0.0:
        if l == 0:
            return np.ones(n_max + 1)
        return np.zeros(n_max + 1)
    n = np.arange(n_max + 1)
    lag = specfun.laguerre_generalized_all(n_max, l, phi * phi)
    log_pref = 0.5 * (gammaln(n + 1) - gammaln(n + l + 1)) + l * math.log(phi) - 0.5 * phi * phi
    return np.exp(log_pref) * lag


def a_dressing_operator(l: int, phi: float, space: FockSpace) -> FockOperator:
    """Diagonal dressing operator with entries phi^l e^{-phi^2/2} n!/(n+l)! L_n^{(l)}(phi^2)."""
    n = np.arange(space.dim)
    d = scaled_ladder_overlaps(l, phi, space.dim - 1)
    # A_n = sqrt(n!/(n+l)!) * d_n
    half_ratio = np.exp(0.5 * (gammaln(n + 1) - gammaln(n + l + 1)))
    return diagonal_op(space, half_ratio * d)


def _mode_term_vectors(l: int, phi: float, dim: int) -> tuple[np.ndarray, np.ndarray]:
    """Diagonals of a^dag^l A(l)^2 a^l and A(l) a^l a^dag^l A(l) on dim levels.

    Both are squared ladder overlaps: entry n of the first is d_{n-l,l}^2
    (zero below n = l) and of the second d_{n,l}^2, with the factorial ratios
    of the untruncated ladder, so the top rows are not corrupted by the
    finite matrix representation.
    """
    d = scaled_ladder_overlaps(l, phi, dim - 1)
    lowered = np.zeros(dim)
    if l < dim:
        lowered[l:] = d[: dim - l] ** 2
    raised = d ** 2
    return lowered, raised


def h_rwa_multi_junction(
    junctions: list[tuple[float, float]], space: FockSpace
) -> FockOperator:
    """Sum of single-mode first-order Hamiltonians, one per (E_J, phi_a) pair."""
    if not junctions:
        raise ValueError("need at least one junction")
    diag = np.zeros(space.dim)
    for e_j, phi in junctions:
        if e_j <= 0:
            raise ValueError(f"every E_J must be > 0, got {e_j}")
        diag += _single_mode_diag(e_j, phi, space.dim)
    return diagonal_op(space, diag)


def resonance_scan(
    freqs: ModeFrequencies, l_max: int, floor: float = DEFAULT_RESONANCE_FLOOR
) -> list[tuple[int, int, float]]:
    """Same-parity (l_a, l_b) pairs whose difference denominator is below the floor.

    Opposite-parity pairs carry a vanishing prefactor and are never reported.
    """
    hits = []
    for l_a in range(1, l_max + 1):
        for l_b in range(1, l_max + 1):
            if (l_a + l_b) % 2 != 0:
                continue
            gap = abs(l_a * freqs.omega_a - l_b * freqs.omega_b)
            if gap < floor:
                hits.append((l_a, l_b, gap))
    return hits


def _second_order_pairs(l_hi: int):
    """All (l_a, l_b) pairs with nonzero prefactor and max order <= l_hi."""
    for l_a in range(l_hi + 1):
        for l_b in range(l_hi + 1):
            if (l_a, l_b) == (0, 0):
                continue
            if (l_a + l_b) % 2 != 0:
                continue  # both sums vanish for opposite parity
            yield l_a, l_b


def _resonance_horizon(
    freqs: ModeFrequencies, floor: float, l_cap: int
) -> tuple[int, tuple[int, int, float] | None]:
    """Largest order below the first same-parity near-resonance, if any."""
    best = None
    horizon = l_cap
    for l_a in range(1, l_cap + 1):
        for l_b in range(1, l_cap + 1):
            if (l_a + l_b) % 2 != 0:
                continue
            gap = abs(l_a * freqs.omega_a - l_b * freqs.omega_b)
            if gap < floor:
                if best is None or max(l_a, l_b) < horizon:
                    best = (l_a, l_b, gap)
                    horizon = max(l_a, l_b)
    return (horizon - 1 if best is not None else l_cap), best


def h_rwa2_correction(
    params: JunctionParams,
    freqs: ModeFrequencies,
    space_a: FockSpace,
    space_b: FockSpace,
    l_max: int = 12,
    resonance_floor: float = DEFAULT_RESONANCE_FLOOR,
    tail_tol: float = 1e-12,
    l_cap: int = 200,
    escalate: bool = True,
) -> FockOperator:
    """Second-order part of the two-mode RWA Hamiltonian (the E_J^2 sums only).

    ``l_max`` is escalated in steps of two until the outermost shell of
    (l_a, l_b) pairs contributes less than ``tail_tol * E_J^2 / min
    denominator`` in max norm; participation values phi around 4 need
    l_max of several tens for that, so the default starting point always
    escalates.  A same-parity pair below the resonance floor inside the
    requested ``l_max`` raises; if auto-escalation would run into one, the
    sum stops just below it with a warning instead, since such terms are
    secular and the closed form does not apply to them.
    """
    da, db = space_a.dim, space_b.dim
    wa, wb = freqs.omega_a, freqs.omega_b
    e_j = params.e_j

    horizon, offender = _resonance_horizon(freqs, resonance_floor, l_cap)
    if offender is not None and horizon < l_max:
        raise NearResonanceError(offender[0], offender[1], offender[2], resonance_floor)

    vecs_a: dict[int, tuple[np.ndarray, np.ndarray]] = {}
    vecs_b: dict[int, tuple[np.ndarray, np.ndarray]] = {}

    def get(cache, l, phi, dim):
        if l not in cache:
            cache[l] = _mode_term_vectors(l, phi, dim)
        return cache[l]

    def pair_term(l_a: int, l_b: int) -> np.ndarray:
        low_a, high_a = get(vecs_a, l_a, params.phi_a, da)
        low_b, high_b = get(vecs_b, l_b, params.phi_b, db)
        out = np.zeros((da, db))
        # sum with denominator l_a w_a + l_b w_b
        c1 = 1.0 / (l_a * wa + l_b * wb)
        out += c1 * (np.outer(low_a, low_b) - np.outer(high_a, high_b))
        if l_a >= 1 and l_b >= 1:
            gap = l_a * wa - l_b * wb
            c2 = (-1.0) ** l_a / gap
            out += c2 * (np.outer(low_a, high_b) - np.outer(high_a, low_b))
        return out

    total = np.zeros((da, db))
    min_denom = min(wa, wb)
    l_hi = 0
    while True:
        target = min(l_max if l_hi == 0 else l_hi + 2, horizon)
        shell_max = 0.0
        for l_a, l_b in _second_order_pairs(target):
            if max(l_a, l_b) <= l_hi:
                continue  # already accumulated
            term = pair_term(l_a, l_b)
            total += term
            if l_a >= 1 and l_b >= 1:
                min_denom = min(min_denom, abs(l_a * wa - l_b * wb))
            if max(l_a, l_b) >= target - 1:
                shell_max = max(shell_max, float(np.max(np.abs(term))))
        l_hi = target
        if not escalate:
            break
        if shell_max * e_j ** 2 < tail_tol * e_j ** 2 / min_denom:
            break
        if l_hi >= horizon:
            detail = (
                f"first same-parity near-resonance at (l_a={offender[0]}, l_b={offender[1]})"
                if offender is not None
                else f"l_cap={l_cap}"
            )
            warnings.warn(
                f"second-order sums stopped at l={l_hi} ({detail}) with shell "
                f"max {shell_max:.3e} above tolerance {tail_tol / min_denom:.3e}",
                RuntimeWarning,
                stacklevel=2,
            )
            break
    return diagonal_op(space_a * space_b, (e_j ** 2) * total.reshape(-1))


def h_rwa2_two_mode(
    params: JunctionParams,
    freqs: ModeFrequencies,
    space_a: FockSpace,
    space_b: FockSpace,
    l_max: int = 12,
    resonance_floor: float = DEFAULT_RESONANCE_FLOOR,
    tail_tol: float = 1e-12,
    l_cap: int = 200,
    escalate: bool = True,
) -> FockOperator:
    """Two-mode Hamiltonian through second order: first-order term plus both sums."""
    first = h_rwa_two_mode(params, space_a, space_b)
    corr = h_rwa2_correction(
        params,
        freqs,
        space_a,
        space_b,
        l_max=l_max,
        resonance_floor=resonance_floor,
        tail_tol=tail_tol,
        l_cap=l_cap,
        escalate=escalate,
    )
    return first + corr
