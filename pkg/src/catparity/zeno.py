"""Cat-manifold projections and second-order confinement dynamics.

Under q-photon driven dissipation the dynamics is confined to the cat
manifold M(q, alpha) and a Fock-diagonal Hamiltonian acts there through its
projection, which is diagonal in the cat basis.  This module provides the
projection itself, closed forms for its matrix elements (exact Bessel form
and the stationary-phase form useful at large amplitudes), the degeneracy
diagnostics of the four-photon case, and the second-order corrections: jump
operators built from a Moore-Penrose pseudo-inverse, the asymptotic
projection map of the bare dissipators, and the induced-dephasing rate of
the two-mode joint-parity setting.

Matrix-element conventions: the printed closed forms weight the coherent
components with exactly 1/sqrt(q).  True cat states differ from that by the
normalization constants (a relative e^{-2|alpha|^2} effect for q = 2);
``normalized=True`` switches the closed form to the exactly normalized
basis, matching :func:`project` to machine precision.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np

from . import specfun
from .errors import ConvergenceError, DimensionMismatchError, DomainError
from .fock import (
    CatBasis,
    DensityMatrix,
    FockOperator,
    FockSpace,
    FockState,
    annihilation,
    cat_basis,
    coherent_state,
    identity_op,
    projector,
    safe_dim,
)
from .integrators import make_lindblad_rhs, rk45
from .rwa import JunctionParams, h_rwa_single

PSEUDO_INVERSE_CUTOFF = 1e-8


@dataclass
class ProjectedHamiltonian:
    """Matrix elements of a Hamiltonian in a cat basis."""

    basis: CatBasis
    matrix: np.ndarray
    alpha: complex
    q: int

    def diagonal(self) -> np.ndarray:
        return np.real(np.diag(self.matrix))

    def max_off_diagonal(self) -> float:
        off = self.matrix - np.diag(np.diag(self.matrix))
        return float(np.max(np.abs(off)))

    def is_hermitian(self, tol: float = 1e-10) -> bool:
        return np.max(np.abs(self.matrix - self.matrix.conj().T)) <= tol


@dataclass
class DegeneracyDiagnostics:
    """Parity splitting strength and within-parity non-degeneracy on M(4, alpha)."""

    delta_parity: float
    small_delta_parity: float
    omega_a: float


@dataclass
class ZenoJumpSet:
    """Second-order jump operators R_j and the Zeno bookkeeping that built them."""

    r_ops: list[FockOperator]
    kappa_2ph: float
    epsilon_zeno: float


def project(h: FockOperator, basis: CatBasis) -> ProjectedHamiltonian:
    """Matrix of <basis_i| H |basis_j>."""
    if basis.space != h.space:
        raise DimensionMismatchError(
            f"basis lives on {basis.space}, operator on {h.space}"
        )
    b = basis.matrix()
    m = b.conj().T @ h.matrix @ b
    return ProjectedHamiltonian(basis, m, basis.alpha, len(basis))


def c_pm_closed_form(
    e_j: float, phi_a: float, alpha: complex, normalized: bool = False
) -> tuple[float, float]:
    """Diagonal cat matrix elements c+- of the single-mode Hamiltonian.

    Bessel form: c+- = -E_J e^{-phi^2/2} [J0(2|alpha| phi) +-
    e^{-2|alpha|^2} I0(2|alpha| phi)], evaluated through the scaled I0 so no
    exponential ever overflows.  With ``normalized=True`` the 1/sqrt(2)
    component weights are replaced by the exact cat normalizations, dividing
    by (1 +- e^{-2|alpha|^2}).
    """
    a = abs(alpha)
    if a <= 0 or phi_a <= 0:
        raise DomainError("alpha and phi_a must be > 0")
    y = 2.0 * a * phi_a
    base_j = math.exp(-0.5 * phi_a * phi_a) * specfun.bessel_j0(y)
    # e^{-phi^2/2} e^{-2 a^2} I0(y) with exponents combined analytically
    base_i = math.exp(-0.5 * (phi_a - 2.0 * a) ** 2) * specfun.bessel_i0_scaled(y)
    c_plus = -e_j * (base_j + base_i)
    c_minus = -e_j * (base_j - base_i)
    if normalized:
        eps = math.exp(-2.0 * a * a)
        c_plus /= 1.0 + eps
        c_minus /= 1.0 - eps
    return c_plus, c_minus


def omega_a(e_j: float, phi_a: float, alpha: complex) -> float:
    """Parity-Hamiltonian strength, Gaussian approximation.

    Omega_a = E_J e^{-(phi_a - 2|alpha|)^2 / 2} / sqrt(pi |alpha| phi_a),
    exact up to the Bessel remainder F (below 1/64 at the usual operating
    point phi_a = 2|alpha| = 4).
    """
    a = abs(alpha)
    if a <= 0 or phi_a <= 0:
        raise DomainError("alpha and phi_a must be > 0")
    return e_j * math.exp(-0.5 * (phi_a - 2.0 * a) ** 2) / math.sqrt(math.pi * a * phi_a)


def omega_a_exact(e_j: float, phi_a: float, alpha: complex) -> float:
    """Exact parity strength (c- - c+) from the Bessel closed form."""
    c_plus, c_minus = c_pm_closed_form(e_j, phi_a, alpha)
    return c_minus - c_plus


def coherent_coupling(e_j: float, phi_a: float, alpha: complex, theta: float) -> complex:
    """Exact matrix element <alpha| H |alpha e^{i theta}> of the single-mode Hamiltonian.

    Evaluates -E_J e^{-phi^2/2} e^{|alpha|^2 (e^{i theta} - 1)}
    J0(2 |alpha| phi e^{i theta/2}) through the scaled complex Bessel
    function (J0(z) = I0(z e^{-i pi/2})); the exponents combine into the
    Gaussian e^{-(phi - 2|alpha| sin(theta/2))^2 / 2}, so nothing overflows.
    """
    theta = theta % (2.0 * math.pi)
    a = abs(alpha)
    s_half = math.sin(0.5 * theta)
    z = 2.0 * a * phi_a * np.exp(1j * (theta - math.pi) / 2.0)  # Re z = 2 a phi sin(theta/2) >= 0
    log_mag = -0.5 * (phi_a - 2.0 * a * s_half) ** 2
    phase = a * a * math.sin(theta)
    return -e_j * math.exp(log_mag) * np.exp(1j * phase) * specfun.bessel_i0e_complex(z)


def projected_spectrum_q(
    e_j: float,
    phi_a: float,
    alpha: complex,
    q: int,
    method: str = "asymptotic",
    space: FockSpace | None = None,
) -> np.ndarray:
    """Diagonal cat matrix elements c^{kk} on M(q, alpha), k = 0..q-1.

    Three evaluation paths:

    - ``"asymptotic"``: the stationary-phase sum over component couplings
      m = 0..q-1, with Gaussians centered at phi = 2|alpha| sin(m pi/q) and
      phases theta_{m,q}; the real-axis m = 0 term keeps both oscillatory
      branches and therefore carries weight two.
    - ``"exact"``: the same sum without any asymptotics, through the complex
      Bessel evaluation of each coupling (1/sqrt(q) component weights).
    - ``"numeric"``: sandwich of the Fock-space Hamiltonian between exactly
      normalized cat states.
    """
    a = abs(alpha)
    if q < 1:
        raise DomainError(f"q must be >= 1, got {q}")
    if a <= 0:
        raise DomainError("alpha must be nonzero")
    if method == "numeric":
        space = space or FockSpace((safe_dim(a),))
        params = JunctionParams(e_j=e_j, phi_a=phi_a)
        h = h_rwa_single(params, space)
        basis = cat_basis(space, alpha, q)
        return project(h, basis).diagonal()
    if method == "exact":
        ks = np.arange(q)
        couplings = np.array(
            [coherent_coupling(e_j, phi_a, a, 2.0 * math.pi * m / q) for m in range(q)]
        )
        phases = np.exp(-2j * math.pi * np.outer(ks, np.arange(q)) / q)
        vals = phases @ couplings
        return vals.real
    if method != "asymptotic":
        raise ValueError(f"unknown method {method!r}")

    pref = -e_j / math.sqrt(4.0 * math.pi * phi_a * a)
    out = np.zeros(q)
    for m in range(q):
        s = math.sin(m * math.pi / q)
        c = math.cos(m * math.pi / q)
        envelope = math.exp(-0.5 * (phi_a - 2.0 * a * s) ** 2)
        theta_m = 2.0 * a * c * (phi_a - a * s) - math.pi / 4.0 - m * math.pi / (2.0 * q)
        weight = 2.0 if m == 0 else 1.0
        for k in range(q):
            arg = (2 * k + 1) * m * math.pi / q + theta_m
            out[k] += weight * envelope * math.cos(arg)
    return pref * out


def four_photon_diagnostics(
    e_j: float, phi_a: float, alpha: complex, space: FockSpace | None = None
) -> DegeneracyDiagnostics:
    """Degeneracy diagnostics of the numerically projected Hamiltonian on M(4, alpha).

    delta_parity measures the parity splitting, small_delta_parity the
    residual non-degeneracy inside each parity subspace; the latter falls
    exponentially in |alpha|^2 while the former only shrinks like 1/|alpha|.
    """
    c = projected_spectrum_q(e_j, phi_a, alpha, 4, method="numeric", space=space)
    delta = math.hypot(c[0] - c[1], c[2] - c[3])
    small = math.hypot(c[0] - c[2], c[1] - c[3])
    return DegeneracyDiagnostics(delta, small, omega_a(e_j, phi_a, alpha))


# ---------------------------------------------------------------------------
# second-order Zeno corrections


def _pseudo_inverse_apply(
    evals: np.ndarray, cutoff_rel: float
) -> tuple[np.ndarray, float]:
    """Inverted eigenvalues with the kernel zeroed; warns on cutoff ambiguity."""
    top = float(evals.max())
    cutoff = cutoff_rel * top
    inside = (evals > cutoff / 10.0) & (evals < cutoff * 10.0)
    if np.any(inside):
        kept = evals[evals > cutoff]
        dropped = evals[evals <= cutoff]
        gap = (kept.min() / dropped.max()) if (kept.size and dropped.size) else math.inf
        warnings.warn(
            f"eigenvalue cluster straddles the pseudo-inverse cutoff "
            f"{cutoff:.3e} (kept/dropped gap {gap:.3g})",
            RuntimeWarning,
            stacklevel=3,
        )
    inv = np.where(evals > cutoff, 1.0 / np.where(evals > cutoff, evals, 1.0), 0.0)
    return inv, cutoff


def zeno_jump_ops(
    h: FockOperator,
    dissipators: list[tuple[FockOperator, float]],
    basis: CatBasis,
    e_j: float = math.nan,
    cutoff_rel: float = PSEUDO_INVERSE_CUTOFF,
) -> ZenoJumpSet:
    """Second-order jump operators R_j = 2 L_j (sum_k L_k^dag L_k)^+ H Pi.

    ``dissipators`` are (operator, rate) pairs; the rate enters as
    L_j = sqrt(rate) * operator.  The pseudo-inverse is taken by
    eigendecomposition with a relative kernel cutoff; its kernel is exactly
    the confined manifold, so H commuting with the projector yields R_j = 0.
    """
    ls = [math.sqrt(rate) * op for op, rate in dissipators]
    k_op = ls[0].dag() @ ls[0]
    for l_op in ls[1:]:
        k_op = k_op + l_op.dag() @ l_op
    evals, vecs = np.linalg.eigh(k_op.matrix)
    inv, _ = _pseudo_inverse_apply(evals, cutoff_rel)
    k_plus = (vecs * inv) @ vecs.conj().T
    pi_m = projector(basis.states).matrix
    core = k_plus @ h.matrix @ pi_m
    r_ops = [FockOperator(h.space, 2.0 * l_op.matrix @ core) for l_op in ls]
    kappa = min(rate for _, rate in dissipators)
    return ZenoJumpSet(r_ops, kappa, e_j / kappa if kappa > 0 else math.nan)


def asymptotic_projection_map(
    rho: DensityMatrix,
    dissipators: list[tuple[FockOperator, float]],
    residual_tol: float = 1e-10,
    rtol: float = 1e-10,
    t_cap: float | None = None,
    method: str = "integrate",
    steady: "TwoPhotonSteadySpace | None" = None,
) -> DensityMatrix:
    """Long-time limit of evolution under the bare multi-photon dissipators.

    ``method="integrate"`` runs d rho/dt = sum_j kappa_j D[L_j](rho) until
    the max-norm of the derivative falls below ``residual_tol`` times the
    smallest rate.  ``method="fixed_point"`` (single two-photon dissipator
    only) evaluates the same limit exactly through the conserved-sector
    structure; pass a prebuilt ``steady`` space to amortize its setup.
    """
    if method == "fixed_point":
        if steady is None:
            raise ValueError("fixed_point needs a TwoPhotonSteadySpace")
        return DensityMatrix(rho.space, steady.project_state(rho.matrix))
    if method != "integrate":
        raise ValueError(f"unknown method {method!r}")
    rates = [rate for _, rate in dissipators]
    kappa_ref = min(rates)
    rhs = make_lindblad_rhs(None, dissipators)
    threshold = residual_tol * kappa_ref

    def stop(_t, _y, dy):
        return float(np.max(np.abs(dy))) <= threshold

    horizon = t_cap if t_cap is not None else 1000.0 / kappa_ref
    t, final = rk45(
        rhs,
        rho.matrix,
        horizon,
        rtol=rtol,
        atol=rtol * 1e-3,
        hermitize=True,
        stop=stop,
    )
    if not stop(t, final, rhs(final)):
        raise ConvergenceError(
            f"projection map not stationary by t = {t:.3g}: residual "
            f"{float(np.max(np.abs(rhs(final)))):.3e} > {threshold:.3e}"
        )
    return DensityMatrix(rho.space, final)


def adjoint_asymptotic_image(
    observable: np.ndarray,
    dissipators: list[tuple[FockOperator, float]],
    residual_tol: float = 1e-9,
    rtol: float = 1e-11,
    t_cap: float | None = None,
) -> np.ndarray:
    """Heisenberg-picture limit of an observable under the bare dissipators.

    The limit lies in the commutant of the dissipative semigroup and pairs
    with the asymptotic projection map through tr[X_inf sigma] =
    tr[X_0 M(sigma)].
    """
    rates = [rate for _, rate in dissipators]
    kappa_ref = min(rates)
    rhs = make_lindblad_rhs(None, dissipators, adjoint=True)
    threshold = residual_tol * kappa_ref

    def stop(_t, _y, dy):
        return float(np.max(np.abs(dy))) <= threshold

    horizon = t_cap if t_cap is not None else 2000.0 / kappa_ref
    t, final = rk45(
        rhs,
        observable,
        horizon,
        rtol=rtol,
        atol=rtol * 1e-3,
        hermitize=True,
        stop=stop,
    )
    if not stop(t, final, rhs(final)):
        raise ConvergenceError(f"adjoint image not stationary by t = {t:.3g}")
    return final


class TwoPhotonSteadySpace:
    """Steady and conserved sector structure of one two-photon dissipator.

    The jump operator a^2 - alpha^2 preserves photon parity, so the
    Lindbladian splits over the four (row parity, column parity) sectors of
    |n><m|.  Each sector holds exactly one steady state (the cat dyads,
    known in closed form) and one conserved observable, computed here as the
    null singular vector of the sector block of the adjoint Lindbladian.
    Conservation of tr[J rho(t)] then gives both infinite-time maps without
    integrating: the projection of rho0 onto the steady dyads and the
    Heisenberg image of an observable in the conserved span.
    """

    def __init__(self, space: FockSpace, alpha: float, kernel_gap_min: float = 1e4):
        self.space = space
        self.alpha = alpha
        d = space.dim
        a_mat = annihilation(space).matrix
        l_mat = a_mat @ a_mat - (alpha ** 2) * np.eye(d)
        basis = cat_basis(space, alpha, 2)
        even, odd = np.arange(0, d, 2), np.arange(1, d, 2)
        idx = {0: even, 1: odd}
        cats = {0: basis.states[0].amplitudes, 1: basis.states[1].amplitudes}
        self.sectors = []
        for p in (0, 1):
            for q in (0, 1):
                rows, cols = idx[p], idx[q]
                l_r = l_mat[np.ix_(rows, rows)]
                l_c = l_mat[np.ix_(cols, cols)]
                ldl_r = l_r.conj().T @ l_r
                ldl_c = l_c.conj().T @ l_c
                n_r, n_c = len(rows), len(cols)
                adj = (
                    np.kron(l_r.conj().T, l_c.T)
                    - 0.5 * np.kron(ldl_r, np.eye(n_c))
                    - 0.5 * np.kron(np.eye(n_r), ldl_c.T)
                )
                _, svals, vh = np.linalg.svd(adj)
                if svals[-2] < kernel_gap_min * max(svals[-1], 1e-300):
                    raise ConvergenceError(
                        f"ambiguous conserved sector ({p},{q}): singular values "
                        f"{svals[-1]:.3e} vs {svals[-2]:.3e}"
                    )
                j_sec = vh[-1].conj().reshape(n_r, n_c)
                rho_sec = np.outer(cats[p], cats[q].conj())[np.ix_(rows, cols)]
                weight = np.vdot(j_sec, rho_sec)
                self.sectors.append((rows, cols, j_sec, rho_sec, weight))

    def project_state(self, rho: np.ndarray) -> np.ndarray:
        """Infinite-time image of a density matrix under the dissipator alone."""
        out = np.zeros_like(rho, dtype=complex)
        for rows, cols, j_sec, rho_sec, weight in self.sectors:
            coeff = np.vdot(j_sec, rho[np.ix_(rows, cols)]) / weight
            out[np.ix_(rows, cols)] += coeff * rho_sec
        return out

    def project_observable(self, x: np.ndarray) -> np.ndarray:
        """Infinite-time Heisenberg image of an observable (the adjoint map)."""
        out = np.zeros_like(x, dtype=complex)
        for rows, cols, j_sec, rho_sec, weight in self.sectors:
            coeff = np.vdot(rho_sec, x[np.ix_(rows, cols)]) / np.conj(weight)
            out[np.ix_(rows, cols)] += coeff * j_sec
        return out


def psi_r_state(
    e_j: float,
    phi_a: float,
    alpha: float,
    kappa: float = 1.0,
    space: FockSpace | None = None,
) -> FockState:
    """Normalized jump state R|alpha> / ||R|alpha>|| of the single-mode setting."""
    space = space or FockSpace((safe_dim(alpha),))
    a_op = annihilation(space)
    l_op = a_op @ a_op - (alpha ** 2) * identity_op(space)
    h = h_rwa_single(JunctionParams(e_j=e_j, phi_a=phi_a), space)
    basis = cat_basis(space, alpha, 2)
    jumps = zeno_jump_ops(h, [(l_op, kappa)], basis, e_j=e_j)
    psi = jumps.r_ops[0] @ coherent_state(space, alpha)
    return psi.normalized()


# ---------------------------------------------------------------------------
# induced dephasing of the joint-parity measurement


def _two_mode_pipeline(e_j: float, phi: float, alpha: float, kappa: float, dim: int):
    """Shared single-mode pieces for the structured two-mode second-order map."""
    space = FockSpace((dim,))
    a_mat = annihilation(space).matrix
    l_bare = a_mat @ a_mat - (alpha ** 2) * np.eye(dim)
    l_mat = math.sqrt(kappa) * l_bare
    m1 = l_mat.conj().T @ l_mat
    evals, vecs = np.linalg.eigh(m1)
    lag = specfun.laguerre_all(dim - 1, phi * phi)
    h_col = -e_j * math.exp(-0.5 * phi * phi) * lag  # two-mode diag is an outer product
    h2 = np.outer(h_col, lag) * math.exp(-0.5 * phi * phi)
    basis = cat_basis(space, alpha, 2)
    p1 = projector(basis.states).matrix
    return space, l_bare, l_mat, evals, vecs, h2, p1


def _kplus_apply(psi: np.ndarray, evals: np.ndarray, vecs: np.ndarray,
                 cutoff_rel: float) -> np.ndarray:
    """Apply (M1 (x) I + I (x) M1)^+ to a two-mode vector in matrix form."""
    y = vecs.conj().T @ psi @ vecs.conj()
    pair_sums = evals[:, None] + evals[None, :]
    top = pair_sums.max()
    cutoff = cutoff_rel * top
    inv = np.where(pair_sums > cutoff, 1.0 / np.where(pair_sums > cutoff, pair_sums, 1.0), 0.0)
    y = y * inv
    return vecs @ y @ vecs.T


def gamma_ind(
    e_j: float,
    phi: float,
    alpha: float,
    kappa_2ph: float,
    dim: int | None = None,
    cutoff_rel: float = PSEUDO_INVERSE_CUTOFF,
    residual_tol: float = 1e-9,
    method: str = "fixed_point",
) -> float:
    """Independent-dephasing rate of the two-mode joint-parity setting.

    Evaluates tr[(|-a,a><-a,a| + |a,-a><a,-a|) R_2nd(|a,a><a,a|)] where
    R_2nd is the second-order dissipation superoperator (jump operators
    R_j followed by the asymptotic projection of the gain term).  Everything
    factorizes over the two modes: the pseudo-inverse acts in the
    single-mode eigenbasis of L^dag L and the projection map is applied in
    its Heisenberg form to the single-mode corner projectors, so no
    two-mode superoperator is ever materialized.  ``method`` selects how the
    Heisenberg images are produced ("fixed_point" via the conserved sectors,
    "integrate" by running the adjoint equation to stationarity).
    """
    if alpha <= 0 or phi <= 0:
        raise DomainError("alpha and phi must be > 0")
    d = dim or safe_dim(alpha)
    space, l_bare, l_mat, evals, vecs, h2, p1 = _two_mode_pipeline(
        e_j, phi, alpha, kappa_2ph, d
    )
    v_plus = coherent_state(space, alpha).amplitudes
    v_minus = coherent_state(space, -alpha).amplitudes

    # R_j |alpha, alpha> in (d, d) matrix form
    psi0 = np.outer(v_plus, v_plus)
    confined = p1 @ psi0 @ p1.T
    driven = h2 * confined
    core = _kplus_apply(driven, evals, vecs, cutoff_rel)
    psi_a = 2.0 * (l_mat @ core)
    psi_b = 2.0 * (core @ l_mat.T)

    # Heisenberg images of the corner projectors under the single-mode map
    if method == "fixed_point":
        steady = TwoPhotonSteadySpace(space, alpha)
        x_plus = steady.project_observable(np.outer(v_plus, v_plus.conj()))
        x_minus = steady.project_observable(np.outer(v_minus, v_minus.conj()))
    else:
        diss = [(FockOperator(space, l_bare), kappa_2ph)]
        x_plus = adjoint_asymptotic_image(
            np.outer(v_plus, v_plus.conj()), diss, residual_tol=residual_tol
        )
        x_minus = adjoint_asymptotic_image(
            np.outer(v_minus, v_minus.conj()), diss, residual_tol=residual_tol
        )

    def sandwich(psi: np.ndarray, xa: np.ndarray, xb: np.ndarray) -> float:
        return float(np.vdot(psi, xa @ psi @ xb.T).real)

    gain = 0.0
    for psi in (psi_a, psi_b):
        gain += sandwich(psi, x_minus, x_plus) + sandwich(psi, x_plus, x_minus)

    # loss term -1/2 {R^dag R, rho}: exponentially small corner overlap
    ov = np.vdot(v_minus, v_plus)
    p_v0 = ov * (np.outer(v_minus, v_plus) + np.outer(v_plus, v_minus))
    loss = 0.0
    for psi, left in ((psi_a, True), (psi_b, False)):
        back = l_mat.conj().T @ psi if left else psi @ l_mat.conj()
        back = _kplus_apply(back, evals, vecs, cutoff_rel)
        back = h2 * back
        back = p1 @ back @ p1.T
        loss -= 2.0 * float(np.vdot(p_v0, back).real)
    return gain + loss
