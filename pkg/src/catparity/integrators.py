"""Adaptive Runge-Kutta machinery and Lindblad right-hand sides.

The integrator is a Dormand-Prince 5(4) embedded pair on the full density
matrix (or observable, in the adjoint direction), with per-accepted-step
Hermitian symmetrization.  Right-hand sides exploit structure where the
operators carry it: a diagonal Hamiltonian turns the commutator into an
elementwise product, and collapse operators built as tensor products act
mode by mode on the reshaped density matrix instead of through full-size
matrix products.
"""

from __future__ import annotations

import math
from typing import Callable

import numpy as np
from scipy import sparse

from .errors import ConvergenceError, StiffnessError
from .fock import FockOperator

# Dormand-Prince 5(4) tableau
_C = np.array([0.0, 1 / 5, 3 / 10, 4 / 5, 8 / 9, 1.0, 1.0])
_A = [
    [],
    [1 / 5],
    [3 / 40, 9 / 40],
    [44 / 45, -56 / 15, 32 / 9],
    [19372 / 6561, -25360 / 2187, 64448 / 6561, -212 / 729],
    [9017 / 3168, -355 / 33, 46732 / 5247, 49 / 176, -5103 / 18656],
    [35 / 384, 0.0, 500 / 1113, 125 / 192, -2187 / 6784, 11 / 84],
]
_B5 = np.array([35 / 384, 0.0, 500 / 1113, 125 / 192, -2187 / 6784, 11 / 84, 0.0])
_B4 = np.array(
    [5179 / 57600, 0.0, 7571 / 16695, 393 / 640, -92097 / 339200, 187 / 2100, 1 / 40]
)


def _error_norm(err: np.ndarray, y: np.ndarray, rtol: float, atol: float) -> float:
    scale = atol + rtol * np.abs(y)
    return float(np.sqrt(np.mean((np.abs(err) / scale) ** 2)))


def rk45(
    rhs: Callable[[np.ndarray], np.ndarray],
    y0: np.ndarray,
    t_end: float | None,
    *,
    rtol: float = 1e-9,
    atol: float | None = None,
    dt0: float | None = None,
    sample_times: np.ndarray | None = None,
    observe: Callable[[float, np.ndarray], None] | None = None,
    hermitize: bool = False,
    stop: Callable[[float, np.ndarray, np.ndarray], bool] | None = None,
    max_steps: int = 5_000_000,
):
    """Integrate dy/dt = rhs(y) from t = 0.

    Either ``t_end`` or ``stop`` must be provided; ``stop`` receives
    (t, y, rhs(y)) after each accepted step and terminates the run when it
    returns True.  ``observe`` is called at t = 0 and at every requested
    sample time (steps are clipped so sample times are hit exactly).
    Returns (t_final, y_final).
    """
    if t_end is None and stop is None:
        raise ValueError("need t_end or a stop condition")
    y = np.array(y0, dtype=complex)
    if atol is None:
        atol = rtol * 1e-4
    samples = list(np.atleast_1d(sample_times)) if sample_times is not None else []
    samples.sort()
    si = 0
    t = 0.0
    k1 = rhs(y)
    if observe is not None:
        observe(t, y)
        while si < len(samples) and samples[si] <= 1e-300:
            si += 1
    if stop is not None and stop(t, y, k1):
        return t, y
    scale = float(np.max(np.abs(k1))) + 1e-300
    dt = dt0 if dt0 is not None else min(1e-3 / scale, (t_end or 1.0 / scale))
    horizon = t_end if t_end is not None else math.inf
    best_residual = math.inf
    stalled = 0

    for _ in range(max_steps):
        if t >= horizon * (1 - 1e-14) and t_end is not None:
            return t, y
        dt = min(dt, horizon - t)
        if si < len(samples):
            dt = min(dt, samples[si] - t)
        if dt <= 1e-16 * max(t, 1.0):
            raise StiffnessError(f"step size underflow at t = {t:.6g}")

        k = [k1]
        for i in range(1, 7):
            yi = y + dt * sum(a * kk for a, kk in zip(_A[i], k))
            k.append(rhs(yi))
        y5 = y + dt * sum(b * kk for b, kk in zip(_B5, k) if b != 0.0)
        err = dt * sum((b5 - b4) * kk for b5, b4, kk in zip(_B5, _B4, k))
        norm = _error_norm(err, y5, rtol, atol)

        if norm <= 1.0:
            t += dt
            y = y5
            if hermitize:
                y = 0.5 * (y + y.conj().T)
            k1 = k[6] if not hermitize else rhs(y)  # FSAL unless y was touched
            while si < len(samples) and t >= samples[si] * (1 - 1e-12):
                if observe is not None:
                    observe(t, y)
                si += 1
            if stop is not None:
                if stop(t, y, k1):
                    return t, y
                # stop conditions track a residual; bail out with a clear
                # error once integration noise pins it above the target
                residual = float(np.max(np.abs(k1)))
                if residual < 0.98 * best_residual:
                    best_residual = residual
                    stalled = 0
                else:
                    stalled += 1
                    if stalled >= 400:
                        raise ConvergenceError(
                            f"residual stalled at {best_residual:.3e} "
                            f"(integration noise floor) at t = {t:.4g}"
                        )
            dt *= min(5.0, max(0.2, 0.9 * norm ** -0.2 if norm > 0 else 5.0))
        else:
            dt *= max(0.2, 0.9 * norm ** -0.2)
    raise ConvergenceError(f"integration exceeded {max_steps} steps at t = {t:.6g}")


# ---------------------------------------------------------------------------
# Lindblad right-hand sides

_SPARSE_DENSITY_CUTOFF = 0.25


def _maybe_sparse(mat: np.ndarray):
    """CSR when the operator is sparse enough for sparse-dense products to win."""
    nnz = int(np.count_nonzero(mat))
    if nnz <= _SPARSE_DENSITY_CUTOFF * mat.size:
        return sparse.csr_matrix(mat)
    return mat


def make_lindblad_rhs(
    hamiltonian: FockOperator | None,
    collapse_ops: list[tuple[FockOperator, float]],
    adjoint: bool = False,
) -> Callable[[np.ndarray], np.ndarray]:
    """Build rho -> -i[H, rho] + sum_k kappa_k D[L_k](rho) (or its adjoint).

    The adjoint form propagates observables: X -> +i[H, X] + sum kappa
    (L^dag X L - {L^dag L, X}/2).  Rates must be nonnegative; each collapse
    operator is used unscaled and multiplied by its rate here.  Diagonal
    Hamiltonians turn the commutator into an elementwise product, and
    collapse operators with mostly zero entries (ladder polynomials, tensor
    products with the identity) run through sparse products.
    """
    if any(rate < 0 for _, rate in collapse_ops):
        raise ValueError("collapse rates must be >= 0")

    h_sign = 1j if adjoint else -1j
    h_elementwise = None
    h_matrix = None
    if hamiltonian is not None:
        if hamiltonian.is_diagonal:
            hd = hamiltonian.diag
            h_elementwise = h_sign * (hd[:, None] - hd[None, :])
        else:
            h_matrix = hamiltonian.matrix

    terms = []
    for op, rate in collapse_ops:
        if rate == 0.0:
            continue
        l_mat = op.matrix
        ldl = l_mat.conj().T @ l_mat
        left = l_mat.conj().T if adjoint else l_mat
        right = l_mat if adjoint else l_mat.conj().T
        # sparse pays off for left products only; numpy gemm takes the right ones
        terms.append(
            (
                _maybe_sparse(left),
                np.ascontiguousarray(right),
                _maybe_sparse(ldl),
                np.ascontiguousarray(ldl),
                rate,
            )
        )

    def rhs(rho: np.ndarray) -> np.ndarray:
        out = np.zeros_like(rho)
        if h_elementwise is not None:
            out += h_elementwise * rho
        elif h_matrix is not None:
            out += h_sign * (h_matrix @ rho - rho @ h_matrix)
        for left, right, ldl_left, ldl_right, rate in terms:
            out += rate * (
                (left @ rho) @ right - 0.5 * (ldl_left @ rho + rho @ ldl_right)
            )
        return out

    return rhs


def superoperator_matrix(
    hamiltonian: FockOperator | None,
    collapse_ops: list[tuple[FockOperator, float]],
) -> np.ndarray:
    """Dense Liouvillian acting on the row-major vectorized density matrix."""
    some_op = hamiltonian if hamiltonian is not None else collapse_ops[0][0]
    d = some_op.space.dim
    eye = np.eye(d)
    lv = np.zeros((d * d, d * d), dtype=complex)
    if hamiltonian is not None:
        h = hamiltonian.matrix
        lv += -1j * (np.kron(h, eye) - np.kron(eye, h.T))
    for op, rate in collapse_ops:
        l_mat = op.matrix
        ldl = l_mat.conj().T @ l_mat
        lv += rate * (
            np.kron(l_mat, l_mat.conj())
            - 0.5 * (np.kron(ldl, eye) + np.kron(eye, ldl.T))
        )
    return lv
