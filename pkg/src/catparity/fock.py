"""Truncated Fock-space linear algebra.

Operators and states are dense numpy arrays tagged with the space they live
on; combining objects from different spaces raises immediately.  A space can
hold one or several modes; multi-mode objects use the Kronecker convention
``kron(A, B)``, i.e. the first mode is the slowest index.

The default truncation for amplitude alpha is ``ceil(|alpha|^2 + 8|alpha| +
20)``, which keeps the norm deficit of coherent and cat states below 1e-10.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.linalg import expm

from .errors import DimensionMismatchError, TruncationError

HERMITIAN_TOL = 1e-10


def default_dim(alpha: complex) -> int:
    """Default Fock truncation for states of amplitude |alpha|."""
    a = abs(alpha)
    return math.ceil(a * a + 8.0 * a + 20.0)


def safe_dim(alpha: complex) -> int:
    """Default truncation raised to satisfy the guard |alpha|^2 <= dim/4.

    The default rule alone dips below the coherent-state guard for
    |alpha| above about 3.7; automatic space construction uses the larger
    of the two.
    """
    a = abs(alpha)
    return max(default_dim(alpha), math.ceil(4.0 * a * a) + 1)


@dataclass(frozen=True)
class FockSpace:
    """A truncated Fock space, possibly a product of several modes."""

    dims: tuple[int, ...]

    def __post_init__(self):
        if isinstance(self.dims, int):  # allow FockSpace(40)
            object.__setattr__(self, "dims", (self.dims,))
        if any(d < 2 for d in self.dims):
            raise ValueError(f"every mode needs dim >= 2, got {self.dims}")

    @property
    def dim(self) -> int:
        return int(np.prod(self.dims))

    @property
    def nmodes(self) -> int:
        return len(self.dims)

    def __mul__(self, other: "FockSpace") -> "FockSpace":
        return FockSpace(self.dims + other.dims)

    def __repr__(self):
        return f"FockSpace{self.dims}"


def _check_same_space(a, b):
    if a.space != b.space:
        raise DimensionMismatchError(f"spaces differ: {a.space} vs {b.space}")


@dataclass
class FockOperator:
    """Dense operator on a FockSpace.

    ``diag`` is set for operators known to be diagonal in the Fock basis and
    ``kron_factors`` records single-mode factors of a tensor product; both are
    optional metadata that downstream numerics exploit.
    """

    space: FockSpace
    matrix: np.ndarray
    diag: np.ndarray | None = None
    kron_factors: tuple[np.ndarray, ...] | None = None

    def __post_init__(self):
        self.matrix = np.asarray(self.matrix, dtype=complex)
        if self.matrix.shape != (self.space.dim, self.space.dim):
            raise DimensionMismatchError(
                f"matrix shape {self.matrix.shape} does not match dim {self.space.dim}"
            )
        if not np.all(np.isfinite(self.matrix)):
            raise ValueError("operator entries must be finite")

    @property
    def is_diagonal(self) -> bool:
        return self.diag is not None

    def dag(self) -> "FockOperator":
        d = None if self.diag is None else self.diag.conj()
        kf = None
        if self.kron_factors is not None:
            kf = tuple(f.conj().T for f in self.kron_factors)
        return FockOperator(self.space, self.matrix.conj().T, diag=d, kron_factors=kf)

    def is_hermitian(self, tol: float = HERMITIAN_TOL) -> bool:
        return np.max(np.abs(self.matrix - self.matrix.conj().T)) <= tol

    def __matmul__(self, other):
        if isinstance(other, FockOperator):
            _check_same_space(self, other)
            d = None
            if self.diag is not None and other.diag is not None:
                d = self.diag * other.diag
            return FockOperator(self.space, self.matrix @ other.matrix, diag=d)
        if isinstance(other, FockState):
            _check_same_space(self, other)
            return FockState(self.space, self.matrix @ other.amplitudes)
        return NotImplemented

    def __add__(self, other):
        _check_same_space(self, other)
        d = None
        if self.diag is not None and other.diag is not None:
            d = self.diag + other.diag
        return FockOperator(self.space, self.matrix + other.matrix, diag=d)

    def __sub__(self, other):
        _check_same_space(self, other)
        d = None
        if self.diag is not None and other.diag is not None:
            d = self.diag - other.diag
        return FockOperator(self.space, self.matrix - other.matrix, diag=d)

    def __mul__(self, c):
        c = complex(c)
        d = None if self.diag is None else c * self.diag
        kf = self.kron_factors
        if kf is not None and len(kf) > 0:
            kf = (c * kf[0],) + tuple(kf[1:])
        return FockOperator(self.space, c * self.matrix, diag=d, kron_factors=kf)

    __rmul__ = __mul__

    def __neg__(self):
        return self * (-1.0)

    def norm_max(self) -> float:
        return float(np.max(np.abs(self.matrix)))


@dataclass
class FockState:
    """Pure state on a FockSpace."""

    space: FockSpace
    amplitudes: np.ndarray

    def __post_init__(self):
        self.amplitudes = np.asarray(self.amplitudes, dtype=complex).reshape(-1)
        if self.amplitudes.shape != (self.space.dim,):
            raise DimensionMismatchError(
                f"amplitude length {self.amplitudes.shape} does not match dim {self.space.dim}"
            )

    def norm(self) -> float:
        return float(np.linalg.norm(self.amplitudes))

    def normalized(self) -> "FockState":
        return FockState(self.space, self.amplitudes / self.norm())

    def overlap(self, other: "FockState") -> complex:
        """<self|other>."""
        _check_same_space(self, other)
        return complex(np.vdot(self.amplitudes, other.amplitudes))

    def expectation(self, op: FockOperator) -> complex:
        _check_same_space(self, op)
        return complex(np.vdot(self.amplitudes, op.matrix @ self.amplitudes))

    def to_density(self) -> "DensityMatrix":
        return DensityMatrix(self.space, np.outer(self.amplitudes, self.amplitudes.conj()))


@dataclass
class DensityMatrix:
    """Hermitian unit-trace matrix on a FockSpace."""

    space: FockSpace
    matrix: np.ndarray

    def __post_init__(self):
        self.matrix = np.asarray(self.matrix, dtype=complex)
        if self.matrix.shape != (self.space.dim, self.space.dim):
            raise DimensionMismatchError(
                f"matrix shape {self.matrix.shape} does not match dim {self.space.dim}"
            )

    def validate(self, herm_tol=1e-10, trace_tol=1e-8, pos_tol=1e-8):
        m = self.matrix
        herm = np.max(np.abs(m - m.conj().T))
        if herm > herm_tol:
            raise ValueError(f"not Hermitian: max |rho - rho^dag| = {herm:.3e}")
        tr = np.trace(m).real
        if abs(tr - 1.0) > trace_tol:
            raise ValueError(f"trace deviates from one by {abs(tr - 1.0):.3e}")
        evals = np.linalg.eigvalsh(0.5 * (m + m.conj().T))
        if evals.min() < -pos_tol:
            raise ValueError(f"negative eigenvalue {evals.min():.3e}")
        return self

    def purity(self) -> float:
        return float(np.trace(self.matrix @ self.matrix).real)

    def expectation(self, op: FockOperator) -> complex:
        _check_same_space(self, op)
        return complex(np.trace(op.matrix @ self.matrix))


# ---------------------------------------------------------------------------
# constructors


def identity_op(space: FockSpace) -> FockOperator:
    return FockOperator(space, np.eye(space.dim), diag=np.ones(space.dim, dtype=complex))


def annihilation(space: FockSpace) -> FockOperator:
    """Single-mode lowering operator, a|n> = sqrt(n)|n-1>."""
    if space.nmodes != 1:
        raise DimensionMismatchError("annihilation acts on a single-mode space")
    d = space.dim
    return FockOperator(space, np.diag(np.sqrt(np.arange(1, d)), k=1))


def creation(space: FockSpace) -> FockOperator:
    return annihilation(space).dag()


def number_op(space: FockSpace) -> FockOperator:
    if space.nmodes != 1:
        raise DimensionMismatchError("number_op acts on a single-mode space")
    n = np.arange(space.dim, dtype=complex)
    return FockOperator(space, np.diag(n), diag=n)


def diagonal_op(space: FockSpace, entries: np.ndarray) -> FockOperator:
    entries = np.asarray(entries, dtype=complex).reshape(-1)
    if entries.shape != (space.dim,):
        raise DimensionMismatchError("diagonal length does not match space dim")
    return FockOperator(space, np.diag(entries), diag=entries)


def _truncation_guard(space: FockSpace, beta: complex, what: str):
    if abs(beta) ** 2 > space.dim / 4.0:
        raise TruncationError(
            f"{what}: |amplitude|^2 = {abs(beta) ** 2:.3g} exceeds dim/4 = {space.dim / 4:.3g}"
        )


def displacement(space: FockSpace, beta: complex) -> FockOperator:
    """Unitary displacement exp(beta a^dag - beta* a) on the truncated space.

    Unitarity only holds on the well-represented Fock levels (up to about
    dim/2); the truncation guard |beta|^2 <= dim/4 keeps usage there.
    """
    _truncation_guard(space, beta, "displacement")
    a = annihilation(space).matrix
    gen = beta * a.conj().T - np.conj(beta) * a
    return FockOperator(space, expm(gen))


def fock_basis_state(space: FockSpace, n: int) -> FockState:
    if not 0 <= n < space.dim:
        raise DimensionMismatchError(f"Fock level {n} outside 0..{space.dim - 1}")
    amp = np.zeros(space.dim, dtype=complex)
    amp[n] = 1.0
    return FockState(space, amp)


def vacuum(space: FockSpace) -> FockState:
    return fock_basis_state(space, 0)


def coherent_state(space: FockSpace, alpha: complex) -> FockState:
    """Coherent state with amplitudes exp(-|alpha|^2/2) alpha^n / sqrt(n!)."""
    if space.nmodes != 1:
        raise DimensionMismatchError("coherent_state builds single-mode states")
    _truncation_guard(space, alpha, "coherent_state")
    amp = np.empty(space.dim, dtype=complex)
    amp[0] = math.exp(-0.5 * abs(alpha) ** 2)
    for n in range(1, space.dim):
        amp[n] = amp[n - 1] * alpha / math.sqrt(n)
    return FockState(space, amp)


def cat_state(space: FockSpace, alpha: complex, q: int, k: int) -> FockState:
    """Normalized q-component cat state with Fock support on n = k (mod q).

    The state is the discrete Fourier combination
    ``sum_p exp(-2 pi i p k / q) |alpha exp(2 pi i p / q)>`` renormalized; for
    q = 2 it reproduces the even/odd cat states.
    """
    if q < 1:
        raise ValueError(f"q must be >= 1, got {q}")
    if not 0 <= k < q:
        raise ValueError(f"k must satisfy 0 <= k < q, got k={k}, q={q}")
    amp = np.zeros(space.dim, dtype=complex)
    for p in range(q):
        phase = np.exp(2j * np.pi * p / q)
        amp += np.exp(-2j * np.pi * p * k / q) * coherent_state(space, alpha * phase).amplitudes
    # exact support: the phase sum cancels off the k (mod q) ladder
    mask = (np.arange(space.dim) % q) != (k % q)
    amp[mask] = 0.0
    nrm = np.linalg.norm(amp)
    if nrm < 1e-300:
        raise TruncationError(f"cat component (q={q}, k={k}) has no support at this truncation")
    return FockState(space, amp / nrm)


def cat_norm_constant(alpha: complex, q: int, k: int, space: FockSpace | None = None) -> float:
    """N_k such that |C_k> = N_k sum_p exp(-2 pi i p k/q) |alpha e^{2 pi i p/q}>.

    For q = 2 this is the familiar 1/sqrt(2 (1 +- exp(-2|alpha|^2))).
    """
    space = space or FockSpace((default_dim(alpha),))
    amp = np.zeros(space.dim, dtype=complex)
    for p in range(q):
        phase = np.exp(2j * np.pi * p / q)
        amp += np.exp(-2j * np.pi * p * k / q) * coherent_state(space, alpha * phase).amplitudes
    return float(1.0 / np.linalg.norm(amp))


@dataclass
class CatBasis:
    """Ordered orthonormal basis of the q-component cat manifold M(q, alpha)."""

    space: FockSpace
    alpha: complex
    q: int
    states: list[FockState] = field(default_factory=list)
    norm_constants: list[float] = field(default_factory=list)

    def __len__(self):
        return self.q

    def matrix(self) -> np.ndarray:
        """Column matrix of basis amplitudes, shape (dim, q)."""
        return np.stack([s.amplitudes for s in self.states], axis=1)


def cat_basis(space: FockSpace, alpha: complex, q: int) -> CatBasis:
    states = [cat_state(space, alpha, q, k) for k in range(q)]
    norms = [cat_norm_constant(alpha, q, k, space) for k in range(q)]
    return CatBasis(space, alpha, q, states, norms)


def product_basis(basis_a: CatBasis, basis_b: CatBasis) -> "CatBasis":
    """Tensor-product cat basis on the two-mode space, ordered a-major."""
    space = basis_a.space * basis_b.space
    states = [
        tensor_state(sa, sb) for sa in basis_a.states for sb in basis_b.states
    ]
    norms = [na * nb for na in basis_a.norm_constants for nb in basis_b.norm_constants]
    out = CatBasis(space, basis_a.alpha, basis_a.q * basis_b.q, states, norms)
    return out


# ---------------------------------------------------------------------------
# tensor products

_PRODUCT_DIM_CAP = 20_000


def tensor(op_a: FockOperator, op_b: FockOperator) -> FockOperator:
    """Kronecker product; the first factor is the slowest index."""
    dim = op_a.space.dim * op_b.space.dim
    if dim > _PRODUCT_DIM_CAP:
        raise DimensionMismatchError(
            f"product dimension {dim} exceeds cap {_PRODUCT_DIM_CAP}"
        )
    space = op_a.space * op_b.space
    d = None
    if op_a.diag is not None and op_b.diag is not None:
        d = np.kron(op_a.diag, op_b.diag)
    return FockOperator(
        space,
        np.kron(op_a.matrix, op_b.matrix),
        diag=d,
        kron_factors=(op_a.matrix, op_b.matrix),
    )


def tensor_state(state_a: FockState, state_b: FockState) -> FockState:
    dim = state_a.space.dim * state_b.space.dim
    if dim > _PRODUCT_DIM_CAP:
        raise DimensionMismatchError(
            f"product dimension {dim} exceeds cap {_PRODUCT_DIM_CAP}"
        )
    return FockState(state_a.space * state_b.space, np.kron(state_a.amplitudes, state_b.amplitudes))


def projector(states: list[FockState]) -> FockOperator:
    """Sum of |s><s| over the given (orthonormal) states."""
    space = states[0].space
    m = np.zeros((space.dim, space.dim), dtype=complex)
    for s in states:
        _check_same_space(s, states[0])
        m += np.outer(s.amplitudes, s.amplitudes.conj())
    return FockOperator(space, m)


# ---------------------------------------------------------------------------
# Husimi Q diagnostics


def husimi_q(state_or_rho, gamma) -> np.ndarray | float:
    """Husimi function Q(gamma) = <gamma|rho|gamma> / pi.

    ``gamma`` may be a complex scalar or an ndarray of points; the return
    value matches its shape.
    """
    obj = state_or_rho
    space = obj.space
    if space.nmodes != 1:
        raise DimensionMismatchError("husimi_q is single-mode")
    gam = np.asarray(gamma, dtype=complex)
    scalar = gam.ndim == 0
    flat = gam.reshape(-1)
    # rows of conj(<gamma|n>) built by the stable iterative product
    d = space.dim
    rows = np.empty((flat.size, d), dtype=complex)
    rows[:, 0] = np.exp(-0.5 * np.abs(flat) ** 2)
    for n in range(1, d):
        rows[:, n] = rows[:, n - 1] * np.conj(flat) / math.sqrt(n)
    if isinstance(obj, FockState):
        amps = rows @ obj.amplitudes
        q = np.abs(amps) ** 2 / math.pi
    elif isinstance(obj, DensityMatrix):
        q = np.einsum("gn,nm,gm->g", rows, obj.matrix, rows.conj()).real / math.pi
    else:
        raise TypeError(f"expected FockState or DensityMatrix, got {type(obj)}")
    q = q.reshape(gam.shape)
    return float(q) if scalar else q


def husimi_grid(alpha_max: float, n: int = 201) -> np.ndarray:
    """Default square phase-space grid covering [-1.5 alpha_max, 1.5 alpha_max]^2."""
    half = 1.5 * alpha_max
    x = np.linspace(-half, half, n)
    re, im = np.meshgrid(x, x, indexing="ij")
    return re + 1j * im
