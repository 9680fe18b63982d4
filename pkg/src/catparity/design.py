"""Three-junction energy tuning for exact four-photon parity degeneracy.

A single junction leaves the parity subspaces of the projected Hamiltonian
non-degenerate at small cat amplitude.  With three junctions the Josephson
energies are free parameters; degeneracy holds when the energy vector
annihilates both within-parity differences, i.e. lies in the null space of a
2 x 3 matrix while staying strictly positive.  That feasibility question is
small enough to solve geometrically, with no LP library: the generic null
space is a line (feasible when its direction has all components of one
sign), and rank-deficient cases reduce to a planar cone test.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .fock import FockSpace, cat_basis, safe_dim
from .results import SweepResult
from .rwa import h_rwa_multi_junction
from .zeno import project, projected_spectrum_q

POSITIVITY_FLOOR = 1e-6
REPROJECTION_TOL = 1e-8


@dataclass
class JunctionTriple:
    """Participations and (if solved) normalized positive Josephson energies."""

    phis: tuple[float, float, float]
    e_js: tuple[float, float, float] | None = None


def degeneracy_deltas(
    phi: float, alpha: float, space: FockSpace | None = None
) -> tuple[float, float]:
    """Within-parity differences (c22 - c00, c11 - c33) at unit junction energy."""
    c = projected_spectrum_q(1.0, phi, alpha, 4, method="numeric", space=space)
    return float(c[2] - c[0]), float(c[1] - c[3])


def _positive_ray(v: np.ndarray, floor: float) -> tuple[float, float, float] | None:
    """Scale v (or -v) into the strictly positive orthant with max entry one."""
    for cand in (v, -v):
        top = cand.max()
        if top <= 0:
            continue
        scaled = cand / top
        if scaled.min() >= floor:
            return tuple(float(x) for x in scaled)
    return None


def solve_positive_energies(
    triple_phis: tuple[float, float, float],
    alpha: float,
    floor: float = POSITIVITY_FLOOR,
    space: FockSpace | None = None,
) -> JunctionTriple | None:
    """Strictly positive energies solving both degeneracy constraints, or None.

    The two constraints sum E_k Delta_k = 0 define a null space whose
    intersection with the open positive orthant is tested exactly: a line in
    the generic rank-two case, a plane (checked through its angular cone)
    at rank one, and the whole space at rank zero.  Solutions are normalized
    to max E = 1; components below ``floor`` times the maximum count as
    removing a junction and are rejected.
    """
    space = space or FockSpace((safe_dim(alpha),))
    deltas = [degeneracy_deltas(phi, alpha, space) for phi in triple_phis]
    a_mat = np.array(deltas).T  # rows: the two constraints
    phis = tuple(float(p) for p in triple_phis)
    return _solve_from_matrix(a_mat, phis, floor)


def verify_degeneracy(
    triple: JunctionTriple, alpha: float, space: FockSpace | None = None
) -> tuple[float, float]:
    """Re-project the summed Hamiltonian; returns (delta_parity, small_delta_parity)."""
    space = space or FockSpace((safe_dim(alpha),))
    junctions = list(zip(triple.e_js, triple.phis))
    h = h_rwa_multi_junction(junctions, space)
    c = project(h, cat_basis(space, alpha, 4)).diagonal()
    delta = math.hypot(c[0] - c[1], c[2] - c[3])
    small = math.hypot(c[0] - c[2], c[1] - c[3])
    return delta, small


def feasibility_scan(
    alpha: float,
    phi1: float,
    grid2: np.ndarray,
    grid3: np.ndarray,
    floor: float = POSITIVITY_FLOOR,
) -> SweepResult:
    """Feasibility map over (phi_2, phi_3) with one verified solution per point.

    Every feasible triple is re-projected through the full multi-junction
    Hamiltonian and must pass small_delta <= 1e-8 * delta_parity; the count
    of verification failures lands in the metadata (expected zero).
    """
    grid2 = np.asarray(grid2, dtype=float)
    grid3 = np.asarray(grid3, dtype=float)
    space = FockSpace((safe_dim(alpha),))
    delta_cache: dict[float, tuple[float, float]] = {}

    def deltas(phi: float) -> tuple[float, float]:
        if phi not in delta_cache:
            delta_cache[phi] = degeneracy_deltas(phi, alpha, space)
        return delta_cache[phi]

    rows = []
    n_feasible = 0
    n_failed_verify = 0
    for phi2 in grid2:
        for phi3 in grid3:
            phis = (phi1, float(phi2), float(phi3))
            a_mat = np.array([deltas(p) for p in phis]).T
            triple = _solve_from_matrix(a_mat, phis, floor)
            if triple is None:
                rows.append((phi1, phi2, phi3, 0, math.nan, math.nan, math.nan, math.nan))
                continue
            n_feasible += 1
            delta, small = verify_degeneracy(triple, alpha, space)
            ok = small <= REPROJECTION_TOL * delta
            if not ok:
                n_failed_verify += 1
            e1, e2, e3 = triple.e_js
            rows.append((phi1, phi2, phi3, 1, e1, e2, e3, small / delta if delta > 0 else math.inf))
    meta = {
        "alpha": alpha,
        "phi1": phi1,
        "n_points": len(rows),
        "n_feasible": n_feasible,
        "feasible_fraction": n_feasible / len(rows),
        "n_failed_verification": n_failed_verify,
        "positivity_floor": floor,
        "dim": space.dim,
    }
    return SweepResult(
        ["phi1", "phi2", "phi3", "feasible", "e_j1", "e_j2", "e_j3", "delta_ratio"],
        rows,
        meta,
    )


def _solve_from_matrix(
    a_mat: np.ndarray, phis: tuple[float, float, float], floor: float
) -> JunctionTriple | None:
    """Positive null-space ray of the 2 x 3 constraint matrix, or None.

    Rank two leaves a line (the cross product of the rows); rank one a
    plane, where the positive-orthant test reduces to whether the three row
    directions of the null basis fit in an open half plane.
    """
    if np.max(np.abs(a_mat)) == 0.0:
        return JunctionTriple(phis, (1.0, 1.0, 1.0))
    svals = np.linalg.svd(a_mat, compute_uv=False)
    rank = int(np.sum(svals > 1e-12 * svals[0]))
    if rank == 0:
        return JunctionTriple(phis, (1.0, 1.0, 1.0))
    if rank == 2:
        v = np.cross(a_mat[0], a_mat[1])
        sol = _positive_ray(v, floor)
        return JunctionTriple(phis, sol) if sol is not None else None
    # rank 1: need x in the plane spanned by the null basis with N x > 0
    _, _, vt = np.linalg.svd(a_mat)
    null_basis = vt[1:].T  # (3, 2)
    angles = np.sort(np.arctan2(null_basis[:, 1], null_basis[:, 0]))
    gaps = np.diff(np.concatenate([angles, [angles[0] + 2 * math.pi]]))
    widest = int(np.argmax(gaps))
    if gaps[widest] <= math.pi:
        return None
    # feasible directions sit opposite the widest angular gap
    mid = angles[widest] + 0.5 * gaps[widest] + math.pi
    d = np.array([math.cos(mid), math.sin(mid)])
    sol = _positive_ray(null_basis @ d, floor)
    return JunctionTriple(phis, sol) if sol is not None else None
