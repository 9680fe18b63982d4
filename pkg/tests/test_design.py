import math

import numpy as np
import pytest

from catparity import design
from catparity.fock import FockSpace, safe_dim


class TestDeltas:
    def test_shrink_with_amplitude(self):
        d2 = design.degeneracy_deltas(4.0, 2.0)
        d4 = design.degeneracy_deltas(8.0, 4.0)
        assert math.hypot(*d4) < 0.2 * math.hypot(*d2)

    def test_nonzero_at_small_alpha(self):
        d02, d31 = design.degeneracy_deltas(4.0, 2.0)
        assert math.hypot(d02, d31) > 1e-4


class TestSolver:
    def test_zero_matrix_allows_anything(self):
        triple = design._solve_from_matrix(np.zeros((2, 3)), (1.0, 2.0, 3.0), 1e-6)
        assert triple.e_js == (1.0, 1.0, 1.0)

    def test_identical_nonzero_columns_infeasible(self):
        col = np.array([0.3, -0.2])
        a = np.stack([col, col, col]).T
        assert design._solve_from_matrix(a, (1.0, 1.0, 1.0), 1e-6) is None

    def test_rank_one_feasible_plane(self):
        # one constraint 2 e1 - e2 - e3 = 0 has plenty of positive solutions
        a = np.array([[2.0, -1.0, -1.0], [4.0, -2.0, -2.0]])
        triple = design._solve_from_matrix(a, (1.0, 1.0, 1.0), 1e-6)
        assert triple is not None
        e = np.array(triple.e_js)
        assert np.max(np.abs(a @ e)) <= 1e-9
        assert e.min() >= 1e-6 and e.max() == pytest.approx(1.0)

    def test_generic_solution_annihilates_constraints(self):
        triple = design.solve_positive_energies((4.0, 2.6, 5.2), 2.0)
        assert triple is not None
        space = FockSpace((safe_dim(2.0),))
        a = np.array([design.degeneracy_deltas(p, 2.0, space) for p in triple.phis]).T
        resid = np.abs(a @ np.array(triple.e_js))
        assert np.max(resid) <= 1e-10 * np.max(np.abs(a))
        assert max(triple.e_js) == pytest.approx(1.0)
        assert min(triple.e_js) >= design.POSITIVITY_FLOOR

    def test_permutation_symmetry(self):
        phis = (4.0, 2.6, 5.2)
        base = design.solve_positive_energies(phis, 2.0)
        perm = design.solve_positive_energies((phis[1], phis[2], phis[0]), 2.0)
        assert base is not None and perm is not None
        reordered = (base.e_js[1], base.e_js[2], base.e_js[0])
        np.testing.assert_allclose(perm.e_js, reordered, rtol=1e-9)

    def test_reprojection_degeneracy(self):
        triple = design.solve_positive_energies((4.0, 2.6, 5.2), 2.0)
        delta, small = design.verify_degeneracy(triple, 2.0)
        assert small <= design.REPROJECTION_TOL * delta

    def test_infeasible_detected(self):
        # one junction with repeated phi values: constraints conflict
        triple = design.solve_positive_energies((4.0, 4.0, 4.0), 2.0)
        assert triple is None


class TestScan:
    def test_small_scan_has_feasible_region(self):
        res = design.feasibility_scan(
            2.0, 4.0, np.linspace(1.0, 5.0, 9), np.linspace(1.0, 5.0, 9)
        )
        assert res.metadata["n_feasible"] > 0
        assert res.metadata["n_failed_verification"] == 0
        flags = res.column("feasible")
        assert set(np.unique(flags)) <= {0.0, 1.0}

    def test_grid_refinement_stability(self):
        coarse = design.feasibility_scan(
            2.0, 4.0, np.linspace(1.0, 5.0, 41), np.linspace(1.0, 5.0, 41)
        )
        fine = design.feasibility_scan(
            2.0, 4.0, np.linspace(1.0, 5.0, 81), np.linspace(1.0, 5.0, 81)
        )
        f_c = coarse.metadata["feasible_fraction"]
        f_f = fine.metadata["feasible_fraction"]
        assert abs(f_f - f_c) <= 0.05 * max(f_f, f_c)
