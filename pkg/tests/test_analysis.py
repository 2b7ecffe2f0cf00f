"""Verification rows, truncation-aware diagnostics, and the exploration battery."""

import json

import numpy as np
import pytest

import fourlab as fl


class TestVerifySymmetry:
    def test_canonical_operator_residuals_are_exactly_zero(self):
        report = fl.verify_symmetry(fl.fourier_operator(128))
        assert report.passed
        assert [r.name for r in report.rows] == [
            "unitarity",
            "square_is_parity",
            "period_four",
            "eigenvalues_quartic",
            "inverse_is_cube",
        ]
        for row in report.rows:
            assert row.residual == 0.0

    def test_alternative_operators_pass(self):
        for seed in (1, 5, 11):
            k = fl.k_operator(fl.make_regrouping_plan(64, seed))
            assert fl.verify_symmetry(k).passed

    def test_generic_fractional_angle_fails_parity_square(self):
        report = fl.verify_symmetry(fl.fractional_operator(32, np.pi / 3))
        assert report.row("unitarity").passed
        assert not report.row("square_is_parity").passed
        assert not report.row("eigenvalues_quartic").passed
        assert not report.passed

    def test_tolerance_override(self):
        report = fl.verify_symmetry(fl.fourier_operator(16), {"unitarity": 1e-30})
        assert report.row("unitarity").tolerance == 1e-30
        assert report.passed  # residual is exactly zero, so even 1e-30 passes
        with pytest.raises(KeyError):
            fl.verify_symmetry(fl.fourier_operator(16), {"not_a_check": 1e-3})

    def test_pass_iff_residual_within_tolerance(self):
        row = fl.CheckRow("x", residual=2e-10, tolerance=1e-10)
        assert not row.passed
        assert fl.CheckRow("x", 1e-10, 1e-10).passed

    def test_dense_operator_from_kernel_verifies(self):
        # an operator rebuilt from its exact kernel is only float-close, so
        # the report machinery actually measures something here
        basis = fl.basis_matrix(fl.BasisSpec(48, 96))
        op = fl.operator_from_kernel(fl.exact_fourier_kernel(basis.grid), basis)
        report = fl.verify_symmetry(op, {name: 1e-8 for name in
                                         ("unitarity", "square_is_parity", "period_four",
                                          "eigenvalues_quartic", "inverse_is_cube")})
        assert report.passed
        assert report.row("unitarity").residual > 0.0


class TestCommutator:
    def test_position_momentum_interior(self):
        res = fl.commutator_residual(fl.position_operator(128), fl.momentum_operator(128))
        assert res.residual_interior <= 1e-10
        # truncation corrupts exactly the last diagonal entry, by i*dim
        assert res.residual_full == pytest.approx(128.0, abs=1e-9)

    def test_commuting_pair(self):
        x = fl.position_operator(32)
        res = fl.commutator_residual(x, x)
        # [X, X] = 0, so the deviation from i*identity is exactly 1
        assert res.residual_interior == 1.0
        assert res.residual_full == 1.0

    def test_interior_bounds(self):
        x = fl.position_operator(16)
        with pytest.raises(fl.RangeError):
            fl.commutator_residual(x, x, interior=17)
        with pytest.raises(fl.DimensionError):
            fl.commutator_residual(x, fl.position_operator(8))


class TestTranslation:
    def test_zero_step_is_exact(self):
        t = fl.translation_check(64, 0.0)
        assert t.residual_interior == 0.0 and t.residual_full == 0.0

    def test_small_step_interior(self):
        t = fl.translation_check(128, 0.1, interior=64)
        assert t.guard_band == 52
        assert t.residual_interior <= 1e-6
        assert t.residual_full > 1.0  # the edge is genuinely corrupted

    def test_translated_ground_state_mean(self):
        # independent physics oracle: exp(-i a P) shifts <X> by +a
        dim, a = 64, 0.1
        p = fl.momentum_operator(dim)
        lam, vec = np.linalg.eigh(p.values)
        u = (vec * np.exp(-1j * a * lam)) @ vec.conj().T
        shifted = fl.StateVector(u @ fl.basis_state(0, dim).coeffs)
        mean, _ = fl.moments(fl.position_operator(dim), shifted)
        assert mean == pytest.approx(a, abs=1e-12)

    def test_interior_must_respect_guard_band(self):
        with pytest.raises(fl.RangeError, match="guard"):
            fl.translation_check(128, 0.1, interior=100)

    def test_larger_basis_shrinks_interior_residual(self):
        small = fl.translation_check(64, 0.05, interior=32)
        large = fl.translation_check(256, 0.05, interior=32)
        assert large.residual_interior <= small.residual_interior


class TestUncertainty:
    def test_ground_state_saturates(self):
        rows = fl.uncertainty_scan(fl.fourier_operator(64), [fl.basis_state(0, 64)])
        r = rows[0]
        assert r.product == pytest.approx(0.5, abs=1e-12)
        assert r.bound == pytest.approx(0.5, abs=1e-12)
        assert r.margin >= -1e-12

    def test_identity_transform_gives_position_variance(self):
        ident = fl.OperatorMatrix(np.eye(16, dtype=complex), label="identity",
                                  unitary=True, hermitian=True, diagonal=True)
        rows = fl.uncertainty_scan(ident, [fl.basis_state(1, 16)])
        r = rows[0]
        assert r.delta_p == pytest.approx(r.delta_x, rel=1e-12)
        assert r.product == pytest.approx(1.5, rel=1e-12)  # var X in the n=1 state
        assert r.bound == pytest.approx(0.0, abs=1e-12)  # [X, X] = 0

    def test_robertson_bound_respected_on_random_states(self):
        states = fl.random_interior_states(50, 64, seed=7)
        for op in (fl.fourier_operator(64),
                   fl.k_operator(fl.make_regrouping_plan(64, 7))):
            rows = fl.uncertainty_scan(op, states)
            assert min(r.margin for r in rows) >= -1e-9

    def test_random_interior_states_shape(self):
        states = fl.random_interior_states(3, 32, seed=0, edge=8)
        again = fl.random_interior_states(3, 32, seed=0, edge=8)
        for s, t in zip(states, again):
            assert np.array_equal(s.coeffs, t.coeffs)
            assert np.all(s.coeffs[-8:] == 0.0)
            assert abs(np.linalg.norm(s.coeffs) - 1) <= 1e-12


class TestUnbiasedness:
    def test_canonical_kernel_flatness_level(self):
        basis = fl.basis_matrix(fl.BasisSpec(128, 256))
        scan = fl.unbiasedness_scan(fl.fourier_operator(128), basis, 3.0)
        # the truncated kernel is flat only to O(dim^-1/2); pin the measured level
        assert 0.02 <= scan.max_dev <= 0.08
        assert scan.rms_dev < scan.max_dev
        assert scan.node_count > 0

    def test_flatness_improves_with_dimension(self):
        devs = []
        for n in (32, 64, 128):
            basis = fl.basis_matrix(fl.BasisSpec(n, 2 * n))
            devs.append(fl.unbiasedness_scan(fl.fourier_operator(n), basis, 3.0).max_dev)
        assert devs[0] > devs[1] > devs[2]

    def test_identity_is_wildly_biased(self):
        basis = fl.basis_matrix(fl.BasisSpec(64, 128))
        ident = fl.OperatorMatrix(np.eye(64, dtype=complex), label="identity",
                                  unitary=True, hermitian=True, diagonal=True)
        assert fl.unbiasedness_scan(ident, basis, 3.0).max_dev > 1.0

    def test_window_must_be_reliable(self):
        basis = fl.basis_matrix(fl.BasisSpec(16, 32))
        assert fl.reliable_window(16) == pytest.approx(0.7 * np.sqrt(32.0))
        with pytest.raises(fl.RangeError, match="reliable"):
            fl.unbiasedness_scan(fl.fourier_operator(16), basis, 5.0)
        with pytest.raises(fl.RangeError):
            fl.unbiasedness_scan(fl.fourier_operator(16), basis, -1.0)


class TestPauliReport:
    def setup_method(self):
        self.basis = fl.basis_matrix(fl.BasisSpec(32, 64))

    def test_quarter_phase_family_sees_nothing(self):
        f, fbar = fl.pauli_pair(np.pi / 2, 32)
        ops = [fl.fourier_operator(32),
               fl.k_operator(fl.make_regrouping_plan(32, 7))]
        rep = fl.pauli_report(f, fbar, ops, self.basis, np.pi / 2)
        assert abs(rep.overlap) <= 1e-12
        assert rep.state_distance == pytest.approx(np.sqrt(2.0), rel=1e-12)
        assert rep.position_distance <= 1e-13
        for row in rep.rows:
            assert row.weight_distance <= 1e-13

    def test_identical_states_give_zero_everywhere(self):
        f, _ = fl.pauli_pair(0.4, 32)
        rep = fl.pauli_report(f, f, [fl.fourier_operator(32)], self.basis, 0.4)
        # sqrt(2 - 2|<f,f>|) amplifies one ulp of inner-product noise to ~1e-8
        assert rep.state_distance <= 1e-7
        assert rep.position_distance == 0.0
        assert rep.rows[0].weight_distance == 0.0


class TestExplore:
    def test_canonical_run_passes_checks(self):
        basis = fl.basis_matrix(fl.BasisSpec(64, 128))
        rep = fl.explore(fl.fourier_operator(64), basis, seed=7, state_count=20)
        assert rep.passed
        assert {c.name for c in rep.checks} == {
            "commutator_interior", "translation_interior", "robertson_margin"}
        assert set(rep.sections) == {
            "symmetry", "commutator", "translation", "uncertainty", "kernel"}

    def test_alternative_run_records_ratio_without_checks(self):
        basis = fl.basis_matrix(fl.BasisSpec(64, 128))
        k = fl.k_operator(fl.make_regrouping_plan(64, 7))
        rep = fl.explore(k, basis, seed=7, state_count=20)
        assert rep.checks == ()
        assert rep.passed  # nothing to fail: observational only
        assert rep.sections["kernel"]["ratio_vs_fourier"] > 1.0

    def test_deterministic(self):
        basis = fl.basis_matrix(fl.BasisSpec(64, 128))
        a = fl.explore(fl.fourier_operator(64), basis, seed=3, state_count=10)
        b = fl.explore(fl.fourier_operator(64), basis, seed=3, state_count=10)
        assert json.dumps(a.as_dict(), sort_keys=True) == json.dumps(b.as_dict(), sort_keys=True)

    def test_tolerance_override_can_fail_a_check(self):
        basis = fl.basis_matrix(fl.BasisSpec(64, 128))
        rep = fl.explore(fl.fourier_operator(64), basis, seed=3, state_count=10,
                         tolerances={"commutator_interior": 1e-30})
        assert not rep.passed
        with pytest.raises(KeyError):
            fl.explore(fl.fourier_operator(64), basis, tolerances={"bogus": 1.0})
