import math

import numpy as np
import pytest

from qinv.algebra import AlgebraKind, su11_boson_generators, su2_generators
from qinv.errors import (
    BrokenRegimeError,
    NormRangeError,
    SingularConditionError,
)
from qinv.invariant import (
    auxiliary_residual,
    build_frame,
    build_invariant,
    build_metric,
    build_R,
    build_R_inverse,
    check_invariant_equation,
    check_pseudo_hermiticity,
    closed_form_invariant,
    guarded_indices,
    invariant_eigenframe,
    similarity_identities_residual,
    solve_epsilon,
    structure_coefficients,
)
from qinv.matkit import adjoint, herm_eig, max_abs
from qinv.model import ModelParams
from qinv.tolerances import TOL

EPS_SU2_REF = math.atanh(-1.0 / 3.0)   # Omega=1, G=0.25, omega=0.5
EPS_SU11_REF = math.atan(-1.0 / 3.0)


class TestSolveEpsilon:
    def test_decoupled(self, ref_params):
        p = ModelParams(1.0, 0.0, 0.5)
        assert solve_epsilon(AlgebraKind.SU2, p) == 0.0
        assert solve_epsilon(AlgebraKind.SU11, p) == 0.0

    def test_su2_closed_form_and_substitution(self, ref_params):
        eps = solve_epsilon(AlgebraKind.SU2, ref_params)
        assert eps == pytest.approx(EPS_SU2_REF, rel=1e-15)
        assert auxiliary_residual(AlgebraKind.SU2, ref_params, eps) <= TOL.aux_condition

    def test_su11_closed_form_and_substitution(self, ref_params):
        eps = solve_epsilon(AlgebraKind.SU11, ref_params)
        assert eps == pytest.approx(EPS_SU11_REF, rel=1e-15)
        assert auxiliary_residual(AlgebraKind.SU11, ref_params, eps) <= TOL.aux_condition

    def test_negative_frequency_sum(self):
        p = ModelParams(-2.0, 0.25, 0.5)  # omega + Omega = -1.5
        eps = solve_epsilon(AlgebraKind.SU2, p)
        assert eps == pytest.approx(math.atanh(1.0 / 3.0), rel=1e-15)
        assert auxiliary_residual(AlgebraKind.SU2, p, eps) <= TOL.aux_condition

    def test_broken_regime_reports_ratio(self):
        with pytest.raises(BrokenRegimeError, match="1.33333"):
            solve_epsilon(AlgebraKind.SU2, ModelParams(1.0, 1.0, 0.5))

    def test_boundary_counts_as_broken(self):
        with pytest.raises(BrokenRegimeError):
            solve_epsilon(AlgebraKind.SU2, ModelParams(1.0, 0.75, 0.5))

    def test_su11_never_breaks(self):
        eps = solve_epsilon(AlgebraKind.SU11, ModelParams(1.0, 50.0, 0.5))
        assert abs(eps) < math.pi / 2

    def test_singular_condition(self):
        with pytest.raises(SingularConditionError):
            solve_epsilon(AlgebraKind.SU2, ModelParams(-0.5, 0.25, 0.5))
        # G = 0 rescues the degenerate frequency sum
        assert solve_epsilon(AlgebraKind.SU2, ModelParams(-0.5, 0.0, 0.5)) == 0.0


class TestBuildR:
    def test_zero_epsilon_is_identity(self, su2_half, ref_params):
        assert max_abs(build_R(su2_half, ref_params, 0.0, 1.3) - np.eye(2)) == 0.0

    def test_spin_half_series_oracle(self, su2_half, ref_params):
        # M = K+ e^{i phi} + K- e^{-i phi} squares to 1, so
        # R = cosh(eps/2) 1 + sinh(eps/2) M
        t, eps = 0.9, EPS_SU2_REF
        ph = np.exp(1j * ref_params.phi(t))
        m = su2_half.kplus * ph + su2_half.kminus * np.conj(ph)
        assert max_abs(m @ m - np.eye(2)) <= 1e-15
        expected = math.cosh(eps / 2) * np.eye(2) + math.sinh(eps / 2) * m
        assert max_abs(build_R(su2_half, ref_params, eps, t) - expected) <= 1e-12

    def test_hermitian(self, su11_48, ref_params):
        r = build_R(su11_48, ref_params, EPS_SU11_REF, 0.7)
        assert max_abs(r - adjoint(r)) <= TOL.r_hermitian

    @pytest.mark.parametrize("algebra", ["su2", "su11"])
    def test_inverse_roundtrip(self, algebra, su2_half, su11_48, ref_params):
        rep = su2_half if algebra == "su2" else su11_48
        eps = solve_epsilon(rep.kind, ref_params)
        r = build_R(rep, ref_params, eps, 2.2)
        r_inv = build_R_inverse(rep, ref_params, eps, 2.2)
        assert max_abs(r @ r_inv - np.eye(rep.dim)) <= TOL.r_inverse

    def test_inverse_is_negated_epsilon(self, su11_48, ref_params):
        a = build_R_inverse(su11_48, ref_params, EPS_SU11_REF, 0.4)
        b = build_R(su11_48, ref_params, -EPS_SU11_REF, 0.4)
        assert max_abs(a - b) <= TOL.r_inverse

    def test_norm_range_guard(self):
        rep = su11_boson_generators(256)
        p = ModelParams(1.0, 0.45, 0.5)
        eps = solve_epsilon(rep.kind, p)
        with pytest.raises(NormRangeError):
            build_R(rep, p, eps, 0.0)


class TestInvariant:
    def test_zero_epsilon_gives_k0(self, su2_half, ref_params):
        assert max_abs(build_invariant(su2_half, ref_params, 0.0, 0.8) - su2_half.k0) == 0.0

    def test_spin_half_closed_form_oracle(self, su2_half, ref_params):
        # I = K0 cosh(eps) - sinh(eps)/2 (K+ e^{i phi} - K- e^{-i phi}),
        # assembled here from scratch
        t, eps = 0.0, EPS_SU2_REF
        i_mat = build_invariant(su2_half, ref_params, eps, t)
        expected = math.cosh(eps) * su2_half.k0 - 0.5 * math.sinh(eps) * (
            su2_half.kplus - su2_half.kminus
        )
        assert max_abs(i_mat - expected) <= 1e-12

    def test_su11_interior_consistency(self, su11_48, ref_params):
        t, eps = 0.7, EPS_SU11_REF
        i_mat = build_invariant(su11_48, ref_params, eps, t)  # also checks internally
        closed = closed_form_invariant(su11_48, ref_params, eps, t)
        g = guarded_indices(su11_48, build_R(su11_48, ref_params, eps, t))
        assert max_abs((i_mat - closed)[np.ix_(g, g)]) <= TOL.invariant_consistency

    def test_invariant_is_non_hermitian_with_real_spectrum(self, su2_half, ref_params):
        i_mat = build_invariant(su2_half, ref_params, EPS_SU2_REF, 0.3)
        assert max_abs(i_mat - adjoint(i_mat)) > 1e-3
        frame = invariant_eigenframe(su2_half, ref_params, EPS_SU2_REF, 0.3)
        assert np.allclose(sorted(frame.lambdas), [-0.5, 0.5], atol=0)


class TestMetric:
    def test_zero_epsilon(self, su2_half, ref_params):
        assert max_abs(build_metric(su2_half, ref_params, 0.0, 0.2) - np.eye(2)) == 0.0

    def test_positive_definite(self, su11_48, ref_params):
        eta = build_metric(su11_48, ref_params, EPS_SU11_REF, 0.7)
        w, _ = herm_eig(eta)
        assert w[0] > 0.0

    def test_positive_definite_su2(self, ref_params):
        rep = su2_generators(1.0)
        eta = build_metric(rep, ref_params, EPS_SU2_REF, 0.0)
        w, _ = herm_eig(eta)
        assert w[0] > 0.0

    def test_eta_r_squared_identity(self, su2_half, ref_params):
        eps, t = EPS_SU2_REF, 1.5
        eta = build_metric(su2_half, ref_params, eps, t)
        r = build_R(su2_half, ref_params, eps, t)
        assert max_abs(eta @ r @ r - np.eye(2)) <= 1e-10


class TestFrame:
    def test_alpha_parametrization(self, su2_half, su11_48, ref_params):
        f2 = build_frame(su2_half, ref_params, 0.0)
        assert f2.alpha == complex(EPS_SU2_REF)
        f1 = build_frame(su11_48, ref_params, 0.0)
        assert f1.alpha == 1j * EPS_SU11_REF
        assert f2.branch == f1.branch == "principal"

    def test_pseudo_hermiticity_zero_eps(self, su2_half):
        p = ModelParams(1.0, 0.0, 0.5)
        frame = build_frame(su2_half, p, 0.0)
        rpt = check_pseudo_hermiticity(su2_half, frame)
        assert rpt.pseudo_residual == 0.0
        assert rpt.dyson_residual == 0.0

    def test_pseudo_hermiticity_su2(self, ref_params):
        rep = su2_generators(1.5)
        frame = build_frame(rep, ref_params, 1.1)
        rpt = check_pseudo_hermiticity(rep, frame)
        assert rpt.pseudo_residual <= TOL.pseudo_hermiticity
        assert rpt.dyson_residual <= TOL.dyson_reduction

    def test_pseudo_hermiticity_su11_interior(self, su11_48, ref_params):
        frame = build_frame(su11_48, ref_params, 0.7)
        rpt = check_pseudo_hermiticity(su11_48, frame)
        assert rpt.pseudo_residual <= TOL.pseudo_hermiticity
        assert rpt.dyson_residual <= TOL.dyson_reduction
        # metric conjugation needs a deeper interior than the frame guard
        assert len(rpt.pseudo_interior) < len(rpt.dyson_interior)


class TestInvariantEquation:
    def test_decoupled_is_exact(self, su2_half):
        p = ModelParams(1.0, 0.0, 0.5)
        rpt = check_invariant_equation(su2_half, p, 0.0, 0.9, 1e-5)
        assert rpt.residual <= 1e-12

    def test_su2_reference(self, su2_half, ref_params):
        rpt = check_invariant_equation(su2_half, ref_params, EPS_SU2_REF, 0.7, 1e-5)
        assert rpt.residual <= TOL.invariant_equation

    def test_second_order_convergence(self, su2_half, ref_params):
        r1 = check_invariant_equation(su2_half, ref_params, EPS_SU2_REF, 0.7, 1e-3)
        r2 = check_invariant_equation(su2_half, ref_params, EPS_SU2_REF, 0.7, 5e-4)
        assert 3.2 <= r1.residual / r2.residual <= 4.8
        assert r1.c_estimate == pytest.approx(r1.residual / 1e-6, rel=1e-12)

    def test_su11_guarded(self, su11_48, ref_params):
        rpt = check_invariant_equation(su11_48, ref_params, EPS_SU11_REF, 0.7, 5e-4)
        assert rpt.residual <= TOL.invariant_equation

    def test_h_domain(self, su2_half, ref_params):
        with pytest.raises(ValueError):
            check_invariant_equation(su2_half, ref_params, EPS_SU2_REF, 0.7, 1e-2)


class TestSimilarityIdentities:
    def test_zero_epsilon_trivial(self, su2_half, ref_params):
        res = similarity_identities_residual(su2_half, ref_params, 0.0, 0.8)
        assert res.max() <= 1e-12

    def test_su2(self, ref_params):
        rep = su2_generators(1.0)
        for t in (0.0, 0.7, 2.5):
            res = similarity_identities_residual(rep, ref_params, EPS_SU2_REF, t)
            assert res.max() <= 1e-9

    def test_su11_interior(self, su11_48, ref_params):
        for t in (0.0, 0.7, 2.5):
            res = similarity_identities_residual(su11_48, ref_params, EPS_SU11_REF, t)
            assert res.max() <= TOL.similarity


class TestEigenframe:
    def test_zero_epsilon_coordinate_basis(self, su2_half, ref_params):
        frame = invariant_eigenframe(su2_half, ref_params, 0.0, 0.4)
        assert np.array_equal(frame.states, np.eye(2))
        assert np.array_equal(frame.lambdas, [0.5, -0.5])
        assert frame.excluded == ()

    def test_su2_reference(self, su2_half, ref_params):
        frame = invariant_eigenframe(su2_half, ref_params, EPS_SU2_REF, 0.9)
        assert frame.gram_residual <= 1e-10
        assert frame.eigen_residuals.max() <= TOL.eigen_residual
        assert np.array_equal(frame.lambdas, [0.5, -0.5])

    def test_su11_guard_and_residuals(self, su11_48, ref_params):
        frame = invariant_eigenframe(su11_48, ref_params, EPS_SU11_REF, 0.7)
        assert frame.lambdas[0] == pytest.approx(0.25, abs=0)
        assert frame.eigen_residuals.max() <= TOL.eigen_residual
        assert frame.gram_residual <= TOL.gram
        assert len(frame.excluded) > 0          # boundary states rejected
        assert min(frame.excluded) > max(frame.indices)

    def test_metric_transport(self, su11_48, ref_params):
        # eta-orthonormality holds at every sampled time, not just t = 0
        for t in (0.0, 1.7, 4.1):
            frame = invariant_eigenframe(su11_48, ref_params, EPS_SU11_REF, t)
            assert frame.gram_residual <= TOL.gram

    def test_dyson_reduction_values(self, su11_48, ref_params):
        # R^{-1} I R restores K0 on the guarded interior
        eps, t = EPS_SU11_REF, 1.3
        r = build_R(su11_48, ref_params, eps, t)
        r_inv = build_R_inverse(su11_48, ref_params, eps, t)
        i_mat = build_invariant(su11_48, ref_params, eps, t)
        g = guarded_indices(su11_48, r)
        gi = np.ix_(g, g)
        assert max_abs((r_inv @ i_mat @ r - su11_48.k0)[gi]) <= TOL.dyson_reduction


class TestStructureCoefficients:
    def test_su2_hyperbolic(self):
        sc = structure_coefficients(AlgebraKind.SU2, 0.7)
        assert sc.cosh_alpha == pytest.approx(math.cosh(0.7), rel=1e-15)
        assert sc.sqrt_d_sinh == pytest.approx(math.sinh(0.7), rel=1e-15)
        assert sc.sinh_sq_half == pytest.approx(math.sinh(0.35) ** 2, rel=1e-12)

    def test_su11_trigonometric(self):
        sc = structure_coefficients(AlgebraKind.SU11, 0.7)
        assert sc.cosh_alpha == pytest.approx(math.cos(0.7), rel=1e-15)
        assert sc.sqrt_d_sinh == pytest.approx(-math.sin(0.7), rel=1e-15)
        # sinh^2(alpha/2) = -sin^2(eps/2) for imaginary alpha
        assert sc.sinh_sq_half == pytest.approx(-math.sin(0.35) ** 2, rel=1e-12)
